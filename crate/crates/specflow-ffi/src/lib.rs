//! C ABI for the specflow library.
//!
//! Objects cross the boundary as opaque handles that must be released with
//! their matching `_free` function. Every fallible call returns an
//! [`SfStatus`]; on failure a thread-local message is retrievable through
//! [`sf_last_error_message`]. Strings returned by `_to_json` functions are
//! owned by the caller and released with [`sf_string_free`].

use num_complex::Complex64;
use specflow::lift::{track_from_samples, ArgumentTrack, LiftError};
use specflow::linalg::CMat;
use specflow::matching::distance_d;
use specflow::mu::{loop_constancy_check, mu_integral, mu_invariant, MuInvariant};
use specflow::rigged::{counting_function, rho1, RiggedSet, Space};
use specflow::scatter::{lattice_green, xi_decompose, ScatterError, ScatteringModel};
use specflow::unispec::{spec, UnitaryTC, PATH_CLUSTER_TOL};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum SfStatus {
    SfOk = 0,
    SfNullPointer = 1,
    SfInvalidArgument = 2,
    SfSpaceMismatch = 3,
    SfTrackingFailure = 4,
    SfScatteringFailure = 5,
    SfInternalError = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn fail(status: SfStatus, message: &str) -> SfStatus {
    set_error(message);
    status
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Frees a string returned by one of the `_to_json` functions.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn sf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---------------------------------------------------------------------------
// Rigged sets

/// Opaque rigged multiset handle.
pub struct SfRiggedSet {
    inner: RiggedSet,
}

/// Parses a rigged set from its JSON form
/// `{"space":"circle"|"line","points":[{"x":..,"mult":..},..]}`.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sf_rigged_set_from_json(
    json: *const c_char,
    out: *mut *mut SfRiggedSet,
) -> SfStatus {
    if json.is_null() || out.is_null() {
        return fail(SfStatus::SfNullPointer, "null pointer argument");
    }
    let text = match CStr::from_ptr(json).to_str() {
        Ok(t) => t,
        Err(_) => return fail(SfStatus::SfInvalidArgument, "JSON is not valid UTF-8"),
    };
    match serde_json::from_str::<RiggedSet>(text) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(SfRiggedSet { inner }));
            SfStatus::SfOk
        }
        Err(e) => fail(SfStatus::SfInvalidArgument, &e.to_string()),
    }
}

/// Serializes a rigged set back to JSON; caller frees via `sf_string_free`.
/// Returns NULL on error.
///
/// # Safety
/// `set` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn sf_rigged_set_to_json(set: *const SfRiggedSet) -> *mut c_char {
    if set.is_null() {
        set_error("null pointer argument");
        return ptr::null_mut();
    }
    match serde_json::to_string(&(*set).inner) {
        Ok(s) => CString::new(s).map_or(ptr::null_mut(), CString::into_raw),
        Err(e) => {
            set_error(&e.to_string());
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `set` must be a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn sf_rigged_set_free(set: *mut SfRiggedSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Total multiplicity of the non-sticky part.
///
/// # Safety
/// `set` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sf_rigged_set_rank(set: *const SfRiggedSet, out: *mut u32) -> SfStatus {
    if set.is_null() || out.is_null() {
        return fail(SfStatus::SfNullPointer, "null pointer argument");
    }
    *out = (*set).inner.rank();
    SfStatus::SfOk
}

/// Optimal-matching distance between two rigged sets of the same space.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sf_distance(
    a: *const SfRiggedSet,
    b: *const SfRiggedSet,
    out_cost: *mut f64,
) -> SfStatus {
    if a.is_null() || b.is_null() || out_cost.is_null() {
        return fail(SfStatus::SfNullPointer, "null pointer argument");
    }
    match distance_d(&(*a).inner, &(*b).inner) {
        Ok(m) => {
            *out_cost = m.cost;
            SfStatus::SfOk
        }
        Err(e) => fail(SfStatus::SfSpaceMismatch, &e.to_string()),
    }
}

/// Quotient L1 distance between the counting functions of two circle sets.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sf_rho1(
    a: *const SfRiggedSet,
    b: *const SfRiggedSet,
    out: *mut f64,
) -> SfStatus {
    if a.is_null() || b.is_null() || out.is_null() {
        return fail(SfStatus::SfNullPointer, "null pointer argument");
    }
    let (sa, sb) = (&(*a).inner, &(*b).inner);
    if sa.space() != Space::Circle || sb.space() != Space::Circle {
        return fail(
            SfStatus::SfInvalidArgument,
            "counting functions need circle-space sets",
        );
    }
    let (value, _) = rho1(&counting_function(sa), &counting_function(sb));
    *out = value;
    SfStatus::SfOk
}

// ---------------------------------------------------------------------------
// Tracks and mu-invariants

/// Opaque handle to a lifted argument track.
pub struct SfTrack {
    inner: ArgumentTrack,
}

fn lift_status(e: &LiftError) -> SfStatus {
    match e {
        LiftError::NotIdentityStart(_) | LiftError::NotCircleSpace(_) => {
            SfStatus::SfInvalidArgument
        }
        _ => SfStatus::SfTrackingFailure,
    }
}

/// Tracks the spectra of pre-sampled unitary matrices along a parameter
/// grid. `matrices` holds `node_count` row-major `dim x dim` complex
/// matrices as interleaved re,im doubles (so `node_count * dim * dim * 2`
/// values in total). A `node_tol` of zero or below selects the default.
///
/// # Safety
/// `rs` must hold `node_count` doubles, `matrices` the count given above,
/// and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sf_track_unitary_path(
    dim: usize,
    node_count: usize,
    rs: *const f64,
    matrices: *const f64,
    node_tol: f64,
    out: *mut *mut SfTrack,
) -> SfStatus {
    if rs.is_null() || matrices.is_null() || out.is_null() {
        return fail(SfStatus::SfNullPointer, "null pointer argument");
    }
    if dim == 0 || node_count == 0 {
        return fail(SfStatus::SfInvalidArgument, "empty path");
    }
    let grid = std::slice::from_raw_parts(rs, node_count);
    let data = std::slice::from_raw_parts(matrices, node_count * dim * dim * 2);
    let mut sets = Vec::with_capacity(node_count);
    for k in 0..node_count {
        let base = k * dim * dim * 2;
        let m = CMat::from_fn(dim, dim, |i, j| {
            let off = base + (i * dim + j) * 2;
            Complex64::new(data[off], data[off + 1])
        });
        let u = match UnitaryTC::new(m) {
            Ok(u) => u,
            Err(e) => return fail(SfStatus::SfInvalidArgument, &e.to_string()),
        };
        match spec(&u, PATH_CLUSTER_TOL) {
            Ok(s) => sets.push(s),
            Err(e) => return fail(SfStatus::SfInternalError, &e.to_string()),
        }
    }
    let tol = if node_tol > 0.0 { node_tol } else { 1e-8 };
    match track_from_samples(grid, &sets, sets[0].is_empty(), tol) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(SfTrack { inner }));
            SfStatus::SfOk
        }
        Err(e) => fail(lift_status(&e), &e.to_string()),
    }
}

/// # Safety
/// `track` must be a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn sf_track_free(track: *mut SfTrack) {
    if !track.is_null() {
        drop(Box::from_raw(track));
    }
}

/// Number of tracked eigenvalue arguments.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sf_track_count(track: *const SfTrack, out: *mut usize) -> SfStatus {
    if track.is_null() || out.is_null() {
        return fail(SfStatus::SfNullPointer, "null pointer argument");
    }
    *out = (*track).inner.track_count();
    SfStatus::SfOk
}

/// Number of grid nodes.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sf_track_node_count(track: *const SfTrack, out: *mut usize) -> SfStatus {
    if track.is_null() || out.is_null() {
        return fail(SfStatus::SfNullPointer, "null pointer argument");
    }
    *out = (*track).inner.node_count();
    SfStatus::SfOk
}

/// Unwrapped argument of track `j` at node `k`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sf_track_theta(
    track: *const SfTrack,
    j: usize,
    k: usize,
    out: *mut f64,
) -> SfStatus {
    if track.is_null() || out.is_null() {
        return fail(SfStatus::SfNullPointer, "null pointer argument");
    }
    let t = &(*track).inner;
    if j >= t.track_count() || k >= t.node_count() {
        return fail(SfStatus::SfInvalidArgument, "index out of range");
    }
    *out = t.theta(j, k);
    SfStatus::SfOk
}

/// Sum of argument increments over the path (start-at-identity paths only).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sf_track_endpoint_sum(track: *const SfTrack, out: *mut f64) -> SfStatus {
    if track.is_null() || out.is_null() {
        return fail(SfStatus::SfNullPointer, "null pointer argument");
    }
    let t = &(*track).inner;
    if !t.start_at_identity() {
        return fail(
            SfStatus::SfInvalidArgument,
            "endpoint sum needs a start-at-identity path",
        );
    }
    *out = t.endpoint_sum();
    SfStatus::SfOk
}

/// Opaque handle to a mu-invariant step function.
pub struct SfMu {
    inner: MuInvariant,
}

/// The mu-invariant of a tracked path (start-at-identity paths only).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sf_mu_from_track(track: *const SfTrack, out: *mut *mut SfMu) -> SfStatus {
    if track.is_null() || out.is_null() {
        return fail(SfStatus::SfNullPointer, "null pointer argument");
    }
    let t = &(*track).inner;
    if !t.start_at_identity() {
        return fail(
            SfStatus::SfInvalidArgument,
            "mu-invariant needs a start-at-identity path",
        );
    }
    let inner = mu_invariant(t);
    *out = Box::into_raw(Box::new(SfMu { inner }));
    SfStatus::SfOk
}

/// # Safety
/// `mu` must be a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn sf_mu_free(mu: *mut SfMu) {
    if !mu.is_null() {
        drop(Box::from_raw(mu));
    }
}

/// Value at an angle in (0, 2pi); half-integers occur at jump angles.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sf_mu_eval(mu: *const SfMu, theta: f64, out: *mut f64) -> SfStatus {
    if mu.is_null() || out.is_null() {
        return fail(SfStatus::SfNullPointer, "null pointer argument");
    }
    if !(theta > 0.0 && theta < std::f64::consts::TAU) {
        return fail(SfStatus::SfInvalidArgument, "theta must lie in (0, 2pi)");
    }
    *out = (*mu).inner.eval(theta);
    SfStatus::SfOk
}

/// Exact integral over (0, 2pi).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sf_mu_integral(mu: *const SfMu, out: *mut f64) -> SfStatus {
    if mu.is_null() || out.is_null() {
        return fail(SfStatus::SfNullPointer, "null pointer argument");
    }
    *out = mu_integral(&(*mu).inner);
    SfStatus::SfOk
}

/// Winding number of a loop track (empty endpoint spectra).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sf_loop_winding(track: *const SfTrack, out: *mut i64) -> SfStatus {
    if track.is_null() || out.is_null() {
        return fail(SfStatus::SfNullPointer, "null pointer argument");
    }
    match loop_constancy_check(&(*track).inner) {
        Ok(w) => {
            *out = w;
            SfStatus::SfOk
        }
        Err(e) => fail(SfStatus::SfInvalidArgument, &e.to_string()),
    }
}

// ---------------------------------------------------------------------------
// Scattering

/// Resolvent kernel of the free lattice operator at `z = re + i im`.
///
/// # Safety
/// Output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sf_lattice_green(
    re: f64,
    im: f64,
    m: i64,
    n: i64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> SfStatus {
    if out_re.is_null() || out_im.is_null() {
        return fail(SfStatus::SfNullPointer, "null pointer argument");
    }
    match lattice_green(Complex64::new(re, im), m, n) {
        Ok(g) => {
            *out_re = g.re;
            *out_im = g.im;
            SfStatus::SfOk
        }
        Err(e) => fail(SfStatus::SfScatteringFailure, &e.to_string()),
    }
}

/// One row of the spectral shift decomposition.
#[repr(C)]
#[derive(Clone, Copy)]
pub struct SfXiRow {
    pub xi: f64,
    pub xi_ac: f64,
    pub xi_s: f64,
    pub mu_s: f64,
    pub bk_residual: f64,
    pub min_singval: f64,
}

/// Decomposes the spectral shift function at `(lambda, r)` for a lattice
/// model with `k` coupled sites. `j_matrix` holds the Hermitian coupling as
/// `k * k` interleaved re,im doubles, row-major.
///
/// # Safety
/// `sites` and `kappa` must hold `k` values, `j_matrix` `k * k * 2`
/// doubles, and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sf_xi_decompose(
    k: usize,
    sites: *const i64,
    kappa: *const f64,
    j_matrix: *const f64,
    lambda: f64,
    r: f64,
    out: *mut SfXiRow,
) -> SfStatus {
    if sites.is_null() || kappa.is_null() || j_matrix.is_null() || out.is_null() {
        return fail(SfStatus::SfNullPointer, "null pointer argument");
    }
    if k == 0 {
        return fail(SfStatus::SfInvalidArgument, "model needs at least one site");
    }
    let sites = std::slice::from_raw_parts(sites, k).to_vec();
    let kappa = std::slice::from_raw_parts(kappa, k).to_vec();
    let jdata = std::slice::from_raw_parts(j_matrix, k * k * 2);
    let j = CMat::from_fn(k, k, |i, jx| {
        let off = (i * k + jx) * 2;
        Complex64::new(jdata[off], jdata[off + 1])
    });
    let model = match ScatteringModel::new(sites, kappa, j) {
        Ok(m) => m,
        Err(e) => return fail(SfStatus::SfInvalidArgument, &e.to_string()),
    };
    match xi_decompose(&model, lambda, r, &Default::default()) {
        Ok(d) => {
            *out = SfXiRow {
                xi: d.xi,
                xi_ac: d.xi_ac,
                xi_s: d.xi_s,
                mu_s: d.mu_s_value,
                bk_residual: d.bk_residual,
                min_singval: d.min_singval,
            };
            SfStatus::SfOk
        }
        Err(e @ ScatterError::InvalidModel(_)) => fail(SfStatus::SfInvalidArgument, &e.to_string()),
        Err(e) => fail(SfStatus::SfScatteringFailure, &e.to_string()),
    }
}
