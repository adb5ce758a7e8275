//! Lattice scattering models and the spectral shift decomposition.
//!
//! The free operator is the 1-D discrete Laplacian `(H0 u)(n) = u(n+1) +
//! u(n-1)` on the doubly infinite lattice, whose resolvent kernel is known
//! in closed form. A model couples finitely many sites through positive
//! frame weights and a Hermitian coupling matrix `J`, scaled by a coupling
//! constant `r`. From the sampled matrix `T0(z)` the unitary `S~(z, r)` is
//! formed; tracking its spectrum down the imaginary axis gives the
//! mu-invariant, tracking along the coupling gives the absolutely
//! continuous part, and their difference exposes the integer-valued
//! singular part of the spectral shift function.

use crate::lift::{lift_path, ArgumentTrack, LiftError, LiftParams, SpectrumPath};
use crate::linalg::{self, CMat, LinalgError};
use crate::mu::{mu_integral, mu_invariant, MuError, MuInvariant};
use crate::rigged::RiggedSet;
use crate::unispec::{self, spec, trace_norm, UnispecError, UnitaryTC};
use num_complex::Complex64;
use std::f64::consts::TAU;
use thiserror::Error;

/// Couplings where `1 + T0 J_r` has a singular value below this are treated
/// as resonances.
pub const RESONANCE_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum ScatterError {
    #[error("branch of the lattice Green function fails at z = {re} + {im}i")]
    BranchFailure { re: f64, im: f64 },
    #[error("resonance at coupling r = {r} (min singular value {min_singval})")]
    ResonanceHit { r: f64, min_singval: f64 },
    #[error("resonance inside the coupling path at r = {r}")]
    ResonanceOnPath { r: f64 },
    #[error("imaginary part of T0 is not positive semidefinite (min eigenvalue {min_eig})")]
    ImPartNotPsd { min_eig: f64 },
    #[error("singular part of the mu-invariant varies with the angle (spread {spread}); tracking failed")]
    ThetaDependence { spread: f64 },
    #[error("xi decomposition is internally inconsistent: {0}")]
    TrackingInconsistency(String),
    #[error("invalid model: {0}")]
    InvalidModel(&'static str),
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error(transparent)]
    Unispec(#[from] UnispecError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Mu(#[from] MuError),
}

/// Closed-form resolvent kernel `G(z; m, n)` of the free lattice operator:
/// `zeta^{|m-n|} / (zeta - 1/zeta)` with `zeta + 1/zeta = z` and
/// `|zeta| < 1`. Real `z` strictly inside the band `(-2, 2)` means the
/// boundary value `z = lambda + i0`.
pub fn lattice_green(z: Complex64, m: i64, n: i64) -> Result<Complex64, ScatterError> {
    let zeta = small_root(z)?;
    let denom = zeta - 1.0 / zeta;
    Ok(zeta.powu((m - n).unsigned_abs() as u32) / denom)
}

/// The root of `zeta^2 - z zeta + 1 = 0` inside the unit disc; on the band
/// the limit from the upper half plane, `e^{-i arccos(lambda/2)}`.
fn small_root(z: Complex64) -> Result<Complex64, ScatterError> {
    if z.im < 0.0 {
        return Err(ScatterError::BranchFailure { re: z.re, im: z.im });
    }
    if z.im == 0.0 && z.re.abs() <= 2.0 {
        if z.re.abs() == 2.0 {
            // Band edge: the two roots collide on the unit circle.
            return Err(ScatterError::BranchFailure { re: z.re, im: z.im });
        }
        let kappa = (z.re / 2.0).acos();
        return Ok(Complex64::from_polar(1.0, -kappa));
    }
    let s = (z * z - 4.0).sqrt();
    let r1 = (z + s) / 2.0;
    let r2 = (z - s) / 2.0;
    // The roots multiply to 1; invert the large one for stability.
    let big = if r1.norm() >= r2.norm() { r1 } else { r2 };
    Ok(1.0 / big)
}

/// Independent oracle for [`lattice_green`]: solves `(H - z) x = e_m` on a
/// centered finite lattice of `size` sites by banded LU with partial
/// pivoting and reads off `x[n]`.
pub fn truncated_green_oracle(z: Complex64, m: i64, n: i64, size: usize) -> Complex64 {
    assert!(size % 2 == 1, "use an odd size so the lattice is centered");
    let half = (size / 2) as i64;
    assert!(m.unsigned_abs() < half as u64 && n.unsigned_abs() < half as u64);
    let idx = |site: i64| (site + half) as usize;

    // Tridiagonal system: sub/diag/super = 1, -z, 1. Partial pivoting can
    // swap adjacent rows, creating one extra superdiagonal of fill.
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut dl = vec![one; size]; // sub-diagonal, dl[i] couples row i to i-1
    let mut d = vec![-z; size];
    let mut du = vec![one; size]; // super-diagonal
    let mut du2 = vec![zero; size]; // second super-diagonal fill
    dl[0] = zero;
    du[size - 1] = zero;
    let mut b = vec![zero; size];
    b[idx(m)] = one;

    for i in 0..size - 1 {
        if dl[i + 1].norm() > d[i].norm() {
            // Swap rows i and i+1.
            std::mem::swap(&mut d[i], &mut dl[i + 1]);
            // After the swap the old row i holds (dl, d, du, du2) pattern.
            std::mem::swap(&mut du[i], &mut d[i + 1]);
            if i + 2 < size {
                du2[i] = du[i + 1];
                du[i + 1] = zero;
            }
            b.swap(i, i + 1);
        }
        let factor = dl[i + 1] / d[i];
        d[i + 1] -= factor * du[i];
        if i + 2 < size {
            du[i + 1] -= factor * du2[i];
        }
        let bi = b[i];
        b[i + 1] -= factor * bi;
    }

    let mut x = vec![zero; size];
    for i in (0..size).rev() {
        let mut acc = b[i];
        if i + 1 < size {
            acc -= du[i] * x[i + 1];
        }
        if i + 2 < size {
            acc -= du2[i] * x[i + 2];
        }
        x[i] = acc / d[i];
    }
    x[idx(n)]
}

/// Default energy grid: well inside the band, away from 0 and the edges
/// where branch handling degrades.
pub const DEFAULT_LAMBDA_GRID: [f64; 6] = [-1.5, -1.0, -0.5, 0.5, 1.0, 1.5];

/// Resolvent kernel provider of the free operator.
pub type GreenFn = dyn Fn(Complex64, i64, i64) -> Result<Complex64, ScatterError> + Send + Sync;

/// A finite-rank coupling on a lattice: sites, positive frame weights, a
/// Hermitian coupling matrix scaled by the coupling constant, and the free
/// operator's resolvent kernel (the 1-D lattice Laplacian by default).
#[derive(Clone)]
pub struct ScatteringModel {
    sites: Vec<i64>,
    kappa: Vec<f64>,
    j: CMat,
    green: std::sync::Arc<GreenFn>,
}

impl std::fmt::Debug for ScatteringModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScatteringModel")
            .field("sites", &self.sites)
            .field("kappa", &self.kappa)
            .field("j", &self.j)
            .finish_non_exhaustive()
    }
}

/// The matrix `T0(z)` with entries `kappa_i kappa_j G(z; n_i, n_j)`.
#[derive(Debug, Clone)]
pub struct T0Matrix {
    pub z: Complex64,
    pub m: CMat,
}

impl T0Matrix {
    /// `(M - M*)/2i`, positive semidefinite for admissible `z`.
    pub fn im_part(&self) -> CMat {
        self.m.imag_part()
    }
}

impl ScatteringModel {
    pub fn new(sites: Vec<i64>, kappa: Vec<f64>, j: CMat) -> Result<Self, ScatterError> {
        let k = sites.len();
        if k == 0 {
            return Err(ScatterError::InvalidModel("no coupled sites"));
        }
        if kappa.len() != k || j.nrows() != k || j.ncols() != k {
            return Err(ScatterError::InvalidModel(
                "sites, kappa and J sizes disagree",
            ));
        }
        if kappa.iter().any(|&x| !(x > 0.0)) {
            return Err(ScatterError::InvalidModel("frame weights must be positive"));
        }
        let mut sorted = sites.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != k {
            return Err(ScatterError::InvalidModel("sites must be distinct"));
        }
        if j.sub(&j.adjoint()).max_abs() > 1e-12 {
            return Err(ScatterError::InvalidModel("J must be Hermitian"));
        }
        Ok(ScatteringModel {
            sites,
            kappa,
            j,
            green: std::sync::Arc::new(lattice_green),
        })
    }

    /// Replaces the free operator's resolvent kernel.
    pub fn with_green(
        mut self,
        green: impl Fn(Complex64, i64, i64) -> Result<Complex64, ScatterError> + Send + Sync + 'static,
    ) -> Self {
        self.green = std::sync::Arc::new(green);
        self
    }

    /// Rank-one coupling at the origin with unit weight.
    pub fn rank_one_default() -> Self {
        let j = CMat::from_fn(1, 1, |_, _| Complex64::new(1.0, 0.0));
        ScatteringModel::new(vec![0], vec![1.0], j).unwrap()
    }

    /// Rank-two coupling on neighbouring sites with mixed-sign couplings.
    pub fn rank_two_default() -> Self {
        let rows = vec![
            vec![Complex64::new(0.6, 0.0), Complex64::new(0.25, 0.0)],
            vec![Complex64::new(0.25, 0.0), Complex64::new(-0.4, 0.0)],
        ];
        ScatteringModel::new(vec![0, 1], vec![1.0, 0.8], CMat::from_rows(rows)).unwrap()
    }

    pub fn rank(&self) -> usize {
        self.sites.len()
    }

    pub fn sites(&self) -> &[i64] {
        &self.sites
    }

    pub fn kappa(&self) -> &[f64] {
        &self.kappa
    }

    pub fn coupling(&self) -> &CMat {
        &self.j
    }

    /// `T0(z)` sampled through the frame; the PSD invariant of its
    /// imaginary part is enforced.
    pub fn t0(&self, z: Complex64) -> Result<T0Matrix, ScatterError> {
        let k = self.rank();
        let mut m = CMat::zeros(k, k);
        for i in 0..k {
            for jx in 0..k {
                let g = (self.green)(z, self.sites[i], self.sites[jx])?;
                m[(i, jx)] = g * (self.kappa[i] * self.kappa[jx]);
            }
        }
        let (eigs, _) = linalg::eig_hermitian(&m.imag_part())?;
        if let Some(&min_eig) = eigs.first() {
            if min_eig < -1e-10 {
                return Err(ScatterError::ImPartNotPsd { min_eig });
            }
        }
        Ok(T0Matrix { z, m })
    }

    /// Smallest singular value of `1 + T0(z) J r`.
    pub fn coupling_min_singval(&self, z: Complex64, r: f64) -> Result<f64, ScatterError> {
        let t0 = self.t0(z)?;
        let a = CMat::identity(self.rank()).add(&t0.m.mul(&self.j).scale(Complex64::new(r, 0.0)));
        Ok(linalg::min_singular_value(&a))
    }

    /// The unitary `S~(z, r) = 1 - 2i sqrt(Im T0) J_r (1 + T0 J_r)^{-1}
    /// sqrt(Im T0)`.
    pub fn tilde_s(&self, z: Complex64, r: f64) -> Result<UnitaryTC, ScatterError> {
        let k = self.rank();
        let t0 = self.t0(z)?;
        let jr = self.j.scale(Complex64::new(r, 0.0));
        let a = CMat::identity(k).add(&t0.m.mul(&jr));
        let min_sv = linalg::min_singular_value(&a);
        if min_sv < RESONANCE_THRESHOLD * 1e-2 {
            return Err(ScatterError::ResonanceHit {
                r,
                min_singval: min_sv,
            });
        }
        let root = linalg::sqrt_psd(&t0.im_part(), 1e-12)?;
        let inv = linalg::inverse(&a)?;
        let correction = root
            .mul(&jr)
            .mul(&inv)
            .mul(&root)
            .scale(Complex64::new(0.0, -2.0));
        let s = CMat::identity(k).add(&correction);
        Ok(UnitaryTC::new(s)?)
    }
}

/// A bracketed coupling where `1 + T0 J_r` loses invertibility.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceInterval {
    pub lo: f64,
    pub hi: f64,
    pub min_singval: f64,
}

/// Scans the coupling grid for dips of the smallest singular value of
/// `1 + T0(lambda + i0) J_r` below the resonance threshold; each dip is
/// narrowed by golden-section search to a bracket of width `1e-10`.
pub fn resonance_scan(
    model: &ScatteringModel,
    lambda: f64,
    r_grid: &[f64],
) -> Result<Vec<ResonanceInterval>, ScatterError> {
    let z = Complex64::new(lambda, 0.0);
    let f = |r: f64| model.coupling_min_singval(z, r);
    let mut vals = Vec::with_capacity(r_grid.len());
    for &r in r_grid {
        vals.push(f(r)?);
    }
    let mut out: Vec<ResonanceInterval> = Vec::new();
    for i in 0..r_grid.len() {
        let is_local_min =
            (i == 0 || vals[i] <= vals[i - 1]) && (i + 1 == r_grid.len() || vals[i] <= vals[i + 1]);
        if !is_local_min {
            continue;
        }
        let lo = if i == 0 { r_grid[0] } else { r_grid[i - 1] };
        let hi = if i + 1 == r_grid.len() {
            r_grid[r_grid.len() - 1]
        } else {
            r_grid[i + 1]
        };
        if hi <= lo {
            if vals[i] < RESONANCE_THRESHOLD {
                out.push(ResonanceInterval {
                    lo,
                    hi,
                    min_singval: vals[i],
                });
            }
            continue;
        }
        // Golden-section minimization down to the bracket width.
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (lo, hi);
        let mut c = b - phi * (b - a);
        let mut d = a + phi * (b - a);
        let mut fc = f(c)?;
        let mut fd = f(d)?;
        while b - a > 1e-10 {
            if fc <= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - phi * (b - a);
                fc = f(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + phi * (b - a);
                fd = f(d)?;
            }
        }
        let min_singval = fc.min(fd);
        if min_singval < RESONANCE_THRESHOLD {
            let hit = ResonanceInterval {
                lo: a,
                hi: b,
                min_singval,
            };
            let overlaps = out
                .last()
                .is_some_and(|p: &ResonanceInterval| (p.lo - hit.lo).abs() < 1e-8);
            if !overlaps {
                out.push(hit);
            }
        }
    }
    Ok(out)
}

fn spec_of_tilde_s(model: &ScatteringModel, z: Complex64, r: f64) -> Result<RiggedSet, String> {
    let u = model.tilde_s(z, r).map_err(|e| e.to_string())?;
    spec(&u, unispec::PATH_CLUSTER_TOL).map_err(|e| e.to_string())
}

/// Picks the height where the path is close enough to the identity to start
/// tracking: `||S~(lambda + iy, r) - 1||_1 < 0.01`.
fn choose_y_start(model: &ScatteringModel, lambda: f64, r: f64) -> Result<f64, ScatterError> {
    let mut y = 1.0;
    loop {
        let u = model.tilde_s(Complex64::new(lambda, y), r)?;
        let dist = trace_norm(&u.matrix().sub(&CMat::identity(u.dim())));
        if dist < 0.01 {
            return Ok(y);
        }
        y *= 2.0;
        if y > 1e12 {
            return Err(ScatterError::TrackingInconsistency(
                "S~ does not approach the identity for large y".into(),
            ));
        }
    }
}

/// The Pushnitski mu-invariant at `(lambda, r)`: spectral flow of
/// `S~(lambda + iy, r)` as `y` runs from infinity (identity) down to the
/// boundary `y = 0`. Also returns the lifted track.
pub fn mu_pushnitski(
    model: &ScatteringModel,
    lambda: f64,
    r: f64,
    params: &LiftParams,
) -> Result<(MuInvariant, ArgumentTrack), ScatterError> {
    // The boundary endpoint must be resonance-free before tracking starts.
    let min_sv = model.coupling_min_singval(Complex64::new(lambda, 0.0), r)?;
    if min_sv < RESONANCE_THRESHOLD {
        return Err(ScatterError::ResonanceHit {
            r,
            min_singval: min_sv,
        });
    }
    let y_start = choose_y_start(model, lambda, r)?;
    let m = model.clone();
    // tau in [0, 1] sweeps y = y_start (1 - tau)/tau from infinity to 0;
    // tau = 1 lands exactly on the closed-form boundary value.
    let path = SpectrumPath::new_fallible((0.0, 1.0), true, move |tau| {
        if tau <= 0.0 {
            return Ok(RiggedSet::empty(crate::rigged::Space::Circle));
        }
        let y = if tau >= 1.0 {
            0.0
        } else {
            y_start * (1.0 - tau) / tau
        };
        spec_of_tilde_s(&m, Complex64::new(lambda, y), r)
    });
    let track = lift_path(&path, params)?;
    let mu = mu_invariant(&track);
    Ok((mu, track))
}

/// The absolutely continuous part: spectral flow of `S~(lambda + i0, rho)`
/// as the coupling `rho` runs from `0` to `r`. The path must be free of
/// resonances. Track endpoints are the scattering phases.
pub fn mu_ac(
    model: &ScatteringModel,
    lambda: f64,
    r: f64,
    params: &LiftParams,
) -> Result<(MuInvariant, ArgumentTrack), ScatterError> {
    if r == 0.0 {
        let track = ArgumentTrack::from_raw(vec![0.0], Vec::new(), true);
        return Ok((MuInvariant::from_endpoints(&[], &[]), track));
    }
    let (lo, hi) = if r > 0.0 { (0.0, r) } else { (r, 0.0) };
    let probe: Vec<f64> = (0..=64).map(|i| lo + (hi - lo) * i as f64 / 64.0).collect();
    let hits = resonance_scan(model, lambda, &probe)?;
    if let Some(hit) = hits.first() {
        return Err(ScatterError::ResonanceOnPath {
            r: 0.5 * (hit.lo + hit.hi),
        });
    }
    let m = model.clone();
    let z = Complex64::new(lambda, 0.0);
    let path = SpectrumPath::new_fallible((lo, hi), true, move |rho| {
        // Track from zero coupling outward regardless of the sign of r.
        let rr = if r > 0.0 { rho } else { lo + hi - rho };
        spec_of_tilde_s(&m, z, rr)
    });
    let track = lift_path(&path, params)?;
    let mu = mu_invariant(&track);
    Ok((mu, track))
}

/// The full decomposition at one grid point.
#[derive(Debug, Clone)]
pub struct XiDecomposition {
    pub lambda: f64,
    pub r: f64,
    pub xi: f64,
    pub xi_ac: f64,
    pub xi_s: f64,
    pub mu: MuInvariant,
    pub mu_ac: MuInvariant,
    pub mu_s_value: f64,
    /// |e^{-2 pi i xi} - det S~(lambda + i0, r)|.
    pub bk_residual: f64,
    /// Smallest singular value of 1 + T0(lambda + i0) J_r.
    pub min_singval: f64,
}

/// Splits the spectral shift function at `(lambda, r)` into absolutely
/// continuous and singular parts via the two mu-invariants, and checks the
/// Birman-Krein identity.
pub fn xi_decompose(
    model: &ScatteringModel,
    lambda: f64,
    r: f64,
    params: &LiftParams,
) -> Result<XiDecomposition, ScatterError> {
    let (mu, _track_y) = mu_pushnitski(model, lambda, r, params)?;
    let (mu_a, track_r) = mu_ac(model, lambda, r, params)?;

    let xi = -mu_integral(&mu) / TAU;
    let xi_ac = -mu_integral(&mu_a) / TAU;
    let xi_s = xi - xi_ac;

    let diffs = mu.difference_on_intervals(&mu_a, 1e-7);
    let (lo, hi) = diffs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    if hi - lo > 1e-6 {
        return Err(ScatterError::ThetaDependence { spread: hi - lo });
    }
    let mu_s_value = diffs.first().copied().unwrap_or(0.0);

    if (xi_s + mu_s_value).abs() > 1e-6 {
        return Err(ScatterError::TrackingInconsistency(format!(
            "xi_s = {xi_s} but -mu_s = {}",
            -mu_s_value
        )));
    }
    if (xi_s - xi_s.round()).abs() > 1e-6 {
        return Err(ScatterError::TrackingInconsistency(format!(
            "xi_s = {xi_s} is not an integer"
        )));
    }

    // Birman-Krein: e^{-2 pi i xi} against det S~ at the boundary.
    let z = Complex64::new(lambda, 0.0);
    let (bk_residual, min_singval) = if r == 0.0 {
        (0.0, 1.0)
    } else {
        let s_boundary = model.tilde_s(z, r)?;
        let det = linalg::det(s_boundary.matrix())?;
        let bk = (Complex64::from_polar(1.0, -TAU * xi) - det).norm();
        (bk, model.coupling_min_singval(z, r)?)
    };
    let _ = track_r;

    Ok(XiDecomposition {
        lambda,
        r,
        xi,
        xi_ac,
        xi_s,
        mu,
        mu_ac: mu_a,
        mu_s_value,
        bk_residual,
        min_singval,
    })
}
