//! Unitary matrices as trace-class perturbations of the identity.
//!
//! A finite unitary matrix stands for its embedding `U + 1 + 1 + ...`, so
//! its eigenvalues at `1` are absorbed into the sticky point and the rest
//! form a circle rigged set: the `spec` map. Eigen-solving goes through the
//! commuting Hermitian pair `(U + U*)/2`, `(U - U*)/2i`, diagonalizing the
//! first and refining inside its nearly-degenerate clusters with the
//! second.

use crate::lift::SpectrumPath;
use crate::linalg::{self, CMat, LinalgError};
use crate::rigged::{RiggedSet, Space};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, TAU};
use std::sync::Arc;
use thiserror::Error;

/// Default angular resolution for multiplicity detection.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-7;

/// Clustering used when spectra feed a lifted path. Merging two angles
/// displaces them by up to half the clustering width, and that displacement
/// must stay below the lift's node reconstruction tolerance, so paths
/// cluster much tighter than standalone multiplicity detection.
pub const PATH_CLUSTER_TOL: f64 = 1e-9;

/// Unitarity defect allowed by the [`UnitaryTC`] constructor.
pub const UNITARITY_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum UnispecError {
    #[error("matrix is not unitary: ||U*U - I|| = {residual}")]
    NotUnitary { residual: f64 },
    #[error("eigensolver failed: {0}")]
    SolverFailure(String),
    #[error("dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("spectrum is degenerate at the base point (gap {gap})")]
    DegenerateSpectrum { gap: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A finite unitary matrix regarded as an element of `1 + L1`.
#[derive(Debug, Clone)]
pub struct UnitaryTC {
    n: usize,
    m: CMat,
}

impl UnitaryTC {
    pub fn new(m: CMat) -> Result<Self, UnispecError> {
        if !m.is_square() {
            return Err(UnispecError::SolverFailure("matrix is not square".into()));
        }
        let n = m.nrows();
        let defect = m.adjoint().mul(&m).sub(&CMat::identity(n));
        let residual = linalg::op_norm(&defect);
        if !(residual <= UNITARITY_TOL) {
            return Err(UnispecError::NotUnitary { residual });
        }
        Ok(UnitaryTC { n, m })
    }

    pub fn identity(n: usize) -> Self {
        UnitaryTC {
            n,
            m: CMat::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }
}

/// An eigenvalue on the unit circle with its orthonormal eigenvector.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub eigenvalue: Complex64,
    pub vector: Vec<Complex64>,
}

/// Full eigendecomposition of a unitary matrix. Eigenvalues are projected
/// onto the unit circle; per-pair residuals are verified against `1e-8`.
pub fn eig_unitary(u: &UnitaryTC) -> Result<Vec<EigenPair>, UnispecError> {
    let n = u.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    let m = u.matrix();
    let h = m.herm_part();
    let k = m.imag_part();
    let (hvals, mut q) = linalg::eig_hermitian(&h)?;

    // Group nearly equal eigenvalues of the Hermitian part; inside each
    // group the skew part separates genuinely distinct unitary eigenvalues.
    let group_gap = 1e-4;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && hvals[end] - hvals[end - 1] <= group_gap {
            end += 1;
        }
        if end - start > 1 {
            let cols: Vec<usize> = (start..end).collect();
            let qc = CMat::from_fn(n, cols.len(), |i, j| q[(i, cols[j])]);
            let kc = qc.adjoint().mul(&k).mul(&qc);
            let (_, w) = linalg::eig_hermitian(&kc)?;
            let refined = qc.mul(&w);
            for (jj, &col) in cols.iter().enumerate() {
                for i in 0..n {
                    q[(i, col)] = refined[(i, jj)];
                }
            }
        }
        start = end;
    }

    let mut pairs = Vec::with_capacity(n);
    for j in 0..n {
        let v = q.column(j);
        let mv = m.matvec(&v);
        let lambda: Complex64 = v.iter().zip(&mv).map(|(x, y)| x.conj() * y).sum();
        let residual: f64 = mv
            .iter()
            .zip(&v)
            .map(|(x, y)| (x - y * lambda).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if residual > 1e-8 {
            return Err(UnispecError::SolverFailure(format!(
                "eigenpair residual {residual} at index {j}"
            )));
        }
        let modulus = lambda.norm();
        if (modulus - 1.0).abs() > 1e-8 {
            return Err(UnispecError::SolverFailure(format!(
                "eigenvalue modulus {modulus} off the circle"
            )));
        }
        pairs.push(EigenPair {
            eigenvalue: lambda / modulus,
            vector: v,
        });
    }
    Ok(pairs)
}

/// The spectrum of a unitary matrix as a circle rigged set: eigenvalue
/// angles clustered at `cluster_tol`, with everything within `cluster_tol`
/// of `1` absorbed into the sticky point.
pub fn spec(u: &UnitaryTC, cluster_tol: f64) -> Result<RiggedSet, UnispecError> {
    let pairs = eig_unitary(u)?;
    let mut angles: Vec<f64> = pairs
        .iter()
        .map(|p| p.eigenvalue.arg().rem_euclid(TAU))
        .filter(|&a| Space::Circle.sticky_dist(a) > cluster_tol)
        .collect();
    angles.sort_by(|a, b| a.total_cmp(b));
    let mut entries: Vec<(f64, u32)> = Vec::new();
    let mut i = 0;
    while i < angles.len() {
        let mut j = i + 1;
        while j < angles.len() && angles[j] - angles[j - 1] <= cluster_tol {
            j += 1;
        }
        let mean = angles[i..j].iter().sum::<f64>() / (j - i) as f64;
        entries.push((mean, (j - i) as u32));
        i = j;
    }
    Ok(RiggedSet::circle(entries).expect("clustered angles stay in (0, 2pi)"))
}

/// Trace norm: the sum of singular values.
pub fn trace_norm(a: &CMat) -> f64 {
    linalg::svd_values(a).map_or(f64::NAN, |sv| sv.iter().sum())
}

/// Left side `d(spec U1, spec U2)` and right side `(pi/2) ||U1 - U2||_1` of
/// the spectral continuity bound. The constant `pi/2` is the supremum of
/// `x / |e^{ix} - 1|` over `(0, pi]`.
pub fn spec_continuity_check(u1: &UnitaryTC, u2: &UnitaryTC) -> Result<(f64, f64), UnispecError> {
    if u1.dim() != u2.dim() {
        return Err(UnispecError::DimensionMismatch(u1.dim(), u2.dim()));
    }
    // A tight cluster tolerance keeps the absorbed-point slack below the
    // comparison tolerance of the bound.
    let s1 = spec(u1, 1e-9)?;
    let s2 = spec(u2, 1e-9)?;
    let lhs = crate::matching::distance_d(&s1, &s2)
        .map_err(|e| UnispecError::SolverFailure(e.to_string()))?
        .cost;
    let rhs = FRAC_PI_2 * trace_norm(&u1.matrix().sub(u2.matrix()));
    Ok((lhs, rhs))
}

/// Outcome of the finite-difference eigenvalue velocity comparison.
#[derive(Debug, Clone, Copy)]
pub struct VelocityCheck {
    /// Max over eigenvalues of |finite-difference velocity - Rayleigh form|.
    pub max_deviation: f64,
    /// Sum of |d lambda_j / dr| from the Rayleigh form.
    pub velocity_abs_sum: f64,
    /// Trace norm of the path derivative at the base point.
    pub derivative_trace_norm: f64,
}

/// Compares `d lambda_j / dr` (central differences on matched eigenvalues)
/// against `<psi_j, U'(r0) psi_j>` at a point with simple spectrum.
pub fn eigen_velocity_check(
    path: &dyn Fn(f64) -> CMat,
    r0: f64,
    h: f64,
) -> Result<VelocityCheck, UnispecError> {
    let u0 = UnitaryTC::new(path(r0))?;
    let pairs = eig_unitary(&u0)?;
    let n = pairs.len();
    let mut min_gap = f64::INFINITY;
    for i in 0..n {
        for j in (i + 1)..n {
            min_gap = min_gap.min((pairs[i].eigenvalue - pairs[j].eigenvalue).norm());
        }
    }
    if n > 1 && min_gap < 1e-6 {
        return Err(UnispecError::DegenerateSpectrum { gap: min_gap });
    }

    let up = UnitaryTC::new(path(r0 + h))?;
    let um = UnitaryTC::new(path(r0 - h))?;
    let lp = eig_unitary(&up)?;
    let lm = eig_unitary(&um)?;
    let du = path(r0 + h)
        .sub(&path(r0 - h))
        .scale(Complex64::new(1.0 / (2.0 * h), 0.0));

    let nearest = |lams: &[EigenPair], target: Complex64| -> Complex64 {
        lams.iter()
            .map(|p| p.eigenvalue)
            .min_by(|a, b| (a - target).norm().total_cmp(&(b - target).norm()))
            .unwrap()
    };

    let mut max_dev = 0.0f64;
    let mut abs_sum = 0.0f64;
    for p in &pairs {
        let fd = (nearest(&lp, p.eigenvalue) - nearest(&lm, p.eigenvalue))
            / Complex64::new(2.0 * h, 0.0);
        let duv = du.matvec(&p.vector);
        let rayleigh: Complex64 = p.vector.iter().zip(&duv).map(|(x, y)| x.conj() * y).sum();
        max_dev = max_dev.max((fd - rayleigh).norm());
        abs_sum += rayleigh.norm();
    }
    Ok(VelocityCheck {
        max_deviation: max_dev,
        velocity_abs_sum: abs_sum,
        derivative_trace_norm: trace_norm(&du),
    })
}

/// Wraps a matrix-valued path into a spectrum path through the `spec` map.
pub fn unitary_spectrum_path(
    domain: (f64, f64),
    start_at_identity: bool,
    cluster_tol: f64,
    matrices: impl Fn(f64) -> CMat + Send + Sync + 'static,
) -> SpectrumPath {
    let f = Arc::new(matrices);
    SpectrumPath::new_fallible(domain, start_at_identity, move |r| {
        let u = UnitaryTC::new(f(r)).map_err(|e| e.to_string())?;
        spec(&u, cluster_tol).map_err(|e| e.to_string())
    })
}

/// JSON form of a complex matrix: rows of `[re, im]` pairs.
pub fn cmat_to_json(m: &CMat) -> serde_json::Value {
    serde_json::Value::Array(
        (0..m.nrows())
            .map(|i| {
                serde_json::Value::Array(
                    (0..m.ncols())
                        .map(|j| serde_json::json!([m[(i, j)].re, m[(i, j)].im]))
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn cmat_from_json(v: &serde_json::Value) -> Result<CMat, String> {
    let rows: Vec<Vec<[f64; 2]>> =
        serde_json::from_value(v.clone()).map_err(|e| format!("matrix JSON: {e}"))?;
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    if rows.iter().any(|row| row.len() != c) {
        return Err("matrix JSON: ragged rows".into());
    }
    Ok(CMat::from_fn(r, c, |i, j| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
}
