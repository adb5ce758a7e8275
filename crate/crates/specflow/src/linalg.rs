//! Small dense complex linear algebra.
//!
//! Everything here targets the tiny matrices this crate works with
//! (dimensions in the tens at most): a row-major complex matrix type, a
//! cyclic Jacobi eigensolver for Hermitian matrices, a one-sided Jacobi SVD
//! for singular values with high relative accuracy, and LU-based solves and
//! determinants.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(&'static str),
    #[error("matrix is singular")]
    Singular,
    #[error("iteration failed to converge")]
    NoConvergence,
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        CMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows, "incompatible shapes");
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn add(&self, other: &CMat) -> CMat {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &CMat, f: impl Fn(Complex64, Complex64) -> Complex64) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, k: Complex64) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| a * k).collect(),
        }
    }

    /// Hermitian part `(A + A*)/2`.
    pub fn herm_part(&self) -> CMat {
        self.add(&self.adjoint()).scale(Complex64::new(0.5, 0.0))
    }

    /// Skew part divided by i: `(A - A*)/2i`, Hermitian for any `A`.
    pub fn imag_part(&self) -> CMat {
        self.sub(&self.adjoint()).scale(Complex64::new(0.0, -0.5))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// 2x2 unitary zeroing the off-diagonal entry of the Hermitian block
/// `[[a, g], [conj(g), b]]`; returns `[[v00, v01], [v10, v11]]`.
fn jacobi_rotation(a: f64, b: f64, g: Complex64) -> [Complex64; 4] {
    let gn = g.norm();
    // Phase factor reducing the block to a real symmetric one.
    let phase = g / gn;
    let tau = (b - a) / (2.0 * gn);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // V = diag(1, conj(phase)) * [[c, s], [-s, c]]
    let one = Complex64::new(1.0, 0.0);
    [one * c, one * s, -phase.conj() * s, phase.conj() * c]
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.
/// Returns eigenvalues ascending with the matching orthonormal eigenvector
/// columns.
pub fn eig_hermitian(a: &CMat) -> Result<(Vec<f64>, CMat), LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::Dimension(
            "eig_hermitian needs a square matrix",
        ));
    }
    let n = a.nrows();
    let mut m = a.herm_part(); // symmetrize away representation noise
    let mut q = CMat::identity(n);
    if n <= 1 {
        let vals = (0..n).map(|i| m[(i, i)].re).collect();
        return Ok((vals, q));
    }
    let scale = m.frobenius_norm().max(1e-300);
    let tol = 1e-15 * scale;
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for r in (p + 1)..n {
                off = off.max(m[(p, r)].norm());
            }
        }
        if off <= tol {
            let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (m[(i, i)].re, i)).collect();
            pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
            let vals: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let vecs = CMat::from_fn(n, n, |i, j| q[(i, pairs[j].1)]);
            return Ok((vals, vecs));
        }
        for p in 0..n {
            for r in (p + 1)..n {
                let g = m[(p, r)];
                if g.norm() <= tol * 1e-2 {
                    continue;
                }
                let v = jacobi_rotation(m[(p, p)].re, m[(r, r)].re, g);
                // Columns of M and Q.
                for i in 0..n {
                    let mp = m[(i, p)];
                    let mr = m[(i, r)];
                    m[(i, p)] = mp * v[0] + mr * v[2];
                    m[(i, r)] = mp * v[1] + mr * v[3];
                    let qp = q[(i, p)];
                    let qr = q[(i, r)];
                    q[(i, p)] = qp * v[0] + qr * v[2];
                    q[(i, r)] = qp * v[1] + qr * v[3];
                }
                // Rows of M (conjugate transpose action).
                for j in 0..n {
                    let mp = m[(p, j)];
                    let mr = m[(r, j)];
                    m[(p, j)] = v[0].conj() * mp + v[2].conj() * mr;
                    m[(r, j)] = v[1].conj() * mp + v[3].conj() * mr;
                }
            }
        }
    }
    Err(LinalgError::NoConvergence)
}

/// Singular values by one-sided Jacobi, descending. High relative accuracy
/// even for tiny singular values.
pub fn svd_values(a: &CMat) -> Result<Vec<f64>, LinalgError> {
    // Work on the tall orientation so columns are at least as long as they
    // are many.
    let mut b = if a.nrows() >= a.ncols() {
        a.clone()
    } else {
        a.adjoint()
    };
    let n = b.ncols();
    if n == 0 {
        return Ok(Vec::new());
    }
    for _sweep in 0..60 {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let ci = b.column(i);
                let cj = b.column(j);
                let aii: f64 = ci.iter().map(|z| z.norm_sqr()).sum();
                let ajj: f64 = cj.iter().map(|z| z.norm_sqr()).sum();
                let g: Complex64 = ci.iter().zip(&cj).map(|(x, y)| x.conj() * y).sum();
                if g.norm() <= 1e-15 * (aii * ajj).sqrt() || g.norm() == 0.0 {
                    continue;
                }
                rotated = true;
                let v = jacobi_rotation(aii, ajj, g);
                for r in 0..b.nrows() {
                    let bi = b[(r, i)];
                    let bj = b[(r, j)];
                    b[(r, i)] = bi * v[0] + bj * v[2];
                    b[(r, j)] = bi * v[1] + bj * v[3];
                }
            }
        }
        if !rotated {
            let mut sv: Vec<f64> = (0..n)
                .map(|j| b.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
                .collect();
            sv.sort_by(|x, y| y.total_cmp(x));
            return Ok(sv);
        }
    }
    Err(LinalgError::NoConvergence)
}

/// Operator (spectral) norm.
pub fn op_norm(a: &CMat) -> f64 {
    svd_values(a).map_or(f64::NAN, |sv| sv.first().copied().unwrap_or(0.0))
}

/// Smallest singular value.
pub fn min_singular_value(a: &CMat) -> f64 {
    svd_values(a).map_or(f64::NAN, |sv| sv.last().copied().unwrap_or(0.0))
}

struct Lu {
    lu: CMat,
    perm: Vec<usize>,
    swaps: usize,
}

fn lu_decompose(a: &CMat) -> Result<Lu, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::Dimension("LU needs a square matrix"));
    }
    let n = a.nrows();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut swaps = 0;
    for k in 0..n {
        let (piv, piv_val) = (k..n)
            .map(|i| (i, lu[(i, k)].norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if piv_val == 0.0 {
            return Err(LinalgError::Singular);
        }
        if piv != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(piv, j)];
                lu[(piv, j)] = tmp;
            }
            perm.swap(k, piv);
            swaps += 1;
        }
        let inv = Complex64::new(1.0, 0.0) / lu[(k, k)];
        for i in (k + 1)..n {
            let factor = lu[(i, k)] * inv;
            lu[(i, k)] = factor;
            for j in (k + 1)..n {
                let sub = factor * lu[(k, j)];
                lu[(i, j)] -= sub;
            }
        }
    }
    Ok(Lu { lu, perm, swaps })
}

/// Solves `A X = B` by LU with partial pivoting.
pub fn solve(a: &CMat, b: &CMat) -> Result<CMat, LinalgError> {
    if a.nrows() != b.nrows() {
        return Err(LinalgError::Dimension("solve: row counts differ"));
    }
    let n = a.nrows();
    let f = lu_decompose(a)?;
    let mut x = CMat::zeros(n, b.ncols());
    for col in 0..b.ncols() {
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = b[(f.perm[i], col)];
            for j in 0..i {
                acc -= f.lu[(i, j)] * y[j];
            }
            y[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in (i + 1)..n {
                acc -= f.lu[(i, j)] * x[(j, col)];
            }
            x[(i, col)] = acc / f.lu[(i, i)];
        }
    }
    Ok(x)
}

pub fn inverse(a: &CMat) -> Result<CMat, LinalgError> {
    solve(a, &CMat::identity(a.nrows()))
}

pub fn det(a: &CMat) -> Result<Complex64, LinalgError> {
    match lu_decompose(a) {
        Ok(f) => {
            let mut d = Complex64::new(if f.swaps % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
            for i in 0..a.nrows() {
                d *= f.lu[(i, i)];
            }
            Ok(d)
        }
        Err(LinalgError::Singular) => Ok(Complex64::new(0.0, 0.0)),
        Err(e) => Err(e),
    }
}

/// Principal square root of a PSD Hermitian matrix; eigenvalues below
/// `-clamp_tol` are a contract violation, small negatives are clamped to 0.
pub fn sqrt_psd(a: &CMat, clamp_tol: f64) -> Result<CMat, LinalgError> {
    let (vals, q) = eig_hermitian(a)?;
    let mut d = CMat::zeros(vals.len(), vals.len());
    for (i, &v) in vals.iter().enumerate() {
        let clamped = if v < 0.0 { 0.0 } else { v };
        debug_assert!(v >= -clamp_tol.max(1e-10) * (1.0 + a.frobenius_norm()));
        d[(i, i)] = Complex64::new(clamped.sqrt(), 0.0);
    }
    Ok(q.mul(&d).mul(&q.adjoint()))
}

/// `exp(i t H)` for Hermitian `H`, via the eigendecomposition.
pub fn unitary_exp_i(h: &CMat, t: f64) -> Result<CMat, LinalgError> {
    let (vals, q) = eig_hermitian(h)?;
    let mut d = CMat::zeros(vals.len(), vals.len());
    for (i, &v) in vals.iter().enumerate() {
        d[(i, i)] = Complex64::from_polar(1.0, t * v);
    }
    Ok(q.mul(&d).mul(&q.adjoint()))
}

/// Random Hermitian matrix with independent uniform entries in [-1, 1).
pub fn random_hermitian(n: usize, rng: &mut impl rand::Rng) -> CMat {
    use rand::distributions::Distribution;
    let uniform = rand::distributions::Uniform::new(-1.0f64, 1.0);
    CMat::from_fn(n, n, |_, _| {
        Complex64::new(uniform.sample(rng), uniform.sample(rng))
    })
    .herm_part()
}

/// Haar-ish random unitary: exponential of a random Hermitian generator.
pub fn random_unitary(n: usize, rng: &mut impl rand::Rng) -> CMat {
    let h = random_hermitian(n, rng);
    unitary_exp_i(&h, 1.0).expect("eigensolver on random Hermitian")
}
