//! Dense complex matrices and the small set of linear-algebra primitives the
//! rest of the crate builds on: tensor products, partial traces, Hermitian
//! eigendecomposition, trace norms and matrix inversion.
//!
//! Storage is row-major with zero-based indices; every basis ordering used
//! downstream (Choi operators, vectorization, computational-basis outcomes)
//! refers to this convention. Matrices here are small (at most a few hundred
//! rows), so the implementations favour clarity and accuracy over scale:
//! Hermitian eigendecomposition is a cyclic complex Jacobi iteration, general
//! trace norms go through the eigenvalues of `M^dag M`, and inversion is
//! Gauss-Jordan with partial pivoting.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Absolute tolerance on `max |A - A^dag|` below which a matrix is treated as
/// Hermitian. Double precision keeps roundoff far below this for the matrix
/// sizes used here.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    /// Build a matrix from row-major entries. The entry count must equal
    /// `rows * cols`.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Build a matrix entry by entry.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Square matrix with the given real diagonal.
    pub fn diag_real(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(values[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    /// Build from rows of real entries.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = if r > 0 { rows[0].len() } else { 0 };
        Self::from_fn(r, c, |i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "matrix addition shape mismatch"
        );
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "matrix subtraction shape mismatch"
        );
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    /// Matrix product.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "matrix product shape mismatch ({}x{} * {}x{})",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `max |A - A^dag|` over all entries. Zero for exactly Hermitian input.
    pub fn hermiticity_deviation(&self) -> f64 {
        assert!(self.is_square(), "hermiticity of a non-square matrix");
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.hermiticity_deviation() <= tol
    }

    /// Hermitian part `(A + A^dag) / 2`.
    pub fn hermitian_part(&self) -> Self {
        assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    /// `Re tr(A B)`; the Hilbert-Schmidt pairing used in SDP objectives.
    pub fn re_trace_product(&self, other: &Self) -> f64 {
        assert_eq!((self.cols, self.rows), (other.rows, other.cols));
        let mut acc = 0.0;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += (self[(i, k)] * other[(k, i)]).re;
            }
        }
        acc
    }

    /// Largest entry magnitude of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl std::fmt::Display for CMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>12.5}{:+.5}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

// Complex entries serialize as [re, im] pairs, matrices as row-major nested
// arrays, for cross-language file exchange.
impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| [self[(i, j)].re, self[(i, j)].im])
                    .collect()
            })
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(deserializer)?;
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(D::Error::custom("ragged matrix rows"));
        }
        let data = rows
            .into_iter()
            .flatten()
            .map(|[re, im]| C64::new(re, im))
            .collect();
        CMatrix::new(r, c, data).map_err(D::Error::custom)
    }
}

/// Kronecker product: `(a (x) b)[i*rb + k, j*cb + l] = a[i,j] * b[k,l]`.
pub fn tensor_product(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ra, ca) = (a.rows(), a.cols());
    let (rb, cb) = (b.rows(), b.cols());
    let mut out = CMatrix::zeros(ra * rb, ca * cb);
    for i in 0..ra {
        for j in 0..ca {
            let aij = a[(i, j)];
            for k in 0..rb {
                for l in 0..cb {
                    out[(i * rb + k, j * cb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Which tensor factor `partial_trace` keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    /// Keep the first (left) factor, tracing out the second.
    First,
    /// Keep the second (right) factor, tracing out the first.
    Second,
}

/// Partial trace of a `(da*db) x (da*db)` matrix over one tensor factor,
/// with composite index `(a, b) = a*db + b`.
pub fn partial_trace(m: &CMatrix, dims: (usize, usize), keep: Subsystem) -> Result<CMatrix> {
    let (da, db) = dims;
    let n = da * db;
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "partial trace of {}x{} with subsystem dims ({}, {})",
            m.rows(),
            m.cols(),
            da,
            db
        )));
    }
    Ok(match keep {
        Subsystem::First => CMatrix::from_fn(da, da, |a, a2| {
            (0..db).map(|b| m[(a * db + b, a2 * db + b)]).sum()
        }),
        Subsystem::Second => CMatrix::from_fn(db, db, |b, b2| {
            (0..da).map(|a| m[(a * db + b, a * db + b2)]).sum()
        }),
    })
}

/// Eigendecomposition of a Hermitian matrix: real eigenvalues sorted
/// descending and a unitary matrix of column eigenvectors.
///
/// Within a degenerate eigenspace the eigenvector basis is unspecified;
/// consumers must depend only on spectral projectors.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl HermitianEigen {
    /// `V diag(lambda) V^dag`.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.eigenvalues.len();
        let scaled = CMatrix::from_fn(n, n, |i, j| {
            self.eigenvectors[(i, j)] * C64::new(self.eigenvalues[j], 0.0)
        });
        scaled.mul(&self.eigenvectors.adjoint())
    }
}

/// Eigendecomposition of a Hermitian matrix via cyclic complex Jacobi
/// rotations. Errors if the input deviates from Hermitian symmetry by more
/// than [`HERMITICITY_TOL`].
pub fn eig_hermitian(m: &CMatrix) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let dev = m.hermiticity_deviation();
    if dev > HERMITICITY_TOL {
        return Err(Error::NotHermitian {
            deviation: dev,
            tol: HERMITICITY_TOL,
        });
    }
    Ok(jacobi_hermitian(&m.hermitian_part()))
}

/// Cyclic Jacobi for an exactly Hermitian matrix.
fn jacobi_hermitian(input: &CMatrix) -> HermitianEigen {
    let n = input.rows();
    let mut a = input.clone();
    let mut v = CMatrix::identity(n);
    if n <= 1 {
        return sorted_eigen(&a, v);
    }

    let scale = input.frobenius_norm().max(f64::MIN_POSITIVE);
    let target = scale * 1e-15 * (n as f64);
    const MAX_SWEEPS: usize = 64;

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += 2.0 * a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let gamma = a[(p, q)];
                let mag = gamma.norm();
                if mag <= scale * 1e-300 {
                    continue;
                }
                // Absorb the phase of the pivot, then apply the standard
                // real rotation that annihilates it.
                let w = gamma / mag;
                let alpha = a[(p, p)].re;
                let beta = a[(q, q)].re;
                let tau = (beta - alpha) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let cw = w.conj() * c;
                let sw = w.conj() * s;

                // Columns: A <- A G with G[p,p]=c, G[p,q]=s,
                // G[q,p]=-s*conj(w), G[q,q]=c*conj(w).
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * c - aiq * sw;
                    a[(i, q)] = aip * s + aiq * cw;
                }
                // Rows: A <- G^dag A.
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = apj * c - aqj * (w * s);
                    a[(q, j)] = apj * s + aqj * (w * c);
                }
                // Eigenvector columns transform like the matrix columns.
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c - viq * sw;
                    v[(i, q)] = vip * s + viq * cw;
                }
            }
        }
    }
    sorted_eigen(&a, v)
}

fn sorted_eigen(a: &CMatrix, v: CMatrix) -> HermitianEigen {
    let n = a.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.partial_cmp(&a[(i, i)].re).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    HermitianEigen {
        eigenvalues,
        eigenvectors,
    }
}

/// Trace norm (sum of singular values). Hermitian inputs take the accurate
/// eigenvalue route; general square matrices go through `M^dag M`.
pub fn trace_norm(m: &CMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.is_hermitian(HERMITICITY_TOL) {
        let eig = eig_hermitian(m)?;
        Ok(eig.eigenvalues.iter().map(|l| l.abs()).sum())
    } else {
        let gram = m.adjoint().mul(m);
        let eig = jacobi_hermitian(&gram.hermitian_part());
        Ok(eig.eigenvalues.iter().map(|l| l.max(0.0).sqrt()).sum())
    }
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &CMatrix) -> Result<f64> {
    let eig = eig_hermitian(m)?;
    Ok(eig.eigenvalues.last().copied().unwrap_or(0.0))
}

/// Whether a Hermitian matrix is positive semidefinite: min eigenvalue
/// `>= -tol`. Errors if the input is not Hermitian within `tol`.
pub fn is_psd(m: &CMatrix, tol: f64) -> Result<bool> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let dev = m.hermiticity_deviation();
    if dev > tol.max(HERMITICITY_TOL) {
        return Err(Error::NotHermitian {
            deviation: dev,
            tol: tol.max(HERMITICITY_TOL),
        });
    }
    let eig = jacobi_hermitian(&m.hermitian_part());
    Ok(eig.eigenvalues.last().copied().unwrap_or(0.0) >= -tol)
}

/// Matrix inverse by Gauss-Jordan elimination with partial pivoting.
pub fn invert(m: &CMatrix) -> Result<CMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut inv = CMatrix::identity(n);
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| a[(i, col)].norm().partial_cmp(&a[(j, col)].norm()).unwrap())
            .unwrap();
        let pivot = a[(pivot_row, col)];
        if pivot.norm() < 1e-14 * m.max_abs().max(1.0) {
            return Err(Error::NotInvertible {
                cond: f64::INFINITY,
                limit: f64::INFINITY,
            });
        }
        if pivot_row != col {
            for j in 0..n {
                let (x, y) = (a[(col, j)], a[(pivot_row, j)]);
                a[(col, j)] = y;
                a[(pivot_row, j)] = x;
                let (x, y) = (inv[(col, j)], inv[(pivot_row, j)]);
                inv[(col, j)] = y;
                inv[(pivot_row, j)] = x;
            }
        }
        let inv_pivot = C64::new(1.0, 0.0) / pivot;
        for j in 0..n {
            a[(col, j)] *= inv_pivot;
            inv[(col, j)] *= inv_pivot;
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let factor = a[(i, col)];
            if factor == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                let acj = a[(col, j)];
                let icj = inv[(col, j)];
                a[(i, j)] -= factor * acj;
                inv[(i, j)] -= factor * icj;
            }
        }
    }
    Ok(inv)
}

/// Spectral condition number (ratio of extreme singular values), computed
/// from the eigenvalues of `M^dag M`.
pub fn condition_number(m: &CMatrix) -> f64 {
    let gram = m.adjoint().mul(m);
    let eig = jacobi_hermitian(&gram.hermitian_part());
    let max = eig.eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
    let min = eig.eigenvalues.last().copied().unwrap_or(0.0).max(0.0);
    if min <= 0.0 {
        f64::INFINITY
    } else {
        (max / min).sqrt()
    }
}

/// Orthonormalize the columns of a matrix (rows >= cols) by modified
/// Gram-Schmidt, run twice for numerical orthogonality.
pub fn orthonormalize_columns(m: &CMatrix) -> Result<CMatrix> {
    let (rows, cols) = (m.rows(), m.cols());
    if rows < cols {
        return Err(Error::DimensionMismatch(format!(
            "cannot orthonormalize {cols} columns in dimension {rows}"
        )));
    }
    let mut q = m.clone();
    for _pass in 0..2 {
        for j in 0..cols {
            for k in 0..j {
                let mut proj = C64::new(0.0, 0.0);
                for i in 0..rows {
                    proj += q[(i, k)].conj() * q[(i, j)];
                }
                for i in 0..rows {
                    let qik = q[(i, k)];
                    q[(i, j)] -= proj * qik;
                }
            }
            let norm: f64 = (0..rows).map(|i| q[(i, j)].norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-12 {
                return Err(Error::InvalidInput(
                    "rank-deficient matrix in column orthonormalization".into(),
                ));
            }
            for i in 0..rows {
                q[(i, j)] /= norm;
            }
        }
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{sigma_x, sigma_z, test_hermitian, test_matrix};
    use proptest::prelude::*;

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn tensor_identity_cases() {
        let i2 = CMatrix::identity(2);
        assert_eq!(tensor_product(&i2, &i2), CMatrix::identity(4));
        let zz = tensor_product(&sigma_z(), &sigma_z());
        assert_eq!(zz, CMatrix::diag_real(&[1.0, -1.0, -1.0, 1.0]));
    }

    #[test]
    fn tensor_matches_index_oracle() {
        let a = test_matrix(2, 2, 11);
        let b = test_matrix(2, 2, 22);
        let t = tensor_product(&a, &b);
        // Independent quadruple loop over the defining index formula.
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        assert_eq!(t[(i * 2 + k, j * 2 + l)], a[(i, j)] * b[(k, l)]);
                    }
                }
            }
        }
    }

    #[test]
    fn partial_trace_of_product_state() {
        let rho = test_hermitian(2, 3);
        let sigma = test_hermitian(3, 4);
        let joint = tensor_product(&rho, &sigma);
        let out = partial_trace(&joint, (2, 3), Subsystem::First).unwrap();
        let expected = rho.scale(sigma.trace());
        assert!(out.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn partial_trace_of_maximally_entangled_projector() {
        // |Gamma> = |00> + |11>; both marginals of |Gamma><Gamma| are I_2.
        let mut gamma = CMatrix::zeros(4, 4);
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            gamma[(i, j)] = C64::new(1.0, 0.0);
        }
        let tr_second = partial_trace(&gamma, (2, 2), Subsystem::First).unwrap();
        let tr_first = partial_trace(&gamma, (2, 2), Subsystem::Second).unwrap();
        assert!(tr_second.max_abs_diff(&CMatrix::identity(2)) < 1e-15);
        assert!(tr_first.max_abs_diff(&CMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn partial_trace_matches_contraction_oracle() {
        let m = test_hermitian(4, 7);
        let kept = partial_trace(&m, (2, 2), Subsystem::First).unwrap();
        for a in 0..2 {
            for a2 in 0..2 {
                let mut acc = C64::new(0.0, 0.0);
                for b in 0..2 {
                    acc += m[(a * 2 + b, a2 * 2 + b)];
                }
                assert!((kept[(a, a2)] - acc).norm() < 1e-15);
            }
        }
        assert!(partial_trace(&m, (3, 2), Subsystem::First).is_err());
    }

    #[test]
    fn trace_norm_basics() {
        assert!(approx(
            trace_norm(&CMatrix::diag_real(&[1.0, -2.0])).unwrap(),
            3.0,
            1e-12
        ));
        let mut gamma = CMatrix::zeros(4, 4);
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            gamma[(i, j)] = C64::new(1.0, 0.0);
        }
        assert!(approx(trace_norm(&gamma).unwrap(), 2.0, 1e-10));
        // Non-Hermitian cases with known singular values.
        let nilpotent = CMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]);
        assert!(approx(trace_norm(&nilpotent).unwrap(), 2.0, 1e-12));
        assert!(trace_norm(&CMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn trace_norm_hermitian_matches_singular_value_oracle() {
        // Hermitian route (sum |eigenvalues|) against the independent
        // sqrt-eigenvalues-of-the-Gram-matrix route.
        let m = test_hermitian(4, 99);
        let direct = trace_norm(&m).unwrap();
        let gram = m.adjoint().mul(&m);
        let eig = eig_hermitian(&gram.hermitian_part()).unwrap();
        let oracle: f64 = eig.eigenvalues.iter().map(|l| l.max(0.0).sqrt()).sum();
        assert!(approx(direct, oracle, 1e-10));
    }

    #[test]
    fn eig_simple_spectra() {
        let eig = eig_hermitian(&sigma_z()).unwrap();
        assert!(approx(eig.eigenvalues[0], 1.0, 1e-14));
        assert!(approx(eig.eigenvalues[1], -1.0, 1e-14));
        let eig = eig_hermitian(&CMatrix::identity(5)).unwrap();
        assert!(eig.eigenvalues.iter().all(|&l| approx(l, 1.0, 1e-14)));
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = CMatrix::from_real_rows(&[&[0.0, 1.0], [0.0, 0.0].as_slice()]);
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn eig_reconstruction_and_orthonormality() {
        for n in [2, 4, 8, 16] {
            let m = test_hermitian(n, 1000 + n as u64);
            let eig = eig_hermitian(&m).unwrap();
            let scale = m.frobenius_norm().max(1.0);
            assert!(eig.reconstruct().max_abs_diff(&m) / scale < 1e-10);
            let vtv = eig.eigenvectors.adjoint().mul(&eig.eigenvectors);
            assert!(vtv.max_abs_diff(&CMatrix::identity(n)) < 1e-10);
            for w in eig.eigenvalues.windows(2) {
                assert!(w[0] >= w[1]);
            }
        }
    }

    #[test]
    fn psd_checks() {
        assert!(is_psd(&CMatrix::identity(2), 1e-9).unwrap());
        assert!(!is_psd(&CMatrix::diag_real(&[1.0, -1e-3]), 1e-9).unwrap());
        assert!(!is_psd(&sigma_x(), 1e-9).unwrap());
        let m = CMatrix::from_real_rows(&[&[0.0, 1.0], [0.0, 0.0].as_slice()]);
        assert!(is_psd(&m, 1e-9).is_err());
    }

    #[test]
    fn inversion_round_trip() {
        let m = test_matrix(4, 4, 5).add(&CMatrix::identity(4).scale_re(2.0));
        let inv = invert(&m).unwrap();
        assert!(m.mul(&inv).max_abs_diff(&CMatrix::identity(4)) < 1e-12);
        let singular = CMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]);
        assert!(invert(&singular).is_err());
    }

    #[test]
    fn condition_number_of_unitary_is_one() {
        let q = orthonormalize_columns(&test_matrix(4, 4, 8)).unwrap();
        let cond = condition_number(&q);
        assert!(approx(cond, 1.0, 1e-10), "cond = {cond}");
        let qtq = q.adjoint().mul(&q);
        assert!(qtq.max_abs_diff(&CMatrix::identity(4)) < 1e-12);
    }

    #[test]
    fn serde_round_trip() {
        let m = test_matrix(3, 2, 42);
        let json = serde_json::to_string(&m).unwrap();
        let back: CMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(m, back);
        assert!(serde_json::from_str::<CMatrix>("[[[0,0]],[[0,0],[1,0]]]").is_err());
    }

    // Small-integer complex entries so products are exact in f64; the tensor
    // index formula is then associative without rounding.
    fn int_matrix() -> impl Strategy<Value = CMatrix> {
        (1usize..=3, 1usize..=3).prop_flat_map(|(r, c)| {
            proptest::collection::vec((-3i8..=3, -3i8..=3), r * c).prop_map(move |entries| {
                let data = entries
                    .into_iter()
                    .map(|(re, im)| C64::new(re as f64, im as f64))
                    .collect();
                CMatrix::new(r, c, data).unwrap()
            })
        })
    }

    fn small_hermitian() -> impl Strategy<Value = CMatrix> {
        (1usize..=4, any::<u64>()).prop_map(|(n, seed)| test_hermitian(n, seed))
    }

    proptest! {
        #[test]
        fn prop_tensor_associative(a in int_matrix(), b in int_matrix(), c in int_matrix()) {
            let left = tensor_product(&tensor_product(&a, &b), &c);
            let right = tensor_product(&a, &tensor_product(&b, &c));
            prop_assert_eq!(left, right);
        }

        #[test]
        fn prop_trace_norm_dominates_trace(m in small_hermitian()) {
            let tn = trace_norm(&m).unwrap();
            prop_assert!(tn + 1e-10 >= m.trace().re.abs());
        }

        #[test]
        fn prop_partial_trace_of_tensor(a in small_hermitian(), b in small_hermitian()) {
            let joint = tensor_product(&a, &b);
            let kept = partial_trace(&joint, (a.rows(), b.rows()), Subsystem::First).unwrap();
            let expected = a.scale(b.trace());
            let scale = expected.max_abs().max(1.0);
            prop_assert!(kept.max_abs_diff(&expected) / scale < 1e-12);
        }

        #[test]
        fn prop_eig_reconstructs(m in small_hermitian()) {
            let eig = eig_hermitian(&m).unwrap();
            let scale = m.frobenius_norm().max(1.0);
            prop_assert!(eig.reconstruct().max_abs_diff(&m) / scale < 1e-10);
        }
    }
}
