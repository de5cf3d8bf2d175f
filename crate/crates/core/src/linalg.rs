//! Dense complex vectors and matrices for dimensions up to a few dozen.
//!
//! Everything here is double precision. Rank and kernel decisions go through a
//! one-sided (Hestenes) Jacobi SVD, which keeps small singular values accurate
//! to roughly machine precision times the largest one; Hermitian spectra come
//! from a cyclic complex Jacobi sweep.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Relative tolerance used for rank and kernel decisions unless a caller
/// passes its own.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const JACOBI_EPS: f64 = 1e-15;
const JACOBI_MAX_SWEEPS: usize = 80;

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CVec(Vec<C64>);

impl CVec {
    pub fn new(entries: Vec<C64>) -> Self {
        CVec(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        CVec(vec![ZERO; dim])
    }

    pub fn from_real(entries: &[f64]) -> Self {
        CVec(entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// The `index`-th standard basis vector.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = CVec::zeros(dim);
        v.0[index] = ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[C64] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<C64> {
        self.0
    }

    pub fn iter(&self) -> core::slice::Iter<'_, C64> {
        self.0.iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        sqrt(self.norm_sqr())
    }

    pub fn is_unit(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &CVec) -> C64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scale(&self, s: C64) -> CVec {
        CVec(self.0.iter().map(|z| z * s).collect())
    }

    pub fn normalized(&self) -> CVec {
        let n = self.norm();
        self.scale(C64::new(1.0 / n, 0.0))
    }

    pub fn conj(&self) -> CVec {
        CVec(self.0.iter().map(|z| z.conj()).collect())
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.0.iter().all(|z| z.im.abs() <= tol)
    }

    pub fn kron(&self, other: &CVec) -> CVec {
        kron(self, other)
    }

    pub fn max_abs_diff(&self, other: &CVec) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<usize> for CVec {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for CVec {
    fn index_mut(&mut self, i: usize) -> &mut C64 {
        &mut self.0[i]
    }
}

impl FromIterator<C64> for CVec {
    fn from_iter<I: IntoIterator<Item = C64>>(iter: I) -> Self {
        CVec(iter.into_iter().collect())
    }
}

/// Kronecker product: `entry[i·dim(b) + j] = a[i]·b[j]`.
pub fn kron(a: &CVec, b: &CVec) -> CVec {
    let mut out = Vec::with_capacity(a.dim() * b.dim());
    for x in a.iter() {
        for y in b.iter() {
            out.push(x * y);
        }
    }
    CVec(out)
}

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(CMat { rows, cols, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = CMat::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = C64::new(x, 0.0);
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[&CVec]) -> Self {
        let rows = columns.first().map_or(0, |c| c.dim());
        let mut m = CMat::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.dim(), rows, "column dimension mismatch");
            for i in 0..rows {
                m[(i, j)] = col[i];
            }
        }
        m
    }

    /// Matrix whose rows are the conjugates of the given vectors, so that its
    /// kernel is the set of vectors orthogonal to all of them.
    pub fn from_bra_rows(vectors: &[&CVec]) -> Self {
        let cols = vectors.first().map_or(0, |v| v.dim());
        let mut m = CMat::zeros(vectors.len(), cols);
        for (i, v) in vectors.iter().enumerate() {
            assert_eq!(v.dim(), cols, "row dimension mismatch");
            for j in 0..cols {
                m[(i, j)] = v[j].conj();
            }
        }
        m
    }

    /// `|v⟩⟨v|`.
    pub fn outer(v: &CVec) -> Self {
        let n = v.dim();
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
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

    pub fn column(&self, j: usize) -> CVec {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn select_columns(&self, indices: &[usize]) -> CMat {
        let mut m = CMat::zeros(self.rows, indices.len());
        for (k, &j) in indices.iter().enumerate() {
            for i in 0..self.rows {
                m[(i, k)] = self[(i, j)];
            }
        }
        m
    }

    pub fn adjoint(&self) -> CMat {
        let mut m = CMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> CMat {
        let mut m = CMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)];
            }
        }
        m
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut m = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    m[(i, j)] += a * other[(k, j)];
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &CVec) -> CVec {
        assert_eq!(self.cols, v.dim(), "dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// `⟨v|M|v⟩`.
    pub fn expectation(&self, v: &CVec) -> C64 {
        v.inner(&self.mul_vec(v))
    }

    pub fn add(&self, other: &CMat) -> CMat {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &CMat, f: impl Fn(C64, C64) -> C64) -> CMat {
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

    pub fn scale(&self, s: f64) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn kron(&self, other: &CMat) -> CMat {
        let mut m = CMat::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        m[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &CMat) -> f64 {
        self.sub(other).max_abs()
    }

    /// Entrywise `max |M − M†|`.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Thin singular value decomposition data: singular values in descending
/// order and the matching right singular vectors (columns of `V`). When the
/// matrix has more columns than rows, the trailing values are zero and their
/// vectors complete `V` to a unitary.
#[derive(Clone, Debug)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    pub right_vectors: Vec<CVec>,
}

impl Svd {
    pub fn max_singular_value(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// Absolute cutoff for a relative tolerance: `tol·σ_max`, or `tol` when
    /// every singular value is already at or below `tol`.
    pub fn threshold(&self, tol: f64) -> f64 {
        let smax = self.max_singular_value();
        if smax > tol {
            tol * smax
        } else {
            tol
        }
    }
}

/// One-sided Jacobi SVD. Only the singular values and right vectors are
/// kept, which is all the rank and kernel routines need.
pub fn svd(m: &CMat) -> Svd {
    let (rows, cols) = (m.rows(), m.cols());
    // column-major working copies
    let mut a: Vec<Vec<C64>> = (0..cols)
        .map(|j| (0..rows).map(|i| m[(i, j)]).collect())
        .collect();
    let mut v: Vec<Vec<C64>> = (0..cols)
        .map(|j| {
            let mut e = vec![ZERO; cols];
            e[j] = ONE;
            e
        })
        .collect();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..cols {
            for j in (i + 1)..cols {
                let alpha: f64 = a[i].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = a[j].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = a[i].iter().zip(&a[j]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= JACOBI_EPS * sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + sqrt(1.0 + zeta * zeta))
                } else {
                    -1.0 / (-zeta + sqrt(1.0 + zeta * zeta))
                };
                let c = 1.0 / sqrt(1.0 + t * t);
                let s = c * t;
                rotate_pair(&mut a, i, j, phase, c, s);
                rotate_pair(&mut v, i, j, phase, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = a
        .iter()
        .map(|col| sqrt(col.iter().map(|z| z.norm_sqr()).sum()))
        .collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]).then(x.cmp(&y)));
    Svd {
        singular_values: order.iter().map(|&k| norms[k]).collect(),
        right_vectors: order.iter().map(|&k| CVec(v[k].clone()).normalized()).collect(),
    }
}

/// Column update `x ← c·x − s·φ·y`, `y ← s·x + c·φ·y` with `φ` a unit phase.
fn rotate_pair(cols: &mut [Vec<C64>], i: usize, j: usize, phase: C64, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(j);
    let x = &mut left[i];
    let y = &mut right[0];
    for (xe, ye) in x.iter_mut().zip(y.iter_mut()) {
        let yp = *ye * phase;
        let xv = *xe;
        *xe = xv * c - yp * s;
        *ye = xv * s + yp * c;
    }
}

/// Number of singular values above `tol·σ_max` (or above `tol` when all are
/// at most `tol`).
pub fn numerical_rank(m: &CMat, tol: f64) -> usize {
    let d = svd(m);
    let thr = d.threshold(tol);
    d.singular_values.iter().filter(|&&s| s > thr).count()
}

/// Orthonormal basis of the kernel of `m` at relative tolerance `tol`.
pub fn nullspace(m: &CMat, tol: f64) -> Vec<CVec> {
    let d = svd(m);
    let thr = d.threshold(tol);
    d.singular_values
        .iter()
        .zip(d.right_vectors)
        .filter(|(&s, _)| s <= thr)
        .map(|(_, v)| v)
        .collect()
}

/// Determinant by LU with partial pivoting.
pub fn det(m: &CMat) -> Result<C64> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: m.cols(),
        });
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut det = ONE;
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&x, &y| a[(x, k)].norm().total_cmp(&a[(y, k)].norm()))
            .unwrap_or(k);
        if a[(pivot, k)] == ZERO {
            return Ok(ZERO);
        }
        if pivot != k {
            for j in 0..n {
                let tmp = a[(k, j)];
                a[(k, j)] = a[(pivot, j)];
                a[(pivot, j)] = tmp;
            }
            det = -det;
        }
        let p = a[(k, k)];
        det *= p;
        for i in (k + 1)..n {
            let f = a[(i, k)] / p;
            if f == ZERO {
                continue;
            }
            for j in k..n {
                let akj = a[(k, j)];
                a[(i, j)] -= f * akj;
            }
        }
    }
    Ok(det)
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<CVec>,
}

impl HermitianEig {
    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// Eigenvector of the largest eigenvalue.
    pub fn top(&self) -> Option<(&f64, &CVec)> {
        self.eigenvalues.last().zip(self.eigenvectors.last())
    }
}

/// Tolerance on `max |M − M†|` accepted by [`hermitian_eig`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Cyclic complex Jacobi eigensolver for Hermitian input.
pub fn hermitian_eig(m: &CMat) -> Result<HermitianEig> {
    let deviation = m.hermitian_deviation();
    if deviation > HERMITIAN_TOL * m.max_abs().max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    let n = m.rows();
    // symmetrize so that roundoff asymmetry does not leak into the sweep
    let mut a = CMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
        }
    }
    let mut v = CMat::identity(n);
    let scale = a.frobenius_norm();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum();
        if sqrt(off) <= JACOBI_EPS * scale || scale == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g == 0.0 {
                    continue;
                }
                // W = diag(1, e^{-iφ}) · [[c, s], [-s, c]] on the (p, q) plane
                let phase = (apq / g).conj();
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * g);
                let t = if tau >= 0.0 {
                    1.0 / (tau + sqrt(1.0 + tau * tau))
                } else {
                    -1.0 / (-tau + sqrt(1.0 + tau * tau))
                };
                let c = 1.0 / sqrt(1.0 + t * t);
                let s = t * c;
                // A ← A W
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)] * phase;
                    a[(k, p)] = akp * c - akq * s;
                    a[(k, q)] = akp * s + akq * c;
                }
                // A ← W† A
                let pc = phase.conj();
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)] * pc;
                    a[(p, k)] = apk * c - aqk * s;
                    a[(q, k)] = apk * s + aqk * c;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)] * phase;
                    v[(k, p)] = vkp * c - vkq * s;
                    v[(k, q)] = vkp * s + vkq * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(x, x)].re.total_cmp(&a[(y, y)].re).then(x.cmp(&y)));
    Ok(HermitianEig {
        eigenvalues: order.iter().map(|&k| a[(k, k)].re).collect(),
        eigenvectors: order.iter().map(|&k| v.column(k)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_1_SQRT_2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_cmat(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMat {
        let data = (0..rows * cols)
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        CMat::from_row_major(rows, cols, data).unwrap()
    }

    fn random_cvec(rng: &mut ChaCha8Rng, dim: usize) -> CVec {
        (0..dim)
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect()
    }

    #[test]
    fn kron_computational_basis() {
        let zero = CVec::from_real(&[1.0, 0.0]);
        let one = CVec::from_real(&[0.0, 1.0]);
        assert_eq!(kron(&zero, &zero), CVec::from_real(&[1.0, 0.0, 0.0, 0.0]));
        assert_eq!(kron(&one, &one), CVec::from_real(&[0.0, 0.0, 0.0, 1.0]));
    }

    #[test]
    fn kron_of_rotated_qubits() {
        let (x1, x3) = (0.3_f64, 1.1_f64);
        let a = CVec::from_real(&[libm::cos(x1), libm::sin(x1)]);
        let b = CVec::from_real(&[libm::cos(x3), libm::sin(x3)]);
        let expected = CVec::from_real(&[
            libm::cos(x1) * libm::cos(x3),
            libm::cos(x1) * libm::sin(x3),
            libm::sin(x1) * libm::cos(x3),
            libm::sin(x1) * libm::sin(x3),
        ]);
        assert!(kron(&a, &b).max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn kron_norm_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a = random_cvec(&mut rng, 3);
            let b = random_cvec(&mut rng, 4);
            assert!((kron(&a, &b).norm() - a.norm() * b.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(numerical_rank(&CMat::identity(4), 1e-8), 4);
        let v = CVec::from_real(&[0.5, 0.5, 0.5, 0.5]);
        assert_eq!(numerical_rank(&CMat::outer(&v), 1e-8), 1);
        assert_eq!(numerical_rank(&CMat::zeros(3, 3), 1e-8), 0);
    }

    #[test]
    fn nullspace_examples() {
        let ns = nullspace(&CMat::zeros(2, 2), 1e-8);
        assert_eq!(ns.len(), 2);
        assert!(ns[0].inner(&ns[1]).norm() < 1e-15);

        let row = CMat::from_real_rows(&[&[1.0, 0.0]]);
        let ns = nullspace(&row, 1e-8);
        assert_eq!(ns.len(), 1);
        assert!((ns[0][1].norm() - 1.0).abs() < 1e-15);
        assert!(ns[0][0].norm() < 1e-15);
    }

    #[test]
    fn rank_plus_nullity_is_column_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..40 {
            let rows = 1 + trial % 5;
            let cols = 1 + (trial / 5) % 6;
            let mut m = random_cmat(&mut rng, rows, cols);
            // force a dependent column now and then
            if cols > 1 && trial % 3 == 0 {
                for i in 0..rows {
                    let z = m[(i, 0)] * C64::new(0.5, -2.0);
                    m[(i, cols - 1)] = z;
                }
            }
            let rank = numerical_rank(&m, DEFAULT_RANK_TOL);
            let ns = nullspace(&m, DEFAULT_RANK_TOL);
            assert_eq!(rank + ns.len(), cols);
            let bound = 10.0 * DEFAULT_RANK_TOL * m.frobenius_norm();
            for v in &ns {
                assert!(m.mul_vec(v).norm() <= bound);
                assert!(v.is_unit(1e-12));
            }
        }
    }

    #[test]
    fn svd_singular_values_match_gram_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_cmat(&mut rng, 5, 3);
        let d = svd(&m);
        let gram = m.adjoint().mul(&m);
        let eig = hermitian_eig(&gram).unwrap();
        for (k, s) in d.singular_values.iter().enumerate() {
            let lambda = eig.eigenvalues[eig.eigenvalues.len() - 1 - k];
            assert!((s * s - lambda).abs() < 1e-12);
        }
    }

    #[test]
    fn eig_examples() {
        let d = CMat::from_real_rows(&[&[0.0, 0.0], &[0.0, 1.0]]);
        let e = hermitian_eig(&d).unwrap();
        assert!((e.eigenvalues[0]).abs() < 1e-15 && (e.eigenvalues[1] - 1.0).abs() < 1e-15);

        let plus = CVec::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
        let e = hermitian_eig(&CMat::outer(&plus)).unwrap();
        assert!(e.eigenvalues[0].abs() < 1e-15);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-15);
        let (_, top) = e.top().unwrap();
        assert!((top.inner(&plus).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = CMat::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn eig_reconstructs_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [1, 2, 3, 4, 8, 16, 32] {
            let r = random_cmat(&mut rng, n, n);
            let h = r.add(&r.adjoint());
            let e = hermitian_eig(&h).unwrap();
            assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
            let mut rebuilt = CMat::zeros(n, n);
            for (l, v) in e.eigenvalues.iter().zip(&e.eigenvectors) {
                rebuilt = rebuilt.add(&CMat::outer(v).scale(*l));
                let resid = h.mul_vec(v).max_abs_diff(&v.scale(C64::new(*l, 0.0)));
                assert!(resid <= 1e-9 * h.frobenius_norm());
            }
            assert!(rebuilt.max_abs_diff(&h) < 1e-8, "n = {n}");
            for i in 0..n {
                for j in 0..n {
                    let g = e.eigenvectors[i].inner(&e.eigenvectors[j]);
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((g - C64::new(expect, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn det_matches_known_values() {
        let m = CMat::from_real_rows(&[&[2.0, 1.0], &[1.0, 3.0]]);
        assert!((det(&m).unwrap() - C64::new(5.0, 0.0)).norm() < 1e-14);
        let p = CMat::from_real_rows(&[&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]]);
        assert!((det(&p).unwrap() + ONE).norm() < 1e-15);
        assert!(det(&CMat::zeros(2, 3)).is_err());
    }

    #[test]
    fn det_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let a = random_cmat(&mut rng, 4, 4);
        let b = random_cmat(&mut rng, 4, 4);
        let lhs = det(&a.mul(&b)).unwrap();
        let rhs = det(&a).unwrap() * det(&b).unwrap();
        assert!((lhs - rhs).norm() < 1e-12 * rhs.norm().max(1.0));
    }
}
