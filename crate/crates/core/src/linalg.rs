//! Dense linear algebra over [`Scalar`] fields.
//!
//! Dimensions in this crate stay below ~64, so everything is a plain
//! row-major `Vec`. Products skip zero entries of the left factor because the
//! matrices built from composition algebras are very sparse.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::DMatrix;

use crate::scalar::{Scalar, Tolerance};

#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    /// Panics if `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<S>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Matrix { rows, cols, data }
    }

    /// Returns `None` for ragged input.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Option<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return None;
        }
        let n = rows.len();
        Some(Matrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| S::from_i64(v)).collect())
                .collect(),
        )
        .expect("ragged integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, k: &S) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.clone() * k.clone()).collect(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        let prod = a.clone() * b.clone();
                        out[(i, j)] = out[(i, j)].clone() + prod;
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// `AB - BA`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        self.matmul(rhs) - rhs.matmul(self)
    }

    /// `AB + BA`.
    pub fn anticommutator(&self, rhs: &Self) -> Self {
        self.matmul(rhs) + rhs.matmul(self)
    }

    /// Frobenius inner product `tr(AᵀB)`.
    pub fn frobenius_inner(&self, rhs: &Self) -> S {
        assert_eq!(self.shape(), rhs.shape(), "frobenius shape mismatch");
        dot(&self.data, &rhs.data)
    }

    pub fn frobenius_norm_sq(&self) -> S {
        self.frobenius_inner(self)
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].clone())
            .fold(S::zero(), |acc, x| acc + x)
    }

    pub fn is_zero_within(&self, tol: Tolerance) -> bool {
        self.data.iter().all(|x| x.is_negligible(tol))
    }

    /// First `(i, j)` with `M[i][j] != -M[j][i]` (row-major order), if any.
    pub fn skew_violation(&self) -> Option<(usize, usize)> {
        if !self.is_square() {
            return Some((0, 0));
        }
        for i in 0..self.rows {
            for j in i..self.cols {
                if self[(i, j)] != -self[(j, i)].clone() {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_skew(&self) -> bool {
        self.skew_violation().is_none()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(S::to_f64)
    }

    pub fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_row_iterator(self.rows, self.cols, self.data.iter().map(S::to_f64))
    }

    /// Block-diagonal sum of square blocks.
    pub fn block_diag(blocks: &[Matrix<S>]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut out = Self::zeros(n, n);
        let mut offset = 0;
        for b in blocks {
            assert!(b.is_square(), "block_diag expects square blocks");
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(offset + i, offset + j)] = b[(i, j)].clone();
                }
            }
            offset += b.rows;
        }
        out
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    fn index(&self, (i, j): (usize, usize)) -> &S {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Scalar> Add for Matrix<S> {
    type Output = Matrix<S>;

    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.shape(), rhs.shape(), "add shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.into_iter().zip(rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<S: Scalar> Sub for Matrix<S> {
    type Output = Matrix<S>;

    fn sub(self, rhs: Self) -> Self {
        assert_eq!(self.shape(), rhs.shape(), "sub shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.into_iter().zip(rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<S: Scalar> Neg for Matrix<S> {
    type Output = Matrix<S>;

    fn neg(self) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.into_iter().map(|a| -a).collect(),
        }
    }
}

impl<S: Scalar> Mul for &Matrix<S> {
    type Output = Matrix<S>;

    fn mul(self, rhs: Self) -> Matrix<S> {
        self.matmul(rhs)
    }
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matrix")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("data", &self.data)
            .finish()
    }
}

impl<S: fmt::Display> fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Basis of the right null space `{x : M x = 0}`.
///
/// An empty basis means `M` is injective. A matrix with no rows yields the
/// standard basis of the whole domain.
pub fn kernel_basis<S: Scalar>(m: &Matrix<S>, tol: Tolerance) -> Vec<Vec<S>> {
    S::kernel_of(m, tol)
}

/// Rank of `m` (number of columns minus kernel dimension).
pub fn rank<S: Scalar>(m: &Matrix<S>, tol: Tolerance) -> usize {
    m.cols() - kernel_basis(m, tol).len()
}

/// Reduced row echelon form. Returns the reduced matrix and pivot columns.
pub fn rref<S: Scalar>(m: &Matrix<S>, tol: Tolerance) -> (Matrix<S>, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let best = (r..rows)
            .max_by(|&x, &y| {
                a[(x, c)]
                    .abs()
                    .partial_cmp(&a[(y, c)].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("non-empty row range");
        if a[(best, c)].is_negligible(tol) {
            continue;
        }
        if best != r {
            for j in 0..cols {
                a.data.swap(best * cols + j, r * cols + j);
            }
        }
        let pivot = a[(r, c)].clone();
        for j in c..cols {
            a[(r, j)] = a[(r, j)].clone() / pivot.clone();
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let factor = a[(i, c)].clone();
            for j in c..cols {
                if !a[(r, j)].is_zero() {
                    a[(i, j)] = a[(i, j)].clone() - factor.clone() * a[(r, j)].clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub(crate) fn kernel_by_elimination<S: Scalar>(m: &Matrix<S>, tol: Tolerance) -> Vec<Vec<S>> {
    let (reduced, pivots) = rref(m, tol);
    let cols = m.cols();
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|free| {
            let mut v = vec![S::zero(); cols];
            v[free] = S::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -reduced[(r, free)].clone();
            }
            v
        })
        .collect()
}

pub(crate) fn kernel_by_svd(m: &Matrix<f64>, tol: Tolerance) -> Vec<Vec<f64>> {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return Vec::new();
    }
    // Pad with zero rows so that Vᵀ spans the whole domain.
    let padded_rows = rows.max(cols);
    let mut a = DMatrix::<f64>::zeros(padded_rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            a[(i, j)] = m[(i, j)];
        }
    }
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("requested Vᵀ");
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    let threshold = tol.0 * sigma_max.max(1.0);
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= threshold)
        .map(|(k, _)| v_t.row(k).iter().cloned().collect())
        .collect()
}

/// A particular solution of `A x = b`, or `None` if inconsistent.
pub fn solve_linear<S: Scalar>(a: &Matrix<S>, b: &[S], tol: Tolerance) -> Option<Vec<S>> {
    assert_eq!(a.rows(), b.len(), "solve_linear shape mismatch");
    let (rows, cols) = a.shape();
    let mut aug = Matrix::zeros(rows, cols + 1);
    for i in 0..rows {
        for j in 0..cols {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, cols)] = b[i].clone();
    }
    let (reduced, pivots) = rref(&aug, tol);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![S::zero(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = reduced[(r, cols)].clone();
    }
    Some(x)
}

/// Result of projecting a matrix onto the span of a list of matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct Membership<S> {
    pub coeffs: Vec<S>,
    /// Squared Frobenius norm of `target - Σ coeffs[i] basis[i]`.
    pub residual_sq: S,
}

impl<S: Scalar> Membership<S> {
    pub fn residual(&self) -> f64 {
        self.residual_sq.to_f64().max(0.0).sqrt()
    }

    /// Exact mode: residual is exactly zero. Float mode: residual ≤ tol.
    pub fn is_member(&self, tol: Tolerance) -> bool {
        self.residual_sq.is_negligible(tol.squared())
    }
}

/// Least-squares coefficients expressing `target` in `span(basis)` with
/// respect to the Frobenius inner product, via the Gram system.
pub fn solve_membership<S: Scalar>(
    target: &Matrix<S>,
    basis: &[Matrix<S>],
    tol: Tolerance,
) -> Membership<S> {
    for b in basis {
        assert_eq!(b.shape(), target.shape(), "membership shape mismatch");
    }
    if basis.is_empty() {
        return Membership {
            coeffs: Vec::new(),
            residual_sq: target.frobenius_norm_sq(),
        };
    }
    let k = basis.len();
    let mut gram = Matrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let g = basis[i].frobenius_inner(&basis[j]);
            gram[(j, i)] = g.clone();
            gram[(i, j)] = g;
        }
    }
    let rhs: Vec<S> = basis.iter().map(|b| b.frobenius_inner(target)).collect();
    // The normal equations are always consistent; a failure here means the
    // float pivots were too noisy, in which case nothing gets projected out.
    let coeffs = solve_linear(&gram, &rhs, tol).unwrap_or_else(|| vec![S::zero(); k]);
    let mut residual = target.clone();
    for (c, b) in coeffs.iter().zip(basis) {
        if !c.is_zero() {
            residual = residual - b.scale(c);
        }
    }
    Membership {
        residual_sq: residual.frobenius_norm_sq(),
        coeffs,
    }
}

/// Coefficients `[c_0, …, c_n]` of `det(λI − A) = Σ c_k λ^k`
/// (Faddeev–LeVerrier; exact over the rationals).
pub fn characteristic_polynomial<S: Scalar>(a: &Matrix<S>) -> Vec<S> {
    assert!(a.is_square(), "characteristic polynomial of non-square matrix");
    let n = a.rows();
    let mut coeffs = vec![S::zero(); n + 1];
    coeffs[n] = S::one();
    let mut m = Matrix::zeros(n, n);
    for k in 1..=n {
        let mut next = a.matmul(&m);
        for i in 0..n {
            next[(i, i)] = next[(i, i)].clone() + coeffs[n - k + 1].clone();
        }
        m = next;
        let tr = a.matmul(&m).trace();
        coeffs[n - k] = -tr / S::from_i64(k as i64);
    }
    coeffs
}

/// Eigenvalues of a symmetric matrix, ascending, in binary64.
pub fn symmetric_eigenvalues<S: Scalar>(a: &Matrix<S>) -> Vec<f64> {
    if a.rows() == 0 {
        return Vec::new();
    }
    let mut values: Vec<f64> = a.to_nalgebra().symmetric_eigen().eigenvalues.iter().cloned().collect();
    values.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    values
}

/// Orthogonal (not normalized) basis of the span of `vectors`, by
/// Gram–Schmidt without square roots. Dependent vectors are dropped.
pub fn orthogonal_basis<S: Scalar>(vectors: &[Vec<S>], tol: Tolerance) -> Vec<Vec<S>> {
    let mut out: Vec<Vec<S>> = Vec::new();
    let mut norms: Vec<S> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for (u, nu) in out.iter().zip(&norms) {
            let c = dot(&w, u) / nu.clone();
            if !c.is_zero() {
                for (wi, ui) in w.iter_mut().zip(u) {
                    *wi = wi.clone() - c.clone() * ui.clone();
                }
            }
        }
        let nw = dot(&w, &w);
        if !nw.is_negligible(tol.squared()) {
            out.push(w);
            norms.push(nw);
        }
    }
    out
}
