//! 2-step nilpotent metric Lie algebras `n = v ⊕ z` and their `j` maps.
//!
//! Everything is expressed in orthonormal bases `{e_i}` of `v` and `{f_a}` of
//! `z`. The bracket and the `j` map are tied together by the global sign
//! convention
//!
//! ```text
//! ⟨[e_i, e_j], f_a⟩ = ⟨e_i, J_a e_j⟩ = (J_a)[i][j]
//! ```
//!
//! where matrices act on column vectors. With this convention the structure
//! tensor `A[a][i][j] = ⟨[e_i, e_j], f_a⟩` and the matrices `J_a` coincide
//! entrywise, and `j_Z = Σ_a z_a J_a`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{dot, kernel_basis, orthogonal_basis, Matrix};
use crate::scalar::{Scalar, Tolerance};

/// Linear map `j: z → so(v)` given by the images `J_a = j(f_a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JMap<S> {
    n: usize,
    mats: Vec<Matrix<S>>,
}

impl<S: Scalar> JMap<S> {
    /// Checks that every matrix is `n × n` and skew-symmetric.
    pub fn new(n: usize, mats: Vec<Matrix<S>>) -> Result<Self> {
        for (a, m) in mats.iter().enumerate() {
            if m.shape() != (n, n) {
                return Err(Error::DimensionMismatch(format!(
                    "J{} is {}x{}, expected {n}x{n}",
                    a + 1,
                    m.rows(),
                    m.cols()
                )));
            }
            if let Some((row, col)) = m.skew_violation() {
                return Err(Error::NotSkew { index: a + 1, row, col });
            }
        }
        Ok(JMap { n, mats })
    }

    pub fn zero(n: usize, m: usize) -> Self {
        JMap {
            n,
            mats: vec![Matrix::zeros(n, n); m],
        }
    }

    /// dim v
    pub fn n(&self) -> usize {
        self.n
    }

    /// dim z
    pub fn m(&self) -> usize {
        self.mats.len()
    }

    pub fn matrices(&self) -> &[Matrix<S>] {
        &self.mats
    }

    pub fn get(&self, a: usize) -> &Matrix<S> {
        &self.mats[a]
    }

    /// `j_Z = Σ_a z_a J_a`.
    pub fn apply(&self, z: &[S]) -> Result<Matrix<S>> {
        if z.len() != self.m() {
            return Err(Error::DimensionMismatch(format!(
                "central vector has {} coordinates, dim z = {}",
                z.len(),
                self.m()
            )));
        }
        let mut out = Matrix::zeros(self.n, self.n);
        for (c, m) in z.iter().zip(&self.mats) {
            if !c.is_zero() {
                out = out + m.scale(c);
            }
        }
        Ok(out)
    }

    /// `Qᵀ J_a Q` for every `a`: the same map written in the basis given by
    /// the columns of an orthogonal `Q`.
    pub fn conjugate(&self, q: &Matrix<S>) -> Result<Self> {
        if q.shape() != (self.n, self.n) {
            return Err(Error::DimensionMismatch("conjugating matrix".into()));
        }
        let qt = q.transpose();
        Ok(JMap {
            n: self.n,
            mats: self.mats.iter().map(|m| qt.matmul(m).matmul(q)).collect(),
        })
    }

    pub fn to_f64(&self) -> JMap<f64> {
        JMap {
            n: self.n,
            mats: self.mats.iter().map(Matrix::to_f64).collect(),
        }
    }

    /// Stacks the map as an `n² × m` matrix whose column `a` holds the entries of `J_a`.
    pub fn stacked(&self) -> Matrix<S> {
        let mut out = Matrix::zeros(self.n * self.n, self.m());
        for (a, m) in self.mats.iter().enumerate() {
            for (r, x) in m.as_slice().iter().enumerate() {
                out[(r, a)] = x.clone();
            }
        }
        out
    }
}

/// Structure tensor `A[a][i][j] = ⟨[e_i, e_j], f_a⟩` of `n = v ⊕ z`.
///
/// Only `v × v → z` brackets are stored; `z` is central by construction.
/// The constructor does not enforce antisymmetry so that corrupted data can be
/// fed to [`verify_two_step`].
#[derive(Debug, Clone, PartialEq)]
pub struct MetricNilpotentAlgebra<S> {
    n: usize,
    tensor: Vec<Matrix<S>>,
}

impl<S: Scalar> MetricNilpotentAlgebra<S> {
    pub fn from_tensor(n: usize, tensor: Vec<Matrix<S>>) -> Result<Self> {
        if let Some(a) = tensor.iter().position(|t| t.shape() != (n, n)) {
            return Err(Error::DimensionMismatch(format!("structure slice {} is not {n}x{n}", a + 1)));
        }
        Ok(MetricNilpotentAlgebra { n, tensor })
    }

    pub fn from_jmap(j: &JMap<S>) -> Self {
        MetricNilpotentAlgebra {
            n: j.n(),
            tensor: j.matrices().to_vec(),
        }
    }

    pub fn abelian(n: usize, m: usize) -> Self {
        Self::from_jmap(&JMap::zero(n, m))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.tensor.len()
    }

    pub fn dim(&self) -> usize {
        self.n + self.m()
    }

    pub fn tensor(&self) -> &[Matrix<S>] {
        &self.tensor
    }

    pub fn entry(&self, a: usize, i: usize, j: usize) -> &S {
        &self.tensor[a][(i, j)]
    }

    /// `[e_i, e_j]` in z-coordinates.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<S> {
        self.tensor.iter().map(|t| t[(i, j)].clone()).collect()
    }

    /// Full structure constants on the concatenated basis `e_1…e_n, f_1…f_m`.
    pub fn structure_constants(&self) -> StructureConstants<S> {
        let d = self.dim();
        let mut sc = StructureConstants::zeros(d);
        for (a, t) in self.tensor.iter().enumerate() {
            for i in 0..self.n {
                for j in 0..self.n {
                    let v = &t[(i, j)];
                    if !v.is_zero() {
                        sc.set(i, j, self.n + a, v.clone());
                    }
                }
            }
        }
        sc
    }

    pub fn to_f64(&self) -> MetricNilpotentAlgebra<f64> {
        MetricNilpotentAlgebra {
            n: self.n,
            tensor: self.tensor.iter().map(Matrix::to_f64).collect(),
        }
    }
}

/// Structure constants `c[i][j][k] = ⟨[b_i, b_j], b_k⟩` of a metric Lie
/// algebra in an orthonormal basis `{b}`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants<S> {
    dim: usize,
    data: Vec<S>,
}

impl<S: Scalar> StructureConstants<S> {
    pub fn zeros(dim: usize) -> Self {
        StructureConstants {
            dim,
            data: vec![S::zero(); dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &S {
        &self.data[(i * self.dim + j) * self.dim + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: S) {
        let d = self.dim;
        self.data[(i * d + j) * d + k] = v;
    }

    /// `[b_i, b_j]` as a coordinate vector.
    pub fn bracket(&self, i: usize, j: usize) -> &[S] {
        let d = self.dim;
        &self.data[(i * d + j) * d..(i * d + j + 1) * d]
    }

    /// Bracket of two arbitrary vectors.
    pub fn bracket_vectors(&self, x: &[S], y: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let coef = xi.clone() * yj.clone();
                for (k, c) in self.bracket(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        out[k] = out[k].clone() + coef.clone() * c.clone();
                    }
                }
            }
        }
        out
    }

    /// The same algebra in the orthonormal basis `b'_i = Σ_k Q[k][i] b_k`.
    pub fn change_frame(&self, q: &Matrix<S>) -> Self {
        let d = self.dim;
        assert_eq!(q.shape(), (d, d), "frame change must be d x d");
        let cols: Vec<Vec<S>> = (0..d).map(|i| q.column(i)).collect();
        let mut out = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                let br = self.bracket_vectors(&cols[i], &cols[j]);
                for (k, col) in cols.iter().enumerate() {
                    out.set(i, j, k, dot(&br, col));
                }
            }
        }
        out
    }

    pub fn to_f64(&self) -> StructureConstants<f64> {
        StructureConstants {
            dim: self.dim,
            data: self.data.iter().map(S::to_f64).collect(),
        }
    }
}

/// `[X, Y] = Σ_a ⟨X, J_a Y⟩ f_a` for `X, Y ∈ v`.
pub fn bracket_from_j<S: Scalar>(j: &JMap<S>, x: &[S], y: &[S]) -> Result<Vec<S>> {
    if x.len() != j.n() || y.len() != j.n() {
        return Err(Error::DimensionMismatch(format!(
            "vectors of length {} and {} in v of dimension {}",
            x.len(),
            y.len(),
            j.n()
        )));
    }
    Ok(j.matrices().iter().map(|m| dot(x, &m.apply(y))).collect())
}

/// Inverse of the bracket construction: `J_a = A[a]`.
pub fn j_from_brackets<S: Scalar>(alg: &MetricNilpotentAlgebra<S>) -> Result<JMap<S>> {
    JMap::new(alg.n(), alg.tensor().to_vec())
}

#[derive(Debug, Clone, PartialEq)]
pub enum TwoStepViolation {
    /// `A[a][i][j] != -A[a][j][i]` (0-based indices).
    Antisymmetry { a: usize, i: usize, j: usize },
    /// `[b_i, b_c] != 0` for a central basis vector `b_c`.
    NotCentral { i: usize, c: usize },
    /// `[b_i, b_j]` has a component along the non-central basis vector `b_k`.
    DerivedOutsideCenter { i: usize, j: usize, k: usize },
    /// `[[b_x, b_y], b_w] != 0`.
    NotTwoStep { x: usize, y: usize, w: usize },
    /// Jacobi identity fails on `(b_x, b_y, b_w)`.
    Jacobi { x: usize, y: usize, w: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoStepCertificate {
    pub triples_checked: usize,
    pub violation: Option<TwoStepViolation>,
}

impl TwoStepCertificate {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks antisymmetry of the stored tensor, then runs the structural
/// checks of [`verify_two_step_structure`] on the full structure constants.
pub fn verify_two_step<S: Scalar>(alg: &MetricNilpotentAlgebra<S>, tol: Tolerance) -> TwoStepCertificate {
    for (a, t) in alg.tensor().iter().enumerate() {
        for i in 0..alg.n() {
            for j in i..alg.n() {
                if !t[(i, j)].approx_eq(&-t[(j, i)].clone(), tol) {
                    return TwoStepCertificate {
                        triples_checked: 0,
                        violation: Some(TwoStepViolation::Antisymmetry { a, i, j }),
                    };
                }
            }
        }
    }
    let center: Vec<usize> = (alg.n()..alg.dim()).collect();
    verify_two_step_structure(&alg.structure_constants(), &center, tol)
}

/// Centrality of `center`, derived algebra inside `center`, `[n,[n,n]] = 0`
/// and the Jacobi identity, each over every basis pair or triple.
pub fn verify_two_step_structure<S: Scalar>(
    sc: &StructureConstants<S>,
    center: &[usize],
    tol: Tolerance,
) -> TwoStepCertificate {
    let d = sc.dim();
    let mut is_central = vec![false; d];
    for &c in center {
        is_central[c] = true;
    }
    let fail = |violation| TwoStepCertificate {
        triples_checked: 0,
        violation: Some(violation),
    };
    for i in 0..d {
        for &c in center {
            if sc.bracket(i, c).iter().any(|x| !x.is_negligible(tol)) {
                return fail(TwoStepViolation::NotCentral { i, c });
            }
        }
        for j in 0..d {
            if let Some(k) = (0..d).find(|&k| !is_central[k] && !sc.get(i, j, k).is_negligible(tol)) {
                return fail(TwoStepViolation::DerivedOutsideCenter { i, j, k });
            }
        }
    }
    let mut triples = 0;
    for x in 0..d {
        for y in 0..d {
            let xy = sc.bracket(x, y);
            let xy_zero = xy.iter().all(Zero::is_zero);
            for w in 0..d {
                triples += 1;
                if xy_zero {
                    continue;
                }
                let xy_w = sc.bracket_vectors(xy, &unit(d, w));
                if xy_w.iter().any(|v| !v.is_negligible(tol)) {
                    return fail(TwoStepViolation::NotTwoStep { x, y, w });
                }
            }
        }
    }
    // With [n,[n,n]] = 0 every Jacobi sum vanishes term by term; it is still
    // evaluated so that the certificate covers the identity explicitly.
    let zero_bracket: Vec<bool> = (0..d * d)
        .map(|p| sc.bracket(p / d, p % d).iter().all(Zero::is_zero))
        .collect();
    for x in 0..d {
        for y in 0..d {
            for w in 0..d {
                if zero_bracket[x * d + y] && zero_bracket[y * d + w] && zero_bracket[w * d + x] {
                    continue;
                }
                let terms = [
                    sc.bracket_vectors(sc.bracket(x, y), &unit(d, w)),
                    sc.bracket_vectors(sc.bracket(y, w), &unit(d, x)),
                    sc.bracket_vectors(sc.bracket(w, x), &unit(d, y)),
                ];
                let bad = (0..d).any(|k| {
                    let s = terms[0][k].clone() + terms[1][k].clone() + terms[2][k].clone();
                    !s.is_negligible(tol)
                });
                if bad {
                    return fail(TwoStepViolation::Jacobi { x, y, w });
                }
            }
        }
    }
    TwoStepCertificate {
        triples_checked: triples,
        violation: None,
    }
}

fn unit<S: Scalar>(d: usize, k: usize) -> Vec<S> {
    let mut v = vec![S::zero(); d];
    v[k] = S::one();
    v
}

/// Basis of `ker j = {Z ∈ z : j_Z = 0}`. Empty iff there is no Euclidean factor.
pub fn kernel_of_j<S: Scalar>(j: &JMap<S>, tol: Tolerance) -> Vec<Vec<S>> {
    kernel_basis(&j.stacked(), tol)
}

/// Splitting `n = n₁ ⊕ ℝ^k` with `z = [n,n] ⊕ [n,n]^⊥`.
///
/// The core keeps the orthonormal basis of `v`, but its center is expressed in
/// an orthogonal basis `u_c` of `[n,n]` whose squared norms are
/// `center_gram[c]`; exact arithmetic cannot normalize these in general.
/// Structure constants of the core are `⟨[e_i, e_j], u_c⟩ / ⟨u_c, u_c⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedAlgebra<S> {
    pub core: MetricNilpotentAlgebra<S>,
    /// Basis `u_c` of the derived algebra, in the original z-coordinates.
    pub derived_basis: Vec<Vec<S>>,
    pub center_gram: Vec<S>,
    /// Orthogonal basis of the flat factor `[n,n]^⊥ ∩ z`.
    pub euclidean_basis: Vec<Vec<S>>,
}

impl<S: Scalar> ReducedAlgebra<S> {
    pub fn euclidean_rank(&self) -> usize {
        self.euclidean_basis.len()
    }

    /// The maps `j_{u_c}` of the core, i.e. `center_gram[c] · A_core[c]`.
    pub fn core_jmap(&self) -> JMap<S> {
        JMap {
            n: self.core.n(),
            mats: self
                .core
                .tensor()
                .iter()
                .zip(&self.center_gram)
                .map(|(t, g)| t.scale(g))
                .collect(),
        }
    }

    pub fn core_center_is_orthonormal(&self) -> bool {
        self.center_gram.iter().all(|g| g.is_one())
    }
}

pub fn reduce_euclidean_factor<S: Scalar>(
    alg: &MetricNilpotentAlgebra<S>,
    tol: Tolerance,
) -> Result<ReducedAlgebra<S>> {
    let n = alg.n();
    let brackets: Vec<Vec<S>> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| alg.bracket_basis(i, j))
        .collect();
    let derived_basis = orthogonal_basis(&brackets, tol);
    let center_gram: Vec<S> = derived_basis.iter().map(|u| dot(u, u)).collect();
    let j = j_from_brackets(alg)?;
    let euclidean_basis = orthogonal_basis(&kernel_of_j(&j, tol), tol);
    if derived_basis.len() + euclidean_basis.len() != alg.m() {
        return Err(Error::DimensionMismatch(format!(
            "derived algebra ({}) and kernel of j ({}) do not split z ({})",
            derived_basis.len(),
            euclidean_basis.len(),
            alg.m()
        )));
    }
    let core_tensor = derived_basis
        .iter()
        .zip(&center_gram)
        .map(|(u, g)| {
            let mut t = Matrix::zeros(n, n);
            for (ua, slice) in u.iter().zip(alg.tensor()) {
                if !ua.is_zero() {
                    t = t + slice.scale(ua);
                }
            }
            t.scale(&(S::one() / g.clone()))
        })
        .collect();
    Ok(ReducedAlgebra {
        core: MetricNilpotentAlgebra::from_tensor(n, core_tensor)?,
        derived_basis,
        center_gram,
        euclidean_basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, Rational};

    type Q = Rational;

    /// The two-dimensional-center example with `j_Z = (z₃ − z₄)·[[0,1],[-1,0]]`.
    pub(crate) fn euclidean_example() -> JMap<Q> {
        JMap::new(
            2,
            vec![
                Matrix::from_i64_rows(&[&[0, 1], &[-1, 0]]),
                Matrix::from_i64_rows(&[&[0, -1], &[1, 0]]),
            ],
        )
        .unwrap()
    }

    fn e(n: usize, k: usize) -> Vec<Q> {
        unit(n, k)
    }

    #[test]
    fn example_bracket_is_e3_minus_e4() {
        let j = euclidean_example();
        let br = bracket_from_j(&j, &e(2, 0), &e(2, 1)).unwrap();
        assert_eq!(br, vec![int::<Q>(1), int(-1)]);
    }

    #[test]
    fn bracket_of_vector_with_itself_vanishes() {
        let j = euclidean_example();
        let x = vec![int::<Q>(3), int(-7)];
        assert!(bracket_from_j(&j, &x, &x).unwrap().iter().all(Zero::is_zero));
    }

    #[test]
    fn bracket_rejects_wrong_dimensions() {
        let j = euclidean_example();
        assert!(matches!(
            bracket_from_j(&j, &e(3, 0), &e(2, 1)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn jmap_rejects_non_skew() {
        let err = JMap::new(2, vec![Matrix::<Q>::from_i64_rows(&[&[0, 1], &[1, 0]])]).unwrap_err();
        assert_eq!(err, Error::NotSkew { index: 1, row: 0, col: 1 });
    }

    #[test]
    fn abelian_algebra_has_zero_j() {
        let alg = MetricNilpotentAlgebra::<Q>::abelian(3, 2);
        let j = j_from_brackets(&alg).unwrap();
        assert!(j.matrices().iter().all(|m| m.is_zero_within(Tolerance::DEFAULT)));
        assert!(verify_two_step(&alg, Tolerance::DEFAULT).passed());
    }

    #[test]
    fn example_j_from_brackets_recovers_matrices() {
        let j = euclidean_example();
        let alg = MetricNilpotentAlgebra::from_jmap(&j);
        assert_eq!(alg.entry(0, 0, 1), &int::<Q>(1));
        assert_eq!(alg.entry(1, 0, 1), &int::<Q>(-1));
        assert_eq!(j_from_brackets(&alg).unwrap(), j);
    }

    #[test]
    fn corrupted_tensor_reports_triple() {
        // A[0][0][1] = 1 but A[0][1][0] = 0.
        let t = Matrix::<Q>::from_i64_rows(&[&[0, 1], &[0, 0]]);
        let alg = MetricNilpotentAlgebra::from_tensor(2, vec![t]).unwrap();
        let cert = verify_two_step(&alg, Tolerance::DEFAULT);
        assert_eq!(cert.violation, Some(TwoStepViolation::Antisymmetry { a: 0, i: 0, j: 1 }));
    }

    #[test]
    fn non_nilpotent_structure_is_rejected() {
        // so(3): [b0,b1] = b2 etc. with b2 declared central.
        let mut sc = StructureConstants::<Q>::zeros(3);
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            sc.set(i, j, k, int(1));
            sc.set(j, i, k, int(-1));
        }
        let cert = verify_two_step_structure(&sc, &[2], Tolerance::DEFAULT);
        assert!(matches!(cert.violation, Some(TwoStepViolation::NotCentral { .. })));
    }

    #[test]
    fn example_kernel_and_reduction() {
        let j = euclidean_example();
        assert_eq!(kernel_of_j(&j, Tolerance::DEFAULT), vec![vec![int::<Q>(1), int(1)]]);
        let red = reduce_euclidean_factor(&MetricNilpotentAlgebra::from_jmap(&j), Tolerance::DEFAULT).unwrap();
        assert_eq!(red.euclidean_rank(), 1);
        assert_eq!(red.derived_basis, vec![vec![int::<Q>(1), int(-1)]]);
        assert_eq!(red.center_gram, vec![int::<Q>(2)]);
        assert_eq!(red.core.n(), 2);
        assert_eq!(red.core.m(), 1);
        assert_eq!(red.core.tensor()[0], Matrix::from_i64_rows(&[&[0, 1], &[-1, 0]]));
        assert!(kernel_of_j(&red.core_jmap(), Tolerance::DEFAULT).is_empty());
    }

    #[test]
    fn zero_map_kernel_is_whole_center() {
        let j = JMap::<Q>::zero(4, 3);
        assert_eq!(kernel_of_j(&j, Tolerance::DEFAULT).len(), 3);
        let red = reduce_euclidean_factor(&MetricNilpotentAlgebra::from_jmap(&j), Tolerance::DEFAULT).unwrap();
        assert_eq!(red.euclidean_rank(), 3);
        assert_eq!(red.core.m(), 0);
    }

    #[test]
    fn degenerate_dimensions_are_legal() {
        let alg = MetricNilpotentAlgebra::<Q>::abelian(0, 2);
        assert!(verify_two_step(&alg, Tolerance::DEFAULT).passed());
        let red = reduce_euclidean_factor(&alg, Tolerance::DEFAULT).unwrap();
        assert_eq!(red.euclidean_rank(), 2);
        let alg = MetricNilpotentAlgebra::<Q>::abelian(3, 0);
        assert!(kernel_of_j(&j_from_brackets(&alg).unwrap(), Tolerance::DEFAULT).is_empty());
    }
}
