//! Levi-Civita connection and curvature of a left-invariant metric,
//! evaluated on an orthonormal frame of the Lie algebra.
//!
//! Conventions: `Γ[i][j][k] = ⟨∇_{b_i} b_j, b_k⟩`,
//! `R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_{[X,Y]}Z` and
//! `R[i][j][k][l] = ⟨R(b_i,b_j)b_k, b_l⟩`. Ricci is the trace
//! `Ric(Y,Z) = Σ_i ⟨R(b_i,Y)Z, b_i⟩`, so the Heisenberg group has
//! negative Ricci curvature along `v` and positive along `z`.

use crate::algebra::{JMap, StructureConstants};
use crate::linalg::{characteristic_polynomial, symmetric_eigenvalues, Matrix};
use crate::scalar::{Scalar, Tolerance};

#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionCoefficients<S> {
    dim: usize,
    data: Vec<S>,
}

impl<S: Scalar> ConnectionCoefficients<S> {
    pub fn zeros(dim: usize) -> Self {
        ConnectionCoefficients {
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

    /// Matrix of `∇_{b_i}` acting on frame coordinates.
    pub fn operator(&self, i: usize) -> Matrix<S> {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            for k in 0..self.dim {
                m[(k, j)] = self.get(i, j, k).clone();
            }
        }
        m
    }

    /// First `(i, j, k)` with `Γ[i][j][k] ≠ −Γ[i][k][j]`.
    pub fn metric_violation(&self, tol: Tolerance) -> Option<(usize, usize, usize)> {
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                for k in j..d {
                    if !self.get(i, j, k).approx_eq(&-self.get(i, k, j).clone(), tol) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }
}

/// `Γ[i][j][k] = ½(c[i][j][k] − c[j][k][i] + c[k][i][j])`.
pub fn koszul_connection<S: Scalar>(sc: &StructureConstants<S>) -> ConnectionCoefficients<S> {
    let d = sc.dim();
    let half = S::half();
    let mut gamma = ConnectionCoefficients::zeros(d);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let v = sc.get(i, j, k).clone() - sc.get(j, k, i).clone() + sc.get(k, i, j).clone();
                if !v.is_zero() {
                    gamma.set(i, j, k, half.clone() * v);
                }
            }
        }
    }
    gamma
}

/// Connection of a 2-step nilpotent algebra written directly from its `j`
/// map, frame `e_1…e_n, f_1…f_m`:
///
/// * `∇_U V = ½[U, V]`
/// * `∇_U Z = ∇_Z U = ½ j_Z U`
/// * `∇_Z W = 0`
///
/// The sign of the middle line follows the bracket convention
/// `⟨[X, Y], Z⟩ = ⟨X, j_Z Y⟩`.
pub fn two_step_connection<S: Scalar>(j: &JMap<S>) -> ConnectionCoefficients<S> {
    let (n, m) = (j.n(), j.m());
    let half = S::half();
    let mut gamma = ConnectionCoefficients::zeros(n + m);
    for (a, ja) in j.matrices().iter().enumerate() {
        for u in 0..n {
            for v in 0..n {
                let x = &ja[(u, v)];
                if !x.is_zero() {
                    gamma.set(u, v, n + a, half.clone() * x.clone());
                }
                let y = &ja[(v, u)];
                if !y.is_zero() {
                    gamma.set(u, n + a, v, half.clone() * y.clone());
                    gamma.set(n + a, u, v, half.clone() * y.clone());
                }
            }
        }
    }
    gamma
}

/// Curvature operators `R(b_i, b_j)` as matrices on frame coordinates, for
/// `i < j`, computed as `[∇_i, ∇_j] − ∇_{[b_i, b_j]}`.
fn curvature_operators<S: Scalar>(
    sc: &StructureConstants<S>,
    gamma: &ConnectionCoefficients<S>,
) -> Vec<(usize, usize, Matrix<S>)> {
    let d = sc.dim();
    let ops: Vec<Matrix<S>> = (0..d).map(|i| gamma.operator(i)).collect();
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).collect();
    pairs.into_iter().map(|(i, j)| {
        let mut r = ops[i].commutator(&ops[j]);
        for (t, c) in sc.bracket(i, j).iter().enumerate() {
            if !c.is_zero() {
                r = r - ops[t].scale(c);
            }
        }
        (i, j, r)
    })
    .collect()
}

/// Full 4-index curvature tensor. Memory grows as `dim⁴`; intended for
/// small algebras and symmetry checks.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor<S> {
    dim: usize,
    data: Vec<S>,
}

impl<S: Scalar> CurvatureTensor<S> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &S {
        let d = self.dim;
        &self.data[((i * d + j) * d + k) * d + l]
    }

    fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: S) {
        let d = self.dim;
        self.data[((i * d + j) * d + k) * d + l] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(num_traits::Zero::is_zero)
    }
}

pub fn curvature_tensor<S: Scalar>(sc: &StructureConstants<S>) -> CurvatureTensor<S> {
    let d = sc.dim();
    let gamma = koszul_connection(sc);
    let mut r = CurvatureTensor {
        dim: d,
        data: vec![S::zero(); d * d * d * d],
    };
    for (i, j, op) in curvature_operators(sc, &gamma) {
        for k in 0..d {
            for l in 0..d {
                let v = op[(l, k)].clone();
                if !v.is_zero() {
                    r.set(j, i, k, l, -v.clone());
                    r.set(i, j, k, l, v);
                }
            }
        }
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryViolation {
    /// `R_ijkl ≠ −R_jikl`
    FirstPair(usize, usize, usize, usize),
    /// `R_ijkl ≠ −R_ijlk`
    LastPair(usize, usize, usize, usize),
    /// `R_ijkl ≠ R_klij`
    PairSwap(usize, usize, usize, usize),
    /// `R_ijkl + R_jkil + R_kijl ≠ 0`
    Bianchi(usize, usize, usize, usize),
}

/// Exhaustive check of the algebraic curvature identities.
pub fn check_symmetries<S: Scalar>(r: &CurvatureTensor<S>, tol: Tolerance) -> Option<SymmetryViolation> {
    let d = r.dim();
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let x = r.get(i, j, k, l);
                    if !x.approx_eq(&-r.get(j, i, k, l).clone(), tol) {
                        return Some(SymmetryViolation::FirstPair(i, j, k, l));
                    }
                    if !x.approx_eq(&-r.get(i, j, l, k).clone(), tol) {
                        return Some(SymmetryViolation::LastPair(i, j, k, l));
                    }
                    if !x.approx_eq(r.get(k, l, i, j), tol) {
                        return Some(SymmetryViolation::PairSwap(i, j, k, l));
                    }
                    let bianchi = x.clone() + r.get(j, k, i, l).clone() + r.get(k, i, j, l).clone();
                    if !bianchi.is_negligible(tol) {
                        return Some(SymmetryViolation::Bianchi(i, j, k, l));
                    }
                }
            }
        }
    }
    None
}

pub fn ricci<S: Scalar>(sc: &StructureConstants<S>) -> Matrix<S> {
    summary_parts(sc).0
}

fn summary_parts<S: Scalar>(sc: &StructureConstants<S>) -> (Matrix<S>, S) {
    let d = sc.dim();
    let gamma = koszul_connection(sc);
    let mut ric = Matrix::<S>::zeros(d, d);
    let mut riem_sq = S::zero();
    let two = S::from_i64(2);
    for (i, j, op) in curvature_operators(sc, &gamma) {
        // op[(l, k)] = R_ijkl and R_jikl = −R_ijkl.
        riem_sq = riem_sq + two.clone() * op.frobenius_norm_sq();
        for k in 0..d {
            // Ric(b_j, b_k) += R_ijki ; Ric(b_i, b_k) += R_jikj = −R_ijkj.
            let rjk = &op[(i, k)];
            if !rjk.is_zero() {
                ric[(j, k)] = ric[(j, k)].clone() + rjk.clone();
            }
            let rik = &op[(j, k)];
            if !rik.is_zero() {
                ric[(i, k)] = ric[(i, k)].clone() - rik.clone();
            }
        }
    }
    (ric, riem_sq)
}

/// Frame-independent quadratic curvature invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureSummary<S> {
    pub scalar: S,
    pub ricci_sq: S,
    pub riem_sq: S,
    /// Coefficients `c_0 … c_d` of `det(λ − Ric)`, exact in rational mode.
    pub ricci_charpoly: Vec<S>,
    /// Eigenvalues of Ric, ascending.
    pub ricci_spectrum: Vec<f64>,
}

impl<S: Scalar> CurvatureSummary<S> {
    /// Exact mode compares every exact field with `==`. Float mode compares
    /// with relative tolerance and uses the spectrum instead of the
    /// characteristic polynomial.
    pub fn matches(&self, other: &Self, tol: Tolerance) -> bool {
        let scalars = self.scalar.approx_eq(&other.scalar, tol)
            && self.ricci_sq.approx_eq(&other.ricci_sq, tol)
            && self.riem_sq.approx_eq(&other.riem_sq, tol);
        if !scalars || self.ricci_spectrum.len() != other.ricci_spectrum.len() {
            return false;
        }
        match S::MODE {
            crate::scalar::Mode::Exact => self.ricci_charpoly == other.ricci_charpoly,
            crate::scalar::Mode::Float => self
                .ricci_spectrum
                .iter()
                .zip(&other.ricci_spectrum)
                .all(|(a, b)| a.approx_eq(b, tol)),
        }
    }
}

pub fn summary<S: Scalar>(sc: &StructureConstants<S>) -> CurvatureSummary<S> {
    let (ric, riem_sq) = summary_parts(sc);
    CurvatureSummary {
        scalar: ric.trace(),
        ricci_sq: ric.frobenius_norm_sq(),
        riem_sq,
        ricci_charpoly: characteristic_polynomial(&ric),
        ricci_spectrum: symmetric_eigenvalues(&ric),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::MetricNilpotentAlgebra;
    use crate::composition::{build_j_pq, Family, HTypeParams};
    use crate::scalar::{int, Rational};

    type Q = Rational;
    const TOL: Tolerance = Tolerance::DEFAULT;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    fn h3() -> StructureConstants<Q> {
        let j = JMap::new(2, vec![Matrix::from_i64_rows(&[&[0, 1], &[-1, 0]])]).unwrap();
        MetricNilpotentAlgebra::from_jmap(&j).structure_constants()
    }

    #[test]
    fn abelian_connection_and_curvature_vanish() {
        let sc = MetricNilpotentAlgebra::<Q>::abelian(3, 2).structure_constants();
        assert_eq!(koszul_connection(&sc), ConnectionCoefficients::zeros(5));
        assert!(curvature_tensor(&sc).is_zero());
    }

    #[test]
    fn heisenberg_connection_value() {
        // [e1, e2] = f1  =>  ⟨∇_{e1} e2, f1⟩ = ½
        let g = koszul_connection(&h3());
        assert_eq!(g.get(0, 1, 2), &q(1, 2));
        assert_eq!(g.get(1, 0, 2), &q(-1, 2));
    }

    #[test]
    fn heisenberg_curvature_values() {
        let sc = h3();
        let r = curvature_tensor(&sc);
        // K(e1, e2) = ⟨R(e1,e2)e2, e1⟩ = −3/4, K(e_i, f) = 1/4
        assert_eq!(r.get(0, 1, 1, 0), &q(-3, 4));
        assert_eq!(r.get(0, 2, 2, 0), &q(1, 4));
        let ric = ricci(&sc);
        assert_eq!(ric, Matrix::from_vec(3, 3, vec![q(-1, 2), int(0), int(0), int(0), q(-1, 2), int(0), int(0), int(0), q(1, 2)]));
        let s = summary(&sc);
        assert_eq!(s.scalar, q(-1, 2));
        assert_eq!(s.ricci_sq, q(3, 4));
        assert!(check_symmetries(&r, TOL).is_none());
    }

    #[test]
    fn koszul_matches_closed_form_on_quaternionic() {
        let (j, alg) = build_j_pq::<Q>(HTypeParams::new(Family::Quaternion, 1, 1).unwrap());
        let g = koszul_connection(&alg.structure_constants());
        assert_eq!(g, two_step_connection(&j));
        assert!(g.metric_violation(TOL).is_none());
    }

    #[test]
    fn summary_parts_agree_with_full_tensor() {
        let (_, alg) = build_j_pq::<Q>(HTypeParams::new(Family::Complex, 2, 0).unwrap());
        let sc = alg.structure_constants();
        let r = curvature_tensor(&sc);
        let d = sc.dim();
        let mut riem_sq = int::<Q>(0);
        let mut ric = Matrix::<Q>::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let x = r.get(i, j, k, l).clone();
                        riem_sq += x.clone() * x;
                    }
                    ric[(j, k)] = ric[(j, k)].clone() + r.get(i, j, k, i).clone();
                }
            }
        }
        let s = summary(&sc);
        assert_eq!(s.riem_sq, riem_sq);
        assert_eq!(ricci(&sc), ric);
    }

    #[test]
    fn corrupted_tensor_breaks_symmetry_check() {
        let mut r = curvature_tensor(&h3());
        r.set(0, 1, 1, 0, int(5));
        assert!(check_symmetries(&r, TOL).is_some());
    }
}
