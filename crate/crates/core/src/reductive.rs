//! Natural reductivity of 2-step nilpotent metric Lie algebras without
//! Euclidean factor.
//!
//! The general test requires two conditions:
//!
//! 1. `j(z)` is a Lie subalgebra of `so(v)`, so that `[J_a, J_b] = j(τ_{f_a} f_b)`
//!    defines a bilinear `τ` on `z`;
//! 2. every `τ_X` is skew-symmetric on `z`.
//!
//! The closed-form H-type rule (natural reductivity iff `dim z = 1`, or
//! `dim z = 3` with `v` isotypic) is provided separately so the two can be
//! cross-checked.

use std::fmt;

use num_traits::One;

use crate::algebra::{kernel_of_j, JMap, MetricNilpotentAlgebra, ReducedAlgebra};
use crate::composition::{isotypic_decomposition, verify_htype, Isotypy};
use crate::error::{Error, Result};
use crate::linalg::{solve_membership, Matrix};
use crate::scalar::{Scalar, Tolerance};

/// `τ_{u_a} u_b = Σ_c t[c][a][b] u_c`, together with the squared norms of the
/// center basis (all ones for an orthonormal basis).
#[derive(Debug, Clone, PartialEq)]
pub struct TauTensor<S> {
    m: usize,
    data: Vec<S>,
    center_gram: Vec<S>,
}

impl<S: Scalar> TauTensor<S> {
    pub fn zeros(m: usize) -> Self {
        TauTensor {
            m,
            data: vec![S::zero(); m * m * m],
            center_gram: vec![S::one(); m],
        }
    }

    pub fn with_center_gram(mut self, gram: Vec<S>) -> Self {
        assert_eq!(gram.len(), self.m, "center gram has wrong length");
        self.center_gram = gram;
        self
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, c: usize, a: usize, b: usize) -> &S {
        &self.data[(c * self.m + a) * self.m + b]
    }

    pub fn set(&mut self, c: usize, a: usize, b: usize, v: S) {
        let m = self.m;
        self.data[(c * m + a) * m + b] = v;
    }

    pub fn center_gram(&self) -> &[S] {
        &self.center_gram
    }

    /// Matrix of `τ_{u_a}` acting on z-coordinates (row `c`, column `b`).
    pub fn operator(&self, a: usize) -> Matrix<S> {
        let mut out = Matrix::zeros(self.m, self.m);
        for c in 0..self.m {
            for b in 0..self.m {
                out[(c, b)] = self.get(c, a, b).clone();
            }
        }
        out
    }

    /// `τ_X Y` for arbitrary `X, Y ∈ z`.
    pub fn apply(&self, x: &[S], y: &[S]) -> Vec<S> {
        (0..self.m)
            .map(|c| {
                let mut acc = S::zero();
                for (a, xa) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                    for (b, yb) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                        let t = self.get(c, a, b);
                        if !t.is_zero() {
                            acc = acc + xa.clone() * yb.clone() * t.clone();
                        }
                    }
                }
                acc
            })
            .collect()
    }
}

/// First pair `(a, b)`, `a < b`, whose commutator leaves `span{J_c}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosureWitness<S> {
    pub a: usize,
    pub b: usize,
    pub residual_sq: S,
    pub coeffs: Vec<S>,
}

impl<S: Scalar> ClosureWitness<S> {
    pub fn residual(&self) -> f64 {
        self.residual_sq.to_f64().max(0.0).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Closure<S> {
    Closed(TauTensor<S>),
    NotClosed(ClosureWitness<S>),
}

/// Condition 1. Fails with [`Error::EuclideanFactor`] when `ker j ≠ 0`.
pub fn check_closure<S: Scalar>(j: &JMap<S>, tol: Tolerance) -> Result<Closure<S>> {
    check_closure_with_gram(j, &vec![S::one(); j.m()], tol)
}

fn check_closure_with_gram<S: Scalar>(j: &JMap<S>, gram: &[S], tol: Tolerance) -> Result<Closure<S>> {
    let kernel = kernel_of_j(j, tol);
    if !kernel.is_empty() {
        return Err(Error::EuclideanFactor(kernel.len()));
    }
    let m = j.m();
    let mut tau = TauTensor::zeros(m).with_center_gram(gram.to_vec());
    for a in 0..m {
        for b in a + 1..m {
            let comm = j.get(a).commutator(j.get(b));
            let fit = solve_membership(&comm, j.matrices(), tol);
            if !fit.is_member(tol) {
                return Ok(Closure::NotClosed(ClosureWitness {
                    a,
                    b,
                    residual_sq: fit.residual_sq,
                    coeffs: fit.coeffs,
                }));
            }
            for (c, coef) in fit.coeffs.into_iter().enumerate() {
                tau.set(c, b, a, -coef.clone());
                tau.set(c, a, b, coef);
            }
        }
    }
    Ok(Closure::Closed(tau))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkewCertificate {
    pub triples_checked: usize,
    /// First `(c, a, b)` (0-based) with `g_c t[c][a][b] ≠ −g_b t[b][a][c]`.
    pub violation: Option<(usize, usize, usize)>,
}

impl SkewCertificate {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Condition 2: every `τ_X` lies in `so(z)`.
pub fn check_tau_skew<S: Scalar>(tau: &TauTensor<S>, tol: Tolerance) -> SkewCertificate {
    let m = tau.m();
    let g = tau.center_gram();
    let mut checked = 0;
    for c in 0..m {
        for a in 0..m {
            for b in 0..m {
                checked += 1;
                let lhs = g[c].clone() * tau.get(c, a, b).clone();
                let rhs = -(g[b].clone() * tau.get(b, a, c).clone());
                if !lhs.approx_eq(&rhs, tol) {
                    return SkewCertificate {
                        triples_checked: checked,
                        violation: Some((c, a, b)),
                    };
                }
            }
        }
    }
    SkewCertificate {
        triples_checked: checked,
        violation: None,
    }
}

/// Re-checks `Σ_c t[c][a][b] J_c = [J_a, J_b]` entrywise for every pair.
pub fn verify_tau_certificate<S: Scalar>(j: &JMap<S>, tau: &TauTensor<S>, tol: Tolerance) -> bool {
    if tau.m() != j.m() {
        return false;
    }
    for a in 0..j.m() {
        for b in 0..j.m() {
            let mut rebuilt = Matrix::zeros(j.n(), j.n());
            for c in 0..j.m() {
                let t = tau.get(c, a, b);
                if !t.is_zero() {
                    rebuilt = rebuilt + j.get(c).scale(t);
                }
            }
            if !(rebuilt - j.get(a).commutator(j.get(b))).is_zero_within(tol) {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum NrStatus {
    NaturallyReductive,
    NotNaturallyReductive,
    OutOfScope,
}

impl fmt::Display for NrStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NrStatus::NaturallyReductive => "NaturallyReductive",
            NrStatus::NotNaturallyReductive => "NotNaturallyReductive",
            NrStatus::OutOfScope => "OutOfScope(EuclideanFactor)",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NrWitness<S> {
    Closure(ClosureWitness<S>),
    Skew { c: usize, a: usize, b: usize, tau: TauTensor<S> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum NrVerdict<S> {
    NaturallyReductive { tau: TauTensor<S> },
    NotNaturallyReductive { witness: NrWitness<S> },
    /// The criterion only applies without Euclidean factor.
    OutOfScope { kernel_dim: usize },
}

impl<S> NrVerdict<S> {
    pub fn status(&self) -> NrStatus {
        match self {
            NrVerdict::NaturallyReductive { .. } => NrStatus::NaturallyReductive,
            NrVerdict::NotNaturallyReductive { .. } => NrStatus::NotNaturallyReductive,
            NrVerdict::OutOfScope { .. } => NrStatus::OutOfScope,
        }
    }

    pub fn tau(&self) -> Option<&TauTensor<S>> {
        match self {
            NrVerdict::NaturallyReductive { tau } => Some(tau),
            _ => None,
        }
    }
}

/// Kernel check, then closure, then skewness.
pub fn classify_nr<S: Scalar>(j: &JMap<S>, tol: Tolerance) -> NrVerdict<S> {
    classify_with_gram(j, &vec![S::one(); j.m()], tol)
}

pub fn classify_nr_algebra<S: Scalar>(alg: &MetricNilpotentAlgebra<S>, tol: Tolerance) -> Result<NrVerdict<S>> {
    Ok(classify_nr(&crate::algebra::j_from_brackets(alg)?, tol))
}

/// Classifies the core `n₁` of a Euclidean-factor splitting. The core center
/// basis is orthogonal with squared norms `center_gram`, which enters the
/// skewness condition.
pub fn classify_reduced_core<S: Scalar>(reduced: &ReducedAlgebra<S>, tol: Tolerance) -> NrVerdict<S> {
    classify_with_gram(&reduced.core_jmap(), &reduced.center_gram, tol)
}

fn classify_with_gram<S: Scalar>(j: &JMap<S>, gram: &[S], tol: Tolerance) -> NrVerdict<S> {
    let tau = match check_closure_with_gram(j, gram, tol) {
        Err(Error::EuclideanFactor(kernel_dim)) => return NrVerdict::OutOfScope { kernel_dim },
        Err(e) => unreachable!("closure check only fails on a Euclidean factor: {e}"),
        Ok(Closure::NotClosed(w)) => {
            return NrVerdict::NotNaturallyReductive {
                witness: NrWitness::Closure(w),
            }
        }
        Ok(Closure::Closed(tau)) => tau,
    };
    match check_tau_skew(&tau, tol).violation {
        None => NrVerdict::NaturallyReductive { tau },
        Some((c, a, b)) => NrVerdict::NotNaturallyReductive {
            witness: NrWitness::Skew { c, a, b, tau },
        },
    }
}

/// Statement-level verdict for H-type algebras, without certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosedFormVerdict {
    pub status: NrStatus,
    pub center_dim: usize,
    pub isotypy: Isotypy,
}

pub fn classify_nr_htype_closed_form<S: Scalar>(j: &JMap<S>, tol: Tolerance) -> Result<ClosedFormVerdict> {
    if j.m() == 0 {
        return Err(Error::NotHType("an H-type algebra needs dim z ≥ 1".into()));
    }
    if !verify_htype(j, tol).passed() {
        return Err(Error::NotHType("Clifford relation fails".into()));
    }
    let isotypy = isotypic_decomposition(j, tol)?;
    let reductive = match j.m() {
        1 => true,
        3 => isotypy.is_isotypic(),
        _ => false,
    };
    Ok(ClosedFormVerdict {
        status: if reductive {
            NrStatus::NaturallyReductive
        } else {
            NrStatus::NotNaturallyReductive
        },
        center_dim: j.m(),
        isotypy,
    })
}

/// True when every entry of the center gram is one.
pub fn is_orthonormal_center<S: Scalar>(tau: &TauTensor<S>) -> bool {
    tau.center_gram().iter().all(One::is_one)
}
