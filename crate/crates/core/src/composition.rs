//! Complex, quaternion and octonion arithmetic, the `j` maps of the H-type
//! algebras `n(p,q)`, Heisenberg-type verification and the isotypic
//! decomposition of `v` as a Clifford module.

use std::fmt;
use std::sync::OnceLock;

use crate::algebra::{JMap, MetricNilpotentAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, Matrix};
use crate::scalar::{Scalar, Tolerance};

/// Normed division algebra used to build `v = 𝔸^(p+q)` and `z = Im 𝔸`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Family {
    #[serde(rename = "C")]
    Complex,
    #[serde(rename = "H")]
    Quaternion,
    #[serde(rename = "O")]
    Octonion,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Complex, Family::Quaternion, Family::Octonion];

    pub fn dim(self) -> usize {
        match self {
            Family::Complex => 2,
            Family::Quaternion => 4,
            Family::Octonion => 8,
        }
    }

    /// dim z = dim Im 𝔸.
    pub fn center_dim(self) -> usize {
        self.dim() - 1
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Family::Complex => "C",
            Family::Quaternion => "H",
            Family::Octonion => "O",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Family> {
        match s {
            "C" | "ℂ" => Some(Family::Complex),
            "H" | "ℍ" => Some(Family::Quaternion),
            "O" | "𝕆" => Some(Family::Octonion),
            _ => None,
        }
    }

    /// The Cayley–Dickson table for this family.
    pub fn table(self) -> &'static MultiplicationTable {
        static TABLES: OnceLock<[MultiplicationTable; 3]> = OnceLock::new();
        let tables = TABLES.get_or_init(|| {
            [
                MultiplicationTable::cayley_dickson(2),
                MultiplicationTable::cayley_dickson(4),
                MultiplicationTable::cayley_dickson(8),
            ]
        });
        match self {
            Family::Complex => &tables[0],
            Family::Quaternion => &tables[1],
            Family::Octonion => &tables[2],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Signed basis multiplication table: `e_i · e_j = sign · e_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicationTable {
    dim: usize,
    entries: Vec<(usize, i8)>,
}

impl MultiplicationTable {
    /// Table obtained by repeated Cayley–Dickson doubling of ℝ with
    /// `(a, b)(c, d) = (ac − d̄b, da + bc̄)`. In the octonions this gives
    /// `e_{4+i} = e_i · e_4`.
    pub fn cayley_dickson(dim: usize) -> Self {
        assert!(dim.is_power_of_two(), "Cayley–Dickson dimension must be a power of two");
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let prod = cd_product(&unit_i64(dim, i), &unit_i64(dim, j));
                let (k, v) = prod
                    .iter()
                    .enumerate()
                    .find(|(_, v)| **v != 0)
                    .expect("basis products are signed basis elements");
                entries.push((k, *v as i8));
            }
        }
        MultiplicationTable { dim, entries }
    }

    /// A user-supplied table. Each entry must be a signed basis index.
    pub fn from_entries(dim: usize, entries: Vec<(usize, i8)>) -> Result<Self> {
        if entries.len() != dim * dim || entries.iter().any(|&(k, s)| k >= dim || s.abs() != 1) {
            return Err(Error::InvalidParams("malformed multiplication table".into()));
        }
        Ok(MultiplicationTable { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `(k, sign)` with `e_i · e_j = sign · e_k`.
    pub fn product(&self, i: usize, j: usize) -> (usize, i8) {
        self.entries[i * self.dim + j]
    }

    pub fn multiply<S: Scalar>(&self, x: &[S], y: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let (k, s) = self.product(i, j);
                let term = xi.clone() * yj.clone();
                out[k] = if s > 0 { out[k].clone() + term } else { out[k].clone() - term };
            }
        }
        out
    }

    /// Matrix of `X ↦ e_a · X`.
    pub fn left_matrix<S: Scalar>(&self, a: usize) -> Matrix<S> {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for l in 0..self.dim {
            let (k, s) = self.product(a, l);
            m[(k, l)] = S::from_i64(s as i64);
        }
        m
    }

    /// Matrix of `X ↦ X · e_a`.
    pub fn right_matrix<S: Scalar>(&self, a: usize) -> Matrix<S> {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for l in 0..self.dim {
            let (k, s) = self.product(l, a);
            m[(k, l)] = S::from_i64(s as i64);
        }
        m
    }
}

fn unit_i64(dim: usize, k: usize) -> Vec<i64> {
    let mut v = vec![0; dim];
    v[k] = 1;
    v
}

fn cd_conj(x: &[i64]) -> Vec<i64> {
    let mut out: Vec<i64> = x.iter().map(|v| -v).collect();
    out[0] = x[0];
    out
}

fn cd_product(x: &[i64], y: &[i64]) -> Vec<i64> {
    if x.len() == 1 {
        return vec![x[0] * y[0]];
    }
    let h = x.len() / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let ac = cd_product(a, c);
    let db = cd_product(&cd_conj(d), b);
    let da = cd_product(d, a);
    let bc = cd_product(b, &cd_conj(c));
    ac.iter()
        .zip(&db)
        .map(|(p, q)| p - q)
        .chain(da.iter().zip(&bc).map(|(p, q)| p + q))
        .collect()
}

/// Element of ℂ, ℍ or 𝕆 in the standard basis `{1, e₁, …}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositionElement<S> {
    family: Family,
    coords: Vec<S>,
}

impl<S: Scalar> CompositionElement<S> {
    pub fn new(family: Family, coords: Vec<S>) -> Result<Self> {
        if coords.len() != family.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} has dimension {}, got {} coordinates",
                family,
                family.dim(),
                coords.len()
            )));
        }
        Ok(CompositionElement { family, coords })
    }

    pub fn basis(family: Family, k: usize) -> Self {
        let mut coords = vec![S::zero(); family.dim()];
        coords[k] = S::one();
        CompositionElement { family, coords }
    }

    pub fn one(family: Family) -> Self {
        Self::basis(family, 0)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.family != other.family {
            return Err(Error::FamilyMismatch(self.family.symbol(), other.family.symbol()));
        }
        Ok(CompositionElement {
            family: self.family,
            coords: self.family.table().multiply(&self.coords, &other.coords),
        })
    }

    pub fn conj(&self) -> Self {
        let mut coords: Vec<S> = self.coords.iter().map(|c| -c.clone()).collect();
        coords[0] = self.coords[0].clone();
        CompositionElement { family: self.family, coords }
    }

    /// `‖x‖²`, exact for rational coordinates.
    pub fn norm_sq(&self) -> S {
        crate::linalg::dot(&self.coords, &self.coords)
    }

    pub fn add(&self, other: &Self) -> Self {
        CompositionElement {
            family: self.family,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        CompositionElement {
            family: self.family,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

/// Parameters `(𝔸, p, q)` naming the H-type algebra `n(p,q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct HTypeParams {
    family: Family,
    p: usize,
    q: usize,
}

impl HTypeParams {
    /// Requires `p + q ≥ 1`. Over ℂ left and right multiplication agree, so
    /// `(p, q)` is normalized to `(p + q, 0)`.
    pub fn new(family: Family, p: usize, q: usize) -> Result<Self> {
        if p + q == 0 {
            return Err(Error::InvalidParams("p + q ≥ 1 required".into()));
        }
        Ok(match family {
            Family::Complex => HTypeParams { family, p: p + q, q: 0 },
            _ => HTypeParams { family, p, q },
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// dim v = (p + q) · dim 𝔸
    pub fn n(&self) -> usize {
        (self.p + self.q) * self.family.dim()
    }

    /// dim z = dim 𝔸 − 1
    pub fn m(&self) -> usize {
        self.family.center_dim()
    }
}

impl fmt::Display for HTypeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n({},{}) over {}", self.p, self.q, self.family)
    }
}

/// `j_Z(X₁,…,X_p, X_{p+1},…,X_{p+q}) = (Z·X₁,…,Z·X_p, X_{p+1}·Z,…,X_{p+q}·Z)`
/// for `Z ∈ Im 𝔸`, with the family's Cayley–Dickson table.
pub fn build_j_pq<S: Scalar>(params: HTypeParams) -> (JMap<S>, MetricNilpotentAlgebra<S>) {
    build_j_pq_with_table(params, params.family().table())
}

/// Same as [`build_j_pq`] with an alternative multiplication table.
pub fn build_j_pq_with_table<S: Scalar>(
    params: HTypeParams,
    table: &MultiplicationTable,
) -> (JMap<S>, MetricNilpotentAlgebra<S>) {
    assert_eq!(table.dim(), params.family().dim(), "table dimension does not match family");
    let mats: Vec<Matrix<S>> = (1..table.dim())
        .map(|a| {
            let left = table.left_matrix::<S>(a);
            let right = table.right_matrix::<S>(a);
            let blocks: Vec<Matrix<S>> = std::iter::repeat_n(left, params.p())
                .chain(std::iter::repeat_n(right, params.q()))
                .collect();
            Matrix::block_diag(&blocks)
        })
        .collect();
    let j = JMap::new(params.n(), mats).expect("imaginary unit multiplication is skew");
    let alg = MetricNilpotentAlgebra::from_jmap(&j);
    (j, alg)
}

#[derive(Debug, Clone, PartialEq)]
pub enum HTypeViolation<S> {
    /// `J_a J_b + J_b J_a + 2δ_ab·Id = deviation ≠ 0` (0-based indices).
    Pair { a: usize, b: usize, deviation: Matrix<S> },
    /// `v = 0` with a nontrivial center: `j` cannot be injective.
    EmptyModule,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HTypeCertificate<S> {
    pub pairs_checked: usize,
    pub violation: Option<HTypeViolation<S>>,
}

impl<S> HTypeCertificate<S> {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks `J_a J_b + J_b J_a = −2δ_ab·Id` for all `a ≤ b`, which is the
/// polarized form of `j_Z² = −‖Z‖²·Id`.
pub fn verify_htype<S: Scalar>(j: &JMap<S>, tol: Tolerance) -> HTypeCertificate<S> {
    if j.n() == 0 && j.m() > 0 {
        return HTypeCertificate {
            pairs_checked: 0,
            violation: Some(HTypeViolation::EmptyModule),
        };
    }
    let id2 = Matrix::<S>::identity(j.n()).scale(&S::from_i64(2));
    let mut pairs = 0;
    for a in 0..j.m() {
        for b in a..j.m() {
            pairs += 1;
            let mut dev = j.get(a).anticommutator(j.get(b));
            if a == b {
                dev = dev + id2.clone();
            }
            if !dev.is_zero_within(tol) {
                return HTypeCertificate {
                    pairs_checked: pairs,
                    violation: Some(HTypeViolation::Pair { a, b, deviation: dev }),
                };
            }
        }
    }
    HTypeCertificate {
        pairs_checked: pairs,
        violation: None,
    }
}

/// `ω = J₁J₂⋯J_m`. For H-type maps with `m ≡ 3 (mod 4)` it is an involution
/// commuting with every `J_a`; its ±1 eigenspaces carry the two
/// inequivalent irreducible Clifford modules.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeElement<S> {
    pub omega: Matrix<S>,
}

impl<S: Scalar> VolumeElement<S> {
    pub fn of(j: &JMap<S>) -> Self {
        let omega = j
            .matrices()
            .iter()
            .fold(Matrix::identity(j.n()), |acc, m| acc.matmul(m));
        VolumeElement { omega }
    }

    pub fn is_involution(&self, tol: Tolerance) -> bool {
        let n = self.omega.rows();
        (self.omega.matmul(&self.omega) - Matrix::identity(n)).is_zero_within(tol)
    }

    pub fn commutes_with(&self, j: &JMap<S>, tol: Tolerance) -> bool {
        j.matrices().iter().all(|m| self.omega.commutator(m).is_zero_within(tol))
    }

    /// Dimensions of the `+1` and `−1` eigenspaces.
    pub fn eigenspace_dims(&self, tol: Tolerance) -> (usize, usize) {
        let id = Matrix::identity(self.omega.rows());
        let plus = kernel_basis(&(self.omega.clone() - id.clone()), tol).len();
        let minus = kernel_basis(&(self.omega.clone() + id), tol).len();
        (plus, minus)
    }
}

/// How `v` decomposes into irreducible `Cl(z)`-modules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Isotypy {
    /// `dim z ≢ 3 (mod 4)`: there is a single irreducible module.
    Trivial { m: usize },
    /// Unordered multiplicities `{p, q}`, stored as `(larger, smaller)`.
    Pair { larger: usize, smaller: usize },
}

impl Isotypy {
    pub fn pair(p: usize, q: usize) -> Self {
        Isotypy::Pair {
            larger: p.max(q),
            smaller: p.min(q),
        }
    }

    pub fn is_isotypic(&self) -> bool {
        match self {
            Isotypy::Trivial { .. } => true,
            Isotypy::Pair { smaller, .. } => *smaller == 0,
        }
    }
}

impl fmt::Display for Isotypy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Isotypy::Trivial { m } => write!(f, "isotypic (dim z = {m} is not 3 mod 4)"),
            Isotypy::Pair { larger, smaller } => write!(f, "{{{larger}, {smaller}}}"),
        }
    }
}

/// Dimension of the irreducible Clifford module for the supported centers.
pub fn irreducible_module_dim(m: usize) -> Option<usize> {
    match m {
        1 => Some(2),
        3 => Some(4),
        7 => Some(8),
        _ => None,
    }
}

pub fn isotypic_decomposition<S: Scalar>(j: &JMap<S>, tol: Tolerance) -> Result<Isotypy> {
    if let Some(v) = verify_htype(j, tol).violation {
        let why = match v {
            HTypeViolation::Pair { a, b, .. } => format!("pair ({}, {}) violates the Clifford relation", a + 1, b + 1),
            HTypeViolation::EmptyModule => "v is zero".to_string(),
        };
        return Err(Error::NotHType(why));
    }
    let m = j.m();
    if m % 4 != 3 {
        return Ok(Isotypy::Trivial { m });
    }
    let d = irreducible_module_dim(m).ok_or(Error::UnsupportedCenterDim(m))?;
    let omega = VolumeElement::of(j);
    if !omega.is_involution(tol) {
        return Err(Error::VolumeElementNotInvolution);
    }
    let (plus, minus) = omega.eigenspace_dims(tol);
    if plus + minus != j.n() || plus % d != 0 || minus % d != 0 {
        return Err(Error::NotHType(format!(
            "eigenspaces of the volume element ({plus}, {minus}) are not unions of {d}-dimensional modules"
        )));
    }
    Ok(Isotypy::pair(plus / d, minus / d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, Rational};

    type Q = Rational;

    fn e(f: Family, k: usize) -> CompositionElement<Q> {
        CompositionElement::basis(f, k)
    }

    #[test]
    fn quaternion_table() {
        let h = Family::Quaternion;
        assert_eq!(e(h, 1).multiply(&e(h, 2)).unwrap(), e(h, 3));
        assert_eq!(e(h, 2).multiply(&e(h, 1)).unwrap().coords()[3], int::<Q>(-1));
        assert_eq!(e(h, 1).multiply(&e(h, 1)).unwrap().coords()[0], int::<Q>(-1));
    }

    #[test]
    fn octonion_convention_and_non_associativity() {
        let o = Family::Octonion;
        for i in 1..4 {
            assert_eq!(e(o, i).multiply(&e(o, 4)).unwrap(), e(o, 4 + i));
        }
        let left = e(o, 1).multiply(&e(o, 2)).unwrap().multiply(&e(o, 4)).unwrap();
        let right = e(o, 1).multiply(&e(o, 2).multiply(&e(o, 4)).unwrap()).unwrap();
        assert_eq!(left, e(o, 7));
        assert_eq!(right.coords()[7], int::<Q>(-1));
    }

    #[test]
    fn unit_is_neutral() {
        for f in Family::ALL {
            let x = CompositionElement::new(f, (0..f.dim() as i64).map(|k| int::<Q>(k - 2)).collect()).unwrap();
            assert_eq!(CompositionElement::one(f).multiply(&x).unwrap(), x);
            assert_eq!(x.multiply(&CompositionElement::one(f)).unwrap(), x);
        }
    }

    #[test]
    fn family_mismatch_is_an_error() {
        let err = e(Family::Quaternion, 1).multiply(&e(Family::Octonion, 1)).unwrap_err();
        assert_eq!(err, Error::FamilyMismatch("H", "O"));
    }

    #[test]
    fn params_validation_and_complex_normalization() {
        assert!(HTypeParams::new(Family::Quaternion, 0, 0).is_err());
        let c = HTypeParams::new(Family::Complex, 1, 2).unwrap();
        assert_eq!((c.p(), c.q()), (3, 0));
        assert_eq!((c.n(), c.m()), (6, 1));
    }

    #[test]
    fn quaternion_n10_is_left_multiplication() {
        let (j, _) = build_j_pq::<Q>(HTypeParams::new(Family::Quaternion, 1, 0).unwrap());
        let table = Family::Quaternion.table();
        for a in 0..3 {
            assert_eq!(j.get(a), &table.left_matrix::<Q>(a + 1));
        }
    }

    #[test]
    fn quaternion_n11_blocks() {
        let (j, _) = build_j_pq::<Q>(HTypeParams::new(Family::Quaternion, 1, 1).unwrap());
        assert_eq!(j.n(), 8);
        let table = Family::Quaternion.table();
        for a in 0..3 {
            let expect = Matrix::block_diag(&[table.left_matrix::<Q>(a + 1), table.right_matrix(a + 1)]);
            assert_eq!(j.get(a), &expect);
        }
    }

    #[test]
    fn complex_blocks_are_rotation_generators() {
        let (j, _) = build_j_pq::<Q>(HTypeParams::new(Family::Complex, 3, 0).unwrap());
        assert_eq!(j.m(), 1);
        let rot = Matrix::<Q>::from_i64_rows(&[&[0, -1], &[1, 0]]);
        assert_eq!(j.get(0), &Matrix::block_diag(&[rot.clone(), rot.clone(), rot]));
    }

    #[test]
    fn euclidean_example_is_not_htype() {
        let j = JMap::new(
            2,
            vec![
                Matrix::<Q>::from_i64_rows(&[&[0, 1], &[-1, 0]]),
                Matrix::from_i64_rows(&[&[0, -1], &[1, 0]]),
            ],
        )
        .unwrap();
        let cert = verify_htype(&j, Tolerance::DEFAULT);
        assert!(matches!(cert.violation, Some(HTypeViolation::Pair { a: 0, b: 1, .. })));
    }

    #[test]
    fn empty_module_is_not_htype() {
        let j = JMap::<Q>::zero(0, 3);
        assert_eq!(verify_htype(&j, Tolerance::DEFAULT).violation, Some(HTypeViolation::EmptyModule));
    }

    #[test]
    fn isotypic_pairs_for_quaternions() {
        let tol = Tolerance::DEFAULT;
        let (j, _) = build_j_pq::<Q>(HTypeParams::new(Family::Quaternion, 2, 0).unwrap());
        assert_eq!(isotypic_decomposition(&j, tol).unwrap(), Isotypy::pair(2, 0));
        let (j, _) = build_j_pq::<Q>(HTypeParams::new(Family::Quaternion, 1, 1).unwrap());
        assert_eq!(isotypic_decomposition(&j, tol).unwrap(), Isotypy::pair(1, 1));
        let (j, _) = build_j_pq::<Q>(HTypeParams::new(Family::Complex, 3, 0).unwrap());
        assert_eq!(isotypic_decomposition(&j, tol).unwrap(), Isotypy::Trivial { m: 1 });
    }

    #[test]
    fn unsupported_center_dimension() {
        // Eleven anticommuting complex structures do not fit in small dims; a
        // non-H-type input is reported before the center dimension.
        let j = JMap::<Q>::zero(2, 11);
        assert!(matches!(isotypic_decomposition(&j, Tolerance::DEFAULT), Err(Error::NotHType(_))));
    }
}
