//! Built-in consistency suite run by the `selftest` verb.
//!
//! Every check is exact (rational arithmetic); random inputs come from a
//! fixed-seed generator so the run is deterministic.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{
    bracket_from_j, j_from_brackets, kernel_of_j, reduce_euclidean_factor, verify_two_step, JMap,
    MetricNilpotentAlgebra,
};
use crate::composition::{
    build_j_pq, isotypic_decomposition, verify_htype, CompositionElement, Family, HTypeParams, Isotypy,
    VolumeElement,
};
use crate::curvature::{check_symmetries, curvature_tensor, koszul_connection, two_step_connection};
use crate::dsl::AlgebraSpec;
use crate::linalg::{solve_membership, Matrix};
use crate::reductive::{classify_nr, classify_nr_htype_closed_form, verify_tau_certificate, NrStatus, NrVerdict, NrWitness};
use crate::report::{run_compare, Options};
use crate::scalar::{int, Rational, Scalar, Tolerance};

type Q = Rational;
const TOL: Tolerance = Tolerance::DEFAULT;
const SEED: u64 = 0x6e69_6c67_656f_6d31;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct CheckOutcome {
    pub criterion: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn params(f: Family, p: usize, q: usize) -> HTypeParams {
    HTypeParams::new(f, p, q).expect("p + q ≥ 1")
}

/// All `(family, p, q)` with `1 ≤ p + q ≤ max_sum`.
pub fn htype_sweep(families: &[Family], max_sum: usize) -> Vec<HTypeParams> {
    let mut out = Vec::new();
    for &f in families {
        for total in 1..=max_sum {
            for p in (0..=total).rev() {
                out.push(params(f, p, total - p));
            }
        }
    }
    out
}

/// The rank-one Euclidean-factor example: `j` sends `z₁ − z₂` to the
/// standard symplectic form on `ℝ²` and kills `z₁ + z₂`.
pub fn euclidean_example() -> JMap<Q> {
    JMap::new(
        2,
        vec![
            Matrix::from_i64_rows(&[&[0, 1], &[-1, 0]]),
            Matrix::from_i64_rows(&[&[0, -1], &[1, 0]]),
        ],
    )
    .expect("skew")
}

pub fn random_rational(rng: &mut impl Rng) -> Q {
    Q::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=5).into())
}

/// A random `j` map with small rational entries.
pub fn random_jmap(rng: &mut impl Rng, n: usize, m: usize) -> JMap<Q> {
    let mats = (0..m)
        .map(|_| {
            let mut a = Matrix::zeros(n, n);
            for i in 0..n {
                for k in i + 1..n {
                    let v = random_rational(rng);
                    a[(k, i)] = -v.clone();
                    a[(i, k)] = v;
                }
            }
            a
        })
        .collect();
    JMap::new(n, mats).expect("skew by construction")
}

fn expected_nr(p: &HTypeParams) -> bool {
    match p.m() {
        1 => true,
        3 => p.p().min(p.q()) == 0,
        _ => false,
    }
}

fn check(criterion: u8, name: &'static str, result: Result<String, String>) -> CheckOutcome {
    let (passed, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CheckOutcome {
        criterion,
        name,
        passed,
        detail,
    }
}

fn agreement_sweep() -> Result<String, String> {
    let sweep = htype_sweep(&Family::ALL, 3);
    for p in &sweep {
        let (j, _) = build_j_pq::<Q>(*p);
        let verdict = classify_nr(&j, TOL).status();
        let closed = classify_nr_htype_closed_form(&j, TOL).map_err(|e| format!("{p}: {e}"))?;
        let expected = if expected_nr(p) {
            NrStatus::NaturallyReductive
        } else {
            NrStatus::NotNaturallyReductive
        };
        if verdict != closed.status || verdict != expected {
            return Err(format!("{p}: classifier {verdict}, closed form {}, expected {expected}", closed.status));
        }
    }
    Ok(format!("{} algebras agree", sweep.len()))
}

fn headline_pair() -> Result<String, String> {
    let a = AlgebraSpec::constructor("N11", params(Family::Quaternion, 1, 1));
    let b = AlgebraSpec::constructor("N20", params(Family::Quaternion, 2, 0));
    let r = run_compare(&a, &b, &Options::default()).map_err(|e| e.to_string())?;
    if !(r.dims_equal && (r.first.dim_v, r.first.dim_z) == (8, 3)) {
        return Err("dimensions differ from (8, 3)".into());
    }
    if !r.both_htype || !r.summaries_equal || r.nr_differs != Some(true) {
        return Err(format!(
            "H-type {}, summaries equal {}, nr differs {:?}",
            r.both_htype, r.summaries_equal, r.nr_differs
        ));
    }
    let (j20, _) = build_j_pq::<Q>(params(Family::Quaternion, 2, 0));
    let NrVerdict::NaturallyReductive { tau } = classify_nr(&j20, TOL) else {
        return Err("n(2,0) not naturally reductive".into());
    };
    if !verify_tau_certificate(&j20, &tau, TOL) {
        return Err("tau certificate fails reconstruction".into());
    }
    let (j11, _) = build_j_pq::<Q>(params(Family::Quaternion, 1, 1));
    let NrVerdict::NotNaturallyReductive {
        witness: NrWitness::Closure(w),
    } = classify_nr(&j11, TOL)
    else {
        return Err("n(1,1) lacks a closure witness".into());
    };
    let again = solve_membership(&j11.get(w.a).commutator(j11.get(w.b)), j11.matrices(), TOL);
    if again.residual_sq <= Q::from_i64(0) || again.residual_sq != w.residual_sq {
        return Err(format!("witness residual does not re-verify ({})", again.residual_sq));
    }
    Ok(format!("headline flag set, witness residual^2 = {}", w.residual_sq))
}

fn euclidean_factor() -> Result<String, String> {
    let j = euclidean_example();
    let kernel = kernel_of_j(&j, TOL);
    if kernel.len() != 1 || kernel[0][0] != kernel[0][1] || kernel[0][0] == Q::from_i64(0) {
        return Err(format!("kernel {kernel:?}"));
    }
    let e1 = [int::<Q>(1), int(0)];
    let e2 = [int::<Q>(0), int(1)];
    let br = bracket_from_j(&j, &e1, &e2).map_err(|e| e.to_string())?;
    if br != [int::<Q>(1), int(-1)] {
        return Err(format!("[e1, e2] = {br:?}"));
    }
    let alg = MetricNilpotentAlgebra::from_jmap(&j);
    let reduced = reduce_euclidean_factor(&alg, TOL).map_err(|e| e.to_string())?;
    let core = &reduced.core;
    let heisenberg = core.n() == 2 && core.m() == 1 && !core.tensor()[0][(0, 1)].is_zero() && verify_two_step(core, TOL).passed();
    if reduced.euclidean_rank() != 1 || !heisenberg {
        return Err("reduction is not H3 plus a line".into());
    }
    if classify_nr(&j, TOL).status() != NrStatus::OutOfScope {
        return Err("Euclidean input not flagged out of scope".into());
    }
    Ok("kernel span{(1,1)}, [e1,e2] = e3 - e4, core H3".into())
}

fn bracket_and_j(rng: &mut ChaCha8Rng) -> Result<String, String> {
    for trial in 0..100 {
        let n = rng.gen_range(1..=5);
        let m = rng.gen_range(1..=3);
        let j = random_jmap(rng, n, m);
        let alg = MetricNilpotentAlgebra::from_jmap(&j);
        if j_from_brackets(&alg).map_err(|e| e.to_string())? != j {
            return Err(format!("round trip fails on trial {trial}"));
        }
        let x: Vec<Q> = (0..n).map(|_| random_rational(rng)).collect();
        let y: Vec<Q> = (0..n).map(|_| random_rational(rng)).collect();
        let direct = bracket_from_j(&j, &x, &y).map_err(|e| e.to_string())?;
        let sc = alg.structure_constants();
        let mut xf = x.clone();
        xf.resize(n + m, int(0));
        let mut yf = y.clone();
        yf.resize(n + m, int(0));
        if sc.bracket_vectors(&xf, &yf)[n..] != direct[..] {
            return Err(format!("bracket mismatch on trial {trial}"));
        }
    }
    let sweep = htype_sweep(&Family::ALL, 3);
    for p in &sweep {
        let (j, _) = build_j_pq::<Q>(*p);
        if !verify_htype(&j, TOL).passed() {
            return Err(format!("{p} fails the H-type check"));
        }
        let id = Matrix::<Q>::identity(j.n());
        for a in 0..j.m() {
            for b in 0..j.m() {
                let expected = if a == b { id.scale(&int(-2)) } else { Matrix::zeros(j.n(), j.n()) };
                if j.get(a).anticommutator(j.get(b)) != expected {
                    return Err(format!("{p}: polarized identity fails at ({}, {})", a + 1, b + 1));
                }
            }
        }
        if !kernel_of_j(&j, TOL).is_empty() {
            return Err(format!("{p}: j has a kernel"));
        }
    }
    Ok(format!("100 random round trips, {} H-type constructions", sweep.len()))
}

fn isotypic() -> Result<String, String> {
    let sweep = htype_sweep(&[Family::Quaternion, Family::Octonion], 4);
    for p in &sweep {
        let (j, _) = build_j_pq::<Q>(*p);
        let got = isotypic_decomposition(&j, TOL).map_err(|e| format!("{p}: {e}"))?;
        if got != Isotypy::pair(p.p(), p.q()) {
            return Err(format!("{p}: recovered {got}"));
        }
        let omega = VolumeElement::of(&j);
        if !omega.is_involution(TOL) || !omega.commutes_with(&j, TOL) {
            return Err(format!("{p}: volume element is not a commuting involution"));
        }
    }
    Ok(format!("{} algebras", sweep.len()))
}

fn curvature(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let mut algebras: Vec<(String, JMap<Q>)> = htype_sweep(&Family::ALL, 3)
        .into_iter()
        .map(|p| (p.to_string(), build_j_pq::<Q>(p).0))
        .collect();
    algebras.push(("euclidean example".into(), euclidean_example()));
    for k in 0..6 {
        let (n, m) = (rng.gen_range(2..=6), rng.gen_range(1..=3));
        algebras.push((format!("random #{k}"), random_jmap(rng, n, m)));
    }
    let mut exhaustive = 0;
    for (name, j) in &algebras {
        let sc = MetricNilpotentAlgebra::from_jmap(j).structure_constants();
        if koszul_connection(&sc) != two_step_connection(j) {
            return Err(format!("{name}: Koszul connection differs from the closed form"));
        }
        if sc.dim() <= 12 {
            let r = curvature_tensor(&sc);
            if let Some(v) = check_symmetries(&r, TOL) {
                return Err(format!("{name}: {v:?}"));
            }
            exhaustive += 1;
        }
    }
    for (n, m) in [(1, 0), (3, 2), (4, 4)] {
        let sc = MetricNilpotentAlgebra::<Q>::abelian(n, m).structure_constants();
        if !curvature_tensor(&sc).is_zero() {
            return Err(format!("abelian ({n}, {m}) has curvature"));
        }
    }
    Ok(format!("{} connections, {exhaustive} exhaustive symmetry checks", algebras.len()))
}

fn composition(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let laws = |x: &CompositionElement<Q>, y: &CompositionElement<Q>| -> Result<(), String> {
        let xy = x.multiply(y).map_err(|e| e.to_string())?;
        if xy.norm_sq() != x.norm_sq() * y.norm_sq() {
            return Err(format!("norm not multiplicative on {:?}, {:?}", x.coords(), y.coords()));
        }
        let xx = x.multiply(x).map_err(|e| e.to_string())?;
        let left = xx.multiply(y).map_err(|e| e.to_string())? == x.multiply(&xy).map_err(|e| e.to_string())?;
        let yx = y.multiply(x).map_err(|e| e.to_string())?;
        let right = yx.multiply(x).map_err(|e| e.to_string())? == y.multiply(&xx).map_err(|e| e.to_string())?;
        if !(left && right) {
            return Err(format!("alternativity fails on {:?}, {:?}", x.coords(), y.coords()));
        }
        Ok(())
    };
    let mut pairs = 0;
    for f in Family::ALL {
        for a in 0..f.dim() {
            for b in 0..f.dim() {
                laws(&CompositionElement::basis(f, a), &CompositionElement::basis(f, b))?;
                pairs += 1;
            }
        }
        for _ in 0..1000 {
            let mut element = || {
                CompositionElement::new(f, (0..f.dim()).map(|_| random_rational(rng)).collect()).expect("length")
            };
            let (x, y) = (element(), element());
            laws(&x, &y)?;
            pairs += 1;
        }
    }
    let e = |k| CompositionElement::<Q>::basis(Family::Octonion, k);
    let lhs = e(1).multiply(&e(2)).and_then(|p| p.multiply(&e(4))).map_err(|e| e.to_string())?;
    let rhs = e(2).multiply(&e(4)).and_then(|p| e(1).multiply(&p)).map_err(|e| e.to_string())?;
    if lhs == rhs {
        return Err("octonions associate on (e1, e2, e4)".into());
    }
    Ok(format!("{pairs} pairs; (e1 e2) e4 != e1 (e2 e4)"))
}

/// Runs criteria 1 to 7 and returns one outcome per criterion.
pub fn run_selftest() -> Vec<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    vec![
        check(1, "agreement sweep", agreement_sweep()),
        check(2, "headline pair", headline_pair()),
        check(3, "Euclidean factor example", euclidean_factor()),
        check(4, "bracket and j maps", bracket_and_j(&mut rng)),
        check(5, "isotypic decomposition", isotypic()),
        check(6, "curvature", curvature(&mut rng)),
        check(7, "composition laws", composition(&mut rng)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_selftest_check_passes() {
        for outcome in run_selftest() {
            assert!(outcome.passed, "criterion {}: {}", outcome.criterion, outcome.detail);
        }
    }

    #[test]
    fn sweep_sizes() {
        assert_eq!(htype_sweep(&[Family::Quaternion], 3).len(), 9);
        assert_eq!(htype_sweep(&[Family::Octonion], 4).len(), 14);
    }
}
