use nalgebra::DMatrix;
use num_traits::Zero;
use proptest::prelude::*;

use nilgeom::algebra::{bracket_from_j, j_from_brackets, JMap, MetricNilpotentAlgebra};
use nilgeom::composition::{build_j_pq, Family, HTypeParams};
use nilgeom::curvature::{koszul_connection, summary, two_step_connection};
use nilgeom::dsl::{export, parse_spec, ExportFormat};
use nilgeom::linalg::{kernel_basis, rank, solve_membership, Matrix};
use nilgeom::reductive::classify_nr;
use nilgeom::scalar::{Rational, Tolerance};

type Q = Rational;
const TOL: Tolerance = Tolerance::DEFAULT;

fn small_q() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Q::new(n.into(), d.into()))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix<Q>> {
    prop::collection::vec(small_q(), rows * cols).prop_map(move |v| Matrix::from_vec(rows, cols, v))
}

fn skew(n: usize) -> impl Strategy<Value = Matrix<Q>> {
    prop::collection::vec(small_q(), n * n).prop_map(move |v| {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                m[(i, j)] = v[i * n + j].clone();
                m[(j, i)] = -v[i * n + j].clone();
            }
        }
        m
    })
}

fn jmap() -> impl Strategy<Value = JMap<Q>> {
    (1usize..=5, 1usize..=3)
        .prop_flat_map(|(n, m)| prop::collection::vec(skew(n), m).prop_map(move |mats| JMap::new(n, mats).unwrap()))
}

fn htype_params() -> impl Strategy<Value = HTypeParams> {
    (prop::sample::select(vec![Family::Complex, Family::Quaternion]), 0usize..=2, 0usize..=2)
        .prop_filter("p + q ≥ 1", |(_, p, q)| p + q >= 1)
        .prop_map(|(f, p, q)| HTypeParams::new(f, p, q).unwrap())
}

/// Signed permutation matrix `P` with `P e_i = sign_i e_{perm_i}`.
fn signed_permutation(n: usize) -> impl Strategy<Value = Matrix<Q>> {
    (Just((0..n).collect::<Vec<_>>()).prop_shuffle(), prop::collection::vec(any::<bool>(), n)).prop_map(
        move |(perm, signs)| {
            let mut p = Matrix::zeros(n, n);
            for (i, (&t, &neg)) in perm.iter().zip(&signs).enumerate() {
                p[(t, i)] = Q::from_integer(if neg { (-1).into() } else { 1.into() });
            }
            p
        },
    )
}

fn orthogonal(d: usize, seed: Vec<f64>) -> Matrix<f64> {
    let qr = DMatrix::from_row_slice(d, d, &seed).qr();
    let q = qr.q();
    Matrix::from_vec(d, d, (0..d * d).map(|k| q[(k / d, k % d)]).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kernel_vectors_are_annihilated(m in (1usize..=5, 1usize..=6).prop_flat_map(|(r, c)| matrix(r, c))) {
        let cols = m.cols();
        let kernel = kernel_basis(&m, TOL);
        prop_assert_eq!(kernel.len() + rank(&m, TOL), cols);
        for k in &kernel {
            prop_assert!(m.apply(k).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn exact_and_float_kernels_agree_on_integer_matrices(v in prop::collection::vec(-3i64..=3, 12)) {
        let m = Matrix::<Q>::from_vec(3, 4, v.iter().map(|&x| Q::from_integer(x.into())).collect());
        prop_assert_eq!(kernel_basis(&m, TOL).len(), kernel_basis(&m.to_f64(), TOL).len());
    }

    #[test]
    fn membership_ignores_basis_order(
        basis in prop::collection::vec(matrix(3, 3), 1..=4),
        target in matrix(3, 3),
        rotate in 0usize..4,
    ) {
        let mut permuted = basis.clone();
        permuted.rotate_left(rotate % basis.len());
        permuted.reverse();
        let a = solve_membership(&target, &basis, TOL);
        let b = solve_membership(&target, &permuted, TOL);
        prop_assert_eq!(a.residual_sq, b.residual_sq);
    }

    #[test]
    fn exact_and_float_membership_agree(basis in prop::collection::vec(matrix(3, 3), 1..=3), target in matrix(3, 3)) {
        let exact = solve_membership(&target, &basis, TOL).residual();
        let fb: Vec<Matrix<f64>> = basis.iter().map(Matrix::to_f64).collect();
        let float = solve_membership(&target.to_f64(), &fb, TOL).residual();
        prop_assert!((exact - float).abs() <= 1e-6 * exact.max(1.0), "exact {} float {}", exact, float);
    }

    #[test]
    fn bracket_and_j_round_trip(j in jmap(), xs in prop::collection::vec(small_q(), 10)) {
        let alg = MetricNilpotentAlgebra::from_jmap(&j);
        prop_assert_eq!(&j_from_brackets(&alg).unwrap(), &j);
        let n = j.n();
        let (x, y) = (&xs[..n], &xs[5..5 + n]);
        let br = bracket_from_j(&j, x, y).unwrap();
        let yx = bracket_from_j(&j, y, x).unwrap();
        for (a, b) in br.iter().zip(&yx) {
            prop_assert_eq!(a.clone(), -b.clone());
        }
    }

    #[test]
    fn two_step_connection_matches_koszul(j in jmap()) {
        let sc = MetricNilpotentAlgebra::from_jmap(&j).structure_constants();
        prop_assert_eq!(koszul_connection(&sc), two_step_connection(&j));
    }

    #[test]
    fn nr_is_invariant_under_signed_permutations(
        (params, pv, pz) in htype_params().prop_flat_map(|p| (Just(p), signed_permutation(p.n()), signed_permutation(p.m()))),
    ) {
        let (j, _) = build_j_pq::<Q>(params);
        let conjugated = j.conjugate(&pv).unwrap();
        // J'_a = Σ_b pz[b][a] J_b.
        let mats = (0..j.m())
            .map(|a| (0..j.m()).fold(Matrix::zeros(j.n(), j.n()), |acc, b| acc + conjugated.get(b).scale(&pz[(b, a)])))
            .collect();
        let moved = JMap::new(j.n(), mats).unwrap();
        prop_assert_eq!(classify_nr(&j, TOL).status(), classify_nr(&moved, TOL).status());
    }

    #[test]
    fn float_summary_is_frame_independent(j in jmap(), seed in prop::collection::vec(-1.0f64..1.0, 64)) {
        let alg = MetricNilpotentAlgebra::from_jmap(&j.to_f64());
        let sc = alg.structure_constants();
        let d = sc.dim();
        prop_assume!(d <= 8);
        let q = orthogonal(d, seed[..d * d].to_vec());
        let (s, t) = (summary(&sc), summary(&sc.change_frame(&q)));
        let tol = Tolerance(1e-8);
        prop_assert!(s.matches(&t, tol), "{:?} vs {:?}", s, t);
    }

    #[test]
    fn spec_export_round_trips(j in jmap()) {
        let text = {
            let rows = |m: &Matrix<Q>| m.to_rows().iter()
                .map(|r| format!("[{}]", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
                .collect::<Vec<_>>().join(", ");
            let mut s = format!("algebra R {{ dim_v = {}; dim_z = {};", j.n(), j.m());
            for (a, m) in j.matrices().iter().enumerate() {
                s.push_str(&format!(" J{} = [{}];", a + 1, rows(m)));
            }
            s.push_str(" }");
            s
        };
        let specs = parse_spec(&text).unwrap();
        prop_assert_eq!(specs[0].jmap::<Q>(), j.clone());
        let again = parse_spec(&export(&specs, ExportFormat::Spec)).unwrap();
        prop_assert_eq!(again[0].jmap::<Q>(), j);
    }
}
