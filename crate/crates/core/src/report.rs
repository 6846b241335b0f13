//! Single-algebra and pair reports, in text and JSON (`"schema": 1`).
//!
//! All indices in reports are 1-based.

use std::fmt::Write as _;

use serde::Serialize;

use crate::algebra::{
    kernel_of_j, reduce_euclidean_factor, verify_two_step, JMap, MetricNilpotentAlgebra, ReducedAlgebra,
    TwoStepCertificate, TwoStepViolation,
};
use crate::composition::{isotypic_decomposition, verify_htype, HTypeCertificate, HTypeViolation, Isotypy};
use crate::curvature::{summary, CurvatureSummary};
use crate::dsl::{AlgebraSpec, SpecSource};
use crate::error::Error;
use crate::reductive::{
    classify_nr, classify_nr_htype_closed_form, classify_reduced_core, verify_tau_certificate, ClosedFormVerdict,
    NrStatus, NrVerdict, NrWitness, TauTensor,
};
use crate::scalar::{Mode, Rational, Scalar, Tolerance};

pub const SCHEMA_VERSION: u32 = 1;

pub const HEADLINE: &str = "spectrally indistinguishable necessary invariants, NR property differs";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    pub mode: Mode,
    pub tol: Tolerance,
    /// Also classify the core of a Euclidean-factor splitting.
    pub reduce: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            mode: Mode::Exact,
            tol: Tolerance::DEFAULT,
            reduce: false,
        }
    }
}

/// Failures of the report drivers, tagged with the module that raised them.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReportError {
    #[error("[algebra-core] {0}")]
    Algebra(Error),
    #[error("[cli-report] {0}")]
    Selection(String),
}

/// Typed results for one algebra in one arithmetic.
#[derive(Debug, Clone)]
pub struct Analysis<S> {
    pub name: String,
    pub jmap: JMap<S>,
    pub algebra: MetricNilpotentAlgebra<S>,
    pub two_step: TwoStepCertificate,
    pub htype: HTypeCertificate<S>,
    pub isotypy: Option<Result<Isotypy, Error>>,
    pub kernel: Vec<Vec<S>>,
    pub reduced: Option<ReducedAlgebra<S>>,
    pub core_verdict: Option<NrVerdict<S>>,
    pub core_tau_verified: Option<bool>,
    pub core_is_heisenberg: bool,
    pub verdict: NrVerdict<S>,
    /// Independent re-check of the returned certificate against `j`.
    pub tau_verified: Option<bool>,
    pub closed_form: Option<Result<ClosedFormVerdict, Error>>,
    pub curvature: CurvatureSummary<S>,
}

pub fn analyze<S: Scalar>(spec: &AlgebraSpec, opts: &Options) -> Result<Analysis<S>, ReportError> {
    let tol = opts.tol;
    let jmap: JMap<S> = spec.jmap();
    let algebra = MetricNilpotentAlgebra::from_jmap(&jmap);
    let two_step = verify_two_step(&algebra, tol);
    let htype = verify_htype(&jmap, tol);
    let isotypy = htype.passed().then(|| isotypic_decomposition(&jmap, tol));
    let kernel = kernel_of_j(&jmap, tol);
    let reduced = if kernel.is_empty() {
        None
    } else {
        Some(reduce_euclidean_factor(&algebra, tol).map_err(ReportError::Algebra)?)
    };
    let core_verdict = reduced
        .as_ref()
        .filter(|_| opts.reduce)
        .map(|r| classify_reduced_core(r, tol));
    let core_tau_verified = reduced.as_ref().zip(core_verdict.as_ref()).and_then(|(r, v)| {
        v.tau().map(|tau| verify_tau_certificate(&r.core_jmap(), tau, tol))
    });
    let core_is_heisenberg = reduced
        .as_ref()
        .is_some_and(|r| r.core.m() == 1 && r.core.n() > 0 && kernel_of_j(&r.core_jmap(), tol).is_empty());
    let verdict = classify_nr(&jmap, tol);
    let tau_verified = verdict.tau().map(|tau| verify_tau_certificate(&jmap, tau, tol));
    let closed_form = htype.passed().then(|| classify_nr_htype_closed_form(&jmap, tol));
    let curvature = summary(&algebra.structure_constants());
    Ok(Analysis {
        name: spec.name.clone(),
        jmap,
        algebra,
        two_step,
        htype,
        isotypy,
        kernel,
        reduced,
        core_verdict,
        core_tau_verified,
        core_is_heisenberg,
        verdict,
        tau_verified,
        closed_form,
        curvature,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct ConstructorReport {
    pub family: String,
    pub p: usize,
    pub q: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct CheckReport {
    pub passed: bool,
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct IsotypyReport {
    /// `pair`, `trivial` or `unavailable`.
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub isotypic: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct TauReport {
    /// Nonzero entries `[c, a, b, value]` of `τ_{J_a} J_b = Σ_c value · J_c`.
    pub entries: Vec<(usize, usize, usize, String)>,
    pub center_gram: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reconstruction_verified: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WitnessReport {
    /// `[J_a, J_b] ∉ span{J_c}`.
    #[serde(rename_all = "kebab-case")]
    Closure {
        a: usize,
        b: usize,
        residual_sq: String,
        residual: f64,
    },
    /// `τ` breaks skewness at `(c, a, b)`.
    #[serde(rename_all = "kebab-case")]
    Skew { c: usize, a: usize, b: usize, tau: TauReport },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct NrReport {
    pub status: NrStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<TauReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel_dim: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct CoreReport {
    pub dim_v: usize,
    pub dim_z: usize,
    /// One-dimensional center and nondegenerate bracket.
    pub heisenberg: bool,
    /// Squared norms of the orthogonal center basis of the core.
    pub center_gram: Vec<String>,
    pub derived_basis: Vec<Vec<String>>,
    /// `J` matrices of the core in that basis.
    pub j: Vec<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nr: Option<NrReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct EuclideanReport {
    pub rank: usize,
    pub kernel_basis: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduced_core: Option<CoreReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct ClosedFormReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub status: Option<NrStatus>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agrees: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct CurvatureReport {
    pub scalar: String,
    pub ricci_sq: String,
    pub riem_sq: String,
    pub ricci_charpoly: Vec<String>,
    pub ricci_spectrum: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct AlgebraReport {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constructor: Option<ConstructorReport>,
    pub dim_v: usize,
    pub dim_z: usize,
    pub two_step: CheckReport,
    pub htype: CheckReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub isotypy: Option<IsotypyReport>,
    pub euclidean: EuclideanReport,
    pub nr: NrReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<ClosedFormReport>,
    pub curvature: CurvatureReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct ClassifyReport {
    pub schema: u32,
    pub mode: Mode,
    pub algebras: Vec<AlgebraReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct PairReport {
    pub schema: u32,
    pub mode: Mode,
    pub first: AlgebraReport,
    pub second: AlgebraReport,
    pub dims_equal: bool,
    pub both_htype: bool,
    pub summaries_equal: bool,
    /// `None` unless both NR verdicts are in scope.
    pub nr_differs: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub headline: Option<String>,
}

fn strings<S: Scalar>(v: &[S]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn tau_report<S: Scalar>(tau: &TauTensor<S>, verified: Option<bool>) -> TauReport {
    let m = tau.m();
    let mut entries = Vec::new();
    for c in 0..m {
        for a in 0..m {
            for b in 0..m {
                let v = tau.get(c, a, b);
                if !v.is_zero() {
                    entries.push((c + 1, a + 1, b + 1, v.to_string()));
                }
            }
        }
    }
    TauReport {
        entries,
        center_gram: strings(tau.center_gram()),
        reconstruction_verified: verified,
    }
}

fn nr_report<S: Scalar>(verdict: &NrVerdict<S>, verified: Option<bool>) -> NrReport {
    let mut r = NrReport {
        status: verdict.status(),
        tau: None,
        witness: None,
        kernel_dim: None,
    };
    match verdict {
        NrVerdict::NaturallyReductive { tau } => r.tau = Some(tau_report(tau, verified)),
        NrVerdict::NotNaturallyReductive { witness } => {
            r.witness = Some(match witness {
                NrWitness::Closure(w) => WitnessReport::Closure {
                    a: w.a + 1,
                    b: w.b + 1,
                    residual_sq: w.residual_sq.to_string(),
                    residual: w.residual(),
                },
                NrWitness::Skew { c, a, b, tau } => WitnessReport::Skew {
                    c: c + 1,
                    a: a + 1,
                    b: b + 1,
                    tau: tau_report(tau, None),
                },
            })
        }
        NrVerdict::OutOfScope { kernel_dim } => r.kernel_dim = Some(*kernel_dim),
    }
    r
}

fn two_step_violation(v: &TwoStepViolation) -> String {
    match *v {
        TwoStepViolation::Antisymmetry { a, i, j } => {
            format!("bracket component {} not antisymmetric at ({}, {})", a + 1, i + 1, j + 1)
        }
        TwoStepViolation::NotCentral { i, c } => format!("[b{}, b{}] != 0 for central b{}", i + 1, c + 1, c + 1),
        TwoStepViolation::DerivedOutsideCenter { i, j, k } => {
            format!("[b{}, b{}] has a component along b{}", i + 1, j + 1, k + 1)
        }
        TwoStepViolation::NotTwoStep { x, y, w } => format!("[[b{}, b{}], b{}] != 0", x + 1, y + 1, w + 1),
        TwoStepViolation::Jacobi { x, y, w } => format!("Jacobi fails on (b{}, b{}, b{})", x + 1, y + 1, w + 1),
    }
}

impl<S: Scalar> Analysis<S> {
    pub fn htype_passed(&self) -> bool {
        self.htype.passed()
    }

    pub fn report(&self, spec: &AlgebraSpec) -> AlgebraReport {
        let constructor = match &spec.source {
            SpecSource::Constructor(p) => Some(ConstructorReport {
                family: p.family().symbol().to_string(),
                p: p.p(),
                q: p.q(),
            }),
            SpecSource::Raw { .. } => None,
        };
        let htype = CheckReport {
            passed: self.htype.passed(),
            checked: self.htype.pairs_checked,
            violation: self.htype.violation.as_ref().map(|v| match v {
                HTypeViolation::Pair { a, b, .. } => {
                    format!("J{} J{} + J{} J{} deviates from the Clifford relation", a + 1, b + 1, b + 1, a + 1)
                }
                HTypeViolation::EmptyModule => "v is zero".to_string(),
            }),
        };
        let isotypy = self.isotypy.as_ref().map(|iso| match iso {
            Ok(Isotypy::Pair { larger, smaller }) => IsotypyReport {
                kind: "pair".into(),
                pair: Some([*larger, *smaller]),
                isotypic: Some(*smaller == 0),
                note: None,
            },
            Ok(Isotypy::Trivial { m }) => IsotypyReport {
                kind: "trivial".into(),
                pair: None,
                isotypic: Some(true),
                note: Some(format!("dim z = {m} admits a single irreducible module")),
            },
            Err(e) => IsotypyReport {
                kind: "unavailable".into(),
                pair: None,
                isotypic: None,
                note: Some(format!("[composition-algebras] {e}")),
            },
        });
        let reduced_core = self.reduced.as_ref().map(|r| CoreReport {
            dim_v: r.core.n(),
            dim_z: r.core.m(),
            heisenberg: self.core_is_heisenberg,
            center_gram: strings(&r.center_gram),
            derived_basis: r.derived_basis.iter().map(|u| strings(u)).collect(),
            j: r
                .core_jmap()
                .matrices()
                .iter()
                .map(|m| m.to_rows().iter().map(|row| strings(row)).collect())
                .collect(),
            nr: self.core_verdict.as_ref().map(|v| nr_report(v, self.core_tau_verified)),
        });
        let closed_form = self.closed_form.as_ref().map(|cf| match cf {
            Ok(v) => ClosedFormReport {
                status: Some(v.status),
                agrees: Some(v.status == self.verdict.status()),
                note: None,
            },
            Err(e) => ClosedFormReport {
                status: None,
                agrees: None,
                note: Some(format!("[nr-classifier] {e}")),
            },
        });
        let c = &self.curvature;
        AlgebraReport {
            name: self.name.clone(),
            constructor,
            dim_v: self.jmap.n(),
            dim_z: self.jmap.m(),
            two_step: CheckReport {
                passed: self.two_step.passed(),
                checked: self.two_step.triples_checked,
                violation: self.two_step.violation.as_ref().map(two_step_violation),
            },
            htype,
            isotypy,
            euclidean: EuclideanReport {
                rank: self.kernel.len(),
                kernel_basis: self.kernel.iter().map(|k| strings(k)).collect(),
                reduced_core,
            },
            nr: nr_report(&self.verdict, self.tau_verified),
            closed_form,
            curvature: CurvatureReport {
                scalar: c.scalar.to_string(),
                ricci_sq: c.ricci_sq.to_string(),
                riem_sq: c.riem_sq.to_string(),
                ricci_charpoly: strings(&c.ricci_charpoly),
                ricci_spectrum: c.ricci_spectrum.clone(),
            },
        }
    }
}

fn classify_in<S: Scalar>(specs: &[AlgebraSpec], opts: &Options) -> Result<ClassifyReport, ReportError> {
    let algebras = specs
        .iter()
        .map(|spec| analyze::<S>(spec, opts).map(|a| a.report(spec)))
        .collect::<Result<_, _>>()?;
    Ok(ClassifyReport {
        schema: SCHEMA_VERSION,
        mode: opts.mode,
        algebras,
    })
}

pub fn run_classify(specs: &[AlgebraSpec], opts: &Options) -> Result<ClassifyReport, ReportError> {
    match opts.mode {
        Mode::Exact => classify_in::<Rational>(specs, opts),
        Mode::Float => classify_in::<f64>(specs, opts),
    }
}

fn compare_in<S: Scalar>(a: &AlgebraSpec, b: &AlgebraSpec, opts: &Options) -> Result<PairReport, ReportError> {
    let x = analyze::<S>(a, opts)?;
    let y = analyze::<S>(b, opts)?;
    let dims_equal = (x.jmap.n(), x.jmap.m()) == (y.jmap.n(), y.jmap.m());
    let both_htype = x.htype_passed() && y.htype_passed();
    let summaries_equal = x.curvature.matches(&y.curvature, opts.tol);
    let (sx, sy) = (x.verdict.status(), y.verdict.status());
    let nr_differs = (sx != NrStatus::OutOfScope && sy != NrStatus::OutOfScope).then_some(sx != sy);
    let headline = (dims_equal && summaries_equal && nr_differs == Some(true)).then(|| HEADLINE.to_string());
    Ok(PairReport {
        schema: SCHEMA_VERSION,
        mode: opts.mode,
        first: x.report(a),
        second: y.report(b),
        dims_equal,
        both_htype,
        summaries_equal,
        nr_differs,
        headline,
    })
}

pub fn run_compare(a: &AlgebraSpec, b: &AlgebraSpec, opts: &Options) -> Result<PairReport, ReportError> {
    match opts.mode {
        Mode::Exact => compare_in::<Rational>(a, b, opts),
        Mode::Float => compare_in::<f64>(a, b, opts),
    }
}

pub use crate::dsl::ExportFormat;

pub fn run_export(specs: &[AlgebraSpec], format: ExportFormat) -> Vec<u8> {
    crate::dsl::export(specs, format).into_bytes()
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn render_nr(out: &mut String, indent: &str, label: &str, nr: &NrReport) {
    let _ = writeln!(out, "{indent}{label}: {}", nr.status);
    if let Some(tau) = &nr.tau {
        let _ = writeln!(
            out,
            "{indent}  certificate: {} nonzero tau entries, re-verified: {}",
            tau.entries.len(),
            tau.reconstruction_verified.map_or("n/a", yes_no)
        );
        for (c, a, b, v) in tau.entries.iter().take(12) {
            let _ = writeln!(out, "{indent}    tau[J{a}] J{b} has J{c}-coefficient {v}");
        }
        if tau.entries.len() > 12 {
            let _ = writeln!(out, "{indent}    ... ({} more)", tau.entries.len() - 12);
        }
    }
    match &nr.witness {
        Some(WitnessReport::Closure { a, b, residual_sq, residual }) => {
            let _ = writeln!(
                out,
                "{indent}  witness: [J{a}, J{b}] leaves span{{J_c}}, residual^2 = {residual_sq} (residual {residual:.6})"
            );
        }
        Some(WitnessReport::Skew { c, a, b, .. }) => {
            let _ = writeln!(out, "{indent}  witness: tau fails skewness at (c, a, b) = ({c}, {a}, {b})");
        }
        None => {}
    }
    if let Some(k) = nr.kernel_dim {
        let _ = writeln!(out, "{indent}  j has a kernel of dimension {k}");
    }
}

pub fn render_algebra(out: &mut String, r: &AlgebraReport) {
    let _ = write!(out, "algebra {}", r.name);
    if let Some(c) = &r.constructor {
        let _ = write!(out, " = n({}, {}) over {}", c.p, c.q, c.family);
    }
    out.push('\n');
    let _ = writeln!(out, "  dim v = {}, dim z = {}", r.dim_v, r.dim_z);
    let _ = writeln!(
        out,
        "  two-step: {} ({} triples checked){}",
        if r.two_step.passed { "ok" } else { "FAILED" },
        r.two_step.checked,
        r.two_step.violation.as_ref().map_or(String::new(), |v| format!(": {v}"))
    );
    let _ = writeln!(
        out,
        "  H-type: {}{}",
        yes_no(r.htype.passed),
        r.htype.violation.as_ref().map_or(String::new(), |v| format!(" ({v})"))
    );
    if let Some(iso) = &r.isotypy {
        match (&iso.pair, &iso.note) {
            (Some([p, q]), _) => {
                let _ = writeln!(out, "  isotypic pair: {{{p}, {q}}} (isotypic: {})", yes_no(*q == 0));
            }
            (None, Some(note)) => {
                let _ = writeln!(out, "  isotypy: {} ({note})", iso.kind);
            }
            _ => {}
        }
    }
    let _ = writeln!(out, "  Euclidean rank: {}", r.euclidean.rank);
    for k in &r.euclidean.kernel_basis {
        let _ = writeln!(out, "    kernel vector ({})", k.join(", "));
    }
    if let Some(core) = &r.euclidean.reduced_core {
        let _ = writeln!(
            out,
            "  reduced core: dim v = {}, dim z = {}{}, center gram [{}]",
            core.dim_v,
            core.dim_z,
            if core.heisenberg { format!(" (Heisenberg H{})", core.dim_v + 1) } else { String::new() },
            core.center_gram.join(", ")
        );
        if let Some(nr) = &core.nr {
            render_nr(out, "    ", "core natural reductivity", nr);
        }
    }
    render_nr(out, "  ", "natural reductivity", &r.nr);
    if let Some(cf) = &r.closed_form {
        match (&cf.status, &cf.note) {
            (Some(s), _) => {
                let _ = writeln!(out, "  closed form: {s} (agrees: {})", cf.agrees.map_or("n/a", yes_no));
            }
            (None, Some(note)) => {
                let _ = writeln!(out, "  closed form: unavailable ({note})");
            }
            _ => {}
        }
    }
    let c = &r.curvature;
    let _ = writeln!(
        out,
        "  curvature: scalar {}, |Ric|^2 {}, |R|^2 {}",
        c.scalar, c.ricci_sq, c.riem_sq
    );
    let spectrum: Vec<String> = c.ricci_spectrum.iter().map(|x| format!("{x:.6}")).collect();
    let _ = writeln!(out, "  Ricci spectrum: [{}]", spectrum.join(", "));
}

pub fn render_classify(r: &ClassifyReport) -> String {
    let mut out = String::new();
    for (i, a) in r.algebras.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        render_algebra(&mut out, a);
    }
    out
}

pub fn render_pair(r: &PairReport) -> String {
    let mut out = String::new();
    render_algebra(&mut out, &r.first);
    out.push('\n');
    render_algebra(&mut out, &r.second);
    out.push('\n');
    let _ = writeln!(out, "dims equal: {}", yes_no(r.dims_equal));
    let _ = writeln!(out, "both H-type: {}", yes_no(r.both_htype));
    let _ = writeln!(out, "curvature summaries equal: {}", yes_no(r.summaries_equal));
    let _ = writeln!(
        out,
        "NR differs: {}",
        r.nr_differs.map_or("n/a (out of scope)", yes_no)
    );
    if let Some(h) = &r.headline {
        let _ = writeln!(out, "headline: {h}");
    }
    out
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_spec;

    fn spec(text: &str) -> AlgebraSpec {
        parse_spec(text).unwrap().remove(0)
    }

    #[test]
    fn self_comparison_does_not_differ() {
        let a = spec("algebra A { family = C; p = 1; }");
        let r = run_compare(&a, &a, &Options::default()).unwrap();
        assert_eq!(r.first, r.second);
        assert_eq!(r.nr_differs, Some(false));
        assert!(r.headline.is_none());
    }

    #[test]
    fn euclidean_input_is_out_of_scope_with_core() {
        let a = spec("algebra B { dim_v = 2; dim_z = 2; J1 = [[0,1],[-1,0]]; J2 = [[0,-1],[1,0]]; }");
        let opts = Options {
            reduce: true,
            ..Options::default()
        };
        let r = run_classify(std::slice::from_ref(&a), &opts).unwrap();
        let alg = &r.algebras[0];
        assert_eq!(alg.nr.status, NrStatus::OutOfScope);
        assert_eq!(alg.euclidean.rank, 1);
        let core = alg.euclidean.reduced_core.as_ref().unwrap();
        assert_eq!((core.dim_v, core.dim_z), (2, 1));
        assert!(core.heisenberg);
        assert_eq!(core.nr.as_ref().unwrap().status, NrStatus::NaturallyReductive);
        let cmp = run_compare(&a, &a, &opts).unwrap();
        assert_eq!(cmp.nr_differs, None);
    }

    #[test]
    fn json_carries_schema_and_kebab_keys() {
        let a = spec("algebra A { family = H; p = 1; q = 0; }");
        let r = run_compare(&a, &a, &Options::default()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&to_json(&r)).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["nr-differs"], false);
        assert_eq!(v["first"]["nr"]["status"], "NaturallyReductive");
        assert_eq!(v["first"]["nr"]["tau"]["reconstruction-verified"], true);
    }
}
