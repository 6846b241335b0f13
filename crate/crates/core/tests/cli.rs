use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nilgeom"))
}

fn spec_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name)
}

fn temp_spec(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nilgeom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn compare_headline_pair_in_both_modes() {
    for mode in ["exact", "float"] {
        let out = bin()
            .args(["compare", "--json", "--mode", mode])
            .arg(spec_path("headline_pair.nil"))
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{mode}");
        let v = json(&out);
        assert_eq!(v["schema"], 1);
        assert_eq!(v["mode"], mode);
        assert_eq!(v["dims-equal"], true);
        assert_eq!(v["summaries-equal"], true);
        assert_eq!(v["nr-differs"], true);
        assert_eq!(v["first"]["nr"]["status"], "NotNaturallyReductive");
        assert_eq!(v["first"]["nr"]["witness"]["kind"], "closure");
        assert_eq!(v["second"]["nr"]["status"], "NaturallyReductive");
        assert_eq!(v["second"]["nr"]["tau"]["reconstruction-verified"], true);
    }
}

#[test]
fn compare_by_name_and_self_comparison() {
    let out = bin()
        .args(["compare", "--json", "--first", "N20", "--second", "N20"])
        .arg(spec_path("headline_pair.nil"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["nr-differs"], false);
    assert_eq!(v["first"], v["second"]);
    assert!(v.get("headline").is_none());
}

#[test]
fn compare_needs_exactly_two_algebras() {
    let path = temp_spec("three.nil", "algebra A { family = C; p = 1; }\nalgebra B { family = C; p = 2; }\nalgebra C { family = H; p = 1; }");
    let out = bin().arg("compare").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["compare", "--first", "A", "--second", "Z"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn classify_euclidean_example() {
    let out = bin()
        .args(["classify", "--json", "--reduce"])
        .arg(spec_path("euclidean_factor.nil"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let alg = &json(&out)["algebras"][0];
    assert_eq!(alg["nr"]["status"], "OutOfScope");
    assert_eq!(alg["euclidean"]["rank"], 1);
    assert_eq!(alg["euclidean"]["kernel-basis"], serde_json::json!([["1", "1"]]));
    let core = &alg["euclidean"]["reduced-core"];
    assert_eq!(core["heisenberg"], true);
    assert_eq!(core["nr"]["status"], "NaturallyReductive");
}

#[test]
fn text_report_mentions_headline() {
    let out = bin().arg("compare").arg(spec_path("headline_pair.nil")).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("headline: spectrally indistinguishable necessary invariants, NR property differs"));
}

#[test]
fn exit_codes_by_error_class() {
    let syntax = temp_spec("syntax.nil", "algebra A {\n  family = H\n  p = 1;\n}");
    let out = bin().arg("classify").arg(&syntax).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains(":3:3:"));

    let empty = temp_spec("empty.nil", "algebra C { family = H; p = 0; q = 0; }");
    let out = bin().arg("classify").arg(&empty).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("p + q ≥ 1 required"));

    let not_skew = temp_spec("skew.nil", "algebra X { dim_v = 2; dim_z = 1; J1 = [[0, 1], [1, 0]]; }");
    let out = bin().arg("classify").arg(&not_skew).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("entry (1, 2)"));
}

#[test]
fn export_round_trips_through_the_binary() {
    let out = bin().arg("export").arg(spec_path("headline_pair.nil")).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let exported = temp_spec("exported.nil", &String::from_utf8(out.stdout).unwrap());
    let a = bin().args(["classify", "--json"]).arg(spec_path("headline_pair.nil")).output().unwrap();
    let b = bin().args(["classify", "--json"]).arg(&exported).output().unwrap();
    let (mut a, mut b) = (json(&a), json(&b));
    for v in [&mut a, &mut b] {
        for alg in v["algebras"].as_array_mut().unwrap() {
            alg.as_object_mut().unwrap().remove("constructor");
        }
    }
    assert_eq!(a, b);

    let out = bin().args(["export", "--format", "json"]).arg(spec_path("euclidean_factor.nil")).output().unwrap();
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["algebras"][0]["structure-constants"], serde_json::json!([[1, 2, 1, "1"], [2, 1, 1, "-1"], [1, 2, 2, "-1"], [2, 1, 2, "1"]]));
}

#[test]
fn selftest_passes() {
    let out = bin().args(["selftest", "--json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 7);
}
