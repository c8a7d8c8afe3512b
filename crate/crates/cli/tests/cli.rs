use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mackey-lab"))
}

fn write(dir: &Path, name: &str, body: &str) {
    std::fs::write(dir.join(name), body).unwrap();
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

fn results(out: &Output) -> Value {
    let v: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stderr));
    });
    v["results"].clone()
}

fn fixtures() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(
        d,
        "c2.json",
        r#"{"schema":"mackey-lab/1","p":2,"kind":"perm","degree":2,"generators":[[1,0]]}"#,
    );
    write(
        d,
        "c3.json",
        r#"{"schema":"mackey-lab/1","p":3,"kind":"perm","degree":3,"generators":[[1,2,0]]}"#,
    );
    write(
        d,
        "triv.json",
        r#"{"group":"c2.json","dim":1,"action":{"g0":[[1]]}}"#,
    );
    write(
        d,
        "singular.json",
        r#"{"group":"c2.json","dim":2,"action":{"g0":[[1,1],[1,1]]}}"#,
    );
    write(
        d,
        "t.json",
        r#"{"group":"c2.json","system":"all","constructor":"T"}"#,
    );
    write(
        d,
        "d8.json",
        r#"{"group":{"kind":"family","family":"dihedral","params":{"k":3}},"system":"all","constructor":"h0-lower","module":{"group":{"kind":"family","family":"dihedral","params":{"k":3}},"kind":"regular"}}"#,
    );
    write(
        d,
        "tower.json",
        r#"{"stages":[{"kind":"family","family":"cyclic","p":2,"params":{"k":1}},{"kind":"family","family":"cyclic","p":2,"params":{"k":2}}],"projections":[{"g0":"g0"}]}"#,
    );
    write(
        d,
        "const.json",
        r#"{"family":"constant","depth":3,"group":"c2.json"}"#,
    );
    write(d, "z2.json", r#"{"family":"cyclic","p":2,"depth":4}"#);
    dir
}

#[test]
fn group_file_parses() {
    let dir = fixtures();
    let out = run(dir.path(), &["group-info", "c2.json"]);
    assert!(out.status.success());
    assert_eq!(results(&out)["order"], 2);
}

#[test]
fn group_from_stdin() {
    let dir = fixtures();
    let mut child = bin()
        .current_dir(dir.path())
        .args(["group-info", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    std::io::Write::write_all(
        child.stdin.as_mut().unwrap(),
        br#"{"kind":"family","family":"quaternion","params":{"k":3}}"#,
    )
    .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert_eq!(results(&out)["order"], 8);
    assert_eq!(results(&out)["frattini_rank"], 2);
}

#[test]
fn singular_action_is_rejected_with_the_generator_named() {
    let dir = fixtures();
    let out = run(dir.path(), &["tate", "singular.json"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("g0") && err.contains("non-invertible"),
        "{err}"
    );
}

#[test]
fn wrong_schema_version_is_an_error() {
    let dir = fixtures();
    write(
        dir.path(),
        "v2.json",
        r#"{"schema":"mackey-lab/2","p":2,"kind":"perm","degree":2,"generators":[[1,0]]}"#,
    );
    let out = run(dir.path(), &["group-info", "v2.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn tower_file_validates() {
    let dir = fixtures();
    let out = run(dir.path(), &["tower-validate", "tower.json"]);
    assert!(out.status.success());
    let r = results(&out);
    assert_eq!(r["orders"], serde_json::json!([2, 4]));
    assert_eq!(r["top_kernel_orders"], serde_json::json!([2]));
}

#[test]
fn non_homomorphic_projection_is_rejected() {
    let dir = fixtures();
    write(
        dir.path(),
        "bad_tower.json",
        r#"{"stages":[{"kind":"family","family":"cyclic","p":2,"params":{"k":2}},{"kind":"family","family":"cyclic","p":2,"params":{"k":1}}],"projections":[{"g0":"g0"}]}"#,
    );
    let out = run(dir.path(), &["tower-validate", "bad_tower.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("homomorphism"));
}

#[test]
fn homology_of_c2_with_trivial_coefficients() {
    let dir = fixtures();
    let out = run(dir.path(), &["homology", "triv.json", "--degree", "5"]);
    assert!(out.status.success());
    assert_eq!(results(&out)["dims"], serde_json::json!([1, 1, 1, 1, 1, 1]));
}

#[test]
fn degree_over_cap_is_an_error() {
    let dir = fixtures();
    let out = run(
        dir.path(),
        &[
            "homology",
            "triv.json",
            "--degree",
            "5",
            "--degree-cap",
            "3",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn mackey_check_on_constructor_output() {
    let dir = fixtures();
    for f in ["t.json", "d8.json"] {
        let out = run(dir.path(), &["mackey-check", f]);
        assert_eq!(out.status.code(), Some(0), "{f}");
        assert_eq!(results(&out)["violations"], serde_json::json!([]));
    }
}

#[test]
fn planted_conjugation_defect_exits_with_findings() {
    let dir = fixtures();
    write(
        dir.path(),
        "t3.json",
        r#"{"group":"c3.json","system":"all","constructor":"T"}"#,
    );
    let out = run(
        dir.path(),
        &["mackey-build", "t3.json", "--out", "built.json"],
    );
    assert!(out.status.success());
    let mut built: Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("built.json")).unwrap()).unwrap();
    assert_eq!(
        run(dir.path(), &["mackey-check", "built.json"])
            .status
            .code(),
        Some(0)
    );
    built["results"]["functor"]["data"]["c_generators"][0][0] = serde_json::json!([[2]]);
    write(dir.path(), "broken.json", &built.to_string());
    let out = run(dir.path(), &["mackey-check", "broken.json"]);
    assert_eq!(out.status.code(), Some(2));
    let v = results(&out)["violations"].clone();
    assert!(v.as_array().unwrap().iter().any(|x| x["axiom"] == "cMF1"));
}

#[test]
fn seco_and_predicates_reports() {
    let dir = fixtures();
    let out = run(dir.path(), &["seco", "t.json", "--section", "0,1"]);
    assert!(out.status.success());
    let s = &results(&out)["sections"][0];
    assert_eq!(s["six_term"]["dims"], serde_json::json!([1, 1, 0, 1, 1, 0]));
    assert_eq!(s["six_term"]["exact"], true);
    let out = run(dir.path(), &["predicates", "d8.json"]);
    assert!(out.status.success());
    let p = &results(&out)["predicates"];
    assert_eq!(
        (
            p["type_H0"].clone(),
            p["type_H_0"].clone(),
            p["coherent"].clone()
        ),
        (true.into(), true.into(), true.into())
    );
}

#[test]
fn ends_on_constant_tower() {
    let dir = fixtures();
    let out = run(dir.path(), &["ends", "const.json"]);
    assert!(out.status.success());
    assert_eq!(results(&out)["E"], 0);
}

#[test]
fn tower_reports_on_the_z2_tower() {
    let dir = fixtures();
    let r = results(&run(dir.path(), &["free-test", "z2.json"]));
    assert_eq!(r["verdict"], "sound_positive");
    let r = results(&run(dir.path(), &["d1", "z2.json", "--stage", "3"]));
    assert_eq!(r["certificate"], 1);
    let r = results(&run(dir.path(), &["ends", "z2.json"]));
    assert_eq!(r["E"], 2);
    let r = results(&run(dir.path(), &["direction", "z2.json"]));
    assert_eq!(r["splitting_verified"], true);
}

#[test]
fn free_rank_two_tower_is_unsupported() {
    let dir = fixtures();
    write(
        dir.path(),
        "free.json",
        r#"{"family":"free","p":2,"rank":2,"depth":3}"#,
    );
    let out = run(dir.path(), &["ends", "free.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nilpotent-quotient"));
}

#[test]
fn explicit_direction_witness() {
    let dir = fixtures();
    write(
        dir.path(),
        "witness.json",
        r#"{"stages":[{"kind":"family","family":"cyclic","p":2,"params":{"k":1}},{"kind":"family","family":"cyclic","p":2,"params":{"k":2}}],
            "projections":[{"g0":"g0"}],"tau":[{"g0":1},{"g0":1}],"sigma":["g0","g0"]}"#,
    );
    assert!(run(dir.path(), &["direction", "witness.json"])
        .status
        .success());
    write(
        dir.path(),
        "not_onto.json",
        r#"{"stages":[{"kind":"family","family":"cyclic","p":2,"params":{"k":1}},{"kind":"family","family":"cyclic","p":2,"params":{"k":2}}],
            "projections":[{"g0":"g0"}],"tau":[{"g0":1},{"g0":2}],"sigma":["g0","g0"]}"#,
    );
    let out = run(dir.path(), &["direction", "not_onto.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = fixtures();
    for args in [
        vec!["mackey-check", "d8.json"],
        vec!["seco", "d8.json"],
        vec!["ends", "z2.json"],
        vec!["subgroups", "c2.json"],
    ] {
        let mut a = args.clone();
        a.extend(["--out", "a.json"]);
        let mut b = args.clone();
        b.extend(["--out", "b.json"]);
        run(dir.path(), &a);
        run(dir.path(), &b);
        let (x, y) = (
            std::fs::read(dir.path().join("a.json")).unwrap(),
            std::fs::read(dir.path().join("b.json")).unwrap(),
        );
        assert!(!x.is_empty());
        assert_eq!(x, y, "{args:?}");
    }
}

#[test]
fn report_embeds_parameters_and_hashes() {
    let dir = fixtures();
    let out = run(
        dir.path(),
        &[
            "mackey-check",
            "t.json",
            "--axiom-budget",
            "5",
            "--seed",
            "7",
        ],
    );
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], "mackey-lab/1");
    assert_eq!(v["params"]["axiom_budget"], 5);
    assert_eq!(v["params"]["seed"], 7);
    assert_eq!(v["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn text_rendering_mirrors_json() {
    let dir = fixtures();
    let out = run(
        dir.path(),
        &["homology", "triv.json", "--degree", "2", "--format", "text"],
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("results.dims: [1,1,1]"), "{text}");
}

#[test]
fn cores_in_degree_zero() {
    let dir = fixtures();
    let out = run(
        dir.path(),
        &["cores", "triv.json", "--subgroup", "1", "--degree", "0"],
    );
    assert!(out.status.success());
    let r = results(&out);
    assert_eq!(r["subgroup_order"], 1);
    assert_eq!(r["injective"], false);
}
