mod common;

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn demo(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "demos", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn gsplit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gsplit")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let o = gsplit(&all);
    (o.status.code().unwrap(), serde_json::from_slice(&o.stdout).unwrap())
}

#[test]
fn pipeline_exhibits_splitting_of_z2() {
    let z2 = demo("z2_halfplane.gsplit");
    let (code, rec) = json(&["pipeline", "split", &z2, "X"]);
    assert_eq!(code, 0);
    assert_eq!(rec["schema"], "gsplit-record/1");
    assert_eq!(rec["status"], "definite");
    assert_eq!(rec["result"]["verdict"]["verdict"], "splitting_exhibited");
    assert_eq!(rec["result"]["verdict"]["edge_stabilizers"][0][0], "(1,0)");
}

#[test]
fn ccomplex_of_malnormal_subgroup_is_totally_disconnected() {
    let f2 = demo("f2_cyclic.gsplit");
    let o = gsplit(&["ccomplex", "components", &f2, "H"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("totally_disconnected=true"));

    let (_, rec) = json(&["ccomplex", "components", &f2, "H2"]);
    // gH and g'H are joined exactly when g⁻¹g' is a power of a
    assert_eq!(rec["result"]["totally_disconnected"], false, "{rec}");
    let comps = rec["result"]["components"]["components"].as_array().unwrap();
    assert!(comps.iter().all(|c| c.as_array().unwrap().len() <= 2));
}

#[test]
fn undecided_crossing_exits_with_two() {
    let z2 = demo("z2_halfplane.gsplit");
    let o = gsplit(&["aiset", "cross", &z2, "X", "Yfar", "--radius", "5"]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    assert!(stdout(&o).contains("inconclusive"));

    let o = gsplit(&["aiset", "cross", &z2, "X", "Y"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn spec_errors_are_located() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.gsplit");
    std::fs::write(
        &path,
        "[group]\nfamily = free\nrank = 2\n\n[subgroup H]\ngenerators = az\n",
    )
    .unwrap();
    let p = path.to_string_lossy().into_owned();
    let o = gsplit(&["ball", &p]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.starts_with(&format!("{p}:6:")), "{err}");
    assert!(err.contains("unknown letter `z`"), "{err}");

    std::fs::write(&path, "[group]\nfamily = free\nrank = 2\n[run]\nradius = seven\n").unwrap();
    let o = gsplit(&["ball", &p]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stderr).unwrap().contains(":5:"));
}

#[test]
fn unknown_set_and_missing_file_are_errors() {
    let z2 = demo("z2_halfplane.gsplit");
    assert_eq!(gsplit(&["aiset", "boundary", &z2, "Nope"]).status.code(), Some(1));
    assert_eq!(gsplit(&["ball", "/nonexistent.gsplit"]).status.code(), Some(1));
}

#[test]
fn json_records_are_byte_identical_across_runs() {
    let z2 = demo("z2_halfplane.gsplit");
    let f2 = demo("f2_cyclic.gsplit");
    let runs: [&[&str]; 4] = [
        &["pipeline", "split", &z2, "X", "--json"],
        &["regnbhd", "dunwoody", &f2, "X", "--json"],
        &["aiset", "nontrivial", &z2, "X", "--seed", "7", "--json"],
        &["ccomplex", "build", &z2, "H", "--json"],
    ];
    for args in runs {
        let a = gsplit(args);
        let b = gsplit(args);
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn dot_artifacts_parse() {
    let z2 = demo("z2_halfplane.gsplit");
    let f2 = demo("f2_cyclic.gsplit");
    let dir = tempfile::tempdir().unwrap();
    let runs: [(&str, &[&str]); 3] = [
        ("pipe", &["pipeline", "split", &z2, "X"]),
        ("fold", &["subgroup", "fold", &f2, "K"]),
        ("cc", &["ccomplex", "build", &z2, "H"]),
    ];
    let mut dots = 0;
    for (sub, args) in runs {
        let out = dir.path().join(sub);
        let mut all = args.to_vec();
        let o = out.to_string_lossy().into_owned();
        all.extend(["--out", &o]);
        assert_eq!(gsplit(&all).status.code(), Some(0));
        assert!(out.join("record.json").exists());
        for entry in std::fs::read_dir(&out).unwrap() {
            let path = entry.unwrap().path();
            if path.extension().is_some_and(|e| e == "dot") {
                let text = std::fs::read_to_string(&path).unwrap();
                common::check_dot(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
                dots += 1;
            }
        }
    }
    assert!(dots >= 3, "only {dots} DOT files written");
}

#[test]
fn membership_and_malnormality_commands() {
    let f2 = demo("f2_cyclic.gsplit");
    let (code, rec) = json(&["subgroup", "member", &f2, "H2", "aaaa"]);
    assert_eq!(code, 0);
    assert_eq!(rec["result"]["member"], "yes", "{rec}");
    let (_, rec) = json(&["subgroup", "malnormal", &f2, "H2"]);
    assert_eq!(rec["result"]["malnormality"]["witness"], "a", "{rec}");
}

#[test]
fn nocross_reports_hypotheses() {
    let z2 = demo("z2_halfplane.gsplit");
    let (code, rec) = json(&["aiset", "nocross", &z2, "X", "Y"]);
    assert_eq!(code, 0);
    // H = <(1,0)> is two-ended, so the lemma does not apply and the crossing is allowed
    assert_eq!(rec["result"]["hypotheses"]["all_hold"], "no", "{rec}");
    assert_eq!(rec["result"]["consistent"], "yes");
    assert_eq!(
        rec["result"]["corner_boundary_rule"],
        serde_json::json!([true, true, true, true])
    );
}
