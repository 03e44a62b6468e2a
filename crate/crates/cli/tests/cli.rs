use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn phl(args: &[&str]) -> Output {
    phl_env(args, &[])
}

fn phl_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_phl"));
    c.args(args).env_remove("PHL_BUDGET_DEPTH");
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().expect("the binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn exit_code_matrix() {
    let pos = data("pos.phl");
    let mon = data("mon.phl");
    let cases: Vec<(Vec<String>, i32)> = vec![
        (vec!["check".into(), pos.clone(), data("chain2.model")], 0),
        (vec!["check".into(), pos.clone(), data("cycle.model")], 1),
        (vec!["prove".into(), pos.clone(), "[x:*] true |- leq(x,x)".into()], 0),
        (vec!["prove".into(), mon.clone(), "[x:*] true |- mul(x,x)=x".into(), "-k".into(), "2".into()], 1),
        (vec!["prove".into(), mon.clone(), "[x:*, y:*] mul(x,y)=e |- mul(y,x)=e".into()], 2),
        (vec!["free".into(), mon.clone(), "[x:*] . mul(x,x)=e".into()], 0),
        (vec!["free".into(), mon.clone(), "[x:*] . true".into(), "--depth".into(), "1".into()], 2),
        (vec!["factor".into(), pos.clone(), data("collapse.hom")], 0),
        (vec!["translate".into(), data("forget.morphism")], 0),
        (vec!["translate".into(), data("forget.morphism"), data("chain2.model")], 0),
        (vec!["sketch2pht".into(), data("square.sketch")], 0),
        (vec!["birkhoff".into(), data("preorder.phl"), "-k".into(), "3".into(), "--judgments".into(), data("antisymmetry.phl")], 0),
        (vec!["birkhoff".into(), data("preorder.phl"), "--pool".into(), data("pool"), "--class".into(), data("antisymmetry.phl")], 1),
        (vec!["birkhoff".into(), data("mon_inv.phl"), "--judgments".into(), data("groups.phl")], 2),
        (vec!["fmt".into(), data("square.sketch")], 0),
        (vec!["bogus".into()], 10),
        (vec!["prove".into(), "no_such_theory".into(), "[x:*] true |- true".into()], 10),
        (vec!["prove".into(), pos.clone(), "[x:*] true |- leq(x".into()], 11),
        (vec!["check".into(), pos.clone(), data("missing.model")], 13),
        (vec!["prove".into(), pos.clone(), "[x:*] true |- leq(x,x)".into(), "-k".into(), "0".into()], 10),
    ];
    for (args, expected) in cases {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let o = phl(&refs);
        assert_eq!(code(&o), expected, "phl {}\n{}{}", args.join(" "), stdout(&o), String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn refutation_prints_a_countermodel() {
    let o = phl(&["prove", &data("mon.phl"), "[x:*] true |- mul(x,x)=x", "-k", "2"]);
    let text = stdout(&o);
    assert!(text.starts_with("Refuted"));
    assert!(text.contains("model "));
    let j = json(&phl(&["prove", &data("mon.phl"), "[x:*] true |- mul(x,x)=x", "-k", "2", "--json"]));
    assert_eq!(j["verdict"], "Refuted");
    assert_eq!(j["countermodel"]["carriers"]["*"].as_array().unwrap().len(), 2);
    assert_eq!(j["witness"].as_array().unwrap().len(), 1);
}

#[test]
fn json_reports_are_byte_identical() {
    let runs: Vec<Vec<&str>> = vec![
        vec!["prove", "mon", "[x:*] true |- mul(x,x)=x", "--json"],
        vec!["free", "mon", "[x:*, y:*] . mul(x,y)=e", "--json"],
        vec!["birkhoff", "preorder", "-k", "3", "--json"],
        vec!["check", "pos", "cycle.model", "--json"],
    ];
    for args in runs {
        let args: Vec<String> = args.iter().map(|a| if a.ends_with(".model") { data(a) } else { a.to_string() }).collect();
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = phl(&refs);
        let b = phl(&refs);
        assert_eq!(stdout(&a), stdout(&b), "{args:?}");
        assert_eq!(code(&a), code(&b));
        json(&a);
    }
}

#[test]
fn depth_comes_from_the_environment_unless_given() {
    let formula = "[x:*] . true";
    let shallow = json(&phl_env(&["free", "mon", formula, "--json"], &[("PHL_BUDGET_DEPTH", "1")]));
    assert_eq!(shallow["saturation"], "Truncated(1)");
    let flagged = json(&phl_env(&["free", "mon", formula, "--json", "--depth", "2"], &[("PHL_BUDGET_DEPTH", "1")]));
    assert_eq!(flagged["saturation"], "Truncated(2)");
    let bad = phl_env(&["free", "mon", formula], &[("PHL_BUDGET_DEPTH", "deep")]);
    assert_eq!(code(&bad), 10);
}

#[test]
fn derivation_files_are_checked() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("refl.drv");
    std::fs::write(&good, "[x:*] true |- leq(x, x)  [rule Axiom {name=refl}]\n").unwrap();
    assert_eq!(code(&phl(&["check", "pos", good.to_str().unwrap()])), 0);
    let bad = dir.path().join("wrong.drv");
    std::fs::write(&bad, "[x:*] true |- leq(x, x)  [rule Axiom {name=trans}]\n").unwrap();
    let o = phl(&["check", "pos", bad.to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 1);
    assert!(json(&o)["failure"]["reason"].is_string());
}

#[test]
fn factor_prints_both_halves() {
    let j = json(&phl(&["factor", &data("pos.phl"), &data("collapse.hom"), "--json"]));
    assert_eq!(j["dense"], false);
    assert_eq!(j["image"]["carriers"]["*"], serde_json::json!(["x", "z"]));
    assert_eq!(j["dense_part"]["target"], "ends_image");
    assert_eq!(j["closed_mono_part"]["source"], "ends_image");
}

#[test]
fn translation_of_sequents_and_models() {
    let o = phl(&["translate", &data("forget.morphism"), "[x:*, y:*] leq(x,y) |- leq(y,y)"]);
    assert_eq!(stdout(&o).trim(), "[x:*, y:*] leq(x, y) |- leq(y, y)");
    let j = json(&phl(&["translate", &data("forget.morphism"), &data("chain2.model"), "--json"]));
    assert_eq!(j["reducts"][0]["name"], "chain2_reduct");
    let j = json(&phl(&["translate", &data("forget.morphism"), "--json"]));
    assert_eq!(j["obligations"].as_array().unwrap().len(), 2);
}

#[test]
fn formatting_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["pos.phl", "square.sketch", "chain2.model", "forget.morphism", "collapse.hom"] {
        let once = stdout(&phl(&["fmt", &data(name)]));
        let copy = dir.path().join(name);
        std::fs::write(&copy, &once).unwrap();
        for theory in ["pos.phl", "preorder.phl"] {
            std::fs::copy(data(theory), dir.path().join(theory)).unwrap();
        }
        let twice = stdout(&phl(&["fmt", copy.to_str().unwrap()]));
        assert_eq!(once, twice, "{name}");
    }
}

#[test]
fn errors_are_reported_as_json_too() {
    let o = phl(&["prove", "pos", "[x:*] true |- nope(x)", "--json"]);
    assert_eq!(code(&o), 11);
    let j = json(&o);
    assert_eq!(j["status"], "error");
    assert_eq!(j["kind"], "parse");
}

#[test]
fn sketch_theory_has_the_domain_axiom() {
    let text = stdout(&phl(&["sketch2pht", &data("square.sketch")]));
    assert!(text.contains("axiom glue_dom [x0:A, x1:B] def(glue(x0, x1)) |- r0(x0) = r1(x1);"));
}
