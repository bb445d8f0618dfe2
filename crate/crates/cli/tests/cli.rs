use std::process::Command as Proc;

use clap::Parser;
use isolab::k3salem::search_salem;
use isolab::IntPoly;
use isolab_cli::{parse_poly, Cli, Command};
use proptest::prelude::*;
use serde_json::Value;

fn isolab(args: &[&str]) -> (i32, Value, String) {
    let out = Proc::new(env!("CARGO_BIN_EXE_isolab"))
        .args(args)
        .output()
        .expect("binary runs");
    let text = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    (out.status.code().unwrap(), v, text)
}

fn salem20() -> IntPoly {
    search_salem(10, 4, 1).remove(0).s
}

fn tmp(name: &str, body: &str) -> String {
    let dir = std::env::temp_dir().join(format!("isolab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn decide_iota_delta_is_realizable() {
    let f = &IntPoly::from_i64(&[-1, 0, 1]) * &salem20();
    let (code, v, _) = isolab(&["decide", "--poly", &f.to_string(), "--sig", "3,19", "--iota-delta", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"]["status"], "Realizable");
    assert_eq!(v["schema_version"], "1");
}

#[test]
fn signature_not_mod_8_is_an_error() {
    let f = &IntPoly::from_i64(&[-1, 0, 1]) * &salem20();
    let (code, v, _) = isolab(&["decide", "--poly", &f.to_string(), "--sig", "4,18"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["code"], "SignatureNotMod8");
}

#[test]
fn indeterminate_exits_2() {
    let (code, v, _) = isolab(&["decide", "--poly", "(x^4-x^2+1)*(x^12-x^11+x^9-x^8+x^6-x^4+x^3-x+1)", "--sig", "4,12"]);
    assert_eq!(code, 2);
    assert_eq!(v["verdict"]["status"], "Indeterminate");
}

#[test]
fn syntax_and_usage_errors() {
    let (code, v, _) = isolab(&["salem", "verify", "x^2 - * 3"]);
    assert_eq!((code, v["error"]["code"].as_str()), (1, Some("SyntaxError")));
    let (code, v, _) = isolab(&["salem", "verify", "x^4 - x^2 + 1"]);
    assert_eq!((code, v["error"]["code"].as_str()), (1, Some("NotSalem")));
    let (code, v, _) = isolab(&["idx", "--poly", "x^2-3*x+1"]);
    assert_eq!((code, v["error"]["code"].as_str()), (1, Some("UsageError")));
    let (code, v, _) = isolab(&["realizable", "--degree20", "x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1"]);
    assert_eq!((code, v["error"]["code"].as_str()), (1, Some("DegreeOutOfRange")));
}

#[test]
fn salem_verify_and_realizable() {
    let (code, v, _) = isolab(&["salem", "verify", "x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1"]);
    assert_eq!(code, 0);
    assert_eq!(v["certificate"]["unit_pairs"], 4);
    let (code, v, _) = isolab(&["realizable", "--degree20", &salem20().to_string()]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["status"], "Realizable");
    assert_eq!(v["report"]["witness"]["c"], serde_json::json!([[1, 1], [2, 1]]));
}

#[test]
fn idx_counts_ten_maps() {
    let f = &IntPoly::from_i64(&[-1, 0, 1]) * &salem20();
    let (code, v, _) = isolab(&["idx", "--poly", &f.to_string(), "--sig", "3,19"]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], 10);
}

#[test]
fn graph_dot_export() {
    let dot = tmp("g.dot", "");
    let (code, v, _) = isolab(&["graph", "--poly", "(x^4+x^3+x^2+x+1)*(x^20+x^15+x^10+x^5+1)", "--dot", &dot]);
    assert_eq!(code, 0);
    assert_eq!(v["omega"]["omega_rank"], 0);
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("graph obstruction {") && text.trim_end().ends_with('}'));
    assert_eq!(text.matches('{').count(), text.matches('}').count());
    assert!(text.contains("v0 -- v1"));
}

#[test]
fn local_reports() {
    let (code, v, _) = isolab(&["local", "--poly", "x^2-3*x+1"]);
    assert_eq!(code, 0);
    assert_eq!(v["all_hold"], false);
    let (code, v, _) = isolab(&["local", "--poly", "x^2-3*x+1", "--prime", "4"]);
    assert_eq!((code, v["error"]["code"].as_str()), (1, Some("NotPrime")));
}

#[test]
fn witness_files() {
    let gram = tmp("u.json", r#"{"name": "U"}"#);
    let swap = tmp("swap.json", "[[0,1],[1,0]]");
    let (code, v, _) = isolab(&["witness", "--gram", &gram, "--matrix", &swap]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["index_map"]["at_x_minus_1"], 1);
    assert_eq!(v["report"]["index_map"]["at_x_plus_1"], -1);
    assert_eq!(v["report"]["spinor_parity_ok"], true);
    let bad = tmp("bad.json", "[[1,1],[0,1]]");
    let (code, v, _) = isolab(&["witness", "--gram", &gram, "--matrix", &bad]);
    assert_eq!((code, v["error"]["code"].as_str()), (1, Some("NotAnIsometry")));
    let k3 = tmp("k3.json", r#""K3""#);
    let minus: Vec<Vec<i64>> = (0..22).map(|i| (0..22).map(|j| if i == j { -1 } else { 0 }).collect()).collect();
    let m = tmp("minus.json", &serde_json::to_string(&minus).unwrap());
    let (code, v, _) = isolab(&["witness", "--gram", &k3, "--matrix", &m]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["index_map"]["at_x_plus_1"], -16);
    let (code, v, _) = isolab(&["witness", "--gram", "/nonexistent/g.json", "--matrix", &m]);
    assert_eq!((code, v["error"]["code"].as_str()), (1, Some("IoError")));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let f = &IntPoly::from_i64(&[-1, 0, 1]) * &salem20();
    let args = ["decide", "--poly", &f.to_string(), "--sig", "3,19"];
    let (_, _, a) = isolab(&args);
    let (_, _, b) = isolab(&args);
    assert_eq!(a, b);
}

fn small_poly() -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-50i64..50, 1..12).prop_map(|c| IntPoly::from_i64(&c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn display_parse_round_trip(f in small_poly()) {
        prop_assert_eq!(parse_poly(&f.to_string()).unwrap(), f.clone());
        let json = serde_json::to_string(&f).unwrap();
        prop_assert_eq!(parse_poly(&json).unwrap(), f);
    }

    #[test]
    fn job_spec_round_trip(f in small_poly(), r in 0usize..30, s in 0usize..30) {
        let text = f.to_string();
        let sig = format!("{r},{s}");
        let cli = Cli::try_parse_from(["isolab", "idx", "--poly", text.as_str(), "--sig", sig.as_str()]).unwrap();
        prop_assert_eq!(cli.command.clone(), Command::Idx { poly: text.clone(), sig: (r, s) });
        if let Command::Idx { poly, .. } = cli.command {
            prop_assert_eq!(parse_poly(&poly).unwrap(), f);
        }
    }
}
