use std::fs;
use std::path::PathBuf;

use procnet_cli::{run, Output, EXIT_OK, EXIT_OMEGA, EXIT_PARSE, EXIT_SEMANTIC, EXIT_STRUCTURE};
use serde_json::Value;

const NETWORKS: &str = "../../networks";

fn bundled(name: &str) -> String {
    format!("{NETWORKS}/{name}.network")
}

fn procnet(args: &[&str]) -> Output {
    run(std::iter::once("procnet").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.push("--json");
    let out = procnet(&full);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

/// Writes `text` to a scratch file called `name`.
fn scratch(name: &str, text: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("{name}.network"));
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

fn triangle_text() -> String {
    fs::read_to_string(bundled("triangle")).unwrap()
}

#[test]
fn bundled_networks_validate() {
    for name in ["triangle", "chsh", "product", "chain", "mixing"] {
        let out = procnet(&["validate", &bundled(name)]);
        assert_eq!(out.code, EXIT_OK, "{name}: {}", out.stderr);
    }
}

#[test]
fn triangle_analysis() {
    let r = json(&["analyze", &bundled("triangle"), "--omega", "six_cycle"]);
    assert_eq!(r["omega"]["residual"], "0");
    assert_eq!(r["contextuality"]["contextual"], true);
    assert_eq!(r["contextuality"]["strongly_contextual"], true);
    assert_eq!(r["contextuality"]["certificate"]["verified"], true);
    assert_eq!(r["vorobev_regular"], false);
    assert_eq!(r["global"]["rows"], 8);
    assert!(r["chsh"].is_null());
    for node in r["nodes"].as_array().unwrap() {
        assert_eq!(node["marginals"]["holds"], true);
    }
}

#[test]
fn chsh_analysis_with_solved_omega() {
    let r = json(&["analyze", &bundled("chsh"), "--omega", "solve"]);
    assert_eq!(r["omega"]["method"], "lp_vertex");
    assert_eq!(r["chsh"]["value"], "4");
    assert_eq!(r["chsh"]["violates_tsirelson"], true);
    assert_eq!(r["contextuality"]["contextual"], true);
    assert_eq!(r["contextuality"]["strongly_contextual"], true);
    // the PR box: 1/2 on anti-correlated (B1, A1) and on equal outcomes elsewhere
    for node in r["nodes"].as_array().unwrap() {
        let anti = node["node"] == "alpha11";
        for e in node["delta"]["entries"].as_array().unwrap() {
            let o = e["outcomes"].as_array().unwrap();
            let expected = if (o[0] != o[1]) == anti { "1/2" } else { "0" };
            assert_eq!(e["p"], expected, "{}", node["node"]);
        }
    }
}

#[test]
fn product_and_chain_are_non_contextual() {
    let r = json(&["analyze", &bundled("product")]);
    assert_eq!(r["contextuality"]["contextual"], false);
    assert!(r["contextuality"]["witness"].is_object());
    let r = json(&["analyze", &bundled("chain")]);
    assert_eq!(r["contextuality"]["contextual"], false);
    assert_eq!(r["vorobev_regular"], true);
    assert_eq!(r["model"]["absorbed"], serde_json::json!(["sink_a", "sink_c"]));
}

#[test]
fn simulate_is_reproducible_and_judged() {
    let args = ["simulate", &bundled("mixing"), "--steps", "100000", "--seed", "9", "--node", "beta"];
    let a = json(&args);
    assert_eq!(a, json(&args));
    assert_eq!(a["converges"], true);
    assert_eq!(a["within_band"], true);
}

#[test]
fn simulate_flags_periodic_chain() {
    let r = json(&["simulate", &bundled("triangle"), "--steps", "500", "--seed", "1", "--node", "gamma"]);
    assert_eq!(r["converges"], false);
    assert_eq!(r["reference"], "cesaro_estimate");
    assert!(r["within_band"].is_null());
}

#[test]
fn single_step_simulation_has_no_verdict() {
    let r = json(&["simulate", &bundled("mixing"), "--steps", "1", "--node", "alpha"]);
    let coords = r["coordinates"].as_array().unwrap();
    assert!(coords.iter().all(|c| c["empirical"] == 0.0 || c["empirical"] == 1.0));
    assert!(r["within_band"].is_null());
    assert!(r["max_distance"].as_f64().unwrap() > 0.0);
}

#[test]
fn syntax_errors_exit_2() {
    let path = scratch("syntax", "format_version = 1\n[[nodes]\n");
    assert_eq!(procnet(&["validate", &path]).code, EXIT_PARSE);
    assert_eq!(procnet(&["validate", "/nonexistent/file.network"]).code, EXIT_PARSE);
    assert_eq!(procnet(&["frobnicate"]).code, EXIT_PARSE);
}

#[test]
fn bad_row_exits_3_and_names_the_row() {
    let text = triangle_text().replacen(r#"[["0", "1"], ["1", "0"]]"#, r#"[["0", "0.9"], ["1", "0"]]"#, 1);
    let out = procnet(&["validate", &scratch("bad_row", &text)]);
    assert_eq!(out.code, EXIT_SEMANTIC);
    assert!(out.stderr.contains("alpha") && out.stderr.contains("row 0"), "{}", out.stderr);
}

#[test]
fn two_outputs_on_one_name_exits_3() {
    let text = triangle_text().replace("outputs = [\"X\"]", "outputs = [\"Y\"]");
    let out = procnet(&["validate", &scratch("double_output", &text)]);
    assert_eq!(out.code, EXIT_SEMANTIC);
    assert!(out.stderr.contains("`Y`"), "{}", out.stderr);
}

#[test]
fn reciprocity_and_open_networks_exit_4() {
    let pair = r#"format_version = 1
[[variables]]
name = "A"
alphabet = ["0", "1"]
[[variables]]
name = "B"
alphabet = ["0", "1"]
[[nodes]]
name = "left"
inputs = ["B"]
outputs = ["A"]
matrix = [["1", "0"], ["0", "1"]]
[[nodes]]
name = "right"
inputs = ["A"]
outputs = ["B"]
matrix = [["1", "0"], ["0", "1"]]
"#;
    let path = scratch("reciprocity", pair);
    assert_eq!(procnet(&["validate", &path]).code, EXIT_OK);
    let out = procnet(&["analyze", &path]);
    assert_eq!(out.code, EXIT_STRUCTURE);
    assert!(out.stderr.contains("(left, right)"), "{}", out.stderr);
    assert_eq!(procnet(&["simulate", &path, "--steps", "5", "--node", "left"]).code, EXIT_STRUCTURE);

    let open = "format_version = 1\n[[variables]]\nname = \"A\"\nalphabet = [\"0\", \"1\"]\n\
                [[nodes]]\nname = \"source\"\noutputs = [\"A\"]\nmatrix = [[\"1/2\", \"1/2\"]]\n";
    let path = scratch("open", open);
    assert_eq!(procnet(&["analyze", &path]).code, EXIT_STRUCTURE);
}

#[test]
fn unverifiable_omega_exits_5() {
    let text = triangle_text().replace(
        r#"["1/6", "0", "1/6", "1/6", "1/6", "1/6", "0", "1/6"]"#,
        r#"["1/2", "0", "0", "0", "0", "0", "0", "1/2"]"#,
    );
    let path = scratch("bad_omega", &text);
    let out = procnet(&["analyze", &path, "--omega", "six_cycle"]);
    assert_eq!(out.code, EXIT_OMEGA);
    assert!(out.stderr.contains("not stationary"), "{}", out.stderr);
    assert_eq!(procnet(&["analyze", &bundled("triangle"), "--omega", "missing"]).code, EXIT_OMEGA);
}

#[test]
fn variable_cap_exits_3() {
    let out = procnet(&["analyze", &bundled("chsh"), "--max-vars", "3"]);
    assert_eq!(out.code, EXIT_SEMANTIC);
    assert!(out.stderr.contains("cap"), "{}", out.stderr);
}

#[test]
fn text_reports_mention_the_verdicts() {
    let out = procnet(&["analyze", &bundled("triangle"), "--omega", "six_cycle"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("contextual: yes"));
    assert!(out.stdout.contains("vorobev regular: no"));
    let out = procnet(&["rate", "--samples", "5", "--seed", "3"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.starts_with("5 random networks"));
}
