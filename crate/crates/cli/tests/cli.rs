use std::process::{Command, Output};

use serde_json::Value;

const EX1: &str = "(12->13|34->24);(1|234)";
const EX4: &str = "(1->2|4->3|235->145)";

fn irk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_irk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--report", "json"]);
    let out = irk(&all);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn table(name: &str) -> String {
    format!("{}/../core/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn example_one_has_delta_as_an_orbit_identity() {
    let v = json(&["decompose", "--algebra", "dual-sym", "--n", "4", "--gens", EX1]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["elements"].as_array().unwrap().len(), 6);
    let ids: Vec<&Value> = v["orbits"].as_array().unwrap().iter().map(|o| &o["identity"]).collect();
    assert!(ids.iter().any(|e| e["symbol"] == "DELTA" && e["text"] == "(1|2|3|4)"));
    assert_eq!(v["flags"]["weakly_effective"], true);
    assert_eq!(v["flags"]["effective"], false);
}

#[test]
fn cyclic_partial_injection_has_transitive_factors() {
    let v = json(&["decompose", "--algebra", "sym", "--n", "3", "--gens", "[1->2,2->3]"]);
    let orbits = v["orbits"].as_array().unwrap();
    assert!(!orbits.is_empty());
    assert!(orbits.iter().all(|o| o["factor_flags"]["transitive"] == true));
}

#[test]
fn example_four_is_disperse() {
    let v = json(&["decompose", "--algebra", "dual-sym", "--n", "5", "--gens", EX4]);
    assert_eq!(v["flags"]["disperse"], true);
    assert_eq!(v["orbits"].as_array().unwrap().len(), 3);
    assert_eq!(
        v["schein"]["recovering_sub_sums"],
        serde_json::json!([[1, 2], [1, 3], [2, 3]])
    );
}

#[test]
fn text_report_names_both_forms_of_nabla() {
    let out = irk(&["decompose", "--algebra", "dual-sym", "--n", "4", "--gens", EX1]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("NABLA (1234)"));
}

#[test]
fn verify_selected_theorems() {
    let t2 = json(&[
        "verify",
        "--theorem",
        "T2",
        "--algebra",
        "dual-sym",
        "--n",
        "4",
        "--gens",
        EX1,
    ]);
    assert_eq!(t2["theorems"][0]["status"], "holds");
    let t3 = json(&[
        "verify",
        "--theorem",
        "T3",
        "--algebra",
        "dual-sym",
        "--n",
        "4",
        "--gens",
        EX1,
    ]);
    assert_eq!(t3["theorems"][0]["status"], "not-applicable");
    let t4 = json(&[
        "verify",
        "--theorem",
        "t4",
        "--algebra",
        "sym",
        "--n",
        "3",
        "--gens",
        "[1->2,2->3,3->1]",
    ]);
    assert_eq!(t4["theorems"][0]["status"], "holds");
    assert!(t4["theorems"][0]["clauses"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["name"].as_str().unwrap().contains("unique")));
}

#[test]
fn verify_defaults_to_all_theorems() {
    let v = json(&["verify", "--algebra", "sym", "--n", "2", "--gens", "[1->2]"]);
    assert_eq!(v["theorems"].as_array().unwrap().len(), 4);
}

#[test]
fn parse_errors_exit_with_two() {
    let out = irk(&["decompose", "--algebra", "sym", "--n", "3", "--gens", "[1->2];[2->x]"]);
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains("generator 2") && err.contains("column"), "{err}");
}

#[test]
fn size_guards_exit_with_two() {
    let out = irk(&["decompose", "--algebra", "dual-sym", "--n", "9", "--gens", "(1)"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("size guard"));
    let out = irk(&[
        "decompose",
        "--algebra",
        "sym",
        "--n",
        "2",
        "--gens",
        "[1->2]",
        "--degree",
        "--n-max",
        "6",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("n_max"));
}

#[test]
fn missing_input_exits_with_two() {
    let out = irk(&["decompose", "--algebra", "sym", "--n", "2"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn one_sided_projection_exits_with_three() {
    let out = irk(&[
        "decompose",
        "--algebra",
        "dual-sym",
        "--n",
        "4",
        "--gens",
        "(1|2|3->4|4->3);(12->13|34->24)",
    ]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("projection formula"));
}

#[test]
fn table_input_with_degree_search() {
    let path = table("b2.table");
    let v = json(&[
        "decompose",
        "--algebra",
        "sym",
        "--n",
        "2",
        "--table",
        &path,
        "--assign",
        "a=[1->2]",
        "--degree",
    ]);
    assert_eq!(v["representation"]["injective"], true);
    assert_eq!(v["degree"]["deg"]["degree"], 2);
    assert_eq!(v["degree"]["degstar"]["degree"], 3);
    assert_eq!(v["degree"]["bounds"]["hat"], true);
}

#[test]
fn bad_table_inputs_exit_with_two() {
    let path = table("b2.table");
    let unknown = irk(&[
        "decompose",
        "--algebra",
        "sym",
        "--n",
        "2",
        "--table",
        &path,
        "--assign",
        "z=[1->2]",
    ]);
    assert_eq!(code(&unknown), 2);
    let missing = irk(&[
        "decompose",
        "--algebra",
        "sym",
        "--n",
        "2",
        "--table",
        "/nonexistent",
        "--assign",
        "a=[1->2]",
    ]);
    assert_eq!(code(&missing), 2);
    // a swap squares to the identity, which cannot be the image of a zero
    let wrong = irk(&[
        "decompose",
        "--algebra",
        "sym",
        "--n",
        "2",
        "--table",
        &path,
        "--assign",
        "a=[1->2,2->1]",
    ]);
    assert_eq!(code(&wrong), 2);
}

#[test]
fn corpus_passes() {
    let out = irk(&["corpus"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).ends_with("4/4 pass\n"));
}

#[test]
fn corpus_filter() {
    let out = irk(&["corpus", "--only", "4"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("example 4: pass"));
    assert!(text.ends_with("1/1 pass\n"));
    assert_eq!(code(&irk(&["corpus", "--only", "5"])), 2);
    let v: Value = serde_json::from_slice(&irk(&["corpus", "--report", "json"]).stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 4);
}

#[test]
fn json_is_byte_identical_across_runs() {
    let args = [
        "decompose",
        "--algebra",
        "sym",
        "--n",
        "3",
        "--gens",
        "[1->2,2->3];[1->1]",
        "--report",
        "json",
    ];
    assert_eq!(irk(&args).stdout, irk(&args).stdout);
}
