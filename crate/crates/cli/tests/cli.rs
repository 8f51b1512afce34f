use std::process::{Command, Output};

use serde_json::Value;

fn planeaut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_planeaut"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = planeaut(&all);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn verify_table5_all_rows() {
    let v = json(&["verify-paper", "--scope", "table5"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["passed"], 13);
    assert_eq!(v["failed"], 0);
}

#[test]
fn verify_is_deterministic() {
    let a = planeaut(&["--json", "verify-paper"]);
    let b = planeaut(&["--json", "verify-paper"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_emits_warnings() {
    let v = json(&["verify-paper", "--scope", "ramification"]);
    let z8 = v["items"]
        .as_array()
        .unwrap()
        .iter()
        .find(|i| i["id"] == "ramification/z8")
        .unwrap();
    assert_eq!(z8["notes"][0]["level"], "WARN");
    let h = json(&["verify-paper", "--scope", "hessian"]);
    assert!(h["items"].as_array().unwrap().iter().any(|i| i["notes"]
        .as_array()
        .unwrap()
        .iter()
        .any(|n| n["level"] == "WARN")));
}

#[test]
fn theorem_orders() {
    let v = json(&["verify-paper", "--scope", "theorems"]);
    let get = |id: &str| {
        v["items"]
            .as_array()
            .unwrap()
            .iter()
            .find(|i| i["id"] == id)
            .unwrap()["computed"]
            .clone()
    };
    let orders: Vec<Value> = [
        "stabilizer/homology-quintic",
        "stabilizer/non-homology-quintic",
        "stabilizer/klein-sextic-family",
        "stabilizer/homology-sextic-family",
    ]
    .iter()
    .map(|id| get(id))
    .collect();
    assert_eq!(orders, vec![4, 4, 3, 3]);
}

#[test]
fn normal_form_z8() {
    let v = json(&[
        "normal-form",
        "--type",
        "8,(1,4)",
        "-d",
        "5",
        "--reference",
        "X^5,Y^4*Z,X*Z^4",
    ]);
    assert_eq!(v["form"], "X^5 + b20*X^3*Z^2 + X*Z^4 + Y^4*Z");
    assert_eq!(v["parameters"][0]["monomial"], "X^3*Z^2");
}

#[test]
fn normal_form_forced_factor() {
    let v = json(&[
        "normal-form",
        "--type",
        "4,1,3",
        "-d",
        "5",
        "--reference",
        "X^5",
    ]);
    assert!(v["degenerate"].as_str().unwrap().contains("divisible by X"));
}

#[test]
fn smooth_check_exact_and_mod_p() {
    let f = "X^5 + Y^4*Z + X*Z^4 + b*X^3*Z^2";
    assert_eq!(
        json(&["smooth-check", f, "--set", "b=2"])["verdict"],
        "singular"
    );
    assert_eq!(
        json(&["smooth-check", f, "--set", "b=1"])["verdict"],
        "smooth"
    );
    let v = json(&["smooth-check", f, "--set", "b=1", "--prime", "17"]);
    assert_eq!(v["certificate"]["verdict"], "smooth");
    assert_eq!(v["within_weil_bound"], true);
}

#[test]
fn stabilizer_and_ramification() {
    let f = "X^5 + X*(Z^4 + Y^4) + b*Y^2*Z^3";
    let s = json(&["stabilizer", f, "--set", "b=1"]);
    assert_eq!(s["diagonal"]["order"], 4);
    let r = json(&["ramification", f, "--set", "b=1", "--type", "4,1,2"]);
    assert_eq!(r["profile"]["entries"], serde_json::json!([[4, 2], [2, 4]]));
    assert_eq!(r["profile"]["quotient_genus"], 1);
}

#[test]
fn hessian_and_gamma() {
    assert_eq!(json(&["hessian", "--subgroup", "72"])["order"], 72);
    let g = json(&["gamma", "--b1", "0", "--b2", "1", "--b3", "1"]);
    assert_eq!(g["choices"].as_array().unwrap().len(), 3);
    assert_eq!(g["choices"][0]["values"][0], "3");
    assert_eq!(g["in_gamma_any"], false);
    let one = json(&[
        "gamma", "--b1", "1", "--b2", "1", "--b3", "1", "--lambda", "2",
    ]);
    assert_eq!(one["choices"].as_array().unwrap().len(), 1);
}

#[test]
fn types_conjugate_reports_certificate() {
    let v = json(&["types-conjugate", "--type", "4,0,1", "--type", "4,1,2"]);
    assert_eq!(v["conjugate"], false);
    let w = json(&["types-conjugate", "--type", "5,1,2", "--type", "5,2,4"]);
    assert_eq!(w["conjugate"], true);
}

#[test]
fn bad_input_is_an_error() {
    let out = planeaut(&["smooth-check", "X^4 + Y^3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    assert!(
        !planeaut(&["gamma", "--b1", "1", "--b2", "1", "--b3", "1", "--lambda", "3"])
            .status
            .success()
    );
    assert!(!planeaut(&["verify-paper", "--scope", "nope"])
        .status
        .success());
}

#[test]
fn prime_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_planeaut"))
        .args(["smooth-check", "X^5 + Y^5 + Z^5", "--prime", "41"])
        .env("PLANEAUT_MAX_PRIME", "30")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
