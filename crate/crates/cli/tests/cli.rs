use std::fs;
use std::process::{Command, Output};

use sombor_core::report::report_body;
use sombor_core::RadicalSum;

fn sombor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sombor"))
        .args(args)
        .output()
        .expect("run sombor")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn line<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines().find_map(|l| l.strip_prefix(key))
}

#[test]
fn compute_z15_total_both() {
    let o = sombor(&["compute", "--ring", "zn", "--n", "15", "--graph", "total", "--mode", "both"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(line(&out, "oracle: "), Some("218*sqrt(2) + 16*sqrt(85)"));
    assert_eq!(line(&out, "closed[total_pq/unique]: "), Some("218*sqrt(2) + 16*sqrt(85)"));
    assert_eq!(line(&out, "match: "), Some("true"));
    assert_eq!(line(&out, "partition: "), Some("alpha=13 beta=16 gamma=20 edges=49"));
}

#[test]
fn compute_z2_total_is_zero() {
    let o = sombor(&["compute", "--ring", "zn", "--n", "2", "--graph", "total"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(line(&stdout(&o), "oracle: "), Some("0"));
}

#[test]
fn compute_printed_local_unit_warns() {
    let o = sombor(&["compute", "--ring", "zn", "--n", "9", "--graph", "unit", "--mode", "closed", "--variant", "printed"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(line(&stdout(&o), "closed[unit_local/printed]: "), Some("54*sqrt(5)"));
    let err = stderr(&o);
    assert!(err.contains("warning") && err.contains("30*sqrt(2) + 18*sqrt(61)"), "{err}");

    let o = sombor(&["compute", "--n", "9", "--graph", "unit", "--mode", "closed"]);
    assert!(stderr(&o).is_empty());
}

#[test]
fn compute_float_and_json() {
    let o = sombor(&["compute", "--n", "15", "--float"]);
    assert_eq!(line(&stdout(&o), "oracle: "), Some("455.811267914"));

    let o = sombor(&["compute", "--ring", "fpxk", "--p", "3", "--k", "2", "--graph", "unit", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["ring"], "F_3[x]/(x^2)");
    assert_eq!(v["match"], true);
    assert_eq!(v["oracle"], "30*sqrt(2) + 18*sqrt(61)");
    assert_eq!(v["partition"]["total"], 24);
}

#[test]
fn compute_off_family_closed_exits_3() {
    let o = sombor(&["compute", "--n", "105", "--mode", "closed"]);
    assert_eq!(o.status.code(), Some(3));
    // oracle output still available in both mode
    let o = sombor(&["compute", "--n", "105"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(line(&stdout(&o), "oracle: ").is_some());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(sombor(&["compute", "--n", "1"]).status.code(), Some(2));
    assert_eq!(sombor(&["compute", "--ring", "zppow", "--p", "4", "--alpha", "2"]).status.code(), Some(2));
    assert_eq!(sombor(&["compute", "--ring", "fpxk", "--p", "3"]).status.code(), Some(2));
    assert_eq!(sombor(&["compute", "--graph", "sideways", "--n", "5"]).status.code(), Some(2));
    assert_eq!(sombor(&["compute", "--n", "5", "--exact", "--float"]).status.code(), Some(2));
    assert_eq!(sombor(&["sweep", "--family", "pq", "--max-n", "100", "--ceiling", "50"]).status.code(), Some(2));
}

#[test]
fn dump_graph_writes_dimacs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z15.dimacs");
    let o = sombor(&["compute", "--n", "15", "--mode", "oracle", "--dump-graph", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.lines().any(|l| l == "p edge 15 49"));
    assert_eq!(text.lines().filter(|l| l.starts_with("e ")).count(), 49);
}

#[test]
fn sweep_pq_to_100() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pq.csv");
    let o = sombor(&["sweep", "--family", "pq", "--max-n", "100", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(&path).unwrap();
    let body = report_body(&text);
    let rows: Vec<&str> = body.lines().skip(1).collect();
    assert_eq!(rows.iter().filter(|r| r.contains(",total,")).count(), 16);
    assert_eq!(rows.iter().filter(|r| r.contains(",unit,")).count(), 16);
    assert!(rows.iter().all(|r| r.ends_with(",true,0")));
}

#[test]
fn sweep_without_cases_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.csv");
    let o = sombor(&["sweep", "--family", "p2q", "--max-n", "10", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!path.exists());
}

#[test]
fn unwritable_output_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("x.csv");
    let o = sombor(&["sweep", "--family", "pq", "--max-n", "50", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn worker_count_does_not_change_report_body() {
    for format in ["csv", "json"] {
        let run = |workers: &str| {
            let o = sombor(&["sweep", "--family", "all", "--max-n", "120", "--format", format, "--workers", workers]);
            assert_eq!(o.status.code(), Some(0));
            report_body(&stdout(&o))
        };
        assert_eq!(run("1"), run("8"));
    }
}

#[test]
fn sweep_errata_do_not_fail_the_run() {
    let o = sombor(&["sweep", "--family", "prime-power", "--max-n", "30", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["generated_at"].is_string());
    let errata = v["errata"].as_array().unwrap();
    assert!(errata.iter().any(|e| e["counterexample"] == "Z_5"));
    assert!(stderr(&o).contains("errata:"));
}

#[test]
fn verify_single_ring() {
    let o = sombor(&["verify", "--n", "45", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["cases"].as_array().unwrap().len(), 2);
    assert_eq!(v["errata"][0]["oracle_partition"]["total"], 528);
}

#[test]
fn identity_to_50() {
    let o = sombor(&["identity", "--max-n", "50"]);
    assert_eq!(o.status.code(), Some(0));
    let body = report_body(&stdout(&o));
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("n,k,residual,circulant_match"));
    assert!(lines.all(|l| l.split(',').nth(2) == Some("0")));
    assert_eq!(sombor(&["identity", "--max-n", "2"]).status.code(), Some(2));
}

#[test]
fn structure_checks() {
    let o = sombor(&["structure", "--max-n", "80", "--with-local", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["structure"].as_array().unwrap();
    assert!(rows.iter().any(|r| r["ring"] == "F_2[x]/(x^6)"));
    let z12 = rows.iter().find(|r| r["ring"] == "Z_12").unwrap();
    assert_eq!(z12["zero_divisor_clique"], false);

    let o = sombor(&["structure", "--ring", "fpxk", "--p", "5", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("F_5[x]/(x^2),true,true,true,true"));
}

#[test]
fn partition_command() {
    let o = sombor(&["partition", "--n", "15", "--graph", "unit"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "Z_15 unit: zero_divisors=7 units=8 alpha=8 beta=40 gamma=8 edges=56");
}

#[test]
fn every_exact_value_round_trips() {
    let o = sombor(&["sweep", "--family", "all", "--max-n", "150", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let mut seen = 0;
    for case in v["cases"].as_array().unwrap() {
        let mut texts = vec![case["oracle_value"].as_str().unwrap()];
        for e in case["evaluations"].as_array().unwrap() {
            texts.push(e["closed_value"].as_str().unwrap());
        }
        for t in texts {
            let parsed: RadicalSum = t.parse().unwrap();
            assert_eq!(parsed.to_string(), t);
            seen += 1;
        }
    }
    assert!(seen > 300);
}
