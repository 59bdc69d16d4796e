use std::path::Path;

use local_diffsets::cli::{run, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION};
use local_diffsets::io::{read_set, SetData};
use local_diffsets::{build_pn, diff_count, GroundSet};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("diffset").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_levels_reports_summary_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("p3.txt");
    let (code, out, _) = call(&["construct", "--levels", "3", "--out", path_str(&f)]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "size=8 diff_count=27\n");
    match read_set(&f).unwrap() {
        SetData::Hypercube(p) => assert_eq!(p, build_pn(3).unwrap()),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn construct_short_flag_and_stdout() {
    let (code, out, err) = call(&["construct", "-l", "2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "n=2 count=4\n0\n1\n3\n4\n");
    assert_eq!(err, "size=4 diff_count=9\n");
}

#[test]
fn construct_truncated() {
    let (code, out, _) = call(&["construct", "--n", "3"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("n=2 count=3\n"));
}

#[test]
fn construct_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for f in [&a, &b] {
        let (code, _, _) = call(&["construct", "--kind", "sidon", "--n", "10", "--seed", "7", "--out", path_str(f)]);
        assert_eq!(code, EXIT_OK);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let (_, r1, _) = call(&["construct", "--kind", "random", "--n", "20", "--seed", "3"]);
    let (_, r2, _) = call(&["construct", "--kind", "random", "--n", "20", "--seed", "3"]);
    let (_, r3, _) = call(&["construct", "--kind", "random", "--n", "20", "--seed", "4"]);
    assert_eq!(r1, r2);
    assert_ne!(r1, r3);
}

#[test]
fn construct_policy_errors_are_usage_errors() {
    assert_eq!(call(&["construct", "--levels", "40"]).0, EXIT_USAGE);
    assert_eq!(call(&["construct", "--kind", "sidon"]).0, EXIT_USAGE);
    assert_eq!(call(&["construct", "--levels", "2", "--n", "3"]).0, EXIT_USAGE);
    assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(call(&["--help"]).0, EXIT_OK);
}

#[test]
fn verify_all_k_on_p4() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("p4.txt");
    let rep = dir.path().join("rep.csv");
    call(&["construct", "--levels", "4", "--out", path_str(&f)]);
    let (code, out, _) = call(&["verify", path_str(&f), "--all-k", "--format", "csv", "--report", path_str(&rep)]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 17);
    assert_eq!(std::fs::read_to_string(&rep).unwrap(), out);
    let (code, out, _) = call(&["verify", path_str(&f), "--k", "3", "--format", "json-lines"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["min_diff"], 7);
    assert_eq!(v["bound_lo"].as_f64().unwrap(), 5.704522494691117);
    assert_eq!(v["bound_hi"].as_f64().unwrap(), 5.704522494691118);
}

#[test]
fn verify_ap_violation_prints_witness() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("ap.txt");
    call(&["construct", "--kind", "ap", "--n", "16", "--out", path_str(&f)]);
    let (code, out, err) = call(&["verify", path_str(&f), "--k", "4"]);
    assert_eq!(code, EXIT_VIOLATION);
    assert!(out.contains("min_diff = 7"));
    assert!(err.contains("witness=0,1,2,3"));
    let (code, _, _) = call(&["verify", path_str(&f), "--k", "1"]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn verify_budget_exhaustion_is_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("p6.txt");
    call(&["construct", "--levels", "6", "--out", path_str(&f)]);
    let (code, _, err) = call(&["verify", path_str(&f), "--k", "6", "--mode", "bnb", "--budget", "500"]);
    assert_eq!(code, EXIT_INCONCLUSIVE);
    assert!(err.contains("inconclusive"));
}

#[test]
fn verify_missing_file_is_io_error() {
    let (code, _, err) = call(&["verify", "/nonexistent/set.txt", "--k", "2"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.starts_with("error:"));
}

#[test]
fn verify_threads_flag_gives_same_answer() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("p5.txt");
    call(&["construct", "--levels", "5", "--out", path_str(&f)]);
    let one = call(&["--threads", "1", "verify", path_str(&f), "--k", "4", "--format", "csv"]);
    let many = call(&["--threads", "4", "verify", path_str(&f), "--k", "4", "--format", "csv"]);
    assert_eq!(one.0, EXIT_OK);
    // node counts may differ with the shared bound; the minimum may not
    let min = |s: &str| s.lines().nth(1).unwrap().split(',').nth(1).unwrap().to_string();
    assert_eq!(min(&one.1), "9");
    assert_eq!(min(&many.1), "9");
}

#[test]
fn prove_and_validate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for claim in ["f1", "f0", "subadditivity", "gamma-reduction", "domain-reduction"] {
        let cert = dir.path().join(format!("{claim}.cert"));
        let (code, out, _) = call(&["prove", claim, "--cert", path_str(&cert)]);
        assert_eq!(code, EXIT_OK, "{claim}");
        assert!(out.contains(": verified"));
        let (code, out, _) = call(&["validate-certificate", path_str(&cert)]);
        assert_eq!(code, EXIT_OK, "{claim}");
        assert!(out.contains("valid"));
    }
    let (_, out, _) = call(&["prove", "domain-reduction"]);
    assert!(out.contains("margin in [0.0360360399130307"));
}

#[test]
fn tampered_certificate_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("f1.cert");
    call(&["prove", "f1", "--cert", path_str(&cert)]);
    let text = std::fs::read_to_string(&cert).unwrap();
    // drop the first box: [1/10, ...] is no longer covered
    let first_box = text.lines().position(|l| l.starts_with("box ")).unwrap();
    let cut: Vec<&str> = text.lines().enumerate().filter(|(i, _)| *i != first_box).map(|(_, l)| l).collect();
    std::fs::write(&cert, cut.join("\n") + "\n").unwrap();
    let (code, _, err) = call(&["validate-certificate", path_str(&cert)]);
    assert_eq!(code, EXIT_VIOLATION);
    assert!(err.contains("gap"));
    std::fs::write(&cert, "certificate claim=f1\n").unwrap();
    assert_eq!(call(&["validate-certificate", path_str(&cert)]).0, EXIT_USAGE);
}

#[test]
fn prove_subadditivity_instance_and_small_grid() {
    let (code, out, _) = call(&["prove", "subadditivity", "--a", "4", "--b", "4"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("proved"));
    let (code, out, _) = call(&["prove", "tight-grid", "--max", "5"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("violations 0\n"));
    assert_eq!(call(&["prove", "f7"]).0, EXIT_USAGE);
}

#[test]
fn report_table() {
    let dir = tempfile::tempdir().unwrap();
    let p5 = dir.path().join("p5.txt");
    let ap = dir.path().join("ap.txt");
    let sidon = dir.path().join("sidon20.txt");
    call(&["construct", "--levels", "5", "--out", path_str(&p5)]);
    call(&["construct", "--kind", "ap", "--n", "32", "--out", path_str(&ap)]);
    call(&["construct", "--kind", "sidon", "--n", "20", "--out", path_str(&sidon)]);
    let (code, out, _) = call(&["report", path_str(&p5), path_str(&ap), path_str(&sidon)]);
    assert_eq!(code, EXIT_OK);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[1].contains(",hypercube,32,243,121,4,9,"));
    assert!(rows[2].contains(",integers,32,63,31,4,7,9,9,false"));
    // pairwise oracle for the Sidon row: every ordered pair is distinct
    let s = read_set(&sidon).unwrap();
    assert_eq!(diff_count(&s), (20 * 19 + 1) as u64);
    assert!(rows[3].contains(&format!(",integers,20,{},", 20 * 19 + 1)));
    assert_eq!(s.len(), 20);

    let (code, out, _) = call(&["report", path_str(&p5), "--format", "json-lines"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["diff_count"], 243);

    let (code, out, _) = call(&["report"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 1);
    let (code, out, _) = call(&["report", "--format", "json-lines"]);
    assert_eq!((code, out.as_str()), (EXIT_OK, ""));
}
