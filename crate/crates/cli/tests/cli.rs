use std::process::{Command, Output};

use pkp_core::{evaluate, ExactRational, ParameterSet, Validity, Variant};
use serde_json::Value;

fn pkpcount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pkpcount")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = pkpcount(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn table_csv_round_trips() {
    let text = stdout(&["table", "--variant", "pkp", "--q", "251", "--ell", "30..41", "--m", "69"]);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>().join(","),
        "variant,q,ell,m,n,exact_num,exact_den,exact_decimal,exact_minus_one_decimal,heuristic_decimal,ratio_decimal"
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 12);
    let mut previous: Option<ExactRational> = None;
    for (row, ell) in rows.iter().zip(30u32..) {
        let variant: Variant = row[0].parse().unwrap();
        let p = ParameterSet::new(variant, row[1].parse().unwrap(), row[2].parse().unwrap(), row[3].parse().unwrap(), row[4].parse().unwrap()).unwrap();
        assert_eq!(p.ell, ell);
        let printed: ExactRational = format!("{}/{}", &row[5], &row[6]).parse().unwrap();
        let report = evaluate(&p, Validity::Strict).unwrap();
        assert_eq!(printed, report.exact);
        assert_eq!(&row[7], report.exact.to_decimal(12));
        if let Some(prev) = previous {
            assert!(printed < prev, "not decreasing at ell = {ell}");
        }
        previous = Some(printed);
    }
}

#[test]
fn json_round_trips() {
    let v: Value = serde_json::from_str(&stdout(&[
        "table", "--variant", "ipkp", "--q", "3,5", "--ell", "1..2", "--m", "4", "--n", "1..2", "--format", "json",
    ]))
    .unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 8);
    for row in rows {
        let p = ParameterSet::new(
            Variant::Ipkp,
            row["q"].as_u64().unwrap(),
            row["ell"].as_u64().unwrap() as u32,
            row["m"].as_u64().unwrap() as u32,
            row["n"].as_u64().unwrap() as u32,
        )
        .unwrap();
        let exact: ExactRational = row["exact"].as_str().unwrap().parse().unwrap();
        assert_eq!(exact, evaluate(&p, Validity::Strict).unwrap().exact);
        let minus: ExactRational = row["exact_minus_one"].as_str().unwrap().parse().unwrap();
        assert_eq!(&exact - &ExactRational::one(), minus);
    }

    let v: Value = serde_json::from_str(&stdout(&[
        "expect", "--variant", "ipkp_star", "--q", "7", "--ell", "1", "--m", "3", "--format", "json",
    ]))
    .unwrap();
    assert_eq!(v["exact"], "97/57");
    assert_eq!(v["outside_validity"], false);
}

#[test]
fn expect_text_report() {
    let text = stdout(&["expect", "--variant", "ipkp_star", "--q", "7", "--ell", "1", "--m", "3"]);
    assert!(text.contains("= 97/57"), "{text}");
    let text = stdout(&["expect", "--variant", "ipkp", "--q", "1021", "--ell", "35", "--m", "79", "--n", "3", "--digits", "3"]);
    assert!(text.lines().any(|l| l.starts_with("exact - 1") && l.ends_with("2.89e-6")), "{text}");
}

#[test]
fn heuristic_command() {
    let v: Value = serde_json::from_str(&stdout(&[
        "heuristic", "--variant", "ipkp", "--q", "5", "--ell", "1", "--m", "1", "--format", "json",
    ]))
    .unwrap();
    assert_eq!(v["heuristic"], "1/5");
    let v: Value = serde_json::from_str(&stdout(&[
        "heuristic", "--variant", "ipkp", "--q", "5", "--ell", "1", "--m", "1", "--n", "2", "--lenient", "--format", "json",
    ]))
    .unwrap();
    assert_eq!(v["heuristic"], "1/25");
}

#[test]
fn gen_then_count() {
    let dir = tempfile::tempdir().unwrap();
    for (variant, q, ell, m) in [("ipkp", "5", "2", "6"), ("ipkp_star", "11", "2", "5"), ("pkp", "3", "2", "6"), ("pkp_star", "7", "1", "5")] {
        let path = dir.path().join(format!("{variant}.json"));
        let path = path.to_str().unwrap();
        stdout(&["gen", "--variant", variant, "--q", q, "--ell", ell, "--m", m, "--seed", "5", "--with-secret", "--out", path]);
        let v: Value = serde_json::from_str(&stdout(&["count", path, "--format", "json"])).unwrap();
        assert!(v["n_sol"].as_u64().unwrap() >= 1);
        assert_eq!(v["contains_secret"], true);
        assert_eq!(v["variant"], variant);
    }
}

#[test]
fn secret_only_with_flag() {
    let args = ["gen", "--variant", "pkp", "--q", "5", "--ell", "1", "--m", "4", "--seed", "1"];
    assert!(!stdout(&args).contains("\"pi\""));
    let mut with = args.to_vec();
    with.push("--with-secret");
    assert!(stdout(&with).contains("\"pi\""));
}

#[test]
fn gen_is_deterministic() {
    let args = ["gen", "--variant", "ipkp", "--q", "13", "--ell", "3", "--m", "8", "--n", "2", "--seed", "42", "--with-secret"];
    assert_eq!(stdout(&args), stdout(&args));
    let other = ["gen", "--variant", "ipkp", "--q", "13", "--ell", "3", "--m", "8", "--n", "2", "--seed", "43", "--with-secret"];
    assert_ne!(stdout(&args), stdout(&other));
}

#[test]
fn enumerate_exact_agrees() {
    let v: Value = serde_json::from_str(&stdout(&[
        "enumerate-exact", "--variant", "pkp", "--q", "2", "--ell", "1", "--m", "2", "--all-matrices", "--format", "json",
    ]))
    .unwrap();
    assert_eq!(v["oracle"], "4/3");
    assert_eq!(v["agree"], true);
    assert_eq!(v["points"], 6);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let printed = stdout(&["expect", "--variant", "pkp", "--q", "5", "--ell", "1", "--m", "3", "--format", "csv"]);
    let silent = stdout(&["expect", "--variant", "pkp", "--q", "5", "--ell", "1", "--m", "3", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(silent.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), printed);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| pkpcount(args).status.code().unwrap();

    let out = pkpcount(&["expect", "--variant", "pkp", "--q", "5", "--ell", "3", "--m", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ell + n <= m"));

    let out = pkpcount(&["expect", "--variant", "pkp_star", "--q", "7", "--ell", "1", "--m", "4", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("multidimensional"));

    assert_eq!(code(&["expect", "--variant", "pkp", "--q", "6", "--ell", "1", "--m", "3"]), 2);
    assert_eq!(code(&["expect", "--variant", "pkp", "--q", "6", "--ell", "1", "--m", "3", "--lenient"]), 0);
    assert_eq!(code(&["gen", "--variant", "pkp", "--q", "4", "--ell", "1", "--m", "3"]), 2);
    assert_eq!(code(&["mc", "--variant", "pkp", "--q", "5", "--ell", "1", "--m", "3", "--samples", "0"]), 2);
    assert_eq!(code(&["enumerate-exact", "--variant", "ipkp", "--q", "7", "--ell", "2", "--m", "5"]), 3);
    assert_eq!(code(&["count", "/nonexistent/instance.json"]), 1);
    assert_eq!(code(&["table", "--variant", "pkp", "--q", "5", "--ell", "3..1", "--m", "4"]), 2);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.json");
    let path = path.to_str().unwrap();
    stdout(&["gen", "--variant", "ipkp", "--q", "5", "--ell", "2", "--m", "9", "--out", path]);
    assert_eq!(code(&["count", path, "--max-m", "8"]), 3);
    assert_eq!(code(&["count", path, "--max-m", "9"]), 0);

    std::fs::write(path, "{ not json").unwrap();
    let out = pkpcount(&["count", path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

#[test]
fn mc_report_is_reproducible() {
    let args = ["mc", "--variant", "pkp_star", "--q", "7", "--ell", "1", "--m", "4", "--samples", "2000", "--seed", "3", "--format", "json"];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["samples"], 2000);
    assert!(v["z_score"].as_f64().unwrap().abs() <= 4.0);
}

#[test]
fn selftest_passes() {
    let out = stdout(&["selftest", "--samples", "2000"]);
    assert!(out.lines().all(|l| !l.starts_with("FAIL")), "{out}");
    assert!(out.contains("0 failed"));
}
