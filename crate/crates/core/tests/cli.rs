use std::process::Command;

use serde_json::Value;

fn qsd(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qsd"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn check_reports_witt_parameters() {
    let (code, out, _) = qsd(&["check", "23", "7", "21", "3", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("77, 253"));
    assert!(out.contains("(253,140,87,65)"));
    assert!(out.contains("140^1 25^22 (-3)^230"));
    assert!(out.contains("feasible"));
}

#[test]
fn check_failures_and_usage() {
    let (code, out, _) = qsd(&["check", "23", "7", "21", "4", "1"]);
    assert_eq!(code, 1);
    assert!(out.contains("R = 50/3"), "{out}");
    let (code, _, err) = qsd(&["check", "23", "7", "21", "3"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
    assert_eq!(qsd(&["check", "23", "7", "0", "3", "1"]).0, 2);
    assert_eq!(qsd(&["--format", "yaml", "tables"]).0, 2);
}

#[test]
fn check_json_fields() {
    let (code, out, _) = qsd(&["check", "23", "7", "21", "3", "1", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["r"], "77");
    assert_eq!(v["b"], "253");
    assert_eq!(v["block_graph"]["K"], "140");
    assert_eq!(v["block_graph"]["S"], "-3");
    assert_eq!(v["regular_set"]["d"], "60");
    assert_eq!(v["criteria"]["h_value"], "0");
    assert_eq!(v["status"], "feasible");
}

#[test]
fn check_csv_columns() {
    let (_, out, _) = qsd(&["--format", "csv", "check", "6", "3", "2", "2", "1"]);
    let mut lines = out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "v,k,lambda,x,y,r,b,V,K,R,S,Lambda,M,d,e,cc_slack,n_slack,c_value,h_value,krein_margin,status,reasons"
    );
    assert_eq!(
        lines.next().unwrap(),
        "6,3,2,2,1,5,10,10,3,1,-2,0,1,2,1,0,100,4,16/27,20/9,feasible,"
    );
}

#[test]
fn scan_survivors_small() {
    let (code, out, _) = qsd(&["scan", "--v-max", "8", "--survivors"]);
    assert_eq!(code, 0);
    assert!(out.contains("(8,2,1,x=1,y=0)"));
    assert!(out.contains("(8,4,3,x=2,y=0)"));
    let (code, out, _) = qsd(&["scan", "--v-max", "3", "--survivors"]);
    assert_eq!(code, 0);
    assert!(out.lines().all(|l| l.starts_with('#')));
}

#[test]
fn scan_cap_exit_code() {
    let (code, _, err) = qsd(&["scan", "--v-max", "60", "--disable", "cc", "--cap", "1000"]);
    assert_eq!(code, 3);
    assert!(err.contains("cap"));
}

#[test]
fn scan_json_is_deterministic_and_round_trips() {
    let a = qsd(&["scan", "--v-max", "20", "--format", "json"]).1;
    let b = qsd(&["--threads", "1", "scan", "--v-max", "20", "--format", "json"]).1;
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    let mut again = serde_json::to_string_pretty(&v).unwrap();
    again.push('\n');
    assert_eq!(again, a);
}

#[test]
fn tables_family_complement() {
    let (code, out, _) = qsd(&["tables"]);
    assert_eq!(code, 0);
    assert!(out.contains("14 rows, 0 failed checks"));

    let (code, out, _) = qsd(&["family", "bh", "--q", "4"]);
    assert_eq!(code, 0);
    assert!(out.contains("(64,24,46,x=12,y=8)") && out.contains("126, 336"));

    let (code, out, _) = qsd(&["family", "ard", "--n", "14", "--t", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("externally-excluded"));

    let (code, out, _) = qsd(&["complement", "23", "7", "21", "3", "1", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["complement"], "(23,16,120,x=12,y=10)");
    assert_eq!(v["c_equal"], true);
}

#[test]
fn equivalence_small_run() {
    let (code, out, _) = qsd(&["equivalence", "--seed", "7", "--samples", "200"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("0 failures\n"), "{out}");
    assert_eq!(qsd(&["equivalence", "--samples", "0"]).0, 2);
}

#[test]
fn oracle_export_round_trips() {
    let dir = std::env::temp_dir().join(format!("qsd-oracle-{}", std::process::id()));
    let (code, out, _) = qsd(&["oracle", "--export", dir.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    let text = std::fs::read_to_string(dir.join("design-6-3-2.txt")).unwrap();
    let d = qsd_core::oracle::ExplicitDesign::from_text(&text).unwrap();
    assert_eq!(d, qsd_core::oracle::build_6_3_2());
    let witt = std::fs::read_to_string(dir.join("witt-23.txt")).unwrap();
    assert!(witt.starts_with("23 253\n"));
    assert_eq!(witt.lines().count(), 254);
    std::fs::remove_dir_all(&dir).unwrap();
}
