use std::process::{Command, Output};

use hypsum_core::report::Report;

fn hypsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypsum"))
        .args(args)
        .env_remove("HYPSUM_DIGITS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn psi_json_for_a_tenth() {
    let o = hypsum(&["psi", "1/10", "--digits", "30", "--method", "murty", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["route"], "murty");
    assert_eq!(v["value"], "-10.4237549404110767951682162190");
    assert!(v["closed_form"].as_str().unwrap().starts_with("-gamma - 2*ln(2) - ln(5) - (1/2)*pi*cot(pi/10)"));
}

#[test]
fn psi_at_one_and_at_a_pole() {
    let o = hypsum(&["psi", "1", "--digits", "20"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("= -gamma"));
    assert!(out.contains("-0.57721566490153286061"));

    let o = hypsum(&["psi", "-2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("pole"));
}

#[test]
fn psi_series_method() {
    let o = hypsum(&["psi", "-3/2", "--digits", "25", "--method", "all"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("8/3 - gamma - 2*ln(2)"), "{out}");
    assert!(out.contains("series = 0.7031566406452431872256903"), "{out}");
}

#[test]
fn digits_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_hypsum"))
        .args(["psi", "1"])
        .env("HYPSUM_DIGITS", "12")
        .output()
        .unwrap();
    assert!(stdout(&o).contains("-0.577215664902\n"));
}

#[test]
fn clausen_routes() {
    let o = hypsum(&["clausen", "--p", "1", "--q", "3", "--digits", "30", "--method", "all"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.matches("1.78072753952290615044037206318").count(), 3, "{out}");

    let o = hypsum(&["clausen", "--c", "2"]);
    assert!(stdout(&o).contains("closed (murty) = 2\n"));

    let o = hypsum(&["clausen", "--c", "1", "--digits", "20"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("pi^2/6") && out.contains("1.6449340668482264365"));

    let o = hypsum(&["clausen", "--c", "-2"]);
    assert_eq!(o.status.code(), Some(1));
    let o = hypsum(&["clausen", "--c", "1/0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_single_records() {
    let o = hypsum(&["verify", "--id", "4.1", "--digits", "30"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("1 pass, 0 fail"));

    let o = hypsum(&["verify", "--id", "5.2", "--digits", "30", "--report", "csv"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row.len(), 11);
    assert_eq!(row[0], "5.2");
    assert_eq!(row[8], "4.06311e0");
    assert_eq!(row[10], "expected-fail");
}

#[test]
fn verify_exit_codes() {
    assert_eq!(hypsum(&["verify", "--id", "9.9"]).status.code(), Some(2));
    assert_eq!(hypsum(&["verify"]).status.code(), Some(2));
    assert_eq!(hypsum(&["verify", "--bogus"]).status.code(), Some(2));
    // an impossible threshold turns passes into failures
    let o = hypsum(&["verify", "--id", "4.4", "--digits", "20", "--threshold", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("0 pass, 1 fail"));
}

#[test]
fn verify_all_json_round_trips() {
    let o = hypsum(&["verify", "--all", "--digits", "50", "--report", "json"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let report = Report::from_json(&text).unwrap();
    assert_eq!(report.records.len(), 26);
    assert_eq!((report.summary.pass, report.summary.fail, report.summary.expected_fail), (23, 0, 3));
    assert_eq!(report.to_json(), text);
    for r in &report.records {
        // exactly 50 significant digits
        let sig = r.closed_value.trim_start_matches('-').trim_start_matches(['0', '.']);
        assert_eq!(sig.chars().filter(char::is_ascii_digit).count(), 50, "{}", r.closed_value);
    }
}

#[test]
fn gauss_route_gives_same_verdicts() {
    let o = hypsum(&["verify", "--all", "--digits", "30", "--route", "gauss"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("23 pass, 0 fail, 3 expected-fail"));
}
