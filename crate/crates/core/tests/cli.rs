use std::process::{Command, Output};

use stirling_core::report::OutputRecord;

fn stirling(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stirling"))
        .args(args)
        .env_remove("STIRLING_DIGITS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn coeffs_text() {
    let out = stirling(&["coeffs", "--max", "2", "--format", "text"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "a_0 = 1/2*sqrt(2)\na_1 = -1/3\na_2 = 1/12*sqrt(2)\n"
    );
}

#[test]
fn coeffs_last_row_at_twenty() {
    let out = stirling(&["coeffs", "--max", "20"]);
    let text = stdout(&out);
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("a_20 = 6232523202521089/"), "{last}");
}

#[test]
fn coeffs_json_single_entry() {
    let out = stirling(&["coeffs", "--max", "0", "--format", "json"]);
    assert!(out.status.success());
    let rec = OutputRecord::from_json(&stdout(&out)).unwrap();
    assert_eq!(rec.command, "coeffs");
    let entries = rec.payload["coefficients"].as_array().unwrap();
    assert_eq!(entries.len(), 1);
    assert_eq!(entries[0]["rational_part"], "0");
    assert_eq!(entries[0]["sqrt2_part"], "1/2");
}

#[test]
fn coeffs_guard_rail() {
    assert_eq!(stirling(&["coeffs", "--max", "201"]).status.code(), Some(2));
    assert!(stirling(&["coeffs", "--max", "200"]).status.success());
}

#[test]
fn stirling_lines() {
    let text = stdout(&stirling(&["stirling", "--max", "3"]));
    assert!(text.lines().any(|l| l == "c_3 = -139/51840"));
    assert_eq!(stdout(&stirling(&["stirling", "--max", "0"])), "c_0 = 1\n");
    let text = stdout(&stirling(&["stirling", "--max", "10"]));
    assert!(text
        .lines()
        .any(|l| l == "c_10 = 6232523202521089/86504006548979712000"));
}

#[test]
fn stirling_csv() {
    let out = stirling(&["stirling", "--max", "2", "--format", "csv"]);
    assert_eq!(
        stdout(&out),
        "\"index\",\"value\"\n\"0\",\"1\"\n\"1\",\"1/12\"\n\"2\",\"1/288\"\n"
    );
}

fn rel_error(args: &[&str]) -> f64 {
    let mut full = vec!["approx", "--format", "json"];
    full.extend_from_slice(args);
    let out = stirling(&full);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rec = OutputRecord::from_json(&stdout(&out)).unwrap();
    assert_eq!(rec.payload["digits"], 64);
    rec.payload["rows"][0]["rel_error"]
        .as_str()
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn approx_rows() {
    assert!(rel_error(&["--s", "10", "--order", "5"]) <= 1e-9);
    let e = rel_error(&["--s", "1", "--order", "0"]);
    assert!((e - 0.0779).abs() < 1e-3, "{e}");
    let e = rel_error(&["--s", "10", "--order", "0"]);
    assert!((e - 8.3e-3).abs() < 1e-4, "{e}");
}

#[test]
fn approx_rejects_bad_s() {
    assert_eq!(
        stirling(&["approx", "--s", "0", "--order", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        stirling(&["approx", "--s", "-3", "--order", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn table_sorted_by_order_then_s() {
    let out = stirling(&[
        "table", "--s-list", "20,10", "--orders", "2,0", "--format", "csv",
    ]);
    assert!(out.status.success());
    let keys: Vec<(String, String)> = stdout(&out)
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (
                f[1].trim_matches('"').to_string(),
                f[0].trim_matches('"').to_string(),
            )
        })
        .collect();
    let want = [("0", "10"), ("0", "20"), ("2", "10"), ("2", "20")];
    assert_eq!(
        keys,
        want.iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect::<Vec<_>>()
    );
}

#[test]
fn verify_oracles() {
    let out = stirling(&["verify", "--suite", "oracles"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out)
        .contains("stirling_from_bernoulli == stirling_coefficients (k≤10): EXACT MATCH"));
}

#[test]
fn verify_identities_at_forty_digits() {
    let out = stirling(&[
        "verify",
        "--suite",
        "identities",
        "--digits",
        "40",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rec = OutputRecord::from_json(&stdout(&out)).unwrap();
    assert_eq!(rec.payload["digits"], 40);
    for check in rec.payload["checks"].as_array().unwrap() {
        assert_eq!(check["passed"], true, "{check}");
        assert!(check["tolerance"].is_string() && check["measured"].is_string());
    }
}

#[test]
fn env_sets_precision() {
    let out = Command::new(env!("CARGO_BIN_EXE_stirling"))
        .args(["approx", "--s", "2", "--order", "1", "--format", "json"])
        .env("STIRLING_DIGITS", "30")
        .output()
        .unwrap();
    let rec = OutputRecord::from_json(&stdout(&out)).unwrap();
    assert_eq!(rec.payload["digits"], 30);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(stirling(&[]).status.code(), Some(2));
    assert_eq!(stirling(&["coeffs"]).status.code(), Some(2));
    assert_eq!(
        stirling(&["coeffs", "--max", "2", "--format", "xml"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        stirling(&["verify", "--suite", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(
        stirling(&["coeffs", "--max", "2", "--digits", "8"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn output_is_deterministic() {
    let args = [
        "table", "--s-list", "10,20", "--orders", "1,3", "--format", "json",
    ];
    let a = stirling(&args);
    let b = stirling(&args);
    assert_eq!(a.stdout, b.stdout);
    let rec = OutputRecord::from_json(&stdout(&a)).unwrap();
    assert_eq!(rec.to_json() + "\n", stdout(&a));
}
