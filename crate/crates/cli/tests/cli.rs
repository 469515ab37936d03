use std::f64::consts::PI;
use std::path::Path;

use assert_cmd::Command;
use tempfile::tempdir;

fn bin() -> Command {
    Command::cargo_bin("thermoscreen").unwrap()
}

// p_F = (9π/4)^{1/3} α / r_s with m = 1.
fn p_fermi(rs: f64) -> f64 {
    (9.0 * PI / 4.0).cbrt() * 7.297_352_569_3e-3 / rs
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    let headers = rdr.headers().unwrap().iter().map(String::from).collect();
    let rows = rdr.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect();
    (headers, rows)
}

fn column(headers: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let k = headers.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[k].parse().unwrap()).collect()
}

#[test]
fn chi_at_origin_is_minus_pf_over_pi_squared() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("chi.csv");
    bin().args(["chi", "--grid", "0:0:1", "--out"]).arg(&out).assert().success();
    let (h, rows) = read_csv(&out);
    assert_eq!(h, ["q_re", "q_im", "re_chiT", "im_chiT", "err", "status"]);
    let v = column(&h, &rows, "re_chiT")[0];
    let expect = -p_fermi(3.0) / (PI * PI);
    assert!((v / expect - 1.0).abs() < 1e-3, "{v} vs {expect}");
}

#[test]
fn empty_grid_is_a_usage_error() {
    bin().args(["chi", "--grid", "0:1:0"]).assert().code(2);
    bin().args(["potential", "--grid", "2:1:5"]).assert().code(2);
    bin().args(["chi", "--grid", "0:1:3", "--abs-tol", "-1"]).assert().code(2);
}

#[test]
fn json_matches_csv_field_for_field() {
    let dir = tempdir().unwrap();
    let csv_path = dir.path().join("t.csv");
    let json_path = dir.path().join("t.json");
    let args = ["chi", "--grid", "0.008:0.011:4", "--qi", "0.001", "--overlay"];
    bin().args(args).arg("--out").arg(&csv_path).assert().success();
    bin().args(args).args(["--format", "json", "--out"]).arg(&json_path).assert().success();
    let (h, rows) = read_csv(&csv_path);
    let json: Vec<serde_json::Map<String, serde_json::Value>> =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(json.len(), rows.len());
    for (obj, row) in json.iter().zip(&rows) {
        assert_eq!(obj.len(), h.len());
        for (name, field) in h.iter().zip(row) {
            match &obj[name] {
                serde_json::Value::Number(n) => {
                    assert_eq!(n.as_f64().unwrap().to_bits(), field.parse::<f64>().unwrap().to_bits(), "{name}")
                }
                serde_json::Value::String(s) => assert_eq!(s, field),
                serde_json::Value::Null => assert!(field.is_empty()),
                other => panic!("unexpected {other}"),
            }
        }
    }
}

#[test]
fn identical_runs_write_identical_bytes() {
    let dir = tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        bin().args(["potential", "--grid", "40:44:5", "--r-unit", "two-pf", "--method", "direct", "--out"]).arg(p).assert().success();
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn single_method_has_only_its_columns() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("v.csv");
    bin().args(["potential", "--grid", "40:41:2", "--r-unit", "two-pf", "--method", "asymptotic", "--out"]).arg(&out).assert().success();
    let (h, _) = read_csv(&out);
    assert_eq!(h, ["r", "V_asymptotic", "err_asymptotic", "status"]);
}

#[test]
fn zero_temperature_direct_is_refused() {
    bin()
        .args(["potential", "--t-over-tf", "0", "--method", "direct", "--grid", "1:2:2"])
        .assert()
        .code(2)
        .stderr(predicates::str::contains("t-over-tf > 0"));
}

// Over [30, 80]/2p_F the routes oscillate together: signs agree on at least
// 90% of the points.
#[test]
fn methods_agree_in_sign() {
    let dir = tempdir().unwrap();
    let mut series = Vec::new();
    for m in ["direct", "asymptotic", "closed"] {
        let out = dir.path().join(format!("{m}.csv"));
        bin().args(["potential", "--grid", "30:80:200", "--r-unit", "two-pf", "--method", m, "--out"]).arg(&out).assert().success();
        let (h, rows) = read_csv(&out);
        series.push(column(&h, &rows, &format!("V_{m}")));
    }
    // 2p_F r spans 50, about 16 half periods.
    let crossings = series[0].windows(2).filter(|w| w[0].signum() != w[1].signum()).count();
    assert!(crossings >= 14, "direct column should oscillate, {crossings} sign changes");
    for other in &series[1..] {
        let agree = series[0].iter().zip(other).filter(|(a, b)| a.signum() == b.signum()).count();
        assert!(agree as f64 >= 0.9 * 200.0, "{agree} of 200");
    }
}

#[test]
fn pole_scan_carries_reference_column() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("pole.csv");
    bin().args(["pole", "--grid", "0:0.1:3", "--out"]).arg(&out).assert().success();
    let (h, rows) = read_csv(&out);
    let tf = column(&h, &rows, "y_d_thomas_fermi");
    let lambda = 4.0 * PI * 7.297_352_569_3e-3;
    let expect = (p_fermi(3.0) * lambda).sqrt() / PI;
    assert!(tf.iter().all(|v| (v / expect - 1.0).abs() < 1e-12));
    assert!(column(&h, &rows, "y_d").iter().all(|&y| y > 0.0));
}

#[test]
fn fig1_defaults() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("fig1.csv");
    bin().args(["fig1", "--out"]).arg(&out).assert().success();
    let (h, rows) = read_csv(&out);
    assert_eq!(h, ["q_re", "q_im", "re_chiT", "im_chiT", "err", "re_chi0", "im_chi0"]);
    assert_eq!(rows.len(), 201);
    assert!(column(&h, &rows, "q_im").iter().all(|&y| y == 1.0));
    // The centre row sits exactly on the cut of χ⁰(·, p_F).
    assert!(rows[100][5].is_empty());
}

#[test]
fn analyticity_certifies_nonzero_loop() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("rect.csv");
    bin().args(["analyticity", "--out"]).arg(&out).assert().success().stdout(predicates::str::contains("nonzero"));
    let (h, rows) = read_csv(&out);
    let k = h.iter().position(|x| x == "nonzero").unwrap();
    assert_eq!(rows[0][k], "true");
}

#[test]
fn check_exit_status_follows_verdicts() {
    bin().args(["check", "--criteria", "1,2"]).assert().success().stdout(predicates::str::contains("PASS [ 1]"));
    bin().args(["check", "--criteria", "11"]).assert().code(1).stdout(predicates::str::contains("FAIL [11]"));
    bin().args(["check", "--criteria", "13"]).assert().code(2);
}
