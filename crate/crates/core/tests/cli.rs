use std::io::Write;

use quartic::cli::run;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("quartic").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = call(args);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn freq_example() {
    let v = json(&["freq", "--regime", "classical", "-m", "1", "-w", "1", "-l", "0.025", "-A", "1", "--order", "2"]);
    assert_eq!(v["schema"], 1);
    assert!((f(&v["Omega"]) - 1.0366796875).abs() < 1e-15);
}

#[test]
fn isochron_lambda_star() {
    let v = json(&["isochron", "--regime", "quantum", "--order", "1", "-m", "1", "-w", "1", "--hbar", "1"]);
    assert!((f(&v["lambda_star"]) - 1.0 / 12.0).abs() < 1e-16);
}

#[test]
fn higher_order_without_series_is_usage_error() {
    let (code, out, err) = call(&["freq", "--order", "3"]);
    assert_eq!(code, 2);
    assert!(out.is_empty() && err.contains("--lindstedt"));
    let v = json(&["freq", "--order", "3", "--lindstedt"]);
    let (b, a) = (0.1, 1.0);
    let series = 1.0 + 3.0 / 8.0 * b - 21.0 / 256.0 * b * b + 81.0 / 2048.0 * b * b * b;
    assert!((f(&v["Omega"]) - series).abs() < 1e-15 * a);
}

#[test]
fn unknown_flag_and_subcommand_exit_2() {
    assert_eq!(call(&["freq", "--bogus"]).0, 2);
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&[]).0, 2);
    assert_eq!(call(&["--help"]).0, 0);
}

#[test]
fn domain_errors_exit_1_with_name() {
    let (code, _, err) = call(&["freq", "-m", "-1"]);
    assert_eq!(code, 1);
    assert!(err.contains("InvalidParameter"), "{err}");
    let (code, _, err) = call(&["lindstedt", "--order", "9"]);
    assert_eq!((code, err.contains("OrderCapExceeded")), (1, true));
    let (code, _, err) = call(&["simulate", "--s1", "1", "--s3", "-1", "-A", "3", "--steps", "10000"]);
    assert_eq!((code, err.contains("UnboundedMotion")), (1, true));
    let (code, _, err) = call(&["isochron", "--regime", "quantum", "--order", "2", "--hbar", "0.1"]);
    assert_eq!((code, err.contains("NoRealRoot")), (1, true));
}

#[test]
fn sweep_softening_rows() {
    let (code, out, _) = call(&["sweep", "--target", "freq", "--grid", "lambda=0:0.08:9"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "lambda,omega_cm,omega_qm,error");
    assert_eq!(lines.len(), 10);
    for l in &lines[1..] {
        let c: Vec<f64> = l.split(',').take(3).map(|s| s.parse().unwrap()).collect();
        assert!(c[2] <= c[1], "{l}");
    }
}

#[test]
fn sweep_empty_grid_is_header_only() {
    let (code, out, _) = call(&["sweep", "--target", "freq", "--grid", "lambda=0:0.08:0"]);
    assert_eq!((code, out.as_str()), (0, "lambda,omega_cm,omega_qm,error\n"));
}

#[test]
fn sweep_records_negative_truncated_b() {
    let (code, out, _) = call(&["sweep", "--target", "bound", "--grid", "lambda=0.05:0.15:3"]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert!(rows[0].ends_with(','));
    assert!(rows[1].ends_with("a_max_qm:NegativeTruncatedB"));
    assert!(rows[2].ends_with("a_max_qm:NegativeTruncatedB"));
}

#[test]
fn simulate_csv_has_seventeen_digits() {
    let (code, out, _) = call(&["simulate", "-b", "0.1", "--steps", "3"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "tau,x,p,C");
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[1], "0.0000000000000000,1.0000000000000000,0.0000000000000000,0.52500000000000002");
}

#[test]
fn separatrix_report_carries_both_root_conventions() {
    let v = json(&["separatrix", "--well", "double", "-b", "1", "-E", "2", "-A", "2", "--paper-literal"]);
    assert_eq!(f(&v["turning_points"]["k_plus"]), 4.0);
    assert_eq!(f(&v["paper_literal"]["turning_points"][0]), 2.0);
    assert_eq!(f(&v["paper_literal"]["radicand_at_root"]), 32.0);
    assert!((f(&v["periods"]["orbit_period"]) - 2.0 * f(&v["periods"]["dw_period"])).abs() < 1e-12);
    let v = json(&["separatrix", "--well", "double", "-b", "1", "-E", "2", "-A", "2.1"]);
    assert_eq!(v["periods"]["dw_period"]["error"], "AmplitudeBeyondTurningPoint");
}

#[test]
fn config_file_seeds_flags_and_flags_win() {
    let dir = std::env::temp_dir().join(format!("quartic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.cfg");
    let mut file = std::fs::File::create(&path).unwrap();
    writeln!(file, "# shared settings\nregime=quantum\nl=0.5\norder=1\ngrid=lambda=0:1:2").unwrap();
    let p = path.to_str().unwrap();

    let v = json(&["--config", p, "freq", "-l", "0.08333333333333333"]);
    assert_eq!(v["regime"], "quantum");
    assert_eq!(f(&v["inputs"]["lambda"]), 0.08333333333333333);
    assert!((f(&v["Omega"]) - 1.0).abs() < 1e-15);

    let v = json(&["freq", "--config", p]);
    assert_eq!(f(&v["inputs"]["lambda"]), 0.5);

    std::fs::write(&path, "nonsense=1\n").unwrap();
    assert_eq!(call(&["--config", p, "freq"]).0, 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn lindstedt_table_and_json() {
    let (code, out, _) = call(&["lindstedt", "--order", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out, "k  Omega_k\n1  3/8 A^2\n2  -21/256 A^4\n3  81/2048 A^6\n");
    let v = json(&["lindstedt", "--order", "2", "--format", "json", "--dump"]);
    assert_eq!(v["verified"], true);
    assert_eq!(v["omega_corrections"][1]["poly"][0][1], "-21");
    assert_eq!(v["displacement_corrections"].as_array().unwrap().len(), 3);
}
