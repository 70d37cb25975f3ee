use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multisymp")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Rows of a simulate CSV as floats, header dropped.
fn table(csv_text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut rdr = csv::Reader::from_reader(csv_text.as_bytes());
    let header = rdr.headers().unwrap().iter().map(String::from).collect();
    let rows = rdr
        .records()
        .map(|r| r.unwrap().iter().map(|x| x.parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}

fn write_cauchy(path: &Path, phi: impl Fn(f64) -> f64, pi: impl Fn(f64) -> f64) {
    let n = 32;
    let mut text = String::from("index,phi0,pi0\n");
    for j in 0..n {
        let x = std::f64::consts::TAU * j as f64 / n as f64;
        text.push_str(&format!("{j},{},{}\n", phi(x), pi(x)));
    }
    fs::write(path, text).unwrap();
}

#[test]
fn zero_data_gives_zero_columns() {
    let dir = tempfile::tempdir().unwrap();
    let cauchy = dir.path().join("zero.csv");
    write_cauchy(&cauchy, |_| 0.0, |_| 0.0);
    let o = run(&["simulate", "--cauchy", cauchy.to_str().unwrap(), "--t-final", "3", "--n-out", "4", "--modes", "0,7"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = table(&stdout(&o));
    assert_eq!(header, ["schema_version", "t", "energy", "momentum_1", "abs_a_0", "abs_a_7"]);
    assert_eq!(rows.len(), 4);
    for row in rows {
        assert_eq!(row[0], 1.0);
        assert!(row[2..].iter().all(|&x| x == 0.0));
    }
}

#[test]
fn single_mode_data_is_conserved() {
    let dir = tempfile::tempdir().unwrap();
    let cauchy = dir.path().join("mode.csv");
    // n = 2 standing wave with a time derivative: a single real mode pair
    write_cauchy(&cauchy, |x| (2.0 * x).cos(), |x| 0.3 * (2.0 * x).sin());
    let o = run(&["simulate", "--cauchy", cauchy.to_str().unwrap(), "--t-final", "10", "--n-out", "21", "--modes", "9,5"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (_, rows) = table(&stdout(&o));
    let first = rows[0].clone();
    assert!(first[2] > 0.0 && first[4] > 0.0);
    for row in &rows {
        for c in 2..row.len() {
            assert!((row[c] - first[c]).abs() <= 1e-10, "column {c}: {} vs {}", row[c], first[c]);
        }
    }
}

#[test]
fn leapfrog_energy_converges_at_second_order() {
    let errs: Vec<f64> = ["0.04", "0.02"]
        .iter()
        .map(|dt| {
            let o = run(&["simulate", "--seed", "5", "--t-final", "4", "--n-out", "5", "--leapfrog-dt", dt]);
            assert_eq!(o.status.code(), Some(0));
            let (header, rows) = table(&stdout(&o));
            assert_eq!(header.last().unwrap(), "energy_leapfrog");
            rows.iter().map(|r| (r[r.len() - 1] - r[2]).abs()).fold(0.0, f64::max)
        })
        .collect();
    let order = (errs[0] / errs[1]).log2();
    assert!((order - 2.0).abs() < 0.2, "errors {errs:?}");
}

#[test]
fn cauchy_export_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let export = dir.path().join("c.csv");
    let a = run(&["simulate", "--seed", "9", "--n-out", "2", "--export-cauchy", export.to_str().unwrap()]);
    let b = run(&["simulate", "--cauchy", export.to_str().unwrap(), "--n-out", "2"]);
    let (_, ra) = table(&stdout(&a));
    let (_, rb) = table(&stdout(&b));
    for (x, y) in ra.iter().zip(&rb) {
        assert!((x[2] - y[2]).abs() < 1e-12);
    }
}

#[test]
fn rough_cauchy_data_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cauchy = dir.path().join("rough.csv");
    // the Nyquist mode lies above n_max = 7
    write_cauchy(&cauchy, |x| (16.0 * x).cos(), |_| 0.0);
    let o = run(&["simulate", "--cauchy", cauchy.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("band-limited"));
}

#[test]
fn brackets_table_passes() {
    let o = run(&["brackets"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema_version"], 1);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["pass"] == true));
    let commute = checks.iter().find(|c| c["name"] == "obs.annihilators_commute").unwrap();
    assert!(commute["abs_diff"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn prequant_accepts_functions_and_writes_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let spectrum = dir.path().join("spec.csv");
    let f: Vec<[f64; 2]> = (0..15).map(|k| [1.0 / (1.0 + k as f64), 0.25]).collect();
    let g: Vec<[f64; 2]> = (0..15).map(|k| [0.5, -(k as f64) / 8.0]).collect();
    let (f, g) = (serde_json::to_string(&f).unwrap(), serde_json::to_string(&g).unwrap());
    let o = run(&["prequant", "--f", &f, "--g", &g, "--degree", "2", "--spectrum", spectrum.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let mut rdr = csv::Reader::from_path(&spectrum).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["schema_version", "multi_index", "degree", "eigenvalue"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    // 1 + 15 + 15 * 16 / 2 monomials of degree <= 2
    assert_eq!(rows.len(), 136);
    assert_eq!(&rows[0][1], "()");
    assert_eq!(rows[0][3].parse::<f64>().unwrap(), 0.0);
    // default zeta is the time translation: eigenvalues are -hbar times the total frequency
    assert!(rows.iter().all(|r| r[3].parse::<f64>().unwrap() <= 0.0));

    let short = run(&["prequant", "--f", "[[1,0]]"]);
    assert_eq!(short.status.code(), Some(2));
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let out = dir.path().join("resolved.json");
    fs::write(&cfg, r#"{"d":1,"L":6.283185307179586,"N":16,"n_max":3,"m":0.5,"seed":4}"#).unwrap();
    let o = run(&["spec", "--config", cfg.to_str().unwrap(), "--lambda", "0.25", "--tol", "a.b=1e-9", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["N"], 16);
    assert_eq!(v["seed"], 4);
    assert_eq!(v["lambda"], 0.25);
    assert_eq!(v["tolerances"]["a.b"], 1e-9);

    fs::write(&cfg, r#"{"d":1,"L":1,"N":8,"n_max":4,"m":1}"#).unwrap();
    assert_eq!(run(&["verify", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["spec", "--tol", "missing_equals"]).status.code(), Some(2));
    assert_eq!(run(&["spec", "--tol", "x=-1"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_writes_report_to_configured_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let report = dir.path().join("report.json");
    let text = format!(r#"{{"d":1,"L":6.283185307179586,"N":16,"n_max":3,"m":1,"output_path":{:?}}}"#, report.to_str().unwrap());
    fs::write(&cfg, text).unwrap();
    let o = run(&["verify", "--suite", "prequant", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["suite"], "prequant");
    assert_eq!(v["all_pass"], true);
}
