use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deltaquench"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> Output {
    let out = run(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<Option<f64>>>,
}

impl Csv {
    fn read(path: &Path) -> Csv {
        let text = std::fs::read_to_string(path).unwrap();
        let mut lines = text.lines();
        let header = lines.next().unwrap().split(',').map(String::from).collect();
        let rows = lines
            .map(|l| l.split(',').map(|f| if f == "null" { None } else { Some(f.parse().unwrap()) }).collect())
            .collect();
        Csv { header, rows }
    }

    fn col(&self, name: &str) -> Vec<Option<f64>> {
        let i = self.header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().map(|r| r[i]).collect()
    }

    fn values(&self, name: &str) -> Vec<f64> {
        self.col(name).into_iter().map(|v| v.unwrap()).collect()
    }
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn psi_grid_is_normalized_and_listed_in_manifest() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["psi", "--mu", "3", "--t", "0.07", "--xmin", "-10", "--xmax", "10", "--nx", "2001"]);
    let csv = Csv::read(&dir.path().join("psi.csv"));
    assert_eq!(
        csv.header,
        ["x", "re_psi", "im_psi", "abs2", "abs2_initial", "abs2_bound_final"]
    );
    assert_eq!(csv.rows.len(), 2001);
    let abs2 = csv.values("abs2");
    let h = 0.01;
    let norm = h * (abs2.iter().sum::<f64>() - 0.5 * (abs2[0] + abs2[2000]));
    assert!((norm - 1.0).abs() < 1e-3, "norm {norm}");

    let m = json(&dir.path().join("psi.manifest.json"));
    assert_eq!(m["command"], "psi");
    assert_eq!(m["outputs"][0], "psi.csv");
    assert_eq!(m["parameters"]["nx"], "2001");
    assert!(m["timestamp"].as_str().unwrap().len() > 10);
}

#[test]
fn identity_quench_density_is_static() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["psi", "--mu", "1", "--t", "5", "--nx", "101"]);
    let csv = Csv::read(&dir.path().join("psi.csv"));
    for (x, d) in csv.values("x").iter().zip(csv.values("abs2")) {
        assert!((d - (-2.0 * x.abs()).exp()).abs() <= 1e-12);
    }
}

#[test]
fn regime_violations_become_nulls() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(dir.path(), &["psi", "--method", "farfield", "--t", "1", "--nx", "21"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let csv = Csv::read(&dir.path().join("psi.csv"));
    assert_eq!(csv.rows.len(), 21);
    let re = csv.col("re_psi");
    let nulls = re.iter().filter(|v| v.is_none()).count();
    // |x| <= 5 fails x^2 > 25 t
    assert_eq!(nulls, 11);
}

#[test]
fn survival_settles_on_the_plateau() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["survival", "--mu", "3", "--tmin", "0", "--tmax", "20", "--nt", "2001"]);
    let csv = Csv::read(&dir.path().join("survival.csv"));
    assert_eq!(csv.rows.len(), 2001);
    let t = csv.values("t");
    let p = csv.values("P");
    assert!(csv.values("P_inf").iter().all(|&v| v == 0.5625));
    assert_eq!(p[0], 1.0);
    let swing = |a: f64, b: f64| {
        t.iter()
            .zip(&p)
            .filter(|(t, _)| **t >= a && **t <= b)
            .map(|(_, p)| (p - 0.5625).abs())
            .fold(0.0, f64::max)
    };
    assert!(swing(15.0, 20.0) < 0.01);
    assert!(swing(15.0, 20.0) < 0.5 * swing(2.0, 5.0));
}

#[test]
fn short_time_escape_column_tracks_exact() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        dir.path(),
        &["survival", "--mu", "3", "--tmin", "1e-4", "--tmax", "1e-1", "--spacing", "log", "--nt", "40"],
    );
    let csv = Csv::read(&dir.path().join("survival.csv"));
    let exact = csv.values("one_minus_P");
    let short = csv.col("one_minus_P_short_time");
    assert!((exact[0] / short[0].unwrap() - 1.0).abs() < 0.02);
    // t = 0.1 is outside the short-time range
    assert!(short[39].is_none());
}

#[test]
fn identity_quench_survives() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["survival", "--mu", "1", "--nt", "101"]);
    let csv = Csv::read(&dir.path().join("survival.csv"));
    assert!(csv.values("P").iter().all(|&p| p == 1.0));
}

#[test]
fn fits_of_generated_and_file_series() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["fit", "--mu", "3", "--window-lo", "1e-4", "--window-hi", "1e-2", "--nt", "400"]);
    let r = json(&dir.path().join("fit.json"));
    let e = r["power_law"]["exponent"].as_f64().unwrap();
    assert!((e - 1.5).abs() < 0.02, "{e}");

    let synthetic = dir.path().join("pure.csv");
    let mut text = String::from("t,one_minus_P\n");
    for k in 0..50 {
        let t = 10f64.powf(-4.0 + 2.0 * k as f64 / 49.0);
        text.push_str(&format!("{t:.14e},{:.14e}\n", 3.0 * t.powf(1.5)));
    }
    std::fs::write(&synthetic, text).unwrap();
    ok(
        dir.path(),
        &["fit", "--input", synthetic.to_str().unwrap(), "--name", "pure", "--window-lo", "1e-4", "--window-hi", "1e-2"],
    );
    let r = json(&dir.path().join("pure.json"));
    assert!((r["power_law"]["exponent"].as_f64().unwrap() - 1.5).abs() < 1e-12);
    assert!((r["power_law"]["coefficient"].as_f64().unwrap() - 3.0).abs() < 1e-10);

    ok(
        dir.path(),
        &["fit", "--target", "envelope", "--window-lo", "20", "--window-hi", "200", "--name", "env"],
    );
    let r = json(&dir.path().join("env.json"));
    let e = r["power_law"]["exponent"].as_f64().unwrap();
    assert!((e + 1.5).abs() < 0.05, "{e}");
}

#[test]
fn manifest_replays_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    ok(&a, &["survival", "--mu", "0.5", "--tmax", "5", "--nt", "101", "--method", "quadrature"]);
    let manifest = a.join("survival.manifest.json");
    ok(&b, &["survival", "--config", manifest.to_str().unwrap()]);
    assert_eq!(
        std::fs::read(a.join("survival.csv")).unwrap(),
        std::fs::read(b.join("survival.csv")).unwrap()
    );
}

#[test]
fn flags_override_config_file_over_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# two knobs\nmu = 2\nnt = 11\n").unwrap();
    ok(dir.path(), &["survival", "--config", cfg.to_str().unwrap(), "--nt", "5"]);
    let m = json(&dir.path().join("survival.manifest.json"));
    assert_eq!(m["parameters"]["mu"], "2");
    assert_eq!(m["parameters"]["nt"], "5");
    assert_eq!(m["parameters"]["tmax"], "20");
    assert_eq!(Csv::read(&dir.path().join("survival.csv")).rows.len(), 5);

    let shown = ok(dir.path(), &["--show-config"]);
    let text = String::from_utf8(shown.stdout).unwrap();
    assert!(text.lines().any(|l| l == "mu=3"));
    assert!(text.lines().any(|l| l == "nx=2001"));
}

#[test]
fn errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["psi", "--method", "fourier"][..],
        &["psi", "--nx", "1"],
        &["survival", "--tmin", "5", "--tmax", "1"],
        &["survival", "--spacing", "log", "--tmin", "0"],
        &["verify", "--suite", "everything"],
        &["figures", "--which", "4"],
        &[],
    ] {
        let out = run(dir.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn figure_one_panels() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["figures", "--which", "1"]);
    let m = json(&dir.path().join("figures.manifest.json"));
    let outputs: Vec<&str> = m["outputs"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(outputs, ["fig1_t0.07.csv", "fig1_t0.2.csv", "fig1_t0.7.csv", "fig1_t100.csv"]);
    let late = Csv::read(&dir.path().join("fig1_t100.csv"));
    let i0 = 1000;
    assert_eq!(late.values("x")[i0], 0.0);
    // bound part 2 mu/(1+mu) dominates at t = 100
    assert!((late.values("abs2")[i0] - 2.25).abs() < 0.05);
}

#[test]
fn verify_reports_every_check() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["verify", "--suite", "cerf"]);
    let r = json(&dir.path().join("verify.json"));
    assert_eq!(r["failed"], 0);
    assert!(r["checks"].as_array().unwrap().len() >= 5);

    let out = run(dir.path(), &["verify", "--suite", "survival", "--name", "surv"]);
    let r = json(&dir.path().join("surv.json"));
    let checks = r["checks"].as_array().unwrap();
    let failed = checks.iter().filter(|c| c["passed"] == false).count();
    assert_eq!(r["failed"].as_u64().unwrap() as usize, failed);
    assert_eq!(out.status.code(), Some(if failed == 0 { 0 } else { 1 }));
    let exponent = checks.iter().find(|c| c["name"] == "escape_fit_exponent").unwrap();
    assert_eq!(exponent["passed"], true);

    let out = run(dir.path(), &["verify", "--suite", "cerf", "--tol", "erf_odd=-1", "--name", "strict"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn oracle_identity_quench_matches() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        dir.path(),
        &["oracle", "--mu", "1", "--times", "0.1,0.3", "--h", "0.01", "--dt", "1e-4", "--box", "30", "--nt", "11"],
    );
    let r = json(&dir.path().join("oracle.json"));
    for s in r["snapshots"].as_array().unwrap() {
        assert!(s["comparison"]["l2_rel"].as_f64().unwrap() < 1e-4);
    }
    let snap = Csv::read(&dir.path().join("oracle_t0.3.csv"));
    assert_eq!(&snap.header[..4], ["x", "re_psi", "im_psi", "abs2"]);
    assert_eq!(snap.rows.len(), 2001);
    assert!(dir.path().join("oracle_survival.csv").exists());
}
