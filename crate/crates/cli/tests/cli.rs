use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn toruswt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toruswt")).args(args).output().expect("binary runs")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn stdout_json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn orbit_reports_representative() {
    let o = toruswt(&["orbit", "4", "5"]);
    assert!(o.status.success());
    let v = stdout_json(&o);
    assert_eq!(v["g"], 1);
    assert_eq!(v["check"], serde_json::json!([1, 1]));
    let r = &v["rep"];
    let det = r[0][0].as_i64().unwrap() * r[1][1].as_i64().unwrap() - r[0][1].as_i64().unwrap() * r[1][0].as_i64().unwrap();
    assert_eq!(det, 1);

    let v = stdout_json(&toruswt(&["orbit", "6", "4"]));
    assert_eq!(v["g"], 2);
    assert_eq!(stdout_json(&toruswt(&["orbit", "-6", "4"]))["check"], serde_json::json!([2, 2]));
    assert_eq!(toruswt(&["orbit", "0", "0"]).status.code(), Some(2));
}

#[test]
fn admissibility_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let o = toruswt(&["admissibility", "--window", "3", "--out", s(dir.path())]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout_json(&o)["verdict"], true);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("admissibility.json")).unwrap()).unwrap();
    assert!(summary["C_hat"].as_f64().unwrap() > summary["c_hat"].as_f64().unwrap());
    let spectrum = std::fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    assert!(spectrum.starts_with("n1,n2,lambda\n"));
    assert_eq!(spectrum.lines().count(), 1 + 7 * 7);

    let o = toruswt(&["admissibility", "--wavelet", "constant", "--window", "2", "--out", s(dir.path())]);
    assert_eq!(stdout_json(&o)["verdict"], false);
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"wavelet": "constant", "window": 2}"#).unwrap();
    let o = toruswt(&["admissibility", "--config", s(&cfg), "--wavelet", "dog1d_tensor", "--out", s(dir.path())]);
    assert!(o.status.success());
    assert_eq!(stdout_json(&o)["verdict"], true);

    std::fs::write(&cfg, "{ not json").unwrap();
    assert_eq!(toruswt(&["admissibility", "--config", s(&cfg)]).status.code(), Some(2));
    std::fs::write(&cfg, r#"{"wavelet": "sombrero"}"#).unwrap();
    assert_eq!(toruswt(&["admissibility", "--config", s(&cfg)]).status.code(), Some(2));
}

#[test]
fn round_trip_on_sample_signal() {
    let dir = tempfile::tempdir().unwrap();
    let sample = data("sample.csv");
    let o = toruswt(&["analyze", "--input", s(&sample), "--nodes-per-unit", "8", "--seed", "5", "--out", s(dir.path())]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("coefficients.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 5);
    let coeffs = dir.path().join("coefficients.csv");
    let o = toruswt(&["synthesize", "--coefficients", s(&coeffs), "--original", s(&sample)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let err: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("relative error: "))
        .expect("error line")
        .parse()
        .unwrap();
    assert!(err < 1e-2, "{err}");
    assert!(dir.path().join("reconstruction.csv").is_file());
}

#[test]
fn refusals_and_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let o = toruswt(&["analyze", "--input", "/definitely/missing.csv", "--out", s(dir.path())]);
    assert_eq!(o.status.code(), Some(2));

    let sample = data("sample.csv");
    let o = toruswt(&["analyze", "--input", s(&sample), "--modular", "--wavelet", "dog1d_tensor", "--out", s(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("diagonal"));

    assert_eq!(toruswt(&["no-such-command"]).status.code(), Some(2));
}

fn read_samples(path: &Path) -> Vec<(u64, u64)> {
    let text = std::fs::read_to_string(path).unwrap();
    text.lines()
        .skip(1)
        .map(|l| {
            let f: Vec<f64> = l.split(',').skip(2).map(|x| x.parse().unwrap()).collect();
            (f[0].to_bits(), f[1].to_bits())
        })
        .collect()
}

#[test]
fn plotdata_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = toruswt(&["plotdata", "--grid", "16", "--out", s(dir.path())]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let curves = std::fs::read_to_string(dir.path().join("theta_a.csv")).unwrap();
    for line in curves.lines().skip(1) {
        let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        if f[0] == 1.0 {
            // −π and π are the same point; the dilation reports π
            let same = (f[2] - f[1]).abs() < 1e-14 || (f[1] == -std::f64::consts::PI && f[2] == std::f64::consts::PI);
            assert!(same, "{line}");
        }
    }
    for name in ["axisymmetric_dog_1_1", "axisymmetric_dog_2_1", "axisymmetric_dog_1_2"] {
        assert!(dir.path().join(format!("{name}.csv")).is_file());
    }
    let mut id = read_samples(&dir.path().join("diagonal_dog_identity.csv"));
    let mut m45 = read_samples(&dir.path().join("diagonal_dog_m_4_5.csv"));
    assert_ne!(id, m45);
    id.sort_unstable();
    m45.sort_unstable();
    assert_eq!(id, m45);
}

#[test]
fn runs_are_byte_reproducible() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        assert!(toruswt(&["random-signal", "--grid", "9", "--seed", "3", "--out", s(d.path())]).status.success());
    }
    let read = |d: &tempfile::TempDir| std::fs::read(d.path().join("signal.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
}
