use std::path::Path;
use std::process::Command;

fn tfq(args: &[&str], out: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_tfq"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env("TFQ_THREADS", "2")
        .output()
        .unwrap()
}

fn report(out: &Path) -> String {
    std::fs::read_to_string(out.join("report.json")).unwrap()
}

#[test]
fn odd_grid_fails_with_message() {
    let dir = tempfile::tempdir().unwrap();
    let o = tfq(&["diamond", "--grid", "511"], dir.path());
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("n_points must be even"));
}

#[test]
fn unknown_config_key_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "grid_size = 64\n").unwrap();
    let o = tfq(&["wigner", "--config", cfg.to_str().unwrap()], dir.path());
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("grid_size"));
}

#[test]
fn wigner_writes_every_format_and_passes_checks() {
    let dir = tempfile::tempdir().unwrap();
    let o = tfq(&["wigner", "--grid", "256", "--signal", "gauss(1,0)+gauss(-1,0.5,2,0.5)", "--format", "csv,pgm,bin", "--assert"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["wigner.csv", "wigner.pgm", "wigner.tfq", "report.json"] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
    let back = tfq::io::read_binary(&dir.path().join("wigner.tfq")).unwrap();
    assert_eq!(back.n(), 256);
}

#[test]
fn sample_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("s.txt");
    let h = 1.0 / (2.0 * std::f64::consts::PI);
    let mut text = String::from("# coherent state\n");
    for j in 0..64 {
        let x = (j as f64 - 32.0) * 0.125;
        text.push_str(&format!("{},0\n", (-x * x / (2.0 * h)).exp()));
    }
    std::fs::write(&samples, text).unwrap();
    let spec = format!("file:{}", samples.display());
    let o = tfq(&["bj", "--grid", "64", "--xmax", "4", "--signal", &spec, "--format", "bin", "--assert"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let bad = tfq(&["bj", "--grid", "128", "--signal", &spec], dir.path());
    assert!(!bad.status.success());
}

#[test]
fn diamond_is_deterministic_and_asserts() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["diamond", "--grid", "256", "--steps", "5", "--format", "csv"];
    let oa = tfq(&args, a.path());
    assert!(oa.status.success(), "{}", String::from_utf8_lossy(&oa.stdout));
    let ob = Command::new(env!("CARGO_BIN_EXE_tfq"))
        .args(args)
        .arg("--out")
        .arg(b.path())
        .env("TFQ_THREADS", "1")
        .output()
        .unwrap();
    assert!(ob.status.success());
    assert_eq!(report(a.path()), report(b.path()));
    let ra = std::fs::read(a.path().join("diamond_born-jordan_03.csv")).unwrap();
    let rb = std::fs::read(b.path().join("diamond_born-jordan_03.csv")).unwrap();
    assert_eq!(ra, rb);
    assert_eq!(report(a.path()).matches("\"distribution\"").count(), 10);
}

#[test]
fn diamond_assert_at_default_grid() {
    let dir = tempfile::tempdir().unwrap();
    let o = tfq(&["diamond", "--steps", "9", "--format", "bin", "--assert"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(report(dir.path()).matches("\"distribution\"").count(), 18);
}

#[test]
fn failed_assertion_sets_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["covariance", "--grid", "128", "--kernel", "bj", "--map", "shear:1", "--signal", "gauss(1,0)+gauss(-1,0)", "--assert"];
    let o = tfq(&args, dir.path());
    assert_eq!(o.status.code(), Some(3));
    let without = tfq(&args[..args.len() - 1], dir.path());
    assert!(without.status.success());
    assert!(report(dir.path()).contains("shear:1"));
}

#[test]
fn covariance_wigner_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = tfq(&["covariance", "--grid", "256", "--kernel", "wigner", "--signal", "gauss(1,0.5)+gauss(-1,-0.5,1,0.5)", "--assert"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
}
