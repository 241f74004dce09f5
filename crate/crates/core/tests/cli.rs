use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mkdv::io;
use mkdv::reflectionless::reconstruct_profile;
use mkdv::scattering::{DiscreteEigenpair, ScatteringData, ZGrid};
use mkdv::Complex64 as C;

fn mkdv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mkdv")).args(args).output().expect("binary runs")
}

fn p(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

fn s(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn write_potential(path: &Path, f: impl Fn(f64) -> f64, a: f64, n: usize) {
    let x: Vec<f64> = (0..n).map(|i| -a + 2.0 * a * i as f64 / (n - 1) as f64).collect();
    let u: Vec<f64> = x.iter().map(|&x| f(x)).collect();
    io::write_profile(path, &x, &u).unwrap();
}

fn two_solitons() -> ScatteringData {
    ScatteringData::reflectionless(
        vec![
            DiscreteEigenpair::soliton(0.5, C::new(0.0, 1.0)),
            DiscreteEigenpair::soliton(1.0, C::new(0.0, 2.0)),
        ],
        vec![],
    )
}

#[test]
fn scatter_zero_and_soliton_files() {
    let dir = tempfile::tempdir().unwrap();
    let (inp, out) = (p(dir.path(), "u.csv"), p(dir.path(), "d.json"));
    write_potential(&inp, |_| 0.0, 10.0, 201);
    let o = mkdv(&["scatter", "--input", s(&inp), "--out", s(&out), "--nz", "32"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let d = io::read_data(&out).unwrap();
    assert!(d.r.iter().all(|r| r.norm() == 0.0) && d.solitons.is_empty() && d.breathers.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("\"genericity\""));

    write_potential(&inp, |x| 2.0 / (2.0 * x).cosh(), 16.0, 1025);
    let o = mkdv(&["scatter", "--input", s(&inp), "--out", s(&out), "--zmax", "4", "--nz", "64"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let d = io::read_data(&out).unwrap();
    assert_eq!(d.solitons.len(), 1);
    assert!((d.solitons[0].z.im - 1.0).abs() < 1e-6);
    assert!(d.max_abs_r() <= 1e-6);
}

#[test]
fn malformed_csv_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let inp = p(dir.path(), "bad.csv");
    std::fs::write(&inp, "x,u\n0,1\n1,oops\n").unwrap();
    let o = mkdv(&["scatter", "--input", s(&inp), "--out", s(&p(dir.path(), "d.json"))]);
    assert_eq!(o.status.code(), Some(2));
    let o = mkdv(&["scatter", "--input", s(&p(dir.path(), "missing.csv")), "--out", "x.json"]);
    assert_eq!(o.status.code(), Some(2));
    let o = mkdv(&["scatter", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reconstruct_matches_library_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let (data, out) = (p(dir.path(), "d.json"), p(dir.path(), "u.csv"));
    let d = two_solitons();
    io::write_data(&data, &d).unwrap();
    let o = mkdv(&["reconstruct", "--data", s(&data), "--out", s(&out), "--t", "20", "--xmin", "-10", "--xmax", "90", "--nx", "501"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (x, u) = io::profile_from_csv(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(u, reconstruct_profile(&d, &x, 20.0).unwrap());

    let empty = ScatteringData::reflectionless(vec![], vec![]);
    io::write_data(&data, &empty).unwrap();
    assert_eq!(mkdv(&["reconstruct", "--data", s(&data), "--out", s(&out)]).status.code(), Some(0));
    let (_, u) = io::profile_from_csv(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(u.iter().all(|&v| v == 0.0));

    let mut noisy = two_solitons();
    noisy.grid = ZGrid::symmetric(2.0, 9);
    noisy.r = vec![C::new(0.0, 0.1); 9];
    io::write_data(&data, &noisy).unwrap();
    assert_eq!(mkdv(&["reconstruct", "--data", s(&data), "--out", s(&out)]).status.code(), Some(2));
    assert_eq!(mkdv(&["reconstruct", "--data", s(&data), "--out", s(&out), "--discrete-only"]).status.code(), Some(0));
}

#[test]
fn breather_json_is_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = p(dir.path(), "b.json");
    let d = ScatteringData::reflectionless(vec![], vec![DiscreteEigenpair::breather(0.1 + 0.2, 1.0 / 7.0, C::new(1e-300, -2.0f64.sqrt()))]);
    io::write_data(&path, &d).unwrap();
    let first = std::fs::read(&path).unwrap();
    let back = io::read_data(&path).unwrap();
    assert_eq!(back, d);
    io::write_data(&path, &back).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), first);
}

#[test]
fn asymptote_frames_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let (data, out, rep) = (p(dir.path(), "d.json"), p(dir.path(), "u.csv"), p(dir.path(), "r.json"));
    io::write_data(&data, &two_solitons()).unwrap();
    let o = mkdv(&[
        "asymptote", "--data", s(&data), "--out", s(&out), "--report", s(&rep), "--t", "25", "--frame", "soliton:0",
        "--xmin", "0", "--xmax", "40", "--nx", "201",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    let omega = report["dressing"][0]["omega"].as_f64().unwrap();
    assert!((omega + 2.0 * 3f64.ln()).abs() < 1e-12);
    let (_, u) = io::profile_from_csv(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!((u.iter().fold(0.0f64, |a, &b| a.max(b)) - 1.0).abs() < 1e-3);

    let o = mkdv(&["asymptote", "--data", s(&data), "--out", s(&out), "--t", "25", "--frame", "soliton:5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = mkdv(&["asymptote", "--data", s(&data), "--out", s(&out), "--t", "5"]);
    assert_eq!(o.status.code(), Some(2));

    // solitonless data: Region I cosine on the left, piecewise report
    let mut rad = ScatteringData::reflectionless(vec![], vec![]);
    rad.grid = ZGrid::symmetric(2.0, 401);
    rad.r = rad.grid.nodes().iter().map(|&z| C::new(0.1 * z, 0.3) * (-z * z).exp()).collect();
    io::write_data(&data, &rad).unwrap();
    let o = mkdv(&[
        "asymptote", "--data", s(&data), "--out", s(&out), "--report", s(&rep), "--t", "50", "--frame", "auto",
        "--xmin", "-60", "--xmax", "20", "--nx", "161",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    let regions: Vec<&str> = report["segments"].as_array().unwrap().iter().map(|s| s["region"].as_str().unwrap()).collect();
    assert_eq!(regions, ["OscillatoryI", "SelfSimilarII", "SolitonIII"]);
    assert!(report["stationary"][0]["kappa"].as_f64().unwrap() < 0.0);
    let o = mkdv(&[
        "asymptote", "--data", s(&data), "--out", s(&out), "--report", s(&rep), "--t", "50", "--frame", "radiation",
        "--xmin", "-60", "--xmax", "-40", "--nx", "21",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let (x, u) = io::profile_from_csv(&std::fs::read_to_string(&out).unwrap()).unwrap();
    for (x, u) in x.iter().zip(&u) {
        assert_eq!(*u, mkdv::asymptotics::region1_generic(*x, 50.0, &rad).unwrap());
    }
}

#[test]
fn evolve_writes_checkpoints() {
    let dir = tempfile::tempdir().unwrap();
    let inp = p(dir.path(), "u.csv");
    write_potential(&inp, |x| 2.0 / (2.0 * x).cosh(), 16.0, 513);
    let outdir = p(dir.path(), "run");
    let o = mkdv(&["evolve", "--input", s(&inp), "--out", s(&outdir), "--L", "32", "--N", "512", "--dt", "1e-3", "--T", "0.25,0.5", "--velocity", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (x, u) = io::profile_from_csv(&std::fs::read_to_string(outdir.join("u_t0.5.csv")).unwrap()).unwrap();
    assert_eq!(x.len(), 512);
    for (x, u) in x.iter().zip(&u) {
        assert!((u - 2.0 / (2.0 * (x - 2.0)).cosh()).abs() < 1e-6);
    }
    let log = std::fs::read_to_string(outdir.join("conserved.csv")).unwrap();
    assert!(log.starts_with("t,mass,momentum\n"));
    assert_eq!(log.lines().count(), 4);
    let o = mkdv(&["evolve", "--input", s(&inp), "--out", s(&outdir), "--L", "32", "--N", "500", "--T", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_closed_forms_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (p(dir.path(), "a.json"), p(dir.path(), "b.json"));
    let o = mkdv(&["verify", "--suite", "closed-forms", "--seed", "7", "--out", s(&a)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(String::from_utf8_lossy(&o.stdout).lines().filter(|l| l.starts_with("[PASS]")).count(), 4);
    mkdv(&["verify", "--suite", "closed-forms", "--seed", "7", "--out", s(&b)]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&a).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(mkdv(&["verify", "--suite", "nope"]).status.code(), Some(2));
}
