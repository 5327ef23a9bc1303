use std::fs;
use std::path::Path;
use std::process::Command;

use syncforge::cli::{cmd_reproduce, cmd_simulate, cmd_synthesize, CouplingSource, ExperimentConfig, Preset};
use syncforge::synthesis::{read_laplacian_json, Placement};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_syncforge"));
    c.env_remove("SYNCFORGE_THREADS");
    c
}

fn run(dir: &Path, args: &[&str], config: Option<&str>) -> i32 {
    let mut cmd = bin();
    cmd.current_dir(dir).args(args);
    if let Some(text) = config {
        fs::write(dir.join("config.json"), text).unwrap();
        cmd.args(["--config", "config.json"]);
    }
    cmd.output().unwrap().status.code().unwrap()
}

#[test]
fn two_agent_pipeline_output() {
    let dir = tempfile::tempdir().unwrap();
    let code = run(dir.path(), &["synthesize", "--out", "o"], Some(r#"{"n": 2, "spectrum": {"values": [0, 2]}}"#));
    assert_eq!(code, 0);
    let l = read_laplacian_json(&dir.path().join("o/laplacian.json")).unwrap();
    let dense = l.to_dense();
    for (i, j, want) in [(0, 0, 1.0), (0, 1, -1.0), (1, 0, -1.0), (1, 1, 1.0)] {
        assert!((dense.get(i, j) - want).abs() < 1e-12);
    }
    assert!(fs::read_to_string(dir.path().join("o/laplacian.mtx")).unwrap().starts_with("%%MatrixMarket"));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("o/report.json")).unwrap()).unwrap();
    assert!(report["synthesis"]["alphas"].is_array());
    assert_eq!(report["verification"]["row_sums_ok"], true);
    assert_eq!(run(dir.path(), &["verify", "--out", "o"], None), 0);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(run(p, &["frobnicate"], None), 1);
    assert_eq!(run(p, &["msf", "--config", "missing.json"], None), 1);
    assert_eq!(run(p, &["msf"], Some(r#"{"nope": true}"#)), 1);
    assert_eq!(run(p, &["msf", "--threads", "0"], None), 1);
    assert_eq!(run(p, &["--help"], None), 0);

    // Grid ending before the first crossing.
    assert_eq!(run(p, &["msf", "--out", "m"], Some(r#"{"msf": {"lo": 0.0, "hi": 0.2, "step": 0.1}}"#)), 2);
    assert_eq!(fs::read_to_string(p.join("m/intervals.json")).unwrap().trim(), "[]");
    assert!(fs::read_to_string(p.join("m/msf.csv")).unwrap().starts_with("eta,msf\n0.0,"));
    assert_eq!(run(p, &["synthesize", "--out", "m"], Some(r#"{"spectrum": {"from_msf": true}}"#)), 2);
    assert!(!p.join("m/laplacian.json").exists());

    fs::write(p.join("bad.json"), r#"{"n": 2, "diag": [1.0, 1.0], "sub": [-1.0], "super": [-2.0]}"#).unwrap();
    assert_eq!(run(p, &["verify", "bad.json"], None), 3);
}

#[test]
fn threads_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c.json"), r#"{"n": 3, "spectrum": {"values": [0, 1, 3]}}"#).unwrap();
    let status = |threads: &str| {
        bin()
            .current_dir(dir.path())
            .env("SYNCFORGE_THREADS", threads)
            .args(["synthesize", "--config", "c.json", "--out", "o"])
            .status()
            .unwrap()
            .code()
            .unwrap()
    };
    assert_eq!(status("0"), 1);
    assert_eq!(status("2"), 0);
    assert_eq!(status("not-a-number"), 1);
}

fn small_sim(out: &Path, seed: u64, variance: f64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig { n: 4, out: out.to_path_buf(), predict: false, ..Default::default() };
    cfg.integrator.t_end = 20.0;
    cfg.integrator.sample_stride = 50;
    cfg.perturbation.seed = seed;
    cfg.perturbation.variance = variance;
    cfg
}

#[test]
fn simulation_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let csv = |name: &str, seed| {
        let out = dir.path().join(name);
        cmd_simulate(&small_sim(&out, seed, 1.0)).unwrap();
        fs::read(out.join("sync.csv")).unwrap()
    };
    let a = csv("a", 5);
    assert_eq!(a, csv("b", 5));
    assert_ne!(a, csv("c", 6));
}

#[test]
fn synchronous_start_stays_synchronous() {
    let dir = tempfile::tempdir().unwrap();
    let summary = cmd_simulate(&small_sim(dir.path(), 1, 0.0)).unwrap();
    assert!(summary.final_sync_error <= 1e-14);
    let csv = fs::read_to_string(dir.path().join("sync.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let e: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!(e <= 1e-14);
    }
}

#[test]
fn coupling_entry_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig { out: dir.path().join("a"), ..Default::default() };
    let small = cmd_synthesize(&cfg).unwrap();
    assert!(small.verification.max_entry < 6.2, "{}", small.verification.max_entry);
    cfg.n = 128;
    cfg.spectrum.placement = Placement::Chebyshev;
    cfg.spectrum.hi = 50.0;
    cfg.out = dir.path().join("b");
    let large = cmd_synthesize(&cfg).unwrap();
    assert!(large.verification.max_entry < 27.0, "{}", large.verification.max_entry);
    assert!(large.verification.passed());
}

#[test]
fn rossler_network_decay_rate() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig { model: "rossler".into(), n: 64, out: dir.path().to_path_buf(), predict: false, ..Default::default() };
    cfg.spectrum.lo = 0.5;
    cfg.spectrum.hi = 3.0;
    let s = cmd_simulate(&cfg).unwrap();
    let fit = s.decay_fit.expect("sync error decays");
    assert!((fit.rate + 0.15).abs() <= 0.05, "{fit:?}");
}

#[test]
fn bidiagonal_coupling_runs_inline() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small_sim(dir.path(), 1, 1.0);
    cfg.coupling = CouplingSource::Bidiagonal { lambda: 2.0 };
    cfg.predict = true;
    let s = cmd_simulate(&cfg).unwrap();
    assert!(s.blowup.is_none());
    // Every nonzero eigenvalue is λ = 2.
    let p = s.predicted_rate.unwrap();
    assert!(p < -0.3, "{p}");
    assert!(cmd_synthesize(&cfg).is_err());
}

#[test]
fn feasibility_presets() {
    let dir = tempfile::tempdir().unwrap();
    let base = ExperimentConfig { out: dir.path().to_path_buf(), ..Default::default() };
    let r = cmd_reproduce(Preset::RosslerFeasibility, &base).unwrap();
    assert_eq!(r.first_infeasible, Some(8));
    let table = fs::read_to_string(dir.path().join("rossler_feasibility/feasibility.csv")).unwrap();
    assert!(table.lines().any(|l| l.starts_with("7,") && l.contains(",true,")));
    assert!(table.lines().any(|l| l.starts_with("8,") && l.contains(",false,")));

    let s = cmd_reproduce(Preset::Sym3x3, &base).unwrap();
    let at = |l2: f64, l3: f64| s.sym3x3.iter().find(|p| p.lambda2 == l2 && p.lambda3 == l3).unwrap();
    assert!(at(1.0, 3.0).result.feasible && at(1.0, 3.0).result.boundary);
    assert!(!at(1.0, 2.0).result.feasible);
    assert!(dir.path().join("sym3x3/reproduce.json").exists());
}

#[test]
fn config_paths_resolve_against_manifest() {
    let dir = tempfile::tempdir().unwrap();
    fs::create_dir_all(dir.path().join("exp")).unwrap();
    assert_eq!(
        run(dir.path(), &["synthesize", "--out", "exp"], Some(r#"{"n": 3, "spectrum": {"values": [0, 1, 3]}}"#)),
        0
    );
    fs::write(dir.path().join("exp/verify.json"), r#"{"laplacian": "laplacian.json"}"#).unwrap();
    let code = bin().current_dir(dir.path()).args(["verify", "--config", "exp/verify.json"]).status().unwrap().code();
    assert_eq!(code, Some(0));
}
