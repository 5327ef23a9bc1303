use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{CouplingSource, ExperimentConfig};
use crate::dynamics::{attractor_warmup, perturbed_sync_ic, simulate_network, BlowUp, NetworkSystem, OscillatorModel, SimulationOptions};
use crate::msf::{eta_grid, largest_lyapunov, msf_scan, Interval, LyapunovSettings, MsfCurve};
use crate::synthesis::{
    bidiagonal_optimal_laplacian, diffusive_laplacian, from_matrix_market, place_eigenvalues, read_laplacian_json,
    synthesize, to_matrix_market, write_laplacian_json, Provenance, SpectrumSpec, SynthesisReport, TridiagonalLaplacian,
    Verification,
};
use crate::tridiag::TridiagonalMatrix;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NO_INTERVAL: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// A failed command and the process exit code it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    pub fn no_interval(message: impl Into<String>) -> Self {
        Self { code: EXIT_NO_INTERVAL, message: message.into() }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self { code: EXIT_NUMERICAL, message: message.into() }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::usage(format!("{}: {e}", path.display()))
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| io_err(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    write(path, &(serde_json::to_string_pretty(value).expect("plain data") + "\n"))
}

fn model_of(cfg: &ExperimentConfig) -> Result<OscillatorModel, CliError> {
    OscillatorModel::by_name(&cfg.model).map_err(|e| CliError::usage(e.to_string()))
}

/// Contents of `msf.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MsfRecord {
    pub model: String,
    pub settings: LyapunovSettings,
    pub neutral_tol: f64,
    pub intervals: Vec<Interval>,
    pub curve: MsfCurve,
}

/// Scans the MSF and writes `msf.csv`, `msf.json` and `intervals.json`.
///
/// `intervals.json` keeps only intervals that dip below `-neutral_tol`.
/// Fails with [`EXIT_NO_INTERVAL`] (after writing) if none remain.
pub fn cmd_msf(cfg: &ExperimentConfig) -> Result<MsfRecord, CliError> {
    cfg.validate().map_err(CliError::usage)?;
    let model = model_of(cfg)?;
    let settings = cfg.msf.settings(&cfg.model, cfg.perturbation.seed);
    let grid = eta_grid(cfg.msf.lo, cfg.msf.hi, cfg.msf.step).map_err(|e| CliError::usage(e.to_string()))?;
    let curve = msf_scan(&model, &grid, &settings).map_err(|e| CliError::usage(e.to_string()))?;
    let intervals = curve.significant_intervals(cfg.msf.neutral_tol);
    let record = MsfRecord { model: model.name().to_string(), settings, neutral_tol: cfg.msf.neutral_tol, intervals, curve };
    write(&cfg.out.join("msf.csv"), &record.curve.to_csv())?;
    write_json(&cfg.out.join("intervals.json"), &record.intervals)?;
    write_json(&cfg.out.join("msf.json"), &record)?;
    for f in &record.curve.failed {
        eprintln!("warning: MSF at eta = {} failed: {}", f.eta, f.error);
    }
    if record.intervals.is_empty() {
        return Err(CliError::no_interval(format!(
            "no negative MSF interval on [{}, {}]; intervals.json is empty",
            cfg.msf.lo, cfg.msf.hi
        )));
    }
    Ok(record)
}

fn read_intervals(out: &Path) -> Option<Vec<Interval>> {
    let text = fs::read_to_string(out.join("intervals.json")).ok()?;
    serde_json::from_str(&text).ok()
}

/// The spectrum a config asks for, including the leading 0.
pub fn resolve_spectrum(cfg: &ExperimentConfig) -> Result<SpectrumSpec, CliError> {
    let s = &cfg.spectrum;
    let spec = if let Some(values) = &s.values {
        SpectrumSpec::laplacian(values.clone()).map_err(|e| CliError::usage(format!("spectrum.values: {e}")))?
    } else {
        let (lo, hi) = if s.from_msf {
            let path = cfg.msf_dir().join("intervals.json");
            let intervals = read_intervals(cfg.msf_dir()).unwrap_or_default();
            let widest = intervals.iter().max_by(|a, b| (a.hi - a.lo).total_cmp(&(b.hi - b.lo))).ok_or_else(|| {
                CliError::no_interval(format!(
                    "spectrum.from_msf is set but {} lists no negative MSF interval; run `syncforge msf` first or set spectrum.lo/hi",
                    path.display()
                ))
            })?;
            let margin = s.margin * (widest.hi - widest.lo);
            (widest.lo + margin, widest.hi - margin)
        } else {
            (s.lo, s.hi)
        };
        place_eigenvalues(s.placement, lo, hi, cfg.n - 1).map_err(|e| CliError::usage(format!("spectrum: {e}")))?
    };
    if spec.len() != cfg.n {
        return Err(CliError::usage(format!("spectrum has {} values but n = {}", spec.len(), cfg.n)));
    }
    Ok(spec)
}

fn outside_intervals(spec: &SpectrumSpec, intervals: &[Interval]) -> usize {
    spec.values()[1..].iter().filter(|v| !intervals.iter().any(|iv| iv.lo <= **v && **v <= iv.hi)).count()
}

/// Contents of `report.json`.
#[derive(Debug, Clone, Serialize)]
pub struct SynthesisOutput {
    pub n: usize,
    pub provenance: Provenance,
    pub spectrum: Vec<f64>,
    pub synthesis: Option<SynthesisReport>,
    pub verification: Verification,
    pub warnings: Vec<String>,
}

/// Builds the configured Laplacian and writes `laplacian.json`,
/// `laplacian.mtx` and `report.json`. The written file is read back and
/// verified.
pub fn cmd_synthesize(cfg: &ExperimentConfig) -> Result<SynthesisOutput, CliError> {
    cfg.validate().map_err(CliError::usage)?;
    let mut warnings = Vec::new();
    let (laplacian, spectrum, synthesis) = match cfg.coupling {
        CouplingSource::Synthesized => {
            let spec = resolve_spectrum(cfg)?;
            if let Some(intervals) = read_intervals(cfg.msf_dir()) {
                let outside = outside_intervals(&spec, &intervals);
                if outside > 0 {
                    warnings.push(format!("{outside} eigenvalue(s) lie outside every negative MSF interval"));
                }
            }
            let (l, report) = synthesize(&spec).map_err(|e| CliError::numerical(format!("synthesis failed at {e}")))?;
            (l, spec.values().to_vec(), Some(report))
        }
        CouplingSource::Diffusive { sigma } => {
            let (l, spec) = diffusive_laplacian(sigma, cfg.n).map_err(|e| CliError::usage(e.to_string()))?;
            (l, spec.values().to_vec(), None)
        }
        CouplingSource::Bidiagonal { .. } => {
            return Err(CliError::usage("bidiagonal coupling has a zero subdiagonal, so it is built inline by `simulate` instead"))
        }
    };
    let path = cfg.out.join("laplacian.json");
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    write_laplacian_json(&path, laplacian.matrix()).map_err(|e| io_err(&path, e))?;
    write(&cfg.out.join("laplacian.mtx"), &to_matrix_market(laplacian.matrix()))?;
    let verification = verify_file(&path)?;
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let output = SynthesisOutput {
        n: laplacian.n(),
        provenance: laplacian.provenance().clone(),
        spectrum,
        synthesis,
        verification,
        warnings,
    };
    write_json(&cfg.out.join("report.json"), &output)?;
    if !output.verification.passed() {
        return Err(CliError::numerical(format!("{} failed verification after reload", path.display())));
    }
    Ok(output)
}

/// Reads a `.json` or `.mtx` Laplacian.
pub fn load_laplacian(path: &Path) -> Result<TridiagonalMatrix, CliError> {
    if path.extension().is_some_and(|e| e == "mtx") {
        let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        from_matrix_market(&text).map_err(|e| io_err(path, e))
    } else {
        read_laplacian_json(path).map_err(|e| io_err(path, e))
    }
}

fn verify_file(path: &Path) -> Result<Verification, CliError> {
    let m = load_laplacian(path)?;
    match TridiagonalLaplacian::new(m, Provenance::Loaded) {
        Ok(l) => Ok(l.verify()),
        Err(e) => Err(CliError::numerical(format!("{}: {e}", path.display()))),
    }
}

/// Verifies `cfg.laplacian`, or `laplacian.json` in the output directory.
pub fn cmd_verify(cfg: &ExperimentConfig) -> Result<Verification, CliError> {
    let path = cfg.laplacian.clone().unwrap_or_else(|| cfg.out.join("laplacian.json"));
    let v = verify_file(&path)?;
    if !v.passed() {
        return Err(CliError::numerical(format!("{} failed verification: {}", path.display(), serde_json::to_string(&v).unwrap())));
    }
    Ok(v)
}

/// The coupling matrix a simulation runs on.
pub fn coupling_matrix(cfg: &ExperimentConfig) -> Result<TridiagonalMatrix, CliError> {
    if let Some(path) = &cfg.laplacian {
        return load_laplacian(path);
    }
    match cfg.coupling {
        CouplingSource::Synthesized => {
            let spec = resolve_spectrum(cfg)?;
            let (l, _) = synthesize(&spec).map_err(|e| CliError::numerical(format!("synthesis failed at {e}")))?;
            Ok(l.into_matrix())
        }
        CouplingSource::Diffusive { sigma } => {
            diffusive_laplacian(sigma, cfg.n).map(|(l, _)| l.into_matrix()).map_err(|e| CliError::usage(e.to_string()))
        }
        CouplingSource::Bidiagonal { lambda } => {
            bidiagonal_optimal_laplacian(lambda, cfg.n).map_err(|e| CliError::usage(e.to_string()))
        }
    }
}

/// Eigenvalues of a coupling matrix, ascending. Triangular matrices read
/// them off the diagonal.
pub fn coupling_eigenvalues(m: &TridiagonalMatrix) -> Option<Vec<f64>> {
    if m.sub().iter().all(|x| *x == 0.0) || m.sup().iter().all(|x| *x == 0.0) {
        let mut d = m.diag().to_vec();
        d.sort_by(f64::total_cmp);
        return Some(d);
    }
    m.eigenvalues().ok()
}

/// Slope of `ln sync_error` against `t`, fitted by least squares from the
/// first sample below 10% of the initial error until the error reaches
/// `1e-10` or the run ends.
pub fn fit_decay_rate(times: &[f64], errors: &[f64]) -> Option<DecayFit> {
    let e0 = *errors.first()?;
    if !(e0 > 0.0) {
        return None;
    }
    let start = errors.iter().position(|e| *e < 0.1 * e0)?;
    let end = errors[start..].iter().position(|e| *e <= 1e-10).map_or(errors.len(), |k| start + k + 1);
    let pts: Vec<(f64, f64)> =
        times[start..end].iter().zip(&errors[start..end]).filter(|(_, e)| **e > 0.0).map(|(t, e)| (*t, e.ln())).collect();
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let (mt, me) = pts.iter().fold((0.0, 0.0), |(a, b), (t, e)| (a + t / n, b + e / n));
    let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(a, b), (t, e)| (a + (t - mt) * (e - me), b + (t - mt) * (t - mt)));
    Some(DecayFit { rate: sxy / sxx, t_start: pts[0].0, t_end: pts[pts.len() - 1].0 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayFit {
    pub rate: f64,
    pub t_start: f64,
    pub t_end: f64,
}

/// Contents of `summary.json`.
#[derive(Debug, Clone, Serialize)]
pub struct SimulationSummary {
    pub model: String,
    pub n: usize,
    pub h: f64,
    pub t_end: f64,
    pub seed: u64,
    pub variance: f64,
    pub final_time: f64,
    pub final_sync_error: f64,
    pub min_sync_error: f64,
    pub decay_fit: Option<DecayFit>,
    pub predicted_rate: Option<f64>,
    pub predicted_from: Option<String>,
    pub blowup: Option<BlowUp>,
}

/// Largest MSF value over the nonzero eigenvalues of `m`, from the scanned
/// curve in `msf.json` when it covers them and by direct evaluation otherwise.
pub fn predicted_rate(cfg: &ExperimentConfig, model: &OscillatorModel, m: &TridiagonalMatrix) -> Option<(f64, String)> {
    let eig = coupling_eigenvalues(m)?;
    let scale = eig.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    let mut nonzero: Vec<f64> = eig.into_iter().filter(|x| x.abs() > 1e-9 * scale).collect();
    nonzero.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * scale);
    if nonzero.is_empty() || nonzero.iter().any(|x| *x < 0.0) {
        return None;
    }
    let record: Option<MsfRecord> =
        fs::read_to_string(cfg.msf_dir().join("msf.json")).ok().and_then(|t| serde_json::from_str(&t).ok());
    if let Some(r) = record.filter(|r| r.model == model.name()) {
        if let Some(v) = r.curve.max_over(&nonzero) {
            return Some((v, "msf.json".into()));
        }
    }
    let settings = cfg.msf.settings(&cfg.model, cfg.perturbation.seed);
    let values: Vec<f64> =
        nonzero.par_iter().map(|eta| largest_lyapunov(model, *eta, &settings).map(|e| e.exponent)).collect::<Result<_, _>>().ok()?;
    Some((values.into_iter().fold(f64::NEG_INFINITY, f64::max), "direct".into()))
}

/// Simulates the perturbed network and writes `sync.csv` and `summary.json`.
/// A blow-up is recorded in the summary and reported with [`EXIT_NUMERICAL`].
pub fn cmd_simulate(cfg: &ExperimentConfig) -> Result<SimulationSummary, CliError> {
    cfg.validate().map_err(CliError::usage)?;
    let model = model_of(cfg)?;
    let m = coupling_matrix(cfg)?;
    if m.n() != cfg.n {
        return Err(CliError::usage(format!("coupling matrix is {}×{} but n = {}", m.n(), m.n(), cfg.n)));
    }
    let sys = NetworkSystem::new(model.clone(), m).map_err(|e| CliError::usage(e.to_string()))?;
    let h = cfg.integrator.h;
    let point = attractor_warmup(&model, model.initial_state(), model.warmup_time(), h)
        .map_err(|e| CliError::numerical(format!("warm-up: {e}")))?;
    let x0 = perturbed_sync_ic(&point, cfg.n, cfg.perturbation.variance, cfg.perturbation.seed)
        .map_err(|e| CliError::usage(e.to_string()))?;
    let opts = SimulationOptions::new(h, cfg.integrator.t_end, cfg.integrator.sample_stride);
    let sim = simulate_network(&sys, &x0, &opts).map_err(|e| CliError::usage(e.to_string()))?;
    let s = &sim.series;
    write(&cfg.out.join("sync.csv"), &s.to_csv())?;
    let predicted = if cfg.predict { predicted_rate(cfg, &model, sys.laplacian()) } else { None };
    let summary = SimulationSummary {
        model: model.name().to_string(),
        n: cfg.n,
        h,
        t_end: cfg.integrator.t_end,
        seed: cfg.perturbation.seed,
        variance: cfg.perturbation.variance,
        final_time: *s.times.last().unwrap_or(&0.0),
        final_sync_error: *s.sync_error.last().unwrap_or(&0.0),
        min_sync_error: s.sync_error.iter().copied().fold(f64::INFINITY, f64::min),
        decay_fit: fit_decay_rate(&s.times, &s.sync_error),
        predicted_rate: predicted.as_ref().map(|p| p.0),
        predicted_from: predicted.map(|p| p.1),
        blowup: sim.blowup,
    };
    write_json(&cfg.out.join("summary.json"), &summary)?;
    if let Some(b) = sim.blowup {
        return Err(CliError::numerical(format!("network blew up at t = {} (step {})", b.time, b.step)));
    }
    Ok(summary)
}

/// Writes the effective config next to a run's outputs.
pub fn write_config(cfg: &ExperimentConfig) -> Result<PathBuf, CliError> {
    let path = cfg.out.join("config.json");
    write(&path, &(cfg.to_json() + "\n"))?;
    Ok(path)
}
