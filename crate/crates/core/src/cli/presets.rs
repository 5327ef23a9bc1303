use std::path::PathBuf;

use serde::Serialize;

use super::commands::{cmd_msf, cmd_simulate, cmd_synthesize, write_config, CliError, SimulationSummary};
use super::config::{CouplingSource, ExperimentConfig, MsfConfig};
use crate::fmt::shortest;
use crate::msf::{diffusive_feasibility, DiffusiveFeasibility, Interval};
use crate::synthesis::{symmetric_3x3_feasible, Placement, SymmetricFeasibility};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Vdp32,
    Vdp64,
    Vdp128,
    Rossler64,
    RosslerFeasibility,
    Sym3x3,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Self::Vdp32 => "vdp32",
            Self::Vdp64 => "vdp64",
            Self::Vdp128 => "vdp128",
            Self::Rossler64 => "rossler64",
            Self::RosslerFeasibility => "rossler_feasibility",
            Self::Sym3x3 => "sym3x3",
        }
    }
}

/// The negative MSF interval reported for the Rössler system.
pub const ROSSLER_INTERVAL: Interval = Interval { lo: 0.19, hi: 4.61 };

#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub variant: String,
    pub dir: PathBuf,
    pub max_entry: Option<f64>,
    pub summary: Option<SimulationSummary>,
    pub error: Option<String>,
}

/// Contents of `reproduce.json`.
#[derive(Debug, Clone, Serialize)]
pub struct Reproduction {
    pub preset: Preset,
    pub intervals: Vec<Interval>,
    pub runs: Vec<RunRecord>,
    pub feasibility: Vec<DiffusiveFeasibility>,
    pub first_infeasible: Option<usize>,
    pub sym3x3: Vec<Sym3x3Point>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Sym3x3Point {
    pub lambda2: f64,
    pub lambda3: f64,
    #[serde(flatten)]
    pub result: SymmetricFeasibility,
}

enum Variant {
    Synth(Placement, f64, f64),
    Bidiagonal(f64),
}

impl Variant {
    fn label(&self) -> String {
        match self {
            Self::Synth(p, lo, hi) => format!("{}_{}_{}", if *p == Placement::Linear { "linear" } else { "chebyshev" }, lo, hi),
            Self::Bidiagonal(l) => format!("bidiagonal_{l}"),
        }
    }
}

/// Runs a named experiment under `base.out/<preset>/`.
///
/// `base` supplies the seed and output root. Failed simulations are recorded
/// in `reproduce.json`; the first failure's exit code is returned after all
/// runs finish.
pub fn cmd_reproduce(preset: Preset, base: &ExperimentConfig) -> Result<Reproduction, CliError> {
    let root = base.out.join(preset.name());
    let mut rep = Reproduction {
        preset,
        intervals: vec![],
        runs: vec![],
        feasibility: vec![],
        first_infeasible: None,
        sym3x3: vec![],
    };
    let (model, n, variants, msf): (&str, usize, Vec<Variant>, MsfConfig) = match preset {
        Preset::Vdp32 => ("van_der_pol", 32, vec![Variant::Synth(Placement::Linear, 1.0, 10.0), Variant::Synth(Placement::Chebyshev, 1.0, 10.0)], MsfConfig::default()),
        Preset::Vdp64 => (
            "van_der_pol",
            64,
            vec![
                Variant::Synth(Placement::Linear, 1.0, 10.0),
                Variant::Synth(Placement::Chebyshev, 1.0, 10.0),
                Variant::Bidiagonal(2.0),
                Variant::Bidiagonal(8.0),
            ],
            MsfConfig::default(),
        ),
        Preset::Vdp128 => (
            "van_der_pol",
            128,
            vec![
                Variant::Synth(Placement::Chebyshev, 1.0, 50.0),
                Variant::Synth(Placement::Chebyshev, 1.0, 10.0),
                Variant::Synth(Placement::Linear, 1.0, 10.0),
                Variant::Bidiagonal(2.0),
            ],
            MsfConfig::default(),
        ),
        Preset::Rossler64 => (
            "rossler",
            64,
            vec![Variant::Synth(Placement::Linear, 0.5, 3.0), Variant::Synth(Placement::Chebyshev, 0.5, 3.0)],
            MsfConfig { lo: 0.0, hi: 5.0, step: 0.05, ..MsfConfig::default() },
        ),
        Preset::RosslerFeasibility => {
            feasibility_table(&mut rep, &root)?;
            return finish(rep, &root);
        }
        Preset::Sym3x3 => {
            sym3x3_grid(&mut rep, &root)?;
            return finish(rep, &root);
        }
    };

    let msf_cfg = ExperimentConfig {
        model: model.into(),
        n,
        msf,
        perturbation: base.perturbation,
        out: root.join("msf"),
        ..ExperimentConfig::default()
    };
    write_config(&msf_cfg)?;
    rep.intervals = cmd_msf(&msf_cfg)?.intervals;

    let mut first_error = None;
    for v in variants {
        let mut cfg = ExperimentConfig { out: root.join(v.label()), msf_dir: Some(msf_cfg.out.clone()), ..msf_cfg.clone() };
        match v {
            Variant::Synth(placement, lo, hi) => {
                cfg.spectrum.placement = placement;
                cfg.spectrum.lo = lo;
                cfg.spectrum.hi = hi;
            }
            Variant::Bidiagonal(lambda) => cfg.coupling = CouplingSource::Bidiagonal { lambda },
        }
        write_config(&cfg)?;
        let mut record = RunRecord { variant: v.label(), dir: cfg.out.clone(), max_entry: None, summary: None, error: None };
        let synthesized = match cfg.coupling {
            CouplingSource::Bidiagonal { .. } => Ok(()),
            _ => cmd_synthesize(&cfg).map(|o| record.max_entry = Some(o.verification.max_entry)),
        };
        let result = synthesized.and_then(|_| {
            if matches!(cfg.coupling, CouplingSource::Synthesized) {
                cfg.laplacian = Some(cfg.out.join("laplacian.json"));
            }
            cmd_simulate(&cfg)
        });
        match result {
            Ok(s) => record.summary = Some(s),
            Err(e) => {
                eprintln!("{}: {e}", record.variant);
                record.error = Some(e.message.clone());
                first_error.get_or_insert(e);
            }
        }
        rep.runs.push(record);
    }
    let rep = finish(rep, &root)?;
    match first_error {
        Some(e) => Err(e),
        None => Ok(rep),
    }
}

fn finish(rep: Reproduction, root: &std::path::Path) -> Result<Reproduction, CliError> {
    let path = root.join("reproduce.json");
    std::fs::create_dir_all(root).map_err(|e| CliError::usage(format!("{}: {e}", root.display())))?;
    std::fs::write(&path, serde_json::to_string_pretty(&rep).expect("plain data") + "\n")
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    Ok(rep)
}

fn write_csv(path: PathBuf, text: String) -> Result<(), CliError> {
    std::fs::create_dir_all(path.parent().expect("file in a directory")).map_err(|e| CliError::usage(e.to_string()))?;
    std::fs::write(&path, text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn feasibility_table(rep: &mut Reproduction, root: &std::path::Path) -> Result<(), CliError> {
    let mut csv = String::from("n,ratio,bound,feasible,sigma_lo,sigma_hi\n");
    for n in 2..=16 {
        let f = diffusive_feasibility(ROSSLER_INTERVAL, n).map_err(|e| CliError::usage(e.to_string()))?;
        let (lo, hi) = f.sigma_range.map_or((String::new(), String::new()), |(a, b)| (shortest(a), shortest(b)));
        csv.push_str(&format!("{n},{},{},{},{lo},{hi}\n", shortest(f.ratio), shortest(f.bound), f.feasible));
        if !f.feasible && rep.first_infeasible.is_none() {
            rep.first_infeasible = Some(n);
        }
        rep.feasibility.push(f);
    }
    rep.intervals = vec![ROSSLER_INTERVAL];
    write_csv(root.join("feasibility.csv"), csv)
}

fn sym3x3_grid(rep: &mut Reproduction, root: &std::path::Path) -> Result<(), CliError> {
    let mut csv = String::from("lambda2,lambda3,feasible,boundary\n");
    let mut points = vec![(1.0, 3.0), (1.0, 2.0)];
    for i in 1..=20 {
        for j in i + 1..=40 {
            points.push((0.25 * i as f64, 0.25 * j as f64));
        }
    }
    for (l2, l3) in points {
        let result = symmetric_3x3_feasible(l2, l3).map_err(|e| CliError::usage(e.to_string()))?;
        csv.push_str(&format!("{},{},{},{}\n", shortest(l2), shortest(l3), result.feasible, result.boundary));
        rep.sym3x3.push(Sym3x3Point { lambda2: l2, lambda3: l3, result });
    }
    write_csv(root.join("sym3x3.csv"), csv)
}
