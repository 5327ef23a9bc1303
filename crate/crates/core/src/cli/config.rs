use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::msf::LyapunovSettings;
use crate::synthesis::Placement;

/// One experiment, loaded from a single JSON document. Every field has a
/// default, so `{}` is a valid config (van der Pol, `N = 32`, linear `[1, 10]`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: String,
    pub n: usize,
    pub spectrum: SpectrumConfig,
    pub coupling: CouplingSource,
    pub integrator: IntegratorConfig,
    pub perturbation: PerturbationConfig,
    pub msf: MsfConfig,
    /// Laplacian to load instead of building one. Relative paths here and in
    /// `msf_dir` resolve against the config file.
    pub laplacian: Option<PathBuf>,
    pub out: PathBuf,
    /// Directory holding `intervals.json` and `msf.json`; defaults to `out`.
    pub msf_dir: Option<PathBuf>,
    /// Compare the fitted decay rate with the MSF over the coupling spectrum.
    pub predict: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            model: "van_der_pol".into(),
            n: 32,
            spectrum: SpectrumConfig::default(),
            coupling: CouplingSource::Synthesized,
            integrator: IntegratorConfig::default(),
            perturbation: PerturbationConfig::default(),
            msf: MsfConfig::default(),
            laplacian: None,
            out: PathBuf::from("out"),
            msf_dir: None,
            predict: true,
        }
    }
}

/// Where the nonzero eigenvalues come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumConfig {
    pub placement: Placement,
    pub lo: f64,
    pub hi: f64,
    /// Take `[lo, hi]` from the widest interval in `intervals.json` in the
    /// output directory, shrunk by `margin` of its width at each end.
    pub from_msf: bool,
    pub margin: f64,
    /// Full spectrum including the leading 0; overrides placement.
    pub values: Option<Vec<f64>>,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self { placement: Placement::Linear, lo: 1.0, hi: 10.0, from_msf: false, margin: 0.1, values: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CouplingSource {
    Synthesized,
    Diffusive { sigma: f64 },
    Bidiagonal { lambda: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorConfig {
    pub h: f64,
    pub t_end: f64,
    pub sample_stride: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self { h: 1e-3, t_end: 300.0, sample_stride: 100 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PerturbationConfig {
    pub variance: f64,
    pub seed: u64,
}

impl Default for PerturbationConfig {
    fn default() -> Self {
        Self { variance: 1.0, seed: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MsfConfig {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
    /// Negative runs whose minimum stays above `-neutral_tol` are treated as
    /// a neutral exponent and not reported.
    pub neutral_tol: f64,
    /// Model defaults when absent.
    pub lyapunov: Option<LyapunovSettings>,
}

impl Default for MsfConfig {
    fn default() -> Self {
        Self { lo: 0.0, hi: 0.5, step: 0.01, neutral_tol: 1e-3, lyapunov: None }
    }
}

impl MsfConfig {
    pub fn settings(&self, model: &str, seed: u64) -> LyapunovSettings {
        self.lyapunov.unwrap_or_else(|| LyapunovSettings { seed, ..LyapunovSettings::for_model(model) })
    }
}

/// Values given on the command line; each replaces the config field.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let mut cfg: Self = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        if let Some(dir) = path.parent() {
            for p in [cfg.laplacian.as_mut(), cfg.msf_dir.as_mut()].into_iter().flatten() {
                if p.is_relative() {
                    *p = dir.join(&*p);
                }
            }
        }
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(out) = &o.out {
            self.out = out.clone();
        }
        if let Some(seed) = o.seed {
            self.perturbation.seed = seed;
            if let Some(l) = self.msf.lyapunov.as_mut() {
                l.seed = seed;
            }
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.n < 2 {
            return Err(format!("n must be at least 2, got {}", self.n));
        }
        let i = &self.integrator;
        if !(i.h > 0.0) || !(i.t_end > 0.0) || i.sample_stride == 0 {
            return Err("integrator needs h > 0, t_end > 0, sample_stride >= 1".into());
        }
        if !(0.0..0.5).contains(&self.spectrum.margin) {
            return Err("spectrum.margin must lie in [0, 0.5)".into());
        }
        if !(self.perturbation.variance >= 0.0) {
            return Err("perturbation variance must be >= 0".into());
        }
        let m = &self.msf;
        if !(m.step > 0.0) || !(m.hi >= m.lo) || !(m.lo >= 0.0) {
            return Err("msf grid needs 0 <= lo <= hi and step > 0".into());
        }
        match self.coupling {
            CouplingSource::Diffusive { sigma } if !(sigma > 0.0) => Err("diffusive sigma must be > 0".into()),
            CouplingSource::Bidiagonal { lambda } if !(lambda > 0.0) => Err("bidiagonal lambda must be > 0".into()),
            _ => Ok(()),
        }
    }

    pub fn msf_dir(&self) -> &Path {
        self.msf_dir.as_deref().unwrap_or(&self.out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_is_default() {
        let cfg: ExperimentConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
        cfg.validate().unwrap();
    }

    #[test]
    fn round_trip_is_stable() {
        let mut cfg = ExperimentConfig { coupling: CouplingSource::Diffusive { sigma: 2.5 }, ..Default::default() };
        cfg.spectrum.values = Some(vec![0.0, 2.0]);
        cfg.msf.lyapunov = Some(LyapunovSettings::rossler());
        let text = cfg.to_json();
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn overrides_and_validation() {
        let mut cfg = ExperimentConfig::default();
        cfg.apply(&Overrides { out: Some("elsewhere".into()), seed: Some(9) });
        assert_eq!(cfg.out, PathBuf::from("elsewhere"));
        assert_eq!(cfg.perturbation.seed, 9);
        assert_eq!(cfg.msf.settings("rossler", 9).total_time, 20000.0);
        cfg.n = 1;
        assert!(cfg.validate().is_err());
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"bogus": 1}"#).is_err());
        let c: ExperimentConfig = serde_json::from_str(r#"{"coupling": {"kind": "bidiagonal", "lambda": 2}}"#).unwrap();
        assert_eq!(c.coupling, CouplingSource::Bidiagonal { lambda: 2.0 });
    }
}
