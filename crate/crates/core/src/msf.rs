//! Master stability function: the largest Lyapunov exponent of
//! `ż = (Df(x(t)) - ηE) z` along a single-agent orbit, as a function of `η`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{DynamicsError, OscillatorModel, Rk4, BLOWUP_THRESHOLD, DEFAULT_STEP};
use crate::fmt::shortest;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum MsfError {
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error("tangent vector collapsed at t = {time}; use a shorter renormalization interval")]
    Collapse { time: f64 },
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LyapunovSettings {
    pub warmup_time: f64,
    pub total_time: f64,
    pub renorm_interval: f64,
    pub h: f64,
    /// Seeds the initial tangent direction.
    pub seed: u64,
}

impl LyapunovSettings {
    pub fn van_der_pol() -> Self {
        Self { warmup_time: 100.0, total_time: 2000.0, renorm_interval: 1.0, h: DEFAULT_STEP, seed: 0 }
    }

    pub fn rossler() -> Self {
        Self { warmup_time: 500.0, total_time: 20000.0, renorm_interval: 1.0, h: DEFAULT_STEP, seed: 0 }
    }

    /// Defaults for a named model; unknown names get the van der Pol settings.
    pub fn for_model(name: &str) -> Self {
        match name {
            "rossler" => Self::rossler(),
            _ => Self::van_der_pol(),
        }
    }

    fn validate(&self) -> Result<(usize, usize, usize), MsfError> {
        let ok = |v: f64| v > 0.0 && v.is_finite();
        if !(ok(self.total_time) && ok(self.renorm_interval) && ok(self.h)) || !(self.warmup_time >= 0.0) {
            return Err(MsfError::Parameter(format!("settings must be positive: {self:?}")));
        }
        let renorm = (self.renorm_interval / self.h).round().max(1.0) as usize;
        let total = (self.total_time / self.h).round() as usize;
        if total < 2 * renorm {
            return Err(MsfError::Parameter("total_time must cover at least two renormalization intervals".into()));
        }
        Ok(((self.warmup_time / self.h).round() as usize, total, renorm))
    }
}

/// `(Df(x) - ηE) z`.
pub fn variational_rhs(model: &OscillatorModel, x: &[f64], eta: f64, z: &[f64]) -> Result<Vec<f64>, MsfError> {
    let n = model.dim();
    for len in [x.len(), z.len()] {
        if len != n {
            return Err(DynamicsError::Dimension { expected: n, got: len }.into());
        }
    }
    let mut jac = vec![0.0; n * n];
    let mut out = vec![0.0; n];
    tangent(model, eta, x, z, &mut jac, &mut out);
    Ok(out)
}

#[inline]
fn tangent(model: &OscillatorModel, eta: f64, x: &[f64], z: &[f64], jac: &mut [f64], out: &mut [f64]) {
    let n = model.dim();
    model.jacobian_into(x, jac);
    let e = model.coupling();
    for i in 0..n {
        let mut s = 0.0;
        for j in 0..n {
            s += (jac[i * n + j] - eta * e.get(i, j)) * z[j];
        }
        out[i] = s;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LyapunovEstimate {
    pub exponent: f64,
    /// `|λ(T) - λ(T/2)|`.
    pub convergence: f64,
}

/// Benettin estimate of the largest exponent of the variational system at `eta`.
///
/// Orbit and tangent vector share RK4 steps. The tangent vector is also
/// evolved (and renormalized) during warm-up so it starts aligned.
pub fn largest_lyapunov(model: &OscillatorModel, eta: f64, settings: &LyapunovSettings) -> Result<LyapunovEstimate, MsfError> {
    if !(eta >= 0.0) || !eta.is_finite() {
        return Err(MsfError::Parameter(format!("eta must be >= 0, got {eta}")));
    }
    let (warm, total, renorm) = settings.validate()?;
    let n = model.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let mut state = model.initial_state().to_vec();
    let mut z: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
    let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
    z.iter_mut().for_each(|v| *v /= norm);
    state.extend(z);

    let mut jac = vec![0.0; n * n];
    let mut rhs = |y: &[f64], out: &mut [f64]| {
        let (x, z) = y.split_at(n);
        let (fx, fz) = out.split_at_mut(n);
        model.eval_into(x, fx);
        tangent(model, eta, x, z, &mut jac, fz);
    };
    let mut rk = Rk4::new(2 * n);
    let h = settings.h;
    let mut log_sum = 0.0;
    let mut half = None;
    for step in 1..=warm + total {
        rk.step(&mut rhs, &mut state, h);
        if !state[..n].iter().all(|v| v.abs() <= BLOWUP_THRESHOLD) {
            return Err(DynamicsError::BlowUp { step, time: step as f64 * h }.into());
        }
        if step % renorm == 0 || step == warm {
            let z = &mut state[n..];
            let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
            if !(norm > 1e-300) || !norm.is_finite() {
                return Err(MsfError::Collapse { time: step as f64 * h });
            }
            z.iter_mut().for_each(|v| *v /= norm);
            if step > warm {
                log_sum += norm.ln();
            }
        }
        if step > warm && (step - warm) == total / 2 {
            half = Some(log_sum / ((step - warm) as f64 * h));
        }
    }
    let tail = (warm + total) % renorm;
    if tail != 0 {
        let norm = state[n..].iter().map(|v| v * v).sum::<f64>().sqrt();
        log_sum += norm.ln();
    }
    let exponent = log_sum / (total as f64 * h);
    Ok(LyapunovEstimate { exponent, convergence: (exponent - half.unwrap_or(exponent)).abs() })
}

/// `count` points `lo, lo + step, …` up to `hi`.
pub fn eta_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>, MsfError> {
    if !(step > 0.0) || !(hi >= lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(MsfError::Parameter(format!("bad grid [{lo}, {hi}] step {step}")));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| lo + i as f64 * step).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailedPoint {
    pub index: usize,
    pub eta: f64,
    pub error: String,
}

/// Successful grid points only; failures are listed separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MsfCurve {
    pub etas: Vec<f64>,
    pub values: Vec<f64>,
    pub convergence: Vec<f64>,
    pub failed: Vec<FailedPoint>,
    pub negative_intervals: Vec<Interval>,
}

impl MsfCurve {
    pub fn from_values(etas: Vec<f64>, values: Vec<f64>) -> Self {
        let negative_intervals = negative_intervals(&etas, &values);
        let convergence = vec![0.0; etas.len()];
        Self { etas, values, convergence, failed: Vec::new(), negative_intervals }
    }

    /// `eta,msf` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("eta,msf\n");
        for (e, v) in self.etas.iter().zip(&self.values) {
            out.push_str(&format!("{},{}\n", shortest(*e), shortest(*v)));
        }
        out
    }

    pub fn intervals_json(&self) -> String {
        serde_json::to_string_pretty(&self.negative_intervals).expect("plain floats")
    }

    /// Negative intervals whose most negative value lies below `-tol`.
    pub fn significant_intervals(&self, tol: f64) -> Vec<Interval> {
        self.negative_intervals
            .iter()
            .copied()
            .filter(|iv| {
                self.etas
                    .iter()
                    .zip(&self.values)
                    .filter(|(e, _)| **e >= iv.lo && **e <= iv.hi)
                    .any(|(_, v)| *v < -tol)
            })
            .collect()
    }

    /// Maximum of the interpolated curve over `etas`, if all lie inside the hull.
    pub fn max_over(&self, etas: &[f64]) -> Option<f64> {
        etas.iter().map(|e| self.interpolate(*e)).try_fold(f64::NEG_INFINITY, |m, v| v.map(|v| m.max(v)))
    }

    /// Linear interpolation of the curve at `eta`, if inside the hull.
    pub fn interpolate(&self, eta: f64) -> Option<f64> {
        let k = self.etas.partition_point(|e| *e < eta);
        if k < self.etas.len() && self.etas[k] == eta {
            return Some(self.values[k]);
        }
        if k == 0 || k == self.etas.len() {
            return None;
        }
        let (e0, e1, v0, v1) = (self.etas[k - 1], self.etas[k], self.values[k - 1], self.values[k]);
        Some(v0 + (v1 - v0) * (eta - e0) / (e1 - e0))
    }
}

/// Evaluates every grid point in parallel; results are ordered by grid index.
pub fn msf_scan(model: &OscillatorModel, etas: &[f64], settings: &LyapunovSettings) -> Result<MsfCurve, MsfError> {
    if etas.is_empty() || etas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(MsfError::Parameter("grid must be nonempty and strictly increasing".into()));
    }
    let results: Vec<_> = etas.par_iter().map(|&eta| largest_lyapunov(model, eta, settings)).collect();
    let mut curve = MsfCurve { etas: vec![], values: vec![], convergence: vec![], failed: vec![], negative_intervals: vec![] };
    for (index, (eta, r)) in etas.iter().zip(results).enumerate() {
        match r {
            Ok(est) => {
                curve.etas.push(*eta);
                curve.values.push(est.exponent);
                curve.convergence.push(est.convergence);
            }
            Err(e) => curve.failed.push(FailedPoint { index, eta: *eta, error: e.to_string() }),
        }
    }
    curve.negative_intervals = negative_intervals(&curve.etas, &curve.values);
    Ok(curve)
}

/// Maximal runs of negative values, ends refined by linear interpolation.
pub fn negative_intervals(etas: &[f64], values: &[f64]) -> Vec<Interval> {
    let crossing = |i: usize| {
        let (e0, e1, v0, v1) = (etas[i], etas[i + 1], values[i], values[i + 1]);
        e0 + (e1 - e0) * v0 / (v0 - v1)
    };
    let mut out = Vec::new();
    let mut start = None;
    for i in 0..values.len() {
        let neg = values[i] < 0.0;
        match (neg, start) {
            (true, None) => start = Some(if i == 0 { etas[0] } else { crossing(i - 1) }),
            (false, Some(lo)) => {
                out.push(Interval { lo, hi: crossing(i - 1) });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(lo) = start {
        out.push(Interval { lo, hi: *etas.last().unwrap() });
    }
    out
}

/// `4 sin²((k-1)π/(2N))`, the `k`-th eigenvalue of the path Laplacian.
pub fn path_eigenvalue(k: usize, n: usize) -> f64 {
    let s = ((k - 1) as f64 * PI / (2.0 * n as f64)).sin();
    4.0 * s * s
}

/// Smallest `σ` with `σλ₂ = η₁` for diffusive coupling of `n` agents.
pub fn required_sigma(eta1: f64, n: usize) -> f64 {
    eta1 / path_eigenvalue(2, n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiffusiveFeasibility {
    pub n: usize,
    pub feasible: bool,
    /// `λ_N / λ₂`.
    pub ratio: f64,
    /// `η₂ / η₁`.
    pub bound: f64,
    /// Open range `(η₁/λ₂, η₂/λ_N)` when feasible.
    pub sigma_range: Option<(f64, f64)>,
}

/// Whether some `σ` places all of `σλ₂ … σλ_N` inside `interval`.
pub fn diffusive_feasibility(interval: Interval, n: usize) -> Result<DiffusiveFeasibility, MsfError> {
    if !(0.0 < interval.lo && interval.lo < interval.hi) || n < 2 {
        return Err(MsfError::Parameter(format!("need 0 < lo < hi and N >= 2, got {interval:?}, {n}")));
    }
    let (l2, ln) = (path_eigenvalue(2, n), path_eigenvalue(n, n));
    let ratio = ln / l2;
    let bound = interval.hi / interval.lo;
    let feasible = ratio < bound;
    let sigma_range = feasible.then(|| (interval.lo / l2, interval.hi / ln));
    Ok(DiffusiveFeasibility { n, feasible, ratio, bound, sigma_range })
}
