use serde::Serialize;

use super::integrate::{check_finite, Rk4};
use super::{DynamicsError, OscillatorModel};
use crate::fmt::shortest;
use crate::tridiag::TridiagonalMatrix;

/// `N` copies of a model coupled by `ẋ = F(x) - (L ⊗ E) x`.
#[derive(Debug, Clone)]
pub struct NetworkSystem {
    model: OscillatorModel,
    laplacian: TridiagonalMatrix,
}

/// Largest tolerated `|row sum|` of the coupling Laplacian.
pub const NETWORK_ROW_SUM_TOL: f64 = 1e-10;

impl NetworkSystem {
    pub fn new(model: OscillatorModel, laplacian: TridiagonalMatrix) -> Result<Self, DynamicsError> {
        let worst = laplacian.row_sums().iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        if worst > NETWORK_ROW_SUM_TOL {
            return Err(DynamicsError::NotZeroRowSum(worst));
        }
        Ok(Self { model, laplacian })
    }

    pub fn model(&self) -> &OscillatorModel {
        &self.model
    }

    pub fn laplacian(&self) -> &TridiagonalMatrix {
        &self.laplacian
    }

    pub fn agents(&self) -> usize {
        self.laplacian.n()
    }

    pub fn total_dim(&self) -> usize {
        self.agents() * self.model.dim()
    }

    /// Stacked derivative into `out`, without forming `L ⊗ E`.
    ///
    /// Agent `i` gets `f(x_i) - E w_i` with `w_i = c_i x_{i-1} + a_i x_i + b_{i+1} x_{i+1}`.
    pub fn rhs_into(&self, x: &[f64], out: &mut [f64], w: &mut [f64]) {
        let n = self.model.dim();
        let agents = self.agents();
        let (a, b, c) = (self.laplacian.diag(), self.laplacian.sup(), self.laplacian.sub());
        let e = self.model.coupling();
        for i in 0..agents {
            let xi = &x[i * n..(i + 1) * n];
            for k in 0..n {
                let mut s = a[i] * xi[k];
                if i > 0 {
                    s += c[i - 1] * x[(i - 1) * n + k];
                }
                if i + 1 < agents {
                    s += b[i] * x[(i + 1) * n + k];
                }
                w[k] = s;
            }
            let oi = &mut out[i * n..(i + 1) * n];
            self.model.eval_into(xi, oi);
            for r in 0..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += e.get(r, k) * w[k];
                }
                oi[r] -= s;
            }
        }
    }

    pub fn network_rhs(&self, x: &[f64]) -> Result<Vec<f64>, DynamicsError> {
        if x.len() != self.total_dim() {
            return Err(DynamicsError::Dimension { expected: self.total_dim(), got: x.len() });
        }
        let mut out = vec![0.0; x.len()];
        let mut w = vec![0.0; self.model.dim()];
        self.rhs_into(x, &mut out, &mut w);
        Ok(out)
    }

    /// `N` copies of `z`.
    pub fn synchronous_state(&self, z: &[f64]) -> Vec<f64> {
        z.iter().copied().cycle().take(self.total_dim()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SyncMetric {
    /// `max_i ‖x_i - x_{i+1}‖₂`.
    #[default]
    Adjacent,
    /// `max_{i<j} ‖x_i - x_j‖₂`, for diagnostics.
    AllPairs,
}

pub fn sync_error(x: &[f64], dim: usize, metric: SyncMetric) -> f64 {
    let agents = x.len() / dim;
    let dist = |i: usize, j: usize| {
        x[i * dim..(i + 1) * dim].iter().zip(&x[j * dim..(j + 1) * dim]).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt()
    };
    match metric {
        SyncMetric::Adjacent => (1..agents).map(|i| dist(i - 1, i)).fold(0.0, f64::max),
        SyncMetric::AllPairs => (0..agents).flat_map(|i| (i + 1..agents).map(move |j| (i, j))).map(|(i, j)| dist(i, j)).fold(0.0, f64::max),
    }
}

/// Sampled synchronization error, optionally with full states.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SyncSeries {
    pub times: Vec<f64>,
    pub sync_error: Vec<f64>,
    pub states: Option<Vec<Vec<f64>>>,
}

impl SyncSeries {
    /// `t,sync_error` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,sync_error\n");
        for (t, e) in self.times.iter().zip(&self.sync_error) {
            out.push_str(&shortest(*t));
            out.push(',');
            out.push_str(&shortest(*e));
            out.push('\n');
        }
        out
    }

    /// `t,x_1_1,...,x_N_n` rows, if states were recorded.
    pub fn states_to_csv(&self, agents: usize, dim: usize) -> Option<String> {
        let states = self.states.as_ref()?;
        let mut out = String::from("t");
        for i in 1..=agents {
            for k in 1..=dim {
                out.push_str(&format!(",x_{i}_{k}"));
            }
        }
        out.push('\n');
        for (t, x) in self.times.iter().zip(states) {
            out.push_str(&shortest(*t));
            for v in x {
                out.push(',');
                out.push_str(&shortest(*v));
            }
            out.push('\n');
        }
        Some(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlowUp {
    pub step: usize,
    pub time: f64,
}

#[derive(Debug, Clone)]
pub struct Simulation {
    pub series: SyncSeries,
    pub final_state: Vec<f64>,
    /// Set when the run aborted; the series stops at the last good sample.
    pub blowup: Option<BlowUp>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationOptions {
    pub h: f64,
    pub t_end: f64,
    pub sample_stride: usize,
    pub metric: SyncMetric,
    pub record_states: bool,
}

impl SimulationOptions {
    pub fn new(h: f64, t_end: f64, sample_stride: usize) -> Self {
        Self { h, t_end, sample_stride, metric: SyncMetric::Adjacent, record_states: false }
    }
}

/// RK4 on the network from `x0`; a blow-up ends the run but is returned in
/// [`Simulation::blowup`] rather than as an error.
pub fn simulate_network(sys: &NetworkSystem, x0: &[f64], opts: &SimulationOptions) -> Result<Simulation, DynamicsError> {
    let dim = sys.total_dim();
    if x0.len() != dim {
        return Err(DynamicsError::Dimension { expected: dim, got: x0.len() });
    }
    if !(opts.h > 0.0) || !(opts.t_end > 0.0) || opts.sample_stride == 0 {
        return Err(DynamicsError::Parameter("need h > 0, t_end > 0 and sample_stride >= 1".into()));
    }
    let steps = (opts.t_end / opts.h).round() as usize;
    let n = sys.model().dim();
    let mut series = SyncSeries { states: opts.record_states.then(Vec::new), ..Default::default() };
    let record = |t: f64, x: &[f64], series: &mut SyncSeries| {
        series.times.push(t);
        series.sync_error.push(sync_error(x, n, opts.metric));
        if let Some(s) = series.states.as_mut() {
            s.push(x.to_vec());
        }
    };
    let mut x = x0.to_vec();
    let mut w = vec![0.0; n];
    let mut rk = Rk4::new(dim);
    let mut rhs = |y: &[f64], out: &mut [f64]| sys.rhs_into(y, out, &mut w);
    record(0.0, &x, &mut series);
    let mut blowup = None;
    for step in 1..=steps {
        rk.step(&mut rhs, &mut x, opts.h);
        if let Err(DynamicsError::BlowUp { step, time }) = check_finite(&x, step, opts.h) {
            blowup = Some(BlowUp { step, time });
            break;
        }
        if step % opts.sample_stride == 0 {
            record(step as f64 * opts.h, &x, &mut series);
        }
    }
    Ok(Simulation { series, final_state: x, blowup })
}
