use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{rk4_integrate, DynamicsError, OscillatorModel};

/// Integrates one agent for `t_transient` and returns the final state.
pub fn attractor_warmup(model: &OscillatorModel, x0: &[f64], t_transient: f64, h: f64) -> Result<Vec<f64>, DynamicsError> {
    if x0.len() != model.dim() {
        return Err(DynamicsError::Dimension { expected: model.dim(), got: x0.len() });
    }
    if !(t_transient >= 0.0) || !(h > 0.0) {
        return Err(DynamicsError::Parameter(format!("need t_transient >= 0 and h > 0, got {t_transient}, {h}")));
    }
    let steps = (t_transient / h).round() as usize;
    if steps == 0 {
        return Ok(x0.to_vec());
    }
    rk4_integrate(|x, o| model.eval_into(x, o), x0, h, steps, steps, |_, _, _| {})
}

/// `agents` copies of `point` plus i.i.d. `N(0, variance)` noise on every component.
pub fn perturbed_sync_ic(point: &[f64], agents: usize, variance: f64, seed: u64) -> Result<Vec<f64>, DynamicsError> {
    if !(variance >= 0.0) || !variance.is_finite() {
        return Err(DynamicsError::Parameter(format!("variance must be >= 0, got {variance}")));
    }
    let sd = variance.sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spare: Option<f64> = None;
    let mut normal = move || {
        if let Some(z) = spare.take() {
            return z;
        }
        let u1: f64 = 1.0 - rng.random::<f64>();
        let u2: f64 = rng.random::<f64>();
        let r = (-2.0 * u1.ln()).sqrt();
        let th = std::f64::consts::TAU * u2;
        spare = Some(r * th.sin());
        r * th.cos()
    };
    let mut out = Vec::with_capacity(agents * point.len());
    for _ in 0..agents {
        for &p in point {
            out.push(if sd == 0.0 { p } else { p + sd * normal() });
        }
    }
    Ok(out)
}
