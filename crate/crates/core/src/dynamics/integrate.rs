use super::DynamicsError;

/// Components beyond this magnitude count as a blow-up.
pub const BLOWUP_THRESHOLD: f64 = 1e8;

/// Scratch space for one classical RK4 step on a fixed dimension.
#[derive(Debug, Clone)]
pub struct Rk4 {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    stage: Vec<f64>,
}

impl Rk4 {
    pub fn new(dim: usize) -> Self {
        Self { k1: vec![0.0; dim], k2: vec![0.0; dim], k3: vec![0.0; dim], k4: vec![0.0; dim], stage: vec![0.0; dim] }
    }

    /// Advances `x` by one step of size `h`.
    pub fn step(&mut self, rhs: &mut impl FnMut(&[f64], &mut [f64]), x: &mut [f64], h: f64) {
        let half = 0.5 * h;
        rhs(x, &mut self.k1);
        for ((s, xi), k) in self.stage.iter_mut().zip(x.iter()).zip(&self.k1) {
            *s = xi + half * k;
        }
        rhs(&self.stage, &mut self.k2);
        for ((s, xi), k) in self.stage.iter_mut().zip(x.iter()).zip(&self.k2) {
            *s = xi + half * k;
        }
        rhs(&self.stage, &mut self.k3);
        for ((s, xi), k) in self.stage.iter_mut().zip(x.iter()).zip(&self.k3) {
            *s = xi + h * k;
        }
        rhs(&self.stage, &mut self.k4);
        let sixth = h / 6.0;
        for i in 0..x.len() {
            x[i] += sixth * (self.k1[i] + 2.0 * (self.k2[i] + self.k3[i]) + self.k4[i]);
        }
    }
}

pub(crate) fn check_finite(x: &[f64], step: usize, h: f64) -> Result<(), DynamicsError> {
    if x.iter().all(|v| v.abs() <= BLOWUP_THRESHOLD) {
        Ok(())
    } else {
        Err(DynamicsError::BlowUp { step, time: step as f64 * h })
    }
}

/// Fixed-step RK4 from `x0` for `steps` steps.
///
/// `sampler(step, t, x)` sees the initial state and then every `stride`
/// steps. Returns the final state; aborts on a non-finite component or one
/// beyond [`BLOWUP_THRESHOLD`].
pub fn rk4_integrate(
    mut rhs: impl FnMut(&[f64], &mut [f64]),
    x0: &[f64],
    h: f64,
    steps: usize,
    stride: usize,
    mut sampler: impl FnMut(usize, f64, &[f64]),
) -> Result<Vec<f64>, DynamicsError> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(DynamicsError::Parameter(format!("step size must be positive, got {h}")));
    }
    if steps == 0 || stride == 0 {
        return Err(DynamicsError::Parameter("steps and stride must be at least 1".into()));
    }
    let mut x = x0.to_vec();
    let mut rk = Rk4::new(x.len());
    sampler(0, 0.0, &x);
    for step in 1..=steps {
        rk.step(&mut rhs, &mut x, h);
        check_finite(&x, step, h)?;
        if step % stride == 0 {
            sampler(step, step as f64 * h, &x);
        }
    }
    Ok(x)
}

/// [`rk4_integrate`] collecting `(t, x)` samples.
pub fn rk4_trajectory(
    rhs: impl FnMut(&[f64], &mut [f64]),
    x0: &[f64],
    h: f64,
    steps: usize,
    stride: usize,
) -> Result<Vec<(f64, Vec<f64>)>, DynamicsError> {
    let mut samples = Vec::new();
    rk4_integrate(rhs, x0, h, steps, stride, |_, t, x| samples.push((t, x.to_vec())))?;
    Ok(samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_step_of_decay() {
        let x = rk4_integrate(|x, o| o[0] = -x[0], &[1.0], 0.1, 1, 1, |_, _, _| {}).unwrap();
        let h: f64 = 0.1;
        let poly = 1.0 - h + h * h / 2.0 - h.powi(3) / 6.0 + h.powi(4) / 24.0;
        assert!((x[0] - poly).abs() < 1e-15);
        assert!((x[0] - 0.9048375).abs() < 1e-7);
    }

    #[test]
    fn zero_field_is_constant() {
        let traj = rk4_trajectory(|_, o| o.fill(0.0), &[1.5, -2.0], 0.01, 100, 10).unwrap();
        assert_eq!(traj.len(), 11);
        assert!(traj.iter().all(|(_, x)| x == &[1.5, -2.0]));
        assert!((traj.last().unwrap().0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn blowup_reports_step() {
        let err = rk4_integrate(|x, o| o[0] = x[0] * x[0], &[1.0], 0.1, 100, 1, |_, _, _| {}).unwrap_err();
        match err {
            DynamicsError::BlowUp { step, .. } => assert!(step > 5 && step < 20, "step {step}"),
            other => panic!("unexpected {other:?}"),
        }
        let err = rk4_integrate(|_, o| o[0] = f64::NAN, &[1.0], 0.1, 3, 1, |_, _, _| {}).unwrap_err();
        assert!(matches!(err, DynamicsError::BlowUp { step: 1, .. }));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(rk4_integrate(|_, o| o.fill(0.0), &[0.0], 0.0, 1, 1, |_, _, _| {}).is_err());
        assert!(rk4_integrate(|_, o| o.fill(0.0), &[0.0], 0.1, 0, 1, |_, _, _| {}).is_err());
    }
}
