use std::fmt;
use std::sync::Arc;

use super::DynamicsError;
use crate::tridiag::DenseMatrix;

/// `out = f(x)`.
pub type VectorField = Arc<dyn Fn(&[f64], &mut [f64]) + Send + Sync>;
/// `out = Df(x)`, row-major `n×n`.
pub type JacobianField = Arc<dyn Fn(&[f64], &mut [f64]) + Send + Sync>;

/// A single agent `ẋ = f(x)`, its Jacobian, and the inner coupling matrix `E`.
#[derive(Clone)]
pub struct OscillatorModel {
    name: String,
    dim: usize,
    field: VectorField,
    jacobian: JacobianField,
    coupling: DenseMatrix,
    initial_state: Vec<f64>,
    warmup_time: f64,
}

impl fmt::Debug for OscillatorModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OscillatorModel")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("coupling", &self.coupling)
            .finish_non_exhaustive()
    }
}

impl OscillatorModel {
    /// `initial_state` seeds warm-up runs; `warmup_time` is the transient
    /// discarded before the state is considered on the attractor.
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        field: VectorField,
        jacobian: JacobianField,
        coupling: DenseMatrix,
        initial_state: Vec<f64>,
        warmup_time: f64,
    ) -> Result<Self, DynamicsError> {
        if dim == 0 || coupling.rows() != dim || coupling.cols() != dim {
            return Err(DynamicsError::Dimension { expected: dim, got: coupling.rows() });
        }
        if initial_state.len() != dim {
            return Err(DynamicsError::Dimension { expected: dim, got: initial_state.len() });
        }
        Ok(Self { name: name.into(), dim, field, jacobian, coupling, initial_state, warmup_time })
    }

    /// `ẏ₁ = y₂`, `ẏ₂ = -y₁ + y₂(1 - y₁²)`, coupled through `E = [[0,0],[1,0]]`.
    pub fn van_der_pol() -> Self {
        let field: VectorField = Arc::new(|x, out| {
            out[0] = x[1];
            out[1] = -x[0] + x[1] * (1.0 - x[0] * x[0]);
        });
        let jacobian: JacobianField = Arc::new(|x, out| {
            out[0] = 0.0;
            out[1] = 1.0;
            out[2] = -1.0 - 2.0 * x[0] * x[1];
            out[3] = 1.0 - x[0] * x[0];
        });
        let e = DenseMatrix::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0]]);
        Self::new("van_der_pol", 2, field, jacobian, e, vec![2.0, 0.0], 100.0).expect("static model")
    }

    /// `ẏ₁ = -y₂ - y₃`, `ẏ₂ = y₁ + 0.2y₂`, `ẏ₃ = 0.2 + (y₁ - 9)y₃`, coupled
    /// through `E = e₁e₁ᵀ`.
    pub fn rossler() -> Self {
        let field: VectorField = Arc::new(|x, out| {
            out[0] = -x[1] - x[2];
            out[1] = x[0] + 0.2 * x[1];
            out[2] = 0.2 + (x[0] - 9.0) * x[2];
        });
        let jacobian: JacobianField = Arc::new(|x, out| {
            out.copy_from_slice(&[0.0, -1.0, -1.0, 1.0, 0.2, 0.0, x[2], 0.0, x[0] - 9.0]);
        });
        let e = DenseMatrix::from_fn(3, 3, |i, j| if i == 0 && j == 0 { 1.0 } else { 0.0 });
        Self::new("rossler", 3, field, jacobian, e, vec![1.0, 1.0, 1.0], 500.0).expect("static model")
    }

    /// Constant linear field `ẋ = A x`.
    pub fn linear(name: impl Into<String>, a: DenseMatrix, coupling: DenseMatrix) -> Result<Self, DynamicsError> {
        let n = a.rows();
        if a.cols() != n {
            return Err(DynamicsError::Dimension { expected: n, got: a.cols() });
        }
        let a = Arc::new(a);
        let af = Arc::clone(&a);
        let field: VectorField = Arc::new(move |x, out| out.copy_from_slice(&af.mul_vec(x)));
        let jacobian: JacobianField = Arc::new(move |_, out| out.copy_from_slice(a.as_slice()));
        let mut x0 = vec![0.0; n];
        x0[0] = 1.0;
        Self::new(name, n, field, jacobian, coupling, x0, 0.0)
    }

    pub fn by_name(name: &str) -> Result<Self, DynamicsError> {
        match name {
            "van_der_pol" | "vdp" => Ok(Self::van_der_pol()),
            "rossler" => Ok(Self::rossler()),
            other => Err(DynamicsError::UnknownModel(other.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coupling(&self) -> &DenseMatrix {
        &self.coupling
    }

    pub fn initial_state(&self) -> &[f64] {
        &self.initial_state
    }

    pub fn warmup_time(&self) -> f64 {
        self.warmup_time
    }

    #[inline]
    pub fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        (self.field)(x, out)
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.eval_into(x, &mut out);
        out
    }

    #[inline]
    pub fn jacobian_into(&self, x: &[f64], out: &mut [f64]) {
        (self.jacobian)(x, out)
    }

    pub fn jacobian(&self, x: &[f64]) -> DenseMatrix {
        let mut out = vec![0.0; self.dim * self.dim];
        self.jacobian_into(x, &mut out);
        DenseMatrix::from_fn(self.dim, self.dim, |i, j| out[i * self.dim + j])
    }

    /// `‖Df(x) - FD(f, x)‖∞` with central differences of step `1e-6 (1 + ‖x‖∞)`.
    pub fn jacobian_fd_error(&self, x: &[f64]) -> f64 {
        let n = self.dim;
        let step = 1e-6 * (1.0 + x.iter().fold(0.0_f64, |m, v| m.max(v.abs())));
        let jac = self.jacobian(x);
        let mut worst = 0.0_f64;
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        for j in 0..n {
            xp[j] = x[j] + step;
            xm[j] = x[j] - step;
            let fp = self.eval(&xp);
            let fm = self.eval(&xm);
            for i in 0..n {
                let fd = (fp[i] - fm[i]) / (2.0 * step);
                worst = worst.max((fd - jac.get(i, j)).abs());
            }
            xp[j] = x[j];
            xm[j] = x[j];
        }
        worst
    }
}
