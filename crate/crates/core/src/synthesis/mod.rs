//! Inverse eigenvalue constructions for tridiagonal Laplacians.
//!
//! The pipeline is [`diag2trid`] (a symmetric unreduced tridiagonal matrix
//! with a prescribed simple spectrum) followed by [`trid_zero_row_sum`] (a
//! diagonal similarity that moves the null vector onto `e`). [`synthesize`]
//! runs both and checks the result.

mod baseline;
mod io;
mod spectrum;

pub use baseline::{
    bidiagonal_optimal_laplacian, diffusive_laplacian, diffusive_spectrum, symmetric_3x3_feasible, SymmetricFeasibility,
};
pub use io::{from_matrix_market, read_laplacian_json, to_matrix_market, write_laplacian_json};
pub use spectrum::{place_eigenvalues, Placement, SpectrumSpec};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tridiag::{householder_tridiagonalize, unit_from_ratios, DenseMatrix, TridiagError, TridiagonalMatrix};

#[derive(Debug, Error)]
pub enum SynthesisError {
    #[error("need at least 2 eigenvalues, got {0}")]
    TooSmall(usize),
    #[error("eigenvalues must be finite and strictly increasing (position {0})")]
    NotIncreasing(usize),
    #[error("Laplacian spectrum must start at exactly 0, got {0}")]
    NotLaplacianSpectrum(f64),
    #[error("invalid interval [{lo}, {hi}]: need 0 < lo < hi")]
    BadInterval { lo: f64, hi: f64 },
    #[error("starting vector must be a unit vector of length {n} with no zero component")]
    BadStartVector { n: usize },
    #[error("diag2trid: result is numerically reduced, |b_{index}| = {value:e} below {threshold:e}")]
    NumericallyReduced { index: usize, value: f64, threshold: f64 },
    #[error("zero-row-sum: input must be symmetric with negative off-diagonals (k={0})")]
    BadSymmetricInput(usize),
    #[error("zero-row-sum: scaling alpha_{index} = {value:e} is not positive and finite")]
    BadAlpha { index: usize, value: f64 },
    #[error("zero-row-sum: input is not singular, last-row residual {residual:e} exceeds {tolerance:e}")]
    NotSingular { residual: f64, tolerance: f64 },
    #[error("Laplacian structure violated: {0}")]
    Structure(String),
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<SynthesisError>,
    },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error(transparent)]
    Tridiag(#[from] TridiagError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("matrix market: {0}")]
    MatrixMarket(String),
}

/// Which constructor produced a Laplacian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Synthesized,
    Diffusive { sigma: f64 },
    Loaded,
}

/// Tridiagonal out-degree Laplacian: negative off-diagonals, positive
/// diagonal, zero row sums.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalLaplacian {
    matrix: TridiagonalMatrix,
    provenance: Provenance,
}

/// Relative row-sum tolerance enforced on every Laplacian.
pub const ROW_SUM_TOL: f64 = 1e-12;

impl TridiagonalLaplacian {
    pub fn new(matrix: TridiagonalMatrix, provenance: Provenance) -> Result<Self, SynthesisError> {
        if matrix.n() < 2 {
            return Err(SynthesisError::TooSmall(matrix.n()));
        }
        if let Some(k) = matrix.sub().iter().chain(matrix.sup()).position(|x| !(*x < 0.0)) {
            return Err(SynthesisError::Structure(format!("off-diagonal entry {k} is not negative")));
        }
        if let Some(i) = matrix.diag().iter().position(|x| !(*x > 0.0)) {
            return Err(SynthesisError::Structure(format!("diagonal entry {i} is not positive")));
        }
        let residual = max_abs(&matrix.row_sums());
        let tol = ROW_SUM_TOL * matrix.norm_inf();
        if residual > tol {
            return Err(SynthesisError::Structure(format!("row sum residual {residual:e} exceeds {tol:e}")));
        }
        Ok(Self { matrix, provenance })
    }

    pub fn matrix(&self) -> &TridiagonalMatrix {
        &self.matrix
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn into_matrix(self) -> TridiagonalMatrix {
        self.matrix
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.matrix.is_symmetric(tol)
    }

    /// Re-checks the spectral half of the invariants: eigenvalue 0 simple
    /// and every other eigenvalue positive.
    pub fn verify(&self) -> Verification {
        let m = &self.matrix;
        let row_sum_residual = max_abs(&m.row_sums());
        let norm = m.norm_inf();
        let eigenvalues = m.eigenvalues().ok();
        let (zero_simple, others_positive) = match &eigenvalues {
            Some(e) => {
                let tol = 1e-10 * norm;
                (e[0].abs() <= tol && e[1] > tol, e[1..].iter().all(|x| *x > tol))
            }
            None => (false, false),
        };
        Verification {
            n: m.n(),
            row_sum_residual,
            row_sums_ok: row_sum_residual <= ROW_SUM_TOL * norm,
            offdiag_negative: m.sub().iter().chain(m.sup()).all(|x| *x < 0.0),
            diag_positive: m.diag().iter().all(|x| *x > 0.0),
            zero_simple,
            others_positive,
            eigenvalues,
            max_entry: m.max_abs_entry(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Verification {
    pub n: usize,
    pub row_sum_residual: f64,
    pub row_sums_ok: bool,
    pub offdiag_negative: bool,
    pub diag_positive: bool,
    pub zero_simple: bool,
    pub others_positive: bool,
    pub eigenvalues: Option<Vec<f64>>,
    pub max_entry: f64,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.row_sums_ok && self.offdiag_negative && self.diag_positive && self.zero_simple && self.others_positive
    }
}

/// Diagnostics of the zero-row-sum construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthesisReport {
    /// One-based row where the two sweeps meet; its sum is checked, not imposed.
    pub twist_row: usize,
    /// `α_2..α_N`.
    pub alphas: Vec<f64>,
    /// Diagonal of `D = diag(1, α₂, α₂α₃, …)`.
    pub similarity: Vec<f64>,
    /// Unit null vector of the symmetric input, proportional to `D e`.
    pub null_vec: Vec<f64>,
    pub row_sum_residual: f64,
    pub spectral_residual: f64,
    pub offdiag_sign_ok: bool,
    pub diag_positive_ok: bool,
    pub max_entry: f64,
    pub max_offdiag_entry: f64,
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn max_deviation(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Symmetric unreduced tridiagonal matrix with the given simple spectrum and
/// negative off-diagonals.
///
/// `D = diag(λ)` is rotated by the Householder reflection `Q` with
/// `Q e₁ = q` and reduced to tridiagonal form; the off-diagonal signs are
/// then fixed by a ±1 diagonal similarity. `q` defaults to `e/√N`.
pub fn diag2trid(spec: &SpectrumSpec, q: Option<&[f64]>) -> Result<TridiagonalMatrix, SynthesisError> {
    let lambda = spec.values();
    let n = lambda.len();
    if n < 2 {
        return Err(SynthesisError::TooSmall(n));
    }
    let default_q;
    let q = match q {
        Some(q) => {
            let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
            if q.len() != n || (norm - 1.0).abs() > 1e-12 || q.iter().any(|x| *x == 0.0 || !x.is_finite()) {
                return Err(SynthesisError::BadStartVector { n });
            }
            q
        }
        None => {
            default_q = vec![1.0 / (n as f64).sqrt(); n];
            &default_q[..]
        }
    };

    // Q = I - β u uᵀ with u = e₁ - q; then QᵀDQ = D - β(u wᵀ + w uᵀ) + β²(uᵀw) u uᵀ, w = Du.
    let mut u: Vec<f64> = q.iter().map(|x| -x).collect();
    u[0] += 1.0;
    let utu: f64 = u.iter().map(|x| x * x).sum();
    let beta = 2.0 / utu;
    let w: Vec<f64> = u.iter().zip(lambda).map(|(a, l)| a * l).collect();
    let uw: f64 = u.iter().zip(&w).map(|(a, b)| a * b).sum();
    let a = DenseMatrix::from_fn(n, n, |i, j| {
        let d = if i == j { lambda[i] } else { 0.0 };
        d - beta * (u[i] * w[j] + w[i] * u[j]) + beta * beta * uw * u[i] * u[j]
    });
    // Symmetrize away rounding so the reduction sees an exactly symmetric input.
    let a = DenseMatrix::from_fn(n, n, |i, j| 0.5 * (a.get(i, j) + a.get(j, i)));

    let (s, _h) = householder_tridiagonalize(&a)?;

    let mut signs = vec![1.0; n];
    for k in 1..n {
        signs[k] = if s.sup()[k - 1] < 0.0 { signs[k - 1] } else { -signs[k - 1] };
    }
    let s = s.diag_similarity(&signs)?;

    let span = lambda[n - 1] - lambda[0];
    let threshold = 1e-13 * span;
    if let Some(k) = s.sup().iter().position(|b| !(b.abs() >= threshold)) {
        return Err(SynthesisError::NumericallyReduced { index: k + 2, value: s.sup()[k], threshold });
    }
    Ok(s)
}

/// Rebalances a singular symmetric tridiagonal `S` into `L = D⁻¹ S D` with
/// `L e = 0`, `D = diag(1, α₂, α₂α₃, …)`.
///
/// Row `k` of `L` is `(b_k/α_k, a_k, α_{k+1} b_{k+1})` and its sum
/// vanishes when `α_{k+1} b_{k+1} + a_k + b_k/α_k = 0`. Solving that top
/// down (`α₂ = -a₁/b₂`, …) is unstable once the null vector of `S` decays
/// along the chain, so the rows are also solved bottom up
/// (`α_N = -b_N/a_N`, `α_k = -b_k / (a_k + b_{k+1} α_{k+1})`) and the two
/// sweeps are joined at the row with the smallest residual. That row's sum
/// is not imposed; it vanishes because `S` is singular, and is checked.
pub fn trid_zero_row_sum(s: &TridiagonalMatrix) -> Result<(TridiagonalLaplacian, SynthesisReport), SynthesisError> {
    let n = s.n();
    if n < 2 {
        return Err(SynthesisError::TooSmall(n));
    }
    let norm = s.norm_inf();
    if !s.is_symmetric(1e-14 * norm) {
        return Err(SynthesisError::BadSymmetricInput(0));
    }
    if let Some(k) = s.sup().iter().position(|b| !(*b < 0.0)) {
        return Err(SynthesisError::BadSymmetricInput(k + 2));
    }
    let a = s.diag();
    // b[k - 1] is b_{k+1} in one-based terms: the coupling between rows k and k+1.
    let b = s.sup();

    // down[k] / up[k] hold α for the edge between zero-based rows k and k+1.
    let mut down = vec![0.0; n - 1];
    down[0] = -a[0] / b[0];
    for k in 1..n - 1 {
        down[k] = -(a[k] + b[k - 1] / down[k - 1]) / b[k];
    }
    let mut up = vec![0.0; n - 1];
    up[n - 2] = -b[n - 2] / a[n - 1];
    for k in (0..n - 2).rev() {
        up[k] = -b[k] / (a[k + 1] + b[k + 1] * up[k + 1]);
    }

    let good = |x: &f64| x.is_finite() && *x > 0.0;
    // Row r may join the sweeps if down[..r] and up[r..] are all usable.
    let top_len = down.iter().position(|x| !good(x)).unwrap_or(n - 1);
    let bottom_start = up.iter().rposition(|x| !good(x)).map_or(0, |i| i + 1);
    let residual_at = |r: usize| {
        let mut g = a[r];
        if r > 0 {
            g += b[r - 1] / down[r - 1];
        }
        if r + 1 < n {
            g += b[r] * up[r];
        }
        g
    };
    let Some((twist, gamma)) = (bottom_start..=top_len)
        .map(|r| (r, residual_at(r)))
        .filter(|(_, g)| g.is_finite())
        .min_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
    else {
        let index = if top_len < n - 1 { top_len } else { bottom_start - 1 };
        let value = if top_len < n - 1 { down[top_len] } else { up[index] };
        return Err(SynthesisError::BadAlpha { index: index + 2, value });
    };
    let tolerance = 1e-10 * norm;
    if !(gamma.abs() <= tolerance) {
        return Err(SynthesisError::NotSingular { residual: gamma.abs(), tolerance });
    }
    let alphas: Vec<f64> = (0..n - 1).map(|k| if k < twist { down[k] } else { up[k] }).collect();

    let sup: Vec<f64> = b.iter().zip(&alphas).map(|(b, al)| al * b).collect();
    let sub: Vec<f64> = b.iter().zip(&alphas).map(|(b, al)| b / al).collect();
    let l = TridiagonalMatrix::new(a.to_vec(), sub, sup)?;

    let mut similarity = Vec::with_capacity(n);
    similarity.push(1.0);
    for al in &alphas {
        let next = similarity.last().unwrap() * al;
        similarity.push(next);
    }
    let null_vec = unit_from_ratios(&alphas)?;

    let spectral_residual = match (s.eigenvalues(), l.eigenvalues()) {
        (Ok(es), Ok(el)) => max_deviation(&es, &el),
        _ => f64::INFINITY,
    };
    let report = SynthesisReport {
        twist_row: twist + 1,
        alphas,
        similarity,
        null_vec,
        row_sum_residual: max_abs(&l.row_sums()),
        spectral_residual,
        offdiag_sign_ok: l.sub().iter().chain(l.sup()).all(|x| *x < 0.0),
        diag_positive_ok: l.diag().iter().all(|x| *x > 0.0),
        max_entry: l.max_abs_entry(),
        max_offdiag_entry: l.max_abs_off_diagonal(),
    };
    let laplacian = TridiagonalLaplacian::new(l, Provenance::Synthesized)?;
    Ok((laplacian, report))
}

/// Tridiagonal Laplacian with spectrum `spec` and null vector `e/√N`.
pub fn synthesize(spec: &SpectrumSpec) -> Result<(TridiagonalLaplacian, SynthesisReport), SynthesisError> {
    synthesize_with(spec, None)
}

/// [`synthesize`] with an explicit starting vector for the reflection.
pub fn synthesize_with(
    spec: &SpectrumSpec,
    q: Option<&[f64]>,
) -> Result<(TridiagonalLaplacian, SynthesisReport), SynthesisError> {
    spec.check_laplacian()?;
    let s = diag2trid(spec, q).map_err(|e| SynthesisError::Stage { stage: "diag2trid", source: Box::new(e) })?;
    let (l, mut report) =
        trid_zero_row_sum(&s).map_err(|e| SynthesisError::Stage { stage: "trid_zero_row_sum", source: Box::new(e) })?;
    let eig = l.matrix().eigenvalues()?;
    report.spectral_residual = max_deviation(&eig, spec.values());
    Ok((l, report))
}
