//! Tridiagonal matrices and their spectral kernels.
//!
//! A [`TridiagonalMatrix`] of order `n` stores its main diagonal
//! `a_1..a_n`, the sub-diagonal `c_2..c_n` (entry `(k, k-1)`) and the
//! super-diagonal `b_2..b_n` (entry `(k-1, k)`). Indexing in this module is
//! zero based, so `sub[k]` and `sup[k]` hold `c_{k+2}` and `b_{k+2}`.

mod dense;

pub use dense::{householder_tridiagonalize, symmetric_eigenvalues_jacobi, DenseMatrix};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TridiagError {
    #[error("matrix order must be at least 1")]
    Empty,
    #[error("expected {expected} off-diagonal entries, got sub={sub} super={sup}")]
    Shape { expected: usize, sub: usize, sup: usize },
    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),
    #[error("off-diagonal product b_k*c_k = {product:e} at k={index} is not positive")]
    NonPositiveProduct { index: usize, product: f64 },
    #[error("matrix is reduced: zero off-diagonal at k={0}")]
    Reduced(usize),
    #[error("matrix is not singular: residual {residual:e} exceeds {tolerance:e}")]
    NotSingular { residual: f64, tolerance: f64 },
    #[error("leading principal minor {0} vanishes; null vector recurrence breaks down")]
    Breakdown(usize),
    #[error("null vector component {0} underflowed to zero")]
    ZeroComponent(usize),
    #[error("scaling entry {0} is zero or non-finite")]
    ZeroScaling(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
}

/// Compact tridiagonal matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TridiagonalRepr", into = "TridiagonalRepr")]
pub struct TridiagonalMatrix {
    diag: Vec<f64>,
    sub: Vec<f64>,
    sup: Vec<f64>,
}

/// On-disk layout: `{n, diag[], sub[], super[]}`.
#[derive(Serialize, Deserialize)]
struct TridiagonalRepr {
    n: usize,
    diag: Vec<f64>,
    sub: Vec<f64>,
    #[serde(rename = "super")]
    sup: Vec<f64>,
}

impl TryFrom<TridiagonalRepr> for TridiagonalMatrix {
    type Error = TridiagError;

    fn try_from(r: TridiagonalRepr) -> Result<Self, Self::Error> {
        if r.diag.len() != r.n {
            return Err(TridiagError::Dimension { expected: r.n, got: r.diag.len() });
        }
        TridiagonalMatrix::new(r.diag, r.sub, r.sup)
    }
}

impl From<TridiagonalMatrix> for TridiagonalRepr {
    fn from(t: TridiagonalMatrix) -> Self {
        TridiagonalRepr { n: t.diag.len(), diag: t.diag, sub: t.sub, sup: t.sup }
    }
}

impl TridiagonalMatrix {
    pub fn new(diag: Vec<f64>, sub: Vec<f64>, sup: Vec<f64>) -> Result<Self, TridiagError> {
        let n = diag.len();
        if n == 0 {
            return Err(TridiagError::Empty);
        }
        if sub.len() != n - 1 || sup.len() != n - 1 {
            return Err(TridiagError::Shape { expected: n - 1, sub: sub.len(), sup: sup.len() });
        }
        for (name, v) in [("diag", &diag), ("sub", &sub), ("super", &sup)] {
            if v.iter().any(|x| !x.is_finite()) {
                return Err(TridiagError::NonFinite(name));
            }
        }
        Ok(Self { diag, sub, sup })
    }

    /// Symmetric matrix with `sub == super == off`.
    pub fn symmetric(diag: Vec<f64>, off: Vec<f64>) -> Result<Self, TridiagError> {
        Self::new(diag, off.clone(), off)
    }

    /// The path-graph Laplacian `T` (diffusive coupling with unit strength).
    pub fn path_laplacian(n: usize) -> Result<Self, TridiagError> {
        if n == 0 {
            return Err(TridiagError::Empty);
        }
        let mut diag = vec![2.0; n];
        diag[0] = 1.0;
        diag[n - 1] = 1.0;
        if n == 1 {
            diag[0] = 0.0;
        }
        Self::symmetric(diag, vec![-1.0; n - 1])
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn sub(&self) -> &[f64] {
        &self.sub
    }

    pub fn sup(&self) -> &[f64] {
        &self.sup
    }

    pub fn is_unreduced(&self) -> bool {
        self.sub.iter().zip(&self.sup).all(|(c, b)| *c != 0.0 && *b != 0.0)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.sub.iter().zip(&self.sup).all(|(c, b)| (c - b).abs() <= tol)
    }

    /// Entry `(i, j)`, zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.diag[i]
        } else if j == i + 1 {
            self.sup[i]
        } else if i == j + 1 {
            self.sub[j]
        } else {
            0.0
        }
    }

    /// Products `b_k c_k`, k = 2..n.
    pub fn off_products(&self) -> Vec<f64> {
        self.sub.iter().zip(&self.sup).map(|(c, b)| b * c).collect()
    }

    pub fn scale(&self, s: f64) -> Self {
        let f = |v: &[f64]| v.iter().map(|x| x * s).collect::<Vec<_>>();
        Self { diag: f(&self.diag), sub: f(&self.sub), sup: f(&self.sup) }
    }

    pub fn transpose(&self) -> Self {
        Self { diag: self.diag.clone(), sub: self.sup.clone(), sup: self.sub.clone() }
    }

    /// Row sums, i.e. `T e`.
    pub fn row_sums(&self) -> Vec<f64> {
        let n = self.n();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i];
                if i > 0 {
                    s += self.sub[i - 1];
                }
                if i + 1 < n {
                    s += self.sup[i];
                }
                s
            })
            .collect()
    }

    pub fn norm_inf(&self) -> f64 {
        let n = self.n();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i].abs();
                if i > 0 {
                    s += self.sub[i - 1].abs();
                }
                if i + 1 < n {
                    s += self.sup[i].abs();
                }
                s
            })
            .fold(0.0, f64::max)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.diag.iter().chain(&self.sub).chain(&self.sup).fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_off_diagonal(&self) -> f64 {
        self.sub.iter().chain(&self.sup).fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>, TridiagError> {
        let n = self.n();
        if x.len() != n {
            return Err(TridiagError::Dimension { expected: n, got: x.len() });
        }
        Ok((0..n)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.sub[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.sup[i] * x[i + 1];
                }
                s
            })
            .collect())
    }

    /// Principal submatrix on rows/columns `start..end`.
    pub fn principal(&self, start: usize, end: usize) -> Result<Self, TridiagError> {
        if start >= end || end > self.n() {
            return Err(TridiagError::Empty);
        }
        Self::new(
            self.diag[start..end].to_vec(),
            self.sub[start..end - 1].to_vec(),
            self.sup[start..end - 1].to_vec(),
        )
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.n();
        DenseMatrix::from_fn(n, n, |i, j| self.get(i, j))
    }

    /// Gershgorin hull `[min(a_i - r_i), max(a_i + r_i)]`.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.sub[i - 1].abs();
            }
            if i + 1 < n {
                r += self.sup[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Sturm sequence `p_0(λ)..p_n(λ)`, where `p_j` is the characteristic
    /// polynomial `det(λI - T_j)` of the leading `j×j` block.
    ///
    /// Values are unscaled; use [`Self::count_below`] for sign counting on
    /// large matrices.
    pub fn sturm_sequence(&self, lambda: f64) -> Vec<f64> {
        let n = self.n();
        let mut p = Vec::with_capacity(n + 1);
        p.push(1.0);
        p.push(lambda - self.diag[0]);
        for j in 1..n {
            let bc = self.sup[j - 1] * self.sub[j - 1];
            let next = (lambda - self.diag[j]) * p[j] - bc * p[j - 1];
            p.push(next);
        }
        p
    }

    /// Number of eigenvalues strictly below `lambda` (for matrices with
    /// positive off-diagonal products).
    ///
    /// Counts sign changes of the Sturm sequence, which equals the number of
    /// eigenvalues above `lambda`. The running pair is rescaled every step so
    /// that long sequences neither overflow nor underflow. A zero term takes
    /// the sign of its predecessor.
    pub fn count_below(&self, lambda: f64) -> usize {
        let n = self.n();
        let mut prev = 1.0_f64;
        let mut cur = lambda - self.diag[0];
        let mut prev_sign = 1.0_f64;
        let mut changes = 0usize;
        let step_sign = |value: f64, prev_sign: f64, changes: &mut usize| -> f64 {
            let s = if value == 0.0 { prev_sign } else { value.signum() };
            if s != prev_sign {
                *changes += 1;
            }
            s
        };
        prev_sign = step_sign(cur, prev_sign, &mut changes);
        for j in 1..n {
            let bc = self.sup[j - 1] * self.sub[j - 1];
            let next = (lambda - self.diag[j]) * cur - bc * prev;
            prev_sign = step_sign(next, prev_sign, &mut changes);
            prev = cur;
            cur = next;
            let m = prev.abs().max(cur.abs());
            if m > 0.0 && m.is_finite() {
                prev /= m;
                cur /= m;
            } else if m == 0.0 {
                // Two consecutive zeros cannot occur for an unreduced matrix
                // with positive products; nudge to keep the recurrence alive.
                cur = f64::MIN_POSITIVE * prev_sign;
            }
        }
        n - changes
    }

    /// All eigenvalues in ascending order, by Sturm-count bisection.
    ///
    /// Requires every product `b_k c_k > 0`, which makes `T` diagonally
    /// similar to a symmetric unreduced matrix with real simple eigenvalues.
    pub fn eigenvalues(&self) -> Result<Vec<f64>, TridiagError> {
        for (k, p) in self.off_products().into_iter().enumerate() {
            if !(p > 0.0) {
                return Err(TridiagError::NonPositiveProduct { index: k + 2, product: p });
            }
        }
        let n = self.n();
        if n == 1 {
            return Ok(vec![self.diag[0]]);
        }
        let (lo, hi) = self.gershgorin();
        let span = (hi - lo).max(f64::MIN_POSITIVE);
        let width = 1e-13 * span;
        let mut out = Vec::with_capacity(n);
        let mut floor = lo;
        for k in 0..n {
            // Find the smallest x with count_below(x) > k.
            let mut left = floor;
            let mut right = hi;
            while right - left > width {
                let mid = 0.5 * (left + right);
                if mid <= left || mid >= right {
                    break;
                }
                if self.count_below(mid) > k {
                    right = mid;
                } else {
                    left = mid;
                }
            }
            let value = 0.5 * (left + right);
            out.push(value);
            floor = left;
        }
        Ok(out)
    }

    /// Unit null vector of a singular unreduced matrix, with `v_1 > 0`.
    ///
    /// Works on the ratios `v_k / v_{k-1}`. From the top they follow the
    /// Sturm quotients, `v_k / v_{k-1} = p_{k-1}(0) / (b_k p_{k-2}(0))`,
    /// carried as scale-free pivots. From the bottom they follow the same
    /// rows solved upwards. The two sweeps meet at the row whose residual is
    /// smallest, so every component keeps full relative accuracy even when
    /// `v` decays by many orders of magnitude along the chain.
    pub fn null_vector(&self) -> Result<Vec<f64>, TridiagError> {
        let n = self.n();
        if let Some(k) = self.sub.iter().zip(&self.sup).position(|(c, b)| *c == 0.0 || *b == 0.0) {
            return Err(TridiagError::Reduced(k + 2));
        }
        if n == 1 {
            if self.diag[0] != 0.0 {
                return Err(TridiagError::NotSingular { residual: self.diag[0].abs(), tolerance: 0.0 });
            }
            return Ok(vec![1.0]);
        }
        let (a, b, c) = (&self.diag, &self.sup, &self.sub);

        // Top sweep: pivot d⁺_i = a_i + c_i / ρ⁺_i, ratio ρ⁺_{i+1} = -d⁺_i / b_{i+1}.
        let mut down = vec![f64::NAN; n];
        let mut top_pivot = vec![0.0; n];
        top_pivot[0] = a[0];
        for i in 1..n {
            down[i] = -top_pivot[i - 1] / b[i - 1];
            top_pivot[i] = a[i] + c[i - 1] / down[i];
        }
        // Bottom sweep: pivot d⁻_i = a_i + b_{i+1} ρ⁻_{i+1}, ratio ρ⁻_i = -c_i / d⁻_i.
        let mut up = vec![f64::NAN; n];
        let mut bottom_pivot = vec![0.0; n];
        bottom_pivot[n - 1] = a[n - 1];
        for i in (1..n).rev() {
            up[i] = -c[i - 1] / bottom_pivot[i];
            bottom_pivot[i - 1] = a[i - 1] + b[i - 1] * up[i];
        }

        let usable = |r: &f64| r.is_finite() && *r != 0.0;
        let top_ok = (1..n).position(|i| !usable(&down[i])).map_or(n - 1, |i| i);
        let bottom_ok = (1..n).rev().find(|&i| !usable(&up[i])).unwrap_or(0);
        let twist = (bottom_ok..=top_ok)
            .map(|r| (r, (top_pivot[r] + bottom_pivot[r] - a[r]).abs()))
            .filter(|(_, g)| g.is_finite())
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .map(|(r, _)| r)
            .ok_or(TridiagError::Breakdown(top_ok + 1))?;

        let ratios: Vec<f64> = (1..n).map(|i| if i <= twist { down[i] } else { up[i] }).collect();
        let v = unit_from_ratios(&ratios)?;
        let residual = self.mul_vec(&v)?.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let tolerance = 1e-10 * self.norm_inf();
        if !(residual <= tolerance) {
            return Err(TridiagError::NotSingular { residual, tolerance });
        }
        Ok(v)
    }

    /// Diagonal similarity `D⁻¹ T D` with `D = diag(d)`.
    ///
    /// The diagonal is unchanged; `b_k` is multiplied and `c_k` divided by
    /// the same ratio `d_k / d_{k-1}`, so every product `b_k c_k` is kept.
    pub fn diag_similarity(&self, d: &[f64]) -> Result<Self, TridiagError> {
        let n = self.n();
        if d.len() != n {
            return Err(TridiagError::Dimension { expected: n, got: d.len() });
        }
        if let Some(i) = d.iter().position(|x| *x == 0.0 || !x.is_finite()) {
            return Err(TridiagError::ZeroScaling(i));
        }
        let mut sub = self.sub.clone();
        let mut sup = self.sup.clone();
        for k in 1..n {
            let ratio = d[k] / d[k - 1];
            sup[k - 1] *= ratio;
            sub[k - 1] /= ratio;
        }
        Self::new(self.diag.clone(), sub, sup)
    }
}

/// Unit vector with `v_1 > 0` and consecutive ratios `v_{k+1} / v_k`.
///
/// Built in log space so long chains of small ratios do not underflow
/// before normalization.
pub fn unit_from_ratios(ratios: &[f64]) -> Result<Vec<f64>, TridiagError> {
    let mut logs = Vec::with_capacity(ratios.len() + 1);
    let mut signs = Vec::with_capacity(ratios.len() + 1);
    logs.push(0.0_f64);
    signs.push(1.0_f64);
    for (i, r) in ratios.iter().enumerate() {
        if !(r.is_finite() && *r != 0.0) {
            return Err(TridiagError::ZeroComponent(i + 1));
        }
        logs.push(logs[i] + r.abs().ln());
        signs.push(signs[i] * r.signum());
    }
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut v: Vec<f64> = logs.iter().zip(&signs).map(|(l, s)| s * (l - top).exp()).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    if let Some(i) = v.iter().position(|x| *x == 0.0) {
        return Err(TridiagError::ZeroComponent(i));
    }
    Ok(v)
}
