use super::{TridiagError, TridiagonalMatrix};

/// Small row-major dense matrix, used for Householder intermediates and
/// verification.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "dense matrix dimensions must be positive");
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| rows[i][j])
    }

    pub fn diagonal(d: &[f64]) -> Self {
        Self::from_fn(d.len(), d.len(), |i, j| if i == j { d[i] } else { 0.0 })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, x.len(), "vector length differs");
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() }
    }

    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| (self.get(i, j) - self.get(j, i)).abs() <= tol))
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (p, q) = (other.rows, other.cols);
        Self::from_fn(self.rows * p, self.cols * q, |i, j| self.get(i / p, j / q) * other.get(i % p, j % q))
    }
}

/// Householder reduction of a symmetric matrix: returns `(S, H)` with
/// `Hᵀ A H = S` tridiagonal and `H e₁ = e₁`.
///
/// Reflector `k` zeroes column `k` below the sub-diagonal. Columns whose tail
/// is already zero are skipped, so tridiagonal input comes back unchanged
/// with `H = I`. Off-diagonal signs are left as produced.
pub fn householder_tridiagonalize(a: &DenseMatrix) -> Result<(TridiagonalMatrix, DenseMatrix), TridiagError> {
    let n = a.rows();
    if n != a.cols() {
        return Err(TridiagError::Dimension { expected: n, got: a.cols() });
    }
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    if !a.is_symmetric(1e-12 * scale) {
        return Err(TridiagError::NotSymmetric);
    }
    let mut m = a.clone();
    let mut h = DenseMatrix::identity(n);
    let mut w = vec![0.0; n];
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        let tail_sq: f64 = (k + 2..n).map(|i| m.get(i, k).powi(2)).sum();
        if tail_sq == 0.0 {
            continue;
        }
        let x0 = m.get(k + 1, k);
        let norm = (x0 * x0 + tail_sq).sqrt();
        let alpha = if x0 >= 0.0 { -norm } else { norm };
        // v = x - alpha e1, reflector P = I - 2 v vᵀ / (vᵀv)
        w.iter_mut().for_each(|x| *x = 0.0);
        w[k + 1] = x0 - alpha;
        for i in k + 2..n {
            w[i] = m.get(i, k);
        }
        let vtv = w[k + 1] * w[k + 1] + tail_sq;
        let beta = 2.0 / vtv;

        // Symmetric rank-2 update: M ← P M P on the trailing block.
        for i in k..n {
            p[i] = beta * (k + 1..n).map(|j| m.get(i, j) * w[j]).sum::<f64>();
        }
        let kappa = 0.5 * beta * (k + 1..n).map(|i| w[i] * p[i]).sum::<f64>();
        for i in k..n {
            p[i] -= kappa * w[i];
        }
        for i in k..n {
            for j in k..n {
                let v = m.get(i, j) - w[i] * p[j] - p[i] * w[j];
                m.set(i, j, v);
            }
        }
        m.set(k + 1, k, alpha);
        m.set(k, k + 1, alpha);
        for i in k + 2..n {
            m.set(i, k, 0.0);
            m.set(k, i, 0.0);
        }

        // H ← H P
        for i in 0..n {
            let s = beta * (k + 1..n).map(|j| h.get(i, j) * w[j]).sum::<f64>();
            if s != 0.0 {
                for j in k + 1..n {
                    let v = h.get(i, j) - s * w[j];
                    h.set(i, j, v);
                }
            }
        }
    }
    let diag = (0..n).map(|i| m.get(i, i)).collect();
    let off: Vec<f64> = (1..n).map(|i| m.get(i, i - 1)).collect();
    Ok((TridiagonalMatrix::symmetric(diag, off)?, h))
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi sweeps, ascending.
///
/// Independent of the Sturm machinery; intended as a verification oracle
/// for `n ≤ 256`.
pub fn symmetric_eigenvalues_jacobi(a: &DenseMatrix) -> Vec<f64> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "matrix must be square");
    assert!(n <= 256, "jacobi oracle limited to n <= 256");
    let mut m = a.clone();
    let total: f64 = m.as_slice().iter().map(|x| x * x).sum();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| m.get(i, j).powi(2)).sum();
        if off <= 1e-30 * total || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let app = m.get(p, p);
                let aqq = m.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m.get(k, p);
                    let mkq = m.get(k, q);
                    m.set(k, p, c * mkp - s * mkq);
                    m.set(k, q, s * mkp + c * mkq);
                }
                for k in 0..n {
                    let mpk = m.get(p, k);
                    let mqk = m.get(q, k);
                    m.set(p, k, c * mpk - s * mqk);
                    m.set(q, k, s * mpk + c * mqk);
                }
            }
        }
    }
    let mut e: Vec<f64> = (0..n).map(|i| m.get(i, i)).collect();
    e.sort_by(f64::total_cmp);
    e
}
