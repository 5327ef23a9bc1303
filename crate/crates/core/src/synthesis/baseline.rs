use std::f64::consts::PI;

use serde::Serialize;

use super::{Provenance, SpectrumSpec, SynthesisError, TridiagonalLaplacian};
use crate::tridiag::TridiagonalMatrix;

/// Closed-form spectrum of `σT`: `4σ sin²((k-1)π/(2N))`, k = 1..N.
pub fn diffusive_spectrum(sigma: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| 4.0 * sigma * ((k as f64) * PI / (2.0 * n as f64)).sin().powi(2)).collect()
}

/// Diffusive (symmetric nearest-neighbour) coupling `σT` and its spectrum.
pub fn diffusive_laplacian(sigma: f64, n: usize) -> Result<(TridiagonalLaplacian, SpectrumSpec), SynthesisError> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(SynthesisError::Parameter(format!("coupling strength must be positive, got {sigma}")));
    }
    if n < 2 {
        return Err(SynthesisError::TooSmall(n));
    }
    let t = TridiagonalMatrix::path_laplacian(n)?.scale(sigma);
    let spec = SpectrumSpec::laplacian(diffusive_spectrum(sigma, n))?;
    Ok((TridiagonalLaplacian::new(t, Provenance::Diffusive { sigma })?, spec))
}

/// Upper bidiagonal Laplacian with eigenvalue 0 (null vector `e`) and
/// eigenvalue `λ` of algebraic multiplicity `N-1`.
///
/// Rows `1..N-1` are `(λ, -λ)`; the last agent receives no coupling, so
/// this is not a [`TridiagonalLaplacian`] (reduced, last diagonal zero).
pub fn bidiagonal_optimal_laplacian(lambda: f64, n: usize) -> Result<TridiagonalMatrix, SynthesisError> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(SynthesisError::Parameter(format!("eigenvalue must be positive, got {lambda}")));
    }
    if n < 2 {
        return Err(SynthesisError::TooSmall(n));
    }
    let mut diag = vec![lambda; n];
    diag[n - 1] = 0.0;
    Ok(TridiagonalMatrix::new(diag, vec![0.0; n - 1], vec![-lambda; n - 1])?)
}

/// Whether a symmetric 3×3 tridiagonal matrix with kernel `e` and spectrum
/// `{0, λ₂, λ₃}` exists.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetricFeasibility {
    pub feasible: bool,
    /// Discriminant sits on the equality boundary (one double root).
    pub boundary: bool,
    /// `(x, y)` pairs for `[[x,-x,0],[-x,x+y,-y],[0,-y,y]]`.
    pub solutions: Vec<(f64, f64)>,
}

impl SymmetricFeasibility {
    pub fn matrix(x: f64, y: f64) -> TridiagonalMatrix {
        TridiagonalMatrix::symmetric(vec![x, x + y, y], vec![-x, -y]).expect("finite 3x3 entries")
    }
}

/// Feasible iff `10 λ₂λ₃ ≤ 3λ₂² + 3λ₃²`; the boundary is decided with
/// absolute slack `1e-12 λ₃²`.
pub fn symmetric_3x3_feasible(l2: f64, l3: f64) -> Result<SymmetricFeasibility, SynthesisError> {
    if !(l2 > 0.0 && l3 > l2 && l3.is_finite()) {
        return Err(SynthesisError::Parameter(format!("need 0 < λ2 < λ3, got ({l2}, {l3})")));
    }
    let disc = 3.0 * l2 * l2 - 10.0 * l2 * l3 + 3.0 * l3 * l3;
    let slack = 1e-12 * l3 * l3;
    if disc < -slack {
        return Ok(SymmetricFeasibility { feasible: false, boundary: false, solutions: vec![] });
    }
    let s = 3.0 * l2 + 3.0 * l3;
    if disc <= slack {
        let x = s / 12.0;
        return Ok(SymmetricFeasibility { feasible: true, boundary: true, solutions: vec![(x, x)] });
    }
    let r = 3.0_f64.sqrt() * disc.sqrt();
    let (p, m) = ((s + r) / 12.0, (s - r) / 12.0);
    Ok(SymmetricFeasibility { feasible: true, boundary: false, solutions: vec![(p, m), (m, p)] })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diffusive_examples() {
        let (_, s) = diffusive_laplacian(1.0, 3).unwrap();
        for (g, w) in s.values().iter().zip([0.0, 1.0, 3.0]) {
            assert!((g - w).abs() < 1e-14);
        }
        let (l, s) = diffusive_laplacian(2.0, 3).unwrap();
        for (g, w) in s.values().iter().zip([0.0, 2.0, 6.0]) {
            assert!((g - w).abs() < 1e-14);
        }
        assert_eq!(l.provenance(), &Provenance::Diffusive { sigma: 2.0 });
        let (_, s) = diffusive_laplacian(1.0, 4).unwrap();
        let r = 2.0_f64.sqrt();
        for (g, w) in s.values().iter().zip([0.0, 2.0 - r, 2.0, 2.0 + r]) {
            assert!((g - w).abs() < 1e-14);
        }
        assert!(diffusive_laplacian(0.0, 3).is_err());
        assert!(diffusive_laplacian(1.0, 1).is_err());
    }

    #[test]
    fn bidiagonal_example() {
        let l = bidiagonal_optimal_laplacian(2.0, 3).unwrap();
        assert_eq!(l.to_dense().as_slice(), &[2.0, -2.0, 0.0, 0.0, 2.0, -2.0, 0.0, 0.0, 0.0]);
        assert_eq!(l.row_sums(), vec![0.0; 3]);
        let l8 = bidiagonal_optimal_laplacian(8.0, 5).unwrap();
        assert_eq!(l8, bidiagonal_optimal_laplacian(1.0, 5).unwrap().scale(8.0));
        assert!(bidiagonal_optimal_laplacian(-1.0, 3).is_err());
    }

    #[test]
    fn bidiagonal_characteristic_polynomial() {
        // det(μI - L) = μ (μ - λ)^(N-1): the Sturm recurrence reproduces it.
        let (lambda, n) = (3.0, 5);
        let l = bidiagonal_optimal_laplacian(lambda, n).unwrap();
        for mu in [-1.0, 0.5, 2.0, 3.0, 7.25] {
            let p = *l.sturm_sequence(mu).last().unwrap();
            let want = mu * (mu - lambda).powi(n as i32 - 1);
            assert!((p - want).abs() <= 1e-12 * want.abs().max(1.0), "mu={mu}");
        }
    }

    #[test]
    fn feasibility_examples() {
        let f = symmetric_3x3_feasible(1.0, 3.0).unwrap();
        assert!(f.feasible && f.boundary);
        assert_eq!(f.solutions, vec![(1.0, 1.0)]);
        assert_eq!(SymmetricFeasibility::matrix(1.0, 1.0), TridiagonalMatrix::path_laplacian(3).unwrap());

        let f = symmetric_3x3_feasible(1.0, 2.0).unwrap();
        assert!(!f.feasible && f.solutions.is_empty());

        let f = symmetric_3x3_feasible(1.0, 4.0).unwrap();
        assert!(f.feasible && !f.boundary && f.solutions.len() == 2);
        for (x, y) in f.solutions {
            let e = SymmetricFeasibility::matrix(x, y).eigenvalues().unwrap();
            for (g, w) in e.iter().zip([0.0, 1.0, 4.0]) {
                assert!((g - w).abs() < 1e-10, "{g} vs {w}");
            }
        }
        assert!(symmetric_3x3_feasible(2.0, 1.0).is_err());
    }
}
