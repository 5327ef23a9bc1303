use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::SynthesisError;

/// Target eigenvalues, strictly increasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SpectrumSpec {
    values: Vec<f64>,
}

impl SpectrumSpec {
    pub fn new(values: Vec<f64>) -> Result<Self, SynthesisError> {
        if values.is_empty() {
            return Err(SynthesisError::TooSmall(0));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(SynthesisError::NotIncreasing(i));
        }
        if let Some(i) = values.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(SynthesisError::NotIncreasing(i + 1));
        }
        Ok(Self { values })
    }

    /// Spectrum suitable for a Laplacian: `0 = λ₁ < λ₂ < … < λ_N`.
    pub fn laplacian(values: Vec<f64>) -> Result<Self, SynthesisError> {
        let spec = Self::new(values)?;
        spec.check_laplacian()?;
        Ok(spec)
    }

    pub fn check_laplacian(&self) -> Result<(), SynthesisError> {
        if self.values.len() < 2 {
            return Err(SynthesisError::TooSmall(self.values.len()));
        }
        if self.values[0] != 0.0 {
            return Err(SynthesisError::NotLaplacianSpectrum(self.values[0]));
        }
        Ok(())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl TryFrom<Vec<f64>> for SpectrumSpec {
    type Error = SynthesisError;

    fn try_from(v: Vec<f64>) -> Result<Self, Self::Error> {
        Self::new(v)
    }
}

impl From<SpectrumSpec> for Vec<f64> {
    fn from(s: SpectrumSpec) -> Self {
        s.values
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Placement {
    /// Equispaced, endpoints included.
    Linear,
    /// First-kind Chebyshev nodes `cos((2k-1)π/(2m))` mapped onto the interval.
    Chebyshev,
}

impl std::str::FromStr for Placement {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "linear" => Ok(Self::Linear),
            "chebyshev" => Ok(Self::Chebyshev),
            other => Err(format!("unknown placement '{other}' (expected linear or chebyshev)")),
        }
    }
}

/// `{0}` followed by `count` points placed in `[lo, hi]`.
///
/// A single linear point sits at `lo`.
pub fn place_eigenvalues(strategy: Placement, lo: f64, hi: f64, count: usize) -> Result<SpectrumSpec, SynthesisError> {
    if !(lo > 0.0) || !(hi > lo) || !hi.is_finite() {
        return Err(SynthesisError::BadInterval { lo, hi });
    }
    if count < 1 {
        return Err(SynthesisError::TooSmall(count + 1));
    }
    let mut values = Vec::with_capacity(count + 1);
    values.push(0.0);
    match strategy {
        Placement::Linear => {
            if count == 1 {
                values.push(lo);
            } else {
                let step = (hi - lo) / (count - 1) as f64;
                values.extend((0..count).map(|i| if i == count - 1 { hi } else { lo + step * i as f64 }));
            }
        }
        Placement::Chebyshev => {
            let m = count as f64;
            let mid = 0.5 * (lo + hi);
            let half = 0.5 * (hi - lo);
            // k = m..1 gives ascending nodes.
            values.extend((1..=count).rev().map(|k| mid + half * ((2.0 * k as f64 - 1.0) * PI / (2.0 * m)).cos()));
        }
    }
    SpectrumSpec::laplacian(values)
}
