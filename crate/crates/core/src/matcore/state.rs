use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::eigen::{eigh, SpectralDecomposition, SUPPORT_TOL};
use super::matrix::{CMatrix, HermitianMatrix};
use crate::error::{invalid, Result};

/// Tolerance for unit trace, positivity and normalization checks.
pub const STATE_TOL: f64 = 1e-10;

/// A quantum state: Hermitian, positive semidefinite, unit trace.
///
/// The spectral decomposition is computed once at construction and reused
/// by every spectral function of the state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: HermitianMatrix,
    spectrum: SpectralDecomposition,
}

impl DensityMatrix {
    pub fn new(matrix: HermitianMatrix) -> Result<Self> {
        let spectrum = eigh(&matrix)?;
        let min = spectrum.eigenvalues.first().copied().unwrap_or(0.0);
        if min < -STATE_TOL {
            return Err(invalid(format!(
                "density matrix has negative eigenvalue {min:e}"
            )));
        }
        let tr = matrix.trace();
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(invalid(format!("density matrix trace is {tr}, expected 1")));
        }
        Ok(DensityMatrix { matrix, spectrum })
    }

    /// Normalizes a positive semidefinite matrix by its trace.
    pub(crate) fn from_unnormalized(m: CMatrix) -> Result<Self> {
        let tr = m.trace().re;
        if !(tr > 0.0) {
            return Err(invalid("cannot normalize a matrix with nonpositive trace"));
        }
        Self::new(HermitianMatrix::from_computed(m.scale(1.0 / tr)))
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if !(norm2 > 0.0) {
            return Err(invalid("state vector must be nonzero"));
        }
        Self::from_unnormalized(CMatrix::outer(psi).scale(1.0 / norm2))
    }

    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::from_real_diag(probs))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::new(HermitianMatrix::from_real_diag(&vec![1.0 / dim as f64; dim]))
            .expect("maximally mixed state is valid")
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    #[inline]
    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.matrix
    }

    #[inline]
    pub fn matrix(&self) -> &CMatrix {
        self.matrix.matrix()
    }

    #[inline]
    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    /// Number of eigenvalues above [`SUPPORT_TOL`].
    pub fn rank(&self) -> usize {
        self.spectrum.support(SUPPORT_TOL).len()
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Result<Self> {
        Self::new(self.matrix.conjugate_by(u)?)
    }

    /// `[ρ, σ]` Frobenius norm.
    pub fn commutator_norm(&self, other: &DensityMatrix) -> Result<f64> {
        let ab = self.matrix().try_mul(other.matrix())?;
        let ba = other.matrix() * self.matrix();
        Ok((&ab - &ba).frobenius_norm())
    }
}

/// Probability vector over a finite outcome alphabet.
///
/// Entries at or below [`SUPPORT_TOL`] are stored as exact zeros and the
/// vector is renormalized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ClassicalDistribution {
    probs: Vec<f64>,
    support: Vec<usize>,
}

impl ClassicalDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(invalid("distribution over an empty alphabet"));
        }
        if let Some((k, &p)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !p.is_finite() || **p < -SUPPORT_TOL)
        {
            return Err(invalid(format!("probability {k} is {p}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > STATE_TOL {
            return Err(invalid(format!("probabilities sum to {total}, expected 1")));
        }
        let mut probs = probs;
        for p in probs.iter_mut() {
            if *p <= SUPPORT_TOL {
                *p = 0.0;
            }
        }
        let kept: f64 = probs.iter().sum();
        if kept != 1.0 {
            for p in probs.iter_mut() {
                *p /= kept;
            }
        }
        let support = (0..probs.len()).filter(|&k| probs[k] > 0.0).collect();
        Ok(ClassicalDistribution { probs, support })
    }

    pub fn uniform(k: usize) -> Self {
        Self::new(vec![1.0 / k as f64; k]).expect("uniform distribution is valid")
    }

    /// Empirical distribution of a count vector.
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        let n: u64 = counts.iter().sum();
        if n == 0 {
            return Err(invalid("empty count vector"));
        }
        Self::new(counts.iter().map(|&c| c as f64 / n as f64).collect())
    }

    #[inline]
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    #[inline]
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    #[inline]
    pub fn in_support(&self, k: usize) -> bool {
        self.probs.get(k).is_some_and(|&p| p > 0.0)
    }

    #[inline]
    pub fn prob(&self, k: usize) -> f64 {
        self.probs[k]
    }
}

impl TryFrom<Vec<f64>> for ClassicalDistribution {
    type Error = crate::Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<ClassicalDistribution> for Vec<f64> {
    fn from(d: ClassicalDistribution) -> Self {
        d.probs
    }
}
