use num_complex::Complex64;

use super::eigen::{eigh, SUPPORT_TOL};
use super::matrix::{CMatrix, HermitianMatrix};
use super::state::{ClassicalDistribution, DensityMatrix, STATE_TOL};
use crate::error::{check_dims, invalid, Error, Result};

/// A finite measurement: positive effects summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    effects: Vec<HermitianMatrix>,
    labels: Vec<f64>,
}

impl Measurement {
    pub fn new(effects: Vec<HermitianMatrix>, labels: Vec<f64>) -> Result<Self> {
        if effects.is_empty() {
            return Err(invalid("measurement needs at least one effect"));
        }
        if labels.len() != effects.len() {
            return Err(invalid(format!(
                "{} labels for {} effects",
                labels.len(),
                effects.len()
            )));
        }
        let dim = effects[0].dim();
        let mut total = CMatrix::zeros(dim);
        for (k, e) in effects.iter().enumerate() {
            check_dims(dim, e.dim())?;
            let min = eigh(e)?.eigenvalues[0];
            if min < -STATE_TOL {
                return Err(invalid(format!(
                    "effect {k} is not positive (eigenvalue {min:e})"
                )));
            }
            total = &total + e.matrix();
        }
        let defect = (&total - &CMatrix::identity(dim))
            .as_slice()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if defect > STATE_TOL {
            return Err(invalid(format!(
                "effects do not sum to the identity (defect {defect:e})"
            )));
        }
        Ok(Measurement { effects, labels })
    }

    /// Effects labelled `0, 1, …, K−1`.
    pub fn from_effects(effects: Vec<HermitianMatrix>) -> Result<Self> {
        let labels = (0..effects.len()).map(|k| k as f64).collect();
        Self::new(effects, labels)
    }

    /// Rank-one projective measurement onto the columns of a unitary.
    pub fn from_orthonormal_basis(u: &CMatrix) -> Result<Self> {
        let effects = (0..u.dim())
            .map(|k| HermitianMatrix::from_computed(CMatrix::outer(&u.column(k))))
            .collect();
        Self::from_effects(effects)
    }

    pub fn computational_basis(dim: usize) -> Self {
        Self::from_orthonormal_basis(&CMatrix::identity(dim)).expect("identity basis")
    }

    /// The single-outcome measurement `{I}`.
    pub fn trivial(dim: usize) -> Self {
        Self::new(vec![HermitianMatrix::identity(dim)], vec![1.0]).expect("trivial measurement")
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    #[inline]
    pub fn outcomes(&self) -> usize {
        self.effects.len()
    }

    pub fn effects(&self) -> &[HermitianMatrix] {
        &self.effects
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    /// True when every effect is idempotent within `tol` (Frobenius).
    pub fn is_projective(&self, tol: f64) -> bool {
        self.effects.iter().all(|e| {
            let sq = e.matrix() * e.matrix();
            (&sq - e.matrix()).frobenius_norm() <= tol
        })
    }
}

/// Spectral measurement of an observable. Eigenvalues whose consecutive gap
/// is at most `degeneracy_tol` are merged into one outcome labelled by the
/// cluster mean. Outcomes are ordered by decreasing eigenvalue, so the
/// Pauli-Z measurement lists `|0⟩` (label +1) first.
pub fn pvm_from_observable(a: &HermitianMatrix, degeneracy_tol: f64) -> Result<Measurement> {
    let sd = eigh(a)?;
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for k in (0..sd.dim()).rev() {
        match clusters.last_mut() {
            Some(c) if sd.eigenvalues[*c.last().unwrap()] - sd.eigenvalues[k] <= degeneracy_tol => {
                c.push(k)
            }
            _ => clusters.push(vec![k]),
        }
    }
    let mut effects = Vec::with_capacity(clusters.len());
    let mut labels = Vec::with_capacity(clusters.len());
    for c in &clusters {
        let proj = sd.weighted_sum(|k| if c.contains(&k) { 1.0 } else { 0.0 });
        effects.push(HermitianMatrix::from_computed(proj));
        labels.push(c.iter().map(|&k| sd.eigenvalues[k]).sum::<f64>() / c.len() as f64);
    }
    Measurement::new(effects, labels)
}

/// Outcome distribution `p_k = tr(ρ E_k)`.
pub fn born_distribution(rho: &DensityMatrix, m: &Measurement) -> Result<ClassicalDistribution> {
    check_dims(rho.dim(), m.dim())?;
    let mut probs = Vec::with_capacity(m.outcomes());
    for (k, e) in m.effects().iter().enumerate() {
        let p = rho.matrix().trace_product(e.matrix())?.re;
        if p < -SUPPORT_TOL {
            return Err(Error::Numerical(format!(
                "outcome {k} has probability {p:e}"
            )));
        }
        probs.push(p.max(0.0));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > STATE_TOL {
        return Err(Error::Numerical(format!(
            "outcome probabilities sum to {total}"
        )));
    }
    ClassicalDistribution::new(probs.into_iter().map(|p| p / total).collect())
}

/// Outcome distribution together with the conditional (Lüders) states
/// `E_k^{1/2} ρ E_k^{1/2} / p_k` of every outcome in the support.
#[derive(Debug, Clone, PartialEq)]
pub struct PostMeasurementDecomposition {
    pub distribution: ClassicalDistribution,
    /// Outcome index of each conditional state.
    pub outcomes: Vec<usize>,
    pub conditional_states: Vec<DensityMatrix>,
}

impl PostMeasurementDecomposition {
    /// `Σ_k p_k ρ_k`.
    pub fn barycenter(&self) -> Result<DensityMatrix> {
        let dim = self.conditional_states[0].dim();
        let mut acc = CMatrix::zeros(dim);
        for (&k, state) in self.outcomes.iter().zip(&self.conditional_states) {
            acc = &acc + &state.matrix().scale(self.distribution.prob(k));
        }
        DensityMatrix::new(HermitianMatrix::from_computed(acc))
    }
}

pub fn post_measurement(rho: &DensityMatrix, m: &Measurement) -> Result<PostMeasurementDecomposition> {
    let distribution = born_distribution(rho, m)?;
    let mut outcomes = Vec::new();
    let mut conditional_states = Vec::new();
    for &k in distribution.support() {
        let root = eigh(&m.effects()[k])?.apply(|x| x.max(0.0).sqrt(), SUPPORT_TOL)?;
        let sandwich = &(root.matrix() * rho.matrix()) * root.matrix();
        // tr(E^{1/2} ρ E^{1/2}) equals p_k up to rounding; dividing by the
        // computed trace keeps tiny-probability outcomes exactly normalized.
        conditional_states.push(DensityMatrix::from_unnormalized(sandwich)?);
        outcomes.push(k);
    }
    Ok(PostMeasurementDecomposition {
        distribution,
        outcomes,
        conditional_states,
    })
}

/// `|0⟩, |1⟩, |+⟩, |−⟩` as vectors.
pub fn qubit_ket(name: &str) -> Option<Vec<Complex64>> {
    let s = 0.5f64.sqrt();
    let c = |re: f64| Complex64::new(re, 0.0);
    match name {
        "0" => Some(vec![c(1.0), c(0.0)]),
        "1" => Some(vec![c(0.0), c(1.0)]),
        "+" => Some(vec![c(s), c(s)]),
        "-" => Some(vec![c(s), c(-s)]),
        _ => None,
    }
}
