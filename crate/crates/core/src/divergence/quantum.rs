//! Quantum divergences evaluated in the pair of eigenbases.
//!
//! With `ρ = Σ λ_i |v_i⟩⟨v_i|` and `σ = Σ μ_j |u_j⟩⟨u_j|`, every trace
//! functional used here reduces to sums against the transition matrix
//! `W_ij = |⟨v_i|u_j⟩|²`, e.g. `tr(ρ^a σ^b) = Σ λ_i^a μ_j^b W_ij` over the
//! two supports.

use super::classical::{check_alpha, check_t, classical_alpha_div};
use super::{Difference, ExtendedReal};
use crate::error::{check_dims, Result};
use crate::matcore::{born_distribution, DensityMatrix, Measurement, STATE_TOL, SUPPORT_TOL};

/// Trace bound applied to overlaps before they enter a divergence.
const OVERLAP_CEIL: f64 = 1.0 + 1e-10;

struct PairSpectra {
    rho_vals: Vec<f64>,
    sigma_vals: Vec<f64>,
    rho_support: Vec<usize>,
    sigma_support: Vec<usize>,
    /// `W[i][j]` row-major over the full bases.
    transition: Vec<f64>,
}

impl PairSpectra {
    fn new(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<Self> {
        check_dims(rho.dim(), sigma.dim())?;
        let n = rho.dim();
        let (sr, ss) = (rho.spectrum(), sigma.spectrum());
        let (v, u) = (&sr.eigenvectors, &ss.eigenvectors);
        let mut transition = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut inner = num_complex::Complex64::new(0.0, 0.0);
                for r in 0..n {
                    inner += v[(r, i)].conj() * u[(r, j)];
                }
                transition[i * n + j] = inner.norm_sqr();
            }
        }
        Ok(PairSpectra {
            rho_vals: sr.eigenvalues.clone(),
            sigma_vals: ss.eigenvalues.clone(),
            rho_support: sr.support(SUPPORT_TOL),
            sigma_support: ss.support(SUPPORT_TOL),
            transition,
        })
    }

    #[inline]
    fn w(&self, i: usize, j: usize) -> f64 {
        self.transition[i * self.rho_vals.len() + j]
    }

    /// `tr(ρ^a σ^b)` on supports; `x^0` is the support projector.
    fn power_overlap(&self, a: f64, b: f64) -> f64 {
        let mut acc = 0.0;
        for &i in &self.rho_support {
            let li = self.rho_vals[i].powf(a);
            for &j in &self.sigma_support {
                acc += li * self.sigma_vals[j].powf(b) * self.w(i, j);
            }
        }
        acc
    }

    /// `tr(ρ Π)` with `Π` the projector onto the kernel of σ.
    fn mass_outside_sigma(&self) -> f64 {
        let n = self.rho_vals.len();
        let kernel: Vec<usize> = (0..n).filter(|j| !self.sigma_support.contains(j)).collect();
        self.rho_support
            .iter()
            .map(|&i| self.rho_vals[i] * kernel.iter().map(|&j| self.w(i, j)).sum::<f64>())
            .sum()
    }

    fn relative_entropy(&self) -> ExtendedReal {
        if self.mass_outside_sigma() > STATE_TOL {
            return ExtendedReal::Infinity;
        }
        let mut acc = 0.0;
        for &i in &self.rho_support {
            let li = self.rho_vals[i];
            acc += li * li.ln();
            for &j in &self.sigma_support {
                acc -= li * self.sigma_vals[j].ln() * self.w(i, j);
            }
        }
        ExtendedReal::finite(acc)
    }

    fn swapped(&self) -> PairSpectra {
        let n = self.rho_vals.len();
        let mut transition = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                transition[j * n + i] = self.transition[i * n + j];
            }
        }
        PairSpectra {
            rho_vals: self.sigma_vals.clone(),
            sigma_vals: self.rho_vals.clone(),
            rho_support: self.sigma_support.clone(),
            sigma_support: self.rho_support.clone(),
            transition,
        }
    }
}

/// `S(ρ‖σ) = tr ρ(ln ρ − ln σ)` in nats; `+∞` unless `supp ρ ⊆ supp σ`.
pub fn quantum_relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<ExtendedReal> {
    Ok(PairSpectra::new(rho, sigma)?.relative_entropy())
}

/// Quantum α-divergence `4/(1−α²)·(1 − tr ρ^{(1−α)/2} σ^{(1+α)/2})`, with
/// `α = −1 ↦ S(ρ‖σ)` and `α = +1 ↦ S(σ‖ρ)`.
pub fn quantum_alpha_div(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64) -> Result<ExtendedReal> {
    check_alpha(alpha)?;
    let spectra = PairSpectra::new(rho, sigma)?;
    if alpha == -1.0 {
        return Ok(spectra.relative_entropy());
    }
    if alpha == 1.0 {
        return Ok(spectra.swapped().relative_entropy());
    }
    let s = spectra
        .power_overlap(0.5 * (1.0 - alpha), 0.5 * (1.0 + alpha))
        .clamp(0.0, OVERLAP_CEIL);
    Ok(ExtendedReal::finite(4.0 / (1.0 - alpha * alpha) * (1.0 - s)))
}

/// `F_t(ρ, σ) = tr ρ^{1−t} σ^t`.
pub fn quantum_f_t(rho: &DensityMatrix, sigma: &DensityMatrix, t: f64) -> Result<f64> {
    check_t(t)?;
    Ok(PairSpectra::new(rho, sigma)?
        .power_overlap(1.0 - t, t)
        .clamp(0.0, OVERLAP_CEIL))
}

/// Quantum divergence, the divergence of the measured distributions, and
/// their gap.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct HotReport {
    pub quantum: ExtendedReal,
    pub measured: ExtendedReal,
    pub gap: Difference,
}

/// Compares `S^{(α)}(ρ‖σ)` with `D^{(α)}` of the outcome distributions of `m`.
/// Data processing keeps the gap nonnegative; it closes when ρ and σ
/// commute and `m` measures in their common eigenbasis.
pub fn hot_report(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    m: &Measurement,
    alpha: f64,
) -> Result<HotReport> {
    let quantum = quantum_alpha_div(rho, sigma, alpha)?;
    let p = born_distribution(rho, m)?;
    let q = born_distribution(sigma, m)?;
    let measured = classical_alpha_div(&p, &q, alpha)?;
    Ok(HotReport {
        quantum,
        measured,
        gap: quantum.minus(measured),
    })
}
