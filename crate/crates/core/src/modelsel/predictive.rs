use super::inference::{escort_posterior, posterior_masses, PredictiveDistribution};
use super::model::InducedModel;
use crate::divergence::classical_alpha_div;
use crate::error::{invalid, Error, Result};
use crate::exec::Execution;
use crate::largedev::SampleSequence;
use crate::matcore::{CMatrix, ClassicalDistribution, DensityMatrix, HermitianMatrix};

/// Largest number of data sequences `risk_alpha` will enumerate.
pub const SEQUENCE_LIMIT: f64 = 1e6;

/// Normalized power mean of the model densities under the `β = 1` posterior:
/// `p(k) ∝ [Σ_θ p_θ(k)^{(1−α)/2} π(θ|x) w_θ]^{2/(1−α)}`, with the geometric
/// mean at `α = 1`.
pub fn alpha_predictive(
    im: &InducedModel,
    prior: &[f64],
    alpha: f64,
    data: &SampleSequence,
) -> Result<PredictiveDistribution> {
    crate::divergence::check_alpha(alpha)?;
    if !im.has_common_support() {
        return Err(invalid("α-predictive states need a parameter-independent support"));
    }
    let post = escort_posterior(im, prior, 1.0, data)?;
    let masses = posterior_masses(im, &post);
    let live: Vec<(&ClassicalDistribution, f64)> = im
        .dists()
        .iter()
        .zip(masses)
        .filter(|(_, m)| *m > 0.0)
        .collect();
    let unnorm: Vec<f64> = (0..im.alphabet_size())
        .map(|k| {
            if !live[0].0.in_support(k) {
                return 0.0;
            }
            if alpha == 1.0 {
                live.iter().map(|(d, m)| m * d.prob(k).ln()).sum::<f64>().exp()
            } else {
                let r = 0.5 * (1.0 - alpha);
                let s: f64 = live.iter().map(|(d, m)| m * d.prob(k).powf(r)).sum();
                s.powf(1.0 / r)
            }
        })
        .collect();
    let c: f64 = unnorm.iter().sum();
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::DegeneratePosterior(format!(
            "α-predictive normalizer is {c}"
        )));
    }
    Ok(PredictiveDistribution {
        probs: ClassicalDistribution::new(unnorm.iter().map(|x| x / c).collect())?,
        normalizer: c,
    })
}

/// `Σ_k w_k ρ_k`.
pub fn barycenter_state(family: &[(f64, DensityMatrix)]) -> Result<DensityMatrix> {
    let Some((_, first)) = family.first() else {
        return Err(invalid("barycenter of an empty family"));
    };
    let dim = first.dim();
    if family.iter().any(|(w, s)| !(w.is_finite() && *w >= 0.0) || s.dim() != dim) {
        return Err(invalid("barycenter weights must be nonnegative and states share a dimension"));
    }
    let total: f64 = family.iter().map(|(w, _)| w).sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(invalid(format!("barycenter weights sum to {total}, expected 1")));
    }
    let mut acc = CMatrix::zeros(dim);
    for (w, s) in family {
        acc = &acc + &s.matrix().scale(*w);
    }
    DensityMatrix::new(HermitianMatrix::from_computed(acc))
}

/// Decodes sequence number `index` into `n` base-`k` digits, most significant first.
pub fn sequence_from_index(index: u64, n: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    let mut rem = index;
    for slot in out.iter_mut().rev() {
        *slot = (rem % k as u64) as usize;
        rem /= k as u64;
    }
    out
}

/// Bayes risk `Σ_θ Σ_x D^{(α)}(p_θ ‖ rule(x)) Π_i p_θ(x_i) π(θ) w_θ` over all
/// `K^n` data sequences.
pub fn risk_alpha<R>(im: &InducedModel, prior: &[f64], rule: R, alpha: f64, n: usize) -> Result<f64>
where
    R: Fn(&SampleSequence) -> Result<PredictiveDistribution> + Sync + Send,
{
    risk_alpha_with(im, prior, rule, alpha, n, Execution::default())
}

pub fn risk_alpha_with<R>(
    im: &InducedModel,
    prior: &[f64],
    rule: R,
    alpha: f64,
    n: usize,
    exec: Execution,
) -> Result<f64>
where
    R: Fn(&SampleSequence) -> Result<PredictiveDistribution> + Sync + Send,
{
    crate::divergence::check_alpha(alpha)?;
    im.grid().check_density(prior)?;
    let k = im.alphabet_size();
    let count = (k as f64).powi(n as i32);
    if count > SEQUENCE_LIMIT {
        return Err(Error::Capacity {
            what: format!("risk enumeration (K = {k}, n = {n})"),
            required: count,
            limit: SEQUENCE_LIMIT,
        });
    }
    let prior_mass: Vec<f64> = prior
        .iter()
        .zip(im.grid().weights())
        .map(|(a, w)| a * w)
        .collect();
    let terms = exec.try_map_indexed(count as usize, |s| -> Result<f64> {
        let seq = SampleSequence::new(sequence_from_index(s as u64, n, k), k, 0)?;
        let pred = rule(&seq)?;
        crate::error::check_dims(pred.probs.len(), k)?;
        let mut acc = 0.0;
        for (d, &pm) in im.dists().iter().zip(&prior_mass) {
            if pm == 0.0 {
                continue;
            }
            let lik: f64 = seq.outcomes.iter().map(|&x| d.prob(x)).product();
            if lik == 0.0 {
                continue;
            }
            let div = classical_alpha_div(d, &pred.probs, alpha)?.value();
            acc += div * lik * pm;
        }
        Ok(acc)
    })?;
    Ok(terms.iter().sum())
}
