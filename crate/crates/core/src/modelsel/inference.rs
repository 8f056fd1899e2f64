//! Likelihood-based estimation and information criteria on grid models.

use serde::Serialize;

use super::model::InducedModel;
use crate::error::{check_dims, invalid, Error, Result};
use crate::largedev::types::log_sum_exp;
use crate::largedev::SampleSequence;
use crate::matcore::ClassicalDistribution;

/// Posterior density over grid points (integrates to 1 against the grid weights).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PosteriorWeights {
    pub weights: Vec<f64>,
    pub beta: f64,
}

/// A predictive distribution and its normalizing constant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictiveDistribution {
    pub probs: ClassicalDistribution,
    pub normalizer: f64,
}

impl PredictiveDistribution {
    pub fn mixture(probs: ClassicalDistribution) -> Self {
        PredictiveDistribution {
            probs,
            normalizer: 1.0,
        }
    }
}

fn check_data(im: &InducedModel, data: &SampleSequence) -> Result<()> {
    check_dims(data.alphabet_size, im.alphabet_size())
}

fn check_index(im: &InducedModel, i: usize) -> Result<()> {
    if i >= im.len() {
        return Err(invalid(format!("grid index {i} out of range (grid has {})", im.len())));
    }
    Ok(())
}

/// `Σ_i ln p_θ(x_i)`.
pub fn log_likelihood(im: &InducedModel, theta: usize, data: &SampleSequence) -> Result<f64> {
    check_index(im, theta)?;
    check_data(im, data)?;
    let p = im.dist(theta).probs();
    Ok(data.outcomes.iter().map(|&x| p[x].ln()).sum())
}

fn all_log_likelihoods(im: &InducedModel, data: &SampleSequence) -> Result<Vec<f64>> {
    (0..im.len()).map(|t| log_likelihood(im, t, data)).collect()
}

/// Grid maximizer of the likelihood; ties go to the smallest index.
pub fn mle(im: &InducedModel, data: &SampleSequence) -> Result<usize> {
    let ll = all_log_likelihoods(im, data)?;
    let mut best = 0;
    for (i, &v) in ll.iter().enumerate() {
        if v > ll[best] {
            best = i;
        }
    }
    Ok(best)
}

/// `π_β(θ | x) ∝ Π p_θ(x_i)^β π(θ)`.
pub fn escort_posterior(
    im: &InducedModel,
    prior: &[f64],
    beta: f64,
    data: &SampleSequence,
) -> Result<PosteriorWeights> {
    im.grid().check_density(prior)?;
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(invalid(format!("escort exponent must be positive, got {beta}")));
    }
    let ll = all_log_likelihoods(im, data)?;
    let log_w: Vec<f64> = ll
        .iter()
        .zip(prior)
        .map(|(&l, &pr)| if pr > 0.0 { beta * l + pr.ln() } else { f64::NEG_INFINITY })
        .collect();
    let shifted: Vec<f64> = log_w
        .iter()
        .zip(im.grid().weights())
        .map(|(&lw, &gw)| lw + gw.ln())
        .collect();
    let log_z = log_sum_exp(&shifted);
    if log_z == f64::NEG_INFINITY {
        return Err(Error::DegeneratePosterior(
            "the data have zero likelihood at every grid point with prior mass".into(),
        ));
    }
    Ok(PosteriorWeights {
        weights: log_w.iter().map(|&lw| (lw - log_z).exp()).collect(),
        beta,
    })
}

/// Posterior probability of each grid point (density times cell weight).
pub fn posterior_masses(im: &InducedModel, post: &PosteriorWeights) -> Vec<f64> {
    post.weights
        .iter()
        .zip(im.grid().weights())
        .map(|(a, w)| a * w)
        .collect()
}

/// Posterior mean of the parameter vector.
pub fn posterior_mean(im: &InducedModel, post: &PosteriorWeights) -> Vec<f64> {
    let masses = posterior_masses(im, post);
    let mut mean = vec![0.0; im.grid().dim_theta()];
    for (pt, m) in im.grid().points().iter().zip(&masses) {
        for (acc, x) in mean.iter_mut().zip(pt) {
            *acc += m * x;
        }
    }
    mean
}

fn mixture(im: &InducedModel, post: &PosteriorWeights) -> Result<ClassicalDistribution> {
    let masses = posterior_masses(im, post);
    let mut probs = vec![0.0; im.alphabet_size()];
    for (d, &m) in im.dists().iter().zip(&masses) {
        if m > 0.0 {
            for (acc, &p) in probs.iter_mut().zip(d.probs()) {
                *acc += m * p;
            }
        }
    }
    ClassicalDistribution::new(probs)
}

/// Posterior mixture `Σ_θ p_θ π_β(θ|x) w_θ`.
pub fn escort_predictive(
    im: &InducedModel,
    prior: &[f64],
    beta: f64,
    data: &SampleSequence,
) -> Result<PredictiveDistribution> {
    let post = escort_posterior(im, prior, beta, data)?;
    Ok(PredictiveDistribution::mixture(mixture(im, &post)?))
}

fn functional_variance_from(im: &InducedModel, post: &PosteriorWeights, data: &SampleSequence) -> f64 {
    let masses = posterior_masses(im, post);
    let mut counts = vec![0u64; im.alphabet_size()];
    for &x in &data.outcomes {
        counts[x] += 1;
    }
    let mut total = 0.0;
    for (k, &c) in counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let live = || {
            im.dists()
                .iter()
                .zip(&masses)
                .filter(|(_, &m)| m > 0.0)
                .map(|(d, &m)| (d.prob(k).ln(), m))
        };
        let mean: f64 = live().map(|(l, m)| m * l).sum();
        let var: f64 = live().map(|(l, m)| m * (l - mean) * (l - mean)).sum();
        total += c as f64 * var;
    }
    total
}

/// `Σ_i Var_post[ln p_θ(x_i)]` under the escort posterior.
pub fn functional_variance(
    im: &InducedModel,
    prior: &[f64],
    beta: f64,
    data: &SampleSequence,
) -> Result<f64> {
    if data.is_empty() {
        return Err(invalid("functional variance needs at least one observation"));
    }
    let post = escort_posterior(im, prior, beta, data)?;
    Ok(functional_variance_from(im, &post, data))
}

/// `−(1/n) Σ ln p_θ̂(x_i) + d/n`.
pub fn aic(im: &InducedModel, data: &SampleSequence) -> Result<f64> {
    if data.is_empty() {
        return Err(invalid("AIC needs at least one observation"));
    }
    let n = data.len() as f64;
    let theta = mle(im, data)?;
    Ok(-log_likelihood(im, theta, data)? / n + im.model_dim() as f64 / n)
}

/// WAIC and its two terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaicTerms {
    pub waic: f64,
    pub training_loss: f64,
    pub functional_variance: f64,
}

pub fn waic_terms(
    im: &InducedModel,
    prior: &[f64],
    beta: f64,
    data: &SampleSequence,
) -> Result<WaicTerms> {
    if data.is_empty() {
        return Err(invalid("WAIC needs at least one observation"));
    }
    let post = escort_posterior(im, prior, beta, data)?;
    let pred = mixture(im, &post)?;
    let n = data.len() as f64;
    let training_loss = -data.outcomes.iter().map(|&x| pred.prob(x).ln()).sum::<f64>() / n;
    let fv = functional_variance_from(im, &post, data);
    Ok(WaicTerms {
        waic: training_loss + beta / n * fv,
        training_loss,
        functional_variance: fv,
    })
}

/// `−(1/n) Σ ln p_pred(x_i) + (β/n)·𝒱`.
pub fn waic(im: &InducedModel, prior: &[f64], beta: f64, data: &SampleSequence) -> Result<f64> {
    Ok(waic_terms(im, prior, beta, data)?.waic)
}

/// Index of the smallest criterion; ties go to the smallest index.
pub fn select_model(criteria: &[f64]) -> Result<usize> {
    if criteria.is_empty() {
        return Err(invalid("no models to select from"));
    }
    let mut best = 0;
    for (i, &c) in criteria.iter().enumerate() {
        if c < criteria[best] {
            best = i;
        }
    }
    Ok(best)
}
