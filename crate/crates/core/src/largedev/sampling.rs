use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::matcore::ClassicalDistribution;

/// An i.i.d. outcome sequence and the seed of the stream that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleSequence {
    pub outcomes: Vec<usize>,
    pub alphabet_size: usize,
    pub seed: u64,
}

impl SampleSequence {
    pub fn new(outcomes: Vec<usize>, alphabet_size: usize, seed: u64) -> Result<Self> {
        if let Some(&bad) = outcomes.iter().find(|&&x| x >= alphabet_size) {
            return Err(invalid(format!(
                "outcome {bad} outside alphabet of size {alphabet_size}"
            )));
        }
        Ok(SampleSequence {
            outcomes,
            alphabet_size,
            seed,
        })
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    /// `self ∥ other`.
    pub fn concat(&self, other: &SampleSequence) -> Result<SampleSequence> {
        crate::error::check_dims(self.alphabet_size, other.alphabet_size)?;
        let mut outcomes = self.outcomes.clone();
        outcomes.extend_from_slice(&other.outcomes);
        Ok(SampleSequence {
            outcomes,
            alphabet_size: self.alphabet_size,
            seed: self.seed,
        })
    }
}

/// Outcome counts of a sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypeVector {
    pub counts: Vec<u64>,
    pub n: u64,
}

impl TypeVector {
    pub fn to_distribution(&self) -> Result<ClassicalDistribution> {
        ClassicalDistribution::from_counts(&self.counts)
    }
}

pub fn empirical_measure(s: &SampleSequence) -> TypeVector {
    let mut counts = vec![0u64; s.alphabet_size];
    for &x in &s.outcomes {
        counts[x] += 1;
    }
    TypeVector {
        counts,
        n: s.outcomes.len() as u64,
    }
}

/// Inverse-CDF draw of one outcome.
pub(crate) fn draw<R: Rng>(cdf: &[f64], last: usize, rng: &mut R) -> usize {
    let u: f64 = rng.random();
    cdf.iter().position(|&c| u < c).unwrap_or(last)
}

pub(crate) fn cdf(p: &ClassicalDistribution) -> (Vec<f64>, usize) {
    let mut acc = 0.0;
    let cdf = p
        .probs()
        .iter()
        .map(|&x| {
            acc += x;
            acc
        })
        .collect();
    let last = *p.support().last().expect("distribution has support");
    (cdf, last)
}

/// `n` draws from `p` using the supplied stream.
pub fn sample_iid_with<R: Rng>(p: &ClassicalDistribution, n: usize, rng: &mut R) -> Vec<usize> {
    let (cdf, last) = cdf(p);
    (0..n).map(|_| draw(&cdf, last, rng)).collect()
}

/// `n` i.i.d. draws from `p`, deterministic in `seed`.
pub fn sample_iid(p: &ClassicalDistribution, n: usize, seed: u64) -> Result<SampleSequence> {
    if n == 0 {
        return Err(invalid("sample size must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(SampleSequence {
        outcomes: sample_iid_with(p, n, &mut rng),
        alphabet_size: p.len(),
        seed,
    })
}
