//! Neyman-Pearson testing between two outcome distributions and the exact
//! error-probability oracle built from type classes.
//!
//! The per-sample statistic is `X = −ln(p(x)/q(x))` and the test accepts
//! `H0 : p` when the normalized sum `S_n ≤ η`.

use serde::Serialize;

use super::fit::{rate_fit_mode, FitMode};
use super::sampling::{draw, cdf, empirical_measure, SampleSequence};
use super::types::{guard_types, log_add_exp, log_type_probability, map_type_classes, LogFactorials};
use crate::divergence::absolutely_continuous;
use crate::error::{check_dims, invalid, Result};
use crate::exec::{task_rng, Execution};
use crate::matcore::ClassicalDistribution;

/// Per-outcome statistic `−ln(p_k/q_k)`; `NaN` marks outcomes outside both supports.
fn llr_weights(p: &ClassicalDistribution, q: &ClassicalDistribution) -> Vec<f64> {
    p.probs()
        .iter()
        .zip(q.probs())
        .map(|(&pk, &qk)| match (pk > 0.0, qk > 0.0) {
            (true, true) => -(pk / qk).ln(),
            (true, false) => f64::NEG_INFINITY,
            (false, true) => f64::INFINITY,
            (false, false) => f64::NAN,
        })
        .collect()
}

/// `(1/n) Σ_k c_k w_k`. Evaluating from counts makes the statistic of a
/// sequence bit-identical to that of its type class.
fn llr_of_counts<C: Copy + Into<f64>>(counts: &[C], weights: &[f64]) -> f64 {
    let n: f64 = counts.iter().map(|&c| c.into()).sum();
    let mut acc = 0.0;
    for (&c, &w) in counts.iter().zip(weights) {
        let c: f64 = c.into();
        if c > 0.0 {
            acc += c * w;
        }
    }
    acc / n
}

/// Normalized log-likelihood ratio `S_n` of a sequence.
///
/// An outcome outside `supp q` yields `−∞`; one outside `supp p` yields `+∞`.
pub fn normalized_llr(
    s: &SampleSequence,
    p: &ClassicalDistribution,
    q: &ClassicalDistribution,
) -> Result<f64> {
    check_dims(p.len(), q.len())?;
    check_dims(s.alphabet_size, p.len())?;
    if s.is_empty() {
        return Err(invalid("empty sequence"));
    }
    let tv = empirical_measure(s);
    let counts: Vec<f64> = tv.counts.iter().map(|&c| c as f64).collect();
    let v = llr_of_counts(&counts, &llr_weights(p, q));
    if v.is_nan() {
        return Err(invalid("sequence has outcomes outside both supports"));
    }
    Ok(v)
}

/// Likelihood-ratio threshold test.
#[derive(Debug, Clone, PartialEq)]
pub struct NPTest {
    p: ClassicalDistribution,
    q: ClassicalDistribution,
    eta: f64,
}

impl NPTest {
    pub fn new(p: ClassicalDistribution, q: ClassicalDistribution, eta: f64) -> Result<Self> {
        check_dims(p.len(), q.len())?;
        if !absolutely_continuous(&p, &q) {
            return Err(invalid("the null distribution must be supported inside the alternative"));
        }
        if eta.is_nan() {
            return Err(invalid("threshold is NaN"));
        }
        Ok(NPTest { p, q, eta })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn null(&self) -> &ClassicalDistribution {
        &self.p
    }

    pub fn alternative(&self) -> &ClassicalDistribution {
        &self.q
    }
}

/// `0` (accept `H0`) iff `S_n ≤ η`, else `1`.
pub fn np_decide(s: &SampleSequence, test: &NPTest) -> Result<u8> {
    let stat = normalized_llr(s, &test.p, &test.q)?;
    Ok(if stat <= test.eta { 0 } else { 1 })
}

/// Type-I / type-II error probabilities, held in the log domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorPair {
    pub log_alpha: f64,
    pub log_beta: f64,
}

impl ErrorPair {
    pub fn alpha_n(&self) -> f64 {
        self.log_alpha.exp()
    }

    pub fn beta_n(&self) -> f64 {
        self.log_beta.exp()
    }
}

/// One step of the exact NP operating curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub eta: f64,
    pub errors: ErrorPair,
}

struct TypeRecord {
    stat: f64,
    log_p: f64,
    log_q: f64,
}

fn llr_levels(
    p: &ClassicalDistribution,
    q: &ClassicalDistribution,
    n: usize,
    exec: Execution,
) -> Result<Vec<(f64, f64, f64)>> {
    check_dims(p.len(), q.len())?;
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    if !absolutely_continuous(p, q) {
        return Err(invalid("the null distribution must be supported inside the alternative"));
    }
    guard_types(n, p.len(), "error curve")?;
    let weights = llr_weights(p, q);
    let lf = LogFactorials::new(n);
    let mut records: Vec<TypeRecord> = map_type_classes(n, p.len(), exec, |c| {
        let lm = lf.log_multinomial(c);
        TypeRecord {
            stat: llr_of_counts(c, &weights),
            log_p: lm + log_type_probability(c, p),
            log_q: lm + log_type_probability(c, q),
        }
    })
    .into_iter()
    .filter(|r| r.log_p > f64::NEG_INFINITY || r.log_q > f64::NEG_INFINITY)
    .collect();
    records.sort_by(|a, b| a.stat.total_cmp(&b.stat));

    // merge statistics equal up to rounding into one level
    let mut levels: Vec<(f64, f64, f64)> = Vec::new();
    for r in records {
        match levels.last_mut() {
            Some((s, lp, lq)) if s.is_finite() && (r.stat - *s).abs() <= 1e-12 * s.abs().max(1.0) => {
                *lp = log_add_exp(*lp, r.log_p);
                *lq = log_add_exp(*lq, r.log_q);
            }
            Some((s, lp, lq)) if *s == r.stat => {
                *lp = log_add_exp(*lp, r.log_p);
                *lq = log_add_exp(*lq, r.log_q);
            }
            _ => levels.push((r.stat, r.log_p, r.log_q)),
        }
    }
    Ok(levels)
}

/// Exact operating curve of the NP test at every distinct statistic level:
/// `α_n(η) = P_p(S_n > η)` and `β_n(η) = P_q(S_n ≤ η)`.
pub fn exact_error_curve(
    p: &ClassicalDistribution,
    q: &ClassicalDistribution,
    n: usize,
) -> Result<Vec<CurvePoint>> {
    exact_error_curve_with(p, q, n, Execution::default())
}

pub fn exact_error_curve_with(
    p: &ClassicalDistribution,
    q: &ClassicalDistribution,
    n: usize,
    exec: Execution,
) -> Result<Vec<CurvePoint>> {
    let levels = llr_levels(p, q, n, exec)?;
    let m = levels.len();
    let mut log_alpha = vec![f64::NEG_INFINITY; m];
    let mut acc = f64::NEG_INFINITY;
    for i in (0..m).rev() {
        log_alpha[i] = acc;
        acc = log_add_exp(acc, levels[i].1);
    }
    let mut acc = f64::NEG_INFINITY;
    Ok(levels
        .iter()
        .zip(log_alpha)
        .map(|(&(eta, _, lq), la)| {
            acc = log_add_exp(acc, lq);
            CurvePoint {
                eta,
                errors: ErrorPair {
                    log_alpha: la,
                    log_beta: acc.min(0.0),
                },
            }
        })
        .collect())
}

/// Optimal type-II error at type-I level strictly below `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaAtLevel {
    pub log_beta: f64,
    pub eta: f64,
    pub achieved_alpha: f64,
}

/// Smallest curve threshold with `α_n(η) < ε` and its exact `β_n`.
pub fn beta_n_eps(
    p: &ClassicalDistribution,
    q: &ClassicalDistribution,
    n: usize,
    eps: f64,
) -> Result<BetaAtLevel> {
    beta_n_eps_with(p, q, n, eps, Execution::default())
}

pub fn beta_n_eps_with(
    p: &ClassicalDistribution,
    q: &ClassicalDistribution,
    n: usize,
    eps: f64,
    exec: Execution,
) -> Result<BetaAtLevel> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(invalid(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    let curve = exact_error_curve_with(p, q, n, exec)?;
    let point = curve
        .iter()
        .find(|pt| pt.errors.alpha_n() < eps)
        .expect("the largest level always has alpha = 0");
    Ok(BetaAtLevel {
        log_beta: point.errors.log_beta,
        eta: point.eta,
        achieved_alpha: point.errors.alpha_n(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteinPoint {
    pub n: usize,
    pub log_beta: f64,
    /// `−(1/n) ln β_n(ε)`.
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteinResult {
    pub per_n: Vec<SteinPoint>,
    pub fitted_rate: f64,
    pub fit_mode: FitMode,
}

/// Exact `−(1/n) ln β_n(ε)` for each `n`, plus the least-squares rate.
pub fn stein_rate(
    p: &ClassicalDistribution,
    q: &ClassicalDistribution,
    eps: f64,
    n_list: &[usize],
    mode: FitMode,
) -> Result<SteinResult> {
    let per_n = n_list
        .iter()
        .map(|&n| {
            let b = beta_n_eps(p, q, n, eps)?;
            Ok(SteinPoint {
                n,
                log_beta: b.log_beta,
                rate: -b.log_beta / n as f64,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let logs: Vec<f64> = per_n.iter().map(|s| s.log_beta).collect();
    let fitted_rate = rate_fit_mode(n_list, &logs, mode)?;
    Ok(SteinResult {
        per_n,
        fitted_rate,
        fit_mode: mode,
    })
}

/// Empirical error rates of an NP test from simulated sequences.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulatedErrors {
    pub trials: usize,
    pub alpha_hat: f64,
    pub beta_hat: f64,
}

/// Simulates `trials` sequences of length `n` under each hypothesis. Trial
/// `i` draws from the stream `(seed, "np-null"/"np-alt", i)`.
pub fn simulate_np_errors(
    test: &NPTest,
    n: usize,
    trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<SimulatedErrors> {
    if n == 0 || trials == 0 {
        return Err(invalid("n and trials must be positive"));
    }
    let weights = llr_weights(&test.p, &test.q);
    let k = test.p.len();
    let run = |dist: &ClassicalDistribution, label: &str| -> usize {
        let (table, last) = cdf(dist);
        exec.map_indexed(trials, |i| {
            let mut rng = task_rng(seed, label, i as u64);
            let mut counts = vec![0.0f64; k];
            for _ in 0..n {
                counts[draw(&table, last, &mut rng)] += 1.0;
            }
            let accept = llr_of_counts(&counts, &weights) <= test.eta;
            accept as usize
        })
        .into_iter()
        .sum()
    };
    let accepted_null = run(&test.p, "np-null");
    let accepted_alt = run(&test.q, "np-alt");
    Ok(SimulatedErrors {
        trials,
        alpha_hat: 1.0 - accepted_null as f64 / trials as f64,
        beta_hat: accepted_alt as f64 / trials as f64,
    })
}
