use super::types::{guard_types, log_type_probability, map_type_classes, LogFactorials};
use crate::error::{check_dims, invalid, Result};
use crate::exec::Execution;
use crate::matcore::ClassicalDistribution;

fn check_priors(pi1: f64, pi2: f64) -> Result<()> {
    if !(pi1 > 0.0 && pi2 > 0.0) || (pi1 + pi2 - 1.0).abs() > 1e-12 {
        return Err(invalid(format!(
            "priors must be positive and sum to 1, got ({pi1}, {pi2})"
        )));
    }
    Ok(())
}

/// Minimal mixed error `ln min_T [π1 α_n(T) + π2 β_n(T)]`, attained by the
/// MAP rule on each type class.
pub fn bayes_error_exact(
    p: &ClassicalDistribution,
    q: &ClassicalDistribution,
    pi1: f64,
    pi2: f64,
    n: usize,
) -> Result<f64> {
    bayes_error_exact_with(p, q, pi1, pi2, n, Execution::default())
}

pub fn bayes_error_exact_with(
    p: &ClassicalDistribution,
    q: &ClassicalDistribution,
    pi1: f64,
    pi2: f64,
    n: usize,
    exec: Execution,
) -> Result<f64> {
    check_dims(p.len(), q.len())?;
    check_priors(pi1, pi2)?;
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    guard_types(n, p.len(), "Bayes error")?;
    let lf = LogFactorials::new(n);
    let (l1, l2) = (pi1.ln(), pi2.ln());
    let terms = map_type_classes(n, p.len(), exec, |c| {
        let lm = lf.log_multinomial(c);
        let a = l1 + log_type_probability(c, p);
        let b = l2 + log_type_probability(c, q);
        lm + a.min(b)
    });
    Ok(super::types::log_sum_exp(&terms))
}
