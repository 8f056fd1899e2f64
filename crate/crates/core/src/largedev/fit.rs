use serde::{Deserialize, Serialize};

use crate::error::{check_dims, invalid, Result};

/// Which points enter the rate fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitMode {
    /// Every supplied `n`.
    #[default]
    All,
    /// The three largest `n` only.
    Asymptotic,
}

/// Negated least-squares slope of `log_values` against `n`.
pub fn rate_fit(n_list: &[usize], log_values: &[f64]) -> Result<f64> {
    check_dims(n_list.len(), log_values.len())?;
    if n_list.len() < 2 {
        return Err(invalid("rate fit needs at least two points"));
    }
    let m = n_list.len() as f64;
    let xbar = n_list.iter().map(|&n| n as f64).sum::<f64>() / m;
    let ybar = log_values.iter().sum::<f64>() / m;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (&n, &y) in n_list.iter().zip(log_values) {
        let dx = n as f64 - xbar;
        sxy += dx * (y - ybar);
        sxx += dx * dx;
    }
    if sxx == 0.0 {
        return Err(invalid("rate fit needs at least two distinct n"));
    }
    Ok(-sxy / sxx)
}

/// [`rate_fit`] restricted according to `mode`.
pub fn rate_fit_mode(n_list: &[usize], log_values: &[f64], mode: FitMode) -> Result<f64> {
    check_dims(n_list.len(), log_values.len())?;
    match mode {
        FitMode::All => rate_fit(n_list, log_values),
        FitMode::Asymptotic => {
            let mut pairs: Vec<(usize, f64)> =
                n_list.iter().copied().zip(log_values.iter().copied()).collect();
            pairs.sort_by_key(|&(n, _)| n);
            let tail = &pairs[pairs.len().saturating_sub(3)..];
            let (ns, ys): (Vec<usize>, Vec<f64>) = tail.iter().copied().unzip();
            rate_fit(&ns, &ys)
        }
    }
}
