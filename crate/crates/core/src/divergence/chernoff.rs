use serde::Serialize;

use crate::error::{Error, Result};

/// Minimizer and value of `log F_t` over `t ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChernoffResult {
    pub t_star: f64,
    /// `log F_{t*}` (nonpositive; `−∞` when the two measures are disjoint).
    pub exponent: f64,
}

/// Default bracket width for [`chernoff_exponent`].
pub const CHERNOFF_TOL: f64 = 1e-10;

/// Minimizes `log F_t` on `[0, 1]` by golden-section search plus endpoint
/// comparison. `F_t` is log-convex for both the classical and the quantum
/// overlap, so the minimizer is unique up to flat stretches; ties go to the
/// smaller `t`, and an entirely flat function reports `t* = 0.5`.
pub fn chernoff_exponent<F>(f_t: F, tol: f64) -> Result<ChernoffResult>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(tol > 0.0) {
        return Err(crate::error::invalid("tolerance must be positive"));
    }
    let mut interior_zero = false;
    let mut interior_positive = false;
    let mut log_f = |t: f64| -> Result<f64> {
        let v = f_t(t)?;
        if !(v >= 0.0) {
            return Err(Error::Numerical(format!("F_t({t}) = {v}")));
        }
        if t > 0.0 && t < 1.0 {
            if v == 0.0 {
                interior_zero = true;
            } else {
                interior_positive = true;
            }
        }
        Ok(v.ln())
    };

    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (0.0f64, 1.0f64);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = log_f(c)?;
    let mut fd = log_f(d)?;
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = log_f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = log_f(d)?;
        }
    }
    let t_mid = 0.5 * (a + b);
    let candidates = [
        (0.0, log_f(0.0)?),
        (t_mid, log_f(t_mid)?),
        (1.0, log_f(1.0)?),
    ];
    let half = log_f(0.5)?;
    if interior_zero && interior_positive {
        return Err(Error::Numerical(
            "overlap vanishes inside (0, 1) but not everywhere".into(),
        ));
    }

    let flat = candidates
        .iter()
        .all(|&(_, v)| v == half || (v - half).abs() <= 1e-14);
    if flat {
        return Ok(ChernoffResult {
            t_star: 0.5,
            exponent: half,
        });
    }
    let mut best = candidates[0];
    for &cand in &candidates[1..] {
        if cand.1 < best.1 {
            best = cand;
        }
    }
    Ok(ChernoffResult {
        t_star: best.0,
        exponent: best.1,
    })
}
