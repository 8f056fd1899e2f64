//! Method-of-types machinery: type-class enumeration, log-multinomial
//! weights and log-domain accumulation.

use statrs::function::factorial::ln_factorial;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::matcore::ClassicalDistribution;

/// Largest number of type classes an exact sum may enumerate.
pub const TYPE_CLASS_LIMIT: f64 = 1e7;

/// `ln(e^a + e^b)`.
#[inline]
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln Σ e^{x_i}` accumulated in index order (max-shifted).
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    let s: f64 = xs.iter().map(|&x| (x - max).exp()).sum();
    max + s.ln()
}

/// Number of type classes `C(n+K−1, K−1)` (as a float, for guarding).
pub fn type_class_count(n: usize, k: usize) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let ln = ln_factorial((n + k - 1) as u64) - ln_factorial(n as u64) - ln_factorial((k - 1) as u64);
    ln.exp().round()
}

pub(crate) fn guard_types(n: usize, k: usize, what: &str) -> Result<()> {
    let count = type_class_count(n, k);
    if count > TYPE_CLASS_LIMIT {
        return Err(Error::Capacity {
            what: format!("{what} (n = {n}, K = {k})"),
            required: count,
            limit: TYPE_CLASS_LIMIT,
        });
    }
    Ok(())
}

/// Table of `ln k!` for `k ≤ n`.
#[derive(Debug, Clone)]
pub struct LogFactorials(Vec<f64>);

impl LogFactorials {
    pub fn new(n: usize) -> Self {
        LogFactorials((0..=n as u64).map(ln_factorial).collect())
    }

    /// `ln (n! / Π c_k!)`.
    pub fn log_multinomial(&self, counts: &[u32]) -> f64 {
        let n: usize = counts.iter().map(|&c| c as usize).sum();
        self.0[n] - counts.iter().map(|&c| self.0[c as usize]).sum::<f64>()
    }
}

/// `Σ_k c_k ln p_k`, `−∞` if some `c_k > 0` falls outside the support.
pub fn log_type_probability(counts: &[u32], p: &ClassicalDistribution) -> f64 {
    let mut acc = 0.0;
    for (k, &c) in counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let pk = p.prob(k);
        if pk == 0.0 {
            return f64::NEG_INFINITY;
        }
        acc += c as f64 * pk.ln();
    }
    acc
}

fn compositions_into(m: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<u32>) {
    if parts == 1 {
        prefix.push(m);
        out.extend_from_slice(prefix);
        prefix.pop();
        return;
    }
    for c in (0..=m).rev() {
        prefix.push(c);
        compositions_into(m - c, parts - 1, prefix, out);
        prefix.pop();
    }
}

/// Evaluates `f` on every count vector of `n` draws over `k` outcomes.
///
/// Enumeration order is reverse-lexicographic, starting at `(n, 0, …, 0)`;
/// the output preserves it regardless of `exec`.
pub fn map_type_classes<T, F>(n: usize, k: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&[u32]) -> T + Sync + Send,
{
    assert!(k >= 1, "alphabet must be nonempty");
    let n32 = n as u32;
    let chunks = exec.map_indexed(n + 1, |i| {
        let first = n32 - i as u32;
        let mut flat = Vec::new();
        let mut prefix = vec![first];
        if k == 1 {
            if first == n32 {
                flat.push(first);
            }
        } else {
            compositions_into(n32 - first, k - 1, &mut prefix, &mut flat);
        }
        flat.chunks(k).map(&f).collect::<Vec<T>>()
    });
    chunks.into_iter().flatten().collect()
}
