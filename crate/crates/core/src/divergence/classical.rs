use super::ExtendedReal;
use crate::error::{check_dims, invalid, Result};
use crate::matcore::ClassicalDistribution;

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(invalid(format!("alpha must lie in [-1, 1], got {alpha}")))
    }
}

pub(crate) fn check_t(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(invalid(format!("t must lie in [0, 1], got {t}")))
    }
}

/// `Σ_{k ∈ supp p ∩ supp q} p_k^a q_k^b`.
fn overlap(p: &ClassicalDistribution, q: &ClassicalDistribution, a: f64, b: f64) -> f64 {
    p.support()
        .iter()
        .filter(|&&k| q.in_support(k))
        .map(|&k| p.prob(k).powf(a) * q.prob(k).powf(b))
        .sum()
}

/// Relative entropy `Σ p_k ln(p_k / q_k)` in nats; `+∞` unless `supp p ⊆ supp q`.
pub fn kl(p: &ClassicalDistribution, q: &ClassicalDistribution) -> Result<ExtendedReal> {
    check_dims(p.len(), q.len())?;
    let mut acc = 0.0;
    for &k in p.support() {
        let qk = q.prob(k);
        if qk == 0.0 {
            return Ok(ExtendedReal::Infinity);
        }
        let pk = p.prob(k);
        acc += pk * (pk / qk).ln();
    }
    Ok(ExtendedReal::finite(acc))
}

/// α-divergence `D^{(α)}(p‖q)`.
///
/// For `|α| < 1` this is `4/(1−α²)·(1 − Σ p^{(1−α)/2} q^{(1+α)/2})`. The
/// boundary branches are `α = −1 ↦ D(p‖q)` and `α = +1 ↦ D(q‖p)`.
pub fn classical_alpha_div(
    p: &ClassicalDistribution,
    q: &ClassicalDistribution,
    alpha: f64,
) -> Result<ExtendedReal> {
    check_alpha(alpha)?;
    check_dims(p.len(), q.len())?;
    if alpha == -1.0 {
        return kl(p, q);
    }
    if alpha == 1.0 {
        return kl(q, p);
    }
    let s = overlap(p, q, 0.5 * (1.0 - alpha), 0.5 * (1.0 + alpha));
    Ok(ExtendedReal::finite(4.0 / (1.0 - alpha * alpha) * (1.0 - s)))
}

/// `F_t(p, q) = Σ p_k^{1−t} q_k^t`, summing only over the common support.
pub fn classical_f_t(p: &ClassicalDistribution, q: &ClassicalDistribution, t: f64) -> Result<f64> {
    check_t(t)?;
    check_dims(p.len(), q.len())?;
    Ok(overlap(p, q, 1.0 - t, t))
}

/// `supp p ⊆ supp q`. Distributions over different alphabets are never
/// comparable.
pub fn absolutely_continuous(p: &ClassicalDistribution, q: &ClassicalDistribution) -> bool {
    p.len() == q.len() && p.support().iter().all(|&k| q.in_support(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(v: &[f64]) -> ClassicalDistribution {
        ClassicalDistribution::new(v.to_vec()).unwrap()
    }

    const KL_HALF_THREEQ: f64 = 0.143_841_036_225_890_4; // 0.5·ln(4/3)

    #[test]
    fn kl_examples() {
        let p = d(&[0.5, 0.5]);
        let q = d(&[0.75, 0.25]);
        assert_eq!(kl(&p, &p).unwrap(), ExtendedReal::ZERO);
        // oracle: termwise sum 0.5 ln(0.5/0.75) + 0.5 ln(0.5/0.25)
        let oracle = 0.5 * (0.5f64 / 0.75).ln() + 0.5 * (0.5f64 / 0.25).ln();
        assert!((kl(&p, &q).unwrap().value() - oracle).abs() < 1e-15);
        assert!((oracle - KL_HALF_THREEQ).abs() < 1e-15);
        assert_eq!(kl(&d(&[1.0, 0.0]), &d(&[0.0, 1.0])).unwrap(), ExtendedReal::Infinity);
        assert!(kl(&p, &d(&[1.0])).is_err());
    }

    #[test]
    fn alpha_div_examples() {
        let p = d(&[0.5, 0.5]);
        let q = d(&[0.75, 0.25]);
        for a in [-1.0, -0.3, 0.0, 0.7, 1.0] {
            assert!(classical_alpha_div(&p, &p, a).unwrap().value().abs() < 1e-15);
        }
        let oracle = 4.0 * (1.0 - (0.375f64.sqrt() + 0.125f64.sqrt()));
        let got = classical_alpha_div(&p, &q, 0.0).unwrap().value();
        assert!((got - oracle).abs() < 1e-15);
        assert!((got - 0.136_297).abs() < 1e-6);
        let left = classical_alpha_div(&p, &q, -1.0).unwrap().value();
        assert!((left - KL_HALF_THREEQ).abs() < 1e-15);
        let right = classical_alpha_div(&p, &q, 1.0).unwrap().value();
        assert!((right - kl(&q, &p).unwrap().value()).abs() < 1e-15);
        assert!(classical_alpha_div(&p, &q, 1.5).is_err());
    }

    #[test]
    fn f_t_examples() {
        let p = d(&[0.5, 0.5]);
        let q = d(&[0.75, 0.25]);
        assert!((classical_f_t(&p, &q, 0.0).unwrap() - 1.0).abs() < 1e-15);
        let oracle = 0.375f64.sqrt() + 0.125f64.sqrt();
        assert!((classical_f_t(&p, &q, 0.5).unwrap() - oracle).abs() < 1e-15);
        assert!((oracle - 0.965_926).abs() < 1e-6);
        for t in [0.0, 0.2, 1.0] {
            assert!((classical_f_t(&q, &q, t).unwrap() - 1.0).abs() < 1e-15);
        }
        // t = 0 keeps only the p-mass on supp q
        let partial = classical_f_t(&d(&[0.25, 0.75]), &d(&[1.0, 0.0]), 0.0).unwrap();
        assert!((partial - 0.25).abs() < 1e-15);
        assert!(classical_f_t(&p, &q, -0.1).is_err());
    }

    #[test]
    fn absolute_continuity() {
        assert!(absolutely_continuous(&d(&[1.0, 0.0]), &d(&[0.5, 0.5])));
        assert!(!absolutely_continuous(&d(&[0.5, 0.5]), &d(&[1.0, 0.0])));
        assert!(absolutely_continuous(&d(&[0.5, 0.5]), &d(&[0.5, 0.5])));
    }

    fn dist(k: usize, floor: f64) -> impl Strategy<Value = ClassicalDistribution> {
        proptest::collection::vec(0.0f64..1.0, k).prop_map(move |raw| {
            let total: f64 = raw.iter().sum::<f64>() + 1e-9;
            let free = 1.0 - floor * k as f64;
            ClassicalDistribution::new(
                raw.iter().map(|x| floor + free * (x + 1e-9 / k as f64) / total).collect(),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn nonnegative_and_skew_symmetric(
            (p, q) in (2usize..6).prop_flat_map(|k| (dist(k, 0.0), dist(k, 0.0))),
            alpha in -1.0f64..=1.0,
        ) {
            let a = classical_alpha_div(&p, &q, alpha).unwrap();
            let b = classical_alpha_div(&q, &p, -alpha).unwrap();
            prop_assert!(a.value() >= 0.0);
            if a.is_finite() {
                prop_assert!((a.value() - b.value()).abs() <= 1e-12);
            } else {
                prop_assert!(b.is_infinite());
            }
        }

        #[test]
        fn alpha_continuity_at_the_boundaries(
            (p, q) in (2usize..5).prop_flat_map(|k| (dist(k, 0.05), dist(k, 0.05))),
        ) {
            let near_left = classical_alpha_div(&p, &q, -1.0 + 1e-4).unwrap().value();
            let near_right = classical_alpha_div(&p, &q, 1.0 - 1e-4).unwrap().value();
            prop_assert!((near_left - kl(&p, &q).unwrap().value()).abs() <= 1e-3);
            prop_assert!((near_right - kl(&q, &p).unwrap().value()).abs() <= 1e-3);
        }

        #[test]
        fn log_f_t_is_convex(
            (p, q) in (2usize..6).prop_flat_map(|k| (dist(k, 1e-3), dist(k, 1e-3))),
        ) {
            let g: Vec<f64> = (0..=100)
                .map(|i| classical_f_t(&p, &q, i as f64 / 100.0).unwrap().ln())
                .collect();
            for w in g.windows(3) {
                prop_assert!(w[0] - 2.0 * w[1] + w[2] >= -1e-10);
            }
        }
    }
}
