//! Acceptance suite: one line per criterion with the measured statistic,
//! its tolerance and the wall-clock time.
//!
//! Runs as a plain binary so the report is always printed. The process
//! fails if a criterion fails that is not listed in `KNOWN_FAILURES`.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::Rng;

use qstatlab::divergence::{
    classical_alpha_div, classical_f_t, hot_report, kl, quantum_alpha_div, quantum_f_t,
    quantum_relative_entropy, Difference,
};
use qstatlab::exec::task_rng;
use qstatlab::harness::{parse_config, run_experiment_with, write_report, Format};
use qstatlab::largedev::{
    bayes_error_exact, beta_n_eps, exact_error_curve, rate_fit, sample_iid_with, sanov_q_n_exact,
    sanov_rate, Relation, SampleSequence, SanovEvent,
};
use qstatlab::matcore::random::{random_commuting_pair, random_povm, random_unitary};
use qstatlab::matcore::{
    born_distribution, pvm_from_observable, random_density, ClassicalDistribution, DensityMatrix,
    HermitianMatrix,
};
use qstatlab::modelsel::{
    aic, alpha_predictive, escort_posterior, escort_predictive, induce_model, mle, posterior_mean,
    risk_alpha, select_model, waic, InducedModel, ParamGrid, PredictiveDistribution, QuantumModel,
};
use qstatlab::Execution;

/// Criteria that cannot hold as stated; each still prints its measured FAIL line.
const KNOWN_FAILURES: &[u32] = &[4];

struct Line {
    id: u32,
    title: &'static str,
    passed: bool,
    detail: String,
    elapsed: Duration,
}

fn d(v: &[f64]) -> ClassicalDistribution {
    ClassicalDistribution::new(v.to_vec()).unwrap()
}

fn gap(x: Difference) -> f64 {
    match x {
        Difference::Finite(v) => v,
        Difference::PosInfinity => f64::INFINITY,
        Difference::NegInfinity => f64::NEG_INFINITY,
        Difference::NotComparable => f64::NAN,
    }
}

fn seed(label: &str, i: usize) -> u64 {
    task_rng(20_240_601, label, i as u64).random()
}

fn dim_of(i: usize) -> usize {
    2 + i % 7
}

const ALPHAS: [f64; 5] = [-1.0, -0.5, 0.0, 0.5, 1.0];

fn criterion_1() -> (bool, String) {
    let mut worst = 0.0f64;
    for i in 0..100 {
        let (rho, sigma, m) = random_commuting_pair(dim_of(i), seed("c1", i)).unwrap();
        let q = quantum_relative_entropy(&rho, &sigma).unwrap();
        let c = kl(&born_distribution(&rho, &m).unwrap(), &born_distribution(&sigma, &m).unwrap()).unwrap();
        worst = worst.max(gap(q.minus(c)).abs());
    }
    (worst <= 1e-9, format!("max |S − D| = {worst:.3e} (tol 1e-9), 100 pairs, dims 2–8"))
}

fn criterion_2() -> (bool, String) {
    let mut comm = 0.0f64;
    for i in 0..100 {
        let (rho, sigma, m) = random_commuting_pair(dim_of(i), seed("c2-comm", i)).unwrap();
        for a in ALPHAS {
            comm = comm.max(gap(hot_report(&rho, &sigma, &m, a).unwrap().gap).abs());
        }
    }
    let mut mono = f64::INFINITY;
    for i in 0..200 {
        let dim = dim_of(i);
        let rho = random_density(dim, dim, seed("c2-rho", i)).unwrap();
        let sigma = random_density(dim, dim, seed("c2-sigma", i)).unwrap();
        let m = random_povm(dim, 2 + i % 4, seed("c2-povm", i)).unwrap();
        for a in ALPHAS {
            mono = mono.min(gap(hot_report(&rho, &sigma, &m, a).unwrap().gap));
        }
    }
    (
        comm <= 1e-9 && mono >= -1e-9,
        format!("commuting max |gap| = {comm:.3e} (tol 1e-9); POVM min gap = {mono:.3e} (≥ −1e-9), 200 triples"),
    )
}

fn criterion_3() -> (bool, String) {
    let mut drift = 0.0f64;
    for i in 0..100 {
        let dim = dim_of(i);
        let rho = random_density(dim, dim, seed("c3-rho", i)).unwrap();
        let sigma = random_density(dim, dim, seed("c3-sigma", i)).unwrap();
        let u = random_unitary(dim, seed("c3-u", i));
        let (ru, su) = (rho.conjugate_by(&u).unwrap(), sigma.conjugate_by(&u).unwrap());
        let s0 = quantum_relative_entropy(&rho, &sigma).unwrap();
        let s1 = quantum_relative_entropy(&ru, &su).unwrap();
        drift = drift.max(gap(s1.minus(s0)).abs());
        for a in [-0.5, 0.0, 0.5] {
            let a0 = quantum_alpha_div(&rho, &sigma, a).unwrap();
            let a1 = quantum_alpha_div(&ru, &su, a).unwrap();
            drift = drift.max(gap(a1.minus(a0)).abs());
        }
    }
    (drift <= 1e-9, format!("max drift = {drift:.3e} (tol 1e-9), 100 (ρ, σ, U)"))
}

fn criterion_4() -> (bool, String) {
    let p = d(&[0.5, 0.5]);
    let q = d(&[0.75, 0.25]);
    let s = 0.5 * (0.5f64 / 0.75).ln() + 0.5 * (0.5f64 / 0.25).ln();
    let mut rates = Vec::new();
    let mut ok = true;
    for eps in [0.01, 0.05, 0.2] {
        let b = beta_n_eps(&p, &q, 5000, eps).unwrap();
        let rate = -b.log_beta / 5000.0;
        ok &= (rate - s).abs() <= 0.01;
        rates.push(rate);
    }
    let spread = rates.iter().cloned().fold(f64::MIN, f64::max) - rates.iter().cloned().fold(f64::MAX, f64::min);
    ok &= spread <= 0.01;
    (
        ok,
        format!(
            "−(1/n) ln β_n at n = 5000: ε=0.01 → {:.6}, ε=0.05 → {:.6}, ε=0.2 → {:.6}; target {s:.6} ± 0.01; ε-spread {spread:.4} (tol 0.01)",
            rates[0], rates[1], rates[2]
        ),
    )
}

fn criterion_5() -> (bool, String) {
    let p = d(&[0.5, 0.5]);
    let q = d(&[0.75, 0.25]);
    let prob = |dist: &ClassicalDistribution, s: usize| -> f64 {
        (0..3).map(|b| dist.prob((s >> (2 - b)) & 1)).product()
    };
    let curve = exact_error_curve(&p, &q, 3).unwrap();
    let mut violations = 0;
    let mut levels = 0;
    for pt in &curve {
        let (a_np, b_np) = (pt.errors.alpha_n(), pt.errors.beta_n());
        // independent recomputation of the NP errors from the 8 sequences
        let llr = |s: usize| -> f64 {
            (0..3).map(|b| {
                let x = (s >> (2 - b)) & 1;
                -(p.prob(x) / q.prob(x)).ln()
            }).sum::<f64>() / 3.0
        };
        let a_direct: f64 = (0..8).filter(|&s| llr(s) > pt.eta + 1e-12).map(|s| prob(&p, s)).sum();
        let b_direct: f64 = (0..8).filter(|&s| llr(s) <= pt.eta + 1e-12).map(|s| prob(&q, s)).sum();
        if (a_direct - a_np).abs() > 1e-12 || (b_direct - b_np).abs() > 1e-12 {
            violations += 1;
        }
        levels += 1;
        for test in 0u32..256 {
            let reject = |s: usize| test >> s & 1 == 1;
            let a: f64 = (0..8).filter(|&s| reject(s)).map(|s| prob(&p, s)).sum();
            let b: f64 = (0..8).filter(|&s| !reject(s)).map(|s| prob(&q, s)).sum();
            if a <= a_np + 1e-12 && b < b_np - 1e-12 {
                violations += 1;
            }
        }
    }
    (violations == 0, format!("{levels} NP levels × 256 deterministic tests: {violations} counterexamples"))
}

fn criterion_6() -> (bool, String) {
    let p = d(&[0.5, 0.3, 0.2]);
    let event = SanovEvent::coordinate(0, 3, Relation::Ge, 0.7).unwrap();
    let rate = sanov_rate(&p, &event).unwrap().value();
    // I-projection onto ν_0 ≥ 0.7: the remaining mass keeps the proportions of p
    let nu = [0.7, 0.3 * 0.6, 0.3 * 0.4];
    let oracle_rate: f64 = nu.iter().zip(p.probs()).map(|(a, b)| a * (a / b).ln()).sum();
    let mut ok = (rate - oracle_rate).abs() < 1e-8;
    let mut parts = vec![format!("rate {rate:.6} (closed form {oracle_rate:.6})")];
    for n in [30usize, 60, 90] {
        let log_q = sanov_q_n_exact(&p, n, &event).unwrap();
        // naive double loop over (c0, c1) with log-gamma binomials
        let lf = |k: usize| statrs::function::gamma::ln_gamma(k as f64 + 1.0);
        let mut acc = 0.0f64;
        for c0 in 0..=n {
            if (c0 as f64) < 0.7 * n as f64 - 1e-9 {
                continue;
            }
            for c1 in 0..=(n - c0) {
                let c2 = n - c0 - c1;
                let l = lf(n) - lf(c0) - lf(c1) - lf(c2)
                    + c0 as f64 * 0.5f64.ln()
                    + c1 as f64 * 0.3f64.ln()
                    + c2 as f64 * 0.2f64.ln();
                acc += l.exp();
            }
        }
        ok &= (log_q - acc.ln()).abs() < 1e-10;
        let dev = (log_q / n as f64 + rate).abs();
        let bound = 9.0 * ((n + 1) as f64).ln() / n as f64;
        ok &= dev <= bound;
        parts.push(format!("n={n}: |dev| {dev:.4} ≤ {bound:.4}"));
    }
    (ok, parts.join("; "))
}

fn criterion_7() -> (bool, String) {
    let p = d(&[0.5, 0.5]);
    let q = d(&[0.75, 0.25]);
    let oracle = (0..=100_000)
        .map(|i| {
            let t = i as f64 / 100_000.0;
            (0.5f64.powf(1.0 - t) * 0.75f64.powf(t) + 0.5f64.powf(1.0 - t) * 0.25f64.powf(t)).ln()
        })
        .fold(f64::INFINITY, f64::min);
    let target = -oracle;
    let ns = [1000usize, 2000, 3000, 4000, 5000];
    let mut fits = Vec::new();
    for (a, b) in [(0.5, 0.5), (0.9, 0.1)] {
        let logs: Vec<f64> = ns.iter().map(|&n| bayes_error_exact(&p, &q, a, b, n).unwrap()).collect();
        fits.push(rate_fit(&ns, &logs).unwrap());
    }
    let rel: Vec<f64> = fits.iter().map(|f| (f - target).abs() / target).collect();
    let spread = (fits[0] - fits[1]).abs() / target;
    (
        rel.iter().all(|&r| r <= 0.05) && spread <= 0.05,
        format!(
            "fitted {:.6} / {:.6} vs {target:.6}: rel err {:.4} / {:.4}, prior spread {spread:.2e} (tol 0.05)",
            fits[0], fits[1], rel[0], rel[1]
        ),
    )
}

fn criterion_8() -> (bool, String) {
    let ts: Vec<f64> = (0..21).map(|i| i as f64 / 20.0).collect();
    let mut slack = f64::INFINITY;
    for i in 0..200 {
        let dim = dim_of(i);
        let rho = random_density(dim, dim, seed("c8-rho", i)).unwrap();
        let sigma = random_density(dim, dim, seed("c8-sigma", i)).unwrap();
        let m = random_povm(dim, 2 + i % 4, seed("c8-povm", i)).unwrap();
        let (pr, ps) = (born_distribution(&rho, &m).unwrap(), born_distribution(&sigma, &m).unwrap());
        for &t in &ts {
            slack = slack.min(classical_f_t(&pr, &ps, t).unwrap() - quantum_f_t(&rho, &sigma, t).unwrap());
        }
    }
    let mut eq = 0.0f64;
    for i in 0..100 {
        let (rho, sigma, m) = random_commuting_pair(dim_of(i), seed("c8-comm", i)).unwrap();
        let (pr, ps) = (born_distribution(&rho, &m).unwrap(), born_distribution(&sigma, &m).unwrap());
        for &t in &ts {
            eq = eq.max((classical_f_t(&pr, &ps, t).unwrap() - quantum_f_t(&rho, &sigma, t).unwrap()).abs());
        }
    }
    (
        slack >= -1e-9 && eq <= 1e-9,
        format!("min(F_t^meas − F_t^q) = {slack:.3e} (≥ −1e-9, 200 triples × 21 t); commuting max |diff| = {eq:.3e}"),
    )
}

fn binary_model(first: f64, last: f64, count: usize) -> InducedModel {
    let z = pvm_from_observable(&HermitianMatrix::pauli_z(), 1e-12).unwrap();
    let qm = QuantumModel::diagonal_qubit(ParamGrid::regular_1d(first, last, count).unwrap(), 1).unwrap();
    induce_model(&qm, &z).unwrap()
}

fn criterion_9() -> (bool, String) {
    let im = binary_model(0.1, 0.9, 9);
    let prior = im.grid().uniform_density();
    let n = 3;
    let mut worst = f64::INFINITY;
    for alpha in [-1.0, 0.0, 0.5, 1.0] {
        let opt = risk_alpha(&im, &prior, |x: &SampleSequence| alpha_predictive(&im, &prior, alpha, x), alpha, n).unwrap();
        let mut competitors = vec![
            risk_alpha(&im, &prior, |x: &SampleSequence| Ok(PredictiveDistribution::mixture(im.dist(mle(&im, x)?).clone())), alpha, n).unwrap(),
            risk_alpha(&im, &prior, |x: &SampleSequence| {
                let t = posterior_mean(&im, &escort_posterior(&im, &prior, 1.0, x)?)[0];
                Ok(PredictiveDistribution::mixture(ClassicalDistribution::new(vec![t, 1.0 - t])?))
            }, alpha, n).unwrap(),
            risk_alpha(&im, &prior, |x: &SampleSequence| escort_predictive(&im, &prior, 1.0, x), alpha, n).unwrap(),
        ];
        for j in 0..50 {
            competitors.push(
                risk_alpha(&im, &prior, |x: &SampleSequence| {
                    let base = alpha_predictive(&im, &prior, alpha, x)?;
                    let idx = x.outcomes.iter().fold(0u64, |a, &o| 2 * a + o as u64);
                    let mut rng = task_rng(99, &format!("c9-{alpha}-{j}"), idx);
                    let raw: Vec<f64> = base.probs.probs().iter().map(|p| (p + 0.01 * (2.0 * rng.random::<f64>() - 1.0)).max(1e-12)).collect();
                    let s: f64 = raw.iter().sum();
                    Ok(PredictiveDistribution::mixture(ClassicalDistribution::new(raw.iter().map(|r| r / s).collect())?))
                }, alpha, n).unwrap(),
            );
        }
        // independent check of the optimal risk: nested loops over θ and the 8 sequences
        let mut naive = 0.0;
        for s in 0..8usize {
            let xs: Vec<usize> = (0..3).map(|b| (s >> (2 - b)) & 1).collect();
            let data = SampleSequence::new(xs.clone(), 2, 0).unwrap();
            let pred = alpha_predictive(&im, &prior, alpha, &data).unwrap();
            for (t, pt) in im.grid().points().iter().enumerate() {
                let th = pt[0];
                let lik: f64 = xs.iter().map(|&x| if x == 0 { th } else { 1.0 - th }).product();
                let div = classical_alpha_div(im.dist(t), &pred.probs, alpha).unwrap().value();
                naive += div * lik * prior[t] * im.grid().weights()[t];
            }
        }
        if (naive - opt).abs() > 1e-12 {
            worst = f64::NEG_INFINITY;
        }
        for c in competitors {
            worst = worst.min(c - opt);
        }
    }
    (worst >= -1e-12, format!("min (competitor − α-predictive) risk = {worst:.3e} (≥ −1e-12), 4 α × 53 rules"))
}

fn criterion_10() -> (bool, String) {
    let q = d(&[0.3, 0.7]);
    let a = binary_model(0.1, 0.9, 9);
    let z = pvm_from_observable(&HermitianMatrix::pauli_z(), 1e-12).unwrap();
    let b = induce_model(
        &QuantumModel::new(ParamGrid::regular_1d(0.5, 0.5, 1).unwrap(), vec![DensityMatrix::maximally_mixed(2)], 0).unwrap(),
        &z,
    )
    .unwrap();
    let (pa, pb) = (a.grid().uniform_density(), b.grid().uniform_density());
    let draw = |label: &str, i: usize, n: usize| {
        let mut rng = task_rng(5, label, i as u64);
        SampleSequence::new(sample_iid_with(&q, n, &mut rng), 2, 5).unwrap()
    };
    let picks = Execution::default().map_indexed(200, |i| {
        let x = draw("c10-select", i, 500);
        let ai = select_model(&[aic(&a, &x).unwrap(), aic(&b, &x).unwrap()]).unwrap();
        let wi = select_model(&[waic(&a, &pa, 1.0, &x).unwrap(), waic(&b, &pb, 1.0, &x).unwrap()]).unwrap();
        ((ai == 0) as u32, (wi == 0) as u32)
    });
    let aic_rate = picks.iter().map(|p| p.0).sum::<u32>() as f64 / 200.0;
    let waic_rate = picks.iter().map(|p| p.1).sum::<u32>() as f64 / 200.0;

    let pairs = Execution::default().map_indexed(2000, |i| {
        let x = draw("c10-waic", i, 200);
        let w = waic(&a, &pa, 1.0, &x).unwrap();
        let pred = escort_predictive(&a, &pa, 1.0, &x).unwrap();
        let g = -(0.3 * pred.probs.prob(0).ln() + 0.7 * pred.probs.prob(1).ln());
        (w, g)
    });
    let stats = |v: Vec<f64>| {
        let n = v.len() as f64;
        let m = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
        (m, (var / n).sqrt())
    };
    let (mw, sw) = stats(pairs.iter().map(|p| p.0).collect());
    let (mg, sg) = stats(pairs.iter().map(|p| p.1).collect());
    let combined = (sw * sw + sg * sg).sqrt();
    let diff = (mw - mg).abs();
    (
        aic_rate >= 0.95 && waic_rate >= 0.95 && diff <= 3.0 * combined,
        format!(
            "(a) AIC {aic_rate:.3}, WAIC {waic_rate:.3} (≥ 0.95); (b) |mean WAIC − mean G| = {diff:.2e} ≤ 3·{combined:.2e}"
        ),
    )
}

fn criterion_11() -> (bool, String) {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let mut mismatches = Vec::new();
    for f in &files {
        let cfg = parse_config(&std::fs::read(f).unwrap()).unwrap();
        let r1 = run_experiment_with(&cfg, Execution::Parallel).unwrap();
        let r2 = run_experiment_with(&cfg, Execution::Parallel).unwrap();
        let r3 = run_experiment_with(&cfg, Execution::Sequential).unwrap();
        let bytes = |r: &qstatlab::harness::ExperimentReport| {
            let mut b = serde_json::to_vec(&r.payload()).unwrap();
            b.extend(write_report(r, Format::Csv));
            b
        };
        let b1 = bytes(&r1);
        if b1 != bytes(&r2) || b1 != bytes(&r3) {
            mismatches.push(f.file_name().unwrap().to_string_lossy().into_owned());
        }
    }
    (
        mismatches.is_empty() && !files.is_empty(),
        format!("{} shipped configs run twice (and sequentially): {} mismatches {:?}", files.len(), mismatches.len(), mismatches),
    )
}

fn main() {
    type Criterion = (u32, &'static str, fn() -> (bool, String), Option<Duration>);
    let criteria: [Criterion; 11] = [
        (1, "HOT equality", criterion_1, Some(Duration::from_secs(5))),
        (2, "α-HOT and monotonicity", criterion_2, Some(Duration::from_secs(10))),
        (3, "unitary invariance", criterion_3, None),
        (4, "Stein exponent", criterion_4, Some(Duration::from_secs(30))),
        (5, "Neyman-Pearson optimality", criterion_5, Some(Duration::from_secs(1))),
        (6, "Sanov sandwich", criterion_6, Some(Duration::from_secs(5))),
        (7, "Chernoff exponent", criterion_7, Some(Duration::from_secs(60))),
        (8, "measured vs quantum overlap", criterion_8, None),
        (9, "α-predictive risk optimality", criterion_9, Some(Duration::from_secs(10))),
        (10, "information criteria", criterion_10, Some(Duration::from_secs(120))),
        (11, "harness determinism", criterion_11, None),
    ];
    let mut lines = Vec::new();
    for (id, title, f, limit) in criteria {
        let start = Instant::now();
        let (mut passed, mut detail) = f();
        let elapsed = start.elapsed();
        if let Some(limit) = limit {
            if elapsed > limit {
                passed = false;
                detail.push_str(&format!("; runtime over {limit:?}"));
            }
        }
        let line = Line { id, title, passed, detail, elapsed };
        println!(
            "criterion {:>2} [{}] {}: {} ({:.2?})",
            line.id,
            if line.passed { "PASS" } else { "FAIL" },
            line.title,
            line.detail,
            line.elapsed
        );
        lines.push(line);
    }
    let passed = lines.iter().filter(|l| l.passed).count();
    println!("acceptance: {passed}/{} criteria pass", lines.len());
    let unexpected: Vec<u32> = lines
        .iter()
        .filter(|l| !l.passed && !KNOWN_FAILURES.contains(&l.id))
        .map(|l| l.id)
        .collect();
    for l in lines.iter().filter(|l| !l.passed && KNOWN_FAILURES.contains(&l.id)) {
        println!("criterion {} fails as analysed in the README (finite-n correction)", l.id);
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
