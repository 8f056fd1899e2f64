use approx::assert_abs_diff_eq;
use rand::Rng;

use qstatlab::divergence::classical_alpha_div;
use qstatlab::exec::task_rng;
use qstatlab::largedev::SampleSequence;
use qstatlab::matcore::{pvm_from_observable, ClassicalDistribution, HermitianMatrix};
use qstatlab::modelsel::{
    aic, alpha_predictive, escort_posterior, escort_predictive, induce_model, log_likelihood, mle,
    posterior_masses, risk_alpha, risk_alpha_with, sequence_from_index, validate_predictive_measurement,
    InducedModel, ParamGrid, PredictiveDistribution, QuantumModel,
};
use qstatlab::{Error, Execution};

fn binary(count: usize) -> InducedModel {
    binary_on(0.1, 0.9, count)
}

fn binary_on(first: f64, last: f64, count: usize) -> InducedModel {
    let z = pvm_from_observable(&HermitianMatrix::pauli_z(), 1e-12).unwrap();
    let grid = ParamGrid::regular_1d(first, last, count).unwrap();
    induce_model(&QuantumModel::diagonal_qubit(grid, 1).unwrap(), &z).unwrap()
}

fn random_config(i: u64) -> (InducedModel, Vec<f64>, SampleSequence) {
    let mut rng = task_rng(17, "toy", i);
    let k = rng.random_range(2..5);
    let points = rng.random_range(1..7);
    let dists: Vec<ClassicalDistribution> = (0..points)
        .map(|_| {
            let raw: Vec<f64> = (0..k).map(|_| 0.05 + rng.random::<f64>()).collect();
            let s: f64 = raw.iter().sum();
            ClassicalDistribution::new(raw.iter().map(|x| x / s).collect()).unwrap()
        })
        .collect();
    let last = if points == 1 { 0.0 } else { 1.0 };
    let grid = ParamGrid::regular_1d(0.0, last, points).unwrap();
    let raw: Vec<f64> = (0..points).map(|_| 0.1 + rng.random::<f64>()).collect();
    let z: f64 = raw.iter().zip(grid.weights()).map(|(a, w)| a * w).sum();
    let prior = raw.iter().map(|a| a / z).collect();
    let im = InducedModel::from_distributions(grid, dists, 1).unwrap();
    let n = rng.random_range(0..8);
    let data = SampleSequence::new((0..n).map(|_| rng.random_range(0..k)).collect(), k, i).unwrap();
    (im, prior, data)
}

#[test]
fn alpha_minus_one_is_the_bayes_mixture() {
    for i in 0..50 {
        let (im, prior, data) = random_config(i);
        let a = alpha_predictive(&im, &prior, -1.0, &data).unwrap();
        let b = escort_predictive(&im, &prior, 1.0, &data).unwrap();
        for (x, y) in a.probs.probs().iter().zip(b.probs.probs()) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(a.normalizer, 1.0, epsilon = 1e-12);
    }
}

#[test]
fn posterior_normalizes_and_recovers_prior() {
    for i in 0..50 {
        let (im, prior, data) = random_config(i);
        for beta in [0.5, 1.0, 2.0] {
            let post = escort_posterior(&im, &prior, beta, &data).unwrap();
            assert_abs_diff_eq!(posterior_masses(&im, &post).iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        }
        let empty = SampleSequence::new(vec![], im.alphabet_size(), 0).unwrap();
        let post = escort_posterior(&im, &prior, 1.0, &empty).unwrap();
        for (a, b) in post.weights.iter().zip(&prior) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }
}

#[test]
fn aic_decomposition() {
    for i in 0..50 {
        let (im, _, data) = random_config(i);
        if data.is_empty() {
            continue;
        }
        let n = data.len() as f64;
        let theta = mle(&im, &data).unwrap();
        let expected = -log_likelihood(&im, theta, &data).unwrap() / n + im.model_dim() as f64 / n;
        assert_abs_diff_eq!(aic(&im, &data).unwrap(), expected, epsilon = 1e-12);
    }
}

fn naive_risk<F: Fn(&SampleSequence) -> PredictiveDistribution>(
    im: &InducedModel,
    prior: &[f64],
    rule: F,
    alpha: f64,
    n: usize,
) -> f64 {
    let k = im.alphabet_size();
    let mut total = 0.0;
    for t in 0..im.len() {
        let p = im.dist(t);
        let mut inner = 0.0;
        for s in 0..k.pow(n as u32) {
            let mut xs = vec![0; n];
            let mut rem = s;
            for slot in xs.iter_mut().rev() {
                *slot = rem % k;
                rem /= k;
            }
            let lik: f64 = xs.iter().map(|&x| p.prob(x)).product();
            let pred = rule(&SampleSequence::new(xs, k, 0).unwrap());
            inner += lik * classical_alpha_div(p, &pred.probs, alpha).unwrap().value();
        }
        total += inner * prior[t] * im.grid().weights()[t];
    }
    total
}

#[test]
fn risk_matches_nested_loops() {
    let im = binary(9);
    let prior = im.grid().uniform_density();
    for alpha in [-1.0, 0.0, 0.5, 1.0] {
        for n in 0..=4 {
            let rule = |x: &SampleSequence| alpha_predictive(&im, &prior, alpha, x);
            let got = risk_alpha(&im, &prior, rule, alpha, n).unwrap();
            let want = naive_risk(&im, &prior, |x| rule(x).unwrap(), alpha, n);
            assert_abs_diff_eq!(got, want, epsilon = 1e-12);
        }
    }
}

#[test]
fn alpha_predictive_beats_other_rules() {
    let im = binary(9);
    let prior = im.grid().uniform_density();
    for alpha in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        let best = risk_alpha(&im, &prior, |x: &SampleSequence| alpha_predictive(&im, &prior, alpha, x), alpha, 4).unwrap();
        for beta in [0.5, 1.0, 2.0] {
            let r = risk_alpha(&im, &prior, |x: &SampleSequence| escort_predictive(&im, &prior, beta, x), alpha, 4).unwrap();
            assert!(r - best >= -1e-12, "α {alpha} β {beta}: {r} < {best}");
        }
        for other in [-1.0, 0.0, 1.0] {
            let r = risk_alpha(&im, &prior, |x: &SampleSequence| alpha_predictive(&im, &prior, other, x), alpha, 4).unwrap();
            assert!(r - best >= -1e-12);
        }
    }
}

#[test]
fn risk_is_zero_for_matching_point_model() {
    let im = binary_on(0.3, 0.3, 1);
    let prior = im.grid().uniform_density();
    let p = im.dist(0).clone();
    let r = risk_alpha(&im, &prior, |_: &SampleSequence| Ok(PredictiveDistribution::mixture(p.clone())), 0.3, 5).unwrap();
    assert_abs_diff_eq!(r, 0.0, epsilon = 1e-15);
}

#[test]
fn risk_guard_and_execution_agreement() {
    let im = binary(9);
    let prior = im.grid().uniform_density();
    let rule = |x: &SampleSequence| alpha_predictive(&im, &prior, 0.5, x);
    assert!(matches!(risk_alpha(&im, &prior, rule, 0.5, 20), Err(Error::Capacity { .. })));
    let a = risk_alpha_with(&im, &prior, rule, 0.5, 10, Execution::Sequential).unwrap();
    let b = risk_alpha_with(&im, &prior, rule, 0.5, 10, Execution::Parallel).unwrap();
    assert_eq!(a.to_bits(), b.to_bits());
}

#[test]
fn sequence_indexing_is_big_endian() {
    assert_eq!(sequence_from_index(5, 3, 2), vec![1, 0, 1]);
    assert_eq!(sequence_from_index(0, 0, 3), Vec::<usize>::new());
    assert_eq!(sequence_from_index(7, 2, 3), vec![2, 1]);
}

#[test]
fn predictive_measurement_flags_support_changes() {
    let grid = ParamGrid::regular_1d(0.0, 1.0, 2).unwrap();
    let dists = vec![
        ClassicalDistribution::new(vec![0.5, 0.5]).unwrap(),
        ClassicalDistribution::new(vec![1.0, 0.0]).unwrap(),
    ];
    let bad = InducedModel::from_distributions(grid, dists, 1).unwrap();
    let check = validate_predictive_measurement(&[binary(9), bad]).unwrap();
    assert!(!check.ok);
    assert_eq!(check.violations.len(), 1);
    assert_eq!(check.violations[0].model, 1);
    assert_eq!(check.violations[0].grid_index, 1);
    assert!(validate_predictive_measurement(&[binary(9)]).unwrap().ok);
}
