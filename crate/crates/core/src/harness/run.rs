//! Experiment dispatch. Every experiment is deterministic in its
//! configuration and seed.

use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use serde_json::{json, Value};

use super::config::*;
use super::error::HarnessError;
use super::report::{num, nums, Check, ExperimentReport, Table};
use crate::divergence::{
    chernoff_exponent, classical_f_t, hot_report, kl, quantum_alpha_div,
    quantum_f_t, quantum_relative_entropy, Difference, CHERNOFF_TOL,
};
use crate::error::{invalid, Result};
use crate::exec::{task_rng, Execution};
use crate::largedev::{
    bayes_error_exact_with, beta_n_eps_with, rate_fit, rate_fit_mode, sample_iid_with,
    sanov_q_n_exact_with, sanov_rate, sanov_rate_bounds, SampleSequence, SanovEvent,
};
use crate::matcore::random::{random_commuting_pair, random_povm, random_unitary};
use crate::matcore::{
    born_distribution, pvm_from_observable, random_density, CMatrix, ClassicalDistribution,
    DensityMatrix, HermitianMatrix, Measurement,
};
use crate::modelsel::{
    aic, alpha_predictive, escort_posterior, escort_predictive, induce_model, mle,
    posterior_mean, risk_alpha_with, select_model, validate_predictive_measurement, waic_terms,
    InducedModel, ParamGrid, PredictiveDistribution, QuantumModel,
};

/// Runs an experiment with the default execution strategy.
pub fn run_experiment(cfg: &ExperimentConfig) -> std::result::Result<ExperimentReport, HarnessError> {
    run_experiment_with(cfg, Execution::default())
}

pub fn run_experiment_with(
    cfg: &ExperimentConfig,
    exec: Execution,
) -> std::result::Result<ExperimentReport, HarnessError> {
    let start = Instant::now();
    let out = match &cfg.parameters {
        Parameters::Stein(p) => stein(p, exec),
        Parameters::Sanov(p) => sanov(p, exec),
        Parameters::Chernoff(p) => chernoff(p, exec),
        Parameters::DivergenceProps(p) => divergence_props(p, cfg.seed, exec),
        Parameters::Hot(p) => hot(p),
        Parameters::Modelsel(p) => modelsel(p, cfg.seed, exec),
        Parameters::RiskAlpha(p) => risk(p, cfg.seed, exec),
    }?;
    Ok(ExperimentReport {
        experiment: cfg.experiment().to_string(),
        config_echo: cfg.to_value(),
        results: out.results,
        checks: out.checks,
        table: out.table,
        duration_seconds: start.elapsed().as_secs_f64(),
        version: crate::VERSION.to_string(),
    })
}

struct Outcome {
    results: Value,
    checks: Vec<Check>,
    table: Table,
}

fn dist(v: &[f64]) -> Result<ClassicalDistribution> {
    ClassicalDistribution::new(v.to_vec())
}

fn matrix(spec: &MatrixSpec) -> Result<CMatrix> {
    let d = spec.len();
    let data = spec
        .iter()
        .flatten()
        .map(|[re, im]| Complex64::new(*re, *im))
        .collect();
    CMatrix::from_rows(d, data)
}

fn density(spec: &MatrixSpec) -> Result<DensityMatrix> {
    DensityMatrix::new(HermitianMatrix::new(matrix(spec)?)?)
}

fn gap_value(d: Difference) -> f64 {
    match d {
        Difference::Finite(x) => x,
        Difference::PosInfinity => f64::INFINITY,
        Difference::NegInfinity => f64::NEG_INFINITY,
        Difference::NotComparable => f64::NAN,
    }
}

fn stein(p: &SteinParams, exec: Execution) -> Result<Outcome> {
    let (pd, qd) = (dist(&p.p)?, dist(&p.q)?);
    let s = kl(&pd, &qd)?.value();
    let mut table = Table::new(&["n", "log_beta_n", "rate_n"]);
    let mut per_n = Vec::new();
    let mut logs = Vec::new();
    for &n in &p.n_list {
        let b = beta_n_eps_with(&pd, &qd, n, p.eps, exec)?;
        let rate = -b.log_beta / n as f64;
        table.push(vec![n.into(), b.log_beta.into(), rate.into()]);
        per_n.push(json!({
            "n": n,
            "log_beta_n": num(b.log_beta),
            "rate_n": num(rate),
            "eta": num(b.eta),
            "achieved_alpha": num(b.achieved_alpha),
        }));
        logs.push(b.log_beta);
    }
    let fitted = rate_fit_mode(&p.n_list, &logs, p.fit_mode)?;
    let (n_max, idx) = p
        .n_list
        .iter()
        .enumerate()
        .map(|(i, &n)| (n, i))
        .max()
        .expect("n_list is nonempty");
    let last_rate = -logs[idx] / n_max as f64;
    let checks = vec![
        Check::new(
            format!("rate at n = {n_max} within tolerance of D(p||q)"),
            (last_rate - s).abs() <= p.tolerance,
            last_rate - s,
            p.tolerance,
        ),
        Check::new(
            "fitted rate within tolerance of D(p||q)",
            (fitted - s).abs() <= p.tolerance,
            fitted - s,
            p.tolerance,
        ),
    ];
    Ok(Outcome {
        results: json!({
            "relative_entropy": num(s),
            "eps": p.eps,
            "fit_mode": p.fit_mode,
            "per_n": per_n,
            "fitted_rate": num(fitted),
        }),
        checks,
        table,
    })
}

fn sanov(p: &SanovParams, exec: Execution) -> Result<Outcome> {
    let pd = dist(&p.p)?;
    let event = SanovEvent::new(p.constraints.clone())?;
    let rate = sanov_rate(&pd, &event)?;
    let bounds = sanov_rate_bounds(&pd, &event)?;
    let k = pd.len() as f64;
    let mut table = Table::new(&["n", "log_q_n", "normalized_log_q_n", "correction"]);
    let mut per_n = Vec::new();
    let mut checks = Vec::new();
    for &n in &p.n_list {
        let log_q = sanov_q_n_exact_with(&pd, n, &event, exec)?;
        let normalized = log_q / n as f64;
        let correction = 3.0 * k * ((n + 1) as f64).ln() / n as f64;
        let deviation = if rate.is_infinite() && log_q == f64::NEG_INFINITY {
            0.0
        } else {
            (normalized + rate.value()).abs()
        };
        table.push(vec![n.into(), log_q.into(), normalized.into(), correction.into()]);
        per_n.push(json!({
            "n": n,
            "log_q_n": num(log_q),
            "normalized_log_q_n": num(normalized),
            "correction": num(correction),
            "deviation": num(deviation),
        }));
        checks.push(Check::new(
            format!("|(1/n) ln Q_n + rate| <= 3 K ln(n+1)/n at n = {n}"),
            deviation <= correction,
            deviation,
            correction,
        ));
    }
    Ok(Outcome {
        results: json!({
            "rate": rate,
            "interior_rate": bounds.interior,
            "closure_rate": bounds.closure,
            "per_n": per_n,
        }),
        checks,
        table,
    })
}

fn chernoff(p: &ChernoffParams, exec: Execution) -> Result<Outcome> {
    let (pd, qd) = (dist(&p.p)?, dist(&p.q)?);
    let c = chernoff_exponent(|t| classical_f_t(&pd, &qd, t), CHERNOFF_TOL)?;
    let target = -c.exponent;
    let mut table = Table::new(&["pi1", "pi2", "n", "log_bayes_error"]);
    let mut per_prior = Vec::new();
    let mut fits = Vec::new();
    let mut checks = Vec::new();
    for &[pi1, pi2] in &p.priors {
        let mut logs = Vec::new();
        for &n in &p.n_list {
            let l = bayes_error_exact_with(&pd, &qd, pi1, pi2, n, exec)?;
            table.push(vec![pi1.into(), pi2.into(), n.into(), l.into()]);
            logs.push(l);
        }
        let fitted = rate_fit(&p.n_list, &logs)?;
        let rel = (fitted - target).abs() / target.abs();
        checks.push(Check::new(
            format!("fitted rate within relative tolerance of the Chernoff exponent (priors {pi1}, {pi2})"),
            rel <= p.relative_tolerance,
            rel,
            p.relative_tolerance,
        ));
        per_prior.push(json!({
            "pi1": pi1,
            "pi2": pi2,
            "log_bayes_error": nums(&logs),
            "fitted_rate": num(fitted),
            "relative_error": num(rel),
        }));
        fits.push(fitted);
    }
    let spread = fits.iter().map(|f| (f - fits[0]).abs()).fold(0.0, f64::max) / target.abs();
    checks.push(Check::new(
        "fitted rate independent of the priors",
        spread <= p.relative_tolerance,
        spread,
        p.relative_tolerance,
    ));
    Ok(Outcome {
        results: json!({
            "t_star": num(c.t_star),
            "chernoff_exponent": num(c.exponent),
            "n_list": p.n_list,
            "priors": per_prior,
        }),
        checks,
        table,
    })
}

fn trial_seed(seed: u64, label: &str, i: usize) -> u64 {
    task_rng(seed, label, i as u64).random()
}

fn trial_dim(p: &DivergencePropsParams, i: usize) -> usize {
    p.min_dim + i % (p.max_dim - p.min_dim + 1)
}

fn t_grid(points: usize) -> Vec<f64> {
    (0..points).map(|i| i as f64 / (points - 1) as f64).collect()
}

struct CommutingTrial {
    entropy_gap: f64,
    alpha_gaps: Vec<f64>,
    overlap_gap: f64,
}

struct NoncommutingTrial {
    entropy_gap: f64,
    alpha_gaps: Vec<f64>,
    overlap_slack: f64,
}

struct InvarianceTrial {
    entropy_drift: f64,
    alpha_drifts: Vec<f64>,
}

fn max_abs(xs: impl Iterator<Item = f64>) -> f64 {
    xs.map(|x| if x.is_nan() { f64::INFINITY } else { x.abs() })
        .fold(0.0, f64::max)
}

fn min_of(xs: impl Iterator<Item = f64>) -> f64 {
    xs.map(|x| if x.is_nan() { f64::NEG_INFINITY } else { x })
        .fold(f64::INFINITY, f64::min)
}

fn divergence_props(p: &DivergencePropsParams, seed: u64, exec: Execution) -> Result<Outcome> {
    let ts = t_grid(p.t_points);
    let commuting = exec.try_map_indexed(p.commuting_trials, |i| -> Result<CommutingTrial> {
        let (rho, sigma, m) = random_commuting_pair(trial_dim(p, i), trial_seed(seed, "commuting", i))?;
        let (pr, ps) = (born_distribution(&rho, &m)?, born_distribution(&sigma, &m)?);
        let entropy_gap = gap_value(quantum_relative_entropy(&rho, &sigma)?.minus(kl(&pr, &ps)?));
        let alpha_gaps = p
            .alphas
            .iter()
            .map(|&a| Ok(gap_value(hot_report(&rho, &sigma, &m, a)?.gap)))
            .collect::<Result<Vec<_>>>()?;
        let mut overlap_gap = 0.0f64;
        for &t in &ts {
            let d = classical_f_t(&pr, &ps, t)? - quantum_f_t(&rho, &sigma, t)?;
            overlap_gap = overlap_gap.max(d.abs());
        }
        Ok(CommutingTrial {
            entropy_gap,
            alpha_gaps,
            overlap_gap,
        })
    })?;
    let noncommuting = exec.try_map_indexed(p.noncommuting_trials, |i| -> Result<NoncommutingTrial> {
        let d = trial_dim(p, i);
        let rho = random_density(d, d, trial_seed(seed, "noncommuting-rho", i))?;
        let sigma = random_density(d, d, trial_seed(seed, "noncommuting-sigma", i))?;
        let m = random_povm(d, p.povm_outcomes, trial_seed(seed, "noncommuting-povm", i))?;
        let (pr, ps) = (born_distribution(&rho, &m)?, born_distribution(&sigma, &m)?);
        let entropy_gap = gap_value(quantum_relative_entropy(&rho, &sigma)?.minus(kl(&pr, &ps)?));
        let alpha_gaps = p
            .alphas
            .iter()
            .map(|&a| Ok(gap_value(hot_report(&rho, &sigma, &m, a)?.gap)))
            .collect::<Result<Vec<_>>>()?;
        let mut overlap_slack = f64::INFINITY;
        for &t in &ts {
            let s = classical_f_t(&pr, &ps, t)? - quantum_f_t(&rho, &sigma, t)?;
            overlap_slack = overlap_slack.min(s);
        }
        Ok(NoncommutingTrial {
            entropy_gap,
            alpha_gaps,
            overlap_slack,
        })
    })?;
    let invariance = exec.try_map_indexed(p.invariance_trials, |i| -> Result<InvarianceTrial> {
        let d = trial_dim(p, i);
        let rho = random_density(d, d, trial_seed(seed, "invariance-rho", i))?;
        let sigma = random_density(d, d, trial_seed(seed, "invariance-sigma", i))?;
        let u = random_unitary(d, trial_seed(seed, "invariance-unitary", i));
        let (ru, su) = (rho.conjugate_by(&u)?, sigma.conjugate_by(&u)?);
        let entropy_drift = gap_value(
            quantum_relative_entropy(&ru, &su)?.minus(quantum_relative_entropy(&rho, &sigma)?),
        )
        .abs();
        let alpha_drifts = p
            .invariance_alphas
            .iter()
            .map(|&a| {
                Ok(gap_value(quantum_alpha_div(&ru, &su, a)?.minus(quantum_alpha_div(&rho, &sigma, a)?)).abs())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(InvarianceTrial {
            entropy_drift,
            alpha_drifts,
        })
    })?;

    let tol = p.tolerance;
    let mut table = Table::new(&["quantity", "alpha", "value"]);
    let mut checks = Vec::new();

    let c_entropy = max_abs(commuting.iter().map(|t| t.entropy_gap));
    let c_alpha: Vec<f64> = (0..p.alphas.len())
        .map(|j| max_abs(commuting.iter().map(|t| t.alpha_gaps[j])))
        .collect();
    let c_overlap = max_abs(commuting.iter().map(|t| t.overlap_gap));
    let n_entropy = min_of(noncommuting.iter().map(|t| t.entropy_gap));
    let n_alpha: Vec<f64> = (0..p.alphas.len())
        .map(|j| min_of(noncommuting.iter().map(|t| t.alpha_gaps[j])))
        .collect();
    let n_overlap = min_of(noncommuting.iter().map(|t| t.overlap_slack));
    let i_entropy = max_abs(invariance.iter().map(|t| t.entropy_drift));
    let i_alpha: Vec<f64> = (0..p.invariance_alphas.len())
        .map(|j| max_abs(invariance.iter().map(|t| t.alpha_drifts[j])))
        .collect();

    let nan = f64::NAN;
    table.push(vec!["commuting_max_abs_entropy_gap".into(), nan.into(), c_entropy.into()]);
    checks.push(Check::new("commuting pairs: |S − D| <= tol", c_entropy <= tol, c_entropy, tol));
    for (&a, &g) in p.alphas.iter().zip(&c_alpha) {
        table.push(vec!["commuting_max_abs_alpha_gap".into(), a.into(), g.into()]);
        checks.push(Check::new(format!("commuting pairs: |alpha gap| <= tol at alpha = {a}"), g <= tol, g, tol));
    }
    table.push(vec!["commuting_max_abs_overlap_gap".into(), nan.into(), c_overlap.into()]);
    checks.push(Check::new("commuting pairs: measured F_t equals quantum F_t", c_overlap <= tol, c_overlap, tol));
    table.push(vec!["noncommuting_min_entropy_gap".into(), nan.into(), n_entropy.into()]);
    checks.push(Check::new("POVM triples: S − D >= −tol", n_entropy >= -tol, n_entropy, tol));
    for (&a, &g) in p.alphas.iter().zip(&n_alpha) {
        table.push(vec!["noncommuting_min_alpha_gap".into(), a.into(), g.into()]);
        checks.push(Check::new(format!("POVM triples: alpha gap >= −tol at alpha = {a}"), g >= -tol, g, tol));
    }
    table.push(vec!["noncommuting_min_overlap_slack".into(), nan.into(), n_overlap.into()]);
    checks.push(Check::new("POVM triples: measured F_t >= quantum F_t − tol", n_overlap >= -tol, n_overlap, tol));
    table.push(vec!["invariance_max_entropy_drift".into(), nan.into(), i_entropy.into()]);
    checks.push(Check::new("unitary invariance of S", i_entropy <= tol, i_entropy, tol));
    for (&a, &g) in p.invariance_alphas.iter().zip(&i_alpha) {
        table.push(vec!["invariance_max_alpha_drift".into(), a.into(), g.into()]);
        checks.push(Check::new(format!("unitary invariance at alpha = {a}"), g <= tol, g, tol));
    }

    Ok(Outcome {
        results: json!({
            "t_grid": nums(&ts),
            "commuting": {
                "trials": p.commuting_trials,
                "max_abs_entropy_gap": num(c_entropy),
                "alphas": nums(&p.alphas),
                "max_abs_alpha_gap": nums(&c_alpha),
                "max_abs_overlap_gap": num(c_overlap),
            },
            "noncommuting": {
                "trials": p.noncommuting_trials,
                "povm_outcomes": p.povm_outcomes,
                "min_entropy_gap": num(n_entropy),
                "alphas": nums(&p.alphas),
                "min_alpha_gap": nums(&n_alpha),
                "min_overlap_slack": num(n_overlap),
            },
            "invariance": {
                "trials": p.invariance_trials,
                "max_entropy_drift": num(i_entropy),
                "alphas": nums(&p.invariance_alphas),
                "max_alpha_drift": nums(&i_alpha),
            },
        }),
        checks,
        table,
    })
}

fn hot(p: &HotParams) -> Result<Outcome> {
    let rho = density(&p.rho)?;
    let sigma = density(&p.sigma)?;
    let m = match &p.measurement {
        MeasurementSpec::Named(NamedMeasurement::SigmaEigenbasis) => {
            Measurement::from_orthonormal_basis(&sigma.spectrum().eigenvectors)?
        }
        MeasurementSpec::Named(NamedMeasurement::RhoEigenbasis) => {
            Measurement::from_orthonormal_basis(&rho.spectrum().eigenvectors)?
        }
        MeasurementSpec::Named(NamedMeasurement::Computational) => {
            Measurement::computational_basis(rho.dim())
        }
        MeasurementSpec::Effects { effects } => Measurement::from_effects(
            effects
                .iter()
                .map(|e| HermitianMatrix::new(matrix(e)?))
                .collect::<Result<Vec<_>>>()?,
        )?,
    };
    let (pr, ps) = (born_distribution(&rho, &m)?, born_distribution(&sigma, &m)?);
    let qs = quantum_relative_entropy(&rho, &sigma)?;
    let ms = kl(&pr, &ps)?;
    let entropy_gap = qs.minus(ms);
    let mut gap_zero = entropy_gap.within(p.tolerance);
    let mut checks = vec![Check::new(
        "data processing: S(rho||sigma) >= D(p||q)",
        entropy_gap.at_least(-p.tolerance),
        gap_value(entropy_gap),
        p.tolerance,
    )];
    let mut table = Table::new(&["alpha", "quantum", "measured", "gap"]);
    let mut per_alpha = Vec::new();
    for &a in &p.alphas {
        let r = hot_report(&rho, &sigma, &m, a)?;
        gap_zero &= r.gap.within(p.tolerance);
        checks.push(Check::new(
            format!("data processing at alpha = {a}"),
            r.gap.at_least(-p.tolerance),
            gap_value(r.gap),
            p.tolerance,
        ));
        table.push(vec![
            a.into(),
            r.quantum.value().into(),
            r.measured.value().into(),
            gap_value(r.gap).into(),
        ]);
        per_alpha.push(json!({ "alpha": a, "report": r }));
    }
    let commutator = rho.commutator_norm(&sigma)?;
    Ok(Outcome {
        results: json!({
            "relative_entropy": { "quantum": qs, "measured": ms, "gap": entropy_gap },
            "alphas": per_alpha,
            "measured_p": nums(pr.probs()),
            "measured_q": nums(ps.probs()),
            "commutator_norm": num(commutator),
            "gap_zero": gap_zero,
        }),
        checks,
        table,
    })
}

fn grid(g: &GridSpec) -> Result<ParamGrid> {
    ParamGrid::regular_1d(g.first, g.last, g.count)
}

fn z_measurement() -> Result<Measurement> {
    pvm_from_observable(&HermitianMatrix::pauli_z(), 1e-12)
}

/// `(θ, 1 − θ)` family realized as `diag(θ, 1 − θ)` measured in the Pauli-Z basis.
fn binary_model(g: &GridSpec) -> Result<InducedModel> {
    induce_model(&QuantumModel::diagonal_qubit(grid(g)?, 1)?, &z_measurement()?)
}

fn fixed_model(probs: &[f64]) -> Result<InducedModel> {
    let g = ParamGrid::regular_1d(probs[0], probs[0], 1)?;
    let qm = QuantumModel::new(g, vec![DensityMatrix::diagonal(probs)?], 0)?;
    induce_model(&qm, &z_measurement()?)
}

const OUTCOME_STATES: [&str; 2] = ["|0><0| (Z = +1)", "|1><1| (Z = -1)"];

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn sample_data(q: &ClassicalDistribution, n: usize, seed: u64, label: &str, i: usize) -> Result<SampleSequence> {
    let mut rng = task_rng(seed, label, i as u64);
    SampleSequence::new(sample_iid_with(q, n, &mut rng), q.len(), seed)
}

fn modelsel(p: &ModelselParams, seed: u64, exec: Execution) -> Result<Outcome> {
    let q = dist(&p.true_dist)?;
    let model_a = binary_model(&p.grid)?;
    let model_b = fixed_model(&p.fixed)?;
    let support = validate_predictive_measurement(&[model_a.clone(), model_b.clone()])?;
    if !support.ok {
        return Err(invalid("models violate the predictive-measurement support condition"));
    }
    let prior_a = model_a.grid().uniform_density();
    let prior_b = model_b.grid().uniform_density();

    let picks = exec.try_map_indexed(p.selection_datasets, |i| -> Result<[f64; 6]> {
        let data = sample_data(&q, p.selection_n, seed, "modelsel-selection", i)?;
        let aics = [aic(&model_a, &data)?, aic(&model_b, &data)?];
        let waics = [
            waic_terms(&model_a, &prior_a, p.beta, &data)?.waic,
            waic_terms(&model_b, &prior_b, p.beta, &data)?.waic,
        ];
        Ok([
            aics[0],
            aics[1],
            waics[0],
            waics[1],
            (select_model(&aics)? == 0) as u8 as f64,
            (select_model(&waics)? == 0) as u8 as f64,
        ])
    })?;
    let rate = |j: usize| picks.iter().map(|r| r[j]).sum::<f64>() / picks.len() as f64;
    let (aic_rate, waic_rate) = (rate(4), rate(5));

    let wmodel = match &p.waic_grid {
        Some(g) => binary_model(g)?,
        None => model_a.clone(),
    };
    let wprior = wmodel.grid().uniform_density();
    let pairs = exec.try_map_indexed(p.waic_datasets, |i| -> Result<(f64, f64)> {
        let data = sample_data(&q, p.waic_n, seed, "modelsel-waic", i)?;
        let w = waic_terms(&wmodel, &wprior, p.beta, &data)?.waic;
        let pred = escort_predictive(&wmodel, &wprior, p.beta, &data)?;
        let g: f64 = q
            .support()
            .iter()
            .map(|&k| -q.prob(k) * pred.probs.prob(k).ln())
            .sum();
        Ok((w, g))
    })?;
    let waics: Vec<f64> = pairs.iter().map(|x| x.0).collect();
    let gens: Vec<f64> = pairs.iter().map(|x| x.1).collect();
    let diffs: Vec<f64> = pairs.iter().map(|x| x.0 - x.1).collect();
    let (mw, sw) = mean_and_se(&waics);
    let (mg, sg) = mean_and_se(&gens);
    let (_, sd) = mean_and_se(&diffs);
    let combined = (sw * sw + sg * sg).sqrt();
    let gap = mw - mg;

    let checks = vec![
        Check::new("AIC selects the true family", aic_rate >= p.min_selection_rate, aic_rate, p.min_selection_rate),
        Check::new("WAIC selects the true family", waic_rate >= p.min_selection_rate, waic_rate, p.min_selection_rate),
        Check::new(
            "mean WAIC matches mean generalization loss",
            gap.abs() <= p.sigmas * combined,
            gap,
            p.sigmas * combined,
        ),
    ];
    let mut table = Table::new(&["metric", "value"]);
    for (name, v) in [
        ("aic_selection_rate", aic_rate),
        ("waic_selection_rate", waic_rate),
        ("mean_waic", mw),
        ("mean_generalization_loss", mg),
        ("se_waic", sw),
        ("se_generalization_loss", sg),
        ("combined_se", combined),
        ("paired_se", sd),
    ] {
        table.push(vec![name.into(), v.into()]);
    }
    Ok(Outcome {
        results: json!({
            "outcome_states": OUTCOME_STATES,
            "selection": {
                "n": p.selection_n,
                "datasets": p.selection_datasets,
                "aic_selection_rate": num(aic_rate),
                "waic_selection_rate": num(waic_rate),
                "mean_aic": [num(mean_and_se(&picks.iter().map(|r| r[0]).collect::<Vec<_>>()).0),
                             num(mean_and_se(&picks.iter().map(|r| r[1]).collect::<Vec<_>>()).0)],
                "mean_waic": [num(mean_and_se(&picks.iter().map(|r| r[2]).collect::<Vec<_>>()).0),
                              num(mean_and_se(&picks.iter().map(|r| r[3]).collect::<Vec<_>>()).0)],
            },
            "generalization": {
                "n": p.waic_n,
                "datasets": p.waic_datasets,
                "grid_points": wmodel.len(),
                "beta": p.beta,
                "mean_waic": num(mw),
                "mean_generalization_loss": num(mg),
                "difference": num(gap),
                "combined_se": num(combined),
                "paired_se": num(sd),
            },
        }),
        checks,
        table,
    })
}

fn sequence_index(data: &SampleSequence) -> u64 {
    data.outcomes
        .iter()
        .fold(0u64, |acc, &x| acc * data.alphabet_size as u64 + x as u64)
}

/// The α-predictive probabilities jittered by up to `scale` and renormalized;
/// the jitter depends on the data sequence and the perturbation index.
fn perturbed(base: &ClassicalDistribution, scale: f64, seed: u64, j: usize, data: &SampleSequence) -> Result<ClassicalDistribution> {
    let mut rng = task_rng(seed, &format!("risk-perturbation-{j}"), sequence_index(data));
    let raw: Vec<f64> = base
        .probs()
        .iter()
        .map(|&x| (x + scale * (2.0 * rng.random::<f64>() - 1.0)).max(1e-12))
        .collect();
    let total: f64 = raw.iter().sum();
    ClassicalDistribution::new(raw.iter().map(|x| x / total).collect())
}

fn risk(p: &RiskAlphaParams, seed: u64, exec: Execution) -> Result<Outcome> {
    let im = binary_model(&p.grid)?;
    let prior = im.grid().uniform_density();
    let z = z_measurement()?;
    let mut table = Table::new(&[
        "alpha",
        "alpha_predictive",
        "mle_plugin",
        "posterior_mean_plugin",
        "escort_predictive",
        "best_perturbation",
    ]);
    let mut per_alpha = Vec::new();
    let mut checks = Vec::new();
    for &alpha in &p.alphas {
        let risk_of = |rule: &(dyn Fn(&SampleSequence) -> Result<PredictiveDistribution> + Sync)| {
            risk_alpha_with(&im, &prior, rule, alpha, p.n, exec)
        };
        let optimal = risk_of(&|d| alpha_predictive(&im, &prior, alpha, d))?;
        let mle_risk = risk_of(&|d| Ok(PredictiveDistribution::mixture(im.dist(mle(&im, d)?).clone())))?;
        let mean_risk = risk_of(&|d| {
            let post = escort_posterior(&im, &prior, 1.0, d)?;
            let t = posterior_mean(&im, &post)[0];
            let rho = DensityMatrix::diagonal(&[t, 1.0 - t])?;
            Ok(PredictiveDistribution::mixture(born_distribution(&rho, &z)?))
        })?;
        let escort_risk = risk_of(&|d| escort_predictive(&im, &prior, 1.0, d))?;
        let perturbation_risks = (0..p.perturbations)
            .map(|j| {
                risk_of(&|d| {
                    let base = alpha_predictive(&im, &prior, alpha, d)?;
                    Ok(PredictiveDistribution::mixture(perturbed(&base.probs, p.perturbation_scale, seed, j, d)?))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        let best_perturbation = perturbation_risks.iter().copied().fold(f64::INFINITY, f64::min);
        let competitors = [mle_risk, mean_risk, escort_risk, best_perturbation];
        let margin = competitors.iter().map(|c| c - optimal).fold(f64::INFINITY, f64::min);
        checks.push(Check::new(
            format!("alpha-predictive risk is minimal at alpha = {alpha}"),
            margin >= -p.slack,
            margin,
            p.slack,
        ));
        table.push(vec![
            alpha.into(),
            optimal.into(),
            mle_risk.into(),
            mean_risk.into(),
            escort_risk.into(),
            best_perturbation.into(),
        ]);
        per_alpha.push(json!({
            "alpha": alpha,
            "alpha_predictive": num(optimal),
            "mle_plugin": num(mle_risk),
            "posterior_mean_plugin": num(mean_risk),
            "escort_predictive": num(escort_risk),
            "perturbations": nums(&perturbation_risks),
            "min_margin": num(margin),
        }));
    }
    Ok(Outcome {
        results: json!({
            "outcome_states": OUTCOME_STATES,
            "n": p.n,
            "grid_points": im.len(),
            "per_alpha": per_alpha,
        }),
        checks,
        table,
    })
}
