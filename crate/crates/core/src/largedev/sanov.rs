use serde::{Deserialize, Serialize};

use super::types::{guard_types, log_sum_exp, log_type_probability, map_type_classes, LogFactorials};
use crate::divergence::ExtendedReal;
use crate::error::{invalid, Error, Result};
use crate::exec::Execution;
use crate::matcore::ClassicalDistribution;

const SATISFY_TOL: f64 = 1e-12;
const GRID_DIVISIONS: usize = 200;
const REFINE_ROUNDS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "<")]
    Lt,
}

impl Relation {
    fn closed(self) -> Relation {
        match self {
            Relation::Gt => Relation::Ge,
            Relation::Lt => Relation::Le,
            r => r,
        }
    }

    fn open(self) -> Relation {
        match self {
            Relation::Ge => Relation::Gt,
            Relation::Le => Relation::Lt,
            r => r,
        }
    }
}

/// Half-space `c·ν (rel) τ` on the type simplex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearConstraint {
    pub coefficients: Vec<f64>,
    pub bound: f64,
    pub relation: Relation,
}

impl LinearConstraint {
    pub fn new(coefficients: Vec<f64>, relation: Relation, bound: f64) -> Self {
        LinearConstraint {
            coefficients,
            bound,
            relation,
        }
    }

    fn holds(&self, nu: &[f64]) -> bool {
        let v: f64 = self.coefficients.iter().zip(nu).map(|(c, x)| c * x).sum();
        match self.relation {
            Relation::Ge => v >= self.bound - SATISFY_TOL,
            Relation::Le => v <= self.bound + SATISFY_TOL,
            Relation::Gt => v > self.bound + SATISFY_TOL,
            Relation::Lt => v < self.bound - SATISFY_TOL,
        }
    }
}

/// Conjunction of linear constraints on the normalized type `counts/n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<LinearConstraint>", into = "Vec<LinearConstraint>")]
pub struct SanovEvent {
    constraints: Vec<LinearConstraint>,
}

impl TryFrom<Vec<LinearConstraint>> for SanovEvent {
    type Error = Error;

    fn try_from(v: Vec<LinearConstraint>) -> Result<Self> {
        SanovEvent::new(v)
    }
}

impl From<SanovEvent> for Vec<LinearConstraint> {
    fn from(e: SanovEvent) -> Self {
        e.constraints
    }
}

impl SanovEvent {
    pub fn new(constraints: Vec<LinearConstraint>) -> Result<Self> {
        if constraints.is_empty() {
            return Err(invalid("an event needs at least one constraint"));
        }
        let k = constraints[0].coefficients.len();
        for c in &constraints {
            if c.coefficients.len() != k || k == 0 {
                return Err(invalid("constraint coefficient vectors must share a nonzero length"));
            }
            if c.coefficients.iter().any(|x| !x.is_finite()) || !c.bound.is_finite() {
                return Err(invalid("constraint entries must be finite"));
            }
        }
        Ok(SanovEvent { constraints })
    }

    /// `ν_k (rel) τ`.
    pub fn coordinate(k: usize, dim: usize, relation: Relation, bound: f64) -> Result<Self> {
        if k >= dim {
            return Err(invalid(format!("coordinate {k} outside alphabet of size {dim}")));
        }
        let mut c = vec![0.0; dim];
        c[k] = 1.0;
        SanovEvent::new(vec![LinearConstraint::new(c, relation, bound)])
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    pub fn alphabet_size(&self) -> usize {
        self.constraints[0].coefficients.len()
    }

    pub fn contains(&self, nu: &[f64]) -> bool {
        self.constraints.iter().all(|c| c.holds(nu))
    }

    /// Every constraint made strict.
    pub fn interior(&self) -> SanovEvent {
        self.map_relations(Relation::open)
    }

    /// Every constraint made weak.
    pub fn closure(&self) -> SanovEvent {
        self.map_relations(Relation::closed)
    }

    fn map_relations(&self, f: fn(Relation) -> Relation) -> SanovEvent {
        SanovEvent {
            constraints: self
                .constraints
                .iter()
                .map(|c| LinearConstraint {
                    relation: f(c.relation),
                    ..c.clone()
                })
                .collect(),
        }
    }
}

fn check_event(p: &ClassicalDistribution, event: &SanovEvent) -> Result<()> {
    crate::error::check_dims(event.alphabet_size(), p.len())
}

/// `ln P_p(L_n ∈ Γ)` summed exactly over type classes.
pub fn sanov_q_n_exact(p: &ClassicalDistribution, n: usize, event: &SanovEvent) -> Result<f64> {
    sanov_q_n_exact_with(p, n, event, Execution::default())
}

pub fn sanov_q_n_exact_with(
    p: &ClassicalDistribution,
    n: usize,
    event: &SanovEvent,
    exec: Execution,
) -> Result<f64> {
    check_event(p, event)?;
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    guard_types(n, p.len(), "Sanov probability")?;
    let lf = LogFactorials::new(n);
    let nf = n as f64;
    let terms = map_type_classes(n, p.len(), exec, |c| {
        let nu: Vec<f64> = c.iter().map(|&x| x as f64 / nf).collect();
        if event.contains(&nu) {
            lf.log_multinomial(c) + log_type_probability(c, p)
        } else {
            f64::NEG_INFINITY
        }
    });
    Ok(log_sum_exp(&terms))
}

fn kl_to(nu: &[f64], p: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (&x, &y) in nu.iter().zip(p) {
        if x > 0.0 {
            if y == 0.0 {
                return f64::INFINITY;
            }
            acc += x * (x / y).ln();
        }
    }
    acc.max(0.0)
}

fn grid_search(p: &[f64], event: &SanovEvent) -> Option<(Vec<f64>, f64)> {
    let step = 1.0 / GRID_DIVISIONS as f64;
    let feasible = map_type_classes(GRID_DIVISIONS, p.len(), Execution::default(), |c| {
        let nu: Vec<f64> = c.iter().map(|&x| x as f64 * step).collect();
        event.contains(&nu).then(|| {
            let v = kl_to(&nu, p);
            (nu, v)
        })
    });
    feasible
        .into_iter()
        .flatten()
        .reduce(|best, cand| if cand.1 < best.1 { cand } else { best })
}

/// `inf_{ν ∈ Γ} D(ν‖p)` by a 1/200 simplex grid and pairwise mass-moving refinement.
pub fn sanov_rate(p: &ClassicalDistribution, event: &SanovEvent) -> Result<ExtendedReal> {
    check_event(p, event)?;
    guard_types(GRID_DIVISIONS, p.len(), "Sanov rate grid")?;
    let probs = p.probs();
    let Some((mut nu, mut best)) = grid_search(probs, event) else {
        return Ok(ExtendedReal::Infinity);
    };
    let k = probs.len();
    let mut step = 1.0 / GRID_DIVISIONS as f64;
    for _ in 0..REFINE_ROUNDS {
        loop {
            let mut improved = false;
            for i in 0..k {
                for j in 0..k {
                    if i == j || nu[i] < step {
                        continue;
                    }
                    let mut cand = nu.clone();
                    cand[i] -= step;
                    cand[j] += step;
                    if !event.contains(&cand) {
                        continue;
                    }
                    let v = kl_to(&cand, probs);
                    if v < best {
                        nu = cand;
                        best = v;
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        step *= 0.5;
    }
    Ok(ExtendedReal::finite(best))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SanovBounds {
    /// `inf` over the interior (upper bound on the limiting rate).
    pub interior: ExtendedReal,
    /// `inf` over the closure (lower bound on the limiting rate).
    pub closure: ExtendedReal,
}

pub fn sanov_rate_bounds(p: &ClassicalDistribution, event: &SanovEvent) -> Result<SanovBounds> {
    Ok(SanovBounds {
        interior: sanov_rate(p, &event.interior())?,
        closure: sanov_rate(p, &event.closure())?,
    })
}
