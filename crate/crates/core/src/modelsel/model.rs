use serde::Serialize;

use super::grid::ParamGrid;
use crate::error::{check_dims, invalid, Result};
use crate::matcore::{born_distribution, ClassicalDistribution, DensityMatrix, Measurement};

/// A family of states indexed by the points of a parameter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumModel {
    grid: ParamGrid,
    states: Vec<DensityMatrix>,
    model_dim: usize,
}

impl QuantumModel {
    pub fn new(grid: ParamGrid, states: Vec<DensityMatrix>, model_dim: usize) -> Result<Self> {
        check_dims(states.len(), grid.len())?;
        let dim = states[0].dim();
        if let Some(s) = states.iter().find(|s| s.dim() != dim) {
            return Err(invalid(format!(
                "model states must share one dimension ({dim} vs {})",
                s.dim()
            )));
        }
        Ok(QuantumModel {
            grid,
            states,
            model_dim,
        })
    }

    /// Builds the family by evaluating `state` at every grid point.
    pub fn from_fn<F>(grid: ParamGrid, model_dim: usize, state: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Result<DensityMatrix>,
    {
        let states = grid.points().iter().map(|p| state(p)).collect::<Result<Vec<_>>>()?;
        Self::new(grid, states, model_dim)
    }

    /// `ρ_θ = diag(θ, 1 − θ)`.
    pub fn diagonal_qubit(grid: ParamGrid, model_dim: usize) -> Result<Self> {
        if grid.dim_theta() != 1 {
            return Err(invalid("the diagonal qubit family has a scalar parameter"));
        }
        Self::from_fn(grid, model_dim, |t| DensityMatrix::diagonal(&[t[0], 1.0 - t[0]]))
    }

    pub fn grid(&self) -> &ParamGrid {
        &self.grid
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn model_dim(&self) -> usize {
        self.model_dim
    }

    pub fn hilbert_dim(&self) -> usize {
        self.states[0].dim()
    }
}

/// Outcome distributions of a model under a fixed measurement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InducedModel {
    grid: ParamGrid,
    dists: Vec<ClassicalDistribution>,
    model_dim: usize,
}

impl InducedModel {
    pub fn from_distributions(
        grid: ParamGrid,
        dists: Vec<ClassicalDistribution>,
        model_dim: usize,
    ) -> Result<Self> {
        check_dims(dists.len(), grid.len())?;
        let k = dists[0].len();
        if dists.iter().any(|d| d.len() != k) {
            return Err(invalid("model distributions must share one alphabet"));
        }
        Ok(InducedModel {
            grid,
            dists,
            model_dim,
        })
    }

    pub fn grid(&self) -> &ParamGrid {
        &self.grid
    }

    pub fn dists(&self) -> &[ClassicalDistribution] {
        &self.dists
    }

    pub fn dist(&self, i: usize) -> &ClassicalDistribution {
        &self.dists[i]
    }

    pub fn alphabet_size(&self) -> usize {
        self.dists[0].len()
    }

    pub fn model_dim(&self) -> usize {
        self.model_dim
    }

    pub fn len(&self) -> usize {
        self.dists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dists.is_empty()
    }

    /// Union of all supports.
    fn union_support(&self) -> Vec<usize> {
        (0..self.alphabet_size())
            .filter(|&k| self.dists.iter().any(|d| d.in_support(k)))
            .collect()
    }

    pub(crate) fn has_common_support(&self) -> bool {
        let u = self.union_support();
        self.dists.iter().all(|d| d.support() == u.as_slice())
    }
}

/// `p_θ = born(ρ_θ, M)` at every grid point.
pub fn induce_model(qm: &QuantumModel, m: &Measurement) -> Result<InducedModel> {
    check_dims(qm.hilbert_dim(), m.dim())?;
    let dists = qm
        .states
        .iter()
        .map(|s| born_distribution(s, m))
        .collect::<Result<Vec<_>>>()?;
    InducedModel::from_distributions(qm.grid.clone(), dists, qm.model_dim)
}

/// A grid point whose support differs from the union support of its model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportViolation {
    pub model: usize,
    pub grid_index: usize,
    pub support: Vec<usize>,
    pub expected: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredictiveCheck {
    pub ok: bool,
    pub violations: Vec<SupportViolation>,
}

/// Checks that within every model the support does not depend on the parameter.
pub fn validate_predictive_measurement(models: &[InducedModel]) -> Result<PredictiveCheck> {
    if let Some(first) = models.first() {
        if models.iter().any(|m| m.alphabet_size() != first.alphabet_size()) {
            return Err(invalid("models must share one outcome alphabet"));
        }
    }
    let mut violations = Vec::new();
    for (mi, model) in models.iter().enumerate() {
        let expected = model.union_support();
        for (gi, d) in model.dists.iter().enumerate() {
            if d.support() != expected.as_slice() {
                violations.push(SupportViolation {
                    model: mi,
                    grid_index: gi,
                    support: d.support().to_vec(),
                    expected: expected.clone(),
                });
            }
        }
    }
    Ok(PredictiveCheck {
        ok: violations.is_empty(),
        violations,
    })
}
