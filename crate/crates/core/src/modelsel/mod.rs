//! Grid-quadrature quantum models, posteriors, predictive states and
//! information criteria.

mod grid;
mod inference;
mod model;
mod predictive;

pub use grid::ParamGrid;
pub use inference::{
    aic, escort_posterior, escort_predictive, functional_variance, log_likelihood, mle,
    posterior_masses, posterior_mean, select_model, waic, waic_terms, PosteriorWeights,
    PredictiveDistribution, WaicTerms,
};
pub use model::{
    induce_model, validate_predictive_measurement, InducedModel, PredictiveCheck, QuantumModel,
    SupportViolation,
};
pub use predictive::{
    alpha_predictive, barycenter_state, risk_alpha, risk_alpha_with, sequence_from_index,
    SEQUENCE_LIMIT,
};
