//! Sampling, Neyman-Pearson testing and exact large-deviation oracles built
//! on the method of types.

mod bayes;
mod fit;
mod sampling;
mod sanov;
mod testing;
pub mod types;

pub use bayes::{bayes_error_exact, bayes_error_exact_with};
pub use fit::{rate_fit, rate_fit_mode, FitMode};
pub use sampling::{empirical_measure, sample_iid, sample_iid_with, SampleSequence, TypeVector};
pub use sanov::{
    sanov_q_n_exact, sanov_q_n_exact_with, sanov_rate, sanov_rate_bounds, LinearConstraint,
    Relation, SanovBounds, SanovEvent,
};
pub use testing::{
    beta_n_eps, beta_n_eps_with, exact_error_curve, exact_error_curve_with, normalized_llr,
    np_decide, simulate_np_errors, stein_rate, BetaAtLevel, CurvePoint, ErrorPair, NPTest,
    SimulatedErrors, SteinPoint, SteinResult,
};
pub use types::TYPE_CLASS_LIMIT;
