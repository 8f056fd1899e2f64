//! Relative entropies, α-divergences, the overlap `F_t` and Chernoff exponents.
//!
//! Argument order follows `D^{(α)}(p‖q)`: the `α = −1` branch is `D(p‖q)`
//! and the `α = +1` branch is `D(q‖p)`. All logarithms are natural.

mod chernoff;
mod classical;
mod extended;
mod quantum;

pub use chernoff::{chernoff_exponent, ChernoffResult, CHERNOFF_TOL};
pub use classical::{absolutely_continuous, classical_alpha_div, classical_f_t, kl};
pub(crate) use classical::check_alpha;
pub use extended::{Difference, ExtendedReal};
pub use quantum::{hot_report, quantum_alpha_div, quantum_f_t, quantum_relative_entropy, HotReport};
