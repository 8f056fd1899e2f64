//! Hermitian matrix algebra, quantum states, measurements and the Born map.

mod eigen;
mod matrix;
mod measurement;
pub mod random;
mod state;

pub use eigen::{eigh, matrix_function, SpectralDecomposition, SUPPORT_TOL};
pub use matrix::{CMatrix, HermitianMatrix, HERMITIAN_TOL};
pub use measurement::{
    born_distribution, post_measurement, pvm_from_observable, qubit_ket, Measurement,
    PostMeasurementDecomposition,
};
pub use random::random_density;
pub use state::{ClassicalDistribution, DensityMatrix, STATE_TOL};
