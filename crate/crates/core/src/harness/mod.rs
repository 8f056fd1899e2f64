//! Experiment configuration, dispatch and report serialization.

mod config;
mod error;
mod report;
mod run;

pub use config::{
    parse_config, required_parameters, ChernoffParams, DivergencePropsParams, ExperimentConfig,
    GridSpec, HotParams, MatrixSpec, MeasurementSpec, ModelselParams, NamedMeasurement,
    Parameters, RiskAlphaParams, SanovParams, SteinParams, EXPERIMENTS,
};
pub use error::HarnessError;
pub use report::{format_float, num, write_report, Cell, Check, ExperimentReport, Format, Table};
pub use run::{run_experiment, run_experiment_with};
