//! Interferometer reconstruction from single-photon probabilities and
//! two-photon visibilities.
//!
//! The reconstruction is blind to input and output phase shifters and to
//! complex conjugation; results are compared up to those symmetries.

mod dataset;
mod laing_obrien;
mod metrics;
mod refine;

pub use dataset::ExperimentalDataset;
pub use laing_obrien::{
    laing_obrien, laing_obrien_with, permutation_sweep, permutation_sweep_with, ReconstructionOptions, ReconstructionResult, ResultJson, SweepFailure, SweepReport, ARCCOS_SLACK,
};
pub use metrics::{chi_square, chi_square_report, dataset_tvds, model_visibility, predicted_dataset, ChiSquare, MIN_CLASSICAL_PROB};
pub use refine::{stochastic_refine, RefineBudget, RefineOutcome};
