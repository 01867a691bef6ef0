//! Test matrices with planted spectra, accuracy metrics, and the flop model.

mod flops;
mod generators;
mod metrics;

pub use flops::{flop_estimate, FlopEstimate, FlopKind, FlopTerm};
pub use generators::{
    expected_fraction, gen_conditioned, gen_svd_test, gen_sym_eig_test, geometric_spectrum,
    random_orthogonal,
};
pub use metrics::{accuracy_report, orthogonality, value_error, AccuracyReport, ResidualPairing};
