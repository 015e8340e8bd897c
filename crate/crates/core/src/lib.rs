//! Distance covariance and correlation for stationary time series.
//!
//! * [`measures`]: weight measures and their kernels.
//! * [`dcov`]: V-statistic distance covariance/correlation and the lagged
//!   auto- and cross-distance correlation functions.
//! * [`ar`]: AR(p) fitting, order selection, residuals and simulation.
//! * [`resample`]: permutation, iid-bootstrap and parametric-bootstrap
//!   quantile envelopes for the scaled ADCF.
//! * [`noise`]: innovation generators and analytic reference values.

pub mod ar;
pub mod dcov;
pub mod error;
pub mod measures;
pub mod noise;
pub mod resample;
pub mod series;

pub use ar::{
    fit_ar, fit_ar_ls, fit_ar_yw, is_causal, residuals, select_order_aicc, simulate_ar, ArModel, FitMethod,
};
pub use dcov::{
    acf, adcf, adcv, cdcf, cdcv, dcor, dcov_v, kernel_matrix, KernelMatrix, LagCurve, Statistic, Transform,
};
pub use error::{Error, Result};
pub use measures::{admissibility, kernel_eval, Admissibility, MeasureKind, WeightMeasure};
pub use noise::{ecf_quadrature_dcov, gaussian_adcv_closed_form, NoiseGen};
pub use resample::{
    iid_bootstrap_envelope, parametric_bootstrap_envelope, permutation_envelope, BootstrapNoise, Envelope,
    ResampleMethod,
};
pub use series::Series;

/// Coefficients of the causal AR(10) benchmark model used throughout the
/// simulation studies.
pub const BENCHMARK_AR10: [f64; 10] =
    [-0.140, 0.038, 0.304, 0.078, 0.069, 0.013, 0.019, 0.039, 0.148, -0.062];
