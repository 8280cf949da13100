//! Multi-feature fusion forecasting for univariate time series.
//!
//! A series is cut into overlapping windows, each window is summarised by
//! a sequence of feature functions (position, mean, standard deviation,
//! range, approximate entropy, visibility-graph degree), and a perceptron
//! with two hidden layers learns to map a window's features to the value
//! that follows it. Training uses Adam driven by a triangular cyclical
//! learning rate and keeps the parameters with the lowest training loss.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the precision to `f64`, with `*F32` variants for
//! single precision.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod features;
pub mod metrics;
pub mod net;
pub mod optim;
pub mod scalar;
pub mod series;
pub mod train;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type TimeSeriesF64 = series::TimeSeries<f64>;
pub type TimeSliceF64 = series::TimeSlice<f64>;
pub type FeatureMatrixF64 = features::FeatureMatrix<f64>;
pub type ColumnScalerF64 = features::ColumnScaler<f64>;
pub type MlpModelF64 = net::MlpModel<f64>;
pub type AdamStateF64 = optim::AdamState<f64>;
pub type ClrScheduleF64 = optim::ClrSchedule<f64>;
pub type TrainConfigF64 = train::TrainConfig<f64>;
pub type CheckpointF64 = train::TrainedCheckpoint<f64>;
pub type ErrorReportF64 = metrics::ErrorReport<f64>;

pub type TimeSeriesF32 = series::TimeSeries<f32>;
pub type MlpModelF32 = net::MlpModel<f32>;
pub type TrainConfigF32 = train::TrainConfig<f32>;
pub type CheckpointF32 = train::TrainedCheckpoint<f32>;
