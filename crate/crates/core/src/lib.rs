// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod aft;
pub mod baselines;
pub mod classical;
pub mod cli;
pub mod dataset;
mod engine;
pub mod error;
pub mod inference;
pub mod ltp;
pub mod optim;
pub mod predict;
pub mod quad;
pub mod report;
pub mod simharness;
pub mod special;
pub mod twopiece;

#[cfg(test)]
mod testutil;

pub use baselines::{Baseline, BaselineKind};
pub use error::{Error, Result};
pub use inference::{fit_mle, fit_mle_log_scale, FitConfig, FitResult, Observation, ProfileInterval};
pub use ltp::{CompositeForm, LogComponent, LtpParams};
pub use twopiece::{ParamKind, Parameterisation, TwoPieceParams};
