//! Polar code construction by Gaussian-approximated density evolution with
//! exact, closed-form and piecewise-polynomial kernels, plus an SC codec and
//! a Monte-Carlo FER harness to compare the resulting codes.

pub mod cli;
pub mod codec;
pub mod construction;
pub mod error;
pub mod kernels;
pub mod metrics;
pub mod simulation;

pub use error::{Error, KernelError, Result};
