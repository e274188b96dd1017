use std::path::PathBuf;

use thiserror::Error;

/// Failures raised by the scalar kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("{function}: argument {value} outside domain {domain}")]
    Domain {
        function: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("{function}: no bracket found for target {target}")]
    Bracket { function: &'static str, target: f64 },
    #[error("{function}: bisection did not converge after {iterations} iterations")]
    Convergence {
        function: &'static str,
        iterations: usize,
    },
    #[error("quadrature did not reach tolerance (estimate {estimate:e}, error {error:e})")]
    Quadrature { estimate: f64, error: f64 },
    #[error("external kernel {name} returned {value} for input {input}")]
    External { name: String, input: f64, value: f64 },
}

impl KernelError {
    /// True for errors that come from an iterative numerical method not
    /// converging, as opposed to bad arguments.
    pub fn is_convergence(&self) -> bool {
        matches!(
            self,
            KernelError::Bracket { .. }
                | KernelError::Convergence { .. }
                | KernelError::Quadrature { .. }
        )
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("kernel failed at level {level}, node {index}: {source}")]
    Evolve {
        level: u32,
        index: usize,
        #[source]
        source: KernelError,
    },
    #[error("invalid code spec: {0}")]
    InvalidSpec(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },
    #[error("unknown kernel {0:?} (valid: ega, aga, pga, apga, spga)")]
    UnknownKernel(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: line {line}: {message}")]
    Format {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn is_convergence(&self) -> bool {
        match self {
            Error::Kernel(e) | Error::Evolve { source: e, .. } => e.is_convergence(),
            _ => false,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
