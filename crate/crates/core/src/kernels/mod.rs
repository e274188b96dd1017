//! Scalar kernels behind every construction method.
//!
//! Each [`KernelId`] resolves to a single-step map `x -> step(x)` giving the
//! mean LLR of the degraded child of a node with mean LLR `x`; the upgraded
//! child is always `2x`.

mod closed_form;
mod exact;
mod inverse;
mod polynomial;
mod quadrature;

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::sync::Arc;

pub use closed_form::{
    aga_step, ln_phi_aga, ln_phi_pga, pga_f, pga_step, phi_aga, phi_aga_inv, phi_pga,
    phi_pga_integral, phi_pga_inv, PgaParams,
};
pub use exact::{ega_step, ln_phi_exact, phi_exact, phi_exact_complement, phi_exact_inv};
pub use polynomial::{apga_step, breakpoint_gaps, spga_step, PolynomialMap, BREAKPOINTS};
pub use quadrature::{integrate, QuadratureConfig};

use crate::error::{Error, KernelError, Result};

type StepFn = dyn Fn(f64) -> Result<f64, KernelError> + Send + Sync;

/// A third-party single-step map plugged into the construction engine.
#[derive(Clone)]
pub struct ExternalKernel {
    name: String,
    step: Arc<StepFn>,
}

impl ExternalKernel {
    pub fn new<F>(name: impl Into<String>, step: F) -> Self
    where
        F: Fn(f64) -> Result<f64, KernelError> + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            step: Arc::new(step),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl fmt::Debug for ExternalKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExternalKernel")
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

/// Construction method.
#[derive(Debug, Clone)]
pub enum KernelId {
    Ega,
    Aga,
    Pga,
    Apga,
    Spga,
    External(ExternalKernel),
}

impl PartialEq for KernelId {
    fn eq(&self, other: &Self) -> bool {
        self.name() == other.name()
    }
}

impl Eq for KernelId {}

impl KernelId {
    pub const BUILTIN: [KernelId; 5] = [
        KernelId::Ega,
        KernelId::Aga,
        KernelId::Pga,
        KernelId::Apga,
        KernelId::Spga,
    ];

    pub fn name(&self) -> &str {
        match self {
            KernelId::Ega => "ega",
            KernelId::Aga => "aga",
            KernelId::Pga => "pga",
            KernelId::Apga => "apga",
            KernelId::Spga => "spga",
            KernelId::External(k) => k.name(),
        }
    }

    /// Evaluates the degraded-child update.
    pub fn step(&self, x: f64, cfg: &QuadratureConfig) -> Result<f64, KernelError> {
        match self {
            KernelId::Ega => ega_step(x, cfg),
            KernelId::Aga => aga_step(x),
            KernelId::Pga => pga_step(x),
            KernelId::Apga => apga_step(x),
            KernelId::Spga => spga_step(x),
            KernelId::External(k) => {
                let v = (k.step)(x)?;
                if v >= 0.0 && v.is_finite() {
                    Ok(v)
                } else {
                    Err(KernelError::External {
                        name: k.name.clone(),
                        input: x,
                        value: v,
                    })
                }
            }
        }
    }
}

impl fmt::Display for KernelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KernelId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ega" => Ok(KernelId::Ega),
            "aga" => Ok(KernelId::Aga),
            "pga" => Ok(KernelId::Pga),
            "apga" => Ok(KernelId::Apga),
            "spga" => Ok(KernelId::Spga),
            _ => Err(Error::UnknownKernel(s.to_string())),
        }
    }
}

/// What a kernel dump tabulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DumpTarget {
    /// φ curve (exact, AGA or closed-form PGA).
    Phi,
    /// Degraded-child single-step map.
    Step,
}

/// Uniform grid `lo, lo + step, ..., hi` (endpoint included when it lands
/// on the grid within rounding).
pub fn uniform_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "grid requires lo < hi, got [{lo}, {hi}]"
        )));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "grid step must be positive, got {step}"
        )));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| lo + i as f64 * step).collect())
}

/// Tabulates a kernel on a grid as `(x, value)` pairs.
pub fn kernel_table(
    kernel: &KernelId,
    target: DumpTarget,
    grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Vec<(f64, f64)>> {
    grid.iter()
        .map(|&x| {
            let v = match (target, kernel) {
                (DumpTarget::Step, k) => k.step(x, cfg)?,
                (DumpTarget::Phi, KernelId::Ega) => phi_exact(x, cfg)?,
                (DumpTarget::Phi, KernelId::Aga) => phi_aga(x)?,
                (DumpTarget::Phi, KernelId::Pga) => phi_pga(x)?,
                (DumpTarget::Phi, k) => {
                    return Err(Error::InvalidArgument(format!(
                        "kernel {k} has no phi curve"
                    )))
                }
            };
            Ok((x, v))
        })
        .collect()
}

/// Writes `x,value` CSV rows with a header.
pub fn write_kernel_csv<W: Write>(out: W, rows: &[(f64, f64)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "value"])?;
    for (x, v) in rows {
        w.write_record([x.to_string(), v.to_string()])?;
    }
    w.flush().map_err(|e| Error::io("<kernel csv>", e))?;
    Ok(())
}
