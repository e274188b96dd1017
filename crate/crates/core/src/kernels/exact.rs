//! The exact φ function of Gaussian-approximated density evolution,
//!
//! ```text
//! φ(x) = 1 - E[tanh(u/2)],   u ~ N(x, 2x),   φ(0) = 1,
//! ```
//!
//! evaluated by adaptive quadrature without cancellation:
//!
//! * `1 - tanh(u/2)` combined with the Gaussian collapses to
//!   `e^{-x/4} e^{-u²/4x} / cosh(u/2)`, an even function centred at zero, so
//!   `ln φ` is obtained directly and stays accurate far below the smallest
//!   representable φ;
//! * for a consistent Gaussian density `E[tanh(u/2)] = E[tanh²(u/2)]`, so the
//!   complement `1 - φ` is an integral of a nonnegative function and keeps its
//!   relative precision as `x -> 0`.

use std::f64::consts::PI;

use super::inverse::{check_node_step, phi_inverse, PhiCurve};
use super::quadrature::{integrate, QuadratureConfig};
use crate::error::KernelError;

/// Beyond |u| = 80 the factor 1/cosh(u/2) is below 1e-17 of its peak.
const SECH_TAIL: f64 = 80.0;

fn check_domain(function: &'static str, x: f64) -> Result<(), KernelError> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(KernelError::Domain {
            function,
            value: x,
            domain: "[0, inf)",
        })
    }
}

fn sech_half(u: f64) -> f64 {
    let e = (-0.5 * u.abs()).exp();
    2.0 * e / (1.0 + e * e)
}

/// `ln φ(x)`; finite for every finite `x >= 0`.
pub fn ln_phi_exact(x: f64, cfg: &QuadratureConfig) -> Result<f64, KernelError> {
    check_domain("phi_exact", x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    // u = sqrt(2x)·t turns the Gaussian factor into e^{-t²/2}, leaving
    // ln φ = -x/4 - ln(2π)/2 + ln ∫ e^{-t²/2} sech(sqrt(2x)·t/2) dt.
    let sigma = (2.0 * x).sqrt();
    let upper = cfg.halfwidth_sigmas.min(SECH_TAIL / sigma);
    // The integrand is even; integrate the right half.
    let half = integrate(|t| (-0.5 * t * t).exp() * sech_half(sigma * t), 0.0, upper, cfg)?;
    Ok(-0.25 * x - 0.5 * (2.0 * PI).ln() + (2.0 * half).ln())
}

/// φ(x), underflowing gracefully to the smallest positive `f64`.
pub fn phi_exact(x: f64, cfg: &QuadratureConfig) -> Result<f64, KernelError> {
    let v = ln_phi_exact(x, cfg)?.exp();
    Ok(if v == 0.0 { f64::MIN_POSITIVE } else { v })
}

/// `1 - φ(x) = E[tanh²(u/2)]`, integrated in standardized form over
/// `t ∈ [-h, h]` with `u = x + sqrt(2x)·t`.
pub fn phi_exact_complement(x: f64, cfg: &QuadratureConfig) -> Result<f64, KernelError> {
    check_domain("phi_exact", x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let sigma = (2.0 * x).sqrt();
    let h = cfg.halfwidth_sigmas;
    let v = integrate(
        |t| {
            let th = (0.5 * (x + sigma * t)).tanh();
            th * th * (-0.5 * t * t).exp()
        },
        -h,
        h,
        cfg,
    )?;
    Ok((v / (2.0 * PI).sqrt()).min(1.0))
}

/// φ⁻¹ by monotone bisection.
pub fn phi_exact_inv(y: f64, cfg: &QuadratureConfig) -> Result<f64, KernelError> {
    phi_inverse(&ExactPhi(cfg), y)
}

/// Single-step check-node update of exact density evolution,
/// `φ⁻¹(1 - (1 - φ(x))²)`.
pub fn ega_step(x: f64, cfg: &QuadratureConfig) -> Result<f64, KernelError> {
    check_node_step(&ExactPhi(cfg), x)
}

struct ExactPhi<'a>(&'a QuadratureConfig);

impl PhiCurve for ExactPhi<'_> {
    const NAME: &'static str = "phi_exact";

    fn ln_phi(&self, x: f64) -> Result<f64, KernelError> {
        ln_phi_exact(x, self.0)
    }

    fn complement(&self, x: f64) -> Result<f64, KernelError> {
        phi_exact_complement(x, self.0)
    }
}
