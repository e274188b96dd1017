//! Closed-form φ approximations: Chung's two-segment AGA curve and the
//! three-segment piecewise curve used for PGA construction, plus the fitted
//! tanh replacement that defines the PGA integral.

use std::f64::consts::PI;

use super::inverse::{check_node_step, phi_inverse, PhiCurve};
use super::quadrature::{integrate, QuadratureConfig};
use crate::error::KernelError;

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

/// `ln φ_AGA(x)`.
pub fn ln_phi_aga(x: f64) -> Result<f64, KernelError> {
    check_domain("phi_aga", x)?;
    Ok(if x <= 10.0 {
        -0.4527 * x.powf(0.86) + 0.0218
    } else {
        0.5 * (PI / x).ln() + (1.0 - 10.0 / (7.0 * x)).ln() - 0.25 * x
    })
}

/// Two-segment AGA approximation of φ. Note `φ_AGA(0) = e^0.0218 > 1`.
pub fn phi_aga(x: f64) -> Result<f64, KernelError> {
    Ok(ln_phi_aga(x)?.exp())
}

/// `ln φ_p(x)` for the closed-form PGA curve.
pub fn ln_phi_pga(x: f64) -> Result<f64, KernelError> {
    check_domain("phi_pga", x)?;
    Ok(if x < 0.867_861 {
        -0.0484 * x * x - 0.3258 * x
    } else if x < 10.0 {
        -0.4777 * x.powf(0.8512) + 0.1094
    } else {
        0.5 * (PI / x).ln() + (1.0 - 1.509 / x).ln() - x / 3.936
    })
}

/// Three-segment closed form of φ_p; the operative PGA curve.
pub fn phi_pga(x: f64) -> Result<f64, KernelError> {
    Ok(ln_phi_pga(x)?.exp())
}

pub fn phi_aga_inv(y: f64) -> Result<f64, KernelError> {
    phi_inverse(&AgaPhi, y)
}

pub fn phi_pga_inv(y: f64) -> Result<f64, KernelError> {
    phi_inverse(&PgaPhi, y)
}

/// Check-node update driven by the AGA curve and its numerical inverse.
pub fn aga_step(x: f64) -> Result<f64, KernelError> {
    check_node_step(&AgaPhi, x)
}

/// Check-node update driven by the closed-form PGA curve.
pub fn pga_step(x: f64) -> Result<f64, KernelError> {
    check_node_step(&PgaPhi, x)
}

struct AgaPhi;

impl PhiCurve for AgaPhi {
    const NAME: &'static str = "phi_aga";

    fn ln_phi(&self, x: f64) -> Result<f64, KernelError> {
        ln_phi_aga(x)
    }
}

struct PgaPhi;

impl PhiCurve for PgaPhi {
    const NAME: &'static str = "phi_pga";

    fn ln_phi(&self, x: f64) -> Result<f64, KernelError> {
        ln_phi_pga(x)
    }
}

/// Coefficients of the fitted replacement `a·e^{b·u} + c·e^{d·u}` for
/// `tanh`, active on `|u| <= cutoff`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PgaParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub cutoff: f64,
}

impl Default for PgaParams {
    fn default() -> Self {
        Self {
            a: 1.9e7,
            b: 8.4e-9,
            c: -1.8e7,
            d: -8.5e-9,
            cutoff: 3.1,
        }
    }
}

/// The fitted tanh replacement, saturated at ±1 outside the cutoff and
/// clamped to `[-1, 1]` inside it.
///
/// With the published coefficients `a + c = 10⁶`, so the inner branch
/// saturates to +1 almost everywhere.
pub fn pga_f(u: f64, params: &PgaParams) -> f64 {
    if u > params.cutoff {
        1.0
    } else if u < -params.cutoff {
        -1.0
    } else {
        (params.a * (params.b * u).exp() + params.c * (params.d * u).exp()).clamp(-1.0, 1.0)
    }
}

/// Integral form `1 - E[f(u/2)]`, `u ~ N(x, 2x)`. Only an oracle; the
/// construction uses [`phi_pga`].
pub fn phi_pga_integral(
    x: f64,
    params: &PgaParams,
    cfg: &QuadratureConfig,
) -> Result<f64, KernelError> {
    check_domain("phi_pga_integral", x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    let sigma = (2.0 * x).sqrt();
    let h = cfg.halfwidth_sigmas;
    // f has kinks at u/2 = ±cutoff; split there so the rule sees smooth pieces.
    let mut cuts = vec![-h, h];
    for kink in [-2.0 * params.cutoff, 2.0 * params.cutoff] {
        let t = (kink - x) / sigma;
        if t > -h && t < h {
            cuts.push(t);
        }
    }
    cuts.sort_by(f64::total_cmp);
    let mut mean = 0.0;
    for w in cuts.windows(2) {
        mean += integrate(
            |t| pga_f(0.5 * (x + sigma * t), params) * (-0.5 * t * t).exp(),
            w[0],
            w[1],
            cfg,
        )?;
    }
    Ok(1.0 - mean / (2.0 * PI).sqrt())
}
