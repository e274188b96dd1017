//! Monotone bisection and the generic check-node update
//! `x -> φ⁻¹(1 - (1 - φ(x))²)` shared by every φ-based kernel.

use crate::error::KernelError;

/// Bisection stops once the bracket is this narrow relative to its upper end.
const RELATIVE_WIDTH: f64 = 1e-13;
const MAX_BISECTIONS: usize = 200;
/// Enough doublings/halvings to walk across the whole f64 exponent range.
const MAX_BRACKET_STEPS: usize = 2100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Monotonicity {
    Increasing,
    Decreasing,
}

/// Finds `x >= 0` with `f(x) = target` for a monotone `f`.
///
/// The bracket starts at `[0, 1]`; its upper end is doubled until it passes
/// the root, or halved while it still does so the final bracket is
/// `[h/2, h]` and the result keeps full relative precision for small roots.
pub(crate) fn invert_monotone<F>(
    function: &'static str,
    mut f: F,
    target: f64,
    direction: Monotonicity,
) -> Result<f64, KernelError>
where
    F: FnMut(f64) -> Result<f64, KernelError>,
{
    let passed = |v: f64| match direction {
        Monotonicity::Increasing => v >= target,
        Monotonicity::Decreasing => v <= target,
    };
    if !target.is_finite() {
        return Err(KernelError::Bracket { function, target });
    }
    if passed(f(0.0)?) {
        return Ok(0.0);
    }

    let (mut lo, mut hi);
    if passed(f(1.0)?) {
        hi = 1.0f64;
        let mut steps = 0;
        loop {
            let half = 0.5 * hi;
            if half == 0.0 || steps == MAX_BRACKET_STEPS {
                return Ok(hi);
            }
            if !passed(f(half)?) {
                lo = half;
                break;
            }
            hi = half;
            steps += 1;
        }
    } else {
        lo = 1.0f64;
        hi = 2.0f64;
        let mut steps = 0;
        while !passed(f(hi)?) {
            lo = hi;
            hi *= 2.0;
            steps += 1;
            if steps == MAX_BRACKET_STEPS || !hi.is_finite() {
                return Err(KernelError::Bracket { function, target });
            }
        }
    }

    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= RELATIVE_WIDTH * hi {
            return Ok(0.5 * (lo + hi));
        }
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if passed(f(mid)?) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(KernelError::Convergence {
        function,
        iterations: MAX_BISECTIONS,
    })
}

/// A decreasing curve with `φ(0) ≈ 1` that can be evaluated both in the
/// log domain and as its complement `1 - φ`, so neither tiny φ values nor
/// values close to one lose precision.
pub(crate) trait PhiCurve {
    const NAME: &'static str;

    fn ln_phi(&self, x: f64) -> Result<f64, KernelError>;

    fn complement(&self, x: f64) -> Result<f64, KernelError> {
        Ok(-self.ln_phi(x)?.exp_m1())
    }
}

/// Solves `φ(x) = y` for `y ∈ (0, 1]`, working on the complement when `y` is
/// close to one and on `ln φ` otherwise.
pub(crate) fn phi_inverse<C: PhiCurve>(curve: &C, y: f64) -> Result<f64, KernelError> {
    if !(y > 0.0 && y <= 1.0) {
        return Err(KernelError::Domain {
            function: C::NAME,
            value: y,
            domain: "(0, 1]",
        });
    }
    if y >= 0.5 {
        invert_monotone(
            C::NAME,
            |x| curve.complement(x),
            1.0 - y,
            Monotonicity::Increasing,
        )
    } else {
        invert_monotone(
            C::NAME,
            |x| curve.ln_phi(x),
            y.ln(),
            Monotonicity::Decreasing,
        )
    }
}

/// `φ⁻¹(1 - (1 - φ(x))²)`, the mean LLR of the degraded (check-node) child.
pub(crate) fn check_node_step<C: PhiCurve>(curve: &C, x: f64) -> Result<f64, KernelError> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(KernelError::Domain {
            function: C::NAME,
            value: x,
            domain: "[0, inf)",
        });
    }
    let ln_phi = curve.ln_phi(x)?;
    let phi = ln_phi.exp();
    if phi > 0.5 {
        // 1 - y = (1 - φ)², solved against the complement.
        let c = curve.complement(x)?;
        invert_monotone(
            C::NAME,
            |t| curve.complement(t),
            c * c,
            Monotonicity::Increasing,
        )
    } else {
        // ln y = ln φ + ln(2 - φ)
        let ln_target = ln_phi + (2.0 - phi).ln();
        invert_monotone(
            C::NAME,
            |t| curve.ln_phi(t),
            ln_target,
            Monotonicity::Decreasing,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverts_square() {
        let x = invert_monotone("sq", |x| Ok(x * x), 2.0, Monotonicity::Increasing).unwrap();
        assert!((x - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn small_root_keeps_relative_precision() {
        let x = invert_monotone("lin", Ok, 3e-9, Monotonicity::Increasing).unwrap();
        assert!(((x - 3e-9) / 3e-9).abs() < 1e-12);
    }

    #[test]
    fn decreasing_large_root() {
        let x = invert_monotone("exp", |x| Ok(-x), -7.5e5, Monotonicity::Decreasing).unwrap();
        assert!(((x - 7.5e5) / 7.5e5).abs() < 1e-12);
    }

    #[test]
    fn target_at_origin_returns_zero() {
        let x = invert_monotone("lin", Ok, 0.0, Monotonicity::Increasing).unwrap();
        assert_eq!(x, 0.0);
    }

    #[test]
    fn unreachable_target_is_a_bracket_error() {
        let err = invert_monotone("sat", |x| Ok(x.min(1.0)), 2.0, Monotonicity::Increasing)
            .unwrap_err();
        assert!(matches!(err, KernelError::Bracket { .. }));
    }
}
