//! Five-segment polynomial check-node maps. Both share the breakpoints
//! {0.2, 1, 6, 20}; segments are closed on the right.

use crate::error::KernelError;

pub const BREAKPOINTS: [f64; 4] = [0.2, 1.0, 6.0, 20.0];

/// Cubic coefficients `[c3, c2, c1, c0]` per segment.
type Segments = [[f64; 4]; 5];

const APGA: Segments = [
    [0.0, 0.323, 0.0, 0.0],
    [-0.1, 0.43, -0.039, -0.005],
    [-0.003, 0.063, 0.432, -0.2],
    [-0.0002, 0.012, 0.777, -1.023],
    [0.0, 0.0, 0.9803, -2.109],
];

const SPGA: Segments = [
    [-0.256, 0.461, 0.002, 0.0],
    [-0.064, 0.294, 0.05, -0.004],
    [-0.005, 0.092, 0.316, -0.133],
    [0.0, 0.002, 0.908, -1.588],
    [0.0, 0.0, 0.995, -2.459],
];

fn segment_index(x: f64) -> usize {
    BREAKPOINTS.iter().take_while(|&&b| x > b).count()
}

fn horner(c: &[f64; 4], x: f64) -> f64 {
    ((c[0] * x + c[1]) * x + c[2]) * x + c[3]
}

fn eval(
    function: &'static str,
    table: &Segments,
    x: f64,
    segment: Option<usize>,
) -> Result<f64, KernelError> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(KernelError::Domain {
            function,
            value: x,
            domain: "[0, inf)",
        });
    }
    let idx = segment.unwrap_or_else(|| segment_index(x));
    Ok(horner(&table[idx], x).max(0.0))
}

/// Polynomial approximation of the PGA check-node update.
pub fn apga_step(x: f64) -> Result<f64, KernelError> {
    eval("apga_step", &APGA, x, None)
}

/// Polynomial approximation of the exact check-node update.
pub fn spga_step(x: f64) -> Result<f64, KernelError> {
    eval("spga_step", &SPGA, x, None)
}

/// Which polynomial map to inspect with [`breakpoint_gaps`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolynomialMap {
    Apga,
    Spga,
}

/// Signed jump `right(b) - left(b)` at each breakpoint, where `left` is the
/// segment that owns `b` and `right` is the next segment's polynomial.
pub fn breakpoint_gaps(map: PolynomialMap) -> [f64; 4] {
    let table = match map {
        PolynomialMap::Apga => &APGA,
        PolynomialMap::Spga => &SPGA,
    };
    let mut gaps = [0.0; 4];
    for (i, &b) in BREAKPOINTS.iter().enumerate() {
        gaps[i] = horner(&table[i + 1], b) - horner(&table[i], b);
    }
    gaps
}
