//! Globally adaptive Gauss–Kronrod (7/15) integration on a finite interval.

use crate::error::KernelError;

// 15-point Kronrod abscissae on [-1, 1] (non-negative half, descending) and
// their weights; every odd entry is also a 7-point Gauss node.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Controls for the numerical evaluation of the exact φ integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub relative_tolerance: f64,
    pub max_subdivisions: usize,
    /// Half-width of the integration window in standard deviations of the
    /// Gaussian factor. Must be at least 8.
    pub halfwidth_sigmas: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            relative_tolerance: 1e-10,
            max_subdivisions: 400,
            halfwidth_sigmas: 12.0,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<(), KernelError> {
        if !(self.relative_tolerance > 0.0 && self.relative_tolerance.is_finite()) {
            return Err(KernelError::Domain {
                function: "QuadratureConfig",
                value: self.relative_tolerance,
                domain: "relative_tolerance > 0",
            });
        }
        if !(self.halfwidth_sigmas >= 8.0 && self.halfwidth_sigmas.is_finite()) {
            return Err(KernelError::Domain {
                function: "QuadratureConfig",
                value: self.halfwidth_sigmas,
                domain: "halfwidth_sigmas >= 8",
            });
        }
        if self.max_subdivisions == 0 {
            return Err(KernelError::Domain {
                function: "QuadratureConfig",
                value: 0.0,
                domain: "max_subdivisions >= 1",
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Integrates `f` over `[a, b]`, bisecting the segment with the largest
/// error estimate until the summed estimate drops below
/// `relative_tolerance * |integral|`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<f64, KernelError> {
    let mut segments = vec![kronrod15(&f, a, b)];
    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        // Below this the error estimate is pure rounding noise.
        let noise = 50.0 * f64::EPSILON * segments.iter().map(|s| s.value.abs()).sum::<f64>();
        if error <= (cfg.relative_tolerance * value.abs()).max(noise) || error == 0.0 {
            return Ok(value);
        }
        if segments.len() >= cfg.max_subdivisions {
            return Err(KernelError::Quadrature {
                estimate: value,
                error,
            });
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|(_, l), (_, r)| l.error.total_cmp(&r.error))
            .expect("at least one segment");
        let s = segments.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        segments.push(kronrod15(&f, s.a, mid));
        segments.push(kronrod15(&f, mid, s.b));
    }
}
