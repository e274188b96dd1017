//! Construction-dissimilarity metrics: number of different positions (NDP)
//! between frozen sets, its accumulation over block lengths (ADE), and the
//! RMSE between two single-step kernels.

use std::collections::{BTreeMap, HashSet};
use std::io::Write;
use std::ops::RangeInclusive;

use crate::construction::{evolve_levels, select_frozen, CodeSpec, FrozenSet};
use crate::error::{Error, KernelError, Result};
use crate::kernels::{uniform_grid, KernelId, QuadratureConfig};

/// `|a \ reference|`: frozen positions of `a` that the reference does not
/// freeze.
pub fn ndp(a: &FrozenSet, reference: &FrozenSet) -> Result<usize> {
    if a.len() != reference.len() {
        return Err(Error::SizeMismatch {
            expected: reference.len(),
            actual: a.len(),
        });
    }
    let r: HashSet<usize> = reference.indices().iter().copied().collect();
    Ok(a.indices().iter().filter(|i| !r.contains(i)).count())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NdpReport {
    /// `N = 2^level`.
    pub level: u32,
    pub n: usize,
    pub k: usize,
    pub method: String,
    pub reference: String,
    pub ndp: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdeReport {
    pub method: String,
    pub reference: String,
    pub levels: RangeInclusive<u32>,
    pub per_level: BTreeMap<u32, NdpReport>,
    pub ade: usize,
}

impl AdeReport {
    pub fn ndp_at(&self, level: u32) -> Option<usize> {
        self.per_level.get(&level).map(|r| r.ndp)
    }

    /// `n,N,K,method,reference,ndp` rows, then `ADE,<value>`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_comparison_csv(out, std::slice::from_ref(self))
    }
}

/// Writes several method/reference comparisons into one CSV; the trailing
/// summary carries the ADE of each report in order.
pub fn write_comparison_csv<W: Write>(mut out: W, reports: &[AdeReport]) -> Result<()> {
    let io = |e| Error::io("<comparison csv>", e);
    writeln!(out, "n,N,K,method,reference,ndp").map_err(io)?;
    for report in reports {
        for r in report.per_level.values() {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.level, r.n, r.k, r.method, r.reference, r.ndp
            )
            .map_err(io)?;
        }
    }
    for report in reports {
        writeln!(out, "ADE,{}", report.ade).map_err(io)?;
    }
    out.flush().map_err(io)
}

/// NDP of `method` against `reference` at every level in `levels`, with
/// `K = round(rate·2^n)`, and its sum.
pub fn ade(
    method: &KernelId,
    reference: &KernelId,
    levels: RangeInclusive<u32>,
    rate: f64,
    design_snr_db: f64,
    cfg: &QuadratureConfig,
) -> Result<AdeReport> {
    let (lo, hi) = (*levels.start(), *levels.end());
    if lo == 0 || lo > hi {
        return Err(Error::InvalidArgument(format!(
            "level range {lo}..{hi} must be non-empty and start at 1 or above"
        )));
    }
    if !(rate > 0.0 && rate < 1.0) {
        return Err(Error::InvalidArgument(format!("rate {rate} not in (0, 1)")));
    }
    // One deep evolution per method yields every shallower block length.
    let (ours, theirs) = rayon::join(
        || evolve_levels(hi, design_snr_db, method, cfg),
        || evolve_levels(hi, design_snr_db, reference, cfg),
    );
    let (ours, theirs) = (ours?, theirs?);
    let mut per_level = BTreeMap::new();
    for level in lo..=hi {
        let spec = CodeSpec::with_rate(1 << level, rate, design_snr_db)?;
        let idx = level as usize - 1;
        let a = select_frozen(&ours[idx], &spec)?;
        let r = select_frozen(&theirs[idx], &spec)?;
        per_level.insert(
            level,
            NdpReport {
                level,
                n: spec.n(),
                k: spec.k(),
                method: method.name().to_string(),
                reference: reference.name().to_string(),
                ndp: ndp(&a, &r)?,
            },
        );
    }
    let ade = per_level.values().map(|r| r.ndp).sum();
    Ok(AdeReport {
        method: method.name().to_string(),
        reference: reference.name().to_string(),
        levels,
        per_level,
        ade,
    })
}

/// Root-mean-square difference of two maps over the uniform grid
/// `lo, lo + step, ..., hi`.
pub fn kernel_rmse<A, B>(a: A, b: B, lo: f64, hi: f64, step: f64) -> Result<f64>
where
    A: Fn(f64) -> Result<f64, KernelError>,
    B: Fn(f64) -> Result<f64, KernelError>,
{
    let grid = uniform_grid(lo, hi, step)?;
    let mut sum = 0.0;
    for &x in &grid {
        let d = a(x)? - b(x)?;
        sum += d * d;
    }
    Ok((sum / grid.len() as f64).sqrt())
}

/// [`kernel_rmse`] between the single-step maps of two kernels.
pub fn kernel_step_rmse(
    a: &KernelId,
    b: &KernelId,
    lo: f64,
    hi: f64,
    step: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    kernel_rmse(|x| a.step(x, cfg), |x| b.step(x, cfg), lo, hi, step)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{apga_step, spga_step};

    fn set(n: usize, idx: &[usize]) -> FrozenSet {
        FrozenSet::new(n, idx.to_vec()).unwrap()
    }

    #[test]
    fn ndp_basics() {
        let a = set(8, &[0, 1, 2, 4]);
        assert_eq!(ndp(&a, &a).unwrap(), 0);
        let b = set(8, &[0, 1, 2, 3]);
        assert_eq!(ndp(&a, &b).unwrap(), 1);
        assert_eq!(ndp(&b, &a).unwrap(), 1);
        let c = set(8, &[0, 1, 2]);
        assert!(matches!(ndp(&a, &c), Err(Error::SizeMismatch { .. })));
    }

    #[test]
    fn ade_identity_is_zero() {
        let r = ade(
            &KernelId::Spga,
            &KernelId::Spga,
            3..=8,
            0.5,
            1.0,
            &QuadratureConfig::default(),
        )
        .unwrap();
        assert_eq!(r.ade, 0);
        assert_eq!(r.per_level.len(), 6);
    }

    #[test]
    fn ade_rejects_bad_ranges() {
        let cfg = QuadratureConfig::default();
        #[allow(clippy::reversed_empty_ranges)]
        let empty = 5..=4;
        assert!(ade(&KernelId::Spga, &KernelId::Apga, empty, 0.5, 1.0, &cfg).is_err());
        assert!(ade(&KernelId::Spga, &KernelId::Apga, 0..=4, 0.5, 1.0, &cfg).is_err());
        assert!(ade(&KernelId::Spga, &KernelId::Apga, 1..=4, 1.0, 1.0, &cfg).is_err());
    }

    #[test]
    fn rmse_identity_and_symmetry() {
        let z = kernel_rmse(spga_step, spga_step, 0.0, 20.0, 0.01).unwrap();
        assert_eq!(z, 0.0);
        let ab = kernel_rmse(spga_step, apga_step, 0.0, 20.0, 0.01).unwrap();
        let ba = kernel_rmse(apga_step, spga_step, 0.0, 20.0, 0.01).unwrap();
        assert_eq!(ab, ba);
        assert!(ab > 0.0);
        let c = kernel_rmse(|_| Ok(1.0), |_| Ok(0.0), 0.0, 1.0, 0.5).unwrap();
        assert_eq!(c, 1.0);
    }

    #[test]
    fn comparison_csv_layout() {
        let r = ade(
            &KernelId::Apga,
            &KernelId::Apga,
            2..=3,
            0.5,
            1.0,
            &QuadratureConfig::default(),
        )
        .unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "n,N,K,method,reference,ndp\n2,4,2,apga,apga,0\n3,8,4,apga,apga,0\nADE,0\n"
        );
    }
}
