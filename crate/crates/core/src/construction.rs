//! Mean-LLR density evolution over the polarization tree and frozen-set
//! selection.
//!
//! Channels are indexed in natural order for the encoder `x = u·F^{⊗n}`
//! (no bit reversal): level `l + 1` is built from level `l` by
//! `next[2i] = step(cur[i])`, `next[2i + 1] = 2·cur[i]`.

use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernels::{KernelId, QuadratureConfig};

pub const DEFAULT_DESIGN_SNR_DB: f64 = 1.0;

/// Parameters identifying one polar code design.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodeSpec {
    n: usize,
    k: usize,
    design_snr_db: f64,
}

impl CodeSpec {
    pub fn new(n: usize, k: usize, design_snr_db: f64) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::InvalidSpec(format!(
                "block length {n} is not a power of two >= 2"
            )));
        }
        if k == 0 || k >= n {
            return Err(Error::InvalidSpec(format!(
                "information length {k} must satisfy 0 < K < N = {n}"
            )));
        }
        if !design_snr_db.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "design SNR {design_snr_db} is not finite"
            )));
        }
        Ok(Self {
            n,
            k,
            design_snr_db,
        })
    }

    /// `K = round(rate·N)`, ties rounded up.
    pub fn with_rate(n: usize, rate: f64, design_snr_db: f64) -> Result<Self> {
        let k = (rate * n as f64 + 0.5).floor();
        if !(k >= 0.0) {
            return Err(Error::InvalidSpec(format!("rate {rate} is invalid")));
        }
        Self::new(n, k as usize, design_snr_db)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn levels(&self) -> u32 {
        self.n.trailing_zeros()
    }

    pub fn design_snr_db(&self) -> f64 {
        self.design_snr_db
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }
}

/// Per-channel mean LLRs, index `i` being synthetic channel `W_N^(i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReliabilityVector(Vec<f64>);

impl ReliabilityVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::InvalidArgument(format!(
                "reliability[{i}] = {v} is not a finite nonnegative value"
            )));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `index,reliability` CSV.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", "reliability"])?;
        for (i, v) in self.0.iter().enumerate() {
            w.write_record([i.to_string(), v.to_string()])?;
        }
        w.flush().map_err(|e| Error::io("<reliability csv>", e))?;
        Ok(())
    }
}

/// Sorted indices of the frozen (least reliable) channels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrozenSet {
    n: usize,
    indices: Vec<usize>,
}

impl FrozenSet {
    pub fn new(n: usize, mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument("duplicate frozen index".into()));
        }
        if let Some(&i) = indices.last().filter(|&&i| i >= n) {
            return Err(Error::InvalidArgument(format!(
                "frozen index {i} out of range for N = {n}"
            )));
        }
        Ok(Self { n, indices })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.n - self.indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// `mask[i]` is true when channel `i` is frozen.
    pub fn mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.n];
        for &i in &self.indices {
            m[i] = true;
        }
        m
    }

    /// Ascending information positions.
    pub fn info_positions(&self) -> Vec<usize> {
        let m = self.mask();
        (0..self.n).filter(|&i| !m[i]).collect()
    }
}

/// Header plus frozen set as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct FrozenSetFile {
    pub spec: CodeSpec,
    pub kernel: String,
    pub frozen: FrozenSet,
}

impl FrozenSetFile {
    /// Line 1: `N K designSnrDb kernel`; then one frozen index per line.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{} {} {} {}\n",
            self.spec.n(),
            self.spec.k(),
            self.spec.design_snr_db(),
            self.kernel
        );
        for i in self.frozen.indices() {
            let _ = writeln!(s, "{i}");
        }
        s
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        out.write_all(self.to_text().as_bytes())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_from(file, path)
    }

    pub fn read_from<R: Read>(input: R, path: &Path) -> Result<Self> {
        let bad = |line: usize, message: String| Error::Format {
            path: path.to_path_buf(),
            line,
            message,
        };
        let mut lines = BufReader::new(input).lines();
        let header = lines
            .next()
            .ok_or_else(|| bad(1, "empty file".into()))?
            .map_err(|e| Error::io(path, e))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(bad(1, format!("expected `N K designSnrDb kernel`, got {header:?}")));
        }
        let n: usize = fields[0]
            .parse()
            .map_err(|_| bad(1, format!("bad N {:?}", fields[0])))?;
        let k: usize = fields[1]
            .parse()
            .map_err(|_| bad(1, format!("bad K {:?}", fields[1])))?;
        let snr: f64 = fields[2]
            .parse()
            .map_err(|_| bad(1, format!("bad design SNR {:?}", fields[2])))?;
        let spec = CodeSpec::new(n, k, snr).map_err(|e| bad(1, e.to_string()))?;
        let mut indices = Vec::with_capacity(n - k);
        let mut last = None;
        for (no, line) in lines.enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            let idx: usize = t
                .parse()
                .map_err(|_| bad(no + 2, format!("bad index {t:?}")))?;
            if last.is_some_and(|l| idx <= l) {
                return Err(bad(no + 2, "indices must be strictly ascending".into()));
            }
            last = Some(idx);
            indices.push(idx);
        }
        if indices.len() != n - k {
            return Err(bad(
                1,
                format!("expected {} frozen indices, found {}", n - k, indices.len()),
            ));
        }
        let frozen = FrozenSet::new(n, indices).map_err(|e| bad(1, e.to_string()))?;
        Ok(Self {
            spec,
            kernel: fields[3].to_string(),
            frozen,
        })
    }
}

/// Mean LLR of the channel itself, `4·10^(SNR/10)` (equal to `2/σ²`).
pub fn initial_llr(design_snr_db: f64) -> f64 {
    4.0 * 10f64.powf(design_snr_db / 10.0)
}

fn evolve_level(
    current: &[f64],
    level: u32,
    kernel: &KernelId,
    cfg: &QuadratureConfig,
) -> Result<Vec<f64>> {
    // Each step is independent, and the exact kernel costs a few quadratures,
    // so deep levels are spread across the rayon pool.
    let odd: Vec<f64> = current
        .par_iter()
        .with_min_len(64)
        .enumerate()
        .map(|(index, &v)| {
            kernel.step(v, cfg).map_err(|source| Error::Evolve {
                level,
                index,
                source,
            })
        })
        .collect::<Result<_>>()?;
    Ok(odd
        .iter()
        .zip(current)
        .flat_map(|(&o, &v)| [o, 2.0 * v])
        .collect())
}

/// Runs the recursion with an explicit quadrature configuration.
pub fn evolve_with(
    spec: &CodeSpec,
    kernel: &KernelId,
    cfg: &QuadratureConfig,
) -> Result<ReliabilityVector> {
    let mut levels = evolve_levels(spec.levels(), spec.design_snr_db(), kernel, cfg)?;
    Ok(levels.pop().expect("at least one level"))
}

/// Reliabilities for every block length `2^1 ..= 2^max_level` in one pass;
/// entry `l - 1` is the vector for `N = 2^l`.
pub fn evolve_levels(
    max_level: u32,
    design_snr_db: f64,
    kernel: &KernelId,
    cfg: &QuadratureConfig,
) -> Result<Vec<ReliabilityVector>> {
    if max_level == 0 {
        return Err(Error::InvalidArgument("need at least one level".into()));
    }
    let mut current = vec![initial_llr(design_snr_db)];
    let mut out = Vec::with_capacity(max_level as usize);
    for level in 1..=max_level {
        current = evolve_level(&current, level, kernel, cfg)?;
        out.push(ReliabilityVector(current.clone()));
    }
    Ok(out)
}

pub fn evolve(spec: &CodeSpec, kernel: &KernelId) -> Result<ReliabilityVector> {
    evolve_with(spec, kernel, &QuadratureConfig::default())
}

/// Freezes the `N - K` least reliable channels; among equal reliabilities
/// the smaller index is frozen first.
pub fn select_frozen(rel: &ReliabilityVector, spec: &CodeSpec) -> Result<FrozenSet> {
    if rel.len() != spec.n() {
        return Err(Error::SizeMismatch {
            expected: spec.n(),
            actual: rel.len(),
        });
    }
    let v = rel.values();
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[a].total_cmp(&v[b]).then(a.cmp(&b)));
    order.truncate(spec.n() - spec.k());
    FrozenSet::new(spec.n(), order)
}

pub fn construct_with(
    spec: &CodeSpec,
    kernel: &KernelId,
    cfg: &QuadratureConfig,
) -> Result<FrozenSet> {
    select_frozen(&evolve_with(spec, kernel, cfg)?, spec)
}

pub fn construct(spec: &CodeSpec, kernel: &KernelId) -> Result<FrozenSet> {
    construct_with(spec, kernel, &QuadratureConfig::default())
}
