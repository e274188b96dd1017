//! BPSK over AWGN Monte-Carlo harness for FER and BER.
//!
//! Frames are grouped in batches of [`BATCH_FRAMES`]. Batch `b` at SNR point
//! `p` draws every payload bit and noise sample from a ChaCha stream keyed by
//! `(seed, p)` with stream id `b`, and batches are tallied in index order, so
//! the counters do not depend on how many workers ran them.

use std::io::{Read, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::codec::{PolarCode, ScDecoder};
use crate::construction::{construct_with, CodeSpec, FrozenSet};
use crate::error::{Error, Result};
use crate::kernels::{KernelId, QuadratureConfig};

pub const BATCH_FRAMES: u64 = 1024;
pub const DEFAULT_TARGET_FRAME_ERRORS: u64 = 200;
pub const DEFAULT_MAX_FRAMES: u64 = 100_000_000;
/// Channel LLRs are clipped here so a noiseless channel stays finite.
pub const LLR_LIMIT: f64 = 1000.0;

pub const CSV_HEADER: [&str; 7] = [
    "snr_db",
    "frames",
    "frame_errors",
    "bit_errors",
    "fer",
    "ber",
    "seed",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Channel {
    #[default]
    Awgn,
    /// Zero noise variance; useful as a pipeline sanity check.
    Noiseless,
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub spec: CodeSpec,
    pub kernel: KernelId,
    /// Operating points as Eb/N0 in dB.
    pub snr_points_db: Vec<f64>,
    pub target_frame_errors: u64,
    pub max_frames: u64,
    pub seed: u64,
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
    pub channel: Channel,
}

impl SimConfig {
    pub fn new(spec: CodeSpec, kernel: KernelId) -> Self {
        Self {
            spec,
            kernel,
            snr_points_db: Vec::new(),
            target_frame_errors: DEFAULT_TARGET_FRAME_ERRORS,
            max_frames: DEFAULT_MAX_FRAMES,
            seed: 0,
            workers: None,
            channel: Channel::Awgn,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.target_frame_errors == 0 {
            return Err(Error::InvalidArgument(
                "target frame errors must be at least 1".into(),
            ));
        }
        if self.max_frames < self.target_frame_errors {
            return Err(Error::InvalidArgument(format!(
                "max frames {} is below the target of {} frame errors",
                self.max_frames, self.target_frame_errors
            )));
        }
        if let Some(s) = self.snr_points_db.iter().find(|s| !s.is_finite()) {
            return Err(Error::InvalidArgument(format!("SNR point {s} is not finite")));
        }
        if self.workers == Some(0) {
            return Err(Error::InvalidArgument("worker count must be positive".into()));
        }
        Ok(())
    }
}

/// Counters for one SNR point.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub snr_db: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub bit_errors: u64,
    pub fer: f64,
    pub ber: f64,
    pub seed: u64,
}

impl SimResult {
    fn from_counts(snr_db: f64, seed: u64, k: usize, t: Tally) -> Self {
        let frames = t.frames.max(1) as f64;
        Self {
            snr_db,
            frames: t.frames,
            frame_errors: t.frame_errors,
            bit_errors: t.bit_errors,
            fer: t.frame_errors as f64 / frames,
            ber: t.bit_errors as f64 / (frames * k as f64),
            seed,
        }
    }

    /// True when the run ended at the frame cap rather than at the
    /// frame-error target.
    pub fn hit_frame_cap(&self, target_frame_errors: u64) -> bool {
        self.frame_errors < target_frame_errors
    }

    /// Two-sided 95% Wilson interval for the FER.
    pub fn fer_interval(&self) -> (f64, f64) {
        wilson_interval(self.frame_errors, self.frames, 1.959_963_984_540_054)
    }
}

/// Wilson score interval for `successes` out of `trials` at normal quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Noise standard deviation per real dimension at Eb/N0 `snr_db`:
/// `σ² = 1/(2·R·10^(snr/10))`.
pub fn noise_sigma(rate: f64, snr_db: f64) -> f64 {
    (1.0 / (2.0 * rate * 10f64.powf(snr_db / 10.0))).sqrt()
}

/// Generator for batch `batch` of SNR point `point`.
pub fn batch_rng(seed: u64, point: u64, batch: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&point.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(batch);
    rng
}

/// BPSK-maps `codeword` (bit b -> 1 - 2b), adds N(0, σ²) noise, and writes
/// the channel LLRs `2y/σ²`. With `sigma == 0` the LLRs saturate at
/// `±LLR_LIMIT`.
pub fn transmit<R: Rng>(codeword: &[u8], sigma: f64, rng: &mut R, llr: &mut [f64]) {
    debug_assert_eq!(codeword.len(), llr.len());
    if sigma == 0.0 {
        for (l, &b) in llr.iter_mut().zip(codeword) {
            *l = if b == 0 { LLR_LIMIT } else { -LLR_LIMIT };
        }
        return;
    }
    let scale = 2.0 / (sigma * sigma);
    for (l, &b) in llr.iter_mut().zip(codeword) {
        let noise: f64 = rng.sample(StandardNormal);
        let y = 1.0 - 2.0 * f64::from(b) + sigma * noise;
        *l = (scale * y).clamp(-LLR_LIMIT, LLR_LIMIT);
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Tally {
    frames: u64,
    frame_errors: u64,
    bit_errors: u64,
}

/// Per-worker buffers.
struct Workspace {
    decoder: ScDecoder,
    info: Vec<u8>,
    decoded: Vec<u8>,
    codeword: Vec<u8>,
    llr: Vec<f64>,
}

impl Workspace {
    fn new(code: &PolarCode) -> Self {
        Self {
            decoder: ScDecoder::new(code.n()),
            info: vec![0; code.k()],
            decoded: vec![0; code.k()],
            codeword: vec![0; code.n()],
            llr: vec![0.0; code.n()],
        }
    }
}

/// A code plus its simulation settings.
#[derive(Debug, Clone)]
pub struct Simulator {
    cfg: SimConfig,
    code: PolarCode,
}

impl Simulator {
    /// Constructs the code from `cfg.spec` with `cfg.kernel`.
    pub fn new(cfg: SimConfig) -> Result<Self> {
        let frozen = construct_with(&cfg.spec, &cfg.kernel, &QuadratureConfig::default())?;
        Self::with_frozen(cfg, &frozen)
    }

    /// Uses a precomputed frozen set, which must match `cfg.spec`.
    pub fn with_frozen(cfg: SimConfig, frozen: &FrozenSet) -> Result<Self> {
        cfg.validate()?;
        if frozen.n() != cfg.spec.n() {
            return Err(Error::SizeMismatch {
                expected: cfg.spec.n(),
                actual: frozen.n(),
            });
        }
        if frozen.k() != cfg.spec.k() {
            return Err(Error::SizeMismatch {
                expected: cfg.spec.k(),
                actual: frozen.k(),
            });
        }
        Ok(Self {
            code: PolarCode::new(frozen),
            cfg,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn code(&self) -> &PolarCode {
        &self.code
    }

    pub fn run_sweep(&self) -> Result<Vec<SimResult>> {
        self.cfg
            .snr_points_db
            .iter()
            .enumerate()
            .map(|(p, &snr)| self.run_indexed(p, snr))
            .collect()
    }

    /// Runs a single operating point; it is keyed as point 0 of a sweep.
    pub fn run_point(&self, snr_db: f64) -> Result<SimResult> {
        self.run_indexed(0, snr_db)
    }

    /// Runs the operating point that sits at position `point` of a sweep,
    /// drawing the same random streams the sweep would.
    pub fn run_indexed(&self, point: usize, snr_db: f64) -> Result<SimResult> {
        if !snr_db.is_finite() {
            return Err(Error::InvalidArgument(format!("SNR {snr_db} is not finite")));
        }
        self.with_pool(|| Ok(self.point(point as u64, snr_db)))
    }

    fn with_pool<T: Send>(&self, job: impl FnOnce() -> Result<T> + Send) -> Result<T> {
        match self.cfg.workers {
            None => job(),
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidArgument(format!("cannot start {n} workers: {e}")))?
                .install(job),
        }
    }

    fn point(&self, point: u64, snr_db: f64) -> SimResult {
        let sigma = match self.cfg.channel {
            Channel::Awgn => noise_sigma(self.cfg.spec.rate(), snr_db),
            Channel::Noiseless => 0.0,
        };
        let target = self.cfg.target_frame_errors;
        let max_frames = self.cfg.max_frames;
        let batches = max_frames.div_ceil(BATCH_FRAMES);
        // Each wave is a few batches per worker; only the in-order prefix up
        // to the stopping batch is kept, which makes the wave size irrelevant
        // to the result.
        let wave = 2 * rayon::current_num_threads() as u64;
        let mut total = Tally::default();
        let mut next = 0;
        while next < batches && total.frame_errors < target {
            let end = (next + wave).min(batches);
            let tallies: Vec<Tally> = (next..end)
                .into_par_iter()
                .map_init(
                    || Workspace::new(&self.code),
                    |ws, b| {
                        let frames = BATCH_FRAMES.min(max_frames - b * BATCH_FRAMES);
                        self.batch(ws, batch_rng(self.cfg.seed, point, b), frames, sigma)
                    },
                )
                .collect();
            for t in tallies {
                total.frames += t.frames;
                total.frame_errors += t.frame_errors;
                total.bit_errors += t.bit_errors;
                if total.frame_errors >= target {
                    break;
                }
            }
            next = end;
        }
        SimResult::from_counts(snr_db, self.cfg.seed, self.code.k(), total)
    }

    fn batch(&self, ws: &mut Workspace, mut rng: ChaCha8Rng, frames: u64, sigma: f64) -> Tally {
        let mut t = Tally::default();
        for _ in 0..frames {
            for chunk in ws.info.chunks_mut(64) {
                let word: u64 = rng.random();
                for (i, bit) in chunk.iter_mut().enumerate() {
                    *bit = ((word >> i) & 1) as u8;
                }
            }
            self.code
                .encode_into(&ws.info, &mut ws.codeword)
                .expect("buffers sized from the code");
            transmit(&ws.codeword, sigma, &mut rng, &mut ws.llr);
            ws.decoder
                .decode_info(&ws.llr, &self.code, &mut ws.decoded)
                .expect("buffers sized from the code");
            let wrong = ws
                .info
                .iter()
                .zip(&ws.decoded)
                .filter(|(a, b)| a != b)
                .count() as u64;
            t.frames += 1;
            t.bit_errors += wrong;
            t.frame_errors += u64::from(wrong > 0);
        }
        t
    }
}

pub fn run_point(cfg: &SimConfig, snr_db: f64) -> Result<SimResult> {
    Simulator::new(cfg.clone())?.run_point(snr_db)
}

pub fn run_sweep(cfg: &SimConfig) -> Result<Vec<SimResult>> {
    if cfg.snr_points_db.is_empty() {
        cfg.validate()?;
        return Ok(Vec::new());
    }
    Simulator::new(cfg.clone())?.run_sweep()
}

/// Writes the sweep CSV. Floats use the shortest representation that
/// parses back to the same value.
pub fn write_sweep_csv<W: Write>(out: W, results: &[SimResult]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in results {
        w.write_record([
            r.snr_db.to_string(),
            r.frames.to_string(),
            r.frame_errors.to_string(),
            r.bit_errors.to_string(),
            r.fer.to_string(),
            r.ber.to_string(),
            r.seed.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<sweep csv>", e))
}

pub fn read_sweep_csv<R: Read>(input: R, path: &Path) -> Result<Vec<SimResult>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Format {
            path: path.to_path_buf(),
            line: 1,
            message: format!("unexpected header {:?}", header.iter().collect::<Vec<_>>()),
        });
    }
    let mut out = Vec::new();
    for (row, record) in r.records().enumerate() {
        let record = record?;
        let line = row + 2;
        let bad = |field: &str| Error::Format {
            path: path.to_path_buf(),
            line,
            message: format!("invalid {field}"),
        };
        let int = |i: usize| record[i].parse::<u64>().map_err(|_| bad(CSV_HEADER[i]));
        let real = |i: usize| record[i].parse::<f64>().map_err(|_| bad(CSV_HEADER[i]));
        out.push(SimResult {
            snr_db: real(0)?,
            frames: int(1)?,
            frame_errors: int(2)?,
            bit_errors: int(3)?,
            fer: real(4)?,
            ber: real(5)?,
            seed: int(6)?,
        });
    }
    Ok(out)
}

/// `a:step:b` inclusive of both ends when `b` lies on the grid.
pub fn parse_snr_range(text: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidArgument(format!("SNR range `{text}` is not `start:step:stop`"));
    let parts: Vec<f64> = text
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    match parts[..] {
        [single] if single.is_finite() => Ok(vec![single]),
        [lo, step, hi] if lo.is_finite() && hi.is_finite() && step > 0.0 && lo <= hi => {
            let count = ((hi - lo) / step + 1e-9).floor() as usize;
            // Multiplying from the start avoids accumulated drift.
            Ok((0..=count).map(|i| lo + i as f64 * step).collect())
        }
        _ => Err(bad()),
    }
}
