//! Command-line front end: `construct`, `simulate`, `compare` and
//! `kernel-dump`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::construction::{
    construct_with, evolve_with, select_frozen, CodeSpec, FrozenSetFile, DEFAULT_DESIGN_SNR_DB,
};
use crate::error::{Error, Result};
use crate::kernels::{kernel_table, uniform_grid, write_kernel_csv, DumpTarget, KernelId, QuadratureConfig};
use crate::metrics::{ade, write_comparison_csv};
use crate::simulation::{
    parse_snr_range, write_sweep_csv, SimConfig, Simulator, DEFAULT_MAX_FRAMES,
    DEFAULT_TARGET_FRAME_ERRORS,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_CONVERGENCE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "pga-polar", version, about = "Polar code construction, comparison and simulation")]
pub struct Cli {
    /// Worker threads (default: all available cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Suppress progress and summary messages.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a frozen set and write it in the frozen-set file format.
    Construct(ConstructArgs),
    /// Monte-Carlo FER/BER sweep over BPSK/AWGN with SC decoding.
    Simulate(SimulateArgs),
    /// NDP per block length and ADE of methods against a reference.
    Compare(CompareArgs),
    /// Tabulate a kernel as `x,value` CSV.
    KernelDump(KernelDumpArgs),
}

/// Code dimension given as a rate (`1/2`, `0.5`) or as K directly (`512`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateArg {
    Rate(f64),
    K(usize),
}

impl FromStr for RateArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        let rate = if let Some((num, den)) = s.split_once('/') {
            let num: f64 = num.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
            let den: f64 = den.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
            num / den
        } else if let Ok(k) = s.parse::<usize>() {
            return Ok(RateArg::K(k));
        } else {
            s.parse().map_err(|_| format!("{s:?} is neither a rate nor K"))?
        };
        if rate > 0.0 && rate < 1.0 {
            Ok(RateArg::Rate(rate))
        } else {
            Err(format!("rate {s} is not in (0, 1)"))
        }
    }
}

impl RateArg {
    fn spec(self, n: usize, design_snr_db: f64) -> Result<CodeSpec> {
        match self {
            RateArg::Rate(r) => CodeSpec::with_rate(n, r, design_snr_db),
            RateArg::K(k) => CodeSpec::new(n, k, design_snr_db),
        }
    }
}

/// Inclusive level range `a..b` (or a single level `a`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelRange(pub RangeInclusive<u32>);

impl FromStr for LevelRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| format!("bad level {t:?} in {s:?}"))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if lo == 0 || lo > hi || hi > 30 {
            return Err(format!("level range {s:?} must satisfy 1 <= a <= b <= 30"));
        }
        Ok(LevelRange(lo..=hi))
    }
}

#[derive(Debug, Clone, Args)]
pub struct CodeArgs {
    /// Block length N (a power of two).
    #[arg(long)]
    pub n: Option<usize>,
    /// Information bits K.
    #[arg(long, conflicts_with = "rate")]
    pub k: Option<usize>,
    /// Code rate as a fraction (`1/2`) or K directly.
    #[arg(long)]
    pub rate: Option<RateArg>,
    /// Design SNR in dB.
    #[arg(long, default_value_t = DEFAULT_DESIGN_SNR_DB, allow_negative_numbers = true)]
    pub design_snr: f64,
}

impl CodeArgs {
    fn spec(&self) -> Result<CodeSpec> {
        let n = self
            .n
            .ok_or_else(|| Error::InvalidArgument("--n is required".into()))?;
        let dim = match (self.k, self.rate) {
            (Some(k), _) => RateArg::K(k),
            (None, Some(r)) => r,
            (None, None) => {
                return Err(Error::InvalidArgument("one of --k or --rate is required".into()))
            }
        };
        dim.spec(n, self.design_snr)
    }
}

#[derive(Debug, Clone, Args)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// One of ega, aga, pga, apga, spga.
    #[arg(long)]
    pub kernel: KernelId,
    /// Frozen-set file; written to standard output when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Also write the per-channel reliabilities as `index,reliability` CSV.
    #[arg(long)]
    pub reliability: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Construction kernel (ignored with --frozen).
    #[arg(long, default_value = "ega")]
    pub kernel: KernelId,
    /// Use a frozen-set file instead of constructing the code.
    #[arg(long, conflicts_with_all = ["n", "k", "rate"])]
    pub frozen: Option<PathBuf>,
    /// Eb/N0 points: `a:step:b`, a single value, or a comma-separated list
    /// of either.
    #[arg(long, required = true, allow_hyphen_values = true)]
    pub snr: String,
    /// Base seed; every SNR point and batch derives its own stream from it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Stop a point after this many frame errors.
    #[arg(long, default_value_t = DEFAULT_TARGET_FRAME_ERRORS)]
    pub target_errors: u64,
    /// Stop a point after this many frames even if the target is not reached.
    #[arg(long, default_value_t = DEFAULT_MAX_FRAMES)]
    pub max_frames: u64,
    /// Sweep CSV; written to standard output when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    /// Methods to compare, comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub methods: Vec<KernelId>,
    /// Reference kernel the methods are measured against.
    #[arg(long)]
    pub reference: KernelId,
    /// Code rate as a fraction, e.g. `1/3`.
    #[arg(long)]
    pub rate: RateArg,
    /// Inclusive level range `a..b`; N runs over 2^a ..= 2^b.
    #[arg(long)]
    pub levels: LevelRange,
    #[arg(long, default_value_t = DEFAULT_DESIGN_SNR_DB, allow_negative_numbers = true)]
    pub design_snr: f64,
    /// Comparison CSV; written to standard output when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Curve {
    /// φ for kernels that define one (ega, aga, pga), the step map otherwise.
    Auto,
    Phi,
    Step,
}

#[derive(Debug, Clone, Args)]
pub struct KernelDumpArgs {
    /// One of ega, aga, pga, apga, spga.
    #[arg(long)]
    pub kernel: KernelId,
    /// First abscissa.
    #[arg(long, allow_negative_numbers = true)]
    pub lo: f64,
    /// Last abscissa (inclusive when it falls on the grid).
    #[arg(long, allow_negative_numbers = true)]
    pub hi: f64,
    /// Grid spacing, positive.
    #[arg(long, allow_negative_numbers = true)]
    pub step: f64,
    #[arg(long, value_enum, default_value_t = Curve::Auto)]
    pub curve: Curve,
    /// CSV destination; standard output when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

/// Maps an error to the process exit status.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        e if e.is_convergence() => EXIT_CONVERGENCE,
        Error::Io { .. } | Error::Format { .. } | Error::Csv(_) => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

/// Runs one parsed command. `stdout` receives primary output when no `--out`
/// path is given; `stderr` receives progress unless `--quiet`.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let mut ctx = Context {
        stdout,
        stderr,
        quiet: cli.quiet,
    };
    match &cli.command {
        Command::Construct(a) => cmd_construct(a, &mut ctx),
        Command::Simulate(a) => cmd_simulate(a, &mut ctx),
        Command::Compare(a) => cmd_compare(a, &mut ctx),
        Command::KernelDump(a) => cmd_kernel_dump(a, &mut ctx),
    }
}

struct Context<'a> {
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
    quiet: bool,
}

impl Context<'_> {
    fn note(&mut self, msg: std::fmt::Arguments) {
        if !self.quiet {
            // Progress output is best-effort.
            let _ = writeln!(self.stderr, "{msg}");
        }
    }

    /// Runs `write` against the file at `path`, or standard output.
    fn emit(&mut self, path: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
        match path {
            Some(p) => {
                let file = File::create(p).map_err(|e| Error::io(p, e))?;
                let mut w = BufWriter::new(file);
                write(&mut w)?;
                w.flush().map_err(|e| Error::io(p, e))
            }
            None => {
                write(&mut *self.stdout)?;
                self.stdout.flush().map_err(|e| Error::io("<stdout>", e))
            }
        }
    }
}

fn cmd_construct(a: &ConstructArgs, ctx: &mut Context) -> Result<()> {
    let spec = a.code.spec()?;
    let cfg = QuadratureConfig::default();
    let rel = evolve_with(&spec, &a.kernel, &cfg)?;
    let frozen = select_frozen(&rel, &spec)?;
    if let Some(p) = &a.reliability {
        ctx.emit(Some(p), |w| rel.write_csv(w))?;
    }
    let file = FrozenSetFile {
        spec,
        kernel: a.kernel.name().to_string(),
        frozen,
    };
    ctx.emit(a.out.as_deref(), |w| {
        file.write_to(w).map_err(|e| Error::io("<frozen set>", e))
    })?;
    ctx.note(format_args!(
        "N={} K={} kernel={} design_snr_db={} frozen={}",
        spec.n(),
        spec.k(),
        a.kernel,
        spec.design_snr_db(),
        file.frozen.len()
    ));
    Ok(())
}

fn parse_snr_list(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for part in text.split(',').filter(|p| !p.trim().is_empty()) {
        out.extend(parse_snr_range(part)?);
    }
    Ok(out)
}

fn cmd_simulate(a: &SimulateArgs, ctx: &mut Context) -> Result<()> {
    let snr = parse_snr_list(&a.snr)?;
    let (spec, kernel, frozen) = match &a.frozen {
        Some(path) => {
            let file = FrozenSetFile::load(path)?;
            let kernel = file.kernel.parse().unwrap_or(KernelId::Ega);
            (file.spec, kernel, Some(file.frozen))
        }
        None => (a.code.spec()?, a.kernel.clone(), None),
    };
    let mut cfg = SimConfig::new(spec, kernel);
    cfg.snr_points_db = snr;
    cfg.seed = a.seed;
    cfg.target_frame_errors = a.target_errors;
    cfg.max_frames = a.max_frames;
    cfg.validate()?;
    let frozen = match frozen {
        Some(f) => f,
        None => construct_with(&cfg.spec, &cfg.kernel, &QuadratureConfig::default())?,
    };
    let sim = Simulator::with_frozen(cfg, &frozen)?;
    let mut results = Vec::new();
    for (i, &s) in sim.config().snr_points_db.iter().enumerate() {
        let r = sim.run_indexed(i, s)?;
        ctx.note(format_args!(
            "snr={:.3} frames={} frame_errors={} fer={:.3e} ber={:.3e}{}",
            r.snr_db,
            r.frames,
            r.frame_errors,
            r.fer,
            r.ber,
            if r.hit_frame_cap(a.target_errors) {
                " (frame cap reached)"
            } else {
                ""
            }
        ));
        results.push(r);
    }
    ctx.emit(a.out.as_deref(), |w| write_sweep_csv(w, &results))
}

fn cmd_compare(a: &CompareArgs, ctx: &mut Context) -> Result<()> {
    let rate = match a.rate {
        RateArg::Rate(r) => r,
        RateArg::K(k) => {
            return Err(Error::InvalidArgument(format!(
                "compare needs a rate, not K = {k}, since N varies with the level"
            )))
        }
    };
    let cfg = QuadratureConfig::default();
    let mut reports = Vec::with_capacity(a.methods.len());
    for m in &a.methods {
        let r = ade(m, &a.reference, a.levels.0.clone(), rate, a.design_snr, &cfg)?;
        ctx.note(format_args!("{} vs {}: ADE {}", r.method, r.reference, r.ade));
        reports.push(r);
    }
    ctx.emit(a.out.as_deref(), |w| write_comparison_csv(w, &reports))
}

fn cmd_kernel_dump(a: &KernelDumpArgs, ctx: &mut Context) -> Result<()> {
    let grid = uniform_grid(a.lo, a.hi, a.step)?;
    let target = match a.curve {
        Curve::Phi => DumpTarget::Phi,
        Curve::Step => DumpTarget::Step,
        Curve::Auto => match a.kernel {
            KernelId::Ega | KernelId::Aga | KernelId::Pga => DumpTarget::Phi,
            _ => DumpTarget::Step,
        },
    };
    let rows = kernel_table(&a.kernel, target, &grid, &QuadratureConfig::default())?;
    ctx.emit(a.out.as_deref(), |w| write_kernel_csv(w, &rows))
}
