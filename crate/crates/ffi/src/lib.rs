//! C ABI over `pga_polar`.
//!
//! Every fallible function returns a status code (`PGA_OK` on success) and
//! writes results through out-pointers. Frozen sets and decoders are opaque
//! handles released with their `_free` function. After a failure,
//! `pga_last_error_message` describes it for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use pga_polar::codec::{PolarCode, ScDecoder};
use pga_polar::construction::{construct, CodeSpec, FrozenSetFile};
use pga_polar::kernels::{KernelId, QuadratureConfig};
use pga_polar::metrics;
use pga_polar::simulation::{SimConfig, Simulator};
use pga_polar::Error;

pub const PGA_OK: i32 = 0;
pub const PGA_ERR_NULL_POINTER: i32 = 1;
pub const PGA_ERR_INVALID_ARGUMENT: i32 = 2;
pub const PGA_ERR_IO: i32 = 3;
pub const PGA_ERR_CONVERGENCE: i32 = 4;
pub const PGA_ERR_SIZE_MISMATCH: i32 = 5;
pub const PGA_ERR_BUFFER_TOO_SMALL: i32 = 6;
pub const PGA_ERR_PANIC: i32 = 7;

pub const PGA_KERNEL_EGA: u32 = 0;
pub const PGA_KERNEL_AGA: u32 = 1;
pub const PGA_KERNEL_PGA: u32 = 2;
pub const PGA_KERNEL_APGA: u32 = 3;
pub const PGA_KERNEL_SPGA: u32 = 4;

/// A constructed code: parameters, kernel name and frozen indices.
pub struct PgaFrozenSet {
    file: FrozenSetFile,
}

/// SC decoder bound to one frozen set; not safe for concurrent use.
pub struct PgaDecoder {
    code: PolarCode,
    decoder: ScDecoder,
}

/// Counters for one simulated SNR point.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PgaSimResult {
    pub snr_db: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub bit_errors: u64,
    pub fer: f64,
    pub ber: f64,
    pub seed: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            e if e.is_convergence() => PGA_ERR_CONVERGENCE,
            Error::Io { .. } | Error::Format { .. } | Error::Csv(_) => PGA_ERR_IO,
            Error::SizeMismatch { .. } => PGA_ERR_SIZE_MISMATCH,
            _ => PGA_ERR_INVALID_ARGUMENT,
        };
        Failure(code, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(PGA_ERR_NULL_POINTER, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            PGA_OK
        }
        Ok(Err(Failure(code, msg))) => {
            set_last_error(msg);
            code
        }
        Err(_) => {
            set_last_error("internal panic".into());
            PGA_ERR_PANIC
        }
    }
}

fn kernel(id: u32) -> Result<KernelId, Failure> {
    match id {
        PGA_KERNEL_EGA => Ok(KernelId::Ega),
        PGA_KERNEL_AGA => Ok(KernelId::Aga),
        PGA_KERNEL_PGA => Ok(KernelId::Pga),
        PGA_KERNEL_APGA => Ok(KernelId::Apga),
        PGA_KERNEL_SPGA => Ok(KernelId::Spga),
        other => Err(Failure(
            PGA_ERR_INVALID_ARGUMENT,
            format!("unknown kernel id {other}"),
        )),
    }
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_mut<'a, T>(p: *mut T, len: usize, what: &str) -> Result<&'a mut [T], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn path<'a>(p: *const c_char) -> Result<&'a Path, Failure> {
    if p.is_null() {
        return Err(null("path"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map(Path::new)
        .map_err(|_| Failure(PGA_ERR_INVALID_ARGUMENT, "path is not UTF-8".into()))
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn pga_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Degraded-child single-step map of `kernel_id` at mean LLR `x`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn pga_kernel_step(kernel_id: u32, x: f64, out: *mut f64) -> i32 {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let v = kernel(kernel_id)?
            .step(x, &QuadratureConfig::default())
            .map_err(Error::from)?;
        *out = v;
        Ok(())
    })
}

/// Constructs PC(n, k) at `design_snr_db` and stores a new handle in `out`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn pga_construct(
    n: usize,
    k: usize,
    design_snr_db: f64,
    kernel_id: u32,
    out: *mut *mut PgaFrozenSet,
) -> i32 {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let kernel = kernel(kernel_id)?;
        let spec = CodeSpec::new(n, k, design_snr_db)?;
        let frozen = construct(&spec, &kernel)?;
        let file = FrozenSetFile {
            spec,
            kernel: kernel.name().to_string(),
            frozen,
        };
        *out = Box::into_raw(Box::new(PgaFrozenSet { file }));
        Ok(())
    })
}

/// Reads a frozen-set file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn pga_frozen_set_load(path_: *const c_char, out: *mut *mut PgaFrozenSet) -> i32 {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let file = FrozenSetFile::load(path(path_)?)?;
        *out = Box::into_raw(Box::new(PgaFrozenSet { file }));
        Ok(())
    })
}

/// Writes a frozen-set file.
///
/// # Safety
/// `set` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn pga_frozen_set_save(set: *const PgaFrozenSet, path_: *const c_char) -> i32 {
    guard(|| {
        let set = set.as_ref().ok_or_else(|| null("set"))?;
        set.file.save(path(path_)?)?;
        Ok(())
    })
}

/// Releases a handle; NULL is ignored.
///
/// # Safety
/// `set` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pga_frozen_set_free(set: *mut PgaFrozenSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Block length N, or 0 for NULL.
///
/// # Safety
/// `set` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pga_frozen_set_n(set: *const PgaFrozenSet) -> usize {
    set.as_ref().map_or(0, |s| s.file.spec.n())
}

/// Information length K, or 0 for NULL.
///
/// # Safety
/// `set` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pga_frozen_set_k(set: *const PgaFrozenSet) -> usize {
    set.as_ref().map_or(0, |s| s.file.spec.k())
}

/// Copies the N - K ascending frozen indices into `buf`.
///
/// # Safety
/// `set` must be a live handle; `buf` must hold `capacity` elements.
#[no_mangle]
pub unsafe extern "C" fn pga_frozen_set_indices(
    set: *const PgaFrozenSet,
    buf: *mut usize,
    capacity: usize,
) -> i32 {
    guard(|| {
        let set = set.as_ref().ok_or_else(|| null("set"))?;
        let idx = set.file.frozen.indices();
        if capacity < idx.len() {
            return Err(Failure(
                PGA_ERR_BUFFER_TOO_SMALL,
                format!("need {} entries, buffer holds {capacity}", idx.len()),
            ));
        }
        slice_mut(buf, idx.len(), "buf")?.copy_from_slice(idx);
        Ok(())
    })
}

/// Number of frozen positions of `a` that `reference` does not freeze.
///
/// # Safety
/// Both handles must be live; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn pga_ndp(
    a: *const PgaFrozenSet,
    reference: *const PgaFrozenSet,
    out: *mut usize,
) -> i32 {
    guard(|| {
        let a = a.as_ref().ok_or_else(|| null("a"))?;
        let r = reference.as_ref().ok_or_else(|| null("reference"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        if a.file.frozen.n() != r.file.frozen.n() {
            return Err(Error::SizeMismatch {
                expected: r.file.frozen.n(),
                actual: a.file.frozen.n(),
            }
            .into());
        }
        *out = metrics::ndp(&a.file.frozen, &r.file.frozen)?;
        Ok(())
    })
}

/// Encodes `k` information bits (one byte each, 0 or 1) into `n` code bits.
///
/// # Safety
/// `set` must be a live handle; `info` must hold `k` bytes and `codeword` `n`.
#[no_mangle]
pub unsafe extern "C" fn pga_encode(
    set: *const PgaFrozenSet,
    info: *const u8,
    k: usize,
    codeword: *mut u8,
    n: usize,
) -> i32 {
    guard(|| {
        let set = set.as_ref().ok_or_else(|| null("set"))?;
        let info = slice(info, k, "info")?;
        if let Some(b) = info.iter().find(|&&b| b > 1) {
            return Err(Failure(PGA_ERR_INVALID_ARGUMENT, format!("bit value {b}")));
        }
        let out = slice_mut(codeword, n, "codeword")?;
        PolarCode::new(&set.file.frozen).encode_into(info, out)?;
        Ok(())
    })
}

/// Creates an SC decoder for `set`.
///
/// # Safety
/// `set` must be a live handle; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn pga_decoder_new(set: *const PgaFrozenSet, out: *mut *mut PgaDecoder) -> i32 {
    guard(|| {
        let set = set.as_ref().ok_or_else(|| null("set"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let code = PolarCode::new(&set.file.frozen);
        let decoder = ScDecoder::new(code.n());
        *out = Box::into_raw(Box::new(PgaDecoder { code, decoder }));
        Ok(())
    })
}

/// Decodes `n` channel LLRs (`ln W(y|0)/W(y|1)`) into `k` information bits.
///
/// # Safety
/// `dec` must be a live handle; `llr` must hold `n` values, `info` `k` bytes.
#[no_mangle]
pub unsafe extern "C" fn pga_decoder_decode(
    dec: *mut PgaDecoder,
    llr: *const f64,
    n: usize,
    info: *mut u8,
    k: usize,
) -> i32 {
    guard(|| {
        let dec = dec.as_mut().ok_or_else(|| null("decoder"))?;
        let llr = slice(llr, n, "llr")?;
        if llr.iter().any(|v| v.is_nan()) {
            return Err(Failure(PGA_ERR_INVALID_ARGUMENT, "LLR is NaN".into()));
        }
        let out = slice_mut(info, k, "info")?;
        dec.decoder.decode_info(llr, &dec.code, out)?;
        Ok(())
    })
}

/// Releases a decoder; NULL is ignored.
///
/// # Safety
/// `dec` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pga_decoder_free(dec: *mut PgaDecoder) {
    if !dec.is_null() {
        drop(Box::from_raw(dec));
    }
}

/// Simulates one Eb/N0 point over BPSK/AWGN with SC decoding until
/// `target_frame_errors` or `max_frames`. `workers` of 0 uses all cores.
///
/// # Safety
/// `set` must be a live handle; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn pga_simulate_point(
    set: *const PgaFrozenSet,
    snr_db: f64,
    seed: u64,
    target_frame_errors: u64,
    max_frames: u64,
    workers: usize,
    out: *mut PgaSimResult,
) -> i32 {
    guard(|| {
        let set = set.as_ref().ok_or_else(|| null("set"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let kernel = set.file.kernel.parse().unwrap_or(KernelId::Ega);
        let mut cfg = SimConfig::new(set.file.spec, kernel);
        cfg.seed = seed;
        cfg.target_frame_errors = target_frame_errors;
        cfg.max_frames = max_frames;
        cfg.workers = (workers > 0).then_some(workers);
        let r = Simulator::with_frozen(cfg, &set.file.frozen)?.run_point(snr_db)?;
        *out = PgaSimResult {
            snr_db: r.snr_db,
            frames: r.frames,
            frame_errors: r.frame_errors,
            bit_errors: r.bit_errors,
            fer: r.fer,
            ber: r.ber,
            seed: r.seed,
        };
        Ok(())
    })
}
