use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use pga_polar::construction::{construct, CodeSpec};
use pga_polar::kernels::{spga_step, KernelId};
use pga_polar_ffi::*;

fn last_error() -> String {
    let p = pga_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn built(n: usize, k: usize, kernel: u32) -> *mut PgaFrozenSet {
    let mut set = ptr::null_mut();
    assert_eq!(unsafe { pga_construct(n, k, 1.0, kernel, &mut set) }, PGA_OK);
    assert!(!set.is_null());
    set
}

#[test]
fn kernel_step_matches_library() {
    let mut v = 0.0;
    assert_eq!(unsafe { pga_kernel_step(PGA_KERNEL_SPGA, 1.0, &mut v) }, PGA_OK);
    assert_eq!(v, spga_step(1.0).unwrap());
    assert_eq!(unsafe { pga_kernel_step(99, 1.0, &mut v) }, PGA_ERR_INVALID_ARGUMENT);
    assert!(last_error().contains("unknown kernel"));
    assert_eq!(unsafe { pga_kernel_step(PGA_KERNEL_EGA, -1.0, &mut v) }, PGA_ERR_INVALID_ARGUMENT);
    assert_eq!(unsafe { pga_kernel_step(PGA_KERNEL_EGA, 1.0, ptr::null_mut()) }, PGA_ERR_NULL_POINTER);
}

#[test]
fn construct_and_read_indices() {
    let set = built(64, 32, PGA_KERNEL_APGA);
    unsafe {
        assert_eq!(pga_frozen_set_n(set), 64);
        assert_eq!(pga_frozen_set_k(set), 32);
        let mut buf = vec![0usize; 32];
        assert_eq!(pga_frozen_set_indices(set, buf.as_mut_ptr(), 31), PGA_ERR_BUFFER_TOO_SMALL);
        assert_eq!(pga_frozen_set_indices(set, buf.as_mut_ptr(), 32), PGA_OK);
        let lib = construct(&CodeSpec::new(64, 32, 1.0).unwrap(), &KernelId::Apga).unwrap();
        assert_eq!(buf, lib.indices());
        pga_frozen_set_free(set);
        pga_frozen_set_free(ptr::null_mut());
        assert_eq!(pga_frozen_set_n(ptr::null()), 0);
    }
}

#[test]
fn construct_rejects_bad_spec() {
    let mut set = ptr::null_mut();
    assert_eq!(unsafe { pga_construct(7, 3, 1.0, PGA_KERNEL_SPGA, &mut set) }, PGA_ERR_INVALID_ARGUMENT);
    assert!(set.is_null());
    assert!(last_error().contains("power of two"));
}

#[test]
fn ndp_between_handles() {
    let a = built(32, 16, PGA_KERNEL_SPGA);
    let b = built(32, 16, PGA_KERNEL_SPGA);
    let c = built(64, 32, PGA_KERNEL_SPGA);
    let mut d = 99;
    unsafe {
        assert_eq!(pga_ndp(a, b, &mut d), PGA_OK);
        assert_eq!(d, 0);
        assert_eq!(pga_ndp(a, c, &mut d), PGA_ERR_SIZE_MISMATCH);
        assert_eq!(pga_ndp(a, ptr::null(), &mut d), PGA_ERR_NULL_POINTER);
        for s in [a, b, c] {
            pga_frozen_set_free(s);
        }
    }
}

#[test]
fn encode_decode_noiseless() {
    let set = built(16, 8, PGA_KERNEL_EGA);
    unsafe {
        let mut dec = ptr::null_mut();
        assert_eq!(pga_decoder_new(set, &mut dec), PGA_OK);
        for v in 0..256u32 {
            let info: Vec<u8> = (0..8).map(|i| ((v >> i) & 1) as u8).collect();
            let mut cw = vec![0u8; 16];
            assert_eq!(pga_encode(set, info.as_ptr(), 8, cw.as_mut_ptr(), 16), PGA_OK);
            let llr: Vec<f64> = cw.iter().map(|&b| if b == 0 { 20.0 } else { -20.0 }).collect();
            let mut out = vec![9u8; 8];
            assert_eq!(pga_decoder_decode(dec, llr.as_ptr(), 16, out.as_mut_ptr(), 8), PGA_OK);
            assert_eq!(out, info);
        }
        let mut cw = vec![0u8; 16];
        let bad = [2u8; 8];
        assert_eq!(pga_encode(set, bad.as_ptr(), 8, cw.as_mut_ptr(), 16), PGA_ERR_INVALID_ARGUMENT);
        let info = [0u8; 7];
        assert_eq!(pga_encode(set, info.as_ptr(), 7, cw.as_mut_ptr(), 16), PGA_ERR_SIZE_MISMATCH);
        let llr = [f64::NAN; 16];
        let mut out = [0u8; 8];
        assert_eq!(pga_decoder_decode(dec, llr.as_ptr(), 16, out.as_mut_ptr(), 8), PGA_ERR_INVALID_ARGUMENT);
        pga_decoder_free(dec);
        pga_frozen_set_free(set);
    }
}

#[test]
fn save_load_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("f.txt").to_str().unwrap()).unwrap();
    let set = built(128, 64, PGA_KERNEL_PGA);
    unsafe {
        assert_eq!(pga_frozen_set_save(set, path.as_ptr()), PGA_OK);
        let mut back = ptr::null_mut();
        assert_eq!(pga_frozen_set_load(path.as_ptr(), &mut back), PGA_OK);
        let mut d = 1;
        assert_eq!(pga_ndp(set, back, &mut d), PGA_OK);
        assert_eq!(d, 0);
        assert_eq!(pga_frozen_set_k(back), 64);
        pga_frozen_set_free(back);
        pga_frozen_set_free(set);
        let missing = CString::new("/nonexistent/frozen.txt").unwrap();
        let mut h = ptr::null_mut();
        assert_eq!(pga_frozen_set_load(missing.as_ptr(), &mut h), PGA_ERR_IO);
    }
}

#[test]
fn simulate_point_is_deterministic() {
    let set = built(64, 32, PGA_KERNEL_SPGA);
    let mut a = PgaSimResult::default();
    let mut b = PgaSimResult::default();
    unsafe {
        assert_eq!(pga_simulate_point(set, 1.0, 7, 30, 100_000, 1, &mut a), PGA_OK);
        assert_eq!(pga_simulate_point(set, 1.0, 7, 30, 100_000, 3, &mut b), PGA_OK);
        assert_eq!(a, b);
        assert!(a.frame_errors >= 30 && a.seed == 7);
        assert_eq!(pga_simulate_point(set, 1.0, 7, 0, 100, 1, &mut a), PGA_ERR_INVALID_ARGUMENT);
        pga_frozen_set_free(set);
    }
}

const C_SMOKE: &str = r#"
#include <stdio.h>
#include "pga_polar.h"

int main(void) {
    PgaFrozenSet *set = NULL;
    if (pga_construct(8, 4, 1.0, PGA_KERNEL_SPGA, &set) != PGA_OK) return 1;
    size_t idx[4];
    if (pga_frozen_set_indices(set, idx, 4) != PGA_OK) return 2;
    uint8_t info[4] = {1, 0, 1, 1}, cw[8], out[4];
    if (pga_encode(set, info, 4, cw, 8) != PGA_OK) return 3;
    double llr[8];
    for (int i = 0; i < 8; i++) llr[i] = cw[i] ? -20.0 : 20.0;
    PgaDecoder *dec = NULL;
    if (pga_decoder_new(set, &dec) != PGA_OK) return 4;
    if (pga_decoder_decode(dec, llr, 8, out, 4) != PGA_OK) return 5;
    for (int i = 0; i < 4; i++) if (out[i] != info[i]) return 6;
    if (pga_construct(8, 4, 1.0, 42, &set) != PGA_ERR_INVALID_ARGUMENT) return 7;
    if (pga_last_error_message() == NULL) return 8;
    printf("%zu %zu %zu %zu\n", idx[0], idx[1], idx[2], idx[3]);
    pga_decoder_free(dec);
    pga_frozen_set_free(set);
    return 0;
}
"#;

#[test]
fn c_program_links_against_static_library() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // Test binaries live in target/<profile>/deps; the library one level up.
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libpga_polar_ffi.a");
    // `cargo test` links the rlib only, so build the staticlib explicitly.
    let profile = match profile_dir.file_name().unwrap().to_str().unwrap() {
        "debug" => "dev",
        other => other,
    };
    let built = Command::new(env!("CARGO"))
        .args(["build", "--quiet", "-p", "pga-polar-ffi", "--lib", "--profile", profile])
        .arg("--target-dir")
        .arg(profile_dir.parent().unwrap())
        .status()
        .expect("cargo runs");
    assert!(built.success());
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let bin = dir.path().join("smoke");
    std::fs::write(&src, C_SMOKE).unwrap();
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let lib_set = construct(&CodeSpec::new(8, 4, 1.0).unwrap(), &KernelId::Spga).unwrap();
    let expected: Vec<String> = lib_set.indices().iter().map(|i| i.to_string()).collect();
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), expected.join(" "));
}
