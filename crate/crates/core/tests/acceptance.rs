//! Acceptance checks, one PASS/FAIL line per criterion. Exits nonzero when
//! any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pga_polar::codec::{decode_sc, encode, polar_transform, InfoWord};
use pga_polar::construction::{construct, evolve, initial_llr, CodeSpec};
use pga_polar::kernels::{
    breakpoint_gaps, phi_aga, phi_exact, phi_exact_inv, KernelId, PolynomialMap,
    QuadratureConfig, BREAKPOINTS,
};
use pga_polar::metrics::{ade, kernel_step_rmse};
use pga_polar::simulation::{write_sweep_csv, SimConfig, SimResult, Simulator};

struct Outcome {
    pass: bool,
    detail: String,
}

fn within(got: &[usize], want: &[usize], tol: &[usize]) -> bool {
    got.iter()
        .zip(want)
        .zip(tol)
        .all(|((&g, &w), &t)| g.abs_diff(w) <= t)
}

fn ndp_column(method: KernelId, reference: KernelId, levels: std::ops::RangeInclusive<u32>, rate: f64) -> Vec<usize> {
    let r = ade(&method, &reference, levels, rate, 1.0, &QuadratureConfig::default())
        .expect("comparison runs");
    r.per_level.values().map(|x| x.ndp).collect()
}

fn table_1() -> Outcome {
    let start = Instant::now();
    let got = ndp_column(KernelId::Apga, KernelId::Pga, 7..=11, 0.5);
    let elapsed = start.elapsed();
    let want = [0, 0, 0, 2, 8];
    let tol = [0, 0, 0, 2, 2];
    let ok = within(&got, &want, &tol);
    let fast = elapsed < Duration::from_secs(1);
    Outcome {
        pass: ok && fast,
        detail: format!(
            "APGA vs PGA, R=1/2, N=128..2048: NDP {got:?}, expected {want:?} (exact below 1024, +-2 from 1024), {:.2}s of 1s",
            elapsed.as_secs_f64()
        ),
    }
}

fn tables_2_to_4() -> Outcome {
    let start = Instant::now();
    let half = ndp_column(KernelId::Spga, KernelId::Ega, 11..=15, 0.5);
    let third = ndp_column(KernelId::Spga, KernelId::Ega, 11..=17, 1.0 / 3.0);
    let elapsed = start.elapsed();
    let want_half = [0, 0, 4, 10, 16];
    let want_third = [0, 4, 0, 10, 14, 32, 44];
    let ok_half = within(&half, &want_half, &[0, 0, 2, 2, 2]);
    let ok_third = within(&third, &want_third, &[4; 7]);
    let fast = elapsed < Duration::from_secs(300);
    Outcome {
        pass: ok_half && ok_third && fast,
        detail: format!(
            "SPGA vs EGA: R=1/2 N=2048..32768 {half:?} vs {want_half:?} (0,0 exact then +-2); \
             R=1/3 N=2048..131072 {third:?} vs {want_third:?} (+-4); {:.0}s of 300s",
            elapsed.as_secs_f64()
        ),
    }
}

fn ade_worked_example() -> Outcome {
    let r = ade(
        &KernelId::Spga,
        &KernelId::Ega,
        11..=17,
        1.0 / 3.0,
        1.0,
        &QuadratureConfig::default(),
    )
    .expect("comparison runs");
    let per: Vec<usize> = r.per_level.values().map(|x| x.ndp).collect();
    Outcome {
        pass: (92..=116).contains(&r.ade),
        detail: format!("SPGA vs EGA, R=1/3, levels 11..17: ADE {} from {per:?}, expected 104 +-12", r.ade),
    }
}

fn rmse_table_5() -> Outcome {
    let start = Instant::now();
    let rmse = kernel_step_rmse(
        &KernelId::Spga,
        &KernelId::Ega,
        0.0,
        20.0,
        0.01,
        &QuadratureConfig::default(),
    )
    .expect("kernels evaluate");
    let elapsed = start.elapsed();
    Outcome {
        pass: (rmse - 0.0215).abs() <= 0.004 && elapsed < Duration::from_secs(30),
        detail: format!(
            "RMSE(SPGA, EGA) on [0, 20] step 0.01 = {rmse:.5}, expected 0.0215 +-0.004, {:.1}s of 30s",
            elapsed.as_secs_f64()
        ),
    }
}

fn aga_zero_error() -> Outcome {
    let aga = phi_aga(0.0).unwrap();
    let exact = phi_exact(0.0, &QuadratureConfig::default()).unwrap();
    let want = 0.0218f64.exp();
    let rel = ((aga - want) / want).abs();
    Outcome {
        pass: rel < 1e-12 && aga > exact && exact == 1.0,
        detail: format!("phi_aga(0) = {aga:.15} vs e^0.0218 = {want:.15} (rel {rel:.1e}); phi_exact(0) = {exact}"),
    }
}

fn fer_point(frozen: &pga_polar::construction::FrozenSet, kernel: KernelId, snr: f64) -> SimResult {
    let mut cfg = SimConfig::new(CodeSpec::new(2048, 1024, 1.0).unwrap(), kernel);
    cfg.seed = 2048;
    Simulator::with_frozen(cfg, frozen)
        .and_then(|s| s.run_point(snr))
        .expect("simulation runs")
}

fn fmt_point(label: &str, r: &SimResult) -> String {
    let (lo, hi) = r.fer_interval();
    format!(
        "{label} {:.2} dB FER {:.3e} [{lo:.3e}, {hi:.3e}] ({}/{})",
        r.snr_db, r.fer, r.frame_errors, r.frames
    )
}

fn fer_gain_direction() -> Outcome {
    let start = Instant::now();
    let spec = CodeSpec::new(2048, 1024, 1.0).unwrap();
    let ega = construct(&spec, &KernelId::Ega).unwrap();
    let pga = construct(&spec, &KernelId::Pga).unwrap();
    // Walk up in 0.25 dB steps until the EGA code sits in [1e-3, 1e-2].
    let mut chosen = None;
    let mut snr = 1.5;
    while snr <= 4.0 {
        let r = fer_point(&ega, KernelId::Ega, snr);
        if r.fer <= 1e-2 {
            if r.fer >= 1e-3 {
                chosen = Some(r);
            }
            break;
        }
        snr += 0.25;
    }
    let Some(e) = chosen else {
        return Outcome {
            pass: false,
            detail: format!("no SNR point with EGA FER in [1e-3, 1e-2] (stopped at {snr} dB)"),
        };
    };
    let p = fer_point(&pga, KernelId::Pga, e.snr_db);
    let (e_lo, _) = e.fer_interval();
    let (p_lo, p_hi) = p.fer_interval();
    let mut detail = format!("{}; {}", fmt_point("EGA", &e), fmt_point("PGA", &p));
    let lower = p_hi < e_lo;
    let mut pass = lower;
    if !lower {
        // A 0.25 dB gain means PGA at s matches EGA at s + 0.25.
        let e2 = fer_point(&ega, KernelId::Ega, e.snr_db + 0.25);
        let (lo2, hi2) = e2.fer_interval();
        let parity = p_lo <= hi2 && lo2 <= p_hi;
        detail.push_str(&format!(
            "; PGA not significantly lower, so compared with {}: {}",
            fmt_point("EGA", &e2),
            if parity { "parity" } else { "no parity" }
        ));
        pass = parity;
    }
    let elapsed = start.elapsed();
    detail.push_str(&format!("; {:.0}s of 1800s", elapsed.as_secs_f64()));
    Outcome {
        pass: pass && elapsed < Duration::from_secs(1800),
        detail,
    }
}

fn property_suites() -> Outcome {
    let start = Instant::now();
    let cfg = QuadratureConfig::default();
    let mut failures = Vec::new();

    // Encoder involution, exhaustive at N <= 16.
    let involution = [2usize, 4, 8, 16].iter().all(|&n| {
        (0..1u32 << n).all(|v| {
            let u: Vec<u8> = (0..n).map(|i| ((v >> i) & 1) as u8).collect();
            let mut x = u.clone();
            polar_transform(&mut x);
            polar_transform(&mut x);
            x == u
        })
    });
    if !involution {
        failures.push("encoder involution".to_string());
    }

    // Noiseless encode/decode identity.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let identity = [8usize, 64, 256].iter().all(|&n| {
        let frozen = construct(&CodeSpec::with_rate(n, 0.5, 1.0).unwrap(), &KernelId::Ega).unwrap();
        (0..1000).all(|_| {
            let info = InfoWord::new((0..frozen.k()).map(|_| rng.random_range(0..2)).collect()).unwrap();
            let cw = encode(&info, &frozen).unwrap();
            decode_sc(&cw.to_noiseless_llr(20.0), &frozen).unwrap().1 == info
        })
    });
    if !identity {
        failures.push("noiseless identity".to_string());
    }

    // φ monotone on {0, 0.01, ..., 40}; round trip on [0.01, 100].
    let phis: Vec<f64> = (0..=4000).map(|i| phi_exact(i as f64 * 0.01, &cfg).unwrap()).collect();
    if !phis.windows(2).all(|w| w[1] < w[0]) || !phis.iter().all(|&v| v > 0.0 && v <= 1.0) {
        failures.push("phi monotonicity".to_string());
    }
    let round_trip = (0..=1000).all(|i| {
        let x = 0.01 * 10f64.powf(i as f64 / 250.0);
        let back = phi_exact_inv(phi_exact(x, &cfg).unwrap(), &cfg).unwrap();
        (back - x).abs() / x.max(1.0) <= 1e-8
    });
    if !round_trip {
        failures.push("phi round trip".to_string());
    }

    // Breakpoint continuity.
    for (name, map) in [("APGA", PolynomialMap::Apga), ("SPGA", PolynomialMap::Spga)] {
        for (b, gap) in BREAKPOINTS.iter().zip(breakpoint_gaps(map)) {
            if gap.abs() > 0.02 {
                failures.push(format!("{name} gap {gap:+.4} at x={b} exceeds 0.02"));
            }
        }
    }

    // Tree recursion against per-index path evaluation.
    let oracle = KernelId::BUILTIN.iter().all(|k| {
        (1..=4u32).all(|levels| {
            let n = 1usize << levels;
            let rel = evolve(&CodeSpec::new(n, n / 2, 1.0).unwrap(), k).unwrap();
            (0..n).all(|i| {
                let mut x = initial_llr(1.0);
                for j in (0..levels).rev() {
                    x = if (i >> j) & 1 == 0 { k.step(x, &cfg).unwrap() } else { 2.0 * x };
                }
                rel.values()[i] == x
            })
        })
    });
    if !oracle {
        failures.push("evolve oracle".to_string());
    }

    // Simulation determinism across worker counts.
    let csv = |workers| {
        let mut c = SimConfig::new(CodeSpec::new(256, 128, 1.0).unwrap(), KernelId::Spga);
        c.snr_points_db = vec![1.0, 2.0, 3.0];
        c.target_frame_errors = 50;
        c.seed = 42;
        c.workers = Some(workers);
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &Simulator::new(c).unwrap().run_sweep().unwrap()).unwrap();
        buf
    };
    if csv(1) != csv(8) {
        failures.push("simulation determinism".to_string());
    }

    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(120) {
        failures.push(format!("runtime {:.0}s exceeds 120s", elapsed.as_secs_f64()));
    }
    Outcome {
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("all property checks hold, {:.1}s", elapsed.as_secs_f64())
        } else {
            format!("{}; {:.1}s", failures.join("; "), elapsed.as_secs_f64())
        },
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("NDP table, APGA vs PGA", table_1),
        ("NDP tables, SPGA vs EGA", tables_2_to_4),
        ("ADE worked example", ade_worked_example),
        ("kernel RMSE", rmse_table_5),
        ("AGA error at zero", aga_zero_error),
        ("FER gain direction at N=2048", fer_gain_direction),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {} {}: {} ({})",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            name,
            o.detail
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
