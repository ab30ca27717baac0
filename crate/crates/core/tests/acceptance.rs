//! Acceptance checks. Runs as a plain binary so every criterion prints one
//! PASS/FAIL line; exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use gcs_scissors::pnd::{
    moments, pnd_closed, pnd_elliptic, pnd_from_expansion, pnd_gcs_closed, pnd_gcs_intermediate, selection_allows,
};
use gcs_scissors::scissors::{
    elliptic_sweep, equal_superposition_alpha, level_probability, overlap_fidelity, reachability_table_with,
    ReachabilityQuery, WindowSearch, DEFAULT_ELLIPSE_ASPECT,
};
use gcs_scissors::states::{default_n_max, fock_expansion, CircularStateSpec, EllipticStateSpec};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const THRESHOLD: f64 = 0.99;
const ENDPOINT_TOL: f64 = 0.02;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let suffix = format!(" [{:.2}s, limit {}s]", elapsed.as_secs_f64(), limit.as_secs());
    match out {
        Ok(d) if elapsed <= limit => Ok(d + &suffix),
        Ok(d) => Err(d + &suffix + " too slow"),
        Err(d) => Err(d + &suffix),
    }
}

fn oracle_equivalence() -> Outcome {
    timed(Duration::from_secs(10), || {
        let mut worst = 0.0_f64;
        for order in 1..=10 {
            for r in 0..=3 {
                for alpha in [0.5, 1.0, 2.0, 4.0, 6.0] {
                    let spec = CircularStateSpec::new(alpha, order, r).map_err(|e| e.to_string())?;
                    let n_max = default_n_max(&spec);
                    let closed = pnd_closed(&spec, n_max).map_err(|e| e.to_string())?;
                    let oracle = pnd_from_expansion(&fock_expansion(&spec, n_max).map_err(|e| e.to_string())?);
                    for (a, b) in closed.probs().iter().zip(oracle.probs()) {
                        worst = worst.max((a - b).abs());
                    }
                }
            }
        }
        check(worst < 1e-9, format!("max |closed - oracle| = {worst:.3e} (tol 1e-9)"))
    })
}

fn derivation_chain() -> Outcome {
    let mut worst = 0.0_f64;
    for order in 1..=12 {
        for alpha in [0.3, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0] {
            let spec = CircularStateSpec::gcs(alpha, order).map_err(|e| e.to_string())?;
            let inter = pnd_gcs_intermediate(&spec, 100).map_err(|e| e.to_string())?;
            let closed = pnd_gcs_closed(&spec, 100).map_err(|e| e.to_string())?;
            for (a, b) in inter.probs().iter().zip(closed.probs()) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    check(
        worst < 1e-9,
        format!("max |intermediate - closed| over N <= 12, n <= 100 = {worst:.3e}"),
    )
}

fn equal_superposition() -> Outcome {
    let expected = [2.61, 4.90, 6.34, 7.5];
    let mut ok = true;
    let mut parts = Vec::new();
    for (s, want) in expected.iter().enumerate() {
        let alpha = equal_superposition_alpha(16, s as u32);
        let lo = level_probability(16, 0, alpha, 16 * s);
        let hi = level_probability(16, 0, alpha, 16 * (s + 1));
        let rel = (lo - hi).abs() / lo.max(hi);
        ok &= (alpha - want).abs() <= ENDPOINT_TOL && rel < 1e-9;
        parts.push(format!("S={s}: {alpha:.4} (want {want}, P rel diff {rel:.1e})"));
    }
    check(ok, parts.join("; "))
}

fn window_regression() -> Outcome {
    timed(Duration::from_secs(30), || {
        let cases: [(u32, usize, f64, f64); 5] = [
            (12, 0, 0.0, 1.9),
            (12, 12, 2.79, 3.51),
            (24, 0, 0.0, 2.84),
            (24, 24, 3.45, 5.43),
            (24, 48, 6.6, 7.04),
        ];
        let search = WindowSearch::with_threshold(THRESHOLD);
        let mut ok = true;
        let mut parts = Vec::new();
        for (order, target, lo, hi) in cases {
            let spec = CircularStateSpec::gcs(0.0, order).map_err(|e| e.to_string())?;
            match search.find(&spec, target).map_err(|e| e.to_string())? {
                Some(w) => {
                    ok &= (w.alpha_lo - lo).abs() <= ENDPOINT_TOL && (w.alpha_hi - hi).abs() <= ENDPOINT_TOL;
                    parts.push(format!("N={order} |{target}> [{:.3}, {:.3}]", w.alpha_lo, w.alpha_hi));
                }
                None => {
                    ok = false;
                    parts.push(format!("N={order} |{target}> none"));
                }
            }
        }
        check(ok, parts.join("; "))
    })
}

fn first_order_with_window(search: &WindowSearch, multiple: usize) -> Result<Option<u32>, String> {
    for order in 1..=64u32 {
        let spec = CircularStateSpec::gcs(0.0, order).map_err(|e| e.to_string())?;
        if search
            .find(&spec, multiple * order as usize)
            .map_err(|e| e.to_string())?
            .is_some()
        {
            return Ok(Some(order));
        }
    }
    Ok(None)
}

fn reachability_thresholds() -> Outcome {
    timed(Duration::from_secs(300), || {
        let search = WindowSearch::with_threshold(THRESHOLD);
        let mut ok = true;
        let mut parts = Vec::new();
        for (multiple, want) in [(1, 10), (2, 21), (3, 32)] {
            let first = first_order_with_window(&search, multiple)?;
            ok &= first == Some(want);
            parts.push(format!("first N for |{multiple}N> = {first:?} (want {want})"));
        }
        let mut barrier_breaks = Vec::new();
        for n in 1..=9usize {
            for order in 1..=64u32 {
                let spec = CircularStateSpec::gcs(0.0, order).map_err(|e| e.to_string())?;
                if let Some(w) = search.find(&spec, n).map_err(|e| e.to_string())? {
                    barrier_breaks.push(format!("N={order} |{n}> [{:.3}, {:.3}]", w.alpha_lo, w.alpha_hi));
                }
            }
        }
        ok &= barrier_breaks.is_empty();
        parts.push(if barrier_breaks.is_empty() {
            "no GCS window for |1>..|9>".to_string()
        } else {
            format!("GCS windows below |10>: {}", barrier_breaks.join(", "))
        });
        let mut photon_added_misses = Vec::new();
        for n in 1..=9u32 {
            for order in 1..=15u32 {
                let spec = CircularStateSpec::new(0.0, order, n).map_err(|e| e.to_string())?;
                if search.find(&spec, n as usize).map_err(|e| e.to_string())?.is_none() {
                    photon_added_misses.push(format!("(N={order}, r={n})"));
                }
            }
        }
        ok &= photon_added_misses.is_empty();
        parts.push(if photon_added_misses.is_empty() {
            "r = n reaches |n> for n <= 9, N <= 15".to_string()
        } else {
            format!("r = n misses {}", photon_added_misses.join(", "))
        });
        check(ok, parts.join("; "))
    })
}

fn minimal_order() -> Outcome {
    let mut query = ReachabilityQuery::new(16, 15, 10, THRESHOLD);
    query.ellipse_aspect = None;
    let records = reachability_table_with(&query).map_err(|e| e.to_string())?;
    // Published order ranges for n = N + r, highest N first.
    let published: [(usize, u32); 7] = [(10, 9), (11, 10), (12, 10), (13, 12), (14, 13), (15, 14), (16, 15)];
    let mut ok = true;
    let mut parts = Vec::new();
    for (n, n_hi) in published {
        let want: BTreeSet<(u32, u32)> = (6..=n_hi).map(|order| (order, n as u32 - order)).collect();
        let got: BTreeSet<(u32, u32)> = records[n]
            .gpacs_combos
            .iter()
            .copied()
            .filter(|&(order, r)| (order + r) as usize == n)
            .collect();
        let min = got.iter().map(|c| c.0).min();
        if got != want || min != Some(6) {
            ok = false;
            let missing: Vec<_> = want.difference(&got).collect();
            let extra: Vec<_> = got.difference(&want).collect();
            parts.push(format!("|{n}>: min N {min:?}, missing {missing:?}, extra {extra:?}"));
        }
    }
    if ok {
        parts.push("|10>..|16> lists match, minimal N = 6".into());
    }
    check(ok, parts.join("; "))
}

fn fidelity_consistency() -> Outcome {
    let spec = CircularStateSpec::gcs(0.0, 16).map_err(|e| e.to_string())?;
    let mut maxima = Vec::new();
    let mut argmax_s1 = 0.0;
    for s in 0..=3u32 {
        let mut best = (0.0, f64::NEG_INFINITY);
        for i in 1..=1600 {
            let alpha = i as f64 * 0.005;
            let f = overlap_fidelity(&spec, alpha, s).map_err(|e| e.to_string())?;
            if f > best.1 {
                best = (alpha, f);
            }
        }
        if s == 1 {
            argmax_s1 = best.0;
        }
        maxima.push(best.1);
    }
    let target = equal_superposition_alpha(16, 1);
    let decreasing = maxima.windows(2).all(|w| w[1] < w[0]);
    check(
        (argmax_s1 - target).abs() <= ENDPOINT_TOL && decreasing,
        format!(
            "argmax S=1 {argmax_s1:.3} vs {target:.4}; maxima {:?}",
            maxima.iter().map(|m| format!("{m:.6}")).collect::<Vec<_>>()
        ),
    )
}

fn elliptic_incapability() -> Outcome {
    // Levels up to 200 cover the mean photon number of every swept amplitude.
    let (n_hi, amp_max, step) = (200, 8.0, 0.01);
    let mut worst = (0.0_f64, 0u32, 0u32, 0usize);
    for order in 4..=24u32 {
        for r in 0..=3u32 {
            let peaks =
                elliptic_sweep(DEFAULT_ELLIPSE_ASPECT, order, r, n_hi, amp_max, step).map_err(|e| e.to_string())?;
            // P_r -> 1 as the ellipse shrinks to a point for any geometry.
            for (n, peak) in peaks.iter().enumerate().filter(|&(n, _)| n != r as usize) {
                if peak.probability > worst.0 {
                    worst = (peak.probability, order, r, n);
                }
            }
        }
    }
    let spec = EllipticStateSpec::new(5.0, 3.2, 16, 0).map_err(|e| e.to_string())?;
    let p16 = pnd_elliptic(&spec, default_n_max(&spec))
        .map_err(|e| e.to_string())?
        .get(16);
    check(
        worst.0 < 0.99 && (p16 - 0.83).abs() <= 0.05,
        format!(
            "max P_n (n != r) = {:.5} at N={}, r={}, n={}; P_16(a=5, b=3.2, N=16) = {p16:.4} (want 0.83 +- 0.05)",
            worst.0, worst.1, worst.2, worst.3
        ),
    )
}

fn property_suites() -> Outcome {
    let mut closure = 0.0_f64;
    let mut zero_breaks = 0usize;
    for order in 1..=12u32 {
        for r in 0..=4u32 {
            for alpha in [0.0, 0.4, 1.0, 2.5, 4.0, 6.0] {
                let spec = CircularStateSpec::new(alpha, order, r).map_err(|e| e.to_string())?;
                let n_max = default_n_max(&spec);
                let closed = pnd_closed(&spec, n_max).map_err(|e| e.to_string())?;
                closure = closure.max((closed.total() - 1.0).abs());
                zero_breaks += closed
                    .probs()
                    .iter()
                    .enumerate()
                    .filter(|&(n, &p)| !selection_allows(order, r, n) && p != 0.0)
                    .count();
                if alpha > 0.0 {
                    let oracle = pnd_from_expansion(&fock_expansion(&spec, n_max).map_err(|e| e.to_string())?);
                    closure = closure.max((oracle.total() - 1.0).abs());
                    if r == 0 {
                        let inter = pnd_gcs_intermediate(&spec, n_max).map_err(|e| e.to_string())?;
                        closure = closure.max((inter.total() - 1.0).abs());
                    }
                    let ellipse = EllipticStateSpec::from_aspect(DEFAULT_ELLIPSE_ASPECT, alpha, order, r)
                        .map_err(|e| e.to_string())?;
                    let e = pnd_elliptic(&ellipse, default_n_max(&ellipse)).map_err(|e| e.to_string())?;
                    closure = closure.max((e.total() - 1.0).abs());
                }
            }
        }
    }

    let mut single_fano = 0.0_f64;
    for alpha in [0.3, 1.0, 2.0, 3.5, 5.0] {
        let spec = CircularStateSpec::gcs(alpha, 1).map_err(|e| e.to_string())?;
        let m =
            moments(&pnd_closed(&spec, default_n_max(&spec)).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        single_fano = single_fano.max((m.fano - 1.0).abs());
    }

    let mut vacuum_fano = 0.0_f64;
    for order in 1..=6u32 {
        for r in 1..=4u32 {
            let spec = CircularStateSpec::new(0.0, order, r).map_err(|e| e.to_string())?;
            let m = moments(&pnd_closed(&spec, default_n_max(&spec)).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            vacuum_fano = vacuum_fano.max(m.fano.abs());
        }
    }

    let (mut up, mut down) = (false, false);
    let mut prev: Option<f64> = None;
    for i in 100..=600 {
        let spec = CircularStateSpec::gcs(i as f64 * 0.01, 6).map_err(|e| e.to_string())?;
        let fano = moments(&pnd_closed(&spec, default_n_max(&spec)).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?
            .fano;
        if let Some(p) = prev {
            up |= p < 1.0 && fano >= 1.0;
            down |= p > 1.0 && fano <= 1.0;
        }
        prev = Some(fano);
    }

    check(
        closure <= 1e-10 && zero_breaks == 0 && single_fano <= 1e-9 && vacuum_fano == 0.0 && up && down,
        format!(
            "closure {closure:.1e}; structural-zero breaks {zero_breaks}; |Fano-1| single CS {single_fano:.1e}; \
             photon-added vacuum Fano {vacuum_fano}; N=6 Fano crosses 1 upward {up}, downward {down}"
        ),
    )
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_gcs-scissors"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited with {}", out.status));
    }
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs: [&[&str]; 4] = [
        &["pnd", "--N", "16", "--alpha", "4", "--r", "0"],
        &[
            "table",
            "--n-fock-max",
            "12",
            "--N-max",
            "12",
            "--r-max",
            "4",
            "--format",
            "json",
        ],
        &["sweep", "--quantity", "delta-alpha", "--N-range", "8:20", "--r", "2"],
        &[
            "fidelity-scan",
            "--N",
            "16",
            "--alpha-grid",
            "1:6:0.05",
            "--format",
            "svg",
        ],
    ];
    for (i, args) in runs.iter().enumerate() {
        let first = run_cli(args)?;
        let second = run_cli(args)?;
        if first != second || first.is_empty() {
            return Err(format!("stdout differs between runs of {args:?}"));
        }
        let path = dir.path().join(format!("out{i}"));
        let path = path.to_str().ok_or("non-UTF-8 temp path")?;
        let mut with_file: Vec<&str> = args.to_vec();
        with_file.extend(["--output", path]);
        run_cli(&with_file)?;
        let a = std::fs::read(path).map_err(|e| e.to_string())?;
        run_cli(&with_file)?;
        let b = std::fs::read(path).map_err(|e| e.to_string())?;
        if a != b || a != first {
            return Err(format!("file output differs for {args:?}"));
        }
    }
    Ok(format!(
        "{} commands byte-identical across runs, stdout and --output",
        runs.len()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("oracle equivalence", oracle_equivalence),
        ("intermediate form equals closed form", derivation_chain),
        ("equal-superposition amplitudes", equal_superposition),
        ("window regression", window_regression),
        ("reachability thresholds", reachability_thresholds),
        ("minimal photon-added order", minimal_order),
        ("fidelity consistency", fidelity_consistency),
        ("elliptic incapability", elliptic_incapability),
        ("property suites", property_suites),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
