//! Acceptance run: every criterion of the reproduction suite, each backed by
//! an oracle computed here without the library's estimators. Prints one
//! PASS/FAIL line per criterion and exits nonzero if any fails.

use std::collections::BTreeSet;
use std::time::Instant;

use assouad::constructions::{default_seed, example_1_4, ifs_attractor, moran_stage_ifs, Ifs, DEFAULT_POINT_CAP};
use assouad::dimension::{assouad_estimate, exception_bound, falconer_erdogan_bound, AssouadConfig, Probe};
use assouad::distances::{distance_set, log_lattice_gaps, DEFAULT_PAIR_CAP};
use assouad::projections::{project, sample_curve, sample_directions, spanning_check, Subspace};
use assouad::tangents::{tangent_comparison_1_4, zoom, ZoomRule, ZoomSequence};
use assouad::{Cloud, Exact, ExactCloud, Window};
use assouad_cli::config::DEFAULT_SEED;
use assouad_cli::verify::{self, CheckResult};
use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Oracle = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn measured(checks: &[CheckResult], id: &str) -> f64 {
    checks
        .iter()
        .find(|c| c.id == id)
        .and_then(|c| c.measured)
        .unwrap_or(f64::NAN)
}

fn q(n: i64, d: i64) -> Exact {
    Exact::new(n.into(), d.into())
}

/// Left endpoints (numerators over 3^k) of the 2^k level-k Cantor intervals.
fn cantor_numerators(k: u32) -> Vec<i64> {
    (0..1i64 << k)
        .map(|bits| (0..k).map(|i| if bits >> i & 1 == 1 { 2 * 3i64.pow(i) } else { 0 }).sum())
        .collect()
}

fn oracle_1(checks: &[CheckResult]) -> Oracle {
    let f = verify::cantor_cloud(12).map_err(|e| e.to_string())?;
    let xs = f.values();
    let eps = 1e-12;
    let (mut sx, mut sy, mut sxx, mut sxy, mut n) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for k in 1..=10u32 {
        let scale = 3f64.powi(k as i32);
        let lefts = cantor_numerators(k);
        // Every interval holds a point and every point lies in an interval,
        // so exactly 2^k intervals are met.
        for &l in &lefts {
            let (lo, hi) = (l as f64 / scale - eps, (l + 1) as f64 / scale + eps);
            let i = xs.partition_point(|&x| x < lo);
            ensure(i < xs.len() && xs[i] <= hi, || format!("level {k} interval {l} is empty"))?;
        }
        let sorted: BTreeSet<i64> = lefts.iter().copied().collect();
        for &x in xs {
            let y = x * scale;
            let l = sorted.range(..=(y + 1e-6).floor() as i64).next_back();
            ensure(l.is_some_and(|&l| y <= (l + 1) as f64 + 1e-6), || {
                format!("point {x} misses the level-{k} intervals")
            })?;
        }
        if k >= 2 {
            let (lx, ly) = ((1.0 / scale).ln(), (lefts.len() as f64).ln());
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            n += 1.0;
        }
    }
    let slope = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
    let b = measured(checks, "cantor.box");
    ensure((b - slope).abs() <= 0.03, || format!("box {b} vs exact-count slope {slope}"))?;
    Ok(format!("exact counts 2^k, count slope {slope:.6}, box {b:.4}"))
}

fn oracle_2(checks: &[CheckResult]) -> Oracle {
    let f = verify::example_2_7_cloud().map_err(|e| e.to_string())?;
    ensure(f.len() == 729, || format!("{} points, expected 3^6", f.len()))?;
    let d = distance_set(&f, DEFAULT_PAIR_CAP).map_err(|e| e.to_string())?;
    // 0 ∈ F, so F ⊂ D(F).
    for &x in f.values() {
        let i = d.values().partition_point(|&v| v < x - 1e-12);
        ensure(i < d.len() && (d.values()[i] - x).abs() <= 1e-12, || format!("{x} missing from D(F)"))?;
    }
    let want = 3f64.ln() / 9f64.ln();
    let b = measured(checks, "example27.box");
    ensure((b - want).abs() <= 0.05, || format!("box {b} vs {want}"))?;
    let upper = 5f64.ln() / 9f64.ln() + 0.05;
    let dd = measured(checks, "example27.distance_box");
    ensure(dd <= upper && dd >= want - 0.05, || format!("distance box {dd}"))?;
    Ok(format!("F ⊂ D(F), box {b:.4}, distance box {dd:.4} ≤ {upper:.4}"))
}

fn oracle_3() -> Oracle {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED ^ 0xacce);
    let mut integer_clouds = 0;
    for _ in 0..100 {
        let f = verify::random_line_cloud(&mut rng);
        if f.values().iter().any(|x| x.fract() != 0.0) {
            continue;
        }
        integer_clouds += 1;
        let xs: Vec<i64> = f.values().iter().map(|&x| x as i64).collect();
        let brute: BTreeSet<i64> = xs.iter().flat_map(|a| xs.iter().map(move |b| (a - b).abs())).collect();
        let lib = distance_set(&f, DEFAULT_PAIR_CAP).map_err(|e| e.to_string())?;
        let lib: Vec<i64> = lib.values().iter().map(|&x| x as i64).collect();
        ensure(lib == brute.into_iter().collect::<Vec<_>>(), || "distance set differs from brute force".into())?;
    }
    Ok(format!("{integer_clouds} integer clouds match brute-force distance sets"))
}

/// Widest lattice gap seen from probe points in the window, found by
/// scanning every `(m, n)`.
fn brute_gap(a: f64, b: f64, m: i64, lo: f64, hi: f64) -> f64 {
    let lattice: Vec<f64> = (0..=m)
        .flat_map(|i| (-m..=m).map(move |j| i as f64 * a.ln() + j as f64 * b.ln()))
        .collect();
    let steps = 2000;
    (0..=steps)
        .map(|i| lo + (hi - lo) * i as f64 / steps as f64)
        .map(|t| {
            let below = lattice.iter().copied().filter(|&v| v <= t).fold(f64::NEG_INFINITY, f64::max);
            let above = lattice.iter().copied().filter(|&v| v >= t).fold(f64::INFINITY, f64::min);
            above - below
        })
        .fold(0.0, f64::max)
}

fn oracle_4() -> Oracle {
    let mut parts = Vec::new();
    for (a, b) in [(0.5, 1.0 / 3.0), (0.5, 0.25)] {
        let oracle = brute_gap(a, b, 300, -1.0, -0.01);
        let lib = log_lattice_gaps(a, b, 300, (-1.0, -0.01)).map_err(|e| e.to_string())?.max_gap;
        // The probe grid can miss gaps narrower than its step.
        ensure((lib - oracle).abs() <= 1e-3, || format!("({a}, {b}): library {lib} vs brute force {oracle}"))?;
        parts.push(format!("{oracle:.5}"));
    }
    Ok(format!("brute-force gaps {}", parts.join(", ")))
}

fn oracle_5() -> Oracle {
    let f: ExactCloud = example_1_4(64).map_err(|e| e.to_string())?;
    let seq = ZoomSequence {
        rule: ZoomRule::Example14,
        window: Window::unit_box(1),
        k_range: (1, 64),
    };
    let frames = zoom(&f, &seq).map_err(|e| e.to_string())?;
    ensure(frames.len() == 64, || format!("{} frames", frames.len()))?;
    for fr in &frames {
        let k = fr.k as i64;
        let scale = Exact::from_integer(4.into()).pow(k as i32) / Exact::from_integer(k.into());
        let base = q(1, 1) / Exact::from_integer(2.into()).pow(k as i32);
        let step = q(1, 1) / Exact::from_integer(4.into()).pow(k as i32);
        let by_hand: Vec<Exact> = (0..=k)
            .map(|l| (base.clone() + step.clone() * Exact::from_integer(l.into()) - base.clone()) * scale.clone())
            .collect();
        ensure(by_hand.iter().enumerate().all(|(l, v)| *v == q(l as i64, k)), || "hand zoom".into())?;
        ensure(fr.cloud.values() == by_hand.as_slice(), || format!("frame {k} differs from the cluster image"))?;
    }
    let k = 50;
    let g: ExactCloud = example_1_4(k).map_err(|e| e.to_string())?;
    let center = q(1, 1) / Exact::from_integer(2.into()).pow(k as i32);
    let radius = Exact::from_integer((k as i64).into()) / Exact::from_integer(4.into()).pow(k as i32);
    let inside = g.values().iter().filter(|x| (*x - &center).abs() <= radius).count();
    ensure(inside == k + 1, || format!("{inside} points in the probe ball"))?;
    let exponent = ((k + 1) as f64).ln() / (k as f64).ln();
    let cfg = AssouadConfig::default().with_max_centers(0).with_probes(vec![Probe {
        center: vec![2f64.powi(-(k as i32))],
        big_r: k as f64 * 4f64.powi(-(k as i32)),
        ratios: vec![k as f64],
    }]);
    let raw = assouad_estimate(&g, &cfg).map_err(|e| e.to_string())?.diagnostics.raw_value;
    ensure((raw - exponent).abs() < 1e-12, || format!("raw exponent {raw} vs {exponent}"))?;
    Ok(format!("64 frames equal the cluster images; probe count {inside}, exponent {exponent:.5}"))
}

fn oracle_6() -> Oracle {
    let scales: Vec<f64> = (1..=20).map(|n| 2f64.powi(n)).collect();
    let rows = tangent_comparison_1_4::<Exact>(40, &scales).map_err(|e| e.to_string())?;
    for (n, row) in (1..=20).zip(&rows) {
        // c = 2^n gives m = n.
        let bound = n as f64 * 2f64.powi(-n);
        ensure(row.m == n as usize, || format!("m({n}) = {}", row.m))?;
        ensure(row.distance <= bound + 2f64.powi(-40), || format!("n = {n}: {} > {bound}", row.distance))?;
    }
    Ok("d_H ≤ n 2^-n + 2^-40 for n = 1..20".into())
}

fn oracle_7() -> Oracle {
    for k in 1..=10usize {
        let s = 2f64.powi(-(k as i32));
        let ratios = moran_stage_ifs(&0.5f64, &0.5, k).map_err(|e| e.to_string())?.ratios();
        // The Moran sum at the closed form: 2 (2^(-2^k))^(2^-k) = 1.
        let sum: f64 = ratios.iter().map(|c| c.powf(s)).sum();
        ensure((sum - 1.0).abs() < 1e-12, || format!("stage {k}: sum {sum}"))?;
    }
    let est = (1..=4).map(verify::moran_block_estimate).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
    ensure(est.windows(2).all(|w| w[1] < w[0]), || format!("not decreasing: {est:?}"))?;
    Ok(format!("Moran sums equal 1; block estimates {est:?}"))
}

fn oracle_8(checks: &[CheckResult]) -> Oracle {
    let dust: Cloud = verify::cantor_dust(8).map_err(|e| e.to_string())?;
    let c: Cloud = ifs_attractor(&Ifs::triadic_cantor(), 8, &default_seed(1), DEFAULT_POINT_CAP).map_err(|e| e.to_string())?;
    for axis in [Subspace::line_at_angle(0.0), sample_directions(2, 1, 180).map_err(|e| e.to_string())?[90].clone()] {
        let p = project(&dust, &axis).map_err(|e| e.to_string())?;
        ensure(p.len() == c.len(), || format!("axis image has {} points, C has {}", p.len(), c.len()))?;
        ensure(
            p.values().iter().zip(c.values()).all(|(a, b)| (a - b).abs() <= 1e-12),
            || "axis image differs from C".into(),
        )?;
    }
    let frac = measured(checks, "sweep.cxc.fraction");
    Ok(format!("axis images are C exactly; {:.1}% of directions ≥ 0.85", 100.0 * frac))
}

fn oracle_9() -> Oracle {
    for d in 2..=6usize {
        let df = d as f64;
        let s = df / 2.0 + 1.0 / 3.0;
        let left = (6.0 * s + 2.0 - 3.0 * df) / 4.0;
        ensure((left - 1.0).abs() < 1e-12, || format!("d = {d}: left branch {left}"))?;
        ensure(falconer_erdogan_bound(d, s) == 1.0, || format!("d = {d}: bound at threshold"))?;
        let below = falconer_erdogan_bound(d, s - 1e-9);
        ensure((below - 1.0).abs() < 1e-8, || format!("d = {d}: left limit {below}"))?;
        for k in 1..d {
            let v = exception_bound(d, k, df, k as f64).map_err(|e| e.to_string())?;
            ensure(v == (k * (d - k)) as f64, || format!("exception bound ({d},{k}) = {v}"))?;
        }
    }
    Ok("both branches equal 1 at the threshold; boundary gives k(d-k)".into())
}

fn oracle_10() -> Oracle {
    let tau = std::f64::consts::TAU;
    let s = 0.5f64.sqrt();
    // det[φ, φ', φ''] = s^3 τ^3 on φ(t) = (s cos τt, s sin τt, s).
    let exact = s.powi(3) * tau.powi(3);
    let rows = spanning_check(&sample_curve(|t| [s * (tau * t).cos(), s * (tau * t).sin(), s], 400), None)
        .map_err(|e| e.to_string())?;
    let worst = rows.iter().map(|r| (r.det - exact).abs() / exact).fold(0.0, f64::max);
    ensure(worst < 1e-3, || format!("small circle det off by {worst}"))?;
    let great = spanning_check(&sample_curve(|t| [(tau * t).cos(), (tau * t).sin(), 0.0], 400), None)
        .map_err(|e| e.to_string())?;
    ensure(great.iter().all(|r| r.det == 0.0), || "great circle det is not exactly 0".into())?;
    Ok(format!("small-circle det = s³τ³ = {exact:.4} within {worst:.1e}"))
}

fn main() {
    let seed = DEFAULT_SEED;
    let mut failures = 0;
    let start = Instant::now();
    for c in verify::CRITERIA {
        let t = Instant::now();
        let checks = verify::run_criterion(c, seed);
        let oracle = match c {
            1 => oracle_1(&checks),
            2 => oracle_2(&checks),
            3 => oracle_3(),
            4 => oracle_4(),
            5 => oracle_5(),
            6 => oracle_6(),
            7 => oracle_7(),
            8 => oracle_8(&checks),
            9 => oracle_9(),
            _ => oracle_10(),
        };
        let pass = !checks.is_empty() && checks.iter().all(|x| x.pass) && oracle.is_ok();
        failures += usize::from(!pass);
        let ids: Vec<String> = checks
            .iter()
            .map(|x| format!("{}={}", x.id, x.measured.map_or("error".into(), |m| format!("{m:.6}"))))
            .collect();
        println!(
            "criterion {c:>2}: {} [{}] oracle: {} ({:.1} s)",
            if pass { "PASS" } else { "FAIL" },
            ids.join(" "),
            oracle.unwrap_or_else(|e| format!("FAILED: {e}")),
            t.elapsed().as_secs_f64()
        );
        for x in checks.iter().filter(|x| !x.pass) {
            println!("    failing check {}: {:?}", x.id, x);
        }
    }
    println!(
        "acceptance: {} of 10 criteria passed in {:.1} s",
        10 - failures,
        start.elapsed().as_secs_f64()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
