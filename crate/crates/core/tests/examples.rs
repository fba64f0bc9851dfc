use assouad::constructions::{default_seed, example_1_4, example_2_7, ifs_attractor, product, Ifs};
use assouad::dimension::{
    assouad_estimate, box_dimension, covering_count, similarity_dimension, AssouadConfig, BoxConfig, Probe,
};
use assouad::distances::{distance_set, log_lattice_gaps, DEFAULT_PAIR_CAP};
use assouad::projections::{project, projection_sweep, sample_directions, Subspace};
use assouad::tangents::{convergence_trace, scaled_distance_window, uniform_grid, zoom, ZoomRule, ZoomSequence};
use assouad::{hausdorff_distance, Cloud, Exact, ExactCloud, PointCloud, Window};
use num_traits::Signed;

fn cantor(depth: usize) -> Cloud {
    let seed = PointCloud::from_values(vec![0.0, 1.0]).unwrap();
    ifs_attractor(&Ifs::triadic_cantor(), depth, &seed, 1 << 24).unwrap()
}

fn is_cantor_interval(mut l: i64, k: i32) -> bool {
    (0..k).all(|_| {
        let d = l % 3;
        l /= 3;
        d != 1
    })
}

/// Level-`k` triadic intervals `[l/3^k, (l+1)/3^k]` with ternary digits in
/// `{0, 2}` met by the cloud. Panics if a point lies outside all of them.
fn triadic_intervals(f: &Cloud, k: i32) -> usize {
    let scale = 3f64.powi(k);
    let mut hit = std::collections::BTreeSet::new();
    for x in f.values() {
        let y = x * scale;
        let cells: Vec<i64> = [(y - 1e-9).floor() as i64, (y + 1e-9).floor() as i64]
            .into_iter()
            .filter(|&l| l >= 0 && (l as f64) < scale && is_cantor_interval(l, k))
            .collect();
        assert!(!cells.is_empty(), "{x} is outside the level-{k} intervals");
        hit.extend(cells);
    }
    hit.len()
}

#[test]
fn cantor_counts_follow_powers_of_two() {
    let f = cantor(12);
    for k in 1..=10 {
        assert_eq!(triadic_intervals(&f, k), 1 << k);
    }
    let est = box_dimension(&f, &BoxConfig::new(3f64.powi(-10), 3f64.powi(-2), 9)).unwrap();
    assert!((est.value - 2f64.ln() / 3f64.ln()).abs() <= 0.03, "{est:?}");
}

#[test]
fn planar_grid_has_assouad_dimension_two() {
    let h = 2f64.powi(-10);
    let pts: Vec<f64> = (0..=1024)
        .flat_map(|i| (0..=1024).flat_map(move |j| [i as f64 * h, j as f64 * h]))
        .collect();
    let g = PointCloud::from_flat(2, pts, h / 2f64.sqrt()).unwrap();
    // Counts per axis are exact: a square of side s holds s/h + 1 points per row.
    assert_eq!(covering_count(&g, &(8.0 * h * 2f64.sqrt())).unwrap(), 129 * 129);
    let cfg = AssouadConfig::new(vec![0.25], (1..=6).map(|j| 2f64.powi(j)).collect()).with_max_centers(16);
    let est = assouad_estimate(&g, &cfg).unwrap();
    assert!((est.value - 2.0).abs() <= 0.05, "{est:?}");
}

#[test]
fn cluster_probe_sees_exponent_above_one() {
    let k = 50u32;
    let f: ExactCloud = example_1_4(k as usize).unwrap();
    let center = 2f64.powi(-(k as i32));
    let big_r = k as f64 * 4f64.powi(-(k as i32));
    // Direct count: the ball holds exactly the k + 1 points of cluster k.
    let c = Exact::from_float(center).unwrap();
    let r = Exact::from_float(big_r).unwrap();
    let inside = f.points().filter(|p| (p[0].clone() - c.clone()).abs() <= r).count();
    assert_eq!(inside, k as usize + 1);
    let cfg = AssouadConfig {
        max_centers: 0,
        probes: vec![Probe {
            center: vec![center],
            big_r,
            ratios: vec![k as f64],
        }],
        ..AssouadConfig::default()
    };
    let est = assouad_estimate(&f, &cfg).unwrap();
    let want = ((k + 1) as f64).ln() / (k as f64).ln();
    assert!((est.diagnostics.raw_value - want).abs() < 1e-12);
    assert!(est.value >= 0.95);
}

#[test]
fn lattice_gap_matches_brute_force() {
    let (a, b, m) = (0.5f64, 1.0 / 3.0, 300i64);
    let report = log_lattice_gaps(a, b, m as usize, (-1.0, -0.01)).unwrap();
    // Oracle: from each probe point t, step to the nearest lattice values on
    // either side, found by scanning n for every m.
    let (la, lb) = (a.ln(), b.ln());
    let mut worst: f64 = 0.0;
    for i in 0..=4950 {
        let t = -1.0 + i as f64 * 2e-4;
        let (mut below, mut above) = (f64::NEG_INFINITY, f64::INFINITY);
        for p in 0..=m {
            for q in -m..=m {
                let v = p as f64 * la + q as f64 * lb;
                if v <= t && v > below {
                    below = v;
                }
                if v >= t && v < above {
                    above = v;
                }
            }
        }
        worst = worst.max(above - below);
    }
    assert!(report.max_gap < 0.02);
    assert!((report.max_gap - worst).abs() < 1e-3, "{} vs {worst}", report.max_gap);
}

#[test]
fn stage_ratios_have_closed_form_dimension() {
    for k in 1..=4 {
        let c = 2f64.powi(-(1 << k));
        assert!((similarity_dimension(&[c, c]) - 2f64.powi(-k)).abs() < 1e-10);
    }
}

#[test]
fn example_2_7_windows_hold_first_level_gaps() {
    let ifs = example_2_7::<f64>(9, 3).unwrap();
    let f = ifs_attractor(&ifs, 6, &default_seed(1), 1 << 20).unwrap();
    assert_eq!(f.len(), 729);
    let scales: Vec<f64> = (0..4).map(|k| 9f64.powi(k)).collect();
    let windows = scaled_distance_window(&f, &scales, &1.0, DEFAULT_PAIR_CAP).unwrap();
    assert_eq!(windows.len(), 4);
    for w in windows {
        for target in [2.0 / 9.0, 4.0 / 9.0] {
            let hit = w.cloud.values().iter().any(|v| (v - target).abs() < 1e-9);
            assert!(hit, "c = {} misses {target}", w.c);
        }
    }
}

#[test]
fn example_1_4_zooms_approach_the_interval() {
    let f: ExactCloud = example_1_4(24).unwrap();
    let z = ZoomSequence {
        rule: ZoomRule::Example14,
        window: Window::unit_box(1),
        k_range: (1, 24),
    };
    let frames = zoom(&f, &z).unwrap();
    for fr in &frames {
        assert_eq!(hausdorff_distance(&fr.cloud, &uniform_grid(fr.k).unwrap()).unwrap(), Exact::from_integer(0.into()));
    }
    let stand_in: ExactCloud = uniform_grid(1 << 11).unwrap();
    let trace = convergence_trace(&frames, &stand_in).unwrap();
    for row in trace.rows {
        assert!(row.distance <= 1.0 / (2.0 * row.k as f64) + 2f64.powi(-11), "{row:?}");
    }
}

#[test]
fn projections_stay_below_the_ambient_estimate() {
    let c = cantor(6);
    let dust = product(&c, &c, 1 << 20).unwrap();
    let ambient = assouad_estimate(&dust, &AssouadConfig::auto(&dust)).unwrap().value;
    let report = projection_sweep(&dust, &sample_directions(2, 1, 16).unwrap(), None, 0.85).unwrap();
    for row in &report.rows {
        assert!(row.estimate.value <= ambient.min(1.0) + 0.05, "{row:?}");
    }
    assert!(report.flagged.iter().all(|&i| report.rows[i].estimate.value < 0.85));
}

#[test]
fn cloud_inside_the_line_keeps_its_estimate() {
    let c = cantor(10);
    let on_axis = PointCloud::new(2, c.values().iter().map(|&x| vec![x, 0.0]).collect(), *c.resolution()).unwrap();
    let axis = Subspace::line_at_angle(0.0);
    let cfg = AssouadConfig::auto(&c);
    let direct = assouad_estimate(&c, &cfg).unwrap().value;
    let report = projection_sweep(&on_axis, std::slice::from_ref(&axis), Some(&cfg), 0.5).unwrap();
    assert_eq!(project(&on_axis, &axis).unwrap(), c);
    assert!((report.rows[0].estimate.value - direct).abs() < 1e-12);
}

#[test]
fn distance_set_examples() {
    let d = distance_set(&PointCloud::from_values(vec![0.0, 1.0, 3.0]).unwrap(), DEFAULT_PAIR_CAP).unwrap();
    assert_eq!(d.values(), &[0.0, 1.0, 2.0, 3.0]);
}
