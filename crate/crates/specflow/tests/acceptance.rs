//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line (visible with `cargo test -- --nocapture`). Tolerances and instance
//! counts are pinned here; the tests fail loudly if any is exceeded.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use specflow::lift::{deformed_loop_path, lift_path, loop_path, LiftParams};
use specflow::linalg;
use specflow::matching::{brute_force_d, distance_d};
use specflow::mu::{loop_constancy_check, mu_integral, mu_invariant};
use specflow::rigged::{counting_function, rho1, RiggedSet, Space};
use specflow::scatter::{
    lattice_green, resonance_scan, truncated_green_oracle, xi_decompose, ScatteringModel,
};
use specflow::unispec::{
    eigen_velocity_check, spec_continuity_check, unitary_spectrum_path, UnispecError,
    PATH_CLUSTER_TOL,
};
use std::f64::consts::TAU;
use std::time::Instant;

fn random_set(rng: &mut ChaCha8Rng, space: Space, max_rank: u32) -> RiggedSet {
    let n = rng.gen_range(0..=max_rank);
    let pts = (0..n).map(|_| {
        let x = match space {
            Space::Circle => rng.gen_range(1e-3..TAU - 1e-3),
            Space::Line => {
                let v: f64 = rng.gen_range(-3.0..3.0);
                if v == 0.0 {
                    0.5
                } else {
                    v
                }
            }
        };
        (x, rng.gen_range(1..=2u32))
    });
    RiggedSet::from_points(space, pts).unwrap()
}

fn d(s: &RiggedSet, t: &RiggedSet) -> f64 {
    distance_d(s, t).unwrap().cost
}

fn pass(line: &str) {
    println!("[PASS] {line}");
}

#[test]
fn criterion_01_metric_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    let mut tested = 0;
    while tested < 1000 {
        let space = if tested % 2 == 0 {
            Space::Circle
        } else {
            Space::Line
        };
        let s = random_set(&mut rng, space, 3);
        let t = random_set(&mut rng, space, 3);
        if s.rank() + t.rank() > 8 {
            continue;
        }
        let fast = d(&s, &t);
        let slow = brute_force_d(&s, &t).unwrap();
        worst = worst.max((fast - slow).abs());
        tested += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    assert!(worst < 1e-12, "max deviation {worst}");
    assert!(secs < 10.0, "took {secs} s");
    pass(&format!(
        "criterion 1: assignment = exhaustive oracle on 1000 pairs, max dev {worst:.2e}, {secs:.2} s"
    ));
}

#[test]
fn criterion_02_d_equals_rho1() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let s = random_set(&mut rng, Space::Circle, 5);
        let t = random_set(&mut rng, Space::Circle, 5);
        let lhs = d(&s, &t);
        let (rhs, _) = rho1(&counting_function(&s), &counting_function(&t));
        worst = worst.max((lhs - rhs).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    assert!(worst < 1e-10, "max |d - rho1| = {worst}");
    assert!(secs < 10.0, "took {secs} s");
    pass(&format!(
        "criterion 2: d = rho1 on 1000 pairs, max gap {worst:.2e}, {secs:.2} s"
    ));
}

#[test]
fn criterion_03_metric_inequalities() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    // Triangle inequality.
    for trial in 0..500 {
        let space = if trial % 2 == 0 {
            Space::Circle
        } else {
            Space::Line
        };
        let s = random_set(&mut rng, space, 5);
        let t = random_set(&mut rng, space, 5);
        let u = random_set(&mut rng, space, 5);
        assert!(
            d(&s, &u) <= d(&s, &t) + d(&t, &u) + 1e-12,
            "triangle violated at trial {trial}"
        );
    }
    // Subadditivity under sums.
    for trial in 0..500 {
        let s1 = random_set(&mut rng, Space::Circle, 4);
        let s2 = random_set(&mut rng, Space::Circle, 4);
        let t1 = random_set(&mut rng, Space::Circle, 4);
        let t2 = random_set(&mut rng, Space::Circle, 4);
        assert!(
            d(&s1.sum(&s2).unwrap(), &t1.sum(&t2).unwrap()) <= d(&s1, &t1) + d(&s2, &t2) + 1e-12,
            "sum lemma violated at trial {trial}"
        );
    }
    // Difference estimate for dominated parts.
    for trial in 0..500 {
        let s = random_set(&mut rng, Space::Circle, 5);
        let t = random_set(&mut rng, Space::Circle, 5);
        let sub = |rng: &mut ChaCha8Rng, full: &RiggedSet| {
            let pts: Vec<(f64, u32)> = full
                .entries()
                .iter()
                .map(|&(x, m)| (x, rng.gen_range(0..=m)))
                .collect();
            RiggedSet::from_points(full.space(), pts).unwrap()
        };
        let s1 = sub(&mut rng, &s);
        let t1 = sub(&mut rng, &t);
        assert!(
            d(&s.difference(&s1).unwrap(), &t.difference(&t1).unwrap())
                <= d(&s1, &t1) + d(&s, &t) + 1e-12,
            "difference estimate violated at trial {trial}"
        );
    }
    // Line splitting into positive and negative parts.
    for trial in 0..500 {
        let s = random_set(&mut rng, Space::Line, 5);
        let t = random_set(&mut rng, Space::Line, 5);
        let (sp, sn) = s.pos_neg_parts().unwrap();
        let (tp, tn) = t.pos_neg_parts().unwrap();
        assert!(
            (d(&s, &t) - d(&sp, &tp) - d(&sn, &tn)).abs() <= 1e-12,
            "line splitting violated at trial {trial}"
        );
    }
    pass("criterion 3: triangle, sum, difference and splitting inequalities, 500 instances each");
}

fn random_generator_path(rng: &mut ChaCha8Rng, n: usize) -> specflow::lift::SpectrumPath {
    let h = linalg::random_hermitian(n, rng);
    unitary_spectrum_path((0.0, 1.0), true, PATH_CLUSTER_TOL, move |r| {
        linalg::unitary_exp_i(&h, r).unwrap()
    })
}

#[test]
fn criterion_04_and_05_mu_well_defined_and_integral_identity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let coarse = LiftParams::default(); // step_tol = 0.1
    let fine = LiftParams {
        step_tol: 0.02,
        ..LiftParams::default()
    };
    let mut max_integral_gap = 0.0f64;
    for path_idx in 0..100 {
        let n = rng.gen_range(2..=8);
        let p = random_generator_path(&mut rng, n);
        let t1 = lift_path(&p, &coarse).unwrap_or_else(|e| panic!("path {path_idx}: {e}"));
        let t2 = lift_path(&p, &fine).unwrap_or_else(|e| panic!("path {path_idx}: {e}"));
        let m1 = mu_invariant(&t1);
        let m2 = mu_invariant(&t2);
        assert!(
            m1.equiv(&m2, 1e-9),
            "path {path_idx}: mu differs between step tolerances"
        );
        for (m, t) in [(&m1, &t1), (&m2, &t2)] {
            let gap = (mu_integral(m) - t.endpoint_sum()).abs();
            max_integral_gap = max_integral_gap.max(gap);
            assert!(gap < 1e-6, "path {path_idx}: integral identity gap {gap}");
        }
    }
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 60.0, "took {secs} s");
    pass(&format!(
        "criterion 4: identical mu for step_tol 0.1 vs 0.02 on 100 paths, {secs:.1} s"
    ));
    pass(&format!(
        "criterion 5: |mu integral - endpoint sum| < 1e-6 on all 200 lifts (max {max_integral_gap:.2e})"
    ));
}

#[test]
fn criterion_06_loop_winding_and_homotopy() {
    let params = LiftParams::default();
    for n in [1u32, 2, 3, 5] {
        let t = lift_path(&loop_path(n), &params).unwrap();
        assert_eq!(loop_constancy_check(&t).unwrap(), n as i64, "loop N = {n}");
        let m = mu_invariant(&t);
        assert!((mu_integral(&m) - TAU * n as f64).abs() < 1e-9);
    }
    // Two-parameter deformation of the doubled loop: mu must agree exactly
    // at every sampled stage.
    let reference = mu_invariant(&lift_path(&deformed_loop_path(2, 0.0), &params).unwrap());
    for i in 1..=4 {
        let t = i as f64 / 4.0;
        let m = mu_invariant(&lift_path(&deformed_loop_path(2, t), &params).unwrap());
        assert!(m.equiv(&reference, 1e-9), "deformation stage t = {t}");
    }
    pass("criterion 6: loops wind 1, 2, 3, 5 exactly; N = 2 invariant under sampled homotopy");
}

#[test]
fn criterion_07_spec_continuity_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    for trial in 0..500 {
        let n = rng.gen_range(1..=10);
        let u1 = specflow::unispec::UnitaryTC::new(linalg::random_unitary(n, &mut rng)).unwrap();
        let u2 = specflow::unispec::UnitaryTC::new(linalg::random_unitary(n, &mut rng)).unwrap();
        let (lhs, rhs) = spec_continuity_check(&u1, &u2).unwrap();
        assert!(
            lhs <= rhs + 1e-8,
            "trial {trial}: d(spec, spec) = {lhs} > bound {rhs}"
        );
    }
    pass("criterion 7: d(spec U1, spec U2) <= (pi/2) ||U1 - U2||_1 + 1e-8 on 500 pairs");
}

#[test]
fn criterion_08_eigenvalue_velocity() {
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let mut checked = 0;
    let mut worst = 0.0f64;
    while checked < 50 {
        let n = rng.gen_range(2..=6);
        let h = linalg::random_hermitian(n, &mut rng);
        let path = move |r: f64| linalg::unitary_exp_i(&h, r).unwrap();
        match eigen_velocity_check(&path, 0.31, 1e-4) {
            Ok(v) => {
                worst = worst.max(v.max_deviation);
                assert!(
                    v.max_deviation < 1e-6,
                    "velocity deviation {} at path {checked}",
                    v.max_deviation
                );
                assert!(
                    v.velocity_abs_sum <= v.derivative_trace_norm + 1e-8,
                    "sum |lambda'| = {} exceeds ||U'||_1 = {}",
                    v.velocity_abs_sum,
                    v.derivative_trace_norm
                );
                checked += 1;
            }
            Err(UnispecError::DegenerateSpectrum { .. }) => continue,
            Err(e) => panic!("{e}"),
        }
    }
    pass(&format!(
        "criterion 8: velocity identity on 50 simple-spectrum paths, max deviation {worst:.2e}"
    ));
}

#[test]
fn criterion_09_green_function_oracle() {
    // 20 points off the spectrum against the size-4001 truncated resolvent.
    let mut pts: Vec<(Complex64, i64, i64)> = Vec::new();
    for (i, &(re, im)) in [
        (3.0, 0.0),
        (-2.6, 0.0),
        (4.5, 0.0),
        (-5.0, 0.0),
        (2.5, 0.5),
        (0.0, 1.0),
        (0.5, 0.05),
        (-1.5, 0.3),
        (1.9, 1.7),
        (-0.7, 0.02),
    ]
    .iter()
    .enumerate()
    {
        let m = (i as i64 % 4) - 1;
        pts.push((Complex64::new(re, im), m, m + i as i64 % 3));
        pts.push((Complex64::new(re, im), 0, 2 + (i as i64 % 2)));
    }
    assert_eq!(pts.len(), 20);
    let mut worst = 0.0f64;
    for &(z, m, n) in &pts {
        let g = lattice_green(z, m, n).unwrap();
        let oracle = truncated_green_oracle(z, m, n, 4001);
        let gap = (g - oracle).norm();
        worst = worst.max(gap);
        assert!(gap < 1e-8, "z = {z}, (m, n) = ({m}, {n}): gap {gap}");
    }
    // Boundary values by small-y extrapolation of the truncated oracle.
    let mut worst_boundary = 0.0f64;
    for &lambda in &[0.5, -0.5, 1.5, -1.5] {
        let g = |y: f64| truncated_green_oracle(Complex64::new(lambda, y), 0, 1, 20001);
        let (g1, g2, g3) = (g(4e-3), g(2e-3), g(1e-3));
        let extrap = g3 * 8.0 / 3.0 - g2 * 2.0 + g1 / 3.0;
        let exact = lattice_green(Complex64::new(lambda, 0.0), 0, 1).unwrap();
        let gap = (extrap - exact).norm();
        worst_boundary = worst_boundary.max(gap);
        assert!(gap < 1e-4, "lambda = {lambda}: boundary gap {gap}");
    }
    pass(&format!(
        "criterion 9: closed-form G vs truncation at 20 points (max {worst:.2e}) and 4 boundary values (max {worst_boundary:.2e})"
    ));
}

#[test]
fn criterion_10_scattering_suite() {
    let start = Instant::now();
    let params = LiftParams::default();
    let lambda_grid = [-1.5, -1.0, -0.5, 0.5, 1.0, 1.5];
    let r_max = 2.0;
    let r_grid: Vec<f64> = (1..=20).map(|i| r_max * i as f64 / 20.0).collect();
    let mut max_unitarity = 0.0f64;
    let mut max_spread = 0.0f64;
    let mut max_int_dev = 0.0f64;
    let mut max_bk = 0.0f64;
    for model in [
        ScatteringModel::rank_one_default(),
        ScatteringModel::rank_two_default(),
    ] {
        for &lambda in &lambda_grid {
            // The whole sweep range must sit below the first resonance.
            let scan_grid: Vec<f64> = (0..=40).map(|i| r_max * i as f64 / 40.0).collect();
            assert!(
                resonance_scan(&model, lambda, &scan_grid)
                    .unwrap()
                    .is_empty(),
                "unexpected resonance inside the sweep at lambda = {lambda}"
            );
            for &r in &r_grid {
                let s = model.tilde_s(Complex64::new(lambda, 0.0), r).unwrap();
                let k = s.dim();
                let defect = specflow::linalg::op_norm(
                    &s.matrix()
                        .adjoint()
                        .mul(s.matrix())
                        .sub(&specflow::linalg::CMat::identity(k)),
                );
                max_unitarity = max_unitarity.max(defect);
                assert!(defect < 1e-8, "unitarity residual {defect}");

                let dres = xi_decompose(&model, lambda, r, &params)
                    .unwrap_or_else(|e| panic!("lambda = {lambda}, r = {r}: {e}"));
                let diffs = dres.mu.difference_on_intervals(&dres.mu_ac, 1e-7);
                let (lo, hi) = diffs
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
                        (a.min(v), b.max(v))
                    });
                max_spread = max_spread.max(hi - lo);
                assert!(hi - lo < 1e-6, "mu_s angle dependence {}", hi - lo);
                let int_dev = (dres.xi_s - dres.xi_s.round()).abs();
                max_int_dev = max_int_dev.max(int_dev);
                assert!(int_dev < 1e-6, "xi_s = {} not integer", dres.xi_s);
                max_bk = max_bk.max(dres.bk_residual);
                assert!(
                    dres.bk_residual < 1e-6,
                    "Birman-Krein residual {}",
                    dres.bk_residual
                );
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 300.0, "took {secs} s");
    pass(&format!(
        "criterion 10: 240-point sweep; unitarity {max_unitarity:.1e}, mu_s spread {max_spread:.1e}, xi_s integer dev {max_int_dev:.1e}, BK {max_bk:.1e}, {secs:.1} s"
    ));
}

#[test]
fn criterion_11_resonance_scan_closed_form() {
    let model = ScatteringModel::rank_one_default();
    // Above the band T0 is real and the rank-one resonance solves
    // 1 + r t0 = 0 in closed form.
    let lambda = 3.0;
    let t0 = model.t0(Complex64::new(lambda, 0.0)).unwrap().m[(0, 0)];
    assert!(t0.im.abs() < 1e-15);
    let r_star = -1.0 / t0.re;
    let grid: Vec<f64> = (0..=60).map(|i| i as f64 * 0.1).collect();
    let hits = resonance_scan(&model, lambda, &grid).unwrap();
    assert_eq!(hits.len(), 1, "expected exactly one resonance");
    let mid = 0.5 * (hits[0].lo + hits[0].hi);
    let gap = (mid - r_star).abs();
    assert!(gap < 1e-9, "scan found {mid}, closed form {r_star}");
    pass(&format!(
        "criterion 11: rank-one resonance at sqrt(5) reproduced to {gap:.1e}"
    ));
}
