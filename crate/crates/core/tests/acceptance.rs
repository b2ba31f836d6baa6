//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitSphere};

use ropes_core::generator::{gcd, open_omega};
use ropes_core::{
    closed_theta, closed_thickness, congruence_fingerprint, coverage_report, endpoint_geometry,
    enumerate_solutions, fgb_check, generate_closed, generate_open, open_thickness,
    sample_sphere, seam_permutation, thickness_accelerated, thickness_bruteforce,
    tube_area_law_check, CurveSpec, EndpointGeometry, SampledCurve, SphereSampling, UnitVec,
    Vec3,
};

const SAMPLES: usize = 2000;
const GRID: usize = 100_000;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn admissible_closed() -> Vec<(u32, u32)> {
    (1..=8u32)
        .flat_map(|n| enumerate_solutions(n).ks.into_iter().map(move |k| (n, k)))
        .collect()
}

fn solution_thickness() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for (n, k) in admissible_closed() {
        let curve = generate_closed(n, k).unwrap().sample(SAMPLES).unwrap();
        let report = thickness_bruteforce(&curve).unwrap();
        let err = (report.delta - closed_thickness(n)).abs();
        worst = worst.max(err);
        if err > 1e-3 {
            failures.push(format!("({n},{k}) delta {}", report.delta));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let passed = failures.is_empty() && secs <= 60.0;
    outcome(
        passed,
        format!(
            "{} curves, max |delta - sin(theta_n)| = {worst:.2e}, {secs:.1} s{}",
            admissible_closed().len(),
            if failures.is_empty() { String::new() } else { format!(", failures: {failures:?}") }
        ),
    )
}

fn sphere_filling() -> Outcome {
    let grid = sample_sphere(GRID, SphereSampling::Fibonacci);
    let mut worst_excess = f64::NEG_INFINITY;
    let mut failures = Vec::new();
    for (n, k) in admissible_closed() {
        let theta = closed_theta(n);
        let curve = generate_closed(n, k).unwrap().sample(SAMPLES).unwrap();
        let report = coverage_report(&curve, theta, &grid, 2e-3).unwrap();
        worst_excess = worst_excess.max(report.max_gap - theta);
        if report.covered_fraction != 1.0 || report.max_gap > theta + 2e-3 {
            failures.push(format!(
                "({n},{k}) covered {} gap {}",
                report.covered_fraction, report.max_gap
            ));
        }
    }
    outcome(
        failures.is_empty(),
        format!("max (max_gap - theta_n) = {worst_excess:.2e}; failures: {failures:?}"),
    )
}

fn length_law() -> Outcome {
    let mut worst = 0.0f64;
    let mut checked = 0;
    for n in 1..=12u32 {
        for k in enumerate_solutions(n).ks {
            let spec = generate_closed(n, k).unwrap();
            let expected = 2.0 * PI / (PI / (2.0 * n as f64)).sin();
            worst = worst.max((spec.length() - expected).abs());
            checked += 1;
        }
    }
    outcome(worst <= 1e-9, format!("{checked} curves, max error {worst:.2e}"))
}

fn tube_area_law() -> Outcome {
    let equator = SampledCurve::from_fn(4000, true, |s| {
        let phi = 2.0 * PI * s;
        Vec3::new(phi.cos(), phi.sin(), 0.0)
    })
    .unwrap();
    let eq = tube_area_law_check(&equator, FRAC_PI_8, 1_000_000, 11).unwrap();
    let solution = generate_closed(2, 1).unwrap().sample(8000).unwrap();
    let sol = tube_area_law_check(&solution, FRAC_PI_4, 1_000_000, 12).unwrap();
    let sphere_err = (sol.estimate - 4.0 * PI).abs() / (4.0 * PI);
    outcome(
        eq.relative_error <= 0.01 && sol.relative_error <= 0.01 && sphere_err <= 0.01,
        format!(
            "equator rel err {:.2e}; (2,1) rel err {:.2e}, |estimate - 4 pi| / 4 pi = {sphere_err:.2e}",
            eq.relative_error, sol.relative_error
        ),
    )
}

fn component_counting() -> Outcome {
    let mut failures = Vec::new();
    for n in 1..=12u32 {
        for k in 0..n {
            let expected = if k == 0 { n } else { gcd(n, k) } as usize;
            let got = seam_permutation(n, k).unwrap().component_count;
            if got != expected {
                failures.push(format!("({n},{k}) {got} != {expected}"));
            }
        }
    }
    let c41 = seam_permutation(4, 1).unwrap().component_count;
    let c42 = seam_permutation(4, 2).unwrap().component_count;
    for n in 1..=1000u32 {
        // independent scan with Euclid's algorithm written out here
        let scan = (0..n)
            .filter(|&k| {
                let (mut a, mut b) = (n, k);
                while b != 0 {
                    (a, b) = (b, a % b);
                }
                a == 1
            })
            .count();
        let e = enumerate_solutions(n);
        if e.count as usize != scan || e.ks.len() != scan {
            failures.push(format!("enumerate({n}) {} != {scan}", e.count));
        }
    }
    let phi4 = enumerate_solutions(4).count;
    let passed = failures.is_empty() && c41 == 1 && c42 == 2 && phi4 == 2;
    outcome(
        passed,
        format!("(4,1) -> {c41}, (4,2) -> {c42}, phi(4) = {phi4}; failures: {failures:?}"),
    )
}

fn equator_rigidity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut max_delta = 0.0f64;
    for _ in 0..100 {
        let modes: Vec<(f64, f64, f64)> = (0..rng.random_range(1..=3))
            .enumerate()
            .map(|(i, _)| {
                let amp = if i == 0 {
                    rng.random_range(1e-2..5e-2)
                } else {
                    rng.random_range(0.0..1e-2)
                };
                let m = rng.random_range(2..=6) as f64;
                (amp, m, rng.random_range(0.0..2.0 * PI))
            })
            .collect();
        let curve = SampledCurve::from_fn(300, true, |s| {
            let phi = 2.0 * PI * s;
            let z: f64 = modes.iter().map(|(a, m, c)| a * (m * phi + c).sin()).sum();
            Vec3::new(phi.cos(), phi.sin(), z)
        })
        .unwrap();
        max_delta = max_delta.max(thickness_bruteforce(&curve).unwrap().delta);
    }
    outcome(
        max_delta < 1.0 - 1e-4,
        format!("100 perturbations, largest delta {max_delta:.6}"),
    )
}

fn crossing_curve() -> SampledCurve {
    SampledCurve::from_fn(801, true, |s| {
        let t = 2.0 * PI * s;
        Vec3::new(0.6 * t.sin(), 0.6 * t.sin() * t.cos(), 1.0)
    })
    .unwrap()
}

fn forbidden_balls() -> Outcome {
    let mut failures = Vec::new();
    for (n, k) in admissible_closed() {
        let curve = generate_closed(n, k).unwrap().sample(SAMPLES).unwrap();
        let report = fgb_check(&curve, closed_theta(n), 1e-3).unwrap();
        if !report.passed {
            failures.push(format!("({n},{k}) {:?}", report.worst));
        }
    }
    let crossing = fgb_check(&crossing_curve(), 0.1, 1e-3).unwrap();
    outcome(
        failures.is_empty() && !crossing.passed,
        format!(
            "solutions failing: {failures:?}; self-crossing curve rejected: {}",
            !crossing.passed
        ),
    )
}

fn open_family() -> Outcome {
    let grid = sample_sphere(GRID, SphereSampling::Fibonacci);
    let mut failures = Vec::new();
    let mut built = Vec::new();
    for n in 2..=8u32 {
        let omega = open_omega(n);
        let mut any = false;
        for k in 0..n {
            let Ok(spec) = generate_open(n, k) else { continue };
            any = true;
            built.push(format!("({n},{k})"));
            let thick = thickness_bruteforce(&spec.sample(1000).unwrap()).unwrap();
            if (thick.delta - open_thickness(n)).abs() > 1e-3 {
                failures.push(format!("({n},{k}) delta {}", thick.delta));
            }
            let dense = spec.sample_per_arc(500).unwrap();
            let cov = coverage_report(&dense, omega, &grid, 2e-3).unwrap();
            if cov.max_gap > omega + 2e-3 {
                failures.push(format!("({n},{k}) gap {}", cov.max_gap));
            }
            let antipodal = matches!(endpoint_geometry(&spec), EndpointGeometry::Antipodal { .. });
            if antipodal != (n % 2 == 0) {
                failures.push(format!("({n},{k}) endpoints {:?}", endpoint_geometry(&spec)));
            }
        }
        if !any {
            failures.push(format!("n = {n}: no open curve"));
        }
    }
    let meridian = generate_open(2, 0).unwrap();
    let mid = meridian.arcs[0].midpoint();
    let is_meridian = meridian.arcs.len() == 1
        && (meridian.length() - PI).abs() <= 1e-9
        && (meridian.arcs[0].rho - FRAC_PI_2).abs() <= 1e-12
        && mid.z().abs() <= 1e-12
        && meridian.start().unwrap().z() > 1.0 - 1e-12
        && meridian.end().unwrap().z() < -1.0 + 1e-12;
    if !is_meridian {
        failures.push("n = 2 is not a meridian semicircle of length pi".to_owned());
    }
    outcome(
        failures.is_empty(),
        format!("{} curves {}; failures: {failures:?}", built.len(), built.join(" ")),
    )
}

fn random_curve(rng: &mut ChaCha8Rng) -> SampledCurve {
    let m = rng.random_range(60..=200);
    let closed = rng.random_bool(0.7);
    let coeffs: Vec<(Vec3, Vec3)> = (1..=4)
        .map(|j| {
            let scale = 0.6 / j as f64;
            let mut v = || Vec3::from(UnitSphere.sample(rng)) * rng.random_range(0.0..scale);
            (v(), v())
        })
        .collect();
    SampledCurve::from_fn(m, closed, |s| {
        let phi = 2.0 * PI * s * if closed { 1.0 } else { 0.8 };
        let mut p = Vec3::new(phi.cos(), phi.sin(), 0.0) * 1.5;
        for (j, (a, b)) in coeffs.iter().enumerate() {
            let f = (j + 1) as f64 * phi;
            p += a * f.cos() + b * f.sin();
        }
        p
    })
    .unwrap()
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    let mut mismatched = Vec::new();
    for trial in 0..50 {
        let curve = random_curve(&mut rng);
        let slow = thickness_bruteforce(&curve).unwrap();
        let fast = thickness_accelerated(&curve).unwrap();
        let err = (slow.delta - fast.delta).abs();
        worst = worst.max(err);
        if err > 1e-14 || slow.witness != fast.witness {
            mismatched.push(trial);
        }
    }
    outcome(
        mismatched.is_empty(),
        format!("50 curves, max |difference| {worst:.1e}, mismatched trials {mismatched:?}"),
    )
}

fn congruence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let a = generate_closed(4, 1).unwrap();
    let b = generate_closed(4, 3).unwrap();
    let fa = congruence_fingerprint(&a, 2);
    let fb = congruence_fingerprint(&b, 2);
    let differ = !fa.matches(&fb);
    let mut stable = true;
    for spec in [&a, &b] {
        let reference = congruence_fingerprint(spec, 2);
        for _ in 0..20 {
            let [x, y, z]: [f64; 3] = UnitSphere.sample(&mut rng);
            let axis = UnitVec::from_xyz(x, y, z).unwrap();
            let angle = rng.random_range(0.0..2.0 * PI);
            let rotated: CurveSpec = spec.rotated(&axis, angle);
            stable &= reference.matches(&congruence_fingerprint(&rotated, 2));
        }
    }
    outcome(
        differ && stable,
        format!(
            "(4,1) vs (4,3) differ: {differ} (chirality {} vs {}); invariant under 40 rotations: {stable}",
            fa.chirality, fb.chirality
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("solution thickness", solution_thickness),
        ("sphere filling", sphere_filling),
        ("length law", length_law),
        ("tube area law", tube_area_law),
        ("component counting", component_counting),
        ("equator rigidity", equator_rigidity),
        ("forbidden balls", forbidden_balls),
        ("open family", open_family),
        ("oracle equivalence", oracle_equivalence),
        ("congruence", congruence),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        let status = if result.passed { "PASS" } else { "FAIL" };
        println!(
            "{status} criterion {:>2} {name}: {} [{secs:.1} s]",
            i + 1,
            result.detail
        );
        failed += usize::from(!result.passed);
    }
    if failed == 0 {
        println!("acceptance: 10/10 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 10 criteria failed");
        ExitCode::FAILURE
    }
}
