//! Acceptance suite: every release-gating property of the library, one
//! test per criterion, each printing a PASS line with the measured numbers
//! (run with `--nocapture` to see them). Tolerances are pinned here, not
//! configurable.

use edeg_core::asymptotics::{
    self, lambda_closed, lambda_mc_coefficient, lambda_mc_sphere,
};
use edeg_core::complex_degree::{delta_complex, delta_complex_asymptotic};
use edeg_core::edeg::{self};
use edeg_core::mc_schubert::{check_delta0, count_real_meets, estimate_delta13, ProjectiveLine};
use edeg_core::numerics::{exact_factorial, Rng};
use edeg_core::zonoid::{
    mixed_moment_quadrature, mu_perp_basis, radial_maximum, sphere_moment,
    sphere_moment_quadrature, Direction, ZonoidModel,
};
use edeg_core::Error;
use std::time::Instant;

#[test]
fn acceptance_1_exact_complex_degrees() {
    let start = Instant::now();
    for n in 3..=15u32 {
        let m = u64::from(n) - 1;
        let catalan = exact_factorial(2 * m)
            .div_exact(&(&exact_factorial(m) * &exact_factorial(m + 1)))
            .unwrap();
        assert_eq!(delta_complex(1, n).unwrap(), catalan, "n = {n}");
    }
    assert_eq!(delta_complex(2, 5).unwrap().to_f64(), 42.0);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "runtime {elapsed:?} >= 1 s");
    println!(
        "ACCEPTANCE 1 PASS: delta_complex(1,n) = Catalan(n-1) for n = 3..15, delta_complex(2,5) = 42 ({elapsed:?})"
    );
}

#[test]
fn acceptance_2_delta13_triple_agreement() {
    let start = Instant::now();
    let line = edeg::delta1_line_integral(3, 1e-11).unwrap();
    let theta = edeg::delta1_theta_integral(3, 1e-10).unwrap();
    assert!(
        (line.value - theta.value).abs() <= 1e-8,
        "line {} vs theta {}",
        line.value,
        theta.value
    );
    let mc = estimate_delta13(1_000_000, 0xED_E6).unwrap();
    let sigma = mc.estimate.std_error;
    assert!(
        (mc.estimate.mean - line.value).abs() <= 3.0 * sigma,
        "MC {} +- {} vs line {}",
        mc.estimate.mean,
        sigma,
        line.value
    );
    assert!(
        (mc.estimate.mean - theta.value).abs() <= 3.0 * sigma,
        "MC {} +- {} vs theta {}",
        mc.estimate.mean,
        sigma,
        theta.value
    );
    // "1.72": the two-decimal prefix of the common value.
    assert!(
        (1.72..1.73).contains(&line.value),
        "common value {} does not start with 1.72",
        line.value
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "runtime {elapsed:?} >= 2 min");
    println!(
        "ACCEPTANCE 2 PASS: delta_13 = {:.10} (line) = {:.10} (theta), MC {:.5} +- {:.5} over 10^6 trials ({elapsed:?})",
        line.value, theta.value, mc.estimate.mean, sigma
    );
}

#[test]
fn acceptance_3_zonoid_identities() {
    let start = Instant::now();
    let mut rng = Rng::new(2601);
    for k in 1..=2usize {
        let model = ZonoidModel::new(k).unwrap();
        let r_mu = model.radial(&Direction::mu(k)).unwrap();
        let r_closed = radial_maximum(k);
        assert!(
            (r_mu - r_closed).abs() <= 1e-8,
            "k={k}: r(mu) = {r_mu} vs closed form {r_closed}"
        );
        // Hessian of r² at mu in exponential coordinates: -4/(k+1) times
        // the identity, normalization-free as a ratio to r(mu)².
        let target = -4.0 / (k as f64 + 1.0);
        let basis = mu_perp_basis(k);
        for w in &basis {
            let ratio = model.radial_sq_hessian_ratio(w, 0.02).unwrap();
            assert!(
                ((ratio - target) / target).abs() <= 1e-4,
                "k={k}: Hessian ratio {ratio} vs {target}"
            );
        }
        // Dpsi(mu) eigenvalue (k+1)/(k+3).
        let c = (k as f64 + 1.0) / (k as f64 + 3.0);
        for _ in 0..2 {
            let w = {
                let mut w = vec![0.0; k + 1];
                for b in &basis {
                    let z = rng.gaussian();
                    for (wi, bi) in w.iter_mut().zip(b) {
                        *wi += z * bi;
                    }
                }
                let n = w.iter().map(|v| v * v).sum::<f64>().sqrt();
                w.iter().map(|v| v / n).collect::<Vec<_>>()
            };
            let d = model.dpsi_directional(&Direction::mu(k), &w, 1e-4).unwrap();
            let dev = d
                .iter()
                .zip(&w)
                .map(|(&di, &wi)| (di - c * wi) * (di - c * wi))
                .sum::<f64>()
                .sqrt();
            assert!(dev <= 1e-6, "k={k}: |Dpsi w - {c} w| = {dev}");
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "runtime {elapsed:?} >= 1 min");
    println!("ACCEPTANCE 3 PASS: r(mu) = R to 1e-8, Hessian ratio -4/(k+1) to 1e-4, Dpsi eigenvalue (k+1)/(k+3) to 1e-6, k = 1, 2 ({elapsed:?})");
}

#[test]
fn acceptance_4_moment_identities() {
    for k in 1..=4usize {
        let kf = k as f64;
        let g2 = sphere_moment(k, 2);
        let g4 = sphere_moment(k, 4);
        let g6 = sphere_moment(k, 6);
        assert!(((g4 / g2) - 3.0 / (kf + 3.0)).abs() <= 1e-8, "k={k}");
        assert!(
            ((g6 / g2) - 15.0 / ((kf + 3.0) * (kf + 5.0))).abs() <= 1e-8,
            "k={k}"
        );
        for (m, closed) in [(2u32, g2), (4, g4), (6, g6)] {
            let quad = sphere_moment_quadrature(k, m, 32);
            assert!(
                (quad - closed).abs() <= 1e-8 * closed.max(1.0),
                "k={k} m={m}: quadrature {quad} vs closed {closed}"
            );
        }
        // Mixed-moment identities with the quadrature on the other side.
        let m22 = mixed_moment_quadrature(k, &[(0, 2), (1, 2)], 32) / g2;
        assert!((m22 - 1.0 / (kf + 3.0)).abs() <= 1e-8, "k={k}: {m22}");
        let m42 = mixed_moment_quadrature(k, &[(0, 4), (1, 2)], 32) / g2;
        assert!(
            (m42 - 3.0 / ((kf + 3.0) * (kf + 5.0))).abs() <= 1e-8,
            "k={k}: {m42}"
        );
    }
    println!("ACCEPTANCE 4 PASS: G(4)/G(2) = 3/(k+3) and G(6)/G(2) = 15/((k+3)(k+5)) closed vs quadrature to 1e-8, k = 1..4");
}

#[test]
fn acceptance_5_lambda_constants() {
    let sphere2 = lambda_mc_sphere(2, 1_000_000, 271).unwrap();
    let target = lambda_closed(2).unwrap();
    assert!(
        (sphere2.mean - target).abs() <= 3.0 * sphere2.std_error,
        "sphere Lambda_2 = {} +- {} vs sqrt(pi/3) = {}",
        sphere2.mean,
        sphere2.std_error,
        target
    );
    for k in 2..=3u32 {
        let s = lambda_mc_sphere(k, 600_000, 272).unwrap();
        let c = lambda_mc_coefficient(k, 600_000, 273).unwrap();
        let combined = (s.std_error.powi(2) + c.std_error.powi(2)).sqrt();
        assert!(
            (s.mean - c.mean).abs() <= 3.0 * combined,
            "k={k}: sphere {} +- {} vs coefficient {} +- {}",
            s.mean,
            s.std_error,
            c.mean,
            c.std_error
        );
    }
    println!(
        "ACCEPTANCE 5 PASS: sphere Lambda_2 = {:.6} +- {:.6} vs {:.6}; sphere/coefficient agree for k = 2, 3",
        sphere2.mean, sphere2.std_error, target
    );
}

#[test]
fn acceptance_6_asymptotic_convergence() {
    let start = Instant::now();
    let err = |n: u32| -> f64 {
        let exact = edeg::delta1_line_integral(n, 1e-11).unwrap().value;
        let asym = asymptotics::delta_real_asymptotic(1, n).unwrap();
        (exact / asym - 1.0).abs()
    };
    let e20 = err(20);
    let e40 = err(40);
    assert!(e20 <= 0.15, "e(20) = {e20}");
    assert!(e40 <= 0.6 * e20, "e(40) = {e40} vs 0.6 e(20) = {}", 0.6 * e20);
    // Complex analogue.
    let cerr = |n: u32| -> f64 {
        let exact = delta_complex(1, n).unwrap().to_f64();
        (exact / delta_complex_asymptotic(1, n).unwrap() - 1.0).abs()
    };
    let c20 = cerr(20);
    let c40 = cerr(40);
    assert!(c40 <= 0.6 * c20, "complex: e(40) = {c40} vs e(20) = {c20}");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "runtime {elapsed:?} >= 1 min");
    println!(
        "ACCEPTANCE 6 PASS: real e(20) = {e20:.4}, e(40) = {e40:.4}; complex e(20) = {c20:.4}, e(40) = {c40:.4} ({elapsed:?})"
    );
}

#[test]
fn acceptance_7_pipeline_consistency() {
    let line = edeg::delta1_line_integral(3, 1e-11).unwrap().value;
    let i13 = edeg::ik_quadrature(1, 3, 1e-10).unwrap().value;
    let beta13 = asymptotics::beta(1, 3).unwrap();
    let pipeline = beta13 * i13;
    assert!(
        (pipeline - line).abs() <= 1e-6,
        "beta_13 I_1(3) = {pipeline} vs line integral {line}"
    );
    println!(
        "ACCEPTANCE 7 PASS: beta_13 I_1(3) = {pipeline:.10} vs line integral {line:.10} (diff {:.2e})",
        (pipeline - line).abs()
    );
}

#[test]
fn acceptance_8_delta0_is_one() {
    for n in 2..=8u32 {
        assert_eq!(check_delta0(n, 1000 + u64::from(n)).unwrap(), 1, "n = {n}");
    }
    println!("ACCEPTANCE 8 PASS: delta_0,n = 1 for n = 2..8");
}

#[test]
fn acceptance_9_parity_and_degeneracy_rate() {
    let trials = 100_000u64;
    let mut rng = Rng::new(90210);
    let mut degenerate = 0u64;
    let mut done = 0u64;
    let (mut zeros, mut twos) = (0u64, 0u64);
    while done < trials {
        let l: Vec<ProjectiveLine> = (0..4).map(|_| ProjectiveLine::sample(&mut rng)).collect();
        match count_real_meets(&l[0], &l[1], &l[2], &l[3]) {
            Ok(0) => {
                zeros += 1;
                done += 1;
            }
            Ok(2) => {
                twos += 1;
                done += 1;
            }
            Ok(c) => panic!("count {c} outside {{0, 2}}"),
            Err(Error::Degenerate(_)) => degenerate += 1,
            Err(e) => panic!("{e}"),
        }
    }
    let rate = degenerate as f64 / trials as f64;
    assert!(rate < 1e-4, "degenerate-resample rate {rate}");
    println!(
        "ACCEPTANCE 9 PASS: 10^5 trials all in {{0, 2}} ({zeros} zeros, {twos} twos), degenerate rate {rate:.2e}"
    );
}
