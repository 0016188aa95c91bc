use std::f64::consts::PI;

use fhl_core::kernel::{angular_kernel_value, AngularKernel, ExteriorTail};
use fhl_core::params::FracParams;
use fhl_core::quadrature::{integrate, Tolerance};
use fhl_core::specfun::gamma;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sphere(n: f64) -> f64 {
    2.0 * PI.powf(0.5 * n) / gamma(0.5 * n).unwrap()
}

/// Gauss series ₂F₁(a, b; c; z), summed until the terms drop below 1e-17.
fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> f64 {
    let mut term: f64 = 1.0;
    let mut sum: f64 = 1.0;
    let mut k = 0.0;
    while term.abs() > 1e-17 * sum.abs() {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum += term;
        k += 1.0;
        assert!(k < 1e6, "series did not converge");
    }
    sum
}

/// For N = 3 the θ integral is elementary.
fn d_three(kappa: f64, tau: f64) -> f64 {
    2.0 * PI * ((1.0 - tau).abs().powf(-1.0 - kappa) - (1.0 + tau).powf(-1.0 - kappa)) / ((1.0 + kappa) * tau)
}

#[test]
fn small_tau_limit_is_sphere_area() {
    for (n, s) in [(2, 0.3), (3, 0.5), (5, 0.7)] {
        let p = FracParams::new(n, s).unwrap();
        let d = angular_kernel_value(&p, 2.0 * s, 1e-8).unwrap();
        let w = sphere(f64::from(n));
        assert!((d - w).abs() < 1e-12 * w, "N={n}: {d} vs {w}");
    }
}

#[test]
fn three_dimensional_closed_form() {
    let p = FracParams::new(3, 0.5).unwrap();
    for kappa in [1.0_f64, 0.37, 1.6] {
        for tau in [0.01_f64, 0.3, 0.9, 0.999, 0.99999, 1.001, 1.7, 40.0] {
            let d = angular_kernel_value(&p, kappa, tau).unwrap();
            let exact = d_three(kappa, tau);
            assert!((d - exact).abs() < 1e-9 * exact, "kappa={kappa}, tau={tau}: {d} vs {exact}");
        }
    }
}

#[test]
fn hypergeometric_representation() {
    // ∫ sin^{N−2}θ (1−2τcosθ+τ²)^{−m} dθ in closed form through ₂F₁(m, m−N/2+1; N/2; τ²)
    for (n, kappa) in [(2u32, 0.6_f64), (4, 1.0), (5, 1.4), (7, 0.3)] {
        let p = FracParams::new(n, 0.3).unwrap();
        let nf = f64::from(n);
        let m = 0.5 * (nf + kappa);
        for tau in [0.05, 0.2, 0.5, 0.7] {
            let exact = sphere(nf) * hyp2f1(m, m - 0.5 * nf + 1.0, 0.5 * nf, tau * tau);
            let d = angular_kernel_value(&p, kappa, tau).unwrap();
            assert!((d - exact).abs() < 1e-10 * exact, "N={n}, tau={tau}: {d} vs {exact}");
        }
    }
}

#[test]
fn inversion_symmetry_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (n, s) in [(2, 0.3), (3, 0.5), (4, 0.5), (5, 0.7)] {
        let p = FracParams::new(n, s).unwrap();
        for kappa in [2.0 * s, 1.2] {
            for _ in 0..25 {
                let tau: f64 = rng.gen_range(0.01..0.99);
                let a = angular_kernel_value(&p, kappa, 1.0 / tau).unwrap();
                let b = tau.powf(f64::from(n) + kappa) * angular_kernel_value(&p, kappa, tau).unwrap();
                assert!((a - b).abs() < 1e-9 * b, "N={n}, tau={tau}");
            }
        }
    }
}

#[test]
fn table_matches_direct_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (n, s) in [(2, 0.3), (3, 0.4), (5, 0.7)] {
        let p = FracParams::new(n, s).unwrap();
        let k = AngularKernel::shared(&p, 2.0 * s).unwrap();
        for _ in 0..40 {
            // spread samples over many decades of 1 − τ
            let e: f64 = 10f64.powf(rng.gen_range(-11.0..-0.01));
            for tau in [1.0 - e, 1.0 / (1.0 - e)] {
                let direct = angular_kernel_value(&p, 2.0 * s, tau).unwrap();
                let table = k.value(tau).unwrap();
                assert!((table - direct).abs() < 1e-9 * direct, "N={n}, tau={tau}: {table} vs {direct}");
            }
        }
    }
}

#[test]
fn edge_constant_matches_limit() {
    // (1−τ)^{1+κ} D(τ) → π^{(N−1)/2} Γ((1+κ)/2) / Γ((N+κ)/2)
    for (n, kappa) in [(2u32, 0.6_f64), (3, 0.8), (6, 1.5)] {
        let p = FracParams::new(n, 0.3).unwrap();
        let k = AngularKernel::new(&p, kappa).unwrap();
        let nf = f64::from(n);
        let exact = PI.powf(0.5 * (nf - 1.0)) * gamma(0.5 * (1.0 + kappa)).unwrap() / gamma(0.5 * (nf + kappa)).unwrap();
        assert!((k.edge_constant() - exact).abs() < 1e-8 * exact, "N={n}: {} vs {exact}", k.edge_constant());
    }
}

#[test]
fn dump_is_ascending_and_positive() {
    let p = FracParams::new(3, 0.4).unwrap();
    let k = AngularKernel::shared(&p, 0.8).unwrap();
    let rows = k.dump();
    assert!(rows.windows(2).all(|w| w[1].0 > w[0].0));
    assert!(rows.iter().all(|r| r.1 > 0.0));
    assert_eq!(rows[0].0, 0.0);
    assert!((rows[0].1 - sphere(3.0)).abs() < 1e-12);
}

#[test]
fn exterior_tail_matches_direct_integral() {
    // κ_ext(r) = ∫_1^∞ ω r^{N−1} ρ^{−1−κ} D(r/ρ) (rρ)^{−γ} dρ with the N = 3 closed form of D
    let p = FracParams::new(3, 0.4).unwrap();
    let kappa = 0.8;
    let k = AngularKernel::shared(&p, kappa).unwrap();
    for gam in [0.0, 0.5] {
        let tail = ExteriorTail::new(k.clone(), gam).unwrap();
        for r in [1e-3, 0.2, 0.5, 0.9, 0.999] {
            let f = |t: f64| {
                // ρ = 1/t
                let rho = 1.0 / t;
                4.0 * PI * r * r * rho.powf(-1.0 - kappa) * d_three(kappa, r * t) * (r * rho).powf(-gam) / (t * t)
            };
            let mut breaks = vec![0.0, 0.5];
            let mut x = 0.5;
            while x > 1e-9 {
                x *= 0.5;
                breaks.push(1.0 - x);
            }
            breaks.push(1.0);
            let exact = integrate(f, &breaks, Tolerance::rel(1e-12)).value;
            let v = tail.value(r);
            assert!((v - exact).abs() < 1e-8 * exact, "gamma={gam}, r={r}: {v} vs {exact}");
        }
    }
}
