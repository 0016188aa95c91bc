use std::f64::consts::PI;

use fhl_core::operator::{apply_pointwise, folded_bracket, gagliardo_seminorm, hardy_quotient, weighted_forms};
use fhl_core::params::{hardy_constant, power_multiplier, FracParams};
use fhl_core::profile::RadialFunction;
use fhl_core::quadrature::{integrate, Tolerance};

fn d_three(kappa: f64, tau: f64) -> f64 {
    2.0 * PI * ((1.0 - tau).abs().powf(-1.0 - kappa) - (1.0 + tau).powf(-1.0 - kappa)) / ((1.0 + kappa) * tau)
}

#[test]
fn ground_state_power_gives_hardy_constant() {
    for (n, s) in [(3, 0.3), (3, 0.5), (4, 0.5), (5, 0.7), (2, 0.2)] {
        let p = FracParams::new(n, s).unwrap();
        let beta = p.half_gap();
        let g = RadialFunction::power(1.0, -beta);
        for r in [0.1, 0.5, 2.0] {
            let v = apply_pointwise(&p, &g, r).unwrap() * r.powf(beta + 2.0 * s);
            let big = hardy_constant(&p);
            assert!((v - big).abs() < 1e-6 * big, "N={n}, s={s}, r={r}: {v} vs {big}");
        }
    }
}

#[test]
fn two_power_profile_superposes() {
    // v = r^{−γ} − r^{−(ν−2s)} maps to μ(γ) r^{−γ−2s} − μ(ν−2s) r^{−ν}
    let p = FracParams::new(3, 0.4).unwrap();
    let (gam, nu) = (1.0, 1.5);
    let g = RadialFunction::powers(&[(1.0, -gam), (-1.0, -(nu - 0.8))]);
    for r in [0.05, 0.3, 0.9] {
        let v = apply_pointwise(&p, &g, r).unwrap();
        let exact = power_multiplier(&p, gam).unwrap() * r.powf(-gam - 0.8)
            - power_multiplier(&p, nu - 0.8).unwrap() * r.powf(-nu);
        assert!((v - exact).abs() < 1e-5 * exact.abs(), "r={r}: {v} vs {exact}");
    }
}

#[test]
fn pointwise_is_linear_over_power_sums() {
    let p = FracParams::new(4, 0.5).unwrap();
    let a = RadialFunction::power(2.0, -0.4);
    let b = RadialFunction::power(-0.7, -1.9);
    let sum = RadialFunction::powers(&[(2.0, -0.4), (-0.7, -1.9)]);
    for r in [0.2, 1.3] {
        let lhs = apply_pointwise(&p, &sum, r).unwrap();
        let rhs = apply_pointwise(&p, &a, r).unwrap() + apply_pointwise(&p, &b, r).unwrap();
        assert!((lhs - rhs).abs() < 1e-8 * rhs.abs().max(1.0), "{lhs} vs {rhs}");
    }
}

#[test]
fn bracket_vanishes_to_second_order() {
    let p = FracParams::new(3, 0.6).unwrap();
    let smooth = RadialFunction::custom(|r: f64| (-r * r).exp() + 0.3 * r, false, vec![]);
    let power = RadialFunction::power(1.0, -0.9);
    for g in [smooth, power] {
        let mut ratios = Vec::new();
        for k in 2..=6 {
            let e = 10f64.powi(-k);
            ratios.push(folded_bracket(&p, &g, 0.7, 1.0 - e) / (e * e));
        }
        let top = ratios.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(top.is_finite() && top < 10.0, "{ratios:?}");
        let spread = (ratios[4] - ratios[2]).abs();
        assert!(spread < 1e-2 * ratios[2].abs().max(1e-3), "{ratios:?}");
    }
}

#[test]
fn closure_path_matches_power_multiplier() {
    // r^{−β} given as a closure goes through the generic bracket and the quadratic model at τ → 1
    let p = FracParams::new(3, 0.4).unwrap();
    let beta = 0.9;
    let generic = RadialFunction::custom(move |r: f64| r.powf(-beta), false, vec![]);
    let exact = power_multiplier(&p, beta).unwrap();
    for r in [0.3, 1.0] {
        let v = apply_pointwise(&p, &generic, r).unwrap() * r.powf(beta + 0.8);
        assert!((v - exact).abs() < 1e-6 * exact, "r={r}: {v} vs {exact}");
    }
}

#[test]
fn pointwise_rejects_nonpositive_radius() {
    let p = FracParams::new(3, 0.4).unwrap();
    assert!(apply_pointwise(&p, &RadialFunction::power(1.0, -1.0), 0.0).is_err());
}

fn tent() -> RadialFunction {
    RadialFunction::sampled(vec![0.0, 0.5, 1.0], vec![0.0, 1.0, 0.0]).unwrap()
}

#[test]
fn zero_profile_and_homogeneity() {
    let p = FracParams::new(3, 0.4).unwrap();
    let zero = RadialFunction::sampled(vec![0.0, 0.5, 1.0], vec![0.0; 3]).unwrap();
    assert_eq!(gagliardo_seminorm(&p, &zero, 0.8, 2.0).unwrap(), 0.0);
    for q in [2.0, 1.5] {
        let a = gagliardo_seminorm(&p, &tent(), 0.6 * q, q).unwrap();
        let b = gagliardo_seminorm(&p, &tent().scaled(3.0), 0.6 * q, q).unwrap();
        assert!((b - 3f64.powf(q) * a).abs() < 1e-10 * b);
    }
    assert!(gagliardo_seminorm(&p, &RadialFunction::power(1.0, -1.0), 0.8, 2.0).is_err());
    assert!(gagliardo_seminorm(&p, &tent(), 2.5, 2.0).is_err());
}

#[test]
fn tent_seminorm_against_brute_force_grid() {
    // trapezoid over [0,1]² of (g(r)−g(ρ))² ω lo² hi^{−1−κ} D(lo/hi) with the N = 3
    // closed form, plus the exterior strip 2∫ g² ∫_1^∞ k dρ dr
    let p = FracParams::new(3, 0.4).unwrap();
    let kappa = 0.8;
    let omega = 4.0 * PI;
    let g = |r: f64| if r < 0.5 { 2.0 * r } else { 2.0 * (1.0 - r) };
    let k = |r: f64, rho: f64| {
        let (lo, hi) = if r < rho { (r, rho) } else { (rho, r) };
        omega * lo * lo * hi.powf(-1.0 - kappa) * d_three(kappa, lo / hi)
    };
    let n = 2000;
    let h = 1.0 / n as f64;
    let mut interior = 0.0;
    for i in 0..=n {
        let r = i as f64 * h;
        let wi = if i == 0 || i == n { 0.5 } else { 1.0 };
        for j in 0..=n {
            if i == j || i == 0 || j == 0 {
                continue;
            }
            let rho = j as f64 * h;
            let wj = if j == n { 0.5 } else { 1.0 };
            let d = g(r) - g(rho);
            interior += wi * wj * d * d * k(r, rho);
        }
    }
    interior *= h * h;
    let ext_density = |r: f64| {
        integrate(
            |t: f64| k(r, 1.0 / t) / (t * t),
            &[0.0, 0.5, 0.9, 0.99, 0.999, 1.0],
            Tolerance::rel(1e-10),
        )
        .value
    };
    let outer = integrate(
        |r| g(r) * g(r) * ext_density(r),
        &[0.0, 0.5, 0.9, 0.99, 1.0],
        Tolerance::rel(1e-8),
    )
    .value;
    let brute = interior + 2.0 * outer;
    let v = gagliardo_seminorm(&p, &tent(), kappa, 2.0).unwrap();
    assert!((v - brute).abs() < 1e-2 * brute, "{v} vs {brute}");
}

#[test]
fn sampled_and_closure_paths_agree() {
    let p = FracParams::new(3, 0.4).unwrap();
    let nodes: Vec<f64> = (0..=8).map(|i| i as f64 / 8.0).collect();
    let vals: Vec<f64> = nodes.iter().map(|r| (1.0 - r) * (1.0 + r)).collect();
    let sampled = RadialFunction::sampled(nodes.clone(), vals.clone()).unwrap();
    let closure = {
        let s = sampled.clone();
        RadialFunction::custom(move |r| s.eval(r), true, nodes[1..8].to_vec())
    };
    let a = gagliardo_seminorm(&p, &sampled, 0.8, 2.0).unwrap();
    let b = gagliardo_seminorm(&p, &closure, 0.8, 2.0).unwrap();
    assert!((a - b).abs() < 1e-6 * b, "{a} vs {b}");
}

#[test]
fn hardy_quotient_bounds_and_trend() {
    let p = FracParams::new(3, 0.4).unwrap();
    let big = hardy_constant(&p);
    let plateau = RadialFunction::sampled(vec![0.0, 0.5, 1.0], vec![1.0, 1.0, 0.0]).unwrap();
    let qp = hardy_quotient(&p, &plateau).unwrap();
    assert!(qp.is_finite() && qp > big, "{qp}");
    let mut last = f64::INFINITY;
    for eps in [0.4, 0.2, 0.1] {
        let beta = p.half_gap() - eps;
        let g = RadialFunction::custom(move |r: f64| r.powf(-beta) * (1.0 - r), true, vec![]);
        let q = hardy_quotient(&p, &g).unwrap();
        assert!(q >= big * (1.0 - 1e-3), "eps={eps}: {q} < {big}");
        assert!(q < last, "eps={eps}: {q} not below {last}");
        last = q;
    }
    let zero = RadialFunction::sampled(vec![0.0, 1.0], vec![0.0, 0.0]).unwrap();
    assert!(hardy_quotient(&p, &zero).is_err());
}

#[test]
fn weighted_forms_reduce_and_integrate_shells() {
    let p = FracParams::new(3, 0.3).unwrap();
    let nodes = vec![0.0, 0.2, 0.3, 0.6, 0.8, 1.0];
    let vals = vec![0.0, 0.0, 1.0, 1.0, 0.0, 0.0];
    let v = RadialFunction::sampled(nodes.clone(), vals.clone()).unwrap();
    let (m0, f0) = weighted_forms(&p, &v, 0.0).unwrap();
    let plain = gagliardo_seminorm(&p, &v, 0.6, 2.0).unwrap();
    assert!((f0 - plain).abs() < 1e-10 * plain);
    for gam in [0.0, 0.4, 1.1] {
        // ω ∫ v² r^{2−2γ} dr, with v piecewise linear: expand (α + βr)² r^c
        let c = 2.0 - 2.0 * gam;
        let mut exact = 0.0;
        for e in 0..nodes.len() - 1 {
            let (a, b) = (nodes[e], nodes[e + 1]);
            let beta = (vals[e + 1] - vals[e]) / (b - a);
            let alpha = vals[e] - beta * a;
            let prim = |r: f64| {
                alpha * alpha * r.powf(c + 1.0) / (c + 1.0)
                    + 2.0 * alpha * beta * r.powf(c + 2.0) / (c + 2.0)
                    + beta * beta * r.powf(c + 3.0) / (c + 3.0)
            };
            exact += prim(b) - prim(a);
        }
        exact *= 4.0 * PI;
        let (m, f) = weighted_forms(&p, &v, gam).unwrap();
        assert!((m - exact).abs() < 1e-8 * exact, "gamma={gam}: {m} vs {exact}");
        assert!(f > 0.0);
        if gam == 0.0 {
            assert!((m - m0).abs() < 1e-15 * m0);
        }
    }
    assert!(weighted_forms(&p, &v, p.half_gap()).is_err());
}

#[test]
fn weighted_poincare_ratio_is_reported() {
    // diagnostic only: seminorm/mass along bumps moving toward the origin
    let p = FracParams::new(3, 0.4).unwrap();
    let gam = 0.6;
    for c in [0.5, 0.25, 0.125] {
        let v = RadialFunction::sampled(vec![0.0, 0.5 * c, c, 1.0], vec![0.0, 0.0, 1.0, 0.0]).unwrap();
        let (m, f) = weighted_forms(&p, &v, gam).unwrap();
        println!("bump at {c}: weighted seminorm / mass = {:.6}", f / m);
        assert!(f / m > 0.0);
    }
}
