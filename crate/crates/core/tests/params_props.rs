use proptest::prelude::*;

use fhl_core::grid::{lq_norm, RadialField, RadialGrid};
use fhl_core::params::{
    algebraic_inequality_gap, alpha_of_lambda, coupling, curve_j, curve_p, hardy_constant, lambda_of_alpha,
    power_multiplier, FracParams,
};

fn frac_params() -> impl Strategy<Value = FracParams> {
    (2u32..=6, 0.05f64..0.95).prop_map(|(n, s)| FracParams::new(n, s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn multiplier_inverts_the_coupling(p in frac_params(), t in 0.01f64..=1.0) {
        let big = hardy_constant(&p);
        let lambda = t * big;
        let c = coupling(&p, lambda).unwrap();
        prop_assume!(c.gamma > 1e-9);
        let mu = power_multiplier(&p, c.gamma).unwrap();
        prop_assert!((mu - lambda).abs() <= 1e-11 * big, "mu = {}, lambda = {}", mu, lambda);
        prop_assert!((c.gamma + c.gamma_bar - (p.nf() - 2.0 * p.s())).abs() < 1e-12);
    }

    #[test]
    fn multiplier_is_symmetric(p in frac_params(), t in 0.01f64..0.99) {
        let top = p.nf() - 2.0 * p.s();
        let beta = t * top;
        let a = power_multiplier(&p, beta).unwrap();
        let b = power_multiplier(&p, top - beta).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        prop_assert!(a <= hardy_constant(&p) * (1.0 + 1e-12));
    }

    #[test]
    fn lambda_of_alpha_is_decreasing_and_inverted(p in frac_params(), t in 0.0f64..0.98, dt in 0.001f64..0.02) {
        let h = p.half_gap();
        let (a1, a2) = (t * h, (t + dt).min(0.999) * h);
        let (l1, l2) = (lambda_of_alpha(&p, a1).unwrap(), lambda_of_alpha(&p, a2).unwrap());
        prop_assert!(l2 < l1);
        let back = alpha_of_lambda(&p, l1).unwrap();
        prop_assert!(lambda_of_alpha(&p, back).map(|l| (l - l1).abs() <= 1e-12 * hardy_constant(&p)).unwrap_or(false));
    }

    #[test]
    fn j_stays_below_p(p in frac_params(), t in 0.01f64..0.99) {
        let m = p.m_left() + t * (p.m_right() - p.m_left());
        let (j, pm) = (curve_j(&p, m).unwrap(), curve_p(&p, m).unwrap());
        prop_assert!(j <= pm * (1.0 + 1e-12), "m = {}: J = {}, P = {}", m, j, pm);
    }

    #[test]
    fn outputs_are_deterministic(p in frac_params(), t in 0.05f64..0.95) {
        let big = hardy_constant(&p);
        prop_assert_eq!(big.to_bits(), hardy_constant(&p).to_bits());
        let a = alpha_of_lambda(&p, t * big).unwrap();
        prop_assert_eq!(a.to_bits(), alpha_of_lambda(&p, t * big).unwrap().to_bits());
    }

    #[test]
    fn algebraic_gap_is_nonnegative(s1 in 0.0f64..20.0, s2 in 0.0f64..20.0, a in 1e-3f64..8.0) {
        let g = algebraic_inequality_gap(s1, s2, a);
        prop_assert!(g >= -1e-14 * s1.max(s2).max(1.0).powf(a + 1.0), "gap {}", g);
        prop_assert_eq!(algebraic_inequality_gap(s1, s2, 1.0), 0.0);
    }

    #[test]
    fn lq_norm_is_homogeneous(c in -5.0f64..5.0, q in 1.0f64..4.0, w in 0.0f64..2.0, m in 16usize..80, g in 1.0f64..4.0) {
        let p = FracParams::new(3, 0.4).unwrap();
        let grid = RadialGrid::new(m, g).unwrap();
        let f = RadialField::interpolate(grid, |r| (1.0 - r) * (2.0 + r)).unwrap();
        let a = lq_norm(&p, &f.scaled(c), q, w).unwrap();
        let b = c.abs() * lq_norm(&p, &f, q, w).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * b.max(1e-300));
    }
}
