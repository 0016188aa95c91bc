use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fhl_core::experiments::{comparison_check, ground_state_quotient, harnack_quotient, summability_experiment, LambdaMode};
use fhl_core::grid::{fit_blowup, lq_extrapolation_diverges, lq_norm, RadialField, RadialGrid};
use fhl_core::operator::gagliardo_seminorm;
use fhl_core::params::{coupling, hardy_constant, normalization_constant, sobolev_exponents, FracParams};
use fhl_core::profile::RadialFunction;
use fhl_core::semilinear::{doubling_levels, semilinear_weighted_probe, solve_semilinear};
use fhl_core::solve::{existence_probe, solve_linear_direct, solve_linear_iterative, truncation_energies, Verdict};
use fhl_core::{assemble, Error};

fn p34() -> FracParams {
    FracParams::new(3, 0.4).unwrap()
}

fn one() -> RadialFunction {
    RadialFunction::power(1.0, 0.0)
}

fn l2_rel(a: &RadialField, b: &RadialField, p: &FracParams) -> f64 {
    let d = RadialField::new(a.grid().clone(), a.values().iter().zip(b.values()).map(|(x, y)| x - y).collect()).unwrap();
    lq_norm(p, &d, 2.0, 0.0).unwrap() / lq_norm(p, b, 2.0, 0.0).unwrap()
}

#[test]
fn grid_examples() {
    let u = RadialGrid::new(16, 1.0).unwrap();
    for (i, &r) in u.nodes().iter().enumerate() {
        assert!((r - i as f64 / 16.0).abs() < 1e-15);
    }
    let g = RadialGrid::new(64, 3.0).unwrap();
    assert_eq!(g.nodes()[1], (1.0f64 / 64.0).powi(3));
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let m = rng.gen_range(16..400);
        let grading = rng.gen_range(1.0..=6.0);
        let g = RadialGrid::new(m, grading).unwrap();
        assert!(g.nodes().windows(2).all(|w| w[1] > w[0]), "M={m}, g={grading}");
        assert_eq!(g.nodes()[m], 1.0);
    }
    assert!(matches!(RadialGrid::new(15, 2.0), Err(Error::Domain { .. })));
}

#[test]
fn stiffness_is_symmetric_and_hardy_levels_increase() {
    let p = p34();
    let grid = RadialGrid::new(32, 2.0).unwrap();
    let op = assemble(&p, &grid, None).unwrap();
    let a = op.stiffness();
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            assert_eq!(a[(i, j)], a[(j, i)]);
        }
    }
    assert!(a.clone().cholesky().is_some());
    let mut prev = op.hardy_at(Some(1.0)).to_dense();
    for k in [10.0, 1e3, 1e6] {
        let next = op.hardy_at(Some(k)).to_dense();
        assert!(next.iter().zip(prev.iter()).all(|(x, y)| x.abs() >= y.abs() * (1.0 - 1e-14)));
        assert!(next.symmetric_eigenvalues().min() > -1e-14);
        prev = next;
    }
    let inf = op.hardy_at(None).to_dense();
    assert!(inf.iter().zip(prev.iter()).all(|(x, y)| x.abs() >= y.abs() * (1.0 - 1e-14)));
}

#[test]
fn discrete_hardy_bound_at_moderate_meshes() {
    let p = p34();
    let big = hardy_constant(&p);
    let mut last = f64::INFINITY;
    for m in [64, 128] {
        let op = assemble(&p, &RadialGrid::new(m, 3.0).unwrap(), None).unwrap();
        let v = op.rayleigh_min().unwrap();
        assert!(v >= big * (1.0 - 1e-3), "M={m}: {v} < {big}");
        assert!(v <= last, "M={m}: {v} > {last}");
        last = v;
    }
}

#[test]
fn energy_matches_kernel_seminorm() {
    let p = p34();
    let grid = RadialGrid::new(256, 1.0).unwrap();
    let op = assemble(&p, &grid, None).unwrap();
    let bump = |r: f64| (1.0 - r * r).powi(2);
    let field = RadialField::interpolate(grid, bump).unwrap();
    let e = op.energy(&DVector::from_column_slice(field.unknowns()));
    let oracle = 0.5 * normalization_constant(&p) * gagliardo_seminorm(&p, &RadialFunction::custom(bump, true, vec![]), 0.8, 2.0).unwrap();
    assert!((e - oracle).abs() < 0.02 * oracle, "{e} vs {oracle}");
}

#[test]
fn direct_solve_zero_data_and_linearity() {
    let p = p34();
    let big = hardy_constant(&p);
    let op = assemble(&p, &RadialGrid::new(64, 3.0).unwrap(), None).unwrap();
    let zero = solve_linear_direct(&op, 0.5 * big, &RadialFunction::power(0.0, 0.0)).unwrap();
    assert!(zero.field.values().iter().all(|&v| v == 0.0));
    let f1 = RadialFunction::power(1.0, 0.0);
    let f2 = RadialFunction::power(2.0, -1.3);
    let f12 = RadialFunction::powers(&[(1.0, 0.0), (2.0, -1.3)]);
    let u1 = solve_linear_direct(&op, 0.5 * big, &f1).unwrap();
    let u2 = solve_linear_direct(&op, 0.5 * big, &f2).unwrap();
    let u12 = solve_linear_direct(&op, 0.5 * big, &f12).unwrap();
    let scale = u12.field.max();
    for ((a, b), c) in u1.field.values().iter().zip(u2.field.values()).zip(u12.field.values()) {
        assert!((a + b - c).abs() < 1e-9 * scale);
    }
    assert!(matches!(solve_linear_direct(&op, big, &f1), Err(Error::Domain { .. })));
    assert!(solve_linear_direct(&op, 0.5 * big, &RadialFunction::power(1.0, -3.0)).is_err());
}

#[test]
fn direct_solve_blowup_matches_gamma() {
    let p = p34();
    let big = hardy_constant(&p);
    let grid = RadialGrid::new(256, 3.0).unwrap();
    let op = assemble(&p, &grid, None).unwrap();
    let rep = solve_linear_direct(&op, 0.5 * big, &one()).unwrap();
    let gamma = coupling(&p, 0.5 * big).unwrap().gamma;
    let fit = rep.blowup_exponent.unwrap();
    assert!((fit - gamma).abs() <= 0.1 * gamma, "{fit} vs {gamma}");
    let window = (grid.nodes()[5], 0.1);
    assert!((fit_blowup(&rep.field, window).unwrap() - gamma).abs() <= 0.1 * gamma);
}

#[test]
fn iterative_agrees_with_direct_below_lambda() {
    let p = p34();
    let big = hardy_constant(&p);
    let grid = RadialGrid::new(64, 3.0).unwrap();
    let it = solve_linear_iterative(&p, &grid, 0.5 * big, &one(), 2000).unwrap();
    assert_eq!(it.finding("iteration").unwrap().verdict, Verdict::Converged);
    let op = assemble(&p, &grid, None).unwrap();
    let direct = solve_linear_direct(&op, 0.5 * big, &one()).unwrap();
    let d = l2_rel(&it.field, &direct.field, &p);
    assert!(d < 1e-4, "relative L2 difference {d}");
}

#[test]
fn iterative_diverges_above_lambda_and_stays_zero_without_data() {
    let p = p34();
    let big = hardy_constant(&p);
    let grid = RadialGrid::new(64, 3.0).unwrap();
    let rep = solve_linear_iterative(&p, &grid, 1.2 * big, &one(), 2000).unwrap();
    let f = rep.finding("iteration").unwrap();
    assert_eq!(f.verdict, Verdict::Diverged, "{}", f.criterion);
    let zero = solve_linear_iterative(&p, &grid, 0.5 * big, &RadialFunction::power(0.0, 0.0), 50).unwrap();
    assert!(zero.field.values().iter().all(|&v| v == 0.0));
    assert!(zero.history.iter().all(|h| h.l1 == 0.0 && h.linf == 0.0));
}

#[test]
fn existence_probe_matches_data_integral() {
    let p = p34();
    let big = hardy_constant(&p);
    let grid = RadialGrid::new(64, 3.0).unwrap();
    let gamma = coupling(&p, 0.75 * big).unwrap().gamma;
    for (nu, expect) in [(3.0 - gamma - 0.2, Verdict::Converged), (3.0 - gamma + 0.2, Verdict::Diverged), (0.0, Verdict::Converged)] {
        let rep = existence_probe(&p, &grid, 0.75 * big, nu).unwrap();
        let analytic = rep.finding("data_integral").unwrap();
        let numeric = rep.finding("refinement").unwrap();
        assert_eq!(analytic.verdict, expect, "nu={nu}");
        assert_eq!(numeric.verdict, expect, "nu={nu}: {}", numeric.criterion);
    }
    let rep = existence_probe(&p, &grid, big, 0.0).unwrap();
    assert_eq!(rep.finding("refinement").unwrap().verdict, Verdict::Converged);
}

#[test]
fn blowup_fit_on_exact_fields() {
    let grid = RadialGrid::new(128, 3.0).unwrap();
    let r1 = grid.nodes()[1];
    let power = RadialField::interpolate(grid.clone(), |r| r.max(r1).powf(-0.3)).unwrap();
    assert!((fit_blowup(&power, (1e-3, 0.1)).unwrap() - 0.3).abs() < 1e-10);
    let flat = RadialField::interpolate(grid.clone(), |_| 2.5).unwrap();
    assert!(fit_blowup(&flat, (1e-3, 0.1)).unwrap().abs() < 1e-12);
    assert!(fit_blowup(&flat, (0.099, 0.1)).is_err());
    let neg = flat.scaled(-1.0);
    assert!(fit_blowup(&neg, (1e-3, 0.1)).is_err());
}

#[test]
fn lq_norm_examples() {
    let p = p34();
    let n = 3.0;
    let grid = RadialGrid::new(64, 2.0).unwrap();
    let m = grid.elements();
    // 1 up to r_{M−1}, then down to the Dirichlet zero
    let ones = RadialField::interpolate(grid.clone(), |_| 1.0).unwrap();
    let a = grid.nodes()[m - 1];
    let last = ((1.0 - a.powf(n)) / n - (1.0 - a.powf(n + 1.0)) / (n + 1.0)) / (1.0 - a);
    let exact = p.sphere_area() * (a.powf(n) / n + last);
    let v = lq_norm(&p, &ones, 1.0, 0.0).unwrap();
    assert!((v - exact).abs() < 1e-12 * exact, "{v} vs {exact}");
    assert!((lq_norm(&p, &ones.scaled(-3.5), 1.7, 0.4).unwrap() - 3.5 * lq_norm(&p, &ones, 1.7, 0.4).unwrap()).abs() < 1e-12);

    let m_data = p.m_left() + 0.3;
    let (mss, _) = sobolev_exponents(&p, m_data).unwrap();
    let gamma = 0.8 * n / mss;
    let fine = RadialGrid::new(256, 3.0).unwrap();
    let r1 = fine.nodes()[1];
    let power = RadialField::interpolate(fine, |r| r.max(r1).powf(-gamma)).unwrap();
    let v = lq_norm(&p, &power, mss, 0.0).unwrap();
    let exact = (p.sphere_area() / (n - gamma * mss)).powf(1.0 / mss);
    assert!((v - exact).abs() < 0.01 * exact, "{v} vs {exact}");
    assert!(!lq_extrapolation_diverges(&p, &power, mss, 0.0).unwrap());
    assert!(lq_extrapolation_diverges(&p, &power, 1.5 * n / gamma, 0.0).unwrap());
    assert!(lq_norm(&p, &power, 0.5, 0.0).is_err());
}

#[test]
fn summability_below_j_is_bounded() {
    let p = p34();
    let m = p.m_left() + 0.05;
    let rep = summability_experiment(&p, m, LambdaMode::BelowJ, 0.2, 4).unwrap();
    let f = rep.finding("summability").unwrap();
    assert_eq!(f.verdict, Verdict::Converged, "{}", f.criterion);
    assert!(f.criterion.starts_with("bounded"));
}

#[test]
fn summability_at_and_above_p_grows() {
    let p = p34();
    let m = p.m_left() + 0.05;
    // at λ = P the growth is logarithmic in the mesh, so it is seen over the coarser levels
    let at = summability_experiment(&p, m, LambdaMode::AtP, 0.2, 3).unwrap();
    let f = at.finding("summability").unwrap();
    assert_eq!(f.verdict, Verdict::Diverged, "{}", f.criterion);
    let above = summability_experiment(&p, m, LambdaMode::AboveP, 0.2, 3).unwrap();
    let f = above.finding("summability").unwrap();
    assert_eq!(f.verdict, Verdict::Diverged, "{}", f.criterion);
    assert!(f.criterion.starts_with("growing"));
    // here 1.05·P exceeds Λ
    assert!(above.finding("mode_conflict").is_some());
}

#[test]
fn summability_near_left_end_is_consistent() {
    let p = p34();
    let m = p.m_left() + 0.01;
    let below = summability_experiment(&p, m, LambdaMode::BelowJ, 0.2, 4).unwrap();
    let (j, pm) = (below.value("J").unwrap(), below.value("P").unwrap());
    assert!((pm - j).abs() < 1e-3 * pm);
    assert_eq!(below.finding("summability").unwrap().verdict, Verdict::Converged);
    let at = summability_experiment(&p, m, LambdaMode::AtP, 0.2, 4).unwrap();
    assert_eq!(at.finding("summability").unwrap().verdict, Verdict::Diverged);
    assert!(summability_experiment(&p, p.m_left(), LambdaMode::BelowJ, 0.2, 3).is_err());
}

#[test]
fn comparison_constant_examples() {
    let p = p34();
    let big = hardy_constant(&p);
    let lambda = 0.6 * big;
    let gamma = coupling(&p, lambda).unwrap().gamma;
    let nu = 0.9;
    let beta = nu - 0.8;
    let grid = RadialGrid::new(128, 3.0).unwrap();
    let r1 = grid.nodes()[1];
    let v = RadialField::interpolate(grid.clone(), |r| {
        let r = r.max(r1);
        r.powf(-gamma) - r.powf(-beta)
    })
    .unwrap();
    assert!((comparison_check(&p, &v, lambda, nu).unwrap() - 1.0).abs() < 1e-10);
    assert_eq!(comparison_check(&p, &v.scaled(0.0), lambda, nu).unwrap(), 0.0);
    assert!(matches!(comparison_check(&p, &v, lambda, gamma + 0.8 + 0.1), Err(Error::Config(_))));
}

#[test]
fn harnack_examples() {
    let p = p34();
    let big = hardy_constant(&p);
    let grid = RadialGrid::new(128, 3.0).unwrap();
    let gamma = coupling(&p, 0.5 * big).unwrap().gamma;
    let flat = vec![0.7; grid.nodes().len()];
    for r0 in [0.3, 0.05] {
        for q in [1.0, 1.3] {
            assert_eq!(ground_state_quotient(&p, &grid, &flat, gamma, q, r0).unwrap(), 1.0);
        }
    }
    let op = assemble(&p, &grid, None).unwrap();
    let u = solve_linear_direct(&op, 0.5 * big, &one()).unwrap().field;
    let quotients: Vec<f64> = [0.2, 0.1, 0.05, 0.025].iter().map(|&r0| harnack_quotient(&p, &u, 0.5 * big, 1.0, r0).unwrap()).collect();
    let (lo, hi) = quotients.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &q| (a.min(q), b.max(q)));
    assert!(hi <= 2.0 * lo, "{quotients:?}");
    assert!(quotients.iter().all(|&q| q >= 1.0 - 1e-12));
    let q_max = 3.0 / (3.0 - 0.8);
    assert!(harnack_quotient(&p, &u, 0.5 * big, q_max, 0.1).is_err());
    assert!(harnack_quotient(&p, &u, 0.5 * big, 1.0, 0.6).is_err());
    assert!(matches!(harnack_quotient(&p, &u.scaled(-1.0), 0.5 * big, 1.0, 0.1), Err(Error::Negativity { .. })));
}

#[test]
fn truncation_energy_examples() {
    let p = p34();
    let big = hardy_constant(&p);
    let grid = RadialGrid::new(256, 3.0).unwrap();
    let op = assemble(&p, &grid, None).unwrap();
    let u = solve_linear_direct(&op, 0.5 * big, &one()).unwrap().field;
    let full = op.energy(&DVector::from_column_slice(u.unknowns()));
    let (t0, g0, _) = truncation_energies(&u, 0.0, &op).unwrap();
    assert_eq!(t0, 0.0);
    assert!((g0 - full).abs() < 1e-12 * full);
    let (tm, gm, _) = truncation_energies(&u, u.max(), &op).unwrap();
    assert_eq!(gm, 0.0);
    assert!((tm - full).abs() < 1e-12 * full);
    for frac in [0.05, 0.1, 0.2, 0.4, 0.8] {
        let (_, g, gu) = truncation_energies(&u, frac * u.max(), &op).unwrap();
        assert!(g <= gu * 1.05, "k = {frac}·max: {g} > {gu}·1.05");
    }
    assert!(truncation_energies(&u, -1.0, &op).is_err());
}

#[test]
fn solutions_are_positive_and_monotone_in_data() {
    let p = p34();
    let big = hardy_constant(&p);
    let op = assemble(&p, &RadialGrid::new(128, 3.0).unwrap(), None).unwrap();
    for frac in [0.1, 0.5, 0.85] {
        let u1 = solve_linear_direct(&op, frac * big, &one()).unwrap().field;
        let u2 = solve_linear_direct(&op, frac * big, &RadialFunction::powers(&[(1.0, 0.0), (0.5, -1.2)])).unwrap().field;
        let mx = u1.max();
        assert!(u1.unknowns().iter().all(|&v| v >= -1e-8 * mx));
        let m2 = u2.max();
        assert!(u1.values().iter().zip(u2.values()).all(|(a, b)| *a <= b + 1e-8 * m2));
    }
}

#[test]
fn semilinear_sigma_one_converges() {
    let p = p34();
    let big = hardy_constant(&p);
    let grid = RadialGrid::new(64, 3.0).unwrap();
    let rep = solve_semilinear(&p, &grid, 0.5 * big, 1.0, &one(), 200).unwrap();
    let last = rep.outer.last().unwrap();
    assert!(last.power_energy.is_finite() && last.power_energy > 0.0);
    let prev = &rep.outer[rep.outer.len() - 2];
    assert!((last.power_energy - prev.power_energy).abs() < 1e-3 * last.power_energy);
    assert!(rep.max_relative_defect() <= 1e-6);
    assert!(rep.report.field.unknowns().iter().all(|&v| v > 0.0));
}

#[test]
fn semilinear_sigma_two_energy_stays_within_factor_two() {
    let p = p34();
    let big = hardy_constant(&p);
    let lambda = 0.5 * big;
    assert!(4.0 * 2.0 / 9.0 > lambda / big);
    let grid = RadialGrid::new(64, 3.0).unwrap();
    let rep = solve_semilinear(&p, &grid, lambda, 2.0, &one(), 400).unwrap();
    let last = rep.outer.last().unwrap().power_energy;
    assert!(rep.outer.iter().all(|o| o.power_energy <= 2.0 * last));
    assert!(rep.outer.iter().filter(|o| o.n >= 20.0).all(|o| o.power_energy >= 0.5 * last));
    assert!(rep.max_relative_defect() <= 1e-6);
}

#[test]
fn semilinear_zero_data_gives_zero() {
    let p = p34();
    let grid = RadialGrid::new(32, 2.0).unwrap();
    let rep = solve_semilinear(&p, &grid, 0.3, 1.5, &RadialFunction::power(0.0, 0.0), 5).unwrap();
    assert!(rep.report.field.values().iter().all(|&v| v == 0.0));
    assert!(solve_semilinear(&p, &grid, 0.3, 0.0, &one(), 5).is_err());
    assert!(solve_semilinear(&p, &grid, 2.0 * hardy_constant(&p), 1.0, &one(), 5).is_err());
}

#[test]
fn weighted_probe_examples() {
    let p = p34();
    let big = hardy_constant(&p);
    let lambda = 0.5 * big;
    let gamma = coupling(&p, lambda).unwrap().gamma;
    let grid = RadialGrid::new(64, 3.0).unwrap();

    let rep = semilinear_weighted_probe(&p, &grid, lambda, 0.5, &one(), &doubling_levels(16)).unwrap();
    assert_eq!(rep.report.finding("data_integral").unwrap().verdict, Verdict::Converged);
    assert!(rep.report.value("data_integral").unwrap().is_finite());
    let energies: Vec<f64> = rep.outer.iter().map(|o| o.weighted_energy.unwrap()).collect();
    let last = *energies.last().unwrap();
    assert!(energies.iter().all(|&e| e.is_finite() && e <= 2.0 * last), "{energies:?}");
    let tail = &energies[energies.len() - 4..];
    assert!((tail[3] - tail[0]).abs() < 1e-2 * last, "{energies:?}");

    let nu = 3.0 - 0.5 * gamma + 0.05;
    let bad = semilinear_weighted_probe(&p, &grid, lambda, 0.5, &RadialFunction::power(1.0, -nu), &doubling_levels(4)).unwrap();
    assert_eq!(bad.report.finding("data_integral").unwrap().verdict, Verdict::Diverged);

    let near = semilinear_weighted_probe(&p, &grid, lambda, 0.999, &one(), &doubling_levels(6)).unwrap();
    let at_one = fhl_core::semilinear::solve_semilinear_with(
        &p,
        &grid,
        lambda,
        1.0,
        &one(),
        &doubling_levels(6),
        None,
        Default::default(),
    )
    .unwrap();
    let d = l2_rel(&near.report.field, &at_one.report.field, &p);
    assert!(d < 0.05, "relative L2 difference {d}");
}
