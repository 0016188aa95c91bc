//! The singular semilinear problem `(−Δ)^s u = λu/|x|^{2s} + h/u^σ` through the
//! regularized problems `(−Δ)^s u_n = λu_n/(|x|^{2s}+1/n) + h_n/(u_n+1/n)^σ`, h_n = min(h, n).

use crate::timing::Stopwatch;

use nalgebra::{Cholesky, DVector};
use serde::Serialize;

use crate::assembly::{assemble, DiscreteOperator};
use crate::error::{Error, Result};
use crate::grid::{RadialField, RadialGrid};
use crate::operator::weighted_forms;
use crate::params::{coupling, hardy_constant, FracParams};
use crate::profile::RadialFunction;
use crate::quadrature::{integrate, log_breaks, Tolerance};
use crate::solve::{report_for, Finding, SolveReport, Verdict};

/// Fixed-point parameters of the inner solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SemilinearOptions {
    pub damping: f64,
    pub tolerance: f64,
    pub max_inner: usize,
}

impl Default for SemilinearOptions {
    fn default() -> Self {
        SemilinearOptions {
            damping: 0.5,
            tolerance: 1e-8,
            max_inner: 500,
        }
    }
}

/// Per-n record of the outer sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OuterRecord {
    pub n: f64,
    pub inner_steps: usize,
    pub sup: f64,
    /// max(u_{n−1} − u_n)_+ over the nodes; zero for n = 1.
    pub monotonicity_defect: f64,
    /// `wᵀAw` for the nodal field w = u^{(σ+1)/2}.
    pub power_energy: f64,
    /// Weighted seminorm of (r^γ u)^{(σ+1)/2}, when requested.
    pub weighted_energy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SemilinearReport {
    pub sigma: f64,
    pub outer: Vec<OuterRecord>,
    pub report: SolveReport,
}

impl SemilinearReport {
    pub fn max_relative_defect(&self) -> f64 {
        self.outer
            .windows(2)
            .map(|w| w[1].monotonicity_defect / w[0].sup.max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max)
    }
}

fn check(p: &FracParams, lambda: f64, sigma: f64, op: &'static str) -> Result<()> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::domain(op, format!("sigma = {sigma} must be positive")));
    }
    let big = hardy_constant(p);
    if !(lambda >= 0.0 && lambda <= big) {
        return Err(Error::domain(op, format!("lambda = {lambda} outside [0, {big}]")));
    }
    Ok(())
}

fn inner_solve(
    op: &DiscreteOperator,
    chol: &Cholesky<f64, nalgebra::Dyn>,
    h: &RadialFunction,
    sigma: f64,
    n: f64,
    start: DVector<f64>,
    opts: SemilinearOptions,
) -> Result<(DVector<f64>, usize)> {
    let m = op.grid().elements();
    let mut u = start;
    let mut last_change = f64::INFINITY;
    for step in 1..=opts.max_inner {
        let nodal = u.as_slice();
        let load = op.load_with(|e, r, left| {
            let ul = nodal[e];
            let ur = if e + 1 < m { nodal[e + 1] } else { 0.0 };
            let val = ul * left + ur * (1.0 - left);
            h.eval(r).min(n) / (val + 1.0 / n).powf(sigma)
        });
        let target = chol.solve(&load);
        let change = (&target - &u).norm() / target.norm().max(f64::MIN_POSITIVE);
        u = &u * (1.0 - opts.damping) + target * opts.damping;
        if let Some((node, &value)) = u.iter().enumerate().find(|(_, v)| **v < -1e-12) {
            return Err(Error::Negativity { node, value });
        }
        last_change = change;
        if change < opts.tolerance {
            return Ok((u, step));
        }
    }
    Err(Error::IterationNonConvergence {
        operation: "solve_semilinear",
        iterations: opts.max_inner,
        last_change,
    })
}

fn power_field(field: &RadialField, a: f64) -> Result<RadialField> {
    field.map(|_, u| u.max(0.0).powf(a))
}

/// Regularization indices 1, 2, …, n_max.
pub fn linear_levels(n_max: usize) -> Vec<f64> {
    (1..=n_max).map(|n| n as f64).collect()
}

/// Regularization indices 1, 2, 4, …, 2^j_max.
pub fn doubling_levels(j_max: u32) -> Vec<f64> {
    (0..=j_max).map(|j| 2f64.powi(j as i32)).collect()
}

/// Run the regularized scheme on one grid for the increasing indices `levels`, each solve
/// starting from the previous solution.
///
/// `weighted_gamma` additionally evaluates, for every n, the weighted seminorm of
/// `(r^γ u_n)^{(σ+1)/2}` at that γ.
#[allow(clippy::too_many_arguments)]
pub fn solve_semilinear_with(
    p: &FracParams,
    grid: &RadialGrid,
    lambda: f64,
    sigma: f64,
    h: &RadialFunction,
    levels: &[f64],
    weighted_gamma: Option<f64>,
    opts: SemilinearOptions,
) -> Result<SemilinearReport> {
    let start = Stopwatch::start();
    check(p, lambda, sigma, "solve_semilinear")?;
    if levels.is_empty() || !(levels[0] >= 1.0) || levels.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("solve_semilinear", "levels must be increasing and start at n >= 1"));
    }
    let op = assemble(p, grid, None)?;
    let m = grid.elements();
    let mut u = DVector::zeros(m);
    let mut outer: Vec<OuterRecord> = Vec::new();
    let half = 0.5 * (sigma + 1.0);
    for (i, &nf) in levels.iter().enumerate() {
        let k = op.stiffness() - op.hardy_at(Some(nf)).to_dense() * lambda;
        let chol = Cholesky::new(k).ok_or(Error::Indefinite { lambda })?;
        let prev = u.clone();
        let (next, steps) = inner_solve(&op, &chol, h, sigma, nf, prev.clone(), opts)?;
        u = next;
        let defect = if i == 0 {
            0.0
        } else {
            prev.iter().zip(u.iter()).map(|(a, b)| (a - b).max(0.0)).fold(0.0, f64::max)
        };
        let field = RadialField::from_unknowns(grid.clone(), u.as_slice())?;
        let w = power_field(&field, half)?;
        let wx = DVector::from_column_slice(w.unknowns());
        let weighted_energy = match weighted_gamma {
            None => None,
            Some(g) => {
                let v = field.map(|r, x| (r.powf(g) * x.max(0.0)).powf(half))?;
                Some(weighted_forms(p, &v.to_profile(), g)?.1)
            }
        };
        outer.push(OuterRecord {
            n: nf,
            inner_steps: steps,
            sup: u.iter().fold(0.0f64, |a, v| a.max(v.abs())),
            monotonicity_defect: defect,
            power_energy: op.energy(&wx),
            weighted_energy,
        });
    }
    let field = RadialField::from_unknowns(grid.clone(), u.as_slice())?;
    let mut report = report_for(&op, lambda, field);
    report.with_lq(p, 1.0, 0.0)?;
    report.with_lq(p, 2.0, 0.0)?;
    report.findings.push(Finding::new(
        "outer",
        Verdict::Converged,
        format!("{} regularized problems solved, last n = {}", levels.len(), levels[levels.len() - 1]),
    ));
    report.seconds = start.seconds();
    Ok(SemilinearReport { sigma, outer, report })
}

/// n = 1..n_max of the regularized scheme.
pub fn solve_semilinear(p: &FracParams, grid: &RadialGrid, lambda: f64, sigma: f64, h: &RadialFunction, n_max: usize) -> Result<SemilinearReport> {
    if n_max == 0 {
        return Err(Error::domain("solve_semilinear", "n_max must be at least 1"));
    }
    solve_semilinear_with(p, grid, lambda, sigma, h, &linear_levels(n_max), None, SemilinearOptions::default())
}

/// `ω∫_0^1 h r^{−c} r^{N−1} dr`, or `None` when it diverges at the origin.
pub fn weighted_data_integral(p: &FracParams, h: &RadialFunction, c: f64) -> Result<Option<f64>> {
    let n = p.nf();
    if let RadialFunction::Powers(terms) = h {
        if terms.iter().any(|t| t.coef != 0.0 && t.exponent - c + n <= 0.0) {
            return Ok(None);
        }
        let v: f64 = terms.iter().map(|t| t.coef / (t.exponent - c + n)).sum();
        return Ok(Some(p.sphere_area() * v));
    }
    let mut breaks = vec![0.0];
    breaks.extend(log_breaks(1e-30, 1.0, 10.0));
    let est = integrate(|r| h.eval(r) * r.powf(n - 1.0 - c), &breaks, Tolerance::rel(1e-10));
    Ok(est.require("weighted_data_integral").ok().map(|v| p.sphere_area() * v))
}

/// [`solve_semilinear`] for σ ∈ (0, 1), together with the data integral
/// `ω∫ h r^{−(1−σ)γ} r^{N−1} dr` and the weighted energies of `(r^γ u_n)^{(σ+1)/2}`.
pub fn semilinear_weighted_probe(
    p: &FracParams,
    grid: &RadialGrid,
    lambda: f64,
    sigma: f64,
    h: &RadialFunction,
    levels: &[f64],
) -> Result<SemilinearReport> {
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(Error::domain("semilinear_weighted_probe", format!("sigma = {sigma} outside (0, 1)")));
    }
    let big = hardy_constant(p);
    if !(lambda > 0.0 && lambda < big) {
        return Err(Error::domain("semilinear_weighted_probe", format!("lambda = {lambda} outside (0, {big})")));
    }
    let gamma = coupling(p, lambda)?.gamma;
    let data = weighted_data_integral(p, h, (1.0 - sigma) * gamma)?;
    let mut out = match data {
        Some(_) => solve_semilinear_with(p, grid, lambda, sigma, h, levels, Some(gamma), SemilinearOptions::default())?,
        None => {
            // nothing to solve for: record the divergence only
            let op = assemble(p, grid, None)?;
            let field = RadialField::from_unknowns(grid.clone(), &vec![0.0; grid.elements()])?;
            SemilinearReport {
                sigma,
                outer: Vec::new(),
                report: report_for(&op, lambda, field),
            }
        }
    };
    let (verdict, text) = match data {
        Some(v) => (Verdict::Converged, format!("weighted data integral = {v}")),
        None => (Verdict::Diverged, "weighted data integral diverges at the origin".to_string()),
    };
    out.report.findings.push(Finding::new("data_integral", verdict, text));
    out.report.values.push(("gamma".into(), gamma));
    if let Some(v) = data {
        out.report.values.push(("data_integral".into(), v));
    }
    Ok(out)
}
