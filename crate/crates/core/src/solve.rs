//! Linear Hardy problems `(−Δ)^s u − λ u/|x|^{2s} = f` in the unit ball, u = 0 outside.

use crate::timing::Stopwatch;

use nalgebra::{Cholesky, DVector};
use serde::Serialize;

use crate::assembly::{assemble, DiscreteOperator};
use crate::error::{Error, Result};
use crate::grid::{default_blowup_window, fit_blowup, lq_norm, RadialField, RadialGrid};
use crate::params::{coupling, hardy_constant, FracParams};
use crate::profile::RadialFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Converged,
    Diverged,
    Inconclusive,
}

/// A verdict together with the rule that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Finding {
    pub name: String,
    pub verdict: Verdict,
    pub criterion: String,
}

impl Finding {
    pub fn new(name: impl Into<String>, verdict: Verdict, criterion: impl Into<String>) -> Self {
        Finding {
            name: name.into(),
            verdict,
            criterion: criterion.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationRecord {
    pub step: usize,
    pub l1: f64,
    pub linf: f64,
    pub change: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LqEntry {
    pub q: f64,
    pub weight_exponent: f64,
    pub value: f64,
}

/// `uᵀAu` and `uᵀH_∞u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Energies {
    pub seminorm: f64,
    pub hardy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub lambda: f64,
    pub field: RadialField,
    pub blowup_exponent: Option<f64>,
    pub lq_norms: Vec<LqEntry>,
    pub energies: Energies,
    pub history: Vec<IterationRecord>,
    pub findings: Vec<Finding>,
    pub values: Vec<(String, f64)>,
    pub seconds: f64,
}

impl SolveReport {
    fn new(op: &DiscreteOperator, lambda: f64, field: RadialField) -> Self {
        let x = DVector::from_column_slice(field.unknowns());
        let energies = Energies {
            seminorm: op.energy(&x),
            hardy: x.dot(&op.hardy_at(None).mul(&x)),
        };
        let blowup_exponent = fit_blowup(&field, default_blowup_window(field.grid())).ok();
        SolveReport {
            lambda,
            field,
            blowup_exponent,
            lq_norms: Vec::new(),
            energies,
            history: Vec::new(),
            findings: Vec::new(),
            values: Vec::new(),
            seconds: 0.0,
        }
    }

    /// Add `‖u‖_{L^q(r^{−w}dx)}` to the report and return it.
    pub fn with_lq(&mut self, p: &FracParams, q: f64, weight_exponent: f64) -> Result<f64> {
        let value = lq_norm(p, &self.field, q, weight_exponent)?;
        self.lq_norms.push(LqEntry {
            q,
            weight_exponent,
            value,
        });
        Ok(value)
    }

    pub fn finding(&self, name: &str) -> Option<&Finding> {
        self.findings.iter().find(|f| f.name == name)
    }

    pub fn value(&self, name: &str) -> Option<f64> {
        self.values.iter().find(|v| v.0 == name).map(|v| v.1)
    }
}

fn check_load(p: &FracParams, f: &RadialFunction, op: &'static str) -> Result<()> {
    if let RadialFunction::Powers(terms) = f {
        for t in terms {
            if t.coef != 0.0 && !(t.exponent > -p.nf()) {
                return Err(Error::domain(
                    op,
                    format!("load r^{} is not integrable at the origin (need exponent > -{})", t.exponent, p.nf()),
                ));
            }
        }
    }
    Ok(())
}

fn check_lambda_below(p: &FracParams, lambda: f64, op: &'static str) -> Result<()> {
    let big = hardy_constant(p);
    if !(lambda < big) || !lambda.is_finite() {
        return Err(Error::domain(op, format!("lambda = {lambda} must be below Lambda_N,s = {big}")));
    }
    Ok(())
}

/// Solve `(A − λH_∞)u = F` by a Cholesky factorization.
pub fn solve_linear_direct(op: &DiscreteOperator, lambda: f64, f: &RadialFunction) -> Result<SolveReport> {
    let start = Stopwatch::start();
    let p = *op.params();
    check_lambda_below(&p, lambda, "solve_linear_direct")?;
    check_load(&p, f, "solve_linear_direct")?;
    let h = op.hardy_at(None).to_dense();
    let k = op.stiffness() - h * lambda;
    let chol = Cholesky::new(k.clone()).ok_or(Error::Indefinite { lambda })?;
    let rhs = op.load(f, None);
    let mut x = chol.solve(&rhs);
    // one step of refinement keeps the residual at rounding level on graded meshes
    let r = &rhs - &k * &x;
    x += chol.solve(&r);
    let res = (&rhs - &k * &x).norm();
    let scale = rhs.norm();
    if scale > 0.0 && res > 1e-10 * scale {
        return Err(Error::Residual {
            operation: "solve_linear_direct",
            relative: res / scale,
        });
    }
    let field = RadialField::from_unknowns(op.grid().clone(), x.as_slice())?;
    let mut report = SolveReport::new(op, lambda, field);
    report.values.push(("relative_residual".into(), if scale > 0.0 { res / scale } else { 0.0 }));
    report.with_lq(&p, 1.0, 0.0)?;
    report.with_lq(&p, 2.0, 0.0)?;
    report.seconds = start.seconds();
    Ok(report)
}

/// How the regularization index k maps to the data cap and the Hardy weight level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    /// f_k = min(f, k) and weight 1/(r^{2s} + 1/k).
    Linear,
    /// f_k = min(f, 2^k) and weight 1/(r^{2s} + 2^{−k}); reaches the mesh scale in a few
    /// dozen steps, so the iterates approach the untruncated discrete problem.
    Geometric,
}

impl Schedule {
    fn level(self, k: usize) -> f64 {
        match self {
            Schedule::Linear => k as f64,
            Schedule::Geometric => 2f64.powi(k.min(1000) as i32),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterativeOptions {
    pub k_max: usize,
    pub schedule: Schedule,
    /// Successive relative L² change that counts as converged.
    pub tolerance: f64,
    /// Width of the window over which 10× growth of the L¹ norm counts as divergence.
    pub growth_window: usize,
}

impl Default for IterativeOptions {
    fn default() -> Self {
        IterativeOptions {
            k_max: 2000,
            schedule: Schedule::Linear,
            tolerance: 1e-6,
            growth_window: 50,
        }
    }
}

fn weighted_norms(op: &DiscreteOperator, x: &[f64]) -> (f64, f64) {
    // exact L¹ and L² of the piecewise-linear field, zero at r = 1
    let m = x.len();
    let (mut l1, mut l2) = (0.0, 0.0);
    for (e, pts) in op.points().iter().enumerate() {
        let ul = x[e];
        let ur = if e + 1 < m { x[e + 1] } else { 0.0 };
        for i in 0..pts.r.len() {
            let l = pts.left[i];
            let v = ul * l + ur * (1.0 - l);
            l1 += pts.w[i] * v.abs();
            l2 += pts.w[i] * v * v;
        }
    }
    (l1, l2.sqrt())
}

/// Iterate `A u_k = λ H_k u_{k−1} + F_k` from u_0 = 0 on an assembled operator.
pub fn iterate_linear(op: &DiscreteOperator, lambda: f64, f: &RadialFunction, opts: IterativeOptions) -> Result<SolveReport> {
    let start = Stopwatch::start();
    let p = *op.params();
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::domain("solve_linear_iterative", format!("lambda = {lambda} must be positive")));
    }
    check_load(&p, f, "solve_linear_iterative")?;
    let m = op.grid().elements();
    let chol = Cholesky::new(op.stiffness().clone()).ok_or_else(|| Error::domain("solve_linear_iterative", "stiffness matrix is not positive definite"))?;
    let mut u = DVector::zeros(m);
    let mut history: Vec<IterationRecord> = Vec::new();
    let mut verdict = Verdict::Inconclusive;
    let mut criterion = format!("no decision after {} steps", opts.k_max);
    for k in 1..=opts.k_max {
        let level = opts.schedule.level(k);
        let h = op.hardy_at(Some(level));
        let rhs = h.mul(&u) * lambda + op.load(f, Some(level));
        let next = chol.solve(&rhs);
        let (l1, l2) = weighted_norms(op, next.as_slice());
        let diff = (&next - &u).iter().copied().collect::<Vec<f64>>();
        let (_, dl2) = weighted_norms(op, &diff);
        let change = if l2 > 0.0 { dl2 / l2 } else { 0.0 };
        let linf = next.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        u = next;
        history.push(IterationRecord { step: k, l1, linf, change });
        if !l1.is_finite() {
            verdict = Verdict::Diverged;
            criterion = format!("L1 norm overflowed at step {k}");
            break;
        }
        // windows start after the first one: the ramp-up from u_0 = 0 is not divergence
        let w = opts.growth_window;
        if k > 2 * w {
            let before = history[k - 1 - w].l1;
            if before > 0.0 && l1 >= 10.0 * before {
                verdict = Verdict::Diverged;
                criterion = format!("L1 norm grew {:.3e}x over steps {}..{k}", l1 / before, k - w);
                break;
            }
        }
        if change < opts.tolerance {
            verdict = Verdict::Converged;
            criterion = format!("successive relative L2 change {change:.3e} < {:e} at step {k}", opts.tolerance);
            break;
        }
    }
    let values: Vec<f64> = u.iter().map(|v| if v.is_finite() { *v } else { f64::MAX }).collect();
    let field = RadialField::from_unknowns(op.grid().clone(), &values)?;
    let mut report = SolveReport::new(op, lambda, field);
    report.history = history;
    report.findings.push(Finding::new("iteration", verdict, criterion));
    if verdict != Verdict::Diverged {
        report.with_lq(&p, 1.0, 0.0)?;
        report.with_lq(&p, 2.0, 0.0)?;
    }
    report.seconds = start.seconds();
    Ok(report)
}

/// Assemble on `grid` and run [`iterate_linear`] with the geometric schedule.
pub fn solve_linear_iterative(p: &FracParams, grid: &RadialGrid, lambda: f64, f: &RadialFunction, k_max: usize) -> Result<SolveReport> {
    let op = assemble(p, grid, None)?;
    iterate_linear(
        &op,
        lambda,
        f,
        IterativeOptions {
            k_max,
            schedule: Schedule::Geometric,
            ..IterativeOptions::default()
        },
    )
}

/// Verdict from a sequence of norms along mesh refinement: converged if the last relative
/// change is below `settle`, diverged if every step grows by at least `growth`.
pub fn refinement_verdict(norms: &[f64], settle: f64, growth: f64) -> (Verdict, String) {
    if norms.len() < 2 {
        return (Verdict::Inconclusive, "fewer than two levels".into());
    }
    let ratios: Vec<f64> = norms.windows(2).map(|w| w[1] / w[0]).collect();
    let last = ratios[ratios.len() - 1];
    let text = ratios.iter().map(|r| format!("{r:.4}")).collect::<Vec<_>>().join(", ");
    if ratios.iter().all(|&r| r >= 1.0 + growth) {
        (Verdict::Diverged, format!("every level grows by >= {:.0}% (ratios {text})", 100.0 * growth))
    } else if (last - 1.0).abs() < settle {
        (Verdict::Converged, format!("last relative change below {:.0}% (ratios {text})", 100.0 * settle))
    } else {
        (Verdict::Inconclusive, format!("ratios {text}"))
    }
}

/// Existence test for f = r^{−ν}: the weighted data integral ∫ r^{−γ} f r^{N−1} dr
/// decides analytically; numerically the iterative scheme is run on the grid and two
/// refinements and the L¹ norms of the limits are compared.
pub fn existence_probe(p: &FracParams, grid: &RadialGrid, lambda: f64, nu: f64) -> Result<SolveReport> {
    let start = Stopwatch::start();
    let n = p.nf();
    if !(nu < n) {
        return Err(Error::domain("existence_probe", format!("nu = {nu} must be below N = {n}")));
    }
    let big = hardy_constant(p);
    if !(lambda > 0.0 && lambda <= big) {
        return Err(Error::domain("existence_probe", format!("lambda = {lambda} outside (0, {big}]")));
    }
    let gamma = coupling(p, lambda)?.gamma;
    let f = RadialFunction::power(1.0, -nu);
    let mut grids = vec![grid.clone()];
    for _ in 0..2 {
        let g = grids.last().expect("nonempty").refined()?;
        grids.push(g);
    }
    let mut l1 = Vec::new();
    let mut last = None;
    let mut level_findings = Vec::new();
    for (i, g) in grids.iter().enumerate() {
        let op = assemble(p, g, None)?;
        let rep = iterate_linear(
            &op,
            lambda,
            &f,
            IterativeOptions {
                schedule: Schedule::Geometric,
                ..IterativeOptions::default()
            },
        )?;
        let it = rep.finding("iteration").expect("iteration finding").clone();
        level_findings.push(Finding::new(format!("level_{i}"), it.verdict, format!("M = {}: {}", g.elements(), it.criterion)));
        if it.verdict == Verdict::Diverged {
            l1.push(f64::INFINITY);
        } else {
            l1.push(lq_norm(p, &rep.field, 1.0, 0.0)?);
        }
        last = Some(rep);
    }
    let mut report = last.expect("three levels");
    let analytic = if nu < n - gamma { Verdict::Converged } else { Verdict::Diverged };
    let (numeric, why) = if l1.iter().any(|v| !v.is_finite()) {
        (Verdict::Diverged, "the iteration diverged on some level".to_string())
    } else {
        refinement_verdict(&l1, 0.05, 0.2)
    };
    report.findings = level_findings;
    report.findings.push(Finding::new(
        "data_integral",
        analytic,
        format!("integral of r^(-gamma-nu+N-1) converges iff nu < N - gamma = {:.6}", n - gamma),
    ));
    report.findings.push(Finding::new("refinement", numeric, format!("L1 norms along M, 2M, 4M: {why}")));
    report.values.push(("gamma".into(), gamma));
    for (g, v) in grids.iter().zip(&l1) {
        report.values.push((format!("l1_M{}", g.elements()), *v));
    }
    report.values.push(("agree".into(), if analytic == numeric { 1.0 } else { 0.0 }));
    report.seconds = start.seconds();
    Ok(report)
}

/// Nodal truncations T_k(u) = min(u, k), G_k(u) = u − T_k(u) and their energies
/// `(T_kᵀ A T_k, G_kᵀ A G_k, G_kᵀ A u)`.
pub fn truncation_energies(field: &RadialField, k: f64, op: &DiscreteOperator) -> Result<(f64, f64, f64)> {
    if !(k >= 0.0) {
        return Err(Error::domain("truncation_energies", format!("k = {k} must be nonnegative")));
    }
    if field.grid() != op.grid() {
        return Err(Error::domain("truncation_energies", "field and operator live on different grids"));
    }
    let u = DVector::from_column_slice(field.unknowns());
    let t = u.map(|v| v.min(k));
    let g = &u - &t;
    let a = op.stiffness();
    Ok((t.dot(&(a * &t)), g.dot(&(a * &g)), g.dot(&(a * &u))))
}

pub(crate) fn report_for(op: &DiscreteOperator, lambda: f64, field: RadialField) -> SolveReport {
    SolveReport::new(op, lambda, field)
}
