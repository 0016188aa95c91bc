//! Experiments built on the linear solver: summability of power data, the comparison
//! constant against the explicit subsolution, and the weak Harnack quotient.

use crate::timing::Stopwatch;

use serde::Serialize;

use crate::assembly::assemble;
use crate::error::{Error, Result};
use crate::grid::{default_blowup_window, RadialField, RadialGrid};
use crate::pairs::element_rule;
use crate::params::{coupling, curve_j, curve_p, hardy_constant, sobolev_exponents, FracParams};
use crate::profile::RadialFunction;
use crate::solve::{iterate_linear, refinement_verdict, solve_linear_direct, Finding, IterativeOptions, Schedule, SolveReport, Verdict};

/// Where λ is placed relative to the two thresholds J_s(m) ≤ P_s(m).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaMode {
    /// 0.9·J_s(m)
    BelowJ,
    /// P_s(m)
    AtP,
    /// 1.05·P_s(m), capped at Λ_{N,s}
    AboveP,
}

impl LambdaMode {
    pub fn name(self) -> &'static str {
        match self {
            LambdaMode::BelowJ => "belowJ",
            LambdaMode::AtP => "atP",
            LambdaMode::AboveP => "aboveP",
        }
    }

    /// Verdict that the theory predicts for the m**-norm under refinement.
    pub fn expected(self) -> Verdict {
        match self {
            LambdaMode::BelowJ => Verdict::Converged,
            LambdaMode::AtP | LambdaMode::AboveP => Verdict::Diverged,
        }
    }
}

impl std::str::FromStr for LambdaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "belowJ" => Ok(LambdaMode::BelowJ),
            "atP" => Ok(LambdaMode::AtP),
            "aboveP" => Ok(LambdaMode::AboveP),
            other => Err(Error::Config(format!("unknown mode '{other}' (belowJ, atP, aboveP)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SummabilityOptions {
    pub base_elements: usize,
    pub grading: f64,
}

impl Default for SummabilityOptions {
    fn default() -> Self {
        SummabilityOptions {
            base_elements: 64,
            grading: 6.0,
        }
    }
}

/// Solve with f = r^{−(N−ε)/m} on `levels` nested meshes and watch ‖u‖_{m**}.
///
/// λ below Λ is solved directly; λ = Λ (reached when 1.05·P is capped) by the iterative
/// scheme, which is the only one defined there.
pub fn summability_experiment(p: &FracParams, m: f64, mode: LambdaMode, eps: f64, levels: usize) -> Result<SolveReport> {
    summability_experiment_with(p, m, mode, eps, levels, SummabilityOptions::default())
}

pub fn summability_experiment_with(
    p: &FracParams,
    m: f64,
    mode: LambdaMode,
    eps: f64,
    levels: usize,
    opts: SummabilityOptions,
) -> Result<SolveReport> {
    let start = Stopwatch::start();
    let n = p.nf();
    let m_left = 2.0 * n / (n + 2.0 * p.s());
    if !(m > m_left && m < p.m_right()) {
        return Err(Error::domain(
            "summability_experiment",
            format!("m = {m} outside ({m_left}, {})", p.m_right()),
        ));
    }
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::domain("summability_experiment", format!("eps = {eps} outside (0, 0.5]")));
    }
    if levels < 2 {
        return Err(Error::domain("summability_experiment", "at least two refinement levels are needed"));
    }
    let big = hardy_constant(p);
    let j = curve_j(p, m)?;
    let pm = curve_p(p, m)?;
    let wanted = match mode {
        LambdaMode::BelowJ => 0.9 * j,
        LambdaMode::AtP => pm,
        LambdaMode::AboveP => 1.05 * pm,
    };
    let lambda = wanted.min(big);
    let (mss, _) = sobolev_exponents(p, m)?;
    let nu = (n - eps) / m;
    let f = RadialFunction::power(1.0, -nu);

    let mut grid = RadialGrid::new(opts.base_elements, opts.grading)?;
    let mut norms = Vec::new();
    let mut last = None;
    let mut notes = Vec::new();
    for level in 0..levels {
        if level > 0 {
            grid = grid.refined()?;
        }
        let op = assemble(p, &grid, None)?;
        let mut rep = if lambda < big {
            solve_linear_direct(&op, lambda, &f)?
        } else {
            let r = iterate_linear(
                &op,
                lambda,
                &f,
                IterativeOptions {
                    k_max: 20_000,
                    schedule: Schedule::Geometric,
                    ..IterativeOptions::default()
                },
            )?;
            let it = r.finding("iteration").expect("iteration finding");
            notes.push(Finding::new(format!("level_{level}"), it.verdict, format!("M = {}: {}", grid.elements(), it.criterion)));
            r
        };
        let norm = rep.with_lq(p, mss, 0.0)?;
        norms.push(norm);
        last = Some(rep);
    }
    let mut report = last.expect("at least two levels");
    let (verdict, why) = refinement_verdict(&norms, 0.05, 0.2);
    let label = match verdict {
        Verdict::Converged => "bounded",
        Verdict::Diverged => "growing",
        Verdict::Inconclusive => "inconclusive",
    };
    report.findings.extend(notes);
    if wanted > big {
        report.findings.push(Finding::new(
            "mode_conflict",
            Verdict::Inconclusive,
            format!("{} asks for lambda = {wanted} above Lambda = {big}; capped at Lambda", mode.name()),
        ));
    }
    report.findings.push(Finding::new("summability", verdict, format!("{label}: m** norms {why}")));
    report.values.extend([
        ("m".to_string(), m),
        ("m_star_star".to_string(), mss),
        ("nu".to_string(), nu),
        ("J".to_string(), j),
        ("P".to_string(), pm),
        ("lambda_requested".to_string(), wanted),
    ]);
    let mut g = RadialGrid::new(opts.base_elements, opts.grading)?;
    for (level, v) in norms.iter().enumerate() {
        if level > 0 {
            g = g.refined()?;
        }
        report.values.push((format!("norm_M{}", g.elements()), *v));
    }
    report.seconds = start.seconds();
    Ok(report)
}

/// Largest C ≥ 0 with `C (r^{−γ} − r^{−(ν−2s)}) ≤ u` at the interior nodes r_1..r_{M−1}.
pub fn comparison_check(p: &FracParams, field: &RadialField, lambda: f64, nu: f64) -> Result<f64> {
    let gamma = coupling(p, lambda)?.gamma;
    let beta = nu - 2.0 * p.s();
    if !(gamma > beta) {
        return Err(Error::Config(format!(
            "comparison needs gamma = {gamma} > nu - 2s = {beta}"
        )));
    }
    let nodes = field.nodes();
    let values = field.values();
    let mut c = f64::INFINITY;
    for i in 1..nodes.len() - 1 {
        let r = nodes[i];
        let v = r.powf(-gamma) - r.powf(-beta);
        if v > 0.0 {
            c = c.min(values[i] / v);
        }
    }
    Ok(if c.is_finite() { c.max(0.0) } else { 0.0 })
}

fn power_integral(a: f64, b: f64, c: f64) -> f64 {
    (b.powf(c + 1.0) - a.powf(c + 1.0)) / (c + 1.0)
}

/// Weak Harnack quotient of v = r^γ u:
/// `[ ⨍_{B_{r0}} v^q dμ ]^{1/q} / min v`, with `dμ = |x|^{−2γ}dx` and the minimum over the
/// nodes in `[max(r_5, 1e−3), 3r0/2]`.
///
/// v is interpolated from its nodal values `r_i^γ u_i`; on the first element, where the
/// discrete u is bounded instead of singular, it is extended by its value at r_1.
pub fn harnack_quotient(p: &FracParams, field: &RadialField, lambda: f64, q: f64, r0: f64) -> Result<f64> {
    let gamma = coupling(p, lambda)?.gamma;
    let nodes = field.nodes();
    let u = field.values();
    for i in 1..nodes.len() {
        if nodes[i] >= 2.0 * r0 {
            break;
        }
        if !(u[i] > 0.0) {
            return Err(Error::Negativity { node: i, value: u[i] });
        }
    }
    let mut v: Vec<f64> = nodes.iter().zip(u).map(|(&r, &x)| r.powf(gamma) * x).collect();
    v[0] = v[1];
    ground_state_quotient(p, field.grid(), &v, gamma, q, r0)
}

/// The quotient of [`harnack_quotient`] for the nodal values of an already transformed
/// field v on `grid`. Averages are taken of `(v/min v)^q`, so a constant v gives exactly 1.
pub fn ground_state_quotient(p: &FracParams, grid: &RadialGrid, v: &[f64], gamma: f64, q: f64, r0: f64) -> Result<f64> {
    let n = p.nf();
    let q_max = n / (n - 2.0 * p.s());
    if !(q >= 1.0 && q < q_max) {
        return Err(Error::domain("harnack_quotient", format!("q = {q} outside [1, {q_max})")));
    }
    if !(r0 > 0.0 && 2.0 * r0 <= 1.0) {
        return Err(Error::domain("harnack_quotient", format!("r0 = {r0} must satisfy 0 < 2 r0 <= 1")));
    }
    let nodes = grid.nodes();
    if v.len() != nodes.len() {
        return Err(Error::domain("harnack_quotient", format!("{} values for {} nodes", v.len(), nodes.len())));
    }
    let c = n - 1.0 - 2.0 * gamma;
    if !(c > -1.0) {
        return Err(Error::domain("harnack_quotient", format!("gamma = {gamma} makes the measure non-integrable")));
    }
    let lo = default_blowup_window(grid).0;
    let vmin = nodes
        .iter()
        .zip(v)
        .filter(|(&r, _)| r >= lo && r <= 1.5 * r0)
        .map(|(_, &x)| x)
        .fold(f64::INFINITY, f64::min);
    if !vmin.is_finite() {
        return Err(Error::domain("harnack_quotient", format!("no nodes in [{lo}, {}]", 1.5 * r0)));
    }
    if !(vmin > 0.0) {
        return Err(Error::domain("harnack_quotient", format!("minimum {vmin} is not positive")));
    }
    let w: Vec<f64> = v.iter().map(|x| x / vmin).collect();
    let (mut acc, mut total) = (0.0, 0.0);
    for e in 0..nodes.len() - 1 {
        let (a, b) = (nodes[e], nodes[e + 1]);
        if a >= r0 {
            break;
        }
        let hi = b.min(r0);
        let mass = power_integral(a, hi, c);
        total += mass;
        if w[e] == w[e + 1] {
            acc += w[e].abs().powf(q) * mass;
        } else {
            let slope = (w[e + 1] - w[e]) / (b - a);
            for (r, wt) in element_rule(a, hi).iter() {
                acc += wt * (w[e] + slope * (r - a)).abs().powf(q) * r.powf(c);
            }
        }
    }
    Ok((acc / total).powf(1.0 / q))
}
