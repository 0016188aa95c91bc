//! One function per command. Each fills in its defaults on the config, so that outputs
//! record what was actually run, and returns the tables, report and verdict checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use fhl_core::experiments::{summability_experiment_with, SummabilityOptions};
use fhl_core::params::{
    alpha0, coupling, critical_exponent, curve_comparison, ground_state_shift, hardy_constant, lambda_factor,
    lambda_of_alpha, normalization_constant, power_multiplier,
};
use fhl_core::semilinear::{linear_levels, solve_semilinear_with, SemilinearOptions, SemilinearReport};
use fhl_core::solve::{iterate_linear, IterativeOptions, Schedule};
use fhl_core::{
    apply_pointwise, assemble, comparison_check, doubling_levels, existence_probe, harnack_quotient,
    semilinear_weighted_probe, solve_linear_direct, AngularKernel, RadialField, RadialFunction, RadialGrid,
    SolveReport, Verdict,
};

use crate::config::{CommandName, Method, RunConfig};
use crate::data::DataSpec;
use crate::error::CliError;
use crate::output::{real, Report, Table};

/// An expectation that `--assert` turns into exit code 4.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub expected: Verdict,
    pub observed: Verdict,
}

impl Check {
    fn new(name: &str, expected: Verdict, observed: Verdict) -> Self {
        Check {
            name: name.to_string(),
            expected,
            observed,
        }
    }

    fn holds(name: &str, ok: bool) -> Self {
        Check::new(name, Verdict::Converged, if ok { Verdict::Converged } else { Verdict::Diverged })
    }

    pub fn passed(&self) -> bool {
        self.expected == self.observed
    }
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub summary: String,
    pub report: Report,
    pub table: Option<Table>,
    pub checks: Vec<Check>,
    /// Raised after the outputs are written.
    pub failure: Option<CliError>,
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Converged => "converged",
        Verdict::Diverged => "diverged",
        Verdict::Inconclusive => "inconclusive",
    }
}

pub fn run(cfg: &mut RunConfig) -> Result<Outcome, CliError> {
    match cfg.command {
        CommandName::Constants => constants(cfg),
        CommandName::Curves => curves(cfg),
        CommandName::Symbol => symbol(cfg),
        CommandName::KernelDump => kernel_dump(cfg),
        CommandName::Solve => solve(cfg),
        CommandName::ProbeExistence => probe_existence(cfg),
        CommandName::Summability => summability(cfg),
        CommandName::Harnack => harnack(cfg),
        CommandName::Semilinear => semilinear(cfg),
        CommandName::Nonexistence => nonexistence(cfg),
    }
}

fn grid(cfg: &mut RunConfig, nodes: usize, grade: f64) -> Result<RadialGrid, CliError> {
    let m = *cfg.nodes.get_or_insert(nodes);
    let g = *cfg.grade.get_or_insert(grade);
    Ok(RadialGrid::new(m, g)?)
}

fn data_or(name: &str, slot: &mut Option<String>, parsed: &mut Option<DataSpec>, default: &str) -> Result<DataSpec, CliError> {
    if parsed.is_none() {
        *parsed = Some(DataSpec::parse(name, default)?);
        *slot = Some(default.to_string());
    }
    Ok(parsed.clone().expect("set above"))
}

fn findings_into(report: &mut Report, rep: &SolveReport) -> Result<(), CliError> {
    for f in &rep.findings {
        report.findings.push(serde_json::to_value(f)?);
    }
    for (k, v) in &rep.values {
        report.value(k.clone(), *v);
    }
    for e in &rep.lq_norms {
        report.norm(format!("L{}_w{}", e.q, e.weight_exponent), e.value);
    }
    report.norm("seminorm_energy", rep.energies.seminorm);
    report.norm("hardy_energy", rep.energies.hardy);
    if let Some(b) = rep.blowup_exponent {
        report.value("blowup_exponent", b);
    }
    report.seconds += rep.seconds;
    Ok(())
}

fn profile(field: &RadialField, gamma: Option<f64>) -> Table {
    let rows = field
        .nodes()
        .iter()
        .zip(field.values())
        .map(|(&r, &u)| match gamma {
            Some(g) => vec![r, u, r.powf(g) * u],
            None => vec![r, u],
        })
        .collect();
    Table {
        columns: if gamma.is_some() { vec!["r", "u", "v"] } else { vec!["r", "u"] },
        rows,
    }
}

fn gamma_of(cfg: &RunConfig, lambda: f64) -> Option<f64> {
    let big = hardy_constant(&cfg.params);
    if lambda == 0.0 {
        Some(0.0)
    } else if lambda <= big {
        coupling(&cfg.params, lambda).ok().map(|c| c.gamma)
    } else {
        None
    }
}

fn constants(cfg: &mut RunConfig) -> Result<Outcome, CliError> {
    let p = cfg.params;
    let big = hardy_constant(&p);
    let mut out = Outcome::default();
    let r = &mut out.report;
    r.value("Lambda", big);
    r.value("a_Ns", normalization_constant(&p));
    r.value("half_gap", p.half_gap());
    r.value("m_left", p.m_left());
    r.value("m_right", p.m_right());
    let mut summary = format!("constants: N={} s={} Lambda={} a={}", p.dim(), p.s(), big, normalization_constant(&p));
    if let Some(lambda) = cfg.lambda {
        let c = coupling(&p, lambda).map_err(|e| CliError::param("lambda", e))?;
        r.value("alpha", c.alpha);
        r.value("gamma", c.gamma);
        r.value("gamma_bar", c.gamma_bar);
        r.value("critical_exponent", critical_exponent(&p, lambda)?);
        if c.gamma > 0.0 && c.gamma < p.half_gap() {
            r.value("Phi_gamma", ground_state_shift(&p, c.gamma)?);
        }
        summary += &format!(" alpha={} gamma={}", c.alpha, c.gamma);
    }
    let mut verdict = "ok".to_string();
    if let Some(k) = cfg.samples {
        let seed = *cfg.seed.get_or_insert(0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut e_prod, mut e_shift) = (0.0f64, 0.0f64);
        for _ in 0..k {
            let alpha = rng.gen_range(0.0..p.half_gap());
            let l = lambda_of_alpha(&p, alpha)?;
            let prod = lambda_factor(&p, alpha)? * lambda_factor(&p, -alpha)?;
            e_prod = e_prod.max((l - prod).abs() / l.abs().max(f64::MIN_POSITIVE));
            let gamma = p.half_gap() - alpha;
            if gamma > 0.0 && gamma < p.half_gap() {
                e_shift = e_shift.max((big + ground_state_shift(&p, gamma)? - l).abs() / big);
            }
        }
        r.value("max_error_factorization", e_prod);
        r.value("max_error_ground_state", e_shift);
        let ok = e_prod <= 1e-12 && e_shift <= 1e-11;
        out.checks.push(Check::holds("identities", ok));
        if !ok {
            verdict = "identity-violation".into();
        }
        summary += &format!(" samples={k} max_errors={e_prod:.2e},{e_shift:.2e}");
    }
    out.report.verdict = verdict;
    out.summary = summary;
    Ok(out)
}

fn curves(cfg: &mut RunConfig) -> Result<Outcome, CliError> {
    let p = cfg.params;
    let k = *cfg.m_points.get_or_insert(64);
    let (lo, hi) = (p.m_left(), p.m_right());
    let grid: Vec<f64> = (0..k).map(|i| lo + (hi - lo) * i as f64 / k as f64).collect();
    let cmp = curve_comparison(&p, &grid)?;
    let rows = cmp
        .points
        .iter()
        .map(|q| vec![q.m, q.j, q.p, q.m_star_star, q.m_star, alpha0(&p, q.m)])
        .collect();
    let mut out = Outcome {
        table: Some(Table {
            columns: vec!["m", "J", "P", "m_star_star", "m_star", "alpha0"],
            rows,
        }),
        ..Outcome::default()
    };
    out.report.value("Theta", cmp.theta);
    out.report.findings.push(json!({
        "order_violations": cmp.order_violations,
        "threshold_violations": cmp.threshold_violations,
        "monotonicity_violations": cmp.monotonicity_violations,
    }));
    let ok = cmp.is_consistent();
    out.checks.push(Check::holds("J <= P, D >= Theta, D nondecreasing", ok));
    out.report.verdict = if ok { "consistent" } else { "inconsistent" }.into();
    out.summary = format!("curves: {k} points in [{lo}, {hi}), {}", out.report.verdict);
    Ok(out)
}

fn symbol(cfg: &mut RunConfig) -> Result<Outcome, CliError> {
    let p = cfg.params;
    let beta = cfg.require("beta", cfg.beta)?;
    let mu = power_multiplier(&p, beta).map_err(|e| CliError::param("beta", e))?;
    let mut out = Outcome::default();
    out.report.value("mu", mu);
    out.report.verdict = "ok".into();
    out.summary = format!("symbol: beta={beta} mu={mu}");
    if cfg.check_quadrature {
        let q = apply_pointwise(&p, &RadialFunction::power(1.0, -beta), 1.0)?;
        let err = (q - mu).abs() / mu.abs();
        out.report.value("quadrature", q);
        out.report.value("relative_error", err);
        out.summary += &format!(" quadrature={q} relative_error={err:.3e}");
        if err > 1e-5 {
            out.report.verdict = "mismatch".into();
            out.failure = Some(CliError::Solver(format!("quadrature value {q} differs from mu = {mu} by {err:.3e} > 1e-5")));
        }
    }
    Ok(out)
}

fn kernel_dump(cfg: &mut RunConfig) -> Result<Outcome, CliError> {
    let p = cfg.params;
    let kappa = *cfg.kappa.get_or_insert(2.0 * p.s());
    let k = AngularKernel::new(&p, kappa)?;
    let rows: Vec<Vec<f64>> = k.dump().into_iter().map(|(t, d)| vec![t, d]).collect();
    let mut out = Outcome::default();
    out.report.value("edge_constant", k.edge_constant());
    out.report.value("table_tolerance", k.tolerance());
    out.report.verdict = "ok".into();
    out.summary = format!("kernel-dump: kappa={kappa}, {} nodes", rows.len());
    out.table = Some(Table {
        columns: vec!["tau", "D"],
        rows,
    });
    Ok(out)
}

fn iterative_options(cfg: &mut RunConfig) -> IterativeOptions {
    IterativeOptions {
        k_max: *cfg.k_max.get_or_insert(2000),
        schedule: Schedule::Geometric,
        ..IterativeOptions::default()
    }
}

fn solve(cfg: &mut RunConfig) -> Result<Outcome, CliError> {
    let p = cfg.params;
    let big = hardy_constant(&p);
    let lambda = cfg.require_lambda()?;
    let f = data_or("f", &mut cfg.f, &mut cfg.f_data, "const:1")?;
    let g = grid(cfg, 128, 3.0)?;
    let method = match *cfg.method.get_or_insert(Method::Auto) {
        Method::Auto if lambda < big => Method::Direct,
        Method::Auto => Method::Iterative,
        m => m,
    };
    let op = assemble(&p, &g, None)?;
    let (rep, verdict) = match method {
        Method::Direct => (solve_linear_direct(&op, lambda, &f.function())?, Verdict::Converged),
        _ => {
            let r = iterate_linear(&op, lambda, &f.function(), iterative_options(cfg))?;
            let v = r.finding("iteration").map(|f| f.verdict).unwrap_or(Verdict::Inconclusive);
            (r, v)
        }
    };
    let mut out = Outcome::default();
    findings_into(&mut out.report, &rep)?;
    out.report.history_of(&rep.history)?;
    let expected = if lambda > big { Verdict::Diverged } else { Verdict::Converged };
    out.checks.push(Check::new("iteration", expected, verdict));
    let gamma = gamma_of(cfg, lambda);
    if let (Some(gm), Some(fit)) = (gamma, rep.blowup_exponent) {
        out.report.value("gamma", gm);
        if verdict == Verdict::Converged && lambda > 0.0 && lambda < big && f.is_bounded() && f.is_nonnegative() {
            out.checks.push(Check::holds("blow-up rate within 10% of gamma", (fit - gm).abs() <= 0.1 * gm));
        }
    }
    out.report.verdict = verdict_name(verdict).into();
    out.summary = format!(
        "solve: {} lambda={lambda} ({:.6} Lambda), M={}, {}",
        if method == Method::Direct { "direct" } else { "iterative" },
        lambda / big,
        g.elements(),
        verdict_name(verdict)
    );
    if let Some(b) = rep.blowup_exponent {
        out.summary += &format!(", blow-up fit {b:.6}");
        if let Some(gm) = gamma {
            out.summary += &format!(" (gamma {gm:.6})");
        }
    }
    if verdict != Verdict::Diverged {
        out.table = Some(profile(&rep.field, gamma));
    }
    Ok(out)
}

fn probe_existence(cfg: &mut RunConfig) -> Result<Outcome, CliError> {
    let p = cfg.params;
    let lambda = cfg.require_lambda()?;
    let nu = cfg.require("nu", cfg.nu)?;
    let g = grid(cfg, 64, 3.0)?;
    let rep = existence_probe(&p, &g, lambda, nu)?;
    let analytic = rep.finding("data_integral").map(|f| f.verdict).unwrap_or(Verdict::Inconclusive);
    let numeric = rep.finding("refinement").map(|f| f.verdict).unwrap_or(Verdict::Inconclusive);
    let mut out = Outcome::default();
    findings_into(&mut out.report, &rep)?;
    out.checks.push(Check::new("numeric verdict matches data integral", analytic, numeric));
    out.report.verdict = verdict_name(numeric).into();
    out.summary = format!(
        "probe-existence: nu={nu}, data integral {}, numerical {}",
        if analytic == Verdict::Converged { "finite" } else { "infinite" },
        verdict_name(numeric)
    );
    if numeric != Verdict::Diverged {
        out.table = Some(profile(&rep.field, gamma_of(cfg, lambda)));
    }
    Ok(out)
}

fn summability(cfg: &mut RunConfig) -> Result<Outcome, CliError> {
    let p = cfg.params;
    let m = cfg.require("m", cfg.m)?;
    let mode = cfg.lambda_mode.ok_or_else(|| CliError::param("mode", "missing (belowJ, atP, aboveP)"))?;
    let eps = *cfg.eps.get_or_insert(0.2);
    let levels = *cfg.levels.get_or_insert(4);
    let base = *cfg.nodes.get_or_insert(64);
    let grading = *cfg.grade.get_or_insert(6.0);
    let opts = SummabilityOptions {
        base_elements: base,
        grading,
    };
    let rep = summability_experiment_with(&p, m, mode, eps, levels, opts)?;
    let verdict = rep.finding("summability").map(|f| f.verdict).unwrap_or(Verdict::Inconclusive);
    let mut out = Outcome::default();
    findings_into(&mut out.report, &rep)?;
    out.report.value("lambda", rep.lambda);
    if let Some(nu) = rep.value("nu") {
        if let Ok(c) = comparison_check(&p, &rep.field, rep.lambda, nu) {
            out.report.value("comparison_constant", c);
        }
    }
    let history: Vec<Value> = rep
        .values
        .iter()
        .filter(|(k, _)| k.starts_with("norm_M"))
        .map(|(k, v)| json!({ "M": k.trim_start_matches("norm_M").parse::<usize>().unwrap_or(0), "norm": real(*v) }))
        .collect();
    out.report.history = history;
    out.checks.push(Check::new("summability", mode.expected(), verdict));
    let label = match verdict {
        Verdict::Converged => "bounded",
        Verdict::Diverged => "growing",
        Verdict::Inconclusive => "inconclusive",
    };
    out.report.verdict = label.into();
    out.summary = format!("summability: m={m} mode={} lambda={} -> {label}", mode.name(), rep.lambda);
    out.table = Some(profile(&rep.field, gamma_of(cfg, rep.lambda)));
    Ok(out)
}

fn harnack(cfg: &mut RunConfig) -> Result<Outcome, CliError> {
    let p = cfg.params;
    let lambda = cfg.require_lambda()?;
    let f = data_or("f", &mut cfg.f, &mut cfg.f_data, "const:1")?;
    let q = *cfg.q.get_or_insert(1.0);
    let radii = cfg.r0.get_or_insert_with(|| vec![0.2, 0.1, 0.05, 0.025]).clone();
    let g = grid(cfg, 256, 3.0)?;
    let op = assemble(&p, &g, None)?;
    let rep = solve_linear_direct(&op, lambda, &f.function())?;
    let mut out = Outcome::default();
    findings_into(&mut out.report, &rep)?;
    let mut quotients = Vec::new();
    for &r0 in &radii {
        let v = harnack_quotient(&p, &rep.field, lambda, q, r0)?;
        out.report.value(format!("quotient_r0_{r0}"), v);
        quotients.push(v);
    }
    let lo = quotients.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = quotients.iter().cloned().fold(0.0, f64::max);
    let ok = hi <= 2.0 * lo;
    out.checks.push(Check::holds("quotients within a factor 2 band", ok));
    out.report.verdict = if ok { "bounded" } else { "spread" }.into();
    out.summary = format!(
        "harnack: q={q}, quotients {} -> {}",
        quotients.iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>().join(", "),
        out.report.verdict
    );
    out.table = Some(profile(&rep.field, gamma_of(cfg, lambda)));
    Ok(out)
}

fn semilinear(cfg: &mut RunConfig) -> Result<Outcome, CliError> {
    let p = cfg.params;
    let big = hardy_constant(&p);
    let lambda = cfg.require_lambda()?;
    let sigma = cfg.require("sigma", cfg.sigma)?;
    let h = data_or("h", &mut cfg.h, &mut cfg.h_data, "const:1")?;
    let g = grid(cfg, 64, 3.0)?;
    let levels = match cfg.doubling {
        Some(j) => doubling_levels(j),
        None => linear_levels(*cfg.n_max.get_or_insert(100)),
    };
    let weighted = sigma < 1.0 && lambda > 0.0 && lambda < big;
    let rep: SemilinearReport = if weighted {
        semilinear_weighted_probe(&p, &g, lambda, sigma, &h.function(), &levels)?
    } else {
        solve_semilinear_with(&p, &g, lambda, sigma, &h.function(), &levels, None, SemilinearOptions::default())?
    };
    let mut out = Outcome::default();
    findings_into(&mut out.report, &rep.report)?;
    out.report.history_of(&rep.outer)?;
    let defect = rep.max_relative_defect();
    out.report.value("max_relative_defect", defect);
    out.checks.push(Check::holds("monotone in n up to 1e-6", defect <= 1e-6));
    let energies: Vec<f64> = rep.outer.iter().map(|o| o.power_energy).collect();
    if let Some(&last) = energies.last() {
        out.report.norm("power_energy", last);
        out.checks.push(Check::holds("final energy finite", last.is_finite()));
        if sigma > 1.0 && 4.0 * sigma / ((sigma + 1.0) * (sigma + 1.0)) > lambda / big {
            let max = energies.iter().cloned().fold(0.0, f64::max);
            out.checks.push(Check::holds("energy within 2x of its final value", max <= 2.0 * last));
        }
    }
    if weighted {
        let w: Vec<f64> = rep.outer.iter().filter_map(|o| o.weighted_energy).collect();
        if let Some(&last) = w.last() {
            out.report.norm("weighted_energy", last);
            out.checks.push(Check::holds(
                "weighted energy within 2x of its final value",
                w.iter().all(|&x| x.is_finite() && x <= 2.0 * last),
            ));
        }
        let finite = rep.report.value("data_integral").is_some();
        out.checks.push(Check::holds("weighted data integral finite", finite));
    }
    let ok = out.checks.iter().all(Check::passed);
    out.report.verdict = if ok { "converged" } else { "failed" }.into();
    out.summary = format!(
        "semilinear: sigma={sigma}, {} levels up to n={}, final energy {:.6}, defect {defect:.1e} -> {}",
        levels.len(),
        levels[levels.len() - 1],
        energies.last().copied().unwrap_or(f64::NAN),
        out.report.verdict
    );
    out.table = Some(profile(&rep.report.field, gamma_of(cfg, lambda)));
    Ok(out)
}

fn nonexistence(cfg: &mut RunConfig) -> Result<Outcome, CliError> {
    let p = cfg.params;
    let big = hardy_constant(&p);
    if cfg.lambda.is_none() {
        cfg.lambda = Some(1.2 * big);
        cfg.lambda_frac = Some(1.2);
    }
    let lambda = cfg.require_lambda()?;
    if !(lambda > 0.0) {
        return Err(CliError::param("lambda", "must be positive"));
    }
    let f = data_or("f", &mut cfg.f, &mut cfg.f_data, "const:1")?;
    let g = grid(cfg, 64, 3.0)?;
    let op = assemble(&p, &g, None)?;
    let rep = iterate_linear(&op, lambda, &f.function(), iterative_options(cfg))?;
    let verdict = rep.finding("iteration").map(|f| f.verdict).unwrap_or(Verdict::Inconclusive);
    let mut out = Outcome::default();
    findings_into(&mut out.report, &rep)?;
    out.report.history_of(&rep.history)?;
    let expected = if lambda > big { Verdict::Diverged } else { Verdict::Converged };
    out.checks.push(Check::new("iteration", expected, verdict));
    out.report.verdict = verdict_name(verdict).into();
    out.summary = format!(
        "nonexistence: lambda={lambda} ({:.6} Lambda) -> {} ({})",
        lambda / big,
        verdict_name(verdict),
        rep.finding("iteration").map(|f| f.criterion.as_str()).unwrap_or("")
    );
    Ok(out)
}
