//! The fractional Laplacian and its Gagliardo forms on radial profiles.
//!
//! Everything is reduced to one- and two-dimensional radial integrals against the angular
//! kernel D_κ; see [`crate::kernel`].

use crate::error::{Error, Result};
use crate::kernel::{AngularKernel, ExteriorTail};
use crate::pairs::{element_rule, PairKernel};
use crate::parallel::par_map;
use crate::params::{normalization_constant, FracParams};
use crate::profile::{RadialFunction, SampledProfile};
use crate::quadrature::{integrate, log_breaks, Tolerance};

/// Below this distance from τ = 1 a generic profile is replaced by its quadratic model;
/// closer in, the difference quotients are dominated by rounding.
const POINTWISE_CUT: f64 = 1e-4;
const FORM_CUT: f64 = 1e-6;

fn merged_breaks(mut base: Vec<f64>, extra: impl IntoIterator<Item = f64>, lo: f64, hi: f64) -> Vec<f64> {
    base.extend(extra.into_iter().filter(|&x| x > lo && x < hi));
    base.sort_by(f64::total_cmp);
    base.dedup();
    base
}

/// `τ^{N−1}(1−τ^p) + τ^{2s−1}(1−τ^{−p})` for one power, with the second-order cancellation
/// at τ = 1 done analytically.
fn power_bracket(n: f64, s: f64, p: f64, tau: f64, ln_tau: f64) -> f64 {
    if ln_tau.abs() < 0.5 {
        let sh = (0.5 * p * ln_tau).sinh();
        tau.powf(2.0 * s - 1.0) * (-4.0 * sh * sh - ((n - 2.0 * s) * ln_tau).exp_m1() * (p * ln_tau).exp_m1())
    } else {
        tau.powf(n - 1.0) * (1.0 - tau.powf(p)) + tau.powf(2.0 * s - 1.0) * (1.0 - tau.powf(-p))
    }
}

/// The folded integrand bracket `g(r)(τ^{N−1} + τ^{2s−1}) − g(rτ)τ^{N−1} − g(r/τ)τ^{2s−1}`
/// of [`apply_pointwise`], for 0 < τ < 1.
pub fn folded_bracket(p: &FracParams, g: &RadialFunction, r: f64, tau: f64) -> f64 {
    let (n, s) = (p.nf(), p.s());
    match g {
        RadialFunction::Powers(terms) => terms
            .iter()
            .map(|t| t.coef * r.powf(t.exponent) * power_bracket(n, s, t.exponent, tau, tau.ln()))
            .sum(),
        _ => {
            let gr = g.eval(r);
            tau.powf(n - 1.0) * (gr - g.eval(r * tau)) + tau.powf(2.0 * s - 1.0) * (gr - g.eval(r / tau))
        }
    }
}

/// `(−Δ)^s g (r)` for a radial profile.
///
/// Uses the folded form `a r^{−2s} ∫_0^1 [g(r)(τ^{N−1} + τ^{2s−1}) − g(rτ)τ^{N−1} −
/// g(r/τ)τ^{2s−1}] D_{2s}(τ) dτ`, whose bracket vanishes to second order at τ = 1.
pub fn apply_pointwise(p: &FracParams, g: &RadialFunction, r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::domain("apply_pointwise", format!("r = {r} must be positive")));
    }
    let (n, s) = (p.nf(), p.s());
    let kernel = AngularKernel::shared(p, 2.0 * s)?;
    let kappa = 2.0 * s;
    let gr = g.eval(r);
    let kinks = g.kinks();
    let tau_kinks: Vec<f64> = kinks.iter().flat_map(|&b| [b / r, r / b]).collect();

    let bracket_tau = |tau: f64| folded_bracket(p, g, r, tau);
    let bracket_eps = |eps: f64| -> f64 {
        let tau = 1.0 - eps;
        match g {
            RadialFunction::Powers(terms) => {
                let l = (-eps).ln_1p();
                terms
                    .iter()
                    .map(|t| t.coef * r.powf(t.exponent) * power_bracket(n, s, t.exponent, tau, l))
                    .sum()
            }
            _ => bracket_tau(tau),
        }
    };

    let scale = match g {
        RadialFunction::Powers(terms) => terms.iter().map(|t| (t.coef * r.powf(t.exponent)).abs()).sum(),
        _ => gr.abs(),
    };
    let tol = Tolerance::rel(1e-10).with_abs(1e-14 * scale.max(f64::MIN_POSITIVE));

    // τ ∈ (0, 1/2]
    let mut breaks = vec![0.0];
    breaks.extend(log_breaks(1e-30, 0.5, 10.0));
    let breaks = merged_breaks(breaks, tau_kinks.iter().copied(), 0.0, 0.5);
    let inner = integrate(
        |tau| bracket_tau(tau) * kernel.value(tau).unwrap_or(0.0),
        &breaks,
        tol,
    )
    .require("apply_pointwise")?;

    // τ = 1 − ε, ε ∈ (0, 1/2]; below `cut` the bracket is replaced by its quadratic model
    let cut = match g {
        RadialFunction::Powers(_) => 1e-60,
        _ => POINTWISE_CUT,
    };
    let b2 = bracket_eps(cut) / (cut * cut);
    let model = b2 * kernel.edge_constant() * cut.powf(2.0 - kappa) / (2.0 - kappa);
    let mut breaks = vec![cut];
    breaks.extend(log_breaks(cut, 0.5, 10.0));
    let breaks = merged_breaks(breaks, tau_kinks.iter().map(|t| 1.0 - t), cut, 0.5);
    let near = integrate(
        |eps| bracket_eps(eps) * kernel.value_below_one(eps),
        &breaks,
        tol,
    )
    .require("apply_pointwise")?;

    Ok(normalization_constant(p) * r.powf(-2.0 * s) * (inner + near + model))
}

fn check_form_args(g: &RadialFunction, kappa: f64, q: f64, op: &'static str) -> Result<()> {
    if !(q >= 1.0) || !q.is_finite() {
        return Err(Error::domain(op, format!("q = {q} must be >= 1")));
    }
    if !(kappa > 0.0) || !(kappa < q) {
        return Err(Error::domain(op, format!("kappa = {kappa} must lie in (0, q) (order kappa/q in (0, 1))")));
    }
    if !g.is_exterior_zero() {
        return Err(Error::domain(op, "profile must vanish for r >= 1"));
    }
    Ok(())
}

/// `∬ |g(x)−g(y)|^q |x−y|^{−N−κ} |x|^{−γ}|y|^{−γ} dx dy` for an exterior-zero radial g.
pub(crate) fn weighted_seminorm(p: &FracParams, g: &RadialFunction, kappa: f64, q: f64, gamma: f64) -> Result<f64> {
    check_form_args(g, kappa, q, "gagliardo_seminorm")?;
    if !(gamma >= 0.0 && gamma < p.half_gap()) {
        return Err(Error::domain(
            "weighted_forms",
            format!("gamma = {gamma} outside [0, {})", p.half_gap()),
        ));
    }
    let kernel = AngularKernel::shared(p, kappa)?;
    let tail = ExteriorTail::new(kernel.clone(), gamma)?;
    match g {
        RadialFunction::Sampled(s) => Ok(sampled_seminorm(&kernel, &tail, s, q, gamma)),
        RadialFunction::Custom(_) => nested_seminorm(p, &kernel, &tail, g, q, gamma),
        RadialFunction::Powers(_) => unreachable!("power profiles are rejected as not exterior-zero"),
    }
}

fn sampled_seminorm(
    kernel: &std::sync::Arc<AngularKernel>,
    tail: &ExteriorTail,
    g: &SampledProfile,
    q: f64,
    gamma: f64,
) -> f64 {
    let pk = PairKernel::new(kernel.clone(), gamma, q);
    let x = g.nodes();
    let v = g.values();
    let m = g.elements();
    let zero = |e: usize| v[e] == 0.0 && v[e + 1] == 0.0;
    let rows = par_map(m, |e| {
        let mut acc = 0.0;
        for f in e..m {
            if zero(e) && zero(f) {
                continue;
            }
            let mut part = 0.0;
            let se = g.slope(e);
            pk.visit((x[e], x[e + 1]), (x[f], x[f + 1]), &mut |pt| {
                let d = if e == f {
                    se * pt.dr
                } else {
                    g.eval_in(e, pt.r) - g.eval_in(f, pt.rho)
                };
                part += pt.w * d.abs().powf(q);
            });
            acc += if f == e { part } else { 2.0 * part };
        }
        let mut ext = 0.0;
        if !zero(e) {
            for (r, w) in element_rule(x[e], x[e + 1]).iter() {
                ext += w * exterior_density(g.eval_in(e, r), q, tail, r);
            }
        }
        acc + 2.0 * ext
    });
    rows.iter().sum()
}

/// `|g|^q κ_ext(r)`; zero where g is, so the infinite tail at r = 1 never multiplies it.
fn exterior_density(g: f64, q: f64, tail: &ExteriorTail, r: f64) -> f64 {
    if g == 0.0 {
        0.0
    } else {
        g.abs().powf(q) * tail.value(r)
    }
}

fn outer_breaks(kinks: &[f64]) -> Vec<f64> {
    let mut b = vec![0.0];
    b.extend(log_breaks(1e-60, 0.5, 10.0));
    let mut k = 2;
    while k <= 16 {
        b.push(1.0 - 10f64.powi(-k));
        k += 2;
    }
    b.push(1.0);
    merged_breaks(b, kinks.iter().copied(), 0.0, 1.0)
}

fn nested_seminorm(
    p: &FracParams,
    kernel: &AngularKernel,
    tail: &ExteriorTail,
    g: &RadialFunction,
    q: f64,
    gamma: f64,
) -> Result<f64> {
    let n = p.nf();
    let kappa = kernel.kappa();
    let omega = kernel.sphere_area();
    let edge = kernel.edge_constant();
    let kinks = g.kinks();
    let inner_tol = Tolerance::rel(1e-10);
    let inner = |r: f64| -> f64 {
        let gr = g.eval(r);
        let tk: Vec<f64> = kinks.iter().map(|&b| b / r).filter(|&t| t < 1.0).collect();
        let lower = {
            let mut b = vec![0.0];
            b.extend(log_breaks(1e-30, 0.5, 10.0));
            merged_breaks(b, tk.iter().copied(), 0.0, 0.5)
        };
        let a = integrate(
            |tau| (gr - g.eval(r * tau)).abs().powf(q) * tau.powf(n - 1.0 - gamma) * kernel.value(tau).unwrap_or(0.0),
            &lower,
            inner_tol,
        );
        let upper = {
            let mut b = vec![FORM_CUT];
            b.extend(log_breaks(FORM_CUT, 0.5, 10.0));
            merged_breaks(b, tk.iter().map(|t| 1.0 - t), FORM_CUT, 0.5)
        };
        let b = integrate(
            |eps| {
                let tau = 1.0 - eps;
                (gr - g.eval(r * tau)).abs().powf(q) * tau.powf(n - 1.0 - gamma) * kernel.value_below_one(eps)
            },
            &upper,
            inner_tol,
        );
        let d = (gr - g.eval(r * (1.0 - FORM_CUT))).abs().powf(q) / FORM_CUT.powf(q);
        let model = d * edge * FORM_CUT.powf(q - kappa) / (q - kappa);
        a.value + b.value + model
    };
    let breaks = outer_breaks(&kinks);
    let tol = Tolerance::rel(1e-8);
    let interior = integrate(|r| r.powf(n - 1.0 - kappa - 2.0 * gamma) * inner(r), &breaks, tol)
        .require("gagliardo_seminorm")?;
    let ext = integrate(|r| exterior_density(g.eval(r), q, tail, r), &breaks, tol).require("gagliardo_seminorm")?;
    Ok(2.0 * omega * interior + 2.0 * ext)
}

/// `ω_{N−1} ∫_0^1 |g|^q r^{N−1−c} dr` for an exterior-zero profile.
pub(crate) fn radial_moment(p: &FracParams, g: &RadialFunction, q: f64, c: f64) -> Result<f64> {
    let n = p.nf();
    let omega = p.sphere_area();
    match g {
        RadialFunction::Sampled(s) => {
            let x = s.nodes();
            let mut acc = 0.0;
            for e in 0..s.elements() {
                for (r, w) in element_rule(x[e], x[e + 1]).iter() {
                    acc += w * s.eval_in(e, r).abs().powf(q) * r.powf(n - 1.0 - c);
                }
            }
            Ok(omega * acc)
        }
        RadialFunction::Custom(_) => {
            let v = integrate(
                |r| g.eval(r).abs().powf(q) * r.powf(n - 1.0 - c),
                &outer_breaks(&g.kinks()),
                Tolerance::rel(1e-11),
            )
            .require("radial_moment")?;
            Ok(omega * v)
        }
        RadialFunction::Powers(_) => Err(Error::domain("radial_moment", "profile must vanish for r >= 1")),
    }
}

/// `∬ |g(x)−g(y)|^q / |x−y|^{N+κ} dx dy` over ℝ^N × ℝ^N for an exterior-zero radial g.
///
/// With q = 2 and κ = 2s this is the doubled Gagliardo integral; the quadratic form of
/// the operator is `a_{N,s}/2` times it.
pub fn gagliardo_seminorm(p: &FracParams, g: &RadialFunction, kappa: f64, q: f64) -> Result<f64> {
    weighted_seminorm(p, g, kappa, q, 0.0)
}

/// `[(a_{N,s}/2)·seminorm(g, 2s, 2)] / ∫ g²|x|^{−2s} dx`.
pub fn hardy_quotient(p: &FracParams, g: &RadialFunction) -> Result<f64> {
    let s = p.s();
    let den = radial_moment(p, g, 2.0, 2.0 * s)?;
    if !(den > 0.0) {
        return Err(Error::domain("hardy_quotient", "profile is identically zero"));
    }
    let num = 0.5 * normalization_constant(p) * gagliardo_seminorm(p, g, 2.0 * s, 2.0)?;
    Ok(num / den)
}

/// `(∫ v² |x|^{−2γ} dx, ∬ (v(x)−v(y))² |x−y|^{−N−2s} |x|^{−γ}|y|^{−γ} dx dy)`.
pub fn weighted_forms(p: &FracParams, v: &RadialFunction, gamma: f64) -> Result<(f64, f64)> {
    if !(gamma >= 0.0 && gamma < p.half_gap()) {
        return Err(Error::domain(
            "weighted_forms",
            format!("gamma = {gamma} outside [0, {})", p.half_gap()),
        ));
    }
    let mass = radial_moment(p, v, 2.0, 2.0 * gamma)?;
    let form = weighted_seminorm(p, v, 2.0 * p.s(), 2.0, gamma)?;
    Ok((mass, form))
}
