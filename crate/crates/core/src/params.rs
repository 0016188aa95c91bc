//! Closed-form constants of the fractional Hardy problem
//! `(−Δ)^s u − λ u/|x|^{2s} = f`: the Hardy constant, the normalisation of the
//! singular integral, the coupling map λ(α) and its inverse, blow-up exponents, and the
//! two summability curves J_s(m) and P_s(m).
//!
//! Every Gamma ratio is evaluated in log space.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::specfun::{digamma, gamma, ln_gamma};

/// Dimension N and fractional order s, with N ≥ 2 and 0 < s < 1 (so N > 2s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FracParams {
    n: u32,
    s: f64,
}

impl FracParams {
    pub fn new(n: u32, s: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(
                "FracParams",
                format!("dimension N = {n} is not supported (the angular kernel needs N >= 2)"),
            ));
        }
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::domain("FracParams", format!("order s = {s} must lie in (0, 1)")));
        }
        if f64::from(n) <= 2.0 * s {
            return Err(Error::domain("FracParams", format!("need N > 2s, got N = {n}, s = {s}")));
        }
        Ok(FracParams { n, s })
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    /// N as a real number.
    pub fn nf(&self) -> f64 {
        f64::from(self.n)
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// (N − 2s)/2, the exponent of the Hardy ground state.
    pub fn half_gap(&self) -> f64 {
        0.5 * (self.nf() - 2.0 * self.s)
    }

    /// Surface area ω_{N−1} = 2π^{N/2}/Γ(N/2) of the unit sphere in ℝ^N.
    pub fn sphere_area(&self) -> f64 {
        let n = self.nf();
        2.0 * PI.powf(0.5 * n) / gamma(0.5 * n).expect("N/2 is positive")
    }

    /// Left end 2N/(N+2s) of the summability range.
    pub fn m_left(&self) -> f64 {
        2.0 * self.nf() / (self.nf() + 2.0 * self.s)
    }

    /// Right end N/(2s) of the summability range (excluded).
    pub fn m_right(&self) -> f64 {
        self.nf() / (2.0 * self.s)
    }
}

/// Λ_{N,s} = 2^{2s} Γ²((N+2s)/4) / Γ²((N−2s)/4).
pub fn hardy_constant(p: &FracParams) -> f64 {
    let (n, s) = (p.nf(), p.s());
    let lg = 2.0 * s * 2f64.ln() + 2.0 * lg((n + 2.0 * s) / 4.0) - 2.0 * lg((n - 2.0 * s) / 4.0);
    lg.exp()
}

fn lg(x: f64) -> f64 {
    ln_gamma(x).expect("argument checked positive by FracParams")
}

/// a_{N,s} = (∫ (1 − cos ξ₁) |ξ|^{−N−2s} dξ)^{−1} = 2^{2s} π^{−N/2} Γ((N+2s)/2) / |Γ(−s)|.
///
/// This is the value for which `a_{N,s} P.V.∫ (u(x)−u(y))|x−y|^{−N−2s} dy` has symbol |ξ|^{2s}
/// and `(a_{N,s}/2)∬ |u(x)−u(y)|²|x−y|^{−N−2s}` equals `∫ |ξ|^{2s}|û|²`. The frequently quoted
/// form with 2^{2s−1} is half of it and is the constant in front of the undivided double
/// integral instead.
pub fn normalization_constant(p: &FracParams) -> f64 {
    let (n, s) = (p.nf(), p.s());
    // |Γ(−s)| = Γ(1−s)/s
    let ln_abs_gamma_neg_s = lg(1.0 - s) - s.ln();
    (2.0 * s * 2f64.ln() - 0.5 * n * PI.ln() + lg(0.5 * (n + 2.0 * s)) - ln_abs_gamma_neg_s)
        .exp()
}

fn check_alpha(p: &FracParams, alpha: f64, op: &'static str) -> Result<()> {
    if !(alpha >= 0.0 && alpha < p.half_gap()) {
        return Err(Error::domain(
            op,
            format!("alpha = {alpha} outside [0, {})", p.half_gap()),
        ));
    }
    Ok(())
}

/// λ(α) = 2^{2s} Γ((N+2s+2α)/4) Γ((N+2s−2α)/4) / [Γ((N−2s+2α)/4) Γ((N−2s−2α)/4)].
pub fn lambda_of_alpha(p: &FracParams, alpha: f64) -> Result<f64> {
    check_alpha(p, alpha, "lambda_of_alpha")?;
    let (n, s) = (p.nf(), p.s());
    let l = 2.0 * s * 2f64.ln() + lg((n + 2.0 * s + 2.0 * alpha) / 4.0)
        + lg((n + 2.0 * s - 2.0 * alpha) / 4.0)
        - lg((n - 2.0 * s + 2.0 * alpha) / 4.0)
        - lg((n - 2.0 * s - 2.0 * alpha) / 4.0);
    Ok(l.exp())
}

/// Factor m_α = 2^{α+s} Γ((N+2s+2α)/4)/Γ((N−2s−2α)/4) with λ(α) = m_α m_{−α}.
pub fn lambda_factor(p: &FracParams, alpha: f64) -> Result<f64> {
    let (n, s) = (p.nf(), p.s());
    let a = (n + 2.0 * s + 2.0 * alpha) / 4.0;
    let b = (n - 2.0 * s - 2.0 * alpha) / 4.0;
    if a <= 0.0 || b <= 0.0 {
        return Err(Error::domain("lambda_factor", format!("alpha = {alpha} out of range")));
    }
    Ok(((alpha + s) * 2f64.ln() + lg(a) - lg(b)).exp())
}

/// The unique α ∈ [0, (N−2s)/2) with λ(α) = λ, by bisection.
pub fn alpha_of_lambda(p: &FracParams, lambda: f64) -> Result<f64> {
    let big = hardy_constant(p);
    if !(lambda > 0.0) || lambda > big * (1.0 + 1e-14) {
        return Err(Error::domain(
            "alpha_of_lambda",
            format!("lambda = {lambda} outside (0, Lambda_N,s = {big}]"),
        ));
    }
    if lambda >= big {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0, p.half_gap());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        // λ(·) is strictly decreasing
        if lambda_of_alpha(p, mid)? > lambda {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The tuple (λ, α, γ, γ̄) attached to a Hardy coupling λ ∈ (0, Λ_{N,s}].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardyCoupling {
    pub lambda: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub gamma_bar: f64,
}

pub fn coupling(p: &FracParams, lambda: f64) -> Result<HardyCoupling> {
    let alpha = alpha_of_lambda(p, lambda)?;
    Ok(HardyCoupling {
        lambda,
        alpha,
        gamma: p.half_gap() - alpha,
        gamma_bar: p.half_gap() + alpha,
    })
}

/// Φ_{N,s}(γ) of the ground state representation, for 0 < γ < (N−2s)/2.
pub fn ground_state_shift(p: &FracParams, gamma_exp: f64) -> Result<f64> {
    if !(gamma_exp > 0.0 && gamma_exp < p.half_gap()) {
        return Err(Error::domain(
            "ground_state_shift",
            format!("gamma = {gamma_exp} outside (0, {})", p.half_gap()),
        ));
    }
    let (n, s) = (p.nf(), p.s());
    let first = (lg((gamma_exp + 2.0 * s) / 2.0) + lg((n - gamma_exp) / 2.0)
        - lg((n - gamma_exp - 2.0 * s) / 2.0)
        - lg(gamma_exp / 2.0))
    .exp();
    let second = (2.0 * (lg((n + 2.0 * s) / 4.0) - lg((n - 2.0 * s) / 4.0))).exp();
    Ok(4f64.powf(s) * (first - second))
}

/// μ(β) with (−Δ)^s |x|^{−β} = μ(β) |x|^{−β−2s}, for 0 < β < N − 2s.
pub fn power_multiplier(p: &FracParams, beta: f64) -> Result<f64> {
    let (n, s) = (p.nf(), p.s());
    if !(beta > 0.0 && beta < n - 2.0 * s) {
        return Err(Error::domain(
            "power_multiplier",
            format!("beta = {beta} outside (0, {})", n - 2.0 * s),
        ));
    }
    Ok((2.0 * s * 2f64.ln() + lg(0.5 * (beta + 2.0 * s)) + lg(0.5 * (n - beta))
        - lg(0.5 * (n - beta - 2.0 * s))
        - lg(0.5 * beta))
    .exp())
}

fn check_m_open(p: &FracParams, m: f64, op: &'static str) -> Result<()> {
    if !(m > 1.0 && m < p.m_right()) {
        return Err(Error::domain(op, format!("m = {m} outside (1, {})", p.m_right())));
    }
    Ok(())
}

fn check_m_p_domain(p: &FracParams, m: f64, op: &'static str) -> Result<()> {
    // a few ulps of slack at the left end so m_left() itself is accepted
    if !(m >= p.m_left() * (1.0 - 1e-15) && m < p.m_right()) {
        return Err(Error::domain(
            op,
            format!("m = {m} outside [{}, {})", p.m_left(), p.m_right()),
        ));
    }
    Ok(())
}

/// J_s(m) = Λ_{N,s} · 4N(m−1)(N−2ms) / (m²(N−2s)²).
pub fn curve_j(p: &FracParams, m: f64) -> Result<f64> {
    check_m_open(p, m, "curve_J")?;
    let (n, s) = (p.nf(), p.s());
    let gap = n - 2.0 * s;
    Ok(hardy_constant(p) * 4.0 * n * (m - 1.0) * (n - 2.0 * m * s) / (m * m * gap * gap))
}

/// α₀(m) = (N+2s)/2 − N/m.
pub fn alpha0(p: &FracParams, m: f64) -> f64 {
    0.5 * (p.nf() + 2.0 * p.s()) - p.nf() / m
}

/// P_s(m) = 2^{2s} Γ((N+2s)/2 − N/(2m)) Γ(N/(2m)) / [Γ(N/2 − N/(2m)) Γ(N/(2m) − s)].
pub fn curve_p(p: &FracParams, m: f64) -> Result<f64> {
    check_m_p_domain(p, m, "curve_P")?;
    let (n, s) = (p.nf(), p.s());
    let d = n / (2.0 * m);
    let c = d - s;
    if c <= 0.0 {
        return Err(Error::Pole {
            function: "curve_P",
            x: m,
        });
    }
    Ok((2.0 * s * 2f64.ln() + lg(0.5 * (n + 2.0 * s) - d) + lg(d) - lg(0.5 * n - d) - lg(c)).exp())
}

/// True when P_s(m) sits so close to the pole m = N/(2s) that its digits are meaningless.
pub fn near_pole(p: &FracParams, m: f64) -> bool {
    p.nf() / (2.0 * m) - p.s() < 1e-6
}

/// D(m) = m²/((m−1)(N−2sm)) · Γ((N+2s)/2 − N/(2m)) Γ(N/(2m)) / [Γ(N/2 − N/(2m)) Γ(N/(2m) − s)].
pub fn opt_ratio(p: &FracParams, m: f64) -> Result<f64> {
    check_m_p_domain(p, m, "opt_ratio")?;
    let (n, s) = (p.nf(), p.s());
    let d = n / (2.0 * m);
    let ratio = (lg(0.5 * (n + 2.0 * s) - d) + lg(d) - lg(0.5 * n - d) - lg(d - s)).exp();
    Ok(m * m / ((m - 1.0) * (n - 2.0 * s * m)) * ratio)
}

/// Θ(N,s) = 4N/(N−2s)² · Γ²((N+2s)/4)/Γ²((N−2s)/4).
pub fn opt_threshold(p: &FracParams) -> f64 {
    let (n, s) = (p.nf(), p.s());
    let gap = n - 2.0 * s;
    4.0 * n / (gap * gap) * (2.0 * (lg((n + 2.0 * s) / 4.0) - lg((n - 2.0 * s) / 4.0))).exp()
}

/// K(m) = ψ(a) − ψ(b) + ψ(c) − ψ(d) with a = (N+2s)/2 − N/(2m), b = N/2 − N/(2m),
/// c = N/(2m) − s, d = N/(2m); D₁′(m) = (N/(2m²)) D₁(m) K(m).
pub fn digamma_combination(p: &FracParams, m: f64) -> Result<f64> {
    let (n, s) = (p.nf(), p.s());
    let d = n / (2.0 * m);
    let (a, b, c) = (0.5 * (n + 2.0 * s) - d, 0.5 * n - d, d - s);
    if a <= 0.0 || b <= 0.0 || c <= 0.0 || d <= 0.0 {
        return Err(Error::domain(
            "digamma_combination",
            format!("m = {m} gives a nonpositive digamma argument"),
        ));
    }
    Ok(digamma(a)? - digamma(b)? + digamma(c)? - digamma(d)?)
}

/// One sample of the J/P comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummabilityPoint {
    pub m: f64,
    pub j: f64,
    pub p: f64,
    pub m_star_star: f64,
    pub m_star: f64,
    pub alpha0: f64,
    /// D(m) of the J ≤ P equivalence.
    pub d: f64,
    pub near_pole: bool,
}

/// Output of [`curve_comparison`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveComparison {
    pub points: Vec<SummabilityPoint>,
    pub theta: f64,
    /// Indices where J > P.
    pub order_violations: Vec<usize>,
    /// Indices where D(m) < Θ(N,s) beyond rounding.
    pub threshold_violations: Vec<usize>,
    /// Indices i where D(m_{i+1}) < D(m_i) beyond rounding.
    pub monotonicity_violations: Vec<usize>,
}

impl CurveComparison {
    pub fn is_consistent(&self) -> bool {
        self.order_violations.is_empty()
            && self.threshold_violations.is_empty()
            && self.monotonicity_violations.is_empty()
    }
}

/// J, P, m**, m*, α₀ and D(m) along an increasing grid inside [2N/(N+2s), N/(2s)).
pub fn curve_comparison(p: &FracParams, m_grid: &[f64]) -> Result<CurveComparison> {
    let theta = opt_threshold(p);
    let mut points = Vec::with_capacity(m_grid.len());
    for &m in m_grid {
        let (mss, ms) = sobolev_exponents(p, m)?;
        points.push(SummabilityPoint {
            m,
            j: curve_j(p, m)?,
            p: curve_p(p, m)?,
            m_star_star: mss,
            m_star: ms,
            alpha0: alpha0(p, m),
            d: opt_ratio(p, m)?,
            near_pole: near_pole(p, m),
        });
    }
    let slack = 1e-12;
    let order_violations = points
        .iter()
        .enumerate()
        .filter(|(_, q)| q.j > q.p * (1.0 + slack))
        .map(|(i, _)| i)
        .collect();
    let threshold_violations = points
        .iter()
        .enumerate()
        .filter(|(_, q)| q.d < theta * (1.0 - slack))
        .map(|(i, _)| i)
        .collect();
    let monotonicity_violations = points
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[1].m > w[0].m && w[1].d < w[0].d * (1.0 - slack))
        .map(|(i, _)| i)
        .collect();
    Ok(CurveComparison {
        points,
        theta,
        order_violations,
        threshold_violations,
        monotonicity_violations,
    })
}

/// p₊(λ) = 1 + 2s/γ(λ), the critical power for the supercritical problem.
pub fn critical_exponent(p: &FracParams, lambda: f64) -> Result<f64> {
    let c = coupling(p, lambda)?;
    Ok(1.0 + 2.0 * p.s() / c.gamma)
}

/// (m**_s, m*_s) = (mN/(N−2ms), mN/(N−ms)).
pub fn sobolev_exponents(p: &FracParams, m: f64) -> Result<(f64, f64)> {
    let (n, s) = (p.nf(), p.s());
    if !(m >= 1.0 && m < p.m_right()) {
        return Err(Error::domain(
            "sobolev_exponents",
            format!("m = {m} outside [1, {})", p.m_right()),
        ));
    }
    Ok((m * n / (n - 2.0 * m * s), m * n / (n - m * s)))
}

/// (s₁−s₂)(s₁^a−s₂^a) − [4a/(a+1)²](s₁^{(a+1)/2} − s₂^{(a+1)/2})², nonnegative for s₁, s₂ ≥ 0, a > 0.
pub fn algebraic_inequality_gap(s1: f64, s2: f64, a: f64) -> f64 {
    let lhs = (s1 - s2) * (s1.powf(a) - s2.powf(a));
    if a == 1.0 {
        return 0.0;
    }
    let h = 0.5 * (a + 1.0);
    let diff = s1.powf(h) - s2.powf(h);
    lhs - 4.0 * a / ((a + 1.0) * (a + 1.0)) * diff * diff
}
