//! Quadrature for `∬_{I×J} F(r, ρ) k(r, ρ) dr dρ` over pairs of radial intervals, where
//!
//! `k(r,ρ) = ω lo^{N−1} |r−ρ|^{−1−κ} E(ln(|r−ρ|/hi)) (lo·hi)^{−γ}`,  lo = min, hi = max,
//!
//! is the radial form of `|x−y|^{−N−κ}|x|^{−γ}|y|^{−γ}` and F is symmetric, vanishing on the
//! diagonal like `|r−ρ|^q`. Identical intervals use a (t, y) split graded toward t = 0,
//! touching intervals a Duffy map at the shared corner, and separated intervals a tensor
//! Gauss rule once they are at least one interval length apart.

use std::sync::Arc;

use crate::kernel::AngularKernel;
use crate::quadrature::{gauss, graded_rule, Rule};

/// One quadrature point of a pair integral. `r` lies in the first interval and `rho` in
/// the second, `dr = r − ρ` is exact even when the two are very close, and `w` already
/// contains the kernel.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PairPoint {
    pub r: f64,
    pub rho: f64,
    pub dr: f64,
    pub w: f64,
}

struct Rules {
    diag: Rule,
    cross: Rule,
    origin: Rule,
    polar: Rule,
    far: Rule,
}

pub(crate) struct PairKernel {
    kernel: Arc<AngularKernel>,
    omega: f64,
    nm1: i32,
    kappa: f64,
    gamma: f64,
    rules: Rules,
}

const SEPARATION: f64 = 1.0;

fn unit(rule: &Rule) -> Rule {
    rule.mapped(0.0, 1.0)
}

fn flipped(rule: &Rule) -> Rule {
    Rule {
        nodes: rule.nodes.iter().map(|x| 1.0 - x).collect(),
        weights: rule.weights.clone(),
    }
}

fn scaled(rule: &Rule, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
    let h = b - a;
    rule.iter().map(move |(x, w)| (a + h * x, h * w))
}

impl PairKernel {
    /// `q` is the order to which F vanishes on the diagonal; it sets the depth of the
    /// grading so that the neglected innermost panel is below double precision.
    pub fn new(kernel: Arc<AngularKernel>, gamma: f64, q: f64) -> Self {
        let kappa = kernel.kappa();
        let decay = (q - kappa).max(0.05);
        let levels = ((14.0 * 10f64.ln() / (decay * 4f64.ln())).ceil() as usize).clamp(20, 400);
        let diag = graded_rule(12, levels, 0.25);
        let tail = graded_rule(12, 30, 0.25);
        let mut polar = Rule::default();
        for (x, w) in diag.iter() {
            polar.nodes.push(0.5 * x);
            polar.weights.push(0.5 * w);
        }
        for (x, w) in flipped(&tail).iter() {
            polar.nodes.push(0.5 + 0.5 * x);
            polar.weights.push(0.5 * w);
        }
        let rules = Rules {
            cross: unit(gauss(12)),
            origin: tail,
            polar,
            far: unit(gauss(8)),
            diag,
        };
        let p = *kernel.params();
        PairKernel {
            omega: kernel.sphere_area(),
            nm1: p.dim() as i32 - 1,
            kappa,
            gamma,
            kernel,
            rules,
        }
    }

    pub fn weight(&self, lo: f64, hi: f64, gap: f64) -> f64 {
        let e = self.kernel.regular_part((gap / hi).ln());
        let near = if self.gamma == 0.0 {
            lo.powi(self.nm1)
        } else {
            // one power, so that lo = 0 gives 0 rather than 0·∞
            lo.powf(f64::from(self.nm1) - self.gamma) * hi.powf(-self.gamma)
        };
        self.omega * near * gap.powf(-1.0 - self.kappa) * e
    }

    /// Visit the quadrature points of the integral over `e × f`, where either `e == f` or
    /// `e` lies entirely to the left of `f`.
    pub fn visit(&self, e: (f64, f64), f: (f64, f64), sink: &mut impl FnMut(PairPoint)) {
        if e == f {
            self.identical(e, 1.0, sink);
        } else if e.1 == f.0 {
            self.touching(e, f, 1.0, sink);
        } else {
            self.separated(e, f, 1.0, sink);
        }
    }

    fn identical(&self, (a, b): (f64, f64), mult: f64, sink: &mut impl FnMut(PairPoint)) {
        let h = b - a;
        if a == 0.0 {
            // ρ = rτ with r graded toward the origin and t = 1 − τ graded toward the diagonal
            for (r, wr) in scaled(&self.rules.origin, 0.0, h) {
                for (t, wt) in self.rules.polar.iter() {
                    let gap = r * t;
                    let lo = r - gap;
                    let w = 2.0 * mult * wr * wt * r * self.weight(lo, r, gap);
                    sink(PairPoint {
                        r,
                        rho: lo,
                        dr: gap,
                        w,
                    });
                }
            }
            return;
        }
        if b > 2.0 * a {
            let m = 0.5 * (a + b);
            self.identical((a, m), mult, sink);
            self.identical((m, b), mult, sink);
            self.touching((a, m), (m, b), 2.0 * mult, sink);
            return;
        }
        for (t, wt) in self.rules.diag.iter() {
            let gap = h * t;
            for (eta, we) in self.rules.cross.iter() {
                let lo = a + h * (1.0 - t) * eta;
                let hi = lo + gap;
                let w = 2.0 * mult * h * h * (1.0 - t) * wt * we * self.weight(lo, hi, gap);
                sink(PairPoint {
                    r: hi,
                    rho: lo,
                    dr: gap,
                    w,
                });
            }
        }
    }

    fn touching(&self, e: (f64, f64), f: (f64, f64), mult: f64, sink: &mut impl FnMut(PairPoint)) {
        let (a, b) = e;
        let (_, d) = f;
        let (h1, h2) = (b - a, d - b);
        if a == 0.0 || b > 2.0 * a || h1 > 2.0 * h2 {
            let m = 0.5 * (a + b);
            self.separated((a, m), f, mult, sink);
            self.touching((m, b), f, mult, sink);
            return;
        }
        if h2 > 2.0 * h1 {
            let m = 0.5 * (b + d);
            self.touching(e, (b, m), mult, sink);
            self.separated(e, (m, d), mult, sink);
            return;
        }
        for (xi, wx) in self.rules.diag.iter() {
            for (eta, we) in self.rules.cross.iter() {
                let jac = mult * h1 * h2 * xi * wx * we;
                for (x1, x2) in [(xi, xi * eta), (xi * eta, xi)] {
                    let (u, v) = (h1 * x1, h2 * x2);
                    let r = b - u;
                    let rho = b + v;
                    let gap = u + v;
                    sink(PairPoint {
                        r,
                        rho,
                        dr: -gap,
                        w: jac * self.weight(r, rho, gap),
                    });
                }
            }
        }
    }

    fn separated(&self, e: (f64, f64), f: (f64, f64), mult: f64, sink: &mut impl FnMut(PairPoint)) {
        let (a, b) = e;
        let (c, d) = f;
        let (h1, h2) = (b - a, d - c);
        let dist = c - b;
        let split_e = (a > 0.0 && b > 2.0 * a) || (dist < SEPARATION * h1.max(h2) && h1 >= h2);
        let split_f = d > 2.0 * c || (dist < SEPARATION * h1.max(h2) && h2 > h1);
        if split_e {
            let m = 0.5 * (a + b);
            self.separated((a, m), f, mult, sink);
            self.separated((m, b), f, mult, sink);
            return;
        }
        if split_f {
            let m = 0.5 * (c + d);
            self.separated(e, (c, m), mult, sink);
            self.separated(e, (m, d), mult, sink);
            return;
        }
        let r_rule = if a == 0.0 { &self.rules.origin } else { &self.rules.far };
        for (r, wr) in scaled(r_rule, a, b) {
            for (rho, wp) in scaled(&self.rules.far, c, d) {
                let gap = rho - r;
                sink(PairPoint {
                    r,
                    rho,
                    dr: -gap,
                    w: mult * wr * wp * self.weight(r, rho, gap),
                });
            }
        }
    }
}

/// Rule for a one-dimensional integral over `[a, b] ⊂ [0, 1]` whose integrand may carry a
/// power of r at the origin and a power of (1 − r) at r = 1.
pub(crate) fn element_rule(a: f64, b: f64) -> Rule {
    use std::sync::OnceLock;
    static ORIGIN: OnceLock<Rule> = OnceLock::new();
    let graded = ORIGIN.get_or_init(|| graded_rule(12, 40, 0.25));
    fn push(out: &mut Rule, rule: &Rule, lo: f64, hi: f64, toward_hi: bool) {
        for (x, w) in rule.iter() {
            let node = if toward_hi { hi - (hi - lo) * x } else { lo + (hi - lo) * x };
            // the deepest graded nodes round onto the endpoint, where the integrand may be singular
            if node == hi || node == lo {
                continue;
            }
            out.nodes.push(node);
            out.weights.push((hi - lo) * w);
        }
    }
    let mut out = Rule::default();
    if a == 0.0 && b == 1.0 {
        push(&mut out, graded, 0.0, 0.5, false);
        push(&mut out, graded, 0.5, 1.0, true);
    } else if a == 0.0 {
        push(&mut out, graded, 0.0, b, false);
    } else if b == 1.0 {
        if a > 0.5 {
            push(&mut out, graded, a, 1.0, true);
        } else {
            out = crate::quadrature::radial_element_rule(a, 0.5);
            push(&mut out, graded, 0.5, 1.0, true);
        }
    } else {
        return crate::quadrature::radial_element_rule(a, b);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn beta(a: f64, b: f64) -> f64 {
        use crate::specfun::gamma;
        gamma(a).unwrap() * gamma(b).unwrap() / gamma(a + b).unwrap()
    }

    #[test]
    fn element_rule_handles_both_ends() {
        // singular at the origin, vanishing like the exterior integrands at r = 1
        let f = |r: f64| r.powf(-0.6) * (1.0 - r).powf(0.4);
        let exact = beta(0.4, 1.4);
        let v = element_rule(0.0, 1.0).integrate(f);
        assert!((v - exact).abs() < 1e-9 * exact, "{v} {exact}");
        for (a, b) in [(0.0, 0.3), (0.7, 1.0), (0.2, 1.0), (0.1, 0.4)] {
            let v = element_rule(a, b).integrate(f);
            let fine = crate::quadrature::integrate(f, &[a, 0.5 * (a + b), b], crate::quadrature::Tolerance::rel(1e-13));
            assert!((v - fine.value).abs() < 1e-9 * fine.value, "[{a},{b}] {v} {}", fine.value);
        }
    }

    #[test]
    fn element_rule_singular_at_one_reaches_the_float_floor() {
        // (1 − r)^{−0.6} puts about 2.5·δ^{0.4} ≈ 1e−6 of mass within δ = 2^{−53} of r = 1,
        // which no rule in the variable r can see
        let exact = beta(1.3, 0.4);
        let v = element_rule(0.0, 1.0).integrate(|r| r.powf(0.3) * (1.0 - r).powf(-0.6));
        assert!((v - exact).abs() < 1e-6 * exact, "{v} {exact}");
    }
}
