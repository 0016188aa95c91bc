//! Gauss rules, an adaptive Gauss–Kronrod integrator and geometrically graded rules
//! for integrands with power-type endpoint singularities.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// A quadrature rule on a fixed interval, as parallel node and weight vectors.
#[derive(Debug, Clone, Default)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.iter().map(|(x, w)| w * f(x)).sum()
    }

    /// Append this rule (defined on [-1, 1]) mapped onto [a, b].
    fn push_mapped(&self, a: f64, b: f64, out: &mut Rule) {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        for (x, w) in self.iter() {
            out.nodes.push(c + h * x);
            out.weights.push(h * w);
        }
    }

    pub fn mapped(&self, a: f64, b: f64) -> Rule {
        let mut out = Rule::default();
        self.push_mapped(a, b, &mut out);
        out
    }
}

/// n-point Gauss–Legendre rule on [-1, 1], by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> Rule {
    assert!(n >= 1, "Gauss rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Rule { nodes, weights }
}

/// Cached Gauss–Legendre rules for the orders used throughout the crate.
pub fn gauss(n: usize) -> &'static Rule {
    static G8: OnceLock<Rule> = OnceLock::new();
    static G10: OnceLock<Rule> = OnceLock::new();
    static G12: OnceLock<Rule> = OnceLock::new();
    static G16: OnceLock<Rule> = OnceLock::new();
    static G20: OnceLock<Rule> = OnceLock::new();
    match n {
        8 => G8.get_or_init(|| gauss_legendre(8)),
        10 => G10.get_or_init(|| gauss_legendre(10)),
        12 => G12.get_or_init(|| gauss_legendre(12)),
        16 => G16.get_or_init(|| gauss_legendre(16)),
        20 => G20.get_or_init(|| gauss_legendre(20)),
        _ => panic!("no cached Gauss rule of order {n}"),
    }
}

/// Rule on [0, 1] graded geometrically toward 0: panels [q^{j+1}, q^j] for j < levels
/// plus the innermost [0, q^levels], each with an `order`-point Gauss rule.
pub fn graded_rule(order: usize, levels: usize, ratio: f64) -> Rule {
    let base = gauss_legendre(order);
    let mut out = Rule::default();
    let mut hi = 1.0;
    for _ in 0..levels {
        let lo = hi * ratio;
        base.push_mapped(lo, hi, &mut out);
        hi = lo;
    }
    base.push_mapped(0.0, hi, &mut out);
    out
}

/// Rule for ∫_a^b g(r) dr where g may behave like a power of r at r = 0.
///
/// Elements touching the origin are graded toward 0; elements with b/a > 2 are split into
/// geometric panels so each panel sees the origin at least one panel width away.
pub fn radial_element_rule(a: f64, b: f64) -> Rule {
    let base = gauss(10);
    let mut out = Rule::default();
    if a <= 0.0 {
        let mut hi = b;
        for _ in 0..80 {
            let lo = 0.25 * hi;
            gauss(16).push_mapped(lo, hi, &mut out);
            hi = lo;
        }
        gauss(8).push_mapped(0.0, hi, &mut out);
    } else if b > 2.0 * a {
        let mut lo = a;
        while lo < b {
            let hi = (2.0 * lo).min(b);
            let hi = if b - hi < 0.25 * (hi - lo) { b } else { hi };
            base.push_mapped(lo, hi, &mut out);
            lo = hi;
        }
    } else {
        base.push_mapped(a, b, &mut out);
    }
    out
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_73,
    0.054_755_896_574_352,
    0.075_039_674_810_919_95,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_85,
    0.134_709_217_311_473_33,
    0.142_775_938_577_060_08,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_36,
    0.295_524_224_714_752_87,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    // largest error first, ties broken by position so the order is deterministic
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn kronrod21(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv = [(0.0, 0.0); 10];
    for j in 0..10 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        fv[j] = (f1, f2);
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv[j].0 - mean).abs() + (fv[j].1 - mean).abs());
    }
    let ah = h.abs();
    let value = res_k * h;
    let res_abs = res_abs * ah;
    let res_asc = res_asc * ah;
    let mut err = ((res_k - res_g) * h).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Panel { a, b, value, error: err }
}

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_panels: usize,
}

impl Tolerance {
    pub const fn rel(rel: f64) -> Self {
        Tolerance {
            abs: 0.0,
            rel,
            max_panels: 4000,
        }
    }

    pub const fn with_abs(self, abs: f64) -> Self {
        Tolerance { abs, ..self }
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
    pub converged: bool,
}

impl Estimate {
    pub fn require(self, operation: &'static str) -> Result<f64> {
        if self.converged && self.value.is_finite() {
            Ok(self.value)
        } else {
            Err(Error::QuadratureNonConvergence {
                operation,
                estimate: self.value,
                error: self.error,
            })
        }
    }
}

/// Globally adaptive 21-point Gauss–Kronrod integration over consecutive breakpoints.
///
/// Panels are bisected largest-error first until the summed error estimate meets
/// `max(tol.abs, tol.rel·|I|)` or `tol.max_panels` is reached. Integrable power-type
/// singularities at breakpoints are handled by repeated bisection.
pub fn integrate(f: impl Fn(f64) -> f64, breaks: &[f64], tol: Tolerance) -> Estimate {
    let mut heap = BinaryHeap::new();
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            heap.push(kronrod21(&f, w[0], w[1]));
        }
    }
    let total = |heap: &BinaryHeap<Panel>| -> (f64, f64) {
        let mut p: Vec<&Panel> = heap.iter().collect();
        p.sort_by(|x, y| x.a.total_cmp(&y.a));
        p.iter().fold((0.0, 0.0), |(v, e), q| (v + q.value, e + q.error))
    };
    let (mut value, mut error) = total(&heap);
    loop {
        let target = tol.abs.max(tol.rel * value.abs());
        if error <= target || !value.is_finite() {
            break;
        }
        if heap.len() >= tol.max_panels {
            return Estimate {
                value,
                error,
                panels: heap.len(),
                converged: false,
            };
        }
        let worst = heap.pop().expect("non-empty panel heap");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // panel cannot be split further in floating point
            heap.push(Panel { error: 0.0, ..worst });
            let (v, e) = total(&heap);
            value = v;
            error = e;
            continue;
        }
        let left = kronrod21(&f, worst.a, mid);
        let right = kronrod21(&f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if heap.len() % 64 == 0 {
            // re-sum to keep incremental rounding from drifting
            let (v, e) = total(&heap);
            value = v;
            error = e;
        }
    }
    let (value, error) = total(&heap);
    Estimate {
        value,
        error,
        panels: heap.len(),
        converged: error <= tol.abs.max(tol.rel * value.abs()) || error == 0.0,
    }
}

/// Breakpoints 0 < ε/4 < ε/2 < ε < 2ε < … < `end`, clustering toward `0`.
/// Breakpoints `start`, `start + first`, `start + 2·first`, `start + 4·first`, …, `end`.
pub fn geometric_breaks(start: f64, end: f64, first: f64) -> Vec<f64> {
    let mut out = vec![start];
    let mut x = first;
    while start + x < end {
        out.push(start + x);
        x *= 2.0;
    }
    out.push(end);
    out
}

/// Points `lo, lo·ratio, lo·ratio², …` up to and including `hi`, for 0 < lo < hi, ratio > 1.
pub fn log_breaks(lo: f64, hi: f64, ratio: f64) -> Vec<f64> {
    let mut out = vec![lo];
    let mut x = lo * ratio;
    while x < hi {
        out.push(x);
        x *= ratio;
    }
    out.push(hi);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_rules_integrate_polynomials_exactly() {
        for n in [1, 2, 5, 8, 10, 20] {
            let r = gauss_legendre(n);
            for p in 0..(2 * n) {
                let exact = if p % 2 == 0 { 2.0 / (p as f64 + 1.0) } else { 0.0 };
                let v = r.integrate(|x| x.powi(p as i32));
                assert!((v - exact).abs() < 1e-14, "n={n}, p={p}: {v}");
            }
        }
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        // ∫_0^1 x^{-0.7} dx = 1/0.3
        let e = integrate(|x| x.powf(-0.7), &[0.0, 1.0], Tolerance::rel(1e-10));
        assert!(e.converged);
        assert!((e.value - 1.0 / 0.3).abs() < 1e-8);
    }

    #[test]
    fn adaptive_smooth_is_accurate() {
        let e = integrate(|x| x.sin(), &[0.0, std::f64::consts::PI], Tolerance::rel(1e-13));
        assert!((e.value - 2.0).abs() < 1e-13);
    }

    #[test]
    fn graded_rule_power_singularity() {
        let r = graded_rule(12, 40, 0.25);
        let v = r.integrate(|x| x.powf(-0.4));
        assert!((v - 1.0 / 0.6).abs() < 1e-9);
    }

    #[test]
    fn radial_rule_powers() {
        for (a, b) in [(0.0_f64, 0.3_f64), (1e-6, 1e-3), (0.2, 0.3)] {
            let p: f64 = -0.7;
            let exact = (b.powf(p + 1.0) - a.powf(p + 1.0)) / (p + 1.0);
            let v = radial_element_rule(a, b).integrate(|x| x.powf(p));
            assert!((v - exact).abs() < 1e-10 * exact.abs(), "[{a},{b}]: {v} vs {exact}");
        }
    }
}
