//! The angular kernel
//!
//! `D_κ(τ) = [2π^{(N−1)/2}/Γ((N−1)/2)] ∫_0^π sin^{N−2}θ (1 − 2τ cosθ + τ²)^{−(N+κ)/2} dθ`,
//! which is the sphere average `∫_{S^{N−1}} |e − τy′|^{−N−κ} dσ(y′)` that appears when a
//! kernel `|x − y|^{−N−κ}` is integrated over the angular variables of x and y.
//!
//! Near τ = 1 it blows up like `(1−τ)^{−1−κ}`. [`AngularKernel`] tabulates the regular
//! factor `E(x) = D_κ(τ)(1−τ)^{1+κ}` on a grid uniform in `x = ln(1−τ)` and serves
//! values for τ > 1 through `D(1/τ) = τ^{N+κ} D(τ)`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::parallel::par_map;
use crate::params::FracParams;
use crate::quadrature::{gauss, integrate, radial_element_rule, Tolerance};
use crate::specfun::gamma;

/// Smallest `1−τ` kept in the table; below it E is frozen at its last value.
pub const TABLE_FLOOR: f64 = 1e-12;
const TABLE_NODES: usize = 4097;

/// Cubic Hermite interpolant on a uniform grid, with fourth-order finite-difference slopes
/// passed through the Fritsch–Carlson limiter. Arguments outside the grid are clamped.
#[derive(Debug, Clone)]
pub struct UniformTable {
    x0: f64,
    dx: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl UniformTable {
    pub fn new(x0: f64, dx: f64, values: Vec<f64>) -> Self {
        let n = values.len();
        assert!(n >= 5, "table needs at least five nodes");
        let y = &values;
        let mut d = vec![0.0; n];
        for i in 0..n {
            d[i] = if i >= 2 && i + 2 < n {
                (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]) / (12.0 * dx)
            } else if i < 2 {
                let j = i;
                // one-sided fourth order
                match j {
                    0 => (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) / (12.0 * dx),
                    _ => (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]) / (12.0 * dx),
                }
            } else if i == n - 2 {
                (3.0 * y[n - 1] + 10.0 * y[n - 2] - 18.0 * y[n - 3] + 6.0 * y[n - 4] - y[n - 5]) / (12.0 * dx)
            } else {
                (25.0 * y[n - 1] - 48.0 * y[n - 2] + 36.0 * y[n - 3] - 16.0 * y[n - 4] + 3.0 * y[n - 5])
                    / (12.0 * dx)
            };
        }
        let delta: Vec<f64> = y.windows(2).map(|w| (w[1] - w[0]) / dx).collect();
        for k in 1..n - 1 {
            if delta[k - 1] * delta[k] <= 0.0 {
                d[k] = 0.0;
            }
        }
        for k in 0..n - 1 {
            let dk = delta[k];
            if dk == 0.0 {
                d[k] = 0.0;
                d[k + 1] = 0.0;
                continue;
            }
            let mut a = d[k] / dk;
            let mut b = d[k + 1] / dk;
            if a < 0.0 {
                d[k] = 0.0;
                a = 0.0;
            }
            if b < 0.0 {
                d[k + 1] = 0.0;
                b = 0.0;
            }
            let r2 = a * a + b * b;
            if r2 > 9.0 {
                let t = 3.0 / r2.sqrt();
                d[k] = t * a * dk;
                d[k + 1] = t * b * dk;
            }
        }
        UniformTable {
            x0,
            dx,
            values,
            slopes: d,
        }
    }

    pub fn x_range(&self) -> (f64, f64) {
        (self.x0, self.x0 + self.dx * (self.values.len() - 1) as f64)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.x0 + self.dx * i as f64, v))
    }

    pub fn eval(&self, x: f64) -> f64 {
        let last = self.values.len() - 1;
        let u = (x - self.x0) / self.dx;
        if u <= 0.0 {
            return self.values[0];
        }
        if u >= last as f64 {
            return self.values[last];
        }
        let i = (u as usize).min(last - 1);
        let t = u - i as f64;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (d0, d1) = (self.slopes[i] * self.dx, self.slopes[i + 1] * self.dx);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * d0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * d1
    }
}

fn sphere_slice_constant(n: f64) -> f64 {
    // ω_{N−2} = 2π^{(N−1)/2}/Γ((N−1)/2); N ≥ 2 keeps the argument positive
    2.0 * PI.powf(0.5 * (n - 1.0)) / gamma(0.5 * (n - 1.0)).expect("N >= 2")
}

/// `gap` is |1 − τ|, passed separately so that it keeps full relative precision near τ = 1.
fn kernel_quadrature(n: u32, kappa: f64, tau: f64, gap: f64, tol: Tolerance) -> Result<f64> {
    let nf = f64::from(n);
    let m = 0.5 * (nf + kappa);
    let pow = n as i32 - 2;
    let gap2 = gap * gap;
    let integrand = |theta: f64| {
        let h = (0.5 * theta).sin();
        // 1 − 2τcosθ + τ² written without cancellation near θ = 0, τ = 1
        let den = gap2 + 4.0 * tau * h * h;
        theta.sin().powi(pow) * den.powf(-m)
    };
    let scale = gap / tau.sqrt().max(1e-300);
    let mut breaks = vec![0.0];
    let mut b = 0.25 * scale;
    while b < PI {
        breaks.push(b);
        b *= 2.0;
    }
    breaks.push(PI);
    let v = integrate(integrand, &breaks, tol).require("angular_kernel_value")?;
    Ok(sphere_slice_constant(nf) * v)
}

fn check_kappa(kappa: f64) -> Result<()> {
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(Error::domain("angular_kernel", format!("kappa = {kappa} must be positive")));
    }
    Ok(())
}

/// D_κ(τ) by direct adaptive quadrature, for τ > 0, τ ≠ 1.
pub fn angular_kernel_value(p: &FracParams, kappa: f64, tau: f64) -> Result<f64> {
    check_kappa(kappa)?;
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::domain("angular_kernel_value", format!("tau = {tau} must be positive")));
    }
    if tau == 1.0 {
        return Err(Error::Singular);
    }
    kernel_quadrature(p.dim(), kappa, tau, (1.0 - tau).abs(), Tolerance::rel(1e-12))
}

/// Tabulated D_κ for one (N, κ).
#[derive(Debug, Clone)]
pub struct AngularKernel {
    params: FracParams,
    kappa: f64,
    omega: f64,
    regular: UniformTable,
    tolerance: f64,
}

type CacheKey = (u32, u64);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<AngularKernel>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<AngularKernel>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl AngularKernel {
    /// Build the table: one adaptive quadrature per node, relative tolerance 1e-12.
    pub fn new(p: &FracParams, kappa: f64) -> Result<Self> {
        check_kappa(kappa)?;
        let n = p.dim();
        let x0 = TABLE_FLOOR.ln();
        let dx = -x0 / (TABLE_NODES - 1) as f64;
        let omega = p.sphere_area();
        let tol = Tolerance::rel(1e-12);
        let values = par_map(TABLE_NODES, |i| -> Result<f64> {
            if i == TABLE_NODES - 1 {
                return Ok(omega);
            }
            let x = x0 + dx * i as f64;
            let gap = x.exp();
            let tau = -x.exp_m1();
            Ok(kernel_quadrature(n, kappa, tau, gap, tol)? * gap.powf(1.0 + kappa))
        })
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
        Ok(AngularKernel {
            params: *p,
            kappa,
            omega,
            regular: UniformTable::new(x0, dx, values),
            tolerance: 1e-12,
        })
    }

    /// Process-wide shared table for (N, κ); built on first use.
    pub fn shared(p: &FracParams, kappa: f64) -> Result<Arc<Self>> {
        check_kappa(kappa)?;
        let key = (p.dim(), kappa.to_bits());
        if let Some(k) = cache().lock().expect("kernel cache poisoned").get(&key) {
            return Ok(Arc::clone(k));
        }
        let built = Arc::new(AngularKernel::new(p, kappa)?);
        let mut map = cache().lock().expect("kernel cache poisoned");
        Ok(Arc::clone(map.entry(key).or_insert(built)))
    }

    pub fn params(&self) -> &FracParams {
        &self.params
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// ω_{N−1}, which is also D_κ(0).
    pub fn sphere_area(&self) -> f64 {
        self.omega
    }

    /// Relative tolerance used for the table nodes.
    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// E = D_κ(τ)(1−τ)^{1+κ} at x = ln(1−τ) ≤ 0.
    pub fn regular_part(&self, x: f64) -> f64 {
        self.regular.eval(x)
    }

    /// lim_{τ→1} D_κ(τ)(1−τ)^{1+κ}.
    pub fn edge_constant(&self) -> f64 {
        self.regular.eval(f64::NEG_INFINITY)
    }

    /// D_κ(1−ε) for 0 < ε ≤ 1, without forming 1−ε.
    pub fn value_below_one(&self, eps: f64) -> f64 {
        self.regular.eval(eps.ln()) * eps.powf(-1.0 - self.kappa)
    }

    /// Interpolated D_κ(τ).
    pub fn value(&self, tau: f64) -> Result<f64> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::domain("AngularKernel::value", format!("tau = {tau} must be positive")));
        }
        if tau == 1.0 {
            return Err(Error::Singular);
        }
        if tau < 1.0 {
            Ok(self.regular.eval((-tau).ln_1p()) * (1.0 - tau).powf(-1.0 - self.kappa))
        } else {
            // 1 − 1/τ formed as (τ − 1)/τ, which is exact to rounding
            let eps = (tau - 1.0) / tau;
            let nk = self.params.nf() + self.kappa;
            Ok(tau.powf(-nk) * self.value_below_one(eps))
        }
    }

    /// Table nodes as (τ, D_κ(τ)) pairs, τ ascending, for inspection dumps.
    pub fn dump(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = self
            .regular
            .nodes()
            .map(|(x, e)| {
                let tau = -x.exp_m1();
                (tau, e * (-(1.0 + self.kappa) * x).exp())
            })
            .collect();
        out.reverse();
        out
    }
}

/// Exterior contribution `κ_ext(r) = ∫_{ρ>1} k(r, ρ) dρ` for 0 < r < 1, where
/// `k(r,ρ) = ω r^{N−1} ρ^{−1−κ} D_κ(r/ρ) (rρ)^{−γ}` is the radial pair kernel for r < ρ.
///
/// With `W(r) = ∫_0^r t^{κ+γ−1} D_κ(t) dt` one has `κ_ext = ω r^{N−1−κ−2γ} W(r)`. The table
/// holds `R = W r^{−κ−γ} (1−r)^κ`, which stays bounded on [0, 1).
#[derive(Debug, Clone)]
pub struct ExteriorTail {
    kernel: Arc<AngularKernel>,
    gamma: f64,
    table: UniformTable,
}

impl ExteriorTail {
    pub fn new(kernel: Arc<AngularKernel>, gamma: f64) -> Result<Self> {
        let kappa = kernel.kappa();
        if !(gamma >= 0.0) {
            return Err(Error::domain("ExteriorTail", format!("gamma = {gamma} must be >= 0")));
        }
        let (x0, x_end) = kernel.regular.x_range();
        let n = kernel.regular.values.len();
        let dx = (x_end - x0) / (n - 1) as f64;
        let c = kappa + gamma;
        let r_of = |x: f64| -x.exp_m1();
        let mut w = vec![0.0; n];
        // first panel [0, r] with the power weight handled by a graded rule
        let r1 = r_of(x0 + dx * (n - 2) as f64);
        w[n - 2] = radial_element_rule(0.0, r1)
            .integrate(|t| t.powf(c - 1.0) * kernel.regular.eval((-t).ln_1p()) * (1.0 - t).powf(-1.0 - kappa));
        let g = gauss(8);
        for i in (0..n - 2).rev() {
            let (xa, xb) = (x0 + dx * i as f64, x0 + dx * (i + 1) as f64);
            let h = 0.5 * (xb - xa);
            let mid = 0.5 * (xa + xb);
            let mut s = 0.0;
            for (u, wt) in g.iter() {
                let x = mid + h * u;
                s += wt * r_of(x).powf(c - 1.0) * kernel.regular.eval(x) * (-kappa * x).exp();
            }
            w[i] = w[i + 1] + h * s;
        }
        let mut values = vec![0.0; n];
        for i in 0..n - 1 {
            let x = x0 + dx * i as f64;
            values[i] = w[i] * r_of(x).powf(-c) * (kappa * x).exp();
        }
        values[n - 1] = kernel.sphere_area() / c;
        Ok(ExteriorTail {
            table: UniformTable::new(x0, dx, values),
            kernel,
            gamma,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// κ_ext(r) for 0 ≤ r < 1.
    pub fn value(&self, r: f64) -> f64 {
        let p = self.kernel.params();
        let x = (-r).ln_1p();
        self.kernel.sphere_area()
            * r.powf(p.nf() - 1.0 - self.gamma)
            * (-self.kernel.kappa() * x).exp()
            * self.table.eval(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_table_reproduces_cubics_away_from_limiter() {
        let f = |x: f64| 1.0 + 0.1 * x + 0.01 * x * x * x;
        let dx = 0.1;
        let vals: Vec<f64> = (0..40).map(|i| f(dx * i as f64)).collect();
        let t = UniformTable::new(0.0, dx, vals);
        for x in [0.05, 1.234, 3.77] {
            assert!((t.eval(x) - f(x)).abs() < 1e-12);
        }
        assert_eq!(t.eval(-1.0), f(0.0));
    }

    #[test]
    fn table_rejects_bad_arguments() {
        let p = FracParams::new(3, 0.4).unwrap();
        assert!(matches!(angular_kernel_value(&p, 0.8, 1.0), Err(Error::Singular)));
        assert!(angular_kernel_value(&p, 0.8, 0.0).is_err());
        assert!(angular_kernel_value(&p, 0.0, 0.5).is_err());
        let k = AngularKernel::shared(&p, 0.8).unwrap();
        assert!(k.value(-0.5).is_err());
        assert!(matches!(k.value(1.0), Err(Error::Singular)));
    }
}
