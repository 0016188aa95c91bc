//! Radial profiles g(r), r ≥ 0, standing for the function x ↦ g(|x|) on ℝ^N.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// One term `coef · r^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTerm {
    pub coef: f64,
    pub exponent: f64,
}

/// Continuous piecewise-linear profile on nodes `0 = r_0 < … < r_M = 1`, zero for r ≥ 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledProfile {
    nodes: Vec<f64>,
    values: Vec<f64>,
}

impl SampledProfile {
    pub fn new(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 || nodes.len() != values.len() {
            return Err(Error::domain(
                "SampledProfile",
                format!("need matching node/value arrays of length >= 2 (got {} and {})", nodes.len(), values.len()),
            ));
        }
        if nodes[0] != 0.0 || *nodes.last().expect("non-empty") != 1.0 {
            return Err(Error::domain("SampledProfile", "nodes must run from 0 to 1"));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain("SampledProfile", "nodes must be strictly increasing"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("SampledProfile", "values must be finite"));
        }
        if *values.last().expect("non-empty") != 0.0 {
            return Err(Error::domain("SampledProfile", "exterior-zero profile must vanish at r = 1"));
        }
        Ok(SampledProfile { nodes, values })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of elements.
    pub fn elements(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Slope on element `e`.
    pub fn slope(&self, e: usize) -> f64 {
        (self.values[e + 1] - self.values[e]) / (self.nodes[e + 1] - self.nodes[e])
    }

    /// Value at r, known to lie in element `e`.
    pub fn eval_in(&self, e: usize, r: f64) -> f64 {
        self.values[e] + self.slope(e) * (r - self.nodes[e])
    }

    pub fn eval(&self, r: f64) -> f64 {
        if !(r >= 0.0) || r >= 1.0 {
            return 0.0;
        }
        let k = self.nodes.partition_point(|&x| x <= r).clamp(1, self.nodes.len() - 1);
        self.eval_in(k - 1, r)
    }
}

/// Profile given by a closure.
#[derive(Clone)]
pub struct CustomProfile {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    exterior_zero: bool,
    breaks: Vec<f64>,
}

impl fmt::Debug for CustomProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomProfile")
            .field("exterior_zero", &self.exterior_zero)
            .field("breaks", &self.breaks)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub enum RadialFunction {
    /// Σ c_k r^{p_k} on (0, ∞).
    Powers(Vec<PowerTerm>),
    Sampled(SampledProfile),
    Custom(CustomProfile),
}

impl RadialFunction {
    pub fn power(coef: f64, exponent: f64) -> Self {
        RadialFunction::Powers(vec![PowerTerm { coef, exponent }])
    }

    pub fn powers(terms: &[(f64, f64)]) -> Self {
        RadialFunction::Powers(
            terms
                .iter()
                .map(|&(coef, exponent)| PowerTerm { coef, exponent })
                .collect(),
        )
    }

    pub fn sampled(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Ok(RadialFunction::Sampled(SampledProfile::new(nodes, values)?))
    }

    /// Closure profile. For `exterior_zero` profiles the closure is only called on [0, 1)
    /// and the profile is taken to be 0 beyond. `breaks` lists points in (0, 1) where g
    /// is not smooth.
    pub fn custom(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        exterior_zero: bool,
        breaks: Vec<f64>,
    ) -> Self {
        RadialFunction::Custom(CustomProfile {
            f: Arc::new(f),
            exterior_zero,
            breaks,
        })
    }

    pub fn is_exterior_zero(&self) -> bool {
        match self {
            RadialFunction::Powers(_) => false,
            RadialFunction::Sampled(_) => true,
            RadialFunction::Custom(c) => c.exterior_zero,
        }
    }

    /// Points in (0, 1] where g may have a kink.
    pub fn kinks(&self) -> Vec<f64> {
        match self {
            RadialFunction::Powers(_) => Vec::new(),
            RadialFunction::Sampled(s) => s.nodes[1..].to_vec(),
            RadialFunction::Custom(c) => {
                let mut k: Vec<f64> = c.breaks.iter().copied().filter(|&b| b > 0.0 && b < 1.0).collect();
                if c.exterior_zero {
                    k.push(1.0);
                }
                k
            }
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        match self {
            RadialFunction::Powers(t) => t.iter().map(|t| t.coef * r.powf(t.exponent)).sum(),
            RadialFunction::Sampled(s) => s.eval(r),
            RadialFunction::Custom(c) => {
                if c.exterior_zero && r >= 1.0 {
                    0.0
                } else {
                    (c.f)(r)
                }
            }
        }
    }

    /// `self` multiplied by a constant.
    pub fn scaled(&self, c: f64) -> Self {
        match self {
            RadialFunction::Powers(t) => RadialFunction::Powers(
                t.iter()
                    .map(|t| PowerTerm {
                        coef: c * t.coef,
                        exponent: t.exponent,
                    })
                    .collect(),
            ),
            RadialFunction::Sampled(s) => RadialFunction::Sampled(SampledProfile {
                nodes: s.nodes.clone(),
                values: s.values.iter().map(|v| c * v).collect(),
            }),
            RadialFunction::Custom(p) => {
                let f = Arc::clone(&p.f);
                RadialFunction::Custom(CustomProfile {
                    f: Arc::new(move |r| c * f(r)),
                    exterior_zero: p.exterior_zero,
                    breaks: p.breaks.clone(),
                })
            }
        }
    }
}
