//! Graded radial meshes on [0, 1] and piecewise-linear fields on them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pairs::element_rule;
use crate::params::FracParams;
use crate::profile::RadialFunction;

/// Nodes `r_i = (i/M)^g`, i = 0..M.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialGrid {
    elements: usize,
    grading: f64,
    nodes: Vec<f64>,
}

impl RadialGrid {
    pub fn new(elements: usize, grading: f64) -> Result<Self> {
        if elements < 16 {
            return Err(Error::domain("build_grid", format!("M = {elements} must be at least 16")));
        }
        if !(1.0..=6.0).contains(&grading) {
            return Err(Error::domain("build_grid", format!("grading = {grading} outside [1, 6]")));
        }
        let m = elements as f64;
        let mut nodes: Vec<f64> = (0..=elements).map(|i| (i as f64 / m).powf(grading)).collect();
        nodes[elements] = 1.0;
        Ok(RadialGrid {
            elements,
            grading,
            nodes,
        })
    }

    /// Same grading with twice the elements; the old nodes are a subset of the new ones.
    pub fn refined(&self) -> Result<Self> {
        RadialGrid::new(2 * self.elements, self.grading)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Number of elements M; the unknowns are the values at r_0..r_{M−1}.
    pub fn elements(&self) -> usize {
        self.elements
    }

    pub fn grading(&self) -> f64 {
        self.grading
    }

    pub fn element(&self, e: usize) -> (f64, f64) {
        (self.nodes[e], self.nodes[e + 1])
    }
}

/// A continuous piecewise-linear function on a [`RadialGrid`], zero at r = 1 and beyond.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialField {
    grid: RadialGrid,
    values: Vec<f64>,
}

impl RadialField {
    pub fn new(grid: RadialGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.nodes.len() {
            return Err(Error::domain(
                "RadialField",
                format!("{} values for {} nodes", values.len(), grid.nodes.len()),
            ));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::domain("RadialField", format!("value at node {i} is not finite")));
        }
        if values[grid.elements] != 0.0 {
            return Err(Error::domain("RadialField", "value at r = 1 must be 0"));
        }
        Ok(RadialField { grid, values })
    }

    /// Field from the M interior unknowns, with the Dirichlet value appended.
    pub fn from_unknowns(grid: RadialGrid, unknowns: &[f64]) -> Result<Self> {
        let mut values = unknowns.to_vec();
        values.push(0.0);
        RadialField::new(grid, values)
    }

    /// Nodal interpolant of `f`; the value at r = 1 is forced to zero.
    pub fn interpolate(grid: RadialGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let mut values: Vec<f64> = grid.nodes.iter().map(|&r| f(r)).collect();
        values[grid.elements] = 0.0;
        RadialField::new(grid, values)
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn nodes(&self) -> &[f64] {
        &self.grid.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn unknowns(&self) -> &[f64] {
        &self.values[..self.grid.elements]
    }

    pub fn eval_in(&self, e: usize, r: f64) -> f64 {
        let (a, b) = self.grid.element(e);
        let t = (r - a) / (b - a);
        self.values[e] * (1.0 - t) + self.values[e + 1] * t
    }

    pub fn eval(&self, r: f64) -> f64 {
        if !(r < 1.0) {
            return 0.0;
        }
        let e = self.grid.nodes.partition_point(|&x| x <= r).saturating_sub(1);
        self.eval_in(e.min(self.grid.elements - 1), r)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Nodal map `u_i ↦ f(r_i, u_i)`, keeping the zero at r = 1.
    pub fn map(&self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let values = self.grid.nodes.iter().zip(&self.values).map(|(&r, &u)| f(r, u)).collect();
        let mut out = RadialField {
            grid: self.grid.clone(),
            values,
        };
        out.values[self.grid.elements] = 0.0;
        RadialField::new(out.grid, out.values)
    }

    pub fn scaled(&self, c: f64) -> Self {
        RadialField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    /// The same nodal data as a profile for the seminorm routines.
    pub fn to_profile(&self) -> RadialFunction {
        RadialFunction::sampled(self.grid.nodes.clone(), self.values.clone()).expect("grid invariants match the profile's")
    }
}

/// `(ω_{N−1} ∫_0^1 |u|^q r^{N−1−w} dr)^{1/q}` for the piecewise-linear field.
pub fn lq_norm(p: &FracParams, field: &RadialField, q: f64, weight_exponent: f64) -> Result<f64> {
    if !(q >= 1.0) || !q.is_finite() {
        return Err(Error::domain("lq_norm", format!("q = {q} must be >= 1")));
    }
    let c = p.nf() - 1.0 - weight_exponent;
    if !(c > -1.0) {
        return Err(Error::domain(
            "lq_norm",
            format!("weight r^{{{c}}} is not integrable at the origin"),
        ));
    }
    let grid = field.grid();
    let mut acc = 0.0;
    for e in 0..grid.elements() {
        let (a, b) = grid.element(e);
        if field.values[e] == 0.0 && field.values[e + 1] == 0.0 {
            continue;
        }
        for (r, w) in element_rule(a, b).iter() {
            acc += w * field.eval_in(e, r).abs().powf(q) * r.powf(c);
        }
    }
    Ok((p.sphere_area() * acc).powf(1.0 / q))
}

/// Whether the continuous integral behind [`lq_norm`] would diverge if the field kept the
/// power behaviour fitted on its first eight interior nodes all the way to r = 0.
pub fn lq_extrapolation_diverges(p: &FracParams, field: &RadialField, q: f64, weight_exponent: f64) -> Result<bool> {
    let nodes = field.nodes();
    let window = (nodes[1] * (1.0 - 1e-12), nodes[8] * (1.0 + 1e-12));
    let gamma = fit_blowup(field, window)?;
    Ok(q * gamma.max(0.0) + weight_exponent >= p.nf())
}

/// Negated least-squares slope of ln u against ln r over the nodes inside `window`.
pub fn fit_blowup(field: &RadialField, window: (f64, f64)) -> Result<f64> {
    let (lo, hi) = window;
    if !(lo > 0.0 && lo < hi) {
        return Err(Error::domain("fit_blowup", format!("window ({lo}, {hi}) must satisfy 0 < lo < hi")));
    }
    let mut pts = Vec::new();
    for (&r, &u) in field.nodes().iter().zip(field.values()) {
        if r >= lo && r <= hi {
            if !(u > 0.0) {
                return Err(Error::domain("fit_blowup", format!("nonpositive value {u} at r = {r}")));
            }
            pts.push((r.ln(), u.ln()));
        }
    }
    if pts.len() < 8 {
        return Err(Error::domain(
            "fit_blowup",
            format!("{} nodes inside the window, at least 8 needed", pts.len()),
        ));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok(-sxy / sxx)
}

/// Default fitting window `[max(r_5, 1e−3), 0.1]`.
pub fn default_blowup_window(grid: &RadialGrid) -> (f64, f64) {
    (grid.nodes()[5].max(1e-3), 0.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grading_formula() {
        let g = RadialGrid::new(64, 3.0).unwrap();
        assert!((g.nodes()[1] - (1.0f64 / 64.0).powi(3)).abs() < 1e-20);
        let u = RadialGrid::new(16, 1.0).unwrap();
        assert!(u.nodes().iter().enumerate().all(|(i, &r)| (r - i as f64 / 16.0).abs() < 1e-15));
        assert!(RadialGrid::new(8, 1.0).is_err());
        assert!(RadialGrid::new(32, 7.0).is_err());
    }

    #[test]
    fn refinement_is_nested() {
        let g = RadialGrid::new(32, 2.5).unwrap();
        let f = g.refined().unwrap();
        for (i, &r) in g.nodes().iter().enumerate() {
            assert!((f.nodes()[2 * i] - r).abs() <= 1e-15 * r.max(1e-300));
        }
    }

    #[test]
    fn field_eval_interpolates() {
        let g = RadialGrid::new(16, 1.0).unwrap();
        let f = RadialField::interpolate(g, |r| 1.0 - r).unwrap();
        assert!((f.eval(0.3) - 0.7).abs() < 1e-14);
        assert_eq!(f.eval(1.5), 0.0);
        assert!(RadialField::new(f.grid().clone(), vec![1.0; 17]).is_err());
    }
}
