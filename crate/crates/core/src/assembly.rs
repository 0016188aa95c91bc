//! Galerkin matrices for hat functions on a [`RadialGrid`].
//!
//! The stiffness matrix is `(a_{N,s}/2)` times the double integral of
//! `(φ_i(x)−φ_i(y))(φ_j(x)−φ_j(y))|x−y|^{−N−2s}` over ℝ^N × ℝ^N, split into the pairs of
//! elements inside the ball and the exterior strip. The Hardy matrices are tridiagonal.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::kernel::{AngularKernel, ExteriorTail};
use crate::pairs::{element_rule, PairKernel};
use crate::parallel::par_map;
use crate::params::{normalization_constant, FracParams};
use crate::profile::RadialFunction;

/// Quadrature points of every element with the radial volume factor `ω r^{N−1}` folded
/// into the weights. `left` is the value of the hat of the element's left node.
#[derive(Debug, Clone)]
pub(crate) struct ElementPoints {
    pub r: Vec<f64>,
    pub w: Vec<f64>,
    pub left: Vec<f64>,
}

pub(crate) fn element_points(p: &FracParams, grid: &RadialGrid) -> Vec<ElementPoints> {
    let omega = p.sphere_area();
    let nm1 = p.nf() - 1.0;
    (0..grid.elements())
        .map(|e| {
            let (a, b) = grid.element(e);
            let rule = element_rule(a, b);
            ElementPoints {
                left: rule.nodes.iter().map(|&r| (b - r) / (b - a)).collect(),
                w: rule.iter().map(|(r, w)| omega * w * r.powf(nm1)).collect(),
                r: rule.nodes,
            }
        })
        .collect()
}

/// Symmetric tridiagonal matrix over the M unknowns.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl Tridiagonal {
    pub fn mul(&self, x: &DVector<f64>) -> DVector<f64> {
        let n = self.diag.len();
        let mut y = DVector::zeros(n);
        for i in 0..n {
            let mut v = self.diag[i] * x[i];
            if i > 0 {
                v += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                v += self.off[i] * x[i + 1];
            }
            y[i] = v;
        }
        y
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.diag.len();
        DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                self.diag[i]
            } else if i + 1 == j {
                self.off[i]
            } else if j + 1 == i {
                self.off[j]
            } else {
                0.0
            }
        })
    }
}

/// Mass-type matrix `ω∫ φ_iφ_j ρ(r) r^{N−1} dr`; `density` receives r.
fn weighted_mass(points: &[ElementPoints], density: impl Fn(f64) -> f64) -> Tridiagonal {
    let m = points.len();
    let mut diag = vec![0.0; m + 1];
    let mut off = vec![0.0; m];
    for (e, pts) in points.iter().enumerate() {
        let (mut ll, mut lr, mut rr) = (0.0, 0.0, 0.0);
        for i in 0..pts.r.len() {
            let w = pts.w[i] * density(pts.r[i]);
            let l = pts.left[i];
            let rt = 1.0 - l;
            ll += w * l * l;
            lr += w * l * rt;
            rr += w * rt * rt;
        }
        diag[e] += ll;
        diag[e + 1] += rr;
        off[e] += lr;
    }
    diag.truncate(m);
    off.truncate(m - 1);
    Tridiagonal { diag, off }
}

/// Regularization level of the Hardy weight: `Some(k)` gives `1/(r^{2s} + 1/k)`, `None`
/// the exact `r^{−2s}`.
pub type HardyLevel = Option<f64>;

/// Assembled forms on one grid. Immutable after [`assemble`].
#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    params: FracParams,
    grid: RadialGrid,
    stiffness: DMatrix<f64>,
    hardy: Tridiagonal,
    level: HardyLevel,
    points: Vec<ElementPoints>,
}

/// Assemble the stiffness matrix and the Hardy matrix at `level`.
pub fn assemble(p: &FracParams, grid: &RadialGrid, level: HardyLevel) -> Result<DiscreteOperator> {
    if let Some(k) = level {
        if !(k > 0.0) {
            return Err(Error::domain("assemble", format!("regularization level k = {k} must be positive")));
        }
    }
    let stiffness = stiffness_matrix(p, grid)?;
    let points = element_points(p, grid);
    let hardy = hardy_from_points(p, &points, level);
    Ok(DiscreteOperator {
        params: *p,
        grid: grid.clone(),
        stiffness,
        hardy,
        level,
        points,
    })
}

fn hardy_from_points(p: &FracParams, points: &[ElementPoints], level: HardyLevel) -> Tridiagonal {
    let two_s = 2.0 * p.s();
    match level {
        None => weighted_mass(points, |r| r.powf(-two_s)),
        // r^{−2s}/(1 + r^{−2s}/k) avoids 1/k + r^{2s} losing r^{2s} at tiny r
        Some(k) => weighted_mass(points, |r| {
            let w = r.powf(-two_s);
            w / (1.0 + w / k)
        }),
    }
}

fn stiffness_matrix(p: &FracParams, grid: &RadialGrid) -> Result<DMatrix<f64>> {
    let kappa = 2.0 * p.s();
    let kernel = AngularKernel::shared(p, kappa)?;
    let tail = ExteriorTail::new(kernel.clone(), 0.0)?;
    let pk = PairKernel::new(kernel, 0.0, 2.0);
    let x = grid.nodes();
    let m = grid.elements();

    // Row e holds the blocks of the pairs (e, f ≥ e) and the exterior block of e.
    let rows = par_map(m, |e| {
        let (a, b) = (x[e], x[e + 1]);
        let he = b - a;
        let mut blocks: Vec<([usize; 4], usize, [[f64; 4]; 4])> = Vec::with_capacity(m - e + 1);
        for f in e..m {
            let (c, d) = (x[f], x[f + 1]);
            let hf = d - c;
            let mut loc = [[0.0; 4]; 4];
            // local node list and the differences φ(r) − φ(ρ) of their hats
            let (idx, len) = if f == e {
                ([e, e + 1, 0, 0], 2)
            } else if f == e + 1 {
                ([e, e + 1, e + 2, 0], 3)
            } else {
                ([e, e + 1, f, f + 1], 4)
            };
            let mut diff = [0.0; 4];
            pk.visit((a, b), (c, d), &mut |pt| {
                if f == e {
                    let t = pt.dr / he;
                    diff[0] = -t;
                    diff[1] = t;
                } else if f == e + 1 {
                    // r = b − u, ρ = b + v
                    let u = b - pt.r;
                    let v = pt.rho - b;
                    diff[0] = u / he;
                    diff[1] = v / hf - u / he;
                    diff[2] = -v / hf;
                } else {
                    let lr = (b - pt.r) / he;
                    let lrho = (d - pt.rho) / hf;
                    diff[0] = lr;
                    diff[1] = 1.0 - lr;
                    diff[2] = -lrho;
                    diff[3] = -(1.0 - lrho);
                }
                for i in 0..len {
                    let wi = pt.w * diff[i];
                    for j in 0..len {
                        loc[i][j] += wi * diff[j];
                    }
                }
            });
            let mult = if f == e { 1.0 } else { 2.0 };
            for row in loc.iter_mut() {
                for v in row.iter_mut() {
                    *v *= mult;
                }
            }
            blocks.push((idx, len, loc));
        }
        // exterior strip: both orderings of (inside, outside) give 2∫ φ_iφ_j κ_ext dr
        let mut ext = [[0.0; 4]; 4];
        for (r, w) in element_rule(a, b).iter() {
            let l = (b - r) / he;
            let phi = [l, 1.0 - l];
            let k = w * tail.value(r);
            for i in 0..2 {
                for j in 0..2 {
                    ext[i][j] += 2.0 * k * phi[i] * phi[j];
                }
            }
        }
        blocks.push(([e, e + 1, 0, 0], 2, ext));
        blocks
    });

    let half_a = 0.5 * normalization_constant(p);
    let mut mat = DMatrix::zeros(m, m);
    for blocks in rows {
        for (idx, len, loc) in blocks {
            for i in 0..len {
                if idx[i] >= m {
                    continue;
                }
                for j in 0..len {
                    if idx[j] >= m {
                        continue;
                    }
                    mat[(idx[i], idx[j])] += half_a * loc[i][j];
                }
            }
        }
    }
    if let Some(pos) = mat.iter().position(|v: &f64| !v.is_finite()) {
        return Err(Error::domain(
            "assemble",
            format!("stiffness entry ({}, {}) is not finite", pos % m, pos / m),
        ));
    }
    // the pair sums are symmetric up to rounding; make it exact
    let sym = 0.5 * (&mat + mat.transpose());
    Ok(sym)
}

impl DiscreteOperator {
    pub fn params(&self) -> &FracParams {
        &self.params
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn stiffness(&self) -> &DMatrix<f64> {
        &self.stiffness
    }

    /// The Hardy matrix at the assembled level.
    pub fn hardy(&self) -> &Tridiagonal {
        &self.hardy
    }

    pub fn level(&self) -> HardyLevel {
        self.level
    }

    /// The Hardy matrix at another level, reusing the element quadrature.
    pub fn hardy_at(&self, level: HardyLevel) -> Tridiagonal {
        hardy_from_points(&self.params, &self.points, level)
    }

    pub(crate) fn points(&self) -> &[ElementPoints] {
        &self.points
    }

    /// `F_i = ω∫ ρ φ_i r^{N−1} dr` with the density given as `density(e, r, left)`, where
    /// `left` is the value at r of the hat of element e's left node.
    pub(crate) fn load_with(&self, density: impl Fn(usize, f64, f64) -> f64) -> DVector<f64> {
        let m = self.grid.elements();
        let mut out = DVector::zeros(m + 1);
        for (e, pts) in self.points.iter().enumerate() {
            let (mut fl, mut fr) = (0.0, 0.0);
            for i in 0..pts.r.len() {
                let l = pts.left[i];
                let v = pts.w[i] * density(e, pts.r[i], l);
                fl += v * l;
                fr += v * (1.0 - l);
            }
            out[e] += fl;
            out[e + 1] += fr;
        }
        out.rows(0, m).into_owned()
    }

    /// Load vector of `min(f, cap)`; `cap = None` leaves f untruncated.
    pub fn load(&self, f: &RadialFunction, cap: Option<f64>) -> DVector<f64> {
        match cap {
            None => self.load_with(|_, r, _| f.eval(r)),
            Some(c) => self.load_with(|_, r, _| f.eval(r).min(c)),
        }
    }

    /// `xᵀ A x` for nodal unknowns x.
    pub fn energy(&self, x: &DVector<f64>) -> f64 {
        x.dot(&(&self.stiffness * x))
    }

    /// Smallest generalized eigenvalue of (A, H_∞), the discrete Hardy constant of the mesh.
    pub fn rayleigh_min(&self) -> Result<f64> {
        let h = self.hardy_at(None).to_dense();
        let chol = Cholesky::new(h).ok_or(Error::Domain {
            operation: "rayleigh_min",
            detail: "Hardy matrix is not positive definite".into(),
        })?;
        let l = chol.l();
        let x = l
            .solve_lower_triangular(&self.stiffness)
            .ok_or_else(|| Error::domain("rayleigh_min", "singular Cholesky factor"))?;
        let c = l
            .solve_lower_triangular(&x.transpose())
            .ok_or_else(|| Error::domain("rayleigh_min", "singular Cholesky factor"))?;
        let c = 0.5 * (&c + c.transpose());
        let eig = SymmetricEigen::new(c);
        Ok(eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min))
    }
}
