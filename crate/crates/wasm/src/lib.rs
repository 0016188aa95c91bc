//! Browser bindings: the closed-form constants, the two summability curves and a small
//! radial solve, each returning plain numbers or typed arrays to JavaScript.

use wasm_bindgen::prelude::*;

use fhl_core::params::{coupling, critical_exponent, curve_comparison, hardy_constant, normalization_constant};
use fhl_core::{assemble, solve_linear_direct, FracParams, RadialFunction, RadialGrid};

// Errors stay strings until the export boundary, since `JsError` only exists on wasm.
type Outcome<T> = Result<T, String>;

fn js(e: fhl_core::Error) -> String {
    e.to_string()
}

fn params(n: u32, s: f64) -> Outcome<FracParams> {
    FracParams::new(n, s).map_err(js)
}

#[wasm_bindgen]
pub struct Constants {
    pub lambda_max: f64,
    pub normalization: f64,
    pub m_left: f64,
    pub m_right: f64,
    pub lambda: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub gamma_bar: f64,
    pub critical_exponent: f64,
}

/// Λ and friends for λ = `lambda_frac`·Λ, with `lambda_frac` in (0, 1].
#[wasm_bindgen]
pub fn constants(n: u32, s: f64, lambda_frac: f64) -> Result<Constants, JsError> {
    constants_of(n, s, lambda_frac).map_err(|e| JsError::new(&e))
}

fn constants_of(n: u32, s: f64, lambda_frac: f64) -> Outcome<Constants> {
    let p = params(n, s)?;
    let big = hardy_constant(&p);
    let lambda = lambda_frac * big;
    let c = coupling(&p, lambda).map_err(js)?;
    Ok(Constants {
        lambda_max: big,
        normalization: normalization_constant(&p),
        m_left: p.m_left(),
        m_right: p.m_right(),
        lambda,
        alpha: c.alpha,
        gamma: c.gamma,
        gamma_bar: c.gamma_bar,
        critical_exponent: critical_exponent(&p, lambda).map_err(js)?,
    })
}

#[wasm_bindgen]
pub struct Curves {
    m: Vec<f64>,
    j: Vec<f64>,
    p: Vec<f64>,
    pub consistent: bool,
}

#[wasm_bindgen]
impl Curves {
    #[wasm_bindgen(getter)]
    pub fn m(&self) -> Vec<f64> {
        self.m.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn j(&self) -> Vec<f64> {
        self.j.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn p(&self) -> Vec<f64> {
        self.p.clone()
    }
}

/// J_s(m) and P_s(m) on `points` equispaced m in [m_left, m_right).
#[wasm_bindgen]
pub fn curves(n: u32, s: f64, points: usize) -> Result<Curves, JsError> {
    curves_of(n, s, points).map_err(|e| JsError::new(&e))
}

fn curves_of(n: u32, s: f64, points: usize) -> Outcome<Curves> {
    let p = params(n, s)?;
    if points < 2 {
        return Err("need at least 2 points".into());
    }
    let (lo, hi) = (p.m_left(), p.m_right());
    let grid: Vec<f64> = (0..points).map(|i| lo + (hi - lo) * i as f64 / points as f64).collect();
    let cmp = curve_comparison(&p, &grid).map_err(js)?;
    Ok(Curves {
        m: cmp.points.iter().map(|q| q.m).collect(),
        j: cmp.points.iter().map(|q| q.j).collect(),
        p: cmp.points.iter().map(|q| q.p).collect(),
        consistent: cmp.is_consistent(),
    })
}

#[wasm_bindgen]
pub struct Profile {
    r: Vec<f64>,
    u: Vec<f64>,
    pub gamma: f64,
    pub blowup_fit: f64,
}

#[wasm_bindgen]
impl Profile {
    #[wasm_bindgen(getter)]
    pub fn r(&self) -> Vec<f64> {
        self.r.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn u(&self) -> Vec<f64> {
        self.u.clone()
    }
}

/// Solves the radial problem with f ≡ 1 and λ = `lambda_frac`·Λ below Λ on a graded mesh.
#[wasm_bindgen]
pub fn solve_profile(n: u32, s: f64, lambda_frac: f64, elements: usize) -> Result<Profile, JsError> {
    solve_profile_of(n, s, lambda_frac, elements).map_err(|e| JsError::new(&e))
}

fn solve_profile_of(n: u32, s: f64, lambda_frac: f64, elements: usize) -> Outcome<Profile> {
    let p = params(n, s)?;
    if !(lambda_frac > 0.0 && lambda_frac < 1.0) {
        return Err("lambda_frac must lie in (0, 1)".into());
    }
    if !(16..=256).contains(&elements) {
        return Err("elements must lie in 16..=256".into());
    }
    let lambda = lambda_frac * hardy_constant(&p);
    let grid = RadialGrid::new(elements, 3.0).map_err(js)?;
    let op = assemble(&p, &grid, None).map_err(js)?;
    let rep = solve_linear_direct(&op, lambda, &RadialFunction::power(1.0, 0.0)).map_err(js)?;
    Ok(Profile {
        r: rep.field.nodes().to_vec(),
        u: rep.field.values().to_vec(),
        gamma: coupling(&p, lambda).map_err(js)?.gamma,
        blowup_fit: rep.blowup_exponent.unwrap_or(f64::NAN),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_profile_tracks_gamma() {
        let pr = solve_profile_of(3, 0.5, 0.5, 64).unwrap();
        assert_eq!(pr.r.len(), 65);
        assert!((pr.blowup_fit - pr.gamma).abs() < 0.1 * pr.gamma);
    }

    #[test]
    fn curves_start_at_the_hardy_constant() {
        let c = curves_of(3, 0.5, 8).unwrap();
        assert!(c.consistent);
        assert!((c.j[0] - 2.0 / std::f64::consts::PI).abs() < 1e-12);
        let k = constants_of(3, 0.5, 1.0).unwrap();
        assert!((k.gamma - 1.0).abs() < 1e-6);
        assert!(constants_of(3, 0.5, 0.0).is_err());
    }
}
