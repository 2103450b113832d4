use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::function::{Family, TorusFunction};
use super::radial;
use crate::error::{check_dim, invalid_param, Error, Result};
use crate::exec::Exec;

/// Longest radial panel; short enough to resolve the cutoff's transition.
const BUMP_PANEL: f64 = 0.125;

/// Dyadic radial refinement around the origin.
///
/// Inside `outer` the integrand is split with a smooth cutoff: the part
/// supported near the origin is integrated along rays on Gauss–Legendre
/// panels, the remainder on the uniform grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialRefinement {
    pub levels: usize,
    pub inner: f64,
    pub outer: f64,
    pub order: usize,
}

impl Default for RadialRefinement {
    fn default() -> Self {
        Self {
            levels: 12,
            inner: 0.5,
            outer: 2.5,
            order: 16,
        }
    }
}

/// Midpoint tensor-product rule on `[−π, π)^d`, optionally refined radially.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    d: usize,
    resolution: usize,
    refinement: Option<RadialRefinement>,
    /// Total weight; `(2π)^d` unless rescaled.
    total_measure: f64,
}

/// Function values at quadrature nodes with their weights.
#[derive(Clone, Debug)]
pub struct Discretized {
    pub values: Vec<f64>,
    weights: Weights,
}

#[derive(Clone, Debug)]
enum Weights {
    Uniform(f64),
    PerNode(Vec<f64>),
}

impl Discretized {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn weight(&self, i: usize) -> f64 {
        match &self.weights {
            Weights::Uniform(w) => *w,
            Weights::PerNode(w) => w[i],
        }
    }

    /// `Σ w_i g(v_i)`, summed in a fixed order.
    pub fn integrate(&self, exec: Exec, g: impl Fn(f64) -> f64 + Sync + Send) -> f64 {
        match &self.weights {
            Weights::Uniform(w) => w * exec.sum_range(self.values.len(), |i| g(self.values[i])),
            Weights::PerNode(w) => exec.sum_range(self.values.len(), |i| w[i] * g(self.values[i])),
        }
    }

    pub fn map(&self, g: impl Fn(f64) -> f64) -> Self {
        Self {
            values: self.values.iter().map(|&v| g(v)).collect(),
            weights: self.weights.clone(),
        }
    }

    pub fn total_weight(&self) -> f64 {
        match &self.weights {
            Weights::Uniform(w) => w * self.values.len() as f64,
            Weights::PerNode(w) => w.iter().sum(),
        }
    }
}

impl QuadratureGrid {
    pub fn uniform(d: usize, resolution: usize) -> Result<Self> {
        check_dim(d)?;
        if resolution == 0 {
            return Err(invalid_param("grid resolution must be positive"));
        }
        Ok(Self {
            d,
            resolution,
            refinement: None,
            total_measure: (2.0 * PI).powi(d as i32),
        })
    }

    /// Uniform grid, refined radially when `f` is a radial spike.
    pub fn for_function(f: &TorusFunction, resolution: usize) -> Result<Self> {
        let g = Self::uniform(f.dim(), resolution)?;
        Ok(match f.family() {
            Family::RadialLogspike { .. } => g.with_refinement(RadialRefinement::default()),
            _ => g,
        })
    }

    pub fn with_refinement(mut self, r: RadialRefinement) -> Self {
        self.refinement = Some(r);
        self
    }

    /// Rescales all weights so they sum to `measure` (e.g. 1 for a
    /// probability normalization).
    pub fn with_measure(mut self, measure: f64) -> Result<Self> {
        if !(measure > 0.0 && measure.is_finite()) {
            return Err(invalid_param(format!("measure {measure} must be positive")));
        }
        self.total_measure = measure;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn refinement(&self) -> Option<&RadialRefinement> {
        self.refinement.as_ref()
    }

    pub fn total_measure(&self) -> f64 {
        self.total_measure
    }

    fn measure_scale(&self) -> f64 {
        self.total_measure / (2.0 * PI).powi(self.d as i32)
    }

    /// Sum of all node weights (≈ [`total_measure`](Self::total_measure)).
    pub fn weight_sum(&self) -> Result<f64> {
        let one = TorusFunction::constant(self.d, 1.0)?;
        Ok(self.discretize(&one)?.total_weight())
    }

    /// Point values of `|f|` at the nodes.
    pub fn discretize_abs(&self, f: &TorusFunction) -> Result<Discretized> {
        self.discretize_with(
            f,
            |f, n| {
                let mut out = Vec::with_capacity(n.pow(f.dim() as u32));
                let h = 2.0 * PI / n as f64;
                let mut x = vec![0.0; f.dim()];
                for flat in 0..n.pow(f.dim() as u32) {
                    let mut rem = flat;
                    for axis in (0..f.dim()).rev() {
                        x[axis] = -PI + ((rem % n) as f64 + 0.5) * h;
                        rem /= n;
                    }
                    out.push(f.eval_complex(&x).norm());
                }
                Ok(out)
            },
            |f, r| f.eval_radial(r).abs(),
        )
        .and_then(check)
    }

    /// Values of real `f`, using cell averages for box indicators.
    pub fn discretize(&self, f: &TorusFunction) -> Result<Discretized> {
        self.discretize_with(f, |f, n| f.cell_average_grid(n), |f, r| f.eval_radial(r))
            .and_then(check)
    }

    /// `∫ f` over the grid.
    pub fn integrate(&self, f: &TorusFunction, exec: Exec) -> Result<f64> {
        Ok(self.discretize(f)?.integrate(exec, |v| v))
    }

    /// `(∫ f_+, ∫ f_−)` over the grid.
    pub fn integrate_parts(&self, f: &TorusFunction, exec: Exec) -> Result<(f64, f64)> {
        let disc = self.discretize(f)?;
        Ok((
            disc.integrate(exec, |v| v.max(0.0)),
            disc.integrate(exec, |v| (-v).max(0.0)),
        ))
    }

    fn discretize_with<U, R>(&self, f: &TorusFunction, uniform: U, radial_eval: R) -> Result<Discretized>
    where
        U: Fn(&TorusFunction, usize) -> Result<Vec<f64>>,
        R: Fn(&TorusFunction, f64) -> f64,
    {
        if f.dim() != self.d {
            return Err(invalid_param(format!(
                "grid dimension {} does not match function dimension {}",
                self.d,
                f.dim()
            )));
        }
        let n = self.resolution;
        let h = 2.0 * PI / n as f64;
        let cell = h.powi(self.d as i32) * self.measure_scale();
        let mut values = uniform(f, n)?;
        let Some(refine) = &self.refinement else {
            return Ok(Discretized {
                values,
                weights: Weights::Uniform(cell),
            });
        };
        if !f.is_radial() {
            return Err(Error::InvalidFunction(format!(
                "radial refinement needs a radial function, got {}",
                f.family().name()
            )));
        }
        if !(refine.inner > 0.0 && refine.inner < refine.outer && refine.outer < PI) {
            return Err(invalid_param("refinement radii must satisfy 0 < inner < outer < π"));
        }
        let mut weights = Vec::with_capacity(values.len());
        let mut x = vec![0.0; self.d];
        for flat in 0..values.len() {
            let mut rem = flat;
            for axis in (0..self.d).rev() {
                x[axis] = -PI + ((rem % n) as f64 + 0.5) * h;
                rem /= n;
            }
            let r = x.iter().map(|t| t * t).sum::<f64>().sqrt();
            weights.push(cell * (1.0 - radial::bump(r, refine.inner, refine.outer)));
        }
        let kink = match f.family() {
            Family::RadialLogspike { exponent, cap } => Some(cap.powf(-1.0 / exponent)),
            _ => None,
        };
        let area = radial::sphere_area(self.d) * self.measure_scale();
        for (r, w) in radial::radial_panels(refine.outer, refine.levels, kink, refine.order, BUMP_PANEL) {
            let phi = radial::bump(r, refine.inner, refine.outer);
            if phi == 0.0 {
                continue;
            }
            values.push(radial_eval(f, r));
            weights.push(w * phi * area * r.powi(self.d as i32 - 1));
        }
        Ok(Discretized {
            values,
            weights: Weights::PerNode(weights),
        })
    }
}

fn check(d: Discretized) -> Result<Discretized> {
    match d.values.iter().position(|v| !v.is_finite()) {
        Some(k) => Err(Error::InvalidFunction(format!(
            "node {k} has non-finite value {}",
            d.values[k]
        ))),
        None => Ok(d),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_torus_volume() {
        let spike = TorusFunction::radial_logspike(2, 1.0, 1e6).unwrap();
        for g in [
            QuadratureGrid::uniform(1, 100).unwrap(),
            QuadratureGrid::uniform(3, 16).unwrap(),
            QuadratureGrid::for_function(&spike, 256).unwrap(),
        ] {
            let vol = (2.0 * PI).powi(g.dim() as i32);
            let s = g.weight_sum().unwrap();
            assert!((s - vol).abs() <= 1e-12 * vol, "{g:?}: {s} vs {vol}");
        }
        let unit = QuadratureGrid::uniform(1, 64).unwrap().with_measure(1.0).unwrap();
        assert!((unit.weight_sum().unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn grid_integrals_match_closed_forms() {
        let cases = [
            TorusFunction::shifted_cosine(1, 2.0).unwrap(),
            TorusFunction::constant(3, -0.7).unwrap(),
            TorusFunction::box_indicator(vec![0.0, 0.0], vec![PI, PI]).unwrap(),
            TorusFunction::cosine(2).unwrap(),
        ];
        for f in cases {
            let g = QuadratureGrid::uniform(f.dim(), 256).unwrap();
            let q = g.integrate(&f, Exec::best()).unwrap();
            let e = f.exact_integral().unwrap();
            assert!((q - e).abs() <= 1e-6 * e.abs().max(1.0), "{f}: {q} vs {e}");
        }
    }

    #[test]
    fn refined_spike_integral() {
        let f = TorusFunction::radial_logspike(2, 1.0, 1e6).unwrap();
        let g = QuadratureGrid::for_function(&f, 1024).unwrap();
        let q = g.integrate(&f, Exec::best()).unwrap();
        let e = f.exact_integral().unwrap();
        assert!((q - e).abs() <= 1e-2 * e, "{q} vs {e}");
    }

    #[test]
    fn refinement_rejects_non_radial() {
        let f = TorusFunction::cosine(2).unwrap();
        let g = QuadratureGrid::uniform(2, 32)
            .unwrap()
            .with_refinement(RadialRefinement::default());
        assert!(g.discretize(&f).is_err());
    }

    #[test]
    fn dimension_mismatch() {
        let f = TorusFunction::cosine(2).unwrap();
        assert!(QuadratureGrid::uniform(1, 8).unwrap().discretize(&f).is_err());
    }
}
