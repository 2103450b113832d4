use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::radial;
use crate::error::{check_dim, Error, Result};

pub const DEFAULT_SPIKE_CAP: f64 = 1e6;

/// Parametrized test functions on `T^d = [−π, π)^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `value`
    Constant { value: f64 },
    /// `amplitude·cos(m·x)`
    CosineMode { mode: Vec<i64>, amplitude: f64 },
    /// `shift + amplitude·cos(m·x)`
    ShiftedCosine { shift: f64, mode: Vec<i64>, amplitude: f64 },
    /// `height` on the box `Π [lower_i, upper_i)`, zero elsewhere.
    BoxIndicator {
        lower: Vec<f64>,
        upper: Vec<f64>,
        height: f64,
    },
    /// `min(|x|^{−exponent}, cap)`, with `|x|` the distance to the origin in
    /// the fundamental domain.
    RadialLogspike { exponent: f64, cap: f64 },
    /// `e^{i m·x}`; the only complex-valued family.
    PlaneWave { mode: Vec<i64> },
    /// Cell-centred samples on a `resolution^d` grid, row-major.
    CustomGrid { resolution: usize, values: Vec<f64> },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Constant { .. } => "constant",
            Family::CosineMode { .. } => "cosine_mode",
            Family::ShiftedCosine { .. } => "shifted_cosine",
            Family::BoxIndicator { .. } => "box_indicator",
            Family::RadialLogspike { .. } => "radial_logspike",
            Family::PlaneWave { .. } => "plane_wave",
            Family::CustomGrid { .. } => "custom_grid",
        }
    }
}

/// A function on the flat torus: a family, its dimension and an overall
/// real scale factor (so `c·f` and `−f` share the family's closed forms).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusFunction {
    d: usize,
    #[serde(flatten)]
    family: Family,
    #[serde(default = "one")]
    scale: f64,
}

fn one() -> f64 {
    1.0
}

fn unit_mode(d: usize) -> Vec<i64> {
    let mut m = vec![0; d];
    m[0] = 1;
    m
}

impl TorusFunction {
    pub fn new(d: usize, family: Family) -> Result<Self> {
        check_dim(d)?;
        let bad = |msg: String| Err(Error::InvalidFunction(msg));
        let finite = |name: &str, v: f64| -> Result<()> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidFunction(format!("{name} = {v} is not finite")))
            }
        };
        match &family {
            Family::Constant { value } => finite("value", *value)?,
            Family::CosineMode { mode, amplitude } => {
                finite("amplitude", *amplitude)?;
                if mode.len() != d {
                    return bad(format!("mode has {} components, expected {d}", mode.len()));
                }
            }
            Family::ShiftedCosine { shift, mode, amplitude } => {
                finite("shift", *shift)?;
                finite("amplitude", *amplitude)?;
                if mode.len() != d {
                    return bad(format!("mode has {} components, expected {d}", mode.len()));
                }
            }
            Family::PlaneWave { mode } => {
                if mode.len() != d {
                    return bad(format!("mode has {} components, expected {d}", mode.len()));
                }
            }
            Family::BoxIndicator { lower, upper, height } => {
                finite("height", *height)?;
                if lower.len() != d || upper.len() != d {
                    return bad(format!("box bounds must have {d} components"));
                }
                for (a, b) in lower.iter().zip(upper) {
                    if !(-PI <= *a && a < b && *b <= PI) {
                        return bad(format!("box side [{a}, {b}) must satisfy −π ≤ a < b ≤ π"));
                    }
                }
            }
            Family::RadialLogspike { exponent, cap } => {
                if !(*exponent > 0.0 && *exponent < d as f64) {
                    return bad(format!(
                        "spike exponent {exponent} must lie in (0, {d}) to be integrable"
                    ));
                }
                if !(*cap > 0.0 && cap.is_finite()) {
                    return bad(format!("spike cap {cap} must be finite and > 0"));
                }
            }
            Family::CustomGrid { resolution, values } => {
                if *resolution == 0 || values.len() != resolution.pow(d as u32) {
                    return bad(format!(
                        "custom grid needs resolution^{d} = {} values, got {}",
                        resolution.pow(d as u32),
                        values.len()
                    ));
                }
                if let Some(k) = values.iter().position(|v| !v.is_finite()) {
                    return bad(format!("custom grid sample {k} = {} is not finite", values[k]));
                }
            }
        }
        Ok(Self { d, family, scale: 1.0 })
    }

    pub fn constant(d: usize, value: f64) -> Result<Self> {
        Self::new(d, Family::Constant { value })
    }

    /// `cos(x_1)`.
    pub fn cosine(d: usize) -> Result<Self> {
        Self::new(
            d,
            Family::CosineMode {
                mode: unit_mode(d),
                amplitude: 1.0,
            },
        )
    }

    /// `shift + cos(x_1)`.
    pub fn shifted_cosine(d: usize, shift: f64) -> Result<Self> {
        Self::new(
            d,
            Family::ShiftedCosine {
                shift,
                mode: unit_mode(d),
                amplitude: 1.0,
            },
        )
    }

    pub fn box_indicator(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        Self::new(
            lower.len(),
            Family::BoxIndicator {
                lower,
                upper,
                height: 1.0,
            },
        )
    }

    pub fn radial_logspike(d: usize, exponent: f64, cap: f64) -> Result<Self> {
        Self::new(d, Family::RadialLogspike { exponent, cap })
    }

    pub fn plane_wave(mode: Vec<i64>) -> Result<Self> {
        Self::new(mode.len(), Family::PlaneWave { mode })
    }

    pub fn custom_grid(d: usize, resolution: usize, values: Vec<f64>) -> Result<Self> {
        Self::new(d, Family::CustomGrid { resolution, values })
    }

    /// Builds a function from a family name and `key=value` parameters.
    ///
    /// Vector parameters (`mode`, `lower`, `upper`, `values`) are
    /// comma-separated. Missing parameters take family defaults.
    pub fn from_params(d: usize, family: &str, params: &BTreeMap<String, String>) -> Result<Self> {
        check_dim(d)?;
        let known: &[&str] = match family {
            "constant" => &["value", "scale"],
            "cosine_mode" => &["mode", "amplitude", "scale"],
            "shifted_cosine" => &["shift", "mode", "amplitude", "scale"],
            "box_indicator" => &["lower", "upper", "height", "scale"],
            "radial_logspike" => &["exponent", "cap", "scale"],
            "plane_wave" => &["mode", "scale"],
            "custom_grid" => &["resolution", "values", "scale"],
            other => {
                return Err(Error::InvalidFunction(format!("unknown family '{other}'")));
            }
        };
        if let Some(k) = params.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(Error::InvalidFunction(format!(
                "family {family} has no parameter '{k}' (expected one of {known:?})"
            )));
        }
        let num = |key: &str, default: f64| -> Result<f64> {
            params.get(key).map_or(Ok(default), |s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidFunction(format!("{key}: cannot parse '{s}'")))
            })
        };
        let list = |key: &str, default: Vec<f64>| -> Result<Vec<f64>> {
            match params.get(key) {
                None => Ok(default),
                Some(s) => s
                    .split(',')
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| {
                        t.trim()
                            .parse::<f64>()
                            .map_err(|_| Error::InvalidFunction(format!("{key}: cannot parse '{t}'")))
                    })
                    .collect(),
            }
        };
        let ints = |key: &str| -> Result<Vec<i64>> {
            match params.get(key) {
                None => Ok(unit_mode(d)),
                Some(s) => s
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<i64>()
                            .map_err(|_| Error::InvalidFunction(format!("{key}: cannot parse '{t}'")))
                    })
                    .collect(),
            }
        };
        let fam = match family {
            "constant" => Family::Constant {
                value: num("value", 1.0)?,
            },
            "cosine_mode" => Family::CosineMode {
                mode: ints("mode")?,
                amplitude: num("amplitude", 1.0)?,
            },
            "shifted_cosine" => Family::ShiftedCosine {
                shift: num("shift", 2.0)?,
                mode: ints("mode")?,
                amplitude: num("amplitude", 1.0)?,
            },
            "box_indicator" => Family::BoxIndicator {
                lower: list("lower", vec![0.0; d])?,
                upper: list("upper", vec![PI; d])?,
                height: num("height", 1.0)?,
            },
            "radial_logspike" => Family::RadialLogspike {
                exponent: num("exponent", 1.0)?,
                cap: num("cap", DEFAULT_SPIKE_CAP)?,
            },
            "plane_wave" => Family::PlaneWave { mode: ints("mode")? },
            "custom_grid" => {
                let values = list("values", Vec::new())?;
                let resolution = match params.get("resolution") {
                    Some(s) => s
                        .trim()
                        .parse::<usize>()
                        .map_err(|_| Error::InvalidFunction(format!("resolution: cannot parse '{s}'")))?,
                    None => (values.len() as f64).powf(1.0 / d as f64).round() as usize,
                };
                Family::CustomGrid { resolution, values }
            }
            _ => unreachable!("family names checked above"),
        };
        Self::new(d, fam)?.scaled(num("scale", 1.0)?)
    }

    /// `c·f`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::InvalidFunction(format!("scale {c} is not finite")));
        }
        Ok(Self {
            scale: self.scale * c,
            ..self.clone()
        })
    }

    pub fn negated(&self) -> Self {
        Self {
            scale: -self.scale,
            ..self.clone()
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn is_real(&self) -> bool {
        !matches!(self.family, Family::PlaneWave { .. })
    }

    /// Radial about the origin (needed for radial quadrature refinement).
    pub fn is_radial(&self) -> bool {
        matches!(self.family, Family::RadialLogspike { .. } | Family::Constant { .. })
    }

    /// `f(−x) = f(x)`, so real `f` has real Fourier coefficients.
    pub fn is_even(&self) -> bool {
        match &self.family {
            Family::Constant { .. }
            | Family::CosineMode { .. }
            | Family::ShiftedCosine { .. }
            | Family::RadialLogspike { .. } => true,
            Family::BoxIndicator { lower, upper, .. } => lower.iter().zip(upper).all(|(a, b)| *a == -*b),
            Family::PlaneWave { mode } => mode.iter().all(|&m| m == 0),
            Family::CustomGrid { .. } => false,
        }
    }

    /// Unscaled constant value, when the family is constant.
    pub fn constant_value(&self) -> Option<f64> {
        match self.family {
            Family::Constant { value } => Some(value * self.scale),
            _ => None,
        }
    }

    /// Value at radius `r` for radial families.
    pub fn eval_radial(&self, r: f64) -> f64 {
        match self.family {
            Family::RadialLogspike { exponent, cap } => self.scale * spike(r, exponent, cap),
            Family::Constant { value } => self.scale * value,
            _ => f64::NAN,
        }
    }

    /// Real part of `f(x)`; `x` is reduced into `[−π, π)^d`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.eval_complex(x).re
    }

    pub fn eval_complex(&self, x: &[f64]) -> Complex64 {
        debug_assert_eq!(x.len(), self.d);
        let dot = |m: &[i64]| m.iter().zip(x).map(|(&m, &x)| m as f64 * x).sum::<f64>();
        let v = match &self.family {
            Family::Constant { value } => Complex64::new(*value, 0.0),
            Family::CosineMode { mode, amplitude } => Complex64::new(amplitude * dot(mode).cos(), 0.0),
            Family::ShiftedCosine { shift, mode, amplitude } => {
                Complex64::new(shift + amplitude * dot(mode).cos(), 0.0)
            }
            Family::PlaneWave { mode } => Complex64::from_polar(1.0, dot(mode)),
            Family::BoxIndicator { lower, upper, height } => {
                let inside = x.iter().zip(lower.iter().zip(upper)).all(|(&t, (a, b))| {
                    let t = wrap(t);
                    *a <= t && t < *b
                });
                Complex64::new(if inside { *height } else { 0.0 }, 0.0)
            }
            Family::RadialLogspike { exponent, cap } => {
                let r = x.iter().map(|t| wrap(*t).powi(2)).sum::<f64>().sqrt();
                Complex64::new(spike(r, *exponent, *cap), 0.0)
            }
            Family::CustomGrid { resolution, values } => {
                let n = *resolution;
                let h = 2.0 * PI / n as f64;
                let idx = x.iter().fold(0usize, |acc, &t| {
                    let j = ((wrap(t) + PI) / h).floor() as usize;
                    acc * n + j.min(n - 1)
                });
                Complex64::new(values[idx], 0.0)
            }
        };
        v * self.scale
    }

    /// Real point samples at the cell centres `−π + (j+½)h` of an `n^d` grid,
    /// row-major.
    pub fn sample_grid(&self, n: usize) -> Result<Vec<f64>> {
        self.require_real()?;
        let h = 2.0 * PI / n as f64;
        let total = n.pow(self.d as u32);
        let mut out = Vec::with_capacity(total);
        let mut x = vec![0.0; self.d];
        for flat in 0..total {
            let mut rem = flat;
            for axis in (0..self.d).rev() {
                x[axis] = -PI + ((rem % n) as f64 + 0.5) * h;
                rem /= n;
            }
            out.push(self.eval(&x));
        }
        check_finite(&out)?;
        Ok(out)
    }

    /// Like [`sample_grid`](Self::sample_grid), except that box indicators
    /// return `height` times the covered fraction of each cell, so grid sums
    /// integrate them exactly.
    pub fn cell_average_grid(&self, n: usize) -> Result<Vec<f64>> {
        let Family::BoxIndicator { lower, upper, height } = &self.family else {
            return self.sample_grid(n);
        };
        let h = 2.0 * PI / n as f64;
        let cover: Vec<Vec<f64>> = lower
            .iter()
            .zip(upper)
            .map(|(&a, &b)| {
                (0..n)
                    .map(|j| {
                        let lo = -PI + j as f64 * h;
                        ((lo + h).min(b) - lo.max(a)).clamp(0.0, h) / h
                    })
                    .collect()
            })
            .collect();
        let total = n.pow(self.d as u32);
        let out: Vec<f64> = (0..total)
            .map(|flat| {
                let mut rem = flat;
                let mut c = 1.0;
                for axis in (0..self.d).rev() {
                    c *= cover[axis][rem % n];
                    rem /= n;
                }
                self.scale * height * c
            })
            .collect();
        Ok(out)
    }

    fn require_real(&self) -> Result<()> {
        if self.is_real() {
            Ok(())
        } else {
            Err(Error::InvalidFunction(format!(
                "{} is complex-valued; real samples requested",
                self.family.name()
            )))
        }
    }

    /// `∫_{T^d} f`, when a closed form is available.
    pub fn exact_integral(&self) -> Option<f64> {
        let vol = (2.0 * PI).powi(self.d as i32);
        let v = match &self.family {
            Family::Constant { value } => value * vol,
            Family::CosineMode { mode, amplitude } => {
                if mode.iter().all(|&m| m == 0) {
                    amplitude * vol
                } else {
                    0.0
                }
            }
            Family::ShiftedCosine { shift, mode, amplitude } => {
                let osc = if mode.iter().all(|&m| m == 0) { *amplitude } else { 0.0 };
                (shift + osc) * vol
            }
            Family::BoxIndicator { lower, upper, height } => {
                height * lower.iter().zip(upper).map(|(a, b)| b - a).product::<f64>()
            }
            Family::RadialLogspike { exponent, cap } => radial::spike_integral(self.d, *exponent, *cap)?,
            Family::PlaneWave { .. } | Family::CustomGrid { .. } => return None,
        };
        Some(v * self.scale)
    }

    /// Closed-form `ĉ(m) = (2π)^{−d} ∫ f(x) e^{−i m·x} dx`, when available.
    pub fn exact_coefficient(&self, m: &[i64]) -> Option<Complex64> {
        let zero = Complex64::new(0.0, 0.0);
        let is = |a: &[i64], b: &[i64]| a == b;
        let neg = |a: &[i64]| a.iter().map(|x| -x).collect::<Vec<_>>();
        let at_zero = m.iter().all(|&x| x == 0);
        let v = match &self.family {
            Family::Constant { value } => {
                if at_zero {
                    Complex64::new(*value, 0.0)
                } else {
                    zero
                }
            }
            Family::CosineMode { mode, amplitude } => cosine_coeff(m, mode, *amplitude, &is, &neg),
            Family::ShiftedCosine { shift, mode, amplitude } => {
                let base = if at_zero { *shift } else { 0.0 };
                cosine_coeff(m, mode, *amplitude, &is, &neg) + base
            }
            Family::PlaneWave { mode } => {
                if is(m, mode) {
                    Complex64::new(1.0, 0.0)
                } else {
                    zero
                }
            }
            Family::BoxIndicator { lower, upper, height } => {
                let mut c = Complex64::new(*height, 0.0);
                for ((&mi, &a), &b) in m.iter().zip(lower).zip(upper) {
                    c *= if mi == 0 {
                        Complex64::new((b - a) / (2.0 * PI), 0.0)
                    } else {
                        let k = mi as f64;
                        (Complex64::from_polar(1.0, -k * a) - Complex64::from_polar(1.0, -k * b))
                            / Complex64::new(0.0, 2.0 * PI * k)
                    };
                }
                c
            }
            Family::RadialLogspike { .. } | Family::CustomGrid { .. } => return None,
        };
        Some(v * self.scale)
    }

    /// Compact, stable label for reports and file names.
    pub fn label(&self) -> String {
        format!("{self}")
    }
}

fn cosine_coeff(
    m: &[i64],
    mode: &[i64],
    amplitude: f64,
    is: &dyn Fn(&[i64], &[i64]) -> bool,
    neg: &dyn Fn(&[i64]) -> Vec<i64>,
) -> Complex64 {
    if mode.iter().all(|&x| x == 0) {
        return Complex64::new(if m.iter().all(|&x| x == 0) { amplitude } else { 0.0 }, 0.0);
    }
    let mut c = 0.0;
    if is(m, mode) {
        c += amplitude / 2.0;
    }
    if is(m, &neg(mode)) {
        c += amplitude / 2.0;
    }
    Complex64::new(c, 0.0)
}

fn check_finite(v: &[f64]) -> Result<()> {
    match v.iter().position(|x| !x.is_finite()) {
        Some(k) => Err(Error::InvalidFunction(format!("sample {k} = {} is not finite", v[k]))),
        None => Ok(()),
    }
}

fn wrap(t: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let r = (t + PI).rem_euclid(two_pi) - PI;
    if r >= PI {
        -PI
    } else {
        r
    }
}

pub(crate) fn spike(r: f64, exponent: f64, cap: f64) -> f64 {
    if r <= 0.0 {
        cap
    } else {
        r.powf(-exponent).min(cap)
    }
}

impl fmt::Display for TorusFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[i64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let flist = |v: &[f64]| v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",");
        if self.scale != 1.0 {
            write!(f, "{}*", self.scale)?;
        }
        match &self.family {
            Family::Constant { value } => write!(f, "constant(value={value})"),
            Family::CosineMode { mode, amplitude } => {
                write!(f, "cosine_mode(mode={},amplitude={amplitude})", list(mode))
            }
            Family::ShiftedCosine { shift, mode, amplitude } => write!(
                f,
                "shifted_cosine(shift={shift},mode={},amplitude={amplitude})",
                list(mode)
            ),
            Family::BoxIndicator { lower, upper, height } => write!(
                f,
                "box_indicator(lower={},upper={},height={height})",
                flist(lower),
                flist(upper)
            ),
            Family::RadialLogspike { exponent, cap } => {
                write!(f, "radial_logspike(exponent={exponent},cap={cap:e})")
            }
            Family::PlaneWave { mode } => write!(f, "plane_wave(mode={})", list(mode)),
            Family::CustomGrid { resolution, .. } => write!(f, "custom_grid(resolution={resolution})"),
        }?;
        write!(f, "@T{}", self.d)
    }
}
