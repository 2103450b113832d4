//! Fourier coefficients `ĉ(m) = (2π)^{−d} ∫ f(x) e^{−i m·x} dx` on a window
//! `|m_i| ≤ M`, so that `f = Σ ĉ(m) e^{i m·x}`.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{invalid_param, Error, Result};
use crate::exec::Exec;
use crate::orlicz::{radial, Family, RadialRefinement, TorusFunction};

pub const DEFAULT_OVERSAMPLE: usize = 4;

/// How coefficients are obtained.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CoeffMethod {
    /// Closed forms where the family has them, transforms otherwise.
    #[default]
    Auto,
    /// Always transform grid samples (for cross-checking closed forms).
    Sampled,
}

/// Coefficients on the cube `[−M, M]^d`; zero outside it.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffTable {
    d: usize,
    max_freq: i64,
    data: Vec<Complex64>,
}

impl CoeffTable {
    fn from_fn(d: usize, max_freq: i64, mut f: impl FnMut(&[i64]) -> Complex64) -> Self {
        let side = (2 * max_freq + 1) as usize;
        let mut data = Vec::with_capacity(side.pow(d as u32));
        let mut m = vec![0i64; d];
        for flat in 0..side.pow(d as u32) {
            let mut rem = flat;
            for axis in (0..d).rev() {
                m[axis] = (rem % side) as i64 - max_freq;
                rem /= side;
            }
            data.push(f(&m));
        }
        Self { d, max_freq, data }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn max_freq(&self) -> i64 {
        self.max_freq
    }

    pub(crate) fn side(&self) -> usize {
        (2 * self.max_freq + 1) as usize
    }

    pub(crate) fn raw(&self) -> &[Complex64] {
        &self.data
    }

    /// Flat index of `m`, if it lies in the window.
    pub fn index(&self, m: &[i64]) -> Option<usize> {
        let side = self.side();
        let mut idx = 0usize;
        for &x in m {
            if x.abs() > self.max_freq {
                return None;
            }
            idx = idx * side + (x + self.max_freq) as usize;
        }
        Some(idx)
    }

    pub fn get(&self, m: &[i64]) -> Complex64 {
        self.index(m).map_or(Complex64::new(0.0, 0.0), |i| self.data[i])
    }

    /// True when every coefficient has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.data.iter().all(|c| c.im == 0.0)
    }

    /// Enforces `ĉ(−m) = conj ĉ(m)`, which holds exactly for real `f`.
    fn symmetrize(&mut self) {
        let n = self.data.len();
        for i in 0..n / 2 {
            let j = n - 1 - i;
            let avg = 0.5 * (self.data[i] + self.data[j].conj());
            self.data[i] = avg;
            self.data[j] = avg.conj();
        }
        let mid = n / 2;
        self.data[mid].im = 0.0;
    }

    /// Drops imaginary parts; valid for real, even `f`.
    fn realify(&mut self) {
        for c in &mut self.data {
            c.im = 0.0;
        }
    }
}

/// Coefficients of `f` for `|m_i| ≤ max_freq`.
///
/// Transforms use `oversample·(2·max_freq+1)` points per axis. The capped
/// radial spike is split with a smooth cutoff: the part near the origin is
/// transformed radially (Hankel-type integrals on dyadic panels), the
/// remainder by FFT.
pub fn fourier_coeffs(f: &TorusFunction, max_freq: i64, oversample: usize) -> Result<CoeffTable> {
    fourier_coeffs_with(f, max_freq, oversample, CoeffMethod::Auto, Exec::best())
}

pub fn fourier_coeffs_with(
    f: &TorusFunction,
    max_freq: i64,
    oversample: usize,
    method: CoeffMethod,
    exec: Exec,
) -> Result<CoeffTable> {
    if max_freq < 1 {
        return Err(invalid_param(format!("max_freq {max_freq} must be ≥ 1")));
    }
    if oversample < 2 {
        return Err(invalid_param(format!("oversample {oversample} must be ≥ 2")));
    }
    let d = f.dim();
    let mut table = match (method, f.family()) {
        (CoeffMethod::Auto, Family::CustomGrid { resolution, values }) => {
            custom_grid_coeffs(d, *resolution, values, f.scale(), max_freq)
        }
        (CoeffMethod::Auto, _) if f.exact_coefficient(&vec![0; d]).is_some() => {
            CoeffTable::from_fn(d, max_freq, |m| f.exact_coefficient(m).unwrap_or_default())
        }
        (_, Family::RadialLogspike { exponent, cap }) => spike_coeffs(f, *exponent, *cap, max_freq, oversample, exec)?,
        _ => {
            let n = oversample * (2 * max_freq as usize + 1);
            let samples = sample_complex(f, n);
            transform_samples(d, n, samples, max_freq)?
        }
    };
    if f.is_real() {
        table.symmetrize();
        if f.is_even() {
            table.realify();
        }
    }
    if let Some(k) = table.data.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::InvalidFunction(format!("coefficient {k} is not finite")));
    }
    Ok(table)
}

fn sample_complex(f: &TorusFunction, n: usize) -> Vec<Complex64> {
    let d = f.dim();
    let h = 2.0 * PI / n as f64;
    let mut x = vec![0.0; d];
    (0..n.pow(d as u32))
        .map(|flat| {
            let mut rem = flat;
            for axis in (0..d).rev() {
                x[axis] = -PI + ((rem % n) as f64 + 0.5) * h;
                rem /= n;
            }
            f.eval_complex(&x)
        })
        .collect()
}

/// In-place forward FFT along every axis of a row-major `n^d` array.
fn fft_nd(data: &mut [Complex64], n: usize, d: usize) {
    let fft = FftPlanner::new().plan_fft_forward(n);
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for axis in 0..d {
        let stride = n.pow((d - 1 - axis) as u32);
        let block = stride * n;
        for start in (0..data.len()).step_by(block) {
            for offset in 0..stride {
                let base = start + offset;
                for (j, v) in line.iter_mut().enumerate() {
                    *v = data[base + j * stride];
                }
                fft.process(&mut line);
                for (j, v) in line.iter().enumerate() {
                    data[base + j * stride] = *v;
                }
            }
        }
    }
}

/// Maps cell-centred samples on an `n^d` grid to midpoint-rule coefficients.
///
/// With `x_j = −π + (j+½)h`, `e^{−i m x_j} = (−1)^m e^{−iπm/n} e^{−2πi mj/n}`,
/// so `ĉ(m) = n^{−d} Π_a [(−1)^{m_a} e^{−iπ m_a/n}] · F[m mod n]`.
fn transform_samples(d: usize, n: usize, mut samples: Vec<Complex64>, max_freq: i64) -> Result<CoeffTable> {
    if let Some(k) = samples.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::InvalidFunction(format!("sample {k} is not finite")));
    }
    fft_nd(&mut samples, n, d);
    let norm = (n as f64).powi(d as i32);
    let phase = |m: i64| {
        let sign = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        Complex64::from_polar(sign, -PI * m as f64 / n as f64)
    };
    Ok(CoeffTable::from_fn(d, max_freq, |m| {
        let mut idx = 0usize;
        let mut ph = Complex64::new(1.0 / norm, 0.0);
        for &x in m {
            idx = idx * n + x.rem_euclid(n as i64) as usize;
            ph *= phase(x);
        }
        samples[idx] * ph
    }))
}

/// Exact coefficients of a piecewise-constant function on an `n^d` grid:
/// the discrete transform times `Π sinc(m_a h / 2)`.
fn custom_grid_coeffs(d: usize, n: usize, values: &[f64], scale: f64, max_freq: i64) -> CoeffTable {
    let samples: Vec<Complex64> = values.iter().map(|&v| Complex64::new(scale * v, 0.0)).collect();
    let base = transform_samples(d, n, samples, max_freq).expect("custom grid values are validated finite");
    let h = 2.0 * PI / n as f64;
    let sinc = |m: i64| {
        if m == 0 {
            1.0
        } else {
            let t = 0.5 * m as f64 * h;
            t.sin() / t
        }
    };
    CoeffTable::from_fn(d, max_freq, |m| {
        base.get(m) * m.iter().map(|&x| sinc(x)).product::<f64>()
    })
}

fn spike_coeffs(
    f: &TorusFunction,
    exponent: f64,
    cap: f64,
    max_freq: i64,
    oversample: usize,
    exec: Exec,
) -> Result<CoeffTable> {
    let d = f.dim();
    let cut = RadialRefinement::default();
    let n = oversample * (2 * max_freq as usize + 1);
    let h = 2.0 * PI / n as f64;
    // Far part f·(1 − φ) on the uniform grid.
    let mut x = vec![0.0; d];
    let far: Vec<Complex64> = (0..n.pow(d as u32))
        .map(|flat| {
            let mut rem = flat;
            for axis in (0..d).rev() {
                x[axis] = -PI + ((rem % n) as f64 + 0.5) * h;
                rem /= n;
            }
            let r = x.iter().map(|t| t * t).sum::<f64>().sqrt();
            Complex64::new(f.eval(&x) * (1.0 - radial::bump(r, cut.inner, cut.outer)), 0.0)
        })
        .collect();
    let mut table = transform_samples(d, n, far, max_freq)?;

    // Near part f·φ, a radial function supported in r < outer: its transform
    // depends on |m| only, through J_0 (d = 2), cos (d = 1) or sinc (d = 3).
    let kmax = (d as f64).sqrt() * max_freq as f64;
    let panel = (1.0 / kmax.max(1.0)).min(0.125);
    let kink = cap.powf(-1.0 / exponent);
    let nodes: Vec<(f64, f64)> = radial::radial_panels(cut.outer, cut.levels, Some(kink), cut.order, panel)
        .into_iter()
        .map(|(r, w)| (r, w * f.eval_radial(r) * radial::bump(r, cut.inner, cut.outer)))
        .filter(|(_, w)| *w != 0.0)
        .collect();
    let vol = (2.0 * PI).powi(d as i32);
    let mut norms: Vec<i64> = Vec::new();
    {
        let side = table.side();
        let mut seen = std::collections::BTreeSet::new();
        let mut m = vec![0i64; d];
        for flat in 0..table.data.len() {
            let mut rem = flat;
            for axis in (0..d).rev() {
                m[axis] = (rem % side) as i64 - max_freq;
                rem /= side;
            }
            seen.insert(m.iter().map(|v| v * v).sum::<i64>());
        }
        norms.extend(seen);
    }
    let radial_values = exec.map(&norms, |&k2| {
        let k = (k2 as f64).sqrt();
        let s: f64 = nodes
            .iter()
            .map(|&(r, w)| {
                let kernel = match d {
                    1 => 2.0 * (k * r).cos(),
                    2 => 2.0 * PI * r * libm::j0(k * r),
                    _ => {
                        let t = k * r;
                        let sinc = if t == 0.0 { 1.0 } else { t.sin() / t };
                        4.0 * PI * r * r * sinc
                    }
                };
                w * kernel
            })
            .sum();
        s / vol
    });
    let lookup: HashMap<i64, f64> = norms.into_iter().zip(radial_values).collect();
    let side = table.side();
    let mut m = vec![0i64; d];
    for flat in 0..table.data.len() {
        let mut rem = flat;
        for axis in (0..d).rev() {
            m[axis] = (rem % side) as i64 - max_freq;
            rem /= side;
        }
        let k2: i64 = m.iter().map(|v| v * v).sum();
        table.data[flat] += lookup[&k2];
    }
    Ok(table)
}
