use faer::{c64, Mat};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid_param, Result};
use crate::exec::Exec;
use crate::torusop::spectral::{eigh, matmul};

/// Default seed for every seeded suite.
pub const DEFAULT_SEED: u64 = 0xC1F;

/// How random Hermitian trial matrices are drawn.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distribution {
    /// `(G + G*)/(2√n)` for a complex Gaussian `G`.
    #[default]
    GaussianHermitian,
    /// `U·diag(±1/(k+1))·U*` with random signs and a random unitary `U`.
    PrescribedProfile,
}

impl Distribution {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "gaussian_hermitian" | "gaussian-hermitian" => Ok(Self::GaussianHermitian),
            "prescribed_profile" | "prescribed-profile" => Ok(Self::PrescribedProfile),
            _ => Err(invalid_param(format!(
                "unknown distribution '{s}' (expected gaussian_hermitian or prescribed_profile)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub seed: u64,
    /// Trials per size.
    pub trials: usize,
    pub sizes: Vec<usize>,
    pub distribution: Distribution,
}

impl TrialConfig {
    pub fn new(seed: u64, trials: usize, sizes: Vec<usize>) -> Self {
        Self {
            seed,
            trials,
            sizes,
            distribution: Distribution::default(),
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.trials == 0 || self.sizes.is_empty() || self.sizes.contains(&0) {
            return Err(invalid_param(format!(
                "trial config needs trials ≥ 1 and positive sizes, got {} trials on {:?}",
                self.trials, self.sizes
            )));
        }
        Ok(())
    }

    /// Generator for trial `trial` at size index `rung`.
    ///
    /// Each (rung, trial) pair owns a ChaCha stream, so trials can run in
    /// any order and still draw the same numbers.
    pub fn rng(&self, rung: usize, trial: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(((rung as u64) << 32) | trial as u64);
        rng
    }

    pub fn sample(&self, n: usize, rng: &mut ChaCha8Rng) -> Result<Mat<c64>> {
        match self.distribution {
            Distribution::GaussianHermitian => Ok(gaussian_hermitian(n, rng)),
            Distribution::PrescribedProfile => {
                let profile: Vec<f64> = (0..n)
                    .map(|k| {
                        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                        sign / (k + 1) as f64
                    })
                    .collect();
                conjugated_profile(&profile, rng)
            }
        }
    }
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// `(G + G*)/(2√n)` with independent standard complex Gaussian entries.
pub fn gaussian_hermitian(n: usize, rng: &mut ChaCha8Rng) -> Mat<c64> {
    let g = Mat::<c64>::from_fn(n, n, |_, _| c64::new(normal(rng), normal(rng)));
    let s = 0.5 / (n as f64).sqrt();
    Mat::from_fn(n, n, |i, j| (g[(i, j)] + g[(j, i)].conj()) * s)
}

/// Eigenvectors of a Gaussian Hermitian matrix: a random unitary.
pub fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> Result<Mat<c64>> {
    let (_, u) = eigh(gaussian_hermitian(n, rng).as_ref(), Exec::Sequential)?;
    Ok(u)
}

/// `U·diag(profile)·U*` for a random unitary `U`; its eigenvalues are
/// `profile` up to rounding.
pub fn conjugated_profile(profile: &[f64], rng: &mut ChaCha8Rng) -> Result<Mat<c64>> {
    let n = profile.len();
    let u = random_unitary(n, rng)?;
    let ud = Mat::from_fn(n, n, |i, j| u[(i, j)] * profile[j]);
    let uh = Mat::from_fn(n, n, |i, j| u[(j, i)].conj());
    let mut a = matmul(ud.as_ref(), uh.as_ref(), Exec::Sequential);
    // Exact Hermitian symmetry for the eigensolver.
    for j in 0..n {
        a[(j, j)] = c64::new(a[(j, j)].re, 0.0);
        for i in 0..j {
            let m = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = m;
            a[(j, i)] = m.conj();
        }
    }
    Ok(a)
}

/// `k` orthonormal real columns of length `n` (Gram–Schmidt on Gaussians).
pub fn orthonormal_columns(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(k);
    while cols.len() < k {
        let mut v: Vec<f64> = (0..n).map(|_| normal(rng)).collect();
        for _ in 0..2 {
            for c in &cols {
                let dot: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(c).for_each(|(a, b)| *a -= dot * b);
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            v.iter_mut().for_each(|x| *x /= norm);
            cols.push(v);
        }
    }
    cols
}
