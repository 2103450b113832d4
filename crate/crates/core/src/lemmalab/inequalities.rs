use faer::{c64, Mat, MatRef};
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::trials::TrialConfig;
use super::Verdict;
use crate::error::Result;
use crate::exec::Exec;
use crate::seq::{mu_from_eigs, weak_quasinorm, SingularValueSeq};
use crate::torusop::spectral::{eigh, eigvalsh, matmul, singular_values};

/// Additive slack allowed in `μ(2n, TS) ≤ μ(n, T)·μ(n, S)`.
pub const PRODUCT_SLACK: f64 = 1e-10;
/// Gate on the largest Hölder ratio.
pub const HOLDER_MAX_RATIO: f64 = 10.0;
/// Gate on the ratio growth between the smallest and largest size.
pub const HOLDER_GROWTH: f64 = 2.0;

/// Largest `μ(2n, TS) − μ(n, T)·μ(n, S)` over `2n < size`.
pub fn product_slack(t: MatRef<'_, c64>, s: MatRef<'_, c64>) -> Result<f64> {
    let mt = singular_values(t, Exec::Sequential)?;
    let ms = singular_values(s, Exec::Sequential)?;
    let mts = singular_values(matmul(t, s, Exec::Sequential).as_ref(), Exec::Sequential)?;
    Ok((0..mts.len().div_ceil(2))
        .map(|n| mts[2 * n] - mt[n] * ms[n])
        .fold(f64::NEG_INFINITY, f64::max))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductRung {
    pub size: usize,
    pub worst_slack: f64,
    pub violations: usize,
}

/// Checks `μ(2n, TS) ≤ μ(n, T)·μ(n, S)` on random Hermitian pairs.
pub fn product_inequality_test(cfg: &TrialConfig, exec: Exec) -> Result<Verdict> {
    cfg.validate()?;
    let mut rungs = Vec::with_capacity(cfg.sizes.len());
    for (r, &n) in cfg.sizes.iter().enumerate() {
        let slacks = exec.map_range(cfg.trials, |t| -> Result<f64> {
            let mut rng = cfg.rng(r, t);
            let a = cfg.sample(n, &mut rng)?;
            let b = cfg.sample(n, &mut rng)?;
            product_slack(a.as_ref(), b.as_ref())
        });
        let slacks = slacks.into_iter().collect::<Result<Vec<_>>>()?;
        rungs.push(ProductRung {
            size: n,
            worst_slack: slacks.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            violations: slacks.iter().filter(|&&s| s > PRODUCT_SLACK).count(),
        });
    }
    let worst = rungs.iter().map(|r| r.worst_slack).fold(f64::NEG_INFINITY, f64::max);
    Ok(Verdict {
        test: "product".into(),
        seed: cfg.seed,
        trials: cfg.trials * cfg.sizes.len(),
        worst_case: worst,
        threshold: PRODUCT_SLACK,
        pass: rungs.iter().all(|r| r.violations == 0),
        details: json!({ "distribution": cfg.distribution, "rungs": rungs }),
    })
}

/// One Hölder trial: the ratio and the submajorization constant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolderSample {
    /// `‖T_+ − S_+‖_{1,∞} / (‖T−S‖_{1,∞}^{1/2}·(‖T‖_{1,∞} + ‖S‖_{1,∞})^{1/2})`.
    pub ratio: f64,
    /// `max_j Σ_{k≤j} μ(k, |T_+^{1/2} − S_+^{1/2}|^{1/2}) / Σ_{k≤j} μ(k, |T−S|^{1/4})`.
    pub submajorization: f64,
}

fn spectrum_map(lam: &[f64], v: MatRef<'_, c64>, g: impl Fn(f64) -> f64) -> Mat<c64> {
    let n = lam.len();
    let scaled = Mat::from_fn(n, n, |i, j| v[(i, j)] * g(lam[j]));
    let vh = Mat::from_fn(n, n, |i, j| v[(j, i)].conj());
    matmul(scaled.as_ref(), vh.as_ref(), Exec::Sequential)
}

fn hermitian_mu(a: &Mat<c64>) -> Result<SingularValueSeq> {
    // Differences of spectral maps are Hermitian up to rounding.
    let n = a.nrows();
    let h = Mat::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5);
    Ok(mu_from_eigs(&eigvalsh(h.as_ref(), Exec::Sequential)?))
}

fn weak1(a: &Mat<c64>) -> Result<f64> {
    weak_quasinorm(&hermitian_mu(a)?, 1.0)
}

/// Hölder ratio and submajorization constant for Hermitian `t`, `s`.
pub fn holder_sample(t: MatRef<'_, c64>, s: MatRef<'_, c64>) -> Result<HolderSample> {
    let (lt, vt) = eigh(t, Exec::Sequential)?;
    let (ls, vs) = eigh(s, Exec::Sequential)?;
    let tp = spectrum_map(&lt, vt.as_ref(), |x| x.max(0.0));
    let sp = spectrum_map(&ls, vs.as_ref(), |x| x.max(0.0));
    let lhs = weak1(&(&tp - &sp))?;
    let diff = t.to_owned() - s.to_owned();
    let mu_diff = hermitian_mu(&diff)?;
    let nd = weak_quasinorm(&mu_diff, 1.0)?;
    let nt = weak_quasinorm(&mu_from_eigs(&lt), 1.0)?;
    let ns = weak_quasinorm(&mu_from_eigs(&ls), 1.0)?;
    let rhs = (nd * (nt + ns)).sqrt();
    let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs };

    let tr = spectrum_map(&lt, vt.as_ref(), |x| x.max(0.0).sqrt());
    let sr = spectrum_map(&ls, vs.as_ref(), |x| x.max(0.0).sqrt());
    let mu_root = hermitian_mu(&(&tr - &sr))?;
    let (mut num, mut den, mut sub) = (0.0, 0.0, 0.0f64);
    for (x, y) in mu_root.values().iter().zip(mu_diff.values()) {
        num += x.sqrt();
        den += y.powf(0.25);
        if den > 0.0 {
            sub = sub.max(num / den);
        }
    }
    Ok(HolderSample {
        ratio,
        submajorization: sub,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolderRung {
    pub size: usize,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    pub max_submajorization: f64,
}

/// Empirical constant in `‖T_+ − S_+‖_{1,∞} ≤ c·‖T−S‖_{1,∞}^{1/2}(‖T‖_{1,∞} + ‖S‖_{1,∞})^{1/2}`.
///
/// Each trial draws `T` and a direction `E` from the configured
/// distribution and sets `S = T + εE` with `log10 ε` uniform on `[−4, 1]`,
/// covering near and far pairs.
pub fn holder_positive_part_test(cfg: &TrialConfig, exec: Exec) -> Result<Verdict> {
    use rand::RngExt;
    cfg.validate()?;
    let mut rungs = Vec::with_capacity(cfg.sizes.len());
    for (r, &n) in cfg.sizes.iter().enumerate() {
        let samples = exec.map_range(cfg.trials, |t| -> Result<HolderSample> {
            let mut rng = cfg.rng(r, t);
            let a = cfg.sample(n, &mut rng)?;
            let e = cfg.sample(n, &mut rng)?;
            let eps = 10f64.powf(rng.random_range(-4.0..1.0));
            let b = &a + &e * faer::Scale(c64::new(eps, 0.0));
            holder_sample(a.as_ref(), b.as_ref())
        });
        let samples = samples.into_iter().collect::<Result<Vec<_>>>()?;
        rungs.push(HolderRung {
            size: n,
            max_ratio: samples.iter().map(|s| s.ratio).fold(0.0, f64::max),
            mean_ratio: samples.iter().map(|s| s.ratio).sum::<f64>() / samples.len() as f64,
            max_submajorization: samples.iter().map(|s| s.submajorization).fold(0.0, f64::max),
        });
    }
    let worst = rungs.iter().map(|r| r.max_ratio).fold(0.0, f64::max);
    let first = rungs.first().map_or(0.0, |r| r.max_ratio);
    let last = rungs.last().map_or(0.0, |r| r.max_ratio);
    let no_growth = last <= HOLDER_GROWTH * first;
    Ok(Verdict {
        test: "holder".into(),
        seed: cfg.seed,
        trials: cfg.trials * cfg.sizes.len(),
        worst_case: worst,
        threshold: HOLDER_MAX_RATIO,
        pass: worst <= HOLDER_MAX_RATIO && no_growth,
        details: json!({
            "distribution": cfg.distribution,
            "rungs": rungs,
            "growth_gate": HOLDER_GROWTH,
            "no_growth": no_growth,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(v: &[f64]) -> Mat<c64> {
        Mat::from_fn(v.len(), v.len(), |i, j| {
            if i == j {
                c64::new(v[i], 0.0)
            } else {
                c64::new(0.0, 0.0)
            }
        })
    }

    #[test]
    fn identity_pair_has_no_slack() {
        let id = diag(&[1.0; 6]);
        assert!(product_slack(id.as_ref(), id.as_ref()).unwrap().abs() < 1e-15);
    }

    #[test]
    fn geometric_diagonal_is_the_equality_case() {
        let v: Vec<f64> = (0..12).map(|k| 0.5f64.powi(k)).collect();
        let t = diag(&v);
        let s = product_slack(t.as_ref(), t.as_ref()).unwrap();
        assert!(s.abs() < 1e-15, "{s}");
    }

    #[test]
    fn holder_hand_example() {
        let t = diag(&[1.0, -1.0]);
        let s = diag(&[0.0, 0.0]);
        let h = holder_sample(t.as_ref(), s.as_ref()).unwrap();
        assert!((h.ratio - 0.5).abs() < 1e-14);
        let same = holder_sample(t.as_ref(), t.as_ref()).unwrap();
        assert_eq!(same.ratio, 0.0);
    }

    #[test]
    fn small_sweeps_pass() {
        let cfg = TrialConfig::new(super::super::DEFAULT_SEED, 20, vec![8, 16]);
        assert!(product_inequality_test(&cfg, Exec::best()).unwrap().pass);
        let v = holder_positive_part_test(&cfg, Exec::best()).unwrap();
        assert!(v.worst_case > 0.0 && v.worst_case <= HOLDER_MAX_RATIO, "{v:?}");
    }
}
