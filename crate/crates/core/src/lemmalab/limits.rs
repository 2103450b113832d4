use faer::Mat;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::trials::{orthonormal_columns, TrialConfig};
use super::Verdict;
use crate::error::{invalid_param, Result};
use crate::exec::Exec;
use crate::seq::{direct_sum_mu, limit_estimator, mu_from_eigs, seq_close, tensor_mu, SingularValueSeq};
use crate::torusop::spectral::eigvalsh;

/// Relative tolerance of the tensor, perturbation and transfer suites.
pub const LIMIT_RTOL: f64 = 0.02;
/// Relative tolerance of the direct-sum suite.
pub const DIRECT_SUM_RTOL: f64 = 0.03;
/// Slack in the exact tensor bound `(n+1)·μ(n) ≤ Σα`.
pub const TENSOR_BOUND_SLACK: f64 = 1e-12;
/// Smallest sequence length accepted by the tensor suite.
pub const TENSOR_MIN_LEN: usize = 10_000;

/// Default sequence length for the synthetic suites.
pub const DEFAULT_N_MAX: usize = 100_000;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn estimate(seq: &SingularValueSeq) -> Result<f64> {
    Ok(limit_estimator(seq)?.alpha_hat)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorCase {
    pub alpha: Vec<f64>,
    pub l1: f64,
    pub estimate: f64,
    pub rel_error: f64,
    /// Largest `(n+1)·μ(n) − Σα`; nonpositive up to rounding.
    pub bound_excess: f64,
}

/// `lim n·μ(n, z⊗α) = ‖α‖₁` for `z(n) = 1/(n+1)`, plus the exact bound.
///
/// The bound is checked in the form `(n+1)·μ(n) ≤ ‖α‖₁`, which implies
/// `n·μ(n) ≤ ‖α‖₁`.
pub fn tensor_lemma_test(alphas: &[Vec<f64>], n_max: usize) -> Result<Verdict> {
    if n_max < TENSOR_MIN_LEN {
        return Err(invalid_param(format!(
            "tensor suite needs n_max ≥ {TENSOR_MIN_LEN}, got {n_max}"
        )));
    }
    let mut cases = Vec::with_capacity(alphas.len());
    for alpha in alphas {
        let mu = tensor_mu(alpha, n_max)?;
        let l1: f64 = alpha.iter().sum();
        let e = estimate(&mu)?;
        let excess = mu
            .values()
            .iter()
            .enumerate()
            .map(|(n, v)| (n + 1) as f64 * v - l1)
            .fold(f64::NEG_INFINITY, f64::max);
        cases.push(TensorCase {
            alpha: alpha.clone(),
            l1,
            estimate: e,
            rel_error: rel(e, l1),
            bound_excess: excess,
        });
    }
    let worst = cases.iter().map(|c| c.rel_error).fold(0.0, f64::max);
    let bound_ok = cases.iter().all(|c| c.bound_excess <= TENSOR_BOUND_SLACK);
    Ok(Verdict {
        test: "tensor".into(),
        seed: 0,
        trials: cases.len(),
        worst_case: worst,
        threshold: LIMIT_RTOL,
        pass: worst <= LIMIT_RTOL && bound_ok,
        details: json!({ "n_max": n_max, "bound_slack": TENSOR_BOUND_SLACK, "bound_ok": bound_ok, "cases": cases }),
    })
}

/// Synthetic profile `μ(n) = α/(n+1)·(1 + δ/ln(n+3))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub alpha: f64,
    pub delta: f64,
}

impl Profile {
    /// The first `len` values, rearranged nonincreasingly (for `δ < 0` the
    /// raw profile rises over its first few entries).
    pub fn sequence(&self, len: usize) -> Result<SingularValueSeq> {
        SingularValueSeq::from_unsorted(
            (0..len)
                .map(|n| self.alpha / (n + 1) as f64 * (1.0 + self.delta / (n as f64 + 3.0).ln()))
                .collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectSumCase {
    pub profiles: Vec<Profile>,
    pub target: f64,
    pub estimate: f64,
    pub rel_error: f64,
}

/// `lim n·μ(n, ⊕T_k) = Σα_k`, on the top `n_max` entries of the merge.
pub fn direct_sum_lemma_test(families: &[Vec<Profile>], n_max: usize) -> Result<Verdict> {
    let mut cases = Vec::with_capacity(families.len());
    for profiles in families {
        if profiles.is_empty() {
            return Err(invalid_param("a direct sum needs at least one summand"));
        }
        let seqs = profiles.iter().map(|p| p.sequence(n_max)).collect::<Result<Vec<_>>>()?;
        let merged = direct_sum_mu(&seqs).head(n_max);
        let target: f64 = profiles.iter().map(|p| p.alpha).sum();
        let e = estimate(&merged)?;
        cases.push(DirectSumCase {
            profiles: profiles.clone(),
            target,
            estimate: e,
            rel_error: rel(e, target),
        });
    }
    let worst = cases.iter().map(|c| c.rel_error).fold(0.0, f64::max);
    Ok(Verdict {
        test: "direct_sum".into(),
        seed: 0,
        trials: cases.len(),
        worst_case: worst,
        threshold: DIRECT_SUM_RTOL,
        pass: worst <= DIRECT_SUM_RTOL,
        details: json!({ "n_max": n_max, "cases": cases }),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationCase {
    pub name: String,
    pub base: f64,
    pub perturbed: f64,
    pub rel_diff: f64,
}

/// Limits of `T = diag(1/(n+1))` and `S = T + magnitude·VVᵀ` agree for a
/// random rank-`rank` projection `VVᵀ`, realized on `size × size` matrices.
///
/// Two controls ride along: a zero bump, which must leave the spectrum
/// unchanged, and the synthetic tail `μ(n) = 1/(n+1) + 1/(n+1)²`, whose
/// difference from the base lies in the trace class.
pub fn perturbation_limit_test(size: usize, rank: usize, magnitude: f64, seed: u64, exec: Exec) -> Result<Verdict> {
    if rank >= size / 16 {
        return Err(invalid_param(format!(
            "bump rank {rank} must be much smaller than size {size}"
        )));
    }
    let base: Vec<f64> = (0..size).map(|n| 1.0 / (n + 1) as f64).collect();
    let base_seq = SingularValueSeq::from_sorted(base.clone())?;
    let e_base = estimate(&base_seq)?;

    let cfg = TrialConfig::new(seed, 1, vec![size]);
    let cols = orthonormal_columns(size, rank, &mut cfg.rng(0, 0));
    let perturbed = |mag: f64| -> Result<SingularValueSeq> {
        let s = Mat::<f64>::from_fn(size, size, |i, j| {
            let bump: f64 = cols.iter().map(|c| c[i] * c[j]).sum();
            mag * bump + if i == j { base[i] } else { 0.0 }
        });
        Ok(mu_from_eigs(&eigvalsh(s.as_ref(), exec)?))
    };
    let bumped = perturbed(magnitude)?;
    let e_bumped = estimate(&bumped)?;
    let zero = perturbed(0.0)?;
    let zero_identical = seq_close(&zero, &base_seq);
    let e_zero = estimate(&zero)?;
    let tail = SingularValueSeq::from_sorted(
        (0..size)
            .map(|n| {
                let z = 1.0 / (n + 1) as f64;
                z + z * z
            })
            .collect(),
    )?;
    let e_tail = estimate(&tail)?;
    let cases = vec![
        PerturbationCase {
            name: format!("rank-{rank} bump of magnitude {magnitude}"),
            base: e_base,
            perturbed: e_bumped,
            rel_diff: rel(e_bumped, e_base),
        },
        PerturbationCase {
            name: "zero bump".into(),
            base: e_base,
            perturbed: e_zero,
            rel_diff: rel(e_zero, e_base),
        },
        PerturbationCase {
            name: "trace-class tail 1/(n+1)^2".into(),
            base: e_base,
            perturbed: e_tail,
            rel_diff: rel(e_tail, e_base),
        },
    ];
    let worst = cases.iter().map(|c| c.rel_diff).fold(0.0, f64::max);
    Ok(Verdict {
        test: "perturbation".into(),
        seed,
        trials: cases.len(),
        worst_case: worst,
        threshold: LIMIT_RTOL,
        pass: worst <= LIMIT_RTOL && zero_identical,
        details: json!({ "size": size, "rank": rank, "magnitude": magnitude, "zero_bump_identical": zero_identical, "cases": cases }),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferRow {
    pub m: u32,
    /// `‖μ_m − μ_∞‖_{1,∞} = 2^{−m}`.
    pub distance: f64,
    pub estimate: f64,
}

/// Limits of `μ_m(n) = (1 + 2^{−m})/(n+1)` converge to the limit of
/// `1/(n+1)` as `m` grows; checked at `m = m_max`.
pub fn limit_transfer_test(m_max: u32, n_max: usize) -> Result<Verdict> {
    let profile = |c: f64| SingularValueSeq::from_sorted((0..n_max).map(|n| c / (n + 1) as f64).collect());
    let e_limit = estimate(&profile(1.0)?)?;
    let rows = (0..=m_max)
        .map(|m| {
            let c = 1.0 + 0.5f64.powi(m as i32);
            Ok(TransferRow {
                m,
                distance: c - 1.0,
                estimate: estimate(&profile(c)?)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let gaps: Vec<f64> = rows.iter().map(|r| (r.estimate - e_limit).abs()).collect();
    let converging = gaps.windows(2).all(|w| w[1] <= w[0]);
    let worst = rel(rows.last().map_or(f64::NAN, |r| r.estimate), e_limit);
    Ok(Verdict {
        test: "limit_transfer".into(),
        seed: 0,
        trials: rows.len(),
        worst_case: worst,
        threshold: LIMIT_RTOL,
        pass: worst <= LIMIT_RTOL && converging,
        details: json!({ "n_max": n_max, "limit_estimate": e_limit, "converging": converging, "rows": rows }),
    })
}
