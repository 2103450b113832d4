use faer::{Mat, MatRef};
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::Verdict;
use crate::error::{invalid_param, Error, Result};
use crate::exec::Exec;
use crate::orlicz::TorusFunction;
use crate::seq::mu_from_eigs;
use crate::torusop::spectral::{eigvalsh, positive_part, Scalar};
use crate::torusop::{coeffs_for_basis, BuildOptions, LatticeBasis, Matrix, OperatorKind, TruncatedOperator};

/// Required relative decay of `n·μ(n, D_R)` per rung.
pub const COMMUTATION_DECAY: f64 = 0.20;
/// Entry bound for `D_R` when `f` does not change sign.
pub const ZERO_TOLERANCE: f64 = 1e-9;
/// Multiple of `ε·dim·‖ABA‖` below which a singular value counts as zero.
pub const ZERO_FLOOR_FACTOR: f64 = 64.0;

/// `D = (ABA)_+ − A·B_+·A` on one truncation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommutationRung {
    #[serde(rename = "R")]
    pub cutoff: f64,
    pub dim: usize,
    /// Index `dim/4` where the decay is read.
    pub index: usize,
    /// `n·μ(n, D)` at that index, as computed.
    pub n_mu: f64,
    /// Below this, `n·μ(n, D)` is rounding noise.
    pub floor: f64,
    /// `sup (n+1)·μ(n, D)`.
    pub weak_norm: f64,
    /// Number of singular values of `D` above `floor / index`.
    pub numerical_rank: usize,
    /// Largest `|D_ij|`.
    pub max_entry: f64,
}

impl CommutationRung {
    /// `n_mu`, or zero when it sits below the rounding floor.
    pub fn resolved(&self) -> f64 {
        if self.n_mu <= self.floor {
            0.0
        } else {
            self.n_mu
        }
    }
}

fn difference<T: Scalar>(aba: MatRef<'_, T>, b: MatRef<'_, T>, w: &[f64], exec: Exec) -> Result<(Mat<T>, f64)> {
    let n = w.len();
    let lhs = positive_part(aba, exec)?;
    let bp = positive_part(b, exec)?;
    let abpa = Mat::from_fn(n, n, |i, j| bp[(i, j)] * T::from_re(w[i] * w[j]));
    let norm = eigvalsh(aba, exec)?.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    Ok((&lhs - &abpa, norm))
}

fn hermitian_spectrum<T: Scalar>(d: MatRef<'_, T>, exec: Exec) -> Result<(Vec<f64>, f64)> {
    let n = d.nrows();
    let h = Mat::from_fn(n, n, |i, j| {
        T::from_c64((d[(i, j)].to_c64() + d[(j, i)].to_c64().conj()) * 0.5)
    });
    let mut max_entry = 0.0f64;
    for j in 0..n {
        for i in 0..n {
            max_entry = max_entry.max(d[(i, j)].to_c64().norm());
        }
    }
    Ok((eigvalsh(h.as_ref(), exec)?, max_entry))
}

/// One rung of the commutation probe.
pub fn commutation_rung(f: &TorusFunction, cutoff: f64, exec: Exec) -> Result<CommutationRung> {
    let basis = LatticeBasis::new(f.dim(), cutoff)?;
    let opts = BuildOptions {
        exec,
        ..BuildOptions::default()
    };
    let table = coeffs_for_basis(f, &basis, &opts)?;
    let aba = TruncatedOperator::from_coeffs(OperatorKind::Symmetric, f, &basis, &table, exec)?;
    let b = TruncatedOperator::from_coeffs(OperatorKind::Multiplication, f, &basis, &table, exec)?;
    let w = basis.weights();
    let (eigs, norm, max_entry) = match (aba.matrix(), b.matrix()) {
        (Matrix::Real(x), Matrix::Real(y)) => {
            let (d, norm) = difference(x.as_ref(), y.as_ref(), &w, exec)?;
            let (e, m) = hermitian_spectrum(d.as_ref(), exec)?;
            (e, norm, m)
        }
        (Matrix::Complex(x), Matrix::Complex(y)) => {
            let (d, norm) = difference(x.as_ref(), y.as_ref(), &w, exec)?;
            let (e, m) = hermitian_spectrum(d.as_ref(), exec)?;
            (e, norm, m)
        }
        _ => return Err(Error::BuildFailure("mixed real and complex storage".into())),
    };
    let mu = mu_from_eigs(&eigs);
    let dim = basis.len();
    let index = dim / 4;
    let mu_floor = ZERO_FLOOR_FACTOR * f64::EPSILON * dim as f64 * norm;
    Ok(CommutationRung {
        cutoff,
        dim,
        index,
        n_mu: index as f64 * mu.values()[index],
        floor: index as f64 * mu_floor,
        weak_norm: crate::seq::weak_quasinorm(&mu, 1.0)?,
        numerical_rank: mu.values().iter().take_while(|&&v| v > mu_floor).count(),
        max_entry,
    })
}

/// Decay of `n·μ(n, (ABA)_+ − A·B_+·A)` at `n = dim/4` along `schedule`, with
/// `A` the truncated weight `(1−Δ)^{−d/4}` and `B` the truncated `M_f`.
///
/// Values below `64·ε·dim·‖ABA‖` (times `n`) are numerically zero and count
/// as 0 in the decay comparison; the raw values are kept in the report.
/// The controls `2 + cos` and `−(2 + cos)` must give `D = 0`.
pub fn positive_part_commutation_test(f: &TorusFunction, schedule: &[f64], exec: Exec) -> Result<Verdict> {
    if schedule.len() < 2 || schedule.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(invalid_param(format!(
            "commutation probe needs an increasing schedule of at least 2 cutoffs, got {schedule:?}"
        )));
    }
    if !f.is_real() {
        return Err(Error::InvalidFunction("commutation probe needs a real function".into()));
    }
    let inner = if exec.is_parallel() { Exec::Sequential } else { exec };
    let rungs = exec
        .map(schedule, |&r| {
            commutation_rung(f, r, inner).map_err(|e| Error::Rung {
                cutoff: r,
                source: Box::new(e),
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let raw_ratios: Vec<f64> = rungs.windows(2).map(|w| w[1].n_mu / w[0].n_mu).collect();
    let ratios: Vec<Option<f64>> = rungs
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0].resolved(), w[1].resolved());
            (a > 0.0).then(|| b / a)
        })
        .collect();
    let decays = rungs
        .windows(2)
        .all(|w| w[1].resolved() <= (1.0 - COMMUTATION_DECAY) * w[0].resolved());

    let control_r = schedule[0].min(64.0);
    let shifted = TorusFunction::shifted_cosine(f.dim(), 2.0)?;
    let positive = commutation_rung(&shifted, control_r, exec)?;
    let negative = commutation_rung(&shifted.negated(), control_r, exec)?;
    let controls_ok = positive.max_entry <= ZERO_TOLERANCE && negative.max_entry == 0.0;

    let worst = ratios.iter().map(|r| r.unwrap_or(0.0)).fold(0.0, f64::max);
    Ok(Verdict {
        test: "positive_part".into(),
        seed: 0,
        trials: rungs.len(),
        worst_case: worst,
        threshold: 1.0 - COMMUTATION_DECAY,
        pass: decays && controls_ok,
        details: json!({
            "function": f.label(),
            "rungs": rungs,
            "ratios": ratios,
            "raw_ratios": raw_ratios,
            "zero_floor_factor": ZERO_FLOOR_FACTOR,
            "control_cutoff": control_r,
            "control_nonnegative_max_entry": positive.max_entry,
            "control_nonpositive_max_entry": negative.max_entry,
            "controls_ok": controls_ok,
        }),
    })
}
