use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, invalid_param, Error, Result};
use crate::exec::Exec;
use crate::orlicz::{QuadratureGrid, TorusFunction};
use crate::seq::{
    dixmier_logmean, noise_floor, plateau_estimate, pos_neg_split_above, AsymptoticsEstimate, SingularValueSeq,
    MIN_ESTIMATOR_LEN,
};
use crate::torusop::{BuildOptions, LatticeBasis, OperatorKind, TruncatedOperator, DEFAULT_OVERSAMPLE};

/// Floor applied to the target in the pass/fail comparison.
pub const TARGET_FLOOR: f64 = 0.05;

/// `Vol(S^{d−1}) / (d·(2π)^d)` with `Vol(S^{d−1}) = 2π^{d/2}/Γ(d/2)`.
pub fn weyl_constant(d: usize) -> Result<f64> {
    check_dim(d)?;
    let gamma_half_d = match d {
        1 => PI.sqrt(),
        2 => 1.0,
        _ => PI.sqrt() / 2.0,
    };
    let sphere = 2.0 * PI.powf(d as f64 / 2.0) / gamma_half_d;
    Ok(sphere / (d as f64 * (2.0 * PI).powi(d as i32)))
}

/// How per-rung estimates are combined into one limit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extrapolation {
    /// Last-rung estimate, moved by one linear step in `1/ln(dim)` when the
    /// last three rungs are strictly monotone.
    #[default]
    LogRichardson,
    /// Last-rung estimate as is.
    LastRung,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CifConfig {
    pub schedule: Vec<f64>,
    /// Relative tolerance on `max(target, 0.05)`.
    pub tolerance: f64,
    /// Use the exact spectrum for constant `f` instead of building matrices.
    pub fast_diagonal: bool,
    pub oversample: usize,
    pub extrapolation: Extrapolation,
    /// Quadrature resolution per axis for the targets (0 = by dimension).
    pub target_resolution: usize,
    #[serde(skip)]
    pub exec: Exec,
}

impl CifConfig {
    pub fn new(schedule: Vec<f64>, tolerance: f64) -> Self {
        Self {
            schedule,
            tolerance,
            fast_diagonal: true,
            oversample: DEFAULT_OVERSAMPLE,
            extrapolation: Extrapolation::default(),
            target_resolution: 0,
            exec: Exec::best(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.schedule.len() < 3 {
            return Err(invalid_param(format!(
                "schedule needs at least 3 cutoffs, got {}",
                self.schedule.len()
            )));
        }
        if self.schedule.windows(2).any(|w| !(w[0] < w[1])) || self.schedule[0] <= 0.0 {
            return Err(invalid_param(format!(
                "schedule must be positive and strictly increasing: {:?}",
                self.schedule
            )));
        }
        if !(self.tolerance > 0.0) {
            return Err(invalid_param(format!("tolerance {} must be positive", self.tolerance)));
        }
        Ok(())
    }
}

/// Default target resolution per axis.
pub fn target_resolution(d: usize) -> usize {
    match d {
        1 => 4096,
        2 => 1024,
        _ => 128,
    }
}

/// Estimate of one spectral part at one cutoff.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartEstimate {
    /// Number of eigenvalues of this sign.
    pub len: usize,
    pub estimate: AsymptoticsEstimate,
    /// Head length the plateau fit used (equal to `len` for short parts).
    pub head: usize,
    /// `(1/ln N)·Σ_{n<N} μ(n)` with `N = len`; a cross-check only.
    pub logmean: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CifRung {
    #[serde(rename = "R")]
    pub cutoff: f64,
    pub dim: usize,
    /// Eigenvalues below the solver noise floor, counted in neither part.
    pub numerical_zeros: usize,
    pub est_pos: f64,
    pub est_neg: f64,
    pub residuals: (f64, f64),
    pub pos: PartEstimate,
    pub neg: PartEstimate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PosNeg {
    pub pos: f64,
    pub neg: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdicts {
    pub pos: bool,
    pub neg: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub relative: f64,
    pub target_floor: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Conventions {
    pub operator: String,
    pub truncation: String,
    pub estimator: String,
    pub extrapolation: Extrapolation,
    pub weyl_constant: f64,
    pub target_quadrature: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CifReport {
    pub f: TorusFunction,
    pub d: usize,
    pub schedule: Vec<f64>,
    pub rungs: Vec<CifRung>,
    pub targets: PosNeg,
    /// `∫f_+` and `∫f_−` by quadrature.
    pub integrals: PosNeg,
    pub extrapolated: PosNeg,
    /// Whether the Richardson step was taken for (pos, neg).
    pub richardson: (bool, bool),
    /// `|e_last − e_prev| / e_last` for the positive part.
    pub stability_pos: f64,
    /// `|pos − neg| / max(pos, neg)` of the extrapolated limits.
    pub symmetry_gap: f64,
    pub verdicts: Verdicts,
    pub tolerances: Tolerances,
    pub conventions: Conventions,
    pub fast_diagonal: bool,
    #[serde(skip)]
    pub spectra: Vec<(SingularValueSeq, SingularValueSeq)>,
}

impl CifReport {
    /// `n,mu,n_mu` rows of the positive (`neg = false`) or negative part.
    pub fn write_rung_csv(&self, rung: usize, neg: bool, w: impl Write) -> Result<()> {
        let (p, n) = self
            .spectra
            .get(rung)
            .ok_or_else(|| invalid_param(format!("no spectrum stored for rung {rung}")))?;
        Ok(if neg { n } else { p }.write_csv(w)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Estimates one spectral part: plateau fit when long enough, otherwise the
/// largest `(n+1)·μ(n)` (0 for an empty part).
pub fn estimate_part(seq: &SingularValueSeq) -> Result<PartEstimate> {
    let (estimate, head) = if seq.len() >= MIN_ESTIMATOR_LEN {
        plateau_estimate(seq)?
    } else {
        (AsymptoticsEstimate::short(seq), seq.len())
    };
    Ok(PartEstimate {
        len: seq.len(),
        estimate,
        head,
        logmean: (seq.len() >= 2).then(|| dixmier_logmean(seq, seq.len()).expect("N within range")),
    })
}

/// Combines per-rung estimates; returns the limit and whether a Richardson
/// step was taken.
pub fn extrapolate(estimates: &[f64], dims: &[usize], mode: Extrapolation) -> (f64, bool) {
    let n = estimates.len();
    let Some(&last) = estimates.last() else {
        return (0.0, false);
    };
    if mode == Extrapolation::LastRung || n < 3 {
        return (last, false);
    }
    let (e1, e2, e3) = (estimates[n - 3], estimates[n - 2], estimates[n - 1]);
    let monotone = (e1 < e2 && e2 < e3) || (e1 > e2 && e2 > e3);
    let x = |k: usize| 1.0 / (dims[k] as f64).ln();
    let (x2, x3) = (x(n - 2), x(n - 1));
    if !monotone || !(x2 > x3) {
        return (last, false);
    }
    ((e3 + (e3 - e2) * x3 / (x2 - x3)).max(0.0), true)
}

fn passes(est: f64, target: f64, tol: f64) -> bool {
    (est - target).abs() <= tol * target.max(TARGET_FLOOR)
}

/// Exact spectrum of `W M_c W` for constant `c`: `c·(1+|k|²)^{−d/2}`.
fn diagonal_eigs(d: usize, cutoff: f64, c: f64) -> Result<Vec<f64>> {
    let basis = LatticeBasis::new(d, cutoff)?;
    Ok((0..basis.len())
        .map(|i| c * (1.0 + basis.norm2(i) as f64).powf(-(d as f64) / 2.0))
        .collect())
}

/// Spectral parts of truncated `W M_f W`.
pub struct SymmetricParts {
    pub pos: SingularValueSeq,
    pub neg: SingularValueSeq,
    pub dim: usize,
    /// Eigenvalues too small for their sign to be resolved; in neither part.
    pub numerical_zeros: usize,
}

/// Spectral parts of `W M_f W` truncated at `cutoff`.
///
/// Solver eigenvalues within [`noise_floor`] of zero carry no reliable sign,
/// so they are dropped; otherwise `f` and `−f` could disagree on which part
/// a rounding-level eigenvalue belongs to. The closed-form diagonal spectrum
/// is exact and keeps everything nonzero.
pub fn symmetric_parts(
    f: &TorusFunction,
    cutoff: f64,
    fast_diagonal: bool,
    opts: &BuildOptions,
) -> Result<SymmetricParts> {
    let (eigs, floor) = match f.constant_value() {
        Some(c) if fast_diagonal => (diagonal_eigs(f.dim(), cutoff, c)?, 0.0),
        _ => {
            let basis = LatticeBasis::new(f.dim(), cutoff)?;
            let eigs = TruncatedOperator::build(OperatorKind::Symmetric, f, &basis, opts)?.eig_hermitian(opts.exec)?;
            let floor = noise_floor(&eigs);
            (eigs, floor)
        }
    };
    let (pos, neg, numerical_zeros) = pos_neg_split_above(&eigs, floor);
    Ok(SymmetricParts {
        pos,
        neg,
        dim: eigs.len(),
        numerical_zeros,
    })
}

/// Compares the limits of `n·μ(n)` for the positive and negative parts of
/// truncated `W M_f W` with `weyl_constant(d)·∫f_±`.
pub fn cif_check(f: &TorusFunction, cfg: &CifConfig) -> Result<CifReport> {
    cfg.validate()?;
    if !f.is_real() {
        return Err(Error::InvalidFunction(format!(
            "limit check needs a real function, got {}",
            f.family().name()
        )));
    }
    let d = f.dim();
    let weyl = weyl_constant(d)?;
    let fast = cfg.fast_diagonal && f.constant_value().is_some();

    // Rungs run side by side; each eigensolve then stays on one thread so
    // the spectra do not depend on the pool size.
    let inner = if cfg.exec.is_parallel() {
        Exec::Sequential
    } else {
        cfg.exec
    };
    let opts = BuildOptions {
        oversample: cfg.oversample,
        exec: inner,
        ..BuildOptions::default()
    };
    let rungs = cfg.exec.map(&cfg.schedule, |&r| -> Result<_> {
        let wrap = |e: Error| Error::Rung {
            cutoff: r,
            source: Box::new(e),
        };
        let SymmetricParts {
            pos: p,
            neg: n,
            dim,
            numerical_zeros,
        } = symmetric_parts(f, r, cfg.fast_diagonal, &opts).map_err(wrap)?;
        let pos = estimate_part(&p).map_err(wrap)?;
        let neg = estimate_part(&n).map_err(wrap)?;
        Ok((
            CifRung {
                cutoff: r,
                dim,
                numerical_zeros,
                est_pos: pos.estimate.alpha_hat,
                est_neg: neg.estimate.alpha_hat,
                residuals: (pos.estimate.residual, neg.estimate.residual),
                pos,
                neg,
            },
            (p, n),
        ))
    });
    let (rungs, spectra): (Vec<_>, Vec<_>) = rungs.into_iter().collect::<Result<Vec<_>>>()?.into_iter().unzip();

    let res = if cfg.target_resolution > 0 {
        cfg.target_resolution
    } else {
        target_resolution(d)
    };
    let grid = QuadratureGrid::for_function(f, res)?;
    let (int_pos, int_neg) = grid.integrate_parts(f, cfg.exec)?;
    let targets = PosNeg {
        pos: weyl * int_pos,
        neg: weyl * int_neg,
    };

    let dims: Vec<usize> = rungs.iter().map(|r| r.dim).collect();
    let pos_est: Vec<f64> = rungs.iter().map(|r| r.est_pos).collect();
    let neg_est: Vec<f64> = rungs.iter().map(|r| r.est_neg).collect();
    let (ep, rp) = extrapolate(&pos_est, &dims, cfg.extrapolation);
    let (en, rn) = extrapolate(&neg_est, &dims, cfg.extrapolation);
    let k = pos_est.len();
    let stability_pos = if pos_est[k - 1] > 0.0 {
        (pos_est[k - 1] - pos_est[k - 2]).abs() / pos_est[k - 1]
    } else {
        0.0
    };
    let top = ep.max(en);
    let vp = passes(ep, targets.pos, cfg.tolerance);
    let vn = passes(en, targets.neg, cfg.tolerance);
    Ok(CifReport {
        f: f.clone(),
        d,
        schedule: cfg.schedule.clone(),
        rungs,
        targets,
        integrals: PosNeg {
            pos: int_pos,
            neg: int_neg,
        },
        extrapolated: PosNeg { pos: ep, neg: en },
        richardson: (rp, rn),
        stability_pos,
        symmetry_gap: if top > 0.0 { (ep - en).abs() / top } else { 0.0 },
        verdicts: Verdicts {
            pos: vp,
            neg: vn,
            pass: vp && vn,
        },
        tolerances: Tolerances {
            relative: cfg.tolerance,
            target_floor: TARGET_FLOOR,
        },
        conventions: Conventions {
            operator: "P_R (1−Δ)^{−d/4} M_f (1−Δ)^{−d/4} P_R on the Fourier lattice |k| ≤ R".into(),
            truncation: "compression to the Euclidean lattice ball; rung ladder in R".into(),
            estimator:
                "fit (n+1)·μ(n) ≈ α + β/ln(n+2) on the flattest dyadic head; parts shorter than 64 use max (n+1)·μ(n)"
                    .into(),
            extrapolation: cfg.extrapolation,
            weyl_constant: weyl,
            target_quadrature: format!(
                "{res}^{d} midpoint grid{}",
                if grid.refinement().is_some() {
                    " with radial refinement"
                } else {
                    ""
                }
            ),
        },
        fast_diagonal: fast,
        spectra,
    })
}
