use serde::{Deserialize, Serialize};

use super::cif::{estimate_part, extrapolate, target_resolution, weyl_constant, Extrapolation};
use crate::error::{invalid_param, Error, Result};
use crate::exec::Exec;
use crate::orlicz::{orlicz2_norm_with, QuadratureGrid, TorusFunction, NORM_CONVENTION};
use crate::seq::{noise_floor, pos_neg_split_above, weak_quasinorm};
use crate::torusop::{coeffs_for_basis, BuildOptions, LatticeBasis, OperatorKind, TruncatedOperator};

/// Empirical bound checked by the Cwikel probe.
pub const CWIKEL_BOUND: f64 = 3.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CwikelRow {
    #[serde(rename = "R")]
    pub cutoff: f64,
    pub dim: usize,
    /// `sup_n (n+1)^{1/2}·μ(n)` of the truncated `M_f W`.
    pub quasinorm: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CwikelReport {
    pub f: TorusFunction,
    pub d: usize,
    pub orlicz2_norm: f64,
    pub rows: Vec<CwikelRow>,
    /// Largest ratio seen; a lower envelope for the constant.
    pub max_ratio: f64,
    pub bound: f64,
    pub bounded: bool,
    pub convention: String,
}

/// Quadrature resolution used for the Orlicz norm in probes.
fn norm_grid(f: &TorusFunction) -> Result<QuadratureGrid> {
    QuadratureGrid::for_function(f, target_resolution(f.dim()))
}

/// Ratio of the weak-`L_{2,∞}` quasi-norm of truncated `M_f (1−Δ)^{−d/4}`
/// to `‖f‖_{L_M^{(2)}}`, per cutoff.
pub fn cwikel_probe(f: &TorusFunction, schedule: &[f64], exec: Exec) -> Result<CwikelReport> {
    if schedule.is_empty() {
        return Err(invalid_param("cwikel probe needs at least one cutoff"));
    }
    let norm = orlicz2_norm_with(f, &norm_grid(f)?, exec)?;
    if norm == 0.0 {
        return Err(Error::InvalidFunction(format!(
            "{} has zero Orlicz norm; the ratio is undefined",
            f.label()
        )));
    }
    let inner = if exec.is_parallel() { Exec::Sequential } else { exec };
    let opts = BuildOptions {
        exec: inner,
        ..BuildOptions::default()
    };
    let rows = exec.map(schedule, |&r| -> Result<CwikelRow> {
        let wrap = |e: Error| Error::Rung {
            cutoff: r,
            source: Box::new(e),
        };
        let basis = LatticeBasis::new(f.dim(), r).map_err(wrap)?;
        let mu = match f.constant_value() {
            // M_c W is diagonal with entries c·w(k).
            Some(c) => crate::seq::mu_from_eigs(&basis.weights().iter().map(|w| c * w).collect::<Vec<_>>()),
            None => TruncatedOperator::build(OperatorKind::HalfWeighted, f, &basis, &opts)
                .and_then(|op| op.singvals(inner))
                .map_err(wrap)?,
        };
        let q = weak_quasinorm(&mu, 2.0)?;
        Ok(CwikelRow {
            cutoff: r,
            dim: basis.len(),
            quasinorm: q,
            ratio: q / norm,
        })
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(CwikelReport {
        f: f.clone(),
        d: f.dim(),
        orlicz2_norm: norm,
        rows,
        max_ratio,
        bound: CWIKEL_BOUND,
        bounded: max_ratio <= CWIKEL_BOUND,
        convention: NORM_CONVENTION.to_string(),
    })
}

/// Minimum relative growth of the asymmetric Hilbert–Schmidt norm per rung.
pub const HS_GROWTH: f64 = 0.05;
/// Tolerance for the symmetric-form estimate against its target.
pub const BLOWUP_TOLERANCE: f64 = 0.20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlowupRow {
    #[serde(rename = "R")]
    pub cutoff: f64,
    pub dim: usize,
    /// Hilbert–Schmidt norm of truncated `M_f W²`.
    pub hs_norm: f64,
    /// Relative growth over the previous rung.
    pub hs_growth: Option<f64>,
    /// Positive-part estimate of truncated `W M_f W`.
    pub est_pos: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlowupReport {
    pub f: TorusFunction,
    pub rows: Vec<BlowupRow>,
    pub target_pos: f64,
    pub integral: f64,
    pub extrapolated_pos: f64,
    /// Every rung grows by at least [`HS_GROWTH`].
    pub hs_blowup: bool,
    /// Strictly increasing, regardless of rate.
    pub hs_increasing: bool,
    pub symmetric_within_tolerance: bool,
    pub growth_threshold: f64,
    pub tolerance: f64,
}

/// Hilbert–Schmidt norms of truncated `M_f W²` and positive-part estimates
/// of truncated `W M_f W` on one ladder.
pub fn hs_ladder(f: &TorusFunction, schedule: &[f64], exec: Exec) -> Result<BlowupReport> {
    if schedule.len() < 2 || schedule.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(invalid_param(format!(
            "blow-up probe needs an increasing schedule of at least 2 cutoffs, got {schedule:?}"
        )));
    }
    if !f.is_real() {
        return Err(Error::InvalidFunction("blow-up probe needs a real function".into()));
    }
    let inner = if exec.is_parallel() { Exec::Sequential } else { exec };
    let opts = BuildOptions {
        exec: inner,
        ..BuildOptions::default()
    };
    let per = exec.map(schedule, |&r| -> Result<(f64, usize, f64, f64)> {
        let wrap = |e: Error| Error::Rung {
            cutoff: r,
            source: Box::new(e),
        };
        let basis = LatticeBasis::new(f.dim(), r).map_err(wrap)?;
        let table = coeffs_for_basis(f, &basis, &opts).map_err(wrap)?;
        let hs = TruncatedOperator::from_coeffs(OperatorKind::Asymmetric, f, &basis, &table, inner)
            .map_err(wrap)?
            .hs_norm();
        let eigs = TruncatedOperator::from_coeffs(OperatorKind::Symmetric, f, &basis, &table, inner)
            .and_then(|op| op.eig_hermitian(inner))
            .map_err(wrap)?;
        let (p, _, _) = pos_neg_split_above(&eigs, noise_floor(&eigs));
        let est = estimate_part(&p).map_err(wrap)?.estimate.alpha_hat;
        Ok((r, basis.len(), hs, est))
    });
    let per = per.into_iter().collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(per.len());
    for (i, &(cutoff, dim, hs, est)) in per.iter().enumerate() {
        rows.push(BlowupRow {
            cutoff,
            dim,
            hs_norm: hs,
            hs_growth: (i > 0).then(|| hs / per[i - 1].2 - 1.0),
            est_pos: est,
        });
    }
    let integral = QuadratureGrid::for_function(f, target_resolution(f.dim()))?
        .integrate_parts(f, exec)?
        .0;
    let target = weyl_constant(f.dim())? * integral;
    let ests: Vec<f64> = rows.iter().map(|r| r.est_pos).collect();
    let dims: Vec<usize> = rows.iter().map(|r| r.dim).collect();
    let (extrapolated, _) = extrapolate(&ests, &dims, Extrapolation::LogRichardson);
    let growth: Vec<f64> = rows.iter().filter_map(|r| r.hs_growth).collect();
    Ok(BlowupReport {
        f: f.clone(),
        hs_blowup: growth.iter().all(|g| *g >= HS_GROWTH),
        hs_increasing: growth.iter().all(|g| *g > 0.0),
        symmetric_within_tolerance: (extrapolated - target).abs() <= BLOWUP_TOLERANCE * target,
        rows,
        target_pos: target,
        integral,
        extrapolated_pos: extrapolated,
        growth_threshold: HS_GROWTH,
        tolerance: BLOWUP_TOLERANCE,
    })
}

/// The `L_M \ L_2` contrast on `T²` for `min(|x|^{−1}, cap)`.
pub fn l2_blowup_probe(d: usize, cap: f64, schedule: &[f64], exec: Exec) -> Result<BlowupReport> {
    if d != 2 {
        return Err(Error::UnsupportedDimension(d));
    }
    let f = TorusFunction::radial_logspike(2, 1.0, cap)?;
    hs_ladder(&f, schedule, exec)
}
