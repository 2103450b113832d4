use serde::{Deserialize, Serialize};

use super::function::TorusFunction;
use super::grid::{Discretized, QuadratureGrid};
use crate::error::{invalid_param, Result};
use crate::exec::Exec;

/// Relative width of the final bisection bracket for the Luxemburg gauge.
pub const LUXEMBURG_RTOL: f64 = 1e-13;

/// The Young function `M(t) = t·ln(e + t)`.
pub fn young(t: f64) -> f64 {
    t * (std::f64::consts::E + t).ln()
}

/// `inf{λ > 0 : Σ w·M(|v|/λ) ≤ 1}` over discretized values.
///
/// The constraint is decreasing in `λ`, so the root is bracketed by doubling
/// and halving from `Σ w|v|`, then bisected.
pub fn luxemburg(disc: &Discretized, exec: Exec) -> f64 {
    let constraint = |lambda: f64| disc.integrate(exec, |v| young(v.abs() / lambda));
    let mass = disc.integrate(exec, f64::abs);
    if mass == 0.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (mass, mass);
    while constraint(hi) > 1.0 {
        hi *= 2.0;
    }
    while constraint(lo) <= 1.0 {
        lo *= 0.5;
    }
    for _ in 0..200 {
        if hi - lo <= LUXEMBURG_RTOL * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if constraint(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Luxemburg norm of `f` for `M(t) = t·ln(e+t)`.
pub fn orlicz_norm(f: &TorusFunction, grid: &QuadratureGrid) -> Result<f64> {
    orlicz_norm_with(f, grid, Exec::best())
}

pub fn orlicz_norm_with(f: &TorusFunction, grid: &QuadratureGrid, exec: Exec) -> Result<f64> {
    Ok(luxemburg(&grid.discretize_abs(f)?, exec))
}

/// Norm of the 2-convexification: `‖|f|²‖_{L_M}^{1/2}`.
pub fn orlicz2_norm(f: &TorusFunction, grid: &QuadratureGrid) -> Result<f64> {
    orlicz2_norm_with(f, grid, Exec::best())
}

pub fn orlicz2_norm_with(f: &TorusFunction, grid: &QuadratureGrid, exec: Exec) -> Result<f64> {
    let sq = grid.discretize_abs(f)?.map(|v| v * v);
    Ok(luxemburg(&sq, exec).sqrt())
}

/// `(∫|f|^p)^{1/p}` by quadrature, `p ≥ 1`.
pub fn lebesgue_norm(f: &TorusFunction, grid: &QuadratureGrid, p: f64) -> Result<f64> {
    lebesgue_norm_with(f, grid, p, Exec::best())
}

pub fn lebesgue_norm_with(f: &TorusFunction, grid: &QuadratureGrid, p: f64, exec: Exec) -> Result<f64> {
    if !(p >= 1.0) || p.is_infinite() {
        return Err(invalid_param(format!(
            "Lebesgue exponent p = {p} must be finite and ≥ 1"
        )));
    }
    let disc = grid.discretize_abs(f)?;
    Ok(disc.integrate(exec, |v| v.powf(p)).powf(1.0 / p))
}

/// Relative change per doubling above which a ladder counts as diverging.
pub const DIVERGENCE_GROWTH: f64 = 0.05;
/// Relative change between the top rungs below which it counts as converging.
pub const CONVERGENCE_RTOL: f64 = 0.01;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderRung {
    pub res: usize,
    pub l2: f64,
    pub lm: f64,
}

/// Membership verdict with the evidence behind it. `member` is `None` when
/// the ladder neither settles nor grows fast enough to call.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub member: Option<bool>,
    /// Relative change between consecutive rungs.
    pub growth: Vec<f64>,
    pub evidence: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub family: String,
    pub d: usize,
    pub params: TorusFunction,
    pub ladder: Vec<LadderRung>,
    pub verdict_l2: Membership,
    pub verdict_lm: Membership,
    pub convention: String,
}

/// Grid resolutions per axis used by [`membership_report`].
pub fn default_ladder(d: usize) -> Vec<usize> {
    if d == 3 {
        vec![32, 64, 128, 256]
    } else {
        vec![128, 256, 512, 1024]
    }
}

/// Reads a norm ladder: diverging if each of the last two doublings grows by
/// more than 5%, converging if the last two rungs agree within 1%.
pub fn ladder_verdict(norms: &[f64]) -> Membership {
    let growth: Vec<f64> = norms
        .windows(2)
        .map(|w| {
            if w[0] == 0.0 {
                if w[1] == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                w[1] / w[0] - 1.0
            }
        })
        .collect();
    let top: Vec<f64> = growth.iter().rev().take(2).copied().collect();
    let (member, evidence) = if top.len() == 2 && top.iter().all(|g| *g > DIVERGENCE_GROWTH) {
        (
            Some(false),
            format!(
                "grows {:.2}% and {:.2}% over the last two doublings",
                100.0 * top[1],
                100.0 * top[0]
            ),
        )
    } else if top.first().is_some_and(|g| g.abs() <= CONVERGENCE_RTOL) {
        (
            Some(true),
            format!("last two rungs agree within {:.3}%", 100.0 * top[0].abs()),
        )
    } else {
        (None, "ladder neither settles nor diverges".to_string())
    };
    Membership {
        member,
        growth,
        evidence,
    }
}

/// `L_2` and `L_M` norms of `f` on a ladder of plain midpoint grids, read as
/// membership evidence.
///
/// Plain grids are used on purpose: cell centres never touch the origin, so
/// a spike's ladder tracks the uncapped function and exposes its growth.
pub fn membership_report(f: &TorusFunction, exec: Exec) -> Result<MembershipReport> {
    membership_report_on(f, &default_ladder(f.dim()), exec)
}

pub fn membership_report_on(f: &TorusFunction, resolutions: &[usize], exec: Exec) -> Result<MembershipReport> {
    let rungs = exec.map(resolutions, |&res| -> Result<LadderRung> {
        let grid = QuadratureGrid::uniform(f.dim(), res)?;
        let disc = grid.discretize_abs(f)?;
        Ok(LadderRung {
            res,
            l2: disc.integrate(Exec::Sequential, |v| v * v).sqrt(),
            lm: luxemburg(&disc, Exec::Sequential),
        })
    });
    let ladder = rungs.into_iter().collect::<Result<Vec<_>>>()?;
    let l2: Vec<f64> = ladder.iter().map(|r| r.l2).collect();
    let lm: Vec<f64> = ladder.iter().map(|r| r.lm).collect();
    Ok(MembershipReport {
        family: f.family().name().to_string(),
        d: f.dim(),
        params: f.clone(),
        ladder,
        verdict_l2: ladder_verdict(&l2),
        verdict_lm: ladder_verdict(&lm),
        convention: NORM_CONVENTION.to_string(),
    })
}

/// Normalization recorded in reports that depend on the Orlicz gauge.
pub const NORM_CONVENTION: &str =
    "Luxemburg gauge inf{λ>0 : ∫ M(|f|/λ) ≤ 1}, M(t)=t·ln(e+t), Lebesgue measure on [−π,π)^d";
