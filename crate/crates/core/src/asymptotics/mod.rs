//! Limits of `n·μ(n)` for truncated `W M_f W` against the Weyl constant,
//! and probes of the weak-`L_{2,∞}` and Hilbert–Schmidt behaviour.

mod cif;
mod probes;

pub use cif::{
    cif_check, estimate_part, extrapolate, symmetric_parts, target_resolution, weyl_constant, CifConfig, CifReport,
    CifRung, Conventions, Extrapolation, PartEstimate, PosNeg, SymmetricParts, Tolerances, Verdicts, TARGET_FLOOR,
};
pub use probes::{
    cwikel_probe, hs_ladder, l2_blowup_probe, BlowupReport, BlowupRow, CwikelReport, CwikelRow, BLOWUP_TOLERANCE,
    CWIKEL_BOUND, HS_GROWTH,
};
