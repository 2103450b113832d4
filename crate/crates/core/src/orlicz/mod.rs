//! Test functions on `T^d`, quadrature, and norms for the Orlicz space of
//! `M(t) = t·ln(e+t)` and its 2-convexification.

mod function;
mod grid;
mod norms;
pub mod radial;

pub use function::{Family, TorusFunction, DEFAULT_SPIKE_CAP};
pub use grid::{Discretized, QuadratureGrid, RadialRefinement};
pub use norms::{
    default_ladder, ladder_verdict, lebesgue_norm, lebesgue_norm_with, luxemburg, membership_report,
    membership_report_on, orlicz2_norm, orlicz2_norm_with, orlicz_norm, orlicz_norm_with, young, LadderRung,
    Membership, MembershipReport, CONVERGENCE_RTOL, DIVERGENCE_GROWTH, LUXEMBURG_RTOL, NORM_CONVENTION,
};
