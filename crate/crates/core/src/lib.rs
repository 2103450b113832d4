//! Finite-truncation experiments on singular-value asymptotics of
//! Bessel-weighted multiplication operators on the flat torus `T^d`.
//!
//! - [`seq`]: singular-value sequences, weak quasi-norms, limit estimation.
//! - [`orlicz`]: test functions, quadrature, Orlicz and Lebesgue norms.
//! - [`torusop`]: Fourier-lattice truncations and their spectra.
//! - [`asymptotics`]: limit checks against the Weyl constant, probes.
//! - [`lemmalab`]: seeded property trials for singular-value inequalities.

pub mod asymptotics;
pub mod error;
pub mod exec;
pub mod lemmalab;
pub mod orlicz;
pub mod seq;
pub mod torusop;

pub use error::{Error, Result};
pub use exec::Exec;
