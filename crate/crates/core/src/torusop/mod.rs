//! Fourier-lattice truncations of `M_f` and the Bessel weight
//! `W = (1−Δ)^{−d/4}` on `T^d`, and their spectra.

mod coeffs;
mod lattice;
mod operator;
pub mod spectral;

pub use coeffs::{fourier_coeffs, fourier_coeffs_with, CoeffMethod, CoeffTable, DEFAULT_OVERSAMPLE};
pub use lattice::{cutoff_for_size, lattice_count, LatticeBasis};
pub use operator::{
    build_asymmetric, build_commutator, build_multiplication, build_symmetric, coeffs_for_basis, matrix_from,
    write_spectrum_csv, BuildOptions, Matrix, OperatorKind, TruncatedOperator, HERMITIAN_RTOL,
};
