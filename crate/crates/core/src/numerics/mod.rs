//! Shared numerical kernels.

mod chebyshev;
mod eigen;
mod extrema;
mod quadrature;

pub use chebyshev::{chebyshev_p, chebyshev_t};
pub use eigen::{symmetric_eigenvalues, DenseMatrix, SymmetricSpectrum};
pub use extrema::{refine_extrema, Extremum, ExtremumKind};
pub use quadrature::{
    gauss_legendre, integrate, integrate_with, EndpointFlags, QuadratureOptions, QuadratureResult,
};
