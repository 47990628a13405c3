//! Exact Poisson algebra of the 2-sphere.

pub mod basis;
pub mod forms;
pub mod poly;
pub mod table;

pub use basis::{
    harmonic_decompose, laplacian, solid_harmonic, solid_harmonic_basis, HarmonicBasis,
    HarmonicCoeffs, HarmonicIndex,
};
pub use forms::{b_form, check_invariance, kappa, kappa_infty, BilinearForm};
pub use poly::{antipodal, integrate_sphere, kks_bracket, omega_bracket, reduce, Poly3, SpherePoly};
pub use table::PoissonTable;
