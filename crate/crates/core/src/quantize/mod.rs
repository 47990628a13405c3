//! Berezin-Toeplitz and geometric quantization on CP¹ at level k.

pub mod cache;
pub mod calibrate;
pub mod conventions;
pub mod geometric;
pub mod norm;
pub mod operator;
pub mod spin;
pub mod toeplitz;
pub mod twist;

pub use cache::SymbolCache;
pub use geometric::{d_phi, d_phi_bar};
pub use norm::{op_norm, spectrum, trace_product};
pub use operator::{gram, ExactOperator, FloatOperator, FuzzyOperator};
pub use spin::{iota, iota_su2, kappa_su2, spin_rep, Mat2, Su2Element};
pub use toeplitz::toeplitz;
pub use twist::{theta, theta_complex, twist_matrix};
