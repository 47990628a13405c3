//! Exact Poisson algebra of the 2-sphere, its Berezin-Toeplitz quantization on
//! CP¹, and the loop-algebra 2-cocycles relating the two.

pub mod cocycles;
pub mod error;
pub mod harmonics;
pub mod linalg;
pub mod loopalg;
pub mod quantize;
pub mod report;
pub mod scalar;
pub mod suite;

pub use cocycles::{CocycleKind, CocycleValue, ConvergenceRecord, LoopElement, Normalization};
pub use error::{Error, Result};
pub use harmonics::{HarmonicCoeffs, HarmonicIndex, PoissonTable, SpherePoly};
pub use loopalg::{FunctionLoop, OperatorLoop, Su2Loop, Twist};
pub use quantize::{ExactOperator, FloatOperator, FuzzyOperator, Su2Element};
pub use scalar::{Gaussian, SymbolicScalar};
