use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot add π^{left} and π^{right} terms")]
    MixedPiPowers { left: i32, right: i32 },

    #[error("polynomial degree {degree} exceeds the harmonic truncation {lmax}")]
    DegreeOverflow { degree: u32, lmax: u32 },

    #[error("symbol degree {degree} exceeds the Toeplitz expansion cap {cap}")]
    SymbolDegree { degree: u32, cap: u32 },

    #[error("level must be at least 1")]
    ZeroLevel,

    #[error("level mismatch: {left} vs {right}")]
    LevelMismatch { left: u32, right: u32 },

    #[error("Fourier mode {mode} exceeds the span cap {cap}")]
    SpanOverflow { mode: i32, cap: i32 },

    #[error("not an element of su(2): {0}")]
    NotSu2(&'static str),

    #[error("loop violates {0}")]
    LoopConstraint(String),

    #[error("cocycle {kind} cannot be evaluated on {loops}")]
    KindMismatch { kind: String, loops: String },

    #[error("operator is neither Hermitian nor anti-Hermitian for the Gram inner product")]
    NotNormalizable,

    #[error("pullback is not a multiple of ψ₁: {0}")]
    NotProportional(String),

    #[error("linear system has no exact solution")]
    Inconsistent,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{what} checksum mismatch: expected {expected}, found {found}")]
    Checksum {
        what: &'static str,
        expected: String,
        found: String,
    },

    #[error("unsupported {what} format version {found}")]
    Version { what: &'static str, found: u32 },

    #[error("malformed number `{0}`")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
