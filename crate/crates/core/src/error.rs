use thiserror::Error;

/// Failures surfaced by the numerical core.
///
/// Parameter problems (`InvalidSpec`, `InvalidParameter`) are caller mistakes;
/// the remaining variants indicate that a computation could not be carried
/// out to the requested accuracy.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid state specification: {0}")]
    InvalidSpec(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("every weight is an exact zero")]
    AllZero,

    #[error("normalization sum is not positive ({sum:e})")]
    NonPositiveNormSum { sum: f64 },

    #[error("normalization sum has imaginary residue {residue:e} (scale {scale:e})")]
    ImaginaryResidue { residue: f64, scale: f64 },

    #[error("truncated tail mass {tail:e} exceeds tolerance {tolerance:e} at n_max = {n_max}")]
    TailMassTooLarge { tail: f64, tolerance: f64, n_max: usize },

    #[error("analytic normalization disagrees with numeric normalization (relative {relative:e})")]
    NormMismatch { relative: f64 },

    #[error("mean photon number vanishes; Fano factor undefined")]
    ZeroMean,
}

pub type Result<T> = std::result::Result<T, Error>;
