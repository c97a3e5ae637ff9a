//! Error type shared by all modules.

use thiserror::Error;

/// Errors raised by factorization and operator routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Matrix shapes do not conform for the requested operation.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A determinant vanishes identically, so no inverse exists.
    #[error("singular symbol: determinant vanishes identically")]
    SingularSymbol,

    /// A zero or pole of the symbol (or of its determinant) lies on the unit
    /// circle within the `tol::TAU_CIRCLE` margin.
    #[error("symbol not invertible on the unit circle: {0}")]
    NotInvertibleOnCircle(String),

    /// Evaluation point coincides with a root of the denominator.
    #[error("evaluation at a pole of the denominator")]
    EvalAtPole,

    /// A factorization was computed but failed its own post-verification.
    #[error("factorization failed: {0}")]
    FactorizationFailed(String),

    /// The necessary condition `F(t) = F̃⁻¹(t)` does not hold.
    #[error("not antisymmetric: F(t) differs from tilde(F)^-1(t)")]
    NotAntisymmetric,

    /// Signature data of the middle factor does not match the involution.
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    /// The symbol is not W-symmetric, i.e. `W Ã W != A`.
    #[error("symbol not in the W-symmetric algebra")]
    NotInBW,

    /// A constant matrix intended as an involution does not satisfy `W² = I`.
    #[error("matrix is not an involution: ||W^2 - I|| = {0:.3e}")]
    NotInvolution(f64),

    /// The requested window cannot guarantee the accuracy target.
    #[error("window too small: {0}")]
    WindowTooSmall(String),

    /// The singular value splitting test found no stable spectral gap.
    #[error("oracle inconclusive: {0}")]
    Inconclusive(String),
}
