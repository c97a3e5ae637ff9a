//! Numerical tolerances used across the crate.
//!
//! Every threshold lives here so the accuracy contract is auditable in one
//! place. Functions that accept an explicit tolerance default to these.

/// Distance of a root to the unit circle below which a symbol is treated as
/// non-invertible on the circle.
pub const TAU_CIRCLE: f64 = 1e-8;

/// Denominator magnitude below which pointwise evaluation is a pole.
pub const TAU_EVAL: f64 = 1e-12;

/// Relative threshold for dropping coefficients after arithmetic; keeps
/// Laurent supports finite under floating-point products.
pub const REL_DROP: f64 = 1e-13;

/// Relative singular-value threshold for all rank decisions.
pub const TAU_RANK: f64 = 1e-9;

/// Tolerance for the involution check `X_j^2 = I` inside the antisymmetric
/// factorization.
pub const TAU_INVOL: f64 = 1e-8;

/// Relative projector singular-value cut for splitting the ±1 eigenspaces
/// of a constant involution. Sits between the involution tolerance and the
/// O(1) singular values of the spectral projectors.
pub const PROJECTOR_CUT: f64 = 1e-4;

/// Grid sup-norm residual accepted when a factorization reproduces its input.
pub const TAU_RESID: f64 = 1e-8;

/// Relative coefficient tolerance for the exact symmetry check `F·F̃ = I`.
pub const TAU_SYMMETRY: f64 = 1e-10;

/// Relative singular-value threshold separating the "zero cluster" in the
/// finite-section splitting test.
pub const TAU_SPLIT: f64 = 1e-6;

/// Required ratio between the smallest retained singular value and the
/// largest zero-cluster one before a splitting count is called confident.
pub const SPLIT_GAP_RATIO: f64 = 1e3;

/// Number of circle points used for residual and distance checks.
pub const RESIDUAL_GRID: usize = 512;

/// Default window half-width for expanding rational symbols.
pub const WINDOW_DEFAULT: usize = 64;

/// Largest window tried before `WindowTooSmall` is raised.
pub const WINDOW_MAX: usize = 1024;

/// Tail mass a rational symbol expansion must reach within the window.
pub const WINDOW_TAIL: f64 = 1e-12;
