//! Factorization-based invertibility analysis for Toeplitz + Hankel operators
//! and singular integral operators with flip on the unit circle.
//!
//! The library works with rational `N×N` matrix functions without poles on
//! `|t| = 1` and provides:
//!
//! * exact Laurent-polynomial and rational matrix arithmetic, the tilde
//!   involution `Ã(t) = A(1/t)` and winding numbers ([`laurent`], [`rational`]);
//! * classical Wiener-Hopf factorization `A = A₋ Λ A₊` with partial indices
//!   ([`wiener_hopf`]);
//! * antisymmetric factorization `F = F₋ D F̃₋⁻¹` with characteristic pairs
//!   `(ρ_k, κ_k)`, signature counts, and the asymmetric factorizations
//!   `A = A₋ R A₀` / `A = A₀ R A₊` ([`antisym`]);
//! * a symbolic operator calculus over `P`, `Q`, `J`, `M(A)`, `T(A)`, `H(A)`
//!   and block compositions, applied exactly to finitely supported Fourier
//!   sequences ([`ops`]);
//! * Fredholm reports (kernel/cokernel dimensions, invertibility classes,
//!   pseudoinverses) for `T(a) + H(b)`, `M_W(A)`, `N_W(A)`, `Φ(A)`, `Ψ(A)`
//!   and general flip operators ([`solver`]);
//! * independent numerical verification through finite-section singular value
//!   splitting and an algebraic identity suite ([`oracle`]).
//!
//! All values are immutable after construction and all operations are pure
//! functions, so everything here is safe to share across threads.

pub mod antisym;
pub mod error;
pub mod laurent;
pub mod numeric;
pub mod ops;
pub mod oracle;
pub mod rational;
pub mod solver;
pub mod tol;
pub mod wiener_hopf;

pub use error::Error;
pub use laurent::{LaurentMatrix, LaurentPoly};
pub use rational::{InvolutionMatrix, RationalMatrixFunction};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;

/// Result alias with the crate error type.
pub type Result<T> = std::result::Result<T, Error>;
