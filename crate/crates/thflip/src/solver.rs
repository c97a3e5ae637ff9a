//! Fredholm analysis of Toeplitz + Hankel operators and singular integral
//! operators with flip: kernel/cokernel dimensions from characteristic
//! pairs through the Θ-function, invertibility classification, and
//! pseudoinverse construction.
//!
//! `Θ(ρ, κ) = κ/2` for even κ and `(κ-ρ)/2` for odd κ. For a Fredholm
//! operator with associated pairs `(ρ_k, κ_k)`,
//! `dim ker = -Σ_{κ<0} Θ(ρ_k, κ_k)` and `dim coker = Σ_{κ>0} Θ(ρ_k, κ_k)`
//! (with `Θ(-ρ_k, κ_k)` on the right-handed routes). The solver always
//! reports through the left route by default; the right route is opt-in and
//! is used by the cross-checking tests.

use crate::antisym::{antisym_factor, middle_factor, AntisymFactorization, CharPair};
use crate::error::Error;
use crate::ops::{
    self, apply_auto, build_chank, build_ctoep, build_mw, build_nw, build_phi, build_psi,
    compose, hankel, identity, riesz_p, scale, sum, toeplitz, xi_inverse, FourierVec,
    OperatorExpr,
};
use crate::rational::{InvolutionMatrix, RationalMatrixFunction};
use crate::{C64, Result};

/// `Θ(ρ, κ)`: the per-pair dimension contribution.
pub fn theta(rho: i8, kappa: i64) -> i64 {
    if kappa.rem_euclid(2) == 0 {
        kappa / 2
    } else {
        (kappa - rho as i64) / 2
    }
}

/// Which reduction was used to obtain the report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Via `F = A W Ã⁻¹` and its antisymmetric factorization.
    Left,
    /// Via `G = Ã⁻¹ W A`.
    Right,
}

/// Invertibility pair sets: one for the `M_W`/`Φ` family, one for `N_W`/`Ψ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvertibilityKind {
    MwPhi,
    NwPsi,
}

/// Outcome of a Fredholm analysis. When `fredholm` is false all numeric
/// fields are absent.
#[derive(Clone, Debug)]
pub struct FredholmReport {
    pub fredholm: bool,
    pub index: Option<i64>,
    pub dim_ker: Option<usize>,
    pub dim_coker: Option<usize>,
    /// Characteristic pairs of the associated antisymmetric factorization,
    /// canonical order. Absent when no factorization was run.
    pub pairs: Option<Vec<CharPair>>,
    pub invertible: Option<bool>,
    pub pseudoinverse: Option<OperatorExpr>,
    pub route: Route,
    /// Window for which the pseudoinverse application met the tail target
    /// on a probe vector, when one was needed and found.
    pub window: Option<usize>,
}

impl FredholmReport {
    fn not_fredholm(route: Route) -> Self {
        FredholmReport {
            fredholm: false,
            index: None,
            dim_ker: None,
            dim_coker: None,
            pairs: None,
            invertible: None,
            pseudoinverse: None,
            route,
            window: None,
        }
    }
}

/// Kernel/cokernel dimensions from a pair list; `negate` applies the
/// `Θ(-ρ, κ)` form used on the right-handed routes.
fn dims_from_pairs(pairs: &[CharPair], negate: bool) -> (usize, usize) {
    let mut ker = 0_i64;
    let mut coker = 0_i64;
    for p in pairs {
        let rho = if negate { -p.rho } else { p.rho };
        if p.kappa < 0 {
            ker -= theta(rho, p.kappa);
        } else if p.kappa > 0 {
            coker += theta(rho, p.kappa);
        }
    }
    debug_assert!(ker >= 0 && coker >= 0);
    (ker as usize, coker as usize)
}

/// True when every pair lies in the invertibility set of the family:
/// `{(-1,-1), (-1,0), (1,0), (1,1)}` for `M_W`/`Φ`,
/// `{(1,-1), (-1,0), (1,0), (-1,1)}` for `N_W`/`Ψ`.
pub fn classify_invertibility(pairs: &[CharPair], kind: InvertibilityKind) -> bool {
    pairs.iter().all(|p| match kind {
        InvertibilityKind::MwPhi => matches!(
            (p.rho, p.kappa),
            (-1, -1) | (-1, 0) | (1, 0) | (1, 1)
        ),
        InvertibilityKind::NwPsi => matches!(
            (p.rho, p.kappa),
            (1, -1) | (-1, 0) | (1, 0) | (-1, 1)
        ),
    })
}

/// `dim ker(I + H(D)) = Σ_{κ>0} Θ(ρ_k, κ_k)` for the diagonal middle factor
/// defined by the pairs.
pub fn middle_hankel_dims(pairs: &[CharPair]) -> usize {
    pairs
        .iter()
        .filter(|p| p.kappa > 0)
        .map(|p| theta(p.rho, p.kappa))
        .sum::<i64>() as usize
}

/// The operators `B = I + H(D)` and
/// `B† = I - H(D)² + ¼(H(D)² + H(D))`, as expressions.
pub fn lemma42_operators(pairs: &[CharPair]) -> Result<(OperatorExpr, OperatorExpr)> {
    let n = pairs.len();
    let d = middle_factor(pairs);
    let h = hankel(d);
    let h2 = compose(vec![h.clone(), h.clone()])?;
    let b = sum(vec![identity(n), h.clone()])?;
    let b_dag = sum(vec![
        identity(n),
        scale(C64::new(-1.0, 0.0), h2.clone()),
        scale(C64::new(0.25, 0.0), sum(vec![h2, h])?),
    ])?;
    Ok((b, b_dag))
}

/// Fredholmness test shared by all analyzers: the symbol determinant must
/// not vanish on the circle. `Ok(None)` means "not Fredholm".
fn fredholm_winding(a: &RationalMatrixFunction) -> Result<Option<i64>> {
    if !a.is_valid_on_circle() {
        return Err(Error::NotInvertibleOnCircle(
            "denominator vanishes on the circle; not a symbol".into(),
        ));
    }
    match a.det_and_winding() {
        Ok((_, w)) => Ok(Some(w)),
        Err(Error::NotInvertibleOnCircle(_)) | Err(Error::SingularSymbol) => Ok(None),
        Err(e) => Err(e),
    }
}

fn probe_window(expr: &OperatorExpr) -> Option<usize> {
    let e = FourierVec::basis(expr.shape().0, 0, 0);
    apply_auto(expr, &e).ok().map(|(_, _, w)| w)
}

fn finish_report(
    route: Route,
    index: i64,
    pairs: Vec<CharPair>,
    negate: bool,
    kind: InvertibilityKind,
    pseudoinverse: OperatorExpr,
) -> Result<FredholmReport> {
    let (dim_ker, dim_coker) = dims_from_pairs(&pairs, negate);
    if dim_ker as i64 - dim_coker as i64 != index {
        return Err(Error::FactorizationFailed(format!(
            "dimension formulas give index {} but the winding gives {}",
            dim_ker as i64 - dim_coker as i64,
            index
        )));
    }
    let invertible = dim_ker == 0 && dim_coker == 0;
    if classify_invertibility(&pairs, kind) != invertible {
        return Err(Error::FactorizationFailed(
            "pair classification disagrees with the Θ dimensions".into(),
        ));
    }
    let window = probe_window(&pseudoinverse);
    Ok(FredholmReport {
        fredholm: true,
        index: Some(index),
        dim_ker: Some(dim_ker),
        dim_coker: Some(dim_coker),
        pairs: Some(pairs),
        invertible: Some(invertible),
        pseudoinverse: Some(pseudoinverse),
        route,
        window,
    })
}

/// Builds `A = [[a, b], [0, I]]` used by the left route.
fn stack_upper(
    a: &RationalMatrixFunction,
    b: &RationalMatrixFunction,
) -> Result<RationalMatrixFunction> {
    let n = a.rows();
    let zero = RationalMatrixFunction::zero(n, n);
    let id = RationalMatrixFunction::identity(n);
    RationalMatrixFunction::from_blocks(&[vec![a, b], vec![&zero, &id]])
}

/// Builds `B = [[a, 0], [b̃, I]]` used by the right route.
fn stack_lower(
    a: &RationalMatrixFunction,
    b: &RationalMatrixFunction,
) -> Result<RationalMatrixFunction> {
    let n = a.rows();
    let zero = RationalMatrixFunction::zero(n, n);
    let id = RationalMatrixFunction::identity(n);
    let bt = b.tilde();
    RationalMatrixFunction::from_blocks(&[vec![a, &zero], vec![&bt, &id]])
}

/// Fredholm analysis of `T(a) + H(b)` on `(H²)^N`.
///
/// The left route introduces `A = [[a, b], [0, I]]`, factors
/// `F = A W Ã⁻¹` antisymmetrically and reads the dimensions from
/// `Θ(ρ_k, κ_k)`; its pseudoinverse is
/// `(T(u₁) + H(ũ₂)) (P - ½H(D)) T(v₁)` with `(u₁; u₂) = A⁻¹A₋` and
/// `(v₁, v₂) = A₋⁻¹`. The right route mirrors this through
/// `B = [[a, 0], [b̃, I]]`, `G = B̃⁻¹ W B`, `Θ(-ρ_k, κ_k)`, and
/// `T(w₁) (P - ½H(D⁻¹)) (T(y₁) + H(y₂))`.
pub fn analyze_toeplitz_hankel(
    a: &RationalMatrixFunction,
    b: &RationalMatrixFunction,
    route: Route,
) -> Result<FredholmReport> {
    if !a.is_square() || a.rows() != b.rows() || !b.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "a is {}x{}, b is {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    if !b.is_valid_on_circle() {
        return Err(Error::NotInvertibleOnCircle(
            "denominator of b vanishes on the circle".into(),
        ));
    }
    let n = a.rows();
    let wind = match fredholm_winding(a)? {
        Some(w) => w,
        None => return Ok(FredholmReport::not_fredholm(route)),
    };
    let index = -wind;
    match route {
        Route::Left => {
            let big_a = stack_upper(a, b)?;
            let w = InvolutionMatrix::antidiagonal(n);
            let f = big_a.mul_const(w.matrix())?.mul(&big_a.tilde().inverse()?)?;
            let anti = antisym_factor(&f)?;
            let u = big_a.inverse()?.mul(&anti.minus_factor)?;
            let u1 = u.block(0, 0, n, 2 * n);
            let u2 = u.block(n, 0, n, 2 * n);
            let v1 = anti.minus_factor.inverse()?.block(0, 0, 2 * n, n);
            let d = anti.middle();
            let pinv = compose(vec![
                sum(vec![toeplitz(u1), hankel(u2.tilde())])?,
                sum(vec![
                    riesz_p(2 * n),
                    scale(C64::new(-0.5, 0.0), hankel(d)),
                ])?,
                toeplitz(v1),
            ])?;
            finish_report(route, index, anti.pairs, false, InvertibilityKind::MwPhi, pinv)
        }
        Route::Right => {
            let big_b = stack_lower(a, b)?;
            let w = InvolutionMatrix::antidiagonal(n);
            let g = big_b.tilde().inverse()?.mul_const(w.matrix())?.mul(&big_b)?;
            let anti = antisym_factor(&g)?;
            // G = G₋ D G̃₋⁻¹ = B̃₊⁻¹ D B₊ with B₊ = G̃₋⁻¹.
            let b_plus = anti.minus_factor.tilde().inverse()?;
            let w_sym = b_plus.inverse()?;
            let w1 = w_sym.block(0, 0, n, 2 * n);
            let y = b_plus.mul(&big_b.inverse()?)?;
            let y1 = y.block(0, 0, 2 * n, n);
            let y2 = y.block(0, n, 2 * n, n);
            let d_inv = middle_factor(
                &anti
                    .pairs
                    .iter()
                    .map(|p| CharPair::new(p.rho, -p.kappa))
                    .collect::<Vec<_>>(),
            );
            let pinv = compose(vec![
                toeplitz(w1),
                sum(vec![
                    riesz_p(2 * n),
                    scale(C64::new(-0.5, 0.0), hankel(d_inv)),
                ])?,
                sum(vec![toeplitz(y1), hankel(y2)])?,
            ])?;
            finish_report(route, index, anti.pairs, true, InvertibilityKind::NwPsi, pinv)
        }
    }
}

/// Shared engine for `M_W(A)` and `Φ(A)`: factor `F = A W Ã⁻¹`.
fn analyze_left_family(
    a: &RationalMatrixFunction,
    w: &InvolutionMatrix,
) -> Result<Option<(i64, AntisymFactorization)>> {
    let wind = match fredholm_winding(a)? {
        Some(x) => x,
        None => return Ok(None),
    };
    let f = a.mul_const(w.matrix())?.mul(&a.tilde().inverse()?)?;
    let anti = antisym_factor(&f)?;
    Ok(Some((-wind, anti)))
}

/// Shared engine for `N_W(A)` and `Ψ(A)`: factor `G = Ã⁻¹ W A` and rewrite
/// it as `Ã₊⁻¹ D A₊`.
fn analyze_right_family(
    a: &RationalMatrixFunction,
    w: &InvolutionMatrix,
) -> Result<Option<(i64, RationalMatrixFunction, Vec<CharPair>)>> {
    let wind = match fredholm_winding(a)? {
        Some(x) => x,
        None => return Ok(None),
    };
    let g = a.tilde().inverse()?.mul_const(w.matrix())?.mul(a)?;
    let anti = antisym_factor(&g)?;
    let a_plus = anti.minus_factor.tilde().inverse()?;
    Ok(Some((-wind, a_plus, anti.pairs)))
}

/// Fredholm analysis of `M_W(A) = T(A) + H(AW)`; pseudoinverse
/// `N_W(A⁻¹A₋) (I - ½H(D)) T(A₋⁻¹)`.
pub fn analyze_mw(
    a: &RationalMatrixFunction,
    w: &InvolutionMatrix,
) -> Result<FredholmReport> {
    check_square_against(a, w)?;
    let (index, anti) = match analyze_left_family(a, w)? {
        Some(x) => x,
        None => return Ok(FredholmReport::not_fredholm(Route::Left)),
    };
    let n = a.rows();
    let pinv = compose(vec![
        build_nw(&a.inverse()?.mul(&anti.minus_factor)?, w)?,
        sum(vec![
            identity(n),
            scale(C64::new(-0.5, 0.0), hankel(anti.middle())),
        ])?,
        toeplitz(anti.minus_factor.inverse()?),
    ])?;
    finish_report(Route::Left, index, anti.pairs, false, InvertibilityKind::MwPhi, pinv)
}

/// Fredholm analysis of `N_W(A) = T(A) + H(WÃ)`; pseudoinverse
/// `T(A₊⁻¹) (I - ½H(D⁻¹)) M_W(A₊A⁻¹)`.
pub fn analyze_nw(
    a: &RationalMatrixFunction,
    w: &InvolutionMatrix,
) -> Result<FredholmReport> {
    check_square_against(a, w)?;
    let (index, a_plus, pairs) = match analyze_right_family(a, w)? {
        Some(x) => x,
        None => return Ok(FredholmReport::not_fredholm(Route::Right)),
    };
    let n = a.rows();
    let d_inv = middle_factor(
        &pairs
            .iter()
            .map(|p| CharPair::new(p.rho, -p.kappa))
            .collect::<Vec<_>>(),
    );
    let pinv = compose(vec![
        toeplitz(a_plus.inverse()?),
        sum(vec![
            identity(n),
            scale(C64::new(-0.5, 0.0), hankel(d_inv)),
        ])?,
        build_mw(&a_plus.mul(&a.inverse()?)?, w)?,
    ])?;
    finish_report(Route::Right, index, pairs, true, InvertibilityKind::NwPsi, pinv)
}

fn check_square_against(a: &RationalMatrixFunction, w: &InvolutionMatrix) -> Result<()> {
    if !a.is_square() || a.rows() != w.size() {
        return Err(Error::ShapeMismatch(format!(
            "symbol {}x{} against involution of size {}",
            a.rows(),
            a.cols(),
            w.size()
        )));
    }
    Ok(())
}

/// Fredholm analysis of the singular integral operator with flip `Φ(A)`
/// for an even-sized symbol; `W` is the block antidiagonal involution.
/// Pseudoinverse `Ψ(A⁻¹A₋) (I - ½ℋ(DW)) 𝒯(A₋⁻¹)` on the `L²` side.
pub fn analyze_phi(a: &RationalMatrixFunction) -> Result<FredholmReport> {
    let n = even_half(a)?;
    let w = InvolutionMatrix::antidiagonal(n);
    let (index, anti) = match analyze_left_family(a, &w)? {
        Some(x) => x,
        None => return Ok(FredholmReport::not_fredholm(Route::Left)),
    };
    let dw = anti.middle().mul_const(w.matrix())?;
    let pinv = compose(vec![
        build_psi(&a.inverse()?.mul(&anti.minus_factor)?)?,
        sum(vec![
            identity(n),
            scale(C64::new(-0.5, 0.0), build_chank(&dw)?),
        ])?,
        build_ctoep(&anti.minus_factor.inverse()?)?,
    ])?;
    finish_report(Route::Left, index, anti.pairs, false, InvertibilityKind::MwPhi, pinv)
}

/// Fredholm analysis of `Ψ(A)`; pseudoinverse
/// `𝒯(A₊⁻¹) (I - ½ℋ(D⁻¹W)) Φ(A₊A⁻¹)` on the `L²` side.
pub fn analyze_psi(a: &RationalMatrixFunction) -> Result<FredholmReport> {
    let n = even_half(a)?;
    let w = InvolutionMatrix::antidiagonal(n);
    let (index, a_plus, pairs) = match analyze_right_family(a, &w)? {
        Some(x) => x,
        None => return Ok(FredholmReport::not_fredholm(Route::Right)),
    };
    let d_inv_w = middle_factor(
        &pairs
            .iter()
            .map(|p| CharPair::new(p.rho, -p.kappa))
            .collect::<Vec<_>>(),
    )
    .mul_const(w.matrix())?;
    let pinv = compose(vec![
        build_ctoep(&a_plus.inverse()?)?,
        sum(vec![
            identity(n),
            scale(C64::new(-0.5, 0.0), build_chank(&d_inv_w)?),
        ])?,
        build_phi(&a_plus.mul(&a.inverse()?)?)?,
    ])?;
    finish_report(Route::Right, index, pairs, true, InvertibilityKind::NwPsi, pinv)
}

fn even_half(a: &RationalMatrixFunction) -> Result<usize> {
    if !a.is_square() || a.rows() % 2 != 0 {
        return Err(Error::ShapeMismatch(format!(
            "flip operators need an even square symbol, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    Ok(a.rows() / 2)
}

/// Fredholm analysis of the general flip operator `𝒯(A) + ℋ(BW)` with
/// `2N×2N` symbols. The `Ξ` transport identifies it with `T(A) + H(B)` on
/// `(H²)^{2N}`, so dimensions come from the 4N-sized antisymmetric
/// factorization of the left route, and the pseudoinverse is the
/// transported Toeplitz + Hankel pseudoinverse.
pub fn analyze_general_sio(
    a: &RationalMatrixFunction,
    b: &RationalMatrixFunction,
) -> Result<FredholmReport> {
    even_half(a)?;
    even_half(b)?;
    let th = analyze_toeplitz_hankel(a, b, Route::Left)?;
    if !th.fredholm {
        return Ok(FredholmReport::not_fredholm(Route::Left));
    }
    let pinv = xi_inverse(th.pseudoinverse.as_ref().expect("fredholm report"))?;
    let window = probe_window(&pinv);
    Ok(FredholmReport {
        pseudoinverse: Some(pinv),
        window,
        ..th
    })
}

/// Shortcut for W-symmetric symbols (Corollaries to the multiplicativity):
/// for `A ∈ ℬ_W`, `M_W(A) = N_W(A)` is invertible iff `A ∈ Gℬ_W`, with
/// inverse `M_W(A⁻¹)`; no factorization is required.
pub fn bw_shortcut(
    a: &RationalMatrixFunction,
    w: &InvolutionMatrix,
) -> Result<FredholmReport> {
    check_square_against(a, w)?;
    if !a.check_bw_membership(w)? {
        return Err(Error::NotInBW);
    }
    match fredholm_winding(a)? {
        // For B_W symbols Fredholm and invertible coincide.
        None => Ok(FredholmReport::not_fredholm(Route::Left)),
        Some(wind) => {
            let pinv = build_mw(&a.inverse()?, w)?;
            let window = probe_window(&pinv);
            // W Ã W = A forces wind det A = 0 for invertible A.
            debug_assert_eq!(wind, 0);
            Ok(FredholmReport {
                fredholm: true,
                index: Some(0),
                dim_ker: Some(0),
                dim_coker: Some(0),
                pairs: None,
                invertible: Some(true),
                pseudoinverse: Some(pinv),
                route: Route::Left,
                window,
            })
        }
    }
}

/// Convenience: the operator expression a report analyzes, for oracle use.
pub fn toeplitz_hankel_expr(
    a: &RationalMatrixFunction,
    b: &RationalMatrixFunction,
) -> Result<OperatorExpr> {
    ops::sum(vec![ops::toeplitz(a.clone()), ops::hankel(b.clone())])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::LaurentPoly;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn scalar(terms: &[(i64, f64)]) -> RationalMatrixFunction {
        RationalMatrixFunction::from_scalar(LaurentPoly::from_terms(
            &terms.iter().map(|&(k, x)| (k, re(x))).collect::<Vec<_>>(),
        ))
    }

    fn pair(rho: i8, kappa: i64) -> CharPair {
        CharPair::new(rho, kappa)
    }

    #[test]
    fn theta_values() {
        assert_eq!(theta(1, 4), 2);
        assert_eq!(theta(1, 1), 0);
        assert_eq!(theta(-1, 1), 1);
        assert_eq!(theta(-1, -1), 0);
        assert_eq!(theta(1, -1), -1);
        assert_eq!(theta(1, -4), -2);
        assert_eq!(theta(-1, 3), 2);
    }

    #[test]
    fn shift_has_one_cokernel_dim() {
        let rep = analyze_toeplitz_hankel(
            &scalar(&[(1, 1.0)]),
            &RationalMatrixFunction::zero(1, 1),
            Route::Left,
        )
        .unwrap();
        assert!(rep.fredholm);
        assert_eq!(rep.dim_ker, Some(0));
        assert_eq!(rep.dim_coker, Some(1));
        assert_eq!(rep.index, Some(-1));
        assert_eq!(
            rep.pairs.unwrap(),
            vec![pair(-1, 1), pair(1, 1)]
        );
        assert_eq!(rep.invertible, Some(false));
    }

    #[test]
    fn pure_hankel_shift_is_invertible() {
        let rep = analyze_toeplitz_hankel(
            &RationalMatrixFunction::identity(1),
            &scalar(&[(1, 1.0)]),
            Route::Left,
        )
        .unwrap();
        assert_eq!((rep.dim_ker, rep.dim_coker), (Some(0), Some(0)));
        assert_eq!(rep.invertible, Some(true));
        assert_eq!(
            rep.pairs.unwrap(),
            vec![pair(-1, -1), pair(1, 1)]
        );
    }

    #[test]
    fn backward_shift_has_kernel() {
        let rep = analyze_toeplitz_hankel(
            &scalar(&[(-1, 1.0)]),
            &RationalMatrixFunction::zero(1, 1),
            Route::Left,
        )
        .unwrap();
        assert_eq!((rep.dim_ker, rep.dim_coker), (Some(1), Some(0)));
        assert_eq!(rep.index, Some(1));
    }

    #[test]
    fn non_fredholm_symbol_reports_flag() {
        let rep = analyze_toeplitz_hankel(
            &scalar(&[(1, 1.0), (-1, 1.0)]),
            &RationalMatrixFunction::zero(1, 1),
            Route::Left,
        )
        .unwrap();
        assert!(!rep.fredholm);
        assert!(rep.index.is_none() && rep.pairs.is_none());
    }

    #[test]
    fn mw_of_shift_scalar() {
        // N = 1, W = 1, A = t: F = t², pair (+1, 2), dims (0, 1)
        let rep = analyze_mw(&scalar(&[(1, 1.0)]), &InvolutionMatrix::identity(1)).unwrap();
        assert_eq!((rep.dim_ker, rep.dim_coker), (Some(0), Some(1)));
        assert_eq!(rep.pairs.unwrap(), vec![pair(1, 2)]);
    }

    #[test]
    fn mw_of_identity() {
        let rep = analyze_mw(
            &RationalMatrixFunction::identity(2),
            &InvolutionMatrix::antidiagonal(1),
        )
        .unwrap();
        assert_eq!((rep.dim_ker, rep.dim_coker), (Some(0), Some(0)));
        assert_eq!(rep.invertible, Some(true));
    }

    #[test]
    fn phi_psi_of_identity() {
        for rep in [
            analyze_phi(&RationalMatrixFunction::identity(2)).unwrap(),
            analyze_psi(&RationalMatrixFunction::identity(2)).unwrap(),
        ] {
            assert_eq!((rep.dim_ker, rep.dim_coker), (Some(0), Some(0)));
            assert_eq!(rep.invertible, Some(true));
        }
    }

    #[test]
    fn general_sio_identity_and_reduction() {
        let a = RationalMatrixFunction::identity(2);
        let b = RationalMatrixFunction::zero(2, 2);
        let rep = analyze_general_sio(&a, &b).unwrap();
        assert_eq!((rep.dim_ker, rep.dim_coker), (Some(0), Some(0)));
        // B = 0, A = diag(t, 1): dims match 𝒯(A) alone, i.e. T(a)+H(0)
        let a2 = RationalMatrixFunction::diag_monomials(&[(1, re(1.0)), (0, re(1.0))]);
        let rep2 = analyze_general_sio(&a2, &b).unwrap();
        let th = analyze_toeplitz_hankel(&a2, &b, Route::Left).unwrap();
        assert_eq!(rep2.dim_ker, th.dim_ker);
        assert_eq!(rep2.dim_coker, th.dim_coker);
        assert_eq!((rep2.dim_ker, rep2.dim_coker), (Some(0), Some(1)));
    }

    #[test]
    fn classification_sets() {
        assert!(classify_invertibility(
            &[pair(1, 1), pair(-1, -1)],
            InvertibilityKind::MwPhi
        ));
        assert!(!classify_invertibility(
            &[pair(1, 1)],
            InvertibilityKind::NwPsi
        ));
        for kind in [InvertibilityKind::MwPhi, InvertibilityKind::NwPsi] {
            assert!(classify_invertibility(
                &[pair(1, 0), pair(1, 0), pair(1, 0)],
                kind
            ));
        }
    }

    #[test]
    fn middle_hankel_dimension_formula() {
        assert_eq!(middle_hankel_dims(&[pair(1, 2)]), 1);
        assert_eq!(middle_hankel_dims(&[pair(-1, 1)]), 1);
        assert_eq!(middle_hankel_dims(&[pair(1, -3), pair(-1, 0)]), 0);
        assert_eq!(middle_hankel_dims(&[pair(1, 5), pair(-1, 5)]), 5);
    }

    #[test]
    fn invertible_pseudoinverse_is_two_sided_and_route_independent() {
        // (a, b) = (1, t) is invertible; both route pseudoinverses must act
        // as the inverse, hence coincide on finite sections.
        let a = scalar(&[(0, 1.0)]);
        let b = scalar(&[(1, 1.0)]);
        let x = super::toeplitz_hankel_expr(&a, &b).unwrap();
        let left = analyze_toeplitz_hankel(&a, &b, Route::Left).unwrap();
        let right = analyze_toeplitz_hankel(&a, &b, Route::Right).unwrap();
        let xl = left.pseudoinverse.unwrap();
        let xr = right.pseudoinverse.unwrap();
        let n = 8;
        let sec_x = crate::ops::finite_section(&x, n).unwrap();
        let sec_l = crate::ops::finite_section(&xl, n).unwrap();
        let sec_r = crate::ops::finite_section(&xr, n).unwrap();
        let id = crate::numeric::CMat::identity(n, n);
        // X† X = X X† = I up to the section boundary rows (the top-left
        // corner is exact because the symbols are banded)
        let m = n - 3;
        let check = |p: &crate::numeric::CMat| {
            crate::numeric::max_abs(&(p.view((0, 0), (m, m)).into_owned()
                - id.view((0, 0), (m, m)).into_owned()))
        };
        assert!(check(&(&sec_l * &sec_x)) < 1e-9);
        assert!(check(&(&sec_x * &sec_l)) < 1e-9);
        assert!(crate::numeric::max_abs(&(sec_l.view((0, 0), (m, m)).into_owned()
            - sec_r.view((0, 0), (m, m)).into_owned())) < 1e-9);
    }

    #[test]
    fn bw_shortcut_examples() {
        let w = InvolutionMatrix::identity(1);
        let rep = bw_shortcut(&RationalMatrixFunction::identity(1), &w).unwrap();
        assert_eq!(rep.invertible, Some(true));
        // t + t^{-1} + 3 is symmetric with roots off the circle
        let sym = scalar(&[(1, 1.0), (-1, 1.0), (0, 3.0)]);
        let rep = bw_shortcut(&sym, &w).unwrap();
        assert!(rep.fredholm && rep.invertible == Some(true));
        // t + t^{-1} vanishes at ±i
        let bad = scalar(&[(1, 1.0), (-1, 1.0)]);
        let rep = bw_shortcut(&bad, &w).unwrap();
        assert!(!rep.fredholm);
        // non-symmetric symbol is rejected
        assert!(matches!(
            bw_shortcut(&scalar(&[(1, 1.0)]), &w),
            Err(Error::NotInBW)
        ));
    }
}
