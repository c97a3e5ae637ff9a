//! Antisymmetric factorization `F = F₋ D F̃₋⁻¹` with characteristic pairs,
//! signature counts, the explicit middle factor `R` with `D = R W R̃⁻¹`, and
//! the two asymmetric factorizations `A = A₋ R A₀` and `A = A₀ R A₊`.
//!
//! The middle factor `D(t) = diag(ρ_k t^{κ_k})` collects sign/exponent data;
//! the multiset of pairs `(ρ_k, κ_k)` is the invariant that determines
//! kernel and cokernel dimensions downstream. A factorization exists exactly
//! when `F = F̃⁻¹` (checked on coefficients) and `F` is invertible in the
//! algebra; the construction runs through a Wiener-Hopf factorization with
//! ascending indices, the block triangular comparison matrix
//! `U = F₊ F̃₋`, the finite square root `(I + N₁)^{1/2}`, and a projector
//! based diagonalization of the constant involutions on the block diagonal.

use crate::error::Error;
use crate::laurent::{LaurentMatrix, LaurentPoly};
use crate::numeric::{self, CMat};
use crate::rational::{audit_minus, InvolutionMatrix, RationalMatrixFunction};
use crate::tol;
use crate::wiener_hopf::{factor_matrix, WHFactorization};
use crate::{C64, Result};

/// One characteristic pair `(ρ, κ)` with `ρ ∈ {-1, +1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CharPair {
    /// Exponent κ. Listed first so the derived order is lexicographic in
    /// `(κ, ρ)`, the canonical order used everywhere.
    pub kappa: i64,
    /// Sign ρ.
    pub rho: i8,
}

impl CharPair {
    pub fn new(rho: i8, kappa: i64) -> Self {
        assert!(rho == 1 || rho == -1, "rho must be ±1");
        CharPair { kappa, rho }
    }

    /// Sorts a pair list into the canonical `(κ, ρ)`-ascending order.
    pub fn canonical(mut pairs: Vec<CharPair>) -> Vec<CharPair> {
        pairs.sort();
        pairs
    }
}

/// The diagonal middle factor `D(t) = diag(ρ_k t^{κ_k})` of a pair list.
pub fn middle_factor(pairs: &[CharPair]) -> RationalMatrixFunction {
    RationalMatrixFunction::diag_monomials(
        &pairs
            .iter()
            .map(|p| (p.kappa, C64::new(p.rho as f64, 0.0)))
            .collect::<Vec<_>>(),
    )
}

/// A verified antisymmetric factorization `F = F₋ D F̃₋⁻¹`.
#[derive(Clone, Debug)]
pub struct AntisymFactorization {
    /// `F₋ ∈ Gℬ₋`.
    pub minus_factor: RationalMatrixFunction,
    /// Characteristic pairs in canonical order, matching the columns of the
    /// minus factor.
    pub pairs: Vec<CharPair>,
}

impl AntisymFactorization {
    pub fn middle(&self) -> RationalMatrixFunction {
        middle_factor(&self.pairs)
    }

    /// Recomposes `F₋ D F̃₋⁻¹`.
    pub fn compose(&self) -> Result<RationalMatrixFunction> {
        self.minus_factor
            .mul(&self.middle())?
            .mul(&self.minus_factor.tilde().inverse()?)
    }
}

/// Intermediates of the construction, exposed for tests.
#[derive(Clone, Debug)]
pub struct AntisymTrace {
    /// Comparison factor `U = F₊ F̃₋`, cleaned to its block triangular shape.
    pub u: LaurentMatrix,
    /// `X = Λ U`.
    pub x: LaurentMatrix,
    /// Block diagonal part of `X`.
    pub x0: LaurentMatrix,
    /// Strictly upper nilpotent part `N₁ = X X₀⁻¹ - I`.
    pub n1: LaurentMatrix,
    /// The finite binomial square root `(I + N₁)^{1/2}`.
    pub sqrt_factor: LaurentMatrix,
    /// Block diagonal eigenbasis `T` of the constant involutions.
    pub t_matrix: CMat,
    /// Per block `(κ̄_r, minus multiplicity q_r, plus multiplicity p_r)`.
    pub block_signs: Vec<(i64, usize, usize)>,
}

/// Checks the necessary condition `F(t) = F̃⁻¹(t)`, i.e. `F·F̃ = I`, on
/// coefficients with a relative tolerance.
pub fn is_antisymmetric(f: &RationalMatrixFunction) -> Result<bool> {
    if !f.is_square() {
        return Err(Error::ShapeMismatch(
            "antisymmetry needs a square symbol".into(),
        ));
    }
    let prod = f.mul(&f.tilde())?;
    let diff = prod.sub(&RationalMatrixFunction::identity(f.rows()))?;
    let scale = f.coeff_scale().max(1.0);
    Ok(diff.numerator().max_coeff() <= tol::TAU_SYMMETRY * scale.powi(2).max(scale))
}

/// Antisymmetric factorization of `F ∈ Gℬ` with `F = F̃⁻¹`.
pub fn antisym_factor(f: &RationalMatrixFunction) -> Result<AntisymFactorization> {
    if !is_antisymmetric(f)? {
        return Err(Error::NotAntisymmetric);
    }
    let wh = factor_matrix(f)?;
    antisym_factor_from_wh(f, &wh).map(|(fact, _)| fact)
}

/// Runs the antisymmetric construction on top of a given Wiener-Hopf
/// factorization of `F` (indices must be ascending). Used directly by the
/// uniqueness tests, which feed perturbed factorizations through here.
pub fn antisym_factor_from_wh(
    f: &RationalMatrixFunction,
    wh: &WHFactorization,
) -> Result<(AntisymFactorization, AntisymTrace)> {
    let n = f.rows();
    let blocks = wh.index_blocks();
    debug_assert!(wh.partial_indices.windows(2).all(|w| w[0] <= w[1]));
    let kbar: Vec<i64> = blocks.iter().map(|&(k, _)| k).collect();
    let sizes: Vec<usize> = blocks.iter().map(|&(_, l)| l).collect();
    let mut offsets = Vec::with_capacity(blocks.len());
    let mut acc = 0;
    for &l in &sizes {
        offsets.push(acc);
        acc += l;
    }
    let span = kbar.last().unwrap() - kbar[0];

    // U = F₊ · F̃₋ is block upper triangular with polynomial strips of
    // degree κ̄_k - κ̄_j and constant diagonal blocks.
    let u_rational = wh.plus_factor.mul(&wh.minus_factor.tilde())?;
    let (u_raw, leak) = LaurentMatrix::from_grid_window(n, n, -2, span + 2, |z| {
        u_rational.eval_at(z).unwrap_or_else(|_| CMat::zeros(n, n))
    });
    let u_scale = u_raw.max_coeff().max(f64::MIN_POSITIVE);
    let shape_tol = 1e-6 * u_scale;
    if leak > shape_tol {
        return Err(Error::FactorizationFailed(format!(
            "comparison factor U has out-of-band mass {leak:.2e}"
        )));
    }
    // Verify and enforce the block triangular shape.
    let mut u = LaurentMatrix::zero(n, n);
    let mut worst_violation = 0.0_f64;
    for (bj, &lj) in sizes.iter().enumerate() {
        for (bk, &lk) in sizes.iter().enumerate() {
            let blk = u_raw.block(offsets[bj], offsets[bk], lj, lk);
            if bk < bj {
                worst_violation = worst_violation.max(blk.max_coeff());
                continue;
            }
            let max_deg = kbar[bk] - kbar[bj];
            let mut cleaned = LaurentMatrix::zero(lj, lk);
            for i in 0..lj {
                for j in 0..lk {
                    let mut kept = Vec::new();
                    for (k, c) in blk.entry(i, j).terms() {
                        if k >= 0 && k <= max_deg {
                            kept.push((k, c));
                        } else {
                            worst_violation = worst_violation.max(c.norm());
                        }
                    }
                    *cleaned.entry_mut(i, j) =
                        LaurentPoly::from_terms(&kept).chop(tol::REL_DROP * u_scale);
                }
            }
            u.set_block(offsets[bj], offsets[bk], &cleaned);
        }
    }
    if worst_violation > shape_tol {
        return Err(Error::FactorizationFailed(format!(
            "comparison factor U violates the triangular shape by {worst_violation:.2e}"
        )));
    }

    // X = Λ U; its block diagonal carries constant involutions X_r t^{κ̄_r}.
    let mut x = LaurentMatrix::zero(n, n);
    for (bj, &lj) in sizes.iter().enumerate() {
        let row_block = u.block(offsets[bj], 0, lj, n).shift(kbar[bj]);
        x.set_block(offsets[bj], 0, &row_block);
    }
    let mut x0 = LaurentMatrix::zero(n, n);
    let mut x0_inv = LaurentMatrix::zero(n, n);
    let mut invol = Vec::with_capacity(blocks.len());
    for (br, (&lr, &kr)) in sizes.iter().zip(kbar.iter()).enumerate() {
        let xr = u.block(offsets[br], offsets[br], lr, lr).coeff_matrix(0);
        let dev = numeric::max_abs(&(&xr * &xr - CMat::identity(lr, lr)));
        if dev > tol::TAU_INVOL {
            return Err(Error::FactorizationFailed(format!(
                "diagonal block {br} is not involutive: |X²-I| = {dev:.2e}"
            )));
        }
        x0.set_block(
            offsets[br],
            offsets[br],
            &LaurentMatrix::constant(&xr).shift(kr),
        );
        // X_r² = I, so X_r⁻¹ = X_r.
        x0_inv.set_block(
            offsets[br],
            offsets[br],
            &LaurentMatrix::constant(&xr).shift(-kr),
        );
        invol.push(xr);
    }

    // N₁ = X X₀⁻¹ - I is nilpotent of order ≤ number of blocks; the binomial
    // series for (I + N₁)^{1/2} terminates there.
    let n1 = x.matmul(&x0_inv).sub(&LaurentMatrix::identity(n));
    let mut sqrt_factor = LaurentMatrix::identity(n);
    let mut power = LaurentMatrix::identity(n);
    let mut coeff = 1.0_f64;
    for i in 1..blocks.len().max(1) {
        power = power.matmul(&n1);
        coeff *= (0.5 - (i as f64 - 1.0)) / i as f64;
        sqrt_factor = sqrt_factor.add(&power.scale(C64::new(coeff, 0.0)));
        if power.max_coeff() == 0.0 {
            break;
        }
    }

    // Diagonalize each constant involution through the spectral projectors
    // (I ± X_r)/2; minus columns first to land in canonical pair order.
    let mut t_matrix = CMat::zeros(n, n);
    let mut pairs = Vec::with_capacity(n);
    let mut block_signs = Vec::with_capacity(blocks.len());
    for (br, xr) in invol.iter().enumerate() {
        let lr = sizes[br];
        let id = CMat::identity(lr, lr);
        let minus_basis =
            numeric::range_basis_with_floor(&(&id - xr).scale(0.5), tol::PROJECTOR_CUT, 1.0);
        let plus_basis =
            numeric::range_basis_with_floor(&(&id + xr).scale(0.5), tol::PROJECTOR_CUT, 1.0);
        let (q_r, p_r) = (minus_basis.ncols(), plus_basis.ncols());
        if q_r + p_r != lr {
            return Err(Error::FactorizationFailed(format!(
                "projector ranks {q_r}+{p_r} do not fill block of size {lr}"
            )));
        }
        t_matrix
            .view_mut((offsets[br], offsets[br]), (lr, q_r))
            .copy_from(&minus_basis);
        t_matrix
            .view_mut((offsets[br], offsets[br] + q_r), (lr, p_r))
            .copy_from(&plus_basis);
        for _ in 0..q_r {
            pairs.push(CharPair::new(-1, kbar[br]));
        }
        for _ in 0..p_r {
            pairs.push(CharPair::new(1, kbar[br]));
        }
        block_signs.push((kbar[br], q_r, p_r));
    }

    let combined = sqrt_factor.matmul(&LaurentMatrix::constant(&t_matrix));
    let minus_factor = wh
        .minus_factor
        .mul(&RationalMatrixFunction::from_laurent(combined))?;

    let fact = AntisymFactorization {
        minus_factor,
        pairs,
    };
    // Self check: residual and minus membership.
    let recomposed = fact.compose()?;
    let scale = f.coeff_scale().max(1.0);
    let residual = recomposed.grid_distance(f, tol::RESIDUAL_GRID)? / scale;
    if residual > tol::TAU_RESID {
        return Err(Error::FactorizationFailed(format!(
            "antisymmetric residual {residual:.2e}"
        )));
    }
    if !audit_minus(&fact.minus_factor)?.pass() {
        return Err(Error::FactorizationFailed(
            "minus factor failed the Gℬ₋ audit".into(),
        ));
    }
    let trace = AntisymTrace {
        u,
        x,
        x0,
        n1,
        sqrt_factor,
        t_matrix,
        block_signs,
    };
    Ok((fact, trace))
}

/// The counts `(α, β, γ, δ)` classifying pairs by sign and parity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignatureCounts {
    /// `ρ = +1`, κ even.
    pub alpha: usize,
    /// `ρ = +1`, κ odd.
    pub beta: usize,
    /// `ρ = -1`, κ odd.
    pub gamma: usize,
    /// `ρ = -1`, κ even.
    pub delta: usize,
}

pub fn signature_counts(pairs: &[CharPair]) -> SignatureCounts {
    let mut c = SignatureCounts {
        alpha: 0,
        beta: 0,
        gamma: 0,
        delta: 0,
    };
    for p in pairs {
        let even = p.kappa.rem_euclid(2) == 0;
        match (p.rho, even) {
            (1, true) => c.alpha += 1,
            (1, false) => c.beta += 1,
            (-1, false) => c.gamma += 1,
            (-1, true) => c.delta += 1,
            _ => unreachable!(),
        }
    }
    c
}

/// Eigenvalue signature `(#+1, #-1)` of a constant involution.
fn involution_signature(m: &CMat) -> Result<(usize, usize)> {
    let nn = m.nrows();
    let dev = numeric::max_abs(&(m * m - CMat::identity(nn, nn)));
    if dev > tol::TAU_INVOL {
        return Err(Error::SignatureMismatch(format!(
            "value is not an involution: |C²-I| = {dev:.2e}"
        )));
    }
    let id = CMat::identity(nn, nn);
    let plus = numeric::rank_with_floor(&(&id + m).scale(0.5), tol::PROJECTOR_CUT, 1.0);
    let minus = numeric::rank_with_floor(&(&id - m).scale(0.5), tol::PROJECTOR_CUT, 1.0);
    if plus + minus != nn {
        return Err(Error::SignatureMismatch(
            "projector ranks do not fill the space".into(),
        ));
    }
    Ok((plus, minus))
}

/// Checks that `F(1) ~ diag(I_{α+β}, -I_{γ+δ})` and
/// `F(-1) ~ diag(I_{α+γ}, -I_{β+δ})`.
pub fn check_signatures(f: &RationalMatrixFunction, counts: &SignatureCounts) -> Result<bool> {
    let at_one = involution_signature(&f.eval_at(C64::new(1.0, 0.0))?)?;
    let at_minus_one = involution_signature(&f.eval_at(C64::new(-1.0, 0.0))?)?;
    Ok(at_one == (counts.alpha + counts.beta, counts.gamma + counts.delta)
        && at_minus_one == (counts.alpha + counts.gamma, counts.beta + counts.delta))
}

/// Which identity the constructed middle factor satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MiddleVariant {
    /// `D(t) = R(t) W R̃⁻¹(t)` (used by the left asymmetric factorization).
    RWRinv,
    /// `D(t) = R̃⁻¹(t) W R(t)` (used by the right asymmetric factorization).
    RinvWR,
}

/// Builds `R ∈ Gℬ` with `D = R W R̃⁻¹` (or the variant) for the diagonal `D`
/// defined by `pairs`, provided `D(1) ~ D(-1) ~ W`.
///
/// The construction sorts the pairs into even/+1, even/-1 and paired odd
/// blocks, maps them onto monomial roots `t^{κ/2}` and explicit 2×2 odd
/// blocks, and conjugates into the eigenbasis of `W`.
pub fn build_middle_r(
    pairs: &[CharPair],
    w: &InvolutionMatrix,
    variant: MiddleVariant,
) -> Result<RationalMatrixFunction> {
    let n = pairs.len();
    if w.size() != n {
        return Err(Error::ShapeMismatch(format!(
            "{} pairs vs involution of size {}",
            n,
            w.size()
        )));
    }
    let counts = signature_counts(pairs);
    if counts.beta != counts.gamma {
        return Err(Error::SignatureMismatch(format!(
            "β = {} differs from γ = {}",
            counts.beta, counts.gamma
        )));
    }
    let (sig_plus, sig_minus) = w.signature();
    if sig_plus != counts.alpha + counts.beta || sig_minus != counts.gamma + counts.delta {
        return Err(Error::SignatureMismatch(format!(
            "W signature ({sig_plus},{sig_minus}) does not match D(±1)"
        )));
    }

    let mut alpha_idx = Vec::new();
    let mut delta_idx = Vec::new();
    let mut beta_idx = Vec::new();
    let mut gamma_idx = Vec::new();
    for (i, p) in pairs.iter().enumerate() {
        let even = p.kappa.rem_euclid(2) == 0;
        match (p.rho, even) {
            (1, true) => alpha_idx.push(i),
            (-1, true) => delta_idx.push(i),
            (1, false) => beta_idx.push(i),
            (-1, false) => gamma_idx.push(i),
            _ => unreachable!(),
        }
    }

    // Block layout: [α evens/+] [δ evens/-] [β odd 2×2 pairs].
    let mut perm1 = Vec::with_capacity(n);
    perm1.extend(&alpha_idx);
    perm1.extend(&delta_idx);
    for i in 0..counts.beta {
        perm1.push(beta_idx[i]);
        perm1.push(gamma_idx[i]);
    }
    let pi1 = permutation_matrix(&perm1);

    let mut r_block = LaurentMatrix::zero(n, n);
    let mut pos = 0usize;
    for &i in &alpha_idx {
        *r_block.entry_mut(pos, pos) =
            LaurentPoly::monomial(pairs[i].kappa / 2, C64::new(1.0, 0.0));
        pos += 1;
    }
    for &i in &delta_idx {
        *r_block.entry_mut(pos, pos) =
            LaurentPoly::monomial(pairs[i].kappa / 2, C64::new(1.0, 0.0));
        pos += 1;
    }
    for i in 0..counts.beta {
        let k3 = pairs[beta_idx[i]].kappa;
        let k4 = pairs[gamma_idx[i]].kappa;
        let a = (k3 - k4) / 2;
        let b = (k3 + k4) / 2;
        let half = C64::new(0.5, 0.0);
        *r_block.entry_mut(pos, pos) = LaurentPoly::from_terms(&[(a, half), (b, half)]);
        *r_block.entry_mut(pos, pos + 1) = LaurentPoly::from_terms(&[(a, half), (b, -half)]);
        *r_block.entry_mut(pos + 1, pos) = LaurentPoly::from_terms(&[(0, half), (k4, -half)]);
        *r_block.entry_mut(pos + 1, pos + 1) = LaurentPoly::from_terms(&[(0, half), (k4, half)]);
        pos += 2;
    }

    // W = T Π₂ diag(I_α, -I_δ, X_β) Π₂⁻¹ T⁻¹ with the eigenbasis T sorted
    // (+1 block first). Π₂ routes block-layout slots to eigenbasis slots.
    let (t_eig, sp, _sm) = w.eigenbasis();
    debug_assert_eq!(sp, sig_plus);
    let mut perm2 = Vec::with_capacity(n);
    for i in 0..counts.alpha {
        perm2.push(i);
    }
    for i in 0..counts.delta {
        perm2.push(sig_plus + i);
    }
    for i in 0..counts.beta {
        perm2.push(counts.alpha + i);
        perm2.push(sig_plus + counts.delta + i);
    }
    let pi2 = permutation_matrix(&perm2);

    let t_inv = t_eig
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::SignatureMismatch("eigenbasis of W is singular".into()))?;
    let pi2_inv = pi2.transpose();
    let tail = &pi2_inv * &t_inv;
    let r = RationalMatrixFunction::from_laurent(r_block)
        .lmul_const(&pi1)?
        .mul_const(&tail)?;
    let r = match variant {
        MiddleVariant::RWRinv => r,
        MiddleVariant::RinvWR => r.tilde().inverse()?,
    };

    // Verify the defining identity on the grid.
    let d = middle_factor(pairs);
    let product = match variant {
        MiddleVariant::RWRinv => r.mul_const(w.matrix())?.mul(&r.tilde().inverse()?)?,
        MiddleVariant::RinvWR => r.tilde().inverse()?.mul_const(w.matrix())?.mul(&r)?,
    };
    let resid = product.grid_distance(&d, 128)?;
    if resid > 1e-8 {
        return Err(Error::FactorizationFailed(format!(
            "middle factor residual {resid:.2e}"
        )));
    }
    Ok(r)
}

/// Permutation matrix with `m e_j = e_{perm[j]}`.
fn permutation_matrix(perm: &[usize]) -> CMat {
    let n = perm.len();
    let mut m = CMat::zeros(n, n);
    for (j, &i) in perm.iter().enumerate() {
        m[(i, j)] = C64::new(1.0, 0.0);
    }
    m
}

/// Result of an asymmetric factorization.
#[derive(Clone, Debug)]
pub struct AsymFactorization {
    /// The one-sided factor: `A₋` for the left form, `A₊` for the right.
    pub outer: RationalMatrixFunction,
    /// The middle factor `R`.
    pub r: RationalMatrixFunction,
    /// The W-symmetric factor `A₀ ∈ Gℬ_W`.
    pub zero: RationalMatrixFunction,
    /// Characteristic pairs of the associated antisymmetric factorization.
    pub pairs: Vec<CharPair>,
}

/// Left asymmetric factorization `A = A₋ R A₀` with `A₀ ∈ Gℬ_W` and
/// `D = R W R̃⁻¹` the middle factor of `F = A W Ã⁻¹ = A₋ D Ã₋⁻¹`.
pub fn asym_factor_left(
    a: &RationalMatrixFunction,
    w: &InvolutionMatrix,
) -> Result<AsymFactorization> {
    let f = a.mul_const(w.matrix())?.mul(&a.tilde().inverse()?)?;
    let anti = antisym_factor(&f)?;
    let r = build_middle_r(&anti.pairs, w, MiddleVariant::RWRinv)?;
    let zero = r.inverse()?.mul(&anti.minus_factor.inverse()?)?.mul(a)?;
    verify_asym(a, &anti.minus_factor, &r, &zero, w, true)?;
    Ok(AsymFactorization {
        outer: anti.minus_factor,
        r,
        zero,
        pairs: anti.pairs,
    })
}

/// Right asymmetric factorization `A = A₀ R A₊` with `A₀ ∈ Gℬ_W` and
/// `D = R̃⁻¹ W R` the middle factor of `G = Ã⁻¹ W A = Ã₊⁻¹ D A₊`.
pub fn asym_factor_right(
    a: &RationalMatrixFunction,
    w: &InvolutionMatrix,
) -> Result<AsymFactorization> {
    let g = a.tilde().inverse()?.mul_const(w.matrix())?.mul(a)?;
    let anti = antisym_factor(&g)?;
    // G = G₋ D G̃₋⁻¹ rewrites as G = Ã₊⁻¹ D A₊ with A₊ = G̃₋⁻¹.
    let a_plus = anti.minus_factor.tilde().inverse()?;
    let r = build_middle_r(&anti.pairs, w, MiddleVariant::RinvWR)?;
    let zero = a.mul(&a_plus.inverse()?)?.mul(&r.inverse()?)?;
    verify_asym(a, &a_plus, &r, &zero, w, false)?;
    Ok(AsymFactorization {
        outer: a_plus,
        r,
        zero,
        pairs: anti.pairs,
    })
}

fn verify_asym(
    a: &RationalMatrixFunction,
    outer: &RationalMatrixFunction,
    r: &RationalMatrixFunction,
    zero: &RationalMatrixFunction,
    w: &InvolutionMatrix,
    left: bool,
) -> Result<()> {
    let product = if left {
        outer.mul(r)?.mul(zero)?
    } else {
        zero.mul(r)?.mul(outer)?
    };
    let scale = a.coeff_scale().max(1.0);
    let resid = product.grid_distance(a, tol::RESIDUAL_GRID)? / scale;
    if resid > tol::TAU_RESID {
        return Err(Error::FactorizationFailed(format!(
            "asymmetric residual {resid:.2e}"
        )));
    }
    if !zero.check_bw_membership(w)? {
        return Err(Error::FactorizationFailed("A₀ is not W-symmetric".into()));
    }
    zero.det_and_winding()
        .map_err(|_| Error::FactorizationFailed("A₀ is not invertible on the circle".into()))?;
    Ok(())
}
