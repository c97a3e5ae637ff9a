//! Classical Wiener-Hopf factorization `A = A₋ Λ A₊` for rational matrix
//! functions without zeros or poles of the determinant on the unit circle.
//!
//! `Λ(t) = diag(t^{κ_1}, …, t^{κ_N})` carries the partial indices, sorted
//! ascending. `A₊` together with its inverse is analytic on the closed disk,
//! `A₋` together with its inverse is analytic outside including ∞.
//!
//! Scalar symbols are split exactly from the root locations. Matrix symbols
//! are reduced to a matrix polynomial, whose factorization is read off the
//! null spaces of finite block convolution matrices: with
//! `V_m = {h analytic in the disk : P·h is a polynomial of degree ≤ m}`
//! one has `dim V_m = Σ_j max(0, m - κ_j + 1)`, so the dimension jumps
//! locate the index multiset and stabilized null bases provide the columns
//! of `A₊⁻¹`. Every factorization is post-verified; a result that fails its
//! own audit is reported as `FactorizationFailed` instead of being returned.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::laurent::{LaurentMatrix, LaurentPoly};
use crate::numeric::{self, CMat};
use crate::rational::{audit_minus, audit_plus, FactorAudit, RationalMatrixFunction};
use crate::tol;
use crate::{C64, Result};

/// A verified Wiener-Hopf factorization.
#[derive(Clone, Debug)]
pub struct WHFactorization {
    /// `A₋ ∈ Gℬ₋`.
    pub minus_factor: RationalMatrixFunction,
    /// `A₊ ∈ Gℬ₊`.
    pub plus_factor: RationalMatrixFunction,
    /// Partial indices, ascending.
    pub partial_indices: Vec<i64>,
}

impl WHFactorization {
    /// The middle factor `Λ(t) = diag(t^{κ_j})`.
    pub fn lambda(&self) -> RationalMatrixFunction {
        RationalMatrixFunction::diag_monomials(
            &self
                .partial_indices
                .iter()
                .map(|&k| (k, C64::new(1.0, 0.0)))
                .collect::<Vec<_>>(),
        )
    }

    /// Recomposes `A₋ Λ A₊`.
    pub fn compose(&self) -> Result<RationalMatrixFunction> {
        self.minus_factor.mul(&self.lambda())?.mul(&self.plus_factor)
    }

    /// Groups equal indices into `(κ̄_r, l_r)` blocks, ascending.
    pub fn index_blocks(&self) -> Vec<(i64, usize)> {
        let mut out: Vec<(i64, usize)> = Vec::new();
        for &k in &self.partial_indices {
            match out.last_mut() {
                Some((v, l)) if *v == k => *l += 1,
                _ => out.push((k, 1)),
            }
        }
        out
    }
}

/// Verification report for a factorization against its input.
#[derive(Clone, Debug)]
pub struct WhVerification {
    /// Sup-norm of `A₋ Λ A₊ - F` on the circle grid, relative to the input
    /// coefficient scale.
    pub residual: f64,
    pub minus_audit: FactorAudit,
    pub plus_audit: FactorAudit,
    /// `Σ κ_j`.
    pub index_sum: i64,
    /// `wind det F`, when computable.
    pub winding: Option<i64>,
    pub pass: bool,
}

/// Splits a scalar rational function `r = r₋ · t^κ · r₊` with the zeros and
/// poles of `r₋` strictly inside the open disk and those of `r₊` strictly
/// outside the closed disk; `κ` is the winding number of `r`.
pub fn split_scalar(
    r: &RationalMatrixFunction,
) -> Result<(RationalMatrixFunction, i64, RationalMatrixFunction)> {
    let (p, q) = r
        .scalar_parts()
        .ok_or_else(|| Error::ShapeMismatch("split_scalar needs a 1x1 symbol".into()))?;
    if p.is_zero() {
        return Err(Error::SingularSymbol);
    }
    let (lo_p, p_roots) = p.roots();
    let (lo_q, q_roots) = q.roots();
    debug_assert_eq!(lo_q, 0);
    let classify = |roots: &[C64]| -> Result<(Vec<C64>, Vec<C64>)> {
        let mut inside = Vec::new();
        let mut outside = Vec::new();
        for &z in roots {
            let d = z.norm();
            if (d - 1.0).abs() <= tol::TAU_CIRCLE {
                return Err(Error::NotInvertibleOnCircle(format!(
                    "root at distance {:.2e} from |z|=1",
                    (d - 1.0).abs()
                )));
            }
            if d < 1.0 {
                inside.push(z);
            } else {
                outside.push(z);
            }
        }
        Ok((inside, outside))
    };
    let (p_in, p_out) = classify(&p_roots)?;
    let (q_in, q_out) = classify(&q_roots)?;

    let lead_p = p.coeff(p.highest().unwrap());
    let lead_q = q.coeff(q.highest().unwrap());
    let mut constant = lead_p / lead_q;
    for b in &p_out {
        constant *= -b;
    }
    for b in &q_out {
        constant /= -b;
    }

    let inner_product = |roots: &[C64]| {
        let mut acc = LaurentPoly::one();
        for &a in roots {
            acc = acc.mul(&LaurentPoly::from_terms(&[
                (0, C64::new(1.0, 0.0)),
                (-1, -a),
            ]));
        }
        acc
    };
    let outer_product = |roots: &[C64]| {
        let mut acc = LaurentPoly::one();
        for &b in roots {
            acc = acc.mul(&LaurentPoly::from_terms(&[
                (0, C64::new(1.0, 0.0)),
                (1, -C64::new(1.0, 0.0) / b),
            ]));
        }
        acc
    };

    let minus = RationalMatrixFunction::from_scalar_rational(
        inner_product(&p_in).scale(constant),
        inner_product(&q_in),
    )?;
    let plus =
        RationalMatrixFunction::from_scalar_rational(outer_product(&p_out), outer_product(&q_out))?;
    let kappa = lo_p + p_in.len() as i64 - q_in.len() as i64;

    let recomposed = minus
        .mul_scalar_fn(&RationalMatrixFunction::from_scalar(LaurentPoly::monomial(
            kappa,
            C64::new(1.0, 0.0),
        )))?
        .mul_scalar_fn(&plus)?;
    let resid = recomposed.grid_distance(r, 128)?;
    let scale = r.coeff_scale().max(1.0);
    if resid > 1e-9 * scale {
        return Err(Error::FactorizationFailed(format!(
            "scalar split residual {resid:.2e}"
        )));
    }
    Ok((minus, kappa, plus))
}

/// Wiener-Hopf factorization of a square rational matrix function, with
/// partial indices sorted ascending. The output is always post-verified.
pub fn factor_matrix(f: &RationalMatrixFunction) -> Result<WHFactorization> {
    if !f.is_square() {
        return Err(Error::ShapeMismatch(
            "factorization needs a square symbol".into(),
        ));
    }
    // Fredholm-style precondition: det has no zeros/poles near the circle.
    let _ = f.det_and_winding()?;
    let n = f.rows();
    if n == 1 {
        let (minus, kappa, plus) = split_scalar(f)?;
        let fact = WHFactorization {
            minus_factor: minus,
            plus_factor: plus,
            partial_indices: vec![kappa],
        };
        let report = verify_wh(&fact, f, tol::TAU_RESID)?;
        if !report.pass {
            return Err(Error::FactorizationFailed(format!(
                "scalar verification failed, residual {:.2e}",
                report.residual
            )));
        }
        return Ok(fact);
    }

    // Retries re-run the null-space pipeline after a random constant column
    // mixing, which reshuffles degenerate basis selections.
    let mut last_err = None;
    for attempt in 0..3 {
        match factor_matrix_attempt(f, attempt) {
            Ok(fact) => {
                let fact = refine_factorization(fact, f);
                let report = verify_wh(&fact, f, tol::TAU_RESID)?;
                if report.pass {
                    return Ok(fact);
                }
                last_err = Some(Error::FactorizationFailed(format!(
                    "verification failed: residual {:.2e}, index sum {} vs winding {:?}",
                    report.residual, report.index_sum, report.winding
                )));
            }
            Err(e @ (Error::NotInvertibleOnCircle(_) | Error::SingularSymbol)) => {
                return Err(e);
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::FactorizationFailed("no attempt ran".into())))
}

/// Newton polishing of a factorization. With `E = A₋⁻¹ F A₊⁻¹ - Λ` small,
/// splitting `E = X₋ Λ + Λ X₊` (modes below κ_j go left, the rest right)
/// and updating `A₋ ← A₋(I + X₋)`, `A₊ ← (I + X₊)A₊` cancels the residual
/// to first order. `E` is sampled on the circle, so it costs grid inverses
/// rather than symbolic ones.
fn refine_factorization(
    fact: WHFactorization,
    f: &RationalMatrixFunction,
) -> WHFactorization {
    let n = f.rows();
    let kappa = fact.partial_indices.clone();
    let kmin = *kappa.first().expect("nonempty indices");
    let kmax = *kappa.last().expect("nonempty indices");
    let margin = 24_i64;
    let (lo, hi) = (kmin - margin, kmax + margin);
    let scale = f.coeff_scale().max(1.0);
    let mut minus = fact.minus_factor;
    let mut plus = fact.plus_factor;
    for _ in 0..3 {
        let (e_mat, _) = LaurentMatrix::from_grid_window(n, n, lo, hi, |z| {
            let fm = match (minus.eval_at(z), f.eval_at(z), plus.eval_at(z)) {
                (Ok(am), Ok(fv), Ok(ap)) => (am, fv, ap),
                _ => return CMat::zeros(n, n),
            };
            let am_inv = fm.0.try_inverse();
            let ap_inv = fm.2.try_inverse();
            match (am_inv, ap_inv) {
                (Some(mi), Some(pi)) => mi * fm.1 * pi,
                _ => CMat::zeros(n, n),
            }
        });
        let mut delta = e_mat;
        for (j, &k) in kappa.iter().enumerate() {
            *delta.entry_mut(j, j) =
                delta
                    .entry(j, j)
                    .sub(&LaurentPoly::monomial(k, C64::new(1.0, 0.0)));
        }
        if delta.max_coeff() <= 1e-13 * scale {
            break;
        }
        let mut x_minus = LaurentMatrix::zero(n, n);
        let mut x_plus = LaurentMatrix::zero(n, n);
        for j in 0..n {
            for k in 0..n {
                let mut terms_minus = Vec::new();
                let mut terms_plus = Vec::new();
                for (m, c) in delta.entry(j, k).terms() {
                    if m >= kappa[j] {
                        terms_plus.push((m - kappa[j], c));
                    } else if m <= kappa[k] {
                        terms_minus.push((m - kappa[k], c));
                    }
                    // κ_k < m < κ_j is second order; dropped.
                }
                *x_minus.entry_mut(j, k) = LaurentPoly::from_terms(&terms_minus);
                *x_plus.entry_mut(j, k) = LaurentPoly::from_terms(&terms_plus);
            }
        }
        let corr_minus = RationalMatrixFunction::from_laurent(
            LaurentMatrix::identity(n).add(&x_minus),
        );
        let corr_plus = RationalMatrixFunction::from_laurent(
            LaurentMatrix::identity(n).add(&x_plus),
        );
        match (minus.mul(&corr_minus), corr_plus.mul(&plus)) {
            (Ok(m2), Ok(p2)) => {
                minus = m2;
                plus = p2;
            }
            _ => break,
        }
    }
    WHFactorization {
        minus_factor: minus,
        plus_factor: plus,
        partial_indices: kappa,
    }
}

fn factor_matrix_attempt(f: &RationalMatrixFunction, attempt: usize) -> Result<WHFactorization> {
    let n = f.rows();
    // Mix columns with a random constant invertible matrix on retries:
    // F·C = A₋ Λ (A₊ C), so indices and the minus factor are unchanged.
    let mixing = if attempt == 0 {
        None
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + attempt as u64);
        Some(random_invertible(&mut rng, n, 0.3))
    };
    let target = match &mixing {
        Some(c) => f.mul_const(c)?,
        None => f.clone(),
    };

    // Clear the scalar denominator and the lowest monomial.
    let den = RationalMatrixFunction::from_scalar(target.denominator().clone());
    let (d_minus, d_kappa, d_plus) = split_scalar(&den)?;
    let shift = target.numerator().lowest().unwrap_or(0);
    let poly = target.numerator().shift(-shift);

    let (minus_l, mu, plus_inv_num, plus_inv_den) = factor_polynomial_matrix(&poly)?;

    // A₋ = P₋ / d₋ ;  A₊ = (plus_inv)⁻¹ / d₊ ;  κ_j = μ_j + shift - κ_d.
    let minus_factor =
        RationalMatrixFunction::from_laurent(minus_l).mul_scalar_fn(&d_minus.inverse()?)?;
    let plus_inv = RationalMatrixFunction::new(plus_inv_num, plus_inv_den)?;
    let mut plus_factor = plus_inv.inverse()?.mul_scalar_fn(&d_plus.inverse()?)?;
    if let Some(c) = &mixing {
        // Undo the mixing on the plus side.
        let cinv = c.clone().try_inverse().expect("mixing is invertible");
        plus_factor = plus_factor.mul_const(&cinv)?;
    }
    let partial_indices: Vec<i64> = mu.iter().map(|&m| m + shift - d_kappa).collect();
    Ok(WHFactorization {
        minus_factor,
        plus_factor,
        partial_indices,
    })
}

/// Factorization engine for a matrix polynomial `P` (all exponents ≥ 0) with
/// `det P` free of zeros on the circle. Returns the minus factor (a matrix
/// Laurent polynomial with column `j` supported on `[-μ_j, 0]`), the indices
/// `μ_j ≥ 0` ascending, and `P₊⁻¹` given as a numerator matrix over the
/// scalar denominator `q`, the monic outside root factor of `det P`.
fn factor_polynomial_matrix(
    p: &LaurentMatrix,
) -> Result<(LaurentMatrix, Vec<i64>, LaurentMatrix, LaurentPoly)> {
    let n = p.rows();
    let scale = p.max_coeff();
    if scale == 0.0 {
        return Err(Error::SingularSymbol);
    }
    let p = p.scale(C64::new(1.0 / scale, 0.0));
    let deg = p.highest().unwrap_or(0).max(0) as usize;
    debug_assert!(p.lowest().unwrap_or(0) >= 0);

    let detp = p.det();
    if detp.is_zero() {
        return Err(Error::SingularSymbol);
    }
    let (ord0, roots) = detp.roots();
    let mut outside = Vec::new();
    let mut kappa_tot = ord0;
    for z in roots {
        let d = z.norm();
        if (d - 1.0).abs() <= tol::TAU_CIRCLE {
            return Err(Error::NotInvertibleOnCircle("det P zero near |z|=1".into()));
        }
        if d < 1.0 {
            kappa_tot += 1;
        } else {
            outside.push(z);
        }
    }
    // Unit-scale q keeps the convolution matrix columns balanced even when
    // far outside roots make the monic coefficients large.
    let q_monic = LaurentPoly::from_roots(&outside);
    let q = q_monic.scale(C64::new(1.0 / q_monic.max_coeff().max(1.0), 0.0));
    let nu = outside.len();

    let mut chosen: Vec<ChosenColumn> = Vec::new();
    let mut prev_dim = 0usize;
    let mut prev_jump = 0usize;
    let mut m: i64 = 0;
    while chosen.len() < n {
        if m > kappa_tot {
            return Err(Error::FactorizationFailed(format!(
                "index search passed the winding bound {kappa_tot}"
            )));
        }
        let ell = (n as i64 - 1) * deg as i64 + m;
        let basis = kernel_basis(&p, deg, &q, nu, m, ell);
        let dim = basis.p_part.ncols();
        let jump = dim
            .checked_sub(prev_dim)
            .ok_or_else(|| Error::FactorizationFailed("kernel dimension decreased".into()))?;
        if jump < prev_jump || jump > n {
            return Err(Error::FactorizationFailed(format!(
                "kernel jump {jump} out of range at level {m}"
            )));
        }
        let new_count = jump - prev_jump;
        if new_count > 0 {
            select_new_columns(&mut chosen, &basis, m, ell, n, new_count)?;
        }
        prev_dim = dim;
        prev_jump = jump;
        m += 1;
    }
    let mu: Vec<i64> = chosen.iter().map(|c| c.mu).collect();
    if mu.iter().sum::<i64>() != kappa_tot {
        return Err(Error::FactorizationFailed(format!(
            "index sum {} does not match winding {}",
            mu.iter().sum::<i64>(),
            kappa_tot
        )));
    }

    // Minus factor columns are s_j t^{-μ_j}; the plus factor inverse has
    // columns p_j over the scalar denominator q.
    let mut minus = LaurentMatrix::zero(n, n);
    let mut plus_inv = LaurentMatrix::zero(n, n);
    let col_scale = chosen
        .iter()
        .flat_map(|c| c.s.iter().chain(c.p.iter()).map(|x| x.norm()))
        .fold(0.0_f64, f64::max)
        .max(f64::MIN_POSITIVE);
    for (j, col) in chosen.iter().enumerate() {
        for i in 0..n {
            let s_terms: Vec<(i64, C64)> = col
                .s
                .chunks(n)
                .enumerate()
                .map(|(k, chunk)| (k as i64 - col.mu, chunk[i]))
                .collect();
            *minus.entry_mut(i, j) =
                LaurentPoly::from_terms(&s_terms).chop(tol::REL_DROP * col_scale);
            let p_terms: Vec<(i64, C64)> = col
                .p
                .chunks(n)
                .enumerate()
                .map(|(k, chunk)| (k as i64, chunk[i]))
                .collect();
            *plus_inv.entry_mut(i, j) =
                LaurentPoly::from_terms(&p_terms).chop(tol::REL_DROP * col_scale);
        }
    }
    // Undo the global scaling of P on the minus side.
    let minus = minus.scale(C64::new(scale, 0.0));
    Ok((minus, mu, plus_inv, q))
}

struct ChosenColumn {
    /// Coefficients of `p_j`, mode-major: index = mode·N + component.
    p: Vec<C64>,
    /// Coefficients of `s_j = P p_j / q`, degree ≤ μ_j.
    s: Vec<C64>,
    mu: i64,
}

struct KernelBasis {
    /// Columns are the `p` parts of a null basis, length `N(ℓ+1)`.
    p_part: CMat,
    /// Matching `s` parts, length `N(m+1)`.
    s_part: CMat,
}

/// Null space of the convolution system `P·p - q·s = 0` over polynomial
/// vectors `deg p ≤ ℓ`, `deg s ≤ m`.
fn kernel_basis(p: &LaurentMatrix, deg: usize, q: &LaurentPoly, nu: usize, m: i64, ell: i64) -> KernelBasis {
    let n = p.rows();
    let ell = ell.max(0) as usize;
    let m_us = m.max(0) as usize;
    let p_cols = n * (ell + 1);
    let s_cols = n * (m_us + 1);
    let max_exp = (ell + deg).max(nu + m_us);
    let rows = n * (max_exp + 1);
    let mut mat = CMat::zeros(rows, p_cols + s_cols);
    let coeffs: Vec<CMat> = (0..=deg as i64).map(|k| p.coeff_matrix(k)).collect();
    for col_mode in 0..=ell {
        for (d, cm) in coeffs.iter().enumerate() {
            let row_mode = col_mode + d;
            for i in 0..n {
                for j in 0..n {
                    mat[(row_mode * n + i, col_mode * n + j)] = cm[(i, j)];
                }
            }
        }
    }
    for col_mode in 0..=m_us {
        for (d, qc) in q.terms() {
            let row_mode = col_mode + d as usize;
            for i in 0..n {
                mat[(row_mode * n + i, p_cols + col_mode * n + i)] = -qc;
            }
        }
    }
    let ns = numeric::null_space(&mat, tol::TAU_RANK);
    KernelBasis {
        p_part: ns.rows(0, p_cols).into_owned(),
        s_part: ns.rows(p_cols, s_cols).into_owned(),
    }
}

/// Picks `count` kernel elements at level `m` that are independent of the
/// monomial shifts of the columns chosen at lower levels.
fn select_new_columns(
    chosen: &mut Vec<ChosenColumn>,
    basis: &KernelBasis,
    m: i64,
    ell: i64,
    n: usize,
    count: usize,
) -> Result<()> {
    let ell = ell.max(0) as usize;
    let p_len = n * (ell + 1);
    // Span of t^i p_c for previously chosen columns, i ≤ m - μ_c.
    let mut shift_cols: Vec<Vec<C64>> = Vec::new();
    for col in chosen.iter() {
        let src_modes = col.p.len() / n;
        for i in 0..=(m - col.mu) {
            let mut v = vec![C64::new(0.0, 0.0); p_len];
            for mode in 0..src_modes {
                let dst = mode + i as usize;
                if dst <= ell {
                    for c in 0..n {
                        v[dst * n + c] = col.p[mode * n + c];
                    }
                }
            }
            shift_cols.push(v);
        }
    }
    let projected = if shift_cols.is_empty() {
        basis.p_part.clone()
    } else {
        let mut s = CMat::zeros(p_len, shift_cols.len());
        for (j, c) in shift_cols.iter().enumerate() {
            for (i, &x) in c.iter().enumerate() {
                s[(i, j)] = x;
            }
        }
        let qbasis = numeric::range_basis(&s, tol::TAU_RANK);
        if qbasis.ncols() != shift_cols.len() {
            return Err(Error::FactorizationFailed(
                "monomial shifts of chosen columns are rank deficient".into(),
            ));
        }
        &basis.p_part - &qbasis * (qbasis.adjoint() * &basis.p_part)
    };
    // Pivoted QR of the projected basis: the leading pivot columns are the
    // null vectors least explainable by monomial shifts of earlier choices.
    let qr = numeric::pivoted_qr(&projected);
    let diags = qr.diag_mags();
    let top = diags.first().copied().unwrap_or(0.0);
    for j in 0..count {
        let ok = diags.get(j).map_or(false, |&d| d > tol::TAU_RANK * top) && top > 0.0;
        if !ok {
            return Err(Error::FactorizationFailed(format!(
                "no independent kernel direction at level {m}"
            )));
        }
        let idx = qr.perm[j];
        let p_new = basis.p_part.column(idx).into_owned();
        let s_new = basis.s_part.column(idx).into_owned();
        chosen.push(ChosenColumn {
            p: p_new.iter().cloned().collect(),
            s: s_new.iter().cloned().collect(),
            mu: m,
        });
    }
    Ok(())
}

/// Residual, analyticity membership, and index-sum audit of a factorization.
pub fn verify_wh(
    fact: &WHFactorization,
    f: &RationalMatrixFunction,
    tolerance: f64,
) -> Result<WhVerification> {
    if fact.minus_factor.rows() != f.rows() || fact.plus_factor.rows() != f.rows() {
        return Err(Error::ShapeMismatch(
            "factor shapes differ from input".into(),
        ));
    }
    let recomposed = fact.compose()?;
    let scale = f.coeff_scale().max(1.0);
    let residual = recomposed.grid_distance(f, tol::RESIDUAL_GRID)? / scale;
    let minus_audit = audit_minus(&fact.minus_factor)?;
    let plus_audit = audit_plus(&fact.plus_factor)?;
    let index_sum: i64 = fact.partial_indices.iter().sum();
    let winding = f.winding().ok();
    let pass = residual <= tolerance
        && minus_audit.pass()
        && plus_audit.pass()
        && winding == Some(index_sum);
    Ok(WhVerification {
        residual,
        minus_audit,
        plus_audit,
        index_sum,
        winding,
        pass,
    })
}

/// Applies a random admissible transformation to a factorization: block
/// upper triangular `U` (polynomial strips of degree ≤ κ̄_k - κ̄_j, constant
/// invertible diagonal blocks) and `V` with `V_{jk} = t^{κ̄_j - κ̄_k} U_{jk}`,
/// so `V Λ = Λ U` and `(A₋ V) Λ (U⁻¹ A₊)` reproduces the input with the same
/// partial indices. Deterministic in `seed`.
pub fn perturb_factorization(fact: &WHFactorization, seed: u64) -> WHFactorization {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks = fact.index_blocks();
    let n: usize = blocks.iter().map(|&(_, l)| l).sum();
    let mut u = LaurentMatrix::zero(n, n);
    let mut v = LaurentMatrix::zero(n, n);
    let mut offsets = Vec::with_capacity(blocks.len());
    let mut acc = 0usize;
    for &(_, l) in &blocks {
        offsets.push(acc);
        acc += l;
    }
    for (bj, &(kj, lj)) in blocks.iter().enumerate() {
        let diag = random_invertible(&mut rng, lj, 0.5);
        u.set_block(offsets[bj], offsets[bj], &LaurentMatrix::constant(&diag));
        v.set_block(offsets[bj], offsets[bj], &LaurentMatrix::constant(&diag));
        for (bk, &(kk, lk)) in blocks.iter().enumerate().skip(bj + 1) {
            let degree = kk - kj;
            let mut strip = LaurentMatrix::zero(lj, lk);
            for i in 0..lj {
                for j in 0..lk {
                    let terms: Vec<(i64, C64)> = (0..=degree)
                        .map(|d| {
                            (
                                d,
                                C64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)),
                            )
                        })
                        .collect();
                    *strip.entry_mut(i, j) = LaurentPoly::from_terms(&terms);
                }
            }
            u.set_block(offsets[bj], offsets[bk], &strip);
            v.set_block(offsets[bj], offsets[bk], &strip.shift(kj - kk));
        }
    }
    let v_fn = RationalMatrixFunction::from_laurent(v);
    let u_fn = RationalMatrixFunction::from_laurent(u);
    let minus_factor = fact
        .minus_factor
        .mul(&v_fn)
        .expect("shapes agree by construction");
    let plus_factor = u_fn
        .inverse()
        .expect("det U is a nonzero constant")
        .mul(&fact.plus_factor)
        .expect("shapes agree by construction");
    WHFactorization {
        minus_factor,
        plus_factor,
        partial_indices: fact.partial_indices.clone(),
    }
}

/// Random complex matrix with smallest singular value bounded away from 0.
fn random_invertible(rng: &mut ChaCha8Rng, n: usize, spread: f64) -> CMat {
    loop {
        let mut m = CMat::from_fn(n, n, |_, _| {
            C64::new(rng.gen_range(-spread..spread), rng.gen_range(-spread..spread))
        });
        m += CMat::identity(n, n);
        let sv = m.clone().singular_values();
        let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        if smin > 0.15 {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn scalar(terms: &[(i64, f64)]) -> RationalMatrixFunction {
        RationalMatrixFunction::from_scalar(LaurentPoly::from_terms(
            &terms.iter().map(|&(k, x)| (k, re(x))).collect::<Vec<_>>(),
        ))
    }

    #[test]
    fn split_constant_one() {
        let one = scalar(&[(0, 1.0)]);
        let (m, k, p) = split_scalar(&one).unwrap();
        assert_eq!(k, 0);
        assert!(m.grid_distance(&one, 16).unwrap() < 1e-14);
        assert!(p.grid_distance(&one, 16).unwrap() < 1e-14);
    }

    #[test]
    fn split_root_inside() {
        // t - 1/2 = (1 - (2t)^{-1}) · t · 1
        let r = scalar(&[(1, 1.0), (0, -0.5)]);
        let (m, k, p) = split_scalar(&r).unwrap();
        assert_eq!(k, 1);
        assert!(p.grid_distance(&scalar(&[(0, 1.0)]), 32).unwrap() < 1e-13);
        assert!(
            m.grid_distance(&scalar(&[(0, 1.0), (-1, -0.5)]), 32)
                .unwrap()
                < 1e-13
        );
    }

    #[test]
    fn split_root_outside() {
        // t - 2 = (-2) · t^0 · (1 - t/2)
        let r = scalar(&[(1, 1.0), (0, -2.0)]);
        let (m, k, p) = split_scalar(&r).unwrap();
        assert_eq!(k, 0);
        assert!(m.grid_distance(&scalar(&[(0, -2.0)]), 32).unwrap() < 1e-13);
        assert!(
            p.grid_distance(&scalar(&[(0, 1.0), (1, -0.5)]), 32)
                .unwrap()
                < 1e-13
        );
    }

    #[test]
    fn split_rejects_circle_root() {
        let r = scalar(&[(1, 1.0), (-1, 1.0)]);
        assert!(matches!(
            split_scalar(&r),
            Err(Error::NotInvertibleOnCircle(_))
        ));
    }

    #[test]
    fn factor_diagonal_monomials() {
        let f = RationalMatrixFunction::diag_monomials(&[(1, re(1.0)), (-1, re(1.0))]);
        let fact = factor_matrix(&f).unwrap();
        assert_eq!(fact.partial_indices, vec![-1, 1]);
        let rep = verify_wh(&fact, &f, tol::TAU_RESID).unwrap();
        assert!(rep.pass, "residual {:.2e}", rep.residual);
    }

    #[test]
    fn factor_triangular_example() {
        let mut m = LaurentMatrix::zero(2, 2);
        *m.entry_mut(0, 0) = LaurentPoly::t();
        *m.entry_mut(0, 1) = LaurentPoly::one();
        *m.entry_mut(1, 1) = LaurentPoly::one();
        let f = RationalMatrixFunction::from_laurent(m);
        let fact = factor_matrix(&f).unwrap();
        assert_eq!(fact.partial_indices, vec![0, 1]);
        let rep = verify_wh(&fact, &f, 1e-12).unwrap();
        assert!(rep.pass, "residual {:.2e}", rep.residual);
    }

    #[test]
    fn factor_scalar_times_identity() {
        let mut m = LaurentMatrix::zero(2, 2);
        let p = LaurentPoly::from_terms(&[(1, re(1.0)), (0, re(-0.5))]);
        *m.entry_mut(0, 0) = p.clone();
        *m.entry_mut(1, 1) = p;
        let f = RationalMatrixFunction::from_laurent(m);
        let fact = factor_matrix(&f).unwrap();
        assert_eq!(fact.partial_indices, vec![1, 1]);
        assert!(verify_wh(&fact, &f, tol::TAU_RESID).unwrap().pass);
    }

    #[test]
    fn factor_rational_symbol() {
        // upper triangular with a rational corner: denominator handling
        let a = RationalMatrixFunction::from_scalar_rational(
            LaurentPoly::from_terms(&[(1, re(1.0)), (0, re(-0.5))]),
            LaurentPoly::from_terms(&[(1, re(1.0)), (0, re(-3.0))]),
        )
        .unwrap();
        let b = scalar(&[(1, 1.0)]);
        let z = RationalMatrixFunction::zero(1, 1);
        let f = RationalMatrixFunction::from_blocks(&[vec![&a, &b], vec![&z, &b]]).unwrap();
        let fact = factor_matrix(&f).unwrap();
        assert_eq!(fact.partial_indices.len(), 2);
        assert_eq!(
            fact.partial_indices.iter().sum::<i64>(),
            f.winding().unwrap()
        );
        let rep = verify_wh(&fact, &f, tol::TAU_RESID).unwrap();
        assert!(rep.pass, "residual {:.2e}", rep.residual);
    }

    #[test]
    fn verify_flags_wrong_side_zero() {
        // plus factor with a zero at 1/2 violates Gℬ₊ membership
        let fact = WHFactorization {
            minus_factor: RationalMatrixFunction::identity(1),
            plus_factor: scalar(&[(1, 1.0), (0, -0.5)]),
            partial_indices: vec![0],
        };
        let f = scalar(&[(1, 1.0), (0, -0.5)]);
        let rep = verify_wh(&fact, &f, tol::TAU_RESID).unwrap();
        assert!(!rep.pass);
        assert!(!rep.plus_audit.pass());
    }

    #[test]
    fn verify_identity_factorization() {
        let f = RationalMatrixFunction::identity(2);
        let fact = WHFactorization {
            minus_factor: RationalMatrixFunction::identity(2),
            plus_factor: RationalMatrixFunction::identity(2),
            partial_indices: vec![0, 0],
        };
        let rep = verify_wh(&fact, &f, 1e-12).unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn perturbation_preserves_everything() {
        let f = RationalMatrixFunction::diag_monomials(&[(0, re(1.0)), (1, re(1.0))]);
        let fact = factor_matrix(&f).unwrap();
        let pert = perturb_factorization(&fact, 42);
        assert_eq!(pert.partial_indices, fact.partial_indices);
        let rep = verify_wh(&pert, &f, tol::TAU_RESID).unwrap();
        assert!(rep.pass, "residual {:.2e}", rep.residual);
        // determinism
        let pert2 = perturb_factorization(&fact, 42);
        assert!(
            pert.minus_factor
                .grid_distance(&pert2.minus_factor, 32)
                .unwrap()
                < 1e-14
        );
        // single block case: constant U = V
        let g = RationalMatrixFunction::identity(3);
        let gf = factor_matrix(&g).unwrap();
        let gp = perturb_factorization(&gf, 7);
        assert!(verify_wh(&gp, &g, 1e-10).unwrap().pass);
    }
}
