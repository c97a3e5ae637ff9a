//! Independent numerical verification.
//!
//! Nothing here consumes factorization output: every check recomputes from
//! the symbols. The three instruments are
//!
//! * [`sv_splitting`] — the splitting property of finite-section singular
//!   values: for a Fredholm operator, exactly `dim ker + dim coker`
//!   approximation numbers of the `n×n` sections tend to zero, so counting
//!   tiny singular values at two sizes with a stable gap estimates the
//!   total defect;
//! * [`verify_pseudoinverse`] — residuals of `X X† X = X` and
//!   `X† X X† = X†` on random finitely supported vectors;
//! * [`identity_suite`] — the algebra of Toeplitz, Hankel, flip and
//!   multiplication operators checked by exact application on random
//!   polynomial symbols.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::antisym::{build_middle_r, middle_factor, signature_counts, CharPair, MiddleVariant};
use crate::error::Error;
use crate::laurent::{LaurentMatrix, LaurentPoly};
use crate::numeric::{self, CMat};
use crate::ops::{
    self, apply, build_chank, build_ctoep, build_mw, build_nw, build_phi, build_psi, compose,
    finite_section, flip_j, hankel, identity, mult, riesz_p, riesz_q, scale, sum, toeplitz,
    FourierVec, OperatorExpr,
};
use crate::rational::{InvolutionMatrix, RationalMatrixFunction};
use crate::solver::lemma42_operators;
use crate::tol;
use crate::{C64, Result};

/// Estimated total defect `dim ker + dim coker` from finite sections.
#[derive(Clone, Debug)]
pub struct SplittingEstimate {
    pub total_defect: usize,
    pub sizes_used: Vec<usize>,
    /// Per size: the handful of smallest singular values, ascending.
    pub smallest_singular_values: Vec<(usize, Vec<f64>)>,
    /// Count stable across at least two sizes with gap ratio ≥ 10³.
    pub confident: bool,
}

impl SplittingEstimate {
    /// Converts a non-confident estimate into the `Inconclusive` error.
    pub fn ensure_confident(self) -> Result<Self> {
        if self.confident {
            Ok(self)
        } else {
            Err(Error::Inconclusive(format!(
                "defect counts/gaps unstable across sizes {:?}",
                self.sizes_used
            )))
        }
    }
}

/// Counts near-zero singular values of finite sections at the given sizes.
pub fn sv_splitting(
    expr: &OperatorExpr,
    sizes: &[usize],
    tau_split: f64,
) -> Result<SplittingEstimate> {
    if sizes.is_empty() {
        return Err(Error::Inconclusive("no section sizes requested".into()));
    }
    let mut counts = Vec::new();
    let mut tables = Vec::new();
    let mut worst_gap = f64::INFINITY;
    for &n in sizes {
        let sec = finite_section(expr, n)?;
        let mut sv = numeric::singular_values(&sec);
        sv.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let smax = sv.last().copied().unwrap_or(0.0);
        let thresh = tau_split * smax;
        let count = sv.iter().filter(|&&s| s < thresh).count();
        let zero_max = if count > 0 { sv[count - 1] } else { 0.0 };
        let retained_min = sv.get(count).copied().unwrap_or(smax);
        let gap = if zero_max > 0.0 {
            retained_min / zero_max
        } else {
            f64::INFINITY
        };
        worst_gap = worst_gap.min(gap);
        let keep = (count + 3).min(sv.len());
        tables.push((n, sv[..keep].to_vec()));
        counts.push(count);
    }
    let stable = counts.len() >= 2 && counts.windows(2).all(|w| w[0] == w[1]);
    let confident = stable && worst_gap >= tol::SPLIT_GAP_RATIO;
    Ok(SplittingEstimate {
        total_defect: *counts.last().unwrap(),
        sizes_used: sizes.to_vec(),
        smallest_singular_values: tables,
        confident,
    })
}

/// Residual report for the pseudoinverse axioms.
#[derive(Clone, Debug)]
pub struct PseudoinverseReport {
    /// Max over trials of `‖(X X† X - X) v‖₂ / ‖v‖₂`.
    pub residual_xdx: f64,
    /// Max over trials of `‖(X† X X† - X†) v‖₂ / ‖v‖₂`.
    pub residual_dxd: f64,
    /// Propagated window tail bounds, added to the pass tolerance.
    pub tail_bound: f64,
    pub pass: bool,
}

/// Checks `X X† X = X` and `X† X X† = X†` on random finitely supported
/// Hardy-side vectors. Deterministic in `seed`.
pub fn verify_pseudoinverse(
    x: &OperatorExpr,
    xd: &OperatorExpr,
    trials: usize,
    window: usize,
    tolerance: f64,
    seed: u64,
) -> Result<PseudoinverseReport> {
    let (xi, xo) = x.shape();
    let (di, do_) = xd.shape();
    if xi != do_ || xo != di {
        return Err(Error::ShapeMismatch(format!(
            "X is {xo}x{xi}, X† is {do_}x{di}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_xdx = 0.0_f64;
    let mut worst_dxd = 0.0_f64;
    let mut worst_tail = 0.0_f64;
    for _ in 0..trials.max(1) {
        let v = gen::random_fourier_vec(&mut rng, xi, 0, 8);
        let scale_v = v.norm_l2().max(f64::MIN_POSITIVE);
        let (xv, b1) = apply(x, &v, window)?;
        let (dxv, b2) = apply(xd, &xv, window)?;
        let (xdxv, b3) = apply(x, &dxv, window)?;
        worst_xdx = worst_xdx.max(xdxv.sub(&xv).norm_l2() / scale_v);
        worst_tail = worst_tail.max((b1 + b2 + b3) / scale_v);

        let u = gen::random_fourier_vec(&mut rng, di, 0, 8);
        let scale_u = u.norm_l2().max(f64::MIN_POSITIVE);
        let (du, c1) = apply(xd, &u, window)?;
        let (xdu, c2) = apply(x, &du, window)?;
        let (dxdu, c3) = apply(xd, &xdu, window)?;
        worst_dxd = worst_dxd.max(dxdu.sub(&du).norm_l2() / scale_u);
        worst_tail = worst_tail.max((c1 + c2 + c3) / scale_u);
    }
    let pass = worst_xdx <= tolerance + worst_tail && worst_dxd <= tolerance + worst_tail;
    Ok(PseudoinverseReport {
        residual_xdx: worst_xdx,
        residual_dxd: worst_dxd,
        tail_bound: worst_tail,
        pass,
    })
}

/// One row of the identity suite report.
#[derive(Clone, Debug)]
pub struct IdentityResult {
    pub name: String,
    pub max_residual: f64,
    pub pass: bool,
}

/// Outcome of the full identity suite.
#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub cases: usize,
    pub results: Vec<IdentityResult>,
    pub threshold: f64,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }

    pub fn worst(&self) -> f64 {
        self.results
            .iter()
            .map(|r| r.max_residual)
            .fold(0.0, f64::max)
    }
}

struct SuiteAccumulator {
    worst: std::collections::BTreeMap<String, f64>,
}

impl SuiteAccumulator {
    fn new() -> Self {
        SuiteAccumulator {
            worst: std::collections::BTreeMap::new(),
        }
    }

    fn record(&mut self, name: &str, residual: f64) {
        let e = self.worst.entry(name.to_string()).or_insert(0.0);
        *e = e.max(residual);
    }
}

/// Residual of `lhs - rhs` applied to the probes, sup norm.
fn expr_residual(
    lhs: &OperatorExpr,
    rhs: &OperatorExpr,
    probes: &[FourierVec],
) -> Result<f64> {
    let mut worst = 0.0_f64;
    for v in probes {
        let (a, _) = apply(lhs, v, tol::WINDOW_DEFAULT)?;
        let (b, _) = apply(rhs, v, tol::WINDOW_DEFAULT)?;
        worst = worst.max(a.sub(&b).norm_sup());
    }
    Ok(worst)
}

fn section_residual(lhs: &OperatorExpr, rhs: &OperatorExpr, n: usize) -> Result<f64> {
    let a = finite_section(lhs, n)?;
    let b = finite_section(rhs, n)?;
    Ok(numeric::max_abs(&(a - b)))
}

/// Runs the seeded identity suite: the Toeplitz/Hankel product formulas,
/// the `M_W`/`N_W` algebra, the flip relations, the `𝒯`/`ℋ`/`Φ`/`Ψ`
/// analogues, the adjoint connections, and the middle-factor lemmas.
/// All symbols are random Laurent polynomials (degrees ≤ 3, sizes ≤ 3), so
/// every application is exact.
pub fn identity_suite(seed: u64, cases: usize) -> Result<IdentityReport> {
    let mut acc = SuiteAccumulator::new();
    for case in 0..cases {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(case as u64));
        run_identity_case(&mut rng, &mut acc)?;
    }
    let threshold = 1e-12;
    let results = acc
        .worst
        .into_iter()
        .map(|(name, max_residual)| IdentityResult {
            pass: max_residual <= threshold,
            name,
            max_residual,
        })
        .collect();
    Ok(IdentityReport {
        cases,
        results,
        threshold,
    })
}

fn run_identity_case(rng: &mut ChaCha8Rng, acc: &mut SuiteAccumulator) -> Result<()> {
    let n = rng.gen_range(1..=3_usize);
    let a = gen::random_poly_matrix(rng, n, n, -3, 3);
    let b = gen::random_poly_matrix(rng, n, n, -3, 3);
    let w = gen::random_exact_involution(rng, n);
    let h_probes: Vec<FourierVec> = (0..3)
        .map(|_| gen::random_fourier_vec(rng, n, 0, 6))
        .collect();
    let l_probes: Vec<FourierVec> = (0..3)
        .map(|_| gen::random_fourier_vec(rng, n, -5, 5))
        .collect();

    // §1 basics: J² = I, JPJ = Q, JM(A)J = M(Ã), P² = P, Q² = Q, P + Q = I.
    let j = flip_j(n);
    let p = riesz_p(n);
    let q = riesz_q(n);
    acc.record(
        "J^2 = I",
        expr_residual(
            &compose(vec![j.clone(), j.clone()])?,
            &identity(n),
            &l_probes,
        )?,
    );
    acc.record(
        "JPJ = Q",
        expr_residual(
            &compose(vec![j.clone(), p.clone(), j.clone()])?,
            &q,
            &l_probes,
        )?,
    );
    acc.record(
        "JM(A)J = M(A~)",
        expr_residual(
            &compose(vec![j.clone(), mult(a.clone()), j.clone()])?,
            &mult(a.tilde()),
            &l_probes,
        )?,
    );
    acc.record(
        "P^2 = P",
        expr_residual(&compose(vec![p.clone(), p.clone()])?, &p, &l_probes)?,
    );
    acc.record(
        "P + Q = I",
        expr_residual(&sum(vec![p.clone(), q.clone()])?, &identity(n), &l_probes)?,
    );

    // Toeplitz/Hankel product formulas.
    let ab = a.mul(&b)?;
    acc.record(
        "T(AB) = T(A)T(B) + H(A)H(B~)",
        expr_residual(
            &toeplitz(ab.clone()),
            &sum(vec![
                compose(vec![toeplitz(a.clone()), toeplitz(b.clone())])?,
                compose(vec![hankel(a.clone()), hankel(b.tilde())])?,
            ])?,
            &h_probes,
        )?,
    );
    acc.record(
        "H(AB) = T(A)H(B) + H(A)T(B~)",
        expr_residual(
            &hankel(ab.clone()),
            &sum(vec![
                compose(vec![toeplitz(a.clone()), hankel(b.clone())])?,
                compose(vec![hankel(a.clone()), toeplitz(b.tilde())])?,
            ])?,
            &h_probes,
        )?,
    );

    // M_W / N_W product corrections and multiplicativity cases.
    let wa = |x: &RationalMatrixFunction| -> Result<RationalMatrixFunction> {
        x.tilde().lmul_const(w.matrix())?.mul_const(w.matrix())
    };
    acc.record(
        "M_W(AB) correction",
        expr_residual(
            &build_mw(&ab, &w)?,
            &sum(vec![
                compose(vec![build_mw(&a, &w)?, build_mw(&b, &w)?])?,
                compose(vec![
                    hankel(a.mul_const(w.matrix())?),
                    build_mw(&wa(&b)?.sub(&b)?, &w)?,
                ])?,
            ])?,
            &h_probes,
        )?,
    );
    acc.record(
        "N_W(AB) correction",
        expr_residual(
            &build_nw(&ab, &w)?,
            &sum(vec![
                compose(vec![build_nw(&a, &w)?, build_nw(&b, &w)?])?,
                compose(vec![
                    build_nw(&wa(&a)?.sub(&a)?, &w)?,
                    hankel(b.tilde().lmul_const(w.matrix())?),
                ])?,
            ])?,
            &h_probes,
        )?,
    );
    acc.record(
        "M_W(A)N_W(B) = T(AB) + H(AWB~)",
        expr_residual(
            &compose(vec![build_mw(&a, &w)?, build_nw(&b, &w)?])?,
            &sum(vec![
                toeplitz(ab.clone()),
                hankel(a.mul_const(w.matrix())?.mul(&b.tilde())?),
            ])?,
            &h_probes,
        )?,
    );

    // Multiplicativity under one-sided analyticity or W-symmetry.
    let a_minus = gen::random_poly_matrix(rng, n, n, -3, 0);
    let b_plus = gen::random_poly_matrix(rng, n, n, 0, 3);
    let c = gen::random_poly_matrix(rng, n, n, -2, 2);
    let b_w = c.add(&wa(&c)?)?;
    acc.record(
        "M_W(A-B) multiplicative",
        expr_residual(
            &build_mw(&a_minus.mul(&b)?, &w)?,
            &compose(vec![build_mw(&a_minus, &w)?, build_mw(&b, &w)?])?,
            &h_probes,
        )?,
    );
    acc.record(
        "M_W(A B_W) multiplicative",
        expr_residual(
            &build_mw(&a.mul(&b_w)?, &w)?,
            &compose(vec![build_mw(&a, &w)?, build_mw(&b_w, &w)?])?,
            &h_probes,
        )?,
    );
    acc.record(
        "N_W(A_W B) multiplicative",
        expr_residual(
            &build_nw(&b_w.mul(&b)?, &w)?,
            &compose(vec![build_nw(&b_w, &w)?, build_nw(&b, &w)?])?,
            &h_probes,
        )?,
    );
    acc.record(
        "N_W(A B+) multiplicative",
        expr_residual(
            &build_nw(&a.mul(&b_plus)?, &w)?,
            &compose(vec![build_nw(&a, &w)?, build_nw(&b_plus, &w)?])?,
            &h_probes,
        )?,
    );
    acc.record(
        "M_W(A-) = T(A-)",
        expr_residual(&build_mw(&a_minus, &w)?, &toeplitz(a_minus.clone()), &h_probes)?,
    );
    acc.record(
        "N_W(A+) = T(A+)",
        expr_residual(&build_nw(&b_plus, &w)?, &toeplitz(b_plus.clone()), &h_probes)?,
    );
    acc.record(
        "M_W(A_W) = N_W(A_W)",
        expr_residual(&build_mw(&b_w, &w)?, &build_nw(&b_w, &w)?, &h_probes)?,
    );

    // Adjoint connections through finite sections.
    let w_star = InvolutionMatrix::new(w.matrix().adjoint())?;
    acc.record(
        "T(A)* = T(A*)",
        section_residual(
            &ops::adjoint(toeplitz(a.clone())),
            &toeplitz(a.conj_star()),
            5,
        )?,
    );
    acc.record(
        "H(A)* = H(A~*)",
        section_residual(
            &ops::adjoint(hankel(a.clone())),
            &hankel(a.tilde().conj_star()),
            5,
        )?,
    );
    acc.record(
        "M_W(A)* = N_W*(A*)",
        section_residual(
            &ops::adjoint(build_mw(&a, &w)?),
            &build_nw(&a.conj_star(), &w_star)?,
            5,
        )?,
    );

    // §5 block operators on the doubled symbol size.
    let a2 = gen::random_poly_matrix(rng, 2 * n, 2 * n, -2, 2);
    let b2 = gen::random_poly_matrix(rng, 2 * n, 2 * n, -2, 2);
    let w2 = InvolutionMatrix::antidiagonal(n);
    let hat = |x: &RationalMatrixFunction| -> Result<RationalMatrixFunction> {
        x.tilde().lmul_const(w2.matrix())?.mul_const(w2.matrix())
    };
    let ab2 = a2.mul(&b2)?;
    acc.record(
        "cT(AB) = cT(A)cT(B) + cH(A)cH(B^)",
        expr_residual(
            &build_ctoep(&ab2)?,
            &sum(vec![
                compose(vec![build_ctoep(&a2)?, build_ctoep(&b2)?])?,
                compose(vec![build_chank(&a2)?, build_chank(&hat(&b2)?)?])?,
            ])?,
            &l_probes,
        )?,
    );
    acc.record(
        "cH(AB) = cT(A)cH(B) + cH(A)cT(B^)",
        expr_residual(
            &build_chank(&ab2)?,
            &sum(vec![
                compose(vec![build_ctoep(&a2)?, build_chank(&b2)?])?,
                compose(vec![build_chank(&a2)?, build_ctoep(&hat(&b2)?)?])?,
            ])?,
            &l_probes,
        )?,
    );
    acc.record(
        "Phi(A)Psi(B) = cT(AB) + cH(AB^)",
        expr_residual(
            &compose(vec![build_phi(&a2)?, build_psi(&b2)?])?,
            &sum(vec![
                build_ctoep(&ab2)?,
                build_chank(&a2.mul(&hat(&b2)?)?)?,
            ])?,
            &l_probes,
        )?,
    );
    acc.record(
        "Phi(AB) correction",
        expr_residual(
            &build_phi(&ab2)?,
            &sum(vec![
                compose(vec![build_phi(&a2)?, build_phi(&b2)?])?,
                compose(vec![build_chank(&a2)?, build_phi(&hat(&b2)?.sub(&b2)?)?])?,
            ])?,
            &l_probes,
        )?,
    );
    acc.record(
        "Psi(AB) correction",
        expr_residual(
            &build_psi(&ab2)?,
            &sum(vec![
                compose(vec![build_psi(&a2)?, build_psi(&b2)?])?,
                compose(vec![build_psi(&hat(&a2)?.sub(&a2)?)?, build_chank(&hat(&b2)?)?])?,
            ])?,
            &l_probes,
        )?,
    );
    // Phi/Psi multiplicativity with a W-symmetric right factor.
    let c2 = gen::random_poly_matrix(rng, 2 * n, 2 * n, -2, 2);
    let b2_w = c2.add(&hat(&c2)?)?;
    acc.record(
        "Phi(A B_W) multiplicative",
        expr_residual(
            &build_phi(&a2.mul(&b2_w)?)?,
            &compose(vec![build_phi(&a2)?, build_phi(&b2_w)?])?,
            &l_probes,
        )?,
    );
    acc.record(
        "Psi(A_W B) multiplicative",
        expr_residual(
            &build_psi(&b2_w.mul(&b2)?)?,
            &compose(vec![build_psi(&b2_w)?, build_psi(&b2)?])?,
            &l_probes,
        )?,
    );

    // §4 middle-factor lemmas on random characteristic pairs.
    let pairs = gen::random_pairs(rng, n, 3);
    let d = middle_factor(&pairs);
    let hd = hankel(d.clone());
    let hd2 = compose(vec![hd.clone(), hd.clone()])?;
    acc.record(
        "T(D~)H(D) = 0",
        expr_residual(
            &compose(vec![toeplitz(d.tilde()), hd.clone()])?,
            &scale(C64::new(0.0, 0.0), identity(n)),
            &h_probes,
        )?,
    );
    acc.record(
        "H(D)T(D) = 0",
        expr_residual(
            &compose(vec![hd.clone(), toeplitz(d.clone())])?,
            &scale(C64::new(0.0, 0.0), identity(n)),
            &h_probes,
        )?,
    );
    acc.record(
        "H(D)^3 = H(D)",
        expr_residual(&compose(vec![hd2.clone(), hd.clone()])?, &hd, &h_probes)?,
    );
    let (bb, bb_dag) = lemma42_operators(&pairs)?;
    acc.record(
        "B B† B = B",
        expr_residual(
            &compose(vec![bb.clone(), bb_dag.clone(), bb.clone()])?,
            &bb,
            &h_probes,
        )?,
    );
    acc.record(
        "B† B B† = B†",
        expr_residual(
            &compose(vec![bb_dag.clone(), bb.clone(), bb_dag.clone()])?,
            &bb_dag,
            &h_probes,
        )?,
    );

    // Lemma about A₁ = M_W(R), A₂ = N_W(R⁻¹) for a matching W and R.
    let paired = gen::random_balanced_pairs(rng, n, 2);
    let w_d = gen::involution_for_pairs(rng, &paired)?;
    let r = build_middle_r(&paired, &w_d, MiddleVariant::RWRinv)?;
    let a1 = build_mw(&r, &w_d)?;
    let a2op = build_nw(&r.inverse()?, &w_d)?;
    let (bb, bb_dag) = lemma42_operators(&paired)?;
    let dd = middle_factor(&paired);
    acc.record(
        "A1 A2 = I + H(D)",
        expr_residual(&compose(vec![a1.clone(), a2op.clone()])?, &bb, &h_probes)?,
    );
    let a1_dag = compose(vec![
        a2op.clone(),
        sum(vec![
            identity(n),
            scale(C64::new(-0.5, 0.0), hankel(dd.clone())),
        ])?,
    ])?;
    let a2_dag = compose(vec![
        sum(vec![
            identity(n),
            scale(C64::new(-0.5, 0.0), hankel(dd.clone())),
        ])?,
        a1.clone(),
    ])?;
    acc.record(
        "A1† = A2 B†",
        expr_residual(&compose(vec![a2op.clone(), bb_dag.clone()])?, &a1_dag, &h_probes)?,
    );
    acc.record(
        "A1 A1† A1 = A1",
        expr_residual(
            &compose(vec![a1.clone(), a1_dag.clone(), a1.clone()])?,
            &a1,
            &h_probes,
        )?,
    );
    acc.record(
        "A2 A2† A2 = A2",
        expr_residual(
            &compose(vec![a2op.clone(), a2_dag.clone(), a2op.clone()])?,
            &a2op,
            &h_probes,
        )?,
    );
    Ok(())
}

/// Seeded random generation of symbols, involutions and vectors. The
/// sampling rules here are also what the acceptance corpus uses.
pub mod gen {
    use super::*;

    pub fn random_laurent_poly(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> LaurentPoly {
        let terms: Vec<(i64, C64)> = (lo..=hi)
            .map(|k| {
                (
                    k,
                    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                )
            })
            .collect();
        LaurentPoly::from_terms(&terms)
    }

    /// Matrix Laurent polynomial with coefficients uniform in the unit
    /// square, exponents in `[lo, hi]`.
    pub fn random_poly_matrix(
        rng: &mut ChaCha8Rng,
        rows: usize,
        cols: usize,
        lo: i64,
        hi: i64,
    ) -> RationalMatrixFunction {
        let m = LaurentMatrix::from_fn(rows, cols, |_, _| random_laurent_poly(rng, lo, hi));
        RationalMatrixFunction::from_laurent(m)
    }

    /// Rejection-samples until `|det|` stays ≥ 0.1 on a 256 point grid, so
    /// instances stay well conditioned.
    pub fn random_invertible_symbol(
        rng: &mut ChaCha8Rng,
        n: usize,
        lo: i64,
        hi: i64,
    ) -> RationalMatrixFunction {
        loop {
            let f = random_poly_matrix(rng, n, n, lo, hi);
            let ok = (0..256).all(|m| {
                f.eval_at(numeric::circle_point(m, 256))
                    .map(|v| v.determinant().norm() >= 0.1)
                    .unwrap_or(false)
            });
            if ok {
                return f;
            }
        }
    }

    /// Scalar Laurent polynomial built from explicit roots kept away from
    /// the annulus `0.65 < |z| < 1.55`, support inside `[-3, 3]`.
    ///
    /// Kernel elements of the associated operators then decay at ratio
    /// ≤ 0.65, so finite sections of a few dozen rows already expose the
    /// defect singular values the splitting oracle counts.
    pub fn random_separated_scalar(rng: &mut ChaCha8Rng) -> RationalMatrixFunction {
        let n_in = rng.gen_range(0..=2_usize);
        let n_out = rng.gen_range(0..=(3 - n_in).min(2));
        let total = n_in + n_out;
        let shift = rng.gen_range(-3..=(3 - total as i64));
        let mut poly = LaurentPoly::monomial(
            shift,
            C64::new(rng.gen_range(0.5..1.5), rng.gen_range(-0.5..0.5)),
        );
        for _ in 0..n_in {
            let radius = rng.gen_range(0.1..0.65);
            let angle = rng.gen_range(0.0..std::f64::consts::TAU);
            let root = C64::new(radius * angle.cos(), radius * angle.sin());
            poly = poly.mul(&LaurentPoly::from_terms(&[
                (1, C64::new(1.0, 0.0)),
                (0, -root),
            ]));
        }
        for _ in 0..n_out {
            let radius = rng.gen_range(1.55..2.8);
            let angle = rng.gen_range(0.0..std::f64::consts::TAU);
            let root = C64::new(radius * angle.cos(), radius * angle.sin());
            poly = poly.mul(&LaurentPoly::from_terms(&[
                (1, C64::new(1.0, 0.0)),
                (0, -root),
            ]));
        }
        RationalMatrixFunction::from_scalar(poly)
    }

    /// Random element of `Gℬ₋`: a constant invertible matrix plus small
    /// strictly negative-power perturbations, which keeps the determinant
    /// away from zero on `|t| ≥ 1`.
    pub fn random_gminus(rng: &mut ChaCha8Rng, n: usize, depth: usize) -> RationalMatrixFunction {
        let mut m = LaurentMatrix::identity(n);
        let budget = 0.8;
        for k in 1..=depth {
            let scale = budget / (depth as f64) / (n as f64);
            let c = LaurentMatrix::from_fn(n, n, |_, _| {
                LaurentPoly::monomial(
                    -(k as i64),
                    C64::new(
                        rng.gen_range(-scale..scale),
                        rng.gen_range(-scale..scale),
                    ),
                )
            });
            m = m.add(&c);
        }
        let mix = random_const_invertible(rng, n);
        RationalMatrixFunction::from_laurent(m)
            .lmul_const(&mix)
            .expect("square shapes")
    }

    pub fn random_const_invertible(rng: &mut ChaCha8Rng, n: usize) -> CMat {
        loop {
            let mut m = CMat::from_fn(n, n, |_, _| {
                C64::new(rng.gen_range(-0.6..0.6), rng.gen_range(-0.6..0.6))
            });
            m += CMat::identity(n, n);
            let sv = m.clone().singular_values();
            if sv.iter().cloned().fold(f64::INFINITY, f64::min) > 0.2 {
                return m;
            }
        }
    }

    pub fn random_pairs(rng: &mut ChaCha8Rng, n: usize, kmax: i64) -> Vec<CharPair> {
        CharPair::canonical(
            (0..n)
                .map(|_| {
                    CharPair::new(
                        if rng.gen_bool(0.5) { 1 } else { -1 },
                        rng.gen_range(-kmax..=kmax),
                    )
                })
                .collect(),
        )
    }

    /// Random pairs with β = γ, as required for a middle factor matching
    /// some involution.
    pub fn random_balanced_pairs(rng: &mut ChaCha8Rng, n: usize, kmax: i64) -> Vec<CharPair> {
        let mut pairs = Vec::with_capacity(n);
        let mut remaining = n;
        while remaining > 0 {
            if remaining >= 2 && rng.gen_bool(0.4) {
                // one odd +1 and one odd -1
                let mut k1 = rng.gen_range(-kmax..=kmax);
                if k1.rem_euclid(2) == 0 {
                    k1 += 1;
                }
                let mut k2 = rng.gen_range(-kmax..=kmax);
                if k2.rem_euclid(2) == 0 {
                    k2 -= 1;
                }
                pairs.push(CharPair::new(1, k1));
                pairs.push(CharPair::new(-1, k2));
                remaining -= 2;
            } else {
                let mut k = rng.gen_range(-kmax..=kmax);
                if k.rem_euclid(2) == 1 {
                    k += 1;
                }
                pairs.push(CharPair::new(if rng.gen_bool(0.5) { 1 } else { -1 }, k));
                remaining -= 1;
            }
        }
        CharPair::canonical(pairs)
    }

    /// Exact (integer entry) involution assembled from ±1 fixed points,
    /// signed swaps and shear blocks, mixed by a permutation.
    pub fn random_exact_involution(rng: &mut ChaCha8Rng, n: usize) -> InvolutionMatrix {
        let w = random_signature_involution(rng, n, None);
        InvolutionMatrix::new(w).expect("constructed involution")
    }

    /// Exact involution whose signature matches `D(1) ~ D(-1)` of the pairs.
    pub fn involution_for_pairs(
        rng: &mut ChaCha8Rng,
        pairs: &[CharPair],
    ) -> Result<InvolutionMatrix> {
        let c = signature_counts(pairs);
        if c.beta != c.gamma {
            return Err(Error::SignatureMismatch("β != γ".into()));
        }
        let sig_plus = c.alpha + c.beta;
        let w = random_signature_involution(rng, pairs.len(), Some(sig_plus));
        InvolutionMatrix::new(w)
    }

    /// Assembles an exact involution, optionally with a prescribed number
    /// of +1 eigenvalues.
    fn random_signature_involution(
        rng: &mut ChaCha8Rng,
        n: usize,
        sig_plus: Option<usize>,
    ) -> CMat {
        let plus = sig_plus.unwrap_or_else(|| rng.gen_range(0..=n));
        let mut w = CMat::zeros(n, n);
        for i in 0..n {
            w[(i, i)] = C64::new(if i < plus { 1.0 } else { -1.0 }, 0.0);
        }
        // For d_i = -d_j the update W ← W + m·E_ij keeps W² = I exactly:
        // the cross term carries the factor d_i + d_j = 0. Filling disjoint
        // index pairs only, so no products of the added terms survive.
        let mut plus_idx: Vec<usize> = (0..plus).collect();
        let mut minus_idx: Vec<usize> = (plus..n).collect();
        shuffle(rng, &mut plus_idx);
        shuffle(rng, &mut minus_idx);
        for (&i, &j) in plus_idx.iter().zip(minus_idx.iter()) {
            if rng.gen_bool(0.7) {
                let m = rng.gen_range(-2..=2_i64) as f64;
                if rng.gen_bool(0.5) {
                    w[(i, j)] = C64::new(m, 0.0);
                } else {
                    w[(j, i)] = C64::new(m, 0.0);
                }
            }
        }
        // Permute rows and columns identically (exact similarity).
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            perm.swap(i, j);
        }
        let mut out = CMat::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                out[(perm[r], perm[c])] = w[(r, c)];
            }
        }
        out
    }

    fn shuffle(rng: &mut ChaCha8Rng, v: &mut [usize]) {
        for i in (1..v.len()).rev() {
            let j = rng.gen_range(0..=i);
            v.swap(i, j);
        }
    }

    /// Random finitely supported vector with modes in `[lo, hi]`.
    pub fn random_fourier_vec(rng: &mut ChaCha8Rng, dim: usize, lo: i64, hi: i64) -> FourierVec {
        let mut v = FourierVec::new(dim);
        for k in lo..=hi {
            for c in 0..dim {
                v.add_term(
                    k,
                    c,
                    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                );
            }
        }
        v
    }
}
