//! Symbolic operator calculus over `P`, `Q`, `J`, `M(A)`, `T(A)`, `H(A)`
//! and block compositions, applied to finitely supported Fourier sequences.
//!
//! Expressions are immutable trees and are never simplified: the algebraic
//! identities are material to test, not to assume. Application is exact when
//! every symbol in the tree is a matrix Laurent polynomial; rational symbols
//! are expanded on a finite window `[-L, L]` and the truncation error is
//! propagated as a tail bound alongside the result.
//!
//! Mode conventions: the Riesz projection `P` keeps modes ≥ 0, `Q` keeps
//! modes ≤ -1, and the flip sends mode `k` to `-1-k`. Toeplitz and Hankel
//! nodes act on the Hardy side, so inputs are projected to modes ≥ 0 first.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Error;
use crate::numeric::CMat;
use crate::rational::{InvolutionMatrix, RationalMatrixFunction};
use crate::tol;
use crate::{C64, Result};

/// A finitely supported sequence of Fourier coefficients with values in
/// `C^dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierVec {
    dim: usize,
    modes: BTreeMap<i64, Vec<C64>>,
}

impl FourierVec {
    pub fn new(dim: usize) -> Self {
        FourierVec {
            dim,
            modes: BTreeMap::new(),
        }
    }

    /// The basis sequence `e` with a 1 in `component` at `mode`.
    pub fn basis(dim: usize, mode: i64, component: usize) -> Self {
        let mut v = Self::new(dim);
        v.add_term(mode, component, C64::new(1.0, 0.0));
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn add_term(&mut self, mode: i64, component: usize, value: C64) {
        assert!(component < self.dim);
        let entry = self
            .modes
            .entry(mode)
            .or_insert_with(|| vec![C64::new(0.0, 0.0); self.dim]);
        entry[component] += value;
    }

    pub fn coeff(&self, mode: i64, component: usize) -> C64 {
        self.modes
            .get(&mode)
            .map(|v| v[component])
            .unwrap_or_else(|| C64::new(0.0, 0.0))
    }

    pub fn modes(&self) -> impl Iterator<Item = (i64, &[C64])> {
        self.modes.iter().map(|(&k, v)| (k, v.as_slice()))
    }

    pub fn support(&self) -> Option<(i64, i64)> {
        Some((*self.modes.keys().next()?, *self.modes.keys().next_back()?))
    }

    pub fn is_zero(&self) -> bool {
        self.modes
            .values()
            .all(|v| v.iter().all(|c| c.norm() == 0.0))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (&k, vals) in &other.modes {
            for (c, &x) in vals.iter().enumerate() {
                if x.norm() > 0.0 {
                    out.add_term(k, c, x);
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> Self {
        FourierVec {
            dim: self.dim,
            modes: self
                .modes
                .iter()
                .map(|(&k, v)| (k, v.iter().map(|&c| c * s).collect()))
                .collect(),
        }
    }

    /// Largest coefficient magnitude over all modes and components.
    pub fn norm_sup(&self) -> f64 {
        self.modes
            .values()
            .flat_map(|v| v.iter().map(|c| c.norm()))
            .fold(0.0, f64::max)
    }

    /// Sum over modes of the Euclidean norms of the mode vectors.
    pub fn norm_l1(&self) -> f64 {
        self.modes
            .values()
            .map(|v| v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt())
            .sum()
    }

    pub fn norm_l2(&self) -> f64 {
        self.modes
            .values()
            .map(|v| v.iter().map(|c| c.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            .sqrt()
    }

    fn project(&self, keep: impl Fn(i64) -> bool) -> Self {
        FourierVec {
            dim: self.dim,
            modes: self
                .modes
                .iter()
                .filter(|(&k, _)| keep(k))
                .map(|(&k, v)| (k, v.clone()))
                .collect(),
        }
    }

    /// The flip `k ↦ -1-k`.
    fn flip(&self) -> Self {
        FourierVec {
            dim: self.dim,
            modes: self
                .modes
                .iter()
                .map(|(&k, v)| (-1 - k, v.clone()))
                .collect(),
        }
    }

    fn stack(parts: &[FourierVec]) -> Self {
        let dim = parts.iter().map(|p| p.dim).sum();
        let mut out = FourierVec::new(dim);
        let mut offset = 0;
        for p in parts {
            for (k, vals) in p.modes() {
                for (c, &x) in vals.iter().enumerate() {
                    if x.norm() > 0.0 {
                        out.add_term(k, offset + c, x);
                    }
                }
            }
            offset += p.dim;
        }
        out
    }

    fn split(&self, dims: &[usize]) -> Vec<FourierVec> {
        debug_assert_eq!(dims.iter().sum::<usize>(), self.dim);
        let mut parts: Vec<FourierVec> = dims.iter().map(|&d| FourierVec::new(d)).collect();
        for (k, vals) in self.modes() {
            let mut offset = 0;
            for (p, &d) in parts.iter_mut().zip(dims) {
                for c in 0..d {
                    let x = vals[offset + c];
                    if x.norm() > 0.0 {
                        p.add_term(k, c, x);
                    }
                }
                offset += d;
            }
        }
        parts
    }
}

/// A symbol attached to a `Mult`/`Toep`/`Hank` node. Whether it is a Laurent
/// polynomial (exact action) or genuinely rational (windowed action) is
/// recorded at construction.
#[derive(Clone, Debug)]
pub struct SymbolNode {
    pub symbol: RationalMatrixFunction,
    pub polynomial: bool,
}

impl SymbolNode {
    fn new(symbol: RationalMatrixFunction) -> Self {
        let polynomial = symbol.is_polynomial();
        SymbolNode { symbol, polynomial }
    }
}

/// A symbolic operator expression.
#[derive(Clone, Debug)]
pub enum OperatorExpr {
    Identity { dim: usize },
    /// Riesz projection onto modes ≥ 0.
    RieszP { dim: usize },
    /// Complementary projection onto modes ≤ -1.
    RieszQ { dim: usize },
    /// Flip `(Jf)(t) = t⁻¹ f(1/t)`, i.e. mode `k ↦ -1-k`.
    FlipJ { dim: usize },
    /// Multiplication operator `M(A)`.
    Mult(SymbolNode),
    /// Toeplitz operator `T(A) = P M(A) P` on the Hardy side.
    Toep(SymbolNode),
    /// Hankel operator `H(A) = P M(A) J P` on the Hardy side.
    Hank(SymbolNode),
    Scale(C64, Box<OperatorExpr>),
    Sum(Vec<OperatorExpr>),
    /// Operator product; the rightmost factor is applied first.
    Compose(Vec<OperatorExpr>),
    Adjoint(Box<OperatorExpr>),
    /// Row `[X₁ … X_p]` acting on a stacked input.
    BlockRow(Vec<OperatorExpr>),
    /// Column `(X₁; …; X_p)` producing a stacked output.
    BlockCol(Vec<OperatorExpr>),
}

impl OperatorExpr {
    /// `(input dimension, output dimension)`.
    pub fn shape(&self) -> (usize, usize) {
        match self {
            OperatorExpr::Identity { dim }
            | OperatorExpr::RieszP { dim }
            | OperatorExpr::RieszQ { dim }
            | OperatorExpr::FlipJ { dim } => (*dim, *dim),
            OperatorExpr::Mult(s) | OperatorExpr::Toep(s) | OperatorExpr::Hank(s) => {
                (s.symbol.cols(), s.symbol.rows())
            }
            OperatorExpr::Scale(_, e) => e.shape(),
            OperatorExpr::Sum(es) => es[0].shape(),
            OperatorExpr::Compose(es) => {
                (es.last().unwrap().shape().0, es.first().unwrap().shape().1)
            }
            OperatorExpr::Adjoint(e) => {
                let (i, o) = e.shape();
                (o, i)
            }
            OperatorExpr::BlockRow(es) => (es.iter().map(|e| e.shape().0).sum(), es[0].shape().1),
            OperatorExpr::BlockCol(es) => (es[0].shape().0, es.iter().map(|e| e.shape().1).sum()),
        }
    }

    /// True when every symbol in the tree is a Laurent polynomial, so every
    /// application is exact.
    pub fn is_exact(&self) -> bool {
        match self {
            OperatorExpr::Identity { .. }
            | OperatorExpr::RieszP { .. }
            | OperatorExpr::RieszQ { .. }
            | OperatorExpr::FlipJ { .. } => true,
            OperatorExpr::Mult(s) | OperatorExpr::Toep(s) | OperatorExpr::Hank(s) => s.polynomial,
            OperatorExpr::Scale(_, e) | OperatorExpr::Adjoint(e) => e.is_exact(),
            OperatorExpr::Sum(es)
            | OperatorExpr::Compose(es)
            | OperatorExpr::BlockRow(es)
            | OperatorExpr::BlockCol(es) => es.iter().all(|e| e.is_exact()),
        }
    }
}

pub fn identity(dim: usize) -> OperatorExpr {
    OperatorExpr::Identity { dim }
}

pub fn riesz_p(dim: usize) -> OperatorExpr {
    OperatorExpr::RieszP { dim }
}

pub fn riesz_q(dim: usize) -> OperatorExpr {
    OperatorExpr::RieszQ { dim }
}

pub fn flip_j(dim: usize) -> OperatorExpr {
    OperatorExpr::FlipJ { dim }
}

pub fn mult(symbol: RationalMatrixFunction) -> OperatorExpr {
    OperatorExpr::Mult(SymbolNode::new(symbol))
}

pub fn toeplitz(symbol: RationalMatrixFunction) -> OperatorExpr {
    OperatorExpr::Toep(SymbolNode::new(symbol))
}

pub fn hankel(symbol: RationalMatrixFunction) -> OperatorExpr {
    OperatorExpr::Hank(SymbolNode::new(symbol))
}

pub fn scale(factor: C64, inner: OperatorExpr) -> OperatorExpr {
    OperatorExpr::Scale(factor, Box::new(inner))
}

pub fn adjoint(inner: OperatorExpr) -> OperatorExpr {
    OperatorExpr::Adjoint(Box::new(inner))
}

pub fn sum(terms: Vec<OperatorExpr>) -> Result<OperatorExpr> {
    if terms.is_empty() {
        return Err(Error::ShapeMismatch("empty sum".into()));
    }
    let shape = terms[0].shape();
    if terms.iter().any(|t| t.shape() != shape) {
        return Err(Error::ShapeMismatch(
            "sum of differently shaped operators".into(),
        ));
    }
    Ok(OperatorExpr::Sum(terms))
}

pub fn compose(factors: Vec<OperatorExpr>) -> Result<OperatorExpr> {
    if factors.is_empty() {
        return Err(Error::ShapeMismatch("empty composition".into()));
    }
    for pair in factors.windows(2) {
        if pair[0].shape().0 != pair[1].shape().1 {
            return Err(Error::ShapeMismatch(format!(
                "composition {:?} after {:?}",
                pair[0].shape(),
                pair[1].shape()
            )));
        }
    }
    Ok(OperatorExpr::Compose(factors))
}

pub fn block_row(entries: Vec<OperatorExpr>) -> Result<OperatorExpr> {
    if entries.is_empty() {
        return Err(Error::ShapeMismatch("empty block row".into()));
    }
    let out = entries[0].shape().1;
    if entries.iter().any(|e| e.shape().1 != out) {
        return Err(Error::ShapeMismatch(
            "block row needs one output dimension".into(),
        ));
    }
    Ok(OperatorExpr::BlockRow(entries))
}

pub fn block_col(entries: Vec<OperatorExpr>) -> Result<OperatorExpr> {
    if entries.is_empty() {
        return Err(Error::ShapeMismatch("empty block column".into()));
    }
    let input = entries[0].shape().0;
    if entries.iter().any(|e| e.shape().0 != input) {
        return Err(Error::ShapeMismatch(
            "block column needs one input dimension".into(),
        ));
    }
    Ok(OperatorExpr::BlockCol(entries))
}

/// Block operator matrix `[X_{rc}]`, assembled as a column of rows.
pub fn block_matrix(grid: Vec<Vec<OperatorExpr>>) -> Result<OperatorExpr> {
    let rows: Vec<OperatorExpr> = grid
        .into_iter()
        .map(block_row)
        .collect::<Result<Vec<_>>>()?;
    block_col(rows)
}

/// Structural adjoint: `P* = P`, `J* = J`, `M(A)* = M(A*)`, `T(A)* = T(A*)`,
/// `H(A)* = H(Ã*)`, compositions reverse, block rows and columns swap.
pub fn adjoint_expr(e: &OperatorExpr) -> OperatorExpr {
    match e {
        OperatorExpr::Identity { .. }
        | OperatorExpr::RieszP { .. }
        | OperatorExpr::RieszQ { .. }
        | OperatorExpr::FlipJ { .. } => e.clone(),
        OperatorExpr::Mult(s) => mult(s.symbol.conj_star()),
        OperatorExpr::Toep(s) => toeplitz(s.symbol.conj_star()),
        OperatorExpr::Hank(s) => hankel(s.symbol.tilde().conj_star()),
        OperatorExpr::Scale(c, inner) => scale(c.conj(), adjoint_expr(inner)),
        OperatorExpr::Sum(es) => OperatorExpr::Sum(es.iter().map(adjoint_expr).collect()),
        OperatorExpr::Compose(es) => {
            OperatorExpr::Compose(es.iter().rev().map(adjoint_expr).collect())
        }
        OperatorExpr::Adjoint(inner) => (**inner).clone(),
        OperatorExpr::BlockRow(es) => OperatorExpr::BlockCol(es.iter().map(adjoint_expr).collect()),
        OperatorExpr::BlockCol(es) => OperatorExpr::BlockRow(es.iter().map(adjoint_expr).collect()),
    }
}

/// Crude operator norm estimate used to propagate tail bounds through
/// compositions: circle samples of the spectral norm for symbols, and
/// submultiplicative combination elsewhere.
fn gain(e: &OperatorExpr) -> f64 {
    match e {
        OperatorExpr::Identity { .. }
        | OperatorExpr::RieszP { .. }
        | OperatorExpr::RieszQ { .. }
        | OperatorExpr::FlipJ { .. } => 1.0,
        OperatorExpr::Mult(s) | OperatorExpr::Toep(s) | OperatorExpr::Hank(s) => {
            symbol_sup_norm(&s.symbol)
        }
        OperatorExpr::Scale(c, inner) => c.norm() * gain(inner),
        OperatorExpr::Sum(es) => es.iter().map(gain).sum(),
        OperatorExpr::Compose(es) => es.iter().map(gain).product(),
        OperatorExpr::Adjoint(inner) => gain(inner),
        OperatorExpr::BlockRow(es) | OperatorExpr::BlockCol(es) => es.iter().map(gain).sum(),
    }
}

fn symbol_sup_norm(f: &RationalMatrixFunction) -> f64 {
    let mut worst = 0.0_f64;
    for m in 0..32 {
        if let Ok(v) = f.eval_at(crate::numeric::circle_point(m, 32)) {
            let s = v.singular_values();
            worst = worst.max(s.iter().cloned().fold(0.0, f64::max));
        }
    }
    worst.max(f64::MIN_POSITIVE)
}

/// Applies `expr` to `v`. Rational symbols are expanded on `[-window,
/// window]`; the second return value bounds the truncation error of the
/// result (0 for all-polynomial trees).
pub fn apply(expr: &OperatorExpr, v: &FourierVec, window: usize) -> Result<(FourierVec, f64)> {
    if expr.shape().0 != v.dim() {
        return Err(Error::ShapeMismatch(format!(
            "operator wants C^{}, vector is C^{}",
            expr.shape().0,
            v.dim()
        )));
    }
    apply_inner(expr, v, window)
}

fn apply_inner(expr: &OperatorExpr, v: &FourierVec, window: usize) -> Result<(FourierVec, f64)> {
    match expr {
        OperatorExpr::Identity { .. } => Ok((v.clone(), 0.0)),
        OperatorExpr::RieszP { .. } => Ok((v.project(|k| k >= 0), 0.0)),
        OperatorExpr::RieszQ { .. } => Ok((v.project(|k| k <= -1), 0.0)),
        OperatorExpr::FlipJ { .. } => Ok((v.flip(), 0.0)),
        OperatorExpr::Mult(s) => convolve(s, v, window),
        OperatorExpr::Toep(s) => {
            let (w, b) = convolve(s, &v.project(|k| k >= 0), window)?;
            Ok((w.project(|k| k >= 0), b))
        }
        OperatorExpr::Hank(s) => {
            let (w, b) = convolve(s, &v.project(|k| k >= 0).flip(), window)?;
            Ok((w.project(|k| k >= 0), b))
        }
        OperatorExpr::Scale(c, inner) => {
            let (w, b) = apply_inner(inner, v, window)?;
            Ok((w.scale(*c), b * c.norm()))
        }
        OperatorExpr::Sum(es) => {
            let mut acc = FourierVec::new(expr.shape().1);
            let mut bound = 0.0;
            for e in es {
                let (w, b) = apply_inner(e, v, window)?;
                acc = acc.add(&w);
                bound += b;
            }
            Ok((acc, bound))
        }
        OperatorExpr::Compose(es) => {
            let mut cur = v.clone();
            let mut bound = 0.0_f64;
            for e in es.iter().rev() {
                let (w, b) = apply_inner(e, &cur, window)?;
                bound = b + gain(e) * bound;
                cur = w;
            }
            Ok((cur, bound))
        }
        OperatorExpr::Adjoint(inner) => apply_inner(&adjoint_expr(inner), v, window),
        OperatorExpr::BlockRow(es) => {
            let dims: Vec<usize> = es.iter().map(|e| e.shape().0).collect();
            let parts = v.split(&dims);
            let mut acc = FourierVec::new(expr.shape().1);
            let mut bound = 0.0;
            for (e, p) in es.iter().zip(parts.iter()) {
                let (w, b) = apply_inner(e, p, window)?;
                acc = acc.add(&w);
                bound += b;
            }
            Ok((acc, bound))
        }
        OperatorExpr::BlockCol(es) => {
            let mut outs = Vec::with_capacity(es.len());
            let mut bound = 0.0;
            for e in es {
                let (w, b) = apply_inner(e, v, window)?;
                outs.push(w);
                bound += b;
            }
            Ok((FourierVec::stack(&outs), bound))
        }
    }
}

fn convolve(s: &SymbolNode, v: &FourierVec, window: usize) -> Result<(FourierVec, f64)> {
    let rows = s.symbol.rows();
    let cols = s.symbol.cols();
    if v.dim() != cols {
        return Err(Error::ShapeMismatch(format!(
            "symbol is {}x{}, vector has dimension {}",
            rows,
            cols,
            v.dim()
        )));
    }
    let l = window as i64;
    let (coeffs, tail) = if s.polynomial {
        let lo = s.symbol.numerator().lowest().unwrap_or(0);
        let hi = s.symbol.numerator().highest().unwrap_or(0);
        s.symbol.fourier_coeffs(lo, hi)?
    } else {
        s.symbol.fourier_coeffs(-l, l)?
    };
    let mut out = FourierVec::new(rows);
    for (&k, ck) in &coeffs {
        for (m, vals) in v.modes() {
            for i in 0..rows {
                let mut acc = C64::new(0.0, 0.0);
                for (j, &x) in vals.iter().enumerate() {
                    acc += ck[(i, j)] * x;
                }
                if acc.norm() > 0.0 {
                    out.add_term(k + m, i, acc);
                }
            }
        }
    }
    Ok((out, tail * v.norm_l1()))
}

/// Applies with the default window, doubling it until the tail bound drops
/// below the accuracy target (exact trees return immediately). Returns the
/// result, the final bound, and the window that achieved it.
pub fn apply_auto(expr: &OperatorExpr, v: &FourierVec) -> Result<(FourierVec, f64, usize)> {
    let target = tol::WINDOW_TAIL * v.norm_l2().max(1.0);
    let mut window = tol::WINDOW_DEFAULT;
    loop {
        let (w, b) = apply(expr, v, window)?;
        if b <= target || expr.is_exact() {
            return Ok((w, b, window));
        }
        if window >= tol::WINDOW_MAX {
            return Err(Error::WindowTooSmall(format!(
                "tail bound {b:.2e} above target {target:.2e} at window {window}"
            )));
        }
        window *= 2;
    }
}

/// `M_W(A) = T(A) + H(AW)`.
pub fn build_mw(a: &RationalMatrixFunction, w: &InvolutionMatrix) -> Result<OperatorExpr> {
    check_symbol_involution(a, w)?;
    sum(vec![toeplitz(a.clone()), hankel(a.mul_const(w.matrix())?)])
}

/// `N_W(A) = T(A) + H(W Ã)`.
pub fn build_nw(a: &RationalMatrixFunction, w: &InvolutionMatrix) -> Result<OperatorExpr> {
    check_symbol_involution(a, w)?;
    sum(vec![
        toeplitz(a.clone()),
        hankel(a.tilde().lmul_const(w.matrix())?),
    ])
}

fn check_symbol_involution(a: &RationalMatrixFunction, w: &InvolutionMatrix) -> Result<()> {
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

fn half_blocks(
    a: &RationalMatrixFunction,
) -> Result<(
    RationalMatrixFunction,
    RationalMatrixFunction,
    RationalMatrixFunction,
    RationalMatrixFunction,
)> {
    let n = even_half(a)?;
    Ok((
        a.block(0, 0, n, n),
        a.block(0, n, n, n),
        a.block(n, 0, n, n),
        a.block(n, n, n, n),
    ))
}

fn even_half(a: &RationalMatrixFunction) -> Result<usize> {
    if !a.is_square() || a.rows() % 2 != 0 {
        return Err(Error::ShapeMismatch(format!(
            "expected an even square symbol, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    Ok(a.rows() / 2)
}

/// `Φ(A) = P M(a) + P J M(b̃) + Q J M(c) + Q M(d̃)` on `(L²)^N`, where
/// `a, b, c, d` are the `N×N` blocks of the `2N×2N` symbol.
pub fn build_phi(a: &RationalMatrixFunction) -> Result<OperatorExpr> {
    let (ba, bb, bc, bd) = half_blocks(a)?;
    let n = ba.rows();
    sum(vec![
        compose(vec![riesz_p(n), mult(ba)])?,
        compose(vec![riesz_p(n), flip_j(n), mult(bb.tilde())])?,
        compose(vec![riesz_q(n), flip_j(n), mult(bc)])?,
        compose(vec![riesz_q(n), mult(bd.tilde())])?,
    ])
}

/// `Ψ(A) = M(a) P + M(b) J Q + M(c̃) J P + M(d̃) Q` on `(L²)^N`.
pub fn build_psi(a: &RationalMatrixFunction) -> Result<OperatorExpr> {
    let (ba, bb, bc, bd) = half_blocks(a)?;
    let n = ba.rows();
    sum(vec![
        compose(vec![mult(ba), riesz_p(n)])?,
        compose(vec![mult(bb), flip_j(n), riesz_q(n)])?,
        compose(vec![mult(bc.tilde()), flip_j(n), riesz_p(n)])?,
        compose(vec![mult(bd.tilde()), riesz_q(n)])?,
    ])
}

/// `𝒯(A) = (P, JP) M(A) (P; PJ)` on `(L²)^N` for a `2N×2N` symbol.
pub fn build_ctoep(a: &RationalMatrixFunction) -> Result<OperatorExpr> {
    let n = even_half(a)?;
    compose(vec![
        block_row(vec![riesz_p(n), compose(vec![flip_j(n), riesz_p(n)])?])?,
        mult(a.clone()),
        block_col(vec![riesz_p(n), compose(vec![riesz_p(n), flip_j(n)])?])?,
    ])
}

/// `ℋ(A) = (P, JP) M(A) (Q; QJ)` on `(L²)^N` for a `2N×2N` symbol.
pub fn build_chank(a: &RationalMatrixFunction) -> Result<OperatorExpr> {
    let n = even_half(a)?;
    compose(vec![
        block_row(vec![riesz_p(n), compose(vec![flip_j(n), riesz_p(n)])?])?,
        mult(a.clone()),
        block_col(vec![riesz_q(n), compose(vec![riesz_q(n), flip_j(n)])?])?,
    ])
}

/// The general singular integral operator with flip
/// `𝒯(A) + ℋ(BW)`, assembled in its eight-term form
/// `PM(a₁)P + PM(b₁)JQ + QM(c̃₁)JP + QM(d̃₁)Q +
///  PM(a₂)JP + PM(b₂)Q + QM(c̃₂)P + QM(d̃₂)JQ`.
pub fn build_general_sio(
    a: &RationalMatrixFunction,
    b: &RationalMatrixFunction,
) -> Result<OperatorExpr> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::ShapeMismatch(format!(
            "A is {}x{}, B is {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let (a1, b1, c1, d1) = half_blocks(a)?;
    let (a2, b2, c2, d2) = half_blocks(b)?;
    let n = a1.rows();
    sum(vec![
        compose(vec![riesz_p(n), mult(a1), riesz_p(n)])?,
        compose(vec![riesz_p(n), mult(b1), flip_j(n), riesz_q(n)])?,
        compose(vec![riesz_q(n), mult(c1.tilde()), flip_j(n), riesz_p(n)])?,
        compose(vec![riesz_q(n), mult(d1.tilde()), riesz_q(n)])?,
        compose(vec![riesz_p(n), mult(a2), flip_j(n), riesz_p(n)])?,
        compose(vec![riesz_p(n), mult(b2), riesz_q(n)])?,
        compose(vec![riesz_q(n), mult(c2.tilde()), riesz_p(n)])?,
        compose(vec![riesz_q(n), mult(d2.tilde()), flip_j(n), riesz_q(n)])?,
    ])
}

/// Transports an operator on `(L²)^N` to `(H²)^{2N}` through the isometry
/// pair: `Ξ(X) = (P; PJ) X (P, JP)`.
///
/// On sequences this is the mode bijection sending an `L²` mode `m ≥ 0` to
/// component block 1 at mode `m` and a mode `m ≤ -1` to component block 2
/// at mode `-1-m`.
pub fn xi_transport(expr: &OperatorExpr) -> Result<OperatorExpr> {
    let (input, output) = expr.shape();
    compose(vec![
        block_col(vec![
            riesz_p(output),
            compose(vec![riesz_p(output), flip_j(output)])?,
        ])?,
        expr.clone(),
        block_row(vec![
            riesz_p(input),
            compose(vec![flip_j(input), riesz_p(input)])?,
        ])?,
    ])
}

/// Inverse transport `Ξ⁻¹(Y) = (P, JP) Y (P; PJ)` from `(H²)^{2N}` back to
/// `(L²)^N`.
pub fn xi_inverse(expr: &OperatorExpr) -> Result<OperatorExpr> {
    let (input, output) = expr.shape();
    if input % 2 != 0 || output % 2 != 0 {
        return Err(Error::ShapeMismatch(
            "inverse transport needs even dimensions".into(),
        ));
    }
    let (ni, no) = (input / 2, output / 2);
    compose(vec![
        block_row(vec![riesz_p(no), compose(vec![flip_j(no), riesz_p(no)])?])?,
        expr.clone(),
        block_col(vec![riesz_p(ni), compose(vec![riesz_p(ni), flip_j(ni)])?])?,
    ])
}

/// The `n·dim × n·dim` compression of a Hardy-side operator to modes
/// `0 … n-1`, computed column by column. Exact for polynomial symbols;
/// rational symbols must reach the tail target within the window cap.
pub fn finite_section(expr: &OperatorExpr, n: usize) -> Result<CMat> {
    let (input, output) = expr.shape();
    if input != output {
        return Err(Error::ShapeMismatch(
            "finite sections need a square operator".into(),
        ));
    }
    let d = input;
    let mut out = CMat::zeros(n * d, n * d);
    for mode in 0..n {
        for comp in 0..d {
            let e = FourierVec::basis(d, mode as i64, comp);
            let (w, bound, _) = apply_auto(expr, &e)?;
            if bound > tol::WINDOW_TAIL {
                return Err(Error::WindowTooSmall(format!(
                    "section column tail bound {bound:.2e}"
                )));
            }
            for (k, vals) in w.modes() {
                if k >= 0 && (k as usize) < n {
                    for (c, &x) in vals.iter().enumerate() {
                        out[(k as usize * d + c, mode * d + comp)] = x;
                    }
                }
            }
        }
    }
    Ok(out)
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorExpr::Identity { .. } => write!(f, "I"),
            OperatorExpr::RieszP { .. } => write!(f, "P"),
            OperatorExpr::RieszQ { .. } => write!(f, "Q"),
            OperatorExpr::FlipJ { .. } => write!(f, "J"),
            OperatorExpr::Mult(s) => write!(f, "M[{}x{}]", s.symbol.rows(), s.symbol.cols()),
            OperatorExpr::Toep(s) => write!(f, "T[{}x{}]", s.symbol.rows(), s.symbol.cols()),
            OperatorExpr::Hank(s) => write!(f, "H[{}x{}]", s.symbol.rows(), s.symbol.cols()),
            OperatorExpr::Scale(c, e) => write!(f, "({:.3}{:+.3}i)·{}", c.re, c.im, e),
            OperatorExpr::Sum(es) => {
                write!(f, "(")?;
                for (i, e) in es.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, ")")
            }
            OperatorExpr::Compose(es) => {
                for (i, e) in es.iter().enumerate() {
                    if i > 0 {
                        write!(f, "∘")?;
                    }
                    write!(f, "{e}")?;
                }
                Ok(())
            }
            OperatorExpr::Adjoint(e) => write!(f, "({e})*"),
            OperatorExpr::BlockRow(es) => {
                write!(f, "row[")?;
                for (i, e) in es.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, "]")
            }
            OperatorExpr::BlockCol(es) => {
                write!(f, "col[")?;
                for (i, e) in es.iter().enumerate() {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, "]")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::{LaurentMatrix, LaurentPoly};

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn t_sym() -> RationalMatrixFunction {
        RationalMatrixFunction::from_scalar(LaurentPoly::t())
    }

    fn apply1(e: &OperatorExpr, v: &FourierVec) -> FourierVec {
        apply(e, v, 64).unwrap().0
    }

    #[test]
    fn toeplitz_shift() {
        let e0 = FourierVec::basis(1, 0, 0);
        let out = apply1(&toeplitz(t_sym()), &e0);
        assert_eq!(out, FourierVec::basis(1, 1, 0));
    }

    #[test]
    fn hankel_of_shift() {
        let h = hankel(t_sym());
        let out0 = apply1(&h, &FourierVec::basis(1, 0, 0));
        assert_eq!(out0, FourierVec::basis(1, 0, 0));
        let out1 = apply1(&h, &FourierVec::basis(1, 1, 0));
        assert!(out1.is_zero());
        // Hankel of a constant vanishes
        let hc = hankel(RationalMatrixFunction::identity(1));
        assert!(apply1(&hc, &FourierVec::basis(1, 0, 0)).is_zero());
    }

    #[test]
    fn flip_and_projections() {
        let j = flip_j(1);
        let v = FourierVec::basis(1, 2, 0);
        assert_eq!(apply1(&j, &v), FourierVec::basis(1, -3, 0));
        // J² = I, JPJ = Q on a mixed vector
        let mut w = FourierVec::new(1);
        w.add_term(-2, 0, re(1.0));
        w.add_term(3, 0, C64::new(0.0, 2.0));
        let jj = compose(vec![j.clone(), j.clone()]).unwrap();
        assert_eq!(apply1(&jj, &w), w);
        let jpj = compose(vec![j.clone(), riesz_p(1), j]).unwrap();
        assert_eq!(apply1(&jpj, &w), apply1(&riesz_q(1), &w));
    }

    #[test]
    fn toeplitz_product_identity() {
        // T(AB) = T(A)T(B) + H(A)H(B̃) on basis vectors, 2x2 polynomial
        let mut am = LaurentMatrix::zero(2, 2);
        *am.entry_mut(0, 0) = LaurentPoly::from_terms(&[(-1, re(0.5)), (1, re(1.0))]);
        *am.entry_mut(0, 1) = LaurentPoly::from_terms(&[(0, re(1.0)), (2, C64::new(0.0, 0.3))]);
        *am.entry_mut(1, 0) = LaurentPoly::from_terms(&[(-2, re(0.7))]);
        *am.entry_mut(1, 1) = LaurentPoly::one();
        let a = RationalMatrixFunction::from_laurent(am);
        let mut bm = LaurentMatrix::zero(2, 2);
        *bm.entry_mut(0, 0) = LaurentPoly::from_terms(&[(1, re(-0.4))]);
        *bm.entry_mut(0, 1) = LaurentPoly::from_terms(&[(-1, re(0.9)), (0, re(0.2))]);
        *bm.entry_mut(1, 0) = LaurentPoly::from_terms(&[(0, C64::new(0.0, 1.0))]);
        *bm.entry_mut(1, 1) = LaurentPoly::from_terms(&[(2, re(0.6))]);
        let b = RationalMatrixFunction::from_laurent(bm);
        let lhs = toeplitz(a.mul(&b).unwrap());
        let rhs = sum(vec![
            compose(vec![toeplitz(a.clone()), toeplitz(b.clone())]).unwrap(),
            compose(vec![hankel(a.clone()), hankel(b.tilde())]).unwrap(),
        ])
        .unwrap();
        for mode in 0..4 {
            for comp in 0..2 {
                let e = FourierVec::basis(2, mode, comp);
                let d = apply1(&lhs, &e).sub(&apply1(&rhs, &e));
                assert!(d.norm_sup() < 1e-13, "mode {mode} comp {comp}");
            }
        }
    }

    #[test]
    fn mw_of_identity_is_identity() {
        let w = InvolutionMatrix::antidiagonal(1);
        let mw = build_mw(&RationalMatrixFunction::identity(2), &w).unwrap();
        for mode in 0..3 {
            for comp in 0..2 {
                let e = FourierVec::basis(2, mode, comp);
                assert_eq!(apply1(&mw, &e), e);
            }
        }
    }

    #[test]
    fn phi_of_identity_is_identity() {
        let phi = build_phi(&RationalMatrixFunction::identity(2)).unwrap();
        let psi = build_psi(&RationalMatrixFunction::identity(2)).unwrap();
        let mut v = FourierVec::new(1);
        v.add_term(-3, 0, re(1.0));
        v.add_term(0, 0, re(-2.0));
        v.add_term(2, 0, C64::new(0.0, 1.0));
        assert_eq!(apply1(&phi, &v), v);
        assert_eq!(apply1(&psi, &v), v);
    }

    #[test]
    fn xi_transport_of_identity() {
        let id = identity(1);
        let xi = xi_transport(&id).unwrap();
        assert_eq!(xi.shape(), (2, 2));
        let sec = finite_section(&xi, 4).unwrap();
        assert!((sec - CMat::identity(8, 8)).norm() < 1e-14);
    }

    #[test]
    fn finite_sections_of_basic_operators() {
        let sec = finite_section(&toeplitz(t_sym()), 3).unwrap();
        let mut expect = CMat::zeros(3, 3);
        expect[(1, 0)] = re(1.0);
        expect[(2, 1)] = re(1.0);
        assert!((sec - expect).norm() < 1e-14);

        let t2 = RationalMatrixFunction::from_scalar(LaurentPoly::monomial(2, re(1.0)));
        let sec = finite_section(&hankel(t2), 3).unwrap();
        let mut expect = CMat::zeros(3, 3);
        expect[(0, 1)] = re(1.0);
        expect[(1, 0)] = re(1.0);
        assert!((sec - expect).norm() < 1e-14);

        let sec = finite_section(&identity(2), 3).unwrap();
        assert!((sec - CMat::identity(6, 6)).norm() < 1e-14);
    }

    #[test]
    fn adjoint_sections_are_conjugate_transposes() {
        let mut am = LaurentMatrix::zero(2, 2);
        *am.entry_mut(0, 0) = LaurentPoly::from_terms(&[(-1, C64::new(0.5, 0.2)), (1, re(1.0))]);
        *am.entry_mut(0, 1) = LaurentPoly::from_terms(&[(0, re(1.0))]);
        *am.entry_mut(1, 0) = LaurentPoly::from_terms(&[(2, C64::new(0.0, -0.7))]);
        *am.entry_mut(1, 1) = LaurentPoly::from_terms(&[(1, re(0.3))]);
        let a = RationalMatrixFunction::from_laurent(am);
        for (expr, name) in [(toeplitz(a.clone()), "T"), (hankel(a.clone()), "H")] {
            let n = 5;
            let direct = finite_section(&expr, n).unwrap();
            let adj = finite_section(&adjoint(expr), n).unwrap();
            assert!(
                (direct.adjoint() - adj).norm() < 1e-13,
                "{name} adjoint mismatch"
            );
        }
    }

    #[test]
    fn rational_symbol_window_bound() {
        // M(1/(1 - t/2)) applied with a finite window has a nonzero but
        // shrinking tail bound.
        let f = RationalMatrixFunction::from_scalar_rational(
            LaurentPoly::one(),
            LaurentPoly::from_terms(&[(0, re(1.0)), (1, re(-0.5))]),
        )
        .unwrap();
        let m = mult(f);
        let v = FourierVec::basis(1, 0, 0);
        let (_, b32) = apply(&m, &v, 32).unwrap();
        let (_, b64) = apply(&m, &v, 72).unwrap();
        assert!(b32 > 0.0);
        assert!(b64 < b32);
        let (w, bound, window) = apply_auto(&m, &v).unwrap();
        assert!(bound <= tol::WINDOW_TAIL);
        assert!(window <= tol::WINDOW_MAX);
        assert!((w.coeff(3, 0) - re(0.125)).norm() < 1e-12);
    }

    #[test]
    fn block_matrix_acts_blockwise() {
        // [[I, J], [P, Q]] applied to a stacked vector
        let m = block_matrix(vec![
            vec![identity(1), flip_j(1)],
            vec![riesz_p(1), riesz_q(1)],
        ])
        .unwrap();
        assert_eq!(m.shape(), (2, 2));
        let mut v = FourierVec::new(2);
        v.add_term(1, 0, re(1.0));
        v.add_term(-2, 1, re(3.0));
        let out = apply1(&m, &v);
        // first block: v0 + J v1 = e_1 + 3 e_1 -> 4 at mode 1
        assert!((out.coeff(1, 0) - re(4.0)).norm() < 1e-15);
        // second block: P v0 + Q v1 = e_1 comp0 kept, -2 mode of comp1 kept
        assert!((out.coeff(1, 1) - re(1.0)).norm() < 1e-15);
        assert!((out.coeff(-2, 1) - re(3.0)).norm() < 1e-15);
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let bad = compose(vec![toeplitz(t_sym()), identity(2)]);
        assert!(matches!(bad, Err(Error::ShapeMismatch(_))));
        let e = FourierVec::basis(2, 0, 0);
        assert!(matches!(
            apply(&toeplitz(t_sym()), &e, 16),
            Err(Error::ShapeMismatch(_))
        ));
    }
}
