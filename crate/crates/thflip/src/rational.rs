//! Rational matrix functions on the unit circle.
//!
//! A [`RationalMatrixFunction`] is an `rows × cols` matrix of Laurent
//! polynomials over one scalar denominator. After normalization the
//! denominator is an ordinary polynomial with constant term 1, so common
//! monomial factors `t^k` between numerator and denominator are gone.
//!
//! Functions are *valid* symbols when the denominator has no roots on the
//! unit circle (within [`tol::TAU_CIRCLE`]). All analysis entry points check
//! this where they need it.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Error;
use crate::laurent::{LaurentMatrix, LaurentPoly};
use crate::numeric::{self, CMat};
use crate::tol;
use crate::{C64, Result};

/// `N×N` constant matrix `W` with `W² = I`.
#[derive(Clone, Debug, PartialEq)]
pub struct InvolutionMatrix {
    mat: CMat,
}

impl InvolutionMatrix {
    pub fn new(mat: CMat) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::ShapeMismatch(format!(
                "involution must be square, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let dev = numeric::max_abs(&(&mat * &mat - CMat::identity(mat.nrows(), mat.ncols())));
        if dev > 1e-12 {
            return Err(Error::NotInvolution(dev));
        }
        Ok(InvolutionMatrix { mat })
    }

    pub fn identity(n: usize) -> Self {
        InvolutionMatrix {
            mat: CMat::identity(n, n),
        }
    }

    pub fn neg_identity(n: usize) -> Self {
        InvolutionMatrix {
            mat: -CMat::identity(n, n),
        }
    }

    /// The block antidiagonal `[[0, I_n], [I_n, 0]]` of size `2n`.
    pub fn antidiagonal(n: usize) -> Self {
        let mut m = CMat::zeros(2 * n, 2 * n);
        for i in 0..n {
            m[(i, n + i)] = C64::new(1.0, 0.0);
            m[(n + i, i)] = C64::new(1.0, 0.0);
        }
        InvolutionMatrix { mat: m }
    }

    pub fn size(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn to_rational(&self) -> RationalMatrixFunction {
        RationalMatrixFunction::constant(&self.mat)
    }

    /// Signature `(σ₊, σ₋)`: multiplicities of the eigenvalues `+1` and `-1`,
    /// read from the ranks of the spectral projectors `(I ± W)/2`.
    pub fn signature(&self) -> (usize, usize) {
        let n = self.size();
        let id = CMat::identity(n, n);
        let plus = (&id + &self.mat).scale(0.5);
        let minus = (&id - &self.mat).scale(0.5);
        (
            numeric::rank_with_floor(&plus, tol::PROJECTOR_CUT, 1.0),
            numeric::rank_with_floor(&minus, tol::PROJECTOR_CUT, 1.0),
        )
    }

    /// Eigenbasis `T` with `W = T diag(I_{σ₊}, -I_{σ₋}) T⁻¹`; the `+1`
    /// eigenvectors come first.
    pub fn eigenbasis(&self) -> (CMat, usize, usize) {
        let n = self.size();
        let id = CMat::identity(n, n);
        let plus =
            numeric::range_basis_with_floor(&(&id + &self.mat).scale(0.5), tol::PROJECTOR_CUT, 1.0);
        let minus =
            numeric::range_basis_with_floor(&(&id - &self.mat).scale(0.5), tol::PROJECTOR_CUT, 1.0);
        let (p, q) = (plus.ncols(), minus.ncols());
        debug_assert_eq!(p + q, n);
        let mut t = CMat::zeros(n, n);
        t.view_mut((0, 0), (n, p)).copy_from(&plus);
        t.view_mut((0, p), (n, q)).copy_from(&minus);
        (t, p, q)
    }
}

/// Rational matrix function `num(t) / den(t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMatrixFunction {
    num: LaurentMatrix,
    den: LaurentPoly,
}

impl RationalMatrixFunction {
    /// Builds and normalizes. Fails when the denominator is identically zero.
    pub fn new(num: LaurentMatrix, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::SingularSymbol);
        }
        let mut f = RationalMatrixFunction { num, den };
        f.normalize();
        Ok(f)
    }

    /// A matrix Laurent polynomial (denominator 1).
    pub fn from_laurent(num: LaurentMatrix) -> Self {
        RationalMatrixFunction {
            num,
            den: LaurentPoly::one(),
        }
    }

    /// A scalar (1×1) Laurent polynomial.
    pub fn from_scalar(p: LaurentPoly) -> Self {
        let mut m = LaurentMatrix::zero(1, 1);
        *m.entry_mut(0, 0) = p;
        Self::from_laurent(m)
    }

    pub fn from_scalar_rational(p: LaurentPoly, q: LaurentPoly) -> Result<Self> {
        let mut m = LaurentMatrix::zero(1, 1);
        *m.entry_mut(0, 0) = p;
        Self::new(m, q)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_laurent(LaurentMatrix::identity(n))
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self::from_laurent(LaurentMatrix::zero(rows, cols))
    }

    pub fn constant(m: &CMat) -> Self {
        Self::from_laurent(LaurentMatrix::constant(m))
    }

    /// `diag(c_j t^{k_j})`.
    pub fn diag_monomials(pairs: &[(i64, C64)]) -> Self {
        Self::from_laurent(LaurentMatrix::diag_monomials(pairs))
    }

    fn normalize(&mut self) {
        // Shift so the denominator is a polynomial with nonzero constant
        // term, then scale it to den(0) = 1.
        let lo = self.den.lowest().expect("nonzero denominator");
        if lo != 0 {
            self.den = self.den.shift(-lo);
            self.num = self.num.shift(-lo);
        }
        let c0 = self.den.coeff(0);
        debug_assert!(c0.norm() > 0.0);
        let inv = C64::new(1.0, 0.0) / c0;
        self.den = self.den.scale(inv);
        self.num = self.num.scale(inv);
    }

    pub fn rows(&self) -> usize {
        self.num.rows()
    }

    pub fn cols(&self) -> usize {
        self.num.cols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn numerator(&self) -> &LaurentMatrix {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    /// True when the denominator is constant, i.e. the function is a matrix
    /// Laurent polynomial.
    pub fn is_polynomial(&self) -> bool {
        self.den.highest() == Some(0)
    }

    /// The 1×1 entry of a scalar function, as numerator/denominator pair.
    pub fn scalar_parts(&self) -> Option<(&LaurentPoly, &LaurentPoly)> {
        if self.rows() == 1 && self.cols() == 1 {
            Some((self.num.entry(0, 0), &self.den))
        } else {
            None
        }
    }

    fn require_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.require_same_shape(other)?;
        if self.den == other.den {
            return Self::new(self.num.add(&other.num), self.den.clone());
        }
        let num = self
            .num
            .scale_poly(&other.den)
            .add(&other.num.scale_poly(&self.den));
        Self::new(num, self.den.mul(&other.den))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RationalMatrixFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut f = RationalMatrixFunction {
            num: self.num.scale(s),
            den: self.den.clone(),
        };
        if s.norm() > 0.0 {
            f.normalize();
        }
        f
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols() != other.rows() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} * {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        Self::new(self.num.matmul(&other.num), self.den.mul(&other.den))
    }

    /// Product with a constant matrix on the right.
    pub fn mul_const(&self, m: &CMat) -> Result<Self> {
        self.mul(&Self::constant(m))
    }

    /// Entrywise product with a scalar (1×1) rational function.
    pub fn mul_scalar_fn(&self, s: &Self) -> Result<Self> {
        let (sn, _) = s
            .scalar_parts()
            .ok_or_else(|| Error::ShapeMismatch("scalar factor must be 1x1".into()))?;
        Self::new(self.num.scale_poly(sn), self.den.mul(&s.den))
    }

    /// Product with a constant matrix on the left.
    pub fn lmul_const(&self, m: &CMat) -> Result<Self> {
        Self::constant(m).mul(self)
    }

    /// `Ã(t) = A(1/t)`.
    pub fn tilde(&self) -> Self {
        let mut f = RationalMatrixFunction {
            num: self.num.tilde(),
            den: self.den.tilde(),
        };
        f.normalize();
        f
    }

    /// Pointwise conjugate transpose on the circle, `A*(t) = (A(t))^H`.
    pub fn conj_star(&self) -> Self {
        let mut f = RationalMatrixFunction {
            num: self.num.conj_star(),
            den: self.den.conj_star(),
        };
        f.normalize();
        f
    }

    pub fn transpose(&self) -> Self {
        RationalMatrixFunction {
            num: self.num.transpose(),
            den: self.den.clone(),
        }
    }

    /// Entrywise evaluation `num(z)/den(z)`.
    pub fn eval_at(&self, z: C64) -> Result<CMat> {
        if z.norm() == 0.0 && self.num.lowest().unwrap_or(0) < 0 {
            return Err(Error::EvalAtPole);
        }
        let d = self.den.eval(z);
        if d.norm() <= tol::TAU_EVAL {
            return Err(Error::EvalAtPole);
        }
        Ok(self.num.eval(z) / d)
    }

    /// Values on the uniform circle grid.
    pub fn eval_circle(&self, grid: usize) -> Result<Vec<CMat>> {
        (0..grid)
            .map(|m| self.eval_at(numeric::circle_point(m, grid)))
            .collect()
    }

    /// Sup-norm distance to `other` sampled on a circle grid.
    pub fn grid_distance(&self, other: &Self, grid: usize) -> Result<f64> {
        self.require_same_shape(other)?;
        let mut worst = 0.0_f64;
        for m in 0..grid {
            let z = numeric::circle_point(m, grid);
            let d = numeric::max_abs(&(self.eval_at(z)? - other.eval_at(z)?));
            worst = worst.max(d);
        }
        Ok(worst)
    }

    /// Determinant as a scalar rational function `det(num) / den^N`.
    pub fn det(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("determinant of non-square".into()));
        }
        let dn = self.num.det();
        let mut dd = LaurentPoly::one();
        for _ in 0..self.rows() {
            dd = dd.mul(&self.den);
        }
        if dn.is_zero() {
            return Err(Error::SingularSymbol);
        }
        Self::new(
            {
                let mut m = LaurentMatrix::zero(1, 1);
                *m.entry_mut(0, 0) = dn;
                m
            },
            dd,
        )
    }

    /// Determinant and its winding number along the unit circle.
    ///
    /// `wind` counts zeros minus poles of `det` inside the open disk,
    /// including monomial offsets. Fails when a zero or pole lies within
    /// `tau_circle` of the circle.
    pub fn det_and_winding(&self) -> Result<(Self, i64)> {
        let det = self.det()?;
        let (dn, _) = det.scalar_parts().expect("det is scalar");
        let wn = dn
            .winding(tol::TAU_CIRCLE)
            .ok_or_else(|| Error::NotInvertibleOnCircle("determinant zero near |z|=1".into()))?;
        // wind(den^N) = N · wind(den); taken from the unexpanded denominator
        // so multiple roots do not smear across the circle.
        let wd = self
            .den
            .winding(tol::TAU_CIRCLE)
            .ok_or_else(|| Error::NotInvertibleOnCircle("denominator zero near |z|=1".into()))?;
        Ok((det.clone(), wn - self.rows() as i64 * wd))
    }

    /// Winding number of a valid square symbol, shorthand for
    /// `det_and_winding().1`.
    pub fn winding(&self) -> Result<i64> {
        Ok(self.det_and_winding()?.1)
    }

    /// True when the denominator has no roots within `TAU_CIRCLE` of the
    /// circle, i.e. the function is a legitimate symbol.
    pub fn is_valid_on_circle(&self) -> bool {
        let (_, roots) = self.den.roots();
        roots.iter().all(|r| (r.norm() - 1.0).abs() > tol::TAU_CIRCLE)
    }

    /// Adjugate-based inverse: `A⁻¹ = adj(num) · den / det(num)`.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("inverse of non-square".into()));
        }
        let det = self.num.det();
        let scale = self.num.max_coeff().max(f64::MIN_POSITIVE);
        if det.max_coeff() <= 1e-10 * scale.powi(self.rows() as i32) {
            return Err(Error::SingularSymbol);
        }
        let adj = self.num.adjugate();
        Self::new(adj.scale_poly(&self.den), det)
    }

    /// Membership test for the algebra `ℬ_W = {A : W Ã W = A}`.
    pub fn check_bw_membership(&self, w: &InvolutionMatrix) -> Result<bool> {
        if !self.is_square() || self.rows() != w.size() {
            return Err(Error::ShapeMismatch(format!(
                "symbol {}x{} vs involution {}",
                self.rows(),
                self.cols(),
                w.size()
            )));
        }
        let waw = self.tilde().lmul_const(w.matrix())?.mul_const(w.matrix())?;
        let diff = waw.sub(self)?;
        let scale = self.num.max_coeff().max(1.0);
        Ok(symbol_coeff_norm(&diff) <= tol::TAU_SYMMETRY * scale)
    }

    /// Fourier coefficients on the exponent window `[lo, hi]`, together with
    /// a tail bound for everything the window misses.
    ///
    /// Laurent-polynomial input gives exact coefficients; the bound is then
    /// the (exactly known) mass outside the window. Rational input is sampled
    /// on a circle grid sized by the geometric decay of the coefficients,
    /// which is set by the denominator roots closest to the circle.
    pub fn fourier_coeffs(&self, lo: i64, hi: i64) -> Result<(BTreeMap<i64, CMat>, f64)> {
        assert!(lo <= hi);
        if self.is_polynomial() {
            let mut out = BTreeMap::new();
            let mut tail = 0.0;
            for (i, j, k, c) in self.iter_coeffs() {
                if k >= lo && k <= hi {
                    out.entry(k)
                        .or_insert_with(|| CMat::zeros(self.rows(), self.cols()))[(i, j)] = c;
                } else {
                    tail += c.norm();
                }
            }
            return Ok((out, tail));
        }
        let (_, droots) = self.den.roots();
        let mut ratio = 0.0_f64;
        for r in &droots {
            let d = r.norm();
            if (d - 1.0).abs() <= tol::TAU_CIRCLE {
                return Err(Error::NotInvertibleOnCircle(
                    "denominator zero near |z|=1".into(),
                ));
            }
            ratio = ratio.max(if d < 1.0 { d } else { 1.0 / d });
        }
        let num_lo = self.num.lowest().unwrap_or(0);
        let num_hi = self.num.highest().unwrap_or(0);
        let span = (hi - lo).unsigned_abs() as usize
            + (num_hi - num_lo).unsigned_abs() as usize
            + self.den.highest().unwrap_or(0).unsigned_abs() as usize;
        // Aliasing in the inverse DFT decays like ratio^grid.
        let decay_len = if ratio > 0.0 {
            ((1e-16_f64.ln() / ratio.ln()).ceil() as usize).min(1 << 14)
        } else {
            0
        };
        let grid = (2 * span + decay_len + 32).next_power_of_two().min(1 << 15);
        let values = self.eval_circle(grid)?;
        let mut out = BTreeMap::new();
        let mut edge = 0.0_f64;
        for k in (lo - 4).max(lo - grid as i64 / 4)..=(hi + 4) {
            let mut acc = CMat::zeros(self.rows(), self.cols());
            for (m, v) in values.iter().enumerate() {
                let w = numeric::circle_point((m * k.rem_euclid(grid as i64) as usize) % grid, grid)
                    .conj();
                acc += v * w;
            }
            acc /= C64::new(grid as f64, 0.0);
            let mag = numeric::max_abs(&acc);
            if k < lo || k > hi {
                edge = edge.max(mag);
            } else {
                out.insert(k, acc);
            }
        }
        // Geometric extrapolation of the missed mass plus aliasing residue.
        let denom = (1.0 - ratio).max(1e-6);
        let scale = values.iter().map(numeric::max_abs).fold(0.0, f64::max);
        let alias = scale * ratio.powi((grid.saturating_sub(span)) as i32);
        let tail = edge * ratio / denom + alias + 1e-15 * scale;
        Ok((out, tail))
    }

    fn iter_coeffs(&self) -> impl Iterator<Item = (usize, usize, i64, C64)> + '_ {
        (0..self.rows()).flat_map(move |i| {
            (0..self.cols()).flat_map(move |j| {
                self.num
                    .entry(i, j)
                    .terms()
                    .map(move |(k, c)| (i, j, k, c))
            })
        })
    }

    /// Extracts a sub-block (same denominator).
    pub fn block(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> Self {
        RationalMatrixFunction {
            num: self.num.block(row0, col0, rows, cols),
            den: self.den.clone(),
        }
    }

    /// Stacks blocks of rational functions into one matrix over the product
    /// denominator. Rows of `grid` must have matching heights and the
    /// stacked widths must agree.
    pub fn from_blocks(grid: &[Vec<&RationalMatrixFunction>]) -> Result<Self> {
        if grid.is_empty() || grid[0].is_empty() {
            return Err(Error::ShapeMismatch("empty block grid".into()));
        }
        let mut den = LaurentPoly::one();
        for row in grid {
            for b in row {
                den = den.mul(&b.den);
            }
        }
        let row_heights: Vec<usize> = grid
            .iter()
            .map(|row| row.first().map(|b| b.rows()).unwrap_or(0))
            .collect();
        let col_widths: Vec<usize> = grid[0].iter().map(|b| b.cols()).collect();
        let total_rows: usize = row_heights.iter().sum();
        let total_cols: usize = col_widths.iter().sum();
        let mut num = LaurentMatrix::zero(total_rows, total_cols);
        let mut r0 = 0;
        for (bi, row) in grid.iter().enumerate() {
            if row.len() != col_widths.len() {
                return Err(Error::ShapeMismatch("ragged block grid".into()));
            }
            let mut c0 = 0;
            for (bj, b) in row.iter().enumerate() {
                if b.rows() != row_heights[bi] || b.cols() != col_widths[bj] {
                    return Err(Error::ShapeMismatch(format!(
                        "block ({bi},{bj}) is {}x{}, expected {}x{}",
                        b.rows(),
                        b.cols(),
                        row_heights[bi],
                        col_widths[bj]
                    )));
                }
                // Multiply by every other block's denominator (by position,
                // since the same reference may appear in several slots).
                let mut cof = LaurentPoly::one();
                for (ri, row2) in grid.iter().enumerate() {
                    for (ci, b2) in row2.iter().enumerate() {
                        if (ri, ci) != (bi, bj) {
                            cof = cof.mul(&b2.den);
                        }
                    }
                }
                num.set_block(r0, c0, &b.num.scale_poly(&cof));
                c0 += col_widths[bj];
            }
            r0 += row_heights[bi];
        }
        Self::new(num, den)
    }

    /// Largest coefficient magnitude of the numerator; the natural scale of
    /// the symbol given that `den(0) = 1`.
    pub fn coeff_scale(&self) -> f64 {
        self.num.max_coeff()
    }
}

/// Total coefficient mass of a symbol, used for near-zero tests.
pub fn symbol_coeff_norm(f: &RationalMatrixFunction) -> f64 {
    f.numerator().max_coeff()
}

/// Audit result for one-sided analyticity and invertibility.
#[derive(Clone, Debug)]
pub struct FactorAudit {
    /// Poles lie strictly on the correct side of the circle.
    pub poles_ok: bool,
    /// Zeros of the determinant lie strictly on the correct side.
    pub zeros_ok: bool,
    /// Entries are analytic at the limit point (∞ for minus, 0 for plus).
    pub analytic_ok: bool,
    /// The determinant does not vanish at the limit point.
    pub invertible_at_limit: bool,
    /// Smallest distance of any audited root to the unit circle.
    pub margin: f64,
}

impl FactorAudit {
    pub fn pass(&self) -> bool {
        self.poles_ok
            && self.zeros_ok
            && self.analytic_ok
            && self.invertible_at_limit
            && self.margin > tol::TAU_CIRCLE
    }
}

/// Checks membership in `Gℬ₋`: analytic and invertible on `|t| ≥ 1`
/// including ∞, so all poles and determinant zeros lie in the open disk.
pub fn audit_minus(f: &RationalMatrixFunction) -> Result<FactorAudit> {
    if !f.is_square() {
        return Err(Error::ShapeMismatch("audit of non-square factor".into()));
    }
    let den_deg = f.denominator().highest().unwrap_or(0);
    let (_, droots) = f.denominator().roots();
    let mut margin = f64::INFINITY;
    let poles_ok = droots.iter().all(|r| {
        margin = margin.min((r.norm() - 1.0).abs());
        r.norm() < 1.0
    });
    let analytic_ok = f
        .numerator()
        .entries()
        .all(|p| p.highest().unwrap_or(i64::MIN) <= den_deg);
    let detn = f.numerator().det();
    if detn.is_zero() {
        return Ok(FactorAudit {
            poles_ok,
            zeros_ok: false,
            analytic_ok,
            invertible_at_limit: false,
            margin: 0.0,
        });
    }
    let (ord0, zroots) = detn.roots();
    let _ = ord0; // zeros at t = 0 are inside the disk, which is fine here
    let zeros_ok = zroots.iter().all(|r| {
        margin = margin.min((r.norm() - 1.0).abs());
        r.norm() < 1.0
    });
    let invertible_at_limit = detn.highest() == Some(f.rows() as i64 * den_deg);
    Ok(FactorAudit {
        poles_ok,
        zeros_ok,
        analytic_ok,
        invertible_at_limit,
        margin,
    })
}

/// Checks membership in `Gℬ₊`: analytic and invertible on `|t| ≤ 1`, so all
/// poles and determinant zeros lie strictly outside the closed disk.
pub fn audit_plus(f: &RationalMatrixFunction) -> Result<FactorAudit> {
    if !f.is_square() {
        return Err(Error::ShapeMismatch("audit of non-square factor".into()));
    }
    let (_, droots) = f.denominator().roots();
    let mut margin = f64::INFINITY;
    let poles_ok = droots.iter().all(|r| {
        margin = margin.min((r.norm() - 1.0).abs());
        r.norm() > 1.0
    });
    let analytic_ok = f
        .numerator()
        .entries()
        .all(|p| p.lowest().unwrap_or(0) >= 0);
    let detn = f.numerator().det();
    if detn.is_zero() {
        return Ok(FactorAudit {
            poles_ok,
            zeros_ok: false,
            analytic_ok,
            invertible_at_limit: false,
            margin: 0.0,
        });
    }
    let (ord0, zroots) = detn.roots();
    let zeros_ok = ord0 == 0
        && zroots.iter().all(|r| {
            margin = margin.min((r.norm() - 1.0).abs());
            r.norm() > 1.0
        });
    let invertible_at_limit = detn.lowest() == Some(0);
    Ok(FactorAudit {
        poles_ok,
        zeros_ok,
        analytic_ok,
        invertible_at_limit,
        margin,
    })
}

impl fmt::Display for RationalMatrixFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "num:\n{}", self.num)?;
        if !self.is_polynomial() {
            write!(f, "den: {}", self.den)?;
        }
        Ok(())
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
    fn product_of_triangular_pair_is_identity() {
        // [[t,1],[0,1]] * [[t^-1,-t^-1],[0,1]] = I, the hand adjugate check
        let mut a = LaurentMatrix::zero(2, 2);
        *a.entry_mut(0, 0) = LaurentPoly::t();
        *a.entry_mut(0, 1) = LaurentPoly::one();
        *a.entry_mut(1, 1) = LaurentPoly::one();
        let a = RationalMatrixFunction::from_laurent(a);
        let b = a.inverse().unwrap();
        assert!((b.eval_at(re(0.5)).unwrap()
            - CMat::from_row_slice(2, 2, &[re(2.0), re(-2.0), re(0.0), re(1.0)]))
        .norm()
            < 1e-12);
        let prod = a.mul(&b).unwrap();
        let dist = prod
            .grid_distance(&RationalMatrixFunction::identity(2), 64)
            .unwrap();
        assert!(dist < 1e-12);
    }

    #[test]
    fn identity_plus_zero() {
        let i2 = RationalMatrixFunction::identity(2);
        let z = RationalMatrixFunction::zero(2, 2);
        let s = i2.add(&z).unwrap();
        assert!(s.grid_distance(&i2, 16).unwrap() < 1e-15);
    }

    #[test]
    fn tilde_of_rational_normalizes_monomials() {
        // (t-2)/(t-3) under tilde becomes (1-2t)/(1-3t)
        let f = RationalMatrixFunction::from_scalar_rational(
            LaurentPoly::from_terms(&[(1, re(1.0)), (0, re(-2.0))]),
            LaurentPoly::from_terms(&[(1, re(1.0)), (0, re(-3.0))]),
        )
        .unwrap();
        let g = f.tilde();
        // den normalized to constant term 1: (1-2t)/(1-3t)
        let (n, d) = g.scalar_parts().unwrap();
        assert!((n.coeff(0) - re(1.0)).norm() < 1e-12);
        assert!((n.coeff(1) - re(-2.0)).norm() < 1e-12);
        assert!((d.coeff(0) - re(1.0)).norm() < 1e-12);
        assert!((d.coeff(1) - re(-3.0)).norm() < 1e-12);
        // and pointwise g(z) = f(1/z)
        let z = C64::new(0.3, 0.4);
        let lhs = g.eval_at(z).unwrap()[(0, 0)];
        let rhs = f.eval_at(z.inv()).unwrap()[(0, 0)];
        assert!((lhs - rhs).norm() < 1e-12);
        assert!(g.tilde().grid_distance(&f, 32).unwrap() < 1e-12);
    }

    #[test]
    fn evaluation_examples() {
        let t2 = scalar(&[(2, 1.0)]);
        assert!((t2.eval_at(re(-1.0)).unwrap()[(0, 0)] - re(1.0)).norm() < 1e-15);
        let id = RationalMatrixFunction::identity(3);
        let z = C64::new(0.2, -0.7);
        assert!((id.eval_at(z).unwrap() - CMat::identity(3, 3)).norm() < 1e-15);
        let mut off = LaurentMatrix::zero(2, 2);
        *off.entry_mut(0, 1) = LaurentPoly::t();
        *off.entry_mut(1, 0) = LaurentPoly::t();
        let w = RationalMatrixFunction::from_laurent(off).eval_at(re(1.0)).unwrap();
        assert!((w - CMat::from_row_slice(2, 2, &[re(0.0), re(1.0), re(1.0), re(0.0)])).norm() < 1e-15);
    }

    #[test]
    fn winding_examples() {
        let d = RationalMatrixFunction::diag_monomials(&[(1, re(1.0)), (1, re(1.0))]);
        assert_eq!(d.winding().unwrap(), 2);
        assert_eq!(scalar(&[(1, 1.0), (0, 2.0)]).winding().unwrap(), 0);
        assert_eq!(scalar(&[(1, 1.0), (0, -0.5)]).winding().unwrap(), 1);
        // winding is additive under products
        let a = scalar(&[(1, 1.0), (0, -0.5)]);
        let b = scalar(&[(2, 1.0), (0, 2.0)]);
        let ab = a.mul(&b).unwrap();
        assert_eq!(
            ab.winding().unwrap(),
            a.winding().unwrap() + b.winding().unwrap()
        );
    }

    #[test]
    fn winding_rejects_circle_roots() {
        let bad = scalar(&[(1, 1.0), (-1, 1.0)]);
        assert!(matches!(
            bad.winding(),
            Err(Error::NotInvertibleOnCircle(_))
        ));
    }

    #[test]
    fn fourier_of_monomial_is_exact() {
        let t3 = scalar(&[(3, 1.0)]);
        let (c, tail) = t3.fourier_coeffs(-2, 5).unwrap();
        assert_eq!(tail, 0.0);
        assert!((c[&3][(0, 0)] - re(1.0)).norm() < 1e-15);
        assert!(c.get(&2).is_none());
    }

    #[test]
    fn fourier_of_geometric_series() {
        // 1/(1 - t/2): c_k = 2^{-k} for k >= 0
        let f = RationalMatrixFunction::from_scalar_rational(
            LaurentPoly::one(),
            LaurentPoly::from_terms(&[(0, re(1.0)), (1, re(-0.5))]),
        )
        .unwrap();
        let (c, tail) = f.fourier_coeffs(-4, 20).unwrap();
        for k in 0..=20_i64 {
            assert!(
                (c[&k][(0, 0)] - re(0.5_f64.powi(k as i32))).norm() < 1e-12,
                "coefficient {k}"
            );
        }
        assert!(numeric::max_abs(&c[&-1]) < 1e-12);
        assert!(tail < 1e-5 && tail > 0.0);

        // 1/(t-2): c_0 = -1/2
        let g = RationalMatrixFunction::from_scalar_rational(
            LaurentPoly::one(),
            LaurentPoly::from_terms(&[(1, re(1.0)), (0, re(-2.0))]),
        )
        .unwrap();
        let (c, _) = g.fourier_coeffs(-2, 8).unwrap();
        assert!((c[&0][(0, 0)] - re(-0.5)).norm() < 1e-12);
    }

    #[test]
    fn fourier_coeffs_match_quadrature() {
        // independent check: trapezoid quadrature of f(e^iθ) e^{-ikθ}
        let f = RationalMatrixFunction::from_scalar_rational(
            LaurentPoly::from_terms(&[(-1, re(0.3)), (0, re(1.0)), (2, re(-0.2))]),
            LaurentPoly::from_terms(&[(0, re(1.0)), (1, re(0.4)), (2, re(0.1))]),
        )
        .unwrap();
        let (c, _) = f.fourier_coeffs(-6, 6).unwrap();
        let m = 4096;
        for k in -6..=6_i64 {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..m {
                let z = numeric::circle_point(i, m);
                let w = numeric::circle_point((i * k.rem_euclid(m as i64) as usize) % m, m).conj();
                acc += f.eval_at(z).unwrap()[(0, 0)] * w;
            }
            acc /= re(m as f64);
            assert!((c[&k][(0, 0)] - acc).norm() < 1e-10, "mode {k}");
        }
    }

    #[test]
    fn product_coeffs_are_convolution() {
        let a = scalar(&[(-1, 0.5), (0, 1.0), (2, -0.25)]);
        let b = scalar(&[(0, 2.0), (1, 1.0)]);
        let ab = a.mul(&b).unwrap();
        let (ca, _) = a.fourier_coeffs(-3, 4).unwrap();
        let (cb, _) = b.fourier_coeffs(-3, 4).unwrap();
        let (cab, _) = ab.fourier_coeffs(-3, 4).unwrap();
        for k in -1..=3_i64 {
            let mut conv = C64::new(0.0, 0.0);
            for j in -3..=4_i64 {
                if let (Some(x), Some(y)) = (ca.get(&j), cb.get(&(k - j))) {
                    conv += x[(0, 0)] * y[(0, 0)];
                }
            }
            assert!((cab[&k][(0, 0)] - conv).norm() < 1e-13);
        }
    }

    #[test]
    fn bw_membership_examples() {
        let w = InvolutionMatrix::new(CMat::from_row_slice(
            2,
            2,
            &[re(0.0), re(1.0), re(1.0), re(0.0)],
        ))
        .unwrap();
        let mut a = LaurentMatrix::zero(2, 2);
        *a.entry_mut(0, 0) = LaurentPoly::t();
        *a.entry_mut(0, 1) = LaurentPoly::one();
        *a.entry_mut(1, 0) = LaurentPoly::one();
        *a.entry_mut(1, 1) = LaurentPoly::monomial(-1, re(1.0));
        let a = RationalMatrixFunction::from_laurent(a);
        assert!(a.check_bw_membership(&w).unwrap());

        let d = RationalMatrixFunction::diag_monomials(&[(1, re(1.0)), (1, re(1.0))]);
        assert!(!d.check_bw_membership(&w).unwrap());

        let sym = scalar(&[(1, 1.0), (-1, 1.0)]);
        assert!(sym
            .check_bw_membership(&InvolutionMatrix::identity(1))
            .unwrap());
    }

    #[test]
    fn involution_validation() {
        assert!(InvolutionMatrix::new(CMat::from_row_slice(2, 2, &[
            re(1.0),
            re(1.0),
            re(0.0),
            re(1.0)
        ]))
        .is_err());
        let anti = InvolutionMatrix::antidiagonal(2);
        assert_eq!(anti.size(), 4);
        assert_eq!(anti.signature(), (2, 2));
    }

    #[test]
    fn inverse_roundtrip_and_audit() {
        // 1 - 0.5 t^{-1} is in Gℬ₋ (zero at 0.5, analytic at ∞, value 1 there)
        let f = scalar(&[(0, 1.0), (-1, -0.5)]);
        assert!(audit_minus(&f).unwrap().pass());
        assert!(!audit_plus(&f).unwrap().pass());
        let inv = f.inverse().unwrap();
        assert!(audit_minus(&inv).unwrap().pass());
        let prod = f.mul(&inv).unwrap();
        assert!(
            prod.grid_distance(&RationalMatrixFunction::identity(1), 64)
                .unwrap()
                < 1e-12
        );
        // 1 - t/2 is in Gℬ₊ (zero at 2)
        let g = scalar(&[(0, 1.0), (1, -0.5)]);
        assert!(audit_plus(&g).unwrap().pass());
        assert!(!audit_minus(&g).unwrap().pass());
        assert!(audit_plus(&g.inverse().unwrap()).unwrap().pass());
    }

    #[test]
    fn blocks_roundtrip() {
        let a = scalar(&[(1, 1.0)]);
        let b = scalar(&[(0, 2.0)]);
        let z = RationalMatrixFunction::zero(1, 1);
        let i = RationalMatrixFunction::identity(1);
        let blk =
            RationalMatrixFunction::from_blocks(&[vec![&a, &b], vec![&z, &i]]).unwrap();
        assert_eq!((blk.rows(), blk.cols()), (2, 2));
        let z1 = C64::new(0.6, 0.3);
        let v = blk.eval_at(z1).unwrap();
        assert!((v[(0, 0)] - z1).norm() < 1e-14);
        assert!((v[(0, 1)] - re(2.0)).norm() < 1e-14);
        assert!((v[(1, 1)] - re(1.0)).norm() < 1e-14);
        let back = blk.block(0, 0, 1, 1);
        assert!(back.grid_distance(&a, 16).unwrap() < 1e-13);
    }
}
