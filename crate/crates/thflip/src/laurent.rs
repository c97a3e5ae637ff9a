//! Scalar and matrix Laurent polynomials `Σ_k c_k t^k` with finite support.
//!
//! Coefficients are complex doubles. After every arithmetic operation the
//! result is normalized: coefficients below `tol::REL_DROP` relative to the
//! largest magnitude are dropped, so supports stay finite under products.

use std::collections::BTreeMap;
use std::fmt;

use crate::numeric::{self, CMat};
use crate::tol;
use crate::C64;

/// A Laurent polynomial, stored as a map from exponent to coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, C64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(0, C64::new(1.0, 0.0))
    }

    pub fn constant(c: C64) -> Self {
        Self::monomial(0, c)
    }

    /// `c · t^k`.
    pub fn monomial(k: i64, c: C64) -> Self {
        let mut coeffs = BTreeMap::new();
        if c.norm() > 0.0 {
            coeffs.insert(k, c);
        }
        LaurentPoly { coeffs }
    }

    /// The generator `t`.
    pub fn t() -> Self {
        Self::monomial(1, C64::new(1.0, 0.0))
    }

    pub fn from_terms(terms: &[(i64, C64)]) -> Self {
        let mut coeffs = BTreeMap::new();
        for &(k, c) in terms {
            let e = coeffs.entry(k).or_insert_with(|| C64::new(0.0, 0.0));
            *e += c;
        }
        let mut p = LaurentPoly { coeffs };
        p.normalize();
        p
    }

    /// Real coefficients `c[i]` of `Σ c[i] t^(lo+i)`.
    pub fn from_real_slice(lo: i64, c: &[f64]) -> Self {
        Self::from_terms(
            &c.iter()
                .enumerate()
                .map(|(i, &x)| (lo + i as i64, C64::new(x, 0.0)))
                .collect::<Vec<_>>(),
        )
    }

    fn normalize(&mut self) {
        let max = self.max_coeff();
        if max == 0.0 {
            self.coeffs.clear();
            return;
        }
        self.coeffs.retain(|_, c| c.norm() > tol::REL_DROP * max);
    }

    /// Drops coefficients below an absolute threshold. Used when an outside
    /// error scale is known better than the polynomial's own maximum.
    pub fn chop(&self, abs: f64) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.retain(|_, c| c.norm() > abs);
        LaurentPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest coefficient magnitude (0 for the zero polynomial).
    pub fn max_coeff(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn lowest(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn highest(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, k: i64) -> C64 {
        self.coeffs.get(&k).copied().unwrap_or_else(|| C64::new(0.0, 0.0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, C64)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (&k, &c) in &other.coeffs {
            let e = coeffs.entry(k).or_insert_with(|| C64::new(0.0, 0.0));
            *e += c;
        }
        let mut p = LaurentPoly { coeffs };
        p.normalize();
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&k, &c)| (k, -c)).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut p = LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&k, &c)| (k, c * s)).collect(),
        };
        p.normalize();
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut coeffs: BTreeMap<i64, C64> = BTreeMap::new();
        for (&ka, &ca) in &self.coeffs {
            for (&kb, &cb) in &other.coeffs {
                let e = coeffs.entry(ka + kb).or_insert_with(|| C64::new(0.0, 0.0));
                *e += ca * cb;
            }
        }
        let mut p = LaurentPoly { coeffs };
        p.normalize();
        p
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (e + k, c)).collect(),
        }
    }

    /// The tilde involution `p̃(t) = p(1/t)`: every exponent is negated.
    pub fn tilde(&self) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&k, &c)| (-k, c)).collect(),
        }
    }

    /// Coefficientwise conjugate of the tilde: on `|t| = 1` this is the
    /// pointwise complex conjugate `conj(p(t))`.
    pub fn conj_star(&self) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&k, &c)| (-k, c.conj())).collect(),
        }
    }

    /// Evaluates at `z`. Negative exponents require `z != 0`.
    pub fn eval(&self, z: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (&k, &c) in &self.coeffs {
            acc += c * powi(z, k);
        }
        acc
    }

    /// All roots (with multiplicity) of the ordinary polynomial obtained by
    /// multiplying through with `t^{-lowest}`, plus the order at zero.
    ///
    /// Returns `(order_at_zero, roots_of_reduced_polynomial)`. The reduced
    /// polynomial has a nonzero constant term, so none of its roots is 0.
    pub fn roots(&self) -> (i64, Vec<C64>) {
        if self.is_zero() {
            return (0, Vec::new());
        }
        let lo = self.lowest().unwrap();
        let hi = self.highest().unwrap();
        let deg = (hi - lo) as usize;
        let mut c = vec![C64::new(0.0, 0.0); deg + 1];
        for (k, v) in self.terms() {
            c[(k - lo) as usize] = v;
        }
        (lo, numeric::poly_roots(&c))
    }

    /// Winding number of `p` around 0 along the unit circle: the order at
    /// zero plus the number of remaining roots strictly inside the open disk.
    ///
    /// Returns `None` when some root lies within `tau_circle` of the circle.
    pub fn winding(&self, tau_circle: f64) -> Option<i64> {
        let (ord0, roots) = self.roots();
        let mut wind = ord0;
        for r in roots {
            let d = r.norm();
            if (d - 1.0).abs() <= tau_circle {
                return None;
            }
            if d < 1.0 {
                wind += 1;
            }
        }
        Some(wind)
    }

    /// Monic polynomial with the given roots: `∏ (t - r)`.
    pub fn from_roots(roots: &[C64]) -> Self {
        let mut p = LaurentPoly::one();
        for &r in roots {
            p = p.mul(&LaurentPoly::from_terms(&[
                (1, C64::new(1.0, 0.0)),
                (0, -r),
            ]));
        }
        p
    }

    /// Largest coefficient magnitude of the difference, relative to `scale`.
    pub fn distance(&self, other: &Self) -> f64 {
        self.sub(other).max_coeff()
    }
}

fn powi(z: C64, k: i64) -> C64 {
    if k >= 0 {
        z.powu(k as u32)
    } else {
        z.powi(k as i32)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "({:.6}{:+.6}i)", c.re, c.im)?;
            } else {
                write!(f, "({:.6}{:+.6}i)*t^{}", c.re, c.im, k)?;
            }
        }
        Ok(())
    }
}

/// A matrix whose entries are Laurent polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        LaurentMatrix {
            rows,
            cols,
            entries: vec![LaurentPoly::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.entry_mut(i, i) = LaurentPoly::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> LaurentPoly) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        LaurentMatrix { rows, cols, entries }
    }

    /// A constant matrix, exponent 0 everywhere.
    pub fn constant(m: &CMat) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| LaurentPoly::constant(m[(i, j)]))
    }

    /// Diagonal of monomials `diag(c_j t^{k_j})`.
    pub fn diag_monomials(pairs: &[(i64, C64)]) -> Self {
        let n = pairs.len();
        let mut m = Self::zero(n, n);
        for (j, &(k, c)) in pairs.iter().enumerate() {
            *m.entry_mut(j, j) = LaurentPoly::monomial(k, c);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut LaurentPoly {
        &mut self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> impl Iterator<Item = &LaurentPoly> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    pub fn max_coeff(&self) -> f64 {
        self.entries.iter().map(|p| p.max_coeff()).fold(0.0, f64::max)
    }

    /// Lowest exponent over all entries, `None` for the zero matrix.
    pub fn lowest(&self) -> Option<i64> {
        self.entries.iter().filter_map(|p| p.lowest()).min()
    }

    pub fn highest(&self) -> Option<i64> {
        self.entries.iter().filter_map(|p| p.highest()).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.entry(i, j).add(other.entry(i, j)))
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.entry(i, j).sub(other.entry(i, j)))
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.entry(i, j).neg())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.entry(i, j).scale(s))
    }

    pub fn scale_poly(&self, p: &LaurentPoly) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.entry(i, j).mul(p))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "laurent matmul shape");
        Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = LaurentPoly::zero();
            for k in 0..self.cols {
                acc = acc.add(&self.entry(i, k).mul(other.entry(k, j)));
            }
            acc
        })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.entry(j, i).clone())
    }

    pub fn tilde(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.entry(i, j).tilde())
    }

    /// Pointwise adjoint on the circle: conjugate transpose of the value,
    /// i.e. entrywise `conj_star` of the transposed matrix.
    pub fn conj_star(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.entry(j, i).conj_star())
    }

    pub fn shift(&self, k: i64) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.entry(i, j).shift(k))
    }

    pub fn eval(&self, z: C64) -> CMat {
        CMat::from_fn(self.rows, self.cols, |i, j| self.entry(i, j).eval(z))
    }

    /// Coefficient matrix of `t^k`.
    pub fn coeff_matrix(&self, k: i64) -> CMat {
        CMat::from_fn(self.rows, self.cols, |i, j| self.entry(i, j).coeff(k))
    }

    /// Rebuilds a Laurent matrix supported on `[lo, hi]` from values on a
    /// circle grid large enough to avoid aliasing. Returns the matrix and the
    /// largest out-of-band coefficient magnitude observed (aliased mass).
    pub fn from_grid_window(
        rows: usize,
        cols: usize,
        lo: i64,
        hi: i64,
        eval: impl Fn(C64) -> CMat,
    ) -> (Self, f64) {
        assert!(hi >= lo);
        let span = (hi - lo) as usize + 1;
        // Extra headroom so leaked out-of-band mass is observable.
        let grid = (2 * span + 8).next_power_of_two();
        let mut values: Vec<CMat> = Vec::with_capacity(grid);
        for m in 0..grid {
            values.push(eval(numeric::circle_point(m, grid)));
        }
        let mut out = Self::zero(rows, cols);
        let mut leak = 0.0_f64;
        for i in 0..rows {
            for j in 0..cols {
                let vals: Vec<C64> = values.iter().map(|v| v[(i, j)]).collect();
                let c = numeric::idft(&vals);
                let mut terms = Vec::new();
                for (idx, &coef) in c.iter().enumerate() {
                    // Coefficient index idx corresponds to exponents
                    // idx + m*grid; pick the representative inside [lo, hi]
                    // if one exists, otherwise count it as leakage.
                    let mut k = idx as i64;
                    while k > hi {
                        k -= grid as i64;
                    }
                    if k >= lo {
                        terms.push((k, coef));
                    } else {
                        leak = leak.max(coef.norm());
                    }
                }
                *out.entry_mut(i, j) = LaurentPoly::from_terms(&terms);
            }
        }
        (out, leak)
    }

    /// Determinant as a Laurent polynomial, computed from circle-grid values
    /// and an inverse DFT over the exact degree window.
    pub fn det(&self) -> LaurentPoly {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return LaurentPoly::one();
        }
        if n == 1 {
            return self.entry(0, 0).clone();
        }
        let (lo, hi) = match self.det_degree_window() {
            Some(w) => w,
            None => return LaurentPoly::zero(),
        };
        let (m, _leak) = Self::from_grid_window(1, 1, lo, hi, |z| {
            let v = self.eval(z);
            CMat::from_element(1, 1, v.lu().determinant())
        });
        m.entry(0, 0).clone()
    }

    /// Degree window `[lo, hi]` guaranteed to contain the determinant
    /// support; `None` when some row is entirely zero.
    fn det_degree_window(&self) -> Option<(i64, i64)> {
        let mut lo = 0_i64;
        let mut hi = 0_i64;
        for i in 0..self.rows {
            let mut row_lo: Option<i64> = None;
            let mut row_hi: Option<i64> = None;
            for j in 0..self.cols {
                if let (Some(l), Some(h)) = (self.entry(i, j).lowest(), self.entry(i, j).highest()) {
                    row_lo = Some(row_lo.map_or(l, |x: i64| x.min(l)));
                    row_hi = Some(row_hi.map_or(h, |x: i64| x.max(h)));
                }
            }
            lo += row_lo?;
            hi += row_hi?;
        }
        Some((lo, hi))
    }

    /// Adjugate matrix: `adj(M) · M = det(M) · I`. Each cofactor is computed
    /// from grid values of the corresponding minor.
    pub fn adjugate(&self) -> LaurentMatrix {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return LaurentMatrix::zero(0, 0);
        }
        if n == 1 {
            let mut m = LaurentMatrix::zero(1, 1);
            *m.entry_mut(0, 0) = LaurentPoly::one();
            return m;
        }
        let mut adj = LaurentMatrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor(i, j);
                let mut cof = minor.det();
                if (i + j) % 2 == 1 {
                    cof = cof.neg();
                }
                // adj = transposed cofactor matrix
                *adj.entry_mut(j, i) = cof;
            }
        }
        adj
    }

    fn minor(&self, drop_row: usize, drop_col: usize) -> LaurentMatrix {
        let n = self.rows;
        LaurentMatrix::from_fn(n - 1, n - 1, |i, j| {
            let si = if i < drop_row { i } else { i + 1 };
            let sj = if j < drop_col { j } else { j + 1 };
            self.entry(si, sj).clone()
        })
    }

    /// Extracts a sub-block.
    pub fn block(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> LaurentMatrix {
        LaurentMatrix::from_fn(rows, cols, |i, j| self.entry(row0 + i, col0 + j).clone())
    }

    /// Writes `other` into position `(row0, col0)`.
    pub fn set_block(&mut self, row0: usize, col0: usize, other: &LaurentMatrix) {
        for i in 0..other.rows {
            for j in 0..other.cols {
                *self.entry_mut(row0 + i, col0 + j) = other.entry(i, j).clone();
            }
        }
    }

    pub fn chop(&self, abs: f64) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.entry(i, j).chop(abs))
    }
}

impl fmt::Display for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[ ")?;
            for j in 0..self.cols {
                write!(f, "{}", self.entry(i, j))?;
                if j + 1 < self.cols {
                    write!(f, " , ")?;
                }
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}
