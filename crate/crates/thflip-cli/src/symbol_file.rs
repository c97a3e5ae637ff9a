//! On-disk symbol format: a restricted JSON document describing a rational
//! matrix function entry by entry.
//!
//! ```json
//! {
//!   "rows": 2,
//!   "cols": 2,
//!   "entries": [
//!     [[1, 1, 0]],          // entry (0,0): 1·t^1
//!     [[0, "1/2", 0]],      // entry (0,1): rational string coefficients
//!     [],                    // entry (1,0): zero
//!     [[0, 1, 0]]
//!   ],
//!   "denominator": [[0, 1, 0], [1, -0.5, 0]],
//!   "role": "a"
//! }
//! ```
//!
//! `entries` is row-major with one term list per entry; a term is
//! `[exponent, re, im]` where `re`/`im` are JSON numbers or `"p/q"`
//! strings (converted to floating point on load). The optional scalar
//! `denominator` uses the same term encoding. `role` is a free tag
//! (`a | b | A | B | W | F`) used only for diagnostics.

use serde::{Deserialize, Serialize};

use num_complex::Complex64;
use thflip::laurent::{LaurentMatrix, LaurentPoly};
use thflip::rational::{InvolutionMatrix, RationalMatrixFunction};

/// A coefficient that is either a plain number or a `"p/q"` string.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Num(f64),
    Ratio(String),
}

impl Coeff {
    pub fn value(&self) -> Result<f64, String> {
        match self {
            Coeff::Num(x) => Ok(*x),
            Coeff::Ratio(s) => {
                let mut parts = s.split('/');
                let p: f64 = parts
                    .next()
                    .ok_or_else(|| format!("empty ratio '{s}'"))?
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad numerator in '{s}'"))?;
                match parts.next() {
                    None => Ok(p),
                    Some(q) => {
                        let q: f64 = q
                            .trim()
                            .parse()
                            .map_err(|_| format!("bad denominator in '{s}'"))?;
                        if q == 0.0 {
                            return Err(format!("zero denominator in '{s}'"));
                        }
                        if parts.next().is_some() {
                            return Err(format!("too many '/' in '{s}'"));
                        }
                        Ok(p / q)
                    }
                }
            }
        }
    }
}

/// One monomial term `[exponent, re, im]`.
pub type Term = (i64, Coeff, Coeff);

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SymbolFile {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<Term>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub denominator: Option<Vec<Term>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role: Option<String>,
}

fn terms_to_poly(terms: &[Term]) -> Result<LaurentPoly, String> {
    let mut list = Vec::with_capacity(terms.len());
    for (k, re, im) in terms {
        list.push((*k, Complex64::new(re.value()?, im.value()?)));
    }
    Ok(LaurentPoly::from_terms(&list))
}

fn poly_to_terms(p: &LaurentPoly) -> Vec<Term> {
    p.terms()
        .map(|(k, c)| (k, Coeff::Num(c.re), Coeff::Num(c.im)))
        .collect()
}

impl SymbolFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        let file: SymbolFile =
            serde_json::from_str(text).map_err(|e| format!("invalid symbol JSON: {e}"))?;
        if file.rows == 0 || file.cols == 0 {
            return Err("rows and cols must be positive".into());
        }
        if file.entries.len() != file.rows * file.cols {
            return Err(format!(
                "expected {} entries for a {}x{} matrix, found {}",
                file.rows * file.cols,
                file.rows,
                file.cols,
                file.entries.len()
            ));
        }
        Ok(file)
    }

    pub fn to_rational(&self) -> Result<RationalMatrixFunction, String> {
        let mut num = LaurentMatrix::zero(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *num.entry_mut(i, j) = terms_to_poly(&self.entries[i * self.cols + j])?;
            }
        }
        let den = match &self.denominator {
            None => LaurentPoly::one(),
            Some(terms) => terms_to_poly(terms)?,
        };
        RationalMatrixFunction::new(num, den).map_err(|e| e.to_string())
    }

    /// Interprets the file as a constant involution `W`.
    pub fn to_involution(&self) -> Result<InvolutionMatrix, String> {
        let f = self.to_rational()?;
        if !f.is_polynomial()
            || f.numerator().lowest().unwrap_or(0) != 0
            || f.numerator().highest().unwrap_or(0) != 0
        {
            return Err("an involution file must hold a constant matrix".into());
        }
        let value = f
            .eval_at(Complex64::new(1.0, 0.0))
            .map_err(|e| e.to_string())?;
        InvolutionMatrix::new(value).map_err(|e| e.to_string())
    }

    pub fn from_rational(f: &RationalMatrixFunction, role: Option<&str>) -> Self {
        let mut entries = Vec::with_capacity(f.rows() * f.cols());
        for i in 0..f.rows() {
            for j in 0..f.cols() {
                entries.push(poly_to_terms(f.numerator().entry(i, j)));
            }
        }
        let denominator = if f.is_polynomial() {
            None
        } else {
            Some(poly_to_terms(f.denominator()))
        };
        SymbolFile {
            rows: f.rows(),
            cols: f.cols(),
            entries,
            denominator,
            role: role.map(|s| s.to_string()),
        }
    }

    #[cfg_attr(not(test), allow(dead_code))]
    pub fn print(&self) -> String {
        serde_json::to_string_pretty(self).expect("symbol files always serialize")
    }
}
