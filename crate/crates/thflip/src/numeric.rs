//! Dense complex linear algebra helpers built on nalgebra.

use nalgebra::DMatrix;

use crate::tol;
use crate::C64;

/// Dense complex matrix.
pub type CMat = DMatrix<C64>;

/// Householder QR with column pivoting. Subspace extraction goes through
/// this rather than the SVD: the complex SVD in nalgebra can return poor
/// singular vectors on some near-rank-deficient inputs, while pivoted QR is
/// backward stable and its `R` diagonal reveals our (well separated) ranks.
pub struct PivotedQr {
    /// Unitary `rows × rows` factor.
    pub q: CMat,
    /// Upper triangular factor of the permuted matrix.
    pub r: CMat,
    /// Column permutation: factor column `k` corresponds to input column
    /// `perm[k]`.
    pub perm: Vec<usize>,
}

impl PivotedQr {
    /// Magnitudes of the `R` diagonal (non-increasing up to pivoting).
    pub fn diag_mags(&self) -> Vec<f64> {
        let k = self.r.nrows().min(self.r.ncols());
        (0..k).map(|i| self.r[(i, i)].norm()).collect()
    }

    /// Number of diagonal entries above `tau_rel · max(|R₀₀|, floor)`.
    pub fn rank(&self, tau_rel: f64, floor: f64) -> usize {
        let d = self.diag_mags();
        let top = d.first().copied().unwrap_or(0.0).max(floor);
        if top == 0.0 {
            return 0;
        }
        d.iter().filter(|&&x| x > tau_rel * top).count()
    }
}

pub fn pivoted_qr(m: &CMat) -> PivotedQr {
    let rows = m.nrows();
    let cols = m.ncols();
    let mut r = m.clone();
    let mut q = CMat::identity(rows, rows);
    let mut perm: Vec<usize> = (0..cols).collect();
    let steps = rows.min(cols);
    for k in 0..steps {
        // Norms of the trailing columns, recomputed to avoid downdating
        // error; sizes here are small enough not to care.
        let mut best = k;
        let mut best_norm = -1.0_f64;
        for j in k..cols {
            let nrm: f64 = (k..rows).map(|i| r[(i, j)].norm_sqr()).sum();
            if nrm > best_norm {
                best_norm = nrm;
                best = j;
            }
        }
        if best != k {
            r.swap_columns(k, best);
            perm.swap(k, best);
        }
        let alpha = best_norm.max(0.0).sqrt();
        if alpha == 0.0 {
            continue;
        }
        // Householder vector v = x + phase·|x|·e₁, H = I - τ v vᴴ.
        let x0 = r[(k, k)];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let mut v = vec![C64::new(0.0, 0.0); rows - k];
        for i in k..rows {
            v[i - k] = r[(i, k)];
        }
        v[0] += phase * alpha;
        let vnorm2: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let tau = 2.0 / vnorm2;
        for j in k..cols {
            let mut dot = C64::new(0.0, 0.0);
            for i in k..rows {
                dot += v[i - k].conj() * r[(i, j)];
            }
            let f = dot * tau;
            for i in k..rows {
                let corr = v[i - k] * f;
                r[(i, j)] -= corr;
            }
        }
        for i in 0..rows {
            let mut dot = C64::new(0.0, 0.0);
            for l in k..rows {
                dot += q[(i, l)] * v[l - k];
            }
            let f = dot * tau;
            for l in k..rows {
                let corr = f * v[l - k].conj();
                q[(i, l)] -= corr;
            }
        }
    }
    PivotedQr { q, r, perm }
}

/// Numerical rank with a relative threshold on the pivoted `R` diagonal.
pub fn rank(m: &CMat, tau_rel: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    pivoted_qr(m).rank(tau_rel, 0.0)
}

/// Rank against `tau_rel · max(|R₀₀|, floor)`. A nonzero floor keeps a
/// matrix that is tiny in absolute terms from counting as full rank, which
/// matters for spectral projectors whose nonzero singular values are ≥ 1.
pub fn rank_with_floor(m: &CMat, tau_rel: f64, floor: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    pivoted_qr(m).rank(tau_rel, floor)
}

/// Orthonormal column-space basis against `tau_rel · max(|R₀₀|, floor)`.
pub fn range_basis_with_floor(m: &CMat, tau_rel: f64, floor: f64) -> CMat {
    if m.nrows() == 0 || m.ncols() == 0 {
        return CMat::zeros(m.nrows(), 0);
    }
    let qr = pivoted_qr(m);
    let k = qr.rank(tau_rel, floor);
    let mut basis = qr.q.columns(0, k).into_owned();
    normalize_phases(&mut basis);
    basis
}

/// Orthonormal basis of the null space of `m` with a relative rank
/// threshold: the trailing `Q` columns of a pivoted QR of `mᴴ`.
pub fn null_space(m: &CMat, tau_rel: f64) -> CMat {
    let ncols = m.ncols();
    if ncols == 0 {
        return CMat::zeros(0, 0);
    }
    let qr = pivoted_qr(&m.adjoint());
    let r = qr.rank(tau_rel, 0.0);
    let mut basis = qr.q.columns(r, ncols - r).into_owned();
    normalize_phases(&mut basis);
    basis
}

/// Rotates each column so its largest entry is real positive; Householder
/// phases are otherwise arbitrary, which would make outputs depend on them.
fn normalize_phases(basis: &mut CMat) {
    for j in 0..basis.ncols() {
        let mut best = 0usize;
        let mut best_norm = -1.0_f64;
        for i in 0..basis.nrows() {
            let nrm = basis[(i, j)].norm();
            if nrm > best_norm {
                best_norm = nrm;
                best = i;
            }
        }
        if best_norm > 0.0 {
            let phase = basis[(best, j)] / best_norm;
            for i in 0..basis.nrows() {
                let v = basis[(i, j)] * phase.conj();
                basis[(i, j)] = v;
            }
        }
    }
}

/// Orthonormal basis of the column space of `m`.
pub fn range_basis(m: &CMat, tau_rel: f64) -> CMat {
    range_basis_with_floor(m, tau_rel, 0.0)
}

/// Singular values through the Hermitian Jordan-Wielandt embedding
/// `[[0, M], [Mᴴ, 0]]`, whose eigenvalues are `±σ_i` plus padding zeros.
/// Returned descending. The Hermitian eigensolver is accurate for the small
/// singular values we threshold on, unlike the general complex SVD.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    let (rows, cols) = m.shape();
    let k = rows.min(cols);
    if k == 0 {
        return Vec::new();
    }
    let n = rows + cols;
    let mut h = CMat::zeros(n, n);
    h.view_mut((0, rows), (rows, cols)).copy_from(m);
    h.view_mut((rows, 0), (cols, rows)).copy_from(&m.adjoint());
    let eig = nalgebra::SymmetricEigen::new(h);
    let mut vals: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    vals.truncate(k);
    vals.iter().map(|&v| v.max(0.0)).collect()
}

/// All roots of the polynomial `c[0] + c[1] z + … + c[d] z^d`, through the
/// eigenvalues of the (balanced) companion matrix of its monic form.
///
/// Leading coefficients that are negligibly small relative to the largest one
/// are stripped first, so the reported degree is the numerically visible one.
pub fn poly_roots(coeffs: &[C64]) -> Vec<C64> {
    let cmax = coeffs.iter().map(|c| c.norm()).fold(0.0_f64, f64::max);
    if cmax == 0.0 {
        return Vec::new();
    }
    let mut c: Vec<C64> = coeffs.to_vec();
    while let Some(last) = c.last() {
        if last.norm() <= tol::REL_DROP * cmax && c.len() > 1 {
            c.pop();
        } else {
            break;
        }
    }
    let d = c.len() - 1;
    if d == 0 {
        return Vec::new();
    }
    let lead = c[d];
    let n = d;
    let mut comp = CMat::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for i in 0..n {
        comp[(i, n - 1)] = -c[i] / lead;
    }
    // Wilkinson-style diagonal balancing improves the companion eigenvalues
    // when coefficient magnitudes vary over many orders.
    balance_in_place(&mut comp);
    let schur = nalgebra::linalg::Schur::try_new(comp, 1e-14, 20_000)
        .expect("companion Schur iteration did not converge");
    let eig = schur
        .eigenvalues()
        .expect("complex Schur always yields eigenvalues");
    eig.iter().cloned().collect()
}

fn balance_in_place(a: &mut CMat) {
    let n = a.nrows();
    let radix = 2.0_f64;
    for _pass in 0..16 {
        let mut converged = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    r += a[(i, j)].norm();
                    c += a[(j, i)].norm();
                }
            }
            if r == 0.0 || c == 0.0 {
                continue;
            }
            let mut f = 1.0;
            let s = r + c;
            let mut cc = c;
            let mut rr = r;
            while cc < rr / radix {
                f *= radix;
                cc *= radix;
                rr /= radix;
            }
            while cc > rr * radix {
                f /= radix;
                cc /= radix;
                rr *= radix;
            }
            if (cc + rr) < 0.95 * s && f != 1.0 {
                converged = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
        if converged {
            break;
        }
    }
}

/// The `m`-th point of the size-`grid` uniform grid on the unit circle.
pub fn circle_point(m: usize, grid: usize) -> C64 {
    let theta = 2.0 * std::f64::consts::PI * (m as f64) / (grid as f64);
    C64::new(theta.cos(), theta.sin())
}

/// Inverse discrete Fourier transform: recovers coefficients `c_j`
/// (`j = 0..grid-1`) from values `v_m = Σ_j c_j ω^{mj}` on the circle grid.
pub fn idft(values: &[C64]) -> Vec<C64> {
    let m = values.len();
    let mut out = vec![C64::new(0.0, 0.0); m];
    for (j, slot) in out.iter_mut().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        for (k, v) in values.iter().enumerate() {
            let w = circle_point((k * j) % m, m).conj();
            acc += v * w;
        }
        *slot = acc / (m as f64);
    }
    out
}

/// Frobenius-style magnitude of the largest entry.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0_f64, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn roots_of_cubic() {
        // (z-1)(z-2)(z+0.5) = z^3 - 2.5 z^2 + 0.5 z + 1
        let mut r = poly_roots(&[c(1.0, 0.0), c(0.5, 0.0), c(-2.5, 0.0), c(1.0, 0.0)]);
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((r[0] - c(-0.5, 0.0)).norm() < 1e-10);
        assert!((r[1] - c(1.0, 0.0)).norm() < 1e-10);
        assert!((r[2] - c(2.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn roots_with_complex_coeffs() {
        // (z - i)(z - (2+i)) = z^2 - (2+2i) z + (-1 + 2i)
        let r = poly_roots(&[c(-1.0, 2.0), c(-2.0, -2.0), c(1.0, 0.0)]);
        let mut found_i = false;
        let mut found_2i = false;
        for z in r {
            if (z - c(0.0, 1.0)).norm() < 1e-10 {
                found_i = true;
            }
            if (z - c(2.0, 1.0)).norm() < 1e-10 {
                found_2i = true;
            }
        }
        assert!(found_i && found_2i);
    }

    #[test]
    fn null_space_of_rank_one() {
        let m = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)]);
        let ns = null_space(&m, 1e-9);
        assert_eq!(ns.ncols(), 1);
        assert!(max_abs(&(&m * &ns)) < 1e-12);
        assert_eq!(rank(&m, 1e-9), 1);
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let m = CMat::from_row_slice(1, 3, &[c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        let ns = null_space(&m, 1e-9);
        assert_eq!(ns.ncols(), 2);
        assert!(max_abs(&(&m * &ns)) < 1e-12);
    }

    #[test]
    fn idft_roundtrip() {
        // coefficients of 3 + 2 t + i t^2 sampled on 4 points
        let coeff = [c(3.0, 0.0), c(2.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)];
        let vals: Vec<C64> = (0..4)
            .map(|m| {
                let z = circle_point(m, 4);
                coeff[0] + coeff[1] * z + coeff[2] * z * z
            })
            .collect();
        let back = idft(&vals);
        for (a, b) in coeff.iter().zip(back.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
