//! Exact linear algebra: reduced row-echelon forms and the subspace calculus
//! (kernel, image, sum, intersection, quotient dimension) that every
//! cohomology computation reduces to.
//!
//! Pivoting always takes the first nonzero entry in column order. Arithmetic
//! is exact, so this is deterministic and no numerical pivoting is needed.

mod matrix;
mod subspace;

pub use matrix::Matrix;
pub use subspace::Subspace;

use crate::error::LinalgError;
use crate::scalar::Field;

/// Reduces `rows` (each of length `ncols`) to reduced row-echelon form in
/// place, dropping zero rows. Returns the pivot columns.
pub(crate) fn rref_rows<F: Field>(rows: &mut Vec<Vec<F>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        if !inv.is_one() {
            for x in rows[r][c..].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let pivot_row = std::mem::take(&mut rows[r]);
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for j in c..ncols {
                if !pivot_row[j].is_zero() {
                    row[j] -= &factor.mul_ref(&pivot_row[j]);
                }
            }
        }
        rows[r] = pivot_row;
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Rank and reduced row-echelon form of `m`.
///
/// The returned matrix has the same shape as `m`; rows past the rank are
/// zero.
pub fn rref_rank<F: Field>(m: &Matrix<F>) -> (usize, Matrix<F>) {
    let mut rows = m.to_rows();
    let pivots = rref_rows(&mut rows, m.ncols());
    let rank = pivots.len();
    rows.resize(m.nrows(), vec![F::zero(); m.ncols()]);
    (rank, Matrix::from_rows(m.ncols(), rows))
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    let mut rows = m.to_rows();
    rref_rows(&mut rows, m.ncols()).len()
}

/// Kernel of `m` as a subspace of its domain (`m.ncols()`-dimensional).
pub fn kernel_basis<F: Field>(m: &Matrix<F>) -> Subspace<F> {
    let n = m.ncols();
    let mut rows = m.to_rows();
    let pivots = rref_rows(&mut rows, n);
    let mut is_pivot = vec![false; n];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let basis = (0..n).filter(|&c| !is_pivot[c]).map(|free| {
        let mut v = vec![F::zero(); n];
        v[free] = F::one();
        for (row, &pc) in rows.iter().zip(&pivots) {
            v[pc] = -row[free].clone();
        }
        v
    });
    Subspace::from_rows(n, basis)
}

/// Column space of `m` as a subspace of its codomain.
pub fn image_basis<F: Field>(m: &Matrix<F>) -> Subspace<F> {
    let t = m.transpose();
    Subspace::from_rows(m.nrows(), t.to_rows())
}

pub fn subspace_sum<F: Field>(u: &Subspace<F>, v: &Subspace<F>) -> Result<Subspace<F>, LinalgError> {
    u.sum(v)
}

pub fn subspace_intersect<F: Field>(
    u: &Subspace<F>,
    v: &Subspace<F>,
) -> Result<Subspace<F>, LinalgError> {
    u.intersect(v)
}

/// `dim u − dim w`, after checking `w ⊆ u`.
pub fn quotient_dim<F: Field>(u: &Subspace<F>, w: &Subspace<F>) -> Result<usize, LinalgError> {
    if u.ambient_dim() != w.ambient_dim() {
        return Err(LinalgError::DimensionMismatch {
            op: "quotient_dim",
            left: u.ambient_dim(),
            right: w.ambient_dim(),
        });
    }
    if !u.contains(w) {
        return Err(LinalgError::NotContained {
            sup: u.dim(),
            sub: w.dim(),
        });
    }
    Ok(u.dim() - w.dim())
}
