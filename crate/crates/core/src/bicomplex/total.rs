use crate::linalg::{Matrix, Subspace};
use crate::scalar::Field;

use super::Bicomplex;

/// Block layout of the total complex `Tot^k = ⊕_{p+q=k} V^{p,q}`.
///
/// Blocks inside `Tot^k` are ordered by increasing `p`.
pub struct TotalComplex<'a, F> {
    x: &'a Bicomplex<F>,
}

impl<'a, F: Field> TotalComplex<'a, F> {
    pub fn new(x: &'a Bicomplex<F>) -> Self {
        TotalComplex { x }
    }

    /// The `p` values with a (possibly zero) block in degree `k`.
    pub fn columns(&self, k: i64) -> impl Iterator<Item = i64> {
        let lo = (k - self.x.q_max() as i64).max(0);
        let hi = k.min(self.x.p_max() as i64);
        lo..=hi
    }

    pub fn dim(&self, k: i64) -> usize {
        self.columns(k).map(|p| self.x.dim(p, k - p)).sum()
    }

    /// Offset of the block `V^{p,k-p}` inside `Tot^k`.
    pub fn offset(&self, k: i64, p: i64) -> usize {
        self.columns(k)
            .take_while(|&p2| p2 < p)
            .map(|p2| self.x.dim(p2, k - p2))
            .sum()
    }

    /// `d = ∂ + ∂̄: Tot^k → Tot^{k+1}`.
    pub fn differential(&self, k: i64) -> Matrix<F> {
        let mut d = Matrix::zeros(self.dim(k + 1), self.dim(k));
        for p in self.columns(k) {
            let q = k - p;
            let col = self.offset(k, p);
            if self.x.in_bounds(p + 1, q) {
                d.set_block(self.offset(k + 1, p + 1), col, &self.x.del(p, q));
            }
            if self.x.in_bounds(p, q + 1) {
                d.set_block(self.offset(k + 1, p), col, &self.x.delbar(p, q));
            }
        }
        d
    }

    /// Includes a subspace of `V^{p,q}` into `Tot^{p+q}`.
    pub fn embed(&self, p: i64, q: i64, s: &Subspace<F>) -> Subspace<F> {
        let k = p + q;
        s.embed(self.offset(k, p), self.dim(k))
    }

    /// The filtration piece `F^p Tot^k = ⊕_{p' ≥ p} V^{p',k-p'}`.
    pub fn filtration(&self, k: i64, p: i64) -> Subspace<F> {
        let n = self.dim(k);
        let start = self.columns(k).filter(|&p2| p2 < p).map(|p2| self.x.dim(p2, k - p2)).sum();
        let rows = (start..n).map(|i| {
            let mut v = vec![F::zero(); n];
            v[i] = F::one();
            v
        });
        Subspace::from_rows(n, rows)
    }

    /// Projection `Tot^k → ⊕_{p' < p} V^{p',k-p'}` onto the blocks outside
    /// `F^p`, as a matrix on `Tot^k`.
    pub fn quotient_by_filtration(&self, k: i64, p: i64) -> Matrix<F> {
        let n = self.dim(k);
        let keep: usize = self.columns(k).filter(|&p2| p2 < p).map(|p2| self.x.dim(p2, k - p2)).sum();
        let mut m = Matrix::zeros(keep, n);
        for i in 0..keep {
            m[(i, i)] = F::one();
        }
        m
    }
}
