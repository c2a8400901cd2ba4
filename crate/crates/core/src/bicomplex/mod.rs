//! Bounded double complexes and everything computed from them.
//!
//! A [`Bicomplex`] stores, for each bidegree `(p, q)` inside its bounds, the
//! dimension of `V^{p,q}` and the matrices of `∂: V^{p,q} → V^{p+1,q}` and
//! `∂̄: V^{p,q} → V^{p,q+1}`. The stored matrices already anticommute; the
//! total differential is `d = ∂ + ∂̄` with no extra sign.
//!
//! An optional conjugation `σ(v) = C_{p,q}·conj(v)`, `V^{p,q} → V^{q,p}`,
//! models complex conjugation of forms.

use std::borrow::Cow;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::BicomplexError;
use crate::linalg::Matrix;
use crate::scalar::Field;

pub mod assembly;
pub mod checks;
pub mod cohomology;
pub mod format;
pub mod maps;
pub mod report;
pub mod spectral;
pub mod total;

pub use assembly::{parse_word, zigzag_assemble, Piece, Step};
pub use checks::{
    check_conjugation_symmetries, check_duality, check_sequences, check_structural_equalities,
    ek_recursion_check, equality_characterization, inequality_verdicts, bc_aeppli_identity_check,
    InequalityVerdicts,
};
pub use cohomology::{
    betti, h_aeppli, h_bc, h_line, h_pq, varouchas_dims, BidegreeTable, Flavor, HpqTables,
    LineFlavor, LocalSpaces, VarouchasDims,
};
pub use maps::{
    bc_to_de_rham_ranks, bc_surjectivity_check, lemma_direct, natural_map_ranks, MapKind,
    MapRank,
};
pub use report::{CohomologyReport, HkTotals, ReportOptions, Verdicts};
pub use spectral::{default_r_max, spectral_page_dims, SpectralPages};
pub use total::TotalComplex;

/// Monomial basis of a bigraded exterior algebra `Λ^{p,q}`, attached to
/// bicomplexes compiled from structure equations.
///
/// Generators `0..n` are `φ^1..φ^n`, generators `n..2n` are `φ̄^1..φ̄^n`; a
/// monomial is a bitmask over the `2n` generators, read in increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExteriorBasis {
    pub n: usize,
    /// `monomials[p][q]` lists the basis of `V^{p,q}` in order.
    pub monomials: Vec<Vec<Vec<u32>>>,
}

impl ExteriorBasis {
    /// Monomials `φ^I ∧ φ̄^J` for `0 ≤ |I|, |J| ≤ n`, ordered
    /// lexicographically on `(I, J)` within each bidegree.
    pub fn new(n: usize) -> Self {
        use itertools::Itertools;
        assert!(n <= 15, "exterior basis limited to n ≤ 15");
        let bits = |set: &[usize]| set.iter().fold(0u32, |m, &i| m | (1 << i));
        let monomials = (0..=n)
            .map(|p| {
                (0..=n)
                    .map(|q| {
                        let mut out = Vec::new();
                        for holo in (0..n).combinations(p) {
                            for anti in (0..n).combinations(q) {
                                out.push(bits(&holo) | (bits(&anti) << n));
                            }
                        }
                        out
                    })
                    .collect()
            })
            .collect();
        ExteriorBasis { n, monomials }
    }

    pub fn holo_part(&self, mask: u32) -> u32 {
        mask & ((1 << self.n) - 1)
    }

    pub fn anti_part(&self, mask: u32) -> u32 {
        mask >> self.n
    }

    pub fn bidegree(&self, mask: u32) -> (usize, usize) {
        (
            self.holo_part(mask).count_ones() as usize,
            self.anti_part(mask).count_ones() as usize,
        )
    }

    /// Position of `mask` in the basis of its bidegree.
    pub fn index_of(&self, mask: u32) -> usize {
        let (p, q) = self.bidegree(mask);
        self.monomials[p][q]
            .iter()
            .position(|&m| m == mask)
            .expect("mask is a basis monomial")
    }

    /// The top monomial `φ^1 ∧ … ∧ φ^n ∧ φ̄^1 ∧ … ∧ φ̄^n`.
    pub fn volume(&self) -> u32 {
        (1u32 << (2 * self.n)) - 1
    }

    /// `a ∧ b` as `(mask, ±1)`, or `None` when they share a generator.
    pub fn wedge(a: u32, b: u32) -> Option<(u32, i64)> {
        if a & b != 0 {
            return None;
        }
        // one transposition for every pair x ∈ a, y ∈ b with x > y
        let mut swaps = 0;
        let mut rest = a;
        while rest != 0 {
            let x = rest.trailing_zeros();
            rest &= rest - 1;
            swaps += (b & ((1u32 << x) - 1)).count_ones();
        }
        Some((a | b, if swaps % 2 == 0 { 1 } else { -1 }))
    }

    /// Complex conjugate of `φ^I ∧ φ̄^J`, which is `(−1)^{|I||J|} φ^J ∧ φ̄^I`.
    pub fn conjugate(&self, mask: u32) -> (u32, i64) {
        let holo = self.holo_part(mask);
        let anti = self.anti_part(mask);
        let sign = if (holo.count_ones() * anti.count_ones()) % 2 == 0 { 1 } else { -1 };
        (anti | (holo << self.n), sign)
    }

    pub fn label(&self, mask: u32) -> String {
        if mask == 0 {
            return "1".into();
        }
        let mut parts = Vec::new();
        for g in 0..2 * self.n {
            if mask & (1 << g) != 0 {
                if g < self.n {
                    parts.push(format!("φ{}", g + 1));
                } else {
                    parts.push(format!("φ̄{}", g - self.n + 1));
                }
            }
        }
        parts.join("∧")
    }
}

/// Bounded double complex over an exact field.
#[derive(Clone, Debug, PartialEq)]
pub struct Bicomplex<F> {
    p_max: usize,
    q_max: usize,
    dims: Vec<Vec<usize>>,
    del: Vec<Vec<Matrix<F>>>,
    delbar: Vec<Vec<Matrix<F>>>,
    conj: Option<Vec<Vec<Matrix<F>>>>,
    n: Option<usize>,
    exterior: Option<ExteriorBasis>,
}

/// One failed identity of [`Bicomplex::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub p: usize,
    pub q: usize,
    pub identity: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at ({},{})", self.identity, self.p, self.q)
    }
}

impl<F: Field> Bicomplex<F> {
    /// A bicomplex with the given dimensions (`dims[p][q]`) and zero
    /// differentials. Missing entries of `dims` are zero.
    pub fn new(p_max: usize, q_max: usize, dims: &[Vec<usize>]) -> Self {
        let dim_grid: Vec<Vec<usize>> = (0..=p_max)
            .map(|p| {
                (0..=q_max)
                    .map(|q| dims.get(p).and_then(|r| r.get(q)).copied().unwrap_or(0))
                    .collect()
            })
            .collect();
        let d = |p: usize, q: usize| -> usize {
            if p <= p_max && q <= q_max {
                dim_grid[p][q]
            } else {
                0
            }
        };
        let del = (0..=p_max)
            .map(|p| (0..=q_max).map(|q| Matrix::zeros(d(p + 1, q), d(p, q))).collect())
            .collect();
        let delbar = (0..=p_max)
            .map(|p| (0..=q_max).map(|q| Matrix::zeros(d(p, q + 1), d(p, q))).collect())
            .collect();
        Bicomplex {
            p_max,
            q_max,
            dims: dim_grid,
            del,
            delbar,
            conj: None,
            n: None,
            exterior: None,
        }
    }

    /// The complex with a single one-dimensional space at `(p, q)`.
    pub fn dot(p: usize, q: usize) -> Self {
        let mut dims = vec![vec![0; q + 1]; p + 1];
        dims[p][q] = 1;
        Bicomplex::new(p, q, &dims)
    }

    pub fn p_max(&self) -> usize {
        self.p_max
    }

    pub fn q_max(&self) -> usize {
        self.q_max
    }

    /// Largest total degree with possibly nonzero spaces.
    pub fn top_degree(&self) -> usize {
        self.p_max + self.q_max
    }

    pub fn n(&self) -> Option<usize> {
        self.n
    }

    pub fn set_n(&mut self, n: Option<usize>) {
        self.n = n;
    }

    pub fn exterior(&self) -> Option<&ExteriorBasis> {
        self.exterior.as_ref()
    }

    pub(crate) fn set_exterior(&mut self, basis: ExteriorBasis) {
        self.exterior = Some(basis);
    }

    pub fn in_bounds(&self, p: i64, q: i64) -> bool {
        p >= 0 && q >= 0 && p as usize <= self.p_max && q as usize <= self.q_max
    }

    /// `dim V^{p,q}`, zero outside the bounds.
    pub fn dim(&self, p: i64, q: i64) -> usize {
        if self.in_bounds(p, q) {
            self.dims[p as usize][q as usize]
        } else {
            0
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().flatten().sum()
    }

    fn block<'a>(
        &'a self,
        grid: &'a [Vec<Matrix<F>>],
        p: i64,
        q: i64,
        rows: usize,
    ) -> Cow<'a, Matrix<F>> {
        if self.in_bounds(p, q) {
            Cow::Borrowed(&grid[p as usize][q as usize])
        } else {
            Cow::Owned(Matrix::zeros(rows, self.dim(p, q)))
        }
    }

    /// `∂_{p,q}: V^{p,q} → V^{p+1,q}`.
    pub fn del(&self, p: i64, q: i64) -> Cow<'_, Matrix<F>> {
        self.block(&self.del, p, q, self.dim(p + 1, q))
    }

    /// `∂̄_{p,q}: V^{p,q} → V^{p,q+1}`.
    pub fn delbar(&self, p: i64, q: i64) -> Cow<'_, Matrix<F>> {
        self.block(&self.delbar, p, q, self.dim(p, q + 1))
    }

    /// `∂∂̄` starting at `(p, q)`: `V^{p,q} → V^{p+1,q+1}`.
    pub fn ddbar(&self, p: i64, q: i64) -> Matrix<F> {
        &*self.del(p, q + 1) * &*self.delbar(p, q)
    }

    pub fn has_conjugation(&self) -> bool {
        self.conj.is_some()
    }

    /// `C_{p,q}` with `σ(v) = C_{p,q}·conj(v)`, `V^{p,q} → V^{q,p}`.
    pub fn conj_block(&self, p: i64, q: i64) -> Option<Cow<'_, Matrix<F>>> {
        let conj = self.conj.as_ref()?;
        Some(self.block(conj, p, q, self.dim(q, p)))
    }

    fn check_bounds(&self, p: usize, q: usize) -> Result<(), BicomplexError> {
        if p > self.p_max || q > self.q_max {
            return Err(BicomplexError::OutOfBounds {
                p,
                q,
                p_max: self.p_max,
                q_max: self.q_max,
            });
        }
        Ok(())
    }

    fn check_shape(
        block: &'static str,
        p: usize,
        q: usize,
        m: &Matrix<F>,
        expected: (usize, usize),
    ) -> Result<(), BicomplexError> {
        if m.shape() != expected {
            return Err(BicomplexError::BlockShape {
                block,
                p,
                q,
                got: m.shape(),
                expected,
            });
        }
        Ok(())
    }

    pub fn set_del(&mut self, p: usize, q: usize, m: Matrix<F>) -> Result<(), BicomplexError> {
        self.check_bounds(p, q)?;
        let (pi, qi) = (p as i64, q as i64);
        let expected = (self.dim(pi + 1, qi), self.dim(pi, qi));
        Self::check_shape("del", p, q, &m, expected)?;
        self.del[p][q] = m;
        Ok(())
    }

    pub fn set_delbar(&mut self, p: usize, q: usize, m: Matrix<F>) -> Result<(), BicomplexError> {
        self.check_bounds(p, q)?;
        let (pi, qi) = (p as i64, q as i64);
        let expected = (self.dim(pi, qi + 1), self.dim(pi, qi));
        Self::check_shape("delbar", p, q, &m, expected)?;
        self.delbar[p][q] = m;
        Ok(())
    }

    /// Sets one conjugation block, creating a zero conjugation structure on
    /// first use. Requires square bounds (`p_max == q_max`).
    pub fn set_conj(&mut self, p: usize, q: usize, m: Matrix<F>) -> Result<(), BicomplexError> {
        if self.p_max != self.q_max {
            return Err(BicomplexError::InvalidPlacement(format!(
                "conjugation needs square bounds, got ({},{})",
                self.p_max, self.q_max
            )));
        }
        self.check_bounds(p, q)?;
        let (pi, qi) = (p as i64, q as i64);
        let expected = (self.dim(qi, pi), self.dim(pi, qi));
        Self::check_shape("conj", p, q, &m, expected)?;
        if self.conj.is_none() {
            let blocks = (0..=self.p_max)
                .map(|a| {
                    (0..=self.q_max)
                        .map(|b| Matrix::zeros(self.dims[b][a], self.dims[a][b]))
                        .collect()
                })
                .collect();
            self.conj = Some(blocks);
        }
        self.conj.as_mut().expect("just set")[p][q] = m;
        Ok(())
    }

    pub fn clear_conj(&mut self) {
        self.conj = None;
    }

    /// Checks `∂² = 0`, `∂̄² = 0`, `∂∂̄ + ∂̄∂ = 0`, the conjugation identities
    /// `σ² = id` and `σ∂ = ∂̄σ`, and the support bound from `n`.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |p: usize, q: usize, identity: &str| {
            out.push(Violation {
                p,
                q,
                identity: identity.to_string(),
            })
        };
        for p in 0..=self.p_max {
            for q in 0..=self.q_max {
                let (pi, qi) = (p as i64, q as i64);
                if !(&*self.del(pi + 1, qi) * &*self.del(pi, qi)).is_zero() {
                    push(p, q, "∂∂ ≠ 0");
                }
                if !(&*self.delbar(pi, qi + 1) * &*self.delbar(pi, qi)).is_zero() {
                    push(p, q, "∂̄∂̄ ≠ 0");
                }
                let a = &*self.del(pi, qi + 1) * &*self.delbar(pi, qi);
                let b = &*self.delbar(pi + 1, qi) * &*self.del(pi, qi);
                if !(&a + &b).is_zero() {
                    push(p, q, "∂∂̄+∂̄∂ ≠ 0");
                }
                if let Some(n) = self.n {
                    if (p > n || q > n) && self.dims[p][q] > 0 {
                        push(p, q, "nonzero space beyond complex dimension");
                    }
                }
            }
        }
        if self.conj.is_some() {
            let r = self.p_max as i64;
            for p in 0..=r {
                for q in 0..=r {
                    let (pu, qu) = (p as usize, q as usize);
                    if self.dim(p, q) != self.dim(q, p) {
                        push(pu, qu, "dim V^{p,q} ≠ dim V^{q,p}");
                        continue;
                    }
                    let c = self.conj_block(p, q).expect("conj present");
                    let c_back = self.conj_block(q, p).expect("conj present");
                    if &*c_back * &c.conj() != Matrix::identity(self.dim(p, q)) {
                        push(pu, qu, "σ² ≠ id");
                    }
                    if self.dim(p + 1, q) != self.dim(q, p + 1) {
                        continue;
                    }
                    let lhs = &*self.conj_block(p + 1, q).expect("conj present")
                        * &self.del(p, q).conj();
                    let rhs = &*self.delbar(q, p) * &c;
                    if lhs != rhs {
                        push(pu, qu, "σ∂ ≠ ∂̄σ");
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Changes basis at every bidegree: `v ↦ P_{p,q}·v`. `basis_change[p][q]`
    /// must be invertible of size `dim V^{p,q}`.
    pub fn change_basis(&self, basis_change: &[Vec<Matrix<F>>]) -> Result<Self, BicomplexError> {
        let inv: Vec<Vec<Matrix<F>>> = basis_change
            .iter()
            .enumerate()
            .map(|(p, row)| {
                row.iter()
                    .enumerate()
                    .map(|(q, m)| {
                        m.inverse().map_err(|source| BicomplexError::Containment {
                            p,
                            q,
                            source,
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;
        let pm = |p: i64, q: i64| -> Matrix<F> {
            if self.in_bounds(p, q) {
                basis_change[p as usize][q as usize].clone()
            } else {
                Matrix::identity(0)
            }
        };
        let mut out = self.clone();
        for p in 0..=self.p_max {
            for q in 0..=self.q_max {
                let (pi, qi) = (p as i64, q as i64);
                let src_inv = &inv[p][q];
                out.del[p][q] = &(&pm(pi + 1, qi) * &*self.del(pi, qi)) * src_inv;
                out.delbar[p][q] = &(&pm(pi, qi + 1) * &*self.delbar(pi, qi)) * src_inv;
                if let Some(conj) = out.conj.as_mut() {
                    let c = self.conj_block(pi, qi).expect("conj present");
                    conj[p][q] = &(&pm(qi, pi) * &c) * &src_inv.conj();
                }
            }
        }
        out.exterior = None;
        Ok(out)
    }

    /// Bidegree-wise direct sum. Bounds are the maxima of the two; the
    /// conjugation survives only if both summands carry one.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let p_max = self.p_max.max(other.p_max);
        let q_max = self.q_max.max(other.q_max);
        let dims: Vec<Vec<usize>> = (0..=p_max as i64)
            .map(|p| (0..=q_max as i64).map(|q| self.dim(p, q) + other.dim(p, q)).collect())
            .collect();
        let mut out = Bicomplex::new(p_max, q_max, &dims);
        let diag = |a: &Matrix<F>, b: &Matrix<F>| -> Matrix<F> {
            let mut m = Matrix::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
            m.set_block(0, 0, a);
            m.set_block(a.nrows(), a.ncols(), b);
            m
        };
        for p in 0..=p_max {
            for q in 0..=q_max {
                let (pi, qi) = (p as i64, q as i64);
                out.del[p][q] = diag(&self.del(pi, qi), &other.del(pi, qi));
                out.delbar[p][q] = diag(&self.delbar(pi, qi), &other.delbar(pi, qi));
            }
        }
        if self.conj.is_some() && other.conj.is_some() && p_max == q_max {
            for p in 0..=p_max {
                for q in 0..=q_max {
                    let (pi, qi) = (p as i64, q as i64);
                    let block = diag(
                        &self.conj_block(pi, qi).expect("conj present"),
                        &other.conj_block(pi, qi).expect("conj present"),
                    );
                    out.set_conj(p, q, block).expect("shapes agree");
                }
            }
        }
        out.n = match (self.n, other.n) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        out
    }

    /// Widens the bounds; new bidegrees carry the zero space.
    pub fn with_bounds(&self, p_max: usize, q_max: usize) -> Self {
        assert!(p_max >= self.p_max && q_max >= self.q_max);
        let empty = Bicomplex::new(p_max, q_max, &[]);
        let mut out = self.direct_sum(&empty);
        if let Some(conj) = &self.conj {
            if p_max == q_max {
                for (p, row) in conj.iter().enumerate() {
                    for (q, m) in row.iter().enumerate() {
                        out.set_conj(p, q, m.clone()).expect("shape preserved");
                    }
                }
            }
        }
        out.n = self.n;
        out.exterior = self.exterior.clone();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as G;

    pub(crate) fn unit_square(sign_corrected: bool) -> Bicomplex<G> {
        let mut x = Bicomplex::new(1, 1, &[vec![1, 1], vec![1, 1]]);
        let one = Matrix::from_i64(&[&[1]]);
        x.set_del(0, 0, one.clone()).unwrap();
        x.set_delbar(0, 0, one.clone()).unwrap();
        x.set_delbar(1, 0, one.clone()).unwrap();
        let d01 = if sign_corrected {
            Matrix::from_i64(&[&[-1]])
        } else {
            one
        };
        x.set_del(0, 1, d01).unwrap();
        x
    }

    #[test]
    fn zero_differentials_are_valid() {
        let x: Bicomplex<G> = Bicomplex::new(2, 2, &[vec![1, 2, 1], vec![2, 4, 2], vec![1, 2, 1]]);
        assert!(x.validate().is_empty());
    }

    #[test]
    fn unsigned_square_fails_anticommutation() {
        let v = unit_square(false).validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].to_string(), "∂∂̄+∂̄∂ ≠ 0 at (0,0)");
        assert!(unit_square(true).validate().is_empty());
    }

    #[test]
    fn wrong_block_shape_is_rejected() {
        let mut x: Bicomplex<G> = Bicomplex::new(1, 1, &[vec![1, 1], vec![1, 1]]);
        let err = x.set_del(0, 0, Matrix::from_i64(&[&[1, 2]])).unwrap_err();
        assert!(matches!(err, BicomplexError::BlockShape { .. }));
        assert!(x.set_del(3, 0, Matrix::zeros(0, 0)).is_err());
    }

    #[test]
    fn outside_bounds_is_zero_space() {
        let x: Bicomplex<G> = Bicomplex::dot(1, 2);
        assert_eq!(x.dim(1, 2), 1);
        assert_eq!(x.dim(-1, 0), 0);
        assert_eq!(x.dim(2, 2), 0);
        assert_eq!(x.del(1, 2).shape(), (0, 1));
        assert_eq!(x.delbar(1, 1).shape(), (1, 0));
    }

    #[test]
    fn conjugation_identities_are_checked() {
        let mut x: Bicomplex<G> = Bicomplex::new(1, 1, &[vec![1, 1], vec![1, 0]]);
        x.set_conj(0, 0, Matrix::from_i64(&[&[1]])).unwrap();
        x.set_conj(1, 0, Matrix::from_i64(&[&[1]])).unwrap();
        x.set_conj(0, 1, Matrix::from_i64(&[&[1]])).unwrap();
        assert!(x.validate().is_empty());
        // ∂ without the matching ∂̄ breaks σ∂ = ∂̄σ
        x.set_del(0, 0, Matrix::from_i64(&[&[1]])).unwrap();
        let v = x.validate();
        assert!(v.iter().any(|v| v.identity == "σ∂ ≠ ∂̄σ"), "{v:?}");
        x.set_delbar(0, 0, Matrix::from_i64(&[&[1]])).unwrap();
        assert!(x.validate().is_empty());
        // σ² = id fails for the scalar 2
        x.set_conj(0, 0, Matrix::from_i64(&[&[2]])).unwrap();
        assert!(x.validate().iter().any(|v| v.identity == "σ² ≠ id"));
    }

    #[test]
    fn support_beyond_n() {
        let mut x: Bicomplex<G> = Bicomplex::dot(2, 0);
        x.set_n(Some(1));
        assert_eq!(x.validate().len(), 1);
    }
}
