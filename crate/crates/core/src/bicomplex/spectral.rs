//! The spectral sequence of the column filtration `F^p = ⊕_{p' ≥ p} V^{p',•}`.
//!
//! With `Z_r^p = F^p ∩ d^{-1}(F^{p+r})` inside `Tot^k`,
//! `E_r^{p,q} = Z_r^p / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1})`, `k = p + q`.
//! Filtration indices below zero give the whole space.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::error::BicomplexError;
use crate::linalg::{kernel_basis, quotient_dim, Matrix, Subspace};
use crate::scalar::Field;

use super::cohomology::BidegreeTable;
use super::{Bicomplex, TotalComplex};

/// `pages[r - 1]` holds the dimensions of `E_r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralPages {
    pub r_max: usize,
    pub pages: Vec<BidegreeTable>,
}

impl SpectralPages {
    /// Page `E_r` for `1 ≤ r ≤ r_max`.
    pub fn page(&self, r: usize) -> &BidegreeTable {
        &self.pages[r - 1]
    }

    pub fn e1(&self) -> &BidegreeTable {
        self.page(1)
    }

    /// The last computed page, equal to `E_∞` when `r_max` is large enough.
    pub fn e_infinity(&self) -> &BidegreeTable {
        self.pages.last().expect("at least one page")
    }

    pub fn degenerates_at_e1(&self) -> bool {
        self.e1() == self.e_infinity()
    }

    /// First page after which nothing changes.
    pub fn degeneration_page(&self) -> usize {
        let last = self.e_infinity();
        self.pages.iter().position(|p| p == last).map_or(self.r_max, |i| i + 1)
    }
}

pub fn default_r_max<F: Field>(x: &Bicomplex<F>) -> usize {
    x.p_max() + x.q_max() + 2
}

struct Filtered<'a, F> {
    tot: TotalComplex<'a, F>,
    p_max: i64,
    differentials: RefCell<HashMap<i64, Rc<Matrix<F>>>>,
    /// `Z_r^p` keyed by `(k, p, p + r)`, both clamped to `0..=p_max + 1`:
    /// `Z_r^p = F^p ∩ d^{-1}(F^{p+r})` depends on nothing else.
    cycles: RefCell<HashMap<(i64, i64, i64), Rc<Subspace<F>>>>,
    /// Page dimensions keyed by the clamped indices of their three cycle
    /// spaces; pages past stabilization hit this.
    pages: RefCell<HashMap<[i64; 7], usize>>,
}

impl<F: Field> Filtered<'_, F> {
    fn differential(&self, k: i64) -> Rc<Matrix<F>> {
        if let Some(d) = self.differentials.borrow().get(&k) {
            return Rc::clone(d);
        }
        let d = Rc::new(self.tot.differential(k));
        self.differentials.borrow_mut().insert(k, Rc::clone(&d));
        d
    }

    /// `Z_r^p` in degree `k`.
    fn cycles(&self, k: i64, p: i64, r: i64) -> Rc<Subspace<F>> {
        let clamp = |i: i64| i.clamp(0, self.p_max + 1);
        let key = (k, clamp(p), clamp(p + r));
        if let Some(z) = self.cycles.borrow().get(&key) {
            return Rc::clone(z);
        }
        let d = self.differential(k);
        let leak = &self.tot.quotient_by_filtration(k + 1, key.2) * &*d;
        let z = Rc::new(
            self.tot
                .filtration(k, key.1)
                .intersect(&kernel_basis(&leak))
                .expect("same ambient"),
        );
        self.cycles.borrow_mut().insert(key, Rc::clone(&z));
        z
    }

    fn page_dim(&self, k: i64, p: i64, r: i64) -> Result<usize, BicomplexError> {
        let c = |i: i64| i.clamp(0, self.p_max + 1);
        let key = [k, c(p), c(p + r), c(p + 1), c(p + r), c(p - r + 1), c(p)];
        if let Some(&d) = self.pages.borrow().get(&key) {
            return Ok(d);
        }
        let z = self.cycles(k, p, r);
        let lower = self.cycles(k, p + 1, r - 1);
        let boundary = self.cycles(k - 1, p - r + 1, r - 1).map(&self.differential(k - 1));
        let den = lower.sum(&boundary).expect("same ambient");
        let d = quotient_dim(&z, &den).map_err(|source| BicomplexError::Containment {
            p: p.max(0) as usize,
            q: (k - p).max(0) as usize,
            source,
        })?;
        self.pages.borrow_mut().insert(key, d);
        Ok(d)
    }
}

/// Dimensions of `E_1, …, E_{r_max}`. Requires `r_max ≥ 1`.
pub fn spectral_page_dims<F: Field>(
    x: &Bicomplex<F>,
    r_max: usize,
) -> Result<SpectralPages, BicomplexError> {
    assert!(r_max >= 1, "r_max must be at least 1");
    let f = Filtered {
        tot: TotalComplex::new(x),
        p_max: x.p_max() as i64,
        differentials: RefCell::default(),
        cycles: RefCell::default(),
        pages: RefCell::default(),
    };
    let mut pages = Vec::with_capacity(r_max);
    for r in 1..=r_max as i64 {
        let mut table = BidegreeTable::zeros(x.p_max(), x.q_max());
        for p in 0..=x.p_max() {
            for q in 0..=x.q_max() {
                if x.dim(p as i64, q as i64) > 0 {
                    let k = (p + q) as i64;
                    table.set(p, q, f.page_dim(k, p as i64, r)?);
                }
            }
        }
        pages.push(table);
    }
    Ok(SpectralPages { r_max, pages })
}
