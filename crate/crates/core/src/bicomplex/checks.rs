//! Numerical identities and inequalities between the computed dimensions.
//!
//! Every check here reads dimension tables only; none touches matrices.

use serde::{Deserialize, Serialize};

use crate::error::BicomplexError;
use crate::scalar::Field;

use super::cohomology::{BidegreeTable, HpqTables, VarouchasDims};
use super::Bicomplex;

fn cells(t: &BidegreeTable) -> impl Iterator<Item = (i64, i64)> + '_ {
    t.iter().map(|(p, q, _)| (p as i64, q as i64))
}

fn z(n: usize) -> i64 {
    n as i64
}

/// `a − b + h_∂̄ − h_A + c = 0` and `d − h_BC + h_∂̄ − e + f = 0` at every
/// bidegree.
pub fn check_sequences(h: &HpqTables, v: &VarouchasDims) -> bool {
    cells(&h.bc).all(|(p, q)| {
        let g = |t: &BidegreeTable| z(t.get(p, q));
        let first = g(&v.a) - g(&v.b) + g(&h.dolbeault) - g(&h.aeppli) + g(&v.c);
        let second = g(&v.d) - g(&h.bc) + g(&h.dolbeault) - g(&v.e) + g(&v.f);
        first == 0 && second == 0
    })
}

/// `c^{p,q} = d^{p,q+1}` and `e^{p,q} = b^{p+1,q}` at every bidegree.
pub fn check_structural_equalities(v: &VarouchasDims) -> bool {
    cells(&v.c).all(|(p, q)| v.c.get(p, q) == v.d.get(p, q + 1) && v.e.get(p, q) == v.b.get(p + 1, q))
}

fn require_conjugation<F: Field>(x: &Bicomplex<F>) -> Result<(), BicomplexError> {
    if x.has_conjugation() {
        Ok(())
    } else {
        Err(BicomplexError::NoConjugation)
    }
}

/// The equalities forced by conjugation: `a`, `f`, `h_BC`, `h_A` symmetric;
/// `d^{p,q} = b^{q,p}`, `e^{p,q} = c^{q,p}`, `h_∂̄^{p,q} = h_∂^{q,p}`.
pub fn check_conjugation_symmetries<F: Field>(
    x: &Bicomplex<F>,
    h: &HpqTables,
    v: &VarouchasDims,
) -> Result<bool, BicomplexError> {
    require_conjugation(x)?;
    Ok(cells(&h.bc).all(|(p, q)| {
        let sym = |t: &BidegreeTable| t.get(p, q) == t.get(q, p);
        let swap = |s: &BidegreeTable, t: &BidegreeTable| s.get(p, q) == t.get(q, p);
        sym(&v.a)
            && sym(&v.f)
            && sym(&h.bc)
            && sym(&h.aeppli)
            && swap(&v.d, &v.b)
            && swap(&v.e, &v.c)
            && swap(&h.dolbeault, &h.del)
    }))
}

/// Outcome of the inequalities `h^k_∂̄ ≥ b_k`, `h^k_BC + h^k_A ≥ 2b_k` and,
/// with conjugation, `h_BC^{p,q} + h_A^{p,q} ≥ h_∂̄^{p,q} + h_∂^{p,q}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityVerdicts {
    pub frolicher_all_k: bool,
    pub frolicher_strict_k: Vec<usize>,
    pub bc_all_k: bool,
    pub bc_strict_k: Vec<usize>,
    /// `None` without conjugation, where it can fail.
    pub pointwise: Option<bool>,
    /// Bidegrees where the pointwise form is strict, recorded with or
    /// without conjugation.
    pub pointwise_strict: Vec<(usize, usize)>,
    /// Bidegrees where the pointwise form fails; only possible without
    /// conjugation.
    pub pointwise_violations: Vec<(usize, usize)>,
}

impl InequalityVerdicts {
    pub fn frolicher_equality(&self) -> bool {
        self.frolicher_all_k && self.frolicher_strict_k.is_empty()
    }

    pub fn bc_equality(&self) -> bool {
        self.bc_all_k && self.bc_strict_k.is_empty()
    }
}

pub fn inequality_verdicts(h: &HpqTables, betti: &[usize], conjugation: bool) -> InequalityVerdicts {
    let mut out = InequalityVerdicts {
        frolicher_all_k: true,
        bc_all_k: true,
        ..Default::default()
    };
    for (k, &b) in betti.iter().enumerate() {
        let ki = k as i64;
        let dolb = h.dolbeault.total(ki);
        out.frolicher_all_k &= dolb >= b;
        if dolb > b {
            out.frolicher_strict_k.push(k);
        }
        let lhs = h.bc.total(ki) + h.aeppli.total(ki);
        out.bc_all_k &= lhs >= 2 * b;
        if lhs > 2 * b {
            out.bc_strict_k.push(k);
        }
    }
    for (p, q, bc) in h.bc.iter() {
        let (pi, qi) = (p as i64, q as i64);
        let lhs = bc + h.aeppli.get(pi, qi);
        let rhs = h.dolbeault.get(pi, qi) + h.del.get(pi, qi);
        if lhs > rhs {
            out.pointwise_strict.push((p, q));
        } else if lhs < rhs {
            out.pointwise_violations.push((p, q));
        }
    }
    out.pointwise = conjugation.then(|| out.pointwise_violations.is_empty());
    out
}

/// `h^k_BC + h^k_A = 2 b_k` for every `k`.
pub fn equality_characterization(h: &HpqTables, betti: &[usize]) -> bool {
    betti
        .iter()
        .enumerate()
        .all(|(k, &b)| h.bc.total(k as i64) + h.aeppli.total(k as i64) == 2 * b)
}

/// `h^k_BC + h^k_A = 2h^k_∂̄ + a^k + f^k` for every `k`, together with the
/// bidegree form `h_BC^{p,q} + h_A^{q,p} = h_∂̄^{p,q} + h_∂^{p,q} + f^{p,q} + a^{p,q}`.
pub fn bc_aeppli_identity_check<F: Field>(
    x: &Bicomplex<F>,
    h: &HpqTables,
    v: &VarouchasDims,
) -> Result<bool, BicomplexError> {
    require_conjugation(x)?;
    let top = (x.top_degree()) as i64;
    let totals = (0..=top).all(|k| {
        h.bc.total(k) + h.aeppli.total(k) == 2 * h.dolbeault.total(k) + v.a.total(k) + v.f.total(k)
    });
    let pointwise = cells(&h.bc).all(|(p, q)| {
        h.bc.get(p, q) + h.aeppli.get(q, p)
            == h.dolbeault.get(p, q) + h.del.get(p, q) + v.f.get(p, q) + v.a.get(p, q)
    });
    Ok(totals && pointwise)
}

/// `e^k = (h^k_∂̄ − h^k_BC) + f^k + c^{k−1}
///      = (h^k_∂̄ − h^k_BC) − (h^{k−1}_∂̄ − h^{k−1}_A) + f^k − a^{k−1} + e^{k−2}`.
pub fn ek_recursion_check(h: &HpqTables, v: &VarouchasDims) -> bool {
    let top = (h.bc.p_max() + h.bc.q_max()) as i64;
    let t = |table: &BidegreeTable, k: i64| z(table.total(k));
    (0..=top).all(|k| {
        let e = t(&v.e, k);
        let first = t(&h.dolbeault, k) - t(&h.bc, k) + t(&v.f, k) + t(&v.c, k - 1);
        let second = t(&h.dolbeault, k) - t(&h.bc, k) - (t(&h.dolbeault, k - 1) - t(&h.aeppli, k - 1))
            + t(&v.f, k)
            - t(&v.a, k - 1)
            + t(&v.e, k - 2);
        e == first && e == second
    })
}

/// Dualities of a compact `n`-dimensional model: `h_BC^{p,q} = h_A^{n−q,n−p}`,
/// `a^{p,q} = f^{n−q,n−p}`, `b_k = b_{2n−k}` and `h^k_∂̄ = h^{2n−k}_∂̄`.
pub fn check_duality(h: &HpqTables, v: &VarouchasDims, betti: &[usize], n: usize) -> bool {
    let n = n as i64;
    let top = 2 * n;
    if betti.len() as i64 != top + 1 {
        return false;
    }
    let bidegree = (0..=n).all(|p| {
        (0..=n).all(|q| {
            h.bc.get(p, q) == h.aeppli.get(n - q, n - p) && v.a.get(p, q) == v.f.get(n - q, n - p)
        })
    });
    let total = (0..=top).all(|k| {
        betti[k as usize] == betti[(top - k) as usize]
            && h.dolbeault.total(k) == h.dolbeault.total(top - k)
    });
    bidegree && total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bicomplex::cohomology::{local_dims, varouchas_dims};
    use crate::bicomplex::tests::unit_square;
    use crate::bicomplex::betti;
    use crate::scalar::GaussianRational as G;

    fn tables(x: &Bicomplex<G>) -> (HpqTables, VarouchasDims, Vec<usize>) {
        let grid = local_dims(x).unwrap();
        let b = (0..=x.top_degree() as i64).map(|k| betti(x, k)).collect();
        (HpqTables::from_grid(&grid), varouchas_dims(x).unwrap(), b)
    }

    #[test]
    fn dot_and_square_pass_everything() {
        for x in [Bicomplex::dot(0, 0), Bicomplex::dot(1, 2), unit_square(true)] {
            let (h, v, b) = tables(&x);
            assert!(check_sequences(&h, &v));
            assert!(check_structural_equalities(&v));
            assert!(ek_recursion_check(&h, &v));
            let iv = inequality_verdicts(&h, &b, false);
            assert!(iv.frolicher_equality() && iv.bc_equality());
            assert!(equality_characterization(&h, &b));
        }
    }

    #[test]
    fn symmetry_needs_conjugation() {
        let x: Bicomplex<G> = Bicomplex::dot(0, 0);
        let (h, v, _) = tables(&x);
        assert_eq!(
            check_conjugation_symmetries(&x, &h, &v),
            Err(BicomplexError::NoConjugation)
        );
        assert_eq!(bc_aeppli_identity_check(&x, &h, &v), Err(BicomplexError::NoConjugation));
    }

    #[test]
    fn dot_at_origin_is_self_dual() {
        let x: Bicomplex<G> = Bicomplex::dot(0, 0);
        let (h, v, b) = tables(&x);
        assert!(check_duality(&h, &v, &b, 0));
    }
}
