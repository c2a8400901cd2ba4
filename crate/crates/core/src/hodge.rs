//! Finite-dimensional Hodge theory for the Bott-Chern and Aeppli Laplacians.
//!
//! Inner products are `⟨u, v⟩ = uᴴ G v` with one Gram matrix `G` per
//! bidegree. All adjoints are exact, so kernels are exact subspaces and
//! their dimensions can be compared with the cohomology counts directly.

use std::borrow::Cow;
use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::bicomplex::{Bicomplex, ExteriorBasis, LocalSpaces};
use crate::error::HodgeError;
use crate::linalg::{kernel_basis, Matrix, Subspace};
use crate::scalar::Field;

/// One Gram matrix per bidegree inside the bounds of a bicomplex.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricData<F> {
    grams: Vec<Vec<Matrix<F>>>,
}

/// Checks that `m` is Hermitian and positive definite, the latter through
/// the signs of its leading principal minors.
pub fn check_gram<F: Field>(m: &Matrix<F>, p: usize, q: usize) -> Result<(), HodgeError> {
    if *m != m.conj_transpose() {
        return Err(HodgeError::NotHermitian { p, q });
    }
    for k in 1..=m.nrows() {
        let minor = m.block(0, 0, k, k).determinant()?;
        if minor.real_sign() != Some(Ordering::Greater) {
            return Err(HodgeError::NotPositiveDefinite { p, q });
        }
    }
    Ok(())
}

impl<F: Field> MetricData<F> {
    /// The metric making the given basis orthonormal.
    pub fn identity(x: &Bicomplex<F>) -> Self {
        MetricData {
            grams: (0..=x.p_max() as i64)
                .map(|p| {
                    (0..=x.q_max() as i64)
                        .map(|q| Matrix::identity(x.dim(p, q)))
                        .collect()
                })
                .collect(),
        }
    }

    /// Identity everywhere except the given `(p, q, gram)` blocks, each of
    /// which is validated.
    pub fn from_blocks(
        x: &Bicomplex<F>,
        blocks: &[(usize, usize, Matrix<F>)],
    ) -> Result<Self, HodgeError> {
        let mut g = MetricData::identity(x);
        for (p, q, m) in blocks {
            let (p, q) = (*p, *q);
            let expected = x.dim(p as i64, q as i64);
            if !x.in_bounds(p as i64, q as i64) || m.shape() != (expected, expected) {
                return Err(HodgeError::GramShape {
                    p,
                    q,
                    got: m.nrows(),
                    expected,
                });
            }
            check_gram(m, p, q)?;
            g.grams[p][q] = m.clone();
        }
        Ok(g)
    }

    /// Gram matrix at `(p, q)`; the empty matrix outside the bounds.
    pub fn gram(&self, p: i64, q: i64) -> Cow<'_, Matrix<F>> {
        if p >= 0 && q >= 0 {
            if let Some(m) = self.grams.get(p as usize).and_then(|r| r.get(q as usize)) {
                return Cow::Borrowed(m);
            }
        }
        Cow::Owned(Matrix::zeros(0, 0))
    }

    pub fn is_identity(&self) -> bool {
        self.grams
            .iter()
            .flatten()
            .all(|m| *m == Matrix::identity(m.nrows()))
    }
}

/// `G_src⁻¹ · mᴴ · G_tgt`, the adjoint of `m: src → tgt`.
pub fn adjoint<F: Field>(
    m: &Matrix<F>,
    gram_src: &Matrix<F>,
    gram_tgt: &Matrix<F>,
) -> Result<Matrix<F>, HodgeError> {
    let (rows, cols) = m.shape();
    if gram_src.shape() != (cols, cols) || gram_tgt.shape() != (rows, rows) {
        return Err(HodgeError::AdjointShape {
            rows,
            cols,
            src: gram_src.nrows(),
            tgt: gram_tgt.nrows(),
        });
    }
    let inv = gram_src.inverse()?;
    Ok(&(&inv * &m.conj_transpose()) * gram_tgt)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LaplacianFlavor {
    Bc,
    Aeppli,
}

/// A map between two bidegrees with its adjoint.
struct Arrow<F> {
    map: Matrix<F>,
    adj: Matrix<F>,
}

struct Ops<'a, F> {
    x: &'a Bicomplex<F>,
    g: &'a MetricData<F>,
}

impl<F: Field> Ops<'_, F> {
    fn arrow(&self, map: Matrix<F>, src: (i64, i64), tgt: (i64, i64)) -> Result<Arrow<F>, HodgeError> {
        let adj = adjoint(&map, &self.g.gram(src.0, src.1), &self.g.gram(tgt.0, tgt.1))?;
        Ok(Arrow { map, adj })
    }

    fn del(&self, p: i64, q: i64) -> Result<Arrow<F>, HodgeError> {
        self.arrow(self.x.del(p, q).into_owned(), (p, q), (p + 1, q))
    }

    fn delbar(&self, p: i64, q: i64) -> Result<Arrow<F>, HodgeError> {
        self.arrow(self.x.delbar(p, q).into_owned(), (p, q), (p, q + 1))
    }

    fn ddbar(&self, p: i64, q: i64) -> Result<Arrow<F>, HodgeError> {
        self.arrow(self.x.ddbar(p, q), (p, q), (p + 1, q + 1))
    }

    /// `∂̄*∂` from `(p, q)` to `(p+1, q-1)`.
    fn delbar_star_del(&self, p: i64, q: i64) -> Result<Arrow<F>, HodgeError> {
        let m = &self.delbar(p + 1, q - 1)?.adj * &self.del(p, q)?.map;
        self.arrow(m, (p, q), (p + 1, q - 1))
    }

    /// `∂̄∂*` from `(p, q)` to `(p-1, q+1)`.
    fn delbar_del_star(&self, p: i64, q: i64) -> Result<Arrow<F>, HodgeError> {
        let m = &self.delbar(p - 1, q)?.map * &self.del(p - 1, q)?.adj;
        self.arrow(m, (p, q), (p - 1, q + 1))
    }
}

fn accumulate<F: Field>(
    p: i64,
    q: i64,
    n: usize,
    terms: Vec<Matrix<F>>,
) -> Result<Matrix<F>, HodgeError> {
    let mut sum = Matrix::zeros(n, n);
    for (i, t) in terms.into_iter().enumerate() {
        if t.shape() != (n, n) {
            return Err(HodgeError::Assembly {
                p: p.max(0) as usize,
                q: q.max(0) as usize,
                detail: format!("summand {} has shape {:?}, expected {n}x{n}", i + 1, t.shape()),
            });
        }
        sum = &sum + &t;
    }
    Ok(sum)
}

/// The fourth-order Laplacian of the given flavor on `V^{p,q}`.
///
/// Bott-Chern: `(∂∂̄)(∂∂̄)* + (∂∂̄)*(∂∂̄) + (∂̄*∂)(∂̄*∂)* + (∂̄*∂)*(∂̄*∂) + ∂̄*∂̄ + ∂*∂`.
/// Aeppli: `∂∂* + ∂̄∂̄* + (∂∂̄)*(∂∂̄) + (∂∂̄)(∂∂̄)* + (∂̄∂*)*(∂̄∂*) + (∂̄∂*)(∂̄∂*)*`.
pub fn laplacian<F: Field>(
    x: &Bicomplex<F>,
    g: &MetricData<F>,
    flavor: LaplacianFlavor,
    p: i64,
    q: i64,
) -> Result<Matrix<F>, HodgeError> {
    let ops = Ops { x, g };
    let n = x.dim(p, q);
    let dd_in = ops.ddbar(p - 1, q - 1)?;
    let dd_out = ops.ddbar(p, q)?;
    let terms = match flavor {
        LaplacianFlavor::Bc => {
            let t_in = ops.delbar_star_del(p - 1, q + 1)?;
            let t_out = ops.delbar_star_del(p, q)?;
            let db = ops.delbar(p, q)?;
            let d = ops.del(p, q)?;
            vec![
                &dd_in.map * &dd_in.adj,
                &dd_out.adj * &dd_out.map,
                &t_in.map * &t_in.adj,
                &t_out.adj * &t_out.map,
                &db.adj * &db.map,
                &d.adj * &d.map,
            ]
        }
        LaplacianFlavor::Aeppli => {
            let d_in = ops.del(p - 1, q)?;
            let db_in = ops.delbar(p, q - 1)?;
            let s_out = ops.delbar_del_star(p, q)?;
            let s_in = ops.delbar_del_star(p + 1, q - 1)?;
            vec![
                &d_in.map * &d_in.adj,
                &db_in.map * &db_in.adj,
                &dd_out.adj * &dd_out.map,
                &dd_in.map * &dd_in.adj,
                &s_out.adj * &s_out.map,
                &s_in.map * &s_in.adj,
            ]
        }
    };
    accumulate(p, q, n, terms)
}

/// Harmonic space of the given flavor at `(p, q)`.
pub fn harmonic_space<F: Field>(
    x: &Bicomplex<F>,
    g: &MetricData<F>,
    flavor: LaplacianFlavor,
    p: i64,
    q: i64,
) -> Result<Subspace<F>, HodgeError> {
    Ok(kernel_basis(&laplacian(x, g, flavor, p, q)?))
}

pub fn laplacian_kernel_dim<F: Field>(
    x: &Bicomplex<F>,
    g: &MetricData<F>,
    flavor: LaplacianFlavor,
    p: i64,
    q: i64,
) -> Result<usize, HodgeError> {
    Ok(harmonic_space(x, g, flavor, p, q)?.dim())
}

/// Self-adjointness of both Laplacians at `(p, q)`.
pub fn laplacians_self_adjoint<F: Field>(
    x: &Bicomplex<F>,
    g: &MetricData<F>,
    p: i64,
    q: i64,
) -> Result<bool, HodgeError> {
    let gram = g.gram(p, q);
    for flavor in [LaplacianFlavor::Bc, LaplacianFlavor::Aeppli] {
        let l = laplacian(x, g, flavor, p, q)?;
        if adjoint(&l, &gram, &gram)? != l {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `ker Δ_BC = ker∂ ∩ ker∂̄ ∩ ker(∂∂̄)*` and
/// `ker Δ_A = ker∂* ∩ ker∂̄* ∩ ker∂∂̄` at `(p, q)`, with dimensions equal to
/// `h_BC^{p,q}` and `h_A^{p,q}`.
pub fn harmonic_characterization_check<F: Field>(
    x: &Bicomplex<F>,
    g: &MetricData<F>,
    p: i64,
    q: i64,
) -> Result<bool, HodgeError> {
    let ops = Ops { x, g };
    let meet = |u: Subspace<F>, v: Subspace<F>| u.intersect(&v).map_err(HodgeError::from);

    let bc_expected = meet(
        meet(kernel_basis(&ops.del(p, q)?.map), kernel_basis(&ops.delbar(p, q)?.map))?,
        kernel_basis(&ops.ddbar(p - 1, q - 1)?.adj),
    )?;
    let a_expected = meet(
        meet(
            kernel_basis(&ops.del(p - 1, q)?.adj),
            kernel_basis(&ops.delbar(p, q - 1)?.adj),
        )?,
        kernel_basis(&ops.ddbar(p, q)?.map),
    )?;
    let bc = harmonic_space(x, g, LaplacianFlavor::Bc, p, q)?;
    let a = harmonic_space(x, g, LaplacianFlavor::Aeppli, p, q)?;

    let local = LocalSpaces::at(x, p, q);
    let counts = local
        .h_bc()
        .and_then(|hbc| Ok((hbc, local.h_aeppli()?)))
        .map_err(|e| HodgeError::Assembly {
            p: p.max(0) as usize,
            q: q.max(0) as usize,
            detail: e.to_string(),
        })?;
    Ok(bc == bc_expected && a == a_expected && (bc.dim(), a.dim()) == counts)
}

/// Per-bidegree harmonic dimensions and the outcome of the checks above.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeSummary {
    pub ker_laplacian_bc: crate::bicomplex::cohomology::BidegreeTable,
    pub ker_laplacian_aeppli: crate::bicomplex::cohomology::BidegreeTable,
    pub self_adjoint_ok: bool,
    pub harmonic_ok: bool,
    /// `None` unless the bicomplex is an exterior-algebra model.
    pub star_kernel_swap_ok: Option<bool>,
}

pub fn hodge_summary<F: Field>(
    x: &Bicomplex<F>,
    g: &MetricData<F>,
) -> Result<HodgeSummary, HodgeError> {
    use crate::bicomplex::cohomology::BidegreeTable;
    use rayon::prelude::*;
    let cells: Vec<(usize, usize)> = (0..=x.p_max())
        .flat_map(|p| (0..=x.q_max()).map(move |q| (p, q)))
        .collect();
    let per_cell: Vec<(usize, usize, bool, bool)> = cells
        .par_iter()
        .map(|&(p, q)| {
            let (pi, qi) = (p as i64, q as i64);
            Ok((
                laplacian_kernel_dim(x, g, LaplacianFlavor::Bc, pi, qi)?,
                laplacian_kernel_dim(x, g, LaplacianFlavor::Aeppli, pi, qi)?,
                laplacians_self_adjoint(x, g, pi, qi)?,
                harmonic_characterization_check(x, g, pi, qi)?,
            ))
        })
        .collect::<Result<_, HodgeError>>()?;
    let mut bc = BidegreeTable::zeros(x.p_max(), x.q_max());
    let mut a = BidegreeTable::zeros(x.p_max(), x.q_max());
    for (&(p, q), &(kb, ka, _, _)) in cells.iter().zip(&per_cell) {
        bc.set(p, q, kb);
        a.set(p, q, ka);
    }
    let star_kernel_swap_ok = match (x.exterior(), g.is_identity()) {
        (Some(_), true) => Some(build_star(x, g)?.kernel_swap_check(x, g)?),
        _ => None,
    };
    Ok(HodgeSummary {
        ker_laplacian_bc: bc,
        ker_laplacian_aeppli: a,
        self_adjoint_ok: per_cell.iter().all(|c| c.2),
        harmonic_ok: per_cell.iter().all(|c| c.3),
        star_kernel_swap_ok,
    })
}

/// The complex-linear Hodge star `V^{p,q} → V^{n−q,n−p}` of an exterior
/// model with orthonormal monomials, fixed by `α ∧ ∗(σβ) = ⟨α, β⟩ vol`.
///
/// On `μ = φ^A ∧ φ̄^B` this gives `∗μ = ε ω φ^{Bᶜ} ∧ φ̄^{Aᶜ}`, where
/// `σ(φ^B ∧ φ̄^A) = ε μ` and `φ^B ∧ φ̄^A ∧ φ^{Bᶜ} ∧ φ̄^{Aᶜ} = ω vol`.
#[derive(Clone, Debug, PartialEq)]
pub struct StarOperator<F> {
    pub n: usize,
    /// `blocks[p][q]` maps `V^{p,q}` to `V^{n−q,n−p}`.
    pub blocks: Vec<Vec<Matrix<F>>>,
}

impl<F: Field> StarOperator<F> {
    pub fn block(&self, p: usize, q: usize) -> &Matrix<F> {
        &self.blocks[p][q]
    }

    /// `u ∈ ker Δ_BC^{p,q} ⟺ ∗u ∈ ker Δ_A^{n−q,n−p}` at every bidegree.
    pub fn kernel_swap_check(&self, x: &Bicomplex<F>, g: &MetricData<F>) -> Result<bool, HodgeError> {
        let n = self.n as i64;
        for p in 0..=n {
            for q in 0..=n {
                let bc = harmonic_space(x, g, LaplacianFlavor::Bc, p, q)?;
                let a = harmonic_space(x, g, LaplacianFlavor::Aeppli, n - q, n - p)?;
                if bc.map(self.block(p as usize, q as usize)) != a {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

pub fn build_star<F: Field>(x: &Bicomplex<F>, g: &MetricData<F>) -> Result<StarOperator<F>, HodgeError> {
    let basis: &ExteriorBasis = x.exterior().ok_or(HodgeError::NotExteriorModel)?;
    if !g.is_identity() {
        return Err(HodgeError::MetricNotOrthonormal);
    }
    let n = basis.n;
    let full = (1u32 << n) - 1;
    let vol = basis.volume();
    let blocks = (0..=n)
        .map(|p| {
            (0..=n)
                .map(|q| {
                    let src = &basis.monomials[p][q];
                    let tgt_len = basis.monomials[n - q][n - p].len();
                    let mut m = Matrix::zeros(tgt_len, src.len());
                    for (col, &mu) in src.iter().enumerate() {
                        let a = basis.holo_part(mu);
                        let b = basis.anti_part(mu);
                        let beta = b | (a << n);
                        let (_, eps) = basis.conjugate(beta);
                        let image = (full & !b) | ((full & !a) << n);
                        let (top, omega) =
                            ExteriorBasis::wedge(beta, image).expect("complementary monomials");
                        debug_assert_eq!(top, vol);
                        m[(basis.index_of(image), col)] = F::from_i64(eps * omega);
                    }
                    m
                })
                .collect()
        })
        .collect();
    Ok(StarOperator { n, blocks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as G;

    fn m(rows: &[&[i64]]) -> Matrix<G> {
        Matrix::from_i64(rows)
    }

    #[test]
    fn adjoint_examples() {
        let one: Matrix<G> = Matrix::identity(1);
        let i = Matrix::from_rows(1, vec![vec![G::i()]]);
        assert_eq!(adjoint(&i, &one, &one).unwrap(), Matrix::from_rows(1, vec![vec![-G::i()]]));
        let z: Matrix<G> = Matrix::zeros(2, 3);
        assert_eq!(
            adjoint(&z, &Matrix::identity(3), &Matrix::identity(2)).unwrap(),
            Matrix::zeros(3, 2)
        );
        let id2 = Matrix::identity(2);
        assert_eq!(adjoint(&m(&[&[1, 2], &[0, 1]]), &id2, &id2).unwrap(), m(&[&[1, 0], &[2, 1]]));
        assert!(matches!(
            adjoint(&m(&[&[1, 2]]), &id2, &id2),
            Err(HodgeError::AdjointShape { .. })
        ));
    }

    #[test]
    fn adjoint_identity_with_general_grams() {
        // ⟨m u, v⟩_tgt = ⟨u, m* v⟩_src
        let a = m(&[&[1, 2, 0], &[3, -1, 4]]);
        let gs = m(&[&[2, 1, 0], &[1, 2, 0], &[0, 0, 1]]);
        let gt = m(&[&[3, 1], &[1, 1]]);
        let adj = adjoint(&a, &gs, &gt).unwrap();
        assert_eq!(&a.conj_transpose() * &gt, &gs * &adj);
    }

    #[test]
    fn gram_validation() {
        assert!(check_gram(&m(&[&[2, 1], &[1, 2]]), 0, 0).is_ok());
        assert!(matches!(
            check_gram(&m(&[&[1, 2], &[2, 1]]), 0, 0),
            Err(HodgeError::NotPositiveDefinite { .. })
        ));
        assert!(matches!(
            check_gram(&m(&[&[1, 1], &[0, 1]]), 0, 0),
            Err(HodgeError::NotHermitian { .. })
        ));
        let herm = Matrix::from_rows(
            2,
            vec![vec![G::from(2), G::i()], vec![-G::i(), G::from(2)]],
        );
        assert!(check_gram(&herm, 0, 0).is_ok());
    }

    #[test]
    fn dot_and_square_laplacians() {
        let dot: Bicomplex<G> = Bicomplex::dot(0, 0);
        let g = MetricData::identity(&dot);
        for flavor in [LaplacianFlavor::Bc, LaplacianFlavor::Aeppli] {
            assert_eq!(laplacian_kernel_dim(&dot, &g, flavor, 0, 0).unwrap(), 1);
        }
        let sq = crate::bicomplex::zigzag_assemble::<G>(
            &[crate::bicomplex::Piece::Square { p: 0, q: 0 }],
            false,
            None,
        )
        .unwrap();
        let g = MetricData::identity(&sq);
        for p in 0..2 {
            for q in 0..2 {
                for flavor in [LaplacianFlavor::Bc, LaplacianFlavor::Aeppli] {
                    assert_eq!(laplacian_kernel_dim(&sq, &g, flavor, p, q).unwrap(), 0);
                }
                assert!(harmonic_characterization_check(&sq, &g, p, q).unwrap());
                assert!(laplacians_self_adjoint(&sq, &g, p, q).unwrap());
            }
        }
        assert_eq!(build_star(&sq, &g).unwrap_err(), HodgeError::NotExteriorModel);
    }
}
