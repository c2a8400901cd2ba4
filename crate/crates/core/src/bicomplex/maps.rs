//! Ranks of the identity-induced maps between cohomologies.
//!
//! A map `N1/D1 → N2/D2` induced by an inclusion `N1 ⊆ N2` with `D1 ⊆ D2`
//! has rank `dim(N1 + D2) − dim D2`.

use serde::{Deserialize, Serialize};

use crate::error::{BicomplexError, LinalgError};
use crate::linalg::{image_basis, kernel_basis, Subspace};
use crate::scalar::Field;

use super::cohomology::LocalSpaces;
use super::{betti, Bicomplex, TotalComplex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapKind {
    BcToDel,
    BcToDolbeault,
    BcToDeRham,
    DelToAeppli,
    DolbeaultToAeppli,
    DeRhamToAeppli,
}

impl MapKind {
    pub const ALL: [MapKind; 6] = [
        MapKind::BcToDel,
        MapKind::BcToDolbeault,
        MapKind::BcToDeRham,
        MapKind::DelToAeppli,
        MapKind::DolbeaultToAeppli,
        MapKind::DeRhamToAeppli,
    ];

    /// Whether the map is computed per total degree rather than per bidegree.
    pub fn is_total(self) -> bool {
        matches!(self, MapKind::BcToDeRham | MapKind::DeRhamToAeppli)
    }
}

/// Rank of one natural map in one degree. `bidegree` is `None` for maps
/// computed in total degree `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapRank {
    pub kind: MapKind,
    pub k: usize,
    pub bidegree: Option<(usize, usize)>,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
}

impl MapRank {
    pub fn injective(&self) -> bool {
        self.rank == self.source_dim
    }

    pub fn surjective(&self) -> bool {
        self.rank == self.target_dim
    }
}

fn induced_rank<F: Field>(n1: &Subspace<F>, d2: &Subspace<F>) -> Result<usize, LinalgError> {
    Ok(n1.sum(d2)?.dim() - d2.dim())
}

fn containment(p: i64, q: i64) -> impl Fn(LinalgError) -> BicomplexError {
    move |source| BicomplexError::Containment {
        p: p.max(0) as usize,
        q: q.max(0) as usize,
        source,
    }
}

/// Rank of `⊕_{p+q=k} H_BC^{p,q} → H^k_dR` for `k = 0..=top`.
pub fn bc_to_de_rham_ranks<F: Field>(x: &Bicomplex<F>) -> Result<Vec<usize>, BicomplexError> {
    Ok(total_ranks(x)?.into_iter().map(|(bc, _)| bc).collect())
}

/// Per total degree: (rank BC → dR, rank dR → A).
fn total_ranks<F: Field>(x: &Bicomplex<F>) -> Result<Vec<(usize, usize)>, BicomplexError> {
    let tot = TotalComplex::new(x);
    (0..=x.top_degree() as i64)
        .map(|k| {
            let n = tot.dim(k);
            let mut closed = Subspace::zero(n);
            let mut exact_sum = Subspace::zero(n);
            for p in tot.columns(k) {
                let q = k - p;
                let local = LocalSpaces::at(x, p, q);
                let err = containment(p, q);
                closed = closed.sum(&tot.embed(p, q, &local.closed()?)).map_err(&err)?;
                exact_sum = exact_sum
                    .sum(&tot.embed(p, q, &local.exact_sum()?))
                    .map_err(&err)?;
            }
            let exact = image_basis(&tot.differential(k - 1));
            let cocycles = kernel_basis(&tot.differential(k));
            let err = containment(0, k);
            let bc = induced_rank(&closed, &exact).map_err(&err)?;
            let a = induced_rank(&cocycles, &exact_sum).map_err(&err)?;
            Ok((bc, a))
        })
        .collect()
}

/// Ranks of all six natural maps: the four bidegree maps at each `(p, q)` in
/// order, then the two total-degree maps for each `k`.
pub fn natural_map_ranks<F: Field>(x: &Bicomplex<F>) -> Result<Vec<MapRank>, BicomplexError> {
    let mut out = Vec::new();
    for p in 0..=x.p_max() as i64 {
        for q in 0..=x.q_max() as i64 {
            let local = LocalSpaces::at(x, p, q);
            let err = containment(p, q);
            let closed = local.closed()?;
            let exact_sum = local.exact_sum()?;
            let d = local.dims()?;
            let bidegree = Some((p as usize, q as usize));
            let k = (p + q) as usize;
            let cases = [
                (MapKind::BcToDel, &closed, &local.im_del, d.bc, d.del),
                (MapKind::BcToDolbeault, &closed, &local.im_delbar, d.bc, d.dolbeault),
                (MapKind::DelToAeppli, &local.ker_del, &exact_sum, d.del, d.aeppli),
                (MapKind::DolbeaultToAeppli, &local.ker_delbar, &exact_sum, d.dolbeault, d.aeppli),
            ];
            for (kind, n1, d2, source_dim, target_dim) in cases {
                out.push(MapRank {
                    kind,
                    k,
                    bidegree,
                    source_dim,
                    target_dim,
                    rank: induced_rank(n1, d2).map_err(&err)?,
                });
            }
        }
    }
    let tot_ranks = total_ranks(x)?;
    let top = x.top_degree();
    let bc_totals = totals_by_k(&out, top, MapKind::BcToDel, |m| m.source_dim);
    let a_totals = totals_by_k(&out, top, MapKind::DelToAeppli, |m| m.target_dim);
    for (k, &(bc, a)) in tot_ranks.iter().enumerate() {
        let b = betti(x, k as i64);
        out.push(MapRank {
            kind: MapKind::BcToDeRham,
            k,
            bidegree: None,
            source_dim: bc_totals[k],
            target_dim: b,
            rank: bc,
        });
        out.push(MapRank {
            kind: MapKind::DeRhamToAeppli,
            k,
            bidegree: None,
            source_dim: b,
            target_dim: a_totals[k],
            rank: a,
        });
    }
    Ok(out)
}

fn totals_by_k(
    maps: &[MapRank],
    top: usize,
    kind: MapKind,
    pick: impl Fn(&MapRank) -> usize,
) -> Vec<usize> {
    let mut totals = vec![0; top + 1];
    for m in maps.iter().filter(|m| m.kind == kind) {
        totals[m.k] += pick(m);
    }
    totals
}

/// The ∂∂̄-Lemma: `⊕_{p+q=k} H_BC^{p,q} → H^k_dR` is injective for every `k`.
///
/// Injectivity is tested on the whole direct sum, not bidegree by bidegree:
/// a sum of pure-type classes can be d-exact while no single component is.
pub fn lemma_direct<F: Field>(x: &Bicomplex<F>) -> Result<bool, BicomplexError> {
    let ranks = bc_to_de_rham_ranks(x)?;
    let grid = super::cohomology::local_dims(x)?;
    let bc = super::cohomology::table_of(&grid, |d| d.bc);
    Ok(ranks
        .iter()
        .enumerate()
        .all(|(k, &r)| r == bc.total(k as i64)))
}

/// For every `k` with `a^{k+1} = 0`, `⊕ H_BC^{p,q} → H^k_dR` is surjective.
pub fn bc_surjectivity_check<F: Field>(x: &Bicomplex<F>) -> Result<bool, BicomplexError> {
    let ranks = bc_to_de_rham_ranks(x)?;
    let v = super::varouchas_dims(x)?;
    Ok(bc_surjectivity_from(&ranks, &v.a, |k| betti(x, k)))
}

pub(crate) fn bc_surjectivity_from(
    bc_ranks: &[usize],
    a: &super::cohomology::BidegreeTable,
    betti: impl Fn(i64) -> usize,
) -> bool {
    bc_ranks.iter().enumerate().all(|(k, &r)| {
        let k = k as i64;
        a.total(k + 1) != 0 || r == betti(k)
    })
}
