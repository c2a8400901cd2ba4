use serde::{Deserialize, Serialize};

use crate::error::{BicomplexError, LinalgError};
use crate::linalg::{image_basis, kernel_basis, quotient_dim, rank, Subspace};
use crate::scalar::Field;

use super::{Bicomplex, TotalComplex};

/// Cohomology flavors computed at a single bidegree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Dolbeault,
    Del,
    Bc,
    Aeppli,
}

impl Flavor {
    pub const ALL: [Flavor; 4] = [Flavor::Dolbeault, Flavor::Del, Flavor::Bc, Flavor::Aeppli];
}

/// The two single-differential cohomologies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineFlavor {
    Dolbeault,
    Del,
}

/// A `(p, q)`-indexed table of counts; reads outside the table give 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BidegreeTable(pub Vec<Vec<usize>>);

impl BidegreeTable {
    pub fn zeros(p_max: usize, q_max: usize) -> Self {
        BidegreeTable(vec![vec![0; q_max + 1]; p_max + 1])
    }

    pub fn from_fn(p_max: usize, q_max: usize, mut f: impl FnMut(usize, usize) -> usize) -> Self {
        BidegreeTable(
            (0..=p_max)
                .map(|p| (0..=q_max).map(|q| f(p, q)).collect())
                .collect(),
        )
    }

    pub fn get(&self, p: i64, q: i64) -> usize {
        if p < 0 || q < 0 {
            return 0;
        }
        self.0
            .get(p as usize)
            .and_then(|row| row.get(q as usize))
            .copied()
            .unwrap_or(0)
    }

    pub fn set(&mut self, p: usize, q: usize, v: usize) {
        self.0[p][q] = v;
    }

    pub fn p_max(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn q_max(&self) -> usize {
        self.0.first().map_or(0, |r| r.len().saturating_sub(1))
    }

    /// `Σ_{p+q=k}` of the table; 0 for negative `k`.
    pub fn total(&self, k: i64) -> usize {
        (0..=k).map(|p| self.get(p, k - p)).sum()
    }

    /// Totals for `k = 0..=p_max+q_max`.
    pub fn totals(&self) -> Vec<usize> {
        let top = (self.p_max() + self.q_max()) as i64;
        (0..=top).map(|k| self.total(k)).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(p, row)| row.iter().enumerate().map(move |(q, &v)| (p, q, v)))
    }

    /// The table with `p` and `q` exchanged.
    pub fn transposed(&self) -> Self {
        BidegreeTable::from_fn(self.q_max(), self.p_max(), |p, q| self.get(q as i64, p as i64))
    }
}

/// Dimensions of the six Varouchas quotients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarouchasDims {
    pub a: BidegreeTable,
    pub b: BidegreeTable,
    pub c: BidegreeTable,
    pub d: BidegreeTable,
    pub e: BidegreeTable,
    pub f: BidegreeTable,
}

/// The four per-bidegree cohomology tables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HpqTables {
    pub dolbeault: BidegreeTable,
    pub del: BidegreeTable,
    pub bc: BidegreeTable,
    pub aeppli: BidegreeTable,
}

impl HpqTables {
    pub fn get(&self, flavor: Flavor) -> &BidegreeTable {
        match flavor {
            Flavor::Dolbeault => &self.dolbeault,
            Flavor::Del => &self.del,
            Flavor::Bc => &self.bc,
            Flavor::Aeppli => &self.aeppli,
        }
    }

    pub(crate) fn from_grid(grid: &[Vec<LocalDims>]) -> Self {
        HpqTables {
            dolbeault: table_of(grid, |d| d.dolbeault),
            del: table_of(grid, |d| d.del),
            bc: table_of(grid, |d| d.bc),
            aeppli: table_of(grid, |d| d.aeppli),
        }
    }
}

/// The kernels and images living in `V^{p,q}`.
#[derive(Clone, Debug)]
pub struct LocalSpaces<F> {
    pub p: i64,
    pub q: i64,
    pub ker_del: Subspace<F>,
    pub ker_delbar: Subspace<F>,
    /// Kernel of `∂∂̄: V^{p,q} → V^{p+1,q+1}`.
    pub ker_ddbar: Subspace<F>,
    /// Image of `∂` from `V^{p-1,q}`.
    pub im_del: Subspace<F>,
    /// Image of `∂̄` from `V^{p,q-1}`.
    pub im_delbar: Subspace<F>,
    /// Image of `∂∂̄` from `V^{p-1,q-1}`.
    pub im_ddbar: Subspace<F>,
}

/// Every count computed from one [`LocalSpaces`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LocalDims {
    pub dolbeault: usize,
    pub del: usize,
    pub bc: usize,
    pub aeppli: usize,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub e: usize,
    pub f: usize,
}

impl<F: Field> LocalSpaces<F> {
    pub fn at(x: &Bicomplex<F>, p: i64, q: i64) -> Self {
        LocalSpaces {
            p,
            q,
            ker_del: kernel_basis(&x.del(p, q)),
            ker_delbar: kernel_basis(&x.delbar(p, q)),
            ker_ddbar: kernel_basis(&x.ddbar(p, q)),
            im_del: image_basis(&x.del(p - 1, q)),
            im_delbar: image_basis(&x.delbar(p, q - 1)),
            im_ddbar: image_basis(&x.ddbar(p - 1, q - 1)),
        }
    }

    fn wrap<T>(&self, r: Result<T, LinalgError>) -> Result<T, BicomplexError> {
        r.map_err(|source| BicomplexError::Containment {
            p: self.p.max(0) as usize,
            q: self.q.max(0) as usize,
            source,
        })
    }

    fn quot(&self, num: &Subspace<F>, den: &Subspace<F>) -> Result<usize, BicomplexError> {
        self.wrap(quotient_dim(num, den))
    }

    fn meet(&self, u: &Subspace<F>, v: &Subspace<F>) -> Result<Subspace<F>, BicomplexError> {
        self.wrap(u.intersect(v))
    }

    fn join(&self, u: &Subspace<F>, v: &Subspace<F>) -> Result<Subspace<F>, BicomplexError> {
        self.wrap(u.sum(v))
    }

    pub fn h_line(&self, flavor: LineFlavor) -> Result<usize, BicomplexError> {
        match flavor {
            LineFlavor::Dolbeault => self.quot(&self.ker_delbar, &self.im_delbar),
            LineFlavor::Del => self.quot(&self.ker_del, &self.im_del),
        }
    }

    pub fn closed(&self) -> Result<Subspace<F>, BicomplexError> {
        self.meet(&self.ker_del, &self.ker_delbar)
    }

    pub fn exact_sum(&self) -> Result<Subspace<F>, BicomplexError> {
        self.join(&self.im_del, &self.im_delbar)
    }

    pub fn h_bc(&self) -> Result<usize, BicomplexError> {
        self.quot(&self.closed()?, &self.im_ddbar)
    }

    pub fn h_aeppli(&self) -> Result<usize, BicomplexError> {
        self.quot(&self.ker_ddbar, &self.exact_sum()?)
    }

    /// `ker∂∂̄ / ((u + v) ∩ ker∂∂̄)`.
    fn ddbar_cokernel(&self, u: &Subspace<F>, v: &Subspace<F>) -> Result<usize, BicomplexError> {
        let den = self.meet(&self.join(u, v)?, &self.ker_ddbar)?;
        self.quot(&self.ker_ddbar, &den)
    }

    pub fn dims(&self) -> Result<LocalDims, BicomplexError> {
        let over_ddbar = |s: Subspace<F>| self.quot(&s, &self.im_ddbar);
        Ok(LocalDims {
            dolbeault: self.h_line(LineFlavor::Dolbeault)?,
            del: self.h_line(LineFlavor::Del)?,
            bc: self.h_bc()?,
            aeppli: self.h_aeppli()?,
            a: over_ddbar(self.meet(&self.im_delbar, &self.im_del)?)?,
            b: over_ddbar(self.meet(&self.ker_delbar, &self.im_del)?)?,
            c: self.ddbar_cokernel(&self.ker_delbar, &self.im_del)?,
            d: over_ddbar(self.meet(&self.im_delbar, &self.ker_del)?)?,
            e: self.ddbar_cokernel(&self.ker_del, &self.im_delbar)?,
            f: self.ddbar_cokernel(&self.ker_delbar, &self.ker_del)?,
        })
    }
}

pub fn h_line<F: Field>(
    x: &Bicomplex<F>,
    flavor: LineFlavor,
    p: i64,
    q: i64,
) -> Result<usize, BicomplexError> {
    LocalSpaces::at(x, p, q).h_line(flavor)
}

pub fn h_bc<F: Field>(x: &Bicomplex<F>, p: i64, q: i64) -> Result<usize, BicomplexError> {
    LocalSpaces::at(x, p, q).h_bc()
}

pub fn h_aeppli<F: Field>(x: &Bicomplex<F>, p: i64, q: i64) -> Result<usize, BicomplexError> {
    LocalSpaces::at(x, p, q).h_aeppli()
}

pub fn h_pq<F: Field>(
    x: &Bicomplex<F>,
    flavor: Flavor,
    p: i64,
    q: i64,
) -> Result<usize, BicomplexError> {
    let local = LocalSpaces::at(x, p, q);
    match flavor {
        Flavor::Dolbeault => local.h_line(LineFlavor::Dolbeault),
        Flavor::Del => local.h_line(LineFlavor::Del),
        Flavor::Bc => local.h_bc(),
        Flavor::Aeppli => local.h_aeppli(),
    }
}

/// `b_k = dim ker d_k − rank d_{k-1}` on the total complex.
pub fn betti<F: Field>(x: &Bicomplex<F>, k: i64) -> usize {
    let tot = TotalComplex::new(x);
    if k < 0 {
        return 0;
    }
    tot.dim(k) - rank(&tot.differential(k)) - rank(&tot.differential(k - 1))
}

/// [`LocalDims`] at every bidegree inside the bounds, computed in parallel.
pub fn local_dims<F: Field>(x: &Bicomplex<F>) -> Result<Vec<Vec<LocalDims>>, BicomplexError> {
    use rayon::prelude::*;
    let cells: Vec<(usize, usize)> = (0..=x.p_max())
        .flat_map(|p| (0..=x.q_max()).map(move |q| (p, q)))
        .collect();
    let flat: Vec<LocalDims> = cells
        .par_iter()
        .map(|&(p, q)| LocalSpaces::at(x, p as i64, q as i64).dims())
        .collect::<Result<_, _>>()?;
    Ok(flat.chunks(x.q_max() + 1).map(|c| c.to_vec()).collect())
}

pub(crate) fn table_of(
    grid: &[Vec<LocalDims>],
    pick: impl Fn(&LocalDims) -> usize,
) -> BidegreeTable {
    BidegreeTable(grid.iter().map(|row| row.iter().map(&pick).collect()).collect())
}

pub fn varouchas_dims<F: Field>(x: &Bicomplex<F>) -> Result<VarouchasDims, BicomplexError> {
    let grid = local_dims(x)?;
    Ok(varouchas_from_grid(&grid))
}

pub(crate) fn varouchas_from_grid(grid: &[Vec<LocalDims>]) -> VarouchasDims {
    VarouchasDims {
        a: table_of(grid, |d| d.a),
        b: table_of(grid, |d| d.b),
        c: table_of(grid, |d| d.c),
        d: table_of(grid, |d| d.d),
        e: table_of(grid, |d| d.e),
        f: table_of(grid, |d| d.f),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bicomplex::tests::unit_square;
    use crate::linalg::Matrix;
    use crate::scalar::GaussianRational as G;

    /// `V^{0,0} → V^{0,1}` with `∂̄` an isomorphism and `∂ = 0`.
    fn vertical_arrow() -> Bicomplex<G> {
        let mut x = Bicomplex::new(0, 1, &[vec![1, 1]]);
        x.set_delbar(0, 0, Matrix::from_i64(&[&[1]])).unwrap();
        x
    }

    #[test]
    fn dot_has_one_class_everywhere() {
        let x: Bicomplex<G> = Bicomplex::dot(1, 2);
        for flavor in Flavor::ALL {
            assert_eq!(h_pq(&x, flavor, 1, 2).unwrap(), 1);
            assert_eq!(h_pq(&x, flavor, 0, 2).unwrap(), 0);
        }
        assert_eq!(betti(&x, 3), 1);
        assert_eq!(betti(&x, 2), 0);
        let v = varouchas_dims(&x).unwrap();
        for t in [&v.a, &v.b, &v.c, &v.d, &v.e, &v.f] {
            assert!(t.iter().all(|(_, _, n)| n == 0));
        }
    }

    #[test]
    fn square_is_acyclic() {
        let x = unit_square(true);
        for p in 0..2 {
            for q in 0..2 {
                for flavor in Flavor::ALL {
                    assert_eq!(h_pq(&x, flavor, p, q).unwrap(), 0, "{flavor:?} at ({p},{q})");
                }
            }
        }
        for k in 0..3 {
            assert_eq!(betti(&x, k), 0);
        }
        let v = varouchas_dims(&x).unwrap();
        for t in [&v.a, &v.b, &v.c, &v.d, &v.e, &v.f] {
            assert!(t.iter().all(|(_, _, n)| n == 0));
        }
    }

    #[test]
    fn vertical_arrow_classes() {
        let x = vertical_arrow();
        assert_eq!(h_bc(&x, 0, 1).unwrap(), 1);
        assert_eq!(h_bc(&x, 0, 0).unwrap(), 0);
        assert_eq!(h_aeppli(&x, 0, 0).unwrap(), 1);
        assert_eq!(h_aeppli(&x, 0, 1).unwrap(), 0);
        assert_eq!(h_line(&x, LineFlavor::Dolbeault, 0, 0).unwrap(), 0);
        assert_eq!(h_line(&x, LineFlavor::Del, 0, 0).unwrap(), 1);
    }

    #[test]
    fn table_totals() {
        let t = BidegreeTable(vec![vec![1, 2], vec![3, 4]]);
        assert_eq!(t.totals(), vec![1, 5, 4]);
        assert_eq!(t.get(-1, 0), 0);
        assert_eq!(t.transposed().get(0, 1), 3);
    }
}
