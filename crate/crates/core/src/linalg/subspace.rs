use std::fmt;

use crate::error::LinalgError;
use crate::scalar::Field;

use super::{kernel_basis, rref_rows, Matrix};

/// A subspace of `F^ambient`, stored as the rows of its reduced row-echelon
/// basis. The reduced form is unique, so two subspaces are equal exactly when
/// their representations are.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace<F> {
    ambient: usize,
    basis: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    /// Span of the given vectors, each of length `ambient`.
    pub fn from_rows<I>(ambient: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = Vec<F>>,
    {
        let mut rows: Vec<Vec<F>> = rows.into_iter().collect();
        for r in &rows {
            assert_eq!(r.len(), ambient, "vector length does not match ambient dimension");
        }
        let pivots = rref_rows(&mut rows, ambient);
        Subspace {
            ambient,
            basis: Matrix::from_rows(ambient, rows),
            pivots,
        }
    }

    /// Span of the rows of `m`.
    pub fn row_space(m: &Matrix<F>) -> Self {
        Subspace::from_rows(m.ncols(), m.to_rows())
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn is_zero(&self) -> bool {
        self.pivots.is_empty()
    }

    /// Basis vectors as rows, in reduced row-echelon form.
    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` modulo the subspace; the result is zero iff `v` lies in it.
    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        let mut v = v.to_vec();
        for (row, &c) in self.basis.rows_iter().zip(&self.pivots) {
            if v[c].is_zero() {
                continue;
            }
            let factor = v[c].clone();
            for (x, b) in v.iter_mut().zip(row) {
                if !b.is_zero() {
                    *x -= &factor.mul_ref(b);
                }
            }
        }
        v
    }

    pub fn contains_vector(&self, v: &[F]) -> bool {
        assert_eq!(v.len(), self.ambient);
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// `other ⊆ self`. Subspaces of different ambient spaces are never nested.
    pub fn contains(&self, other: &Subspace<F>) -> bool {
        self.ambient == other.ambient
            && other.dim() <= self.dim()
            && other.basis.rows_iter().all(|v| self.contains_vector(v))
    }

    fn check_ambient(&self, other: &Subspace<F>, op: &'static str) -> Result<(), LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::DimensionMismatch {
                op,
                left: self.ambient,
                right: other.ambient,
            });
        }
        Ok(())
    }

    /// Smallest subspace containing both.
    pub fn sum(&self, other: &Subspace<F>) -> Result<Subspace<F>, LinalgError> {
        self.check_ambient(other, "subspace_sum")?;
        if other.is_zero() || self.contains(other) {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        Ok(Subspace::from_rows(
            self.ambient,
            self.basis.to_rows().into_iter().chain(other.basis.to_rows()),
        ))
    }

    /// Exact intersection: solves `x·U = y·V` for coefficient vectors and maps
    /// the solutions back through `U`.
    pub fn intersect(&self, other: &Subspace<F>) -> Result<Subspace<F>, LinalgError> {
        self.check_ambient(other, "subspace_intersect")?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient));
        }
        if self.contains(other) {
            return Ok(other.clone());
        }
        if other.contains(self) {
            return Ok(self.clone());
        }
        let a = self.dim();
        // Columns of `system` are the generators u_1..u_a, -v_1..-v_b.
        let stacked = self.basis.vstack(&(-&other.basis));
        let coefficients = kernel_basis(&stacked.transpose());
        let common = coefficients.basis.rows_iter().map(|k| {
            let mut w = vec![F::zero(); self.ambient];
            for (coef, u) in k[..a].iter().zip(self.basis.rows_iter()) {
                if coef.is_zero() {
                    continue;
                }
                for (x, y) in w.iter_mut().zip(u) {
                    if !y.is_zero() {
                        *x += &coef.mul_ref(y);
                    }
                }
            }
            w
        });
        Ok(Subspace::from_rows(self.ambient, common))
    }

    /// Image of the subspace under `m` (a map from `F^ambient`).
    pub fn map(&self, m: &Matrix<F>) -> Subspace<F> {
        assert_eq!(m.ncols(), self.ambient, "map: domain mismatch");
        Subspace::from_rows(m.nrows(), self.basis.rows_iter().map(|v| m.mul_vec(v)))
    }

    /// Includes the subspace into `F^ambient` as the coordinate block starting
    /// at `offset`.
    pub fn embed(&self, offset: usize, ambient: usize) -> Subspace<F> {
        assert!(offset + self.ambient <= ambient, "embed: block out of range");
        let rows = self.basis.rows_iter().map(|v| {
            let mut w = vec![F::zero(); ambient];
            w[offset..offset + self.ambient].clone_from_slice(v);
            w
        });
        Subspace::from_rows(ambient, rows)
    }

    /// Vectors of the subspace supported in the block `[offset, offset+len)`,
    /// expressed in block coordinates.
    pub fn restrict_to_block(&self, offset: usize, len: usize) -> Subspace<F> {
        let block = Subspace::full(len).embed(offset, self.ambient);
        let common = self.intersect(&block).expect("same ambient");
        Subspace::from_rows(
            len,
            common
                .basis
                .rows_iter()
                .map(|v| v[offset..offset + len].to_vec()),
        )
    }
}

impl<F: fmt::Debug> fmt::Debug for Subspace<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}: {:?})", self.pivots.len(), self.ambient, self.basis)
    }
}
