use std::fmt;

use num::Zero;

use super::{combine, BilinearForm, Matrix, Scalar};
use crate::error::{Error, Result};

/// A linear subspace of `F^n` held by its canonical basis.
///
/// The basis columns are the nonzero rows of the reduced row echelon form of
/// any spanning set, so two `Subspace` values are equal exactly when they
/// describe the same space.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn from_spanning(ambient_dim: usize, vectors: impl IntoIterator<Item = Vec<Scalar>>) -> Self {
        let rows: Vec<Vec<Scalar>> = vectors.into_iter().collect();
        let (r, pivots) = Matrix::from_rows(ambient_dim, &rows).rref();
        let basis = Matrix::from_fn(ambient_dim, pivots.len(), |i, j| r.get(j, i).clone());
        Subspace {
            ambient_dim,
            basis,
            pivots,
        }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self::from_spanning(ambient_dim, Vec::new())
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::from_spanning(
            ambient_dim,
            (0..ambient_dim).map(|i| super::unit_vec(ambient_dim, i)),
        )
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(ambient_dim: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        Self::from_spanning(
            ambient_dim,
            indices.into_iter().map(|i| super::unit_vec(ambient_dim, i)),
        )
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Canonical basis, one column per basis vector.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn vectors(&self) -> Vec<Vec<Scalar>> {
        self.basis.column_vectors()
    }

    pub fn vector(&self, i: usize) -> Vec<Scalar> {
        self.basis.column(i)
    }

    /// Coefficients of `v` in the canonical basis, or `None` if `v` is not in
    /// the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(v.len(), self.ambient_dim, "coordinates: ambient mismatch");
        let c: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let back = combine(self.ambient_dim, &c, &self.vectors());
        (back.as_slice() == v).then_some(c)
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).is_some()
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> bool {
        other.ambient_dim == self.ambient_dim
            && other.vectors().iter().all(|v| self.contains_vector(v))
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::AmbientMismatch(self.ambient_dim, other.ambient_dim));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(Self::from_spanning(
            self.ambient_dim,
            self.vectors().into_iter().chain(other.vectors()),
        ))
    }

    pub fn sum_all(ambient_dim: usize, parts: &[&Subspace]) -> Result<Subspace> {
        let mut vecs = Vec::new();
        for p in parts {
            if p.ambient_dim != ambient_dim {
                return Err(Error::AmbientMismatch(ambient_dim, p.ambient_dim));
            }
            vecs.extend(p.vectors());
        }
        Ok(Self::from_spanning(ambient_dim, vecs))
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.ambient_dim));
        }
        // [U | -V] (c, d) = 0  =>  U c lies in both.
        let joint = self.basis.hstack(&other.basis.neg());
        let u = self.vectors();
        let k = joint.kernel();
        Ok(Self::from_spanning(
            self.ambient_dim,
            k.vectors()
                .iter()
                .map(|c| combine(self.ambient_dim, &c[..self.dim()], &u)),
        ))
    }

    /// True iff the sum of the parts is direct.
    pub fn is_direct_sum(parts: &[&Subspace]) -> Result<bool> {
        let Some(first) = parts.first() else {
            return Ok(true);
        };
        let total = Self::sum_all(first.ambient_dim, parts)?;
        Ok(parts.iter().map(|p| p.dim()).sum::<usize>() == total.dim())
    }

    /// True iff the parts form a direct sum equal to `whole`.
    pub fn is_direct_decomposition(whole: &Subspace, parts: &[&Subspace]) -> Result<bool> {
        let total = Self::sum_all(whole.ambient_dim, parts)?;
        Ok(Self::is_direct_sum(parts)? && total == *whole)
    }

    /// The `ip`-orthogonal complement of `self` inside `w`.
    pub fn orth_complement_in(&self, w: &Subspace, ip: &BilinearForm) -> Result<Subspace> {
        self.check_ambient(w)?;
        if ip.ambient_dim() != self.ambient_dim {
            return Err(Error::AmbientMismatch(self.ambient_dim, ip.ambient_dim()));
        }
        ip.check_positive_definite()?;
        if !w.contains(self) {
            return Err(Error::NotContained);
        }
        let out = self.form_orthogonal_in(w, ip)?;
        debug_assert!(Subspace::is_direct_decomposition(w, &[self, &out]).unwrap_or(false));
        Ok(out)
    }

    /// `{x in w : form(u, x) = 0 for all u in self}` for an arbitrary form.
    pub fn form_orthogonal_in(&self, w: &Subspace, form: &BilinearForm) -> Result<Subspace> {
        self.check_ambient(w)?;
        if self.is_zero() {
            return Ok(w.clone());
        }
        // rows: u_i^T G W
        let constraints = self
            .basis
            .transpose()
            .mul(form.gram())
            .mul(&w.basis);
        let wv = w.vectors();
        Ok(Self::from_spanning(
            self.ambient_dim,
            constraints
                .kernel()
                .vectors()
                .iter()
                .map(|c| combine(self.ambient_dim, c, &wv)),
        ))
    }

    /// Image of the subspace under the linear map `a`.
    pub fn map(&self, a: &Matrix) -> Result<Subspace> {
        if a.cols() != self.ambient_dim {
            return Err(Error::AmbientMismatch(a.cols(), self.ambient_dim));
        }
        Ok(Self::from_spanning(
            a.rows(),
            self.vectors().iter().map(|v| a.mul_vec(v)),
        ))
    }

    /// True iff `a` maps the subspace into itself.
    pub fn is_invariant_under(&self, a: &Matrix) -> bool {
        self.vectors()
            .iter()
            .all(|v| self.contains_vector(&a.mul_vec(v)))
    }

    pub fn is_isotropic(&self, form: &BilinearForm) -> bool {
        form.gram_on(self).is_zero()
    }

    /// Nondegenerate restriction of `form`.
    pub fn is_symplectic(&self, form: &BilinearForm) -> bool {
        let g = form.gram_on(self);
        g.is_antisymmetric() && !g.determinant().is_zero()
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}) ", self.dim(), self.ambient_dim)?;
        f.debug_list()
            .entries(self.vectors().iter().map(|v| {
                v.iter().map(super::format_scalar).collect::<Vec<_>>()
            }))
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::super::{frac, int, unit_vec};
    use super::*;

    fn e(n: usize, i: usize) -> Vec<Scalar> {
        unit_vec(n, i)
    }

    #[test]
    fn orth_complement_standard() {
        let u = Subspace::from_spanning(2, vec![e(2, 0)]);
        let ip = BilinearForm::new(Matrix::identity(2));
        let c = u.orth_complement_in(&Subspace::full(2), &ip).unwrap();
        assert_eq!(c, Subspace::from_spanning(2, vec![e(2, 1)]));
    }

    #[test]
    fn orth_complement_of_whole_is_zero() {
        let w = Subspace::full(3);
        let ip = BilinearForm::new(Matrix::identity(3));
        assert_eq!(w.orth_complement_in(&w, &ip).unwrap().dim(), 0);
    }

    #[test]
    fn orth_complement_weighted() {
        // <(1,1),(x,y)> = x + 2y
        let u = Subspace::from_spanning(2, vec![vec![int(1), int(1)]]);
        let ip = BilinearForm::new(Matrix::from_i64(2, 2, &[1, 0, 0, 2]));
        let c = u.orth_complement_in(&Subspace::full(2), &ip).unwrap();
        assert_eq!(c, Subspace::from_spanning(2, vec![vec![int(2), int(-1)]]));
        assert_eq!(c.vector(0), vec![int(1), frac(-1, 2)]);
    }

    #[test]
    fn orth_complement_errors() {
        let u = Subspace::from_spanning(2, vec![e(2, 0)]);
        let w = Subspace::from_spanning(2, vec![e(2, 1)]);
        let ip = BilinearForm::new(Matrix::identity(2));
        assert_eq!(u.orth_complement_in(&w, &ip), Err(Error::NotContained));
        let bad = BilinearForm::new(Matrix::from_i64(2, 2, &[1, 2, 2, 1]));
        assert_eq!(
            u.orth_complement_in(&Subspace::full(2), &bad),
            Err(Error::NotPositiveDefinite(2))
        );
    }

    #[test]
    fn sums_and_intersections() {
        let a = Subspace::from_spanning(3, vec![e(3, 0)]);
        let b = Subspace::from_spanning(3, vec![e(3, 1)]);
        assert!(Subspace::is_direct_sum(&[&a, &b]).unwrap());
        assert_eq!(a.sum(&b).unwrap(), Subspace::coordinate(3, [0, 1]));

        let c = Subspace::from_spanning(3, vec![vec![int(1), int(1), int(0)]]);
        assert_eq!(a.intersect(&c).unwrap().dim(), 0);
        assert!(Subspace::is_direct_sum(&[&a, &c]).unwrap());

        let d = Subspace::coordinate(3, [0, 1]);
        let f = Subspace::coordinate(3, [1, 2]);
        assert_eq!(d.intersect(&f).unwrap(), b);
        assert!(!Subspace::is_direct_sum(&[&d, &f]).unwrap());
    }

    #[test]
    fn ambient_mismatch_is_reported() {
        let a = Subspace::full(2);
        let b = Subspace::full(3);
        assert_eq!(a.sum(&b), Err(Error::AmbientMismatch(2, 3)));
        assert_eq!(a.intersect(&b), Err(Error::AmbientMismatch(2, 3)));
        assert!(Subspace::is_direct_sum(&[&a, &b]).is_err());
    }

    #[test]
    fn coordinates_roundtrip() {
        let s = Subspace::from_spanning(
            3,
            vec![vec![int(1), int(2), int(3)], vec![int(0), int(1), int(5)]],
        );
        let v = vec![int(2), int(7), int(21)];
        let c = s.coordinates(&v).unwrap();
        assert_eq!(combine(3, &c, &s.vectors()), v);
        assert!(s.coordinates(&e(3, 2)).is_none());
    }

    #[test]
    fn canonical_form_is_basis_independent() {
        let a = Subspace::from_spanning(3, vec![vec![int(1), int(1), int(0)], e(3, 2)]);
        let b = Subspace::from_spanning(
            3,
            vec![vec![int(2), int(2), int(3)], vec![int(-1), int(-1), int(1)]],
        );
        assert_eq!(a, b);
    }
}
