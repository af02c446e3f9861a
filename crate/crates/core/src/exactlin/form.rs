use num::{Signed, Zero};

use super::{dot, Matrix, Scalar, Subspace};
use crate::error::{Error, Result};

/// A bilinear form on `F^n` given by its Gram matrix in the standard basis.
///
/// Symmetry or antisymmetry is never assumed; callers query it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearForm {
    gram: Matrix,
}

impl BilinearForm {
    pub fn new(gram: Matrix) -> Self {
        assert!(gram.is_square(), "bilinear form needs a square Gram matrix");
        BilinearForm { gram }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(Matrix::zeros(n, n))
    }

    pub fn ambient_dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn eval(&self, u: &[Scalar], v: &[Scalar]) -> Scalar {
        dot(u, &self.gram.mul_vec(v))
    }

    pub fn is_symmetric(&self) -> bool {
        self.gram.is_symmetric()
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.gram.is_antisymmetric()
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.gram.determinant().is_zero()
    }

    /// Symmetric and every leading principal minor strictly positive.
    pub fn check_positive_definite(&self) -> Result<()> {
        if let Some((i, j)) = self.gram.first_asymmetry() {
            return Err(Error::NotSymmetric(i, j));
        }
        for k in 1..=self.ambient_dim() {
            if !self.gram.submatrix(0..k, 0..k).determinant().is_positive() {
                return Err(Error::NotPositiveDefinite(k));
            }
        }
        Ok(())
    }

    pub fn is_positive_definite(&self) -> bool {
        self.check_positive_definite().is_ok()
    }

    /// Gram matrix on the canonical basis of `u`.
    pub fn gram_on(&self, u: &Subspace) -> Matrix {
        self.gram_between_vectors(&u.vectors(), &u.vectors())
    }

    /// Gram matrix on an explicit (ordered) list of vectors.
    pub fn gram_on_vectors(&self, vs: &[Vec<Scalar>]) -> Matrix {
        self.gram_between_vectors(vs, vs)
    }

    /// `(i, j) -> form(left[i], right[j])`.
    pub fn gram_between_vectors(&self, left: &[Vec<Scalar>], right: &[Vec<Scalar>]) -> Matrix {
        let gr: Vec<Vec<Scalar>> = right.iter().map(|v| self.gram.mul_vec(v)).collect();
        Matrix::from_fn(left.len(), right.len(), |i, j| dot(&left[i], &gr[j]))
    }

    pub fn vanishes_between(&self, u: &Subspace, v: &Subspace) -> bool {
        self.gram_between_vectors(&u.vectors(), &v.vectors()).is_zero()
    }

    /// Left radical `{u : form(u, .) = 0}`.
    pub fn radical(&self) -> Subspace {
        self.gram.transpose().kernel()
    }

    /// Pullback along the linear map whose columns are `basis` vectors.
    pub fn restricted(&self, basis: &[Vec<Scalar>]) -> BilinearForm {
        BilinearForm::new(self.gram_on_vectors(basis))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{int, unit_vec};
    use super::*;

    fn standard_symplectic(n: usize) -> BilinearForm {
        // pairs (e_{2k}, e_{2k+1}) with w(e_{2k}, e_{2k+1}) = 1
        BilinearForm::new(Matrix::from_fn(2 * n, 2 * n, |i, j| {
            if i % 2 == 0 && j == i + 1 {
                int(1)
            } else if j % 2 == 0 && i == j + 1 {
                int(-1)
            } else {
                int(0)
            }
        }))
    }

    #[test]
    fn gram_on_zero_subspace_is_empty() {
        let g = standard_symplectic(2).gram_on(&Subspace::zero(4));
        assert_eq!((g.rows(), g.cols()), (0, 0));
    }

    #[test]
    fn gram_on_symplectic_pair() {
        // w = e1^e3 + e2^e4 in R^4 (0-based: e0^e2 + e1^e3)
        let w = BilinearForm::new(Matrix::from_i64(
            4,
            4,
            &[0, 0, 1, 0, 0, 0, 0, 1, -1, 0, 0, 0, 0, -1, 0, 0],
        ));
        let u = Subspace::coordinate(4, [0, 2]);
        assert_eq!(w.gram_on(&u), Matrix::from_i64(2, 2, &[0, 1, -1, 0]));
    }

    #[test]
    fn orthonormal_basis_gives_identity() {
        let ip = BilinearForm::new(Matrix::identity(3));
        let all = Subspace::full(3);
        assert_eq!(ip.gram_on(&all), Matrix::identity(3));
        assert!(ip.is_positive_definite());
    }

    #[test]
    fn antisymmetric_restriction_stays_antisymmetric() {
        let w = standard_symplectic(2);
        let u = Subspace::from_spanning(4, vec![vec![int(1), int(2), int(0), int(1)], unit_vec(4, 1)]);
        assert!(w.gram_on(&u).is_antisymmetric());
    }

    #[test]
    fn radical_of_degenerate_form() {
        let f = BilinearForm::new(Matrix::from_i64(3, 3, &[0, 1, 0, -1, 0, 0, 0, 0, 0]));
        assert_eq!(f.radical(), Subspace::coordinate(3, [2]));
        assert!(!f.is_nondegenerate());
    }
}
