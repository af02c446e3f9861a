//! Lie algebras given by structure constants, and the stabilizer
//! computations that depend only on the algebra and a covector.
//!
//! Conventions: `[e_i, e_j] = sum_k c[i][j][k] e_k`, and the coadjoint
//! operator satisfies `<ad*_x l, y> = <l, [x, y]>` with no extra sign.

use num::Zero;

use crate::error::{Error, Result};
use crate::exactlin::{
    combine, dot, int, unit_vec, zero_vec, BilinearForm, Matrix, Scalar, Subspace,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    c: Vec<Scalar>,
}

impl LieAlgebra {
    /// Validates antisymmetry and the Jacobi identity on all basis triples.
    pub fn new(dim: usize, c: Vec<Scalar>) -> Result<Self> {
        if c.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch {
                context: "structure constants",
                expected: dim * dim * dim,
                got: c.len(),
            });
        }
        let l = LieAlgebra { dim, c };
        l.check_antisymmetry()?;
        l.check_jacobi()?;
        Ok(l)
    }

    /// Builds from a bracket table: each entry `(i, j, k, v)` sets
    /// `c[i][j][k] = v` and `c[j][i][k] = -v`.
    pub fn from_brackets(dim: usize, entries: &[(usize, usize, usize, Scalar)]) -> Result<Self> {
        let mut c = vec![Scalar::zero(); dim * dim * dim];
        for (i, j, k, v) in entries {
            c[(i * dim + j) * dim + k] = v.clone();
            c[(j * dim + i) * dim + k] = -v.clone();
        }
        Self::new(dim, c)
    }

    /// so(3) with `[e_i, e_j] = e_i x e_j`.
    pub fn so3() -> Self {
        Self::from_brackets(3, &[(0, 1, 2, int(1)), (1, 2, 0, int(1)), (2, 0, 1, int(1))])
            .expect("so(3) structure constants are valid")
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra {
            dim,
            c: vec![Scalar::zero(); dim * dim * dim],
        }
    }

    /// `self ⊕ other`, with `self` occupying the first coordinates.
    pub fn direct_sum(&self, other: &LieAlgebra) -> LieAlgebra {
        let n = self.dim + other.dim;
        let mut c = vec![Scalar::zero(); n * n * n];
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    c[(i * n + j) * n + k] = self.constant(i, j, k).clone();
                }
            }
        }
        let o = self.dim;
        for i in 0..other.dim {
            for j in 0..other.dim {
                for k in 0..other.dim {
                    c[((o + i) * n + o + j) * n + o + k] = other.constant(i, j, k).clone();
                }
            }
        }
        LieAlgebra { dim: n, c }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.c[(i * self.dim + j) * self.dim + k]
    }

    pub fn constants(&self) -> &[Scalar] {
        &self.c
    }

    fn check_antisymmetry(&self) -> Result<()> {
        let n = self.dim;
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    if *self.constant(i, j, k) != -self.constant(j, i, k).clone() {
                        return Err(Error::NotAntisymmetric { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    fn check_jacobi(&self) -> Result<()> {
        let n = self.dim;
        let basis: Vec<Vec<Scalar>> = (0..n).map(|i| unit_vec(n, i)).collect();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (x, y, z) = (&basis[i], &basis[j], &basis[k]);
                    let t1 = self.bracket(&self.bracket(x, y), z);
                    let t2 = self.bracket(&self.bracket(y, z), x);
                    let t3 = self.bracket(&self.bracket(z, x), y);
                    if t1.iter().zip(&t2).zip(&t3).any(|((a, b), c)| !(a + b + c).is_zero()) {
                        return Err(Error::JacobiViolation { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim;
        assert_eq!(x.len(), n);
        assert_eq!(y.len(), n);
        let mut out = zero_vec(n);
        for i in (0..n).filter(|&i| !x[i].is_zero()) {
            for j in (0..n).filter(|&j| !y[j].is_zero()) {
                let xy = &x[i] * &y[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.constant(i, j, k);
                    if !c.is_zero() {
                        *o += &xy * c;
                    }
                }
            }
        }
        out
    }

    /// Matrix of `y -> [x, y]`.
    pub fn ad_matrix(&self, x: &[Scalar]) -> Matrix {
        let n = self.dim;
        let cols: Vec<Vec<Scalar>> = (0..n).map(|j| self.bracket(x, &unit_vec(n, j))).collect();
        Matrix::from_columns(n, &cols)
    }

    /// Matrix of `l -> ad*_x l` on covector coordinates (the transpose of
    /// `ad_matrix`).
    pub fn coad_matrix(&self, x: &[Scalar]) -> Matrix {
        self.ad_matrix(x).transpose()
    }

    pub fn coad(&self, x: &[Scalar], l: &Covector) -> Covector {
        Covector(self.coad_matrix(x).mul_vec(l.coords()))
    }

    /// Closure check; the error names the first offending basis pair.
    pub fn check_subalgebra(&self, s: &Subspace) -> Result<()> {
        let vs = s.vectors();
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                if !s.contains_vector(&self.bracket(&vs[i], &vs[j])) {
                    return Err(Error::NotSubalgebra(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn is_subalgebra(&self, s: &Subspace) -> bool {
        self.check_subalgebra(s).is_ok()
    }

    pub fn center(&self) -> Subspace {
        let n = self.dim;
        let mut rows = Vec::new();
        for j in 0..n {
            rows.extend(self.ad_matrix(&unit_vec(n, j)).row_vectors());
        }
        Matrix::from_rows(n, &rows).kernel()
    }

    /// `g_mu = {x : ad*_x mu = 0}`.
    pub fn stabilizer_of_momentum(&self, mu: &Covector) -> Subspace {
        let n = self.dim;
        let cols: Vec<Vec<Scalar>> = (0..n)
            .map(|i| self.coad(&unit_vec(n, i), mu).0)
            .collect();
        Matrix::from_columns(n, &cols).kernel()
    }

    /// `h^{⊥mu} = {x : <mu, [x, eta]> = 0 for all eta in h}`.
    pub fn h_perp_mu(&self, h: &Subspace, mu: &Covector) -> Result<Subspace> {
        self.check_subalgebra(h)?;
        let n = self.dim;
        let rows: Vec<Vec<Scalar>> = h
            .vectors()
            .iter()
            .map(|eta| {
                (0..n)
                    .map(|i| mu.pair(&self.bracket(&unit_vec(n, i), eta)))
                    .collect()
            })
            .collect();
        Ok(Matrix::from_rows(n, &rows).kernel())
    }

    /// `h_alpha = h ∩ h^{⊥mu}`, the stabilizer in `h` of `alpha = mu|_h`.
    pub fn h_alpha(&self, h: &Subspace, mu: &Covector) -> Result<Subspace> {
        let out = h.intersect(&self.h_perp_mu(h, mu)?)?;
        debug_assert_eq!(out, self.stabilizer_of_restriction(h, mu));
        Ok(out)
    }

    /// Stabilizer of `mu|_h` computed inside `h` coordinates.
    pub fn stabilizer_of_restriction(&self, h: &Subspace, mu: &Covector) -> Subspace {
        let hv = h.vectors();
        let k = hv.len();
        let m = Matrix::from_fn(k, k, |r, j| mu.pair(&self.bracket(&hv[j], &hv[r])));
        Subspace::from_spanning(
            self.dim,
            m.kernel().vectors().iter().map(|c| combine(self.dim, c, &hv)),
        )
    }

    /// `Psi(x, y) = <mu, [x, y]>`.
    pub fn chu_form(&self, mu: &Covector) -> BilinearForm {
        let n = self.dim;
        BilinearForm::new(Matrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| &mu.0[k] * self.constant(i, j, k)).sum()
        }))
    }

    /// `B(x, y) = tr(ad_x ad_y)`.
    pub fn killing_form(&self) -> BilinearForm {
        let n = self.dim;
        let ads: Vec<Matrix> = (0..n).map(|i| self.ad_matrix(&unit_vec(n, i))).collect();
        BilinearForm::new(Matrix::from_fn(n, n, |i, j| {
            let p = ads[i].mul(&ads[j]);
            (0..n).map(|k| p.get(k, k).clone()).sum()
        }))
    }
}

/// An element of the dual `g*`, in the dual basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Covector(pub Vec<Scalar>);

impl Covector {
    pub fn zero(n: usize) -> Self {
        Covector(zero_vec(n))
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn pair(&self, x: &[Scalar]) -> Scalar {
        dot(&self.0, x)
    }

    /// Restriction to a subspace, in the coordinates dual to its basis.
    pub fn restrict(&self, s: &Subspace) -> Vec<Scalar> {
        s.vectors().iter().map(|v| self.pair(v)).collect()
    }
}

/// A symmetric positive definite form on `g` used to pick complements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InnerProduct(BilinearForm);

impl InnerProduct {
    pub fn new(gram: Matrix) -> Result<Self> {
        let f = BilinearForm::new(gram);
        f.check_positive_definite()?;
        Ok(InnerProduct(f))
    }

    pub fn identity(n: usize) -> Self {
        InnerProduct(BilinearForm::new(Matrix::identity(n)))
    }

    /// `-B` for the Killing form `B`; only positive definite for compact
    /// semisimple algebras.
    pub fn neg_killing(l: &LieAlgebra) -> Result<Self> {
        Self::new(l.killing_form().gram().neg())
    }

    pub fn form(&self) -> &BilinearForm {
        &self.0
    }

    /// `<[eta, x], y> + <x, [eta, y]> = 0` for all basis `x, y`. Returns the
    /// first failing `(x, y)` index pair.
    pub fn ad_invariance_failure(&self, l: &LieAlgebra, eta: &[Scalar]) -> Option<(usize, usize)> {
        let ad = l.ad_matrix(eta);
        let g = self.0.gram();
        // (ad^T G + G ad) must vanish
        let s = ad.transpose().mul(g).add(&g.mul(&ad));
        let n = l.dim();
        for i in 0..n {
            for j in 0..n {
                if !s.get(i, j).is_zero() {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

/// `-ad*_x mu`, the infinitesimal coadjoint generator at `mu`.
pub fn orbit_tangent(l: &LieAlgebra, x: &[Scalar], mu: &Covector) -> Covector {
    let mut c = l.coad(x, mu);
    for v in c.0.iter_mut() {
        *v = -v.clone();
    }
    c
}
