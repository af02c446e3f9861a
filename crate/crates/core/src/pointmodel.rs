//! The tangent space at the base point of the normal form, in coordinates.
//!
//! A model vector is a flat rational vector laid out as
//! `[u_m | u_n | rho | nu]`: `u = (u_m, u_n)` are coordinates of a generator
//! in the ordered bases of `m` and `n` (modelling `g/g_m`), `rho` lives in
//! `m*` (dual basis) and `nu` in the symplectic slice `N1`.

use std::ops::Range;

use num::Zero;

use crate::error::{Error, Result};
use crate::exactlin::{combine, dot, zero_vec, BilinearForm, Matrix, Scalar, Subspace};
use crate::liecore::Covector;
use crate::splitting::{SplittingChain, ProblemInstance};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentVector {
    pub u: Vec<Scalar>,
    pub rho: Vec<Scalar>,
    pub nu: Vec<Scalar>,
}

impl TangentVector {
    pub fn flatten(&self) -> Vec<Scalar> {
        let mut v = self.u.clone();
        v.extend(self.rho.iter().cloned());
        v.extend(self.nu.iter().cloned());
        v
    }
}

#[derive(Clone, Debug)]
pub struct TangentModel {
    inst: ProblemInstance,
    chain: SplittingChain,
    m_basis: Vec<Vec<Scalar>>,
    n_basis: Vec<Vec<Scalar>>,
    /// Inverse of `[g_m generators | m basis | n basis]`.
    split_inv: Matrix,
    omega: BilinearForm,
}

pub fn build_model(chain: &SplittingChain, inst: &ProblemInstance) -> Result<TangentModel> {
    TangentModel::new(chain.clone(), inst.clone())
}

impl TangentModel {
    pub fn new(chain: SplittingChain, inst: ProblemInstance) -> Result<Self> {
        let n = inst.dim();
        let m_basis = chain.m_basis();
        let n_basis = chain.n_basis();
        let mut cols: Vec<Vec<Scalar>> = inst.gm_generators().to_vec();
        cols.extend(m_basis.iter().cloned());
        cols.extend(n_basis.iter().cloned());
        if cols.len() != n {
            return Err(Error::ChainInconsistent {
                index: 7,
                what: format!("g_m + m + n has {} basis vectors in dimension {n}", cols.len()),
            });
        }
        let split_inv = Matrix::from_columns(n, &cols)
            .inverse()
            .ok_or_else(|| Error::ChainInconsistent {
                index: 7,
                what: "g_m + m + n is not a direct sum".into(),
            })?;
        let mut model = TangentModel {
            inst,
            chain,
            m_basis,
            n_basis,
            split_inv,
            omega: BilinearForm::zero(0),
        };
        let gram = model.assemble_omega();
        if gram.determinant().is_zero() {
            return Err(Error::DegenerateModel);
        }
        model.omega = BilinearForm::new(gram);
        Ok(model)
    }

    fn assemble_omega(&self) -> Matrix {
        let d = self.total_dim();
        let (dm, du) = (self.dim_m(), self.dim_u());
        let l = self.inst.algebra();
        let mu = self.inst.mu();
        let gens: Vec<Vec<Scalar>> = self.m_basis.iter().chain(&self.n_basis).cloned().collect();
        let mut g = Matrix::zeros(d, d);
        for i in 0..du {
            for j in 0..du {
                g.set(i, j, mu.pair(&l.bracket(&gens[i], &gens[j])));
            }
        }
        // rho2 . u1_m - rho1 . u2_m
        for i in 0..dm {
            g.set(i, du + i, Scalar::from_integer(1.into()));
            g.set(du + i, i, Scalar::from_integer((-1).into()));
        }
        let w = self.inst.slice().omega().gram();
        let off = self.nu_range().start;
        for i in 0..self.dim_slice() {
            for j in 0..self.dim_slice() {
                g.set(off + i, off + j, w.get(i, j).clone());
            }
        }
        g
    }

    pub fn instance(&self) -> &ProblemInstance {
        &self.inst
    }

    pub fn chain(&self) -> &SplittingChain {
        &self.chain
    }

    pub fn omega(&self) -> &BilinearForm {
        &self.omega
    }

    pub fn m_basis(&self) -> &[Vec<Scalar>] {
        &self.m_basis
    }

    pub fn n_basis(&self) -> &[Vec<Scalar>] {
        &self.n_basis
    }

    pub fn dim_m(&self) -> usize {
        self.m_basis.len()
    }

    pub fn dim_n(&self) -> usize {
        self.n_basis.len()
    }

    pub fn dim_u(&self) -> usize {
        self.dim_m() + self.dim_n()
    }

    pub fn dim_slice(&self) -> usize {
        self.inst.slice().dim()
    }

    pub fn total_dim(&self) -> usize {
        self.dim_u() + self.dim_m() + self.dim_slice()
    }

    pub fn u_m_range(&self) -> Range<usize> {
        0..self.dim_m()
    }

    pub fn u_n_range(&self) -> Range<usize> {
        self.dim_m()..self.dim_u()
    }

    pub fn rho_range(&self) -> Range<usize> {
        self.dim_u()..self.dim_u() + self.dim_m()
    }

    pub fn nu_range(&self) -> Range<usize> {
        self.dim_u() + self.dim_m()..self.total_dim()
    }

    pub fn split(&self, v: &[Scalar]) -> TangentVector {
        assert_eq!(v.len(), self.total_dim());
        TangentVector {
            u: v[0..self.dim_u()].to_vec(),
            rho: v[self.rho_range()].to_vec(),
            nu: v[self.nu_range()].to_vec(),
        }
    }

    /// The generator in `g` with coordinates `u` in `m ⊕ n`.
    pub fn lift(&self, u: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(u.len(), self.dim_u());
        let n = self.inst.dim();
        let (um, un) = u.split_at(self.dim_m());
        crate::exactlin::add_vec(&combine(n, um, &self.m_basis), &combine(n, un, &self.n_basis))
    }

    /// Coordinates of `x` in `g_m ⊕ m ⊕ n`, as `(gm, m, n)` slices of one vector.
    pub fn split_coordinates(&self, x: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>, Vec<Scalar>) {
        let c = self.split_inv.mul_vec(x);
        let k = self.inst.gm_generators().len();
        let dm = self.dim_m();
        (c[..k].to_vec(), c[k..k + dm].to_vec(), c[k + dm..].to_vec())
    }

    /// Flat model vector for a generator `x ∈ m ⊕ n` (the `g_m` part is dropped).
    pub fn generator_vector(&self, x: &[Scalar]) -> Vec<Scalar> {
        let tv = self.inf_action(x);
        tv.flatten()
    }

    /// `x_M(m)`: the `m ⊕ n` component of `x` along `g_m`.
    pub fn inf_action(&self, x: &[Scalar]) -> TangentVector {
        let (_, mut u, un) = self.split_coordinates(x);
        u.extend(un);
        TangentVector {
            u,
            rho: zero_vec(self.dim_m()),
            nu: zero_vec(self.dim_slice()),
        }
    }

    /// `iota(rho)`: zero extension of `rho ∈ m*` to `g*` (vanishing on `g_m ⊕ n`).
    pub fn embed_rho(&self, rho: &[Scalar]) -> Covector {
        let k = self.inst.gm_generators().len();
        let n = self.inst.dim();
        Covector(
            (0..n)
                .map(|j| {
                    rho.iter()
                        .enumerate()
                        .fold(Scalar::zero(), |acc, (i, r)| acc + r * self.split_inv.get(k + i, j))
                })
                .collect(),
        )
    }

    /// Zero extension of a covector on `g_m` (in the dual of the given
    /// generators) to `g*`.
    pub fn embed_gm_dual(&self, c: &[Scalar]) -> Covector {
        let n = self.inst.dim();
        Covector(
            (0..n)
                .map(|j| {
                    c.iter()
                        .enumerate()
                        .fold(Scalar::zero(), |acc, (i, r)| acc + r * self.split_inv.get(i, j))
                })
                .collect(),
        )
    }

    /// `f(w)` for `w ∈ N0`; also checks `<f(w), y> = omega(y_M, w)` on the `m` basis.
    pub fn f_map(&self, w: &TangentVector) -> Result<Vec<Scalar>> {
        if !crate::exactlin::is_zero_vec(&w.u) || !crate::exactlin::is_zero_vec(&w.nu) {
            return Err(Error::NotInN0);
        }
        let flat = w.flatten();
        for (i, y) in self.m_basis.iter().enumerate() {
            let lhs = self.omega.eval(&self.generator_vector(y), &flat);
            assert_eq!(lhs, w.rho[i], "f contract fails on m basis vector {i}");
        }
        Ok(w.rho.clone())
    }

    /// `DPhi_G(m)` as a `dim g × total_dim` matrix: `(u, rho, nu) -> -ad*_u mu + iota(rho)`.
    pub fn dphi_g(&self) -> Matrix {
        let l = self.inst.algebra();
        let mu = self.inst.mu();
        let n = self.inst.dim();
        let d = self.total_dim();
        let mut cols = Vec::with_capacity(d);
        for k in 0..d {
            let e = crate::exactlin::unit_vec(d, k);
            let tv = self.split(&e);
            let x = self.lift(&tv.u);
            let a = crate::liecore::orbit_tangent(l, &x, mu);
            let r = self.embed_rho(&tv.rho);
            cols.push(crate::exactlin::add_vec(a.coords(), r.coords()));
        }
        Matrix::from_columns(n, &cols)
    }

    /// `DPhi_H(m)`: rows are pairings with the canonical basis of `h`.
    pub fn dphi_h(&self) -> Matrix {
        let h = self.inst.h().basis().transpose();
        h.mul(&self.dphi_g())
    }

    pub fn ker_dphi_g(&self) -> Subspace {
        self.dphi_g().kernel()
    }

    pub fn ker_dphi_h(&self) -> Subspace {
        let d = self.total_dim();
        if self.inst.h().is_zero() {
            return Subspace::full(d);
        }
        self.dphi_h().kernel()
    }

    /// `omega`-orthogonal of the span of `vectors` in the whole model.
    pub fn omega_orthogonal(&self, v: &Subspace) -> Subspace {
        v.form_orthogonal_in(&Subspace::full(self.total_dim()), &self.omega)
            .expect("ambient dimensions agree")
    }

    /// Image of a subspace of `g` under `x -> x_M(m)`.
    pub fn orbit_image(&self, v: &Subspace) -> Subspace {
        Subspace::from_spanning(
            self.total_dim(),
            v.vectors().iter().map(|x| self.generator_vector(x)),
        )
    }

    /// Model subspace spanned by the given coordinate indices.
    pub fn coordinate_block(&self, idx: impl IntoIterator<Item = usize>) -> Subspace {
        Subspace::coordinate(self.total_dim(), idx)
    }

    /// Linear action of `eta = sum c_k x_k` (given generators of `g_m`) on the model.
    pub fn gm_action(&self, coeffs: &[Scalar]) -> Matrix {
        let n = self.inst.dim();
        let l = self.inst.algebra();
        let eta = combine(n, coeffs, self.inst.gm_generators());
        let d = self.total_dim();
        let du = self.dim_u();
        let mut a = Matrix::zeros(d, d);
        let gens: Vec<Vec<Scalar>> = self.m_basis.iter().chain(&self.n_basis).cloned().collect();
        for (j, y) in gens.iter().enumerate() {
            let img = self.inf_action(&l.bracket(&eta, y));
            for (i, v) in img.u.into_iter().enumerate() {
                a.set(i, j, v);
            }
        }
        // (eta . rho)(y_i) = -rho([eta, y_i])
        for j in 0..self.dim_m() {
            let rho = crate::exactlin::unit_vec(self.dim_m(), j);
            let irho = self.embed_rho(&rho);
            for (i, y) in self.m_basis.iter().enumerate() {
                a.set(du + i, du + j, -irho.pair(&l.bracket(&eta, y)));
            }
        }
        let s = self.inst.slice().action_of(coeffs);
        let off = self.nu_range().start;
        for i in 0..self.dim_slice() {
            for j in 0..self.dim_slice() {
                a.set(off + i, off + j, s.get(i, j).clone());
            }
        }
        a
    }

    /// `omega(A v, w) + omega(v, A w) = 0` for every generator of `g_m`.
    pub fn gm_action_is_symplectic(&self) -> bool {
        let k = self.inst.gm_generators().len();
        let g = self.omega.gram();
        (0..k).all(|i| {
            let a = self.gm_action(&crate::exactlin::unit_vec(k, i));
            a.transpose().mul(g).add(&g.mul(&a)).is_zero()
        })
    }

    pub fn pair_rho(&self, rho: &[Scalar], u_m: &[Scalar]) -> Scalar {
        dot(rho, u_m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::exactlin::{int, unit_vec};
    use crate::liecore::{InnerProduct, LieAlgebra};
    use crate::splitting::{build_chain, SliceRep};

    fn model(inst: &ProblemInstance) -> TangentModel {
        build_model(&build_chain(inst).unwrap(), inst).unwrap()
    }

    #[test]
    fn so3_generic_model_dims() {
        // dim g - dim g_m + dim m + dim N1 = 3 - 0 + 1 + 0
        let m = model(&catalog::so3_generic(0));
        assert_eq!(m.total_dim(), 4);
        assert_eq!(m.omega().gram().rank(), 4);
        assert!(m.omega().is_antisymmetric());
        assert_eq!(m.ker_dphi_g().dim(), 1);
        assert_eq!(m.ker_dphi_h().dim(), 3);
    }

    #[test]
    fn so3_generic_with_slice() {
        let m = model(&catalog::so3_generic(4));
        assert_eq!(m.total_dim(), 8);
        assert_eq!(m.ker_dphi_g().dim(), 5);
    }

    #[test]
    fn abelian_model_is_canonical_pairing() {
        let inst = catalog::torus(3, 1, catalog::torus_mu(3)).unwrap();
        let inst = ProblemInstance::new(
            inst.algebra().clone(),
            inst.h().vectors(),
            vec![],
            inst.mu().clone(),
            InnerProduct::identity(3),
            SliceRep::new(SliceRep::standard_omega(2), vec![]).unwrap(),
        )
        .unwrap();
        let m = model(&inst);
        assert_eq!(m.dim_m(), 3);
        assert_eq!(m.dim_n(), 0);
        let mut expected = Matrix::zeros(8, 8);
        for i in 0..3 {
            expected.set(i, 3 + i, int(1));
            expected.set(3 + i, i, int(-1));
        }
        expected.set(6, 7, int(1));
        expected.set(7, 6, int(-1));
        assert_eq!(*m.omega().gram(), expected);
        // abelian: only rho contributes
        let ker = m.ker_dphi_g();
        assert_eq!(ker, m.coordinate_block([0, 1, 2, 6, 7]));
    }

    #[test]
    fn fixed_point_model_is_the_slice() {
        let slice = SliceRep::new(
            SliceRep::standard_omega(2),
            vec![Matrix::zeros(2, 2), Matrix::zeros(2, 2), Matrix::zeros(2, 2)],
        )
        .unwrap();
        let inst = ProblemInstance::new(
            LieAlgebra::so3(),
            vec![],
            (0..3).map(|i| unit_vec(3, i)).collect(),
            Covector::zero(3),
            InnerProduct::identity(3),
            slice,
        )
        .unwrap();
        let m = model(&inst);
        assert_eq!(m.total_dim(), 2);
        assert_eq!(*m.omega().gram(), SliceRep::standard_omega(2));
    }

    #[test]
    fn degenerate_slice_is_rejected() {
        let inst = ProblemInstance::new(
            LieAlgebra::so3(),
            vec![unit_vec(3, 0)],
            vec![],
            Covector(unit_vec(3, 2)),
            InnerProduct::identity(3),
            SliceRep::new(Matrix::zeros(2, 2), vec![]).unwrap(),
        )
        .unwrap();
        let chain = build_chain(&inst);
        // validation catches it first; the model also refuses it directly
        assert!(matches!(chain, Err(Error::ValidationFailed(_))));
        let ok = catalog::so3_generic(0);
        let chain = build_chain(&ok).unwrap();
        assert_eq!(TangentModel::new(chain, inst).unwrap_err(), Error::DegenerateModel);
    }

    #[test]
    fn inf_action_kills_gm_and_fixes_n() {
        let inst = catalog::so3xso3_diagonal();
        let m = model(&inst);
        for x in inst.gm_generators() {
            assert!(crate::exactlin::is_zero_vec(&m.inf_action(x).flatten()));
        }
        for (j, x) in m.n_basis().iter().enumerate() {
            let tv = m.inf_action(x);
            assert_eq!(tv.u, unit_vec(m.dim_u(), m.dim_m() + j));
        }
        // mixed: lifting back recovers x minus its g_m part
        let x: Vec<Scalar> = (1..=6).map(int).collect();
        let (gm, _, _) = m.split_coordinates(&x);
        let back = crate::exactlin::add_vec(&m.lift(&m.inf_action(&x).u), &combine(6, &gm, inst.gm_generators()));
        assert_eq!(back, x);
    }

    #[test]
    fn f_map_contract() {
        let m = model(&catalog::so3_zero(2));
        let zero = TangentVector { u: zero_vec(m.dim_u()), rho: zero_vec(m.dim_m()), nu: zero_vec(2) };
        assert_eq!(m.f_map(&zero).unwrap(), zero_vec(m.dim_m()));
        let rho: Vec<Scalar> = (0..m.dim_m()).map(|i| int(i as i64 + 2)).collect();
        let w = TangentVector { rho: rho.clone(), ..zero.clone() };
        assert_eq!(m.f_map(&w).unwrap(), rho);
        let bad = TangentVector { nu: vec![int(1), int(0)], ..zero };
        assert_eq!(m.f_map(&bad), Err(Error::NotInN0));
        for y in m.m_basis() {
            let a = m.generator_vector(y);
            let wf = w.flatten();
            assert_eq!(m.omega().eval(&a, &wf), -m.omega().eval(&wf, &a));
        }
    }

    #[test]
    fn dphi_h_for_h_equal_g_and_h_zero() {
        let full = ProblemInstance::new(
            LieAlgebra::so3(),
            (0..3).map(|i| unit_vec(3, i)).collect(),
            vec![],
            Covector(unit_vec(3, 2)),
            InnerProduct::identity(3),
            SliceRep::empty(0),
        )
        .unwrap();
        let m = model(&full);
        assert_eq!(m.ker_dphi_h(), m.ker_dphi_g());
        let none = ProblemInstance::new(
            LieAlgebra::so3(),
            vec![],
            vec![],
            Covector(unit_vec(3, 2)),
            InnerProduct::identity(3),
            SliceRep::empty(0),
        )
        .unwrap();
        let m = model(&none);
        assert_eq!(m.ker_dphi_h(), Subspace::full(m.total_dim()));
    }

    #[test]
    fn dphi_g_injective_on_n() {
        let m = model(&catalog::so3_generic(0));
        let d = m.dphi_g();
        for j in m.u_n_range() {
            assert!(!crate::exactlin::is_zero_vec(&d.column(j)));
        }
        let n_block: Vec<Vec<Scalar>> = m.u_n_range().map(|j| d.column(j)).collect();
        assert_eq!(Matrix::from_columns(3, &n_block).rank(), m.dim_n());
    }

    #[test]
    fn gm_action_preserves_omega() {
        let m = model(&catalog::so3xso3_diagonal());
        assert!(m.gm_action_is_symplectic());
    }
}
