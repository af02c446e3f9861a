//! Witt–Artin decompositions of the model tangent space for `G` and for the
//! subgroup `H`, the compatible slice `Ñ1` and its momentum map.

use num::Zero;

use crate::check::CheckReport;
use crate::error::{Error, Result};
use crate::exactlin::{frac, unit_vec, zero_vec, BilinearForm, Matrix, Scalar, Subspace};
use crate::liecore::{orbit_tangent, Covector};
use crate::pointmodel::TangentModel;
use crate::splitting::{ProblemInstance, SplittingChain};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittDecompositionG {
    pub t0: Subspace,
    pub t1: Subspace,
    pub n0: Subspace,
    pub n1: Subspace,
    pub gram_t1: Matrix,
    pub gram_n1: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittDecompositionH {
    pub th0: Subspace,
    pub th1: Subspace,
    pub nh0: Subspace,
    pub nh1: Subspace,
    /// `s·m`
    pub s_block: Subspace,
    /// `X_m = b·m ⊕ Y_m`
    pub xm_block: Subspace,
    pub n1_block: Subspace,
    pub bm: Subspace,
    pub ym: Subspace,
    pub zm: Subspace,
    /// `M` from its defining equation, independent of the chain.
    pub m_set: Subspace,
    /// Ordered basis of `Ñ1`: `s·m`, `b·m`, `Y_m`, `N1`.
    pub nh1_basis: Vec<Vec<Scalar>>,
    pub block_dims: [usize; 4],
}

fn isotropic(w: &BilinearForm, v: &Subspace) -> bool {
    v.is_isotropic(w)
}

fn symplectic(w: &BilinearForm, v: &Subspace) -> bool {
    v.is_symplectic(w)
}

fn orthogonal(w: &BilinearForm, u: &Subspace, v: &Subspace) -> bool {
    w.vanishes_between(u, v)
}

fn sum(parts: &[&Subspace]) -> Subspace {
    let n = parts[0].ambient_dim();
    Subspace::sum_all(n, parts).expect("same ambient")
}

fn direct(whole: &Subspace, parts: &[&Subspace]) -> bool {
    Subspace::is_direct_decomposition(whole, parts).unwrap_or(false)
}

pub fn decompose_g(model: &TangentModel) -> WittDecompositionG {
    let t0 = model.coordinate_block(model.u_m_range());
    let t1 = model.coordinate_block(model.u_n_range());
    let n0 = model.coordinate_block(model.rho_range());
    let n1 = model.coordinate_block(model.nu_range());
    let w = model.omega();
    WittDecompositionG {
        gram_t1: w.gram_on(&t1),
        gram_n1: w.gram_on(&n1),
        t0,
        t1,
        n0,
        n1,
    }
}

impl WittDecompositionG {
    pub fn checks(&self, model: &TangentModel) -> CheckReport {
        let mut rep = CheckReport::new();
        let w = model.omega();
        let d = model.total_dim();
        let all = Subspace::full(d);
        let inst = model.instance();
        let chain = model.chain();
        let l = inst.algebra();
        rep.push("G.direct_sum_T0+T1+N0+N1", direct(&all, &[&self.t0, &self.t1, &self.n0, &self.n1]));
        let ker = model.ker_dphi_g();
        rep.push("G.ker_dphi_G_eq_T0+N1", direct(&ker, &[&self.t0, &self.n1]));
        rep.push("G.T0_eq_g_mu_m", self.t0 == model.orbit_image(&chain.g_mu));
        rep.push("G.T0_eq_ker_dphi_G_cap_g_m", {
            let gm_img = model.orbit_image(&Subspace::full(inst.dim()));
            ker.intersect(&gm_img).map(|x| x == self.t0).unwrap_or(false)
        });
        let t0n0 = sum(&[&self.t0, &self.n0]);
        rep.push("G.T1_perp_N1", orthogonal(w, &self.t1, &self.n1));
        rep.push("G.T1_perp_T0+N0", orthogonal(w, &self.t1, &t0n0));
        rep.push("G.N1_perp_T0+N0", orthogonal(w, &self.n1, &t0n0));
        rep.push("G.T0_lagrangian", isotropic(w, &self.t0) && 2 * self.t0.dim() == t0n0.dim());
        rep.push("G.N0_lagrangian", isotropic(w, &self.n0) && 2 * self.n0.dim() == t0n0.dim());
        rep.push("G.T0+N0_symplectic", symplectic(w, &t0n0));
        let chu_n = l.chu_form(inst.mu()).gram_on_vectors(model.n_basis());
        rep.push("G.gram_T1_eq_kks_on_n", self.gram_t1 == chu_n);
        rep.push("G.kks_T1_nondegenerate", !self.gram_t1.determinant().is_zero());
        rep.push("G.gram_N1_eq_slice_omega", self.gram_n1 == *inst.slice().omega().gram());
        let g_orbit = model.orbit_image(&Subspace::full(inst.dim()));
        rep.push("G.ker_dphi_G_eq_omega_perp_g_m", ker == model.omega_orthogonal(&g_orbit));
        rep.push("G.omega_antisymmetric", w.is_antisymmetric());
        rep.push("G.omega_nondegenerate", w.is_nondegenerate());
        rep.push("G.gm_action_symplectic", model.gm_action_is_symplectic());
        let inv = inst.gm_generators().len();
        rep.push(
            "G.blocks_gm_invariant",
            (0..inv).all(|i| {
                let a = model.gm_action(&unit_vec(inv, i));
                [&self.t0, &self.t1, &self.n0, &self.n1].iter().all(|v| v.is_invariant_under(&a))
            }),
        );
        rep
    }
}

pub fn decompose_h(model: &TangentModel) -> Result<WittDecompositionH> {
    let chain = model.chain();
    let d = model.total_dim();
    let dp = chain.p.dim();
    let db = chain.b.dim();
    let du = model.dim_u();

    let th0 = model.orbit_image(&chain.h_alpha);
    let th1 = model.orbit_image(&chain.ntilde);
    let s_block = model.orbit_image(&chain.s);
    let bm = model.orbit_image(&chain.b);
    // b* under m* = p* ⊕ b*: the rho coordinates at the b positions of the m basis
    let ym = model.coordinate_block(du + dp..du + dp + db);
    let pstar = model.coordinate_block(du..du + dp);
    let n1_block = model.coordinate_block(model.nu_range());
    let xm_block = bm.sum(&ym)?;
    let nh1 = sum(&[&s_block, &xm_block, &n1_block]);
    let rm = model.orbit_image(&chain.r);
    let nh0 = pstar.sum(&rm)?;
    let am = model.orbit_image(&chain.a);
    let zm = am.sum(&rm)?;

    // M = ker dphi_H ∩ (T1 ⊕ N0), straight from its definition
    let t1n0 = model
        .coordinate_block(model.u_n_range())
        .sum(&model.coordinate_block(model.rho_range()))?;
    let m_set = model.ker_dphi_h().intersect(&t1n0)?;

    let mut nh1_basis: Vec<Vec<Scalar>> = chain
        .s
        .vectors()
        .iter()
        .chain(chain.b.vectors().iter())
        .map(|x| model.generator_vector(x))
        .collect();
    nh1_basis.extend((du + dp..du + dp + db).map(|i| unit_vec(d, i)));
    nh1_basis.extend(model.nu_range().map(|i| unit_vec(d, i)));

    let dec = WittDecompositionH {
        block_dims: [chain.s.dim(), db, db, model.dim_slice()],
        th0,
        th1,
        nh0,
        nh1,
        s_block,
        xm_block,
        n1_block,
        bm,
        ym,
        zm,
        m_set,
        nh1_basis,
    };
    let rep = dec.numbered_checks(model);
    if let Some(c) = rep.failures().next() {
        let index = c.name[2..3].parse().unwrap_or(0);
        return Err(Error::ChainInconsistent {
            index,
            what: c.name.clone(),
        });
    }
    Ok(dec)
}

impl WittDecompositionH {
    /// The seven numbered assertions; names start with `H.<index>_`.
    pub fn numbered_checks(&self, model: &TangentModel) -> CheckReport {
        let mut rep = CheckReport::new();
        let w = model.omega();
        let chain = model.chain();
        let inst = model.instance();
        let all = Subspace::full(model.total_dim());
        let ker_h = model.ker_dphi_h();
        let ker_g = model.ker_dphi_g();

        rep.push("H.1_direct_sum_TH0+TH1+NH0+NH1", direct(&all, &[&self.th0, &self.th1, &self.nh0, &self.nh1]));
        rep.push("H.2_ker_dphi_H_eq_TH0+NH1", direct(&ker_h, &[&self.th0, &self.nh1]));
        let qm = model.orbit_image(&chain.q);
        rep.push("H.3_ker_dphi_H_eq_ker_dphi_G+M", direct(&ker_h, &[&ker_g, &self.m_set]));
        rep.push("H.3_M_eq_q_m+Y_m", direct(&self.m_set, &[&qm, &self.ym]));

        let th0nh0 = sum(&[&self.th0, &self.nh0]);
        rep.push("H.4_TH1_perp_NH1", orthogonal(w, &self.th1, &self.nh1));
        rep.push("H.4_TH1_perp_TH0+NH0", orthogonal(w, &self.th1, &th0nh0));
        rep.push("H.4_NH1_perp_TH0+NH0", orthogonal(w, &self.nh1, &th0nh0));
        rep.push("H.4_TH0_lagrangian", isotropic(w, &self.th0) && 2 * self.th0.dim() == th0nh0.dim());
        rep.push("H.4_NH0_lagrangian", isotropic(w, &self.nh0) && 2 * self.nh0.dim() == th0nh0.dim());

        rep.push("H.5_kks_on_s_m_nondegenerate", symplectic(w, &self.s_block));
        rep.push("H.5_X_m_symplectic", symplectic(w, &self.xm_block));
        rep.push("H.5_N1_tilde_symplectic", symplectic(w, &self.nh1));
        rep.push("H.5_Z_m_symplectic", symplectic(w, &self.zm));

        let psi = inst.algebra().chu_form(inst.mu());
        let pairing = psi.gram_between_vectors(&chain.a.vectors(), &chain.r.vectors());
        rep.push(
            "H.6_a_r_pairing_nondegenerate",
            pairing.is_square() && !pairing.determinant().is_zero(),
        );
        rep.push("H.7_a_m_lagrangian_in_Z_m", chain.a.is_isotropic(&psi) && 2 * chain.a.dim() == self.zm.dim());
        rep
    }

    /// Further structural checks beyond the numbered assertions.
    pub fn checks(&self, model: &TangentModel) -> CheckReport {
        let mut rep = self.numbered_checks(model);
        let d = model.chain().dim_formulas(model.dim_slice());
        rep.push_with("H.dim_N1_tilde_formula", self.nh1.dim() == d.n1_tilde, || {
            format!("{} vs {}", self.nh1.dim(), d.n1_tilde)
        });
        rep.push("H.dim_ker_dphi_H_formula", model.ker_dphi_h().dim() == d.ker_dphi_h);
        rep.push("H.dim_X_m_eq_2b", self.xm_block.dim() == d.x_m);
        rep.push("H.ker_dphi_G_within_ker_dphi_H", model.ker_dphi_h().contains(&model.ker_dphi_g()));
        let h_orbit = model.orbit_image(model.instance().h());
        rep.push(
            "H.ker_dphi_H_eq_omega_perp_h_m",
            model.ker_dphi_h() == model.omega_orthogonal(&h_orbit),
        );
        rep.push("H.TH0_eq_h_alpha_m", self.th0 == model.orbit_image(&model.chain().h_alpha));
        let k = model.instance().gm_generators().len();
        let hm_coeffs = hm_generator_coefficients(model);
        rep.push(
            "H.blocks_h_m_invariant",
            hm_coeffs.iter().all(|c| {
                let a = model.gm_action(c);
                [&self.th0, &self.th1, &self.nh0, &self.nh1, &self.s_block, &self.xm_block]
                    .iter()
                    .all(|v| v.is_invariant_under(&a))
            }) || k == 0,
        );
        rep
    }
}

/// `omega` on `Ñ1` in the ordered block basis `(s·m, b·m, Y_m, N1)`.
pub fn slice_form(decomp: &WittDecompositionH, model: &TangentModel) -> BilinearForm {
    model.omega().restricted(&decomp.nh1_basis)
}

/// The block-diagonal form `Chu|_s ⊕ [[0, I], [-I, 0]] ⊕ omega_N1` that
/// [`slice_form`] must equal.
pub fn expected_slice_form(decomp: &WittDecompositionH, model: &TangentModel) -> Matrix {
    let inst = model.instance();
    let [ds, db, _, dn] = decomp.block_dims;
    let total = ds + 2 * db + dn;
    let mut g = Matrix::zeros(total, total);
    let chu = inst.algebra().chu_form(inst.mu()).gram_on(&model.chain().s);
    for i in 0..ds {
        for j in 0..ds {
            g.set(i, j, chu.get(i, j).clone());
        }
    }
    for i in 0..db {
        g.set(ds + i, ds + db + i, Scalar::from_integer(1.into()));
        g.set(ds + db + i, ds + i, Scalar::from_integer((-1).into()));
    }
    let w = inst.slice().omega().gram();
    let off = ds + 2 * db;
    for i in 0..dn {
        for j in 0..dn {
            g.set(off + i, off + j, w.get(i, j).clone());
        }
    }
    g
}

/// Coefficients, in the given `g_m` generators, of the canonical `h_m` basis.
pub fn hm_generator_coefficients(model: &TangentModel) -> Vec<Vec<Scalar>> {
    let inst = model.instance();
    model
        .chain()
        .h_m
        .vectors()
        .iter()
        .map(|x| inst.gm_coordinates(x).expect("h_m lies in g_m"))
        .collect()
}

/// A point of `Ñ1` split into its blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlicePoint {
    pub x: Vec<Scalar>,
    pub b: Vec<Scalar>,
    pub w: Vec<Scalar>,
    pub nu: Vec<Scalar>,
}

impl SlicePoint {
    /// From coordinates in the ordered block basis of `Ñ1`.
    pub fn from_coords(decomp: &WittDecompositionH, c: &[Scalar]) -> Self {
        let [ds, db, _, dn] = decomp.block_dims;
        assert_eq!(c.len(), ds + 2 * db + dn);
        SlicePoint {
            x: c[..ds].to_vec(),
            b: c[ds..ds + db].to_vec(),
            w: c[ds + db..ds + 2 * db].to_vec(),
            nu: c[ds + 2 * db..].to_vec(),
        }
    }

    pub fn coords(&self) -> Vec<Scalar> {
        let mut v = self.x.clone();
        v.extend(self.b.iter().cloned());
        v.extend(self.w.iter().cloned());
        v.extend(self.nu.iter().cloned());
        v
    }
}

/// Slice momentum from its closed formula, one entry per canonical `h_m`
/// basis vector:
/// `1/2 <mu, [x, [x, eta]]> - <f(w), [b, eta]> + 1/2 omega_N1(eta·nu, nu)`.
/// Empty when `h_m = 0`.
pub fn slice_momentum_formula(model: &TangentModel, p: &SlicePoint) -> Vec<Scalar> {
    let inst = model.instance();
    let chain = model.chain();
    let l = inst.algebra();
    let n = inst.dim();
    let half = frac(1, 2);
    let x = crate::exactlin::combine(n, &p.x, &chain.s.vectors());
    let b = crate::exactlin::combine(n, &p.b, &chain.b.vectors());
    // f(w) in m* = p* ⊕ b*: zero on p
    let mut rho = zero_vec(chain.p.dim());
    rho.extend(p.w.iter().cloned());
    let fw = model.embed_rho(&rho);
    let coad_x = l.coad_matrix(&x);
    let adx2_mu = Covector(coad_x.mul(&coad_x).mul_vec(inst.mu().coords()));
    let slice = inst.slice();
    chain
        .h_m
        .vectors()
        .iter()
        .zip(hm_generator_coefficients(model))
        .map(|(eta, c)| {
            let t1 = &half * adx2_mu.pair(eta);
            let t2 = -fw.pair(&l.bracket(&b, eta));
            let a = slice.action_of(&c);
            let t3 = &half * slice.omega().eval(&a.mul_vec(&p.nu), &p.nu);
            t1 + t2 + t3
        })
        .collect()
}

/// Slice momentum from the definition `1/2 omega(eta·v, v)` with the model
/// action of `h_m`.
pub fn slice_momentum_direct(decomp: &WittDecompositionH, model: &TangentModel, p: &SlicePoint) -> Vec<Scalar> {
    let d = model.total_dim();
    let v = crate::exactlin::combine(d, &p.coords(), &decomp.nh1_basis);
    let half = frac(1, 2);
    hm_generator_coefficients(model)
        .iter()
        .map(|c| &half * model.omega().eval(&model.gm_action(c).mul_vec(&v), &v))
        .collect()
}

/// The slice momentum, after checking the closed formula against the
/// definition.
pub fn slice_momentum(decomp: &WittDecompositionH, model: &TangentModel, p: &SlicePoint) -> Result<Vec<Scalar>> {
    let f = slice_momentum_formula(model, p);
    let dvals = slice_momentum_direct(decomp, model, p);
    if f != dvals {
        return Err(Error::ChainInconsistent {
            index: 0,
            what: "slice momentum formula disagrees with its definition".into(),
        });
    }
    Ok(f)
}

/// Infinitesimal equivariance of `Phi_N1` at `nu`:
/// `DPhi(nu)(A_eta nu) = -ad*_eta Phi(nu)` on `g_m`, for each generator `eta`.
pub fn phi_n1_equivariant_at(inst: &ProblemInstance, nu: &[Scalar]) -> bool {
    let slice = inst.slice();
    let gens = inst.gm_generators();
    let k = gens.len();
    let l = inst.algebra();
    let phi = slice.momentum(nu);
    (0..k).all(|e| {
        let a_nu = slice.action()[e].mul_vec(nu);
        let lhs = slice.momentum_derivative(nu, &a_nu);
        (0..k).all(|i| {
            // (ad*_eta Phi)(x_i) = Phi([eta, x_i])
            let c = inst
                .gm_coordinates(&l.bracket(&gens[e], &gens[i]))
                .expect("g_m is a subalgebra");
            let rhs: Scalar = c.iter().zip(&phi).fold(Scalar::zero(), |acc, (ci, p)| acc + ci * p);
            lhs[i] == -rhs
        })
    })
}

/// The coadjoint orbit picture: `ker(x -> -(ad*_x mu)|_h)` on `g/g_mu`
/// is `q·mu`, and `s·mu` complements `h_alpha·mu` in it.
pub fn coadjoint_slice_check(chain: &SplittingChain, inst: &ProblemInstance) -> CheckReport {
    let mut rep = CheckReport::new();
    let l = inst.algebra();
    let mu = inst.mu();
    let n = inst.dim();
    let tangent = |v: &Subspace| {
        Subspace::from_spanning(n, v.vectors().iter().map(|x| orbit_tangent(l, x, mu).0))
    };
    let hv = inst.h().vectors();
    let restriction = Matrix::from_fn(hv.len(), n, |i, j| {
        -mu.pair(&l.bracket(&unit_vec(n, j), &hv[i]))
    });
    let ker = if hv.is_empty() { Subspace::full(n) } else { restriction.kernel() };
    let ker_mu = tangent(&ker);
    let q_mu = tangent(&chain.q);
    rep.push("coadjoint.kernel_eq_q_mu", ker_mu == q_mu);
    rep.push("coadjoint.q_mu_injective", q_mu.dim() == chain.q.dim());
    let s_mu = tangent(&chain.s);
    let ha_mu = tangent(&chain.h_alpha);
    rep.push("coadjoint.s_mu_complements_h_alpha_mu", direct(&ker_mu, &[&s_mu, &ha_mu]));
    rep.push("coadjoint.h_alpha_mu_eq_a_mu", ha_mu == tangent(&chain.a));
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::exactlin::int;
    use crate::liecore::{InnerProduct, LieAlgebra};
    use crate::pointmodel::build_model;
    use crate::splitting::{build_chain, SliceRep};

    fn model(inst: &ProblemInstance) -> TangentModel {
        build_model(&build_chain(inst).unwrap(), inst).unwrap()
    }

    fn dims_g(d: &WittDecompositionG) -> [usize; 4] {
        [d.t0.dim(), d.t1.dim(), d.n0.dim(), d.n1.dim()]
    }

    #[test]
    fn so3_generic_g_dims() {
        let m = model(&catalog::so3_generic(0));
        let g = decompose_g(&m);
        assert_eq!(dims_g(&g), [1, 2, 1, 0]);
        assert!(g.checks(&m).all_passed(), "{}", g.checks(&m));
    }

    #[test]
    fn torus_g_has_no_t1() {
        let m = model(&catalog::torus(4, 2, catalog::torus_mu(4)).unwrap());
        assert_eq!(dims_g(&decompose_g(&m)), [4, 0, 4, 0]);
    }

    #[test]
    fn fixed_point_g_is_all_slice() {
        let slice = SliceRep::new(SliceRep::standard_omega(2), vec![Matrix::zeros(2, 2); 3]).unwrap();
        let inst = ProblemInstance::new(
            LieAlgebra::so3(),
            (0..3).map(|i| unit_vec(3, i)).collect(),
            (0..3).map(|i| unit_vec(3, i)).collect(),
            Covector::zero(3),
            InnerProduct::identity(3),
            slice,
        )
        .unwrap();
        let m = model(&inst);
        assert_eq!(dims_g(&decompose_g(&m)), [0, 0, 0, 2]);
    }

    #[test]
    fn so3_generic_h_blocks() {
        let m = model(&catalog::so3_generic(2));
        let h = decompose_h(&m).unwrap();
        assert_eq!(h.xm_block.dim(), 2);
        assert_eq!(h.s_block.dim(), 0);
        assert_eq!(h.nh1.dim(), 4);
        assert!(h.checks(&m).all_passed(), "{}", h.checks(&m));
    }

    #[test]
    fn so3_collinear_h_blocks() {
        let m = model(&catalog::so3_collinear(2));
        let h = decompose_h(&m).unwrap();
        assert_eq!(h.xm_block.dim(), 0);
        assert_eq!(h.s_block.dim(), 2);
        assert_eq!(h.nh1.dim(), 4);
        let form = slice_form(&h, &m);
        assert_eq!(*form.gram(), expected_slice_form(&h, &m));
        // Chu on s = span(e1, e2) with mu = e3*: <e3*, [e1, e2]> = 1
        assert_eq!(form.gram().submatrix(0..2, 0..2), Matrix::from_i64(2, 2, &[0, 1, -1, 0]));
    }

    #[test]
    fn torus_slice_form_is_canonical_pairing() {
        let m = model(&catalog::torus(5, 2, catalog::torus_mu(5)).unwrap());
        let h = decompose_h(&m).unwrap();
        assert_eq!(h.xm_block.dim(), 6);
        assert_eq!(h.block_dims[0], 0);
        assert_eq!(*slice_form(&h, &m).gram(), expected_slice_form(&h, &m));
    }

    #[test]
    fn h_zero_gives_everything() {
        let inst = ProblemInstance::new(
            LieAlgebra::so3(),
            vec![],
            vec![],
            Covector(vec![int(1), int(0), int(1)]),
            InnerProduct::identity(3),
            SliceRep::new(SliceRep::standard_omega(2), vec![]).unwrap(),
        )
        .unwrap();
        let m = model(&inst);
        let h = decompose_h(&m).unwrap();
        assert_eq!(h.nh1, Subspace::full(m.total_dim()));
        assert!(h.nh1.is_symplectic(m.omega()));
    }

    #[test]
    fn h_equal_g_slice_form_is_omega_n1() {
        let inst = ProblemInstance::new(
            LieAlgebra::so3(),
            (0..3).map(|i| unit_vec(3, i)).collect(),
            vec![],
            Covector(vec![int(1), int(0), int(1)]),
            InnerProduct::identity(3),
            SliceRep::new(SliceRep::standard_omega(2), vec![]).unwrap(),
        )
        .unwrap();
        let m = model(&inst);
        let h = decompose_h(&m).unwrap();
        assert_eq!(*slice_form(&h, &m).gram(), SliceRep::standard_omega(2));
    }

    #[test]
    fn slice_momentum_zero_cases() {
        let m = model(&catalog::so3_generic(2));
        let h = decompose_h(&m).unwrap();
        let p = SlicePoint::from_coords(&h, &[int(1), int(2), int(3), int(4)]);
        assert!(slice_momentum(&h, &m, &p).unwrap().is_empty());

        let m = model(&catalog::so3xso3_diagonal());
        let h = decompose_h(&m).unwrap();
        let zero = vec![int(0); h.nh1.dim()];
        let p = SlicePoint::from_coords(&h, &zero);
        assert_eq!(slice_momentum(&h, &m, &p).unwrap(), vec![int(0)]);
    }

    #[test]
    fn slice_momentum_formula_matches_definition_on_diagonal_instance() {
        let m = model(&catalog::so3xso3_diagonal());
        let h = decompose_h(&m).unwrap();
        assert_eq!(m.chain().h_m.dim(), 1);
        let dim = h.nh1.dim();
        for seed in 0..12i64 {
            let c: Vec<Scalar> = (0..dim as i64).map(|i| frac((seed * 7 + i * 3) % 11 - 5, 1 + (i + seed) % 4)).collect();
            let p = SlicePoint::from_coords(&h, &c);
            assert_eq!(slice_momentum_formula(&m, &p), slice_momentum_direct(&h, &m, &p));
        }
    }

    #[test]
    fn phi_n1_equivariance_on_diagonal_instance() {
        let inst = catalog::so3xso3_diagonal();
        assert!(phi_n1_equivariant_at(&inst, &[int(3), frac(-1, 2)]));
    }

    #[test]
    fn coadjoint_check_collinear() {
        let inst = catalog::so3_collinear(0);
        let chain = build_chain(&inst).unwrap();
        let rep = coadjoint_slice_check(&chain, &inst);
        assert!(rep.all_passed(), "{rep}");
        assert_eq!(chain.s.dim(), 2);
        assert!(chain.h_alpha.dim() == chain.h_mu.dim());
    }

    #[test]
    fn coadjoint_check_catalog() {
        for (name, inst) in catalog::all() {
            let chain = build_chain(&inst).unwrap();
            let rep = coadjoint_slice_check(&chain, &inst);
            assert!(rep.all_passed(), "{name}\n{rep}");
        }
    }

    #[test]
    fn every_catalog_instance_passes_all_checks() {
        for (name, inst) in catalog::all() {
            let m = model(&inst);
            let g = decompose_g(&m);
            let h = decompose_h(&m).unwrap();
            let rep_g = g.checks(&m);
            let rep_h = h.checks(&m);
            assert!(rep_g.all_passed(), "{name}\n{rep_g}");
            assert!(rep_h.all_passed(), "{name}\n{rep_h}");
            assert_eq!(*slice_form(&h, &m).gram(), expected_slice_form(&h, &m), "{name}");
        }
    }
}
