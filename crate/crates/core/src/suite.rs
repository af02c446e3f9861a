//! Runs every named check on one instance.

use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::check::CheckReport;
use crate::exactlin::{Matrix, Scalar, Subspace};
use crate::pointmodel::{build_model, TangentModel};
use crate::splitting::{build_chain, ProblemInstance};
use crate::tube::{self, FloatTolerance};
use crate::wittartin::{
    coadjoint_slice_check, decompose_g, decompose_h, expected_slice_form, phi_n1_equivariant_at,
    slice_form, slice_momentum_direct, slice_momentum_formula, SlicePoint,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Random points per sampled identity.
    pub samples: usize,
    pub seed: u64,
    /// Include the floating-point tube checks.
    pub float_checks: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            samples: 20,
            seed: 0,
            float_checks: true,
        }
    }
}

fn random_rational<R: Rng>(rng: &mut R) -> Scalar {
    Scalar::new(rng.random_range(-6i64..=6).into(), rng.random_range(1i64..=5).into())
}

/// Kernel of `a` by plain Gauss–Jordan elimination on row vectors. Kept
/// apart from [`Matrix::kernel`] so the two can be compared.
pub fn oracle_kernel(a: &Matrix) -> Vec<Vec<Scalar>> {
    let (rows, cols) = (a.rows(), a.cols());
    let mut m: Vec<Vec<Scalar>> = (0..rows).map(|i| a.row(i)).collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Scalar::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    (0..cols)
        .filter(|c| !pivot_cols.contains(c))
        .map(|free| {
            let mut v = vec![Scalar::zero(); cols];
            v[free] = Scalar::one();
            for (row, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -m[row][free].clone();
            }
            v
        })
        .collect()
}

/// `ker DPhi_H` by the oracle, as a canonical subspace.
pub fn oracle_ker_dphi_h(model: &TangentModel) -> Subspace {
    let d = model.total_dim();
    if model.instance().h().is_zero() {
        return Subspace::full(d);
    }
    Subspace::from_spanning(d, oracle_kernel(&model.dphi_h()))
}

/// `M` solved directly from its defining condition: pairs `(z, w)` with
/// `z ∈ n`, `w ∈ N0` and `-ad*_z mu + f(w)` vanishing on `h`.
pub fn m_from_definition(model: &TangentModel) -> Subspace {
    let inst = model.instance();
    let l = inst.algebra();
    let mu = inst.mu();
    let (dn, dm) = (model.dim_n(), model.dim_m());
    let h = inst.h().vectors();
    let cell = |row: usize, col: usize| -> Scalar {
        let eta = &h[row];
        if col < dn {
            -mu.pair(&l.bracket(&model.n_basis()[col], eta))
        } else {
            model.embed_rho(&crate::exactlin::unit_vec(dm, col - dn)).pair(eta)
        }
    };
    let a = Matrix::from_fn(h.len(), dn + dm, cell);
    let d = model.total_dim();
    let (un, rho) = (model.u_n_range(), model.rho_range());
    Subspace::from_spanning(
        d,
        oracle_kernel(&a).into_iter().map(|v| {
            let mut x = vec![Scalar::zero(); d];
            x[un.clone()].clone_from_slice(&v[..dn]);
            x[rho.clone()].clone_from_slice(&v[dn..]);
            x
        }),
    )
}

/// Every check for one instance, in a fixed order.
pub fn verify_instance(inst: &ProblemInstance, opts: VerifyOptions) -> CheckReport {
    let mut rep = inst.validate();
    if !rep.all_passed() {
        return rep;
    }
    let chain = match build_chain(inst) {
        Ok(c) => c,
        Err(e) => {
            rep.push_detail("chain.build", false, e.to_string());
            return rep;
        }
    };
    rep.extend(chain.identity_checks(inst));
    let model = match build_model(&chain, inst) {
        Ok(m) => m,
        Err(e) => {
            rep.push_detail("model.build", false, e.to_string());
            return rep;
        }
    };
    rep.push("model.build", true);
    let dims = chain.dim_formulas(inst.slice().dim());
    rep.push("model.total_dim_formula", model.total_dim() == dims.model_total);
    rep.push(
        "model.inf_action_kernel_eq_g_m",
        inst.gm_generators().iter().all(|x| crate::exactlin::is_zero_vec(&model.inf_action(x).flatten()))
            && model.orbit_image(&Subspace::full(inst.dim())).dim() == inst.dim() - inst.gm().dim(),
    );
    let f_ok = (0..model.dim_m()).all(|j| {
        let d = model.total_dim();
        let w = model.split(&crate::exactlin::unit_vec(d, model.rho_range().start + j));
        std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| model.f_map(&w))).is_ok_and(|r| r.is_ok())
    });
    rep.push("model.f_map_contract", f_ok);
    rep.push("model.ker_dphi_G_dim_formula", model.ker_dphi_g().dim() == dims.ker_dphi_g);

    let g = decompose_g(&model);
    rep.extend(g.checks(&model));
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let nu_samples = opts.samples.max(10);
    let equivariant = (0..nu_samples).all(|_| {
        let nu: Vec<Scalar> = (0..inst.slice().dim()).map(|_| random_rational(&mut rng)).collect();
        phi_n1_equivariant_at(inst, &nu)
    });
    rep.push("G.phi_N1_infinitesimal_equivariance", equivariant);

    let h = match decompose_h(&model) {
        Ok(h) => h,
        Err(e) => {
            rep.push_detail("H.build", false, e.to_string());
            return rep;
        }
    };
    rep.extend(h.checks(&model));
    rep.push(
        "H.slice_form_block_diagonal",
        *slice_form(&h, &model).gram() == expected_slice_form(&h, &model),
    );
    let momentum_ok = (0..nu_samples).all(|_| {
        let c: Vec<Scalar> = (0..h.nh1_basis.len()).map(|_| random_rational(&mut rng)).collect();
        let p = SlicePoint::from_coords(&h, &c);
        slice_momentum_formula(&model, &p) == slice_momentum_direct(&h, &model, &p)
    });
    rep.push("H.slice_momentum_formula_eq_definition", momentum_ok);
    rep.extend(coadjoint_slice_check(&chain, inst));

    rep.push("oracle.M_from_defining_equation", m_from_definition(&model) == h.m_set);
    let constructive = h.th0.sum(&h.nh1).expect("same ambient");
    rep.push("oracle.ker_dphi_H_eq_TH0+NH1", oracle_ker_dphi_h(&model) == constructive);

    rep.extend(tube::omega_tube_checks(&model, opts.samples.min(5), &mut rng));
    if opts.float_checks {
        rep.extend(tube::check_dphi_consistency(&model, FloatTolerance::FINITE_DIFFERENCE));
        rep.extend(tube::phi_equivariance_check(&model, opts.samples, FloatTolerance::ALGEBRAIC, &mut rng));
    }
    rep
}
