//! The normal form away from the base point.
//!
//! The tube 2-form is evaluated exactly at slice points (group coordinate
//! zero). The momentum map needs the group exponential and is evaluated in
//! `f64`; this is the only floating-point code in the crate.

use nalgebra::{DMatrix, DVector};
use num::Zero;
use rand::Rng;

use crate::check::CheckReport;
use crate::error::{Error, Result};
use crate::exactlin::{add_vec, is_zero_vec, to_f64, unit_vec, Matrix, Scalar};
use crate::liecore::Covector;
use crate::pointmodel::{TangentModel, TangentVector};

/// A point `[exp(xi), rho, nu]` of the tube.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TubePoint {
    pub xi: Vec<Scalar>,
    pub rho: Vec<Scalar>,
    pub nu: Vec<Scalar>,
}

impl TubePoint {
    pub fn origin(model: &TangentModel) -> Self {
        TubePoint {
            xi: vec![Scalar::zero(); model.instance().dim()],
            rho: vec![Scalar::zero(); model.dim_m()],
            nu: vec![Scalar::zero(); model.dim_slice()],
        }
    }

    pub fn on_slice(model: &TangentModel, rho: Vec<Scalar>, nu: Vec<Scalar>) -> Self {
        TubePoint {
            rho,
            nu,
            ..Self::origin(model)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FloatTolerance {
    pub rel_tol: f64,
}

impl FloatTolerance {
    pub const ALGEBRAIC: FloatTolerance = FloatTolerance { rel_tol: 1e-9 };
    pub const FINITE_DIFFERENCE: FloatTolerance = FloatTolerance { rel_tol: 1e-6 };
}

impl Default for FloatTolerance {
    fn default() -> Self {
        Self::ALGEBRAIC
    }
}

pub const FD_STEP: f64 = 1e-4;

/// `omega_Y0` at a slice point, on two tangent vectors `(xi_i, rho_dot_i, nu_dot_i)`
/// whose `u` block is taken as `xi_i ∈ m ⊕ n`.
pub fn omega_tube(model: &TangentModel, p: &TubePoint, v1: &TangentVector, v2: &TangentVector) -> Result<Scalar> {
    if !is_zero_vec(&p.xi) {
        return Err(Error::OffSlice);
    }
    let inst = model.instance();
    let l = inst.algebra();
    let slice = inst.slice();
    let x1 = model.lift(&v1.u);
    let x2 = model.lift(&v2.u);
    let lin = |v: &TangentVector| {
        let r = model.embed_rho(&v.rho);
        let dphi = model.embed_gm_dual(&slice.momentum_derivative(&p.nu, &v.nu));
        Covector(add_vec(r.coords(), dphi.coords()))
    };
    let base = add_vec(
        model.embed_rho(&p.rho).coords(),
        model.embed_gm_dual(&slice.momentum(&p.nu)).coords(),
    );
    let br = l.bracket(&x1, &x2);
    Ok(lin(v2).pair(&x1) - lin(v1).pair(&x2)
        + Covector(base).pair(&br)
        + inst.mu().pair(&br)
        + slice.omega().eval(&v1.nu, &v2.nu))
}

/// Gram matrix of [`omega_tube`] on the model basis at `p`.
pub fn omega_tube_gram(model: &TangentModel, p: &TubePoint) -> Result<Matrix> {
    let d = model.total_dim();
    let basis: Vec<TangentVector> = (0..d).map(|i| model.split(&unit_vec(d, i))).collect();
    let mut g = Matrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            g.set(i, j, omega_tube(model, p, &basis[i], &basis[j])?);
        }
    }
    Ok(g)
}

fn to_dmatrix(m: &Matrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| to_f64(m.get(i, j)))
}

fn to_dvector(v: &[Scalar]) -> DVector<f64> {
    DVector::from_iterator(v.len(), v.iter().map(to_f64))
}

const EXPM_MAX_TERMS: usize = 40;

/// `exp(a)` by scaling and squaring a truncated Taylor series. The series is
/// cut once its remainder bound drops below machine precision; if that never
/// happens within the term budget and the bound still exceeds `tol`, this
/// fails.
pub fn expm(a: &DMatrix<f64>, tol: f64) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let norm = a.row_iter().map(|r| r.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max);
    if !norm.is_finite() || a.iter().any(|x| !x.is_finite()) {
        return Err(Error::SeriesNotConverged { bound: f64::INFINITY, tol });
    }
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let b = a / 2f64.powi(squarings);
    let bn = norm / 2f64.powi(squarings);
    let mut result = DMatrix::<f64>::identity(n, n);
    let mut term = DMatrix::<f64>::identity(n, n);
    let mut bound = f64::INFINITY;
    for k in 1..=EXPM_MAX_TERMS {
        term = &term * &b / k as f64;
        result += &term;
        // tail after term k: sum_{j>k} bn^j / j! <= bn^{k+1}/(k+1)! / (1 - bn/(k+2))
        let mut next = bn;
        for j in 2..=k + 1 {
            next *= bn / j as f64;
        }
        bound = next / (1.0 - bn / (k + 2) as f64);
        if bound <= f64::EPSILON {
            break;
        }
    }
    if bound > tol {
        return Err(Error::SeriesNotConverged { bound, tol });
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    Ok(result)
}

/// `Ad*_{exp(-xi)}` as a matrix on `g*` coordinates: `exp(-coad(xi))`.
pub fn coadjoint_exp(model: &TangentModel, xi: &[f64], tol: f64) -> Result<DMatrix<f64>> {
    let l = model.instance().algebra();
    let n = l.dim();
    let mut coad = DMatrix::<f64>::zeros(n, n);
    // coad(xi) = ad(xi)^T, ad(xi)_{kj} = sum_i xi_i c[i][j][k]
    for (i, &x) in xi.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for j in 0..n {
            for k in 0..n {
                let c = l.constant(i, j, k);
                if !c.is_zero() {
                    coad[(j, k)] += x * to_f64(c);
                }
            }
        }
    }
    expm(&(-coad), tol)
}

/// The un-rotated momentum `mu + iota(rho) + iota(Phi_N1(nu))` in floats.
pub fn slice_value(model: &TangentModel, rho: &[f64], nu: &[f64]) -> DVector<f64> {
    let inst = model.instance();
    let n = inst.dim();
    let dm = model.dim_m();
    let k = inst.gm_generators().len();
    // rows k..k+dm of the split inverse give iota on m*, rows 0..k on g_m*
    let iota_m: Vec<DVector<f64>> = (0..dm).map(|i| to_dvector(model.embed_rho(&unit_vec(dm, i)).coords())).collect();
    let iota_gm: Vec<DVector<f64>> = (0..k).map(|i| to_dvector(model.embed_gm_dual(&unit_vec(k, i)).coords())).collect();
    let mut v = to_dvector(inst.mu().coords());
    for (i, r) in rho.iter().enumerate() {
        v += &iota_m[i] * *r;
    }
    let nu_v = DVector::from_column_slice(nu);
    let w = to_dmatrix(inst.slice().omega().gram());
    for (i, a) in inst.slice().action().iter().enumerate() {
        let an = to_dmatrix(a) * &nu_v;
        let phi_i = 0.5 * an.dot(&(&w * &nu_v));
        v += &iota_gm[i] * phi_i;
    }
    debug_assert_eq!(v.len(), n);
    v
}

/// `Phi~([exp(xi), rho, nu]) = Ad*_{exp(-xi)}(mu + iota(rho) + iota(Phi_N1(nu)))`.
pub fn phi_tilde_f64(model: &TangentModel, xi: &[f64], rho: &[f64], nu: &[f64], tol: f64) -> Result<DVector<f64>> {
    let base = slice_value(model, rho, nu);
    if xi.iter().all(|x| *x == 0.0) {
        return Ok(base);
    }
    Ok(coadjoint_exp(model, xi, tol)? * base)
}

/// [`phi_tilde_f64`] on a rational point; exact (then rounded) when `xi = 0`.
pub fn phi_tilde(model: &TangentModel, p: &TubePoint, tol: FloatTolerance) -> Result<Vec<f64>> {
    if is_zero_vec(&p.xi) {
        let inst = model.instance();
        let v = add_vec(
            &add_vec(inst.mu().coords(), model.embed_rho(&p.rho).coords()),
            model.embed_gm_dual(&inst.slice().momentum(&p.nu)).coords(),
        );
        return Ok(v.iter().map(to_f64).collect());
    }
    let f = |v: &[Scalar]| v.iter().map(to_f64).collect::<Vec<_>>();
    Ok(phi_tilde_f64(model, &f(&p.xi), &f(&p.rho), &f(&p.nu), tol.rel_tol)?
        .iter()
        .copied()
        .collect())
}

fn inf_norm(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Largest relative error `|fd - col|_inf / max(|col|_inf, 1)` over all model
/// basis directions, with a central difference of step [`FD_STEP`].
pub fn dphi_fd_max_error(model: &TangentModel) -> Result<f64> {
    let d = model.total_dim();
    let dg = to_dmatrix(&model.dphi_g());
    let mut worst: f64 = 0.0;
    for k in 0..d {
        let dir = model.split(&unit_vec(d, k));
        let xi_dir = to_dvector(&model.lift(&dir.u));
        let rho_dir = to_dvector(&dir.rho);
        let nu_dir = to_dvector(&dir.nu);
        let eval = |t: f64| {
            let xi: Vec<f64> = (&xi_dir * t).iter().copied().collect();
            let rho: Vec<f64> = (&rho_dir * t).iter().copied().collect();
            let nu: Vec<f64> = (&nu_dir * t).iter().copied().collect();
            phi_tilde_f64(model, &xi, &rho, &nu, FloatTolerance::ALGEBRAIC.rel_tol)
        };
        let fd = (eval(FD_STEP)? - eval(-FD_STEP)?) / (2.0 * FD_STEP);
        let col = dg.column(k).into_owned();
        let err = inf_norm(&(fd - &col)) / inf_norm(&col).max(1.0);
        worst = worst.max(err);
    }
    Ok(worst)
}

pub fn check_dphi_consistency(model: &TangentModel, tol: FloatTolerance) -> CheckReport {
    let mut rep = CheckReport::new();
    match dphi_fd_max_error(model) {
        Ok(e) => rep.push_with("tube.dphi_finite_difference", e < tol.rel_tol, || {
            format!("max relative error {e:e}")
        }),
        Err(e) => rep.push_detail("tube.dphi_finite_difference", false, e.to_string()),
    }
    rep
}

/// Largest relative deviation of
/// `Phi~([exp(xi), rho, nu]) = Ad*_{exp(-xi/2)} Phi~([exp(xi/2), rho, nu])`
/// over `samples` random points.
pub fn phi_equivariance_max_deviation<R: Rng>(model: &TangentModel, samples: usize, rng: &mut R) -> Result<f64> {
    let n = model.instance().dim();
    let tol = FloatTolerance::ALGEBRAIC.rel_tol;
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let xi: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let rho: Vec<f64> = (0..model.dim_m()).map(|_| rng.random_range(-0.5..0.5)).collect();
        let nu: Vec<f64> = (0..model.dim_slice()).map(|_| rng.random_range(-0.5..0.5)).collect();
        let half: Vec<f64> = xi.iter().map(|x| x / 2.0).collect();
        let lhs = phi_tilde_f64(model, &xi, &rho, &nu, tol)?;
        let rhs = coadjoint_exp(model, &half, tol)? * phi_tilde_f64(model, &half, &rho, &nu, tol)?;
        let dev = inf_norm(&(&lhs - rhs)) / inf_norm(&lhs).max(1.0);
        worst = worst.max(dev);
    }
    Ok(worst)
}

pub fn phi_equivariance_check<R: Rng>(model: &TangentModel, samples: usize, tol: FloatTolerance, rng: &mut R) -> CheckReport {
    let mut rep = CheckReport::new();
    match phi_equivariance_max_deviation(model, samples.max(1), rng) {
        Ok(e) => rep.push_with("tube.phi_equivariance", e < tol.rel_tol, || format!("max relative deviation {e:e}")),
        Err(e) => rep.push_detail("tube.phi_equivariance", false, e.to_string()),
    }
    rep
}

/// Exact checks: base-point agreement, antisymmetry and nondegeneracy at
/// sampled slice points with entries of size at most `1/10`.
pub fn omega_tube_checks<R: Rng>(model: &TangentModel, samples: usize, rng: &mut R) -> CheckReport {
    let mut rep = CheckReport::new();
    let origin = TubePoint::origin(model);
    let at_origin = omega_tube_gram(model, &origin).map(|g| g == *model.omega().gram());
    rep.push("tube.omega_origin_eq_omega_m", at_origin.unwrap_or(false));
    let mut antisym = true;
    let mut nondeg = true;
    for _ in 0..samples {
        let p = random_slice_point(model, rng);
        match omega_tube_gram(model, &p) {
            Ok(g) => {
                antisym &= g.is_antisymmetric();
                nondeg &= !g.determinant().is_zero();
            }
            Err(_) => {
                antisym = false;
                nondeg = false;
            }
        }
    }
    rep.push("tube.omega_antisymmetric_near_0", antisym);
    rep.push("tube.omega_nondegenerate_near_0", nondeg);
    rep.push(
        "tube.off_slice_rejected",
        model.instance().dim() == 0 || {
            let mut p = TubePoint::origin(model);
            p.xi[0] = Scalar::from_integer(1.into());
            let z = model.split(&vec![Scalar::zero(); model.total_dim()]);
            omega_tube(model, &p, &z, &z) == Err(Error::OffSlice)
        },
    );
    rep
}

/// A slice point with rational entries in `[-1/10, 1/10]`.
pub fn random_slice_point<R: Rng>(model: &TangentModel, rng: &mut R) -> TubePoint {
    let mut r = || Scalar::new(rng.random_range(-10i64..=10).into(), 100.into());
    let rho = (0..model.dim_m()).map(|_| r()).collect();
    let nu = (0..model.dim_slice()).map(|_| r()).collect();
    TubePoint::on_slice(model, rho, nu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::exactlin::{frac, int};
    use crate::liecore::{InnerProduct, LieAlgebra};
    use crate::pointmodel::build_model;
    use crate::splitting::{build_chain, ProblemInstance, SliceRep};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn model(inst: &ProblemInstance) -> TangentModel {
        build_model(&build_chain(inst).unwrap(), inst).unwrap()
    }

    fn so3_mu(mu: [i64; 3]) -> TangentModel {
        let inst = ProblemInstance::new(
            LieAlgebra::so3(),
            vec![unit_vec(3, 0)],
            vec![],
            Covector(mu.iter().map(|&x| int(x)).collect()),
            InnerProduct::identity(3),
            SliceRep::empty(0),
        )
        .unwrap();
        model(&inst)
    }

    #[test]
    fn expm_of_zero_and_rotation() {
        let z = DMatrix::<f64>::zeros(3, 3);
        assert_eq!(expm(&z, 1e-12).unwrap(), DMatrix::identity(3, 3));
        let t = 2.5f64;
        let a = DMatrix::from_row_slice(2, 2, &[0.0, -t, t, 0.0]);
        let e = expm(&a, 1e-12).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()]);
        assert!((e - expected).amax() < 1e-13);
    }

    #[test]
    fn expm_rejects_nan() {
        let a = DMatrix::from_element(2, 2, f64::NAN);
        assert!(matches!(expm(&a, 1e-9), Err(Error::SeriesNotConverged { .. })));
    }

    #[test]
    fn phi_tilde_at_origin_is_mu() {
        let m = model(&catalog::so3xso3_diagonal());
        let v = phi_tilde(&m, &TubePoint::origin(&m), FloatTolerance::default()).unwrap();
        let mu: Vec<f64> = m.instance().mu().coords().iter().map(to_f64).collect();
        assert_eq!(v, mu);
    }

    #[test]
    fn phi_tilde_rotates_about_e3() {
        let m = so3_mu([1, 2, 3]);
        for t in [0.3f64, -1.7, 3.0] {
            let v = phi_tilde_f64(&m, &[0.0, 0.0, t], &[], &[], 1e-12).unwrap();
            let (c, s) = (t.cos(), t.sin());
            let expected = [c * 1.0 - s * 2.0, s * 1.0 + c * 2.0, 3.0];
            for i in 0..3 {
                assert!((v[i] - expected[i]).abs() <= 1e-9, "t={t} i={i}: {} vs {}", v[i], expected[i]);
            }
        }
    }

    #[test]
    fn abelian_phi_tilde_ignores_xi() {
        let inst = catalog::torus(3, 1, catalog::torus_mu(3)).unwrap();
        let m = model(&inst);
        let rho = [0.25, -1.0, 2.0];
        let a = phi_tilde_f64(&m, &[0.0; 3], &rho, &[], 1e-12).unwrap();
        let b = phi_tilde_f64(&m, &[1.0, -2.0, 0.5], &rho, &[], 1e-12).unwrap();
        assert_eq!(a, b);
        let mu = catalog::torus_mu(3);
        for i in 0..3 {
            assert!((a[i] - (to_f64(&mu[i]) + rho[i])).abs() < 1e-15);
        }
    }

    #[test]
    fn omega_tube_origin_matches_model() {
        for (name, inst) in catalog::all() {
            let m = model(&inst);
            let g = omega_tube_gram(&m, &TubePoint::origin(&m)).unwrap();
            assert_eq!(g, *m.omega().gram(), "{name}");
        }
    }

    #[test]
    fn omega_tube_hand_expansion_so3() {
        // mu = e3*, h = span(e1): n = span(a, r), tangent vectors along n only
        let m = model(&catalog::so3_generic(0));
        let rho = vec![frac(1, 7)];
        let p = TubePoint::on_slice(&m, rho.clone(), vec![]);
        let v = |i: usize| m.split(&unit_vec(m.total_dim(), i));
        let (v1, v2) = (v(1), v(2));
        let x1 = m.lift(&v1.u);
        let x2 = m.lift(&v2.u);
        let br = m.instance().algebra().bracket(&x1, &x2);
        let mu_rho = add_vec(m.instance().mu().coords(), m.embed_rho(&rho).coords());
        let expected = Covector(mu_rho).pair(&br);
        assert_eq!(omega_tube(&m, &p, &v1, &v2).unwrap(), expected);
    }

    #[test]
    fn abelian_omega_tube_ignores_rho() {
        let m = model(&catalog::torus(3, 1, catalog::torus_mu(3)).unwrap());
        let p = TubePoint::on_slice(&m, vec![int(5), int(-3), frac(1, 2)], vec![]);
        assert_eq!(omega_tube_gram(&m, &p).unwrap(), *m.omega().gram());
    }

    #[test]
    fn off_slice_is_rejected() {
        let m = model(&catalog::so3_generic(0));
        let mut p = TubePoint::origin(&m);
        p.xi[2] = int(1);
        let z = m.split(&vec![int(0); m.total_dim()]);
        assert_eq!(omega_tube(&m, &p, &z, &z), Err(Error::OffSlice));
    }

    #[test]
    fn finite_differences_match_dphi() {
        for (name, inst) in catalog::all() {
            let m = model(&inst);
            let e = dphi_fd_max_error(&m).unwrap();
            assert!(e < 1e-6, "{name}: {e}");
        }
    }

    #[test]
    fn abelian_finite_difference_is_exact_up_to_rounding() {
        let m = model(&catalog::torus(4, 2, catalog::torus_mu(4)).unwrap());
        assert!(dphi_fd_max_error(&m).unwrap() < 1e-10);
    }

    #[test]
    fn equivariance_and_nondegeneracy() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (name, inst) in catalog::all() {
            let m = model(&inst);
            let dev = phi_equivariance_max_deviation(&m, 20, &mut rng).unwrap();
            assert!(dev < 1e-9, "{name}: {dev}");
            let rep = omega_tube_checks(&m, 5, &mut rng);
            assert!(rep.all_passed(), "{name}\n{rep}");
        }
    }

    #[test]
    fn abelian_equivariance_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = model(&catalog::torus(3, 2, catalog::torus_mu(3)).unwrap());
        assert_eq!(phi_equivariance_max_deviation(&m, 5, &mut rng).unwrap(), 0.0);
    }
}
