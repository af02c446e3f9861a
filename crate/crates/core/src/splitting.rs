//! Problem instances and the chain of `g_m`-invariant subspaces of `g`.
//!
//! All complements are taken orthogonally for the instance inner product,
//! which is required to be `ad(g_m)`-invariant, so every complement is
//! automatically `g_m`-invariant. The one exception is `r`, which must also
//! be Lagrangian for the Chu form; see [`build_chain`].

use num::{One, Zero};

use crate::check::{CheckReport, ValidationReport};
use crate::error::{Error, Result};
use crate::exactlin::{combine, frac, BilinearForm, Matrix, Scalar, Subspace};
use crate::liecore::{Covector, InnerProduct, LieAlgebra};

/// The symplectic slice `N1` with its linear `g_m` action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceRep {
    omega: BilinearForm,
    action: Vec<Matrix>,
}

impl SliceRep {
    /// `action[i]` is the generator of the `i`-th `g_m` basis vector.
    pub fn new(omega: Matrix, action: Vec<Matrix>) -> Result<Self> {
        if !omega.is_square() {
            return Err(Error::DimensionMismatch {
                context: "slice omega",
                expected: omega.rows(),
                got: omega.cols(),
            });
        }
        let d = omega.rows();
        for a in &action {
            if a.rows() != d || a.cols() != d {
                return Err(Error::DimensionMismatch {
                    context: "slice action matrix",
                    expected: d,
                    got: a.rows().max(a.cols()),
                });
            }
        }
        Ok(SliceRep {
            omega: BilinearForm::new(omega),
            action,
        })
    }

    pub fn empty(gm_dim: usize) -> Self {
        SliceRep {
            omega: BilinearForm::zero(0),
            action: vec![Matrix::zeros(0, 0); gm_dim],
        }
    }

    /// `dim` must be even; `omega = sum dq_k ^ dp_k` on pairs `(2k, 2k+1)`.
    pub fn standard_omega(dim: usize) -> Matrix {
        Matrix::from_fn(dim, dim, |i, j| {
            if i % 2 == 0 && j == i + 1 {
                Scalar::one()
            } else if j % 2 == 0 && i == j + 1 {
                -Scalar::one()
            } else {
                Scalar::zero()
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.omega.ambient_dim()
    }

    pub fn omega(&self) -> &BilinearForm {
        &self.omega
    }

    pub fn action(&self) -> &[Matrix] {
        &self.action
    }

    /// Generator for `sum_i coeffs[i] * (g_m basis)_i`.
    pub fn action_of(&self, coeffs: &[Scalar]) -> Matrix {
        assert_eq!(coeffs.len(), self.action.len());
        let d = self.dim();
        self.action
            .iter()
            .zip(coeffs)
            .fold(Matrix::zeros(d, d), |acc, (a, c)| acc.add(&a.scale(c)))
    }

    /// `Phi_N1(nu)` in the coordinates dual to the `g_m` basis:
    /// `<Phi(nu), x_i> = 1/2 omega(A_i nu, nu)`.
    pub fn momentum(&self, nu: &[Scalar]) -> Vec<Scalar> {
        let half = frac(1, 2);
        self.action
            .iter()
            .map(|a| &half * self.omega.eval(&a.mul_vec(nu), nu))
            .collect()
    }

    /// Exact derivative `DPhi_N1(nu) . dnu`, i.e. `omega(A_i nu, dnu)`.
    pub fn momentum_derivative(&self, nu: &[Scalar], dnu: &[Scalar]) -> Vec<Scalar> {
        self.action
            .iter()
            .map(|a| self.omega.eval(&a.mul_vec(nu), dnu))
            .collect()
    }
}

/// The linear data at a point `m` with momentum `mu`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemInstance {
    algebra: LieAlgebra,
    h: Subspace,
    gm_generators: Vec<Vec<Scalar>>,
    gm: Subspace,
    mu: Covector,
    ip: InnerProduct,
    slice: SliceRep,
    component_reps: Vec<Matrix>,
}

impl ProblemInstance {
    /// Shape checks only; the mathematical conditions are in [`validate`].
    ///
    /// [`validate`]: ProblemInstance::validate
    pub fn new(
        algebra: LieAlgebra,
        h_basis: Vec<Vec<Scalar>>,
        gm_basis: Vec<Vec<Scalar>>,
        mu: Covector,
        ip: InnerProduct,
        slice: SliceRep,
    ) -> Result<Self> {
        let n = algebra.dim();
        let len_check = |context: &'static str, len: usize| {
            if len != n {
                Err(Error::DimensionMismatch {
                    context,
                    expected: n,
                    got: len,
                })
            } else {
                Ok(())
            }
        };
        for v in &h_basis {
            len_check("h basis vector", v.len())?;
        }
        for v in &gm_basis {
            len_check("g_m basis vector", v.len())?;
        }
        len_check("mu", mu.len())?;
        len_check("inner product", ip.form().ambient_dim())?;
        let h = Subspace::from_spanning(n, h_basis.clone());
        if h.dim() != h_basis.len() {
            return Err(Error::DependentBasis("h"));
        }
        let gm = Subspace::from_spanning(n, gm_basis.clone());
        if gm.dim() != gm_basis.len() {
            return Err(Error::DependentBasis("g_m"));
        }
        if slice.action.len() != gm_basis.len() {
            return Err(Error::DimensionMismatch {
                context: "slice action count",
                expected: gm_basis.len(),
                got: slice.action.len(),
            });
        }
        Ok(ProblemInstance {
            algebra,
            h,
            gm_generators: gm_basis,
            gm,
            mu,
            ip,
            slice,
            component_reps: Vec::new(),
        })
    }

    /// Matrices `Ad_k` for representatives `k` of the components of `G_m`.
    ///
    /// The representatives are closed under composition (the closure must be
    /// finite) and the inner product is replaced by its average over that
    /// finite group, so it stays `ad(g_m)`-invariant whenever each `Ad_k`
    /// normalizes `g_m`.
    pub fn with_component_reps(mut self, reps: Vec<Matrix>) -> Result<Self> {
        let n = self.algebra.dim();
        for r in &reps {
            if r.rows() != n || r.cols() != n {
                return Err(Error::DimensionMismatch {
                    context: "g_m component representative",
                    expected: n,
                    got: r.rows().max(r.cols()),
                });
            }
        }
        if reps.is_empty() {
            return Ok(self);
        }
        let group = finite_closure(&reps, MAX_COMPONENT_GROUP)
            .ok_or_else(|| Error::ValidationFailed(vec!["validate.gm_components_finite_group".into()]))?;
        let g = self.ip.form().gram();
        let total = group
            .iter()
            .fold(Matrix::zeros(n, n), |acc, r| acc.add(&r.transpose().mul(g).mul(r)));
        let avg = total.scale(&Scalar::new(1.into(), (group.len() as i64).into()));
        self.ip = InnerProduct::new(avg)?;
        self.component_reps = reps;
        Ok(self)
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn h(&self) -> &Subspace {
        &self.h
    }

    pub fn gm(&self) -> &Subspace {
        &self.gm
    }

    /// The `g_m` basis as given; slice action matrices are keyed by it.
    pub fn gm_generators(&self) -> &[Vec<Scalar>] {
        &self.gm_generators
    }

    pub fn mu(&self) -> &Covector {
        &self.mu
    }

    pub fn ip(&self) -> &InnerProduct {
        &self.ip
    }

    pub fn slice(&self) -> &SliceRep {
        &self.slice
    }

    pub fn component_reps(&self) -> &[Matrix] {
        &self.component_reps
    }

    /// Coefficients of `x` in the given `g_m` basis.
    pub fn gm_coordinates(&self, x: &[Scalar]) -> Option<Vec<Scalar>> {
        if self.gm_generators.is_empty() {
            return crate::exactlin::is_zero_vec(x).then(Vec::new);
        }
        let m = Matrix::from_columns(self.dim(), &self.gm_generators);
        m.solve(x)
    }

    /// Slice generator of an element of `g_m`.
    pub fn slice_action_of(&self, x: &[Scalar]) -> Option<Matrix> {
        self.gm_coordinates(x).map(|c| self.slice.action_of(&c))
    }

    pub fn validate(&self) -> ValidationReport {
        let l = &self.algebra;
        let mut rep = CheckReport::new();

        let h_sub = l.check_subalgebra(&self.h);
        rep.push_with("validate.h_subalgebra", h_sub.is_ok(), || format!("{}", h_sub.clone().unwrap_err()));
        let gm_sub = l.check_subalgebra(&self.gm);
        rep.push_with("validate.gm_subalgebra", gm_sub.is_ok(), || format!("{}", gm_sub.clone().unwrap_err()));

        let bad_mu = self
            .gm_generators
            .iter()
            .position(|x| !l.coad(x, &self.mu).is_zero());
        rep.push_with("validate.gm_within_g_mu", bad_mu.is_none(), || {
            format!("ad*_x mu != 0 for g_m basis vector {}", bad_mu.unwrap())
        });

        let hv = self.h.vectors();
        let mut bad_norm = None;
        'outer: for (i, x) in self.gm_generators.iter().enumerate() {
            for (j, y) in hv.iter().enumerate() {
                if !self.h.contains_vector(&l.bracket(x, y)) {
                    bad_norm = Some((i, j));
                    break 'outer;
                }
            }
        }
        rep.push_with("validate.gm_normalizes_h", bad_norm.is_none(), || {
            let (i, j) = bad_norm.unwrap();
            format!("[g_m basis {i}, h basis {j}] is not in h")
        });

        let bad_ip = self
            .gm_generators
            .iter()
            .enumerate()
            .find_map(|(k, x)| self.ip.ad_invariance_failure(l, x).map(|(i, j)| (k, i, j)));
        rep.push_with("validate.ip_ad_gm_invariant", bad_ip.is_none(), || {
            let (k, i, j) = bad_ip.unwrap();
            format!("<[eta_{k}, e_{i}], e_{j}> + <e_{i}, [eta_{k}, e_{j}]> != 0")
        });

        let om = self.slice.omega.gram();
        rep.push("validate.slice_omega_antisymmetric", om.is_antisymmetric());
        rep.push(
            "validate.slice_omega_nondegenerate",
            !om.determinant().is_zero(),
        );

        let mut bad_sympl = None;
        for (i, a) in self.slice.action.iter().enumerate() {
            if !a.transpose().mul(om).add(&om.mul(a)).is_zero() {
                bad_sympl = Some(i);
                break;
            }
        }
        rep.push_with("validate.slice_action_symplectic", bad_sympl.is_none(), || {
            format!("action matrix {} is not infinitesimally symplectic", bad_sympl.unwrap())
        });

        let mut bad_hom = None;
        let gens = &self.gm_generators;
        'hom: for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                let br = l.bracket(&gens[i], &gens[j]);
                let (ai, aj) = (&self.slice.action[i], &self.slice.action[j]);
                let comm = ai.mul(aj).sub(&aj.mul(ai));
                let ok = self.slice_action_of(&br).is_some_and(|abr| abr == comm);
                if !ok {
                    bad_hom = Some((i, j));
                    break 'hom;
                }
            }
        }
        rep.push_with("validate.slice_action_homomorphism", bad_hom.is_none(), || {
            let (i, j) = bad_hom.unwrap();
            format!("action([x_{i}, x_{j}]) != [action(x_{i}), action(x_{j})]")
        });

        if !self.component_reps.is_empty() {
            self.validate_component_reps(&mut rep);
        }
        rep
    }

    fn validate_component_reps(&self, rep: &mut CheckReport) {
        let l = &self.algebra;
        let n = self.dim();
        let g = self.ip.form().gram();
        let basis: Vec<Vec<Scalar>> = (0..n).map(|i| crate::exactlin::unit_vec(n, i)).collect();
        let reps = &self.component_reps;
        rep.push(
            "validate.gm_components_invertible",
            reps.iter().all(|r| !r.determinant().is_zero()),
        );
        rep.push(
            "validate.gm_components_bracket_automorphism",
            reps.iter().all(|r| {
                basis.iter().all(|x| {
                    basis.iter().all(|y| {
                        r.mul_vec(&l.bracket(x, y)) == l.bracket(&r.mul_vec(x), &r.mul_vec(y))
                    })
                })
            }),
        );
        rep.push(
            "validate.gm_components_preserve_ip",
            reps.iter().all(|r| r.transpose().mul(g).mul(r) == *g),
        );
        rep.push(
            "validate.gm_components_preserve_h",
            reps.iter().all(|r| self.h.is_invariant_under(r)),
        );
        rep.push(
            "validate.gm_components_preserve_gm",
            reps.iter().all(|r| self.gm.is_invariant_under(r)),
        );
        // Ad*_{k^-1} mu = mu  <=>  mu^T Ad_k = mu^T
        rep.push(
            "validate.gm_components_fix_mu",
            reps.iter()
                .all(|r| r.transpose().mul_vec(self.mu.coords()) == self.mu.coords()),
        );
    }
}

const MAX_COMPONENT_GROUP: usize = 256;

/// The group generated by `gens`, if it has at most `limit` elements.
fn finite_closure(gens: &[Matrix], limit: usize) -> Option<Vec<Matrix>> {
    let n = gens[0].rows();
    let mut group = vec![Matrix::identity(n)];
    let mut frontier = group.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for x in &frontier {
            for g in gens {
                let y = x.mul(g);
                if !group.contains(&y) {
                    if group.len() >= limit {
                        return None;
                    }
                    group.push(y.clone());
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    Some(group)
}

/// Every named subspace of the splitting of `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingChain {
    pub gm: Subspace,
    pub g_mu: Subspace,
    pub h: Subspace,
    pub h_m: Subspace,
    pub h_mu: Subspace,
    pub hm_perp_in_gm: Subspace,
    pub p: Subspace,
    pub b: Subspace,
    pub h_perp_mu: Subspace,
    pub h_alpha: Subspace,
    pub a: Subspace,
    pub s: Subspace,
    pub q: Subspace,
    pub ntilde: Subspace,
    pub r: Subspace,
    /// `(h^{⊥mu})^{⊥g} = ñ ⊕ r`
    pub h_perp_mu_complement: Subspace,
    pub m_space: Subspace,
    pub n_space: Subspace,
}

/// Predicted dimensions derived from the chain alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimReport {
    pub n1: usize,
    pub x_m: usize,
    pub n1_tilde: usize,
    pub ker_dphi_g: usize,
    pub ker_dphi_h: usize,
    pub model_total: usize,
}

impl SplittingChain {
    /// Ordered basis of `m`: `p` first, then `b`.
    pub fn m_basis(&self) -> Vec<Vec<Scalar>> {
        let mut v = self.p.vectors();
        v.extend(self.b.vectors());
        v
    }

    /// Ordered basis of `n`: `a`, `s`, `ñ`, `r`.
    pub fn n_basis(&self) -> Vec<Vec<Scalar>> {
        let mut v = self.a.vectors();
        v.extend(self.s.vectors());
        v.extend(self.ntilde.vectors());
        v.extend(self.r.vectors());
        v
    }

    /// `(name, subspace)` pairs in report order.
    pub fn named(&self) -> Vec<(&'static str, &Subspace)> {
        vec![
            ("g_m", &self.gm),
            ("g_mu", &self.g_mu),
            ("h", &self.h),
            ("h_m", &self.h_m),
            ("h_mu", &self.h_mu),
            ("h_alpha", &self.h_alpha),
            ("h_perp_mu", &self.h_perp_mu),
            ("hm_perp_in_gm", &self.hm_perp_in_gm),
            ("p", &self.p),
            ("b", &self.b),
            ("a", &self.a),
            ("s(G,H,mu)", &self.s),
            ("q", &self.q),
            ("n_tilde", &self.ntilde),
            ("r", &self.r),
            ("h_perp_mu_complement", &self.h_perp_mu_complement),
            ("m", &self.m_space),
            ("n", &self.n_space),
        ]
    }

    /// The eight defining identities, numbered as in [`build_chain`], plus
    /// the inclusion-exclusion count for `dim s`.
    pub fn identity_checks(&self, inst: &ProblemInstance) -> CheckReport {
        let mut rep = CheckReport::new();
        let n = inst.dim();
        let g = Subspace::full(n);
        let dec = |whole: &Subspace, parts: &[&Subspace]| {
            Subspace::is_direct_decomposition(whole, parts).unwrap_or(false)
        };

        let h_mu_split = dec(&self.h_mu, &[&self.h_m, &self.p]);
        let g_m_split = dec(&self.gm, &[&self.h_m, &self.hm_perp_in_gm]);
        let g_mu_split = dec(
            &self.g_mu,
            &[&self.h_m, &self.p, &self.hm_perp_in_gm, &self.b],
        );
        rep.push(
            "chain.1_g_mu_eq_h_m+p+hm_perp+b",
            h_mu_split && g_m_split && g_mu_split,
        );
        rep.push(
            "chain.2_h_alpha_eq_h_mu+a",
            dec(&self.h_alpha, &[&self.h_mu, &self.a]),
        );
        rep.push(
            "chain.3_h_perp_mu_eq_g_mu+a+s",
            dec(&self.h_perp_mu, &[&self.g_mu, &self.a, &self.s]),
        );
        rep.push("chain.4_q_eq_a+s", dec(&self.q, &[&self.a, &self.s]));
        let ntilde_transverse = self
            .ntilde
            .intersect(&self.h_perp_mu)
            .map(|x| x.is_zero())
            .unwrap_or(false);
        rep.push(
            "chain.5_h_eq_h_alpha+n_tilde",
            dec(&self.h, &[&self.h_alpha, &self.ntilde]) && ntilde_transverse,
        );
        rep.push(
            "chain.6_g_eq_h_perp_mu+n_tilde+r",
            dec(&g, &[&self.h_perp_mu, &self.ntilde, &self.r])
                && dec(&self.h_perp_mu_complement, &[&self.ntilde, &self.r]),
        );
        rep.push(
            "chain.7_g_eq_g_m+m+n",
            dec(&g, &[&self.gm, &self.m_space, &self.n_space])
                && dec(&self.m_space, &[&self.p, &self.b])
                && dec(&self.n_space, &[&self.q, &self.ntilde, &self.r]),
        );

        let l = inst.algebra();
        let mut bad = None;
        'inv: for eta in inst.gm_generators() {
            let ad = l.ad_matrix(eta);
            for (name, v) in self.named() {
                if !v.is_invariant_under(&ad) {
                    bad = Some(name);
                    break 'inv;
                }
            }
        }
        rep.push_with("chain.8_ad_gm_invariant", bad.is_none(), || {
            format!("{} is not ad(g_m)-invariant", bad.unwrap())
        });

        let lhs = self.s.dim() as isize;
        let rhs = self.h_perp_mu.dim() as isize - self.g_mu.dim() as isize
            - self.h_alpha.dim() as isize
            + self.h_mu.dim() as isize;
        rep.push_with("chain.dim_s_inclusion_exclusion", lhs == rhs, || {
            format!("dim s = {lhs}, predicted {rhs}")
        });
        rep
    }

    /// Dimension bookkeeping for the compatible slice.
    pub fn dim_formulas(&self, slice_dim: usize) -> DimReport {
        let b = self.b.dim();
        let ker_g = self.m_space.dim() + slice_dim;
        DimReport {
            n1: slice_dim,
            x_m: 2 * b,
            n1_tilde: slice_dim + 2 * b + self.s.dim(),
            ker_dphi_g: ker_g,
            ker_dphi_h: ker_g + self.q.dim() + b,
            model_total: self.gm.ambient_dim() - self.gm.dim() + self.m_space.dim() + slice_dim,
        }
    }
}

pub fn dim_formulas(chain: &SplittingChain, slice_dim: usize) -> DimReport {
    chain.dim_formulas(slice_dim)
}

/// Builds the splitting of `g` and asserts its defining identities:
///
/// 1. `g_mu = h_m ⊕ p ⊕ h_m^⊥ ⊕ b`, with `h_mu = h_m ⊕ p`, `g_m = h_m ⊕ h_m^⊥`
/// 2. `h_alpha = h_mu ⊕ a`
/// 3. `h^{⊥mu} = g_mu ⊕ a ⊕ s`
/// 4. `q = a ⊕ s`
/// 5. `h = h_alpha ⊕ ñ` and `ñ ∩ h^{⊥mu} = 0`
/// 6. `g = h^{⊥mu} ⊕ ñ ⊕ r`
/// 7. `g = g_m ⊕ m ⊕ n`, `m = p ⊕ b`, `n = q ⊕ ñ ⊕ r`
/// 8. every subspace is `ad(g_m)`-invariant
///
/// `ñ` is the complement of `h_alpha` in `h`. The complement of
/// `h^{⊥mu} ⊕ ñ` fixes `n`; inside `n`, `r` is then taken in the Chu-orthogonal
/// of `s ⊕ ñ` and corrected to be Chu-Lagrangian. Those two conditions are
/// what make `r·m` fit into the `H` decomposition next to `ñ·m` and `s·m`.
pub fn build_chain(inst: &ProblemInstance) -> Result<SplittingChain> {
    let report = inst.validate();
    if !report.all_passed() {
        return Err(Error::ValidationFailed(report.failed_names()));
    }
    let l = inst.algebra();
    let n = inst.dim();
    let ip = inst.ip().form();
    let mu = inst.mu();
    let g = Subspace::full(n);
    let gm = inst.gm().clone();
    let h = inst.h().clone();

    let g_mu = l.stabilizer_of_momentum(mu);
    let h_m = h.intersect(&gm)?;
    let h_mu = h.intersect(&g_mu)?;
    let hm_perp_in_gm = h_m.orth_complement_in(&gm, ip)?;
    let p = h_m.orth_complement_in(&h_mu, ip)?;
    let b = gm.sum(&h_mu)?.orth_complement_in(&g_mu, ip)?;

    let h_perp_mu = l.h_perp_mu(&h, mu)?;
    let h_alpha = l.h_alpha(&h, mu)?;
    let a = h_mu.orth_complement_in(&h_alpha, ip)?;
    let s = g_mu.sum(&h_alpha)?.orth_complement_in(&h_perp_mu, ip)?;
    let q = a.sum(&s)?;
    let ntilde = h_alpha.orth_complement_in(&h, ip)?;

    let c0 = h_perp_mu.sum(&ntilde)?.orth_complement_in(&g, ip)?;
    let n_space = Subspace::sum_all(n, &[&q, &ntilde, &c0])?;
    let r = lagrangian_r(l, mu, &a, &s, &ntilde, &n_space, ip)?;
    let h_perp_mu_complement = ntilde.sum(&r)?;
    let m_space = p.sum(&b)?;

    let chain = SplittingChain {
        gm,
        g_mu,
        h,
        h_m,
        h_mu,
        hm_perp_in_gm,
        p,
        b,
        h_perp_mu,
        h_alpha,
        a,
        s,
        q,
        ntilde,
        r,
        h_perp_mu_complement,
        m_space,
        n_space,
    };
    let checks = chain.identity_checks(inst);
    if let Some((idx, c)) = checks.checks.iter().enumerate().find(|(_, c)| !c.passed) {
        return Err(Error::ChainInconsistent {
            index: idx + 1,
            what: c.name.clone(),
        });
    }
    Ok(chain)
}

/// A Chu-Lagrangian complement of `a` inside the Chu-orthogonal of `s ⊕ ñ`
/// in `n`.
fn lagrangian_r(
    l: &LieAlgebra,
    mu: &Covector,
    a: &Subspace,
    s: &Subspace,
    ntilde: &Subspace,
    n_space: &Subspace,
    ip: &BilinearForm,
) -> Result<Subspace> {
    let dim = l.dim();
    let psi = l.chu_form(mu);
    let sn = s.sum(ntilde)?;
    let w = sn.form_orthogonal_in(n_space, &psi)?;
    if !w.contains(a) {
        return Err(Error::ChainInconsistent {
            index: 6,
            what: "a is not Chu-orthogonal to s + n_tilde".into(),
        });
    }
    let c = a.orth_complement_in(&w, ip)?;
    if c.dim() != a.dim() {
        return Err(Error::ChainInconsistent {
            index: 6,
            what: format!("dim r = {} but dim a = {}", c.dim(), a.dim()),
        });
    }
    if a.is_zero() {
        return Ok(c);
    }
    let av = a.vectors();
    let cv = c.vectors();
    let pairing = psi.gram_between_vectors(&av, &cv);
    let Some(pinv) = pairing.inverse() else {
        return Err(Error::ChainInconsistent {
            index: 6,
            what: "Chu pairing between a and its complement is degenerate".into(),
        });
    };
    // x_j = c_j + sum_i X_ij a_i with X^T = -1/2 Psi(C, C) P^{-1}
    let xt = psi.gram_on_vectors(&cv).mul(&pinv).scale(&frac(-1, 2));
    let corrected = cv.iter().enumerate().map(|(j, cj)| {
        let shift = combine(dim, &xt.row(j), &av);
        crate::exactlin::add_vec(cj, &shift)
    });
    Ok(Subspace::from_spanning(dim, corrected.collect::<Vec<_>>()))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::exactlin::{int, unit_vec};

    fn so3_with(h: Vec<Vec<Scalar>>, gm: Vec<Vec<Scalar>>, mu: Vec<Scalar>, ip: InnerProduct) -> ProblemInstance {
        let k = gm.len();
        ProblemInstance::new(LieAlgebra::so3(), h, gm, Covector(mu), ip, SliceRep::empty(k)).unwrap()
    }

    fn dims(c: &SplittingChain) -> [usize; 7] {
        [c.h_mu.dim(), c.p.dim(), c.b.dim(), c.a.dim(), c.s.dim(), c.ntilde.dim(), c.r.dim()]
    }

    /// Dimensions from ranks of pairing matrices alone.
    fn rank_oracle(inst: &ProblemInstance) -> (usize, usize, usize, usize) {
        let l = inst.algebra();
        let n = l.dim();
        let mu = inst.mu();
        let e: Vec<_> = (0..n).map(|i| unit_vec(n, i)).collect();
        let hv = inst.h().vectors();
        let pair = |xs: &[Vec<Scalar>], ys: &[Vec<Scalar>]| {
            Matrix::from_fn(xs.len(), ys.len(), |i, j| mu.pair(&l.bracket(&xs[i], &ys[j])))
        };
        let g_mu = n - pair(&e, &e).rank();
        let h_perp = n - pair(&hv, &e).rank();
        let h_alpha = hv.len() - pair(&hv, &hv).rank();
        let h_mu = hv.len() - pair(&hv, &e).rank();
        (g_mu, h_perp, h_alpha, h_mu)
    }

    #[test]
    fn validate_generic_so3_passes() {
        let rep = catalog::so3_generic(0).validate();
        assert!(rep.all_passed(), "{rep}");
    }

    #[test]
    fn validate_rejects_gm_outside_g_mu() {
        let inst = so3_with(vec![unit_vec(3, 0)], vec![unit_vec(3, 2)], unit_vec(3, 0), InnerProduct::identity(3));
        let rep = inst.validate();
        let c = rep.get("validate.gm_within_g_mu").unwrap();
        assert!(!c.passed);
        assert!(c.detail.as_deref().unwrap().contains('0'));
    }

    #[test]
    fn validate_rejects_non_invariant_ip() {
        let ip = InnerProduct::new(Matrix::from_i64(3, 3, &[1, 0, 0, 0, 2, 0, 0, 0, 3])).unwrap();
        let inst = so3_with(vec![unit_vec(3, 2)], vec![unit_vec(3, 2)], unit_vec(3, 2), ip);
        let rep = inst.validate();
        assert!(!rep.get("validate.ip_ad_gm_invariant").unwrap().passed);
        assert_eq!(rep.failed_names(), vec!["validate.ip_ad_gm_invariant".to_string()]);
        assert!(matches!(build_chain(&inst), Err(Error::ValidationFailed(_))));
    }

    #[test]
    fn validate_rejects_non_symplectic_slice_action() {
        let slice = SliceRep::new(SliceRep::standard_omega(2), vec![Matrix::identity(2)]).unwrap();
        let inst = ProblemInstance::new(
            LieAlgebra::so3(),
            vec![unit_vec(3, 2)],
            vec![unit_vec(3, 2)],
            Covector(unit_vec(3, 2)),
            InnerProduct::identity(3),
            slice,
        )
        .unwrap();
        assert_eq!(inst.validate().failed_names(), vec!["validate.slice_action_symplectic".to_string()]);
    }

    #[test]
    fn shape_errors() {
        let bad = ProblemInstance::new(
            LieAlgebra::so3(),
            vec![unit_vec(3, 0), unit_vec(3, 0)],
            vec![],
            Covector(zero_mu()),
            InnerProduct::identity(3),
            SliceRep::empty(0),
        );
        assert_eq!(bad, Err(Error::DependentBasis("h")));
        let bad = ProblemInstance::new(
            LieAlgebra::so3(),
            vec![],
            vec![unit_vec(3, 2)],
            Covector(zero_mu()),
            InnerProduct::identity(3),
            SliceRep::empty(0),
        );
        assert!(matches!(bad, Err(Error::DimensionMismatch { context: "slice action count", .. })));
    }

    fn zero_mu() -> Vec<Scalar> {
        vec![int(0); 3]
    }

    #[test]
    fn so3_case_generic() {
        let c = build_chain(&catalog::so3_generic(0)).unwrap();
        assert_eq!(dims(&c), [0, 0, 1, 1, 0, 0, 1]);
        assert_eq!(c.b, Subspace::coordinate(3, [2]));
        assert_eq!(c.a, Subspace::coordinate(3, [0]));
    }

    #[test]
    fn so3_case_collinear() {
        let c = build_chain(&catalog::so3_collinear(0)).unwrap();
        assert_eq!(dims(&c), [1, 1, 0, 0, 2, 0, 0]);
        assert_eq!(c.s, Subspace::coordinate(3, [0, 1]));
    }

    #[test]
    fn so3_case_zero_momentum() {
        let c = build_chain(&catalog::so3_zero(0)).unwrap();
        assert_eq!(dims(&c), [1, 1, 2, 0, 0, 0, 0]);
        assert_eq!(c.b, Subspace::coordinate(3, [0, 1]));
    }

    #[test]
    fn torus_dims() {
        for n in 1..=5 {
            for k in 0..=n {
                let c = build_chain(&catalog::torus(n, k, catalog::torus_mu(n)).unwrap()).unwrap();
                assert_eq!((c.s.dim(), c.a.dim(), c.b.dim()), (0, 0, n - k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn h_equal_g_has_no_s_a_b() {
        let inst = so3_with(
            (0..3).map(|i| unit_vec(3, i)).collect(),
            vec![],
            vec![int(1), int(2), int(-1)],
            InnerProduct::identity(3),
        );
        let c = build_chain(&inst).unwrap();
        assert_eq!((c.s.dim(), c.a.dim(), c.b.dim(), c.q.dim()), (0, 0, 0, 0));
        assert_eq!(c.dim_formulas(4).n1_tilde, 4);
    }

    #[test]
    fn so3xso3_diagonal_matches_rank_oracle() {
        let l = LieAlgebra::so3().direct_sum(&LieAlgebra::so3());
        let diag = |i: usize| {
            let mut v = unit_vec(6, i);
            v[i + 3] = int(1);
            v
        };
        let mut mu = unit_vec(6, 2);
        mu[5] = int(2);
        let inst = ProblemInstance::new(
            l,
            (0..3).map(diag).collect(),
            vec![],
            Covector(mu),
            InnerProduct::identity(6),
            SliceRep::empty(0),
        )
        .unwrap();
        let (g_mu, h_perp, h_alpha, h_mu) = rank_oracle(&inst);
        let c = build_chain(&inst).unwrap();
        assert_eq!(c.g_mu.dim(), g_mu);
        assert_eq!(c.h_perp_mu.dim(), h_perp);
        assert_eq!(c.h_alpha.dim(), h_alpha);
        assert_eq!(c.h_mu.dim(), h_mu);
        assert_eq!(c.s.dim(), h_perp + h_mu - g_mu - h_alpha);
        assert_eq!(c.a.dim(), h_alpha - h_mu);
        assert_eq!(c.b.dim(), g_mu - h_mu);
    }

    #[test]
    fn dim_formula_examples() {
        let d = build_chain(&catalog::so3_generic(4)).unwrap().dim_formulas(4);
        assert_eq!(d.n1_tilde, 6);
        assert_eq!(d.x_m, 2);
        let d = build_chain(&catalog::so3_collinear(4)).unwrap().dim_formulas(4);
        assert_eq!(d.n1_tilde, 6);
        assert_eq!(d.x_m, 0);
        assert_eq!(d.ker_dphi_h - d.ker_dphi_g, 2);
    }

    #[test]
    fn r_is_chu_lagrangian_and_orthogonal_to_ntilde() {
        // identity ip on a non-generic momentum: a plain orthogonal complement fails here
        let l = LieAlgebra::so3().direct_sum(&LieAlgebra::so3());
        let diag = |i: usize| {
            let mut v = unit_vec(6, i);
            v[i + 3] = int(1);
            v
        };
        let mu: Vec<Scalar> = [1, 0, 2, 0, 1, 1].iter().map(|&x| int(x)).collect();
        let inst = ProblemInstance::new(
            l.clone(),
            (0..3).map(diag).collect(),
            vec![],
            Covector(mu.clone()),
            InnerProduct::identity(6),
            SliceRep::empty(0),
        )
        .unwrap();
        let c = build_chain(&inst).unwrap();
        let psi = l.chu_form(&Covector(mu));
        assert!(c.r.is_isotropic(&psi));
        assert!(psi.vanishes_between(&c.r, &c.ntilde));
        assert!(psi.vanishes_between(&c.r, &c.s));
        assert!(psi.gram_between_vectors(&c.a.vectors(), &c.r.vectors()).determinant() != Scalar::zero());
    }

    #[test]
    fn all_identity_checks_pass_on_catalog() {
        for (name, inst) in catalog::all() {
            let c = build_chain(&inst).unwrap();
            let rep = c.identity_checks(&inst);
            assert!(rep.all_passed(), "{name}\n{rep}");
            assert_eq!(rep.len(), 9);
        }
    }

    #[test]
    fn component_reps_average_and_validate() {
        let flip = Matrix::from_i64(3, 3, &[-1, 0, 0, 0, -1, 0, 0, 0, 1]);
        let ip = InnerProduct::new(Matrix::from_i64(3, 3, &[2, 0, 0, 0, 2, 0, 0, 0, 1])).unwrap();
        let inst = so3_with(vec![unit_vec(3, 2)], vec![unit_vec(3, 2)], unit_vec(3, 2), ip)
            .with_component_reps(vec![flip])
            .unwrap();
        let rep = inst.validate();
        assert!(rep.all_passed(), "{rep}");
        assert!(rep.get("validate.gm_components_fix_mu").is_some());
        build_chain(&inst).unwrap();
    }

    #[test]
    fn component_rep_moving_mu_is_reported() {
        let flip = Matrix::from_i64(3, 3, &[1, 0, 0, 0, -1, 0, 0, 0, -1]);
        let inst = so3_with(vec![unit_vec(3, 2)], vec![unit_vec(3, 2)], unit_vec(3, 2), InnerProduct::identity(3))
            .with_component_reps(vec![flip])
            .unwrap();
        let failed = inst.validate().failed_names();
        assert!(failed.contains(&"validate.gm_components_fix_mu".to_string()), "{failed:?}");
    }

    #[test]
    fn infinite_component_group_is_rejected() {
        let shear = Matrix::from_i64(3, 3, &[1, 1, 0, 0, 1, 0, 0, 0, 1]);
        let inst = so3_with(vec![], vec![], zero_mu(), InnerProduct::identity(3));
        assert!(matches!(inst.with_component_reps(vec![shear]), Err(Error::ValidationFailed(_))));
    }

    #[test]
    fn slice_momentum_of_rotation() {
        let s = SliceRep::new(SliceRep::standard_omega(2), vec![Matrix::from_i64(2, 2, &[0, -1, 1, 0])]).unwrap();
        // omega(A nu, nu) with A nu = (-y, x): (-y)*y - x*x
        let nu = vec![int(1), int(2)];
        assert_eq!(s.momentum(&nu), vec![frac(-5, 2)]);
        assert_eq!(s.momentum_derivative(&nu, &nu), vec![int(-5)]);
    }
}
