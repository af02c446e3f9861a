//! Seeded random valid instances over abelian algebras, `so(3)` and
//! `so(3) ⊕ so(3)`.

use num::Zero;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactlin::{combine, int, unit_vec, Matrix, Scalar, Subspace};
use crate::liecore::{Covector, InnerProduct, LieAlgebra};
use crate::splitting::{ProblemInstance, SliceRep};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Abelian,
    So3,
    So3xSo3,
}

fn small_rational<R: Rng>(rng: &mut R) -> Scalar {
    Scalar::new(rng.random_range(-4i64..=4).into(), rng.random_range(1i64..=3).into())
}

fn random_vec<R: Rng>(rng: &mut R, n: usize) -> Vec<Scalar> {
    loop {
        let v: Vec<Scalar> = (0..n).map(|_| small_rational(rng)).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

fn random_in<R: Rng>(rng: &mut R, s: &Subspace) -> Vec<Scalar> {
    let vs = s.vectors();
    loop {
        let c: Vec<Scalar> = (0..vs.len()).map(|_| small_rational(rng)).collect();
        let v = combine(s.ambient_dim(), &c, &vs);
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

/// `{x : [x, h] ⊆ h}`.
pub fn normalizer(l: &LieAlgebra, h: &Subspace) -> Subspace {
    let n = l.dim();
    let perp = h
        .orth_complement_in(&Subspace::full(n), &crate::exactlin::BilinearForm::new(Matrix::identity(n)))
        .expect("h lives in g");
    let mut rows = Vec::new();
    for w in perp.vectors() {
        for y in h.vectors() {
            rows.push((0..n).map(|i| crate::exactlin::dot(&w, &l.bracket(&unit_vec(n, i), &y))).collect());
        }
    }
    if rows.is_empty() {
        return Subspace::full(n);
    }
    Matrix::from_rows(n, &rows).kernel()
}

fn random_slice<R: Rng>(rng: &mut R, gm_dim: usize) -> SliceRep {
    let dim = *[0usize, 2, 4].choose(rng).expect("nonempty");
    let omega = SliceRep::standard_omega(dim);
    let action = (0..gm_dim)
        .map(|_| {
            // weighted rotations are infinitesimally symplectic for the standard form
            let mut a = Matrix::zeros(dim, dim);
            for k in 0..dim / 2 {
                let w = int(rng.random_range(-2i64..=2));
                a.set(2 * k, 2 * k + 1, -w.clone());
                a.set(2 * k + 1, 2 * k, w);
            }
            a
        })
        .collect();
    SliceRep::new(omega, action).expect("square blocks")
}

fn so3_subalgebra<R: Rng>(rng: &mut R, mu: &[Scalar], offset: usize, n: usize) -> Vec<Vec<Scalar>> {
    let embed = |v: Vec<Scalar>| {
        let mut x = vec![Scalar::zero(); n];
        for (i, c) in v.into_iter().enumerate() {
            x[offset + i] = c;
        }
        x
    };
    match rng.random_range(0..4) {
        0 => vec![],
        1 => vec![embed(random_vec(rng, 3))],
        2 if mu.iter().any(|x| !x.is_zero()) => vec![embed(mu.to_vec())],
        _ => (0..3).map(|i| embed(unit_vec(3, i))).collect(),
    }
}

fn random_mu<R: Rng>(rng: &mut R, n: usize) -> Vec<Scalar> {
    if rng.random_bool(0.2) {
        vec![Scalar::zero(); n]
    } else {
        (0..n).map(|_| small_rational(rng)).collect()
    }
}

/// One random valid instance of the given family.
pub fn random_instance<R: Rng>(rng: &mut R, family: Family) -> ProblemInstance {
    let (l, mu, h_basis) = match family {
        Family::Abelian => {
            let n = rng.random_range(1..=5);
            let k = rng.random_range(0..=n);
            let h = (0..k).map(|_| random_vec(rng, n)).collect::<Vec<_>>();
            let h = Subspace::from_spanning(n, h).vectors();
            (LieAlgebra::abelian(n), random_mu(rng, n), h)
        }
        Family::So3 => {
            let mu = random_mu(rng, 3);
            let h = so3_subalgebra(rng, &mu, 0, 3);
            (LieAlgebra::so3(), mu, h)
        }
        Family::So3xSo3 => {
            let l = LieAlgebra::so3().direct_sum(&LieAlgebra::so3());
            let mu = random_mu(rng, 6);
            let h = if rng.random_bool(0.4) {
                // diagonal so(3)
                (0..3)
                    .map(|i| {
                        let mut v = unit_vec(6, i);
                        v[i + 3] = int(1);
                        v
                    })
                    .collect()
            } else {
                let mut h = so3_subalgebra(rng, &mu[..3], 0, 6);
                h.extend(so3_subalgebra(rng, &mu[3..], 3, 6));
                h
            };
            (l, mu, h)
        }
    };
    let n = l.dim();
    let h = Subspace::from_spanning(n, h_basis.clone());
    let mu_c = Covector(mu);
    let candidates = l
        .stabilizer_of_momentum(&mu_c)
        .intersect(&normalizer(&l, &h))
        .expect("same ambient");
    let gm_basis = if !candidates.is_zero() && rng.random_bool(0.6) {
        vec![random_in(rng, &candidates)]
    } else {
        vec![]
    };
    let slice = random_slice(rng, gm_basis.len());
    ProblemInstance::new(l, h.vectors(), gm_basis, mu_c, InnerProduct::identity(n), slice)
        .expect("generated shapes agree")
}

/// `count` instances cycling through the families, reproducible from `seed`.
pub fn generate(seed: u64, count: usize) -> Vec<(String, ProblemInstance)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let families = [Family::Abelian, Family::So3, Family::So3xSo3];
    (0..count)
        .map(|i| {
            let f = families[i % families.len()];
            let tag = match f {
                Family::Abelian => "abelian",
                Family::So3 => "so3",
                Family::So3xSo3 => "so3xso3",
            };
            (format!("{tag}-{i:03}"), random_instance(&mut rng, f))
        })
        .collect()
}
