//! Small hand-built instances: the three `so(3)` cases, tori and a diagonal
//! `so(3) ⊕ so(3)` instance with a nontrivial stabilizer and slice.

use crate::error::{Error, Result};
use crate::exactlin::{frac, int, unit_vec, zero_vec, Matrix, Scalar};
use crate::liecore::{Covector, InnerProduct, LieAlgebra};
use crate::splitting::{ProblemInstance, SliceRep};

pub const NAMES: [&str; 5] = [
    "so3-generic",
    "so3-collinear",
    "so3-zero",
    "torus",
    "so3xso3-diagonal",
];

/// Default `(n, k)` for the torus preset.
pub const TORUS_DEFAULT: (usize, usize) = (3, 1);

fn free_slice(dim: usize) -> SliceRep {
    SliceRep::new(SliceRep::standard_omega(dim), Vec::new()).expect("square omega")
}

fn so3_instance(h: usize, mu: Vec<Scalar>, slice_dim: usize) -> ProblemInstance {
    ProblemInstance::new(
        LieAlgebra::so3(),
        vec![unit_vec(3, h)],
        Vec::new(),
        Covector(mu),
        InnerProduct::identity(3),
        free_slice(slice_dim),
    )
    .expect("catalog instance is well formed")
}

/// `mu = e3*`, `h = span(e1)`: `mu` and `h` not collinear.
pub fn so3_generic(slice_dim: usize) -> ProblemInstance {
    so3_instance(0, unit_vec(3, 2), slice_dim)
}

/// `mu = e3*`, `h = span(e3)`.
pub fn so3_collinear(slice_dim: usize) -> ProblemInstance {
    so3_instance(2, unit_vec(3, 2), slice_dim)
}

/// `mu = 0`, `h = span(e3)`.
pub fn so3_zero(slice_dim: usize) -> ProblemInstance {
    so3_instance(2, zero_vec(3), slice_dim)
}

/// The default torus momentum `(1, 1/2, ..., 1/n)`.
pub fn torus_mu(n: usize) -> Vec<Scalar> {
    (1..=n as i64).map(|i| frac(1, i)).collect()
}

/// Abelian `g = R^n` acting freely, `h` spanned by the first `k` basis vectors.
pub fn torus(n: usize, k: usize, mu: Vec<Scalar>) -> Result<ProblemInstance> {
    if k > n {
        return Err(Error::DimensionMismatch {
            context: "torus subdimension",
            expected: n,
            got: k,
        });
    }
    ProblemInstance::new(
        LieAlgebra::abelian(n),
        (0..k).map(|i| unit_vec(n, i)).collect(),
        Vec::new(),
        Covector(mu),
        InnerProduct::identity(n),
        free_slice(0),
    )
}

/// `g = so(3) ⊕ so(3)`, `h` the diagonal, `g_m = span((e3, e3))`,
/// `mu = (e3*, e3*)` and a 2-dimensional slice rotated by `g_m`.
pub fn so3xso3_diagonal() -> ProblemInstance {
    let l = LieAlgebra::so3().direct_sum(&LieAlgebra::so3());
    let diag = |i: usize| {
        let mut v = unit_vec(6, i);
        v[i + 3] = int(1);
        v
    };
    let slice = SliceRep::new(
        SliceRep::standard_omega(2),
        vec![Matrix::from_i64(2, 2, &[0, -1, 1, 0])],
    )
    .expect("square blocks");
    let mut mu = unit_vec(6, 2);
    mu[5] = int(1);
    ProblemInstance::new(
        l,
        (0..3).map(diag).collect(),
        vec![diag(2)],
        Covector(mu),
        InnerProduct::identity(6),
        slice,
    )
    .expect("catalog instance is well formed")
}

/// Looks up a preset; `dim`/`subdim` only apply to `torus`.
pub fn by_name(name: &str, dim: Option<usize>, subdim: Option<usize>) -> Result<ProblemInstance> {
    match name {
        "so3-generic" => Ok(so3_generic(0)),
        "so3-collinear" => Ok(so3_collinear(0)),
        "so3-zero" => Ok(so3_zero(0)),
        "so3xso3-diagonal" => Ok(so3xso3_diagonal()),
        "torus" => {
            let n = dim.unwrap_or(TORUS_DEFAULT.0);
            let k = subdim.unwrap_or(TORUS_DEFAULT.1);
            torus(n, k, torus_mu(n))
        }
        other => Err(Error::UnknownPreset(other.to_string())),
    }
}

/// Every preset with its default parameters, in [`NAMES`] order.
pub fn all() -> Vec<(&'static str, ProblemInstance)> {
    NAMES
        .iter()
        .map(|&n| (n, by_name(n, None, None).expect("preset exists")))
        .collect()
}
