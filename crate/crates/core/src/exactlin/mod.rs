//! Exact rational dense linear algebra.
//!
//! Everything here works over `BigRational`; no operation rounds. Subspaces
//! are always stored in canonical form (reduced column echelon form with
//! smallest-index pivots), so equality of subspaces is equality of values.

mod form;
mod matrix;
mod subspace;

pub use form::BilinearForm;
pub use matrix::Matrix;
pub use subspace::Subspace;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Scalar {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p"`, `"-p"` or `"p/q"`.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let t = s.trim();
    let bad = || Error::BadScalar(s.to_string());
    match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => {
            let p: BigInt = t.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(p))
        }
    }
}

/// `"p"` for integers, `"p/q"` otherwise.
pub fn format_scalar(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Scalar) -> f64 {
    use num::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn zero_vec(n: usize) -> Vec<Scalar> {
    vec![Scalar::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = zero_vec(n);
    v[i] = Scalar::one();
    v
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    assert_eq!(a.len(), b.len(), "dot: length mismatch");
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn add_vec(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    assert_eq!(a.len(), b.len(), "add_vec: length mismatch");
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    assert_eq!(a.len(), b.len(), "sub_vec: length mismatch");
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(c: &Scalar, a: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|x| c * x).collect()
}

pub fn is_zero_vec(a: &[Scalar]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Linear combination `sum_i coeffs[i] * vectors[i]` in `ambient` dimensions.
pub fn combine(ambient: usize, coeffs: &[Scalar], vectors: &[Vec<Scalar>]) -> Vec<Scalar> {
    assert_eq!(coeffs.len(), vectors.len(), "combine: length mismatch");
    let mut out = zero_vec(ambient);
    for (c, v) in coeffs.iter().zip(vectors) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o += c * x;
        }
    }
    out
}

pub fn max_abs(a: &[Scalar]) -> Scalar {
    a.iter().map(|x| x.abs()).max().unwrap_or_else(Scalar::zero)
}

/// Kernel of `a` as a canonical subspace of `F^{cols}`.
pub fn kernel(a: &Matrix) -> Subspace {
    a.kernel()
}

pub fn orth_complement(u: &Subspace, w: &Subspace, ip: &BilinearForm) -> Result<Subspace> {
    u.orth_complement_in(w, ip)
}

pub fn sum(u: &Subspace, v: &Subspace) -> Result<Subspace> {
    u.sum(v)
}

pub fn intersect(u: &Subspace, v: &Subspace) -> Result<Subspace> {
    u.intersect(v)
}

pub fn is_direct_sum(parts: &[&Subspace]) -> Result<bool> {
    Subspace::is_direct_sum(parts)
}

pub fn gram_on(form: &BilinearForm, u: &Subspace) -> Matrix {
    form.gram_on(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_text_roundtrip() {
        for s in ["0", "7", "-3", "1/2", "-5/3"] {
            assert_eq!(format_scalar(&parse_scalar(s).unwrap()), s);
        }
        assert_eq!(parse_scalar(" 4/6 ").unwrap(), frac(2, 3));
        assert_eq!(format_scalar(&parse_scalar("6/-4").unwrap()), "-3/2");
    }

    #[test]
    fn scalar_rejects_garbage() {
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("abc").is_err());
        assert!(parse_scalar("0.5").is_err());
        assert!(parse_scalar("").is_err());
    }
}
