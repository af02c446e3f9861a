//! The versioned JSON instance format.
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "dim": 3,
//!   "structure_constants": [[["0", "0", "0"], ...], ...],
//!   "h_basis": [["1", "0", "0"]],
//!   "gm_basis": [],
//!   "mu": ["0", "0", "1"],
//!   "inner_product": "identity",
//!   "slice": {"dim": 2, "omega": [["0", "1"], ["-1", "0"]], "action": {}},
//!   "gm_component_reps": []
//! }
//! ```
//!
//! `structure_constants[i][j][k]` is the `e_k` coefficient of `[e_i, e_j]`.
//! Every number is a string `"p"` or `"p/q"`. `inner_product` is `"identity"`
//! (the default), `"neg_killing"`, or `{"gram": [[...]]}`. Slice action
//! matrices are keyed by the index of the `g_m` basis vector they represent;
//! they may be omitted only when the slice is 0-dimensional.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use wittartin_core::exactlin::{format_scalar, parse_scalar};
use wittartin_core::{
    CheckReport, Covector, Error as CoreError, InnerProduct, LieAlgebra, Matrix, ProblemInstance, Scalar, SliceRep,
};

use crate::CliError;

pub const FORMAT_VERSION: u32 = 1;

/// An exact rational carried as a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rational(pub Scalar);

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_scalar(&self.0))
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Rational;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational string such as \"3\" or \"-1/2\"")
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<Rational, E> {
                parse_scalar(s).map(Rational).map_err(E::custom)
            }
        }
        d.deserialize_str(V)
    }
}

pub type RVec = Vec<Rational>;
pub type RMat = Vec<Vec<Rational>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Identity,
    NegKilling,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InnerProductSpec {
    Preset(Preset),
    Gram { gram: RMat },
}

impl Default for InnerProductSpec {
    fn default() -> Self {
        InnerProductSpec::Preset(Preset::Identity)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceSpec {
    pub dim: usize,
    pub omega: RMat,
    #[serde(default)]
    pub action: BTreeMap<String, RMat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub format_version: u32,
    pub dim: usize,
    pub structure_constants: Vec<Vec<RVec>>,
    #[serde(default)]
    pub h_basis: Vec<RVec>,
    #[serde(default)]
    pub gm_basis: Vec<RVec>,
    pub mu: RVec,
    #[serde(default)]
    pub inner_product: InnerProductSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slice: Option<SliceSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gm_component_reps: Vec<RMat>,
}

/// Either a usable instance or a report of the mathematical checks it failed
/// before an instance could even be formed.
pub enum Loaded {
    Instance(Box<ProblemInstance>),
    Invalid(CheckReport),
}

fn field(path: impl Into<String>, msg: impl Into<String>) -> CliError {
    CliError::Field {
        path: path.into(),
        msg: msg.into(),
    }
}

fn vector(path: &str, v: &[Rational], n: usize) -> Result<Vec<Scalar>, CliError> {
    if v.len() != n {
        return Err(field(path, format!("expected {n} entries, got {}", v.len())));
    }
    Ok(v.iter().map(|r| r.0.clone()).collect())
}

fn matrix(path: &str, m: &RMat, rows: usize, cols: usize) -> Result<Matrix, CliError> {
    if m.len() != rows {
        return Err(field(path, format!("expected {rows} rows, got {}", m.len())));
    }
    let rows: Vec<Vec<Scalar>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| vector(&format!("{path}[{i}]"), r, cols))
        .collect::<Result<_, _>>()?;
    Ok(Matrix::from_rows(cols, &rows))
}

fn from_rows(rows: &Matrix) -> RMat {
    (0..rows.rows())
        .map(|i| rows.row(i).into_iter().map(Rational).collect())
        .collect()
}

fn rvec(v: &[Scalar]) -> RVec {
    v.iter().cloned().map(Rational).collect()
}

/// Parses JSON text; syntax and value errors carry line and column.
pub fn parse(text: &str) -> Result<InstanceFile, CliError> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    if file.format_version != FORMAT_VERSION {
        return Err(field(
            "format_version",
            format!("unsupported version {}, expected {FORMAT_VERSION}", file.format_version),
        ));
    }
    Ok(file)
}

fn invalid(name: &str, detail: String) -> Loaded {
    let mut rep = CheckReport::new();
    rep.push_detail(name, false, detail);
    Loaded::Invalid(rep)
}

impl InstanceFile {
    /// Shape errors become [`CliError::Field`]; failures of the Lie algebra
    /// axioms or of positivity of the inner product become a failed report.
    pub fn to_instance(&self) -> Result<Loaded, CliError> {
        let n = self.dim;
        if self.structure_constants.len() != n {
            return Err(field(
                "structure_constants",
                format!("expected {n} blocks, got {}", self.structure_constants.len()),
            ));
        }
        let mut c = Vec::with_capacity(n * n * n);
        for (i, block) in self.structure_constants.iter().enumerate() {
            if block.len() != n {
                return Err(field(
                    format!("structure_constants[{i}]"),
                    format!("expected {n} rows, got {}", block.len()),
                ));
            }
            for (j, row) in block.iter().enumerate() {
                c.extend(vector(&format!("structure_constants[{i}][{j}]"), row, n)?);
            }
        }
        let algebra = match LieAlgebra::new(n, c) {
            Ok(l) => l,
            Err(e @ CoreError::NotAntisymmetric { .. }) => {
                return Ok(invalid("validate.structure_constants_antisymmetric", e.to_string()))
            }
            Err(e @ CoreError::JacobiViolation { .. }) => return Ok(invalid("validate.jacobi_identity", e.to_string())),
            Err(e) => return Err(field("structure_constants", e.to_string())),
        };
        let h: Vec<Vec<Scalar>> = self
            .h_basis
            .iter()
            .enumerate()
            .map(|(i, v)| vector(&format!("h_basis[{i}]"), v, n))
            .collect::<Result<_, _>>()?;
        let gm: Vec<Vec<Scalar>> = self
            .gm_basis
            .iter()
            .enumerate()
            .map(|(i, v)| vector(&format!("gm_basis[{i}]"), v, n))
            .collect::<Result<_, _>>()?;
        let mu = Covector(vector("mu", &self.mu, n)?);
        let ip = match &self.inner_product {
            InnerProductSpec::Preset(Preset::Identity) => Ok(InnerProduct::identity(n)),
            InnerProductSpec::Preset(Preset::NegKilling) => InnerProduct::neg_killing(&algebra),
            InnerProductSpec::Gram { gram } => InnerProduct::new(matrix("inner_product.gram", gram, n, n)?),
        };
        let ip = match ip {
            Ok(ip) => ip,
            Err(e) => return Ok(invalid("validate.ip_positive_definite", e.to_string())),
        };
        let slice = match &self.slice {
            None => SliceRep::empty(gm.len()),
            Some(s) => self.slice_rep(s, gm.len())?,
        };
        let inst = ProblemInstance::new(algebra, h, gm, mu, ip, slice).map_err(|e| match e {
            CoreError::DependentBasis(which) => field(
                if which == "h" { "h_basis" } else { "gm_basis" },
                "basis vectors are linearly dependent",
            ),
            other => field("instance", other.to_string()),
        })?;
        if self.gm_component_reps.is_empty() {
            return Ok(Loaded::Instance(Box::new(inst)));
        }
        let reps = self
            .gm_component_reps
            .iter()
            .enumerate()
            .map(|(i, m)| matrix(&format!("gm_component_reps[{i}]"), m, n, n))
            .collect::<Result<Vec<_>, _>>()?;
        match inst.with_component_reps(reps) {
            Ok(i) => Ok(Loaded::Instance(Box::new(i))),
            Err(e) => Ok(invalid("validate.gm_components_finite_group", e.to_string())),
        }
    }

    fn slice_rep(&self, s: &SliceSpec, gm_count: usize) -> Result<SliceRep, CliError> {
        let d = s.dim;
        let omega = matrix("slice.omega", &s.omega, d, d)?;
        for key in s.action.keys() {
            let ok = key.parse::<usize>().is_ok_and(|k| k < gm_count);
            if !ok {
                return Err(field(
                    format!("slice.action.{key}"),
                    format!("key must be a g_m basis index below {gm_count}"),
                ));
            }
        }
        let action = (0..gm_count)
            .map(|k| match s.action.get(&k.to_string()) {
                Some(m) => matrix(&format!("slice.action.{k}"), m, d, d),
                None if d == 0 => Ok(Matrix::zeros(0, 0)),
                None => Err(field(format!("slice.action.{k}"), "missing action matrix for this g_m basis vector")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        SliceRep::new(omega, action).map_err(|e| field("slice", e.to_string()))
    }

    /// Serializes an instance; the inner product is written as an explicit Gram.
    pub fn from_instance(inst: &ProblemInstance) -> Self {
        let n = inst.dim();
        let l = inst.algebra();
        let structure_constants = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| Rational(l.constant(i, j, k).clone())).collect())
                    .collect()
            })
            .collect();
        let gram = inst.ip().form().gram();
        let inner_product = if *gram == Matrix::identity(n) {
            InnerProductSpec::Preset(Preset::Identity)
        } else {
            InnerProductSpec::Gram { gram: from_rows(gram) }
        };
        let s = inst.slice();
        let slice = (s.dim() > 0).then(|| SliceSpec {
            dim: s.dim(),
            omega: from_rows(s.omega().gram()),
            action: s
                .action()
                .iter()
                .enumerate()
                .map(|(k, a)| (k.to_string(), from_rows(a)))
                .collect(),
        });
        InstanceFile {
            format_version: FORMAT_VERSION,
            dim: n,
            structure_constants,
            h_basis: inst.h().vectors().iter().map(|v| rvec(v)).collect(),
            gm_basis: inst.gm_generators().iter().map(|v| rvec(v)).collect(),
            mu: rvec(inst.mu().coords()),
            inner_product,
            slice,
            gm_component_reps: inst.component_reps().iter().map(from_rows).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use wittartin_core::catalog;

    #[test]
    fn round_trip_catalog() {
        for (name, inst) in catalog::all() {
            let file = InstanceFile::from_instance(&inst);
            let back = parse(&file.to_json()).unwrap();
            assert_eq!(back, file, "{name}");
            match back.to_instance().unwrap() {
                Loaded::Instance(i) => assert_eq!(*i, inst, "{name}"),
                Loaded::Invalid(r) => panic!("{name}: {r}"),
            }
        }
    }

    #[test]
    fn bad_rational_reports_line() {
        let text = "{\n  \"format_version\": 1,\n  \"dim\": 1,\n  \"structure_constants\": [[[\"1/0\"]]],\n  \"mu\": [\"0\"]\n}";
        match parse(text) {
            Err(CliError::Parse { line, msg, .. }) => {
                assert_eq!(line, 4);
                assert!(msg.contains("1/0"), "{msg}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn wrong_length_names_the_field() {
        let mut file = InstanceFile::from_instance(&catalog::so3_generic(0));
        file.h_basis[0].pop();
        match file.to_instance() {
            Err(CliError::Field { path, .. }) => assert_eq!(path, "h_basis[0]"),
            _ => panic!("expected a field error"),
        }
    }

    #[test]
    fn jacobi_failure_is_a_check_failure() {
        // [e0, e1] = e1, [e1, e2] = e0 breaks Jacobi on (0, 1, 2)
        let mut file = InstanceFile::from_instance(&catalog::torus(3, 0, vec![Scalar::from_integer(0.into()); 3]).unwrap());
        let one = Rational(Scalar::from_integer(1.into()));
        let neg = Rational(Scalar::from_integer((-1).into()));
        file.structure_constants[0][1][1] = one.clone();
        file.structure_constants[1][0][1] = neg.clone();
        file.structure_constants[1][2][0] = one;
        file.structure_constants[2][1][0] = neg;
        match file.to_instance().unwrap() {
            Loaded::Invalid(rep) => {
                let c = &rep.checks[0];
                assert_eq!(c.name, "validate.jacobi_identity");
                assert!(c.detail.as_ref().unwrap().contains("(0, 1, 2)"));
            }
            Loaded::Instance(_) => panic!("accepted a non-Lie bracket"),
        }
    }

    #[test]
    fn missing_action_is_a_field_error() {
        let mut file = InstanceFile::from_instance(&catalog::so3xso3_diagonal());
        file.slice.as_mut().unwrap().action.clear();
        match file.to_instance() {
            Err(CliError::Field { path, .. }) => assert_eq!(path, "slice.action.0"),
            _ => panic!("expected a field error"),
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let mut v: serde_json::Value = serde_json::from_str(&InstanceFile::from_instance(&catalog::so3_zero(0)).to_json()).unwrap();
        v["hbasis"] = serde_json::json!([]);
        assert!(matches!(parse(&v.to_string()), Err(CliError::Parse { .. })));
    }
}
