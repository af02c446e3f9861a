//! Exact construction of compatible Witt–Artin decompositions.
//!
//! Given the linear data at a point of a Hamiltonian `G`-manifold (a Lie
//! algebra, a subalgebra `h`, the point stabilizer `g_m`, the momentum `mu`
//! and a symplectic slice representation), this crate builds the splitting
//! of `g`, a concrete model of the tangent space, both Witt–Artin
//! decompositions (for `G` and for the subgroup `H`) and checks every claimed
//! identity in exact rational arithmetic.

pub mod catalog;
pub mod check;
pub mod corpus;
pub mod error;
pub mod exactlin;
pub mod liecore;
pub mod pointmodel;
pub mod splitting;
pub mod suite;
pub mod tube;
pub mod wittartin;

pub use check::{Check, CheckReport, ValidationReport};
pub use error::{Error, Result};
pub use exactlin::{BilinearForm, Matrix, Scalar, Subspace};
pub use liecore::{Covector, InnerProduct, LieAlgebra};
pub use pointmodel::{build_model, TangentModel, TangentVector};
pub use splitting::{build_chain, DimReport, ProblemInstance, SliceRep, SplittingChain};
pub use tube::{FloatTolerance, TubePoint};
pub use wittartin::{decompose_g, decompose_h, WittDecompositionG, WittDecompositionH};
