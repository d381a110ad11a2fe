//! Exact computation in quantum nilpotent algebras (CGL extensions).
//!
//! Elements are normalised to PBW form over the field of rational functions
//! in the deformation parameters. On top of the multiplication engine the
//! crate provides axiom validators, homogeneous prime elements, Nakayama
//! automorphisms, bicharacter lattices, core decompositions and audits of
//! candidate automorphisms.

pub mod algebra;
pub mod automorphisms;
pub mod error;
pub mod json;
pub mod lattice;
pub mod linalg;
pub mod parse;
pub mod pbw;
pub mod presentation;
pub mod presets;
pub mod primes;
pub mod report;
pub mod rewrite;
pub mod scalar;
pub mod structure;

pub use algebra::Algebra;
pub use error::{Error, Result};
pub use pbw::{Character, Monomial, PbwPoly};
pub use presentation::{CglPresentation, TorusData};
pub use presets::PresetCatalog;
pub use report::ValidationReport;
pub use scalar::{ParameterSpace, Scalar, SignedMonomial};
