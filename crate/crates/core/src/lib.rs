//! Exact computations in finite commutative differential graded algebras:
//! cohomology, triple Massey products, ideal scans and Poincaré pairings,
//! with built-in models of 7-dimensional 3-Sasakian and Sasakian manifolds.

pub mod algebra;
pub mod cohomology;
pub mod error;
pub mod expr;
pub mod formality;
pub mod linalg;
pub mod massey;
pub mod models;
pub mod spec_file;

pub use algebra::{
    build_free_cdga, build_sc_algebra, hirsch_extend, to_sc_presentation, verify_axioms, Algebra,
    AxiomReport, Cochain, GeneratorSpec, HirschExtensionSpec, ScPresentation, Violation,
};
pub use cohomology::{
    betti_vector, class_from_coords, class_of, cohomology_basis, cup, find_primitive, zero_class,
    CohomologyClass,
};
pub use error::{Error, LinalgError, ParseError, Result};
pub use expr::Expr;
pub use linalg::{Matrix, Rational, Subspace};
pub use massey::{massey_scan, massey_triple, MasseyResult, MasseyStatus, ScanReport};
pub use models::ModelSpec;
