use thiserror::Error;

use crate::algebra::Violation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Syntax error in an expression or spec file, with the byte offset where it
/// was detected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError {
            offset,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid name `{0}`")]
    InvalidName(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("generator `{name}` has degree {degree}; degrees must be at least 1")]
    InvalidGeneratorDegree { name: String, degree: usize },
    #[error("non-homogeneous expression: terms of degree {first} and {second}")]
    NonHomogeneous { first: usize, second: usize },
    #[error("differential of `{generator}` has degree {found}, expected {expected}")]
    WrongDifferentialDegree {
        generator: String,
        expected: usize,
        found: usize,
    },
    #[error("degree {degree} is beyond the degree bound {bound}")]
    DegreeOverflow { degree: usize, bound: usize },
    #[error("operands belong to different algebras")]
    AlgebraMismatch,
    #[error("coordinate vector has length {found}, degree {degree} has dimension {expected}")]
    CoordinateLength {
        degree: usize,
        expected: usize,
        found: usize,
    },
    #[error("d^2 is not zero on `{0}`")]
    DSquaredNonzero(String),
    #[error("unit `{0}` is not a degree-0 basis element")]
    MissingUnit(String),
    #[error("basis must list degrees 0..={bound}, found {found} degree slots")]
    BasisShape { bound: usize, found: usize },
    #[error("product {left}*{right} is not given")]
    MissingProduct { left: String, right: String },
    #[error("product {left}*{right} is given twice")]
    DuplicateProduct { left: String, right: String },
    #[error("product {left}*{right} lands in degree {degree} above the bound but is nonzero")]
    ProductAboveBound {
        left: String,
        right: String,
        degree: usize,
    },
    #[error("entry for `{context}` names `{basis}` of degree {found}, expected degree {expected}")]
    WrongEntryDegree {
        context: String,
        basis: String,
        expected: usize,
        found: usize,
    },
    #[error("algebra axioms fail: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Axioms(Vec<Violation>),
    #[error("Hirsch extensions need an odd-degree generator, `{name}` has degree {degree}")]
    EvenHirschGenerator { name: String, degree: usize },
    #[error("Euler cocycle is not closed")]
    EulerNotClosed,
    #[error("cohomology in degree {degree} is not analyzable; top analyzable degree is {top}")]
    CohomologyOutOfRange { degree: usize, top: usize },
    #[error("cochain of degree {0} is not closed")]
    NotClosed(usize),
    #[error("Massey products need positive degrees, got a class of degree 0")]
    ZeroDegreeClass,
    #[error("primitive does not satisfy d(primitive) = product in degree {0}")]
    BadPrimitive(usize),
    #[error("ideal scans need a free algebra")]
    NotFree,
    #[error("invalid model parameters: {0}")]
    InvalidModel(String),
    #[error("pairing matrix is not symmetric")]
    NotSymmetric,
    #[error("pairing is degenerate")]
    Degenerate,
    #[error("top degree {degree} has Betti number {betti}, expected 1")]
    NoFundamentalClass { degree: usize, betti: usize },
    #[error("invalid spec file: {0}")]
    SpecFile(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
