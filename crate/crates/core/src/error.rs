use thiserror::Error;

use crate::rational::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("offsets {} and {} differ by a non-integer", .0.0, .0.1)]
    IncompatibleOffset(Box<(Rational, Rational)>),
    #[error("series has zero constant term")]
    ZeroLeadingTerm,
    #[error("invalid Eisenstein weight {0}")]
    InvalidWeight(i64),
    #[error("operation requires a homogeneous quasimodular form")]
    InhomogeneousInput,
    #[error("tau must lie in the upper half plane")]
    NonPositiveImaginaryPart,
    #[error("evaluation points must be pairwise distinct")]
    CoincidentPoints,
    #[error("p = {0} and q = {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("argument out of range: {0}")]
    RangeError(String),
    #[error("matrix cutoff {cutoff} is smaller than the epsilon order {order}")]
    CutoffTooSmall { cutoff: usize, order: usize },
    #[error("point lies outside the sewing domain: {0}")]
    OutsideDomain(String),
    #[error("indicial roots differ by the positive integer {0}")]
    ResonantIndicialRoots(Rational),
    #[error("pole at c = {0}")]
    PoleAtC(Rational),
    #[error("Gram matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("Gram matrix is not an even symmetric integer matrix: {0}")]
    NotEvenLattice(String),
    #[error("parse error: {0}")]
    Parse(String),
}
