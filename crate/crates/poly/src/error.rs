use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("modulus {0} is not prime")]
    NotPrime(u32),
    #[error("inverse of zero in GF({0})")]
    ZeroInverse(u32),
    #[error("field mismatch: GF({0}) vs GF({1})")]
    FieldMismatch(u32, u32),
    #[error("variable count mismatch: {0} vs {1}")]
    VarCountMismatch(usize, usize),
    #[error("variable x{var} out of range for {n_vars} variables")]
    VariableOutOfRange { var: usize, n_vars: usize },
    #[error("evaluation point has {got} coordinates, expected {expected}")]
    PointLength { expected: usize, got: usize },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("polynomial system must contain at least one polynomial")]
    EmptySystem,
    #[error("system has {polys} polynomials but {tags} source tags")]
    TagCount { polys: usize, tags: usize },
    #[error("invalid source tag `{0}`")]
    BadTag(String),
}
