use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("inner series must vanish at 0 (constant term {0:e})")]
    NonzeroInnerConstant(f64),
    #[error("series has zero constant term and cannot be inverted")]
    ZeroConstantTerm,
    #[error("exp_series expects a zero constant term (got {0:e})")]
    NonzeroExpConstant(f64),
    #[error("requested order {requested} exceeds capacity {capacity}")]
    OrderTooLarge { requested: usize, capacity: usize },

    #[error("Schur parameter {index} has modulus {modulus} > 1")]
    SchurOutOfDisk { index: usize, modulus: f64 },
    #[error("Schur depth must be 1, 2 or 3 (got {0})")]
    SchurDepth(usize),

    #[error("parameter {name} = {value} outside {domain}")]
    ParameterDomain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("Psi'(0) must be positive (got {0})")]
    DegenerateDerivative(f64),
    #[error("target has no evaluator")]
    MissingEvaluator,
    #[error("unknown psi spec `{0}` (expected halfplane, alpha:<v> or beta:<v>)")]
    PsiSpec(String),

    #[error("need coefficients a_1..a_{needed}, got {got}")]
    InsufficientCoefficients { needed: usize, got: usize },
    #[error("nu2 must be real (imaginary part {0:e})")]
    ComplexNu2(f64),

    #[error("budget must be at least 1")]
    EmptyBudget,
    #[error("sample count must be at least 1")]
    NoSamples,

    #[error("zero vector has no supporting functional")]
    ZeroVector,
    #[error("max-modulus coordinate of z is not unique")]
    TiedMaximum,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("vector u must have unit norm (got {0})")]
    NotUnit(f64),
    #[error("{0}")]
    Unsupported(&'static str),
}
