use thiserror::Error;

/// Every failure the toolkit can report.
///
/// `exit_class` groups the variants the way the command line wants them:
/// input errors (bad text, bad field spec), mathematical precondition
/// failures (singular curve, degree mismatch), and internal assertions that
/// indicate a bug rather than a bad input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("inhomogeneous polynomial: monomials of degree {0} and {1}")]
    Inhomogeneous(u64, u64),
    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,
    #[error("constant nonzero form does not define a curve")]
    ConstantForm,
    #[error("coefficient not in the field: {0}")]
    CoefficientNotInField(String),
    #[error("invalid field spec: {0}")]
    BadFieldSpec(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is not irreducible")]
    NotIrreducible,
    #[error("algebraic closure operations over Q are unsupported")]
    RationalsUnsupported,
    #[error("operation requires a finite field")]
    FieldNotFinite,
    #[error("both arguments are constant in the eliminated variable")]
    BothConstantInVariable,
    #[error("characteristic {p} divides the degree {d}")]
    CharacteristicDividesDegree { p: u64, d: u64 },
    #[error("characteristic {p} unusable here: {reason}")]
    BadCharacteristic { p: u64, reason: String },
    #[error("form is not reduced: repeated component {component}")]
    NonReduced { component: String },
    #[error("point does not lie on the curve")]
    PointNotOnCurve,
    #[error("tangency undefined at a singular point")]
    SingularPoint,
    #[error("no point found after {0} attempts")]
    ExhaustedAttempts(u64),
    #[error("curves share a common component: {gcd}")]
    CommonComponent { gcd: String },
    #[error("no good position found after {attempts} attempts (field may be too small)")]
    GoodPositionFailed { attempts: u64 },
    #[error("field too small for this operation")]
    FieldTooSmall,
    #[error("branch curve is not smooth")]
    BNotSmooth,
    #[error("section curve is not smooth")]
    CNotSmooth,
    #[error("degree mismatch: expected deg B = 2 deg C, got {deg_b} and {deg_c}")]
    DegreeMismatch { deg_b: u64, deg_c: u64 },
    #[error("s must be even, got {0}")]
    OddS(u64),
    #[error("field has no rational {order}-th roots of unity (p = {p})")]
    RootsOfUnityMissing { p: u64, order: u64 },
    #[error("curve is not a conic")]
    NotAConic,
    #[error("no smooth member found in {0} tries")]
    ExhaustedTries(u64),
    #[error("no rational point found on the conic over this field")]
    NoRationalPoint,
    #[error("no usable sample points on the curve over this field; extend scalars")]
    ZeroSamplesPossible,
    #[error("field size {q} exceeds the enumeration guard (max {max}); pass the override to proceed")]
    FieldTooLarge { q: u64, max: u64 },
    #[error("family relation failed transitivity on records {a}, {b}, {c}")]
    TransitivityViolation { a: usize, b: usize, c: usize },
    #[error("records were built against different branch curves")]
    DifferentBranchCurves,
    #[error("internal assertion failed: {0}")]
    Internal(String),
}

/// Exit-code class for the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitClass {
    /// Bad input text or arguments: exit 2.
    Input,
    /// A mathematical precondition failed: exit 3.
    Precondition,
    /// An internal invariant broke (a bug): exit 4.
    Internal,
}

impl Error {
    pub fn exit_class(&self) -> ExitClass {
        use Error::*;
        match self {
            Syntax { .. }
            | Inhomogeneous(..)
            | ZeroPolynomial
            | ConstantForm
            | CoefficientNotInField(..)
            | BadFieldSpec(..)
            | NotPrime(..) => ExitClass::Input,
            Internal(..) | TransitivityViolation { .. } => ExitClass::Internal,
            _ => ExitClass::Precondition,
        }
    }
}

/// Shorthand for internal assertions that must hold unless the code is wrong.
macro_rules! internal_check {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Err($crate::Error::Internal(format!($($arg)*)));
        }
    };
}
pub(crate) use internal_check;
