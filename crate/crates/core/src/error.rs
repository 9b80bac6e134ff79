use thiserror::Error;

/// Errors raised by the library. Messages carry the offending input where one
/// exists so the CLI can surface them verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid order {0}: orders are positive integers")]
    InvalidOrder(u64),

    #[error("not a polynomial divisor: multiplicity {coeff} at order {order}")]
    NotPolynomialDivisor { order: u64, coeff: String },

    #[error("not a characteristic polynomial: multiplicity {coeff} at order {order}")]
    NotCharacteristicPolynomial { order: u64, coeff: String },

    #[error("invalid weight system: {0}")]
    InvalidWeightSystem(String),

    #[error("malformed input `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("instance too large: {n} variables exceeds the subset-enumeration bound {limit}")]
    InstanceTooLarge { n: usize, limit: usize },

    #[error("rho not a polynomial: nonzero remainder of degree {remainder_degree}")]
    RhoNotPolynomial { remainder_degree: usize },

    #[error("degenerate cycle: {0}")]
    DegenerateCycle(String),

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("empty vertex set")]
    EmptyVertexSet,

    #[error("not a divisibility chain: {0}")]
    NotDivisibilityChain(String),

    #[error("cross-check failed: {0}")]
    CrossCheck(String),

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("invalid scan configuration: {0}")]
    InvalidConfig(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
