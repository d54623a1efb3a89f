use num_bigint::BigUint;
use thiserror::Error;

/// Domain errors for the arithmetic substrate and the decision procedures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("gcd(0, 0) is undefined")]
    GcdOfZeros,

    #[error("the p-adic valuation of 0 is infinite")]
    ValuationOfZero,

    #[error("{0} is not prime")]
    NotPrime(BigUint),

    #[error("0 has no prime factorization")]
    FactorizeZero,

    #[error("not invertible: operand shares gcd {gcd} with the modulus")]
    NotInvertible { gcd: BigUint },

    #[error("{0} must be nonzero")]
    ZeroInput(&'static str),

    #[error("operands are not coprime: gcd = {gcd}")]
    NotCoprime { gcd: BigUint },

    #[error("the modulus is not good: no admissible exponent exists")]
    NotGood,
}

pub type Result<T> = std::result::Result<T, Error>;
