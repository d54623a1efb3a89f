//! Arbitrary-precision arithmetic substrate: gcd, p-adic valuations,
//! factorization, primality, modular exponentiation and inversion, the
//! Carmichael function, and multiplicative orders.
//!
//! Everything here is a pure function; the only shared state is the
//! immutable small-prime table built on first use.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

use crate::error::{Error, Result};

mod factor;
mod primality;

pub use factor::factorize;
pub use primality::is_prime;

/// Upper bound of the trial-division prime table.
const TRIAL_DIVISION_LIMIT: usize = 1_000_000;

/// Primes below [`TRIAL_DIVISION_LIMIT`], ascending. Built once, then shared.
pub(crate) fn small_primes() -> &'static [u64] {
    static PRIMES: Lazy<Vec<u64>> = Lazy::new(|| {
        let mut composite = vec![false; TRIAL_DIVISION_LIMIT];
        let mut primes = Vec::with_capacity(78_498);
        for n in 2..TRIAL_DIVISION_LIMIT {
            if !composite[n] {
                primes.push(n as u64);
                let mut multiple = n * n;
                while multiple < TRIAL_DIVISION_LIMIT {
                    composite[multiple] = true;
                    multiple += n;
                }
            }
        }
        primes
    });
    &PRIMES
}

/// Prime factorization of a positive integer: `(prime, exponent)` pairs with
/// strictly increasing primes and exponents >= 1. The factorization of 1 is
/// the empty list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    /// Sorts and merges raw pairs produced by independent splitting passes.
    fn from_pairs(mut pairs: Vec<(BigUint, u32)>) -> Self {
        pairs.sort_by(|x, y| x.0.cmp(&y.0));
        let mut factors: Vec<(BigUint, u32)> = Vec::with_capacity(pairs.len());
        for (prime, exponent) in pairs {
            match factors.last_mut() {
                Some(last) if last.0 == prime => last.1 += exponent,
                _ => factors.push((prime, exponent)),
            }
        }
        Factorization { factors }
    }

    /// The `(prime, exponent)` pairs, ascending by prime.
    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    /// Iterator over the distinct primes, ascending.
    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// Exponent of `p` in the factored integer (0 when `p` does not occur).
    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    /// Number of distinct prime factors.
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    /// True for the factorization of 1.
    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Reconstructs the factored integer.
    pub fn value(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e))
    }
}

/// Nonnegative greatest common divisor; `gcd(x, y) = gcd(|x|, |y|)`.
pub fn gcd(x: &BigInt, y: &BigInt) -> Result<BigUint> {
    if x.is_zero() && y.is_zero() {
        return Err(Error::GcdOfZeros);
    }
    Ok(x.magnitude().gcd(y.magnitude()))
}

/// The exponent of the prime `p` in `n`, acting on `|n|`.
pub fn p_adic_valuation(p: &BigUint, n: &BigInt) -> Result<u32> {
    if n.is_zero() {
        return Err(Error::ValuationOfZero);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p.clone()));
    }
    Ok(valuation_unchecked(p, n.magnitude()))
}

/// Valuation for callers that already know `p` is prime and `n` nonzero.
pub(crate) fn valuation_unchecked(p: &BigUint, n: &BigUint) -> u32 {
    let mut e = 0u32;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return e;
        }
        m = q;
        e += 1;
    }
}

/// Canonical residue of `x` in `[0, m)`.
pub fn residue(x: &BigInt, m: &BigUint) -> BigUint {
    let r = x.magnitude() % m;
    if x.sign() == Sign::Minus && !r.is_zero() {
        m - r
    } else {
        r
    }
}

/// `base^exp mod m`, normalized to `[0, m)`; correct for negative bases.
pub fn mod_pow(base: &BigInt, exp: &BigUint, m: &BigUint) -> BigUint {
    assert!(!m.is_zero(), "modulus must be positive");
    residue(base, m).modpow(exp, m)
}

/// Inverse of `a` modulo `m`, in `[0, m)`.
pub fn mod_inv(a: &BigInt, m: &BigUint) -> Result<BigUint> {
    assert!(!m.is_zero(), "modulus must be positive");
    let m_int = BigInt::from(m.clone());
    let ext = a.extended_gcd(&m_int);
    let g = ext
        .gcd
        .to_biguint()
        .expect("gcd of a nonzero pair is positive");
    if !g.is_one() {
        return Err(Error::NotInvertible { gcd: g });
    }
    Ok(residue(&ext.x, m))
}

/// Exponent of the multiplicative group modulo `m`: the least universal
/// exponent e with `a^e ≡ 1 (mod m)` for every `a` coprime to `m`.
pub fn carmichael_lambda(m: &BigUint) -> BigUint {
    assert!(!m.is_zero(), "modulus must be positive");
    let two = BigUint::from(2u32);
    let mut lambda = BigUint::one();
    for (p, e) in factorize(m).expect("m >= 1").factors() {
        let part = if *p == two {
            match e {
                1 => BigUint::one(),
                2 => two.clone(),
                k => BigUint::one() << (k - 2),
            }
        } else {
            p.pow(e - 1) * (p - 1u32)
        };
        lambda = lambda.lcm(&part);
    }
    lambda
}

/// Least `t >= 1` with `a^t ≡ 1 (mod m)`, for `a` coprime to `m`.
///
/// Starts from the Carmichael exponent and strips primes out of it, so the
/// cost is a factorization plus O(log) modular exponentiations; no linear
/// scanning.
pub fn multiplicative_order(a: &BigInt, m: &BigUint) -> Result<BigUint> {
    assert!(!m.is_zero(), "modulus must be positive");
    let base = residue(a, m);
    let g = base.gcd(m);
    if !g.is_one() && !m.is_one() {
        return Err(Error::NotInvertible { gcd: g });
    }
    let mut order = carmichael_lambda(m);
    let lambda_factors = factorize(&order).expect("lambda >= 1");
    for (p, e) in lambda_factors.factors() {
        for _ in 0..*e {
            let candidate: BigUint = &order / p;
            if base.modpow(&candidate, m).is_one() {
                order = candidate;
            } else {
                break;
            }
        }
    }
    Ok(order)
}
