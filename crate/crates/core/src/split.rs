//! Decomposition of the modulus relative to the prime support of
//! g = gcd(A, B): the g-part of L, the coprime core ell, and the threshold
//! gamma that the g-part imposes on admissible exponents.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::integer_arith::{factorize, gcd, is_prime, valuation_unchecked, Factorization};

/// Inputs A, B, L together with everything the reduction derives from them:
/// g = gcd(A, B), the coprime quotients a = A/g and b = B/g, the split
/// L = g_part * ell with gcd(g_part, ell) = 1, and the threshold gamma.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitContext {
    /// Original left base A.
    pub base_a: BigInt,
    /// Original right base B.
    pub base_b: BigInt,
    /// The modulus L under decision.
    pub modulus: BigUint,
    /// gcd(A, B), always positive.
    pub g: BigUint,
    /// A / g; carries the sign of A.
    pub a: BigInt,
    /// B / g; carries the sign of B.
    pub b: BigInt,
    /// Part of L supported on the primes of g.
    pub g_part: BigUint,
    /// Coprime core of L: no prime of ell divides g.
    pub ell: BigUint,
    /// Threshold gamma(L): least K with nu_p(g^K) >= nu_p(L) for all p | g.
    pub gamma: u64,
}

impl fmt::Display for SplitContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "g={} a={} b={} g_part={} ell={} gamma={}",
            self.g, self.a, self.b, self.g_part, self.ell, self.gamma
        )
    }
}

/// Splits `n` into the part supported on the primes of `S` and the rest:
/// `(prod_{p in S} p^{nu_p(n)}, n / that)`. The parts are coprime and the
/// first is 1 when `S` is empty.
pub fn lambda_split(n: &BigUint, s: &[BigUint]) -> Result<(BigUint, BigUint)> {
    if n.is_zero() {
        return Err(Error::ZeroInput("n"));
    }
    for p in s {
        if !is_prime(p) {
            return Err(Error::NotPrime(p.clone()));
        }
    }
    let mut inside = BigUint::one();
    let mut rest = n.clone();
    for p in s {
        loop {
            let (q, r) = rest.div_rem(p);
            if !r.is_zero() {
                break;
            }
            rest = q;
            inside *= p;
        }
    }
    Ok((inside, rest))
}

/// gamma(L) = max over primes p | g of ceil(nu_p(L) / nu_p(g)); the maximum
/// over the empty set (g = 1) is 0.
pub fn gamma(l: &BigUint, g: &BigUint) -> u64 {
    assert!(!l.is_zero(), "L must be positive");
    assert!(!g.is_zero(), "g must be positive");
    gamma_from_factors(l, &factorize(g).expect("g >= 1"))
}

fn gamma_from_factors(l: &BigUint, g_factors: &Factorization) -> u64 {
    let mut best = 0u64;
    for (p, e_g) in g_factors.factors() {
        let e_l = valuation_unchecked(p, l) as u64;
        // ceil(e_l / e_g) without floating point
        best = best.max((e_l + *e_g as u64 - 1) / *e_g as u64);
    }
    best
}

/// Runs the splitting step of the decision procedure: computes g, the
/// quotients a and b, the factor split of L along the primes of g, and gamma.
pub fn build_context(a_in: &BigInt, b_in: &BigInt, l: &BigUint) -> Result<SplitContext> {
    if a_in.is_zero() {
        return Err(Error::ZeroInput("A"));
    }
    if b_in.is_zero() {
        return Err(Error::ZeroInput("B"));
    }
    if l.is_zero() {
        return Err(Error::ZeroInput("L"));
    }
    let g = gcd(a_in, b_in).expect("A, B nonzero");
    let g_int = BigInt::from(g.clone());
    let g_factors = factorize(&g).expect("g >= 1");
    let g_primes: Vec<BigUint> = g_factors.primes().cloned().collect();
    let (g_part, ell) = lambda_split(l, &g_primes)?;
    Ok(SplitContext {
        base_a: a_in.clone(),
        base_b: b_in.clone(),
        modulus: l.clone(),
        g,
        a: a_in / &g_int,
        b: b_in / &g_int,
        g_part,
        ell,
        gamma: gamma_from_factors(l, &g_factors),
    })
}
