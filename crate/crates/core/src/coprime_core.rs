//! The coprime theory: for gcd(a, b) = 1, decide whether ell divides
//! a^k + b^k for some k. Two independent criteria are implemented. The
//! direct one asks whether -1 lies in the cyclic group generated by
//! ab^{-1} mod ell; the structural one splits ell = 2^beta * d and applies
//! the per-prime two-adic order conditions. They must always agree.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::goodness::ExponentProgression;
use crate::integer_arith::{factorize, mod_inv, mod_pow, multiplicative_order, residue};

/// Order data for ab^{-1} mod ell: enough to prove or refute that -1 is a
/// power of the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderCertificate {
    /// The modulus ell.
    pub modulus: BigUint,
    /// ab^{-1} reduced to [0, ell).
    pub base: BigUint,
    /// ord_ell(base).
    pub order: BigUint,
    /// nu_2(order).
    pub two_adic: u64,
    /// base^(order/2) mod ell; present exactly when the order is even.
    pub half_power: Option<BigUint>,
}

/// Why a coprime verdict came out the way it did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerdictReason {
    /// ell is 1 or 2: every (odd) exponent works.
    TrivialModulus,
    /// Direct witness: order even and half power congruent to -1.
    OrderWitness,
    /// Structural witness: the two-adic conditions of the case analysis hold.
    StructuralWitness,
    /// gcd(ell, a) > 1; carries one offending prime.
    SharesFactorWithA { prime: BigUint },
    /// gcd(ell, b) > 1; carries one offending prime.
    SharesFactorWithB { prime: BigUint },
    /// ord_ell(ab^{-1}) is odd, so -1 is not a power of the base.
    OddOrder,
    /// The unique element of order 2 in <ab^{-1}> is not -1.
    HalfPowerNotMinusOne,
    /// No common s >= 1 with 2^s exactly dividing every ord_p(ab^{-1});
    /// carries the observed (prime, nu_2(ord_p)) pairs.
    TwoAdicMismatch { observed: Vec<(BigUint, u64)> },
    /// ab^{-1} is not -1 modulo the 2-power part of ell.
    EvenPartFails,
}

impl VerdictReason {
    /// Stable snake_case tag, payloads elided.
    pub fn label(&self) -> &'static str {
        match self {
            VerdictReason::TrivialModulus => "trivial_modulus",
            VerdictReason::OrderWitness => "order_witness",
            VerdictReason::StructuralWitness => "structural_witness",
            VerdictReason::SharesFactorWithA { .. } => "shares_factor_with_a",
            VerdictReason::SharesFactorWithB { .. } => "shares_factor_with_b",
            VerdictReason::OddOrder => "odd_order",
            VerdictReason::HalfPowerNotMinusOne => "half_power_not_minus_one",
            VerdictReason::TwoAdicMismatch { .. } => "two_adic_mismatch",
            VerdictReason::EvenPartFails => "even_part_fails",
        }
    }
}

impl fmt::Display for VerdictReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerdictReason::SharesFactorWithA { prime } => {
                write!(f, "shares_factor_with_a({prime})")
            }
            VerdictReason::SharesFactorWithB { prime } => {
                write!(f, "shares_factor_with_b({prime})")
            }
            VerdictReason::TwoAdicMismatch { observed } => {
                write!(f, "two_adic_mismatch(")?;
                for (i, (p, s)) in observed.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "s({p})={s}")?;
                }
                write!(f, ")")
            }
            other => f.write_str(other.label()),
        }
    }
}

/// Outcome of a coprime goodness test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoprimeVerdict {
    pub good: bool,
    pub reason: VerdictReason,
    pub certificate: Option<OrderCertificate>,
}

impl CoprimeVerdict {
    fn good(reason: VerdictReason, certificate: Option<OrderCertificate>) -> Self {
        CoprimeVerdict {
            good: true,
            reason,
            certificate,
        }
    }

    fn bad(reason: VerdictReason, certificate: Option<OrderCertificate>) -> Self {
        CoprimeVerdict {
            good: false,
            reason,
            certificate,
        }
    }
}

fn check_coprime_pair(a: &BigInt, b: &BigInt) -> Result<()> {
    if a.is_zero() {
        return Err(Error::ZeroInput("a"));
    }
    if b.is_zero() {
        return Err(Error::ZeroInput("b"));
    }
    let g = a.magnitude().gcd(b.magnitude());
    if !g.is_one() {
        return Err(Error::NotCoprime { gcd: g });
    }
    Ok(())
}

/// Smallest prime shared by |x| and ell, if any.
fn shared_prime(x: &BigInt, ell: &BigUint) -> Option<BigUint> {
    let g = x.magnitude().gcd(ell);
    if g.is_one() {
        None
    } else {
        factorize(&g)
            .expect("g > 1")
            .primes()
            .next()
            .cloned()
    }
}

/// ab^{-1} mod m for b invertible mod m.
fn unit_ratio(a: &BigInt, b: &BigInt, m: &BigUint) -> BigUint {
    let inv_b = mod_inv(b, m).expect("caller ensured gcd(b, m) = 1");
    residue(a, m) * inv_b % m
}

/// Certificate for ab^{-1} mod ell; requires gcd(ell, ab) = 1 and ell >= 1.
pub fn order_certificate(a: &BigInt, b: &BigInt, ell: &BigUint) -> OrderCertificate {
    let base = unit_ratio(a, b, ell);
    let order = multiplicative_order(&BigInt::from(base.clone()), ell)
        .expect("base is a unit");
    let two_adic = order.trailing_zeros().expect("order >= 1");
    let half_power = if two_adic > 0 {
        Some(mod_pow(&BigInt::from(base.clone()), &(&order >> 1), ell))
    } else {
        None
    };
    OrderCertificate {
        modulus: ell.clone(),
        base,
        order,
        two_adic,
        half_power,
    }
}

/// Direct criterion: ell >= 3 is good iff ord_ell(ab^{-1}) is even and the
/// half power is -1; ell in {1, 2} is good iff the gcd screen passes.
pub fn is_good_coprime_direct(a: &BigInt, b: &BigInt, ell: &BigUint) -> Result<CoprimeVerdict> {
    check_coprime_pair(a, b)?;
    assert!(!ell.is_zero(), "ell must be positive");
    if ell.is_one() {
        return Ok(CoprimeVerdict::good(VerdictReason::TrivialModulus, None));
    }
    if let Some(prime) = shared_prime(a, ell) {
        return Ok(CoprimeVerdict::bad(
            VerdictReason::SharesFactorWithA { prime },
            None,
        ));
    }
    if let Some(prime) = shared_prime(b, ell) {
        return Ok(CoprimeVerdict::bad(
            VerdictReason::SharesFactorWithB { prime },
            None,
        ));
    }
    if ell.to_u32() == Some(2) {
        // a, b both odd, so 2 | a + b
        return Ok(CoprimeVerdict::good(VerdictReason::TrivialModulus, None));
    }
    let cert = order_certificate(a, b, ell);
    if cert.two_adic == 0 {
        return Ok(CoprimeVerdict::bad(VerdictReason::OddOrder, Some(cert)));
    }
    let minus_one = ell - 1u32;
    if cert.half_power.as_ref() == Some(&minus_one) {
        Ok(CoprimeVerdict::good(VerdictReason::OrderWitness, Some(cert)))
    } else {
        Ok(CoprimeVerdict::bad(
            VerdictReason::HalfPowerNotMinusOne,
            Some(cert),
        ))
    }
}

/// Structural criterion: write ell = 2^beta * d with d odd and apply the
/// case analysis on (beta, d). Agrees with the direct criterion everywhere.
pub fn is_good_coprime_structural(
    a: &BigInt,
    b: &BigInt,
    ell: &BigUint,
) -> Result<CoprimeVerdict> {
    check_coprime_pair(a, b)?;
    assert!(!ell.is_zero(), "ell must be positive");
    if ell.is_one() {
        return Ok(CoprimeVerdict::good(VerdictReason::TrivialModulus, None));
    }
    if let Some(prime) = shared_prime(a, ell) {
        return Ok(CoprimeVerdict::bad(
            VerdictReason::SharesFactorWithA { prime },
            None,
        ));
    }
    if let Some(prime) = shared_prime(b, ell) {
        return Ok(CoprimeVerdict::bad(
            VerdictReason::SharesFactorWithB { prime },
            None,
        ));
    }

    let beta = ell.trailing_zeros().unwrap_or(0);
    let d: BigUint = ell >> beta;

    if d.is_one() {
        if beta <= 1 {
            // ell is 2: a, b odd makes every odd exponent admissible
            return Ok(CoprimeVerdict::good(VerdictReason::TrivialModulus, None));
        }
        // pure 2-power: good iff ab^{-1} = -1 mod 2^beta
        return Ok(if even_part_holds(a, b, ell) {
            CoprimeVerdict::good(VerdictReason::StructuralWitness, None)
        } else {
            CoprimeVerdict::bad(VerdictReason::EvenPartFails, None)
        });
    }

    // odd part d > 1: collect nu_2(ord_p(ab^{-1})) at each prime p | d
    let mut observed: Vec<(BigUint, u64)> = Vec::new();
    for p in factorize(&d).expect("d > 1").primes() {
        let base_p = unit_ratio(a, b, p);
        let ord = multiplicative_order(&BigInt::from(base_p), p)
            .expect("gcd screen passed");
        observed.push((p.clone(), ord.trailing_zeros().expect("order >= 1")));
    }
    let common_s = observed[0].1;
    let d_good = common_s >= 1 && observed.iter().all(|(_, s)| *s == common_s);

    if beta <= 1 {
        // d and 2d are good together
        return Ok(if d_good {
            CoprimeVerdict::good(VerdictReason::StructuralWitness, None)
        } else {
            CoprimeVerdict::bad(VerdictReason::TwoAdicMismatch { observed }, None)
        });
    }

    // beta >= 2 with odd part: need the 2-power congruence and s = 1
    if !even_part_holds(a, b, &(BigUint::one() << beta)) {
        return Ok(CoprimeVerdict::bad(VerdictReason::EvenPartFails, None));
    }
    Ok(if d_good && common_s == 1 {
        CoprimeVerdict::good(VerdictReason::StructuralWitness, None)
    } else {
        CoprimeVerdict::bad(VerdictReason::TwoAdicMismatch { observed }, None)
    })
}

/// ab^{-1} = -1 (mod two_power)?
fn even_part_holds(a: &BigInt, b: &BigInt, two_power: &BigUint) -> bool {
    unit_ratio(a, b, two_power) == two_power - 1u32
}

/// Admissible exponents in the coprime setting: all k for ell in {1, 2},
/// the odd multiples of ord/2 for ell >= 3.
pub fn exponent_set_coprime(
    a: &BigInt,
    b: &BigInt,
    ell: &BigUint,
) -> Result<ExponentProgression> {
    let verdict = is_good_coprime_direct(a, b, ell)?;
    if !verdict.good {
        return Err(Error::NotGood);
    }
    match verdict.certificate {
        None => {
            // ell is 1 or 2: every positive exponent (threshold 1 = all of N)
            Ok(ExponentProgression::new(
                BigUint::zero(),
                BigUint::one(),
                1,
            ))
        }
        Some(cert) => {
            let half: BigUint = &cert.order >> 1;
            Ok(ExponentProgression::new(half, cert.order, 1))
        }
    }
}
