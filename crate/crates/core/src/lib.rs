//! Deciding when L divides A^K + B^K.
//!
//! Fix nonzero integers A and B, not necessarily coprime. A positive
//! integer L is *good* when some positive exponent K makes L divide
//! A^K + B^K. This crate decides goodness and describes the full set of
//! admissible exponents exactly: a truncated arithmetic progression
//! {K ≡ r (mod L0), K ≥ γ(L)}, preceded in rare cases by finitely many
//! sporadic exponents below γ(L).
//!
//! The reduction: with g = gcd(A, B), A = ga, B = gb, split L into the part
//! supported on primes of g and the coprime core ℓ. L is good iff ℓ is good
//! for the coprime pair (a, b), and the g-part only shifts the threshold
//! γ(L) of the progression.
//!
//! ```
//! use num_bigint::{BigInt, BigUint};
//!
//! let verdict = good_integers::decide(
//!     &BigInt::from(18),
//!     &BigInt::from(12),
//!     &BigUint::from(3200u32),
//! )
//! .unwrap();
//! assert!(verdict.good);
//! let set = verdict.progression.unwrap();
//! assert_eq!(set.to_string(), "K ≡ 5 (mod 10), K ≥ 7");
//! assert_eq!(set.k_min, BigUint::from(15u32));
//! ```

pub mod coprime_core;
pub mod error;
pub mod goodness;
pub mod integer_arith;
pub mod oracle;
pub mod split;

pub use error::{Error, Result};
pub use goodness::{
    classify_special_case, decide, decide_using, enumerate_good, exponent_set, min_exponent,
    CoprimeCriterion, ExponentProgression, FailureStep, GoodnessVerdict, SpecialCase,
};
pub use split::{build_context, SplitContext};
