//! Brute-force reference implementation: decides L | A^K + B^K by direct
//! modular evaluation. Every property suite checks the clever machinery
//! against this module, so it deliberately stays naive and calls none of
//! the factorization, order, or decision code.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::integer_arith::{mod_pow, residue};

/// Result of an exhaustive exponent scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    /// Every admissible K up to the bound, increasing.
    pub admissible: Vec<u64>,
    /// Inclusive upper end of the scanned range.
    pub bound: u64,
}

impl OracleReport {
    /// Least admissible exponent found, if any.
    pub fn minimum(&self) -> Option<u64> {
        self.admissible.first().copied()
    }
}

/// Does L divide A^K + B^K? One modular exponentiation per base.
pub fn divides_power_sum(a: &BigInt, b: &BigInt, l: &BigUint, k: &BigUint) -> bool {
    assert!(!l.is_zero(), "L must be positive");
    assert!(!k.is_zero(), "exponents start at 1");
    ((mod_pow(a, k, l) + mod_pow(b, k, l)) % l).is_zero()
}

/// All K in 1..=bound with L | A^K + B^K. Maintains running residues of
/// A^K and B^K, so each step costs one modular multiply per base.
pub fn scan_exponents(a: &BigInt, b: &BigInt, l: &BigUint, bound: u64) -> OracleReport {
    assert!(!l.is_zero(), "L must be positive");
    let ra = residue(a, l);
    let rb = residue(b, l);
    let mut xa = ra.clone();
    let mut xb = rb.clone();
    let mut admissible = Vec::new();
    for k in 1..=bound {
        if ((&xa + &xb) % l).is_zero() {
            admissible.push(k);
        }
        if k < bound {
            xa = xa * &ra % l;
            xb = xb * &rb % l;
        }
    }
    OracleReport { admissible, bound }
}
