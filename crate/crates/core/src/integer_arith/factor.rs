//! Integer factorization: trial division over the shared prime table, then
//! Brent-cycle Pollard rho on whatever cofactor survives. The rho constant
//! walks 1, 2, 3, ... so the whole procedure is deterministic.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::primality::{is_prime, is_prime_u64, mul_mod_u64};
use super::{small_primes, Factorization};
use crate::error::{Error, Result};

pub fn factorize(n: &BigUint) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::FactorizeZero);
    }
    let mut pairs = Vec::new();
    if let Some(small) = n.to_u64() {
        factor_u64(small, &mut pairs);
        return Ok(Factorization::from_pairs(pairs));
    }
    let mut m = n.clone();
    for &p in small_primes() {
        let pb = BigUint::from(p);
        let mut e = 0u32;
        loop {
            let (q, r) = m.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            m = q;
            e += 1;
        }
        if e > 0 {
            pairs.push((pb, e));
            if let Some(small) = m.to_u64() {
                factor_u64(small, &mut pairs);
                return Ok(Factorization::from_pairs(pairs));
            }
        }
    }
    split_big(m, &mut pairs);
    Ok(Factorization::from_pairs(pairs))
}

fn factor_u64(mut m: u64, out: &mut Vec<(BigUint, u32)>) {
    if m <= 1 {
        return;
    }
    for &p in small_primes() {
        if p * p > m {
            break;
        }
        if m % p == 0 {
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((BigUint::from(p), e));
        }
    }
    if m == 1 {
        return;
    }
    if is_prime_u64(m) {
        out.push((BigUint::from(m), 1));
        return;
    }
    // composite with no factor in the table: split recursively
    let d = rho_u64(m);
    factor_u64(d, out);
    factor_u64(m / d, out);
}

/// A nontrivial factor of an odd composite with no small prime factors.
fn rho_u64(n: u64) -> u64 {
    debug_assert!(!is_prime_u64(n));
    for c in 1.. {
        if let Some(d) = brent_u64(n, c) {
            return d;
        }
    }
    unreachable!("every composite has a rho factor for some constant")
}

fn brent_u64(n: u64, c: u64) -> Option<u64> {
    let step = |x: u64| ((mul_mod_u64(x, x, n) as u128 + c as u128) % n as u128) as u64;
    const BATCH: u64 = 128;
    let mut y: u64 = 2;
    let mut r: u64 = 1;
    let mut q: u64 = 1;
    let mut x = y;
    let mut saved = y;
    let mut g: u64 = 1;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = step(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            saved = y;
            for _ in 0..BATCH.min(r - k) {
                y = step(y);
                q = mul_mod_u64(q, x.abs_diff(y), n);
            }
            g = gcd_u64(q, n);
            k += BATCH;
        }
        r <<= 1;
    }
    if g == n {
        // gcd jumped past the factor inside a batch: replay one step at a time
        g = 1;
        let mut z = saved;
        while g == 1 {
            z = step(z);
            g = gcd_u64(x.abs_diff(z), n);
            if z == x {
                break;
            }
        }
    }
    if g == 1 || g == n {
        None
    } else {
        Some(g)
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn split_big(m: BigUint, out: &mut Vec<(BigUint, u32)>) {
    if m.is_one() {
        return;
    }
    if let Some(small) = m.to_u64() {
        factor_u64(small, out);
        return;
    }
    if is_prime(&m) {
        out.push((m, 1));
        return;
    }
    let d = rho_big(&m);
    split_big(&m / &d, out);
    split_big(d, out);
}

/// A nontrivial factor of a bignum composite with no small prime factors.
fn rho_big(n: &BigUint) -> BigUint {
    const BATCH: u64 = 128;
    for c in 1u64.. {
        let cb = BigUint::from(c);
        let step = |x: &BigUint| (x * x + &cb) % n;
        let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };

        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut x = y.clone();
        let mut saved = y.clone();
        let mut g = BigUint::one();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = step(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                saved = y.clone();
                for _ in 0..BATCH.min(r - k) {
                    y = step(&y);
                    q = q * diff(&x, &y) % n;
                }
                g = q.gcd(n);
                k += BATCH;
            }
            r <<= 1;
        }
        if g == *n {
            g = BigUint::one();
            let mut z = saved;
            while g.is_one() {
                z = step(&z);
                g = diff(&x, &z).gcd(n);
                if z == x {
                    break;
                }
            }
        }
        if !g.is_one() && g != *n {
            return g;
        }
    }
    unreachable!("every composite has a rho factor for some constant")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_splits_semiprimes() {
        let n = 1_000_003u64 * 1_000_033;
        let d = rho_u64(n);
        assert!(d == 1_000_003 || d == 1_000_033);
        assert_eq!(n % d, 0);
    }

    #[test]
    fn rho_big_splits_semiprimes() {
        let p = (BigUint::one() << 61) - 1u32;
        let q = (BigUint::one() << 31) - 1u32;
        let n = &p * &q;
        let d = rho_big(&n);
        assert!(d == p || d == q);
    }

    #[test]
    fn factor_u64_handles_prime_powers() {
        let mut out = Vec::new();
        factor_u64(1_000_003u64.pow(3), &mut out);
        let f = Factorization::from_pairs(out);
        assert_eq!(f.factors(), &[(BigUint::from(1_000_003u64), 3)]);
    }
}
