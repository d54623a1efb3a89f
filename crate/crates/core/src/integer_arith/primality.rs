//! Deterministic primality testing. Inputs below 2^64 get the 12-base
//! Miller-Rabin battery; larger inputs get a small-prime screen followed by
//! Baillie-PSW (base-2 Miller-Rabin plus a strong Lucas test with Selfridge
//! parameters), which has no known counterexamples.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::small_primes;

/// Witnesses that make Miller-Rabin deterministic for every n < 2^64.
const MR_BASES_U64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Number of table primes used to screen candidates above 2^64.
const SCREEN_PRIMES: usize = 512;

pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &small_primes()[..SCREEN_PRIMES] {
        // n > 2^64 > p, so divisibility means compositeness
        if (n % p).is_zero() {
            return false;
        }
    }
    miller_rabin_big(n, 2) && strong_lucas(n)
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES_U64 {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    if n < 41 * 41 {
        // composites this small always have a witness in the table above
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    MR_BASES_U64
        .iter()
        .all(|&a| miller_rabin_round_u64(n, a, d, s))
}

fn miller_rabin_round_u64(n: u64, base: u64, d: u64, s: u32) -> bool {
    let mut x = pow_mod_u64(base, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod_u64(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

pub(crate) fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

fn miller_rabin_big(n: &BigUint, base: u64) -> bool {
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().expect("n > 1");
    let d = &n_minus_1 >> s;
    let mut x = BigUint::from(base).modpow(&d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Jacobi symbol (a | n) for odd n >= 1 and |a| < n.
fn jacobi(a_signed: i64, n: &BigUint) -> i32 {
    debug_assert!(n.is_odd());
    let mut a = if a_signed < 0 {
        n - BigUint::from(a_signed.unsigned_abs()) % n
    } else {
        BigUint::from(a_signed.unsigned_abs()) % n
    };
    let mut n = n.clone();
    let mut sign = 1i32;
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = (&n % 8u32).to_u32().unwrap();
            if r == 3 || r == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32).to_u32().unwrap() == 3 && (&n % 4u32).to_u32().unwrap() == 3 {
            sign = -sign;
        }
        a %= &n;
    }
    if n.is_one() {
        sign
    } else {
        0
    }
}

/// Strong Lucas probable-prime test with Selfridge's parameter choice
/// (P = 1, Q = (1 - D)/4 for the first D in 5, -7, 9, -11, ... with
/// Jacobi symbol -1). Assumes n is odd and has no factor in the screen.
fn strong_lucas(n: &BigUint) -> bool {
    // a perfect square never yields Jacobi -1; rule it out first
    let root = n.sqrt();
    if &root * &root == *n {
        return false;
    }
    let mut d_param: i64 = 5;
    loop {
        match jacobi(d_param, n) {
            -1 => break,
            0 => return false, // shares a factor |D| < n with n
            _ => {
                d_param = if d_param > 0 {
                    -(d_param + 2)
                } else {
                    -(d_param - 2)
                }
            }
        }
    }
    let q_param = (1 - d_param) / 4;
    let q_mod = residue_i64(q_param, n);
    let d_mod = residue_i64(d_param, n);

    let n_plus_1: BigUint = n + 1u32;
    let s = n_plus_1.trailing_zeros().expect("n + 1 is even");
    let index = &n_plus_1 >> s;

    // Lucas ladder over the bits of `index`, most significant first:
    // u, v, qk track U_k, V_k, Q^k for the prefix k read so far.
    let mut u = BigUint::one();
    let mut v = BigUint::one();
    let mut qk = q_mod.clone();
    for i in (0..index.bits() - 1).rev() {
        // k -> 2k
        u = &u * &v % n;
        v = sub_mod(&(&v * &v % n), &(&qk << 1), n);
        qk = &qk * &qk % n;
        if index.bit(i) {
            // 2k -> 2k + 1, with P = 1
            let u_next = half_mod(&((&u + &v) % n), n);
            let v_next = half_mod(&((&d_mod * &u + &v) % n), n);
            u = u_next;
            v = v_next;
            qk = &qk * &q_mod % n;
        }
    }

    // strong condition: U_d = 0, or V_{d 2^r} = 0 for some 0 <= r < s
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = sub_mod(&(&v * &v % n), &(&qk << 1), n);
        qk = &qk * &qk % n;
        if v.is_zero() {
            return true;
        }
    }
    false
}

fn residue_i64(x: i64, n: &BigUint) -> BigUint {
    let r = BigUint::from(x.unsigned_abs()) % n;
    if x < 0 && !r.is_zero() {
        n - r
    } else {
        r
    }
}

/// (a - b) mod n for a < n and arbitrary b.
fn sub_mod(a: &BigUint, b: &BigUint, n: &BigUint) -> BigUint {
    let b = b % n;
    if *a >= b {
        a - b
    } else {
        a + n - b
    }
}

/// x/2 mod n for odd n.
fn half_mod(x: &BigUint, n: &BigUint) -> BigUint {
    if x.is_even() {
        x >> 1
    } else {
        (x + n) >> 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn nat(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn small_values() {
        let primes = [2u64, 3, 5, 7, 11, 13, 97, 1_000_003, 1_000_033];
        for p in primes {
            assert!(is_prime(&nat(p)), "{p} is prime");
        }
        let composites = [0u64, 1, 4, 9, 91, 561, 1_000_001, 25_872];
        for c in composites {
            assert!(!is_prime(&nat(c)), "{c} is composite");
        }
    }

    #[test]
    fn agrees_with_trial_division() {
        let mut expected = vec![true; 20_000];
        expected[0] = false;
        expected[1] = false;
        for n in 2..20_000usize {
            if expected[n] {
                let mut m = n * n;
                while m < 20_000 {
                    expected[m] = false;
                    m += n;
                }
            }
        }
        for n in 0..20_000usize {
            assert_eq!(is_prime(&nat(n as u64)), expected[n], "disagree at {n}");
        }
    }

    #[test]
    fn strong_pseudoprime_rejected() {
        // strong pseudoprime to the first several Miller-Rabin bases;
        // equals 149491 * 747451 * 34233211
        assert!(!is_prime(&nat(3_825_123_056_546_413_051)));
        assert!(is_prime(&nat(149_491)));
        assert!(is_prime(&nat(747_451)));
        assert!(is_prime(&nat(34_233_211)));
    }

    #[test]
    fn mersenne_exponents() {
        let m31 = (BigUint::one() << 31) - 1u32;
        let m61 = (BigUint::one() << 61) - 1u32;
        let m89 = (BigUint::one() << 89) - 1u32;
        assert!(is_prime(&m31));
        assert!(is_prime(&m61));
        assert!(is_prime(&m89), "the BPSW path accepts 2^89 - 1");
        assert!(!is_prime(&((BigUint::one() << 67) - 1u32)));
    }

    #[test]
    fn big_composites_rejected() {
        let m61 = (BigUint::one() << 61) - 1u32;
        let m31 = (BigUint::one() << 31) - 1u32;
        assert!(!is_prime(&(&m61 * &m31)));
        assert!(!is_prime(&(&m61 * &m61)), "perfect squares are caught");
        assert!(!is_prime(&((&m61 * &m61) * 3u32)));
    }
}
