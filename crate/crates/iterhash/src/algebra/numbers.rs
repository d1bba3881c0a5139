//! Integer helpers: primality, big-integer LCM and the divisor function.

use crate::error::{Error, Result};
use num_bigint::BigUint;

/// Deterministic Miller-Rabin, exact for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut base: u64, mut e: u64| {
        let mut acc = 1u64;
        base %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        acc
    };
    // This base set is a proven deterministic witness set for n < 3.3 * 10^24.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Exact `lcm(1, 2, …, k)` as a big integer, via the prime-power
/// factorization `prod_{p <= k} p^floor(log_p k)`.
pub fn lcm_upto(k: u64) -> BigUint {
    let mut acc = BigUint::from(1u32);
    if k < 2 {
        return acc;
    }
    let mut sieve = vec![true; k as usize + 1];
    for p in 2..=k {
        if !sieve[p as usize] {
            continue;
        }
        let mut q = p;
        while q <= k / p {
            q *= p;
        }
        acc *= BigUint::from(q);
        let mut m = p * p;
        while m <= k {
            sieve[m as usize] = false;
            m += p;
        }
    }
    acc
}

/// Number of positive divisors of `n >= 1`.
pub fn divisor_count(n: u64) -> u64 {
    debug_assert!(n >= 1);
    let mut n = n;
    let mut count = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0u64;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            count *= e + 1;
        }
        p += 1;
    }
    if n > 1 {
        count *= 2;
    }
    count
}

/// `max_{1 <= i < n} d(i)` where `d` is the divisor function.
pub fn divisor_max(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::domain(format!("divisor_max needs n >= 2, got {n}")));
    }
    Ok((1..n).map(divisor_count).max().unwrap())
}
