//! Polynomials over GF(2), encoded as bitmasks: bit `i` is the coefficient
//! of `x^i`, so `0x7 = x^2 + x + 1`. Addition is XOR, multiplication is
//! carryless shift-and-XOR. Masks up to degree 64 fit in `u128`.

use crate::error::{Error, Result};

/// Largest degree for which [`irreducible_polys`] enumerates the full list.
pub const IRREDUCIBLE_ENUM_LIMIT: u32 = 16;

/// Degree of the polynomial, `None` for the zero polynomial.
#[inline]
pub fn degree(p: u128) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(127 - p.leading_zeros())
    }
}

/// Carryless product of two polynomials of degree < 64.
#[inline]
pub fn clmul(a: u64, b: u64) -> u128 {
    let a = a as u128;
    let mut acc = 0u128;
    let mut b = b;
    let mut shift = 0u32;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

/// Remainder of `a` divided by `m` over GF(2). Panics if `m` is zero.
#[inline]
pub fn poly_mod(a: u128, m: u128) -> u128 {
    let dm = degree(m).expect("zero modulus polynomial");
    let mut r = a;
    while let Some(dr) = degree(r) {
        if dr < dm {
            break;
        }
        r ^= m << (dr - dm);
    }
    r
}

/// Greatest common divisor over GF(2)[x].
pub fn poly_gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = poly_mod(a, b);
        a = b;
        b = r;
    }
    a
}

/// Square of a residue modulo `m` (inputs of degree < 64).
#[inline]
fn sqr_mod(a: u128, m: u128) -> u128 {
    debug_assert!(degree(a).map_or(true, |d| d < 64));
    poly_mod(clmul(a as u64, a as u64), m)
}

/// Irreducibility over GF(2): exhaustive trial division for degree <= 12,
/// Rabin's criterion above. The trial-division cutoff is a speed choice;
/// both tests are exact.
pub fn is_irreducible(f: u128) -> bool {
    let n = match degree(f) {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    if n <= 12 {
        // divide by every polynomial of degree 1..=n/2
        for d in 2u128..(1u128 << (n / 2 + 1)) {
            if poly_mod(f, d) == 0 {
                return false;
            }
        }
        return true;
    }
    // Rabin: x^(2^n) == x mod f, and gcd(x^(2^(n/q)) - x, f) = 1 for every
    // prime q dividing n.
    let x = 0b10u128;
    let frob = |k: u32| -> u128 {
        let mut r = x;
        for _ in 0..k {
            r = sqr_mod(r, f);
        }
        r
    };
    if frob(n) != x {
        return false;
    }
    let mut m = n;
    let mut q = 2;
    let mut primes = Vec::new();
    while q * q <= m {
        if m % q == 0 {
            primes.push(q);
            while m % q == 0 {
                m /= q;
            }
        }
        q += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    primes.iter().all(|&q| poly_gcd(frob(n / q) ^ x, f) == 1)
}

/// The lexicographically smallest monic irreducible polynomial of the given
/// degree; the crate-wide default modulus for `GF(2^L)`.
pub fn canonical_poly(bits: u32) -> Result<u128> {
    if bits == 0 || bits > 64 {
        return Err(Error::domain(format!(
            "binary field degree must be in 1..=64, got {bits}"
        )));
    }
    let lead = 1u128 << bits;
    let mut low = 0u128;
    loop {
        let f = lead | low;
        if is_irreducible(f) {
            return Ok(f);
        }
        low += 1;
        if low >= lead {
            unreachable!("an irreducible polynomial exists for every degree");
        }
    }
}

/// All monic irreducible polynomials of the given degree, ascending bitmask
/// order. Limited to degree <= [`IRREDUCIBLE_ENUM_LIMIT`].
pub fn irreducible_polys(bits: u32) -> Result<Vec<u64>> {
    if bits == 0 {
        return Err(Error::domain("degree must be at least 1"));
    }
    if bits > IRREDUCIBLE_ENUM_LIMIT {
        return Err(Error::capacity(
            format!("irreducible_polys({bits})"),
            1u128 << bits,
            1u128 << IRREDUCIBLE_ENUM_LIMIT,
        ));
    }
    let lead = 1u64 << bits;
    Ok((lead..2 * lead)
        .filter(|&f| is_irreducible(f as u128))
        .collect())
}

/// One-position circular left shift of the `bits`-bit pattern `y`.
///
/// Panics if `y` does not fit in `bits` bits.
#[inline]
pub fn barrel_rotate(y: u64, bits: u32) -> u64 {
    assert!(bits >= 1 && bits <= 64, "bit count must be in 1..=64");
    let mask = word_mask(bits);
    assert!(y <= mask, "value {y:#x} does not fit in {bits} bits");
    ((y << 1) & mask) | (y >> (bits - 1))
}

/// All-ones mask of the low `bits` bits.
#[inline]
pub fn word_mask(bits: u32) -> u64 {
    debug_assert!(bits >= 1 && bits <= 64);
    if bits == 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// Serialize a polynomial bitmask as hex, MSB = highest-degree term.
pub fn poly_to_hex(p: u128) -> String {
    format!("{p:#x}")
}

/// Parse a `0x`-prefixed hex polynomial bitmask.
pub fn poly_from_hex(s: &str) -> Result<u128> {
    let body = s
        .strip_prefix("0x")
        .or_else(|| s.strip_prefix("0X"))
        .ok_or_else(|| Error::parse(format!("polynomial {s:?} must start with 0x")))?;
    if body.is_empty() || body.len() > 32 {
        return Err(Error::parse(format!("polynomial {s:?} out of range")));
    }
    u128::from_str_radix(body, 16).map_err(|e| Error::parse(format!("polynomial {s:?}: {e}")))
}
