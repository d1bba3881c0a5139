//! Closed-form impossibility bounds on the string length an iterated
//! family of hash functions can cover.
//!
//! Two kinds of bound appear: cardinality-based bounds (there are only so
//! many compression functions) and structural bounds (unary hash orbits
//! are eventually cyclic). The structural bounds are much tighter:
//!
//! | property           | cardinality bound                          | structural bound        |
//! |--------------------|--------------------------------------------|-------------------------|
//! | strongly universal | `L + 2 lg(2^L!) - lg(2^L - 1) - 1`         | `2^L + 1`               |
//! | universal          | `2L + L 2^(L+1)`                           | `2^L + 1`               |
//! | almost universal   | `L (eps 2^(L(2^(L+1)+1)) + 1)`             | `2^L + lcm(1..2^L) - 1` |

use crate::algebra::lcm_upto;
use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// The almost-universality cardinality bound grows doubly exponentially;
/// beyond this many bits it is reported as a log2 magnitude.
const ALMOST_EXACT_BIT_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub enum AlmostBound {
    Exact(BigUint),
    /// log2 of the bound, for values too large to materialize.
    Log2Bits(f64),
}

impl std::fmt::Display for AlmostBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AlmostBound::Exact(v) => write!(f, "{v}"),
            AlmostBound::Log2Bits(b) => write!(f, "2^{b:.2}"),
        }
    }
}

/// Per-L impossibility bounds (maximal string lengths).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsRow {
    pub word_bits: u32,
    /// `2L + L 2^(L+1)`
    pub cardinality_universal: BigUint,
    /// `floor(L + 2 lg(2^L!) - lg(2^L - 1) - 1)`
    pub cardinality_strong: BigUint,
    /// `L (eps 2^(L(2^(L+1)+1)) + 1)`, floored to an integer length.
    pub cardinality_almost: AlmostBound,
    /// `2^L + 1`
    pub structural_universal: BigUint,
    /// `2^L + 1`
    pub structural_strong: BigUint,
    /// `2^L + lcm(1..2^L) - 1`
    pub structural_almost: BigUint,
}

/// Exact base-2 logarithm of `n!` by compensated (Kahan) summation of
/// `log2 k`; accurate enough that the floors in the bounds table are exact
/// for `L <= 16`.
pub fn log2_factorial(n: u64) -> f64 {
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for k in 2..=n {
        let term = (k as f64).log2() - carry;
        let next = sum + term;
        carry = (next - sum) - term;
        sum = next;
    }
    sum
}

/// All bound columns for word size `L`; `epsilon` feeds the
/// almost-universal cardinality column.
pub fn table_bounds(bits: u32, epsilon: &BigRational) -> Result<BoundsRow> {
    if bits == 0 || bits > 24 {
        return Err(Error::domain("bounds table needs 1 <= L <= 24"));
    }
    check_epsilon_range(epsilon, None)?;
    let l = BigUint::from(bits);
    let two_l = BigUint::from(1u32) << bits;

    let cardinality_universal = &l * 2u32 + &l * (BigUint::from(1u32) << (bits + 1));

    let states = 1u64 << bits;
    let lg_fact = log2_factorial(states);
    let lg_m1 = ((states - 1) as f64).log2();
    let strong = (bits as f64 + 2.0 * lg_fact - lg_m1 - 1.0).floor();
    let cardinality_strong = BigUint::from(strong as u64);

    // L * (eps * 2^(L(2^(L+1)+1)) + 1)
    let exp_bits: u128 = bits as u128 * ((1u128 << (bits + 1)) + 1);
    let cardinality_almost = if exp_bits <= ALMOST_EXACT_BIT_LIMIT as u128 {
        let pow = BigInt::from(1u32) << (exp_bits as u64);
        let value = (epsilon * pow + BigInt::one()) * BigInt::from(bits);
        AlmostBound::Exact(value.floor().to_integer().to_biguint().unwrap_or_default())
    } else {
        let eps_log2 = ratio_log2(epsilon);
        AlmostBound::Log2Bits(exp_bits as f64 + eps_log2 + (bits as f64).log2())
    };

    let structural = &two_l + BigUint::one();
    let structural_almost = &two_l + lcm_upto(states) - BigUint::one();

    Ok(BoundsRow {
        word_bits: bits,
        cardinality_universal,
        cardinality_strong,
        cardinality_almost,
        structural_universal: structural.clone(),
        structural_strong: structural,
        structural_almost,
    })
}

fn ratio_log2(r: &BigRational) -> f64 {
    // bit-length difference plus a float correction keeps this accurate
    // for huge numerators/denominators
    let num = r.numer().abs().to_biguint().unwrap();
    let den = r.denom().abs().to_biguint().unwrap();
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    let scale = |v: &BigUint, bits: i64| -> f64 {
        let shift = (bits - 53).max(0) as u64;
        (v >> shift).to_f64().unwrap() * 2f64.powi(shift as i32)
    };
    let n = scale(&num, nb);
    let d = scale(&den, db);
    n.log2() - d.log2()
}

/// Nguyen-Roscoe: `epsilon`-almost universal hashing over at least `2^K`
/// items needs at least `ceil(K/L - 1) / epsilon` hash functions.
pub fn min_family_size(k: u64, bits: u32, epsilon: &BigRational) -> Result<BigUint> {
    if bits == 0 {
        return Err(Error::domain("word size must be at least 1"));
    }
    if epsilon <= &BigRational::zero() {
        return Err(Error::domain("epsilon must be positive"));
    }
    let ratio = BigRational::new(BigInt::from(k), BigInt::from(bits)) - BigInt::one();
    let numerator = ratio.ceil().to_integer();
    if numerator <= BigInt::zero() {
        return Ok(BigUint::zero());
    }
    let functions = (BigRational::from_integer(numerator) / epsilon).ceil();
    Ok(functions.to_integer().to_biguint().unwrap())
}

/// Stinson's cardinality bounds: strongly universal families over `a`
/// strings and `b` hash values need at least `1 + a(b-1)` functions;
/// universal ones at least `ceil(a/b)`.
pub fn stinson_min_size(num_strings: &BigUint, num_values: &BigUint, strong: bool) -> Result<BigUint> {
    if num_strings.is_zero() || num_values.is_zero() {
        return Err(Error::domain("counts must be at least 1"));
    }
    Ok(if strong {
        BigUint::one() + num_strings * (num_values - BigUint::one())
    } else {
        (num_strings + num_values - BigUint::one()) / num_values
    })
}

/// The length at which `epsilon`-almost universality becomes impossible
/// for iterated hashing: `2^L + lcm(1 .. 2^L + 1 - floor(1/epsilon))`.
/// Requires `1/2^L < epsilon < 1` with `1/epsilon` not an integer.
pub fn epsilon_impossible_length(bits: u32, epsilon: &BigRational) -> Result<BigUint> {
    if bits == 0 || bits > 16 {
        return Err(Error::domain("impossible-length needs 1 <= L <= 16"));
    }
    check_epsilon_range(epsilon, Some(bits))?;
    let inv = epsilon.recip();
    if inv.is_integer() {
        return Err(Error::domain("1/epsilon must not be an integer"));
    }
    let floor_inv = inv.floor().to_integer().to_u64().unwrap();
    let states = 1u64 << bits;
    let k = states + 1 - floor_inv;
    Ok(BigUint::from(states) + lcm_upto(k))
}

fn check_epsilon_range(epsilon: &BigRational, bits: Option<u32>) -> Result<()> {
    if epsilon <= &BigRational::zero() || epsilon >= &BigRational::one() {
        return Err(Error::domain(format!("epsilon must be in (0, 1), got {epsilon}")));
    }
    if let Some(bits) = bits {
        let lower = BigRational::new(BigInt::one(), BigInt::from(1u128 << bits));
        if epsilon <= &lower {
            return Err(Error::domain(format!(
                "epsilon must exceed 1/2^{bits}, got {epsilon}"
            )));
        }
    }
    Ok(())
}

/// Parse a rational like `1/4`, `3/7` or an integer `1`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::parse(format!("invalid integer {t:?}")))
    };
    match s.split_once('/') {
        Some((num, den)) => {
            let den = parse_int(den)?;
            if den.is_zero() {
                return Err(Error::parse("zero denominator"));
            }
            Ok(BigRational::new(parse_int(num)?, den))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

/// log2 of the iterated-family cardinality cap `2^(L(2^L sigma + 1))`.
pub fn iterated_family_log2_cap(bits: u32, sigma: u64) -> u128 {
    bits as u128 * ((1u128 << bits) * sigma as u128 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eps(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn table4_rows() {
        // (L, cardinality universal, cardinality strong, structural universal)
        for (bits, cu, cs, su) in [
            (2u32, 20u64, 8u64, 5u64),
            (4, 136, 87, 17),
            (8, 4112, 3366, 257),
            (16, 2097184, 1908072, 65537),
        ] {
            let row = table_bounds(bits, &eps(1, 2)).unwrap();
            assert_eq!(row.cardinality_universal, BigUint::from(cu), "L={bits}");
            assert_eq!(row.cardinality_strong, BigUint::from(cs), "L={bits}");
            assert_eq!(row.structural_universal, BigUint::from(su), "L={bits}");
        }
    }

    #[test]
    fn structural_almost_values() {
        let row = table_bounds(2, &eps(1, 2)).unwrap();
        assert_eq!(row.structural_almost, BigUint::from(4u32 + 12 - 1));
        let row = table_bounds(3, &eps(1, 2)).unwrap();
        assert_eq!(row.structural_almost, BigUint::from(8u32 + 840 - 1));
    }

    #[test]
    fn cardinality_almost_modes() {
        // L=2: 2 (eps 2^18 + 1): exact
        let row = table_bounds(2, &eps(1, 2)).unwrap();
        assert_eq!(
            row.cardinality_almost,
            AlmostBound::Exact(BigUint::from(2u64 * ((1 << 18) / 2 + 1)))
        );
        // L=16 exponent is 16*(2^17+1) bits: log form
        let row = table_bounds(16, &eps(1, 2)).unwrap();
        match row.cardinality_almost {
            AlmostBound::Log2Bits(b) => {
                let expect = 16.0 * ((1u64 << 17) + 1) as f64 - 1.0 + 4.0;
                assert!((b - expect).abs() < 1.0, "{b} vs {expect}");
            }
            other => panic!("expected log form, got {other:?}"),
        }
    }

    #[test]
    fn structural_below_cardinality() {
        for bits in 2..=8u32 {
            let row = table_bounds(bits, &eps(1, 2)).unwrap();
            assert!(row.structural_universal <= row.cardinality_universal);
            assert!(row.structural_strong <= row.cardinality_strong);
            if let AlmostBound::Exact(v) = &row.cardinality_almost {
                assert!(&row.structural_almost <= v, "L={bits}");
            }
        }
    }

    #[test]
    fn min_family_size_examples() {
        // K = 2L, eps = 1/2^L -> 2^L
        assert_eq!(min_family_size(16, 8, &eps(1, 256)).unwrap(), BigUint::from(256u32));
        // K = L -> vacuous
        assert_eq!(min_family_size(8, 8, &eps(1, 4)).unwrap(), BigUint::zero());
        // K = 10L, eps = 1/4 -> ceil(9) * 4 = 36
        assert_eq!(min_family_size(320, 32, &eps(1, 4)).unwrap(), BigUint::from(36u32));
        // non-multiple K rounds up
        assert_eq!(min_family_size(9, 8, &eps(1, 2)).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn stinson_examples() {
        // multilinear optimality: a = p^n - 1, b = p
        let p = 5u64;
        let n = 3u32;
        let a = BigUint::from(p.pow(n) - 1);
        let b = BigUint::from(p);
        assert_eq!(
            stinson_min_size(&a, &b, true).unwrap(),
            BigUint::from(1 + (p.pow(n) - 1) * (p - 1))
        );
        // tabulated optimality: a = 2^(L+1) - 2, b = 2^L
        let bits = 4u32;
        let a = BigUint::from((1u64 << (bits + 1)) - 2);
        let b = BigUint::from(1u64 << bits);
        assert_eq!(
            stinson_min_size(&a, &b, true).unwrap(),
            BigUint::from(1 + ((1u64 << (bits + 1)) - 2) * ((1u64 << bits) - 1))
        );
        // a = b, universal -> 1
        assert_eq!(
            stinson_min_size(&BigUint::from(7u32), &BigUint::from(7u32), false).unwrap(),
            BigUint::one()
        );
        // universal rounds up
        assert_eq!(
            stinson_min_size(&BigUint::from(9u32), &BigUint::from(4u32), false).unwrap(),
            BigUint::from(3u32)
        );
    }

    #[test]
    fn epsilon_impossible_examples() {
        // eps just above 1/2^L: floor(1/eps) = 2^L - 1 -> 2^L + lcm(1..2) = 2^L + 2
        for bits in [2u32, 3, 4] {
            let states = 1u64 << bits;
            let e = eps(2, (2 * states - 1) as i64); // 2/(2*2^L-1), just above 1/2^L
            assert_eq!(
                epsilon_impossible_length(bits, &e).unwrap(),
                BigUint::from(states + 2)
            );
        }
        // L=2, eps = 2/5: floor(5/2) = 2 -> 4 + lcm(1..3) = 10
        assert_eq!(epsilon_impossible_length(2, &eps(2, 5)).unwrap(), BigUint::from(10u32));
        // L=2, eps just below 1: floor(1/eps) = 1 -> 4 + lcm(1..4) = 16
        assert_eq!(
            epsilon_impossible_length(2, &eps(99, 100)).unwrap(),
            BigUint::from(16u32)
        );
    }

    #[test]
    fn epsilon_domain_errors() {
        assert!(epsilon_impossible_length(2, &eps(1, 4)).is_err()); // = 1/2^L
        assert!(epsilon_impossible_length(2, &eps(1, 2)).is_err()); // 1/eps integral
        assert!(epsilon_impossible_length(2, &eps(5, 4)).is_err()); // > 1
        assert!(epsilon_impossible_length(2, &eps(-1, 4)).is_err());
    }

    #[test]
    fn log2_factorial_matches_exact_small() {
        let mut fact = 1f64;
        for n in 2..=20u64 {
            fact *= n as f64;
            assert!((log2_factorial(n) - fact.log2()).abs() < 1e-9, "n={n}");
        }
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("1/4").unwrap(), eps(1, 4));
        assert_eq!(parse_rational("3").unwrap(), BigRational::from_integer(BigInt::from(3)));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x/2").is_err());
        assert!(parse_rational("").is_err());
    }
}
