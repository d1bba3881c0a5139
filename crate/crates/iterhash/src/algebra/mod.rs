//! Exact arithmetic for every structure the hash families compute over.
//!
//! Four kinds of structure appear:
//!
//! * **prime field** `F_p` — ordinary integer arithmetic mod a prime;
//! * **binary field** `GF(2^L) = GF(2)[x]/p(x)` for an irreducible `p(x)`
//!   of degree `L` — addition is XOR, multiplication is carryless with
//!   reduction;
//! * **binary ring** `GF(2)[x]/(x^L+1)` — same arithmetic but `x^L+1` is
//!   reducible, so multiplication by `x` is the barrel rotation and not
//!   every element is invertible;
//! * **mod 2^L** — plain wrapping integer arithmetic on `L`-bit words.
//!
//! Values are canonical representatives: integers in `[0, p)` for prime
//! fields, `L`-bit masks otherwise. Elements remember their structure and
//! refuse to mix with another one.

pub mod gf2;
pub mod numbers;

pub use gf2::{
    barrel_rotate, canonical_poly, irreducible_polys, is_irreducible, poly_from_hex, poly_to_hex,
    word_mask,
};
pub use numbers::{divisor_count, divisor_max, is_prime, lcm_upto};

use crate::error::{Error, Result};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgebraKind {
    PrimeField,
    BinaryField,
    BinaryRing,
    Mod2L,
}

/// Description of one arithmetic structure. Cheap to copy and compare.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AlgebraSpec {
    kind: AlgebraKind,
    word_bits: u32,
    prime: u64,
    reduction_poly: u128,
}

impl AlgebraSpec {
    pub fn prime_field(p: u64) -> Result<Self> {
        if !numbers::is_prime(p) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        let word_bits = (64 - (p - 1).leading_zeros()).max(1);
        Ok(AlgebraSpec {
            kind: AlgebraKind::PrimeField,
            word_bits,
            prime: p,
            reduction_poly: 0,
        })
    }

    /// `GF(2^bits)` with the canonical (lexicographically smallest)
    /// irreducible reduction polynomial.
    pub fn binary_field(bits: u32) -> Result<Self> {
        Self::binary_field_with_poly(bits, gf2::canonical_poly(bits)?)
    }

    pub fn binary_field_with_poly(bits: u32, poly: u128) -> Result<Self> {
        check_bits(bits)?;
        if gf2::degree(poly) != Some(bits) {
            return Err(Error::domain(format!(
                "reduction polynomial {} must have degree exactly {bits}",
                gf2::poly_to_hex(poly)
            )));
        }
        if !gf2::is_irreducible(poly) {
            return Err(Error::domain(format!(
                "reduction polynomial {} is reducible over GF(2)",
                gf2::poly_to_hex(poly)
            )));
        }
        Ok(AlgebraSpec {
            kind: AlgebraKind::BinaryField,
            word_bits: bits,
            prime: 0,
            reduction_poly: poly,
        })
    }

    /// The ring `GF(2)[x]/(x^bits + 1)`; multiplication by `x` is the
    /// barrel rotation.
    pub fn binary_ring(bits: u32) -> Result<Self> {
        check_bits(bits)?;
        Ok(AlgebraSpec {
            kind: AlgebraKind::BinaryRing,
            word_bits: bits,
            prime: 0,
            reduction_poly: (1u128 << bits) | 1,
        })
    }

    /// Integers mod `2^bits` with wrapping arithmetic.
    pub fn mod2l(bits: u32) -> Result<Self> {
        check_bits(bits)?;
        Ok(AlgebraSpec {
            kind: AlgebraKind::Mod2L,
            word_bits: bits,
            prime: 0,
            reduction_poly: 0,
        })
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn word_bits(&self) -> u32 {
        self.word_bits
    }

    pub fn prime(&self) -> Option<u64> {
        (self.kind == AlgebraKind::PrimeField).then_some(self.prime)
    }

    pub fn reduction_poly(&self) -> Option<u128> {
        matches!(self.kind, AlgebraKind::BinaryField | AlgebraKind::BinaryRing)
            .then_some(self.reduction_poly)
    }

    /// Number of elements: `p` for prime fields, `2^L` otherwise.
    pub fn value_count(&self) -> u128 {
        match self.kind {
            AlgebraKind::PrimeField => self.prime as u128,
            _ => 1u128 << self.word_bits,
        }
    }

    pub fn contains(&self, v: u64) -> bool {
        (v as u128) < self.value_count()
    }

    pub fn is_field(&self) -> bool {
        matches!(self.kind, AlgebraKind::PrimeField | AlgebraKind::BinaryField)
    }

    pub fn element(&self, value: u64) -> Result<Element> {
        if !self.contains(value) {
            return Err(Error::domain(format!(
                "{value} is not a canonical element of {self}"
            )));
        }
        Ok(Element {
            value,
            algebra: *self,
        })
    }

    #[inline]
    pub(crate) fn mask(&self) -> u64 {
        gf2::word_mask(self.word_bits)
    }

    #[inline]
    pub(crate) fn add_raw(&self, a: u64, b: u64) -> u64 {
        match self.kind {
            AlgebraKind::PrimeField => {
                let s = a as u128 + b as u128;
                let p = self.prime as u128;
                (if s >= p { s - p } else { s }) as u64
            }
            AlgebraKind::BinaryField | AlgebraKind::BinaryRing => a ^ b,
            AlgebraKind::Mod2L => a.wrapping_add(b) & self.mask(),
        }
    }

    #[inline]
    pub(crate) fn sub_raw(&self, a: u64, b: u64) -> u64 {
        match self.kind {
            AlgebraKind::PrimeField => {
                let p = self.prime;
                if a >= b {
                    a - b
                } else {
                    a + (p - b)
                }
            }
            AlgebraKind::BinaryField | AlgebraKind::BinaryRing => a ^ b,
            AlgebraKind::Mod2L => a.wrapping_sub(b) & self.mask(),
        }
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: u64, b: u64) -> u64 {
        match self.kind {
            AlgebraKind::PrimeField => {
                ((a as u128 * b as u128) % self.prime as u128) as u64
            }
            AlgebraKind::BinaryField => {
                gf2::poly_mod(gf2::clmul(a, b), self.reduction_poly) as u64
            }
            AlgebraKind::BinaryRing => {
                // x^L = 1, so fold the high half back once; the carryless
                // product has degree <= 2L-2 < 2L.
                let p = gf2::clmul(a, b);
                ((p ^ (p >> self.word_bits)) as u64) & self.mask()
            }
            AlgebraKind::Mod2L => a.wrapping_mul(b) & self.mask(),
        }
    }

    pub(crate) fn pow_raw(&self, base: u64, mut exp: u64) -> u64 {
        let mut acc = if self.kind == AlgebraKind::PrimeField {
            1 % self.prime
        } else {
            1
        };
        let mut base = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            exp >>= 1;
        }
        acc
    }

    pub(crate) fn inv_raw(&self, a: u64) -> Result<u64> {
        if !self.is_field() {
            return Err(Error::NotAField(self.to_string()));
        }
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        // Fermat: a^(q-2) in a field of q elements.
        let exp = match self.kind {
            AlgebraKind::PrimeField => self.prime - 2,
            AlgebraKind::BinaryField => (self.value_count() - 2) as u64,
            _ => unreachable!(),
        };
        Ok(self.pow_raw(a, exp))
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            AlgebraKind::PrimeField => write!(f, "F_{}", self.prime),
            AlgebraKind::BinaryField => write!(
                f,
                "GF(2^{})/{}",
                self.word_bits,
                gf2::poly_to_hex(self.reduction_poly)
            ),
            AlgebraKind::BinaryRing => write!(f, "GF(2)[x]/(x^{}+1)", self.word_bits),
            AlgebraKind::Mod2L => write!(f, "Z/2^{}", self.word_bits),
        }
    }
}

fn check_bits(bits: u32) -> Result<()> {
    if bits == 0 || bits > 64 {
        Err(Error::domain(format!(
            "word size must be in 1..=64 bits, got {bits}"
        )))
    } else {
        Ok(())
    }
}

/// One value together with the structure it lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Element {
    value: u64,
    algebra: AlgebraSpec,
}

impl Element {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn algebra(&self) -> &AlgebraSpec {
        &self.algebra
    }

    fn same_algebra(&self, rhs: &Element) -> Result<()> {
        if self.algebra == rhs.algebra {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch {
                left: self.algebra.to_string(),
                right: rhs.algebra.to_string(),
            })
        }
    }

    pub fn add(&self, rhs: &Element) -> Result<Element> {
        self.same_algebra(rhs)?;
        Ok(Element {
            value: self.algebra.add_raw(self.value, rhs.value),
            algebra: self.algebra,
        })
    }

    pub fn sub(&self, rhs: &Element) -> Result<Element> {
        self.same_algebra(rhs)?;
        Ok(Element {
            value: self.algebra.sub_raw(self.value, rhs.value),
            algebra: self.algebra,
        })
    }

    pub fn mul(&self, rhs: &Element) -> Result<Element> {
        self.same_algebra(rhs)?;
        Ok(Element {
            value: self.algebra.mul_raw(self.value, rhs.value),
            algebra: self.algebra,
        })
    }

    pub fn inv(&self) -> Result<Element> {
        Ok(Element {
            value: self.algebra.inv_raw(self.value)?,
            algebra: self.algebra,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_examples() {
        let gf4 = AlgebraSpec::binary_field(2).unwrap();
        assert_eq!(
            gf4.element(2).unwrap().add(&gf4.element(3).unwrap()).unwrap().value(),
            1
        );
        let f7 = AlgebraSpec::prime_field(7).unwrap();
        assert_eq!(
            f7.element(5).unwrap().add(&f7.element(4).unwrap()).unwrap().value(),
            2
        );
        for v in 0..7 {
            let a = f7.element(v).unwrap();
            assert_eq!(a.add(&f7.element(0).unwrap()).unwrap(), a);
        }
    }

    #[test]
    fn mul_examples() {
        let gf4 = AlgebraSpec::binary_field_with_poly(2, 0b111).unwrap();
        // x * x = x + 1
        assert_eq!(
            gf4.element(2).unwrap().mul(&gf4.element(2).unwrap()).unwrap().value(),
            3
        );
        let ring3 = AlgebraSpec::binary_ring(3).unwrap();
        // x^2 * x = x^3 = 1
        assert_eq!(
            ring3.element(4).unwrap().mul(&ring3.element(2).unwrap()).unwrap().value(),
            1
        );
        let m16 = AlgebraSpec::mod2l(4).unwrap();
        for v in 0..16 {
            let a = m16.element(v).unwrap();
            assert_eq!(a.mul(&m16.element(1).unwrap()).unwrap(), a);
        }
    }

    #[test]
    fn inv_examples() {
        let gf4 = AlgebraSpec::binary_field(2).unwrap();
        assert_eq!(gf4.element(1).unwrap().inv().unwrap().value(), 1);
        assert_eq!(gf4.element(2).unwrap().inv().unwrap().value(), 3);
        let f5 = AlgebraSpec::prime_field(5).unwrap();
        assert_eq!(f5.element(2).unwrap().inv().unwrap().value(), 3);
        assert_eq!(
            f5.element(0).unwrap().inv().unwrap_err(),
            Error::DivisionByZero
        );
        let ring = AlgebraSpec::binary_ring(3).unwrap();
        assert!(matches!(
            ring.element(3).unwrap().inv().unwrap_err(),
            Error::NotAField(_)
        ));
        let m2l = AlgebraSpec::mod2l(4).unwrap();
        assert!(matches!(
            m2l.element(3).unwrap().inv().unwrap_err(),
            Error::NotAField(_)
        ));
    }

    #[test]
    fn cross_algebra_is_structural_error() {
        let a = AlgebraSpec::binary_field(2).unwrap().element(1).unwrap();
        let b = AlgebraSpec::prime_field(3).unwrap().element(1).unwrap();
        assert!(matches!(
            a.add(&b).unwrap_err(),
            Error::AlgebraMismatch { .. }
        ));
        // same kind, different modulus is also a mismatch
        let c = AlgebraSpec::prime_field(5).unwrap().element(1).unwrap();
        assert!(b.mul(&c).is_err());
    }

    #[test]
    fn canonical_range_enforced() {
        let f3 = AlgebraSpec::prime_field(3).unwrap();
        assert!(f3.element(3).is_err());
        assert!(f3.element(2).is_ok());
        let gf4 = AlgebraSpec::binary_field(2).unwrap();
        assert!(gf4.element(4).is_err());
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(AlgebraSpec::prime_field(6).is_err());
        assert!(AlgebraSpec::binary_field_with_poly(2, 0b101).is_err()); // reducible
        assert!(AlgebraSpec::binary_field_with_poly(2, 0b1011).is_err()); // wrong degree
        assert!(AlgebraSpec::mod2l(0).is_err());
        assert!(AlgebraSpec::mod2l(65).is_err());
    }

    /// Field axioms, exhaustive over every field with at most 2^8 elements
    /// that the crate's tests touch.
    #[test]
    fn field_axioms_exhaustive() {
        let mut fields = vec![
            AlgebraSpec::prime_field(2).unwrap(),
            AlgebraSpec::prime_field(3).unwrap(),
            AlgebraSpec::prime_field(5).unwrap(),
            AlgebraSpec::prime_field(7).unwrap(),
        ];
        for bits in 1..=4 {
            fields.push(AlgebraSpec::binary_field(bits).unwrap());
        }
        for alg in fields {
            let n = alg.value_count() as u64;
            for a in 0..n {
                for b in 0..n {
                    assert_eq!(alg.mul_raw(a, b), alg.mul_raw(b, a));
                    assert_eq!(alg.add_raw(a, b), alg.add_raw(b, a));
                    for c in 0..n {
                        assert_eq!(
                            alg.mul_raw(alg.mul_raw(a, b), c),
                            alg.mul_raw(a, alg.mul_raw(b, c))
                        );
                        assert_eq!(
                            alg.add_raw(alg.add_raw(a, b), c),
                            alg.add_raw(a, alg.add_raw(b, c))
                        );
                        assert_eq!(
                            alg.mul_raw(a, alg.add_raw(b, c)),
                            alg.add_raw(alg.mul_raw(a, b), alg.mul_raw(a, c))
                        );
                    }
                }
                if a != 0 {
                    let inv = alg.inv_raw(a).unwrap();
                    assert_eq!(alg.mul_raw(a, inv), 1, "{alg} inv({a})");
                }
            }
        }
        // larger fields: inverses and commutativity exhaustively
        for alg in [
            AlgebraSpec::prime_field(251).unwrap(),
            AlgebraSpec::binary_field(8).unwrap(),
        ] {
            let n = alg.value_count() as u64;
            for a in 1..n {
                assert_eq!(alg.mul_raw(a, alg.inv_raw(a).unwrap()), 1);
            }
        }
    }

    /// Multiplying by the x element of a binary field matches
    /// shift-left-then-conditionally-XOR-p(x), exhaustively for L <= 8.
    #[test]
    fn mul_by_x_is_shift_reduce() {
        for bits in 2..=8u32 {
            let alg = AlgebraSpec::binary_field(bits).unwrap();
            let poly = alg.reduction_poly().unwrap() as u64;
            let mask = gf2::word_mask(bits);
            for a in 0..(1u64 << bits) {
                let shifted = if a >> (bits - 1) & 1 == 1 {
                    ((a << 1) ^ poly) & mask
                } else {
                    (a << 1) & mask
                };
                assert_eq!(alg.mul_raw(a, 0b10), shifted, "L={bits} a={a}");
            }
        }
    }

    #[test]
    fn ring_mul_by_x_is_barrel_rotate() {
        for bits in 1..=8u32 {
            let alg = AlgebraSpec::binary_ring(bits).unwrap();
            for a in 0..(1u64 << bits) {
                let want = gf2::barrel_rotate(a, bits);
                let got = if bits == 1 {
                    // x = 1 in GF(2)[x]/(x+1)
                    alg.mul_raw(a, 1)
                } else {
                    alg.mul_raw(a, 0b10)
                };
                assert_eq!(got, want, "L={bits} a={a}");
            }
        }
    }
}
