//! The hash families under one interface.
//!
//! A [`FamilySpec`] describes a parameterized family (construction, word
//! size, alphabet, parameter space); a [`HashInstance`] is one drawn member
//! with fixed compression parameters and initial value. Families small
//! enough can be enumerated exactly ([`enumerate_instances`]); any family
//! can be sampled deterministically ([`sample_instance`]).

mod enumerate;
mod instance;
mod parse;
mod structure;

pub use enumerate::{enumerate_instances, sample_instance, Enumeration};
pub use instance::{java_signed, HashInstance, Params};
pub use structure::{is_permuting, is_strongly_permuting};

use crate::algebra::{AlgebraKind, AlgebraSpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Construction {
    Multilinear,
    Zobrist,
    CwPoly,
    CwPolyStrong,
    Tabulated,
    ShiftTabulated,
    Pearson,
    GeneralizedPearson,
    Division,
    Bernstein,
    Fnv1,
    Fnv1a,
    Sax,
    Sxx,
    GccCpp,
    JavaString,
    PowerOfTwo,
}

impl Construction {
    pub const ALL: [Construction; 17] = [
        Construction::Multilinear,
        Construction::Zobrist,
        Construction::CwPoly,
        Construction::CwPolyStrong,
        Construction::Tabulated,
        Construction::ShiftTabulated,
        Construction::Pearson,
        Construction::GeneralizedPearson,
        Construction::Division,
        Construction::Bernstein,
        Construction::Fnv1,
        Construction::Fnv1a,
        Construction::Sax,
        Construction::Sxx,
        Construction::GccCpp,
        Construction::JavaString,
        Construction::PowerOfTwo,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Construction::Multilinear => "multilinear",
            Construction::Zobrist => "zobrist",
            Construction::CwPoly => "cwpoly",
            Construction::CwPolyStrong => "cwpoly-strong",
            Construction::Tabulated => "tabulated",
            Construction::ShiftTabulated => "shift-tabulated",
            Construction::Pearson => "pearson",
            Construction::GeneralizedPearson => "generalized-pearson",
            Construction::Division => "division",
            Construction::Bernstein => "bernstein",
            Construction::Fnv1 => "fnv1",
            Construction::Fnv1a => "fnv1a",
            Construction::Sax => "sax",
            Construction::Sxx => "sxx",
            Construction::GccCpp => "gcc-cpp",
            Construction::JavaString => "java-string",
            Construction::PowerOfTwo => "power-of-two",
        }
    }

    pub fn from_name(s: &str) -> Option<Construction> {
        Construction::ALL.iter().copied().find(|c| c.name() == s)
    }

    /// Constructions whose compression function changes with the position
    /// (generalized iterated hashing).
    pub fn uses_position(&self) -> bool {
        matches!(
            self,
            Construction::Multilinear | Construction::Zobrist | Construction::CwPolyStrong
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InitPolicy {
    FixedZero,
    FixedOne,
    Random,
}

impl InitPolicy {
    pub fn name(&self) -> &'static str {
        match self {
            InitPolicy::FixedZero => "zero",
            InitPolicy::FixedOne => "one",
            InitPolicy::Random => "random",
        }
    }
}

/// A parameterized hash-family descriptor.
///
/// The canonical text form is
/// `<construction>:L=<bits>[,sigma=<n>][,poly=0x..][,p=<prime>][,l=..,r=..][,init=zero|one|random][,maxlen=..]`,
/// see [`FamilySpec::parse`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub construction: Construction,
    pub algebra: AlgebraSpec,
    /// Characters are the integers `0 .. alphabet_size-1`.
    pub alphabet_size: u64,
    /// Shift amount for bernstein/sax/sxx.
    pub shift_l: u32,
    /// Right-shift amount for sax/sxx.
    pub shift_r: u32,
    /// Odd multiplier for fnv1/fnv1a.
    pub fnv_prime: u64,
    /// Parameter capacity for multilinear/zobrist; advisory length bound
    /// (used by independence claims) for the rest.
    pub max_len: usize,
    pub init_policy: InitPolicy,
}

pub const DEFAULT_MAX_LEN: usize = 4;

impl FamilySpec {
    /// Spec with the documented defaults for `construction` at `bits` bits.
    pub fn new(construction: Construction, bits: u32) -> Result<FamilySpec> {
        use Construction::*;
        let bits = match construction {
            GccCpp | JavaString => 32,
            _ => bits,
        };
        let algebra = match construction {
            Multilinear | CwPoly | CwPolyStrong | Tabulated | Division => {
                AlgebraSpec::binary_field(bits)?
            }
            ShiftTabulated => AlgebraSpec::binary_ring(bits)?,
            _ => AlgebraSpec::mod2l(bits)?,
        };
        let spec = FamilySpec {
            construction,
            algebra,
            alphabet_size: default_sigma(construction, &algebra),
            shift_l: default_shift_l(bits),
            shift_r: default_shift_r(bits),
            fnv_prime: 16777619,
            max_len: DEFAULT_MAX_LEN,
            init_policy: default_init(construction),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn word_bits(&self) -> u32 {
        self.algebra.word_bits()
    }

    /// Number of distinct hash values: `p` for prime fields, `2^L` else.
    pub fn value_count(&self) -> u128 {
        self.algebra.value_count()
    }

    pub fn validate(&self) -> Result<()> {
        use Construction::*;
        let c = self.construction;
        let bits = self.word_bits();
        let expect_kind = |kind: AlgebraKind, what: &str| -> Result<()> {
            if self.algebra.kind() == kind {
                Ok(())
            } else {
                Err(Error::domain(format!(
                    "{} requires a {what} structure, got {}",
                    c.name(),
                    self.algebra
                )))
            }
        };
        match c {
            Multilinear | CwPoly | CwPolyStrong => {
                if !self.algebra.is_field() {
                    return Err(Error::domain(format!(
                        "{} requires a field, got {}",
                        c.name(),
                        self.algebra
                    )));
                }
            }
            Tabulated | Division => expect_kind(AlgebraKind::BinaryField, "binary-field")?,
            ShiftTabulated => expect_kind(AlgebraKind::BinaryRing, "binary-ring")?,
            _ => expect_kind(AlgebraKind::Mod2L, "mod-2^L")?,
        }
        if self.alphabet_size == 0 {
            return Err(Error::domain("alphabet must have at least one character"));
        }
        // Constructions that feed the character into word arithmetic need
        // characters to be hash values themselves; table-indexed ones accept
        // any alphabet.
        let table_indexed = matches!(c, Tabulated | ShiftTabulated | Zobrist);
        if !table_indexed && self.alphabet_size as u128 > self.value_count() {
            return Err(Error::domain(format!(
                "{} needs alphabet_size <= {}",
                c.name(),
                self.value_count()
            )));
        }
        match c {
            Bernstein => {
                if self.shift_l == 0 || self.shift_l >= bits {
                    return Err(Error::domain(format!(
                        "bernstein needs 0 < l < {bits}, got l={}",
                        self.shift_l
                    )));
                }
            }
            Sax | Sxx => {
                if self.shift_l == 0 || self.shift_l >= bits || self.shift_r == 0 || self.shift_r >= bits {
                    return Err(Error::domain(format!(
                        "{} needs 0 < l, r < {bits}, got l={}, r={}",
                        c.name(),
                        self.shift_l,
                        self.shift_r
                    )));
                }
            }
            Fnv1 | Fnv1a => {
                if self.fnv_prime % 2 == 0 {
                    return Err(Error::domain(format!(
                        "fnv multiplier must be odd, got {}",
                        self.fnv_prime
                    )));
                }
            }
            GccCpp | JavaString => {
                if bits != 32 {
                    return Err(Error::domain(format!("{} is fixed at L=32", c.name())));
                }
                if self.init_policy != InitPolicy::FixedZero {
                    return Err(Error::domain(format!(
                        "{} has a fixed zero initial value",
                        c.name()
                    )));
                }
            }
            Zobrist => {
                if self.init_policy != InitPolicy::FixedZero {
                    return Err(Error::domain("zobrist has a fixed zero initial value"));
                }
            }
            _ => {}
        }
        if self.init_policy == InitPolicy::FixedOne && self.value_count() < 2 {
            return Err(Error::domain("init=one needs at least two hash values"));
        }
        if self.max_len == 0 {
            return Err(Error::domain("maxlen must be at least 1"));
        }
        Ok(())
    }
}

fn default_sigma(c: Construction, algebra: &AlgebraSpec) -> u64 {
    use Construction::*;
    match c {
        // binary strings: the tabulation families' independence claims are
        // about short strings over small alphabets
        Tabulated | ShiftTabulated | Zobrist => 2,
        GccCpp | JavaString => 256,
        // characters are hash values; cap the default at byte alphabets
        _ => algebra.value_count().min(256) as u64,
    }
}

fn default_init(c: Construction) -> InitPolicy {
    use Construction::*;
    match c {
        CwPoly | Division => InitPolicy::FixedOne,
        GccCpp | JavaString | Zobrist => InitPolicy::FixedZero,
        // cwpoly-strong derives H_0 = t + zeta; the policy is ignored there
        _ => InitPolicy::Random,
    }
}

fn default_shift_l(bits: u32) -> u32 {
    5.min(bits.saturating_sub(1)).max(1)
}

fn default_shift_r(bits: u32) -> u32 {
    2.min(bits.saturating_sub(1)).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        for c in Construction::ALL {
            let bits = match c {
                Construction::Sax | Construction::Sxx | Construction::Bernstein => 3,
                _ => 2,
            };
            let spec = FamilySpec::new(c, bits).unwrap();
            spec.validate().unwrap();
        }
    }

    #[test]
    fn name_roundtrip() {
        for c in Construction::ALL {
            assert_eq!(Construction::from_name(c.name()), Some(c));
        }
        assert_eq!(Construction::from_name("md5"), None);
    }

    #[test]
    fn validation_rejects_bad_shapes() {
        let mut spec = FamilySpec::new(Construction::Sax, 8).unwrap();
        spec.shift_l = 8;
        assert!(spec.validate().is_err());

        let mut spec = FamilySpec::new(Construction::Fnv1, 8).unwrap();
        spec.fnv_prime = 4;
        assert!(spec.validate().is_err());

        let mut spec = FamilySpec::new(Construction::Pearson, 2).unwrap();
        spec.alphabet_size = 5; // XOR-indexed: must stay within 2^L
        assert!(spec.validate().is_err());

        let mut spec = FamilySpec::new(Construction::Zobrist, 1).unwrap();
        spec.init_policy = InitPolicy::Random;
        assert!(spec.validate().is_err());

        // table-indexed alphabets may exceed 2^L
        let mut spec = FamilySpec::new(Construction::Tabulated, 2).unwrap();
        spec.alphabet_size = 9;
        assert!(spec.validate().is_ok());
    }

    #[test]
    fn value_count_prime_vs_binary() {
        let mut spec = FamilySpec::new(Construction::CwPoly, 2).unwrap();
        assert_eq!(spec.value_count(), 4);
        spec.algebra = AlgebraSpec::prime_field(7).unwrap();
        spec.alphabet_size = 7;
        spec.validate().unwrap();
        assert_eq!(spec.value_count(), 7);
    }
}
