//! Text form of a family spec:
//! `<construction>:L=<bits>[,sigma=<n>][,poly=0x..][,p=<prime>][,l=..,r=..][,init=zero|one|random][,maxlen=..]`.
//!
//! `p=` selects a prime field for multilinear/cwpoly/cwpoly-strong and the
//! multiplier for fnv1/fnv1a; `poly=` overrides the canonical reduction
//! polynomial of binary-field constructions. Keys that do not apply to the
//! construction are rejected.

use super::{default_init, default_shift_l, default_shift_r, default_sigma};
use super::{Construction, FamilySpec, InitPolicy, DEFAULT_MAX_LEN};
use crate::algebra::{gf2, AlgebraKind, AlgebraSpec};
use crate::error::{Error, Result};
use std::fmt;
use std::str::FromStr;

impl FamilySpec {
    pub fn parse(s: &str) -> Result<FamilySpec> {
        s.parse()
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<FamilySpec> {
        let (name, rest) = match s.split_once(':') {
            Some((n, r)) => (n, Some(r)),
            None => (s, None),
        };
        let construction = Construction::from_name(name)
            .ok_or_else(|| Error::parse(format!("unknown construction {name:?}")))?;

        let mut bits: Option<u32> = None;
        let mut sigma: Option<u64> = None;
        let mut poly: Option<u128> = None;
        let mut prime: Option<u64> = None;
        let mut shift_l: Option<u32> = None;
        let mut shift_r: Option<u32> = None;
        let mut init: Option<InitPolicy> = None;
        let mut max_len: Option<usize> = None;

        if let Some(rest) = rest {
            for item in rest.split(',') {
                let (key, value) = item
                    .split_once('=')
                    .ok_or_else(|| Error::parse(format!("expected key=value, got {item:?}")))?;
                let dup = |filled: bool| {
                    if filled {
                        Err(Error::parse(format!("duplicate key {key:?}")))
                    } else {
                        Ok(())
                    }
                };
                match key {
                    "L" => {
                        dup(bits.is_some())?;
                        bits = Some(parse_num(key, value)?);
                    }
                    "sigma" => {
                        dup(sigma.is_some())?;
                        sigma = Some(parse_num(key, value)?);
                    }
                    "poly" => {
                        dup(poly.is_some())?;
                        poly = Some(gf2::poly_from_hex(value)?);
                    }
                    "p" => {
                        dup(prime.is_some())?;
                        prime = Some(parse_num(key, value)?);
                    }
                    "l" => {
                        dup(shift_l.is_some())?;
                        shift_l = Some(parse_num(key, value)?);
                    }
                    "r" => {
                        dup(shift_r.is_some())?;
                        shift_r = Some(parse_num(key, value)?);
                    }
                    "init" => {
                        dup(init.is_some())?;
                        init = Some(match value {
                            "zero" => InitPolicy::FixedZero,
                            "one" => InitPolicy::FixedOne,
                            "random" => InitPolicy::Random,
                            other => {
                                return Err(Error::parse(format!(
                                    "init must be zero|one|random, got {other:?}"
                                )))
                            }
                        });
                    }
                    "maxlen" => {
                        dup(max_len.is_some())?;
                        max_len = Some(parse_num(key, value)?);
                    }
                    other => return Err(Error::parse(format!("unknown key {other:?}"))),
                }
            }
        }

        use Construction::*;
        let field_based = matches!(construction, Multilinear | CwPoly | CwPolyStrong);
        if prime.is_some() && !field_based && !matches!(construction, Fnv1 | Fnv1a) {
            return Err(Error::parse(format!(
                "key p= does not apply to {}",
                construction.name()
            )));
        }
        if poly.is_some() && !matches!(construction, Multilinear | CwPoly | CwPolyStrong | Tabulated)
        {
            return Err(Error::parse(format!(
                "key poly= does not apply to {}",
                construction.name()
            )));
        }
        if shift_l.is_some() && !matches!(construction, Bernstein | Sax | Sxx) {
            return Err(Error::parse(format!(
                "key l= does not apply to {}",
                construction.name()
            )));
        }
        if shift_r.is_some() && !matches!(construction, Sax | Sxx) {
            return Err(Error::parse(format!(
                "key r= does not apply to {}",
                construction.name()
            )));
        }
        if poly.is_some() && prime.is_some() && field_based {
            return Err(Error::parse("give either p= or poly=, not both"));
        }

        let field_prime = if field_based { prime } else { None };
        let bits = match (bits, construction) {
            (Some(b), GccCpp | JavaString) if b != 32 => {
                return Err(Error::parse(format!(
                    "{} is fixed at L=32",
                    construction.name()
                )))
            }
            (_, GccCpp | JavaString) => 32,
            (Some(b), _) => b,
            (None, _) => match field_prime {
                Some(p) if p >= 2 => (64 - (p - 1).leading_zeros()).max(1),
                _ => return Err(Error::parse("key L= is required")),
            },
        };

        let algebra = match construction {
            Multilinear | CwPoly | CwPolyStrong => match field_prime {
                Some(p) => {
                    let alg = AlgebraSpec::prime_field(p)
                        .map_err(|e| Error::parse(e.to_string()))?;
                    if alg.word_bits() != bits && prime.is_some() {
                        // L was also given explicitly; they must agree
                        if 64 - (p - 1).leading_zeros() != bits {
                            return Err(Error::parse(format!(
                                "L={bits} does not match the {p}-element prime field"
                            )));
                        }
                    }
                    alg
                }
                None => match poly {
                    Some(q) => AlgebraSpec::binary_field_with_poly(bits, q)
                        .map_err(|e| Error::parse(e.to_string()))?,
                    None => {
                        AlgebraSpec::binary_field(bits).map_err(|e| Error::parse(e.to_string()))?
                    }
                },
            },
            Tabulated => match poly {
                Some(q) => AlgebraSpec::binary_field_with_poly(bits, q)
                    .map_err(|e| Error::parse(e.to_string()))?,
                None => AlgebraSpec::binary_field(bits).map_err(|e| Error::parse(e.to_string()))?,
            },
            Division => AlgebraSpec::binary_field(bits).map_err(|e| Error::parse(e.to_string()))?,
            ShiftTabulated => {
                AlgebraSpec::binary_ring(bits).map_err(|e| Error::parse(e.to_string()))?
            }
            _ => AlgebraSpec::mod2l(bits).map_err(|e| Error::parse(e.to_string()))?,
        };

        let spec = FamilySpec {
            construction,
            alphabet_size: sigma.unwrap_or_else(|| default_sigma(construction, &algebra)),
            algebra,
            shift_l: shift_l.unwrap_or_else(|| default_shift_l(bits)),
            shift_r: shift_r.unwrap_or_else(|| default_shift_r(bits)),
            fnv_prime: match construction {
                Fnv1 | Fnv1a => prime.unwrap_or(16777619),
                _ => 16777619,
            },
            max_len: max_len.unwrap_or(DEFAULT_MAX_LEN),
            init_policy: init.unwrap_or_else(|| default_init(construction)),
        };
        spec.validate().map_err(|e| Error::parse(e.to_string()))?;
        Ok(spec)
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::parse(format!("invalid value for {key}: {value:?}")))
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Construction::*;
        write!(f, "{}:L={}", self.construction.name(), self.word_bits())?;
        write!(f, ",sigma={}", self.alphabet_size)?;
        match self.algebra.kind() {
            AlgebraKind::PrimeField => write!(f, ",p={}", self.algebra.prime().unwrap())?,
            AlgebraKind::BinaryField if self.construction != Division => write!(
                f,
                ",poly={}",
                gf2::poly_to_hex(self.algebra.reduction_poly().unwrap())
            )?,
            _ => {}
        }
        match self.construction {
            Bernstein => write!(f, ",l={}", self.shift_l)?,
            Sax | Sxx => write!(f, ",l={},r={}", self.shift_l, self.shift_r)?,
            Fnv1 | Fnv1a => write!(f, ",p={}", self.fnv_prime)?,
            _ => {}
        }
        write!(f, ",init={}", self.init_policy.name())?;
        if self.max_len != DEFAULT_MAX_LEN {
            write!(f, ",maxlen={}", self.max_len)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let spec = FamilySpec::parse("tabulated:L=2,sigma=2").unwrap();
        assert_eq!(spec.construction, Construction::Tabulated);
        assert_eq!(spec.word_bits(), 2);
        assert_eq!(spec.alphabet_size, 2);
        assert_eq!(spec.init_policy, InitPolicy::Random);

        let spec = FamilySpec::parse("gcc-cpp").unwrap();
        assert_eq!(spec.word_bits(), 32);
        assert_eq!(spec.alphabet_size, 256);

        let spec = FamilySpec::parse("multilinear:p=3,maxlen=2").unwrap();
        assert_eq!(spec.value_count(), 3);
        assert_eq!(spec.alphabet_size, 3);

        let spec = FamilySpec::parse("cwpoly:L=2,init=zero").unwrap();
        assert_eq!(spec.init_policy, InitPolicy::FixedZero);

        let spec = FamilySpec::parse("sax:L=8,l=3,r=1").unwrap();
        assert_eq!((spec.shift_l, spec.shift_r), (3, 1));

        let spec = FamilySpec::parse("tabulated:L=3,poly=0xb").unwrap();
        assert_eq!(spec.algebra.reduction_poly(), Some(0xb));
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in [
            "md5:L=2",
            "pearson",              // missing L
            "pearson:L=0",
            "pearson:L=2,sigma=0",
            "pearson:L=2,foo=1",
            "pearson:L=2,L=3",      // duplicate
            "pearson:L=2,p=7",      // p does not apply
            "pearson:L=2,poly=0x7", // poly does not apply
            "cwpoly:L=2,p=6",       // not a prime
            "cwpoly:L=2,p=5,poly=0x7",
            "tabulated:L=2,poly=0x5", // reducible
            "gcc-cpp:L=16",
            "sax:L=2,l=2",
            "zobrist:L=1,init=random",
            "fnv1:L=8,p=6",
            "pearson:L=2,init=maybe",
            "pearson:L=2,sigma=",
            "pearson:L=x",
        ] {
            assert!(FamilySpec::parse(bad).is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn display_roundtrips() {
        for text in [
            "pearson:L=2",
            "generalized-pearson:L=2,maxlen=11",
            "tabulated:L=2,sigma=2",
            "shift-tabulated:L=3,sigma=2",
            "cwpoly:L=2,init=one",
            "cwpoly:L=3,p=7",
            "cwpoly-strong:p=5",
            "multilinear:p=3,maxlen=2",
            "division:L=3",
            "bernstein:L=8,l=3",
            "fnv1:L=8,p=3",
            "fnv1a:L=8",
            "sax:L=8,l=4,r=1",
            "sxx:L=8",
            "gcc-cpp",
            "java-string",
            "power-of-two:L=4",
            "zobrist:L=1,sigma=2,maxlen=2",
        ] {
            let spec = FamilySpec::parse(text).unwrap();
            let rendered = spec.to_string();
            let reparsed = FamilySpec::parse(&rendered)
                .unwrap_or_else(|e| panic!("{text} -> {rendered}: {e}"));
            assert_eq!(spec, reparsed, "{text} -> {rendered}");
        }
    }
}
