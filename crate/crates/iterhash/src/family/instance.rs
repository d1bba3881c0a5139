//! Concrete hash functions: fixed compression parameters plus an initial
//! value, evaluated by folding the compression function over the string.

use super::{Construction, FamilySpec, InitPolicy};
use crate::algebra::gf2;
use crate::error::{Error, Result};

/// Construction-specific parameter record of one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Params {
    /// Coefficients `m_1 .. m_{max_len+1}`; `m_1` doubles as the initial value.
    Multilinear { coeffs: Vec<u64> },
    /// One character table per position, `tables[i][c] = h_{i+1}(c)`.
    Zobrist { tables: Vec<Vec<u64>> },
    CwPoly { t: u64 },
    /// Non-zero `t` plus the appended random character `zeta`; `H_0 = t + zeta`.
    CwPolyStrong { t: u64, zeta: u64 },
    Tabulated { table: Vec<u64> },
    ShiftTabulated { table: Vec<u64> },
    /// `table` is a permutation of `0..2^L`.
    Pearson { table: Vec<u64> },
    /// Unrestricted array of hash values.
    GeneralizedPearson { table: Vec<u64> },
    /// Per-instance irreducible reduction polynomial of degree `L`.
    Division { poly: u128 },
    Bernstein,
    Fnv1,
    Fnv1a,
    Sax,
    Sxx,
    GccCpp,
    JavaString,
    PowerOfTwo { multiplier: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashInstance {
    pub spec: FamilySpec,
    pub params: Params,
    pub init: u64,
}

impl HashInstance {
    pub fn new(spec: FamilySpec, params: Params, init: u64) -> Result<HashInstance> {
        spec.validate()?;
        let inst = HashInstance { spec, params, init };
        inst.check_shape()?;
        Ok(inst)
    }

    /// A `power-of-two` instance with an explicit multiplier; even `B` is
    /// accepted here so the documented negative behaviour can be exercised.
    pub fn power_of_two(bits: u32, multiplier: u64, init: u64) -> Result<HashInstance> {
        let spec = FamilySpec::new(Construction::PowerOfTwo, bits)?;
        let mask = gf2::word_mask(bits);
        if multiplier > mask || init > mask {
            return Err(Error::domain("multiplier and init must be L-bit values"));
        }
        Ok(HashInstance {
            spec,
            params: Params::PowerOfTwo { multiplier },
            init,
        })
    }

    fn check_shape(&self) -> Result<()> {
        let spec = &self.spec;
        let vc = spec.value_count();
        let sigma = spec.alphabet_size as usize;
        if self.init as u128 >= vc {
            return Err(Error::domain("initial value out of range"));
        }
        if spec.init_policy == InitPolicy::FixedZero
            && spec.construction != Construction::CwPolyStrong
            && self.init != 0
        {
            return Err(Error::domain("init policy fixed-zero requires H_0 = 0"));
        }
        if spec.init_policy == InitPolicy::FixedOne
            && spec.construction != Construction::CwPolyStrong
            && self.init != 1
        {
            return Err(Error::domain("init policy fixed-one requires H_0 = 1"));
        }
        let in_range = |vs: &[u64]| vs.iter().all(|&v| (v as u128) < vc);
        match (&self.params, spec.construction) {
            (Params::Multilinear { coeffs }, Construction::Multilinear) => {
                if coeffs.len() != spec.max_len + 1 || !in_range(coeffs) {
                    return Err(Error::domain("multilinear needs maxlen+1 field coefficients"));
                }
                if coeffs[0] != self.init {
                    return Err(Error::domain("multilinear initial value is m_1"));
                }
            }
            (Params::Zobrist { tables }, Construction::Zobrist) => {
                if tables.len() != spec.max_len
                    || tables.iter().any(|t| t.len() != sigma || !in_range(t))
                {
                    return Err(Error::domain("zobrist needs maxlen tables of sigma values"));
                }
            }
            (Params::CwPoly { t }, Construction::CwPoly) => {
                if (*t as u128) >= vc {
                    return Err(Error::domain("t out of range"));
                }
            }
            (Params::CwPolyStrong { t, zeta }, Construction::CwPolyStrong) => {
                if *t == 0 || (*t as u128) >= vc || (*zeta as u128) >= vc {
                    return Err(Error::domain("cwpoly-strong needs non-zero t and a field zeta"));
                }
                if self.init != spec.algebra.add_raw(*t, *zeta) {
                    return Err(Error::domain("cwpoly-strong initial value is t + zeta"));
                }
            }
            (Params::Tabulated { table }, Construction::Tabulated)
            | (Params::ShiftTabulated { table }, Construction::ShiftTabulated) => {
                if table.len() != sigma || !in_range(table) {
                    return Err(Error::domain("character table needs sigma hash values"));
                }
            }
            (Params::Pearson { table }, Construction::Pearson) => {
                if table.len() as u128 != vc || !in_range(table) {
                    return Err(Error::domain("pearson table must index all 2^L states"));
                }
                let mut seen = vec![false; table.len()];
                for &v in table {
                    if std::mem::replace(&mut seen[v as usize], true) {
                        return Err(Error::domain("pearson table must be a permutation"));
                    }
                }
            }
            (Params::GeneralizedPearson { table }, Construction::GeneralizedPearson) => {
                if table.len() as u128 != vc || !in_range(table) {
                    return Err(Error::domain("table must cover all 2^L states"));
                }
            }
            (Params::Division { poly }, Construction::Division) => {
                if gf2::degree(*poly) != Some(spec.word_bits()) || !gf2::is_irreducible(*poly) {
                    return Err(Error::domain("division needs an irreducible degree-L polynomial"));
                }
            }
            (Params::Bernstein, Construction::Bernstein)
            | (Params::Fnv1, Construction::Fnv1)
            | (Params::Fnv1a, Construction::Fnv1a)
            | (Params::Sax, Construction::Sax)
            | (Params::Sxx, Construction::Sxx)
            | (Params::GccCpp, Construction::GccCpp)
            | (Params::JavaString, Construction::JavaString) => {}
            (Params::PowerOfTwo { multiplier }, Construction::PowerOfTwo) => {
                if (*multiplier as u128) >= vc {
                    return Err(Error::domain("multiplier out of range"));
                }
            }
            _ => return Err(Error::domain("parameter record does not match construction")),
        }
        Ok(())
    }

    /// One compression step. `position` is 1-based and only significant for
    /// the generalized iterated constructions (multilinear, zobrist,
    /// cwpoly-strong).
    pub fn compress(&self, state: u64, c: u64, position: usize) -> Result<u64> {
        if (state as u128) >= self.spec.value_count() {
            return Err(Error::domain(format!("state {state} out of range")));
        }
        if c >= self.spec.alphabet_size {
            return Err(Error::domain(format!(
                "character {c} outside alphabet of size {}",
                self.spec.alphabet_size
            )));
        }
        if position == 0 {
            return Err(Error::domain("positions are 1-based"));
        }
        if self.spec.construction.uses_position() && position > self.spec.max_len {
            return Err(Error::capacity(
                format!("{} position", self.spec.construction.name()),
                position as u128,
                self.spec.max_len as u128,
            ));
        }
        Ok(self.compress_unchecked(state, c, position))
    }

    /// Hot-path compression step; caller guarantees the preconditions of
    /// [`HashInstance::compress`].
    #[inline]
    pub(crate) fn compress_unchecked(&self, state: u64, c: u64, position: usize) -> u64 {
        let alg = &self.spec.algebra;
        let bits = self.spec.word_bits();
        let mask = alg.mask();
        match &self.params {
            Params::Multilinear { coeffs } => {
                alg.add_raw(state, alg.mul_raw(coeffs[position], c))
            }
            Params::Zobrist { tables } => state ^ tables[position - 1][c as usize],
            Params::CwPoly { t } => alg.add_raw(alg.mul_raw(*t, state), c),
            Params::CwPolyStrong { t, zeta: _ } => {
                // h(s||c) - h(s) = t^(|s|+1) (t - 1 + c)
                let tp = alg.pow_raw(*t, position as u64);
                let factor = alg.add_raw(alg.sub_raw(*t, 1), c);
                alg.add_raw(state, alg.mul_raw(tp, factor))
            }
            Params::Tabulated { table } => {
                // x*y + Gamma(c): multiply by x, then XOR the table value
                let poly_low = (alg.reduction_poly().unwrap() as u64) & mask;
                let top = (state >> (bits - 1)) & 1;
                let shifted = (state << 1) & mask;
                let reduced = if top == 1 { shifted ^ poly_low } else { shifted };
                reduced ^ table[c as usize]
            }
            Params::ShiftTabulated { table } => gf2::barrel_rotate(state, bits) ^ table[c as usize],
            Params::Pearson { table } | Params::GeneralizedPearson { table } => {
                table[(state ^ c) as usize]
            }
            Params::Division { poly } => {
                gf2::poly_mod(((state as u128) << bits) ^ c as u128, *poly) as u64
            }
            Params::Bernstein => {
                (state.wrapping_shl(self.spec.shift_l).wrapping_add(state) & mask) ^ c
            }
            Params::Fnv1 => (state.wrapping_mul(self.spec.fnv_prime) & mask) ^ c,
            Params::Fnv1a => (state ^ c).wrapping_mul(self.spec.fnv_prime) & mask,
            Params::Sax => {
                state
                    ^ (state
                        .wrapping_shl(self.spec.shift_l)
                        .wrapping_add(state >> self.spec.shift_r)
                        .wrapping_add(c)
                        & mask)
            }
            Params::Sxx => state ^ (state.wrapping_shl(self.spec.shift_l) & mask) ^ (state >> self.spec.shift_r) ^ c,
            Params::GccCpp => state.wrapping_mul(5).wrapping_add(c) & mask,
            Params::JavaString => state.wrapping_mul(31).wrapping_add(c) & mask,
            Params::PowerOfTwo { multiplier } => {
                state.wrapping_mul(*multiplier).wrapping_add(c) & mask
            }
        }
    }

    /// Left-fold of the compression function from `H_0`; `hash(&[]) = H_0`.
    pub fn hash(&self, s: &[u64]) -> Result<u64> {
        if self.spec.construction == Construction::Multilinear {
            if s.len() > self.spec.max_len {
                return Err(Error::capacity(
                    "multilinear string length",
                    s.len() as u128,
                    self.spec.max_len as u128,
                ));
            }
            if s.last() == Some(&0) {
                return Err(Error::domain(
                    "multilinear forbids strings ending with the character 0",
                ));
            }
        }
        let mut y = self.init;
        for (i, &c) in s.iter().enumerate() {
            y = self.compress(y, c, i + 1)?;
        }
        Ok(y)
    }

    /// As [`hash`](Self::hash) but without precondition checks.
    pub(crate) fn hash_unchecked(&self, s: &[u64]) -> u64 {
        let mut y = self.init;
        for (i, &c) in s.iter().enumerate() {
            y = self.compress_unchecked(y, c, i + 1);
        }
        y
    }
}

/// Render a 32-bit hash value the way Java's `String.hashCode` would print
/// it (two's complement).
pub fn java_signed(value: u64) -> i32 {
    value as u32 as i32
}

#[cfg(test)]
mod tests {
    use super::super::{enumerate_instances, sample_instance};
    use super::*;
    use crate::algebra::AlgebraSpec;

    fn singleton(c: Construction) -> HashInstance {
        let spec = FamilySpec::new(c, 32).unwrap();
        enumerate_instances(&spec, 1).unwrap().instance_at(0)
    }

    #[test]
    fn gcc_cpp_z_is_122() {
        let inst = singleton(Construction::GccCpp);
        assert_eq!(inst.compress(0, 122, 1).unwrap(), 122);
        assert_eq!(inst.hash(&[122]).unwrap(), 122);
    }

    #[test]
    fn java_ab() {
        let inst = singleton(Construction::JavaString);
        assert_eq!(inst.hash(&[97, 98]).unwrap(), 3105);
    }

    #[test]
    fn java_signed_rendering() {
        let inst = singleton(Construction::JavaString);
        // long runs of 'z' wrap into the sign bit
        let h = inst.hash(&[122; 6]).unwrap();
        assert!(java_signed(h) < 0);
        assert_eq!(java_signed(h) as u32 as u64, h);
    }

    #[test]
    fn pearson_identity_table_is_identity_on_zero_char() {
        let spec = FamilySpec::new(Construction::Pearson, 3).unwrap();
        let table: Vec<u64> = (0..8).collect();
        let inst = HashInstance::new(spec, Params::Pearson { table }, 5).unwrap();
        for y in 0..8 {
            assert_eq!(inst.compress(y, 0, 1).unwrap(), y);
        }
    }

    #[test]
    fn power_of_two_example() {
        let inst = HashInstance::power_of_two(4, 3, 0).unwrap();
        assert_eq!(inst.compress(5, 2, 1).unwrap(), 1); // 3*5+2 = 17 mod 16
    }

    #[test]
    fn cwpoly_low_powers_of_t() {
        // GF(2^3), init 1: h("0") = t, h("00") = t^2
        let mut spec = FamilySpec::new(Construction::CwPoly, 3).unwrap();
        spec.init_policy = InitPolicy::FixedOne;
        for t in 0..8u64 {
            let inst = HashInstance::new(spec.clone(), Params::CwPoly { t }, 1).unwrap();
            assert_eq!(inst.hash(&[0]).unwrap(), t);
            assert_eq!(inst.hash(&[0, 0]).unwrap(), spec.algebra.mul_raw(t, t));
        }
    }

    #[test]
    fn cwpoly_223_polynomial() {
        // h(223) = t^3 + 2t^2 + 2t + 3 with init 1
        let spec = FamilySpec::new(Construction::CwPoly, 3).unwrap();
        let alg = spec.algebra;
        for t in 0..8u64 {
            let inst = HashInstance::new(spec.clone(), Params::CwPoly { t }, 1).unwrap();
            let direct = inst.hash(&[2, 2, 3]).unwrap();
            let t2 = alg.mul_raw(t, t);
            let t3 = alg.mul_raw(t2, t);
            let mut poly = t3;
            poly = alg.add_raw(poly, alg.mul_raw(2, t2));
            poly = alg.add_raw(poly, alg.mul_raw(2, t));
            poly = alg.add_raw(poly, 3);
            assert_eq!(direct, poly, "t={t}");
        }
    }

    #[test]
    fn empty_string_hashes_to_init() {
        for c in Construction::ALL {
            let bits = match c {
                Construction::Sax | Construction::Sxx | Construction::Bernstein => 3,
                Construction::GccCpp | Construction::JavaString => 32,
                _ => 2,
            };
            let spec = FamilySpec::new(c, bits).unwrap();
            let inst = sample_instance(&spec, 9).unwrap();
            assert_eq!(inst.hash(&[]).unwrap(), inst.init, "{}", c.name());
        }
    }

    #[test]
    fn cwpoly_strong_matches_direct_formula() {
        // h(s) = t^(|s|+1) + sum_i t^i s_i + zeta
        for p in [3u64, 5] {
            let mut spec = FamilySpec::new(Construction::CwPolyStrong, 3).unwrap();
            spec.algebra = AlgebraSpec::prime_field(p).unwrap();
            spec.alphabet_size = p;
            for t in 1..p {
                for zeta in 0..p {
                    let alg = spec.algebra;
                    let inst = HashInstance::new(
                        spec.clone(),
                        Params::CwPolyStrong { t, zeta },
                        alg.add_raw(t, zeta),
                    )
                    .unwrap();
                    for s in [vec![], vec![1], vec![2, 1], vec![0, 2, 1], vec![1, 0, 0, 2]] {
                        let mut want = alg.pow_raw(t, s.len() as u64 + 1);
                        for (i, &c) in s.iter().enumerate() {
                            want = alg.add_raw(want, alg.mul_raw(alg.pow_raw(t, i as u64 + 1), c));
                        }
                        want = alg.add_raw(want, zeta);
                        assert_eq!(inst.hash(&s).unwrap(), want, "p={p} t={t} z={zeta} s={s:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn multilinear_rejects_trailing_zero() {
        let spec = FamilySpec::new(Construction::Multilinear, 2).unwrap();
        let inst = sample_instance(&spec, 1).unwrap();
        assert!(matches!(inst.hash(&[1, 0]), Err(Error::Domain(_))));
        assert!(inst.hash(&[0, 1]).is_ok());
        assert!(matches!(
            inst.hash(&[1, 1, 1, 1, 1]),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn position_capacity_errors() {
        let spec = FamilySpec::new(Construction::Zobrist, 1).unwrap();
        let inst = sample_instance(&spec, 2).unwrap();
        assert!(inst.compress(0, 0, spec.max_len).is_ok());
        assert!(matches!(
            inst.compress(0, 0, spec.max_len + 1),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn shape_checks() {
        let spec = FamilySpec::new(Construction::Pearson, 2).unwrap();
        // not a permutation
        assert!(HashInstance::new(
            spec.clone(),
            Params::Pearson { table: vec![0, 0, 1, 2] },
            0
        )
        .is_err());
        // wrong params kind
        assert!(HashInstance::new(spec, Params::Fnv1, 0).is_err());
    }
}
