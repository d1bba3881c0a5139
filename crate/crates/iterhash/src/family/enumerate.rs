//! Exhaustive enumeration and deterministic sampling of family instances.
//!
//! Enumeration order is documented and stable: parameter combinations run
//! in odometer order (first table entry / coefficient most significant),
//! the initial value cycles fastest. Instances are addressable by index,
//! so callers may partition the instance space across workers.

use super::{Construction, FamilySpec, HashInstance, InitPolicy, Params};
use crate::algebra::{gf2, irreducible_polys};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

#[derive(Debug, Clone)]
pub struct Enumeration {
    spec: FamilySpec,
    param_count: u128,
    init_count: u128,
    /// Irreducible polynomial list for `division`, materialized once.
    division_polys: Vec<u64>,
}

impl Enumeration {
    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn count(&self) -> u128 {
        self.param_count * self.init_count
    }

    /// The `idx`-th instance in enumeration order.
    pub fn instance_at(&self, idx: u64) -> HashInstance {
        assert!((idx as u128) < self.count(), "instance index out of range");
        let init_idx = (idx as u128 % self.init_count) as u64;
        let mut p = idx as u128 / self.init_count;
        let spec = &self.spec;
        let vc = spec.value_count() as u64;
        let mut digits = |n: usize| -> Vec<u64> {
            let mut out = vec![0u64; n];
            for slot in out.iter_mut().rev() {
                *slot = (p % vc as u128) as u64;
                p /= vc as u128;
            }
            out
        };
        let params = match spec.construction {
            Construction::Multilinear => {
                let coeffs = match spec.init_policy {
                    InitPolicy::Random => digits(spec.max_len + 1),
                    InitPolicy::FixedZero => {
                        let mut c = vec![0u64];
                        c.extend(digits(spec.max_len));
                        c
                    }
                    InitPolicy::FixedOne => {
                        let mut c = vec![1u64];
                        c.extend(digits(spec.max_len));
                        c
                    }
                };
                Params::Multilinear { coeffs }
            }
            Construction::Zobrist => {
                let flat = digits(spec.max_len * spec.alphabet_size as usize);
                let tables = flat
                    .chunks(spec.alphabet_size as usize)
                    .map(|c| c.to_vec())
                    .collect();
                Params::Zobrist { tables }
            }
            Construction::CwPoly => Params::CwPoly { t: p as u64 },
            Construction::CwPolyStrong => Params::CwPolyStrong {
                t: 1 + (p / vc as u128) as u64,
                zeta: (p % vc as u128) as u64,
            },
            Construction::Tabulated => Params::Tabulated {
                table: digits(spec.alphabet_size as usize),
            },
            Construction::ShiftTabulated => Params::ShiftTabulated {
                table: digits(spec.alphabet_size as usize),
            },
            Construction::Pearson => Params::Pearson {
                table: nth_permutation(vc, p),
            },
            Construction::GeneralizedPearson => Params::GeneralizedPearson {
                table: digits(vc as usize),
            },
            Construction::Division => Params::Division {
                poly: self.division_polys[p as usize] as u128,
            },
            Construction::Bernstein => Params::Bernstein,
            Construction::Fnv1 => Params::Fnv1,
            Construction::Fnv1a => Params::Fnv1a,
            Construction::Sax => Params::Sax,
            Construction::Sxx => Params::Sxx,
            Construction::GccCpp => Params::GccCpp,
            Construction::JavaString => Params::JavaString,
            Construction::PowerOfTwo => Params::PowerOfTwo {
                multiplier: 2 * p as u64 + 1,
            },
        };
        let init = match spec.construction {
            Construction::Multilinear => match &params {
                Params::Multilinear { coeffs } => coeffs[0],
                _ => unreachable!(),
            },
            Construction::CwPolyStrong => match &params {
                Params::CwPolyStrong { t, zeta } => spec.algebra.add_raw(*t, *zeta),
                _ => unreachable!(),
            },
            _ => match spec.init_policy {
                InitPolicy::FixedZero => 0,
                InitPolicy::FixedOne => 1,
                InitPolicy::Random => init_idx,
            },
        };
        HashInstance {
            spec: spec.clone(),
            params,
            init,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = HashInstance> + '_ {
        (0..self.count() as u64).map(|i| self.instance_at(i))
    }
}

/// Every instance of the family exactly once, provided the total count fits
/// the budget. The count is parameter-space size times the number of
/// initial values under the init policy.
pub fn enumerate_instances(spec: &FamilySpec, budget: u64) -> Result<Enumeration> {
    spec.validate()?;
    let vc = spec.value_count();
    let sigma = spec.alphabet_size as u128;
    let over = || Error::capacity(format!("enumerating {}", spec.construction.name()), u128::MAX, budget as u128);
    let pow = |b: u128, e: u32| -> Result<u128> {
        b.checked_pow(e).ok_or_else(over)
    };
    let mut division_polys = Vec::new();
    let param_count: u128 = match spec.construction {
        Construction::Multilinear => {
            let free = match spec.init_policy {
                InitPolicy::Random => spec.max_len as u32 + 1,
                _ => spec.max_len as u32,
            };
            pow(vc, free)?
        }
        Construction::Zobrist => pow(
            vc,
            u32::try_from(spec.max_len as u128 * sigma).map_err(|_| over())?,
        )?,
        Construction::CwPoly => vc,
        Construction::CwPolyStrong => (vc - 1) * vc,
        Construction::Tabulated | Construction::ShiftTabulated => pow(vc, sigma as u32)?,
        Construction::Pearson => factorial(vc).ok_or_else(over)?,
        Construction::GeneralizedPearson => pow(vc, u32::try_from(vc).map_err(|_| over())?)?,
        Construction::Division => {
            division_polys = irreducible_polys(spec.word_bits())?;
            division_polys.len() as u128
        }
        Construction::Bernstein
        | Construction::Fnv1
        | Construction::Fnv1a
        | Construction::Sax
        | Construction::Sxx
        | Construction::GccCpp
        | Construction::JavaString => 1,
        Construction::PowerOfTwo => vc / 2,
    };
    let init_count: u128 = match spec.construction {
        // m_1 plays the initial-value role and is counted in param_count
        Construction::Multilinear | Construction::CwPolyStrong => 1,
        _ => match spec.init_policy {
            InitPolicy::Random => vc,
            _ => 1,
        },
    };
    let total = param_count.checked_mul(init_count).ok_or_else(over)?;
    if total > budget as u128 {
        return Err(Error::capacity(
            format!("enumerating {}", spec.construction.name()),
            total,
            budget as u128,
        ));
    }
    Ok(Enumeration {
        spec: spec.clone(),
        param_count,
        init_count,
        division_polys,
    })
}

/// Deterministic uniform draw from the family's parameter space.
pub fn sample_instance(spec: &FamilySpec, seed: u64) -> Result<HashInstance> {
    spec.validate()?;
    let mut rng = SplitMix64::new(seed);
    let vc = spec.value_count() as u64;
    let sigma = spec.alphabet_size as usize;
    let mut table = |n: usize| -> Vec<u64> { (0..n).map(|_| rng.below(vc)).collect() };
    let params = match spec.construction {
        Construction::Multilinear => {
            let mut coeffs = table(spec.max_len + 1);
            coeffs[0] = match spec.init_policy {
                InitPolicy::FixedZero => 0,
                InitPolicy::FixedOne => 1,
                InitPolicy::Random => coeffs[0],
            };
            Params::Multilinear { coeffs }
        }
        Construction::Zobrist => Params::Zobrist {
            tables: (0..spec.max_len).map(|_| table(sigma)).collect(),
        },
        Construction::CwPoly => Params::CwPoly { t: rng.below(vc) },
        Construction::CwPolyStrong => Params::CwPolyStrong {
            t: 1 + rng.below(vc - 1),
            zeta: rng.below(vc),
        },
        Construction::Tabulated => Params::Tabulated { table: table(sigma) },
        Construction::ShiftTabulated => Params::ShiftTabulated { table: table(sigma) },
        Construction::Pearson => {
            let mut t: Vec<u64> = (0..vc).collect();
            rng.shuffle(&mut t);
            Params::Pearson { table: t }
        }
        Construction::GeneralizedPearson => Params::GeneralizedPearson {
            table: table(vc as usize),
        },
        Construction::Division => {
            // rejection sampling keeps large degrees workable; roughly one
            // in L candidates is irreducible
            let bits = spec.word_bits();
            let lead = 1u128 << bits;
            let poly = loop {
                let low = if bits == 64 {
                    rng.next_u64() as u128
                } else {
                    rng.below(1u64 << bits) as u128
                };
                let cand = lead | low;
                if gf2::is_irreducible(cand) {
                    break cand;
                }
            };
            Params::Division { poly }
        }
        Construction::Bernstein => Params::Bernstein,
        Construction::Fnv1 => Params::Fnv1,
        Construction::Fnv1a => Params::Fnv1a,
        Construction::Sax => Params::Sax,
        Construction::Sxx => Params::Sxx,
        Construction::GccCpp => Params::GccCpp,
        Construction::JavaString => Params::JavaString,
        Construction::PowerOfTwo => Params::PowerOfTwo {
            multiplier: 2 * rng.below(vc / 2) + 1,
        },
    };
    let init = match spec.construction {
        Construction::Multilinear => match &params {
            Params::Multilinear { coeffs } => coeffs[0],
            _ => unreachable!(),
        },
        Construction::CwPolyStrong => match &params {
            Params::CwPolyStrong { t, zeta } => spec.algebra.add_raw(*t, *zeta),
            _ => unreachable!(),
        },
        _ => match spec.init_policy {
            InitPolicy::FixedZero => 0,
            InitPolicy::FixedOne => 1,
            InitPolicy::Random => rng.below(vc),
        },
    };
    HashInstance::new(spec.clone(), params, init)
}

fn factorial(n: u128) -> Option<u128> {
    let mut acc = 1u128;
    for k in 2..=n {
        acc = acc.checked_mul(k)?;
    }
    Some(acc)
}

/// The `idx`-th permutation of `0..n` in lexicographic order (Lehmer code).
fn nth_permutation(n: u64, mut idx: u128) -> Vec<u64> {
    let mut pool: Vec<u64> = (0..n).collect();
    let mut fact = vec![1u128; n as usize + 1];
    for k in 1..=n as usize {
        fact[k] = fact[k - 1] * k as u128;
    }
    let mut out = Vec::with_capacity(n as usize);
    for k in (1..=n as usize).rev() {
        let f = fact[k - 1];
        let d = (idx / f) as usize;
        idx %= f;
        out.push(pool.remove(d));
    }
    out
}
