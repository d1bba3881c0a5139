//! Constructors for the forced-collision and extremal objects, each
//! returning a machine-checked certificate. Construction and verification
//! are part of one call: a witness that fails its own certificate is an
//! error, never a value.

use crate::algebra::{lcm_upto, AlgebraSpec};
use crate::error::{Error, Result};
use crate::family::{
    enumerate_instances, Construction, FamilySpec, HashInstance, InitPolicy, Params,
};
use crate::rng::SplitMix64;
use crate::verifier::{threewise_probe, Rat};
use crate::DEFAULT_SEED;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    TauPair,
    BinomialPair,
    UnaryForced,
    PerfectUnary,
    HtFamily,
    ThreewiseBreak,
    FourwiseBreak,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum CertificateMode {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    #[serde(flatten)]
    pub mode: CertificateMode,
    /// Cases examined by the certificate check.
    pub cases: u64,
    /// Always true for a returned witness; a failing check is an error.
    pub verified: bool,
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct WitnessParams {
    pub word_bits: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub character: Option<u64>,
    /// Unary string lengths, as decimal strings (they outgrow u64 fast).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lengths: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub kind: WitnessKind,
    /// The strings involved; empty when they are too long to materialize
    /// (see `params.lengths`).
    pub strings: Vec<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probability: Option<Rat>,
    pub claim: String,
    pub params: WitnessParams,
    pub certificate: Certificate,
}

impl Witness {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("witness serializes")
    }
}

/// The CWPoly spec (init 1) that tau pairs are claimed against.
pub fn tau_family_spec(field: &AlgebraSpec) -> Result<FamilySpec> {
    let mut spec = FamilySpec::new(Construction::CwPoly, field.word_bits())?;
    spec.algebra = *field;
    spec.alphabet_size = field.value_count().min(u64::MAX as u128) as u64;
    spec.init_policy = InitPolicy::FixedOne;
    spec.validate()?;
    Ok(spec)
}

/// Two equal-length strings whose CWPoly (init 1) hash difference is the
/// polynomial `tau(t) = prod_{i=0}^{n-1} (t - i)`, which has exactly the
/// `n` roots `0..n-1`: collision probability exactly `n/p`.
pub fn tau_collision_pair(n: u64, field: &AlgebraSpec) -> Result<Witness> {
    if !field.is_field() {
        return Err(Error::NotAField(field.to_string()));
    }
    let p = field.value_count();
    if n == 0 || n as u128 > p {
        return Err(Error::domain(format!(
            "tau needs 1 <= n <= {p} distinct roots, got n={n}"
        )));
    }
    // coefficients of prod (t - i), ascending degree
    let mut coeffs: Vec<u64> = vec![1];
    for i in 0..n {
        let root = i; // canonical representative of i in the field
        let mut next = vec![0u64; coeffs.len() + 1];
        for (d, &a) in coeffs.iter().enumerate() {
            next[d + 1] = field.add_raw(next[d + 1], a);
            next[d] = field.sub_raw(next[d], field.mul_raw(root, a));
        }
        coeffs = next;
    }
    // s = 0^(n+1); s' holds the negated coefficients, highest degree first,
    // so that h(s) - h(s') = tau(t) with the init terms cancelling
    let zero_string = vec![0u64; n as usize + 1];
    let tau_string: Vec<u64> = (0..=n)
        .map(|i| field.sub_raw(0, coeffs[(n - i) as usize]))
        .collect();
    let spec = tau_family_spec(field)?;
    let mut collisions = 0u64;
    for t in 0..p as u64 {
        let inst = HashInstance::new(spec.clone(), Params::CwPoly { t }, 1)?;
        collisions += (inst.hash(&zero_string)? == inst.hash(&tau_string)?) as u64;
    }
    if collisions != n {
        return Err(Error::domain(format!(
            "tau certificate failed: {collisions} collisions, expected {n}"
        )));
    }
    Ok(Witness {
        kind: WitnessKind::TauPair,
        strings: vec![zero_string, tau_string],
        values: None,
        probability: Some(Rat::new(n, p as u64)),
        claim: format!("cwpoly (init 1) over {field} collides on exactly {n} of {p} values of t"),
        params: WitnessParams {
            word_bits: field.word_bits(),
            n: Some(n),
            field: Some(field.to_string()),
            ..Default::default()
        },
        certificate: Certificate {
            mode: CertificateMode::Exhaustive,
            cases: p as u64,
            verified: true,
        },
    })
}

/// The binomial-coefficient string `(L choose k) mod 2^L` against the zero
/// string of the same length `L+1`: they collide under `B y + c mod 2^L`
/// for every odd `B` and every initial value, because
/// `(B+1)^L = 0 mod 2^L`.
pub fn binomial_collision_pair(bits: u32) -> Result<Witness> {
    if bits == 0 || bits > 63 {
        return Err(Error::domain("binomial witness needs 1 <= L <= 63"));
    }
    let mask = (1u128 << bits) - 1;
    let binomial: Vec<u64> = (0..=bits as u128)
        .map(|k| (choose(bits as u128, k) & mask) as u64)
        .collect();
    let zeros = vec![0u64; bits as usize + 1];
    let hash = |b: u64, h0: u64, s: &[u64]| -> u64 {
        s.iter().fold(h0, |y, &c| {
            y.wrapping_mul(b).wrapping_add(c) & mask as u64
        })
    };
    let (mode, cases) = if bits <= 8 {
        let mut cases = 0u64;
        for b in (1..(1u64 << bits)).step_by(2) {
            for h0 in 0..(1u64 << bits) {
                if hash(b, h0, &binomial) != hash(b, h0, &zeros) {
                    return Err(Error::domain(format!(
                        "binomial certificate failed at B={b}, H0={h0}"
                    )));
                }
                cases += 1;
            }
        }
        (CertificateMode::Exhaustive, cases)
    } else {
        let samples = 4096u64;
        let mut rng = SplitMix64::new(DEFAULT_SEED);
        for _ in 0..samples {
            let b = (rng.next_u64() & mask as u64) | 1;
            let h0 = rng.next_u64() & mask as u64;
            if hash(b, h0, &binomial) != hash(b, h0, &zeros) {
                return Err(Error::domain(format!(
                    "binomial certificate failed at B={b}, H0={h0}"
                )));
            }
        }
        (
            CertificateMode::Sampled {
                samples,
                seed: DEFAULT_SEED,
            },
            samples,
        )
    };
    Ok(Witness {
        kind: WitnessKind::BinomialPair,
        strings: vec![binomial, zeros],
        values: None,
        probability: Some(Rat::one()),
        claim: format!(
            "power-of-two at L={bits} collides on these length-{} strings for every odd multiplier and every initial value",
            bits + 1
        ),
        params: WitnessParams {
            word_bits: bits,
            ..Default::default()
        },
        certificate: Certificate {
            mode,
            cases,
            verified: true,
        },
    })
}

fn choose(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// The forced unary collision: `character^(2^L)` and
/// `character^(2^L + lcm(1..2^L))` collide under every iterated hash
/// function, because the unary hash orbit is eventually cyclic with some
/// period `T <= 2^L` and every such `T` divides the LCM.
pub fn unary_forced_collision(bits: u32, character: u64) -> Result<Witness> {
    if bits == 0 || bits > 16 {
        return Err(Error::domain("unary witness needs 1 <= L <= 16"));
    }
    let states = 1u64 << bits;
    let r1 = BigUint::from(states);
    let r2 = &r1 + lcm_upto(states);
    let lengths = vec![r1.to_string(), r2.to_string()];
    let strings = match (r2.to_u64(), character) {
        (Some(len), c) if len <= 1_000_000 => {
            vec![
                vec![c; r1.to_u64().unwrap() as usize],
                vec![c; len as usize],
            ]
        }
        _ => Vec::new(),
    };
    let (mode, cases) = if bits <= 2 {
        // every compression function over the unary alphabet x every init
        let maps = states.pow(states as u32);
        let steps = r2.to_u64().unwrap();
        let mut cases = 0u64;
        for map_idx in 0..maps {
            let mut f = vec![0u64; states as usize];
            let mut m = map_idx;
            for slot in f.iter_mut() {
                *slot = m % states;
                m /= states;
            }
            for h0 in 0..states {
                let mut y = h0;
                let (mut at_r1, mut at_r2) = (0, 0);
                for step in 1..=steps {
                    y = f[y as usize];
                    if step == states {
                        at_r1 = y;
                    }
                    if step == steps {
                        at_r2 = y;
                    }
                }
                if at_r1 != at_r2 {
                    return Err(Error::domain(format!(
                        "unary certificate failed for map {map_idx}, H0={h0}"
                    )));
                }
                cases += 1;
            }
        }
        (CertificateMode::Exhaustive, cases)
    } else {
        // sampled maps, evaluated through the orbit's cycle structure so
        // the astronomical length never has to be walked
        let samples = 2048u64;
        let mut rng = SplitMix64::new(DEFAULT_SEED);
        for _ in 0..samples {
            let f: Vec<u64> = (0..states).map(|_| rng.below(states)).collect();
            let h0 = rng.below(states);
            let v1 = unary_value_at(&f, h0, &r1);
            let v2 = unary_value_at(&f, h0, &r2);
            if v1 != v2 {
                return Err(Error::domain("unary certificate failed on a sampled map"));
            }
        }
        (
            CertificateMode::Sampled {
                samples,
                seed: DEFAULT_SEED,
            },
            samples,
        )
    };
    Ok(Witness {
        kind: WitnessKind::UnaryForced,
        strings,
        values: None,
        probability: Some(Rat::one()),
        claim: format!(
            "every iterated hash at L={bits} collides on the unary strings of lengths {} and {}",
            lengths[0], lengths[1]
        ),
        params: WitnessParams {
            word_bits: bits,
            character: Some(character),
            lengths: Some(lengths),
            ..Default::default()
        },
        certificate: Certificate {
            mode,
            cases,
            verified: true,
        },
    })
}

/// `h(character^r)` for the unary orbit of map `f` from `h0`, using the
/// orbit's tail length and period instead of walking all `r` steps.
fn unary_value_at(f: &[u64], h0: u64, r: &BigUint) -> u64 {
    let mut seen = vec![u64::MAX; f.len()];
    let mut orbit = Vec::new();
    let mut y = h0;
    let mut step = 0u64;
    loop {
        if let Some(small) = r.to_u64() {
            if small == step {
                return y;
            }
        }
        if seen[y as usize] != u64::MAX {
            let mu = seen[y as usize];
            let period = step - mu;
            let offset = ((r - BigUint::from(mu)) % BigUint::from(period))
                .to_u64()
                .unwrap();
            return orbit[(mu + offset) as usize];
        }
        seen[y as usize] = step;
        orbit.push(y);
        y = f[y as usize];
        step += 1;
    }
}

/// The family of `2^L` unary hash functions that counts up to `2^L - 1`
/// and then cycles through the top `T` values with period `T`.
///
/// Each member is realizable as an iterated hash function, and together
/// they separate every pair of unary strings of length up to
/// `2^L + lcm(1..2^L) - 2`.
#[derive(Debug, Clone)]
pub struct HtFamily {
    word_bits: u32,
}

impl HtFamily {
    pub fn new(bits: u32) -> Result<HtFamily> {
        if bits == 0 || bits > 16 {
            return Err(Error::domain("hT family needs 1 <= L <= 16"));
        }
        let fam = HtFamily { word_bits: bits };
        if bits <= 3 {
            // postcondition checks are exhaustive where the LCM is small
            let states = 1u64 << bits;
            for t in 1..=states {
                if fam.reconstruct_compression(t).is_none() {
                    return Err(Error::domain(format!("h_{t} is not iterated")));
                }
            }
            let limit = fam.separation_limit().to_u64().unwrap();
            for r in 1..limit {
                for r2 in r + 1..=limit {
                    if !fam.separates(r as u128, r2 as u128) {
                        return Err(Error::domain(format!(
                            "hT family fails to separate lengths {r} and {r2}"
                        )));
                    }
                }
            }
        }
        Ok(fam)
    }

    pub fn word_bits(&self) -> u32 {
        self.word_bits
    }

    pub fn period_count(&self) -> u64 {
        1 << self.word_bits
    }

    /// `h_T(character^r)`: the counter value reached after `r` steps.
    pub fn eval(&self, t: u64, r: u128) -> u64 {
        let states = 1u128 << self.word_bits;
        assert!(t >= 1 && (t as u128) <= states, "T must be in 1..=2^L");
        if r < states {
            r as u64
        } else {
            (states - t as u128 + ((r - states) % t as u128)) as u64
        }
    }

    /// Largest unary length up to which some member separates every pair:
    /// `2^L + lcm(1..2^L) - 2`.
    pub fn separation_limit(&self) -> BigUint {
        BigUint::from(1u64 << self.word_bits) + lcm_upto(1 << self.word_bits)
            - BigUint::from(2u32)
    }

    /// [`separation_limit`](Self::separation_limit) when it fits a `u64`.
    pub fn separation_limit_u64(&self) -> Option<u64> {
        self.separation_limit().to_u64()
    }

    pub fn separates(&self, r: u128, r2: u128) -> bool {
        (1..=self.period_count()).any(|t| self.eval(t, r) != self.eval(t, r2))
    }

    /// Rebuild `h_T`'s compression function from its value chain
    /// (`F(h(c^r)) = h(c^(r+1))`); `None` if the chain is inconsistent,
    /// i.e. the function is not iterated.
    pub fn reconstruct_compression(&self, t: u64) -> Option<Vec<u64>> {
        let states = 1u64 << self.word_bits;
        let horizon = states as u128 + 4 * t as u128 + 2;
        let mut f = vec![u64::MAX; states as usize];
        for r in 0..horizon {
            let y = self.eval(t, r);
            let y_next = self.eval(t, r + 1);
            if f[y as usize] != u64::MAX && f[y as usize] != y_next {
                return None;
            }
            f[y as usize] = y_next;
        }
        Some(f)
    }

    pub fn as_witness(&self) -> Witness {
        let limit = self.separation_limit();
        Witness {
            kind: WitnessKind::HtFamily,
            strings: Vec::new(),
            values: None,
            probability: None,
            claim: format!(
                "the {} functions h_T separate all unary string pairs of length up to {limit}",
                self.period_count()
            ),
            params: WitnessParams {
                word_bits: self.word_bits,
                lengths: Some(vec![limit.to_string()]),
                ..Default::default()
            },
            certificate: Certificate {
                mode: CertificateMode::Exhaustive,
                cases: if self.word_bits <= 3 {
                    let l = self.separation_limit().to_u64().unwrap();
                    l * (l - 1) / 2
                } else {
                    0
                },
                verified: self.word_bits <= 3,
            },
        }
    }
}

/// A perfect hash over unary strings of length up to `2^L`: a Pearson
/// instance over the single-character alphabet whose table is one
/// `2^L`-cycle, so `h(c^r) = r mod 2^L` never repeats within a period.
pub fn perfect_unary_hash(bits: u32) -> Result<HashInstance> {
    if bits == 0 || bits > 16 {
        return Err(Error::domain("perfect unary hash needs 1 <= L <= 16"));
    }
    let states = 1u64 << bits;
    let mut spec = FamilySpec::new(Construction::Pearson, bits)?;
    spec.alphabet_size = 1;
    let table: Vec<u64> = (0..states).map(|k| (k + 1) % states).collect();
    let inst = HashInstance::new(spec, Params::Pearson { table }, 0)?;
    // postcondition: injective on lengths 1..=2^L
    let mut seen = vec![false; states as usize];
    let mut y = inst.init;
    for r in 1..=states {
        y = inst.compress(y, 0, r as usize)?;
        if std::mem::replace(&mut seen[y as usize], true) {
            return Err(Error::domain("perfect unary hash repeated a value"));
        }
    }
    Ok(inst)
}

/// Concrete `(a, b, y)` with `P(h(a)=y and h(ab)=y)` non-zero and exactly
/// equal to `P(h(a)=y and h(ab)=y and h(abb)=y)`: 3-wise independence is
/// impossible whenever that mass is non-zero.
pub fn threewise_break(spec: &FamilySpec, budget: u64) -> Result<Witness> {
    let n = enumerate_instances(spec, budget)?.count() as u64;
    let probe = threewise_probe(spec, budget)?;
    match probe {
        Some(p) => {
            if p.p_left != p.p_right {
                return Err(Error::domain(format!(
                    "chain equality failed: {} vs {}",
                    p.p_left, p.p_right
                )));
            }
            let a = p.character_a;
            let b = p.character_b;
            Ok(Witness {
                kind: WitnessKind::ThreewiseBreak,
                strings: vec![vec![a], vec![a, b], vec![a, b, b]],
                values: Some(vec![p.value, p.value, p.value]),
                probability: Some(p.p_left),
                claim: format!(
                    "P(h(a)=y and h(ab)=y) = P(h(a)=y and h(ab)=y and h(abb)=y) = {}, non-zero, so 3-wise independence fails",
                    p.p_left
                ),
                params: WitnessParams {
                    word_bits: spec.word_bits(),
                    field: Some(spec.to_string()),
                    ..Default::default()
                },
                certificate: Certificate {
                    mode: CertificateMode::Exhaustive,
                    cases: n,
                    verified: true,
                },
            })
        }
        None => Ok(Witness {
            kind: WitnessKind::ThreewiseBreak,
            strings: Vec::new(),
            values: None,
            probability: None,
            claim: "absence: every chain mass P(h(a)=y and h(ab)=y) is zero (degenerate family)"
                .to_string(),
            params: WitnessParams {
                word_bits: spec.word_bits(),
                field: Some(spec.to_string()),
                ..Default::default()
            },
            certificate: Certificate {
                mode: CertificateMode::Exhaustive,
                cases: n,
                verified: true,
            },
        }),
    }
}

/// Four distinct strings `s, s', s||a, s'||a` (equal-length `s, s'`) and
/// values `(y, y, z, z')` with `z != z'` whose joint probability is zero
/// where 4-wise independence demands `1/2^(4L)`.
pub fn fourwise_break(spec: &FamilySpec, budget: u64) -> Result<Witness> {
    if spec.construction != Construction::Zobrist {
        return Err(Error::domain("fourwise_break expects a zobrist family"));
    }
    if spec.alphabet_size < 2 || spec.max_len < 2 {
        return Err(Error::domain("needs sigma >= 2 and maxlen >= 2"));
    }
    let e = enumerate_instances(spec, budget)?;
    let n = e.count() as u64;
    let quad: [Vec<u64>; 4] = [vec![0], vec![1], vec![0, 0], vec![1, 0]];
    // find y with positive mass for h(s)=h(s')=y
    let vc = spec.value_count() as u64;
    let mut y_counts = vec![0u64; vc as usize];
    for inst in e.iter() {
        let h0 = inst.hash(&quad[0])?;
        if h0 == inst.hash(&quad[1])? {
            y_counts[h0 as usize] += 1;
        }
    }
    let y = y_counts
        .iter()
        .position(|&c| c > 0)
        .ok_or_else(|| Error::domain("no positive equal-pair mass; cannot exhibit the break"))?
        as u64;
    let (z, z2) = (0u64, 1u64);
    let mut joint_diff = 0u64;
    let mut joint_same = 0u64;
    for inst in e.iter() {
        let ok = inst.hash(&quad[0])? == y && inst.hash(&quad[1])? == y;
        if !ok {
            continue;
        }
        let za = inst.hash(&quad[2])?;
        let zb = inst.hash(&quad[3])?;
        joint_diff += (za == z && zb == z2) as u64;
        joint_same += (za == z && zb == z) as u64;
    }
    if joint_diff != 0 {
        return Err(Error::domain(
            "equal-length collisions must propagate; joint probability was not zero",
        ));
    }
    if joint_same == 0 {
        return Err(Error::domain(
            "expected positive mass for the z = z' variant",
        ));
    }
    Ok(Witness {
        kind: WitnessKind::FourwiseBreak,
        strings: quad.to_vec(),
        values: Some(vec![y, y, z, z2]),
        probability: Some(Rat::new(0, n)),
        claim: format!(
            "joint probability is 0/{n} where 4-wise independence demands 1/{}; the z=z' variant has mass {joint_same}/{n}",
            (vc as u128).pow(4)
        ),
        params: WitnessParams {
            word_bits: spec.word_bits(),
            field: Some(spec.to_string()),
            ..Default::default()
        },
        certificate: Certificate {
            mode: CertificateMode::Exhaustive,
            cases: n,
            verified: true,
        },
    })
}
