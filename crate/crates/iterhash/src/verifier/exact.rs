//! Exact reports by exhaustive enumeration.
//!
//! Every probability is a count over the full instance enumeration divided
//! by the family cardinality; no floating point enters any verdict.

use super::engine::{Engine, SigMatrix};
use super::{
    KwiseCollision, KwiseCounterexample, KwiseVerdict, PairWitness, Prob, Rat, ReportMode,
    StringSetDescriptor, UniformityVerdict, ValueWitness, VerificationReport, XorKind,
};
use crate::algebra::AlgebraKind;
use crate::error::{Error, Result};
use crate::family::{enumerate_instances, Construction, FamilySpec, HashInstance};
use crate::stringset::{Materialized, StringSet, ROOT};
use std::collections::HashMap;

/// Pair scans cost one byte comparison per instance; they are budgeted at
/// this multiple of the hash-evaluation budget.
pub(crate) const PAIR_EVAL_FACTOR: u128 = 256;

fn check_string(spec: &FamilySpec, s: &[u64]) -> Result<()> {
    for &c in s {
        if c >= spec.alphabet_size {
            return Err(Error::domain(format!(
                "character {c} outside alphabet of size {}",
                spec.alphabet_size
            )));
        }
    }
    if spec.construction == Construction::Multilinear && s.last() == Some(&0) {
        return Err(Error::domain(
            "multilinear forbids strings ending with the character 0",
        ));
    }
    if spec.construction.uses_position() && s.len() > spec.max_len {
        return Err(Error::capacity(
            format!("{} string length", spec.construction.name()),
            s.len() as u128,
            spec.max_len as u128,
        ));
    }
    Ok(())
}

fn check_set(spec: &FamilySpec, set: &StringSet) -> Result<()> {
    if set.alphabet_size != spec.alphabet_size {
        return Err(Error::domain(format!(
            "string set alphabet {} does not match family alphabet {}",
            set.alphabet_size, spec.alphabet_size
        )));
    }
    if spec.construction.uses_position() && set.max_len > spec.max_len {
        return Err(Error::capacity(
            format!("{} string length", spec.construction.name()),
            set.max_len as u128,
            spec.max_len as u128,
        ));
    }
    Ok(())
}

/// Exact verification report over the full instance enumeration.
///
/// `k_max` in `2..=4` selects how far the independence verdicts go. The
/// budget bounds `instances x strings` (and pair scans at
/// [`PAIR_EVAL_FACTOR`] times that).
pub fn exact_report(
    spec: &FamilySpec,
    set: &StringSet,
    k_max: u8,
    budget: u64,
) -> Result<VerificationReport> {
    spec.validate()?;
    check_set(spec, set)?;
    let n = match enumerate_instances(spec, budget) {
        Ok(e) => e.count(),
        Err(Error::Capacity { needed, .. }) => {
            return Err(Error::capacity(
                "exact report instances; monte_carlo_report handles larger families",
                needed,
                budget as u128,
            ))
        }
        Err(e) => return Err(e),
    };
    let s_count = set.count();
    let need = n.saturating_mul(s_count);
    if need > budget as u128 {
        return Err(Error::capacity(
            "exact report evaluations (instances x strings); monte_carlo_report handles larger families",
            need,
            budget as u128,
        ));
    }
    let pair_need = n.saturating_mul(s_count).saturating_mul(s_count) / 2;
    if pair_need > PAIR_EVAL_FACTOR * budget as u128 {
        return Err(Error::capacity(
            "exact report pair scans; raise the budget or shrink the string set",
            pair_need,
            PAIR_EVAL_FACTOR * budget as u128,
        ));
    }
    let engine = Engine::compile(spec, budget)?;
    let m = set.materialize()?;
    for s in &m.strings {
        check_string(spec, s)?;
    }
    report_common(spec.to_string(), &engine, set, &m, k_max)
}

/// Exact report over an explicit family given as an instance list; the
/// instances must share one value space. Used for hand-built families
/// (e.g. the 2^L constant functions).
pub fn exact_report_for_instances(
    instances: Vec<HashInstance>,
    set: &StringSet,
    k_max: u8,
) -> Result<VerificationReport> {
    let spec = instances
        .first()
        .ok_or_else(|| Error::domain("empty instance list"))?
        .spec
        .clone();
    check_set(&spec, set)?;
    for inst in &instances {
        HashInstance::new(inst.spec.clone(), inst.params.clone(), inst.init)?;
    }
    let label = format!("{} [explicit x{}]", spec, instances.len());
    let engine = Engine::from_instances(instances)?;
    let m = set.materialize()?;
    for s in &m.strings {
        check_string(&spec, s)?;
    }
    report_common(label, &engine, set, &m, k_max)
}

fn report_common(
    family: String,
    engine: &Engine,
    set: &StringSet,
    m: &Materialized,
    k_max: u8,
) -> Result<VerificationReport> {
    if !(2..=4).contains(&k_max) {
        return Err(Error::domain("k_max must be between 2 and 4"));
    }
    let n = engine.instance_count();
    let vc = engine.vc;
    let sig = engine.signatures(m);
    let members = m.member_count();

    let uniformity = uniformity_verdict(&sig, m, n, vc);

    // eps_au: branch-and-bound max collision pair, seeded with prefix pairs
    let seeds = prefix_pairs(m);
    let au = sig.max_equal_pair(members, &seeds);
    let (eps_au, eps_au_witness) = match au {
        Some((count, i, j)) => (
            Some(Prob::Exact(Rat::new(count, n))),
            Some(PairWitness {
                a: m.strings[i].clone(),
                b: m.strings[j].clone(),
            }),
        ),
        None => (None, None),
    };

    let xor_kind = xor_kind_of(engine);
    let small_values = vc <= (1 << 16);

    let mut eps_axu = None;
    let mut eps_axu_witness = None;
    let mut eps_asu = None;
    let mut eps_asu_witness = None;
    let mut pairwise_independent = None;
    let mut kwise = Vec::new();
    let mut kwise_collision = Vec::new();

    if small_values && members >= 2 {
        let (axu, axu_w) = max_axu(engine, &sig, m, xor_kind);
        eps_axu = Some(Prob::Exact(axu));
        eps_axu_witness = Some(axu_w);

        let joint = joint_scan(&sig, m, n, vc as u64);
        eps_asu = Some(Prob::Exact(Rat::new(joint.max_count, n).scale(vc as u64)));
        eps_asu_witness = Some(joint.witness);
        pairwise_independent = Some(joint.independent);
        kwise.push(KwiseVerdict {
            k: 2,
            independent: joint.independent,
            trivial: false,
            counterexample: joint.counterexample,
        });
        kwise_collision.push(KwiseCollision {
            k: 2,
            prob: eps_au.unwrap(),
            witness: eps_au_witness
                .as_ref()
                .map(|w| vec![w.a.clone(), w.b.clone()])
                .unwrap_or_default(),
        });
        for k in 3..=k_max {
            let (verdict, collision) = kwise_scan(&sig, m, n, vc as u64, k);
            kwise.push(verdict);
            if let Some(c) = collision {
                kwise_collision.push(c);
            }
        }
    } else if small_values {
        // fewer than two strings: pairwise verdicts are vacuous
        for k in 2..=k_max {
            kwise.push(KwiseVerdict {
                k,
                independent: true,
                trivial: true,
                counterexample: None,
            });
        }
    }

    Ok(VerificationReport {
        family,
        string_set: StringSetDescriptor::of(set),
        mode: ReportMode::Exact { instances: n },
        value_count: vc.min(u64::MAX as u128) as u64,
        uniformity,
        eps_au,
        eps_au_witness,
        xor_kind,
        eps_axu,
        eps_axu_witness,
        eps_asu,
        eps_asu_witness,
        pairwise_independent,
        kwise,
        kwise_collision,
    })
}

fn xor_kind_of(engine: &Engine) -> XorKind {
    if engine.algebra_kind() == AlgebraKind::PrimeField {
        XorKind::FieldSubtraction
    } else {
        XorKind::Bitwise
    }
}

fn uniformity_verdict(sig: &SigMatrix, m: &Materialized, n: u64, vc: u128) -> UniformityVerdict {
    if n <= 1 {
        return UniformityVerdict::NotApplicable {
            reason: "singleton family".to_string(),
        };
    }
    if vc > (1 << 16) {
        return UniformityVerdict::NotApplicable {
            reason: "value space too large to tabulate".to_string(),
        };
    }
    let vc = vc as u64;
    let uniform_count = n / vc;
    let exact_divisible = uniform_count * vc == n;
    let mut hist = vec![0u64; vc as usize];
    for member in 0..m.member_count() {
        hist.iter_mut().for_each(|h| *h = 0);
        for j in 0..sig.instance_count() {
            hist[sig.value(member, j) as usize] += 1;
        }
        for (value, &count) in hist.iter().enumerate() {
            if !exact_divisible || count != uniform_count {
                return UniformityVerdict::NotUniform {
                    string: m.strings[member].clone(),
                    value: value as u64,
                    count,
                };
            }
        }
    }
    UniformityVerdict::Uniform
}

/// Member-index pairs (prefix, extension) used to warm the max-pair floor.
fn prefix_pairs(m: &Materialized) -> Vec<(usize, usize)> {
    let member_of: HashMap<u32, usize> = m
        .member_nodes
        .iter()
        .enumerate()
        .map(|(k, &v)| (v, k))
        .collect();
    let mut out = Vec::new();
    for (k, &node) in m.member_nodes.iter().enumerate() {
        if node == ROOT {
            continue;
        }
        let parent = m.parent[node as usize];
        if let Some(&pk) = member_of.get(&parent) {
            out.push((pk.min(k), pk.max(k)));
        }
    }
    out
}

fn max_axu(engine: &Engine, sig: &SigMatrix, m: &Materialized, kind: XorKind) -> (Rat, ValueWitness) {
    let n = sig.instance_count();
    let vc = engine.vc as usize;
    let members = m.member_count();
    let mut hist = vec![0u64; vc];
    let mut best = (0u64, 0usize, 1usize, 0u64);
    for i in 0..members {
        for j in (i + 1)..members {
            hist.iter_mut().for_each(|h| *h = 0);
            for t in 0..n {
                let a = sig.value(i, t);
                let b = sig.value(j, t);
                let d = match kind {
                    XorKind::Bitwise => a ^ b,
                    XorKind::FieldSubtraction => engine.sub_values(a, b),
                };
                hist[d as usize] += 1;
            }
            for (y, &count) in hist.iter().enumerate() {
                if count > best.0 {
                    best = (count, i, j, y as u64);
                }
            }
        }
    }
    (
        Rat::new(best.0, n as u64),
        ValueWitness {
            a: m.strings[best.1].clone(),
            b: m.strings[best.2].clone(),
            y: best.3,
            y2: None,
        },
    )
}

struct JointScan {
    max_count: u64,
    witness: ValueWitness,
    independent: bool,
    counterexample: Option<KwiseCounterexample>,
}

fn joint_scan(sig: &SigMatrix, m: &Materialized, n: u64, vc: u64) -> JointScan {
    let members = m.member_count();
    let expected = n / (vc * vc);
    let divisible = expected * vc * vc == n;
    let mut hist = vec![0u64; (vc * vc) as usize];
    let mut best = (0u64, 0usize, 1usize, 0u64, 0u64);
    let mut independent = true;
    let mut counterexample = None;
    for i in 0..members {
        for j in (i + 1)..members {
            hist.iter_mut().for_each(|h| *h = 0);
            for t in 0..sig.instance_count() {
                hist[(sig.value(i, t) * vc + sig.value(j, t)) as usize] += 1;
            }
            for (cell, &count) in hist.iter().enumerate() {
                let (y, y2) = (cell as u64 / vc, cell as u64 % vc);
                if count > best.0 {
                    best = (count, i, j, y, y2);
                }
                if (!divisible || count != expected) && independent {
                    independent = false;
                    counterexample = Some(KwiseCounterexample {
                        strings: vec![m.strings[i].clone(), m.strings[j].clone()],
                        values: vec![y, y2],
                        count,
                        expected: Rat::new(1, vc * vc),
                    });
                }
            }
        }
    }
    JointScan {
        max_count: best.0,
        witness: ValueWitness {
            a: m.strings[best.1].clone(),
            b: m.strings[best.2].clone(),
            y: best.3,
            y2: Some(best.4),
        },
        independent,
        counterexample,
    }
}

/// k-wise independence verdict and max k-way collision for k in {3, 4}.
fn kwise_scan(
    sig: &SigMatrix,
    m: &Materialized,
    n: u64,
    vc: u64,
    k: u8,
) -> (KwiseVerdict, Option<KwiseCollision>) {
    let members = m.member_count();
    if members < k as usize {
        return (
            KwiseVerdict {
                k,
                independent: true,
                trivial: true,
                counterexample: None,
            },
            None,
        );
    }
    let cells = (vc as u128).pow(k as u32);
    let expected = (n as u128 / cells) as u64;
    let divisible = expected as u128 * cells == n as u128;
    let mut hist = vec![0u64; cells as usize];
    let mut independent = true;
    let mut counterexample = None;
    let mut best_collision = (0u64, Vec::new());
    let mut tuple: Vec<usize> = (0..k as usize).collect();
    loop {
        hist.iter_mut().for_each(|h| *h = 0);
        let mut all_equal = 0u64;
        for t in 0..sig.instance_count() {
            let mut cell = 0u128;
            let first = sig.value(tuple[0], t);
            let mut equal = true;
            for &i in &tuple {
                let v = sig.value(i, t);
                cell = cell * vc as u128 + v as u128;
                equal &= v == first;
            }
            hist[cell as usize] += 1;
            all_equal += equal as u64;
        }
        if independent {
            for (cell, &count) in hist.iter().enumerate() {
                if !divisible || count != expected {
                    independent = false;
                    let mut values = Vec::with_capacity(k as usize);
                    let mut c = cell as u64;
                    for _ in 0..k {
                        values.push(c % vc);
                        c /= vc;
                    }
                    values.reverse();
                    counterexample = Some(KwiseCounterexample {
                        strings: tuple.iter().map(|&i| m.strings[i].clone()).collect(),
                        values,
                        count,
                        expected: Rat::new(1, (cells.min(u64::MAX as u128)) as u64),
                    });
                    break;
                }
            }
        }
        if all_equal > best_collision.0 {
            best_collision = (
                all_equal,
                tuple.iter().map(|&i| m.strings[i].clone()).collect(),
            );
        }
        // next combination in lexicographic order
        let mut pos = k as usize;
        loop {
            if pos == 0 {
                pos = usize::MAX;
                break;
            }
            pos -= 1;
            if tuple[pos] + 1 <= members - (k as usize - pos) {
                tuple[pos] += 1;
                for q in pos + 1..k as usize {
                    tuple[q] = tuple[q - 1] + 1;
                }
                break;
            }
        }
        if pos == usize::MAX {
            break;
        }
    }
    (
        KwiseVerdict {
            k,
            independent,
            trivial: false,
            counterexample,
        },
        Some(KwiseCollision {
            k,
            prob: Prob::Exact(Rat::new(best_collision.0, n)),
            witness: best_collision.1,
        }),
    )
}

/// Max exact collision probability over all distinct pairs in `set`, with
/// the canonical (first in length-then-lex order) achieving pair. This is
/// the fast path behind the collision-probability tables.
pub fn exact_collision_max(
    spec: &FamilySpec,
    set: &StringSet,
    budget: u64,
) -> Result<(Rat, PairWitness)> {
    spec.validate()?;
    check_set(spec, set)?;
    let n = enumerate_instances(spec, budget)?.count();
    let s_count = set.count();
    if s_count < 2 {
        return Err(Error::domain("need at least two strings"));
    }
    let need = n.saturating_mul(s_count);
    if need > budget as u128 {
        return Err(Error::capacity("collision scan evaluations", need, budget as u128));
    }
    let pair_need = need.saturating_mul(s_count) / 2;
    if pair_need > PAIR_EVAL_FACTOR * budget as u128 {
        return Err(Error::capacity(
            "collision pair scans",
            pair_need,
            PAIR_EVAL_FACTOR * budget as u128,
        ));
    }
    let engine = Engine::compile(spec, budget)?;
    let m = set.materialize()?;
    for s in &m.strings {
        check_string(spec, s)?;
    }
    let sig = engine.signatures(&m);
    let (count, i, j) = sig
        .max_equal_pair(m.member_count(), &prefix_pairs(&m))
        .expect("at least two strings");
    Ok((
        Rat::new(count, engine.instance_count()),
        PairWitness {
            a: m.strings[i].clone(),
            b: m.strings[j].clone(),
        },
    ))
}

/// Exact joint distribution of the low `masked_bits` of `h(a)` and `h(b)`.
#[derive(Debug, Clone)]
pub struct JointTable {
    pub masked_bits: u32,
    pub instances: u64,
    /// `entries[y][y2]` = P(masked h(a) = y and masked h(b) = y2).
    pub entries: Vec<Vec<Rat>>,
}

pub fn pairwise_joint(
    spec: &FamilySpec,
    a: &[u64],
    b: &[u64],
    masked_bits: u32,
    budget: u64,
) -> Result<JointTable> {
    spec.validate()?;
    check_string(spec, a)?;
    check_string(spec, b)?;
    if masked_bits > spec.word_bits() {
        return Err(Error::domain(format!(
            "masked_bits {masked_bits} exceeds word size {}",
            spec.word_bits()
        )));
    }
    let n = enumerate_instances(spec, budget)?.count();
    if n.saturating_mul(2) > budget as u128 {
        return Err(Error::capacity("pairwise joint evaluations", n * 2, budget as u128));
    }
    let engine = Engine::compile(spec, budget)?;
    let width = 1u64 << masked_bits;
    let mask = width - 1;
    let mut hist = vec![0u64; (width * width) as usize];
    for j in 0..engine.n {
        let ya = engine.hash_one(j, a) & mask;
        let yb = engine.hash_one(j, b) & mask;
        hist[(ya * width + yb) as usize] += 1;
    }
    let n = engine.instance_count();
    let entries = (0..width)
        .map(|y| {
            (0..width)
                .map(|y2| Rat::new(hist[(y * width + y2) as usize], n))
                .collect()
        })
        .collect();
    Ok(JointTable {
        masked_bits,
        instances: n,
        entries,
    })
}

/// Exact `P(h(c^r) = h(c^r2))` over the family.
pub fn unary_collision_prob(
    spec: &FamilySpec,
    r: u64,
    r2: u64,
    character: u64,
    budget: u64,
) -> Result<Rat> {
    spec.validate()?;
    check_string(spec, &[character])?;
    let steps = r.max(r2);
    if spec.construction.uses_position() && steps as usize > spec.max_len {
        return Err(Error::capacity(
            format!("{} string length", spec.construction.name()),
            steps as u128,
            spec.max_len as u128,
        ));
    }
    let n = enumerate_instances(spec, budget)?.count();
    if n.saturating_mul(steps as u128) > budget as u128 {
        return Err(Error::capacity(
            "unary walk evaluations",
            n * steps as u128,
            budget as u128,
        ));
    }
    let engine = Engine::compile(spec, budget)?;
    let mut collisions = 0u64;
    for j in 0..engine.n {
        let mut y = engine.init_of(j);
        let (mut at_r, mut at_r2) = (y, y);
        for step in 1..=steps {
            y = engine.step_one(j, y, character, step as usize);
            if step == r {
                at_r = y;
            }
            if step == r2 {
                at_r2 = y;
            }
        }
        collisions += (at_r == at_r2) as u64;
    }
    Ok(Rat::new(collisions, engine.instance_count()))
}

/// Concrete `(a, b, y)` exhibiting the iterated-chain equality
/// `P(h(a)=y and h(ab)=y) = P(h(a)=y and h(ab)=y and h(abb)=y)`.
#[derive(Debug, Clone)]
pub struct ThreewiseProbe {
    pub character_a: u64,
    pub character_b: u64,
    pub value: u64,
    /// P(h(a)=y and h(ab)=y)
    pub p_left: Rat,
    /// P(h(a)=y and h(ab)=y and h(abb)=y)
    pub p_right: Rat,
}

/// First `(a, b, y)` in ascending order with non-zero left probability, or
/// `None` for degenerate families where every such probability vanishes.
pub fn threewise_probe(spec: &FamilySpec, budget: u64) -> Result<Option<ThreewiseProbe>> {
    let counts = threewise_counts(spec, budget)?;
    let n = counts.instances;
    for ((a, b, y), (c1, c2)) in counts.table {
        if c1 > 0 {
            return Ok(Some(ThreewiseProbe {
                character_a: a,
                character_b: b,
                value: y,
                p_left: Rat::new(c1, n),
                p_right: Rat::new(c2, n),
            }));
        }
    }
    Ok(None)
}

/// Check `P(h(a)=y and h(ab)=y) = P(h(a)=y and h(ab)=y and h(abb)=y)` for
/// every character pair and value.
pub fn lemma1_equality_holds(spec: &FamilySpec, budget: u64) -> Result<bool> {
    let counts = threewise_counts(spec, budget)?;
    Ok(counts.table.iter().all(|(_, (c1, c2))| c1 == c2))
}

struct ThreewiseCounts {
    instances: u64,
    /// (a, b, y) -> (count h(a)=y=h(ab), count additionally h(abb)=y),
    /// in ascending key order.
    table: Vec<((u64, u64, u64), (u64, u64))>,
}

fn threewise_counts(spec: &FamilySpec, budget: u64) -> Result<ThreewiseCounts> {
    spec.validate()?;
    if spec.construction.uses_position() && spec.max_len < 3 {
        return Err(Error::capacity(
            format!("{} string length", spec.construction.name()),
            3,
            spec.max_len as u128,
        ));
    }
    let n = enumerate_instances(spec, budget)?.count();
    let sigma = spec.alphabet_size;
    if n.saturating_mul(3 * sigma as u128 * sigma as u128) > budget as u128 {
        return Err(Error::capacity(
            "three-wise chain evaluations",
            n * 3 * sigma as u128 * sigma as u128,
            budget as u128,
        ));
    }
    let engine = Engine::compile(spec, budget)?;
    // sparse tallies: only the (a, b, y) keys with mass appear, plus the
    // zero entries are equal on both sides by definition
    let mut table: std::collections::BTreeMap<(u64, u64, u64), (u64, u64)> =
        std::collections::BTreeMap::new();
    for a in 0..sigma {
        for b in 0..sigma {
            for j in 0..engine.n {
                let y1 = engine.step_one(j, engine.init_of(j), a, 1);
                let y2 = engine.step_one(j, y1, b, 2);
                let y3 = engine.step_one(j, y2, b, 3);
                if y1 == y2 {
                    let entry = table.entry((a, b, y1)).or_insert((0, 0));
                    entry.0 += 1;
                    if y3 == y1 {
                        entry.1 += 1;
                    }
                }
            }
        }
    }
    Ok(ThreewiseCounts {
        instances: engine.instance_count(),
        table: table.into_iter().collect(),
    })
}
