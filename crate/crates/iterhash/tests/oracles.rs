//! Independent brute-force oracles.
//!
//! Every check here recomputes a probability with hand-rolled loops --
//! direct compression formulas, no use of the crate's enumeration or
//! signature machinery -- and compares the result against the verifier.
//! Expected values are frozen from these oracles.

use iterhash::family::{Construction, FamilySpec};
use iterhash::stringset::StringSet;
use iterhash::verifier::{exact_report, gp_table, unary_collision_prob, Prob, Rat};
use iterhash::DEFAULT_BUDGET;

/// All non-empty strings over `0..sigma` of length `1..=n`, length-lex.
fn strings_upto(sigma: u64, n: usize) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = Vec::new();
    let mut level: Vec<Vec<u64>> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for s in &level {
            for c in 0..sigma {
                let mut t = s.clone();
                t.push(c);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

/// Brute-force max collision count over distinct pairs, given a closure
/// enumerating `(instance_count, hash_fn)`.
fn brute_max_collisions(
    strings: &[Vec<u64>],
    instances: u64,
    hash: impl Fn(u64, &[u64]) -> u64,
) -> (u64, u64) {
    let sigs: Vec<Vec<u64>> = strings
        .iter()
        .map(|s| (0..instances).map(|i| hash(i, s)).collect())
        .collect();
    let mut best = 0u64;
    for i in 0..sigs.len() {
        for j in (i + 1)..sigs.len() {
            let c = sigs[i]
                .iter()
                .zip(&sigs[j])
                .filter(|(a, b)| a == b)
                .count() as u64;
            best = best.max(c);
        }
    }
    (best, instances)
}

/// Generalized Pearson at L=2: hand-rolled table/init decode, values
/// frozen from this enumeration (and matching the published table).
#[test]
fn gp_l2_rows_match_brute_force() {
    let hash = |idx: u64, s: &[u64]| -> u64 {
        let table_idx = idx / 4;
        let h0 = idx % 4;
        let table = [
            (table_idx / 64) % 4,
            (table_idx / 16) % 4,
            (table_idx / 4) % 4,
            table_idx % 4,
        ];
        s.iter().fold(h0, |y, &c| table[(y ^ c) as usize])
    };
    let frozen = [(1usize, 256u64), (2, 544), (3, 736), (4, 856)];
    let rows = gp_table(2, 4, DEFAULT_BUDGET).unwrap();
    for (n, want) in frozen {
        let (brute, total) = brute_max_collisions(&strings_upto(4, n), 1024, hash);
        assert_eq!(brute, want, "brute force disagrees at n={n}");
        assert_eq!(total, 1024);
        assert_eq!(rows[n - 1].prob, Rat::new(want, 1024), "verifier at n={n}");
    }
}

/// Pearson at L=2 over strings of length <= 4 is 5/6-almost universal:
/// brute force over all 24 permutations x 4 inits.
#[test]
fn pearson_l2_five_sixths() {
    // permutations of 0..4 in lexicographic order, decoded by index
    let perm = |mut k: u64| -> [u64; 4] {
        let mut pool = vec![0u64, 1, 2, 3];
        let mut out = [0u64; 4];
        let fact = [6u64, 2, 1, 1];
        for slot in 0..4 {
            let d = (k / fact[slot]) as usize;
            k %= fact[slot];
            out[slot] = pool.remove(d);
        }
        out
    };
    let hash = |idx: u64, s: &[u64]| -> u64 {
        let table = perm(idx / 4);
        s.iter().fold(idx % 4, |y, &c| table[(y ^ c) as usize])
    };
    let (brute, total) = brute_max_collisions(&strings_upto(4, 4), 96, hash);
    assert_eq!(Rat::new(brute, total), Rat::new(5, 6));

    let spec = FamilySpec::new(Construction::Pearson, 2).unwrap();
    let set = StringSet::all_up_to(4, 4);
    let report = exact_report(&spec, &set, 2, DEFAULT_BUDGET).unwrap();
    assert_eq!(report.eps_au.unwrap().as_exact().unwrap(), Rat::new(5, 6));
}

/// Pearson unary collisions: P(h(c^r) = h(c^(r+l))) = d(l)/2^L, checked
/// against a direct walk over all permutations at L=2.
#[test]
fn pearson_unary_matches_divisor_ratio() {
    let divisors = |n: u64| (1..=n).filter(|k| n % k == 0).count() as u64;
    let spec = FamilySpec::new(Construction::Pearson, 2).unwrap();
    for l in 1..4u64 {
        for r in [1u64, 2] {
            let got = unary_collision_prob(&spec, r, r + l, 0, DEFAULT_BUDGET).unwrap();
            assert_eq!(got, Rat::new(divisors(l), 4), "l={l} r={r}");
        }
    }
}

/// Tabulated at L=2, sigma=2: both sides of the chain equality are 4/64,
/// by direct enumeration of the 16 tables x 4 inits.
#[test]
fn tabulated_threewise_chain_counts() {
    let mulx = |y: u64| if y & 0b10 != 0 { ((y << 1) ^ 0b111) & 0b11 } else { y << 1 };
    let mut c1 = 0u64;
    let mut c2 = 0u64;
    let (a, b, y) = (0u64, 0u64, 0u64);
    for g0 in 0..4u64 {
        for g1 in 0..4u64 {
            for h0 in 0..4u64 {
                let gamma = [g0, g1];
                let step = |s: u64, c: u64| mulx(s) ^ gamma[c as usize];
                let y1 = step(h0, a);
                let y2 = step(y1, b);
                let y3 = step(y2, b);
                if y1 == y && y2 == y {
                    c1 += 1;
                    if y3 == y {
                        c2 += 1;
                    }
                }
            }
        }
    }
    assert_eq!(c1, 4);
    assert_eq!(c2, 4);

    let mut spec = FamilySpec::new(Construction::Tabulated, 2).unwrap();
    spec.alphabet_size = 2;
    let w = iterhash::witness::threewise_break(&spec, DEFAULT_BUDGET).unwrap();
    assert_eq!(w.probability.unwrap(), Rat::new(4, 64));
}

/// Multilinear over F_3, lengths <= 2, no trailing zero: every joint pair
/// probability is 1/9, by direct enumeration of the 27 coefficient triples.
#[test]
fn multilinear_p3_joint_ninths() {
    let strings: Vec<Vec<u64>> = strings_upto(3, 2)
        .into_iter()
        .filter(|s| *s.last().unwrap() != 0)
        .collect();
    assert_eq!(strings.len(), 8);
    let hash = |m: [u64; 3], s: &[u64]| -> u64 {
        let mut acc = m[0];
        for (i, &c) in s.iter().enumerate() {
            acc = (acc + m[i + 1] * c) % 3;
        }
        acc
    };
    for i in 0..strings.len() {
        for j in (i + 1)..strings.len() {
            for y1 in 0..3u64 {
                for y2 in 0..3u64 {
                    let mut count = 0u64;
                    for m1 in 0..3u64 {
                        for m2 in 0..3u64 {
                            for m3 in 0..3u64 {
                                let m = [m1, m2, m3];
                                if hash(m, &strings[i]) == y1 && hash(m, &strings[j]) == y2 {
                                    count += 1;
                                }
                            }
                        }
                    }
                    assert_eq!(count, 3, "pair {:?} {:?} ({y1},{y2})", strings[i], strings[j]);
                }
            }
        }
    }

    let spec = FamilySpec::parse("multilinear:p=3,maxlen=2").unwrap();
    let set = StringSet::all_up_to(3, 2).without_trailing_zero();
    let report = exact_report(&spec, &set, 2, DEFAULT_BUDGET).unwrap();
    assert_eq!(report.pairwise_independent, Some(true));
    assert_eq!(report.eps_asu.unwrap().as_exact().unwrap(), Rat::new(1, 3));
}

/// Modified CWPoly over F_5, lengths <= 2: the largest joint probability
/// times p is exactly 3/4 = (n+1)/(p-1), by direct double loop over the
/// 20 (t, zeta) instances.
#[test]
fn cwpoly_strong_p5_exact_asu() {
    let p = 5u64;
    let strings = strings_upto(p, 2);
    let hash = |t: u64, z: u64, s: &[u64]| -> u64 {
        let powm = |b: u64, e: u64| (0..e).fold(1u64, |acc, _| acc * b % p);
        let mut acc = powm(t, s.len() as u64 + 1);
        for (i, &c) in s.iter().enumerate() {
            acc = (acc + powm(t, i as u64 + 1) * c) % p;
        }
        (acc + z) % p
    };
    let mut max_joint = 0u64;
    for i in 0..strings.len() {
        for j in (i + 1)..strings.len() {
            let mut hist = vec![0u64; (p * p) as usize];
            for t in 1..p {
                for z in 0..p {
                    let cell = hash(t, z, &strings[i]) * p + hash(t, z, &strings[j]);
                    hist[cell as usize] += 1;
                }
            }
            max_joint = max_joint.max(*hist.iter().max().unwrap());
        }
    }
    // eps_asu = p * max_joint / ((p-1) p) = 3/4
    assert_eq!(Rat::new(max_joint * p, (p - 1) * p), Rat::new(3, 4));

    let spec = FamilySpec::parse("cwpoly-strong:p=5").unwrap();
    let set = StringSet::all_up_to(p, 2);
    let report = exact_report(&spec, &set, 2, DEFAULT_BUDGET).unwrap();
    assert_eq!(report.eps_asu.unwrap().as_exact().unwrap(), Rat::new(3, 4));
}

/// Zobrist at L=1: joint triple counts are all 2/16 over the 16 tables,
/// by direct enumeration.
#[test]
fn zobrist_l1_triples_uniform() {
    let strings = strings_upto(2, 2);
    assert_eq!(strings.len(), 6);
    let hash = |t: [u64; 4], s: &[u64]| -> u64 {
        s.iter()
            .enumerate()
            .fold(0, |y, (i, &c)| y ^ t[i * 2 + c as usize])
    };
    for i in 0..strings.len() {
        for j in (i + 1)..strings.len() {
            for k in (j + 1)..strings.len() {
                for target in 0..8u64 {
                    let want = [target & 1, (target >> 1) & 1, (target >> 2) & 1];
                    let mut count = 0;
                    for idx in 0..16u64 {
                        let t = [idx & 1, (idx >> 1) & 1, (idx >> 2) & 1, (idx >> 3) & 1];
                        if hash(t, &strings[i]) == want[0]
                            && hash(t, &strings[j]) == want[1]
                            && hash(t, &strings[k]) == want[2]
                        {
                            count += 1;
                        }
                    }
                    assert_eq!(count, 2, "triple ({i},{j},{k}) target {want:?}");
                }
            }
        }
    }
}

/// Java-style 32-bit fold oracle against the family evaluation, over a
/// deterministic corpus of 20 strings.
#[test]
fn java_recurrence_oracle() {
    let spec = FamilySpec::new(Construction::JavaString, 32).unwrap();
    let inst = iterhash::family::sample_instance(&spec, 0).unwrap();
    let mut rng = iterhash::rng::SplitMix64::new(99);
    for len in 0..20usize {
        let s: Vec<u64> = (0..len).map(|_| rng.below(256)).collect();
        let mut oracle = 0u32;
        for &c in &s {
            oracle = oracle.wrapping_mul(31).wrapping_add(c as u32);
        }
        assert_eq!(inst.hash(&s).unwrap(), oracle as u64, "len={len}");
    }
}

/// The verifier's exact mode agrees with a brute-force joint table for
/// shift-tabulated at L=3 on the low two bits.
#[test]
fn shift_tabulated_masked_joint_brute() {
    let rot = |y: u64| ((y << 1) | (y >> 2)) & 0b111;
    let strings = strings_upto(2, 2);
    for i in 0..strings.len() {
        for j in (i + 1)..strings.len() {
            let mut hist = [[0u64; 4]; 4];
            for g0 in 0..8u64 {
                for g1 in 0..8u64 {
                    for h0 in 0..8u64 {
                        let gamma = [g0, g1];
                        let h = |s: &[u64]| {
                            s.iter().fold(h0, |y, &c| rot(y) ^ gamma[c as usize])
                        };
                        hist[(h(&strings[i]) & 0b11) as usize][(h(&strings[j]) & 0b11) as usize] +=
                            1;
                    }
                }
            }
            for row in hist {
                for cell in row {
                    assert_eq!(cell, 32, "pair ({i},{j})"); // 512/16
                }
            }
        }
    }
}

/// Exact report probabilities carry the family cardinality denominator.
#[test]
fn report_denominators_are_family_cardinality() {
    let spec = FamilySpec::new(Construction::GeneralizedPearson, 1).unwrap();
    let set = StringSet::all_up_to(2, 2);
    let report = exact_report(&spec, &set, 2, DEFAULT_BUDGET).unwrap();
    match report.eps_au.unwrap() {
        Prob::Exact(r) => assert_eq!(r.den, 8),
        _ => panic!("exact mode"),
    }
}
