//! Monte-Carlo estimation for families too large to enumerate.
//!
//! Trial `i` evaluates the instance sampled from substream `i` of the
//! seed, so estimates are deterministic for a given `(seed, trials)` and
//! independent of how trials are partitioned across workers.

use super::{
    PairWitness, Prob, ReportMode, StringSetDescriptor, UniformityVerdict, VerificationReport,
    XorKind,
};
use crate::algebra::AlgebraKind;
use crate::error::{Error, Result};
use crate::family::{sample_instance, FamilySpec};
use crate::rng::substream;
use crate::stringset::StringSet;
use rayon::prelude::*;

/// One-sided z for a central 95% interval.
const Z95: f64 = 1.959963984540054;

/// Wilson score interval for `successes` out of `trials` at 95%.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    assert!(trials > 0);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = p + z2 / (2.0 * n);
    let spread = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    // at the boundaries the interval endpoints are exactly 0 or 1
    let lo = if successes == 0 {
        0.0
    } else {
        ((center - spread) / denom).max(0.0)
    };
    let hi = if successes == trials {
        1.0
    } else {
        ((center + spread) / denom).min(1.0)
    };
    (lo, hi)
}

fn estimate(successes: u64, trials: u64) -> Prob {
    let (lo, hi) = wilson_interval(successes, trials);
    Prob::Estimate {
        mean: successes as f64 / trials as f64,
        wilson_low: lo,
        wilson_high: hi,
    }
}

/// Estimated collision probability of one explicit pair; the strings may
/// be identical (then the estimate is exactly 1).
pub fn monte_carlo_pair(
    spec: &FamilySpec,
    a: &[u64],
    b: &[u64],
    trials: u64,
    seed: u64,
) -> Result<Prob> {
    spec.validate()?;
    if trials == 0 {
        return Err(Error::domain("need at least one trial"));
    }
    let collisions: u64 = (0..trials)
        .into_par_iter()
        .map(|i| {
            let inst = sample_instance(spec, substream(seed, i)).expect("validated spec samples");
            (inst.hash(a).expect("valid string") == inst.hash(b).expect("valid string")) as u64
        })
        .sum();
    Ok(estimate(collisions, trials))
}

/// Monte-Carlo verification report: point estimates with Wilson 95%
/// intervals for the collision-probability extrema over the string set.
/// Independence verdicts need exact enumeration and are not estimated.
pub fn monte_carlo_report(
    spec: &FamilySpec,
    set: &StringSet,
    trials: u64,
    seed: u64,
) -> Result<VerificationReport> {
    spec.validate()?;
    if trials == 0 {
        return Err(Error::domain("need at least one trial"));
    }
    if set.alphabet_size != spec.alphabet_size {
        return Err(Error::domain(format!(
            "string set alphabet {} does not match family alphabet {}",
            set.alphabet_size, spec.alphabet_size
        )));
    }
    let m = set.materialize()?;
    let members = m.member_count();
    if members < 2 {
        return Err(Error::domain("need at least two strings"));
    }
    if members > 4096 {
        return Err(Error::capacity(
            "monte-carlo string set; use an explicit pair for large sets",
            members as u128,
            4096,
        ));
    }
    let pairs = members * (members - 1) / 2;
    let xor_kind = if spec.algebra.kind() == AlgebraKind::PrimeField {
        XorKind::FieldSubtraction
    } else {
        XorKind::Bitwise
    };

    // per-trial evaluation of all members, pair counters summed across
    // trials (order-independent)
    let counts: Vec<u64> = (0..trials)
        .into_par_iter()
        .fold(
            || vec![0u64; pairs],
            |mut acc, t| {
                let inst =
                    sample_instance(spec, substream(seed, t)).expect("validated spec samples");
                let values: Vec<u64> = m
                    .strings
                    .iter()
                    .map(|s| inst.hash(s).expect("valid string"))
                    .collect();
                let mut p = 0usize;
                for i in 0..members {
                    for j in (i + 1)..members {
                        acc[p] += (values[i] == values[j]) as u64;
                        p += 1;
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; pairs],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );

    // argmax pair, first in scan order on ties
    let mut best = (0u64, 0usize, 1usize);
    let mut p = 0usize;
    for i in 0..members {
        for j in (i + 1)..members {
            if counts[p] > best.0 {
                best = (counts[p], i, j);
            }
            p += 1;
        }
    }

    Ok(VerificationReport {
        family: spec.to_string(),
        string_set: StringSetDescriptor::of(set),
        mode: ReportMode::MonteCarlo {
            trials,
            seed,
            confidence: 0.95,
        },
        value_count: spec.value_count().min(u64::MAX as u128) as u64,
        uniformity: UniformityVerdict::NotApplicable {
            reason: "monte-carlo mode".to_string(),
        },
        eps_au: Some(estimate(best.0, trials)),
        eps_au_witness: Some(PairWitness {
            a: m.strings[best.1].clone(),
            b: m.strings[best.2].clone(),
        }),
        xor_kind,
        eps_axu: None,
        eps_axu_witness: None,
        eps_asu: None,
        eps_asu_witness: None,
        pairwise_independent: None,
        kwise: Vec::new(),
        kwise_collision: Vec::new(),
    })
}
