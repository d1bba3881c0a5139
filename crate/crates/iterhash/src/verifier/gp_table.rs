//! The Generalized-Pearson collision-probability table: for each maximal
//! length `n`, the largest collision probability between distinct strings
//! of length at most `n` with `L`-bit characters, by exact enumeration of
//! all `(2^L)^(2^L) * 2^L` instances.
//!
//! Rows whose pair scan exceeds the budget fall back to the certain-
//! collision signature search (an exact 1.00 when a pair exists) or to a
//! monotonicity lower bound, and are labelled as such.

use super::engine::Engine;
use super::exact::PAIR_EVAL_FACTOR;
use super::search::find_certain_collision;
use super::{PairWitness, Rat};
use crate::error::{Error, Result};
use crate::family::{enumerate_instances, Construction, FamilySpec};
use crate::stringset::StringSet;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GpRowMode {
    Exact,
    LowerBound,
}

#[derive(Debug, Clone, Serialize)]
pub struct GpTableRow {
    pub n: usize,
    pub prob: Rat,
    pub mode: GpRowMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<PairWitness>,
}

/// Compute the table rows for `n = 1..=n_max`.
///
/// A row is exact when both `instances x strings <= budget` and
/// `instances x pairs <= 256 x budget` hold; otherwise the row carries a
/// certified lower bound (and becomes an exact 1.00 when the signature
/// search finds a certain collision within `n`).
pub fn gp_table(bits: u32, n_max: usize, budget: u64) -> Result<Vec<GpTableRow>> {
    if n_max == 0 {
        return Err(Error::domain("need at least one row"));
    }
    let spec = FamilySpec::new(Construction::GeneralizedPearson, bits)?;
    let sigma = spec.alphabet_size as u128;
    let n_instances = enumerate_instances(&spec, budget)?.count();

    // how many rows can run exactly
    let mut exact_rows = 0usize;
    let mut strings = 0u128;
    for n in 1..=n_max {
        strings += sigma.pow(n as u32);
        let evals = n_instances.saturating_mul(strings);
        let pair_evals = evals.saturating_mul(strings) / 2;
        if evals <= budget as u128 && pair_evals <= PAIR_EVAL_FACTOR * budget as u128 {
            exact_rows = n;
        } else {
            break;
        }
    }

    let mut rows = Vec::with_capacity(n_max);
    if exact_rows > 0 {
        let set = StringSet::all_up_to(spec.alphabet_size, exact_rows);
        let m = set.materialize()?;
        let engine = Engine::compile(&spec, budget)?;
        let sig = engine.signatures(&m);
        // member counts are cumulative per length level
        let mut upto = 0usize;
        let mut seeds: Vec<(usize, usize)> = Vec::new();
        for n in 1..=exact_rows {
            let level = (sigma as usize).pow(n as u32);
            // seed the scan with (prefix, extension) pairs of this level
            if n > 1 {
                for k in upto..upto + level {
                    let parent = m.parent[m.member_nodes[k] as usize] as usize;
                    seeds.push((parent, k));
                }
            }
            upto += level;
            let (count, i, j) = sig
                .max_equal_pair(upto, &seeds)
                .expect("at least two strings per level");
            rows.push(GpTableRow {
                n,
                prob: Rat::new(count, engine.instance_count()),
                mode: GpRowMode::Exact,
                witness: Some(PairWitness {
                    a: m.strings[i].clone(),
                    b: m.strings[j].clone(),
                }),
            });
        }
    }

    let n64 = n_instances.min(u64::MAX as u128) as u64;
    for n in exact_rows + 1..=n_max {
        if let Some(pair) = find_certain_collision(&spec, n, budget)? {
            rows.push(GpTableRow {
                n,
                prob: Rat::new(n64, n64),
                mode: GpRowMode::Exact,
                witness: Some(PairWitness { a: pair.a, b: pair.b }),
            });
            continue;
        }
        // collision probability is monotone in n: reuse the last row
        let prev = rows
            .last()
            .ok_or_else(|| Error::capacity("gp table first row", n_instances * sigma, budget as u128))?;
        rows.push(GpTableRow {
            n,
            prob: prev.prob,
            mode: GpRowMode::LowerBound,
            witness: None,
        });
    }
    Ok(rows)
}
