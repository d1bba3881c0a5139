//! Certain-collision search by canonical signatures.
//!
//! A string's *signature* is the vector of its hash values across the
//! entire enumerated family; two distinct strings with equal signatures
//! collide under every instance. Appending a character transforms a
//! signature deterministically (one compression step per instance), so the
//! signatures form a transition system explored breadth-first: the cost is
//! proportional to the number of distinct signatures, not string pairs.
//! States are deduplicated through a 128-bit digest and every digest match
//! is confirmed against the exact signatures before it is reported.

use super::engine::Engine;
use crate::error::{Error, Result};
use crate::family::FamilySpec;
use serde::Serialize;

/// Signature bytes held in memory at once (two adjacent levels).
const MEM_CAP_BYTES: u128 = 3 << 30;

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CertainCollision {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
}

struct StateRec {
    parent: u32,
    ch: u16,
}

const NO_PARENT: u32 = u32::MAX;

/// Some pair of distinct non-empty strings of length <= `max_len` that
/// collide under *every* instance of the family, or `None` if no such pair
/// exists at these lengths. The returned pair is canonical: minimal in
/// length-then-lexicographic order. `budget` bounds the number of distinct
/// signature states explored.
pub fn find_certain_collision(
    spec: &FamilySpec,
    max_len: usize,
    budget: u64,
) -> Result<Option<CertainCollision>> {
    spec.validate()?;
    if max_len == 0 {
        return Ok(None);
    }
    if spec.value_count() > 256 {
        return Err(Error::capacity(
            "signature search value space",
            spec.value_count(),
            256,
        ));
    }
    if spec.construction.uses_position() && max_len > spec.max_len {
        return Err(Error::capacity(
            format!("{} string length", spec.construction.name()),
            max_len as u128,
            spec.max_len as u128,
        ));
    }
    let engine = Engine::compile(spec, budget)?;
    let n = engine.n;
    let sigma = spec.alphabet_size;

    let mut states: Vec<StateRec> = Vec::new();
    let mut digests: std::collections::HashMap<u128, Vec<u32>> = std::collections::HashMap::new();

    // current level's signatures, flat n-byte records in state order
    let mut level_flat: Vec<u8> = Vec::new();
    let mut level_states: Vec<u32> = Vec::new();

    let root_sig = engine.init_signature();

    let string_of = |states: &Vec<StateRec>, idx: u32| -> Vec<u64> {
        let mut out = Vec::new();
        let mut cur = idx;
        while cur != NO_PARENT {
            let rec = &states[cur as usize];
            out.push(rec.ch as u64);
            cur = rec.parent;
        }
        out.reverse();
        out
    };
    let sig_of = |states: &Vec<StateRec>, idx: u32, engine: &Engine, root: &[u8]| -> Vec<u8> {
        let s = string_of(states, idx);
        let mut sig = root.to_vec();
        for (i, &c) in s.iter().enumerate() {
            engine.step_signature(&mut sig, c, i + 1);
        }
        sig
    };

    let mut scratch = vec![0u8; n];
    for depth in 1..=max_len {
        let parent_count = if depth == 1 { 1 } else { level_states.len() };
        let expanding = depth < max_len;
        let mut next_flat: Vec<u8> = Vec::new();
        let mut next_states: Vec<u32> = Vec::new();
        // (first, second) candidate pairs found at this level
        let mut candidates: Vec<(Vec<u64>, Vec<u64>)> = Vec::new();

        if expanding {
            let projected = (parent_count as u128 * sigma as u128 + parent_count as u128)
                * n as u128;
            if projected > MEM_CAP_BYTES {
                return Err(Error::capacity("signature search memory", projected, MEM_CAP_BYTES));
            }
        }

        for p in 0..parent_count {
            let parent_idx = if depth == 1 { NO_PARENT } else { level_states[p] };
            for c in 0..sigma {
                let src = if depth == 1 {
                    &root_sig
                } else {
                    &level_flat[p * n..(p + 1) * n]
                };
                scratch.copy_from_slice(src);
                engine.step_signature(&mut scratch, c, depth);
                let digest = sig_digest(&scratch);
                let mut matched = false;
                if let Some(ids) = digests.get(&digest) {
                    for &other in ids {
                        if sig_of(&states, other, &engine, &root_sig) == scratch {
                            let mut child = if parent_idx == NO_PARENT {
                                Vec::new()
                            } else {
                                string_of(&states, parent_idx)
                            };
                            child.push(c);
                            candidates.push((string_of(&states, other), child));
                            matched = true;
                            break;
                        }
                    }
                }
                if matched {
                    continue;
                }
                if states.len() as u128 >= budget as u128 {
                    return Err(Error::capacity(
                        "signature search states",
                        states.len() as u128 + 1,
                        budget as u128,
                    ));
                }
                let id = states.len() as u32;
                states.push(StateRec {
                    parent: parent_idx,
                    ch: c as u16,
                });
                digests.entry(digest).or_default().push(id);
                if expanding {
                    next_flat.extend_from_slice(&scratch);
                    next_states.push(id);
                }
            }
        }

        if !candidates.is_empty() {
            candidates.sort_by(|x, y| {
                (x.0.len(), &x.0, x.1.len(), &x.1).cmp(&(y.0.len(), &y.0, y.1.len(), &y.1))
            });
            let (a, b) = candidates.swap_remove(0);
            // confirm against the exact signatures once more
            debug_assert!({
                let ha: Vec<u64> = (0..n).map(|j| engine.hash_one(j, &a)).collect();
                let hb: Vec<u64> = (0..n).map(|j| engine.hash_one(j, &b)).collect();
                ha == hb
            });
            let every = (0..n).all(|j| engine.hash_one(j, &a) == engine.hash_one(j, &b));
            if !every {
                return Err(Error::domain(
                    "signature digest collision survived verification; please report",
                ));
            }
            return Ok(Some(CertainCollision { a, b }));
        }

        level_flat = next_flat;
        level_states = next_states;
    }
    Ok(None)
}

/// 128-bit digest of a signature. Two independent 64-bit mixes over the
/// bytes; matches are always confirmed exactly, so the digest only needs
/// to keep accidental agreement rare.
fn sig_digest(sig: &[u8]) -> u128 {
    let mut h1: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut h2: u64 = 0xc2b2_ae3d_27d4_eb4f ^ (sig.len() as u64);
    let chunks = sig.chunks_exact(8);
    let rem = chunks.remainder();
    for ch in chunks {
        let w = u64::from_le_bytes(ch.try_into().unwrap());
        h1 = mix(h1 ^ w);
        h2 = mix(h2.wrapping_add(w).wrapping_mul(0xff51_afd7_ed55_8ccd));
    }
    if !rem.is_empty() {
        let mut w = 0u64;
        for (i, &b) in rem.iter().enumerate() {
            w |= (b as u64) << (8 * i);
        }
        h1 = mix(h1 ^ w ^ 0x94d0_49bb_1331_11eb);
        h2 = mix(h2.wrapping_add(w));
    }
    ((h1 as u128) << 64) | h2 as u128
}

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
