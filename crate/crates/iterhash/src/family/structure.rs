//! Structural checks on compression functions.
//!
//! A compression function is *permuting* when `y -> F(y, c)` is injective
//! on the reachable states for every character, and *strongly permuting*
//! when additionally `F(y, c) = F(y, c')` forces `c = c'`. Pairwise
//! independence requires the former; the latter rules out collisions
//! between strings at Hamming distance one.

use super::HashInstance;
use crate::error::{Error, Result};
use std::collections::HashSet;

fn check_inputs(instance: &HashInstance, reachable_states: &[u64]) -> Result<()> {
    for &y in reachable_states {
        if (y as u128) >= instance.spec.value_count() {
            return Err(Error::domain(format!("state {y} out of range")));
        }
    }
    Ok(())
}

/// True iff `y -> F(y, c)` is injective on `reachable_states` for every
/// character. Position-dependent constructions are checked at position 1.
pub fn is_permuting(instance: &HashInstance, reachable_states: &[u64]) -> Result<bool> {
    check_inputs(instance, reachable_states)?;
    for c in 0..instance.spec.alphabet_size {
        let mut seen = HashSet::with_capacity(reachable_states.len());
        for &y in reachable_states {
            if !seen.insert(instance.compress_unchecked(y, c, 1)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True iff the instance [`is_permuting`] and character-injectivity holds
/// at every reachable state.
pub fn is_strongly_permuting(instance: &HashInstance, reachable_states: &[u64]) -> Result<bool> {
    if !is_permuting(instance, reachable_states)? {
        return Ok(false);
    }
    for &y in reachable_states {
        let mut seen = HashSet::with_capacity(instance.spec.alphabet_size as usize);
        for c in 0..instance.spec.alphabet_size {
            if !seen.insert(instance.compress_unchecked(y, c, 1)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
