//! Shared enumeration machinery: compiled per-instance transition tables,
//! signature matrices (hash value of every string under every instance)
//! and the counting kernels the exact reports run on.
//!
//! Exact probabilities are sums of per-instance indicator counts; instances
//! are processed in enumeration order but every combination step is an
//! order-independent addition, so the instance space can be partitioned
//! across parallel workers freely.

use crate::algebra::{AlgebraKind, AlgebraSpec};
use crate::error::{Error, Result};
use crate::family::{enumerate_instances, FamilySpec, HashInstance};
use crate::stringset::{Materialized, ROOT};
use rayon::prelude::*;
use std::sync::atomic::{AtomicU32, Ordering};

/// Memory guard for compiled transition tables.
const MAX_TABLE_BYTES: u128 = 512 << 20;
/// Memory guard for materialized instance lists (generic mode).
const MAX_GENERIC_INSTANCES: u128 = 1 << 22;

pub(crate) struct Engine {
    pub n: usize,
    pub vc: u128,
    algebra: AlgebraSpec,
    mode: Mode,
}

enum Mode {
    /// Position-independent constructions with at most 256 states compile
    /// to flat per-instance `state x char -> state` tables.
    Table {
        states: usize,
        sigma: usize,
        step: Vec<u8>,
        init: Vec<u8>,
    },
    Generic {
        instances: Vec<HashInstance>,
    },
}

impl Engine {
    /// Enumerate the family (within `budget` instances) and compile it.
    pub fn compile(spec: &FamilySpec, budget: u64) -> Result<Engine> {
        let enumeration = enumerate_instances(spec, budget)?;
        let n = enumeration.count() as u64;
        let vc = spec.value_count();
        let sigma = spec.alphabet_size as usize;
        if !spec.construction.uses_position() && vc <= 256 {
            let bytes = n as u128 * vc * sigma as u128;
            if bytes > MAX_TABLE_BYTES {
                return Err(Error::capacity(
                    "compiled transition tables (bytes)",
                    bytes,
                    MAX_TABLE_BYTES,
                ));
            }
            let states = vc as usize;
            let block = states * sigma;
            let mut step = vec![0u8; n as usize * block];
            let mut init = vec![0u8; n as usize];
            step.par_chunks_mut(block)
                .zip(init.par_iter_mut())
                .enumerate()
                .for_each(|(j, (chunk, init_slot))| {
                    let inst = enumeration.instance_at(j as u64);
                    *init_slot = inst.init as u8;
                    for y in 0..states {
                        for c in 0..sigma {
                            chunk[y * sigma + c] =
                                inst.compress_unchecked(y as u64, c as u64, 1) as u8;
                        }
                    }
                });
            Ok(Engine {
                n: n as usize,
                vc,
                algebra: spec.algebra,
                mode: Mode::Table {
                    states,
                    sigma,
                    step,
                    init,
                },
            })
        } else {
            if n as u128 > MAX_GENERIC_INSTANCES {
                return Err(Error::capacity(
                    "materialized instances",
                    n as u128,
                    MAX_GENERIC_INSTANCES,
                ));
            }
            let instances: Vec<HashInstance> =
                (0..n).into_par_iter().map(|j| enumeration.instance_at(j)).collect();
            Ok(Engine {
                n: n as usize,
                vc,
                algebra: spec.algebra,
                mode: Mode::Generic { instances },
            })
        }
    }

    pub fn instance_count(&self) -> u64 {
        self.n as u64
    }

    pub fn algebra_kind(&self) -> AlgebraKind {
        self.algebra.kind()
    }

    /// Difference of two hash values in the family's value space.
    pub fn sub_values(&self, a: u64, b: u64) -> u64 {
        self.algebra.sub_raw(a, b)
    }

    /// One compression step of instance `j`.
    pub fn step_one(&self, j: usize, state: u64, c: u64, position: usize) -> u64 {
        match &self.mode {
            Mode::Table {
                states,
                sigma,
                step,
                ..
            } => step[j * states * sigma + state as usize * sigma + c as usize] as u64,
            Mode::Generic { instances } => instances[j].compress_unchecked(state, c, position),
        }
    }

    /// Build an engine over an explicit instance list (each instance its
    /// own compression parameters and initial value).
    pub fn from_instances(instances: Vec<HashInstance>) -> Result<Engine> {
        let spec = &instances
            .first()
            .ok_or_else(|| Error::domain("instance list must not be empty"))?
            .spec;
        let vc = spec.value_count();
        if instances.iter().any(|i| i.spec.value_count() != vc) {
            return Err(Error::domain("instances must share a value space"));
        }
        let algebra = spec.algebra;
        Ok(Engine {
            n: instances.len(),
            vc,
            algebra,
            mode: Mode::Generic { instances },
        })
    }

    pub fn hash_one(&self, j: usize, s: &[u64]) -> u64 {
        match &self.mode {
            Mode::Table {
                states,
                sigma,
                step,
                init,
            } => {
                let block = &step[j * states * sigma..(j + 1) * states * sigma];
                let mut y = init[j] as usize;
                for &c in s {
                    y = block[y * sigma + c as usize] as usize;
                }
                y as u64
            }
            Mode::Generic { instances } => instances[j].hash_unchecked(s),
        }
    }

    /// Hash value of every member string under every instance.
    pub fn signatures(&self, set: &Materialized) -> SigMatrix {
        let members = set.member_count();
        if self.vc <= 256 {
            let cols: Vec<Vec<u8>> = (0..self.n)
                .into_par_iter()
                .map(|j| self.column_u8(j, set))
                .collect();
            let mut rows = vec![0u8; members * self.n];
            for (j, col) in cols.iter().enumerate() {
                for (k, &v) in col.iter().enumerate() {
                    rows[k * self.n + j] = v;
                }
            }
            SigMatrix::Bytes { rows, n: self.n }
        } else {
            let cols: Vec<Vec<u64>> = (0..self.n)
                .into_par_iter()
                .map(|j| self.column_u64(j, set))
                .collect();
            let mut rows = vec![0u64; members * self.n];
            for (j, col) in cols.iter().enumerate() {
                for (k, &v) in col.iter().enumerate() {
                    rows[k * self.n + j] = v;
                }
            }
            SigMatrix::Words { rows, n: self.n }
        }
    }

    fn column_u8(&self, j: usize, set: &Materialized) -> Vec<u8> {
        let nodes = set.node_count();
        let mut state = vec![0u8; nodes];
        match &self.mode {
            Mode::Table {
                states,
                sigma,
                step,
                init,
            } => {
                let block = &step[j * states * sigma..(j + 1) * states * sigma];
                for v in 0..nodes {
                    let prev = match set.parent[v] {
                        ROOT => init[j] as usize,
                        p => state[p as usize] as usize,
                    };
                    state[v] = block[prev * sigma + set.last_char[v] as usize];
                }
            }
            Mode::Generic { instances } => {
                let inst = &instances[j];
                for v in 0..nodes {
                    let prev = match set.parent[v] {
                        ROOT => inst.init,
                        p => state[p as usize] as u64,
                    };
                    state[v] =
                        inst.compress_unchecked(prev, set.last_char[v], set.depth[v] as usize)
                            as u8;
                }
            }
        }
        set.member_nodes
            .iter()
            .map(|&node| match node {
                ROOT => self.init_of(j) as u8,
                v => state[v as usize],
            })
            .collect()
    }

    fn column_u64(&self, j: usize, set: &Materialized) -> Vec<u64> {
        let nodes = set.node_count();
        let mut state = vec![0u64; nodes];
        let Mode::Generic { instances } = &self.mode else {
            unreachable!("wide values imply generic mode");
        };
        let inst = &instances[j];
        for v in 0..nodes {
            let prev = match set.parent[v] {
                ROOT => inst.init,
                p => state[p as usize],
            };
            state[v] = inst.compress_unchecked(prev, set.last_char[v], set.depth[v] as usize);
        }
        set.member_nodes
            .iter()
            .map(|&node| match node {
                ROOT => inst.init,
                v => state[v as usize],
            })
            .collect()
    }

    pub fn init_of(&self, j: usize) -> u64 {
        match &self.mode {
            Mode::Table { init, .. } => init[j] as u64,
            Mode::Generic { instances } => instances[j].init,
        }
    }

    /// One compression step applied instance-wise to a signature vector.
    pub fn step_signature(&self, sig: &mut [u8], c: u64, position: usize) {
        match &self.mode {
            Mode::Table {
                states,
                sigma,
                step,
                ..
            } => {
                let block = states * sigma;
                for (j, y) in sig.iter_mut().enumerate() {
                    *y = step[j * block + (*y as usize) * sigma + c as usize];
                }
            }
            Mode::Generic { instances } => {
                for (j, y) in sig.iter_mut().enumerate() {
                    *y = instances[j].compress_unchecked(*y as u64, c, position) as u8;
                }
            }
        }
    }

    /// Initial signature vector (`hash(empty)` per instance), u8 domain.
    pub fn init_signature(&self) -> Vec<u8> {
        (0..self.n).map(|j| self.init_of(j) as u8).collect()
    }
}

pub(crate) enum SigMatrix {
    /// Row-major member x instance matrix of hash values < 256.
    Bytes { rows: Vec<u8>, n: usize },
    Words { rows: Vec<u64>, n: usize },
}

impl SigMatrix {
    pub fn instance_count(&self) -> usize {
        match self {
            SigMatrix::Bytes { n, .. } => *n,
            SigMatrix::Words { n, .. } => *n,
        }
    }

    pub fn value(&self, member: usize, instance: usize) -> u64 {
        match self {
            SigMatrix::Bytes { rows, n } => rows[member * n + instance] as u64,
            SigMatrix::Words { rows, n } => rows[member * n + instance],
        }
    }

    /// Number of instances on which two member strings collide.
    pub fn equal_count(&self, a: usize, b: usize) -> u64 {
        match self {
            SigMatrix::Bytes { rows, n } => {
                equal_bytes(&rows[a * n..(a + 1) * n], &rows[b * n..(b + 1) * n]) as u64
            }
            SigMatrix::Words { rows, n } => rows[a * n..(a + 1) * n]
                .iter()
                .zip(&rows[b * n..(b + 1) * n])
                .filter(|(x, y)| x == y)
                .count() as u64,
        }
    }

    /// Max collision count over all distinct pairs among the first `upto`
    /// members, with the first achieving pair in scan order. `seed_pairs`
    /// only warm the branch-and-bound floor; they are rescanned in order.
    pub fn max_equal_pair(
        &self,
        upto: usize,
        seed_pairs: &[(usize, usize)],
    ) -> Option<(u64, usize, usize)> {
        if upto < 2 {
            return None;
        }
        match self {
            SigMatrix::Bytes { rows, n } => {
                let n = *n;
                let floor = seed_pairs
                    .iter()
                    .filter(|&&(i, j)| i < upto && j < upto)
                    .map(|&(i, j)| equal_bytes(&rows[i * n..(i + 1) * n], &rows[j * n..(j + 1) * n]))
                    .max()
                    .unwrap_or(0);
                let best = AtomicU32::new(floor);
                let found = (0..upto - 1)
                    .into_par_iter()
                    .map(|i| {
                        let row_i = &rows[i * n..(i + 1) * n];
                        let mut local: Option<(u32, usize, usize)> = None;
                        let mut prune = best.load(Ordering::Relaxed);
                        for j in (i + 1)..upto {
                            let row_j = &rows[j * n..(j + 1) * n];
                            // keep ties alive: prune only counts strictly below
                            if let Some(c) = equal_bytes_pruned(row_i, row_j, prune) {
                                let better = match local {
                                    Some((bc, _, _)) => c > bc,
                                    None => true,
                                };
                                if better {
                                    local = Some((c, i, j));
                                    prune = best.fetch_max(c, Ordering::Relaxed).max(c);
                                }
                            }
                        }
                        local
                    })
                    .reduce(
                        || None,
                        |a, b| match (a, b) {
                            (None, x) | (x, None) => x,
                            (Some(x), Some(y)) => {
                                // higher count wins; canonical (first) pair on ties
                                if y.0 > x.0 || (y.0 == x.0 && (y.1, y.2) < (x.1, x.2)) {
                                    Some(y)
                                } else {
                                    Some(x)
                                }
                            }
                        },
                    );
                found.map(|(c, i, j)| (c as u64, i, j))
            }
            SigMatrix::Words { .. } => {
                let mut best: Option<(u64, usize, usize)> = None;
                for i in 0..upto - 1 {
                    for j in (i + 1)..upto {
                        let c = self.equal_count(i, j);
                        if best.map_or(true, |(bc, _, _)| c > bc) {
                            best = Some((c, i, j));
                        }
                    }
                }
                best
            }
        }
    }
}

const LOW7: u64 = 0x7f7f_7f7f_7f7f_7f7f;
const HIGH: u64 = 0x8080_8080_8080_8080;

/// Number of non-zero bytes in a word. `(x & LOW7) + LOW7` carries into
/// bit 7 of each byte iff the low seven bits are non-zero; OR-ing `x` back
/// in catches bytes whose only set bit is bit 7. No carry crosses a byte.
#[inline]
fn nonzero_bytes(x: u64) -> u32 {
    ((((x & LOW7) + LOW7) | x) & HIGH).count_ones()
}

/// Count positions where the two byte strings agree.
#[inline]
pub(crate) fn equal_bytes(a: &[u8], b: &[u8]) -> u32 {
    debug_assert_eq!(a.len(), b.len());
    let mut eq = a.len() as u32;
    let ac = a.chunks_exact(8);
    let bc = b.chunks_exact(8);
    let (ar, br) = (ac.remainder(), bc.remainder());
    for (ca, cb) in ac.zip(bc) {
        let x = u64::from_ne_bytes(ca.try_into().unwrap())
            ^ u64::from_ne_bytes(cb.try_into().unwrap());
        eq -= nonzero_bytes(x);
    }
    for (x, y) in ar.iter().zip(br) {
        if x != y {
            eq -= 1;
        }
    }
    eq
}

/// As [`equal_bytes`], but abandons (returning `None`) once the count is
/// certain to fall strictly below `keep_at_least`.
#[inline]
fn equal_bytes_pruned(a: &[u8], b: &[u8], keep_at_least: u32) -> Option<u32> {
    let total = a.len() as u32;
    if keep_at_least > total {
        return None;
    }
    let allowed_mismatches = total - keep_at_least;
    let mut neq = 0u32;
    let ac = a.chunks_exact(8);
    let bc = b.chunks_exact(8);
    let (ar, br) = (ac.remainder(), bc.remainder());
    for (block, (ca, cb)) in ac.zip(bc).enumerate() {
        let x = u64::from_ne_bytes(ca.try_into().unwrap())
            ^ u64::from_ne_bytes(cb.try_into().unwrap());
        neq += nonzero_bytes(x);
        if block % 16 == 15 && neq > allowed_mismatches {
            return None;
        }
    }
    for (x, y) in ar.iter().zip(br) {
        if x != y {
            neq += 1;
        }
    }
    if neq > allowed_mismatches {
        None
    } else {
        Some(total - neq)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_bytes_matches_naive() {
        let mut rng = crate::rng::SplitMix64::new(5);
        for len in [0usize, 1, 7, 8, 9, 63, 64, 100, 1024] {
            let a: Vec<u8> = (0..len).map(|_| rng.below(4) as u8).collect();
            let b: Vec<u8> = (0..len).map(|_| rng.below(4) as u8).collect();
            let naive = a.iter().zip(&b).filter(|(x, y)| x == y).count() as u32;
            assert_eq!(equal_bytes(&a, &b), naive, "len={len}");
            assert_eq!(equal_bytes_pruned(&a, &b, 0), Some(naive));
            assert_eq!(equal_bytes_pruned(&a, &b, naive), Some(naive));
            if naive > 0 {
                // pruning below the achieved count must never fire
                assert_eq!(equal_bytes_pruned(&a, &b, naive - 1), Some(naive));
            }
        }
    }

    #[test]
    fn high_bit_bytes_counted_correctly() {
        let a = [0x80u8, 0x00, 0x80, 0x01, 0, 0, 0, 0];
        let b = [0x00u8, 0x00, 0x80, 0x01, 0, 0, 0, 1];
        assert_eq!(equal_bytes(&a, &b), 6);
    }
}
