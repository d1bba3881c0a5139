//! String sets that reports are computed over.
//!
//! Strings are slices of characters `0 .. alphabet_size-1`. Generated sets
//! are ordered by length, then lexicographically; that order is part of the
//! reporting contract (extremal witnesses are the first achievers in it).

use crate::error::{Error, Result};

/// Hard cap on materialized prefix-tree nodes (memory guard).
const MAX_NODES: u128 = 64_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenerationRule {
    /// Every non-empty string of length `1..=max_len`.
    AllUpToMaxLen,
    /// The unary strings `character^r` for `r = 1..=max_len`.
    Unary { character: u64 },
    /// An explicit, duplicate-free list.
    Explicit(Vec<Vec<u64>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exclusion {
    None,
    /// Drop strings whose last character is 0 (multilinear's domain).
    NoTrailingZero,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StringSet {
    pub alphabet_size: u64,
    pub max_len: usize,
    pub rule: GenerationRule,
    pub exclusion: Exclusion,
}

impl StringSet {
    pub fn all_up_to(alphabet_size: u64, max_len: usize) -> StringSet {
        StringSet {
            alphabet_size,
            max_len,
            rule: GenerationRule::AllUpToMaxLen,
            exclusion: Exclusion::None,
        }
    }

    pub fn unary(alphabet_size: u64, character: u64, max_len: usize) -> StringSet {
        StringSet {
            alphabet_size,
            max_len,
            rule: GenerationRule::Unary { character },
            exclusion: Exclusion::None,
        }
    }

    pub fn explicit(alphabet_size: u64, strings: Vec<Vec<u64>>) -> StringSet {
        let max_len = strings.iter().map(|s| s.len()).max().unwrap_or(0);
        StringSet {
            alphabet_size,
            max_len,
            rule: GenerationRule::Explicit(strings),
            exclusion: Exclusion::None,
        }
    }

    pub fn without_trailing_zero(mut self) -> StringSet {
        self.exclusion = Exclusion::NoTrailingZero;
        self
    }

    /// Number of member strings.
    pub fn count(&self) -> u128 {
        let sigma = self.alphabet_size as u128;
        match &self.rule {
            GenerationRule::AllUpToMaxLen => {
                let mut total = 0u128;
                let mut level = 1u128;
                for _ in 0..self.max_len {
                    level = level.saturating_mul(sigma);
                    let members = match self.exclusion {
                        Exclusion::None => level,
                        Exclusion::NoTrailingZero => level / sigma * (sigma - 1),
                    };
                    total = total.saturating_add(members);
                }
                total
            }
            GenerationRule::Unary { character } => match self.exclusion {
                Exclusion::NoTrailingZero if *character == 0 => 0,
                _ => self.max_len as u128,
            },
            GenerationRule::Explicit(strings) => strings
                .iter()
                .filter(|s| self.exclusion_keeps(s))
                .count() as u128,
        }
    }

    fn exclusion_keeps(&self, s: &[u64]) -> bool {
        match self.exclusion {
            Exclusion::None => true,
            Exclusion::NoTrailingZero => s.last() != Some(&0),
        }
    }

    pub fn rule_name(&self) -> &'static str {
        match self.rule {
            GenerationRule::AllUpToMaxLen => "all-up-to-max-len",
            GenerationRule::Unary { .. } => "unary",
            GenerationRule::Explicit(_) => "explicit",
        }
    }

    pub fn exclusion_name(&self) -> &'static str {
        match self.exclusion {
            Exclusion::None => "none",
            Exclusion::NoTrailingZero => "no-trailing-zero",
        }
    }

    /// Materialize the prefix tree and the member list.
    pub fn materialize(&self) -> Result<Materialized> {
        if self.alphabet_size == 0 {
            return Err(Error::domain("alphabet must have at least one character"));
        }
        let sigma = self.alphabet_size;
        let mut m = Materialized {
            parent: Vec::new(),
            last_char: Vec::new(),
            depth: Vec::new(),
            member_nodes: Vec::new(),
            strings: Vec::new(),
        };
        match &self.rule {
            GenerationRule::AllUpToMaxLen => {
                let mut nodes = 0u128;
                let mut level = 1u128;
                for _ in 0..self.max_len {
                    level = level.saturating_mul(sigma as u128);
                    nodes = nodes.saturating_add(level);
                }
                if nodes > MAX_NODES {
                    return Err(Error::capacity("string-set nodes", nodes, MAX_NODES));
                }
                let mut level_start = 0usize; // node index of first node at current depth
                let mut level_len = 0usize;
                for depth in 1..=self.max_len {
                    let new_len = if depth == 1 {
                        sigma as usize
                    } else {
                        level_len * sigma as usize
                    };
                    let new_start = m.parent.len();
                    for i in 0..new_len {
                        let parent = if depth == 1 {
                            ROOT
                        } else {
                            (level_start + i / sigma as usize) as u32
                        };
                        let c = i as u64 % sigma;
                        m.parent.push(parent);
                        m.last_char.push(c);
                        m.depth.push(depth as u32);
                        let keep = match self.exclusion {
                            Exclusion::None => true,
                            Exclusion::NoTrailingZero => c != 0,
                        };
                        if keep {
                            m.member_nodes.push((new_start + i) as u32);
                        }
                    }
                    level_start = new_start;
                    level_len = new_len;
                }
            }
            GenerationRule::Unary { character } => {
                if *character >= sigma {
                    return Err(Error::domain(format!(
                        "unary character {character} outside alphabet of size {sigma}"
                    )));
                }
                for depth in 1..=self.max_len {
                    m.parent.push(if depth == 1 { ROOT } else { (depth - 2) as u32 });
                    m.last_char.push(*character);
                    m.depth.push(depth as u32);
                    if self.exclusion_keeps(&[*character]) {
                        m.member_nodes.push((depth - 1) as u32);
                    }
                }
            }
            GenerationRule::Explicit(strings) => {
                for s in strings {
                    for &c in s {
                        if c >= sigma {
                            return Err(Error::domain(format!(
                                "character {c} outside alphabet of size {sigma}"
                            )));
                        }
                    }
                    if !self.exclusion_keeps(s) {
                        continue;
                    }
                    let mut parent = ROOT;
                    for (i, &c) in s.iter().enumerate() {
                        m.parent.push(parent);
                        m.last_char.push(c);
                        m.depth.push(i as u32 + 1);
                        parent = (m.parent.len() - 1) as u32;
                    }
                    m.member_nodes.push(parent); // ROOT when s is empty
                }
            }
        }
        for &node in &m.member_nodes {
            m.strings.push(m.string_of(node));
        }
        let mut sorted = m.strings.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::domain("string set contains duplicates"));
        }
        Ok(m)
    }
}

/// Parse a comma-separated list of character values, e.g. `"0,3,1"`.
/// The empty input denotes the empty string.
pub fn parse_int_list(s: &str) -> crate::error::Result<Vec<u64>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|item| {
            let t = item.trim();
            if t.is_empty() {
                return Err(Error::parse("empty item in character list"));
            }
            t.parse::<u64>()
                .map_err(|_| Error::parse(format!("invalid character value {t:?}")))
        })
        .collect()
}

pub const ROOT: u32 = u32::MAX;

/// Prefix tree of a materialized string set. Parents always precede their
/// children, so a single forward pass evaluates an iterated hash on every
/// node.
#[derive(Debug, Clone)]
pub struct Materialized {
    pub parent: Vec<u32>,
    pub last_char: Vec<u64>,
    pub depth: Vec<u32>,
    /// Node index of each member string, in member order; `ROOT` denotes
    /// the empty string.
    pub member_nodes: Vec<u32>,
    /// The member strings themselves, in the same order.
    pub strings: Vec<Vec<u64>>,
}

impl Materialized {
    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    pub fn member_count(&self) -> usize {
        self.member_nodes.len()
    }

    fn string_of(&self, node: u32) -> Vec<u64> {
        let mut out = Vec::new();
        let mut cur = node;
        while cur != ROOT {
            out.push(self.last_char[cur as usize]);
            cur = self.parent[cur as usize];
        }
        out.reverse();
        out
    }
}
