//! The measurement engine: exact (exhaustive-enumeration) and Monte-Carlo
//! evaluation of uniformity, almost universality, almost strong/XOR
//! universality and k-wise independence over a family and a string set.

mod engine;
mod exact;
mod gp_table;
mod mc;
mod search;

pub use exact::{
    exact_collision_max, exact_report, exact_report_for_instances, lemma1_equality_holds,
    pairwise_joint, threewise_probe, unary_collision_prob, JointTable, ThreewiseProbe,
};
pub use gp_table::{gp_table, GpRowMode, GpTableRow};
pub use mc::{monte_carlo_pair, monte_carlo_report, wilson_interval};
pub use search::{find_certain_collision, CertainCollision};

use crate::stringset::StringSet;
use serde::Serialize;

/// Exact probability, kept unreduced: the denominator is the family
/// cardinality. Equality and ordering compare values, not representations.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Rat {
    pub num: u64,
    pub den: u64,
}

impl Rat {
    pub fn new(num: u64, den: u64) -> Rat {
        assert!(den > 0, "zero denominator");
        Rat { num, den }
    }

    pub fn zero() -> Rat {
        Rat { num: 0, den: 1 }
    }

    pub fn one() -> Rat {
        Rat { num: 1, den: 1 }
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Half-up rounding to two decimals, e.g. `544/1024 -> "0.53"`.
    pub fn round2(&self) -> String {
        let num = self.num as u128;
        let den = self.den as u128;
        let q = (200 * num + den) / (2 * den);
        format!("{}.{:02}", q / 100, q % 100)
    }

    /// Exact `self * k`.
    pub fn scale(&self, k: u64) -> Rat {
        let num = (self.num as u128)
            .checked_mul(k as u128)
            .and_then(|v| u64::try_from(v).ok())
            .expect("scaled numerator overflows u64");
        Rat::new(num, self.den)
    }
}

impl PartialEq for Rat {
    fn eq(&self, other: &Rat) -> bool {
        self.num as u128 * other.den as u128 == other.num as u128 * self.den as u128
    }
}

impl Eq for Rat {}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Rat) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Rat) -> std::cmp::Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl std::fmt::Display for Rat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// A probability in a report: exact rational in exact mode, point estimate
/// with a Wilson 95% interval in Monte-Carlo mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Prob {
    Exact(Rat),
    Estimate {
        mean: f64,
        wilson_low: f64,
        wilson_high: f64,
    },
}

impl Prob {
    pub fn as_exact(&self) -> Option<Rat> {
        match self {
            Prob::Exact(r) => Some(*r),
            _ => None,
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Prob::Exact(r) => r.to_f64(),
            Prob::Estimate { mean, .. } => *mean,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum UniformityVerdict {
    /// Every (string, value) probability is exactly `1/value_count`.
    Uniform,
    NotUniform {
        string: Vec<u64>,
        value: u64,
        count: u64,
    },
    /// Singleton families (fixed compression and initial value) get no
    /// uniformity verdict.
    NotApplicable { reason: String },
}

/// How hash-value differences are formed for the XOR-universality field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum XorKind {
    Bitwise,
    FieldSubtraction,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairWitness {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValueWitness {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    pub y: u64,
    /// Second prescribed value; only present for joint (ASU) witnesses.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y2: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct KwiseCounterexample {
    pub strings: Vec<Vec<u64>>,
    pub values: Vec<u64>,
    pub count: u64,
    pub expected: Rat,
}

#[derive(Debug, Clone, Serialize)]
pub struct KwiseVerdict {
    pub k: u8,
    pub independent: bool,
    /// True when the string set has fewer than k members, which makes the
    /// verdict vacuous.
    pub trivial: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<KwiseCounterexample>,
}

#[derive(Debug, Clone, Serialize)]
pub struct KwiseCollision {
    pub k: u8,
    pub prob: Prob,
    pub witness: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum ReportMode {
    Exact { instances: u64 },
    MonteCarlo { trials: u64, seed: u64, confidence: f64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct StringSetDescriptor {
    pub alphabet_size: u64,
    pub max_len: usize,
    pub rule: String,
    pub exclusion: String,
    pub count: u64,
}

impl StringSetDescriptor {
    pub fn of(set: &StringSet) -> StringSetDescriptor {
        StringSetDescriptor {
            alphabet_size: set.alphabet_size,
            max_len: set.max_len,
            rule: set.rule_name().to_string(),
            exclusion: set.exclusion_name().to_string(),
            count: set.count().min(u64::MAX as u128) as u64,
        }
    }
}

/// Exact rational probabilities (or Monte-Carlo estimates) over a family
/// and a string set, with extremal witnesses attached.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub family: String,
    pub string_set: StringSetDescriptor,
    pub mode: ReportMode,
    pub value_count: u64,
    pub uniformity: UniformityVerdict,
    /// max over distinct pairs of P(h(s) = h(s')).
    pub eps_au: Option<Prob>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_au_witness: Option<PairWitness>,
    pub xor_kind: XorKind,
    /// max over pairs and y of P(h(s) (-) h(s') = y).
    pub eps_axu: Option<Prob>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_axu_witness: Option<ValueWitness>,
    /// value_count * max over pairs, (y, y') of P(h(s)=y and h(s')=y').
    pub eps_asu: Option<Prob>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_asu_witness: Option<ValueWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairwise_independent: Option<bool>,
    pub kwise: Vec<KwiseVerdict>,
    pub kwise_collision: Vec<KwiseCollision>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Flat CSV rendering: one `metric,value,...` row per field.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("metric,value,num,den,detail\n");
        let prob_row = |out: &mut String, name: &str, p: &Option<Prob>, detail: &str| {
            match p {
                Some(Prob::Exact(r)) => {
                    out.push_str(&format!("{name},{},{},{},{detail}\n", r.round2(), r.num, r.den))
                }
                Some(Prob::Estimate { mean, wilson_low, wilson_high }) => out.push_str(&format!(
                    "{name},{mean:.6},,,[{wilson_low:.6};{wilson_high:.6}] {detail}"
                )),
                None => out.push_str(&format!("{name},,,,{detail}\n")),
            }
        };
        let uniform = match &self.uniformity {
            UniformityVerdict::Uniform => "uniform".to_string(),
            UniformityVerdict::NotUniform { .. } => "not-uniform".to_string(),
            UniformityVerdict::NotApplicable { reason } => format!("not applicable ({reason})"),
        };
        out.push_str(&format!("family,{},,,\n", self.family));
        out.push_str(&format!("uniformity,{uniform},,,\n"));
        prob_row(&mut out, "eps_au", &self.eps_au, &witness_str(&self.eps_au_witness));
        prob_row(&mut out, "eps_axu", &self.eps_axu, "");
        prob_row(&mut out, "eps_asu", &self.eps_asu, "");
        if let Some(p) = self.pairwise_independent {
            out.push_str(&format!("pairwise_independent,{p},,,\n"));
        }
        for v in &self.kwise {
            out.push_str(&format!("kwise_{},{},,,trivial={}\n", v.k, v.independent, v.trivial));
        }
        for v in &self.kwise_collision {
            prob_row(&mut out, &format!("kwise_collision_{}", v.k), &Some(v.prob), "");
        }
        out
    }
}

fn witness_str(w: &Option<PairWitness>) -> String {
    match w {
        Some(w) => format!("{:?}|{:?}", w.a, w.b).replace(',', " "),
        None => String::new(),
    }
}
