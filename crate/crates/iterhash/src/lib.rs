//! A verification laboratory for iterated string hashing.
//!
//! An *iterated* hash function processes a string one character at a time:
//! starting from an initial value `H_0`, the hash of `s_1 s_2 … s_n` is
//! `H_n` where `H_i = F(H_{i-1}, s_i)` and `F` is the compression function.
//! This crate implements the classic iterated families (Carter–Wegman
//! polynomial hashing, tabulation hashing, Pearson hashing, FNV, Bernstein,
//! the C++/Java string hashers, …) exactly, together with:
//!
//! * [`algebra`] — exact arithmetic over prime fields, binary fields
//!   `GF(2)[x]/p(x)`, the barrel-shift ring `GF(2)[x]/(x^L+1)` and the
//!   integers mod `2^L`, plus the number-theoretic helpers the analysis
//!   needs (irreducible polynomials, `lcm(1..k)`, the divisor function).
//! * [`family`] — a uniform interface over every family: parameterize,
//!   sample, exhaustively enumerate at small word sizes, and evaluate.
//! * [`verifier`] — the measurement engine. At small sizes it enumerates an
//!   entire family and reports *exact rational* collision probabilities,
//!   uniformity, almost-(strong/XOR-)universality and k-wise independence
//!   verdicts, with extremal witness pairs. Larger families get
//!   deterministic Monte-Carlo estimates with Wilson intervals.
//! * [`witness`] — constructors for forced-collision objects (the `τ`
//!   polynomial pair, the binomial pair for `B·y+c mod 2^L`, the forced
//!   unary collision at length `2^L + lcm(1..2^L)`, …) each carrying a
//!   machine-checked certificate.
//! * [`bounds`] — closed-form impossibility-bound calculators for the
//!   maximal string length an iterated family can cover.
//!
//! Probabilities are exact big-integer rationals wherever a family can be
//! enumerated; floating point is confined to Monte-Carlo estimates and the
//! `log2(2^L!)` bound term.

pub mod algebra;
pub mod bounds;
pub mod error;

pub mod rng;




pub mod family;
pub mod stringset;
pub mod verifier;
pub mod witness;

pub use error::Error;

/// Default evaluation budget: instances × strings for exact reports,
/// distinct signature states for collision search.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Default seed for every randomized operation, so that runs reproduce.
pub const DEFAULT_SEED: u64 = 42;
