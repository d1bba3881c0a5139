//! Compression throughput on a fixed pseudo-random corpus.
//!
//! Families whose per-instance state grows with `2^L` (the Pearson
//! tables) or with the string length (multilinear, zobrist) are skipped
//! at large word sizes. No correctness claim is attached to these numbers;
//! the output is the one part of the CLI that is not byte-reproducible.

use iterhash::family::{sample_instance, Construction, FamilySpec};
use iterhash::rng::SplitMix64;
use std::hint::black_box;
use std::time::Instant;

const BENCH_FAMILIES: [Construction; 10] = [
    Construction::CwPoly,
    Construction::Tabulated,
    Construction::ShiftTabulated,
    Construction::Division,
    Construction::Bernstein,
    Construction::Fnv1,
    Construction::Fnv1a,
    Construction::Sax,
    Construction::Sxx,
    Construction::PowerOfTwo,
];

pub fn run(word_sizes: &[u32], bytes: usize, seed: u64) {
    let mut rng = SplitMix64::new(seed);
    let corpus: Vec<u64> = (0..bytes).map(|_| rng.below(256)).collect();
    println!("corpus: {} characters, seed {}", corpus.len(), seed);
    println!("{:<18} {:>4} {:>16} {:>12}", "family", "L", "compressions/s", "hash");
    for &bits in word_sizes {
        for construction in BENCH_FAMILIES {
            let mut spec = match FamilySpec::new(construction, bits) {
                Ok(s) => s,
                Err(_) => continue,
            };
            spec.alphabet_size = 256;
            if spec.validate().is_err() {
                continue;
            }
            let inst = match sample_instance(&spec, seed) {
                Ok(i) => i,
                Err(_) => continue,
            };
            // warm up, then measure
            let mut h = inst.hash(&corpus[..corpus.len().min(4096)]).unwrap();
            let start = Instant::now();
            h ^= inst.hash(black_box(&corpus)).unwrap();
            let elapsed = start.elapsed().as_secs_f64();
            let rate = corpus.len() as f64 / elapsed;
            println!(
                "{:<18} {:>4} {:>16.3e} {:>12}",
                construction.name(),
                bits,
                rate,
                black_box(h)
            );
        }
        // the fixed 32-bit hashers only make sense at L = 32
        if bits == 32 {
            for construction in [Construction::GccCpp, Construction::JavaString] {
                let spec = FamilySpec::new(construction, bits).unwrap();
                let inst = sample_instance(&spec, seed).unwrap();
                let start = Instant::now();
                let h = inst.hash(black_box(&corpus)).unwrap();
                let elapsed = start.elapsed().as_secs_f64();
                println!(
                    "{:<18} {:>4} {:>16.3e} {:>12}",
                    construction.name(),
                    bits,
                    corpus.len() as f64 / elapsed,
                    black_box(h)
                );
            }
        }
        // pearson at byte scale for reference
        if bits <= 8 {
            let spec = FamilySpec::new(Construction::Pearson, bits).unwrap();
            let inst = sample_instance(&spec, seed).unwrap();
            let masked: Vec<u64> = corpus.iter().map(|&c| c & ((1 << bits) - 1)).collect();
            let start = Instant::now();
            let h = inst.hash(black_box(&masked)).unwrap();
            let elapsed = start.elapsed().as_secs_f64();
            println!(
                "{:<18} {:>4} {:>16.3e} {:>12}",
                "pearson",
                bits,
                masked.len() as f64 / elapsed,
                black_box(h)
            );
        }
    }
}
