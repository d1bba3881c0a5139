use iterhash::verifier::gp_table;
use std::time::Instant;

fn main() {
    let n_max: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    let budget: u64 = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(1_000_000_000);
    let t0 = Instant::now();
    let rows = gp_table(2, n_max, budget).unwrap();
    for r in &rows {
        println!(
            "n={} prob={} ({}) mode={:?} witness={:?} [{:.2?}]",
            r.n, r.prob, r.prob.round2(), r.mode,
            r.witness.as_ref().map(|w| (w.a.clone(), w.b.clone())),
            t0.elapsed()
        );
    }
}
