//! Corpus and graph generators shared by the benchmarks.

use miov_core::{StringCollection, TransitionGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SYMBOLS: &[u8] = b"ACGTNRYK";

/// Near-copies of one random base string: a few substitutions each, so the
/// BWT stays run-heavy like a pangenome collection.
pub fn repetitive_corpus(seed: u64, sigma: usize, n: usize, len: usize, edits: usize) -> StringCollection {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma = sigma.clamp(1, SYMBOLS.len());
    let base: Vec<u8> = (0..len).map(|_| SYMBOLS[rng.gen_range(0..sigma)]).collect();
    let strings = (0..n)
        .map(|_| {
            let mut s = base.clone();
            for _ in 0..edits {
                let i = rng.gen_range(0..len);
                s[i] = SYMBOLS[rng.gen_range(0..sigma)];
            }
            s
        })
        .collect();
    StringCollection::new(strings, b'$').expect("generated corpus is valid")
}

/// Random weighted digraph on `n` runs with roughly `density * n * (n-1)` edges.
pub fn random_graph(seed: u64, n: usize, density: f64) -> TransitionGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 1..=n as u32 {
        for b in 1..=n as u32 {
            if a != b && rng.gen_bool(density) {
                edges.push((a, b, rng.gen_range(1..50)));
            }
        }
    }
    TransitionGraph::from_edges(n, edges).expect("labels in range")
}
