#![allow(dead_code)]

pub mod lp;

use miov_core::bwt::{sort_rotations, Rotation};
use miov_core::{load_plain, MoveTable, RunId, StringCollection, TransitionGraph};
use rand::seq::SliceRandom;
use rand::Rng;

pub const SAMPLE_TEXT: &[u8] = b"GATTACAT\nAGATACAT\nGATACAT\nGATTAGAT\nGATTAGATA\n";

pub const SAMPLE_EDGES: [(u32, u32, u64); 14] = [
    (1, 2, 1), (1, 9, 4), (2, 3, 1), (3, 4, 1), (3, 9, 6), (5, 6, 4), (5, 7, 3),
    (6, 7, 7), (7, 3, 6), (7, 8, 4), (9, 5, 7), (9, 10, 3), (10, 11, 3), (11, 6, 3),
];

pub fn sample_collection() -> StringCollection {
    load_plain(SAMPLE_TEXT, b'$').unwrap()
}

pub fn sample_graph() -> TransitionGraph {
    TransitionGraph::from_edges(11, SAMPLE_EDGES).unwrap()
}

pub fn row_tuples(table: &MoveTable) -> Vec<(u8, usize, u32, usize, u32)> {
    table.rows().iter().map(|r| (r.chr, r.len, r.ptr.0, r.off, r.succ.0)).collect()
}

const SYMBOLS: &[u8] = b"ACGTNRYK";

/// Uniformly random strings over the first `sigma` symbols.
pub fn random_corpus(rng: &mut impl Rng, sigma: usize, n: usize, max_len: usize) -> StringCollection {
    let strings = (0..n)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            (0..len).map(|_| SYMBOLS[rng.gen_range(0..sigma)]).collect()
        })
        .collect();
    StringCollection::new(strings, b'$').unwrap()
}

/// Mutated copies of one base string, in the spirit of a pangenome.
pub fn repetitive_corpus(rng: &mut impl Rng, sigma: usize, n: usize, len: usize) -> StringCollection {
    let base: Vec<u8> = (0..len).map(|_| SYMBOLS[rng.gen_range(0..sigma)]).collect();
    let strings = (0..n)
        .map(|_| {
            let mut s = base.clone();
            for _ in 0..rng.gen_range(0..=2) {
                let i = rng.gen_range(0..s.len());
                s[i] = SYMBOLS[rng.gen_range(0..sigma)];
            }
            let cut = rng.gen_range(1..=s.len());
            s.truncate(cut);
            s
        })
        .collect();
    StringCollection::new(strings, b'$').unwrap()
}

/// `count` corpora (alphabet 2-8, 1-50 strings, lengths 1-200) whose sizes
/// add up to at most `budget` characters. Every fourth corpus is tiny so the
/// exact solver gets tables with few runs.
pub fn corpus_suite(rng: &mut impl Rng, count: usize, budget: usize) -> Vec<StringCollection> {
    assert!(budget >= 2 * count);
    let mut used = 0;
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let remaining = count - k;
        // leave two characters for each corpus still to come
        let limit = (2 * (budget - used) / remaining).min(budget - used - 2 * (remaining - 1));
        let sigma = rng.gen_range(2..=8);
        let n = rng.gen_range(1..=50);
        let len = rng.gen_range(1..=200);
        let c = match k % 4 {
            0 => random_corpus(rng, sigma.min(3), 1 + n % 3, 1 + len % 6),
            1 => repetitive_corpus(rng, sigma, n, len),
            _ => random_corpus(rng, sigma, n, len),
        };
        let mut strings = c.strings().to_vec();
        strings.shuffle(rng);
        let mut kept: Vec<Vec<u8>> = Vec::new();
        let mut size = 0;
        for mut s in strings {
            if size + 2 > limit {
                break;
            }
            s.truncate(limit - size - 1);
            size += s.len() + 1;
            kept.push(s);
        }
        used += size;
        out.push(StringCollection::new(kept, b'$').unwrap());
    }
    out
}

/// LF from the sorted rotations: the row of the rotation that starts one
/// character earlier in the same string. Entry `i` is `LF(i + 1)`.
pub fn rotation_lf(collection: &StringCollection) -> Vec<usize> {
    let rotations = sort_rotations(collection);
    let mut row_of = std::collections::HashMap::with_capacity(rotations.len());
    for (i, r) in rotations.iter().enumerate() {
        row_of.insert(*r, i + 1);
    }
    rotations
        .iter()
        .map(|r| {
            let len = collection.strings()[r.string].len() + 1;
            let prev = Rotation { string: r.string, offset: (r.offset + len - 1) % len };
            row_of[&prev]
        })
        .collect()
}

/// First-access order of runs simulated on BWT rows: LF from `lf`, runs from
/// the maximal-run boundaries of `bwt`, and the runs accessed by a step are
/// every run from the one holding LF(head) through the one holding the
/// destination. The table's memory order is assumed to be BWT order.
pub fn simulate_first_visit(bwt: &[u8], lf: &[usize], include_hops: bool) -> Vec<u32> {
    let n = bwt.len();
    let mut run_of = vec![0u32; n + 1];
    let mut head_of = vec![0usize; n + 1];
    let mut run = 0;
    let mut head = 0;
    for row in 1..=n {
        if row == 1 || bwt[row - 1] != bwt[row - 2] {
            run += 1;
            head = row;
        }
        run_of[row] = run;
        head_of[row] = head;
    }
    let mut order = Vec::new();
    let mut seen = vec![false; run as usize + 1];
    let mut touch = |r: u32, order: &mut Vec<u32>| {
        if !seen[r as usize] {
            seen[r as usize] = true;
            order.push(r);
        }
    };
    let mut visited = vec![false; n + 1];
    for start in 1..=n {
        if visited[start] {
            continue;
        }
        let mut row = start;
        while !visited[row] {
            visited[row] = true;
            touch(run_of[row], &mut order);
            let dest = lf[row - 1];
            if include_hops {
                let first = run_of[lf[head_of[row] - 1]];
                for r in first..=run_of[dest] {
                    touch(r, &mut order);
                }
            }
            row = dest;
        }
    }
    order
}

/// Random graph on `n` runs with about `density` of ordered pairs present.
pub fn random_graph(rng: &mut impl Rng, n: usize, density: f64, max_w: u64) -> TransitionGraph {
    let mut edges = Vec::new();
    for s in 1..=n as u32 {
        for d in 1..=n as u32 {
            if s != d && rng.gen_bool(density) {
                edges.push((s, d, rng.gen_range(1..=max_w)));
            }
        }
    }
    TransitionGraph::from_edges(n, edges).unwrap()
}

pub fn labels(order: &[RunId]) -> Vec<u32> {
    order.iter().map(|r| r.0).collect()
}
