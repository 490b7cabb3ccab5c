mod common;

use common::*;
use miov_core::reorder::{
    apply_layout, brute_force_layout, evaluate_layout, first_visit_layout, first_visit_order,
    greedy_layout, optimal_layout, DEFAULT_MAX_RUNS,
};
use miov_core::trace::locality_report;
use miov_core::{
    build_move_table, build_multibwt, invert, split_runs, trace_inversion, Layout, RunPosition,
    StringCollection,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn collection_strategy() -> impl Strategy<Value = StringCollection> {
    (2usize..=8).prop_flat_map(|sigma| {
        let symbols = &b"ACGTNRYK"[..sigma];
        prop::collection::vec(
            prop::collection::vec(prop::sample::select(symbols.to_vec()), 1..=200),
            1..=50,
        )
        .prop_map(|strings| StringCollection::new(strings, b'$').unwrap())
    })
}

fn small_collection_strategy() -> impl Strategy<Value = StringCollection> {
    prop::collection::vec(prop::collection::vec(prop::sample::select(b"ACG".to_vec()), 1..=12), 1..=6)
        .prop_map(|strings| StringCollection::new(strings, b'$').unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn inversion_recovers_collection(c in collection_strategy()) {
        let table = build_move_table(&build_multibwt(&c));
        prop_assert_eq!(invert(&table).unwrap().sorted(), c.sorted());
    }

    #[test]
    fn move_lf_matches_definitions(c in collection_strategy()) {
        let bwt = build_multibwt(&c);
        let table = build_move_table(&bwt);
        let by_rotation = rotation_lf(&c);
        let mut images = vec![false; bwt.len()];
        for (i, row) in table.rows().iter().enumerate() {
            for offset in 1..=row.len {
                let pos = RunPosition::new(miov_core::RunId::from_index(i), offset);
                let from = table.row_of(pos).unwrap();
                let (dest, hops) = table.lf_step(pos).unwrap();
                let to = table.row_of(dest).unwrap();
                prop_assert_eq!(to, by_rotation[from - 1]);
                prop_assert!(!hops[1..].contains(&table.head()));
                images[to - 1] = true;
            }
        }
        prop_assert!(images.iter().all(|&b| b));
    }

    #[test]
    fn naive_lf_exhaustive_small(c in small_collection_strategy()) {
        let bwt = build_multibwt(&c);
        let table = build_move_table(&bwt);
        for row in 1..=bwt.len() {
            prop_assert_eq!(table.lf_row(row).unwrap(), bwt.naive_lf(row).unwrap());
        }
        let runs = bwt.run_length_encode();
        prop_assert_eq!(runs.iter().map(|r| r.1).sum::<usize>(), bwt.len());
        prop_assert!(runs.windows(2).all(|w| w[0].0 != w[1].0));
        prop_assert_eq!(bwt.chars().iter().filter(|&&b| b == b'$').count(), c.len());
    }

    #[test]
    fn split_preserves_bwt(c in collection_strategy(), d in 2usize..=4) {
        let table = build_move_table(&build_multibwt(&c));
        let split = split_runs(&table, d).unwrap();
        prop_assert_eq!(split.decode(), table.decode());
        prop_assert!(split.incoming_head_counts().iter().all(|&k| k <= d));
        prop_assert!(split.consistency_issues(b'$').is_empty());
        let (_, before) = table.hop_stats().unwrap();
        let (_, after) = split.hop_stats().unwrap();
        prop_assert!(after <= before);
        prop_assert_eq!(invert(&split).unwrap().sorted(), c.sorted());
    }

    #[test]
    fn trace_counts_every_access(c in collection_strategy()) {
        let table = build_move_table(&build_multibwt(&c));
        let g = trace_inversion(&table, true).unwrap();
        let (hops, _) = table.hop_stats().unwrap();
        prop_assert_eq!(g.total_weight() as usize, table.total() + hops);
        prop_assert!(trace_inversion(&table, false).unwrap().total_weight() <= g.total_weight());
    }

    #[test]
    fn layouts_keep_inversion_and_trace(c in collection_strategy(), seed in any::<u64>()) {
        let table = build_move_table(&build_multibwt(&c));
        let mut order: Vec<u32> = (1..=table.n_runs() as u32).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let layout = Layout::from_labels(&order).unwrap();
        let moved = apply_layout(&table, &layout).unwrap();
        prop_assert_eq!(invert(&moved).unwrap().sorted(), c.sorted());
        let original = trace_inversion(&table, false).unwrap();
        let back = trace_inversion(&moved, false).unwrap().relabel(|r| layout.order()[r.index()]);
        prop_assert_eq!(&back, &original);
        prop_assert_eq!(apply_layout(&moved, &layout.inverse()).unwrap(), table);
    }
}

#[test]
fn exact_matches_brute_force_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..120 {
        let n = 1 + case % 8;
        let density = [0.2, 0.5, 0.9][case % 3];
        let g = random_graph(&mut rng, n, density, 9);
        let exact = optimal_layout(&g, DEFAULT_MAX_RUNS).unwrap();
        let brute = brute_force_layout(&g).unwrap();
        assert_eq!(exact.objective, brute.objective, "case {case}");
        assert_eq!(exact.layout, brute.layout, "tie-break differs in case {case}");
    }
}

#[test]
fn exact_dominates_heuristics() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..60 {
        let g = random_graph(&mut rng, 2 + case % 11, 0.4, 20);
        let exact = optimal_layout(&g, DEFAULT_MAX_RUNS).unwrap().objective;
        let greedy = greedy_layout(&g).unwrap();
        assert!(exact >= greedy.objective);
        assert!(exact >= evaluate_layout(&g, &Layout::identity(g.n_runs())).unwrap());
        let report = locality_report(&g, &greedy.layout).unwrap();
        assert_eq!(report.adjacent, greedy.objective);
        assert_eq!(report.distance_histogram.get(&1).copied().unwrap_or(0), report.adjacent);
        assert_eq!(report.distance_histogram.values().sum::<u64>(), report.total);
        assert!((0.0..=1.0).contains(&report.fraction));
    }
}

#[test]
fn first_visit_matches_row_simulation() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut corpora = vec![sample_collection()];
    corpora.extend(corpus_suite(&mut rng, 30, 20_000));
    for c in &corpora {
        let bwt = build_multibwt(c);
        let table = build_move_table(&bwt);
        let lf = bwt.lf_all();
        for hops in [true, false] {
            let order = first_visit_order(&table, hops).unwrap();
            let mut expected = simulate_first_visit(bwt.chars(), &lf, hops);
            for r in 1..=table.n_runs() as u32 {
                if !expected.contains(&r) {
                    expected.push(r);
                }
            }
            assert_eq!(order.labels(), expected);
        }
    }
}

#[test]
fn sample_first_visit_layout() {
    let c = sample_collection();
    let bwt = build_multibwt(&c);
    let table = build_move_table(&bwt);
    let expected = simulate_first_visit(bwt.chars(), &bwt.lf_all(), true);
    let r = first_visit_layout(&table).unwrap();
    assert_eq!(r.layout.labels(), expected);
    assert_eq!(r.layout.labels(), SAMPLE_FIRST_VISIT);
    assert_eq!(r.objective, evaluate_layout(&sample_graph(), &r.layout).unwrap());
    assert_eq!(r.objective, SAMPLE_FIRST_VISIT_OBJECTIVE);
}

const SAMPLE_FIRST_VISIT: [u32; 11] = [1, 9, 5, 7, 3, 6, 4, 8, 10, 11, 2];
const SAMPLE_FIRST_VISIT_OBJECTIVE: u64 = 23;
