//! Run-access graphs of a full BWT inversion and the locality of layouts.
//!
//! Edges are keyed by run labels of the traced table; a [`Layout`] assigns
//! those labels to memory positions without renaming them.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::movestruct::{MoveTable, RunId, RunPosition};

/// Weighted run-to-run transitions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TransitionGraph {
    n_runs: usize,
    edges: BTreeMap<(RunId, RunId), u64>,
    total: u64,
}

impl TransitionGraph {
    pub fn new(n_runs: usize) -> Self {
        Self { n_runs, edges: BTreeMap::new(), total: 0 }
    }

    /// Graph from `(src, dst, weight)` triples; repeated pairs accumulate and
    /// zero weights are dropped.
    pub fn from_edges(
        n_runs: usize,
        edges: impl IntoIterator<Item = (u32, u32, u64)>,
    ) -> Result<Self> {
        let mut g = Self::new(n_runs);
        for (src, dst, w) in edges {
            for label in [src, dst] {
                if label == 0 || label as usize > n_runs {
                    return Err(Error::InvalidGraph(format!(
                        "run {label} outside 1..={n_runs}"
                    )));
                }
            }
            if w > 0 {
                g.add(RunId(src), RunId(dst), w);
            }
        }
        Ok(g)
    }

    #[inline]
    fn add(&mut self, src: RunId, dst: RunId, w: u64) {
        *self.edges.entry((src, dst)).or_insert(0) += w;
        self.total += w;
    }

    pub fn n_runs(&self) -> usize {
        self.n_runs
    }

    pub fn edges(&self) -> &BTreeMap<(RunId, RunId), u64> {
        &self.edges
    }

    pub fn weight(&self, src: RunId, dst: RunId) -> u64 {
        self.edges.get(&(src, dst)).copied().unwrap_or(0)
    }

    pub fn total_weight(&self) -> u64 {
        self.total
    }

    /// The same graph with every label passed through `map`.
    pub fn relabel(&self, map: impl Fn(RunId) -> RunId) -> Self {
        let mut g = Self::new(self.n_runs);
        for (&(s, d), &w) in &self.edges {
            g.add(map(s), map(d), w);
        }
        g
    }

    /// Dense `n x n` weight matrix indexed by label index.
    pub fn weight_matrix(&self) -> Vec<Vec<u64>> {
        let mut m = vec![vec![0; self.n_runs]; self.n_runs];
        for (&(s, d), &w) in &self.edges {
            m[s.index()][d.index()] += w;
        }
        m
    }
}

/// Counts every consecutive run access made while LF-stepping from each BWT
/// position once: the source run, then `ptr`, then each hop.
///
/// Pairs whose source run holds the terminator are skipped unless
/// `include_terminator_edges` is set.
pub fn trace_inversion(table: &MoveTable, include_terminator_edges: bool) -> Result<TransitionGraph> {
    let terminator = table.terminator();
    let mut graph = TransitionGraph::new(table.n_runs());
    for (i, row) in table.rows().iter().enumerate() {
        let run = RunId::from_index(i);
        for offset in 1..=row.len {
            let mut prev = run;
            table.lf_walk(RunPosition::new(run, offset), |next| {
                if include_terminator_edges || Some(table.row(prev).chr) != terminator {
                    graph.add(prev, next, 1);
                }
                prev = next;
            })?;
        }
    }
    Ok(graph)
}

/// A bijection from run labels to memory positions `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Layout {
    order: Vec<RunId>,
    // 1-based position, by label index
    position: Vec<usize>,
}

impl Layout {
    pub fn identity(n: usize) -> Self {
        Self {
            order: (0..n).map(RunId::from_index).collect(),
            position: (1..=n).collect(),
        }
    }

    /// Layout from labels listed in memory order.
    pub fn from_order(order: Vec<RunId>) -> Result<Self> {
        let n = order.len();
        let mut position = vec![0usize; n];
        for (p, &run) in order.iter().enumerate() {
            if run.0 == 0 || run.index() >= n {
                return Err(Error::InvalidLayout(format!("run {run} outside 1..={n}")));
            }
            if position[run.index()] != 0 {
                return Err(Error::InvalidLayout(format!("run {run} listed twice")));
            }
            position[run.index()] = p + 1;
        }
        Ok(Self { order, position })
    }

    pub fn from_labels(labels: &[u32]) -> Result<Self> {
        Self::from_order(labels.iter().map(|&l| RunId(l)).collect())
    }

    /// Parses a layout file: one run label per line in memory order. Blank
    /// lines and `#` comments are ignored.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut labels = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let label = line
                .parse::<u32>()
                .map_err(|e| Error::InvalidLayout(format!("line {}: {e}", i + 1)))?;
            labels.push(label);
        }
        Self::from_labels(&labels)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for run in &self.order {
            writeln!(out, "{run}").unwrap();
        }
        out
    }

    /// Labels in memory order.
    pub fn order(&self) -> &[RunId] {
        &self.order
    }

    pub fn labels(&self) -> Vec<u32> {
        self.order.iter().map(|r| r.0).collect()
    }

    /// 1-based memory position of `run`.
    #[inline]
    pub fn position(&self, run: RunId) -> usize {
        self.position[run.index()]
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self::from_order(self.position.iter().map(|&p| RunId(p as u32)).collect())
            .expect("inverse of a bijection")
    }

    /// Identity with runs `a` and `b` exchanged.
    pub fn swap(n: usize, a: RunId, b: RunId) -> Result<Self> {
        let mut order: Vec<RunId> = (0..n).map(RunId::from_index).collect();
        if a.0 == 0 || b.0 == 0 || a.index() >= n || b.index() >= n {
            return Err(Error::InvalidLayout(format!("cannot swap {a} and {b} among {n} runs")));
        }
        order.swap(a.index(), b.index());
        Self::from_order(order)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalityReport {
    pub total: u64,
    /// Weight of transitions landing in the next run in memory.
    pub adjacent: u64,
    pub fraction: f64,
    /// Signed memory distance `pos(dst) - pos(src)` to transition weight.
    pub distance_histogram: BTreeMap<i64, u64>,
}

pub fn locality_report(graph: &TransitionGraph, layout: &Layout) -> Result<LocalityReport> {
    if layout.len() != graph.n_runs() {
        return Err(Error::LayoutSize { layout: layout.len(), expected: graph.n_runs() });
    }
    let mut histogram = BTreeMap::new();
    for (&(s, d), &w) in graph.edges() {
        let dist = layout.position(d) as i64 - layout.position(s) as i64;
        *histogram.entry(dist).or_insert(0) += w;
    }
    let adjacent = histogram.get(&1).copied().unwrap_or(0);
    let total = graph.total_weight();
    let fraction = if total == 0 { 0.0 } else { adjacent as f64 / total as f64 };
    Ok(LocalityReport { total, adjacent, fraction, distance_histogram: histogram })
}

/// Header line plus `src<TAB>dst<TAB>weight` for every edge, sorted.
pub fn export_graph_tsv(graph: &TransitionGraph) -> String {
    let mut out = String::from("src\tdst\tweight\n");
    for (&(s, d), &w) in graph.edges() {
        writeln!(out, "{s}\t{d}\t{w}").unwrap();
    }
    out
}

/// Graphviz digraph; nodes are listed in memory order and labelled with
/// their position, edges with their weight.
pub fn export_dot(graph: &TransitionGraph, layout: &Layout) -> Result<String> {
    if layout.len() != graph.n_runs() {
        return Err(Error::LayoutSize { layout: layout.len(), expected: graph.n_runs() });
    }
    let mut out = String::from("digraph runs {\n  rankdir=LR;\n  node [shape=box];\n");
    for (p, run) in layout.order().iter().enumerate() {
        writeln!(out, "  r{run} [label=\"run {run}\\npos {}\"];", p + 1).unwrap();
    }
    for (&(s, d), &w) in graph.edges() {
        writeln!(out, "  r{s} -> r{d} [label=\"{w}\"];").unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}
