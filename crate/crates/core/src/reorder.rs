//! Memory layouts for the runs of a move table.
//!
//! A layout is scored by the weight of transitions `(u, v)` with `v` stored
//! right after `u`. The exact strategy is a Held-Karp style subset DP for the
//! maximum-weight Hamiltonian path, which has the same optimum as the binary
//! program written by [`export_bilp`]: that program selects vertex-disjoint
//! paths consistent with a total order, and concatenating them loses
//! nothing.

use std::fmt::{self, Write};
use std::str::FromStr;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::movestruct::{MoveRow, MoveTable, RunId};
use crate::trace::{trace_inversion, Layout, TransitionGraph};

pub const DEFAULT_MAX_RUNS: usize = 20;
pub const BRUTE_FORCE_MAX_RUNS: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Identity,
    FirstVisit,
    Greedy,
    Exact,
}

impl Strategy {
    pub const ALL: [Strategy; 4] =
        [Strategy::Identity, Strategy::FirstVisit, Strategy::Greedy, Strategy::Exact];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Identity => "identity",
            Strategy::FirstVisit => "first-visit",
            Strategy::Greedy => "greedy",
            Strategy::Exact => "exact",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| format!("unknown strategy `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReorderResult {
    pub layout: Layout,
    /// Adjacency weight of `layout`.
    pub objective: u64,
    pub strategy: String,
}

/// Sum of `w(u, v)` over edges with `v` stored immediately after `u`.
pub fn evaluate_layout(graph: &TransitionGraph, layout: &Layout) -> Result<u64> {
    if layout.len() != graph.n_runs() {
        return Err(Error::LayoutSize { layout: layout.len(), expected: graph.n_runs() });
    }
    Ok(layout
        .order()
        .windows(2)
        .map(|pair| graph.weight(pair[0], pair[1]))
        .sum())
}

fn result(graph: &TransitionGraph, layout: Layout, strategy: &str) -> Result<ReorderResult> {
    let objective = evaluate_layout(graph, &layout)?;
    Ok(ReorderResult { layout, objective, strategy: strategy.to_string() })
}

/// Off-diagonal weights; self transitions never score.
fn pair_weights(graph: &TransitionGraph) -> Vec<Vec<u64>> {
    let mut m = graph.weight_matrix();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 0;
    }
    m
}

/// Drops bit `v` from `mask`, shifting the higher bits down.
#[inline]
fn squeeze(mask: usize, v: usize) -> usize {
    (mask & ((1 << v) - 1)) | ((mask >> (v + 1)) << v)
}

/// Exact maximum-adjacency layout. Among optimal layouts the one whose label
/// sequence is lexicographically smallest is returned.
pub fn optimal_layout(graph: &TransitionGraph, max_runs: usize) -> Result<ReorderResult> {
    let n = graph.n_runs();
    if n > max_runs {
        return Err(Error::TooManyRuns { runs: n, limit: max_runs });
    }
    if n <= 1 {
        return result(graph, Layout::identity(n), "exact");
    }
    let w = pair_weights(graph);
    let half = 1usize << (n - 1);
    // best[squeeze(rest, v) * n + v]: heaviest path starting at v that covers
    // exactly {v} and `rest`
    let mut best = vec![0u64; half * n];
    for rest in 1usize..(1 << n) {
        let mut bits = rest;
        let mut members = [0usize; 64];
        let mut count = 0;
        while bits != 0 {
            members[count] = bits.trailing_zeros() as usize;
            count += 1;
            bits &= bits - 1;
        }
        for v in (0..n).filter(|&v| rest & (1 << v) == 0) {
            let wv = &w[v];
            let mut top = 0u64;
            for &u in &members[..count] {
                let sub = rest & !(1 << u);
                let cand = wv[u] + best[squeeze(sub, u) * n + u];
                if cand > top {
                    top = cand;
                }
            }
            best[squeeze(rest, v) * n + v] = top;
        }
    }

    let full = (1usize << n) - 1;
    let value = |rest: usize, v: usize| best[squeeze(rest, v) * n + v];
    let (mut cur, _) = (0..n)
        .map(|v| (v, value(full & !(1 << v), v)))
        .fold((0, 0), |acc, (v, val)| if val > acc.1 { (v, val) } else { acc });
    let mut order = vec![RunId::from_index(cur)];
    let mut rest = full & !(1 << cur);
    while rest != 0 {
        let target = value(rest, cur);
        let next = (0..n)
            .filter(|&u| rest & (1 << u) != 0)
            .find(|&u| w[cur][u] + value(rest & !(1 << u), u) == target)
            .expect("DP value is attained by some successor");
        order.push(RunId::from_index(next));
        rest &= !(1 << next);
        cur = next;
    }
    result(graph, Layout::from_order(order)?, "exact")
}

/// Exhaustive search over all permutations, with the same tie-break as
/// [`optimal_layout`].
pub fn brute_force_layout(graph: &TransitionGraph) -> Result<ReorderResult> {
    let n = graph.n_runs();
    if n > BRUTE_FORCE_MAX_RUNS {
        return Err(Error::TooManyRuns { runs: n, limit: BRUTE_FORCE_MAX_RUNS });
    }
    let w = pair_weights(graph);
    let mut best: Option<(u64, Vec<usize>)> = None;
    // permutations of a sorted input come out in lexicographic order
    for perm in (0..n).permutations(n) {
        let score: u64 = perm.windows(2).map(|p| w[p[0]][p[1]]).sum();
        if best.as_ref().is_none_or(|(b, _)| score > *b) {
            best = Some((score, perm));
        }
    }
    let order = best.map(|(_, p)| p).unwrap_or_default();
    let layout = Layout::from_order(order.into_iter().map(RunId::from_index).collect())?;
    result(graph, layout, "brute-force")
}

/// Runs in the order the inversion walk first accesses them. With
/// `include_hops` the runs passed through while hopping count as accesses;
/// without it only the runs the walk lands in do.
pub fn first_visit_order(table: &MoveTable, include_hops: bool) -> Result<Layout> {
    let n = table.n_runs();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut touch = |run: RunId| {
        if !seen[run.index()] {
            seen[run.index()] = true;
            order.push(run);
        }
    };
    table.walk_inversion(|step| {
        touch(step.position.run);
        if include_hops {
            step.hops.iter().for_each(|&r| touch(r));
        }
    })?;
    order.extend((0..n).filter(|&i| !seen[i]).map(RunId::from_index));
    Layout::from_order(order)
}

/// First-visit layout scored against the default trace of `table`.
pub fn first_visit_layout(table: &MoveTable) -> Result<ReorderResult> {
    let graph = trace_inversion(table, false)?;
    result(&graph, first_visit_order(table, true)?, "first-visit")
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut cur = x;
        while self.0[cur] != root {
            let next = self.0[cur];
            self.0[cur] = root;
            cur = next;
        }
        root
    }
}

/// Greedy path cover: take edges by decreasing weight while they extend
/// paths without closing a cycle, then concatenate the paths by their
/// smallest label.
pub fn greedy_layout(graph: &TransitionGraph) -> Result<ReorderResult> {
    let n = graph.n_runs();
    let mut edges: Vec<(RunId, RunId, u64)> = graph
        .edges()
        .iter()
        .filter(|((s, d), _)| s != d)
        .map(|(&(s, d), &w)| (s, d, w))
        .collect();
    edges.sort_by(|a, b| b.2.cmp(&a.2).then((a.0, a.1).cmp(&(b.0, b.1))));

    let mut next: Vec<Option<usize>> = vec![None; n];
    let mut has_pred = vec![false; n];
    let mut dsu = Dsu((0..n).collect());
    for (s, d, _) in edges {
        let (s, d) = (s.index(), d.index());
        if next[s].is_some() || has_pred[d] {
            continue;
        }
        let (rs, rd) = (dsu.find(s), dsu.find(d));
        if rs == rd {
            continue;
        }
        dsu.0[rs] = rd;
        next[s] = Some(d);
        has_pred[d] = true;
    }

    let mut paths: Vec<(usize, Vec<usize>)> = (0..n)
        .filter(|&v| !has_pred[v])
        .map(|start| {
            let mut path = vec![start];
            while let Some(v) = next[*path.last().unwrap()] {
                path.push(v);
            }
            (*path.iter().min().unwrap(), path)
        })
        .collect();
    paths.sort();
    let order = paths
        .into_iter()
        .flat_map(|(_, p)| p)
        .map(RunId::from_index)
        .collect();
    result(graph, Layout::from_order(order)?, "greedy")
}

/// Stores the rows in the memory order given by `layout` and renames every
/// run to its new position; `ptr`, `succ` and `head` follow the renaming.
pub fn apply_layout(table: &MoveTable, layout: &Layout) -> Result<MoveTable> {
    if layout.len() != table.n_runs() {
        return Err(Error::LayoutSize { layout: layout.len(), expected: table.n_runs() });
    }
    let rename = |run: RunId| RunId(layout.position(run) as u32);
    let rows = layout
        .order()
        .iter()
        .map(|&old| {
            let row = table.row(old);
            MoveRow { ptr: rename(row.ptr), succ: rename(row.succ), ..*row }
        })
        .collect();
    MoveTable::new(rows, rename(table.head()), table.total())
}

/// Layout for any strategy over the default trace `graph` of `table`.
pub fn reorder(
    table: &MoveTable,
    graph: &TransitionGraph,
    strategy: Strategy,
    max_runs: usize,
) -> Result<ReorderResult> {
    match strategy {
        Strategy::Identity => result(graph, Layout::identity(table.n_runs()), "identity"),
        Strategy::FirstVisit => result(graph, first_visit_order(table, true)?, "first-visit"),
        Strategy::Greedy => greedy_layout(graph),
        Strategy::Exact => optimal_layout(graph, max_runs),
    }
}

const TERMS_PER_LINE: usize = 10;

fn write_terms(out: &mut String, terms: &[String]) {
    for (i, chunk) in terms.chunks(TERMS_PER_LINE).enumerate() {
        if i > 0 {
            out.push_str("\n   + ");
        }
        out.push_str(&chunk.join(" + "));
    }
}

fn x(i: usize, j: usize) -> String {
    format!("x_{i}_{j}")
}

fn y(i: usize, j: usize) -> String {
    format!("y_{i}_{j}")
}

/// The layout problem as a binary program in LP file format.
///
/// `x_i_j` marks run `i` stored immediately before run `j`, `y_i_j` marks
/// `i` stored anywhere before `j`. Transitivity constraints are written once
/// per cyclic orientation of each triple, i.e. with the smallest run first.
pub fn export_bilp(graph: &TransitionGraph) -> Result<String> {
    let n = graph.n_runs();
    if n < 2 {
        return Err(Error::TooFewRuns(n));
    }
    let mut out = String::new();
    writeln!(out, "\\ maximum-adjacency layout of {n} runs").unwrap();
    out.push_str("Maximize\n obj: ");
    let terms: Vec<String> = graph
        .edges()
        .iter()
        .filter(|((s, d), _)| s != d)
        .map(|(&(s, d), &w)| {
            if w == 1 {
                x(s.0 as usize, d.0 as usize)
            } else {
                format!("{w} {}", x(s.0 as usize, d.0 as usize))
            }
        })
        .collect();
    if terms.is_empty() {
        out.push_str(&format!("0 {}", x(1, 2)));
    } else {
        write_terms(&mut out, &terms);
    }

    out.push_str("\nSubject To\n");
    let runs = 1..=n;
    for j in runs.clone() {
        let terms: Vec<String> = runs.clone().filter(|&i| i != j).map(|i| x(i, j)).collect();
        write!(out, " in_{j}: ").unwrap();
        write_terms(&mut out, &terms);
        out.push_str(" <= 1\n");
    }
    for i in runs.clone() {
        let terms: Vec<String> = runs.clone().filter(|&j| j != i).map(|j| x(i, j)).collect();
        write!(out, " out_{i}: ").unwrap();
        write_terms(&mut out, &terms);
        out.push_str(" <= 1\n");
    }
    for i in runs.clone() {
        for j in i + 1..=n {
            writeln!(out, " ord_{i}_{j}: {} + {} = 1", y(i, j), y(j, i)).unwrap();
        }
    }
    for i in runs.clone() {
        for j in i + 1..=n {
            for k in i + 1..=n {
                if k != j {
                    writeln!(
                        out,
                        " tri_{i}_{j}_{k}: {} + {} + {} <= 2",
                        y(i, j),
                        y(j, k),
                        y(k, i)
                    )
                    .unwrap();
                }
            }
        }
    }
    for i in runs.clone() {
        for j in runs.clone().filter(|&j| j != i) {
            writeln!(out, " link_{i}_{j}: {} + {} <= 1", x(i, j), y(j, i)).unwrap();
        }
    }

    out.push_str("Binary\n");
    let vars: Vec<String> = runs
        .clone()
        .flat_map(|i| runs.clone().filter(move |&j| j != i).map(move |j| (i, j)))
        .flat_map(|(i, j)| [x(i, j), y(i, j)])
        .collect();
    for chunk in vars.chunks(TERMS_PER_LINE) {
        writeln!(out, " {}", chunk.join(" ")).unwrap();
    }
    out.push_str("End\n");
    Ok(out)
}
