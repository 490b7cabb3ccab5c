//! The move structure: one row per BWT run holding the run's character and
//! length, the run and offset of the LF image of the run head, and a link to
//! the run that follows it in BWT order.
//!
//! Rows are stored in memory order and a run's label is its 1-based memory
//! position. BWT order is recovered by following `succ` from `head`, so a
//! table stays invertible however its rows are laid out.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::bwt::{symbol_key, MultiBWT};
use crate::corpus::StringCollection;
use crate::error::{Error, Result};

/// 1-based run label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RunId(pub u32);

impl RunId {
    #[inline]
    pub fn from_index(index: usize) -> Self {
        RunId(index as u32 + 1)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for RunId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MoveRow {
    pub chr: u8,
    pub len: usize,
    /// Run containing the LF image of this run's head.
    pub ptr: RunId,
    /// 1-based offset of that image inside `ptr`.
    pub off: usize,
    /// Next run in BWT order (cyclic).
    pub succ: RunId,
}

/// A position inside the BWT expressed as run and 1-based offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RunPosition {
    pub run: RunId,
    pub offset: usize,
}

impl RunPosition {
    pub fn new(run: RunId, offset: usize) -> Self {
        Self { run, offset }
    }
}

/// One visited position of a full inversion walk.
#[derive(Debug, Clone, Copy)]
pub struct WalkStep<'a> {
    pub position: RunPosition,
    pub chr: u8,
    /// Runs accessed by the LF step out of `position`: `ptr` first, then
    /// every hop destination.
    pub hops: &'a [RunId],
    /// Set on the first position of every LF cycle.
    pub cycle_start: bool,
}

/// A consistency problem found by [`MoveTable::consistency_issues`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    pub run: Option<RunId>,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.run {
            Some(run) => write!(f, "run {run}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MoveTable {
    rows: Vec<MoveRow>,
    head: RunId,
    total: usize,
    // first BWT row of each run, by label index
    starts: Vec<usize>,
    // labels in BWT order, with their starts
    bwt_order: Vec<RunId>,
    order_starts: Vec<usize>,
}

impl PartialEq for MoveTable {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.head == other.head && self.total == other.total
    }
}

impl Eq for MoveTable {}

impl MoveTable {
    /// Checks the structural invariants: labels in range, `succ` forming a
    /// single cycle through `head`, lengths summing to `total` and every
    /// `off` fitting inside its `ptr` run.
    pub fn new(rows: Vec<MoveRow>, head: RunId, total: usize) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::Structure("table has no runs".into()));
        }
        let in_range = |id: RunId| id.0 >= 1 && id.index() < r;
        if !in_range(head) {
            return Err(Error::Structure(format!("head {head} is not a run")));
        }
        for (i, row) in rows.iter().enumerate() {
            let label = RunId::from_index(i);
            if row.len == 0 {
                return Err(Error::Structure(format!("run {label} has length 0")));
            }
            if !in_range(row.ptr) {
                return Err(Error::Structure(format!("run {label}: ptr {} is not a run", row.ptr)));
            }
            if !in_range(row.succ) {
                return Err(Error::Structure(format!("run {label}: succ {} is not a run", row.succ)));
            }
            let target_len = rows[row.ptr.index()].len;
            if row.off == 0 || row.off > target_len {
                return Err(Error::Structure(format!(
                    "run {label}: off {} outside 1..={target_len} of run {}",
                    row.off, row.ptr
                )));
            }
        }

        let mut starts = vec![0usize; r];
        let mut bwt_order = Vec::with_capacity(r);
        let mut order_starts = Vec::with_capacity(r);
        let mut seen = vec![false; r];
        let mut cur = head;
        let mut next_row = 1usize;
        for _ in 0..r {
            if seen[cur.index()] {
                return Err(Error::Structure(format!(
                    "succ chain from head {head} returns to run {cur} before visiting every run"
                )));
            }
            seen[cur.index()] = true;
            starts[cur.index()] = next_row;
            bwt_order.push(cur);
            order_starts.push(next_row);
            next_row += rows[cur.index()].len;
            cur = rows[cur.index()].succ;
        }
        if cur != head {
            return Err(Error::Structure(format!(
                "succ chain does not close: last run links to {cur}, not head {head}"
            )));
        }
        if next_row - 1 != total {
            return Err(Error::Structure(format!(
                "run lengths sum to {} but the table declares {total} rows",
                next_row - 1
            )));
        }
        Ok(Self { rows, head, total, starts, bwt_order, order_starts })
    }

    pub fn rows(&self) -> &[MoveRow] {
        &self.rows
    }

    pub fn row(&self, run: RunId) -> &MoveRow {
        &self.rows[run.index()]
    }

    pub fn n_runs(&self) -> usize {
        self.rows.len()
    }

    pub fn head(&self) -> RunId {
        self.head
    }

    /// Number of BWT rows, N.
    pub fn total(&self) -> usize {
        self.total
    }

    /// Run labels in BWT order.
    pub fn bwt_order(&self) -> &[RunId] {
        &self.bwt_order
    }

    /// First BWT row covered by `run`.
    pub fn start_of(&self, run: RunId) -> usize {
        self.starts[run.index()]
    }

    fn check(&self, pos: RunPosition) -> Result<()> {
        let ok = pos.run.0 >= 1
            && pos.run.index() < self.rows.len()
            && pos.offset >= 1
            && pos.offset <= self.rows[pos.run.index()].len;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidPosition { run: pos.run.0, offset: pos.offset })
        }
    }

    pub fn row_of(&self, pos: RunPosition) -> Result<usize> {
        self.check(pos)?;
        Ok(self.starts[pos.run.index()] + pos.offset - 1)
    }

    pub fn pos_of(&self, row: usize) -> Result<RunPosition> {
        if row == 0 || row > self.total {
            return Err(Error::RowOutOfRange { row, total: self.total });
        }
        let i = self.order_starts.partition_point(|&s| s <= row) - 1;
        Ok(RunPosition::new(self.bwt_order[i], row - self.order_starts[i] + 1))
    }

    /// LF step reporting every run accessed to `visit`: the `ptr` run first,
    /// then each run reached by hopping forward along `succ`.
    #[inline]
    pub fn lf_walk(&self, pos: RunPosition, mut visit: impl FnMut(RunId)) -> Result<RunPosition> {
        self.check(pos)?;
        let src = &self.rows[pos.run.index()];
        let mut target = src.ptr;
        let mut offset = src.off + pos.offset - 1;
        visit(target);
        loop {
            let row = &self.rows[target.index()];
            if offset <= row.len {
                break;
            }
            if row.succ == self.head {
                return Err(Error::Structure(format!(
                    "LF step from run {} offset {} runs past the last run",
                    pos.run, pos.offset
                )));
            }
            offset -= row.len;
            target = row.succ;
            visit(target);
        }
        Ok(RunPosition::new(target, offset))
    }

    /// LF step returning the destination and the runs accessed on the way.
    pub fn lf_step(&self, pos: RunPosition) -> Result<(RunPosition, Vec<RunId>)> {
        let mut trace = Vec::with_capacity(2);
        let dest = self.lf_walk(pos, |r| trace.push(r))?;
        Ok((dest, trace))
    }

    /// LF in row coordinates.
    pub fn lf_row(&self, row: usize) -> Result<usize> {
        let pos = self.pos_of(row)?;
        self.row_of(self.lf_walk(pos, |_| {})?)
    }

    /// Concatenation of `chr x len` along the `succ` chain.
    pub fn decode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.total);
        for &run in &self.bwt_order {
            let row = &self.rows[run.index()];
            out.extend(std::iter::repeat_n(row.chr, row.len));
        }
        out
    }

    /// The terminator is the character whose occurrence LF maps to row 1.
    pub fn terminator(&self) -> Option<u8> {
        self.rows
            .iter()
            .find(|row| row.ptr == self.head && row.off == 1)
            .map(|row| row.chr)
    }

    /// Number of run heads whose LF image lies in each run, by label index.
    pub fn incoming_head_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.rows.len()];
        for row in &self.rows {
            counts[row.ptr.index()] += 1;
        }
        counts
    }

    /// Hop counts over every position: (total, maximum).
    pub fn hop_stats(&self) -> Result<(usize, usize)> {
        let mut total = 0;
        let mut max = 0;
        for (i, row) in self.rows.iter().enumerate() {
            for offset in 1..=row.len {
                let mut accessed = 0usize;
                self.lf_walk(RunPosition::new(RunId::from_index(i), offset), |_| accessed += 1)?;
                total += accessed - 1;
                max = max.max(accessed - 1);
            }
        }
        Ok((total, max))
    }

    /// Visits every BWT position once, following LF cycles. The first cycle
    /// starts at `(head, 1)`; each later one starts at the smallest BWT row
    /// not yet visited.
    pub fn walk_inversion(&self, mut on_step: impl FnMut(WalkStep<'_>)) -> Result<()> {
        let n = self.total;
        let mut visited = vec![false; n];
        let mut hops: Vec<RunId> = Vec::with_capacity(4);
        let mut next_unvisited = 0usize;
        let mut count = 0usize;
        while next_unvisited < n {
            if visited[next_unvisited] {
                next_unvisited += 1;
                continue;
            }
            let start_row = next_unvisited + 1;
            let mut pos = self.pos_of(start_row)?;
            let mut cycle_start = true;
            loop {
                let row = self.starts[pos.run.index()] + pos.offset - 1;
                if visited[row - 1] {
                    if row == start_row {
                        break;
                    }
                    return Err(Error::Structure(format!(
                        "LF revisits row {row} before closing the cycle started at row {start_row}"
                    )));
                }
                visited[row - 1] = true;
                count += 1;
                hops.clear();
                let next = self.lf_walk(pos, |r| hops.push(r))?;
                on_step(WalkStep {
                    position: pos,
                    chr: self.rows[pos.run.index()].chr,
                    hops: &hops,
                    cycle_start,
                });
                cycle_start = false;
                pos = next;
            }
        }
        debug_assert_eq!(count, n);
        Ok(())
    }

    /// Checks that every run's `ptr`/`off` equals the LF image of its head as
    /// implied by the characters and lengths alone, under `terminator`.
    pub fn consistency_issues(&self, terminator: u8) -> Vec<Issue> {
        let mut issues = Vec::new();
        let mut counts = [0usize; 256];
        for row in &self.rows {
            counts[row.chr as usize] += row.len;
        }
        let mut next = [0usize; 256];
        let mut acc = 0;
        let mut symbols: Vec<u8> = (0..=255u8).filter(|&c| counts[c as usize] > 0).collect();
        symbols.sort_by_key(|&c| symbol_key(c, terminator));
        for c in symbols {
            next[c as usize] = acc;
            acc += counts[c as usize];
        }
        if counts[terminator as usize] == 0 {
            issues.push(Issue {
                run: None,
                message: format!("no run carries the terminator 0x{terminator:02x}"),
            });
        }
        for &run in &self.bwt_order {
            let row = &self.rows[run.index()];
            let image = next[row.chr as usize] + 1;
            next[row.chr as usize] += row.len;
            let expected = self.pos_of(image).expect("image row in range");
            if (row.ptr, row.off) != (expected.run, expected.offset) {
                issues.push(Issue {
                    run: Some(run),
                    message: format!(
                        "ptr/off is {}/{} but the LF image of its head is run {} offset {}",
                        row.ptr, row.off, expected.run, expected.offset
                    ),
                });
            }
        }
        issues
    }
}

/// Table over runs given in BWT order, with `lf_of` giving LF of any row.
fn table_from_runs(runs: &[(u8, usize)], lf_of: impl Fn(usize) -> usize) -> MoveTable {
    let mut starts = Vec::with_capacity(runs.len());
    let mut acc = 1;
    for &(_, len) in runs {
        starts.push(acc);
        acc += len;
    }
    let total = acc - 1;
    let r = runs.len();
    let rows = runs
        .iter()
        .zip(&starts)
        .enumerate()
        .map(|(i, (&(chr, len), &start))| {
            let image = lf_of(start);
            let j = starts.partition_point(|&s| s <= image) - 1;
            MoveRow {
                chr,
                len,
                ptr: RunId::from_index(j),
                off: image - starts[j] + 1,
                succ: RunId::from_index((i + 1) % r),
            }
        })
        .collect();
    MoveTable::new(rows, RunId(1), total).expect("tables built from a BWT are consistent")
}

/// One row per maximal run, in BWT order.
pub fn build_move_table(bwt: &MultiBWT) -> MoveTable {
    let lf = bwt.lf_all();
    table_from_runs(&bwt.run_length_encode(), |row| lf[row - 1])
}

/// Recovers the collection by walking every LF cycle. Strings come out
/// reversed and are flipped back before they are returned.
pub fn invert(table: &MoveTable) -> Result<StringCollection> {
    let terminator = table
        .terminator()
        .ok_or_else(|| Error::Structure("no run maps its head to row 1".into()))?;
    let mut cycles: Vec<Vec<u8>> = Vec::new();
    table.walk_inversion(|step| {
        if step.cycle_start {
            cycles.push(Vec::new());
        }
        cycles.last_mut().expect("cycle started").push(step.chr);
    })?;

    let mut strings = Vec::new();
    for cycle in cycles {
        let last = cycle
            .iter()
            .rposition(|&c| c == terminator)
            .ok_or_else(|| Error::Structure("LF cycle without a terminator".into()))?;
        let rotated = cycle[last + 1..].iter().chain(&cycle[..=last]);
        let mut current = Vec::new();
        for &c in rotated {
            if c == terminator {
                if current.is_empty() {
                    return Err(Error::Structure("two terminators in a row".into()));
                }
                current.reverse();
                strings.push(std::mem::take(&mut current));
            } else {
                current.push(c);
            }
        }
    }
    StringCollection::new(strings, terminator)
}

/// Splits runs until no run receives more than `d` run-head LF images.
///
/// The run with the smallest BWT start among the violators is split at the
/// `ceil(count / 2)`-th incoming image, so the left piece keeps the rows
/// before it. The new piece's head adds one image elsewhere, which may
/// create a new violation. The result is laid out in BWT order and decodes
/// to the same BWT; neighbouring runs may share a character.
pub fn split_runs(table: &MoveTable, d: usize) -> Result<MoveTable> {
    if d < 2 {
        return Err(Error::SplitThreshold(d));
    }
    let n = table.total();
    let mut lf = Vec::with_capacity(n);
    for row in 1..=n {
        lf.push(table.lf_row(row)?);
    }
    let bwt = table.decode();

    let mut starts: BTreeSet<usize> = table.bwt_order().iter().map(|&r| table.start_of(r)).collect();
    let containing = |starts: &BTreeSet<usize>, row: usize| -> usize {
        *starts.range(..=row).next_back().expect("row 1 is always a start")
    };
    // run start -> LF images of run heads that land inside it
    let mut incoming: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for &s in &starts {
        let image = lf[s - 1];
        incoming.entry(containing(&starts, image)).or_default().insert(image);
    }
    let mut violators: BTreeSet<usize> =
        incoming.iter().filter(|(_, v)| v.len() > d).map(|(&s, _)| s).collect();

    while let Some(s) = violators.pop_first() {
        let images = incoming.remove(&s).unwrap_or_default();
        if images.len() <= d {
            if !images.is_empty() {
                incoming.insert(s, images);
            }
            continue;
        }
        let k = images.len().div_ceil(2);
        let pivot = *images.iter().nth(k - 1).expect("k <= count");
        debug_assert!(pivot > s);
        let (left, right): (BTreeSet<usize>, BTreeSet<usize>) =
            images.into_iter().partition(|&img| img < pivot);
        starts.insert(pivot);
        if left.len() > d {
            violators.insert(s);
        }
        if right.len() > d {
            violators.insert(pivot);
        }
        incoming.insert(s, left);
        incoming.insert(pivot, right);

        let image = lf[pivot - 1];
        let host = containing(&starts, image);
        let set = incoming.entry(host).or_default();
        set.insert(image);
        if set.len() > d {
            violators.insert(host);
        }
    }

    let bounds: Vec<usize> = starts.iter().copied().chain(std::iter::once(n + 1)).collect();
    let runs: Vec<(u8, usize)> = bounds.windows(2).map(|w| (bwt[w[0] - 1], w[1] - w[0])).collect();
    Ok(table_from_runs(&runs, |row| lf[row - 1]))
}
