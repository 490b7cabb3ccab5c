//! Timed LF-walk inversions over a contiguous record array.
//!
//! Each layout is materialized into fixed-width records stored in memory
//! order, so the layout decides which records sit next to each other.

use std::hint::black_box;
use std::time::{Duration, Instant};

use miov_core::reorder::apply_layout;
use miov_core::trace::locality_report;
use miov_core::{Layout, MoveTable, TransitionGraph};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Record {
    pub len: u32,
    pub ptr: u32,
    pub off: u32,
    pub succ: u32,
    /// First BWT row of the run, 0-based.
    pub start: u32,
    pub chr: u8,
    _pad: [u8; 3],
}

/// A table flattened into 0-based fixed-width records.
#[derive(Debug, Clone)]
pub struct Materialized {
    records: Vec<Record>,
    head: u32,
    total: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct WalkCounts {
    pub steps: u64,
    pub hops: u64,
    pub checksum: u64,
}

impl Materialized {
    pub fn new(table: &MoveTable) -> Self {
        let narrow = |v: usize| u32::try_from(v).expect("table too large for 32-bit records");
        let records = table
            .rows()
            .iter()
            .enumerate()
            .map(|(i, row)| Record {
                len: narrow(row.len),
                ptr: row.ptr.get() - 1,
                off: narrow(row.off - 1),
                succ: row.succ.get() - 1,
                start: narrow(table.start_of(miov_core::RunId::from_index(i)) - 1),
                chr: row.chr,
                _pad: [0; 3],
            })
            .collect();
        Self { records, head: table.head().get() - 1, total: table.total() }
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    /// Full inversion: every LF cycle, smallest unvisited row first.
    pub fn invert_walk(&self) -> WalkCounts {
        let recs = &self.records[..];
        let n = self.total;
        let mut visited = vec![0u64; n.div_ceil(64)];
        let mut counts = WalkCounts::default();
        let mut next_unvisited = 0usize;
        // run holding `next_unvisited`, advanced along succ as it grows
        let mut cursor = self.head as usize;
        while next_unvisited < n {
            if visited[next_unvisited / 64] >> (next_unvisited % 64) & 1 == 1 {
                next_unvisited += 1;
                continue;
            }
            while (recs[cursor].start + recs[cursor].len) as usize <= next_unvisited {
                cursor = recs[cursor].succ as usize;
            }
            let mut run = cursor;
            let mut offset = (next_unvisited - recs[run].start as usize) as u32;
            loop {
                let rec = &recs[run];
                let row = rec.start as usize + offset as usize;
                let (word, bit) = (row / 64, row % 64);
                if visited[word] >> bit & 1 == 1 {
                    break;
                }
                visited[word] |= 1 << bit;
                counts.steps += 1;
                counts.checksum = counts.checksum.wrapping_mul(31).wrapping_add(rec.chr as u64);
                let mut target = rec.ptr as usize;
                let mut t = rec.off + offset;
                while t >= recs[target].len {
                    t -= recs[target].len;
                    target = recs[target].succ as usize;
                    counts.hops += 1;
                }
                run = target;
                offset = t;
            }
        }
        counts
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub layout: String,
    pub steps: u64,
    pub hops: u64,
    /// Median wall time of one full inversion.
    pub wall: Duration,
    pub ns_per_step: f64,
    pub locality: f64,
}

impl BenchReport {
    pub const TSV_HEADER: &'static str = "layout\tsteps\thops\twall_ns\tns_per_step\tlocality";

    pub fn tsv_row(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{:.3}\t{:.6}",
            self.layout,
            self.steps,
            self.hops,
            self.wall.as_nanos(),
            self.ns_per_step,
            self.locality
        )
    }
}

/// Times `reps` inversions of `table` laid out by `layout` and reports the
/// median. `graph` is the default trace of `table`, used for the locality
/// column.
pub fn bench_layout(
    table: &MoveTable,
    graph: &TransitionGraph,
    name: &str,
    layout: &Layout,
    reps: usize,
) -> miov_core::Result<BenchReport> {
    assert!(reps > 0, "reps must be positive");
    let locality = locality_report(graph, layout)?.fraction;
    let arranged = Materialized::new(&apply_layout(table, layout)?);
    let mut times = Vec::with_capacity(reps);
    let mut counts = WalkCounts::default();
    for _ in 0..reps {
        let start = Instant::now();
        counts = black_box(arranged.invert_walk());
        times.push(start.elapsed());
    }
    times.sort();
    let wall = times[times.len() / 2];
    Ok(BenchReport {
        layout: name.to_string(),
        steps: counts.steps,
        hops: counts.hops,
        wall,
        ns_per_step: wall.as_nanos() as f64 / counts.steps.max(1) as f64,
        locality,
    })
}
