//! Move structures over multi-string run-length BWTs, LF-walk tracing, and
//! run reorderings that keep consecutive run accesses next to each other in
//! memory.

pub mod bwt;
pub mod corpus;
pub mod error;
pub mod movestruct;
pub mod reorder;
pub mod trace;

pub use bwt::{build_multibwt, MultiBWT};
pub use corpus::{load_fasta, load_plain, StringCollection, DEFAULT_TERMINATOR};
pub use error::{Error, Result};
pub use movestruct::{build_move_table, invert, split_runs, MoveRow, MoveTable, RunId, RunPosition};
pub use reorder::{ReorderResult, Strategy};
pub use trace::{trace_inversion, Layout, LocalityReport, TransitionGraph};
