//! Library side of the `miov` command: table serialization and the
//! inversion benchmark.

pub mod bench;
pub mod table_io;

pub use table_io::{parse, serialize, ParseError};
