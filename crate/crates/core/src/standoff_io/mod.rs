//! Readers and writers for BRAT standoff pairs, coreference column files
//! and the JSONL corpus interchange format.

pub mod brat;
pub mod columns;
pub mod jsonl;
mod unionfind;

pub use brat::{parse_brat, write_brat, BratOptions};
pub use columns::{read_coref_columns, write_coref_columns, ColumnFiles};
pub use jsonl::{read_jsonl, write_jsonl};

pub(crate) use unionfind::DisjointSets;
