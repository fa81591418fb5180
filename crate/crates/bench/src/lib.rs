//! Criterion benchmarks for `bdris-core`; see `benches/core.rs`.
//!
//! Run with `cargo bench -p bdris-bench`.
