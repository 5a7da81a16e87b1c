//! Criterion benchmarks for `qrx-core`; see `benches/`.
//!
//! Run with `cargo bench -p qrx-bench`.
