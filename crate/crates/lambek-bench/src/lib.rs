//! Benchmark-only crate; see `benches/prove.rs`.
