//! Benchmark-only crate; see `benches/analyzer.rs`.
