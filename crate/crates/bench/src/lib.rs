//! Criterion benchmarks for the computation pipeline; see `benches/pipeline.rs`.
