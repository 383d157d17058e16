//! Criterion benchmarks for the linearization pipeline; see `benches/`.
