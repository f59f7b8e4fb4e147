//! Criterion benchmarks for the analysis routines; see `benches/`.
