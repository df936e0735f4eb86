//! Criterion benchmarks for the landokh pipeline; see `benches/`.
