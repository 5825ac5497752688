//! Criterion benchmarks for urfield-core live under `benches/`.
