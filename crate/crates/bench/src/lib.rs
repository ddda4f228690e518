//! Criterion benchmarks for `jball-core`; see `benches/`.
