//! Criterion benchmarks for `sumdiff-core`; see `benches/`.
