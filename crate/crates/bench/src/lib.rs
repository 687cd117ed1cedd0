//! Criterion benchmarks for `critloc`; see `benches/`.
