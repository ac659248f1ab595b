//! Benchmarks for the brauer crate live in `benches/`.
