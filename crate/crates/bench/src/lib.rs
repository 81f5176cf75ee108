//! Criterion benchmarks for the partition calculus live in `benches/`.
