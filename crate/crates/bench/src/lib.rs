//! Benchmarks for the `lrdd` kernels live in `benches/`.
