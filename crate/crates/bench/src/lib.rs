//! Criterion benchmarks for the exact-arithmetic kernels of `freequot-core`;
//! see `benches/exact.rs`.
