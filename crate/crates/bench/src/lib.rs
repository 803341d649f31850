//! Criterion benchmarks for `mkernel-core`; see `benches/kernels.rs`.
