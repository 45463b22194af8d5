//! Criterion benchmarks for the ergotime kernels; see `benches/`.
