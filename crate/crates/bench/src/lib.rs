//! Criterion benchmarks for `k3lattice`; the benchmarks live in `benches/`.
