//! Criterion benchmarks for the rehypothecation model; see `benches/`.
