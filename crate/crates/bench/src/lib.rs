//! Benchmarks for the shadowing routines live in `benches/`.
