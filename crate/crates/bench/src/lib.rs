//! Workspace member that hosts the criterion benchmarks in `benches/`.
