//! Benchmarks live in `benches/verify.rs`; run `cargo bench -p algvar-bench`.
