//! Benchmark-only crate; see the `benches/` directory.

/// Reference system shared by the benchmarks.
pub fn reference() -> zeno_core::SystemParams {
    zeno_core::SystemParams::reference()
}
