//! Inputs shared by the benchmarks in `benches/`.

use std::path::PathBuf;

use acir_core::bench::{generate_benchmark, BenchmarkConfig, Instance};
use acir_core::corpus::load_corpus;
use acir_core::Source;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

pub fn fixture_sources() -> Vec<Source> {
    load_corpus(&fixtures_dir()).expect("fixtures directory").sources
}

/// Generated instances for `cfg`, split into matching and non-matching ones.
pub fn generated(cfg: &BenchmarkConfig) -> (Vec<Instance>, Vec<Instance>) {
    generate_benchmark(cfg).expect("valid configuration").instances.into_iter().partition(|i| i.expected.is_finite())
}
