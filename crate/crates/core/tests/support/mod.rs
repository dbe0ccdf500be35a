#![allow(dead_code)]

pub mod gen;
pub mod goldens;
pub mod lp;
pub mod oracle;
pub mod solver;

use std::path::PathBuf;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture(name: &str) -> acir_core::Source {
    acir_core::SourceDocument::load(&fixtures_dir().join(name)).expect("fixture loads").parsed
}
