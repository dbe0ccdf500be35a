//! Emitted-program goldens for the bundled fixtures.

#![allow(dead_code)]

use std::path::PathBuf;

use acir_core::asp::{emit_for_stage, resolve_stage, StageKind};
use acir_core::{find_match, Domain, Fluent, Query};

use super::{fixture, fixtures_dir};

pub const FIXTURES: [&str; 5] = ["ex1_s1", "ex1_s2", "ex2", "ex3", "ex4"];
pub const STAGES: [(&str, StageKind); 3] =
    [("expansion", StageKind::Expansion), ("c1", StageKind::C1), ("c2", StageKind::C2)];

pub fn golden_path(id: &str, stage: &str) -> PathBuf {
    fixtures_dir().join("golden").join(format!("{id}.{stage}.lp"))
}

/// The program text for one fixture and stage, using the witness for `m`.
pub fn emit(id: &str, stage: StageKind) -> String {
    let src = fixture(&format!("{id}.acir"));
    let d = Domain::new(&src).unwrap();
    let r = find_match(&src, &Query { fluent: Fluent::new("m") }, None).unwrap();
    match resolve_stage(&d, stage, r.witness.as_ref()).unwrap() {
        None => "% no program: the conservative expansion does not exist\n".to_string(),
        Some(st) => emit_for_stage(&d, &src.id, &st).unwrap().map_or_else(
            || "% no program: the conservative expansion does not exist\n".to_string(),
            |p| p.text(),
        ),
    }
}

/// Compares every fixture and stage with its golden file. With
/// `ACIR_BLESS=1` the files are rewritten instead.
pub fn check_all() -> Result<usize, String> {
    let bless = std::env::var("ACIR_BLESS").is_ok_and(|v| v == "1");
    let mut n = 0;
    for id in FIXTURES {
        for (name, kind) in STAGES {
            let text = emit(id, kind);
            if emit(id, kind) != text {
                return Err(format!("{id}.{name}: output differs between runs"));
            }
            let path = golden_path(id, name);
            if bless {
                std::fs::write(&path, &text).map_err(|e| e.to_string())?;
            }
            let want = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
            if want != text {
                return Err(format!("{id}.{name}: differs from {}", path.display()));
            }
            n += 1;
        }
    }
    Ok(n)
}
