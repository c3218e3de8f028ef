//! Generator files: one Pauli string per line in the `A1:-1:X;B1:-1:X` form,
//! `#` comments and blank lines ignored.

use std::path::Path;

use embezzle_core::car::PauliString;

use crate::error::{RunError, RunResult};

pub fn parse_generators(text: &str) -> RunResult<Vec<PauliString>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let g = line
            .parse::<PauliString>()
            .map_err(|e| RunError::Config(format!("generator line {}: {e}", n + 1)))?;
        out.push(g);
    }
    Ok(out)
}

pub fn read_generators(path: &Path) -> RunResult<Vec<PauliString>> {
    let text = std::fs::read_to_string(path).map_err(|e| RunError::io(path, e))?;
    parse_generators(&text)
}
