use std::path::Path;

use intform::{ExponentMode, IntegerLattice, LatticeSpec};

use crate::error::CliError;
use crate::table::Format;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ModeSelection {
    #[value(name = "S")]
    S,
    #[value(name = "2S")]
    TwoS,
    #[value(name = "both")]
    Both,
}

impl ModeSelection {
    pub fn modes(self) -> Vec<ExponentMode> {
        match self {
            ModeSelection::S => vec![ExponentMode::S],
            ModeSelection::TwoS => vec![ExponentMode::TwoS],
            ModeSelection::Both => ExponentMode::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub lattices: Vec<IntegerLattice>,
    pub n_max: u32,
    pub modes: Vec<ExponentMode>,
    pub format: Format,
    pub budget: usize,
    pub jobs: usize,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.budget == 0 {
            return Err(CliError::Validation("--budget must be at least 1".into()));
        }
        if self.jobs == 0 {
            return Err(CliError::Validation("--jobs must be at least 1".into()));
        }
        Ok(())
    }
}

/// A built-in name, or else a path to `{"name": ..., "gram": [[...]]}`.
pub fn load_lattice(source: &str) -> Result<IntegerLattice, CliError> {
    if let Some(l) = IntegerLattice::builtin(source) {
        return Ok(l);
    }
    let path = Path::new(source);
    if !path.exists() {
        return Err(CliError::Validation(format!(
            "unknown lattice '{source}': not a built-in ({}) and no such file",
            IntegerLattice::builtin_names().join(", ")
        )));
    }
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{source}: {e}")))?;
    parse_lattice_json(source, &text)
}

pub fn parse_lattice_json(source: &str, text: &str) -> Result<IntegerLattice, CliError> {
    let spec: LatticeSpec = serde_json::from_str(text).map_err(|e| {
        CliError::Validation(format!(
            "{source}: malformed lattice JSON at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    IntegerLattice::from_spec(&spec).map_err(|e| CliError::Validation(format!("{source}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_and_json() {
        assert_eq!(load_lattice("A2").unwrap().det(), 3.into());
        let l = parse_lattice_json("x", r#"{"name": "D", "gram": [[2, -1], [-1, 2]]}"#).unwrap();
        assert_eq!(l.name(), "D");
        assert_eq!(l.det(), 3.into());
    }

    #[test]
    fn json_errors_carry_position() {
        let e = parse_lattice_json("bad.json", "{\"name\": \"x\",\n \"gram\": [[1,]]}").unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("line 2"), "{msg}");
        assert_eq!(e.exit_code(), 2);
        let e = parse_lattice_json("f.json", r#"{"name": "x", "gram": [[1.5]]}"#).unwrap_err();
        assert!(e.to_string().contains("column"));
    }

    #[test]
    fn indefinite_gram_names_minor() {
        let e = parse_lattice_json("bad.json", r#"{"name": "z", "gram": [[0]]}"#).unwrap_err();
        assert!(e.to_string().contains("minor of order 1"), "{e}");
    }

    #[test]
    fn unknown_source() {
        assert!(load_lattice("no-such-lattice").unwrap_err().to_string().contains("unknown lattice"));
    }
}
