use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use cfl_core::csp::CspInstance;
use cfl_core::encoders::parse_dimacs;

use crate::Failure;

pub fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

/// Instance-JSON when the first non-blank character is `{`, DIMACS otherwise.
pub fn parse_instance(text: &str) -> Result<CspInstance, Failure> {
    if text.trim_start().starts_with('{') {
        Ok(CspInstance::from_json(text)?)
    } else {
        Ok(parse_dimacs(text)?)
    }
}

pub fn load_instance(path: &Path) -> Result<CspInstance, Failure> {
    parse_instance(&read_text(path)?)
}

/// Write to `path`, or to stdout when absent.
pub fn emit(path: Option<&PathBuf>, content: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, content).map_err(|e| Failure::io(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::io(Path::new("<stdout>"), e))
        }
    }
}
