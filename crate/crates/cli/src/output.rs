//! CLI error kinds and output plumbing.

use std::path::Path;

pub use qfb_core::harness::sweep::format_sig;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config, or sequence files → exit 2.
    Input(String),
    /// A violated internal invariant → exit 3.
    Internal(String),
}

pub type CliResult<T> = Result<T, CliError>;

/// Write to the given path, or stdout when no path was requested.
pub fn write_output(path: Option<&Path>, content: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}
