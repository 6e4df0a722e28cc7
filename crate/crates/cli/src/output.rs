use std::fs;
use std::io::{self, Write};
use std::path::Path;

use crate::error::CliError;

pub fn emit(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, content).map_err(|source| CliError::Output { path: p.to_path_buf(), source }),
        None => {
            let mut out = io::stdout().lock();
            match out.write_all(content.as_bytes()).and_then(|_| out.flush()) {
                // reader went away, e.g. `| head`
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
                r => r.map_err(|source| CliError::Output { path: "<stdout>".into(), source }),
            }
        }
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn float(v: f64) -> String {
    format!("{v:.16e}")
}
