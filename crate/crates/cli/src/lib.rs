//! Library surface of the CLI: document schema, command implementations,
//! and report rendering. The binary in `main.rs` is a thin wrapper, so the
//! whole pipeline is testable in-process.

pub mod commands;
pub mod doc;
pub mod error;
pub mod render;

use serde::Serialize;

pub use commands::Workspace;
pub use error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Markdown,
    Json,
}

pub fn to_json_string<T: Serialize>(report: &T) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("reports serialize");
    out.push('\n');
    out
}

/// Parse "a..b" (inclusive) or a single "k".
pub fn parse_k_range(s: &str) -> Result<Vec<u32>, CliError> {
    let bad = || CliError::Parse(format!("bad k range `{s}`; use `2` or `1..3`"));
    if let Some((a, b)) = s.split_once("..") {
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().parse().map_err(|_| bad())?;
        if a == 0 || b < a {
            return Err(bad());
        }
        Ok((a..=b).collect())
    } else {
        let k: u32 = s.trim().parse().map_err(|_| bad())?;
        if k == 0 {
            return Err(bad());
        }
        Ok(vec![k])
    }
}
