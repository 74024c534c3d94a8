use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// A computed result contradicts a guarantee the command checks.
#[derive(Debug)]
pub struct AssertionFailure(pub String);

impl fmt::Display for AssertionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "assertion failed: {}", self.0)
    }
}

impl std::error::Error for AssertionFailure {}

/// Input is malformed before any library call sees it.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for InputError {}

pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    let t = text.trim();
    if t.starts_with('[') {
        return serde_json::from_str(t).map_err(|e| InputError(format!("bad vector `{t}`: {e}")).into());
    }
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| InputError(format!("bad number `{v}`: {e}")).into()))
        .collect()
}

/// Raw JSON of an argument that is either a path or inline JSON.
pub fn json_text(arg: &str) -> Result<String> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))
    }
}

pub fn read_json<T: DeserializeOwned>(arg: &str) -> Result<T> {
    let text = json_text(arg)?;
    serde_json::from_str(&text).map_err(|e| InputError(format!("parsing {arg}: {e}")).into())
}

/// Buffered writer to `path`, or stdout.
pub fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

pub fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    let mut w = output(path)?;
    serde_json::to_writer(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Eight decimals with trailing zeros dropped: `1.41421356`, `0`, `-2.5`.
pub fn short(v: f64) -> String {
    let s = format!("{v:.8}");
    let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.') } else { &s };
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}
