//! The `.tq` text format for translation quivers.
//!
//! ```text
//! # comment (also allowed after a directive)
//! vertex <name> [proj] [inj]
//! arrow <src> <tgt> [dim=<n>]
//! tau <x> -> <y>
//! ```
//!
//! Names are whitespace-free tokens. `dim` records the arrow multiplicity
//! of the modulation and defaults to 1. Serialization is canonical: sorted
//! directives, default dims omitted, so equal quivers print byte-equal.

use crate::quiver::{QuiverBuildError, TranslationQuiver, VertexId};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

pub type ArrowDims = BTreeMap<(VertexId, VertexId), usize>;

#[derive(Clone, Debug)]
pub struct TqFile {
    pub quiver: TranslationQuiver,
    /// One entry per arrow, defaulted to 1 when the file gives no `dim`.
    pub dims: ArrowDims,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct TqParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> TqParseError {
    TqParseError {
        line,
        message: message.into(),
    }
}

fn build_err(line: usize, e: QuiverBuildError) -> TqParseError {
    err(line, e.to_string())
}

pub fn parse(text: &str) -> Result<TqFile, TqParseError> {
    let mut quiver = TranslationQuiver::new();
    let mut dims: ArrowDims = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens[0] {
            "vertex" => {
                if tokens.len() < 2 {
                    return Err(err(line, "vertex needs a name"));
                }
                let mut proj = false;
                let mut inj = false;
                for &flag in &tokens[2..] {
                    match flag {
                        "proj" => proj = true,
                        "inj" => inj = true,
                        other => {
                            return Err(err(line, format!("unknown vertex flag `{other}`")));
                        }
                    }
                }
                quiver
                    .add_vertex(VertexId::new(tokens[1]), proj, inj)
                    .map_err(|e| build_err(line, e))?;
            }
            "arrow" => {
                if tokens.len() < 3 || tokens.len() > 4 {
                    return Err(err(line, "arrow needs `arrow <src> <tgt> [dim=<n>]`"));
                }
                let mut dim = 1usize;
                if let Some(&attr) = tokens.get(3) {
                    let Some(value) = attr.strip_prefix("dim=") else {
                        return Err(err(line, format!("unknown arrow attribute `{attr}`")));
                    };
                    dim = value
                        .parse::<usize>()
                        .ok()
                        .filter(|&d| d > 0)
                        .ok_or_else(|| {
                            err(line, format!("dim must be a positive integer, got `{value}`"))
                        })?;
                }
                let src = VertexId::new(tokens[1]);
                let tgt = VertexId::new(tokens[2]);
                quiver
                    .add_arrow(src.clone(), tgt.clone())
                    .map_err(|e| build_err(line, e))?;
                dims.insert((src, tgt), dim);
            }
            "tau" => {
                if tokens.len() != 4 || tokens[2] != "->" {
                    return Err(err(line, "tau needs `tau <x> -> <y>`"));
                }
                quiver
                    .set_tau(VertexId::new(tokens[1]), VertexId::new(tokens[3]))
                    .map_err(|e| build_err(line, e))?;
            }
            other => {
                return Err(err(line, format!("unknown directive `{other}`")));
            }
        }
    }
    Ok(TqFile { quiver, dims })
}

pub fn serialize(quiver: &TranslationQuiver, dims: &ArrowDims) -> String {
    let mut out = String::new();
    for v in quiver.vertices() {
        let _ = write!(out, "vertex {v}");
        if quiver.is_projective(v) {
            out.push_str(" proj");
        }
        if quiver.is_injective(v) {
            out.push_str(" inj");
        }
        out.push('\n');
    }
    for (src, tgt) in quiver.arrows() {
        let _ = write!(out, "arrow {src} {tgt}");
        let dim = dims.get(&(src.clone(), tgt.clone())).copied().unwrap_or(1);
        if dim != 1 {
            let _ = write!(out, " dim={dim}");
        }
        out.push('\n');
    }
    for (x, y) in quiver.tau_map() {
        let _ = writeln!(out, "tau {x} -> {y}");
    }
    out
}
