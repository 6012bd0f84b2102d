//! The `.alg` text format for path algebras of quivers, plus the Dynkin
//! classification that gates every representation-theoretic computation.
//!
//! ```text
//! field Q            # or: field F 101
//! vertex <name>
//! arrow <name> : <src> -> <tgt>
//! ```
//!
//! Only hereditary algebras of simply-laced Dynkin type are accepted
//! downstream; the classifier reports the type or says what breaks.

use crate::field::GroundField;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    /// Ground field named in the file, if any; callers may override.
    pub field: Option<GroundField>,
    pub vertices: BTreeSet<String>,
    /// Arrow name to (source, target).
    pub arrows: BTreeMap<String, (String, String)>,
}

impl AlgebraSpec {
    pub fn undirected_edges(&self) -> Vec<(String, String)> {
        self.arrows.values().cloned().collect()
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct AlgParseError {
    pub line: usize,
    pub message: String,
}

pub fn parse(text: &str) -> Result<AlgebraSpec, AlgParseError> {
    let err = |line: usize, message: String| AlgParseError { line, message };
    let mut field = None;
    let mut vertices = BTreeSet::new();
    let mut arrows: BTreeMap<String, (String, String)> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens[0] {
            "field" => {
                let spec = tokens[1..].join("").to_lowercase();
                if spec.is_empty() {
                    return Err(err(line, "field needs `Q` or `F <p>`".into()));
                }
                let parsed: GroundField = spec
                    .parse()
                    .map_err(|m: String| err(line, m))?;
                if field.replace(parsed).is_some() {
                    return Err(err(line, "field declared twice".into()));
                }
            }
            "vertex" => {
                if tokens.len() != 2 {
                    return Err(err(line, "vertex needs exactly one name".into()));
                }
                if !vertices.insert(tokens[1].to_string()) {
                    return Err(err(line, format!("vertex `{}` declared twice", tokens[1])));
                }
            }
            "arrow" => {
                if tokens.len() != 6 || tokens[2] != ":" || tokens[4] != "->" {
                    return Err(err(line, "arrow needs `arrow <name> : <src> -> <tgt>`".into()));
                }
                let (name, src, tgt) = (tokens[1], tokens[3], tokens[5]);
                for v in [src, tgt] {
                    if !vertices.contains(v) {
                        return Err(err(line, format!("unknown vertex `{v}`")));
                    }
                }
                if arrows
                    .insert(name.to_string(), (src.to_string(), tgt.to_string()))
                    .is_some()
                {
                    return Err(err(line, format!("arrow `{name}` declared twice")));
                }
            }
            other => return Err(err(line, format!("unknown directive `{other}`"))),
        }
    }
    if vertices.is_empty() {
        return Err(err(0, "algebra has no vertices".into()));
    }
    Ok(AlgebraSpec {
        field,
        vertices,
        arrows,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DynkinType {
    A(usize),
    D(usize),
    E(usize),
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinType::A(n) => write!(f, "A_{n}"),
            DynkinType::D(n) => write!(f, "D_{n}"),
            DynkinType::E(n) => write!(f, "E_{n}"),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum NotDynkin {
    #[error("underlying graph is not connected")]
    Disconnected,
    #[error("underlying graph has a cycle or parallel edges")]
    NotATree,
    #[error("vertex `{0}` has degree {1}, the diagrams allow at most 3")]
    DegreeTooHigh(String, usize),
    #[error("more than one branch vertex")]
    TwoBranchVertices,
    #[error("branch legs of lengths {0}, {1}, {2} are not a Dynkin shape")]
    BadLegs(usize, usize, usize),
}

/// Classifies the underlying undirected graph of the quiver as a
/// simply-laced Dynkin diagram, or explains why it is not one. Arrow
/// directions never matter here.
pub fn dynkin_type(spec: &AlgebraSpec) -> Result<DynkinType, NotDynkin> {
    let n = spec.vertices.len();
    let mut adj: BTreeMap<&String, Vec<&String>> =
        spec.vertices.iter().map(|v| (v, Vec::new())).collect();
    for (src, tgt) in spec.arrows.values() {
        if src == tgt {
            return Err(NotDynkin::NotATree);
        }
        adj.get_mut(src).unwrap().push(tgt);
        adj.get_mut(tgt).unwrap().push(src);
    }
    if spec.arrows.len() != n - 1 {
        return Err(NotDynkin::NotATree);
    }
    // Connectivity; with the edge count settled this also rules out cycles.
    let start = spec.vertices.iter().next().unwrap();
    let mut seen: BTreeSet<&String> = BTreeSet::new();
    let mut stack = vec![start];
    seen.insert(start);
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    if seen.len() != n {
        return Err(NotDynkin::Disconnected);
    }
    let mut parallel: BTreeSet<(&String, &String)> = BTreeSet::new();
    for (src, tgt) in spec.arrows.values() {
        let key = if src <= tgt { (src, tgt) } else { (tgt, src) };
        if !parallel.insert(key) {
            return Err(NotDynkin::NotATree);
        }
    }
    for (v, nb) in &adj {
        if nb.len() > 3 {
            return Err(NotDynkin::DegreeTooHigh((*v).clone(), nb.len()));
        }
    }
    let branches: Vec<&String> = adj
        .iter()
        .filter(|(_, nb)| nb.len() == 3)
        .map(|(&v, _)| v)
        .collect();
    match branches.len() {
        0 => Ok(DynkinType::A(n)),
        1 => {
            let center = branches[0];
            let mut legs: Vec<usize> = adj[center]
                .iter()
                .map(|&first| {
                    let mut len = 1;
                    let mut prev = center;
                    let mut cur = first;
                    loop {
                        let next: Vec<&String> = adj[cur]
                            .iter()
                            .filter(|&&w| w != prev)
                            .copied()
                            .collect();
                        match next.as_slice() {
                            [] => break,
                            [only] => {
                                prev = cur;
                                cur = only;
                                len += 1;
                            }
                            _ => unreachable!("second branch vertex was excluded"),
                        }
                    }
                    len
                })
                .collect();
            legs.sort_unstable();
            match (legs[0], legs[1], legs[2]) {
                (1, 1, k) => Ok(DynkinType::D(k + 3)),
                (1, 2, 2) => Ok(DynkinType::E(6)),
                (1, 2, 3) => Ok(DynkinType::E(7)),
                (1, 2, 4) => Ok(DynkinType::E(8)),
                (a, b, c) => Err(NotDynkin::BadLegs(a, b, c)),
            }
        }
        _ => Err(NotDynkin::TwoBranchVertices),
    }
}
