//! Split modulations on translation quivers.
//!
//! Each arrow `y -> x` carries a finite-dimensional vector space over the
//! ground field, recorded by its dimension, and each mesh carries one
//! nondegenerate pairing per middle vertex between the spaces on
//! `y -> x` and `tau x -> y`. Pairings default to the identity matrix and
//! can be overridden from a pairing file. The mesh element of a mesh is
//! the sum of dual-basis tensors over its middles; its coefficient matrix
//! in the stored bases is the inverse pairing, which is what makes it
//! independent of any basis choice.

use crate::field::Field;
use crate::linalg::Mat;
use crate::quiver::{TranslationQuiver, VertexId};
use crate::tqfile::ArrowDims;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ModulationError {
    #[error("dims given for nonexistent arrow {0} -> {1}")]
    DimForUnknownArrow(VertexId, VertexId),
    #[error("pairing given for {end} / {middle}, but {end} has no mesh or {middle} is not one of its middles")]
    PairingForUnknownMesh { end: VertexId, middle: VertexId },
    #[error("pairing at {end} / {middle} must be {rows} x {cols}")]
    PairingSizeMismatch {
        end: VertexId,
        middle: VertexId,
        rows: usize,
        cols: usize,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModulationViolation {
    /// The two arrows of a mesh crossing carry different dimensions, so no
    /// nondegenerate pairing can exist.
    MeshDimMismatch {
        end: VertexId,
        middle: VertexId,
        forward: usize,
        backward: usize,
    },
    PairingSingular {
        end: VertexId,
        middle: VertexId,
    },
}

impl std::fmt::Display for ModulationViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModulationViolation::MeshDimMismatch {
                end,
                middle,
                forward,
                backward,
            } => write!(
                f,
                "mesh at {end}: dim({middle} -> {end}) = {forward} but dim(tau -> {middle}) = {backward}"
            ),
            ModulationViolation::PairingSingular { end, middle } => {
                write!(f, "pairing at {end} / {middle} is singular")
            }
        }
    }
}

/// Dimensions and mesh pairings over a fixed ground field. The underlying
/// quiver is passed alongside; keys are validated against it on attach.
#[derive(Clone, Debug)]
pub struct SplitModulation<K: Field> {
    field: K,
    dims: ArrowDims,
    /// Keyed by (mesh end, middle); entry `P[i][j]` pairs the i-th basis
    /// vector on `middle -> end` with the j-th on `tau end -> middle`.
    pairings: BTreeMap<(VertexId, VertexId), Mat<K>>,
}

impl<K: Field> SplitModulation<K> {
    /// Builds a modulation for `quiver`: dims default to 1 per arrow,
    /// pairings default to the identity. Unknown keys are rejected.
    pub fn attach(
        field: K,
        quiver: &TranslationQuiver,
        dims: &ArrowDims,
        pairing_overrides: BTreeMap<(VertexId, VertexId), Mat<K>>,
    ) -> Result<SplitModulation<K>, ModulationError> {
        for (src, tgt) in dims.keys() {
            if !quiver.has_arrow(src, tgt) {
                return Err(ModulationError::DimForUnknownArrow(src.clone(), tgt.clone()));
            }
        }
        let full_dims: ArrowDims = quiver
            .arrows()
            .map(|(s, t)| {
                let d = dims.get(&(s.clone(), t.clone())).copied().unwrap_or(1);
                ((s.clone(), t.clone()), d)
            })
            .collect();
        let mut pairings = BTreeMap::new();
        for mesh in quiver.meshes() {
            for y in &mesh.middles {
                let rows = full_dims[&(y.clone(), mesh.end.clone())];
                let cols = full_dims
                    .get(&(mesh.start.clone(), y.clone()))
                    .copied()
                    .unwrap_or(rows);
                let n = rows.min(cols);
                let mut p = Mat::zeros(field.clone(), rows, cols);
                for i in 0..n {
                    p.set(i, i, field.one());
                }
                pairings.insert((mesh.end.clone(), y.clone()), p);
            }
        }
        for ((end, middle), p) in pairing_overrides {
            let Some(slot) = pairings.get_mut(&(end.clone(), middle.clone())) else {
                return Err(ModulationError::PairingForUnknownMesh { end, middle });
            };
            if p.rows() != slot.rows() || p.cols() != slot.cols() {
                return Err(ModulationError::PairingSizeMismatch {
                    end,
                    middle,
                    rows: slot.rows(),
                    cols: slot.cols(),
                });
            }
            *slot = p;
        }
        Ok(SplitModulation {
            field,
            dims: full_dims,
            pairings,
        })
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn dims(&self) -> &ArrowDims {
        &self.dims
    }

    /// Dimension of the space on an arrow; `None` when there is no arrow.
    pub fn dim(&self, src: &VertexId, tgt: &VertexId) -> Option<usize> {
        self.dims.get(&(src.clone(), tgt.clone())).copied()
    }

    pub fn pairing(&self, end: &VertexId, middle: &VertexId) -> Option<&Mat<K>> {
        self.pairings.get(&(end.clone(), middle.clone()))
    }

    /// Checks that every mesh crossing has matching dimensions and an
    /// invertible pairing.
    pub fn validate(&self, quiver: &TranslationQuiver) -> Vec<ModulationViolation> {
        let mut violations = Vec::new();
        for mesh in quiver.meshes() {
            for y in &mesh.middles {
                let forward = self.dim(y, &mesh.end).unwrap_or(0);
                let backward = self.dim(&mesh.start, y).unwrap_or(0);
                if forward != backward {
                    violations.push(ModulationViolation::MeshDimMismatch {
                        end: mesh.end.clone(),
                        middle: y.clone(),
                        forward,
                        backward,
                    });
                    continue;
                }
                let singular = self
                    .pairing(&mesh.end, y)
                    .map_or(true, |p| p.inverse().is_none());
                if singular {
                    violations.push(ModulationViolation::PairingSingular {
                        end: mesh.end.clone(),
                        middle: y.clone(),
                    });
                }
            }
        }
        violations
    }

    /// The mesh element at `end`: per middle, the coefficient matrix of
    /// the dual-basis tensor in the stored bases, which is the inverse of
    /// the pairing. Entry `[l][k]` multiplies (l-th vector on
    /// `start -> middle`) tensor (k-th vector on `middle -> end`).
    pub fn mesh_element(
        &self,
        quiver: &TranslationQuiver,
        end: &VertexId,
    ) -> Option<MeshElement<K>> {
        let mesh = quiver.mesh_at(end)?;
        let mut parts = BTreeMap::new();
        for y in &mesh.middles {
            let p = self.pairing(end, y)?;
            let c = p.inverse()?;
            parts.insert(y.clone(), c);
        }
        Some(MeshElement {
            end: mesh.end,
            start: mesh.start,
            parts,
        })
    }

    /// Restricts the modulation to a cover along `pi`: each cover arrow
    /// inherits the dims and each cover mesh the pairing of its image.
    pub fn pull_back(
        &self,
        cover: &TranslationQuiver,
        pi: &crate::quiver::QuiverMorphism,
    ) -> Result<SplitModulation<K>, ModulationError> {
        let dims: ArrowDims = cover
            .arrows()
            .map(|(s, t)| {
                let key = (
                    pi.apply(s).cloned().unwrap_or_else(|| s.clone()),
                    pi.apply(t).cloned().unwrap_or_else(|| t.clone()),
                );
                let d = self.dims.get(&key).copied().unwrap_or(1);
                ((s.clone(), t.clone()), d)
            })
            .collect();
        let mut overrides = BTreeMap::new();
        for mesh in cover.meshes() {
            for y in &mesh.middles {
                let (Some(pe), Some(py)) = (pi.apply(&mesh.end), pi.apply(y)) else {
                    continue;
                };
                if let Some(p) = self.pairing(pe, py) {
                    overrides.insert((mesh.end.clone(), y.clone()), p.clone());
                }
            }
        }
        SplitModulation::attach(self.field.clone(), cover, &dims, overrides)
    }
}

/// `sum_{middles y} sum_{l,k} parts[y][l][k] (w_l tensor u_k)` where `w`
/// is the stored basis on `start -> y` and `u` the one on `y -> end`.
#[derive(Clone, Debug)]
pub struct MeshElement<K: Field> {
    pub end: VertexId,
    pub start: VertexId,
    pub parts: BTreeMap<VertexId, Mat<K>>,
}

/// Dual basis of the pairing: rows of the result are the basis of the
/// backward space paired to the rows of `basis` so that
/// `basis * pairing * result^T = I`. `None` when `basis` is singular.
pub fn dual_basis<K: Field>(pairing: &Mat<K>, basis: &Mat<K>) -> Option<Mat<K>> {
    basis.mul(pairing).inverse().map(|m| m.transpose())
}

/// Parses pairing override lines: `pairing <end> <middle> <entries...>`
/// with row-major entries for the full matrix.
pub fn parse_pairing_file<K: Field>(
    field: &K,
    quiver: &TranslationQuiver,
    dims: &ArrowDims,
    text: &str,
) -> Result<BTreeMap<(VertexId, VertexId), Mat<K>>, ModulationError> {
    let err = |line: usize, message: String| ModulationError::Parse { line, message };
    let mut overrides = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens[0] != "pairing" {
            return Err(err(line, format!("unknown directive `{}`", tokens[0])));
        }
        if tokens.len() < 3 {
            return Err(err(line, "pairing needs `pairing <end> <middle> <entries>`".into()));
        }
        let end = VertexId::new(tokens[1]);
        let middle = VertexId::new(tokens[2]);
        let valid_mesh = quiver
            .mesh_at(&end)
            .map_or(false, |m| m.middles.contains(&middle));
        if !valid_mesh {
            return Err(err(
                line,
                format!("`{end}` has no mesh with middle `{middle}`"),
            ));
        }
        let rows = dims
            .get(&(middle.clone(), end.clone()))
            .copied()
            .unwrap_or(1);
        let start = quiver.tau(&end).expect("mesh end has tau");
        let cols = dims
            .get(&(start.clone(), middle.clone()))
            .copied()
            .unwrap_or(1);
        let entries = &tokens[3..];
        if entries.len() != rows * cols {
            return Err(err(
                line,
                format!("expected {} entries ({rows} x {cols}), got {}", rows * cols, entries.len()),
            ));
        }
        let mut parsed = Vec::with_capacity(entries.len());
        for e in entries {
            parsed.push(field.parse_elem(e).map_err(|m| err(line, m))?);
        }
        let mat = Mat::from_fn(field.clone(), rows, cols, |i, j| parsed[i * cols + j].clone());
        overrides.insert((end, middle), mat);
    }
    Ok(overrides)
}
