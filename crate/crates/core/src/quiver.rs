//! Translation quivers: directed graphs with projective/injective vertex
//! markings and a partial translation `tau`, validated against the mesh
//! axiom. Also: parallel-path length checks, length functions, and
//! covering-morphism verification.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use thiserror::Error;

/// An opaque vertex name. Ordering is lexicographic on the name and fixes
/// the deterministic iteration order used throughout the crate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VertexId(String);

impl VertexId {
    pub fn new(name: impl Into<String>) -> VertexId {
        VertexId(name.into())
    }
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> VertexId {
        VertexId(s.to_string())
    }
}

impl From<String> for VertexId {
    fn from(s: String) -> VertexId {
        VertexId(s)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum QuiverBuildError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(VertexId),
    #[error("vertex `{0}` declared twice")]
    DuplicateVertex(VertexId),
    #[error("tau already defined on `{0}`")]
    DuplicateTau(VertexId),
}

/// A translation quiver candidate. Construction only enforces referential
/// integrity; the translation quiver axioms are checked by [`validate`].
///
/// [`validate`]: TranslationQuiver::validate
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TranslationQuiver {
    vertices: BTreeSet<VertexId>,
    /// Arrow multiplicity per ordered pair. Valid quivers have all
    /// multiplicities equal to one; higher counts are kept so that
    /// validation can report them.
    arrows: BTreeMap<(VertexId, VertexId), usize>,
    out_adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
    in_adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
    projectives: BTreeSet<VertexId>,
    injectives: BTreeSet<VertexId>,
    tau: BTreeMap<VertexId, VertexId>,
}

impl TranslationQuiver {
    pub fn new() -> TranslationQuiver {
        TranslationQuiver::default()
    }

    pub fn add_vertex(
        &mut self,
        v: VertexId,
        projective: bool,
        injective: bool,
    ) -> Result<(), QuiverBuildError> {
        if !self.vertices.insert(v.clone()) {
            return Err(QuiverBuildError::DuplicateVertex(v));
        }
        self.out_adj.insert(v.clone(), BTreeSet::new());
        self.in_adj.insert(v.clone(), BTreeSet::new());
        if projective {
            self.projectives.insert(v.clone());
        }
        if injective {
            self.injectives.insert(v);
        }
        Ok(())
    }

    pub fn add_arrow(&mut self, src: VertexId, tgt: VertexId) -> Result<(), QuiverBuildError> {
        if !self.vertices.contains(&src) {
            return Err(QuiverBuildError::UnknownVertex(src));
        }
        if !self.vertices.contains(&tgt) {
            return Err(QuiverBuildError::UnknownVertex(tgt));
        }
        *self.arrows.entry((src.clone(), tgt.clone())).or_insert(0) += 1;
        self.out_adj.get_mut(&src).unwrap().insert(tgt.clone());
        self.in_adj.get_mut(&tgt).unwrap().insert(src);
        Ok(())
    }

    pub fn set_tau(&mut self, x: VertexId, y: VertexId) -> Result<(), QuiverBuildError> {
        if !self.vertices.contains(&x) {
            return Err(QuiverBuildError::UnknownVertex(x));
        }
        if !self.vertices.contains(&y) {
            return Err(QuiverBuildError::UnknownVertex(y));
        }
        if self.tau.contains_key(&x) {
            return Err(QuiverBuildError::DuplicateTau(x));
        }
        self.tau.insert(x, y);
        Ok(())
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexId> {
        self.vertices.iter()
    }
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
    pub fn has_vertex(&self, v: &VertexId) -> bool {
        self.vertices.contains(v)
    }
    pub fn arrows(&self) -> impl Iterator<Item = (&VertexId, &VertexId)> {
        self.arrows.keys().map(|(s, t)| (s, t))
    }
    pub fn arrow_count(&self) -> usize {
        self.arrows.values().sum()
    }
    pub fn has_arrow(&self, src: &VertexId, tgt: &VertexId) -> bool {
        self.arrows.contains_key(&(src.clone(), tgt.clone()))
    }
    pub fn out_neighbors(&self, v: &VertexId) -> impl Iterator<Item = &VertexId> {
        self.out_adj.get(v).into_iter().flatten()
    }
    pub fn in_neighbors(&self, v: &VertexId) -> impl Iterator<Item = &VertexId> {
        self.in_adj.get(v).into_iter().flatten()
    }
    pub fn is_projective(&self, v: &VertexId) -> bool {
        self.projectives.contains(v)
    }
    pub fn is_injective(&self, v: &VertexId) -> bool {
        self.injectives.contains(v)
    }
    pub fn projectives(&self) -> &BTreeSet<VertexId> {
        &self.projectives
    }
    pub fn injectives(&self) -> &BTreeSet<VertexId> {
        &self.injectives
    }
    pub fn tau(&self, x: &VertexId) -> Option<&VertexId> {
        self.tau.get(x)
    }
    pub fn tau_map(&self) -> &BTreeMap<VertexId, VertexId> {
        &self.tau
    }

    /// Inverse of `tau` as a map; meaningful once `tau` is injective.
    pub fn tau_inverse_map(&self) -> BTreeMap<VertexId, VertexId> {
        self.tau
            .iter()
            .map(|(x, y)| (y.clone(), x.clone()))
            .collect()
    }

    /// The meshes of the quiver: one per vertex with a translate, with the
    /// middle vertices read off the arrows into the end vertex.
    pub fn meshes(&self) -> Vec<Mesh> {
        self.tau
            .iter()
            .map(|(end, start)| Mesh {
                end: end.clone(),
                start: start.clone(),
                middles: self.in_neighbors(end).cloned().collect(),
            })
            .collect()
    }

    pub fn mesh_at(&self, end: &VertexId) -> Option<Mesh> {
        self.tau.get(end).map(|start| Mesh {
            end: end.clone(),
            start: start.clone(),
            middles: self.in_neighbors(end).cloned().collect(),
        })
    }

    /// Checks the translation quiver axioms and returns every violation.
    /// The quiver is a translation quiver exactly when the report is empty.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for ((src, tgt), &mult) in &self.arrows {
            if src == tgt {
                violations.push(ValidationViolation::Loop { at: src.clone() });
            }
            if mult > 1 {
                violations.push(ValidationViolation::MultipleArrows {
                    src: src.clone(),
                    tgt: tgt.clone(),
                    count: mult,
                });
            }
        }
        for v in &self.vertices {
            let non_projective = !self.projectives.contains(v);
            match self.tau.get(v) {
                Some(tv) => {
                    if !non_projective {
                        violations.push(ValidationViolation::TauOnProjective { x: v.clone() });
                    }
                    if self.injectives.contains(tv) {
                        violations.push(ValidationViolation::TauTargetInjective {
                            x: v.clone(),
                            tx: tv.clone(),
                        });
                    }
                }
                None => {
                    if non_projective {
                        violations.push(ValidationViolation::TauMissing { x: v.clone() });
                    }
                }
            }
        }
        let mut seen_targets: BTreeMap<&VertexId, &VertexId> = BTreeMap::new();
        for (x, tx) in &self.tau {
            if let Some(prev) = seen_targets.insert(tx, x) {
                violations.push(ValidationViolation::TauNotInjective {
                    x1: prev.clone(),
                    x2: x.clone(),
                    image: tx.clone(),
                });
            }
        }
        for y in &self.vertices {
            if !self.injectives.contains(y) && !seen_targets.contains_key(y) {
                violations.push(ValidationViolation::NonInjectiveNotHit { y: y.clone() });
            }
        }
        for (x, tx) in &self.tau {
            let expected: BTreeSet<&VertexId> = self.out_neighbors(tx).collect();
            let actual: BTreeSet<&VertexId> = self.in_neighbors(x).collect();
            for &y in actual.difference(&expected) {
                violations.push(ValidationViolation::MeshMissingStartArrow {
                    end: x.clone(),
                    start: tx.clone(),
                    middle: y.clone(),
                });
            }
            for &y in expected.difference(&actual) {
                violations.push(ValidationViolation::MeshMissingEndArrow {
                    end: x.clone(),
                    start: tx.clone(),
                    middle: y.clone(),
                });
            }
            if expected.is_empty() && actual.is_empty() {
                violations.push(ValidationViolation::DegenerateMesh {
                    end: x.clone(),
                    start: tx.clone(),
                });
            }
        }
        ValidationReport { violations }
    }

    /// True when any two directed paths with the same source and target have
    /// the same length; otherwise a witness pair of parallel paths of
    /// different lengths (an oriented cycle yields the trivial path and the
    /// cycle itself).
    pub fn is_with_length(&self) -> Result<(), WithLengthWitness> {
        if let Some(cycle) = self.find_cycle() {
            let v = cycle[0].clone();
            return Err(WithLengthWitness {
                path_a: vec![v],
                path_b: cycle,
            });
        }
        let order = self.topological_order();
        let index: BTreeMap<&VertexId, usize> = order.iter().enumerate().map(|(i, v)| (v, i)).collect();
        for x in &self.vertices {
            // Longest/shortest path lengths from x, in topological order.
            let mut min_len: BTreeMap<&VertexId, (usize, Option<&VertexId>)> = BTreeMap::new();
            let mut max_len: BTreeMap<&VertexId, (usize, Option<&VertexId>)> = BTreeMap::new();
            min_len.insert(x, (0, None));
            max_len.insert(x, (0, None));
            for u in order.iter().skip(index[x]) {
                let (Some(&(lo, _)), Some(&(hi, _))) = (min_len.get(u), max_len.get(u)) else {
                    continue;
                };
                for w in self.out_neighbors(u) {
                    let e = min_len.entry(w).or_insert((usize::MAX, None));
                    if lo + 1 < e.0 {
                        *e = (lo + 1, Some(u));
                    }
                    let e = max_len.entry(w).or_insert((0, Some(u)));
                    if hi + 1 > e.0 || e.1.is_none() {
                        *e = (hi + 1, Some(u));
                    }
                }
            }
            for y in &self.vertices {
                let (Some(&(lo, _)), Some(&(hi, _))) = (min_len.get(y), max_len.get(y)) else {
                    continue;
                };
                if lo != hi {
                    let reconstruct = |table: &BTreeMap<&VertexId, (usize, Option<&VertexId>)>| {
                        let mut path = vec![y.clone()];
                        let mut cur = y;
                        while let Some(&(_, Some(prev))) = table.get(cur) {
                            path.push(prev.clone());
                            cur = prev;
                        }
                        path.reverse();
                        path
                    };
                    return Err(WithLengthWitness {
                        path_a: reconstruct(&min_len),
                        path_b: reconstruct(&max_len),
                    });
                }
            }
        }
        Ok(())
    }

    fn find_cycle(&self) -> Option<Vec<VertexId>> {
        #[derive(Clone, Copy, PartialEq)]
        enum State {
            Unseen,
            Active,
            Done,
        }
        let mut state: BTreeMap<&VertexId, State> =
            self.vertices.iter().map(|v| (v, State::Unseen)).collect();
        let mut parent: BTreeMap<&VertexId, &VertexId> = BTreeMap::new();
        for root in &self.vertices {
            if state[root] != State::Unseen {
                continue;
            }
            // Iterative DFS keeping the active path for cycle reconstruction.
            let mut stack = vec![(root, self.out_neighbors(root).collect::<Vec<_>>(), 0usize)];
            state.insert(root, State::Active);
            while let Some(frame) = stack.last_mut() {
                if frame.2 == frame.1.len() {
                    state.insert(frame.0, State::Done);
                    stack.pop();
                    continue;
                }
                let u = frame.0;
                let w = frame.1[frame.2];
                frame.2 += 1;
                match state[w] {
                    State::Active => {
                        // Back edge u -> w closes the cycle w -> ... -> u -> w.
                        let mut rev = vec![u];
                        let mut cur = u;
                        while cur != w {
                            cur = parent[cur];
                            rev.push(cur);
                        }
                        let mut walk: Vec<VertexId> =
                            rev.iter().rev().map(|x| (*x).clone()).collect();
                        walk.push(w.clone());
                        return Some(walk);
                    }
                    State::Unseen => {
                        parent.insert(w, u);
                        state.insert(w, State::Active);
                        let outs = self.out_neighbors(w).collect::<Vec<_>>();
                        stack.push((w, outs, 0));
                    }
                    State::Done => {}
                }
            }
        }
        None
    }

    /// Vertices in a topological order of the arrow relation. Only
    /// meaningful for acyclic quivers; vertices on cycles are appended at
    /// the end.
    pub fn topological_order(&self) -> Vec<VertexId> {
        let mut indeg: BTreeMap<&VertexId, usize> = self
            .vertices
            .iter()
            .map(|v| (v, self.in_neighbors(v).count()))
            .collect();
        let mut queue: BTreeSet<&VertexId> = indeg
            .iter()
            .filter(|(_, &d)| d == 0)
            .map(|(&v, _)| v)
            .collect();
        let mut order = Vec::with_capacity(self.vertices.len());
        while let Some(&v) = queue.iter().next() {
            queue.remove(v);
            order.push(v.clone());
            for w in self.out_neighbors(v) {
                let d = indeg.get_mut(&w).unwrap();
                *d -= 1;
                if *d == 0 {
                    queue.insert(w);
                }
            }
        }
        for v in &self.vertices {
            if !order.contains(v) {
                order.push(v.clone());
            }
        }
        order
    }

    /// Assigns an integer level to every vertex so that each arrow raises
    /// the level by exactly one, anchored at `base = 0`. Propagation runs
    /// over the underlying graph; a contradiction returns the closed walk
    /// that witnesses it.
    pub fn length_function(
        &self,
        base: &VertexId,
    ) -> Result<BTreeMap<VertexId, i64>, LengthFunctionError> {
        if !self.vertices.contains(base) {
            return Err(LengthFunctionError::UnknownBase { base: base.clone() });
        }
        let mut level: BTreeMap<VertexId, i64> = BTreeMap::new();
        let mut parent: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        level.insert(base.clone(), 0);
        let mut queue = VecDeque::new();
        queue.push_back(base.clone());
        while let Some(u) = queue.pop_front() {
            let lu = level[&u];
            let steps: Vec<(VertexId, i64)> = self
                .out_neighbors(&u)
                .map(|w| (w.clone(), lu + 1))
                .chain(self.in_neighbors(&u).map(|w| (w.clone(), lu - 1)))
                .collect();
            for (w, lw) in steps {
                match level.get(&w) {
                    None => {
                        level.insert(w.clone(), lw);
                        parent.insert(w.clone(), u.clone());
                        queue.push_back(w);
                    }
                    Some(&existing) if existing == lw => {}
                    Some(_) => {
                        // Closed walk base -> u, the conflicting step u ~ w,
                        // then w -> base along its own discovery path.
                        let mut walk = trace_to_root(&parent, &u);
                        walk.reverse();
                        walk.extend(trace_to_root(&parent, &w));
                        return Err(LengthFunctionError::NotWithLength { walk });
                    }
                }
            }
        }
        if let Some(missing) = self.vertices.iter().find(|v| !level.contains_key(*v)) {
            return Err(LengthFunctionError::Disconnected {
                base: base.clone(),
                missing: missing.clone(),
            });
        }
        Ok(level)
    }
}

fn trace_to_root(parent: &BTreeMap<VertexId, VertexId>, v: &VertexId) -> Vec<VertexId> {
    let mut path = vec![v.clone()];
    let mut cur = v;
    while let Some(p) = parent.get(cur) {
        path.push(p.clone());
        cur = p;
    }
    path
}

/// One mesh: the arrows `start -> middle -> end` for every middle vertex,
/// where `start = tau(end)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mesh {
    pub end: VertexId,
    pub start: VertexId,
    pub middles: Vec<VertexId>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ValidationViolation {
    Loop {
        at: VertexId,
    },
    MultipleArrows {
        src: VertexId,
        tgt: VertexId,
        count: usize,
    },
    TauOnProjective {
        x: VertexId,
    },
    TauMissing {
        x: VertexId,
    },
    TauTargetInjective {
        x: VertexId,
        tx: VertexId,
    },
    TauNotInjective {
        x1: VertexId,
        x2: VertexId,
        image: VertexId,
    },
    NonInjectiveNotHit {
        y: VertexId,
    },
    MeshMissingStartArrow {
        end: VertexId,
        start: VertexId,
        middle: VertexId,
    },
    MeshMissingEndArrow {
        end: VertexId,
        start: VertexId,
        middle: VertexId,
    },
    DegenerateMesh {
        end: VertexId,
        start: VertexId,
    },
}

impl fmt::Display for ValidationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationViolation::Loop { at } => write!(f, "loop at vertex {at}"),
            ValidationViolation::MultipleArrows { src, tgt, count } => {
                write!(f, "{count} parallel arrows {src} -> {tgt}")
            }
            ValidationViolation::TauOnProjective { x } => {
                write!(f, "tau defined on projective vertex {x}")
            }
            ValidationViolation::TauMissing { x } => {
                write!(f, "non-projective vertex {x} has no tau")
            }
            ValidationViolation::TauTargetInjective { x, tx } => {
                write!(f, "tau {x} -> {tx} lands on an injective vertex")
            }
            ValidationViolation::TauNotInjective { x1, x2, image } => {
                write!(f, "tau maps both {x1} and {x2} to {image}")
            }
            ValidationViolation::NonInjectiveNotHit { y } => {
                write!(f, "non-injective vertex {y} is not a tau image")
            }
            ValidationViolation::MeshMissingStartArrow { end, start, middle } => {
                write!(
                    f,
                    "mesh at {end}: arrow {middle} -> {end} present but {start} -> {middle} missing"
                )
            }
            ValidationViolation::MeshMissingEndArrow { end, start, middle } => {
                write!(
                    f,
                    "mesh at {end}: arrow {start} -> {middle} present but {middle} -> {end} missing"
                )
            }
            ValidationViolation::DegenerateMesh { end, start } => {
                write!(f, "degenerate mesh at {end}: start {start} has no outgoing arrows")
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ValidationReport {
    pub violations: Vec<ValidationViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Two directed paths with equal endpoints but different lengths, each
/// given as its vertex sequence.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WithLengthWitness {
    pub path_a: Vec<VertexId>,
    pub path_b: Vec<VertexId>,
}

impl fmt::Display for WithLengthWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fmt_path = |p: &[VertexId]| {
            p.iter()
                .map(|v| v.as_str())
                .collect::<Vec<_>>()
                .join(" -> ")
        };
        write!(
            f,
            "parallel paths of lengths {} and {}: [{}] vs [{}]",
            self.path_a.len() - 1,
            self.path_b.len() - 1,
            fmt_path(&self.path_a),
            fmt_path(&self.path_b)
        )
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum LengthFunctionError {
    #[error("unknown base vertex `{base}`")]
    UnknownBase { base: VertexId },
    #[error("no length function: contradictory walk {}", format_walk(.walk))]
    NotWithLength { walk: Vec<VertexId> },
    #[error("quiver not connected: `{missing}` unreachable from `{base}`")]
    Disconnected { base: VertexId, missing: VertexId },
}

fn format_walk(walk: &[VertexId]) -> String {
    walk.iter()
        .map(|v| v.as_str())
        .collect::<Vec<_>>()
        .join(" ~ ")
}

/// A vertex map between translation quivers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuiverMorphism {
    pub vertex_map: BTreeMap<VertexId, VertexId>,
}

impl QuiverMorphism {
    pub fn apply(&self, v: &VertexId) -> Option<&VertexId> {
        self.vertex_map.get(v)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CoveringViolation {
    UnmappedVertex { x: VertexId },
    ImageNotInTarget { x: VertexId, image: VertexId },
    ArrowNotPreserved { src: VertexId, tgt: VertexId },
    ProjectiveMismatch { x: VertexId },
    InjectiveMismatch { x: VertexId },
    TauUndefined { x: VertexId },
    TauNotCommuting { x: VertexId },
    OutStarNotBijective { x: VertexId },
    InStarNotBijective { x: VertexId },
    TargetInvalid { violation: ValidationViolation },
}

impl fmt::Display for CoveringViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoveringViolation::UnmappedVertex { x } => write!(f, "vertex {x} has no image"),
            CoveringViolation::ImageNotInTarget { x, image } => {
                write!(f, "image {image} of {x} is not a target vertex")
            }
            CoveringViolation::ArrowNotPreserved { src, tgt } => {
                write!(f, "arrow {src} -> {tgt} has no image arrow")
            }
            CoveringViolation::ProjectiveMismatch { x } => {
                write!(f, "projective flag differs between {x} and its image")
            }
            CoveringViolation::InjectiveMismatch { x } => {
                write!(f, "injective flag differs between {x} and its image")
            }
            CoveringViolation::TauUndefined { x } => {
                write!(f, "tau undefined at non-projective {x}")
            }
            CoveringViolation::TauNotCommuting { x } => {
                write!(f, "tau does not commute with the map at {x}")
            }
            CoveringViolation::OutStarNotBijective { x } => {
                write!(f, "outgoing arrows at {x} do not map bijectively")
            }
            CoveringViolation::InStarNotBijective { x } => {
                write!(f, "incoming arrows at {x} do not map bijectively")
            }
            CoveringViolation::TargetInvalid { violation } => {
                write!(f, "target quiver invalid: {violation}")
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoveringReport {
    pub violations: Vec<CoveringViolation>,
}

impl CoveringReport {
    pub fn is_covering(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies that `morphism` is a covering of translation quivers from
/// `source` onto `target`: flags and `tau` are preserved and the map
/// restricts to bijections on every arrow star. When `interior` is given,
/// only vertices in that set are checked (used for truncated covers, whose
/// boundary layer is incomplete by construction).
pub fn check_covering(
    source: &TranslationQuiver,
    target: &TranslationQuiver,
    morphism: &QuiverMorphism,
    interior: Option<&BTreeSet<VertexId>>,
) -> CoveringReport {
    let mut violations = Vec::new();
    if interior.is_none() {
        for violation in source.validate().violations {
            violations.push(CoveringViolation::TargetInvalid { violation });
        }
    }
    for violation in target.validate().violations {
        violations.push(CoveringViolation::TargetInvalid { violation });
    }
    let in_scope = |v: &VertexId| interior.map_or(true, |s| s.contains(v));
    for x in source.vertices() {
        if !in_scope(x) {
            continue;
        }
        let Some(px) = morphism.apply(x) else {
            violations.push(CoveringViolation::UnmappedVertex { x: x.clone() });
            continue;
        };
        if !target.has_vertex(px) {
            violations.push(CoveringViolation::ImageNotInTarget {
                x: x.clone(),
                image: px.clone(),
            });
            continue;
        }
        if source.is_projective(x) != target.is_projective(px) {
            violations.push(CoveringViolation::ProjectiveMismatch { x: x.clone() });
        }
        if source.is_injective(x) != target.is_injective(px) {
            violations.push(CoveringViolation::InjectiveMismatch { x: x.clone() });
        }
        if !source.is_projective(x) {
            match source.tau(x) {
                None => violations.push(CoveringViolation::TauUndefined { x: x.clone() }),
                Some(tx) => {
                    let commutes = morphism
                        .apply(tx)
                        .zip(target.tau(px))
                        .map_or(false, |(ptx, tpx)| ptx == tpx);
                    if !commutes {
                        violations.push(CoveringViolation::TauNotCommuting { x: x.clone() });
                    }
                }
            }
        }
        let out_ok = star_bijective(
            source.out_neighbors(x).collect(),
            target.out_neighbors(px).collect(),
            morphism,
        );
        if !out_ok {
            violations.push(CoveringViolation::OutStarNotBijective { x: x.clone() });
        }
        let in_ok = star_bijective(
            source.in_neighbors(x).collect(),
            target.in_neighbors(px).collect(),
            morphism,
        );
        if !in_ok {
            violations.push(CoveringViolation::InStarNotBijective { x: x.clone() });
        }
        for y in source.out_neighbors(x) {
            if let (Some(px), Some(py)) = (morphism.apply(x), morphism.apply(y)) {
                if !target.has_arrow(px, py) {
                    violations.push(CoveringViolation::ArrowNotPreserved {
                        src: x.clone(),
                        tgt: y.clone(),
                    });
                }
            }
        }
    }
    CoveringReport { violations }
}

fn star_bijective(
    star: Vec<&VertexId>,
    target_star: Vec<&VertexId>,
    morphism: &QuiverMorphism,
) -> bool {
    let mut images = BTreeSet::new();
    for y in &star {
        match morphism.apply(y) {
            Some(py) => {
                if !images.insert(py.clone()) {
                    return false;
                }
            }
            None => return false,
        }
    }
    let target: BTreeSet<VertexId> = target_star.into_iter().cloned().collect();
    images == target
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tqfile;

    fn v(s: &str) -> VertexId {
        VertexId::new(s)
    }

    /// The three-vertex component of A_2: S2 -> P1 -> S1 with tau S1 = S2.
    fn a2_component() -> TranslationQuiver {
        let mut q = TranslationQuiver::new();
        q.add_vertex(v("S2"), true, false).unwrap();
        q.add_vertex(v("P1"), true, true).unwrap();
        q.add_vertex(v("S1"), false, true).unwrap();
        q.add_arrow(v("S2"), v("P1")).unwrap();
        q.add_arrow(v("P1"), v("S1")).unwrap();
        q.set_tau(v("S1"), v("S2")).unwrap();
        q
    }

    #[test]
    fn a2_is_valid() {
        let q = a2_component();
        let report = q.validate();
        assert!(report.is_valid(), "unexpected: {:?}", report.violations);
        let meshes = q.meshes();
        assert_eq!(meshes.len(), 1);
        assert_eq!(meshes[0].start, v("S2"));
        assert_eq!(meshes[0].end, v("S1"));
        assert_eq!(meshes[0].middles, vec![v("P1")]);
    }

    #[test]
    fn tau_on_projective_is_reported() {
        let mut q = a2_component();
        q.set_tau(v("P1"), v("S2")).unwrap();
        let report = q.validate();
        assert!(report.violations.iter().any(|viol| matches!(
            viol,
            ValidationViolation::TauOnProjective { x } if *x == v("P1")
        )));
    }

    #[test]
    fn mesh_axiom_violation_names_both_vertices() {
        let mut q = TranslationQuiver::new();
        q.add_vertex(v("a"), true, false).unwrap();
        q.add_vertex(v("b"), true, true).unwrap();
        q.add_vertex(v("c"), false, true).unwrap();
        q.add_arrow(v("b"), v("c")).unwrap();
        // Arrow a -> b missing although b -> c crosses the mesh at c.
        q.set_tau(v("c"), v("a")).unwrap();
        let report = q.validate();
        assert!(report.violations.iter().any(|viol| matches!(
            viol,
            ValidationViolation::MeshMissingStartArrow { end, middle, .. }
                if *end == v("c") && *middle == v("b")
        )));
    }

    #[test]
    fn degenerate_mesh_is_an_error() {
        let mut q = TranslationQuiver::new();
        q.add_vertex(v("a"), true, false).unwrap();
        q.add_vertex(v("x"), false, true).unwrap();
        q.set_tau(v("x"), v("a")).unwrap();
        let report = q.validate();
        assert!(report
            .violations
            .iter()
            .any(|viol| matches!(viol, ValidationViolation::DegenerateMesh { .. })));
    }

    #[test]
    fn multiple_arrows_and_loops_are_reported() {
        let mut q = TranslationQuiver::new();
        q.add_vertex(v("a"), true, true).unwrap();
        q.add_vertex(v("b"), true, true).unwrap();
        q.add_arrow(v("a"), v("b")).unwrap();
        q.add_arrow(v("a"), v("b")).unwrap();
        q.add_arrow(v("a"), v("a")).unwrap();
        let report = q.validate();
        assert!(report.violations.iter().any(
            |viol| matches!(viol, ValidationViolation::MultipleArrows { count: 2, .. })
        ));
        assert!(report
            .violations
            .iter()
            .any(|viol| matches!(viol, ValidationViolation::Loop { .. })));
    }

    #[test]
    fn a2_is_with_length_and_has_length_function() {
        let q = a2_component();
        assert!(q.is_with_length().is_ok());
        let lengths = q.length_function(&v("S2")).unwrap();
        assert_eq!(lengths[&v("S2")], 0);
        assert_eq!(lengths[&v("P1")], 1);
        assert_eq!(lengths[&v("S1")], 2);
    }

    #[test]
    fn cycle_with_chord_is_not_with_length() {
        let mut q = TranslationQuiver::new();
        for name in ["c0", "c1", "c2"] {
            q.add_vertex(v(name), true, true).unwrap();
        }
        q.add_arrow(v("c0"), v("c1")).unwrap();
        q.add_arrow(v("c1"), v("c2")).unwrap();
        q.add_arrow(v("c2"), v("c0")).unwrap();
        q.add_arrow(v("c0"), v("c2")).unwrap();
        let witness = q.is_with_length().unwrap_err();
        assert_ne!(witness.path_a.len(), witness.path_b.len());
        assert_eq!(
            witness.path_a.first(),
            witness.path_b.first(),
            "witness paths must be parallel"
        );
        assert_eq!(witness.path_a.last(), witness.path_b.last());
    }

    #[test]
    fn acyclic_parallel_paths_of_unequal_length_are_found() {
        let mut q = TranslationQuiver::new();
        for name in ["x", "m", "y"] {
            q.add_vertex(v(name), true, true).unwrap();
        }
        q.add_arrow(v("x"), v("m")).unwrap();
        q.add_arrow(v("m"), v("y")).unwrap();
        q.add_arrow(v("x"), v("y")).unwrap();
        let witness = q.is_with_length().unwrap_err();
        let lens = (witness.path_a.len() - 1, witness.path_b.len() - 1);
        assert_eq!(lens, (1, 2));
    }

    #[test]
    fn length_function_reports_conflicting_walk() {
        let mut q = TranslationQuiver::new();
        for name in ["x", "m", "y"] {
            q.add_vertex(v(name), true, true).unwrap();
        }
        q.add_arrow(v("x"), v("m")).unwrap();
        q.add_arrow(v("m"), v("y")).unwrap();
        q.add_arrow(v("x"), v("y")).unwrap();
        let err = q.length_function(&v("x")).unwrap_err();
        assert!(matches!(err, LengthFunctionError::NotWithLength { .. }));
    }

    #[test]
    fn identity_is_a_covering() {
        let q = a2_component();
        let id = QuiverMorphism {
            vertex_map: q.vertices().map(|x| (x.clone(), x.clone())).collect(),
        };
        let report = check_covering(&q, &q, &id, None);
        assert!(report.is_covering(), "{:?}", report.violations);
    }

    #[test]
    fn flag_mismatch_breaks_covering() {
        let q = a2_component();
        let mut target = a2_component();
        target.projectives.remove(&v("S2"));
        let id = QuiverMorphism {
            vertex_map: q.vertices().map(|x| (x.clone(), x.clone())).collect(),
        };
        let report = check_covering(&q, &target, &id, None);
        assert!(report
            .violations
            .iter()
            .any(|viol| matches!(viol, CoveringViolation::ProjectiveMismatch { x } if *x == v("S2"))));
    }

    #[test]
    fn tq_roundtrip() {
        let q = a2_component();
        let text = tqfile::serialize(&q, &BTreeMap::new());
        let parsed = tqfile::parse(&text).unwrap();
        assert_eq!(parsed.quiver, q);
        assert_eq!(tqfile::serialize(&parsed.quiver, &parsed.dims), text);
    }
}
