//! Truncated universal covers of translation quivers.
//!
//! Cover vertices are homotopy classes of walks from a chosen base vertex,
//! where homotopy is generated by cancelling immediate backtracking and by
//! swapping the middle vertex of a two-step mesh crossing (in either
//! direction). The construction works by folding: grow the walk tree
//! breadth-first, then repeatedly merge nodes forced equal by the mesh
//! relations until nothing changes. Growth runs two layers past the
//! requested radius so identifications near the boundary are found before
//! truncation.

use crate::quiver::{
    LengthFunctionError, QuiverMorphism, TranslationQuiver, ValidationReport, VertexId,
};
use crate::tqfile::ArrowDims;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

#[derive(Clone, Debug, Error)]
pub enum CoverError {
    #[error("unknown base vertex `{0}`")]
    UnknownBaseVertex(VertexId),
    #[error("base quiver is not a valid translation quiver ({} violations)", report.violations.len())]
    InvalidBase { report: ValidationReport },
    #[error("internal cover invariant broken: {0}")]
    Internal(String),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum LiftError {
    #[error("start vertex `{0}` is not a cover vertex")]
    UnknownStart(VertexId),
    #[error("start vertex `{start}` lies over `{actual}`, path begins at `{expected}`")]
    StartNotOverPathSource {
        start: VertexId,
        actual: VertexId,
        expected: VertexId,
    },
    #[error("path step {position} uses nonexistent base arrow {src} -> {tgt}")]
    NoSuchArrowInBase {
        src: VertexId,
        tgt: VertexId,
        position: usize,
    },
    #[error("lift leaves the truncated cover at `{at}` (step {position}); increase the radius")]
    EscapesTruncation { at: VertexId, position: usize },
}

/// A radius-`radius` ball around `root` in the universal cover, together
/// with the covering map `pi` down to the base. Vertices at distance
/// exactly `radius` have incomplete arrow stars; `interior` collects the
/// vertices whose star and translate are fully present.
#[derive(Clone, Debug)]
pub struct TruncatedCover {
    pub cover: TranslationQuiver,
    pub pi: QuiverMorphism,
    pub root: VertexId,
    pub radius: usize,
    pub dist: BTreeMap<VertexId, usize>,
    pub lengths: BTreeMap<VertexId, i64>,
    pub interior: BTreeSet<VertexId>,
}

impl TruncatedCover {
    pub fn base_of(&self, cover_vertex: &VertexId) -> Option<&VertexId> {
        self.pi.apply(cover_vertex)
    }

    /// Cover vertices lying over `base_vertex`, in name order.
    pub fn fiber(&self, base_vertex: &VertexId) -> Vec<VertexId> {
        self.pi
            .vertex_map
            .iter()
            .filter(|(_, b)| *b == base_vertex)
            .map(|(c, _)| c.clone())
            .collect()
    }

    /// Arrow dims of the base pulled back along `pi`.
    pub fn pull_back_dims(&self, base_dims: &ArrowDims) -> ArrowDims {
        self.cover
            .arrows()
            .map(|(s, t)| {
                let key = (
                    self.pi.apply(s).expect("cover vertex has image").clone(),
                    self.pi.apply(t).expect("cover vertex has image").clone(),
                );
                let dim = base_dims.get(&key).copied().unwrap_or(1);
                ((s.clone(), t.clone()), dim)
            })
            .collect()
    }

    /// Lifts a directed base path (given as its vertex sequence) to the
    /// cover, starting at the cover vertex `start`.
    pub fn lift_path(
        &self,
        base_path: &[VertexId],
        start: &VertexId,
    ) -> Result<Vec<VertexId>, LiftError> {
        let Some(over) = self.pi.apply(start) else {
            return Err(LiftError::UnknownStart(start.clone()));
        };
        let Some(first) = base_path.first() else {
            return Ok(vec![start.clone()]);
        };
        if over != first {
            return Err(LiftError::StartNotOverPathSource {
                start: start.clone(),
                actual: over.clone(),
                expected: first.clone(),
            });
        }
        let mut lifted = vec![start.clone()];
        let mut current = start.clone();
        for (position, step) in base_path.windows(2).enumerate() {
            let (src, tgt) = (&step[0], &step[1]);
            let next = self
                .cover
                .out_neighbors(&current)
                .find(|c| self.pi.apply(c) == Some(tgt))
                .cloned();
            match next {
                Some(next) => {
                    lifted.push(next.clone());
                    current = next;
                }
                None => {
                    if self.dist[&current] >= self.radius {
                        return Err(LiftError::EscapesTruncation {
                            at: current.clone(),
                            position,
                        });
                    }
                    return Err(LiftError::NoSuchArrowInBase {
                        src: src.clone(),
                        tgt: tgt.clone(),
                        position,
                    });
                }
            }
        }
        Ok(lifted)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Dir {
    Out,
    In,
}

struct Node {
    base_v: VertexId,
    star: BTreeMap<(Dir, VertexId), usize>,
    dist: usize,
}

struct Folder<'a> {
    base: &'a TranslationQuiver,
    nodes: Vec<Node>,
    parent: Vec<usize>,
    work_radius: usize,
}

impl<'a> Folder<'a> {
    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn new_node(&mut self, base_v: VertexId, dist: usize) -> usize {
        let id = self.nodes.len();
        self.nodes.push(Node {
            base_v,
            star: BTreeMap::new(),
            dist,
        });
        self.parent.push(id);
        id
    }

    fn link(&mut self, from: usize, to: usize, dir: Dir, to_base: VertexId, from_base: VertexId) {
        let back = match dir {
            Dir::Out => Dir::In,
            Dir::In => Dir::Out,
        };
        self.nodes[from].star.insert((dir, to_base), to);
        self.nodes[to].star.insert((back, from_base), from);
    }

    /// Creates missing star links for every representative inside the work
    /// radius. Newly created nodes are expanded in the same sweep.
    fn expand(&mut self) -> bool {
        let mut changed = false;
        let mut i = 0;
        while i < self.nodes.len() {
            if self.find(i) != i || self.nodes[i].dist >= self.work_radius {
                i += 1;
                continue;
            }
            let bv = self.nodes[i].base_v.clone();
            let dist = self.nodes[i].dist;
            let outs: Vec<VertexId> = self.base.out_neighbors(&bv).cloned().collect();
            let ins: Vec<VertexId> = self.base.in_neighbors(&bv).cloned().collect();
            for w in outs {
                if !self.nodes[i].star.contains_key(&(Dir::Out, w.clone())) {
                    let m = self.new_node(w.clone(), dist + 1);
                    self.link(i, m, Dir::Out, w, bv.clone());
                    changed = true;
                }
            }
            for w in ins {
                if !self.nodes[i].star.contains_key(&(Dir::In, w.clone())) {
                    let m = self.new_node(w.clone(), dist + 1);
                    self.link(i, m, Dir::In, w, bv.clone());
                    changed = true;
                }
            }
            i += 1;
        }
        changed
    }

    /// Merges the endpoints of two-step mesh crossings through different
    /// middles, in both directions, until no pair is left.
    fn mesh_close(&mut self, tau_inv: &BTreeMap<VertexId, VertexId>) -> bool {
        let mut queue: Vec<(usize, usize)> = Vec::new();
        for i in 0..self.nodes.len() {
            if self.find(i) != i {
                continue;
            }
            let bv = self.nodes[i].base_v.clone();
            if let Some(end) = tau_inv.get(&bv) {
                let targets = self.two_step_targets(i, Dir::Out, &bv, end);
                queue.extend(pairs(&targets));
            }
            if let Some(start) = self.base.tau(&bv).cloned() {
                let targets = self.two_step_targets(i, Dir::In, &start, &bv);
                queue.extend(pairs(&targets));
            }
        }
        let mut changed = false;
        while let Some((a, b)) = queue.pop() {
            changed |= self.union(a, b, &mut queue);
        }
        changed
    }

    /// Endpoints of the walks `node -dir-> middle -dir-> far` over every
    /// middle of the mesh with the given start and end. `dir = Out` walks
    /// start to end, `dir = In` walks end to start.
    fn two_step_targets(&mut self, node: usize, dir: Dir, start: &VertexId, end: &VertexId) -> Vec<usize> {
        let far = match dir {
            Dir::Out => end.clone(),
            Dir::In => start.clone(),
        };
        let middles: Vec<VertexId> = self.base.out_neighbors(start).cloned().collect();
        let mut found = Vec::new();
        for y in middles {
            let Some(&m) = self.nodes[node].star.get(&(dir, y)) else {
                continue;
            };
            let m = self.find(m);
            let Some(&e) = self.nodes[m].star.get(&(dir, far.clone())) else {
                continue;
            };
            let e = self.find(e);
            found.push(e);
        }
        found
    }

    fn union(&mut self, a: usize, b: usize, queue: &mut Vec<(usize, usize)>) -> bool {
        let a = self.find(a);
        let b = self.find(b);
        if a == b {
            return false;
        }
        let (keep, drop) = (a.min(b), a.max(b));
        assert_eq!(
            self.nodes[keep].base_v, self.nodes[drop].base_v,
            "folding may only merge nodes over the same base vertex"
        );
        self.parent[drop] = keep;
        self.nodes[keep].dist = self.nodes[keep].dist.min(self.nodes[drop].dist);
        let drop_star = std::mem::take(&mut self.nodes[drop].star);
        for (key, tgt) in drop_star {
            match self.nodes[keep].star.get(&key).copied() {
                Some(existing) => {
                    if self.find(existing) != self.find(tgt) {
                        queue.push((existing, tgt));
                    }
                }
                None => {
                    self.nodes[keep].star.insert(key, tgt);
                }
            }
        }
        true
    }

    /// Walk-length distances from the root, recomputed from scratch.
    fn recompute_dists(&mut self, root: usize) {
        let root = self.find(root);
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        seen.insert(root, 0);
        let mut queue = VecDeque::new();
        queue.push_back(root);
        while let Some(i) = queue.pop_front() {
            let d = seen[&i];
            let targets: Vec<usize> = self.nodes[i].star.values().copied().collect();
            for t in targets {
                let t = self.find(t);
                if !seen.contains_key(&t) {
                    seen.insert(t, d + 1);
                    queue.push_back(t);
                }
            }
        }
        for (i, d) in seen {
            self.nodes[i].dist = d;
        }
    }
}

fn pairs(targets: &[usize]) -> Vec<(usize, usize)> {
    targets
        .iter()
        .skip(1)
        .map(|&t| (targets[0], t))
        .collect()
}

/// Builds the truncated universal cover of `base` around `base_vertex`.
/// Only the connected component of `base_vertex` is covered.
pub fn universal_cover(
    base: &TranslationQuiver,
    base_vertex: &VertexId,
    radius: usize,
) -> Result<TruncatedCover, CoverError> {
    if !base.has_vertex(base_vertex) {
        return Err(CoverError::UnknownBaseVertex(base_vertex.clone()));
    }
    let report = base.validate();
    if !report.is_valid() {
        return Err(CoverError::InvalidBase { report });
    }
    let tau_inv = base.tau_inverse_map();
    let mut folder = Folder {
        base,
        nodes: Vec::new(),
        parent: Vec::new(),
        work_radius: radius + 2,
    };
    let root = folder.new_node(base_vertex.clone(), 0);
    loop {
        let grew = folder.expand();
        let merged = folder.mesh_close(&tau_inv);
        folder.recompute_dists(root);
        if !grew && !merged {
            break;
        }
    }

    // The fixpoint is reached; resolve every star target to its
    // representative once and work with plain data from here on.
    let root = folder.find(root);
    let rep_ids: Vec<usize> = (0..folder.nodes.len())
        .filter(|&i| folder.parent[i] == i)
        .collect();
    struct Resolved {
        base_v: VertexId,
        dist: usize,
        star: BTreeMap<(Dir, VertexId), usize>,
    }
    let mut resolved: BTreeMap<usize, Resolved> = BTreeMap::new();
    for &i in &rep_ids {
        let raw: Vec<((Dir, VertexId), usize)> = folder.nodes[i]
            .star
            .iter()
            .map(|(k, &t)| (k.clone(), t))
            .collect();
        let star = raw
            .into_iter()
            .map(|(k, t)| (k, folder.find(t)))
            .collect();
        resolved.insert(
            i,
            Resolved {
                base_v: folder.nodes[i].base_v.clone(),
                dist: folder.nodes[i].dist,
                star,
            },
        );
    }
    let kept: BTreeSet<usize> = resolved
        .iter()
        .filter(|(_, n)| n.dist <= radius)
        .map(|(&i, _)| i)
        .collect();

    // Canonical names: breadth-first from the root, stars in (out, in) then
    // base-name order, counting per base vertex.
    let mut names: BTreeMap<usize, VertexId> = BTreeMap::new();
    let mut counters: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut order: Vec<usize> = Vec::new();
    let mut queue = VecDeque::new();
    let mut name_node = |bv: &VertexId| -> VertexId {
        let n = counters.entry(bv.clone()).or_insert(0);
        let name = VertexId::new(format!("{}~{}", bv, n));
        *n += 1;
        name
    };
    names.insert(root, name_node(&resolved[&root].base_v));
    order.push(root);
    queue.push_back(root);
    while let Some(i) = queue.pop_front() {
        for &t in resolved[&i].star.values() {
            if kept.contains(&t) && !names.contains_key(&t) {
                names.insert(t, name_node(&resolved[&t].base_v));
                order.push(t);
                queue.push_back(t);
            }
        }
    }
    if order.len() != kept.len() {
        return Err(CoverError::Internal(
            "kept cover region is not connected to the root".into(),
        ));
    }

    let mut cover = TranslationQuiver::new();
    let mut pi_map = BTreeMap::new();
    let mut dist = BTreeMap::new();
    for &i in &order {
        let bv = &resolved[&i].base_v;
        let name = names[&i].clone();
        cover
            .add_vertex(name.clone(), base.is_projective(bv), base.is_injective(bv))
            .map_err(|e| CoverError::Internal(e.to_string()))?;
        pi_map.insert(name.clone(), bv.clone());
        dist.insert(name, resolved[&i].dist);
    }
    for &i in &order {
        for ((d, _), &t) in &resolved[&i].star {
            if *d == Dir::Out && kept.contains(&t) {
                cover
                    .add_arrow(names[&i].clone(), names[&t].clone())
                    .map_err(|e| CoverError::Internal(e.to_string()))?;
            }
        }
    }
    // tau on the cover: step backwards through any middle of the mesh;
    // after folding the result does not depend on the middle.
    for &i in &order {
        let node = &resolved[&i];
        if base.is_projective(&node.base_v) {
            continue;
        }
        let Some(tbv) = base.tau(&node.base_v) else {
            continue;
        };
        let mut translates = Vec::new();
        for y in base.in_neighbors(&node.base_v) {
            let Some(&m) = node.star.get(&(Dir::In, y.clone())) else {
                continue;
            };
            let Some(&t) = resolved[&m].star.get(&(Dir::In, tbv.clone())) else {
                continue;
            };
            if kept.contains(&t) {
                translates.push(t);
            }
        }
        debug_assert!(
            translates.windows(2).all(|w| w[0] == w[1]),
            "translate must not depend on the middle"
        );
        if let Some(&t) = translates.first() {
            cover
                .set_tau(names[&i].clone(), names[&t].clone())
                .map_err(|e| CoverError::Internal(e.to_string()))?;
        }
    }

    let root_name = names[&root].clone();
    let lengths = cover
        .length_function(&root_name)
        .map_err(|e: LengthFunctionError| CoverError::Internal(e.to_string()))?;
    let interior = cover
        .vertices()
        .filter(|v| {
            dist[*v] < radius && (cover.is_projective(v) || cover.tau(v).is_some())
        })
        .cloned()
        .collect();
    Ok(TruncatedCover {
        cover,
        pi: QuiverMorphism { vertex_map: pi_map },
        root: root_name,
        radius,
        dist,
        lengths,
        interior,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::check_covering;
    use crate::tqfile;

    fn v(s: &str) -> VertexId {
        VertexId::new(s)
    }

    const A2: &str = "\
vertex S2 proj
vertex P1 proj inj
vertex S1 inj
arrow S2 P1
arrow P1 S1
tau S1 -> S2
";

    const TUBE: &str = "\
vertex m1
vertex u1
vertex m2
vertex u2
arrow m1 u1
arrow u1 m2
arrow m2 u2
arrow u2 m1
tau m1 -> m2
tau m2 -> m1
tau u1 -> u2
tau u2 -> u1
";

    const CYCLE3: &str = "\
vertex c0 proj inj
vertex c1 proj inj
vertex c2 proj inj
arrow c0 c1
arrow c1 c2
arrow c2 c0
";

    const TWO_MIDDLES: &str = "\
vertex s proj
vertex a proj inj
vertex b proj inj
vertex e inj
arrow s a
arrow s b
arrow a e
arrow b e
tau e -> s
";

    #[test]
    fn simply_connected_base_gives_isomorphic_cover() {
        let base = tqfile::parse(A2).unwrap().quiver;
        let cov = universal_cover(&base, &v("S2"), 8).unwrap();
        assert_eq!(cov.cover.vertex_count(), 3);
        assert_eq!(cov.cover.arrow_count(), 2);
        assert!(cov.cover.validate().is_valid());
        let report = check_covering(&cov.cover, &base, &cov.pi, None);
        assert!(report.is_covering(), "{:?}", report.violations);
        assert_eq!(cov.interior.len(), 3);
    }

    #[test]
    fn mesh_relation_folds_the_two_middle_square() {
        let base = tqfile::parse(TWO_MIDDLES).unwrap().quiver;
        for root in ["s", "a", "e"] {
            let cov = universal_cover(&base, &v(root), 10).unwrap();
            assert_eq!(cov.cover.vertex_count(), 4, "root {root}");
            assert!(cov.cover.validate().is_valid(), "root {root}");
            let report = check_covering(&cov.cover, &base, &cov.pi, None);
            assert!(report.is_covering(), "root {root}: {:?}", report.violations);
        }
    }

    #[test]
    fn rank_two_tube_unrolls_to_a_line() {
        let base = tqfile::parse(TUBE).unwrap().quiver;
        assert!(base.validate().is_valid());
        let radius = 5;
        let cov = universal_cover(&base, &v("m1"), radius).unwrap();
        assert_eq!(cov.cover.vertex_count(), 2 * radius + 1);
        assert!(cov.cover.is_with_length().is_ok());
        let report = check_covering(&cov.cover, &base, &cov.pi, Some(&cov.interior));
        assert!(report.is_covering(), "{:?}", report.violations);
        // The base itself is not with length: the 4-cycle is a parallel
        // pair (trivial path, full cycle) at m1.
        assert!(base.is_with_length().is_err());
    }

    #[test]
    fn cycle_of_projective_injectives_unrolls_to_a_line() {
        let base = tqfile::parse(CYCLE3).unwrap().quiver;
        assert!(base.validate().is_valid());
        let radius = 4;
        let cov = universal_cover(&base, &v("c0"), radius).unwrap();
        assert_eq!(cov.cover.vertex_count(), 2 * radius + 1);
        for vtx in cov.cover.vertices() {
            assert!(cov.cover.is_projective(vtx) && cov.cover.is_injective(vtx));
        }
        let report = check_covering(&cov.cover, &base, &cov.pi, Some(&cov.interior));
        assert!(report.is_covering(), "{:?}", report.violations);
    }

    #[test]
    fn radius_zero_keeps_only_the_root() {
        let base = tqfile::parse(TUBE).unwrap().quiver;
        let cov = universal_cover(&base, &v("u1"), 0).unwrap();
        assert_eq!(cov.cover.vertex_count(), 1);
        assert_eq!(cov.root, v("u1~0"));
        assert!(cov.interior.is_empty());
    }

    #[test]
    fn lift_follows_the_line_and_reports_truncation() {
        let base = tqfile::parse(TUBE).unwrap().quiver;
        let cov = universal_cover(&base, &v("m1"), 3).unwrap();
        let short = cov
            .lift_path(&[v("m1"), v("u1"), v("m2")], &cov.root)
            .unwrap();
        assert_eq!(short.len(), 3);
        assert_eq!(cov.base_of(&short[2]), Some(&v("m2")));
        let long = cov.lift_path(
            &[v("m1"), v("u1"), v("m2"), v("u2"), v("m1")],
            &cov.root,
        );
        assert!(matches!(long, Err(LiftError::EscapesTruncation { .. })));
        let bad = cov.lift_path(&[v("m1"), v("m2")], &cov.root);
        assert!(matches!(bad, Err(LiftError::NoSuchArrowInBase { .. })));
    }

    #[test]
    fn fibers_partition_the_cover() {
        let base = tqfile::parse(TUBE).unwrap().quiver;
        let cov = universal_cover(&base, &v("m1"), 4).unwrap();
        let total: usize = base
            .vertices()
            .map(|b| cov.fiber(b).len())
            .sum();
        assert_eq!(total, cov.cover.vertex_count());
        for b in base.vertices() {
            for c in cov.fiber(b) {
                assert_eq!(cov.base_of(&c), Some(b));
            }
        }
    }

    #[test]
    fn cover_lengths_step_by_one_along_arrows() {
        let base = tqfile::parse(TUBE).unwrap().quiver;
        let cov = universal_cover(&base, &v("m1"), 5).unwrap();
        for (s, t) in cov.cover.arrows() {
            assert_eq!(cov.lengths[t], cov.lengths[s] + 1);
        }
    }
}
