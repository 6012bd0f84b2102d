//! The mesh category of a with-length translation quiver.
//!
//! Hom spaces are presented on an ambient basis of decorated paths: a
//! directed path together with one basis-component index per arrow. The
//! mesh ideal is spanned by all products `p * gamma_z * q` over meshes
//! whose crossing fits between source and target; hom bases are canonical
//! coset representatives modulo that span. Radical powers come in two
//! forms, a graded shortcut and a direct composition recursion, which must
//! agree and are tested against each other.
//!
//! On truncated covers every query first checks that the region it needs
//! lies strictly inside the truncation radius and refuses otherwise,
//! naming the radius that would suffice.

use crate::field::Field;
use crate::linalg::RowSpace;
use crate::modulation::SplitModulation;
use crate::quiver::{LengthFunctionError, TranslationQuiver, VertexId};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};
use thiserror::Error;

#[derive(Clone, Debug, Error)]
pub enum MeshError {
    #[error("no length function on the quiver: {0}")]
    NoLengthFunction(LengthFunctionError),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(VertexId),
    #[error("path budget exceeded between `{from}` and `{to}` (cap {cap})")]
    PathCapExceeded {
        from: VertexId,
        to: VertexId,
        cap: usize,
    },
    #[error("truncation too small to decide hom({from}, {to}); radius {needed_radius} suffices")]
    UndecidableTruncation {
        from: VertexId,
        to: VertexId,
        needed_radius: usize,
    },
    #[error("singular pairing at mesh end `{end}`")]
    SingularPairing { end: VertexId },
    #[error("no arrow {src} -> {tgt} or component {component} out of range")]
    NoSuchArrowComponent {
        src: VertexId,
        tgt: VertexId,
        component: usize,
    },
    #[error("coefficient vector has length {got}, ambient basis has {expected}")]
    VectorLength { expected: usize, got: usize },
}

/// Distance data of a truncated cover, used for decidability guards.
#[derive(Clone, Debug)]
pub struct TruncationInfo {
    pub dist: BTreeMap<VertexId, usize>,
    pub radius: usize,
}

/// One ambient basis element of a hom space: a path given by its vertex
/// sequence and one component index per arrow.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct PathElem {
    pub path: Vec<VertexId>,
    pub components: Vec<usize>,
}

impl PathElem {
    fn trivial(x: &VertexId) -> PathElem {
        PathElem {
            path: vec![x.clone()],
            components: Vec::new(),
        }
    }

    fn concat(&self, other: &PathElem) -> PathElem {
        let mut path = self.path.clone();
        path.extend(other.path.iter().skip(1).cloned());
        let mut components = self.components.clone();
        components.extend(other.components.iter().copied());
        PathElem { path, components }
    }
}

impl fmt::Display for PathElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.path.iter().enumerate() {
            if i > 0 {
                write!(f, " > {v}[{}]", self.components[i - 1])?;
            } else {
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}

struct HomData<K: Field> {
    ambient: Vec<PathElem>,
    index: BTreeMap<PathElem, usize>,
    relations: RowSpace<K>,
    basis: Vec<Vec<K::Elem>>,
}

/// A hom space presented by its ambient paths and a canonical basis of
/// coset representatives.
#[derive(Clone, Debug)]
pub struct HomBasis<K: Field> {
    pub source: VertexId,
    pub target: VertexId,
    pub ambient: Vec<PathElem>,
    pub relations_dim: usize,
    pub basis: Vec<Vec<K::Elem>>,
}

impl<K: Field> HomBasis<K> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// A radical power `rad^n(source, target)` stored as its full preimage in
/// ambient coordinates (always containing the mesh relations), plus its
/// dimension inside the hom space.
#[derive(Clone, Debug)]
pub struct RadicalPower<K: Field> {
    pub source: VertexId,
    pub target: VertexId,
    pub n: usize,
    pub space: RowSpace<K>,
    pub hom_dim: usize,
}

pub struct MeshCtx<'a, K: Field> {
    quiver: &'a TranslationQuiver,
    modulation: &'a SplitModulation<K>,
    lengths: BTreeMap<VertexId, i64>,
    trunc: Option<TruncationInfo>,
    path_cap: usize,
    cache: Mutex<BTreeMap<(VertexId, VertexId), Arc<HomData<K>>>>,
}

impl<'a, K: Field> MeshCtx<'a, K> {
    /// Sets up the category over a connected with-length quiver. The level
    /// function is anchored at the least vertex name; only level
    /// differences matter downstream.
    pub fn new(
        quiver: &'a TranslationQuiver,
        modulation: &'a SplitModulation<K>,
        trunc: Option<TruncationInfo>,
        path_cap: usize,
    ) -> Result<MeshCtx<'a, K>, MeshError> {
        let anchor = quiver
            .vertices()
            .next()
            .cloned()
            .ok_or_else(|| MeshError::UnknownVertex(VertexId::new("<empty>")))?;
        let lengths = quiver
            .length_function(&anchor)
            .map_err(MeshError::NoLengthFunction)?;
        Ok(MeshCtx {
            quiver,
            modulation,
            lengths,
            trunc,
            path_cap,
            cache: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn quiver(&self) -> &TranslationQuiver {
        self.quiver
    }

    pub fn lengths(&self) -> &BTreeMap<VertexId, i64> {
        &self.lengths
    }

    /// Level difference `target - source`; every path between them has
    /// exactly this many arrows.
    pub fn level_gap(&self, x: &VertexId, y: &VertexId) -> i64 {
        self.lengths[y] - self.lengths[x]
    }

    fn check_vertex(&self, v: &VertexId) -> Result<(), MeshError> {
        if self.quiver.has_vertex(v) {
            Ok(())
        } else {
            Err(MeshError::UnknownVertex(v.clone()))
        }
    }

    /// Truncation guard: deciding hom(x, y) inspects every vertex within
    /// `gap` forward steps of `x`, all of which must have complete stars.
    fn guard(&self, x: &VertexId, y: &VertexId, gap: i64) -> Result<(), MeshError> {
        if gap <= 0 {
            return Ok(());
        }
        let Some(t) = &self.trunc else {
            return Ok(());
        };
        let reach = t.dist[x] + gap as usize;
        if reach + 1 > t.radius {
            return Err(MeshError::UndecidableTruncation {
                from: x.clone(),
                to: y.clone(),
                needed_radius: reach + 1,
            });
        }
        Ok(())
    }

    fn paths_between(&self, x: &VertexId, y: &VertexId) -> Vec<Vec<VertexId>> {
        let mut found = Vec::new();
        let mut stack = vec![x.clone()];
        self.paths_dfs(&mut stack, y, &mut found);
        found
    }

    fn paths_dfs(&self, stack: &mut Vec<VertexId>, y: &VertexId, found: &mut Vec<Vec<VertexId>>) {
        let current = stack.last().expect("stack nonempty").clone();
        if current == *y {
            found.push(stack.clone());
            return;
        }
        if self.lengths[&current] >= self.lengths[y] {
            return;
        }
        let nexts: Vec<VertexId> = self.quiver.out_neighbors(&current).cloned().collect();
        for n in nexts {
            stack.push(n);
            self.paths_dfs(stack, y, found);
            stack.pop();
        }
    }

    /// All component index tuples for the arrows along `path`, in
    /// lexicographic order. `None` when the count would exceed the budget.
    fn component_tuples(&self, path: &[VertexId], budget: usize) -> Option<Vec<Vec<usize>>> {
        let dims: Vec<usize> = path
            .windows(2)
            .map(|w| {
                self.modulation
                    .dim(&w[0], &w[1])
                    .expect("path steps along arrows")
            })
            .collect();
        let count = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .filter(|&c| c <= budget)?;
        let mut tuples = Vec::with_capacity(count);
        let mut cur = vec![0usize; dims.len()];
        loop {
            tuples.push(cur.clone());
            let mut i = dims.len();
            loop {
                if i == 0 {
                    return Some(tuples);
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < dims[i] {
                    break;
                }
                cur[i] = 0;
            }
        }
    }

    fn hom_data(&self, x: &VertexId, y: &VertexId) -> Result<Arc<HomData<K>>, MeshError> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        let key = (x.clone(), y.clone());
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let gap = self.level_gap(x, y);
        self.guard(x, y, gap)?;
        let field = self.modulation.field().clone();

        let mut ambient: Vec<PathElem> = Vec::new();
        if x == y {
            ambient.push(PathElem::trivial(x));
        } else if gap > 0 {
            for path in self.paths_between(x, y) {
                let budget = self.path_cap.saturating_sub(ambient.len());
                let tuples = self.component_tuples(&path, budget).ok_or_else(|| {
                    MeshError::PathCapExceeded {
                        from: x.clone(),
                        to: y.clone(),
                        cap: self.path_cap,
                    }
                })?;
                for components in tuples {
                    ambient.push(PathElem {
                        path: path.clone(),
                        components,
                    });
                }
            }
            ambient.sort();
        }
        let index: BTreeMap<PathElem, usize> = ambient
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();

        let mut gens: Vec<Vec<K::Elem>> = Vec::new();
        if !ambient.is_empty() && x != y {
            for z in self.quiver.vertices() {
                let Some(s) = self.quiver.tau(z) else {
                    continue;
                };
                if self.lengths[z] > self.lengths[y] || self.lengths[s] < self.lengths[x] {
                    continue;
                }
                let ps = self.paths_between(x, s);
                if ps.is_empty() {
                    continue;
                }
                let qs = self.paths_between(z, y);
                if qs.is_empty() {
                    continue;
                }
                let gamma = self
                    .modulation
                    .mesh_element(self.quiver, z)
                    .ok_or_else(|| MeshError::SingularPairing { end: z.clone() })?;
                for p in &ps {
                    let p_tuples = self
                        .component_tuples(p, self.path_cap)
                        .ok_or_else(|| MeshError::PathCapExceeded {
                            from: x.clone(),
                            to: y.clone(),
                            cap: self.path_cap,
                        })?;
                    for q in &qs {
                        let q_tuples = self.component_tuples(q, self.path_cap).ok_or_else(|| {
                            MeshError::PathCapExceeded {
                                from: x.clone(),
                                to: y.clone(),
                                cap: self.path_cap,
                            }
                        })?;
                        for pc in &p_tuples {
                            for qc in &q_tuples {
                                if gens.len() >= self.path_cap {
                                    return Err(MeshError::PathCapExceeded {
                                        from: x.clone(),
                                        to: y.clone(),
                                        cap: self.path_cap,
                                    });
                                }
                                let mut vec = vec![field.zero(); ambient.len()];
                                for (m, c) in &gamma.parts {
                                    for l in 0..c.rows() {
                                        for k in 0..c.cols() {
                                            let coeff = c.get(l, k);
                                            if field.is_zero(coeff) {
                                                continue;
                                            }
                                            let mut full_path = p.clone();
                                            full_path.push(m.clone());
                                            full_path.push(z.clone());
                                            full_path.extend(q.iter().skip(1).cloned());
                                            let mut comps = pc.clone();
                                            comps.push(l);
                                            comps.push(k);
                                            comps.extend(qc.iter().copied());
                                            let elem = PathElem {
                                                path: full_path,
                                                components: comps,
                                            };
                                            let idx = *index
                                                .get(&elem)
                                                .expect("mesh term is an ambient path");
                                            vec[idx] = field.add(&vec[idx], coeff);
                                        }
                                    }
                                }
                                gens.push(vec);
                            }
                        }
                    }
                }
            }
        }
        let relations = RowSpace::from_rows(field.clone(), ambient.len(), gens);
        let basis =
            RowSpace::full(field.clone(), ambient.len()).quotient_representatives(&relations);
        let data = Arc::new(HomData {
            ambient,
            index,
            relations,
            basis,
        });
        self.cache.lock().unwrap().insert(key, data.clone());
        Ok(data)
    }

    pub fn hom_basis(&self, x: &VertexId, y: &VertexId) -> Result<HomBasis<K>, MeshError> {
        let data = self.hom_data(x, y)?;
        Ok(HomBasis {
            source: x.clone(),
            target: y.clone(),
            ambient: data.ambient.clone(),
            relations_dim: data.relations.dim(),
            basis: data.basis.clone(),
        })
    }

    pub fn hom_dim(&self, x: &VertexId, y: &VertexId) -> Result<usize, MeshError> {
        Ok(self.hom_data(x, y)?.basis.len())
    }

    /// Canonical representative of a coset modulo the mesh relations.
    pub fn reduce(
        &self,
        x: &VertexId,
        y: &VertexId,
        v: &[K::Elem],
    ) -> Result<Vec<K::Elem>, MeshError> {
        let data = self.hom_data(x, y)?;
        if v.len() != data.ambient.len() {
            return Err(MeshError::VectorLength {
                expected: data.ambient.len(),
                got: v.len(),
            });
        }
        Ok(data.relations.reduce(v))
    }

    pub fn is_zero_hom(&self, x: &VertexId, y: &VertexId, v: &[K::Elem]) -> Result<bool, MeshError> {
        let field = self.modulation.field();
        Ok(self.reduce(x, y, v)?.iter().all(|e| field.is_zero(e)))
    }

    pub fn identity_vec(&self, x: &VertexId) -> Result<Vec<K::Elem>, MeshError> {
        let data = self.hom_data(x, x)?;
        let field = self.modulation.field();
        let mut v = vec![field.zero(); data.ambient.len()];
        let idx = data.index[&PathElem::trivial(x)];
        v[idx] = field.one();
        Ok(v)
    }

    /// The class of a single arrow with a chosen basis component, as an
    /// ambient vector of hom(src, tgt).
    pub fn arrow_class(
        &self,
        src: &VertexId,
        tgt: &VertexId,
        component: usize,
    ) -> Result<Vec<K::Elem>, MeshError> {
        let in_range = self
            .modulation
            .dim(src, tgt)
            .map_or(false, |d| component < d);
        if !self.quiver.has_arrow(src, tgt) || !in_range {
            return Err(MeshError::NoSuchArrowComponent {
                src: src.clone(),
                tgt: tgt.clone(),
                component,
            });
        }
        let data = self.hom_data(src, tgt)?;
        let field = self.modulation.field();
        let elem = PathElem {
            path: vec![src.clone(), tgt.clone()],
            components: vec![component],
        };
        let mut v = vec![field.zero(); data.ambient.len()];
        v[data.index[&elem]] = field.one();
        Ok(v)
    }

    /// Composes `f: x -> y` then `g: y -> z` and reduces the result.
    pub fn compose(
        &self,
        x: &VertexId,
        y: &VertexId,
        z: &VertexId,
        f: &[K::Elem],
        g: &[K::Elem],
    ) -> Result<Vec<K::Elem>, MeshError> {
        let data_xy = self.hom_data(x, y)?;
        let data_yz = self.hom_data(y, z)?;
        let data_xz = self.hom_data(x, z)?;
        if f.len() != data_xy.ambient.len() {
            return Err(MeshError::VectorLength {
                expected: data_xy.ambient.len(),
                got: f.len(),
            });
        }
        if g.len() != data_yz.ambient.len() {
            return Err(MeshError::VectorLength {
                expected: data_yz.ambient.len(),
                got: g.len(),
            });
        }
        let field = self.modulation.field();
        let mut out = vec![field.zero(); data_xz.ambient.len()];
        for (i, fi) in f.iter().enumerate() {
            if field.is_zero(fi) {
                continue;
            }
            for (j, gj) in g.iter().enumerate() {
                if field.is_zero(gj) {
                    continue;
                }
                let elem = data_xy.ambient[i].concat(&data_yz.ambient[j]);
                let idx = *data_xz
                    .index
                    .get(&elem)
                    .expect("composite of paths is a path");
                out[idx] = field.add(&out[idx], &field.mul(fi, gj));
            }
        }
        Ok(data_xz.relations.reduce(&out))
    }

    /// Composes a chain `morphs[i]: points[i] -> points[i+1]` left to
    /// right.
    pub fn compose_chain(
        &self,
        points: &[VertexId],
        morphs: &[Vec<K::Elem>],
    ) -> Result<Vec<K::Elem>, MeshError> {
        assert_eq!(points.len(), morphs.len() + 1, "chain shape");
        let mut acc = match morphs.first() {
            Some(m) => m.clone(),
            None => self.identity_vec(&points[0])?,
        };
        for (i, g) in morphs.iter().enumerate().skip(1) {
            acc = self.compose(&points[0], &points[i], &points[i + 1], &acc, g)?;
        }
        Ok(acc)
    }

    /// `rad^n(x, y)` through the graded shortcut: the full hom space when
    /// `n` is at most the level gap (or `n = 0`), zero otherwise.
    pub fn radical_power(
        &self,
        x: &VertexId,
        y: &VertexId,
        n: usize,
    ) -> Result<RadicalPower<K>, MeshError> {
        let data = self.hom_data(x, y)?;
        let field = self.modulation.field().clone();
        let gap = self.level_gap(x, y);
        let full = n == 0 || (x != y && (n as i64) <= gap);
        let space = if full {
            RowSpace::full(field, data.ambient.len())
        } else {
            data.relations.clone()
        };
        let hom_dim = space.dim() - data.relations.dim();
        Ok(RadicalPower {
            source: x.clone(),
            target: y.clone(),
            n,
            space,
            hom_dim,
        })
    }

    /// `rad^n(x, y)` by composing radical generators directly:
    /// `rad^n = sum_z rad^(n-1)(x, z) * rad(z, y)`. Exists to cross-check
    /// the shortcut.
    pub fn radical_power_direct(
        &self,
        x: &VertexId,
        y: &VertexId,
        n: usize,
    ) -> Result<RadicalPower<K>, MeshError> {
        let data_xy = self.hom_data(x, y)?;
        let field = self.modulation.field().clone();
        let finish = |space: RowSpace<K>| {
            let hom_dim = space.dim() - data_xy.relations.dim();
            RadicalPower {
                source: x.clone(),
                target: y.clone(),
                n,
                space,
                hom_dim,
            }
        };
        if n == 0 {
            return Ok(finish(RowSpace::full(field, data_xy.ambient.len())));
        }
        // Band of intermediate vertices, by level between x and y.
        let band: Vec<VertexId> = self
            .quiver
            .vertices()
            .filter(|z| {
                self.lengths[*z] >= self.lengths[x] && self.lengths[*z] <= self.lengths[y]
            })
            .cloned()
            .collect();
        // powers[z] holds the preimage row space of rad^k(x, z).
        let rad_one = |z: &VertexId| -> Result<RowSpace<K>, MeshError> {
            let d = self.hom_data(x, z)?;
            Ok(if x == z {
                d.relations.clone()
            } else {
                RowSpace::full(field.clone(), d.ambient.len())
            })
        };
        let mut powers: BTreeMap<VertexId, RowSpace<K>> = BTreeMap::new();
        for z in &band {
            powers.insert(z.clone(), rad_one(z)?);
        }
        for _ in 2..=n {
            let mut next: BTreeMap<VertexId, RowSpace<K>> = BTreeMap::new();
            for tgt in &band {
                let d_xt = self.hom_data(x, tgt)?;
                let mut rows: Vec<Vec<K::Elem>> = Vec::new();
                for r in 0..d_xt.relations.basis().rows() {
                    rows.push(d_xt.relations.basis().row(r).to_vec());
                }
                for z in &band {
                    if z == tgt {
                        continue;
                    }
                    let Some(prev) = powers.get(z) else {
                        continue;
                    };
                    if prev.dim() == 0 {
                        continue;
                    }
                    let d_zt = self.hom_data(z, tgt)?;
                    if d_zt.ambient.is_empty() {
                        continue;
                    }
                    for r in 0..prev.basis().rows() {
                        let u = prev.basis().row(r).to_vec();
                        for j in 0..d_zt.ambient.len() {
                            let mut g = vec![field.zero(); d_zt.ambient.len()];
                            g[j] = field.one();
                            let composed = self.compose(x, z, tgt, &u, &g)?;
                            rows.push(composed);
                        }
                    }
                }
                next.insert(
                    tgt.clone(),
                    RowSpace::from_rows(field.clone(), d_xt.ambient.len(), rows),
                );
            }
            powers = next;
        }
        let space = powers
            .remove(y)
            .unwrap_or_else(|| data_xy.relations.clone());
        // The recursion composes generators only; the mesh ideal itself is
        // always part of the preimage.
        let mut rows: Vec<Vec<K::Elem>> = Vec::new();
        for r in 0..space.basis().rows() {
            rows.push(space.basis().row(r).to_vec());
        }
        for r in 0..data_xy.relations.basis().rows() {
            rows.push(data_xy.relations.basis().row(r).to_vec());
        }
        Ok(finish(RowSpace::from_rows(
            field,
            data_xy.ambient.len(),
            rows,
        )))
    }

    /// Renders an ambient element with component indices only where an
    /// arrow space has more than one dimension.
    pub fn format_elem(&self, e: &PathElem) -> String {
        let mut out = String::new();
        for (i, v) in e.path.iter().enumerate() {
            if i == 0 {
                out.push_str(v.as_str());
            } else {
                let d = self
                    .modulation
                    .dim(&e.path[i - 1], v)
                    .unwrap_or(1);
                out.push_str(" > ");
                out.push_str(v.as_str());
                if d > 1 {
                    out.push_str(&format!("[{}]", e.components[i - 1]));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::tqfile;
    use std::collections::BTreeMap as Map;

    const A2: &str = "\
vertex S2 proj
vertex P1 proj inj
vertex S1 inj
arrow S2 P1
arrow P1 S1
tau S1 -> S2
";

    const TWO_MIDDLES: &str = "\
vertex s proj
vertex a proj inj
vertex b proj inj
vertex e inj
arrow s a
arrow s b dim=2
arrow a e
arrow b e dim=2
tau e -> s
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

    fn v(s: &str) -> VertexId {
        VertexId::new(s)
    }

    struct Fixture {
        quiver: crate::quiver::TranslationQuiver,
        modulation: SplitModulation<Rationals>,
    }

    fn fixture(text: &str) -> Fixture {
        let file = tqfile::parse(text).unwrap();
        let modulation =
            SplitModulation::attach(Rationals, &file.quiver, &file.dims, Map::new()).unwrap();
        Fixture {
            quiver: file.quiver,
            modulation,
        }
    }

    #[test]
    fn a2_hom_dims_match_the_module_category() {
        let fx = fixture(A2);
        let ctx = MeshCtx::new(&fx.quiver, &fx.modulation, None, 1000).unwrap();
        assert_eq!(ctx.hom_dim(&v("S2"), &v("P1")).unwrap(), 1);
        assert_eq!(ctx.hom_dim(&v("P1"), &v("S1")).unwrap(), 1);
        // The composite path is exactly the mesh relation at S1.
        assert_eq!(ctx.hom_dim(&v("S2"), &v("S1")).unwrap(), 0);
        assert_eq!(ctx.hom_dim(&v("S2"), &v("S2")).unwrap(), 1);
        assert_eq!(ctx.hom_dim(&v("S1"), &v("S2")).unwrap(), 0);
    }

    #[test]
    fn a2_composite_of_irreducibles_is_zero_in_the_mesh_category() {
        let fx = fixture(A2);
        let ctx = MeshCtx::new(&fx.quiver, &fx.modulation, None, 1000).unwrap();
        let f = ctx.arrow_class(&v("S2"), &v("P1"), 0).unwrap();
        let g = ctx.arrow_class(&v("P1"), &v("S1"), 0).unwrap();
        let fg = ctx
            .compose(&v("S2"), &v("P1"), &v("S1"), &f, &g)
            .unwrap();
        assert!(ctx.is_zero_hom(&v("S2"), &v("S1"), &fg).unwrap());
    }

    #[test]
    fn two_middle_mesh_relation_cuts_one_dimension() {
        let fx = fixture(TWO_MIDDLES);
        let ctx = MeshCtx::new(&fx.quiver, &fx.modulation, None, 1000).unwrap();
        // Ambient: one path through a, four through the dim-2 arrows via b.
        let hom = ctx.hom_basis(&v("s"), &v("e")).unwrap();
        assert_eq!(hom.ambient.len(), 5);
        assert_eq!(hom.relations_dim, 1);
        assert_eq!(hom.dim(), 4);
    }

    #[test]
    fn identity_composes_neutrally() {
        let fx = fixture(TWO_MIDDLES);
        let ctx = MeshCtx::new(&fx.quiver, &fx.modulation, None, 1000).unwrap();
        let id_s = ctx.identity_vec(&v("s")).unwrap();
        let f = ctx.arrow_class(&v("s"), &v("b"), 1).unwrap();
        let left = ctx.compose(&v("s"), &v("s"), &v("b"), &id_s, &f).unwrap();
        assert_eq!(left, ctx.reduce(&v("s"), &v("b"), &f).unwrap());
        let id_b = ctx.identity_vec(&v("b")).unwrap();
        let right = ctx.compose(&v("s"), &v("b"), &v("b"), &f, &id_b).unwrap();
        assert_eq!(right, ctx.reduce(&v("s"), &v("b"), &f).unwrap());
    }

    #[test]
    fn radical_shortcut_and_direct_agree_on_the_strip() {
        let file = tqfile::parse(TUBE).unwrap();
        let cov = crate::cover::universal_cover(&file.quiver, &v("m1"), 6).unwrap();
        let dims = cov.pull_back_dims(&file.dims);
        let modulation =
            SplitModulation::attach(Rationals, &cov.cover, &dims, Map::new()).unwrap();
        let trunc = TruncationInfo {
            dist: cov.dist.clone(),
            radius: cov.radius,
        };
        let ctx = MeshCtx::new(&cov.cover, &modulation, Some(trunc), 1000).unwrap();
        let pairs: Vec<(VertexId, VertexId)> = cov
            .cover
            .vertices()
            .flat_map(|a| cov.cover.vertices().map(move |b| (a.clone(), b.clone())))
            .filter(|(a, b)| {
                let gap = ctx.level_gap(a, b);
                (0..=3).contains(&gap) && cov.dist[a] + gap as usize + 1 <= cov.radius
            })
            .collect();
        assert!(!pairs.is_empty());
        for (a, b) in pairs {
            for n in 0..=4 {
                let fast = ctx.radical_power(&a, &b, n).unwrap();
                let slow = ctx.radical_power_direct(&a, &b, n).unwrap();
                assert_eq!(
                    fast.space, slow.space,
                    "rad^{n}({a}, {b}) disagrees between shortcut and recursion"
                );
                assert_eq!(fast.hom_dim, slow.hom_dim);
            }
        }
    }

    #[test]
    fn mesh_relation_kills_the_two_step_hom_on_the_strip() {
        let file = tqfile::parse(TUBE).unwrap();
        let cov = crate::cover::universal_cover(&file.quiver, &v("m1"), 6).unwrap();
        let dims = cov.pull_back_dims(&file.dims);
        let modulation =
            SplitModulation::attach(Rationals, &cov.cover, &dims, Map::new()).unwrap();
        let ctx = MeshCtx::new(
            &cov.cover,
            &modulation,
            Some(TruncationInfo {
                dist: cov.dist.clone(),
                radius: cov.radius,
            }),
            1000,
        )
        .unwrap();
        // Two arrows forward: the unique path is exactly the mesh relation
        // at its endpoint, so the hom space vanishes.
        let y = cov
            .cover
            .out_neighbors(&cov.root)
            .next()
            .cloned()
            .unwrap();
        let z = cov.cover.out_neighbors(&y).next().cloned().unwrap();
        assert_eq!(ctx.hom_dim(&cov.root, &y).unwrap(), 1);
        assert_eq!(ctx.hom_dim(&cov.root, &z).unwrap(), 0);
    }

    const CYCLE3: &str = "\
vertex c0 proj inj
vertex c1 proj inj
vertex c2 proj inj
arrow c0 c1
arrow c1 c2
arrow c2 c0
";

    #[test]
    fn radical_grading_without_meshes() {
        let file = tqfile::parse(CYCLE3).unwrap();
        let cov = crate::cover::universal_cover(&file.quiver, &v("c0"), 6).unwrap();
        let dims = cov.pull_back_dims(&file.dims);
        let modulation =
            SplitModulation::attach(Rationals, &cov.cover, &dims, Map::new()).unwrap();
        let ctx = MeshCtx::new(
            &cov.cover,
            &modulation,
            Some(TruncationInfo {
                dist: cov.dist.clone(),
                radius: cov.radius,
            }),
            1000,
        )
        .unwrap();
        // No meshes anywhere, so the three-step hom survives and the
        // radical drops to zero exactly past the level gap.
        let mut z = cov.root.clone();
        for _ in 0..3 {
            z = cov.cover.out_neighbors(&z).next().cloned().unwrap();
        }
        assert_eq!(ctx.hom_dim(&cov.root, &z).unwrap(), 1);
        for n in 0..=3 {
            assert_eq!(ctx.radical_power(&cov.root, &z, n).unwrap().hom_dim, 1);
            let direct = ctx.radical_power_direct(&cov.root, &z, n).unwrap();
            assert_eq!(direct.hom_dim, 1);
        }
        assert_eq!(ctx.radical_power(&cov.root, &z, 4).unwrap().hom_dim, 0);
        assert_eq!(
            ctx.radical_power_direct(&cov.root, &z, 4).unwrap().hom_dim,
            0
        );
    }

    #[test]
    fn truncation_guard_refuses_and_names_a_radius() {
        let file = tqfile::parse(TUBE).unwrap();
        let cov = crate::cover::universal_cover(&file.quiver, &v("m1"), 3).unwrap();
        let dims = cov.pull_back_dims(&file.dims);
        let modulation =
            SplitModulation::attach(Rationals, &cov.cover, &dims, Map::new()).unwrap();
        let ctx = MeshCtx::new(
            &cov.cover,
            &modulation,
            Some(TruncationInfo {
                dist: cov.dist.clone(),
                radius: cov.radius,
            }),
            1000,
        )
        .unwrap();
        // A target three levels up: dist 0 + gap 3 + 1 > radius 3.
        let mut y = cov.root.clone();
        for _ in 0..3 {
            y = cov.cover.out_neighbors(&y).next().cloned().unwrap();
        }
        let err = ctx.hom_dim(&cov.root, &y).unwrap_err();
        match err {
            MeshError::UndecidableTruncation { needed_radius, .. } => {
                assert_eq!(needed_radius, 4);
            }
            other => panic!("expected truncation refusal, got {other:?}"),
        }
    }

    #[test]
    fn path_cap_is_enforced() {
        let fx = fixture(TWO_MIDDLES);
        let ctx = MeshCtx::new(&fx.quiver, &fx.modulation, None, 3).unwrap();
        let err = ctx.hom_dim(&v("s"), &v("e")).unwrap_err();
        assert!(matches!(err, MeshError::PathCapExceeded { .. }));
    }

    #[test]
    fn format_elem_marks_components_only_on_wide_arrows() {
        let fx = fixture(TWO_MIDDLES);
        let ctx = MeshCtx::new(&fx.quiver, &fx.modulation, None, 1000).unwrap();
        let hom = ctx.hom_basis(&v("s"), &v("e")).unwrap();
        let rendered: Vec<String> = hom.ambient.iter().map(|e| ctx.format_elem(e)).collect();
        assert!(rendered.contains(&"s > a > e".to_string()));
        assert!(rendered.contains(&"s > b[1] > e[0]".to_string()));
    }
}
