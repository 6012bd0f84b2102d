//! Knitting of Auslander-Reiten components for path algebras of Dynkin
//! quivers.
//!
//! Starting from the indecomposable projectives, each almost split sequence
//! is produced as the cokernel of the stacked irreducible morphisms out of a
//! module. For a representation-finite hereditary algebra this enumerates
//! every indecomposable exactly once and records the component as a
//! translation quiver together with a representative morphism for every
//! arrow.

use crate::algfile::{dynkin_type, AlgebraSpec, NotDynkin};
use crate::field::Field;
use crate::linalg::RowSpace;
use crate::quiver::{TranslationQuiver, VertexId};
use crate::rep::{ModuleMorphism, RepCtx, RepError, Representation};
use crate::tqfile;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Mutex;
use thiserror::Error;

const MODULE_CAP: usize = 1000;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum KnitError {
    #[error("not representation-finite: {0}")]
    NotRepresentationFinite(#[from] NotDynkin),
    #[error("knitting failed: {0}")]
    Internal(String),
}

/// A complete Auslander-Reiten component over one ground field.
///
/// Module names encode dimension vectors: `m1_0_2` has the listed
/// dimensions at the base vertices in sorted order. Distinct
/// indecomposables have distinct dimension vectors, so names are unique.
pub struct Component<K: Field> {
    spec: AlgebraSpec,
    field: K,
    modules: BTreeMap<String, Representation<K>>,
    ar: TranslationQuiver,
    irr: BTreeMap<(String, String), ModuleMorphism<K>>,
    levels: BTreeMap<String, i64>,
    projective_names: BTreeMap<String, String>,
    injective_names: BTreeMap<String, String>,
    hom_cache: Mutex<BTreeMap<(String, String), Vec<ModuleMorphism<K>>>>,
    rad_cache: Mutex<BTreeMap<(String, String, usize), RowSpace<K>>>,
}

fn module_name(dims: &BTreeMap<String, usize>) -> String {
    let parts: Vec<String> = dims.values().map(|d| d.to_string()).collect();
    format!("m{}", parts.join("_"))
}

/// Level of each base vertex, normalized to minimum zero. An arrow
/// `v -> w` forces level(v) = level(w) + 1; on a tree the constraints are
/// always satisfiable.
fn base_levels(spec: &AlgebraSpec) -> BTreeMap<String, i64> {
    let mut lvl: BTreeMap<String, i64> = BTreeMap::new();
    let first = spec.vertices.iter().next().expect("nonempty").clone();
    lvl.insert(first.clone(), 0);
    let mut stack = vec![first];
    while let Some(u) = stack.pop() {
        for (src, tgt) in spec.arrows.values() {
            if src == &u && !lvl.contains_key(tgt) {
                let v = lvl[&u] - 1;
                lvl.insert(tgt.clone(), v);
                stack.push(tgt.clone());
            } else if tgt == &u && !lvl.contains_key(src) {
                let v = lvl[&u] + 1;
                lvl.insert(src.clone(), v);
                stack.push(src.clone());
            }
        }
    }
    let min = lvl.values().copied().min().unwrap_or(0);
    lvl.values_mut().for_each(|v| *v -= min);
    lvl
}

pub fn knit<K: Field>(spec: &AlgebraSpec, field: K) -> Result<Component<K>, KnitError> {
    dynkin_type(spec)?;
    let ctx = RepCtx::new(spec, field.clone());
    let vertex_levels = base_levels(spec);

    let injective_dims: BTreeMap<Vec<usize>, String> = spec
        .vertices
        .iter()
        .map(|v| (ctx.injective(v).dim_vector(), v.clone()))
        .collect();

    let mut modules: BTreeMap<String, Representation<K>> = BTreeMap::new();
    let mut levels: BTreeMap<String, i64> = BTreeMap::new();
    let mut irr: BTreeMap<(String, String), ModuleMorphism<K>> = BTreeMap::new();
    let mut ar_arrows: BTreeSet<(String, String)> = BTreeSet::new();
    let mut tau_of: BTreeMap<String, String> = BTreeMap::new();
    let mut projective_names: BTreeMap<String, String> = BTreeMap::new();
    let mut injective_names: BTreeMap<String, String> = BTreeMap::new();
    let mut queue: BTreeSet<(i64, String)> = BTreeSet::new();

    let register = |modules: &mut BTreeMap<String, Representation<K>>,
                        levels: &mut BTreeMap<String, i64>,
                        injective_names: &mut BTreeMap<String, String>,
                        queue: &mut BTreeSet<(i64, String)>,
                        rep: Representation<K>,
                        level: i64|
     -> Result<String, KnitError> {
        let name = module_name(rep.dims());
        if modules.contains_key(&name) {
            return Err(KnitError::Internal(format!(
                "module `{name}` produced twice"
            )));
        }
        let injective = injective_dims.get(&rep.dim_vector()).cloned();
        modules.insert(name.clone(), rep);
        levels.insert(name.clone(), level);
        match injective {
            Some(v) => {
                injective_names.insert(v, name.clone());
            }
            None => {
                queue.insert((level, name.clone()));
            }
        }
        Ok(name)
    };

    for v in spec.vertices.iter() {
        let p = ctx.projective(v);
        let name = register(
            &mut modules,
            &mut levels,
            &mut injective_names,
            &mut queue,
            p,
            vertex_levels[v],
        )?;
        projective_names.insert(v.clone(), name);
    }

    // The radical of a projective is the sum of the projectives one arrow
    // further along, so those inclusions are the irreducible morphisms
    // between projectives; everything else is discovered by knitting.
    for (src, tgt) in spec.arrows.values() {
        let sub = projective_names[tgt].clone();
        let sup = projective_names[src].clone();
        let f = indicator_inclusion(&ctx, &modules[&sub], &modules[&sup]);
        ar_arrows.insert((sub.clone(), sup.clone()));
        irr.insert((sub, sup), f);
    }

    while let Some((level, x_name)) = queue.pop_first() {
        if modules.len() >= MODULE_CAP {
            return Err(KnitError::Internal(format!(
                "more than {MODULE_CAP} modules; the algebra cannot be representation-finite"
            )));
        }
        let x = modules[&x_name].clone();
        let middles: Vec<String> = ar_arrows
            .iter()
            .filter(|(s, _)| s == &x_name)
            .map(|(_, t)| t.clone())
            .collect();
        if middles.is_empty() {
            return Err(KnitError::Internal(format!(
                "non-injective module `{x_name}` has no irreducible morphisms out"
            )));
        }
        let parts: Vec<&Representation<K>> = middles.iter().map(|m| &modules[m]).collect();
        let (e, incls, _) = ctx.direct_sum(&parts);
        let mut f = ModuleMorphism::zero(&field, &x, &e);
        for (m, inc) in middles.iter().zip(&incls) {
            f = f.add(&irr[&(x_name.clone(), m.clone())].then(inc));
        }
        let rank: usize = f.mats.values().map(|m| m.rank()).sum();
        if rank != x.total_dim() {
            return Err(KnitError::Internal(format!(
                "almost split map out of `{x_name}` is not injective"
            )));
        }
        let (c, pi) = ctx.cokernel(&f, &x, &e);
        let c_name = register(
            &mut modules,
            &mut levels,
            &mut injective_names,
            &mut queue,
            c,
            level + 2,
        )?;
        tau_of.insert(c_name.clone(), x_name.clone());
        for (m, inc) in middles.iter().zip(&incls) {
            ar_arrows.insert((m.clone(), c_name.clone()));
            irr.insert((m.clone(), c_name.clone()), inc.then(&pi));
        }
    }

    if injective_names.len() != spec.vertices.len() {
        return Err(KnitError::Internal(
            "knitting finished without reaching every injective".to_string(),
        ));
    }

    let mut ar = TranslationQuiver::new();
    let build = |e: crate::quiver::QuiverBuildError| KnitError::Internal(e.to_string());
    let proj_set: BTreeSet<&String> = projective_names.values().collect();
    let inj_set: BTreeSet<&String> = injective_names.values().collect();
    for name in modules.keys() {
        ar.add_vertex(
            VertexId::new(name.clone()),
            proj_set.contains(name),
            inj_set.contains(name),
        )
        .map_err(build)?;
    }
    for (s, t) in &ar_arrows {
        ar.add_arrow(VertexId::new(s.clone()), VertexId::new(t.clone()))
            .map_err(build)?;
    }
    for (c, x) in &tau_of {
        ar.set_tau(VertexId::new(c.clone()), VertexId::new(x.clone()))
            .map_err(build)?;
    }
    let report = ar.validate();
    if !report.is_valid() {
        return Err(KnitError::Internal(format!(
            "knitted component is not a valid translation quiver: {}",
            report
                .violations
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("; ")
        )));
    }

    Ok(Component {
        spec: spec.clone(),
        field,
        modules,
        ar,
        irr,
        levels,
        projective_names,
        injective_names,
        hom_cache: Mutex::new(BTreeMap::new()),
        rad_cache: Mutex::new(BTreeMap::new()),
    })
}

fn indicator_inclusion<K: Field>(
    ctx: &RepCtx<'_, K>,
    sub: &Representation<K>,
    sup: &Representation<K>,
) -> ModuleMorphism<K> {
    let field = ctx.field().clone();
    let mut f = ModuleMorphism::zero(&field, sub, sup);
    for (v, m) in f.mats.iter_mut() {
        if sub.dim(v) == 1 && sup.dim(v) == 1 {
            m.set(0, 0, field.one());
        }
    }
    debug_assert!(ctx.is_morphism(&f, sub, sup));
    f
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ComponentDefect {
    #[error("{0}")]
    Rep(#[from] RepError),
    #[error("unknown module `{0}`")]
    UnknownModule(String),
    #[error("arrow {src} -> {tgt}: stored morphism is not in the radical")]
    IrreducibleNotInRadical { src: String, tgt: String },
    #[error("arrow {src} -> {tgt}: stored morphism lies in the radical square")]
    IrreducibleInRadicalSquare { src: String, tgt: String },
    #[error("{src} -> {tgt}: {arrows} arrows but rad/rad^2 has dimension {irr_dim}")]
    ArrowCountMismatch {
        src: String,
        tgt: String,
        arrows: usize,
        irr_dim: usize,
    },
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum AlmostSplitDefect {
    #[error("{0}")]
    Rep(#[from] RepError),
    #[error("unknown module `{0}`")]
    UnknownModule(String),
    #[error("`{0}` is injective, no almost split sequence starts there")]
    SourceInjective(String),
    #[error("stacked map out of `{0}` is not a morphism")]
    NotAMorphism(String),
    #[error("sequence at `{0}` is not exact")]
    NotExact(String),
    #[error("sequence at `{0}` splits")]
    Splits(String),
    #[error("map into `{0}` is not right almost split: a radical morphism from `{1}` does not factor")]
    NotRightAlmostSplit(String, String),
    #[error("map out of `{0}` is not left almost split: a radical morphism to `{1}` does not factor")]
    NotLeftAlmostSplit(String, String),
}

impl<K: Field> Component<K> {
    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn modules(&self) -> &BTreeMap<String, Representation<K>> {
        &self.modules
    }

    pub fn module(&self, name: &str) -> Option<&Representation<K>> {
        self.modules.get(name)
    }

    pub fn ar_quiver(&self) -> &TranslationQuiver {
        &self.ar
    }

    pub fn irr_morphism(&self, src: &str, tgt: &str) -> Option<&ModuleMorphism<K>> {
        self.irr.get(&(src.to_string(), tgt.to_string()))
    }

    pub fn level(&self, name: &str) -> Option<i64> {
        self.levels.get(name).copied()
    }

    pub fn levels(&self) -> &BTreeMap<String, i64> {
        &self.levels
    }

    pub fn projective_module(&self, base_vertex: &str) -> Option<&str> {
        self.projective_names.get(base_vertex).map(|s| s.as_str())
    }

    pub fn injective_module(&self, base_vertex: &str) -> Option<&str> {
        self.injective_names.get(base_vertex).map(|s| s.as_str())
    }

    pub fn export_tq(&self) -> String {
        tqfile::serialize(&self.ar, &BTreeMap::new())
    }

    fn ctx(&self) -> RepCtx<'_, K> {
        RepCtx::new(&self.spec, self.field.clone())
    }

    /// Hom bases are cached; every caller sees the same canonical basis.
    pub fn hom_basis(&self, x: &str, y: &str) -> Result<Vec<ModuleMorphism<K>>, ComponentDefect> {
        let key = (x.to_string(), y.to_string());
        if let Some(b) = self.hom_cache.lock().unwrap().get(&key) {
            return Ok(b.clone());
        }
        let xm = self
            .modules
            .get(x)
            .ok_or_else(|| ComponentDefect::UnknownModule(x.to_string()))?;
        let ym = self
            .modules
            .get(y)
            .ok_or_else(|| ComponentDefect::UnknownModule(y.to_string()))?;
        let basis = self.ctx().hom_basis(xm, ym);
        self.hom_cache.lock().unwrap().insert(key, basis.clone());
        Ok(basis)
    }

    /// Radical of the module category at `(x, y)`. Distinct names mean
    /// non-isomorphic indecomposables, so off the diagonal the radical is
    /// the whole hom space.
    pub fn rad_basis(&self, x: &str, y: &str) -> Result<Vec<ModuleMorphism<K>>, ComponentDefect> {
        if x != y {
            return self.hom_basis(x, y);
        }
        let xm = self
            .modules
            .get(x)
            .ok_or_else(|| ComponentDefect::UnknownModule(x.to_string()))?;
        Ok(self.ctx().end_radical(xm)?)
    }

    fn flat_ambient(&self, x: &str, y: &str) -> usize {
        let xm = &self.modules[x];
        let ym = &self.modules[y];
        self.spec
            .vertices
            .iter()
            .map(|v| xm.dim(v) * ym.dim(v))
            .sum()
    }

    /// Span of the n-fold radical power inside the flattened morphism
    /// space. `n = 0` is the whole hom space. Results are memoized; the
    /// recursion revisits the same `(x, z, n-1)` triple once per target.
    pub fn rad_power_space(
        &self,
        x: &str,
        y: &str,
        n: usize,
    ) -> Result<RowSpace<K>, ComponentDefect> {
        for name in [x, y] {
            if !self.modules.contains_key(name) {
                return Err(ComponentDefect::UnknownModule(name.to_string()));
            }
        }
        let key = (x.to_string(), y.to_string(), n);
        if let Some(s) = self.rad_cache.lock().unwrap().get(&key) {
            return Ok(s.clone());
        }
        let space = self.rad_power_space_uncached(x, y, n)?;
        self.rad_cache.lock().unwrap().insert(key, space.clone());
        Ok(space)
    }

    fn rad_power_space_uncached(
        &self,
        x: &str,
        y: &str,
        n: usize,
    ) -> Result<RowSpace<K>, ComponentDefect> {
        let ambient = self.flat_ambient(x, y);
        let rows = |fs: &[ModuleMorphism<K>]| fs.iter().map(|f| f.flatten()).collect();
        if n == 0 {
            return Ok(RowSpace::from_rows(
                self.field.clone(),
                ambient,
                rows(&self.hom_basis(x, y)?),
            ));
        }
        if n == 1 {
            return Ok(RowSpace::from_rows(
                self.field.clone(),
                ambient,
                rows(&self.rad_basis(x, y)?),
            ));
        }
        let ctx = self.ctx();
        let mut products: Vec<Vec<K::Elem>> = Vec::new();
        for z in self.modules.keys() {
            let left = self.rad_power_space(x, z, n - 1)?;
            if left.is_zero() {
                continue;
            }
            let right = self.rad_basis(z, y)?;
            if right.is_empty() {
                continue;
            }
            for row in left.basis().rows_iter() {
                let lf = ctx.unflatten(row, &self.modules[x], &self.modules[z]);
                for rf in &right {
                    products.push(lf.then(rf).flatten());
                }
            }
        }
        Ok(RowSpace::from_rows(self.field.clone(), ambient, products))
    }

    /// First canonical basis element of rad^2(x, y) as a morphism, `None`
    /// when the radical square vanishes there.
    pub fn rad_square_perturbation(
        &self,
        x: &str,
        y: &str,
    ) -> Result<Option<ModuleMorphism<K>>, ComponentDefect> {
        let space = self.rad_power_space(x, y, 2)?;
        if space.dim() == 0 {
            return Ok(None);
        }
        let delta = self
            .ctx()
            .unflatten(space.basis().row(0), &self.modules[x], &self.modules[y]);
        Ok(Some(delta))
    }

    /// Checks that the stored morphisms deserve their arrows: each lies in
    /// the radical but not the radical square, and the number of arrows
    /// between any ordered pair equals dim rad/rad^2 there.
    pub fn verify_component(&self) -> Result<(), ComponentDefect> {
        for x in self.modules.keys() {
            for y in self.modules.keys() {
                let rad = self.rad_power_space(x, y, 1)?;
                let rad2 = self.rad_power_space(x, y, 2)?;
                let arrows = usize::from(
                    self.ar
                        .has_arrow(&VertexId::new(x.clone()), &VertexId::new(y.clone())),
                );
                let irr_dim = rad.dim() - rad2.dim();
                if irr_dim != arrows {
                    return Err(ComponentDefect::ArrowCountMismatch {
                        src: x.clone(),
                        tgt: y.clone(),
                        arrows,
                        irr_dim,
                    });
                }
                if arrows == 1 {
                    let f = self.irr[&(x.clone(), y.clone())].flatten();
                    if !rad.contains(&f) {
                        return Err(ComponentDefect::IrreducibleNotInRadical {
                            src: x.clone(),
                            tgt: y.clone(),
                        });
                    }
                    if rad2.contains(&f) {
                        return Err(ComponentDefect::IrreducibleInRadicalSquare {
                            src: x.clone(),
                            tgt: y.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Reconstructs the almost split sequence starting at `x` and checks
    /// all defining properties directly: exactness, non-splitness, and
    /// factorization of every radical morphism through the middle term,
    /// quantified over every indecomposable in the component.
    pub fn verify_almost_split(&self, x: &str) -> Result<(), AlmostSplitDefect> {
        let xm = self
            .modules
            .get(x)
            .ok_or_else(|| AlmostSplitDefect::UnknownModule(x.to_string()))?;
        let xv = VertexId::new(x.to_string());
        if self.ar.is_injective(&xv) {
            return Err(AlmostSplitDefect::SourceInjective(x.to_string()));
        }
        let ctx = self.ctx();
        let middles: Vec<String> = self
            .ar
            .out_neighbors(&xv)
            .map(|v| v.as_str().to_string())
            .collect();
        let tau_inv = self.ar.tau_inverse_map();
        let z = tau_inv
            .get(&xv)
            .expect("validated component has tau inverse for non-injectives")
            .as_str()
            .to_string();
        let zm = &self.modules[&z];
        let parts: Vec<&Representation<K>> = middles.iter().map(|m| &self.modules[m]).collect();
        let (e, incls, projs) = ctx.direct_sum(&parts);
        let mut f = ModuleMorphism::zero(&self.field, xm, &e);
        let mut g = ModuleMorphism::zero(&self.field, &e, zm);
        for ((m, inc), prj) in middles.iter().zip(&incls).zip(&projs) {
            f = f.add(&self.irr[&(x.to_string(), m.clone())].then(inc));
            g = g.add(&prj.then(&self.irr[&(m.clone(), z.clone())]));
        }
        if !ctx.is_morphism(&f, xm, &e) || !ctx.is_morphism(&g, &e, zm) {
            return Err(AlmostSplitDefect::NotAMorphism(x.to_string()));
        }
        if !f.then(&g).is_zero() {
            return Err(AlmostSplitDefect::NotExact(x.to_string()));
        }
        for v in self.spec.vertices.iter() {
            let fr = f.mats[v].rank();
            let gr = g.mats[v].rank();
            if fr != xm.dim(v) || gr != zm.dim(v) || fr + gr != e.dim(v) {
                return Err(AlmostSplitDefect::NotExact(x.to_string()));
            }
        }
        let span = |rows: Vec<Vec<K::Elem>>, ambient: usize| {
            RowSpace::from_rows(self.field.clone(), ambient, rows)
        };
        let sections = ctx.hom_basis(zm, &e);
        let through_g = span(
            sections.iter().map(|h| h.then(&g).flatten()).collect(),
            self.flat_ambient(&z, &z),
        );
        let id_z = ModuleMorphism::identity(&self.field, zm);
        if through_g.contains(&id_z.flatten()) {
            return Err(AlmostSplitDefect::Splits(x.to_string()));
        }
        for w in self.modules.keys() {
            let wm = &self.modules[w];
            // Right: every radical morphism W -> Z factors through g.
            let rad_wz = if w == &z {
                ctx.end_radical(zm)?
            } else {
                ctx.hom_basis(wm, zm)
            };
            if !rad_wz.is_empty() {
                let pre = ctx.hom_basis(wm, &e);
                let through = span(
                    pre.iter().map(|h| h.then(&g).flatten()).collect(),
                    self.flat_ambient(w, &z),
                );
                for u in &rad_wz {
                    if !through.contains(&u.flatten()) {
                        return Err(AlmostSplitDefect::NotRightAlmostSplit(z.clone(), w.clone()));
                    }
                }
            }
            // Left: every radical morphism X -> W factors through f.
            let rad_xw = if w == x {
                ctx.end_radical(xm)?
            } else {
                ctx.hom_basis(xm, wm)
            };
            if !rad_xw.is_empty() {
                let post = ctx.hom_basis(&e, wm);
                let through = span(
                    post.iter().map(|h| f.then(h).flatten()).collect(),
                    self.flat_ambient(x, w),
                );
                for u in &rad_xw {
                    if !through.contains(&u.flatten()) {
                        return Err(AlmostSplitDefect::NotLeftAlmostSplit(x.to_string(), w.clone()));
                    }
                }
            }
        }
        Ok(())
    }
}
