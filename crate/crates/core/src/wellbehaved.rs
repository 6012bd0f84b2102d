//! Functors from the mesh category of a covering into the module category
//! of a knitted component.
//!
//! A well-behaved functor sends each cover vertex to the module over its
//! base vertex and each cover arrow to an irreducible morphism, chosen so
//! that every mesh relation maps to the zero morphism exactly. The
//! construction is inductive along the cover's length function: arrows
//! into projectives are pulled back from the component, every other
//! in-star is read off an assembled almost split sequence. On top of the
//! functor this module checks the graded covering and injectivity
//! properties and decides where a composite of irreducible morphisms sits
//! in the radical filtration.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::cover::{LiftError, TruncatedCover};
use crate::field::Field;
use crate::knit::{Component, ComponentDefect};
use crate::linalg::{Mat, RowSpace};
use crate::meshcat::{HomBasis, MeshCtx, MeshError, PathElem, TruncationInfo};
use crate::modulation::{ModulationError, SplitModulation};
use crate::quiver::VertexId;
use crate::rep::{ModuleMorphism, RepCtx, Representation};

pub const DEFAULT_PATH_CAP: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum WbError {
    #[error("cover vertex `{vertex}` lies over `{base}`, which is not a module of the component")]
    CoverMismatch { vertex: VertexId, base: String },
    #[error("cover arrow `{src} -> {tgt}` lies over `{base_src} -> {base_tgt}`, which carries no irreducible morphism")]
    CoverArrowMismatch {
        src: VertexId,
        tgt: VertexId,
        base_src: String,
        base_tgt: String,
    },
    #[error("translate of `{vertex}` in the cover does not lie over the translate of its base")]
    CoverTauMismatch { vertex: VertexId },
    #[error("`{0}` is not a cover vertex")]
    UnknownCoverVertex(VertexId),
    #[error("cannot assemble an almost split sequence ending at `{0}`")]
    AssemblyFailure(VertexId),
    #[error("seed on `{src} -> {tgt}` is not strongly irreducible: {reason}")]
    SeedNotStronglyIrreducible {
        src: VertexId,
        tgt: VertexId,
        reason: String,
    },
    #[error("seed does not match the out-star of `{vertex}`: {reason}")]
    SeedShape { vertex: VertexId, reason: String },
    #[error("no image assigned on cover arrow `{src} -> {tgt}`")]
    UnassignedArrow { src: VertexId, tgt: VertexId },
    #[error("step {0} of the path is not an irreducible morphism")]
    NotIrreducible(usize),
    #[error("path does not lift inside the truncation: {0}")]
    LiftEscapesTruncation(LiftError),
    #[error("invalid path: {0}")]
    BadPath(String),
    #[error("fiber sum over `{base}` is undecidable at radius {radius}; radius {needed_radius} suffices")]
    UndecidableTruncation {
        base: String,
        radius: usize,
        needed_radius: usize,
    },
    #[error("witness extraction needs verdict InRadNPlus1Nonzero, got {0}")]
    WrongVerdict(&'static str),
    #[error("verdict contradicts the radical membership oracle: {0}")]
    OracleMismatch(String),
    #[error("internal invariant broken: {0}")]
    Internal(String),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Modulation(#[from] ModulationError),
    #[error(transparent)]
    Component(#[from] ComponentDefect),
}

/// A well-behaved functor: cover vertices go to the modules over their
/// bases, cover arrows to irreducible morphisms whose classes form bases
/// of the irreducible spaces, and every assembled mesh relation maps to
/// the zero morphism.
pub struct WellBehavedFunctor<'a, K: Field> {
    comp: &'a Component<K>,
    tc: &'a TruncatedCover,
    modulation: SplitModulation<K>,
    on_arrows: BTreeMap<(VertexId, VertexId), Vec<ModuleMorphism<K>>>,
    assembled: BTreeSet<VertexId>,
    skipped: BTreeSet<VertexId>,
}

/// Builds the functor with the component's own irreducible representatives
/// as the initial assignment on every arrow into a projective vertex.
pub fn build_well_behaved<'a, K: Field>(
    tc: &'a TruncatedCover,
    comp: &'a Component<K>,
) -> Result<WellBehavedFunctor<'a, K>, WbError> {
    construct(tc, comp, BTreeMap::new(), BTreeSet::new())
}

/// As `build_well_behaved`, but the out-star of `x` is prescribed. The
/// prescription is honored exactly: meshes whose in-star touches a
/// prescribed arrow solve their comparison isomorphism against it.
pub fn seeded_build<'a, K: Field>(
    tc: &'a TruncatedCover,
    comp: &'a Component<K>,
    x: &VertexId,
    seed: &BTreeMap<VertexId, Vec<ModuleMorphism<K>>>,
) -> Result<WellBehavedFunctor<'a, K>, WbError> {
    check_cover(tc, comp)?;
    if !tc.cover.has_vertex(x) {
        return Err(WbError::UnknownCoverVertex(x.clone()));
    }
    let bx = tc.base_of(x).expect("checked").as_str().to_string();
    let xm = comp.module(&bx).expect("checked");
    let ctx = RepCtx::new(comp.spec(), comp.field().clone());
    let star: BTreeSet<VertexId> = tc.cover.out_neighbors(x).cloned().collect();
    let keys: BTreeSet<VertexId> = seed.keys().cloned().collect();
    if star != keys {
        return Err(WbError::SeedShape {
            vertex: x.clone(),
            reason: format!(
                "prescribed targets {:?}, out-star {:?}",
                keys.iter().map(|v| v.as_str()).collect::<Vec<_>>(),
                star.iter().map(|v| v.as_str()).collect::<Vec<_>>()
            ),
        });
    }
    let mut seeds = BTreeMap::new();
    let mut locked = BTreeSet::new();
    for (t, ms) in seed {
        let bt = tc.base_of(t).expect("checked").as_str().to_string();
        let ym = comp.module(&bt).expect("checked");
        let reject = |reason: &str| WbError::SeedNotStronglyIrreducible {
            src: x.clone(),
            tgt: t.clone(),
            reason: reason.to_string(),
        };
        let rad = comp.rad_power_space(&bx, &bt, 1)?;
        let rad2 = comp.rad_power_space(&bx, &bt, 2)?;
        let irr_dim = rad.dim() - rad2.dim();
        if ms.len() != irr_dim {
            return Err(reject(&format!(
                "{} morphisms prescribed, irreducible space has dimension {irr_dim}",
                ms.len()
            )));
        }
        let mut rows: Vec<Vec<K::Elem>> =
            rad2.basis().rows_iter().map(|r| r.to_vec()).collect();
        for m in ms {
            if !ctx.is_morphism(m, xm, ym) {
                return Err(reject("not a module morphism"));
            }
            let flat = m.flatten();
            if !rad.contains(&flat) {
                return Err(reject("not in the radical"));
            }
            rows.push(flat);
        }
        let rank = RowSpace::from_rows(comp.field().clone(), rad.ambient(), rows).dim();
        if rank != rad2.dim() + ms.len() {
            return Err(reject("classes dependent modulo the radical square"));
        }
        seeds.insert((x.clone(), t.clone()), ms.clone());
        locked.insert((x.clone(), t.clone()));
    }
    construct(tc, comp, seeds, locked)
}

fn check_cover<K: Field>(tc: &TruncatedCover, comp: &Component<K>) -> Result<(), WbError> {
    for v in tc.cover.vertices() {
        let Some(b) = tc.base_of(v) else {
            return Err(WbError::CoverMismatch {
                vertex: v.clone(),
                base: "<unmapped>".to_string(),
            });
        };
        if comp.module(b.as_str()).is_none() {
            return Err(WbError::CoverMismatch {
                vertex: v.clone(),
                base: b.as_str().to_string(),
            });
        }
    }
    for (s, t) in tc.cover.arrows() {
        let bs = tc.base_of(s).expect("vertex checked");
        let bt = tc.base_of(t).expect("vertex checked");
        if comp.irr_morphism(bs.as_str(), bt.as_str()).is_none() {
            return Err(WbError::CoverArrowMismatch {
                src: s.clone(),
                tgt: t.clone(),
                base_src: bs.as_str().to_string(),
                base_tgt: bt.as_str().to_string(),
            });
        }
    }
    for v in tc.cover.vertices() {
        if let Some(tv) = tc.cover.tau(v) {
            let b = tc.base_of(v).expect("vertex checked");
            let btv = tc.base_of(tv).expect("vertex checked");
            if comp.ar_quiver().tau(b) != Some(btv) {
                return Err(WbError::CoverTauMismatch { vertex: v.clone() });
            }
        }
    }
    Ok(())
}

fn base_module<'c, K: Field>(
    tc: &TruncatedCover,
    comp: &'c Component<K>,
    v: &VertexId,
) -> Result<&'c Representation<K>, WbError> {
    let b = tc.base_of(v).ok_or_else(|| WbError::CoverMismatch {
        vertex: v.clone(),
        base: "<unmapped>".to_string(),
    })?;
    comp.module(b.as_str()).ok_or_else(|| WbError::CoverMismatch {
        vertex: v.clone(),
        base: b.as_str().to_string(),
    })
}

/// Inductive core shared by the plain and the seeded build. `assignments`
/// holds prescribed arrow images, `locked` the keys a mesh step must
/// reproduce instead of overwrite.
fn construct<'a, K: Field>(
    tc: &'a TruncatedCover,
    comp: &'a Component<K>,
    mut assignments: BTreeMap<(VertexId, VertexId), Vec<ModuleMorphism<K>>>,
    locked: BTreeSet<(VertexId, VertexId)>,
) -> Result<WellBehavedFunctor<'a, K>, WbError> {
    check_cover(tc, comp)?;
    let field = comp.field().clone();
    let ctx = RepCtx::new(comp.spec(), field.clone());
    // Knitted components carry one-dimensional irreducible spaces per
    // arrow, so the default modulation (dims 1, identity pairings) is the
    // right one for the cover.
    let modulation =
        SplitModulation::attach(field.clone(), &tc.cover, &BTreeMap::new(), BTreeMap::new())?;

    // Arrows into projectives are never the in-star of a mesh; they are
    // the induction's initial data, pulled back from the component.
    for (s, t) in tc.cover.arrows() {
        let key = (s.clone(), t.clone());
        if tc.cover.is_projective(t) && !assignments.contains_key(&key) {
            let bs = tc.base_of(s).expect("checked").as_str();
            let bt = tc.base_of(t).expect("checked").as_str();
            let m = comp.irr_morphism(bs, bt).expect("checked").clone();
            assignments.insert(key, vec![m]);
        }
    }

    let mut meshes = tc.cover.meshes();
    meshes.sort_by(|a, b| {
        (tc.lengths[&a.end], &a.end).cmp(&(tc.lengths[&b.end], &b.end))
    });
    let mut assembled = BTreeSet::new();
    let mut skipped = BTreeSet::new();
    for mesh in meshes {
        let start = &mesh.start;
        let end = &mesh.end;
        let complete = mesh
            .middles
            .iter()
            .all(|m| assignments.contains_key(&(start.clone(), m.clone())));
        if !complete {
            // Boundary mesh of a truncated cover; its in-star stays
            // unassigned rather than guessed.
            skipped.insert(end.clone());
            continue;
        }
        let x = base_module(tc, comp, start)?;
        let z = base_module(tc, comp, end)?;
        let parts: Vec<&Representation<K>> = mesh
            .middles
            .iter()
            .map(|m| base_module(tc, comp, m))
            .collect::<Result<_, _>>()?;
        let (sum, incls, _) = ctx.direct_sum(&parts);
        let mut f = ModuleMorphism::zero(&field, x, &sum);
        for (i, m) in mesh.middles.iter().enumerate() {
            let img = &assignments[&(start.clone(), m.clone())][0];
            f = f.add(&img.then(&incls[i]));
        }
        let mono = comp
            .spec()
            .vertices
            .iter()
            .all(|v| f.mats[v].rank() == x.dim(v));
        if !mono {
            return Err(WbError::AssemblyFailure(end.clone()));
        }
        let (coker, pi) = ctx.cokernel(&f, x, &sum);
        let mut constraints = Vec::new();
        for (i, m) in mesh.middles.iter().enumerate() {
            let key = (m.clone(), end.clone());
            if locked.contains(&key) {
                constraints.push((incls[i].then(&pi), assignments[&key][0].clone()));
            }
        }
        let theta = comparison_iso(&ctx, &coker, z, &constraints)
            .ok_or_else(|| WbError::AssemblyFailure(end.clone()))?;
        for (i, m) in mesh.middles.iter().enumerate() {
            let key = (m.clone(), end.clone());
            if locked.contains(&key) {
                continue;
            }
            let g = incls[i].then(&pi).then(&theta);
            let prev = assignments.insert(key, vec![g]);
            debug_assert!(prev.is_none(), "in-star assigned twice");
        }
        assembled.insert(end.clone());
    }

    Ok(WellBehavedFunctor {
        comp,
        tc,
        modulation,
        on_arrows: assignments,
        assembled,
        skipped,
    })
}

/// Isomorphism from the assembled cokernel onto the stored module. With no
/// constraints the identity wins whenever the matrices already agree;
/// otherwise the first invertible solution of the intertwining system in
/// canonical order. Constraints `(q, want)` require `q.then(theta) = want`.
fn comparison_iso<K: Field>(
    ctx: &RepCtx<'_, K>,
    coker: &Representation<K>,
    z: &Representation<K>,
    constraints: &[(ModuleMorphism<K>, ModuleMorphism<K>)],
) -> Option<ModuleMorphism<K>> {
    let field = ctx.field().clone();
    let is_iso = |m: &ModuleMorphism<K>| {
        ctx.spec()
            .vertices
            .iter()
            .all(|v| coker.dim(v) == z.dim(v) && m.mats[v].rank() == z.dim(v))
    };
    if constraints.is_empty() {
        if coker.dims() == z.dims() {
            let id = ModuleMorphism::identity(&field, coker);
            if ctx.is_morphism(&id, coker, z) {
                return Some(id);
            }
        }
        return ctx.hom_basis(coker, z).into_iter().find(is_iso);
    }
    let basis = ctx.hom_basis(coker, z);
    if basis.is_empty() {
        return None;
    }
    let combine = |coords: &[K::Elem]| {
        let mut out = ModuleMorphism::zero(&field, coker, z);
        for (j, c) in coords.iter().enumerate() {
            if !field.is_zero(c) {
                out = out.add(&basis[j].scale(c));
            }
        }
        out
    };
    let mut rows = 0usize;
    for (_, want) in constraints {
        rows += want.flatten().len();
    }
    let mut m = Mat::zeros(field.clone(), rows, basis.len());
    let mut rhs = Vec::with_capacity(rows);
    let mut at = 0usize;
    for (q, want) in constraints {
        let flat_want = want.flatten();
        for (j, b) in basis.iter().enumerate() {
            let flat = q.then(b).flatten();
            for (i, e) in flat.iter().enumerate() {
                m.set(at + i, j, e.clone());
            }
        }
        rhs.extend(flat_want.iter().cloned());
        at += flat_want.len();
    }
    let particular = m.solve(&rhs)?;
    let theta = combine(&particular);
    if is_iso(&theta) {
        return Some(theta);
    }
    let kernel = m.kernel_basis();
    for r in 0..kernel.rows() {
        let shifted: Vec<K::Elem> = particular
            .iter()
            .zip(kernel.row(r))
            .map(|(a, b)| field.add(a, b))
            .collect();
        let theta = combine(&shifted);
        if is_iso(&theta) {
            return Some(theta);
        }
    }
    None
}

impl<'a, K: Field> WellBehavedFunctor<'a, K> {
    pub fn component(&self) -> &'a Component<K> {
        self.comp
    }

    pub fn cover(&self) -> &'a TruncatedCover {
        self.tc
    }

    pub fn on_arrows(&self) -> &BTreeMap<(VertexId, VertexId), Vec<ModuleMorphism<K>>> {
        &self.on_arrows
    }

    pub fn arrow_image(&self, src: &VertexId, tgt: &VertexId) -> Option<&[ModuleMorphism<K>]> {
        self.on_arrows
            .get(&(src.clone(), tgt.clone()))
            .map(|v| v.as_slice())
    }

    /// Mesh ends whose in-star was derived from an assembled sequence.
    pub fn assembled(&self) -> &BTreeSet<VertexId> {
        &self.assembled
    }

    /// Mesh ends left alone because their out-star was incomplete.
    pub fn skipped(&self) -> &BTreeSet<VertexId> {
        &self.skipped
    }

    pub fn base_name(&self, v: &VertexId) -> Result<&str, WbError> {
        self.tc
            .base_of(v)
            .map(|b| b.as_str())
            .ok_or_else(|| WbError::UnknownCoverVertex(v.clone()))
    }

    /// The module the functor assigns to a cover vertex.
    pub fn module_at(&self, v: &VertexId) -> Result<&'a Representation<K>, WbError> {
        base_module(self.tc, self.comp, v)
    }

    /// True when every cover vertex has its full star present, so no
    /// truncation guard is needed.
    pub fn is_complete(&self) -> bool {
        self.tc.interior.len() == self.tc.cover.vertices().count()
    }

    /// Mesh category of the cover, sharing this functor's modulation.
    pub fn mesh_ctx(&self, path_cap: usize) -> Result<MeshCtx<'_, K>, WbError> {
        let trunc = if self.is_complete() {
            None
        } else {
            Some(TruncationInfo {
                dist: self.tc.dist.clone(),
                radius: self.tc.radius,
            })
        };
        Ok(MeshCtx::new(&self.tc.cover, &self.modulation, trunc, path_cap)?)
    }

    /// Image of a single decorated path under the functor.
    pub fn path_image(&self, elem: &PathElem) -> Result<ModuleMorphism<K>, WbError> {
        let first = elem.path.first().ok_or_else(|| {
            WbError::Internal("empty path element".to_string())
        })?;
        if elem.path.len() == 1 {
            let x = self.module_at(first)?;
            return Ok(ModuleMorphism::identity(self.comp.field(), x));
        }
        let mut acc: Option<ModuleMorphism<K>> = None;
        for (i, w) in elem.path.windows(2).enumerate() {
            let imgs = self
                .on_arrows
                .get(&(w[0].clone(), w[1].clone()))
                .ok_or_else(|| WbError::UnassignedArrow {
                    src: w[0].clone(),
                    tgt: w[1].clone(),
                })?;
            let img = imgs.get(elem.components[i]).ok_or_else(|| {
                WbError::Internal(format!(
                    "component {} out of range on {} -> {}",
                    elem.components[i], w[0], w[1]
                ))
            })?;
            acc = Some(match acc {
                None => img.clone(),
                Some(a) => a.then(img),
            });
        }
        Ok(acc.expect("length checked"))
    }

    /// Image of a hom-space element given by its ambient coefficients.
    pub fn apply_class(
        &self,
        hom: &HomBasis<K>,
        coeffs: &[K::Elem],
    ) -> Result<ModuleMorphism<K>, WbError> {
        if coeffs.len() != hom.ambient.len() {
            return Err(WbError::Internal(format!(
                "coefficient vector has length {}, ambient basis {}",
                coeffs.len(),
                hom.ambient.len()
            )));
        }
        let field = self.comp.field();
        let x = self.module_at(&hom.source)?;
        let y = self.module_at(&hom.target)?;
        let mut out = ModuleMorphism::zero(field, x, y);
        for (i, c) in coeffs.iter().enumerate() {
            if field.is_zero(c) {
                continue;
            }
            out = out.add(&self.path_image(&hom.ambient[i])?.scale(c));
        }
        Ok(out)
    }

    /// Checks the defining conditions: every assembled mesh relation maps
    /// to the zero morphism, and the classes of the arrow images form a
    /// basis of the irreducible space over each assigned arrow.
    pub fn verify_well_behaved(&self) -> Result<(), WbError> {
        let field = self.comp.field().clone();
        for end in &self.assembled {
            let elem = self
                .modulation
                .mesh_element(&self.tc.cover, end)
                .ok_or_else(|| WbError::Internal(format!("singular pairing at `{end}`")))?;
            let x = self.module_at(&elem.start)?;
            let z = self.module_at(end)?;
            let mut sum = ModuleMorphism::zero(&field, x, z);
            for (mid, part) in &elem.parts {
                let fs = self.arrow_image(&elem.start, mid).ok_or_else(|| {
                    WbError::UnassignedArrow {
                        src: elem.start.clone(),
                        tgt: mid.clone(),
                    }
                })?;
                let gs = self.arrow_image(mid, end).ok_or_else(|| {
                    WbError::UnassignedArrow {
                        src: mid.clone(),
                        tgt: end.clone(),
                    }
                })?;
                for l in 0..part.rows() {
                    for k in 0..part.cols() {
                        let c = part.get(l, k);
                        if field.is_zero(c) {
                            continue;
                        }
                        sum = sum.add(&fs[l].then(&gs[k]).scale(c));
                    }
                }
            }
            if !sum.is_zero() {
                return Err(WbError::Internal(format!(
                    "mesh relation at `{end}` does not map to zero"
                )));
            }
        }
        for ((s, t), imgs) in &self.on_arrows {
            let bs = self.base_name(s)?.to_string();
            let bt = self.base_name(t)?.to_string();
            let rad = self.comp.rad_power_space(&bs, &bt, 1)?;
            let rad2 = self.comp.rad_power_space(&bs, &bt, 2)?;
            let irr_dim = rad.dim() - rad2.dim();
            if imgs.len() != irr_dim {
                return Err(WbError::Internal(format!(
                    "arrow {s} -> {t} carries {} images, irreducible space has dimension {irr_dim}",
                    imgs.len()
                )));
            }
            let mut rows: Vec<Vec<K::Elem>> =
                rad2.basis().rows_iter().map(|r| r.to_vec()).collect();
            for img in imgs {
                let flat = img.flatten();
                if !rad.contains(&flat) {
                    return Err(WbError::Internal(format!(
                        "image of {s} -> {t} is not in the radical"
                    )));
                }
                rows.push(flat);
            }
            let rank = RowSpace::from_rows(field.clone(), rad.ambient(), rows).dim();
            if rank != rad2.dim() + imgs.len() {
                return Err(WbError::Internal(format!(
                    "images of {s} -> {t} are dependent modulo the radical square"
                )));
            }
        }
        Ok(())
    }

    fn level_span(&self) -> usize {
        let lv = self.comp.levels();
        let max = lv.values().copied().max().unwrap_or(0);
        let min = lv.values().copied().min().unwrap_or(0);
        (max - min) as usize
    }

    /// A fiber sum is answerable only if no vertex over the target can be
    /// missing from the truncation. Hom spaces reach at most `level_span`
    /// steps away, so `dist(x) + span` bounds the distance of any fiber
    /// vertex with a nonzero hom space.
    fn fiber_guard(&self, x: &VertexId, base_target: &str) -> Result<(), WbError> {
        if !self.tc.cover.has_vertex(x) {
            return Err(WbError::UnknownCoverVertex(x.clone()));
        }
        if self.is_complete() {
            return Ok(());
        }
        let needed = self.tc.dist[x] + self.level_span() + 1;
        if needed > self.tc.radius {
            return Err(WbError::UndecidableTruncation {
                base: base_target.to_string(),
                radius: self.tc.radius,
                needed_radius: needed,
            });
        }
        Ok(())
    }
}

/// Rank data of one induced map between graded pieces or hom spaces.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct MapCheck {
    pub left_dim: usize,
    pub right_dim: usize,
    pub rank: usize,
}

impl MapCheck {
    pub fn bijective(&self) -> bool {
        self.rank == self.left_dim && self.rank == self.right_dim
    }

    pub fn injective(&self) -> bool {
        self.rank == self.left_dim
    }

    pub fn surjective(&self) -> bool {
        self.rank == self.right_dim
    }
}

#[derive(Clone, Debug)]
pub struct GradedCoveringReport {
    pub cover_vertex: VertexId,
    pub base_target: String,
    pub n: usize,
    pub fiber: Vec<VertexId>,
    pub covariant: MapCheck,
    pub contravariant: MapCheck,
}

impl GradedCoveringReport {
    pub fn bijective(&self) -> bool {
        self.covariant.bijective() && self.contravariant.bijective()
    }
}

#[derive(Clone, Debug)]
pub struct InjectivityReport {
    pub cover_vertex: VertexId,
    pub base_target: String,
    pub fiber: Vec<VertexId>,
    pub covariant: MapCheck,
    pub contravariant: MapCheck,
}

impl InjectivityReport {
    pub fn injective(&self) -> bool {
        self.covariant.injective() && self.contravariant.injective()
    }
}

fn flat_len<K: Field>(x: &Representation<K>, y: &Representation<K>) -> usize {
    x.dims().iter().map(|(v, d)| d * y.dim(v)).sum()
}

/// Checks that the functor induces a bijection between the degree-`n`
/// graded pieces summed over the fiber of `base_target` and the graded
/// piece of the module radical, covariantly and contravariantly.
pub fn verify_graded_covering<K: Field>(
    fb: &WellBehavedFunctor<'_, K>,
    ctx: &MeshCtx<'_, K>,
    x: &VertexId,
    base_target: &str,
    n: usize,
) -> Result<GradedCoveringReport, WbError> {
    let comp = fb.component();
    let fx = fb.base_name(x)?.to_string();
    if comp.module(base_target).is_none() {
        return Err(ComponentDefect::UnknownModule(base_target.to_string()).into());
    }
    fb.fiber_guard(x, base_target)?;
    let fiber = fb.cover().fiber(&VertexId::new(base_target));
    let field = comp.field().clone();
    let xm = comp.module(&fx).expect("cover checked");
    let ym = comp.module(base_target).expect("checked");

    let side = |forward: bool| -> Result<MapCheck, WbError> {
        let (src_name, tgt_name) = if forward {
            (fx.as_str(), base_target)
        } else {
            (base_target, fx.as_str())
        };
        let ambient = if forward {
            flat_len(xm, ym)
        } else {
            flat_len(ym, xm)
        };
        let target_mod = comp.rad_power_space(src_name, tgt_name, n + 1)?;
        let mut left = 0usize;
        let mut rows = Vec::new();
        for z in &fiber {
            let (a, b) = if forward { (x, z) } else { (z, x) };
            let rp = ctx.radical_power(a, b, n)?;
            let rp1 = ctx.radical_power(a, b, n + 1)?;
            let reps = rp.space.quotient_representatives(&rp1.space);
            left += reps.len();
            if reps.is_empty() {
                continue;
            }
            let hom = ctx.hom_basis(a, b)?;
            for u in reps {
                let m = fb.apply_class(&hom, &u)?;
                rows.push(target_mod.reduce(&m.flatten()));
            }
        }
        let rank = RowSpace::from_rows(field.clone(), ambient, rows).dim();
        let right = comp.rad_power_space(src_name, tgt_name, n)?.dim() - target_mod.dim();
        Ok(MapCheck {
            left_dim: left,
            right_dim: right,
            rank,
        })
    };

    Ok(GradedCoveringReport {
        cover_vertex: x.clone(),
        base_target: base_target.to_string(),
        n,
        covariant: side(true)?,
        contravariant: side(false)?,
        fiber,
    })
}

/// Checks that the functor embeds the full hom spaces summed over the
/// fiber into the module hom space, covariantly and contravariantly.
pub fn verify_injectivity<K: Field>(
    fb: &WellBehavedFunctor<'_, K>,
    ctx: &MeshCtx<'_, K>,
    x: &VertexId,
    base_target: &str,
) -> Result<InjectivityReport, WbError> {
    let comp = fb.component();
    let fx = fb.base_name(x)?.to_string();
    if comp.module(base_target).is_none() {
        return Err(ComponentDefect::UnknownModule(base_target.to_string()).into());
    }
    fb.fiber_guard(x, base_target)?;
    let fiber = fb.cover().fiber(&VertexId::new(base_target));
    let field = comp.field().clone();
    let xm = comp.module(&fx).expect("cover checked");
    let ym = comp.module(base_target).expect("checked");

    let side = |forward: bool| -> Result<MapCheck, WbError> {
        let (src_name, tgt_name) = if forward {
            (fx.as_str(), base_target)
        } else {
            (base_target, fx.as_str())
        };
        let ambient = if forward {
            flat_len(xm, ym)
        } else {
            flat_len(ym, xm)
        };
        let mut left = 0usize;
        let mut rows = Vec::new();
        for z in &fiber {
            let (a, b) = if forward { (x, z) } else { (z, x) };
            let hom = ctx.hom_basis(a, b)?;
            left += hom.basis.len();
            for u in &hom.basis {
                rows.push(fb.apply_class(&hom, u)?.flatten());
            }
        }
        let rank = RowSpace::from_rows(field.clone(), ambient, rows).dim();
        let right = comp.rad_power_space(src_name, tgt_name, 0)?.dim();
        Ok(MapCheck {
            left_dim: left,
            right_dim: right,
            rank,
        })
    };

    Ok(InjectivityReport {
        cover_vertex: x.clone(),
        base_target: base_target.to_string(),
        covariant: side(true)?,
        contravariant: side(false)?,
        fiber,
    })
}

/// True when the radical chain of total hom dimensions strictly falls to
/// zero; stalling at a nonzero value means some infinite radical survives.
pub fn radical_chain_vanishes<E>(
    mut total_dim: impl FnMut(usize) -> Result<usize, E>,
) -> Result<bool, E> {
    let mut prev = total_dim(1)?;
    let mut n = 1usize;
    while prev > 0 {
        n += 1;
        let next = total_dim(n)?;
        if next >= prev {
            return Ok(false);
        }
        prev = next;
    }
    Ok(true)
}

/// Whether the intersection of all radical powers vanishes between every
/// pair of modules in the component.
pub fn check_generalized_standard<K: Field>(
    comp: &Component<K>,
) -> Result<bool, ComponentDefect> {
    radical_chain_vanishes(|n| {
        let mut total = 0usize;
        for x in comp.modules().keys() {
            for y in comp.modules().keys() {
                total += comp.rad_power_space(x, y, n)?.dim();
            }
        }
        Ok(total)
    })
}

/// Witness that a composite lies in a deeper radical power than its
/// length while staying nonzero: `f` are the functor images of the
/// classes, `eps` mixes `f` with the radical-square corrections at the
/// recorded steps, and `product` is the nonzero composite of `eps`.
#[derive(Clone, Debug)]
pub struct Witness<K: Field> {
    pub f: Vec<ModuleMorphism<K>>,
    pub eps: Vec<ModuleMorphism<K>>,
    pub rad_square_steps: Vec<usize>,
    pub product: ModuleMorphism<K>,
}

pub fn dump_morphism<K: Field>(name: &str, m: &ModuleMorphism<K>) -> String {
    let mut out = String::new();
    for (v, mat) in &m.mats {
        out.push_str(&format!("{name}.{v}: {}\n", mat.format_row_major()));
    }
    out
}

impl<K: Field> Witness<K> {
    pub fn render(&self) -> String {
        let steps: Vec<String> = self
            .rad_square_steps
            .iter()
            .map(|i| (i + 1).to_string())
            .collect();
        let mut out = format!("witness rad-square-steps {}\n", steps.join(" "));
        for (i, m) in self.f.iter().enumerate() {
            out.push_str(&dump_morphism(&format!("f{}", i + 1), m));
        }
        for (i, m) in self.eps.iter().enumerate() {
            out.push_str(&dump_morphism(&format!("eps{}", i + 1), m));
        }
        out.push_str(&dump_morphism("epsproduct", &self.product));
        out
    }
}

#[derive(Clone, Debug)]
pub enum DegreeVerdict<K: Field> {
    /// The lifted product of classes is nonzero, so the composite avoids
    /// the next radical power.
    NotInRadNPlus1 { n: usize, class_display: String },
    /// The lifted product vanishes but the module composite does not.
    InRadNPlus1Nonzero { n: usize, witness: Witness<K> },
    /// The module composite is the zero morphism.
    Zero { n: usize },
}

impl<K: Field> DegreeVerdict<K> {
    pub fn kind(&self) -> &'static str {
        match self {
            DegreeVerdict::NotInRadNPlus1 { .. } => "NotInRadNPlus1",
            DegreeVerdict::InRadNPlus1Nonzero { .. } => "InRadNPlus1Nonzero",
            DegreeVerdict::Zero { .. } => "Zero",
        }
    }

    pub fn render(&self) -> String {
        let mut out = format!("verdict {}\n", self.kind());
        match self {
            DegreeVerdict::NotInRadNPlus1 { class_display, .. } => {
                out.push_str(&format!("class {class_display}\n"));
            }
            DegreeVerdict::InRadNPlus1Nonzero { witness, .. } => {
                out.push_str(&witness.render());
            }
            DegreeVerdict::Zero { .. } => {
                out.push_str("composite rank 0\n");
            }
        }
        out
    }
}

/// First subset of steps, ordered by size then lexicographically, whose
/// mixture of `h_prime` entries (at the subset) with `f` entries
/// (elsewhere) composes to a nonzero morphism.
pub fn first_nonzero_mixture<K: Field>(
    f: &[ModuleMorphism<K>],
    h_prime: &[ModuleMorphism<K>],
) -> Option<(Vec<usize>, ModuleMorphism<K>)> {
    assert_eq!(f.len(), h_prime.len(), "mismatched chain lengths");
    let n = f.len();
    assert!(n > 0 && n < usize::BITS as usize, "chain length out of range");
    let indices = |mask: usize| -> Vec<usize> {
        (0..n).filter(|i| mask & (1 << i) != 0).collect()
    };
    let mut masks: Vec<usize> = (1..(1usize << n)).collect();
    masks.sort_by_key(|&m| (m.count_ones(), indices(m)));
    for mask in masks {
        let subset = indices(mask);
        let mut acc: Option<ModuleMorphism<K>> = None;
        for i in 0..n {
            let step = if mask & (1 << i) != 0 { &h_prime[i] } else { &f[i] };
            acc = Some(match acc {
                None => step.clone(),
                Some(a) => a.then(step),
            });
        }
        let prod = acc.expect("nonempty chain");
        if !prod.is_zero() {
            return Some((subset, prod));
        }
    }
    None
}

struct PathData<K: Field> {
    lift: Vec<VertexId>,
    mesh_product: Vec<K::Elem>,
    composite: ModuleMorphism<K>,
    f: Vec<ModuleMorphism<K>>,
    h_prime: Vec<ModuleMorphism<K>>,
}

fn analyze_path<K: Field>(
    fb: &WellBehavedFunctor<'_, K>,
    ctx: &MeshCtx<'_, K>,
    vertices: &[&str],
    morphs: &[ModuleMorphism<K>],
) -> Result<PathData<K>, WbError> {
    let n = morphs.len();
    if n == 0 || vertices.len() != n + 1 {
        return Err(WbError::BadPath(format!(
            "{} vertices for {} morphisms",
            vertices.len(),
            n
        )));
    }
    let comp = fb.component();
    let field = comp.field().clone();
    let rep_ctx = RepCtx::new(comp.spec(), field.clone());
    for w in vertices.windows(2) {
        let (s, t) = (VertexId::new(w[0]), VertexId::new(w[1]));
        if !comp.ar_quiver().has_arrow(&s, &t) {
            return Err(WbError::BadPath(format!("no component arrow {s} -> {t}")));
        }
    }
    for (i, h) in morphs.iter().enumerate() {
        let x = comp
            .module(vertices[i])
            .ok_or_else(|| ComponentDefect::UnknownModule(vertices[i].to_string()))?;
        let y = comp
            .module(vertices[i + 1])
            .ok_or_else(|| ComponentDefect::UnknownModule(vertices[i + 1].to_string()))?;
        if !rep_ctx.is_morphism(h, x, y) {
            return Err(WbError::NotIrreducible(i));
        }
        let rad = comp.rad_power_space(vertices[i], vertices[i + 1], 1)?;
        let rad2 = comp.rad_power_space(vertices[i], vertices[i + 1], 2)?;
        let flat = h.flatten();
        if !rad.contains(&flat) || rad2.contains(&flat) {
            return Err(WbError::NotIrreducible(i));
        }
    }

    let base_path: Vec<VertexId> = vertices.iter().map(|s| VertexId::new(*s)).collect();
    let fiber = fb.cover().fiber(&base_path[0]);
    let start = fiber.first().ok_or_else(|| {
        WbError::BadPath(format!("no cover vertex over `{}`", vertices[0]))
    })?;
    let lift = fb.cover().lift_path(&base_path, start).map_err(|e| match e {
        LiftError::EscapesTruncation { .. } => WbError::LiftEscapesTruncation(e),
        other => WbError::BadPath(other.to_string()),
    })?;

    let mut steps = Vec::with_capacity(n);
    let mut fs = Vec::with_capacity(n);
    let mut hps = Vec::with_capacity(n);
    for (i, h) in morphs.iter().enumerate() {
        let (src, tgt) = (&lift[i], &lift[i + 1]);
        let imgs = fb.arrow_image(src, tgt).ok_or_else(|| WbError::UnassignedArrow {
            src: src.clone(),
            tgt: tgt.clone(),
        })?;
        let rad2 = comp.rad_power_space(vertices[i], vertices[i + 1], 2)?;
        let h_red = rad2.reduce(&h.flatten());
        let img_reds: Vec<Vec<K::Elem>> =
            imgs.iter().map(|m| rad2.reduce(&m.flatten())).collect();
        let m = Mat::from_fn(field.clone(), h_red.len(), imgs.len(), |r, c| {
            img_reds[c][r].clone()
        });
        let lambda = m.solve(&h_red).ok_or_else(|| {
            WbError::Internal(format!(
                "class of step {i} is outside the arrow-class span on {src} -> {tgt}"
            ))
        })?;
        let mut step_vec: Option<Vec<K::Elem>> = None;
        let mut f_img: Option<ModuleMorphism<K>> = None;
        for (c, coeff) in lambda.iter().enumerate() {
            let class = ctx.arrow_class(src, tgt, c)?;
            let scaled: Vec<K::Elem> = class.iter().map(|e| field.mul(e, coeff)).collect();
            step_vec = Some(match step_vec {
                None => scaled,
                Some(acc) => acc
                    .iter()
                    .zip(&scaled)
                    .map(|(a, b)| field.add(a, b))
                    .collect(),
            });
            let part = imgs[c].scale(coeff);
            f_img = Some(match f_img {
                None => part,
                Some(acc) => acc.add(&part),
            });
        }
        let f_img = f_img.expect("arrow has at least one component");
        hps.push(h.add(&f_img.scale(&field.neg(&field.one()))));
        fs.push(f_img);
        steps.push(step_vec.expect("arrow has at least one component"));
    }

    let mesh_product = ctx.compose_chain(&lift, &steps)?;
    let composite = morphs
        .iter()
        .skip(1)
        .fold(morphs[0].clone(), |acc, h| acc.then(h));
    Ok(PathData {
        lift,
        mesh_product,
        composite,
        f: fs,
        h_prime: hps,
    })
}

/// Decides where the composite `h_1 ... h_n` of irreducible morphisms
/// along a component path sits relative to `rad^{n+1}`, by lifting the
/// classes to the cover and multiplying there. With `run_oracle` the
/// verdict is cross-checked against direct radical membership.
pub fn composite_degree<K: Field>(
    fb: &WellBehavedFunctor<'_, K>,
    ctx: &MeshCtx<'_, K>,
    vertices: &[&str],
    morphs: &[ModuleMorphism<K>],
    run_oracle: bool,
) -> Result<DegreeVerdict<K>, WbError> {
    let n = morphs.len();
    let comp = fb.component();
    let field = comp.field().clone();
    let data = analyze_path(fb, ctx, vertices, morphs)?;

    let reduced = ctx.reduce(&data.lift[0], &data.lift[n], &data.mesh_product)?;
    let product_zero = reduced.iter().all(|e| field.is_zero(e));
    let verdict = if !product_zero {
        let hom = ctx.hom_basis(&data.lift[0], &data.lift[n])?;
        let terms: Vec<String> = reduced
            .iter()
            .enumerate()
            .filter(|(_, e)| !field.is_zero(e))
            .map(|(i, e)| {
                format!(
                    "{} * {}",
                    field.format_elem(e),
                    ctx.format_elem(&hom.ambient[i])
                )
            })
            .collect();
        DegreeVerdict::NotInRadNPlus1 {
            n,
            class_display: terms.join(" + "),
        }
    } else if !data.composite.is_zero() {
        let f_product = data
            .f
            .iter()
            .skip(1)
            .fold(data.f[0].clone(), |acc, m| acc.then(m));
        if !f_product.is_zero() {
            return Err(WbError::Internal(
                "lifted product vanished but the composite of class images did not".to_string(),
            ));
        }
        let (steps, product) = first_nonzero_mixture(&data.f, &data.h_prime).ok_or_else(|| {
            WbError::Internal("composite nonzero but every mixture vanished".to_string())
        })?;
        let eps: Vec<ModuleMorphism<K>> = (0..n)
            .map(|i| {
                if steps.contains(&i) {
                    data.h_prime[i].clone()
                } else {
                    data.f[i].clone()
                }
            })
            .collect();
        DegreeVerdict::InRadNPlus1Nonzero {
            n,
            witness: Witness {
                f: data.f.clone(),
                eps,
                rad_square_steps: steps,
                product,
            },
        }
    } else {
        DegreeVerdict::Zero { n }
    };

    if run_oracle {
        let deep = comp.rad_power_space(vertices[0], vertices[n], n + 1)?;
        let member = deep.contains(&data.composite.flatten());
        let claims_member = !matches!(verdict, DegreeVerdict::NotInRadNPlus1 { .. });
        if member != claims_member {
            return Err(WbError::OracleMismatch(format!(
                "path {}: verdict {} but rad^{} membership of the composite is {}",
                vertices.join(" > "),
                verdict.kind(),
                n + 1,
                member
            )));
        }
    }
    Ok(verdict)
}

/// The witness behind an `InRadNPlus1Nonzero` verdict for the same path.
pub fn decompose_witness<K: Field>(
    fb: &WellBehavedFunctor<'_, K>,
    ctx: &MeshCtx<'_, K>,
    vertices: &[&str],
    morphs: &[ModuleMorphism<K>],
) -> Result<Witness<K>, WbError> {
    match composite_degree(fb, ctx, vertices, morphs, false)? {
        DegreeVerdict::InRadNPlus1Nonzero { witness, .. } => Ok(witness),
        other => Err(WbError::WrongVerdict(other.kind())),
    }
}
