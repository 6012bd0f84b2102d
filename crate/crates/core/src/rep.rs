//! Finite-dimensional quiver representations over an exact ground field.
//!
//! A representation assigns a vector space dimension to every vertex of the
//! base quiver and a matrix to every arrow. Morphism spaces, endomorphism
//! radicals, kernels and cokernels are computed by exact linear algebra, so
//! every rank and membership answer is certain.

use crate::algfile::AlgebraSpec;
use crate::field::Field;
use crate::linalg::{Mat, RowSpace};
use std::collections::BTreeMap;
use thiserror::Error;

/// Matrices act on column vectors; the matrix of an arrow `a : s -> t` in a
/// representation `X` has shape `X.dim(t)` by `X.dim(s)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Representation<K: Field> {
    dims: BTreeMap<String, usize>,
    mats: BTreeMap<String, Mat<K>>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum RepError {
    #[error("dimension given for `{0}`, which is not a vertex")]
    DimForUnknownVertex(String),
    #[error("matrix given for `{0}`, which is not an arrow")]
    MatForUnknownArrow(String),
    #[error("matrix for arrow `{arrow}` has shape {got_rows} x {got_cols}, expected {rows} x {cols}")]
    MatShape {
        arrow: String,
        rows: usize,
        cols: usize,
        got_rows: usize,
        got_cols: usize,
    },
    #[error("endomorphism radical is not nilpotent over this field; use characteristic zero or a larger prime")]
    RadicalNotNilpotent,
}

impl<K: Field> Representation<K> {
    /// Missing dimensions default to zero and missing matrices to zero
    /// matrices of the forced shape.
    pub fn new(
        field: &K,
        spec: &AlgebraSpec,
        dims: BTreeMap<String, usize>,
        mats: BTreeMap<String, Mat<K>>,
    ) -> Result<Representation<K>, RepError> {
        for v in dims.keys() {
            if !spec.vertices.contains(v) {
                return Err(RepError::DimForUnknownVertex(v.clone()));
            }
        }
        let dims: BTreeMap<String, usize> = spec
            .vertices
            .iter()
            .map(|v| (v.clone(), dims.get(v).copied().unwrap_or(0)))
            .collect();
        let mut full_mats = BTreeMap::new();
        for (name, (src, tgt)) in &spec.arrows {
            let (rows, cols) = (dims[tgt], dims[src]);
            let mat = match mats.get(name) {
                Some(m) => {
                    if m.rows() != rows || m.cols() != cols {
                        return Err(RepError::MatShape {
                            arrow: name.clone(),
                            rows,
                            cols,
                            got_rows: m.rows(),
                            got_cols: m.cols(),
                        });
                    }
                    m.clone()
                }
                None => Mat::zeros(field.clone(), rows, cols),
            };
            full_mats.insert(name.clone(), mat);
        }
        for name in mats.keys() {
            if !spec.arrows.contains_key(name) {
                return Err(RepError::MatForUnknownArrow(name.clone()));
            }
        }
        Ok(Representation {
            dims,
            mats: full_mats,
        })
    }

    pub fn dim(&self, v: &str) -> usize {
        self.dims.get(v).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &BTreeMap<String, usize> {
        &self.dims
    }

    pub fn dim_vector(&self) -> Vec<usize> {
        self.dims.values().copied().collect()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn arrow_mat(&self, name: &str) -> &Mat<K> {
        &self.mats[name]
    }
}

/// A morphism of representations, one matrix per vertex. For `f : X -> Y`
/// the block at `v` has shape `Y.dim(v)` by `X.dim(v)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModuleMorphism<K: Field> {
    pub mats: BTreeMap<String, Mat<K>>,
}

impl<K: Field> ModuleMorphism<K> {
    pub fn zero(field: &K, x: &Representation<K>, y: &Representation<K>) -> ModuleMorphism<K> {
        let mats = x
            .dims
            .keys()
            .map(|v| {
                (
                    v.clone(),
                    Mat::zeros(field.clone(), y.dim(v), x.dim(v)),
                )
            })
            .collect();
        ModuleMorphism { mats }
    }

    pub fn identity(field: &K, x: &Representation<K>) -> ModuleMorphism<K> {
        let mats = x
            .dims
            .iter()
            .map(|(v, &d)| (v.clone(), Mat::identity(field.clone(), d)))
            .collect();
        ModuleMorphism { mats }
    }

    /// Diagrammatic composite: `self` first, then `g`.
    pub fn then(&self, g: &ModuleMorphism<K>) -> ModuleMorphism<K> {
        let mats = self
            .mats
            .iter()
            .map(|(v, m)| (v.clone(), g.mats[v].mul(m)))
            .collect();
        ModuleMorphism { mats }
    }

    pub fn add(&self, other: &ModuleMorphism<K>) -> ModuleMorphism<K> {
        let mats = self
            .mats
            .iter()
            .map(|(v, m)| (v.clone(), m.add(&other.mats[v])))
            .collect();
        ModuleMorphism { mats }
    }

    pub fn scale(&self, c: &K::Elem) -> ModuleMorphism<K> {
        let mats = self.mats.iter().map(|(v, m)| (v.clone(), m.scale(c))).collect();
        ModuleMorphism { mats }
    }

    pub fn is_zero(&self) -> bool {
        self.mats.values().all(|m| m.is_zero())
    }

    /// All entries in vertex order, each block row-major. This is the
    /// coordinate system shared by `hom_basis` and `morphism_coords`.
    pub fn flatten(&self) -> Vec<K::Elem> {
        let mut out = Vec::new();
        for m in self.mats.values() {
            for i in 0..m.rows() {
                out.extend(m.row(i).iter().cloned());
            }
        }
        out
    }
}

/// Computations tied to one base quiver and ground field.
pub struct RepCtx<'a, K: Field> {
    spec: &'a AlgebraSpec,
    field: K,
}

impl<'a, K: Field> RepCtx<'a, K> {
    pub fn new(spec: &'a AlgebraSpec, field: K) -> RepCtx<'a, K> {
        RepCtx { spec, field }
    }

    pub fn spec(&self) -> &AlgebraSpec {
        self.spec
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    fn indicator(&self, keep: impl Fn(&str) -> bool) -> Representation<K> {
        let dims: BTreeMap<String, usize> = self
            .spec
            .vertices
            .iter()
            .map(|v| (v.clone(), usize::from(keep(v))))
            .collect();
        let mats = self
            .spec
            .arrows
            .iter()
            .map(|(name, (src, tgt))| {
                let m = if dims[src] == 1 && dims[tgt] == 1 {
                    Mat::identity(self.field.clone(), 1)
                } else {
                    Mat::zeros(self.field.clone(), dims[tgt], dims[src])
                };
                (name.clone(), m)
            })
            .collect();
        Representation { dims, mats }
    }

    fn reachable_from(&self, start: &str, forward: bool) -> BTreeMap<String, bool> {
        let mut seen: BTreeMap<String, bool> =
            self.spec.vertices.iter().map(|v| (v.clone(), false)).collect();
        let mut stack = vec![start.to_string()];
        seen.insert(start.to_string(), true);
        while let Some(v) = stack.pop() {
            for (src, tgt) in self.spec.arrows.values() {
                let (from, to) = if forward { (src, tgt) } else { (tgt, src) };
                if from == &v && !seen[to] {
                    seen.insert(to.clone(), true);
                    stack.push(to.clone());
                }
            }
        }
        seen
    }

    /// On a tree there is at most one path between two vertices, so the
    /// indecomposable projective at `v` is the indicator representation of
    /// the set of vertices reachable from `v`, with identity arrow maps.
    pub fn projective(&self, v: &str) -> Representation<K> {
        let reach = self.reachable_from(v, true);
        self.indicator(|w| reach[w])
    }

    /// Dually, the injective at `v` is the indicator of the set of vertices
    /// that reach `v`.
    pub fn injective(&self, v: &str) -> Representation<K> {
        let reach = self.reachable_from(v, false);
        self.indicator(|w| reach[w])
    }

    pub fn simple(&self, v: &str) -> Representation<K> {
        self.indicator(|w| w == v)
    }

    pub fn is_morphism(
        &self,
        f: &ModuleMorphism<K>,
        x: &Representation<K>,
        y: &Representation<K>,
    ) -> bool {
        self.spec.arrows.iter().all(|(name, (src, tgt))| {
            let lhs = f.mats[tgt].mul(x.arrow_mat(name));
            let rhs = y.arrow_mat(name).mul(&f.mats[src]);
            lhs == rhs
        })
    }

    pub(crate) fn unflatten(
        &self,
        coords: &[K::Elem],
        x: &Representation<K>,
        y: &Representation<K>,
    ) -> ModuleMorphism<K> {
        let mut mats = BTreeMap::new();
        let mut pos = 0;
        for v in self.spec.vertices.iter() {
            let (rows, cols) = (y.dim(v), x.dim(v));
            let m = Mat::from_fn(self.field.clone(), rows, cols, |i, j| {
                coords[pos + i * cols + j].clone()
            });
            pos += rows * cols;
            mats.insert(v.clone(), m);
        }
        ModuleMorphism { mats }
    }

    /// Canonical basis of the space of morphisms `x -> y`, found as the
    /// nullspace of the intertwining constraints `f_t X_a = Y_a f_s`.
    pub fn hom_basis(
        &self,
        x: &Representation<K>,
        y: &Representation<K>,
    ) -> Vec<ModuleMorphism<K>> {
        let f = self.field.clone();
        let mut offsets = BTreeMap::new();
        let mut total = 0;
        for v in self.spec.vertices.iter() {
            offsets.insert(v.clone(), total);
            total += y.dim(v) * x.dim(v);
        }
        if total == 0 {
            return Vec::new();
        }
        let mut rows: Vec<Vec<K::Elem>> = Vec::new();
        for (name, (src, tgt)) in &self.spec.arrows {
            let xa = x.arrow_mat(name);
            let ya = y.arrow_mat(name);
            for i in 0..y.dim(tgt) {
                for j in 0..x.dim(src) {
                    let mut row = vec![f.zero(); total];
                    for k in 0..x.dim(tgt) {
                        let idx = offsets[tgt] + i * x.dim(tgt) + k;
                        row[idx] = f.add(&row[idx], xa.get(k, j));
                    }
                    for l in 0..y.dim(src) {
                        let idx = offsets[src] + l * x.dim(src) + j;
                        row[idx] = f.sub(&row[idx], ya.get(i, l));
                    }
                    rows.push(row);
                }
            }
        }
        let system = if rows.is_empty() {
            Mat::zeros(f.clone(), 0, total)
        } else {
            Mat::from_rows(f.clone(), rows)
        };
        system
            .kernel_basis()
            .rows_iter()
            .map(|r| self.unflatten(r, x, y))
            .collect()
    }

    pub fn hom_dim(&self, x: &Representation<K>, y: &Representation<K>) -> usize {
        self.hom_basis(x, y).len()
    }

    /// Coordinates of `f` in the given basis, in the `flatten` coordinate
    /// system. `None` when `f` is outside the span.
    pub fn morphism_coords(
        &self,
        basis: &[ModuleMorphism<K>],
        f: &ModuleMorphism<K>,
    ) -> Option<Vec<K::Elem>> {
        let target = f.flatten();
        if basis.is_empty() {
            return if target.iter().all(|c| self.field.is_zero(c)) {
                Some(Vec::new())
            } else {
                None
            };
        }
        let cols: Vec<Vec<K::Elem>> = basis.iter().map(|b| b.flatten()).collect();
        let stacked = Mat::from_fn(self.field.clone(), target.len(), basis.len(), |i, j| {
            cols[j][i].clone()
        });
        stacked.solve(&target)
    }

    /// Basis of the radical of `End(x)`: the nullspace of the trace form
    /// `(f, g) -> tr(fg)`. The radical is always contained in that nullspace,
    /// and the nullspace is a two-sided ideal because the trace is symmetric
    /// and associative, so verifying it is nilpotent proves equality. The
    /// verification can fail in small characteristic, never over the
    /// rationals.
    pub fn end_radical(
        &self,
        x: &Representation<K>,
    ) -> Result<Vec<ModuleMorphism<K>>, RepError> {
        let f = self.field.clone();
        let basis = self.hom_basis(x, x);
        let n = basis.len();
        let trace_of = |m: &ModuleMorphism<K>| {
            let mut t = f.zero();
            for mat in m.mats.values() {
                for i in 0..mat.rows().min(mat.cols()) {
                    t = f.add(&t, mat.get(i, i));
                }
            }
            t
        };
        let gram = Mat::from_fn(f.clone(), n, n, |i, j| trace_of(&basis[i].then(&basis[j])));
        let radical: Vec<ModuleMorphism<K>> = gram
            .kernel_basis()
            .rows_iter()
            .map(|coords| {
                let mut acc = ModuleMorphism::zero(&f, x, x);
                for (c, b) in coords.iter().zip(&basis) {
                    acc = acc.add(&b.scale(c));
                }
                acc
            })
            .collect();
        let ambient = ModuleMorphism::zero(&f, x, x).flatten().len();
        let mut power = RowSpace::from_rows(
            f.clone(),
            ambient,
            radical.iter().map(|r| r.flatten()).collect(),
        );
        while !power.is_zero() {
            let products: Vec<Vec<K::Elem>> = power
                .basis()
                .rows_iter()
                .flat_map(|row| {
                    let m = self.unflatten(row, x, x);
                    radical.iter().map(move |r| m.then(r).flatten()).collect::<Vec<_>>()
                })
                .collect();
            let next = RowSpace::from_rows(f.clone(), ambient, products);
            if next.dim() >= power.dim() {
                return Err(RepError::RadicalNotNilpotent);
            }
            power = next;
        }
        Ok(radical)
    }

    /// A representation is indecomposable exactly when its endomorphism ring
    /// is local; over the fields used here locality with one-dimensional
    /// residue is what occurs for all representations of Dynkin quivers.
    pub fn is_indecomposable(&self, x: &Representation<K>) -> Result<bool, RepError> {
        let end_dim = self.hom_dim(x, x);
        let rad_dim = self.end_radical(x)?.len();
        Ok(end_dim - rad_dim == 1)
    }

    /// Cokernel of `f : x -> y` together with the projection `y -> coker`.
    /// The quotient basis at each vertex is the set of non-pivot coordinates
    /// of the image, so repeated runs agree exactly.
    pub fn cokernel(
        &self,
        f: &ModuleMorphism<K>,
        x: &Representation<K>,
        y: &Representation<K>,
    ) -> (Representation<K>, ModuleMorphism<K>) {
        debug_assert!(self.is_morphism(f, x, y));
        let k = self.field.clone();
        let mut dims = BTreeMap::new();
        let mut proj = BTreeMap::new();
        let mut sect = BTreeMap::new();
        for v in self.spec.vertices.iter() {
            let fv = &f.mats[v];
            let image = RowSpace::from_rows(
                k.clone(),
                y.dim(v),
                (0..fv.cols()).map(|j| fv.column(j)).collect(),
            );
            let free: Vec<usize> = (0..y.dim(v))
                .filter(|j| !image.pivots().contains(j))
                .collect();
            let c = free.len();
            let pi = Mat::from_fn(k.clone(), c, y.dim(v), |i, j| {
                let mut e = vec![k.zero(); y.dim(v)];
                e[j] = k.one();
                image.reduce(&e)[free[i]].clone()
            });
            let iota = Mat::from_fn(k.clone(), y.dim(v), c, |i, j| {
                if i == free[j] {
                    k.one()
                } else {
                    k.zero()
                }
            });
            dims.insert(v.clone(), c);
            proj.insert(v.clone(), pi);
            sect.insert(v.clone(), iota);
        }
        let mats = self
            .spec
            .arrows
            .iter()
            .map(|(name, (src, tgt))| {
                let induced = proj[tgt].mul(y.arrow_mat(name)).mul(&sect[src]);
                debug_assert!(proj[tgt].mul(y.arrow_mat(name)).mul(&f.mats[src]).is_zero());
                (name.clone(), induced)
            })
            .collect();
        (
            Representation { dims, mats },
            ModuleMorphism { mats: proj },
        )
    }

    /// Kernel of `g : y -> z` together with the inclusion `ker -> y`.
    pub fn kernel(
        &self,
        g: &ModuleMorphism<K>,
        y: &Representation<K>,
        z: &Representation<K>,
    ) -> (Representation<K>, ModuleMorphism<K>) {
        debug_assert!(self.is_morphism(g, y, z));
        let k = self.field.clone();
        let mut dims = BTreeMap::new();
        let mut incl = BTreeMap::new();
        for v in self.spec.vertices.iter() {
            let basis = g.mats[v].kernel_basis();
            dims.insert(v.clone(), basis.rows());
            incl.insert(v.clone(), basis.transpose());
        }
        let mats = self
            .spec
            .arrows
            .iter()
            .map(|(name, (src, tgt))| {
                let pushed = y.arrow_mat(name).mul(&incl[src]);
                let mut action = Mat::zeros(k.clone(), dims[tgt], dims[src]);
                for j in 0..dims[src] {
                    let col = pushed.column(j);
                    let sol = incl[tgt]
                        .solve(&col)
                        .expect("image of a kernel vector lies in the kernel");
                    for (i, c) in sol.into_iter().enumerate() {
                        action.set(i, j, c);
                    }
                }
                (name.clone(), action)
            })
            .collect();
        (
            Representation { dims, mats },
            ModuleMorphism { mats: incl },
        )
    }

    /// Block-diagonal direct sum with the canonical inclusions and
    /// projections, in the order the summands are given.
    pub fn direct_sum(
        &self,
        parts: &[&Representation<K>],
    ) -> (
        Representation<K>,
        Vec<ModuleMorphism<K>>,
        Vec<ModuleMorphism<K>>,
    ) {
        let k = self.field.clone();
        let dims: BTreeMap<String, usize> = self
            .spec
            .vertices
            .iter()
            .map(|v| (v.clone(), parts.iter().map(|p| p.dim(v)).sum()))
            .collect();
        let mats: BTreeMap<String, Mat<K>> = self
            .spec
            .arrows
            .iter()
            .map(|(name, (src, tgt))| {
                let mut m = Mat::zeros(k.clone(), dims[tgt], dims[src]);
                let (mut ro, mut co) = (0, 0);
                for p in parts {
                    let block = p.arrow_mat(name);
                    for i in 0..block.rows() {
                        for j in 0..block.cols() {
                            m.set(ro + i, co + j, block.get(i, j).clone());
                        }
                    }
                    ro += p.dim(tgt);
                    co += p.dim(src);
                }
                (name.clone(), m)
            })
            .collect();
        let sum = Representation { dims, mats };
        let mut inclusions = Vec::new();
        let mut projections = Vec::new();
        let mut offset: BTreeMap<String, usize> =
            self.spec.vertices.iter().map(|v| (v.clone(), 0)).collect();
        for p in parts {
            let mut inc = BTreeMap::new();
            let mut prj = BTreeMap::new();
            for v in self.spec.vertices.iter() {
                let off = offset[v];
                inc.insert(
                    v.clone(),
                    Mat::from_fn(k.clone(), sum.dim(v), p.dim(v), |i, j| {
                        if i == off + j {
                            k.one()
                        } else {
                            k.zero()
                        }
                    }),
                );
                prj.insert(
                    v.clone(),
                    Mat::from_fn(k.clone(), p.dim(v), sum.dim(v), |i, j| {
                        if j == off + i {
                            k.one()
                        } else {
                            k.zero()
                        }
                    }),
                );
                *offset.get_mut(v).unwrap() += p.dim(v);
            }
            inclusions.push(ModuleMorphism { mats: inc });
            projections.push(ModuleMorphism { mats: prj });
        }
        (sum, inclusions, projections)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algfile;
    use crate::field::Rationals;

    fn a2() -> AlgebraSpec {
        algfile::parse("vertex 1\nvertex 2\narrow a : 1 -> 2\n").unwrap()
    }

    fn a3() -> AlgebraSpec {
        algfile::parse("vertex 1\nvertex 2\nvertex 3\narrow a : 1 -> 2\narrow b : 2 -> 3\n")
            .unwrap()
    }

    #[test]
    fn projectives_and_injectives_are_indicators() {
        let spec = a3();
        let ctx = RepCtx::new(&spec, Rationals);
        assert_eq!(ctx.projective("1").dim_vector(), vec![1, 1, 1]);
        assert_eq!(ctx.projective("3").dim_vector(), vec![0, 0, 1]);
        assert_eq!(ctx.injective("1").dim_vector(), vec![1, 0, 0]);
        assert_eq!(ctx.injective("3").dim_vector(), vec![1, 1, 1]);
        let p1 = ctx.projective("1");
        assert!(p1.arrow_mat("a") == &Mat::identity(Rationals, 1));
    }

    #[test]
    fn hom_dims_on_a2() {
        let spec = a2();
        let ctx = RepCtx::new(&spec, Rationals);
        let p1 = ctx.projective("1");
        let s1 = ctx.simple("1");
        let s2 = ctx.simple("2");
        assert_eq!(ctx.hom_dim(&p1, &p1), 1);
        assert_eq!(ctx.hom_dim(&p1, &s1), 1);
        assert_eq!(ctx.hom_dim(&s1, &p1), 0);
        assert_eq!(ctx.hom_dim(&s2, &p1), 1);
        // Hom out of a projective only sees the value at its vertex.
        assert_eq!(ctx.hom_dim(&p1, &s2), 0);
        for f in ctx.hom_basis(&p1, &s1) {
            assert!(ctx.is_morphism(&f, &p1, &s1));
        }
    }

    #[test]
    fn end_radical_of_a_brick_is_zero() {
        let spec = a3();
        let ctx = RepCtx::new(&spec, Rationals);
        let p1 = ctx.projective("1");
        assert_eq!(ctx.hom_dim(&p1, &p1), 1);
        assert!(ctx.end_radical(&p1).unwrap().is_empty());
        assert_eq!(ctx.is_indecomposable(&p1), Ok(true));
    }

    #[test]
    fn end_radical_of_a_direct_sum() {
        let spec = a2();
        let ctx = RepCtx::new(&spec, Rationals);
        let p1 = ctx.projective("1");
        let s1 = ctx.simple("1");
        let (sum, _, _) = ctx.direct_sum(&[&p1, &s1]);
        // End has the two idempotents plus the projection P_1 -> S_1.
        assert_eq!(ctx.hom_dim(&sum, &sum), 3);
        let rad = ctx.end_radical(&sum).unwrap();
        assert_eq!(rad.len(), 1);
        assert!(rad[0].then(&rad[0]).is_zero());
        assert_eq!(ctx.is_indecomposable(&sum), Ok(false));
    }

    #[test]
    fn cokernel_of_the_radical_inclusion() {
        let spec = a2();
        let ctx = RepCtx::new(&spec, Rationals);
        let p2 = ctx.projective("2");
        let p1 = ctx.projective("1");
        let basis = ctx.hom_basis(&p2, &p1);
        assert_eq!(basis.len(), 1);
        let (coker, pi) = ctx.cokernel(&basis[0], &p2, &p1);
        assert_eq!(coker.dim_vector(), vec![1, 0]);
        assert!(ctx.is_morphism(&pi, &p1, &coker));
    }

    #[test]
    fn kernel_of_the_top_projection() {
        let spec = a2();
        let ctx = RepCtx::new(&spec, Rationals);
        let p1 = ctx.projective("1");
        let s1 = ctx.simple("1");
        let basis = ctx.hom_basis(&p1, &s1);
        let (ker, iota) = ctx.kernel(&basis[0], &p1, &s1);
        assert_eq!(ker.dim_vector(), vec![0, 1]);
        assert!(ctx.is_morphism(&iota, &ker, &p1));
    }

    #[test]
    fn coords_recover_combinations() {
        let spec = a2();
        let ctx = RepCtx::new(&spec, Rationals);
        let p1 = ctx.projective("1");
        let (sum, _, _) = ctx.direct_sum(&[&p1, &p1]);
        let basis = ctx.hom_basis(&sum, &sum);
        assert_eq!(basis.len(), 4);
        let two = Rationals.from_i64(2);
        let f = basis[1].scale(&two).add(&basis[3]);
        let coords = ctx.morphism_coords(&basis, &f).unwrap();
        let expected = [0i64, 2, 0, 1];
        for (c, e) in coords.iter().zip(expected) {
            assert_eq!(c, &Rationals.from_i64(e));
        }
    }

    #[test]
    fn shape_validation_on_new() {
        let spec = a2();
        let bad = Representation::new(
            &Rationals,
            &spec,
            BTreeMap::from([("1".to_string(), 1), ("2".to_string(), 1)]),
            BTreeMap::from([("a".to_string(), Mat::zeros(Rationals, 2, 1))]),
        );
        assert!(matches!(bad, Err(RepError::MatShape { .. })));
    }
}
