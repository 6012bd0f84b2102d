//! Dense exact linear algebra over a runtime-chosen field.
//!
//! All reductions use Gauss-Jordan elimination with the lexicographically
//! first pivot (leftmost column, then topmost row), so bases, kernels and
//! solutions are deterministic functions of the input.

use crate::field::Field;

/// A dense row-major matrix over the field `K`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat<K: Field> {
    field: K,
    rows: usize,
    cols: usize,
    data: Vec<K::Elem>,
}

impl<K: Field> Mat<K> {
    pub fn zeros(field: K, rows: usize, cols: usize) -> Mat<K> {
        let data = vec![field.zero(); rows * cols];
        Mat {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn identity(field: K, n: usize) -> Mat<K> {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            let one = m.field.one();
            m.set(i, i, one);
        }
        m
    }

    pub fn from_rows(field: K, rows: Vec<Vec<K::Elem>>) -> Mat<K> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows.into_iter().flatten().collect();
        Mat {
            field,
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_fn(
        field: K,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> K::Elem,
    ) -> Mat<K> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn from_i64_rows(field: K, rows: &[&[i64]]) -> Mat<K> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&n| field.from_i64(n)).collect())
            .collect();
        Mat::from_rows(field, rows)
    }

    pub fn field(&self) -> &K {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &K::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: K::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[K::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<K::Elem> {
        self.row(i).to_vec()
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[K::Elem]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn column(&self, j: usize) -> Vec<K::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| self.field.is_zero(e))
    }

    pub fn transpose(&self) -> Mat<K> {
        Mat::from_fn(self.field.clone(), self.cols, self.rows, |i, j| {
            self.get(j, i).clone()
        })
    }

    pub fn add(&self, other: &Mat<K>) -> Mat<K> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.field.clone(), self.rows, self.cols, |i, j| {
            self.field.add(self.get(i, j), other.get(i, j))
        })
    }

    pub fn sub(&self, other: &Mat<K>) -> Mat<K> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.field.clone(), self.rows, self.cols, |i, j| {
            self.field.sub(self.get(i, j), other.get(i, j))
        })
    }

    pub fn scale(&self, c: &K::Elem) -> Mat<K> {
        Mat::from_fn(self.field.clone(), self.rows, self.cols, |i, j| {
            self.field.mul(self.get(i, j), c)
        })
    }

    pub fn mul(&self, other: &Mat<K>) -> Mat<K> {
        assert_eq!(
            self.cols, other.rows,
            "shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let f = &self.field;
        Mat::from_fn(f.clone(), self.rows, other.cols, |i, j| {
            let mut acc = f.zero();
            for t in 0..self.cols {
                acc = f.add(&acc, &f.mul(self.get(i, t), other.get(t, j)));
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[K::Elem]) -> Vec<K::Elem> {
        assert_eq!(self.cols, v.len());
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for t in 0..self.cols {
                    acc = f.add(&acc, &f.mul(self.get(i, t), &v[t]));
                }
                acc
            })
            .collect()
    }

    pub fn hstack(&self, other: &Mat<K>) -> Mat<K> {
        assert_eq!(self.rows, other.rows);
        Mat::from_fn(
            self.field.clone(),
            self.rows,
            self.cols + other.cols,
            |i, j| {
                if j < self.cols {
                    self.get(i, j).clone()
                } else {
                    other.get(i, j - self.cols).clone()
                }
            },
        )
    }

    pub fn vstack(&self, other: &Mat<K>) -> Mat<K> {
        assert_eq!(self.cols, other.cols);
        let mut rows: Vec<Vec<K::Elem>> = (0..self.rows).map(|i| self.row_vec(i)).collect();
        rows.extend((0..other.rows).map(|i| other.row_vec(i)));
        Mat::from_rows(self.field.clone(), rows)
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Mat<K>, Vec<usize>) {
        let f = self.field.clone();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = f.inv(m.get(r, c)).expect("nonzero pivot");
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !f.is_zero(m.get(i, c)) {
                    let factor = m.get(i, c).clone();
                    for j in c..m.cols {
                        let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(r, j)));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical basis of the right nullspace, one row per basis vector.
    /// The basis vector for free column `j` has a one in position `j` and is
    /// supported otherwise only on pivot columns.
    pub fn kernel_basis(&self) -> Mat<K> {
        let f = self.field.clone();
        let (r, pivots) = self.rref();
        let pivot_set: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        let free: Vec<usize> = (0..self.cols).filter(|&j| !pivot_set[j]).collect();
        let mut rows = Vec::with_capacity(free.len());
        for &j in &free {
            let mut v = vec![f.zero(); self.cols];
            v[j] = f.one();
            for (ri, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(r.get(ri, j));
            }
            rows.push(v);
        }
        if rows.is_empty() {
            Mat::zeros(f, 0, self.cols)
        } else {
            Mat::from_rows(f, rows)
        }
    }

    /// One solution of `self * x = b` with all free variables set to zero,
    /// or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[K::Elem]) -> Option<Vec<K::Elem>> {
        assert_eq!(b.len(), self.rows);
        let f = self.field.clone();
        let aug = Mat::from_fn(f.clone(), self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (ri, &p) in pivots.iter().enumerate() {
            x[p] = r.get(ri, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Mat<K>> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(self.field.clone(), n));
        let (r, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| i != p) {
            return None;
        }
        Some(Mat::from_fn(self.field.clone(), n, n, |i, j| {
            r.get(i, n + j).clone()
        }))
    }

    pub fn format_row_major(&self) -> String {
        let entries: Vec<String> = self
            .data
            .iter()
            .map(|e| self.field.format_elem(e))
            .collect();
        format!("{} x {}; {}", self.rows, self.cols, entries.join(" "))
    }
}

/// A subspace of `K^n`, stored as the reduced row echelon basis of its
/// spanning rows. Two equal subspaces always compare equal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RowSpace<K: Field> {
    ambient: usize,
    basis: Mat<K>,
    pivots: Vec<usize>,
}

impl<K: Field> RowSpace<K> {
    pub fn from_rows(field: K, ambient: usize, rows: Vec<Vec<K::Elem>>) -> RowSpace<K> {
        for r in &rows {
            assert_eq!(r.len(), ambient, "row length mismatch");
        }
        if rows.is_empty() {
            return RowSpace {
                ambient,
                basis: Mat::zeros(field, 0, ambient),
                pivots: Vec::new(),
            };
        }
        let m = Mat::from_rows(field.clone(), rows);
        let (r, pivots) = m.rref();
        let basis_rows: Vec<Vec<K::Elem>> = (0..pivots.len()).map(|i| r.row_vec(i)).collect();
        let basis = if basis_rows.is_empty() {
            Mat::zeros(field, 0, ambient)
        } else {
            Mat::from_rows(field, basis_rows)
        };
        RowSpace {
            ambient,
            basis,
            pivots,
        }
    }

    pub fn zero(field: K, ambient: usize) -> RowSpace<K> {
        RowSpace::from_rows(field, ambient, Vec::new())
    }

    pub fn full(field: K, ambient: usize) -> RowSpace<K> {
        let id = Mat::identity(field.clone(), ambient);
        let rows = (0..ambient).map(|i| id.row_vec(i)).collect();
        RowSpace::from_rows(field, ambient, rows)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }
    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }
    pub fn basis(&self) -> &Mat<K> {
        &self.basis
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn field(&self) -> &K {
        self.basis.field()
    }

    /// Remainder of `v` after reduction by the echelon basis. Zero iff `v`
    /// lies in the subspace.
    pub fn reduce(&self, v: &[K::Elem]) -> Vec<K::Elem> {
        assert_eq!(v.len(), self.ambient);
        let f = self.basis.field().clone();
        let mut v = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if !f.is_zero(&v[p]) {
                let factor = v[p].clone();
                for j in 0..self.ambient {
                    v[j] = f.sub(&v[j], &f.mul(&factor, self.basis.get(i, j)));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[K::Elem]) -> bool {
        let f = self.basis.field().clone();
        self.reduce(v).iter().all(|e| f.is_zero(e))
    }

    pub fn contains_space(&self, other: &RowSpace<K>) -> bool {
        (0..other.dim()).all(|i| self.contains(other.basis.row(i)))
    }

    /// Smallest subspace containing both.
    pub fn sum(&self, other: &RowSpace<K>) -> RowSpace<K> {
        assert_eq!(self.ambient, other.ambient);
        let mut rows: Vec<Vec<K::Elem>> = (0..self.dim()).map(|i| self.basis.row_vec(i)).collect();
        rows.extend((0..other.dim()).map(|i| other.basis.row_vec(i)));
        RowSpace::from_rows(self.basis.field().clone(), self.ambient, rows)
    }

    /// Representatives of a basis of `self / sub`, for `sub` a subspace of
    /// `self`. Each representative lies in `self` and the reductions modulo
    /// `sub` are linearly independent.
    pub fn quotient_representatives(&self, sub: &RowSpace<K>) -> Vec<Vec<K::Elem>> {
        assert_eq!(self.ambient, sub.ambient);
        debug_assert!(self.contains_space(sub));
        let f = self.basis.field().clone();
        let mut reps = Vec::new();
        let mut seen = sub.clone();
        for i in 0..self.dim() {
            let row = self.basis.row_vec(i);
            if !seen.contains(&row) {
                seen = seen.sum(&RowSpace::from_rows(
                    f.clone(),
                    self.ambient,
                    vec![row.clone()],
                ));
                reps.push(row);
            }
        }
        reps
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use proptest::prelude::*;

    #[test]
    fn rref_and_rank() {
        let m = Mat::from_i64_rows(Rationals, &[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let (r, pivots) = m.rref();
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(m.rank(), 2);
        assert_eq!(*r.get(0, 0), Rationals.one());
        assert!(Rationals.is_zero(r.get(2, 2)));
    }

    #[test]
    fn kernel_is_annihilated() {
        let m = Mat::from_i64_rows(Rationals, &[&[1, 2, 3], &[0, 1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.rows(), 1);
        for i in 0..k.rows() {
            let img = m.mul_vec(k.row(i));
            assert!(img.iter().all(|e| Rationals.is_zero(e)));
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = Mat::from_i64_rows(Rationals, &[&[1, 2], &[2, 4]]);
        let b = vec![Rationals.from_i64(3), Rationals.from_i64(6)];
        let x = m.solve(&b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
        let bad = vec![Rationals.from_i64(3), Rationals.from_i64(7)];
        assert!(m.solve(&bad).is_none());
    }

    #[test]
    fn inverse_roundtrip() {
        let f = PrimeField::new(101).unwrap();
        let m = Mat::from_i64_rows(f, &[&[2, 1], &[5, 3]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(f, 2));
        let singular = Mat::from_i64_rows(f, &[&[1, 2], &[2, 4]]);
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn row_space_membership_and_quotient() {
        let space = RowSpace::from_rows(
            Rationals,
            3,
            vec![
                vec![
                    Rationals.from_i64(1),
                    Rationals.from_i64(0),
                    Rationals.from_i64(1),
                ],
                vec![
                    Rationals.from_i64(0),
                    Rationals.from_i64(1),
                    Rationals.from_i64(1),
                ],
            ],
        );
        assert_eq!(space.dim(), 2);
        assert!(space.contains(&[
            Rationals.from_i64(1),
            Rationals.from_i64(1),
            Rationals.from_i64(2)
        ]));
        assert!(!space.contains(&[
            Rationals.from_i64(1),
            Rationals.from_i64(0),
            Rationals.from_i64(0)
        ]));
        let sub = RowSpace::from_rows(
            Rationals,
            3,
            vec![vec![
                Rationals.from_i64(1),
                Rationals.from_i64(1),
                Rationals.from_i64(2),
            ]],
        );
        let reps = space.quotient_representatives(&sub);
        assert_eq!(reps.len(), 1);
        assert!(space.contains(&reps[0]));
        assert!(!sub.contains(&reps[0]));
    }

    proptest! {
        #[test]
        fn prop_rref_idempotent(entries in proptest::collection::vec(-6i64..=6, 12)) {
            let f = PrimeField::new(101).unwrap();
            let rows: Vec<Vec<u64>> = entries
                .chunks(4)
                .map(|ch| ch.iter().map(|&n| f.from_i64(n)).collect())
                .collect();
            let m = Mat::from_rows(f, rows);
            let (r1, p1) = m.rref();
            let (r2, p2) = r1.rref();
            prop_assert_eq!(r1, r2);
            prop_assert_eq!(p1, p2);
        }

        #[test]
        fn prop_rank_bounded_by_transpose(entries in proptest::collection::vec(-6i64..=6, 12)) {
            let rows: Vec<Vec<_>> = entries
                .chunks(4)
                .map(|ch| ch.iter().map(|&n| Rationals.from_i64(n)).collect())
                .collect();
            let m = Mat::from_rows(Rationals, rows);
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }
    }
}
