//! Sparse exact linear algebra: vectors, reduced row-echelon subspaces,
//! kernels and quotient coordinates.
//!
//! Quotients everywhere in the engine use the same convention: the
//! complement of a subspace is spanned by the coordinate vectors of its
//! non-pivot columns. Normal forms modulo a subspace are therefore supported
//! on non-pivot columns only, which makes every quotient basis deterministic.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::rational::Rational;
use crate::Error;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SparseVector {
    dim: usize,
    entries: BTreeMap<usize, Rational>,
}

impl SparseVector {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn unit(dim: usize, index: usize) -> Self {
        let mut v = Self::zero(dim);
        v.set(index, Rational::one());
        v
    }

    pub fn from_dense(values: &[Rational]) -> Self {
        let mut v = Self::zero(values.len());
        for (i, x) in values.iter().enumerate() {
            v.set(i, x.clone());
        }
        v
    }

    pub fn from_entries(dim: usize, entries: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut v = Self::zero(dim);
        for (i, x) in entries {
            v.add_at(i, &x);
        }
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: usize) -> Rational {
        self.entries.get(&index).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn get_ref(&self, index: usize) -> Option<&Rational> {
        self.entries.get(&index)
    }

    pub fn set(&mut self, index: usize, value: Rational) {
        assert!(index < self.dim, "index {index} out of range {}", self.dim);
        if value.is_zero() {
            self.entries.remove(&index);
        } else {
            self.entries.insert(index, value);
        }
    }

    pub fn add_at(&mut self, index: usize, value: &Rational) {
        assert!(index < self.dim, "index {index} out of range {}", self.dim);
        if value.is_zero() {
            return;
        }
        let slot = self.entries.entry(index).or_insert_with(Rational::zero);
        *slot += value;
        if slot.is_zero() {
            self.entries.remove(&index);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.entries.iter().map(|(i, x)| (*i, x))
    }

    pub fn leading(&self) -> Option<(usize, &Rational)> {
        self.entries.iter().next().map(|(i, x)| (*i, x))
    }

    /// `self += scale * other`.
    pub fn add_scaled(&mut self, scale: &Rational, other: &SparseVector) {
        if scale.is_zero() {
            return;
        }
        assert_eq!(self.dim, other.dim, "dimension mismatch in add_scaled");
        for (i, x) in other.iter() {
            self.add_at(i, &(scale * x));
        }
    }

    pub fn scaled(&self, scale: &Rational) -> SparseVector {
        if scale.is_zero() {
            return SparseVector::zero(self.dim);
        }
        SparseVector {
            dim: self.dim,
            entries: self.entries.iter().map(|(i, x)| (*i, x * scale)).collect(),
        }
    }

    pub fn sub(&self, other: &SparseVector) -> SparseVector {
        let mut out = self.clone();
        out.add_scaled(&-Rational::one(), other);
        out
    }

    pub fn add(&self, other: &SparseVector) -> SparseVector {
        let mut out = self.clone();
        out.add_scaled(&Rational::one(), other);
        out
    }

    pub fn to_dense(&self) -> Vec<Rational> {
        (0..self.dim).map(|i| self.get(i)).collect()
    }

    /// Re-indexes this vector into a space of dimension `dim`.
    pub fn with_dim(&self, dim: usize) -> SparseVector {
        assert!(self.entries.keys().all(|&i| i < dim));
        SparseVector {
            dim,
            entries: self.entries.clone(),
        }
    }

    /// Renders with optional basis labels, e.g. `1/2*x + -1*y`.
    pub fn render(&self, labels: Option<&[String]>) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let terms: Vec<String> = self
            .iter()
            .map(|(i, x)| match labels {
                Some(l) if i < l.len() => format!("{x}*{}", l[i]),
                _ => format!("{x}*[{i}]"),
            })
            .collect();
        terms.join(" + ")
    }
}

impl fmt::Debug for SparseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for SparseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (i, x)) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i}: {x}")?;
        }
        write!(f, "}}/{}", self.dim)
    }
}

/// Linear map stored by columns: `columns[j]` is the image of basis vector `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap {
    in_dim: usize,
    out_dim: usize,
    columns: Vec<SparseVector>,
}

impl LinearMap {
    pub fn zero(in_dim: usize, out_dim: usize) -> Self {
        Self {
            in_dim,
            out_dim,
            columns: vec![SparseVector::zero(out_dim); in_dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            in_dim: dim,
            out_dim: dim,
            columns: (0..dim).map(|i| SparseVector::unit(dim, i)).collect(),
        }
    }

    pub fn from_columns(out_dim: usize, columns: Vec<SparseVector>) -> Self {
        assert!(columns.iter().all(|c| c.dim() == out_dim));
        Self {
            in_dim: columns.len(),
            out_dim,
            columns,
        }
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn column(&self, j: usize) -> &SparseVector {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVector] {
        &self.columns
    }

    pub fn add_entry(&mut self, input: usize, output: usize, value: &Rational) {
        self.columns[input].add_at(output, value);
    }

    pub fn apply(&self, v: &SparseVector) -> SparseVector {
        assert_eq!(v.dim(), self.in_dim, "dimension mismatch in LinearMap::apply");
        let mut out = SparseVector::zero(self.out_dim);
        for (j, x) in v.iter() {
            out.add_scaled(x, &self.columns[j]);
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        assert_eq!(other.out_dim, self.in_dim);
        LinearMap {
            in_dim: other.in_dim,
            out_dim: self.out_dim,
            columns: other.columns.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(SparseVector::is_zero)
    }

    pub fn rank(&self) -> usize {
        rank_of(&self.columns)
    }

    /// Linear combination `Σ c_i M_i` of maps with equal shapes.
    pub fn combination<'a>(
        in_dim: usize,
        out_dim: usize,
        terms: impl IntoIterator<Item = (&'a Rational, &'a LinearMap)>,
    ) -> LinearMap {
        let mut out = LinearMap::zero(in_dim, out_dim);
        for (c, m) in terms {
            for (j, col) in m.columns.iter().enumerate() {
                out.columns[j].add_scaled(c, col);
            }
        }
        out
    }
}

/// Bilinear map `L × R → O` stored per basis pair.
#[derive(Clone, Debug, PartialEq)]
pub struct BilinearMap {
    left_dim: usize,
    right_dim: usize,
    out_dim: usize,
    table: Vec<SparseVector>,
}

impl BilinearMap {
    pub fn zero(left_dim: usize, right_dim: usize, out_dim: usize) -> Self {
        Self {
            left_dim,
            right_dim,
            out_dim,
            table: vec![SparseVector::zero(out_dim); left_dim * right_dim],
        }
    }

    pub fn left_dim(&self) -> usize {
        self.left_dim
    }

    pub fn right_dim(&self) -> usize {
        self.right_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn basis(&self, i: usize, j: usize) -> &SparseVector {
        &self.table[i * self.right_dim + j]
    }

    pub fn set_basis(&mut self, i: usize, j: usize, value: SparseVector) {
        assert_eq!(value.dim(), self.out_dim);
        self.table[i * self.right_dim + j] = value;
    }

    pub fn add_entry(&mut self, i: usize, j: usize, k: usize, value: &Rational) {
        let idx = i * self.right_dim + j;
        self.table[idx].add_at(k, value);
    }

    pub fn apply(&self, u: &SparseVector, v: &SparseVector) -> SparseVector {
        assert_eq!(u.dim(), self.left_dim, "left dimension mismatch");
        assert_eq!(v.dim(), self.right_dim, "right dimension mismatch");
        let mut out = SparseVector::zero(self.out_dim);
        for (i, x) in u.iter() {
            for (j, y) in v.iter() {
                let entry = self.basis(i, j);
                if !entry.is_zero() {
                    out.add_scaled(&(x * y), entry);
                }
            }
        }
        out
    }

    /// `v ↦ B(e_i, v)` as a linear map.
    pub fn left_operator(&self, i: usize) -> LinearMap {
        LinearMap::from_columns(
            self.out_dim,
            (0..self.right_dim).map(|j| self.basis(i, j).clone()).collect(),
        )
    }

    /// Iterates over nonzero structure constants `(i, j, k, c)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &Rational)> {
        self.table.iter().enumerate().flat_map(move |(idx, v)| {
            let (i, j) = (idx / self.right_dim, idx % self.right_dim);
            v.iter().map(move |(k, c)| (i, j, k, c))
        })
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(SparseVector::is_zero)
    }

    pub fn scaled(&self, scale: &Rational) -> BilinearMap {
        BilinearMap {
            left_dim: self.left_dim,
            right_dim: self.right_dim,
            out_dim: self.out_dim,
            table: self.table.iter().map(|v| v.scaled(scale)).collect(),
        }
    }
}

/// A subspace in reduced row-echelon form.
///
/// Rows are nonzero, pivots strictly increase, every pivot entry is 1 and
/// every pivot column is zero in all other rows.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    dim: usize,
    rows: BTreeMap<usize, SparseVector>,
}

impl Subspace {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            rows: BTreeMap::new(),
        }
    }

    pub fn full(dim: usize) -> Self {
        let mut s = Self::zero(dim);
        for i in 0..dim {
            s.rows.insert(i, SparseVector::unit(dim, i));
        }
        s
    }

    pub fn spanned_by(dim: usize, vectors: &[SparseVector]) -> Result<Self, Error> {
        let mut s = Self::zero(dim);
        for v in vectors {
            if v.dim() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    found: v.dim(),
                });
            }
            s.insert(v);
        }
        Ok(s)
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn codim(&self) -> usize {
        self.dim - self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.keys().copied().collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVector> {
        self.rows.values()
    }

    pub fn basis(&self) -> Vec<SparseVector> {
        self.rows.values().cloned().collect()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    /// Non-pivot columns, in increasing order. Their coordinate vectors span
    /// the canonical complement.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.dim).filter(|c| !self.rows.contains_key(c)).collect()
    }

    /// Normal form of `v` modulo this subspace (supported on free columns).
    pub fn reduce(&self, v: &SparseVector) -> SparseVector {
        assert_eq!(v.dim(), self.dim, "dimension mismatch in Subspace::reduce");
        if self.rows.is_empty() {
            return v.clone();
        }
        let hits: Vec<(usize, Rational)> = v
            .iter()
            .filter(|(i, _)| self.rows.contains_key(i))
            .map(|(i, x)| (i, x.clone()))
            .collect();
        let mut out = v.clone();
        for (p, x) in hits {
            out.add_scaled(&-x, &self.rows[&p]);
        }
        out
    }

    pub fn contains(&self, v: &SparseVector) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.rows().all(|r| self.contains(r))
    }

    /// Adds `v` to the span. Returns the reduced vector when the rank grew.
    pub fn insert(&mut self, v: &SparseVector) -> Option<SparseVector> {
        let mut r = self.reduce(v);
        let (p, lead) = match r.leading() {
            Some((p, lead)) => (p, lead.clone()),
            None => return None,
        };
        if !lead.is_one() {
            r = r.scaled(&lead.recip());
        }
        for row in self.rows.values_mut() {
            let c = row.get(p);
            if !c.is_zero() {
                row.add_scaled(&-c, &r);
            }
        }
        self.rows.insert(p, r.clone());
        Some(r)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for r in other.rows() {
            s.insert(r);
        }
        s
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // v = Σ x_i a_i = Σ y_j b_j  ⇔  (x, y) in kernel of [A | -B]^T.
        let a = self.basis();
        let b = other.basis();
        let n = a.len() + b.len();
        let mut cols: Vec<SparseVector> = Vec::with_capacity(n);
        cols.extend(a.iter().cloned());
        cols.extend(b.iter().map(|v| v.scaled(&-Rational::one())));
        let rows = transpose(self.dim, &cols);
        let ker = kernel(n, &rows).expect("shapes are consistent");
        let mut out = Subspace::zero(self.dim);
        for k in ker.rows() {
            let mut v = SparseVector::zero(self.dim);
            for (i, x) in k.iter().filter(|(i, _)| *i < a.len()) {
                v.add_scaled(x, &a[i]);
            }
            out.insert(&v);
        }
        out
    }

    /// Coordinates of `v` with respect to the echelon rows, if `v` is a member.
    pub fn coordinates(&self, v: &SparseVector) -> Option<SparseVector> {
        if !self.contains(v) {
            return None;
        }
        let pivots = self.pivots();
        Some(SparseVector::from_entries(
            pivots.len(),
            pivots.iter().enumerate().map(|(k, p)| (k, v.get(*p))),
        ))
    }
}

/// Transposes a list of vectors viewed as columns of a `dim × len` matrix.
pub fn transpose(dim: usize, cols: &[SparseVector]) -> Vec<SparseVector> {
    let mut rows = vec![SparseVector::zero(cols.len()); dim];
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c.iter() {
            rows[i].set(j, x.clone());
        }
    }
    rows
}

pub fn rank_of(vectors: &[SparseVector]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let mut s = Subspace::zero(first.dim());
    for v in vectors {
        s.insert(v);
    }
    s.rank()
}

/// Row-reduces `matrix` (a list of rows). Fails on mixed dimensions.
pub fn rref(matrix: &[SparseVector]) -> Result<(Subspace, usize), Error> {
    let Some(first) = matrix.first() else {
        return Ok((Subspace::zero(0), 0));
    };
    let s = Subspace::spanned_by(first.dim(), matrix)?;
    let r = s.rank();
    Ok((s, r))
}

/// Kernel `{x : A x = 0}` of the matrix with the given rows and `cols` columns.
pub fn kernel(cols: usize, rows: &[SparseVector]) -> Result<Subspace, Error> {
    if let Some(bad) = rows.iter().find(|r| r.dim() != cols) {
        return Err(Error::Dimension {
            expected: cols,
            found: bad.dim(),
        });
    }
    let (echelon, _) = if rows.is_empty() {
        (Subspace::zero(cols), 0)
    } else {
        rref(rows)?
    };
    let mut out = Subspace::zero(cols);
    for f in echelon.free_columns() {
        let mut v = SparseVector::unit(cols, f);
        for row in echelon.rows() {
            let (p, _) = row.leading().expect("rows are nonzero");
            let c = row.get(f);
            if !c.is_zero() {
                v.set(p, -c);
            }
        }
        out.insert(&v);
    }
    Ok(out)
}

/// Coordinates of `v` in the canonical complement of `sub` inside `space`.
///
/// The complement basis is obtained by reducing the rows of `space` modulo
/// `sub` and row-reducing the residues; the result is zero exactly when
/// `v ∈ sub`.
pub fn quotient_coords(space: &Subspace, sub: &Subspace, v: &SparseVector) -> Result<SparseVector, Error> {
    if !space.contains(v) {
        return Err(Error::Membership);
    }
    if !space.contains_subspace(sub) {
        return Err(Error::Input("quotient_coords: sub is not contained in space".into()));
    }
    let complement = complement_basis(space, sub);
    let residue = sub.reduce(v);
    let pivots = complement.pivots();
    Ok(SparseVector::from_entries(
        pivots.len(),
        pivots.iter().enumerate().map(|(k, p)| (k, residue.get(*p))),
    ))
}

fn complement_basis(space: &Subspace, sub: &Subspace) -> Subspace {
    let mut c = Subspace::zero(space.ambient_dim());
    for r in space.rows() {
        c.insert(&sub.reduce(r));
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> SparseVector {
        SparseVector::from_dense(&xs.iter().map(|&x| int(x)).collect::<Vec<_>>())
    }

    #[test]
    fn rref_examples() {
        let (s, r) = rref(&[]).unwrap();
        assert_eq!(r, 0);
        assert!(s.is_zero());

        let (_, r) = rref(&[v(&[1, 0]), v(&[0, 1]), v(&[1, 1])]).unwrap();
        assert_eq!(r, 2);

        let (s, r) = rref(&[v(&[2, 4]), v(&[1, 2])]).unwrap();
        assert_eq!(r, 1);
        assert_eq!(s.basis(), vec![v(&[1, 2])]);
    }

    #[test]
    fn rref_dimension_mismatch() {
        assert!(matches!(rref(&[v(&[1, 0]), v(&[1, 0, 0])]), Err(Error::Dimension { .. })));
    }

    #[test]
    fn kernel_examples() {
        let id: Vec<_> = (0..3).map(|i| SparseVector::unit(3, i)).collect();
        assert!(kernel(3, &id).unwrap().is_zero());

        let zero = vec![SparseVector::zero(3); 2];
        assert!(kernel(3, &zero).unwrap().is_full());

        let k = kernel(2, &[v(&[1, -1])]).unwrap();
        assert_eq!(k.basis(), vec![v(&[1, 1])]);
    }

    #[test]
    fn quotient_examples() {
        let space = Subspace::full(2);
        let x = v(&[3, -5]);
        assert!(quotient_coords(&space, &space, &x).unwrap().is_zero());

        let q = quotient_coords(&space, &Subspace::zero(2), &x).unwrap();
        assert_eq!(q, v(&[3, -5]));

        let sub = Subspace::spanned_by(2, &[v(&[1, 1])]).unwrap();
        let q = quotient_coords(&space, &sub, &v(&[1, 0])).unwrap();
        assert_eq!(q.dim(), 1);
        assert_eq!(q.nnz(), 1);

        let line = Subspace::spanned_by(2, &[v(&[1, 0])]).unwrap();
        assert!(matches!(
            quotient_coords(&line, &Subspace::zero(2), &v(&[0, 1])),
            Err(Error::Membership)
        ));
    }

    #[test]
    fn intersection_of_planes() {
        let a = Subspace::spanned_by(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap();
        let b = Subspace::spanned_by(3, &[v(&[0, 1, 0]), v(&[0, 0, 1])]).unwrap();
        let i = a.intersection(&b);
        assert_eq!(i.basis(), vec![v(&[0, 1, 0])]);
    }

    #[test]
    fn scaled_pivot_normalization() {
        let s = Subspace::spanned_by(2, &[v(&[3, 1])]).unwrap();
        assert_eq!(s.basis()[0].get(1), frac(1, 3));
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-3i64..4, c), r))
    }

    fn rows_of(m: &[Vec<i64>]) -> Vec<SparseVector> {
        m.iter().map(|r| v(r)).collect()
    }

    proptest! {
        #[test]
        fn rref_idempotent(m in small_matrix()) {
            let rows = rows_of(&m);
            let (s, r) = rref(&rows).unwrap();
            let (s2, r2) = rref(&s.basis()).unwrap_or((Subspace::zero(rows[0].dim()), 0));
            prop_assert_eq!(r, r2);
            if r > 0 {
                prop_assert_eq!(s, s2);
            }
        }

        #[test]
        fn rank_nullity(m in small_matrix()) {
            let rows = rows_of(&m);
            let cols = rows[0].dim();
            let (_, r) = rref(&rows).unwrap();
            let k = kernel(cols, &rows).unwrap();
            prop_assert_eq!(k.rank() + r, cols);
            for b in k.rows() {
                for row in &rows {
                    let dot: Rational = row.iter().map(|(i, x)| x * b.get(i)).sum();
                    prop_assert_eq!(dot, int(0));
                }
            }
        }

        #[test]
        fn quotient_zero_iff_member(m in small_matrix(), x in prop::collection::vec(-3i64..4, 1..5)) {
            let rows = rows_of(&m);
            let dim = rows[0].dim();
            let sub = Subspace::spanned_by(dim, &rows).unwrap();
            let mut xs = x.clone();
            xs.resize(dim, 0);
            let w = v(&xs);
            let q = quotient_coords(&Subspace::full(dim), &sub, &w).unwrap();
            prop_assert_eq!(q.is_zero(), sub.contains(&w));
            prop_assert_eq!(q.dim(), dim - sub.rank());
        }
    }
}
