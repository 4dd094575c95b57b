//! Sparse vectors and canonical reduced row-echelon bases.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A vector of fixed dimension storing only its nonzero entries, sorted by index.
#[derive(Clone, PartialEq)]
pub struct SparseVector<S> {
    dim: usize,
    entries: Vec<(usize, S)>,
}

impl<S: Scalar> SparseVector<S> {
    pub fn zero(dim: usize) -> Self {
        SparseVector { dim, entries: Vec::new() }
    }

    pub fn unit(dim: usize, index: usize) -> Self {
        assert!(index < dim, "unit index {index} out of range for dimension {dim}");
        SparseVector { dim, entries: vec![(index, S::one())] }
    }

    /// Collects `(index, value)` pairs, summing repeated indices and dropping zeros.
    pub fn from_entries<I>(dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, S)>,
    {
        let mut raw: Vec<(usize, S)> = entries.into_iter().collect();
        if let Some(&(bad, _)) = raw.iter().find(|(i, _)| *i >= dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad + 1 });
        }
        raw.sort_by_key(|(i, _)| *i);
        let mut entries: Vec<(usize, S)> = Vec::with_capacity(raw.len());
        for (i, v) in raw {
            match entries.last_mut() {
                Some((j, acc)) if *j == i => *acc = acc.clone() + v,
                _ => entries.push((i, v)),
            }
        }
        entries.retain(|(_, v)| !v.is_zero());
        Ok(SparseVector { dim, entries })
    }

    pub fn from_dense(values: Vec<S>) -> Self {
        let dim = values.len();
        let entries = values
            .into_iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .collect();
        SparseVector { dim, entries }
    }

    pub fn to_dense(&self) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, S)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: usize) -> S {
        match self.entries.binary_search_by_key(&index, |(i, _)| *i) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => S::zero(),
        }
    }

    /// Index and value of the first nonzero entry.
    pub fn leading(&self) -> Option<(usize, &S)> {
        self.entries.first().map(|(i, v)| (*i, v))
    }

    pub fn scale(&self, factor: &S) -> Self {
        if factor.is_zero() {
            return SparseVector::zero(self.dim);
        }
        let entries = self
            .entries
            .iter()
            .map(|(i, v)| (*i, v.clone() * factor.clone()))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        SparseVector { dim: self.dim, entries }
    }

    /// `self + factor * other`.
    ///
    /// Panics if the dimensions differ.
    pub fn add_scaled(&self, factor: &S, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in vector addition");
        let mut entries = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        entries.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        let v = factor.clone() * y.clone();
                        if !v.is_zero() {
                            entries.push((*j, v));
                        }
                        b.next();
                    } else {
                        let v = x.clone() + factor.clone() * y.clone();
                        if !v.is_zero() {
                            entries.push((*i, v));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    entries.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    let v = factor.clone() * y.clone();
                    if !v.is_zero() {
                        entries.push((*j, v));
                    }
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVector { dim: self.dim, entries }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(&S::one(), other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(&-S::one(), other)
    }

    pub fn dot(&self, other: &Self) -> S {
        assert_eq!(self.dim, other.dim, "dimension mismatch in dot product");
        let mut acc = S::zero();
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        while let (Some((i, x)), Some((j, y))) = (a.peek(), b.peek()) {
            if i < j {
                a.next();
            } else if j < i {
                b.next();
            } else {
                acc = acc + x.clone() * y.clone();
                a.next();
                b.next();
            }
        }
        acc
    }

    /// Moves the entry at `i` to `map(i)`. `map` must be a bijection of `0..dim`.
    pub fn permute_indices(&self, map: impl Fn(usize) -> usize) -> Self {
        let mut entries: Vec<(usize, S)> =
            self.entries.iter().map(|(i, v)| (map(*i), v.clone())).collect();
        entries.sort_by_key(|(i, _)| *i);
        SparseVector { dim: self.dim, entries }
    }
}

impl<S: Scalar> fmt::Debug for SparseVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseVector(dim={}, [", self.dim)?;
        for (k, (i, v)) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i}: {v}")?;
        }
        write!(f, "])")
    }
}

/// A subspace of `S^dim` held as its unique reduced row-echelon basis.
///
/// Rows are sorted by pivot column, each row has a 1 at its pivot and every row is zero at
/// every other row's pivot. Two bases span the same subspace iff they compare equal.
#[derive(Clone, PartialEq)]
pub struct RowBasis<S> {
    dim: usize,
    rows: Vec<SparseVector<S>>,
    pivots: Vec<usize>,
}

impl<S: Scalar> RowBasis<S> {
    pub fn new(dim: usize) -> Self {
        RowBasis { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    /// The whole space `S^dim`.
    pub fn full(dim: usize) -> Self {
        RowBasis {
            dim,
            rows: (0..dim).map(|i| SparseVector::unit(dim, i)).collect(),
            pivots: (0..dim).collect(),
        }
    }

    pub fn from_rows<'a, I>(dim: usize, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a SparseVector<S>>,
    {
        let mut basis = RowBasis::new(dim);
        for row in rows {
            basis.insert(row)?;
        }
        Ok(basis)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    pub fn rows(&self) -> &[SparseVector<S>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_dim(&self, v: &SparseVector<S>) -> Result<()> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: v.dim() });
        }
        Ok(())
    }

    /// Residual of `v` after eliminating every pivot column, as a dense vector.
    fn residual(&self, v: &SparseVector<S>) -> Vec<S> {
        let mut acc = v.to_dense();
        // Rows vanish on each other's pivots, so one pass in any order suffices.
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = acc[p].clone();
            if c.is_zero() {
                continue;
            }
            for (j, x) in row.entries() {
                acc[*j] = acc[*j].clone() - c.clone() * x.clone();
            }
        }
        acc
    }

    pub fn contains(&self, v: &SparseVector<S>) -> Result<bool> {
        self.check_dim(v)?;
        if v.is_zero() {
            return Ok(true);
        }
        if self.is_full() {
            return Ok(true);
        }
        Ok(self.residual(v).iter().all(|x| x.is_zero()))
    }

    /// Adds `v` to the spanning set. Returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVector<S>) -> Result<bool> {
        self.check_dim(v)?;
        if v.is_zero() || self.is_full() {
            return Ok(false);
        }
        let residual = SparseVector::from_dense(self.residual(v));
        let Some((pivot, lead)) = residual.leading() else {
            return Ok(false);
        };
        let inv = S::one() / lead.clone();
        let new_row = residual.scale(&inv);
        for row in &mut self.rows {
            let c = row.get(pivot);
            if !c.is_zero() {
                *row = row.add_scaled(&-c, &new_row);
            }
        }
        let pos = self.pivots.partition_point(|&p| p < pivot);
        self.pivots.insert(pos, pivot);
        self.rows.insert(pos, new_row);
        Ok(true)
    }

    /// Merges another basis of the same dimension into this one.
    pub fn extend(&mut self, other: &RowBasis<S>) -> Result<()> {
        for row in other.rows() {
            self.insert(row)?;
            if self.is_full() {
                break;
            }
        }
        Ok(())
    }

    pub fn is_subspace_of(&self, other: &RowBasis<S>) -> Result<bool> {
        for row in &self.rows {
            if !other.contains(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Basis of `{w : ⟨r, w⟩ = 0 for every row r}`.
    pub fn annihilator(&self) -> RowBasis<S> {
        null_space(self)
    }

    pub fn intersection(&self, other: &RowBasis<S>) -> Result<RowBasis<S>> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let mut ann = self.annihilator();
        ann.extend(&other.annihilator())?;
        Ok(ann.annihilator())
    }
}

impl<S: Scalar> fmt::Debug for RowBasis<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RowBasis")
            .field("dim", &self.dim)
            .field("pivots", &self.pivots)
            .field("rows", &self.rows)
            .finish()
    }
}

fn null_space<S: Scalar>(rref: &RowBasis<S>) -> RowBasis<S> {
    let dim = rref.dim;
    let mut is_pivot = vec![false; dim];
    for &p in &rref.pivots {
        is_pivot[p] = true;
    }
    // Column `f` of the rows, i.e. the coefficients used to express each pivot variable.
    let mut columns: Vec<Vec<(usize, S)>> = vec![Vec::new(); dim];
    for (row, &p) in rref.rows.iter().zip(&rref.pivots) {
        for (j, x) in row.entries() {
            if *j != p {
                columns[*j].push((p, -x.clone()));
            }
        }
    }
    let mut rows = Vec::new();
    for free in (0..dim).filter(|&j| !is_pivot[j]) {
        let mut entries = std::mem::take(&mut columns[free]);
        entries.push((free, S::one()));
        entries.sort_by_key(|(i, _)| *i);
        rows.push(SparseVector { dim, entries });
    }
    // One vector per free column: independent, but not yet in reduced echelon form.
    let mut out = RowBasis::new(dim);
    for row in &rows {
        out.insert(row).expect("dimension is consistent");
    }
    out
}

/// Inserts `v`, returning the new basis and whether `v` was outside the old span.
pub fn insert_row<S: Scalar>(
    basis: &RowBasis<S>,
    v: &SparseVector<S>,
) -> Result<(RowBasis<S>, bool)> {
    let mut next = basis.clone();
    let grew = next.insert(v)?;
    Ok((next, grew))
}

pub fn contains<S: Scalar>(basis: &RowBasis<S>, v: &SparseVector<S>) -> Result<bool> {
    basis.contains(v)
}

/// Canonical basis of `{v : M v = 0}` where `M` stacks `rows`.
pub fn kernel_basis<S: Scalar>(rows: &[SparseVector<S>], dim: usize) -> Result<RowBasis<S>> {
    let rref = RowBasis::from_rows(dim, rows)?;
    Ok(null_space(&rref))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_bigint::BigInt;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    fn v(values: &[i64]) -> SparseVector<Rational> {
        SparseVector::from_dense(values.iter().map(|&x| q(x)).collect())
    }

    /// Dense rank by plain Gaussian elimination, kept separate from `RowBasis`.
    fn dense_rank(mut m: Vec<Vec<Rational>>) -> usize {
        let cols = m.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            for r in 0..m.len() {
                if r != rank && !m[r][c].is_zero() {
                    let f = m[r][c].clone() / m[rank][c].clone();
                    for k in 0..cols {
                        let t = m[rank][k].clone() * f.clone();
                        m[r][k] = m[r][k].clone() - t;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn insert_examples() {
        let empty = RowBasis::<Rational>::new(2);
        let (b, grew) = insert_row(&empty, &SparseVector::zero(2)).unwrap();
        assert!(!grew);
        assert_eq!(b, empty);

        let (b, grew) = insert_row(&empty, &v(&[1, 0])).unwrap();
        assert!(grew);
        assert_eq!(b.rows(), &[v(&[1, 0])]);

        let (b, _) = insert_row(&empty, &v(&[1, 1])).unwrap();
        let (b, grew) = insert_row(&b, &v(&[1, -1])).unwrap();
        assert!(grew);
        assert_eq!(b, RowBasis::full(2));
        assert_eq!(b.pivots(), &[0, 1]);
    }

    #[test]
    fn insert_dimension_mismatch() {
        let b = RowBasis::<Rational>::new(2);
        assert!(matches!(
            insert_row(&b, &v(&[1, 0, 0])),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
        assert!(b.contains(&v(&[1])).is_err());
    }

    #[test]
    fn contains_examples() {
        let empty = RowBasis::<Rational>::new(2);
        assert!(contains(&empty, &SparseVector::zero(2)).unwrap());
        let e1 = RowBasis::from_rows(2, &[v(&[1, 0])]).unwrap();
        assert!(!contains(&e1, &v(&[0, 1])).unwrap());
        let b = RowBasis::from_rows(2, &[v(&[1, 1]), v(&[1, -1])]).unwrap();
        assert!(contains(&b, &v(&[1, 0])).unwrap());
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis::<Rational>(&[], 3).unwrap();
        assert_eq!(k.rank(), 3);
        let k = kernel_basis(&[v(&[1, 0])], 2).unwrap();
        assert_eq!(k.rows(), &[v(&[0, 1])]);
        let k = kernel_basis(&[v(&[1, 1, 0]), v(&[0, 1, 1])], 3).unwrap();
        assert_eq!(k.rows(), &[v(&[1, -1, 1])]);
    }

    #[test]
    fn rref_shape() {
        let b = RowBasis::from_rows(4, &[v(&[0, 2, 4, 6]), v(&[1, 1, 1, 1]), v(&[1, 3, 5, 7])])
            .unwrap();
        assert_eq!(b.rank(), 2);
        assert_eq!(b.pivots(), &[0, 1]);
        for (row, &p) in b.rows().iter().zip(b.pivots()) {
            assert_eq!(row.leading().unwrap().0, p);
            assert!(row.get(p).is_one());
            for &other in b.pivots() {
                if other != p {
                    assert!(row.get(other).is_zero());
                }
            }
        }
    }

    #[test]
    fn intersection_of_planes() {
        let a = RowBasis::from_rows(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap();
        let b = RowBasis::from_rows(3, &[v(&[0, 1, 0]), v(&[0, 0, 1])]).unwrap();
        let c = a.intersection(&b).unwrap();
        assert_eq!(c.rows(), &[v(&[0, 1, 0])]);
    }

    fn small_matrix() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
        (1usize..7).prop_flat_map(|dim| {
            (Just(dim), prop::collection::vec(prop::collection::vec(-2i64..3, dim), 0..7))
        })
    }

    proptest! {
        #[test]
        fn rank_nullity((dim, rows) in small_matrix()) {
            let rows: Vec<_> = rows.iter().map(|r| v(r)).collect();
            let basis = RowBasis::from_rows(dim, &rows).unwrap();
            let kernel = kernel_basis(&rows, dim).unwrap();
            prop_assert_eq!(basis.rank() + kernel.rank(), dim);
            for k in kernel.rows() {
                for r in &rows {
                    prop_assert!(r.dot(k).is_zero());
                }
            }
        }

        #[test]
        fn insert_idempotent((dim, rows) in small_matrix(), extra in prop::collection::vec(-2i64..3, 1..7)) {
            let rows: Vec<_> = rows.iter().map(|r| v(r)).collect();
            let mut basis = RowBasis::from_rows(dim, &rows).unwrap();
            let mut values = extra;
            values.resize(dim, 0);
            let x = v(&values);
            basis.insert(&x).unwrap();
            let before = basis.clone();
            prop_assert!(!basis.insert(&x).unwrap());
            prop_assert_eq!(basis, before);
        }

        #[test]
        fn contains_matches_dense_rank(
            dim in 1usize..25,
            seed_rows in prop::collection::vec(prop::collection::vec(-2i64..3, 24), 0..6),
            target in prop::collection::vec(-2i64..3, 24),
            from_span in any::<bool>(),
        ) {
            let rows: Vec<Vec<i64>> = seed_rows.iter().map(|r| r[..dim].to_vec()).collect();
            let mut t: Vec<i64> = target[..dim].to_vec();
            if from_span && !rows.is_empty() {
                // a genuine combination of the rows
                t = vec![0; dim];
                for (k, r) in rows.iter().enumerate() {
                    for j in 0..dim {
                        t[j] += (k as i64 - 1) * r[j];
                    }
                }
            }
            let basis = RowBasis::from_rows(dim, &rows.iter().map(|r| v(r)).collect::<Vec<_>>()).unwrap();
            let dense: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
            let mut with_t = dense.clone();
            with_t.push(t.iter().map(|&x| q(x)).collect());
            let expected = dense_rank(with_t) == dense_rank(dense);
            prop_assert_eq!(basis.contains(&v(&t)).unwrap(), expected);
        }

        #[test]
        fn canonical_regardless_of_order((dim, rows) in small_matrix()) {
            let rows: Vec<_> = rows.iter().map(|r| v(r)).collect();
            let forward = RowBasis::from_rows(dim, &rows).unwrap();
            let backward = RowBasis::from_rows(dim, rows.iter().rev()).unwrap();
            prop_assert_eq!(forward, backward);
        }
    }
}
