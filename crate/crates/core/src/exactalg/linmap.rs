use num_traits::Zero;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::matrix::SuperMatrix;
use super::scalar::{self, Scalar};
use super::sparse::SparseVec;

/// Sparse linear map between coordinate spaces, stored column by column
/// (column `j` is the image of the `j`-th basis vector).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    rows: usize,
    cols: Vec<SparseVec>,
}

impl LinearMap {
    pub fn zero(rows: usize, cols: usize) -> Self {
        LinearMap {
            rows,
            cols: vec![SparseVec::new(); cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        LinearMap {
            rows: dim,
            cols: (0..dim).map(SparseVec::unit).collect(),
        }
    }

    pub fn from_columns(rows: usize, cols: Vec<SparseVec>) -> Self {
        debug_assert!(cols.iter().all(|c| c.support().all(|r| r < rows)));
        LinearMap { rows, cols }
    }

    pub fn from_entries(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize, Scalar)>) -> Self {
        let mut out = Self::zero(rows, cols);
        for (r, c, v) in entries {
            out.cols[c].add_term(r, v);
        }
        out
    }

    pub fn from_super(x: &SuperMatrix) -> Self {
        let d = x.universe().dim();
        Self::from_entries(d, d, x.entries().map(|((r, c), v)| (r, c, v.clone())))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.cols[c].get(r)
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(SparseVec::is_zero)
    }

    /// `(row, col, value)` for every nonzero entry, column-major.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.cols.iter().enumerate().flat_map(|(c, col)| col.iter().map(move |(r, v)| (r, c, v)))
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, a) in v.iter() {
            out.add_scaled(a, &self.cols[j]);
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        debug_assert_eq!(self.cols(), other.rows);
        LinearMap {
            rows: self.rows,
            cols: other.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn add_scaled(&mut self, c: &Scalar, other: &LinearMap) {
        debug_assert_eq!((self.rows, self.cols()), (other.rows, other.cols()));
        if c.is_zero() {
            return;
        }
        for (mine, theirs) in self.cols.iter_mut().zip(&other.cols) {
            mine.add_scaled(c, theirs);
        }
    }

    pub fn plus(&self, other: &LinearMap) -> LinearMap {
        let mut out = self.clone();
        out.add_scaled(&scalar::one(), other);
        out
    }

    pub fn minus(&self, other: &LinearMap) -> LinearMap {
        let mut out = self.clone();
        out.add_scaled(&-scalar::one(), other);
        out
    }

    pub fn scaled(&self, c: &Scalar) -> LinearMap {
        LinearMap {
            rows: self.rows,
            cols: self.cols.iter().map(|v| v.scaled(c)).collect(),
        }
    }

    /// `a·b − (−1)^{flip} b·a`.
    pub fn graded_commutator(a: &LinearMap, b: &LinearMap, flip: bool) -> LinearMap {
        let mut out = a.compose(b);
        let s = if flip { scalar::one() } else { -scalar::one() };
        out.add_scaled(&s, &b.compose(a));
        out
    }

    /// Scalar `c` with `self = c·id`, if there is one.
    pub fn as_scalar(&self) -> Option<Scalar> {
        if self.rows != self.cols() {
            return None;
        }
        let c = if self.rows == 0 { Scalar::zero() } else { self.get(0, 0) };
        self.minus(&Self::identity(self.rows).scaled(&c)).is_zero().then_some(c)
    }

    /// Block-diagonal sum.
    pub fn direct_sum(blocks: &[&LinearMap]) -> LinearMap {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let mut cols = Vec::new();
        let mut offset = 0;
        for b in blocks {
            cols.extend(b.cols.iter().map(|c| c.map_indices(|r| r + offset)));
            offset += b.rows;
        }
        LinearMap { rows, cols }
    }

    pub fn transpose(&self) -> LinearMap {
        let mut cols = vec![SparseVec::new(); self.rows];
        for (r, c, v) in self.entries() {
            cols[r].add_term(c, v.clone());
        }
        LinearMap { rows: self.cols(), cols }
    }

    /// `(row, col, "p/q")` for every nonzero entry, column-major.
    pub fn triplets(&self) -> Vec<(usize, usize, String)> {
        self.entries().map(|(r, c, v)| (r, c, scalar::format(v))).collect()
    }

    /// Rows and columns permuted: entry `(r, c)` moves to `(perm[r], perm[c])`.
    pub fn permuted(&self, perm: &[usize]) -> LinearMap {
        let mut cols = vec![SparseVec::new(); self.cols()];
        for (c, col) in self.cols.iter().enumerate() {
            cols[perm[c]] = col.map_indices(|r| perm[r]);
        }
        LinearMap { rows: self.rows, cols }
    }
}

impl Serialize for LinearMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("LinearMap", 3)?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("cols", &self.cols())?;
        st.serialize_field("entries", &self.triplets())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::int;

    #[test]
    fn composition_matches_hand_product() {
        // [[1,2],[0,1]] ∘ [[0,1],[1,0]] = [[2,1],[1,0]]
        let a = LinearMap::from_entries(2, 2, [(0, 0, int(1)), (0, 1, int(2)), (1, 1, int(1))]);
        let b = LinearMap::from_entries(2, 2, [(0, 1, int(1)), (1, 0, int(1))]);
        let ab = a.compose(&b);
        assert_eq!(ab.get(0, 0), int(2));
        assert_eq!(ab.get(0, 1), int(1));
        assert_eq!(ab.get(1, 0), int(1));
        assert_eq!(ab.get(1, 1), int(0));
    }

    #[test]
    fn scalar_detection() {
        assert_eq!(LinearMap::identity(3).scaled(&int(-2)).as_scalar(), Some(int(-2)));
        assert_eq!(LinearMap::from_entries(2, 2, [(0, 0, int(1))]).as_scalar(), None);
        assert_eq!(LinearMap::zero(0, 0).as_scalar(), Some(int(0)));
    }

    #[test]
    fn permutation_is_conjugation() {
        let a = LinearMap::from_entries(3, 3, [(0, 1, int(5)), (2, 2, int(1))]);
        let p = a.permuted(&[2, 0, 1]);
        assert_eq!(p.get(2, 0), int(5));
        assert_eq!(p.get(1, 1), int(1));
    }
}
