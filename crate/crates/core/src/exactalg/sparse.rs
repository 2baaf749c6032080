use std::collections::BTreeMap;

use num_traits::Zero;

use super::scalar::Scalar;

/// Sparse vector over a basis indexed by `usize`. Zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: BTreeMap<usize, Scalar>,
}

impl SparseVec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(i: usize) -> Self {
        Self::term(i, Scalar::from_integer(1.into()))
    }

    pub fn term(i: usize, c: Scalar) -> Self {
        let mut v = Self::new();
        v.add_term(i, c);
        v
    }

    pub fn from_dense(dense: &[Scalar]) -> Self {
        let mut v = Self::new();
        for (i, c) in dense.iter().enumerate() {
            v.add_term(i, c.clone());
        }
        v
    }

    pub fn to_dense(&self, dim: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); dim];
        for (i, c) in &self.entries {
            out[*i] = c.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Scalar {
        self.entries.get(&i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.entries.iter().map(|(i, c)| (*i, c))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn add_term(&mut self, i: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.entries.get_mut(&i) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.entries.remove(&i);
                }
            }
            None => {
                self.entries.insert(i, c);
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &Scalar, other: &SparseVec) {
        if c.is_zero() {
            return;
        }
        for (i, v) in &other.entries {
            self.add_term(*i, c * v);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect(),
        }
    }

    pub fn neg(&self) -> SparseVec {
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, -v)).collect(),
        }
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        out.add_scaled(&-Scalar::from_integer(1.into()), other);
        out
    }

    pub fn plus(&self, other: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        out.add_scaled(&Scalar::from_integer(1.into()), other);
        out
    }

    pub fn dot(&self, other: &SparseVec) -> Scalar {
        let mut acc = Scalar::zero();
        for (i, v) in &self.entries {
            if let Some(w) = other.entries.get(i) {
                acc += v * w;
            }
        }
        acc
    }

    /// Reindexes entries through `f`, summing collisions.
    pub fn map_indices(&self, mut f: impl FnMut(usize) -> usize) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, v) in &self.entries {
            out.add_term(f(*i), v.clone());
        }
        out
    }

    /// Keeps only entries whose index satisfies `keep`.
    pub fn filtered(&self, mut keep: impl FnMut(usize) -> bool) -> SparseVec {
        SparseVec {
            entries: self
                .entries
                .iter()
                .filter(|(i, _)| keep(**i))
                .map(|(i, v)| (*i, v.clone()))
                .collect(),
        }
    }
}

impl FromIterator<(usize, Scalar)> for SparseVec {
    fn from_iter<T: IntoIterator<Item = (usize, Scalar)>>(iter: T) -> Self {
        let mut v = SparseVec::new();
        for (i, c) in iter {
            v.add_term(i, c);
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::int;

    #[test]
    fn cancellation_removes_entries() {
        let mut v = SparseVec::term(3, int(2));
        v.add_term(3, int(-2));
        assert!(v.is_zero());
    }

    #[test]
    fn dense_round_trip() {
        let d = vec![int(0), int(5), int(0), int(-1)];
        assert_eq!(SparseVec::from_dense(&d).to_dense(4), d);
    }
}
