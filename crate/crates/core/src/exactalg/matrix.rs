use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::index::{sign_flip, IndexUniverse, Parity, SuperIndex};
use super::scalar::{self, Scalar};
use super::sparse::SparseVec;
use super::AlgError;

/// Sparse endomorphism of the natural module, stored by universe positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SuperMatrix {
    universe: IndexUniverse,
    entries: BTreeMap<(usize, usize), Scalar>,
}

/// A vector of the natural module.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SuperVector {
    pub universe: IndexUniverse,
    pub coords: SparseVec,
}

impl SuperVector {
    pub fn basis(universe: IndexUniverse, ix: SuperIndex) -> Self {
        SuperVector {
            universe,
            coords: SparseVec::unit(universe.position(ix)),
        }
    }

    pub fn parity(&self) -> Option<Parity> {
        homogeneous(self.coords.support().map(|p| self.universe.parity_at(p)))
    }
}

fn homogeneous(mut parities: impl Iterator<Item = Parity>) -> Option<Parity> {
    let first = match parities.next() {
        Some(p) => p,
        None => return Some(Parity::Even),
    };
    parities.all(|p| p == first).then_some(first)
}

impl SuperMatrix {
    pub fn zero(universe: IndexUniverse) -> Self {
        SuperMatrix {
            universe,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(universe: IndexUniverse) -> Self {
        let mut x = Self::zero(universe);
        for p in 0..universe.dim() {
            x.add_entry(p, p, scalar::one());
        }
        x
    }

    /// `e_{j,k}`: sends `v_k` to `v_j`.
    pub fn elementary(universe: IndexUniverse, j: SuperIndex, k: SuperIndex) -> Self {
        let mut x = Self::zero(universe);
        x.add_entry(universe.position(j), universe.position(k), scalar::one());
        x
    }

    pub fn universe(&self) -> IndexUniverse {
        self.universe
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> Scalar {
        self.entries.get(&(row, col)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &Scalar)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn add_entry(&mut self, row: usize, col: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.entries.entry((row, col)).or_insert_with(Scalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.entries.remove(&(row, col));
        }
    }

    /// Parity of an elementary entry `e_{j,k}` is `|j| + |k|`.
    pub fn entry_parity(&self, row: usize, col: usize) -> Parity {
        self.universe.parity_at(row) + self.universe.parity_at(col)
    }

    /// `Some(p)` if every nonzero entry has parity `p` (zero counts as even).
    pub fn parity(&self) -> Option<Parity> {
        homogeneous(self.entries.keys().map(|(r, c)| self.entry_parity(*r, *c)))
    }

    pub fn require_parity(&self) -> Result<Parity, AlgError> {
        self.parity().ok_or(AlgError::NonHomogeneous)
    }

    /// Even and odd parts.
    pub fn split(&self) -> (SuperMatrix, SuperMatrix) {
        let mut even = Self::zero(self.universe);
        let mut odd = Self::zero(self.universe);
        for ((r, c), v) in &self.entries {
            let target = if self.entry_parity(*r, *c).is_odd() { &mut odd } else { &mut even };
            target.entries.insert((*r, *c), v.clone());
        }
        (even, odd)
    }

    pub fn add(&self, other: &SuperMatrix) -> SuperMatrix {
        let mut out = self.clone();
        out.add_scaled(&scalar::one(), other);
        out
    }

    pub fn sub(&self, other: &SuperMatrix) -> SuperMatrix {
        let mut out = self.clone();
        out.add_scaled(&-scalar::one(), other);
        out
    }

    pub fn add_scaled(&mut self, c: &Scalar, other: &SuperMatrix) {
        debug_assert_eq!(self.universe, other.universe);
        if c.is_zero() {
            return;
        }
        for ((r, col), v) in &other.entries {
            self.add_entry(*r, *col, c * v);
        }
    }

    pub fn scale(&self, c: &Scalar) -> SuperMatrix {
        let mut out = Self::zero(self.universe);
        out.add_scaled(c, self);
        out
    }

    pub fn mul(&self, other: &SuperMatrix) -> SuperMatrix {
        debug_assert_eq!(self.universe, other.universe);
        let mut by_row: BTreeMap<usize, Vec<(usize, &Scalar)>> = BTreeMap::new();
        for ((r, c), v) in &other.entries {
            by_row.entry(*r).or_default().push((*c, v));
        }
        let mut out = Self::zero(self.universe);
        for ((r, k), a) in &self.entries {
            if let Some(row) = by_row.get(k) {
                for (c, b) in row {
                    out.add_entry(*r, *c, a * *b);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &SuperVector) -> SuperVector {
        let mut out = SparseVec::new();
        for ((r, c), a) in &self.entries {
            let x = v.coords.get(*c);
            if !x.is_zero() {
                out.add_term(*r, a * x);
            }
        }
        SuperVector {
            universe: self.universe,
            coords: out,
        }
    }

    pub fn trace_with(&self, signed: bool) -> Scalar {
        let mut acc = Scalar::zero();
        for ((r, c), v) in &self.entries {
            if r == c {
                if signed && self.universe.parity_at(*r).is_odd() {
                    acc -= v;
                } else {
                    acc += v;
                }
            }
        }
        acc
    }

    /// Flattens to a sparse vector over `row * dim + col`.
    pub fn flatten(&self) -> SparseVec {
        let d = self.universe.dim();
        self.entries.iter().map(|((r, c), v)| (r * d + c, v.clone())).collect()
    }

    pub fn unflatten(universe: IndexUniverse, v: &SparseVec) -> SuperMatrix {
        let d = universe.dim();
        let mut out = Self::zero(universe);
        for (i, c) in v.iter() {
            out.add_entry(i / d, i % d, c.clone());
        }
        out
    }

    /// Sorted `[row-label, col-label, scalar]` triplets.
    pub fn triplets(&self) -> Vec<Triplet> {
        self.entries
            .iter()
            .map(|((r, c), v)| Triplet {
                row: self.universe.index_at(*r).label(),
                col: self.universe.index_at(*c).label(),
                value: scalar::format(v),
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Triplet {
    pub row: String,
    pub col: String,
    pub value: String,
}

/// `str(x) = Σ_even x[t,t] − Σ_odd x[t,t]`.
pub fn supertrace(x: &SuperMatrix) -> Scalar {
    x.trace_with(true)
}

/// `xy − (−1)^{|x||y|} yx` for homogeneous `x`, `y`.
pub fn supercommutator(x: &SuperMatrix, y: &SuperMatrix) -> Result<SuperMatrix, AlgError> {
    let px = x.require_parity()?;
    let py = y.require_parity()?;
    Ok(graded_commutator(x, y, sign_flip(px, py)))
}

/// Bracket of arbitrary elements, distributing over the even and odd parts.
pub fn supercommutator_split(x: &SuperMatrix, y: &SuperMatrix) -> SuperMatrix {
    let (x0, x1) = x.split();
    let (y0, y1) = y.split();
    let mut out = SuperMatrix::zero(x.universe);
    for (a, pa) in [(&x0, Parity::Even), (&x1, Parity::Odd)] {
        for (b, pb) in [(&y0, Parity::Even), (&y1, Parity::Odd)] {
            out.add_scaled(&scalar::one(), &graded_commutator(a, b, sign_flip(pa, pb)));
        }
    }
    out
}

/// `xy + (−1)^{|x||y|} yx` for homogeneous `x`, `y`.
pub fn superanticommutator(x: &SuperMatrix, y: &SuperMatrix) -> Result<SuperMatrix, AlgError> {
    let px = x.require_parity()?;
    let py = y.require_parity()?;
    Ok(graded_commutator(x, y, !sign_flip(px, py)))
}

fn graded_commutator(x: &SuperMatrix, y: &SuperMatrix, plus: bool) -> SuperMatrix {
    let mut out = x.mul(y);
    let yx = y.mul(x);
    let c = if plus { scalar::one() } else { -scalar::one() };
    out.add_scaled(&c, &yx);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::int;
    use SuperIndex::*;

    fn e(u: IndexUniverse, j: SuperIndex, k: SuperIndex) -> SuperMatrix {
        SuperMatrix::elementary(u, j, k)
    }

    #[test]
    fn supertrace_of_identity_counts_parities() {
        let u = IndexUniverse::new(2, 2);
        assert_eq!(supertrace(&SuperMatrix::identity(u)), int(1));
        assert_eq!(supertrace(&e(u, I(1), I(1))), int(1));
        assert_eq!(supertrace(&e(u, J(1), J(1))), int(-1));
    }

    #[test]
    fn even_bracket_of_elementaries() {
        let u = IndexUniverse::new(2, 1);
        let got = supercommutator(&e(u, I(1), I(2)), &e(u, I(2), I(1))).unwrap();
        assert_eq!(got, e(u, I(1), I(1)).sub(&e(u, I(2), I(2))));
    }

    #[test]
    fn odd_bracket_is_anticommutator() {
        let u = IndexUniverse::new(1, 1);
        let x = e(u, I(1), J(1));
        let y = e(u, J(1), I(1));
        // Hand expansion: e_{1,p} e_{p,1} + e_{p,1} e_{1,p} = e_{1,1} + e_{p,p}.
        let got = supercommutator(&x, &y).unwrap();
        assert_eq!(got, e(u, I(1), I(1)).add(&e(u, J(1), J(1))));
        let odd = x.add(&e(u, J(1), Zero));
        assert_eq!(supercommutator(&odd, &odd).unwrap(), odd.mul(&odd).scale(&int(2)));
    }

    #[test]
    fn mixed_parity_is_rejected() {
        let u = IndexUniverse::new(1, 1);
        let mixed = e(u, I(1), J(1)).add(&e(u, I(1), I(1)));
        assert!(supercommutator(&mixed, &mixed).is_err());
        let (even, odd) = mixed.split();
        assert_eq!(even.parity(), Some(Parity::Even));
        assert_eq!(odd.parity(), Some(Parity::Odd));
    }
}
