use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::scalar::Scalar;
use super::sparse::SparseVec;

type IntRow = Vec<(usize, BigInt)>;

fn to_primitive(v: &SparseVec) -> IntRow {
    let mut lcm = BigInt::one();
    for (_, c) in v.iter() {
        lcm = lcm.lcm(c.denom());
    }
    let mut row: IntRow = v.iter().map(|(i, c)| (i, (c * &lcm).to_integer())).collect();
    normalize(&mut row);
    row
}

/// Divides by the content and makes the leading entry positive.
fn normalize(row: &mut IntRow) {
    let mut g = BigInt::zero();
    for (_, c) in row.iter() {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    if row.first().is_some_and(|(_, c)| c.is_negative()) {
        g = -g;
    }
    if !g.is_zero() && !g.is_one() {
        for (_, c) in row.iter_mut() {
            *c /= &g;
        }
    }
}

fn entry(row: &IntRow, col: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |(c, _)| *c).ok().map(|k| &row[k].1)
}

/// `p * row - a * pivot`, merged in column order.
fn combine(row: &IntRow, p: &BigInt, pivot: &IntRow, a: &BigInt) -> IntRow {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let take_row = j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
        let take_piv = i >= row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
        let (col, val) = if take_row {
            let r = (row[i].0, &row[i].1 * p);
            i += 1;
            r
        } else if take_piv {
            let r = (pivot[j].0, -(&pivot[j].1 * a));
            j += 1;
            r
        } else {
            let r = (row[i].0, &row[i].1 * p - &pivot[j].1 * a);
            i += 1;
            j += 1;
            r
        };
        if !val.is_zero() {
            out.push((col, val));
        }
    }
    out
}

/// Incremental fraction-free Gauss–Jordan elimination over the integers.
/// Pivot rows are kept primitive and mutually reduced.
#[derive(Clone, Debug)]
pub struct Eliminator {
    unknowns: usize,
    pivots: BTreeMap<usize, IntRow>,
}

impl Eliminator {
    pub fn new(unknowns: usize) -> Self {
        Eliminator {
            unknowns,
            pivots: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn unknowns(&self) -> usize {
        self.unknowns
    }

    fn reduce(&self, mut row: IntRow) -> IntRow {
        let cols: Vec<usize> = row.iter().map(|(c, _)| *c).filter(|c| self.pivots.contains_key(c)).collect();
        for col in cols {
            let Some(a) = entry(&row, col).cloned() else { continue };
            let pivot = &self.pivots[&col];
            let p = entry(pivot, col).expect("pivot entry");
            let g = a.gcd(p);
            row = combine(&row, &(p / &g), pivot, &(&a / &g));
            normalize(&mut row);
        }
        row
    }

    /// Adds an equation; returns `true` if it raised the rank.
    pub fn push(&mut self, equation: &SparseVec) -> bool {
        debug_assert!(equation.support().all(|c| c < self.unknowns));
        let row = self.reduce(to_primitive(equation));
        if row.is_empty() {
            return false;
        }
        let col = row[0].0;
        let p = row[0].1.clone();
        for other in self.pivots.values_mut() {
            if let Some(a) = entry(other, col).cloned() {
                let g = a.gcd(&p);
                *other = combine(other, &(&p / &g), &row, &(&a / &g));
                normalize(other);
            }
        }
        self.pivots.insert(col, row);
        true
    }

    /// Whether the equation is implied by those already pushed.
    pub fn implies(&self, equation: &SparseVec) -> bool {
        self.reduce(to_primitive(equation)).is_empty()
    }

    /// Basis of the solution space, one vector per free unknown.
    pub fn nullspace(&self) -> Vec<SparseVec> {
        let mut by_free: BTreeMap<usize, SparseVec> = (0..self.unknowns)
            .filter(|c| !self.pivots.contains_key(c))
            .map(|c| (c, SparseVec::unit(c)))
            .collect();
        for (col, row) in &self.pivots {
            let p = Scalar::from_integer(entry(row, *col).expect("pivot entry").clone());
            for (f, a) in row.iter().filter(|(f, _)| f != col) {
                if let Some(v) = by_free.get_mut(f) {
                    v.add_term(*col, -Scalar::from_integer(a.clone()) / &p);
                }
            }
        }
        by_free.into_values().collect()
    }
}

/// Result of [`solve_linear`].
#[derive(Clone, Debug)]
pub struct SolutionSpace {
    pub dim: usize,
    pub basis: Vec<SparseVec>,
}

/// Exact basis of `{x : e·x = 0 for every equation e}` in `unknowns` variables.
pub fn solve_linear(equations: &[SparseVec], unknowns: usize) -> SolutionSpace {
    let mut elim = Eliminator::new(unknowns);
    for e in equations {
        elim.push(e);
    }
    let basis = elim.nullspace();
    SolutionSpace {
        dim: basis.len(),
        basis,
    }
}

pub fn rank(vectors: &[SparseVec], ambient: usize) -> usize {
    let mut elim = Eliminator::new(ambient);
    for v in vectors {
        elim.push(v);
    }
    elim.rank()
}

/// Expresses vectors in a fixed spanning family.
#[derive(Clone, Debug)]
pub struct Coordinatizer {
    family_len: usize,
    // (pivot column, row with unit pivot, combination of family members giving the row)
    pivots: Vec<(usize, SparseVec, SparseVec)>,
    independent: Vec<usize>,
}

impl Coordinatizer {
    pub fn new(family: &[SparseVec]) -> Self {
        let mut out = Coordinatizer {
            family_len: family.len(),
            pivots: Vec::new(),
            independent: Vec::new(),
        };
        for (k, v) in family.iter().enumerate() {
            let (rest, combo) = out.reduce(v, SparseVec::unit(k));
            let lead = rest.iter().next().map(|(c, x)| (c, x.clone()));
            if let Some((col, lead)) = lead {
                let inv = Scalar::one() / lead;
                out.pivots.push((col, rest.scaled(&inv), combo.scaled(&inv)));
                out.independent.push(k);
            }
        }
        out
    }

    fn reduce(&self, v: &SparseVec, mut combo: SparseVec) -> (SparseVec, SparseVec) {
        let mut rest = v.clone();
        for (col, row, rc) in &self.pivots {
            let a = rest.get(*col);
            if !a.is_zero() {
                rest.add_scaled(&-a.clone(), row);
                combo.add_scaled(&-a, rc);
            }
        }
        (rest, combo)
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn family_len(&self) -> usize {
        self.family_len
    }

    /// Indices of a maximal independent subfamily, in order.
    pub fn independent(&self) -> &[usize] {
        &self.independent
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v, SparseVec::new()).0.is_zero()
    }

    /// Coefficients `c` with `Σ c_k family[k] = v`, or `None` if `v` is outside the span.
    pub fn coords(&self, v: &SparseVec) -> Option<SparseVec> {
        let (rest, combo) = self.reduce(v, SparseVec::new());
        rest.is_zero().then(|| combo.neg())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::{frac, int};

    fn row(vals: &[i64]) -> SparseVec {
        SparseVec::from_dense(&vals.iter().map(|v| int(*v)).collect::<Vec<_>>())
    }

    #[test]
    fn independent_equations_leave_zero_space() {
        let s = solve_linear(&[row(&[1, 1]), row(&[1, -1])], 2);
        assert_eq!(s.dim, 0);
    }

    #[test]
    fn single_equation_two_unknowns() {
        let s = solve_linear(&[row(&[1, 2])], 2);
        assert_eq!(s.dim, 1);
        assert_eq!(s.basis[0], row(&[-2, 1]));
    }

    #[test]
    fn empty_system_is_full_space() {
        assert_eq!(solve_linear(&[], 3).dim, 3);
    }

    #[test]
    fn rational_coefficients() {
        let eq = SparseVec::from_dense(&[frac(1, 2), frac(-1, 3), int(0)]);
        let s = solve_linear(std::slice::from_ref(&eq), 3);
        assert_eq!(s.dim, 2);
        for v in &s.basis {
            assert!(eq.dot(v).is_zero());
        }
    }

    #[test]
    fn coordinates_in_dependent_family() {
        let fam = vec![row(&[1, 0, 1]), row(&[0, 1, 1]), row(&[1, 1, 2])];
        let c = Coordinatizer::new(&fam);
        assert_eq!(c.rank(), 2);
        assert_eq!(c.independent(), &[0, 1]);
        let target = row(&[2, -3, -1]);
        let coords = c.coords(&target).unwrap();
        let mut back = SparseVec::new();
        for (k, x) in coords.iter() {
            back.add_scaled(x, &fam[k]);
        }
        assert_eq!(back, target);
        assert!(c.coords(&row(&[0, 0, 1])).is_none());
    }
}
