use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::weight::{Symbol, Weight};

/// Integer span of finitely many rational weights, kept in echelon form.
#[derive(Clone, Debug)]
pub struct Lattice {
    symbols: Vec<Symbol>,
    denom: BigInt,
    // Echelon rows: (pivot column, integer row). Pivot entries are positive.
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl Lattice {
    pub fn span<'a, I: IntoIterator<Item = &'a Weight>>(gens: I) -> Lattice {
        let gens: Vec<&Weight> = gens.into_iter().collect();
        let symbols: Vec<Symbol> = gens.iter().flat_map(|w| w.support()).collect::<BTreeSet<_>>().into_iter().collect();
        let mut denom = BigInt::one();
        for w in &gens {
            for (_, c) in w.iter() {
                denom = denom.lcm(c.denom());
            }
        }
        let mut lat = Lattice {
            symbols,
            denom,
            rows: Vec::new(),
        };
        let mut pending: Vec<Vec<BigInt>> = gens.iter().filter_map(|w| lat.integer_row(w)).collect();
        for col in 0..lat.symbols.len() {
            let (mut active, rest): (Vec<_>, Vec<_>) = pending.into_iter().partition(|r| !r[col].is_zero());
            pending = rest;
            // Euclid on the column until a single row carries it.
            while active.len() > 1 {
                active.sort_by(|a, b| a[col].abs().cmp(&b[col].abs()));
                let head = active[0].clone();
                let mut next = vec![head.clone()];
                for row in active.into_iter().skip(1) {
                    let q = row[col].div_floor(&head[col]);
                    let reduced: Vec<BigInt> = row.iter().zip(&head).map(|(a, b)| a - &q * b).collect();
                    if reduced[col].is_zero() {
                        if reduced.iter().any(|x| !x.is_zero()) {
                            pending.push(reduced);
                        }
                    } else {
                        next.push(reduced);
                    }
                }
                active = next;
            }
            if let Some(mut row) = active.pop() {
                if row[col].is_negative() {
                    row.iter_mut().for_each(|x| *x = -x.clone());
                }
                lat.rows.push((col, row));
            }
        }
        lat
    }

    fn integer_row(&self, w: &Weight) -> Option<Vec<BigInt>> {
        let mut row = vec![BigInt::zero(); self.symbols.len()];
        for (s, c) in w.iter() {
            let k = self.symbols.binary_search(&s).ok()?;
            let scaled = c * num_rational::BigRational::from_integer(self.denom.clone());
            if !scaled.is_integer() {
                return None;
            }
            row[k] = scaled.to_integer();
        }
        Some(row)
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, w: &Weight) -> bool {
        let Some(mut row) = self.integer_row(w) else { return false };
        for (col, r) in &self.rows {
            let (q, rem) = row[*col].div_rem(&r[*col]);
            if !rem.is_zero() {
                return false;
            }
            for (x, y) in row.iter_mut().zip(r) {
                *x -= &q * y;
            }
        }
        row.iter().all(Zero::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::frac;

    #[test]
    fn membership_respects_integrality() {
        let a = Weight::eps(1).scale_int(2);
        let b = &Weight::eps(1) + &Weight::eps(2);
        let lat = Lattice::span([&a, &b]);
        assert_eq!(lat.rank(), 2);
        assert!(lat.contains(&(&a - &b)));
        assert!(!lat.contains(&Weight::eps(1)));
        assert!(lat.contains(&Weight::eps(2).scale_int(2)));
        assert!(!lat.contains(&Weight::delta(1)));
    }

    #[test]
    fn half_integers() {
        let h = Weight::term(Symbol::Eps(1), frac(1, 2));
        let lat = Lattice::span([&h]);
        assert!(lat.contains(&Weight::eps(1)));
        assert!(!lat.contains(&Weight::term(Symbol::Eps(1), frac(1, 3))));
    }
}
