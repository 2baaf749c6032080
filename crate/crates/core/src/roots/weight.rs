use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::RootError;
use crate::exactalg::scalar::{self, Scalar};
use crate::exactalg::SparseVec;

/// Formal basis symbol of a weight lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    /// `ε_k`
    Eps(u32),
    /// `δ_k`
    Delta(u32),
    /// Third family, used by rows with three real components.
    Gamma(u32),
    /// `α*` of the imaginary-type rows.
    AlphaStar,
    /// `λ_k`, the abelian-group grading directions.
    Lambda(u32),
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Eps(k) => write!(f, "e{k}"),
            Symbol::Delta(k) => write!(f, "d{k}"),
            Symbol::Gamma(k) => write!(f, "g{k}"),
            Symbol::AlphaStar => write!(f, "a*"),
            Symbol::Lambda(k) => write!(f, "l{k}"),
        }
    }
}

impl std::str::FromStr for Symbol {
    type Err = RootError;

    fn from_str(s: &str) -> Result<Self, RootError> {
        if s == "a*" {
            return Ok(Symbol::AlphaStar);
        }
        let bad = || RootError::ParseSymbol(s.to_string());
        let (head, tail) = s.split_at(s.char_indices().nth(1).map(|(i, _)| i).ok_or_else(bad)?);
        let k: u32 = tail.parse().map_err(|_| bad())?;
        match head {
            "e" => Ok(Symbol::Eps(k)),
            "d" => Ok(Symbol::Delta(k)),
            "g" => Ok(Symbol::Gamma(k)),
            "l" => Ok(Symbol::Lambda(k)),
            _ => Err(bad()),
        }
    }
}

/// Finitely supported rational combination of symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight {
    coords: BTreeMap<Symbol, Scalar>,
}

impl Weight {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn sym(s: Symbol) -> Self {
        Self::term(s, scalar::one())
    }

    pub fn term(s: Symbol, c: Scalar) -> Self {
        let mut w = Self::zero();
        w.add_term(s, c);
        w
    }

    pub fn eps(k: u32) -> Self {
        Self::sym(Symbol::Eps(k))
    }

    pub fn delta(k: u32) -> Self {
        Self::sym(Symbol::Delta(k))
    }

    pub fn lambda(k: u32) -> Self {
        Self::sym(Symbol::Lambda(k))
    }

    pub fn from_pairs<I: IntoIterator<Item = (Symbol, Scalar)>>(pairs: I) -> Self {
        let mut w = Self::zero();
        for (s, c) in pairs {
            w.add_term(s, c);
        }
        w
    }

    pub fn add_term(&mut self, s: Symbol, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.coords.entry(s).or_insert_with(Scalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.coords.remove(&s);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coeff(&self, s: Symbol) -> Scalar {
        self.coords.get(&s).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Symbol, &Scalar)> {
        self.coords.iter().map(|(s, c)| (*s, c))
    }

    pub fn support(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.coords.keys().copied()
    }

    pub fn scale(&self, c: &Scalar) -> Weight {
        Weight::from_pairs(self.coords.iter().map(|(s, v)| (*s, v * c)))
    }

    pub fn scale_int(&self, k: i64) -> Weight {
        self.scale(&scalar::int(k))
    }

    /// `self + c * other`
    pub fn add_scaled(&self, c: &Scalar, other: &Weight) -> Weight {
        let mut out = self.clone();
        for (s, v) in &other.coords {
            out.add_term(*s, c * v);
        }
        out
    }

    /// Drops every coordinate whose symbol fails `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(Symbol) -> bool) -> Weight {
        Weight::from_pairs(self.coords.iter().filter(|(s, _)| keep(**s)).map(|(s, c)| (*s, c.clone())))
    }

    /// `Some(k)` with `self = k * other` for `other ≠ 0`.
    pub fn ratio_to(&self, other: &Weight) -> Option<Scalar> {
        let (s0, c0) = other.coords.iter().next()?;
        let k = self.coeff(*s0) / c0;
        (self == &other.scale(&k)).then_some(k)
    }

    /// Text form, for example `e1-e2+2d1` or `1/2a*`.
    pub fn label(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (s, c)) in self.coords.iter().enumerate() {
            let neg = c.is_negative();
            if neg {
                out.push('-');
            } else if k > 0 {
                out.push('+');
            }
            let a = c.abs();
            if !a.is_one() {
                out.push_str(&scalar::format(&a));
            }
            out.push_str(&s.to_string());
        }
        out
    }

    /// Coefficient pairs `[symbol, "p/q"]` for JSON.
    pub fn to_pairs(&self) -> Vec<(String, String)> {
        self.coords.iter().map(|(s, c)| (s.to_string(), scalar::format(c))).collect()
    }

    /// Coordinates against an ordered symbol list; symbols missing from the list are dropped.
    pub fn to_sparse(&self, symbols: &[Symbol]) -> SparseVec {
        self.coords
            .iter()
            .filter_map(|(s, c)| symbols.binary_search(s).ok().map(|k| (k, c.clone())))
            .collect()
    }

    pub fn from_sparse(v: &SparseVec, symbols: &[Symbol]) -> Weight {
        Weight::from_pairs(v.iter().map(|(k, c)| (symbols[k], c.clone())))
    }

    pub fn from_string_pairs(pairs: &[(String, String)]) -> Result<Weight, RootError> {
        let mut w = Weight::zero();
        for (s, c) in pairs {
            let c = scalar::parse(c).map_err(|_| RootError::ParseSymbol(c.clone()))?;
            w.add_term(s.parse()?, c);
        }
        Ok(w)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        self.add_scaled(&scalar::one(), rhs)
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        self.add_scaled(&-scalar::one(), rhs)
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        self.scale(&-scalar::one())
    }
}

/// Symmetric bilinear form given by its values on symbol pairs; unset pairs are 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymmetricForm {
    gram: BTreeMap<(Symbol, Symbol), Scalar>,
}

fn key(a: Symbol, b: Symbol) -> (Symbol, Symbol) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl SymmetricForm {
    pub fn new() -> Self {
        Self::default()
    }

    /// `(s, s) = c` for each listed symbol, all other pairs 0.
    pub fn diagonal<I: IntoIterator<Item = Symbol>>(symbols: I, c: &Scalar) -> Self {
        let mut f = Self::new();
        for s in symbols {
            f.set(s, s, c.clone());
        }
        f
    }

    pub fn set(&mut self, a: Symbol, b: Symbol, c: Scalar) {
        if c.is_zero() {
            self.gram.remove(&key(a, b));
        } else {
            self.gram.insert(key(a, b), c);
        }
    }

    pub fn get(&self, a: Symbol, b: Symbol) -> Scalar {
        self.gram.get(&key(a, b)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn pair(&self, x: &Weight, y: &Weight) -> Scalar {
        let mut acc = Scalar::zero();
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                let g = self.get(a, b);
                if !g.is_zero() {
                    acc += ca * cb * g;
                }
            }
        }
        acc
    }

    pub fn norm(&self, x: &Weight) -> Scalar {
        self.pair(x, x)
    }

    pub fn scaled(&self, r: &Scalar) -> SymmetricForm {
        SymmetricForm {
            gram: self.gram.iter().map(|(k, v)| (*k, v * r)).filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    /// Sum of two forms on (typically disjoint) symbol sets.
    pub fn merged(&self, other: &SymmetricForm) -> SymmetricForm {
        let mut out = self.clone();
        for ((a, b), v) in &other.gram {
            let cur = out.get(*a, *b);
            out.set(*a, *b, cur + v);
        }
        out
    }

    pub fn entries(&self) -> impl Iterator<Item = (Symbol, Symbol, &Scalar)> {
        self.gram.iter().map(|((a, b), v)| (*a, *b, v))
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.gram.keys().flat_map(|(a, b)| [*a, *b]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::{frac, int};

    #[test]
    fn symbols_parse_back() {
        for s in [Symbol::Eps(3), Symbol::Delta(12), Symbol::Gamma(1), Symbol::AlphaStar, Symbol::Lambda(2)] {
            assert_eq!(s.to_string().parse::<Symbol>().unwrap(), s);
        }
        assert!("x1".parse::<Symbol>().is_err());
    }

    #[test]
    fn labels() {
        let w = &Weight::eps(1) - &Weight::eps(2);
        assert_eq!(w.label(), "e1-e2");
        let w = Weight::term(Symbol::AlphaStar, frac(1, 2)).add_scaled(&int(-2), &Weight::delta(1));
        assert_eq!(w.label(), "-2d1+1/2a*");
        assert_eq!(Weight::zero().label(), "0");
    }

    #[test]
    fn form_is_symmetric_and_bilinear() {
        let mut f = SymmetricForm::new();
        f.set(Symbol::Eps(1), Symbol::AlphaStar, int(1));
        f.set(Symbol::Eps(1), Symbol::Eps(1), int(1));
        let a = Weight::sym(Symbol::AlphaStar);
        let e = Weight::eps(1);
        assert_eq!(f.pair(&a, &e), f.pair(&e, &a));
        assert_eq!(f.pair(&(&a + &e), &e), int(2));
    }

    #[test]
    fn ratio() {
        let w = Weight::eps(1).scale_int(3);
        assert_eq!(w.ratio_to(&Weight::eps(1)), Some(int(3)));
        assert_eq!(w.ratio_to(&Weight::eps(2)), None);
    }
}
