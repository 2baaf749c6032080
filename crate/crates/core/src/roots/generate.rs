use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use super::rootset::{weyl_closure, RootSet};
use super::weight::{Symbol, SymmetricForm, Weight};
use super::RootError;
use crate::exactalg::scalar::{self, Scalar};
use crate::exactalg::{solve_linear, SparseVec};

/// Irreducible finite (or finitely instantiated) root system types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FiniteType {
    A,
    B,
    C,
    D,
    BC,
    G2,
}

impl FiniteType {
    fn min_rank(self) -> usize {
        match self {
            FiniteType::A => 2,
            FiniteType::D => 3,
            FiniteType::G2 => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for FiniteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FiniteType::A => "A",
            FiniteType::B => "B",
            FiniteType::C => "C",
            FiniteType::D => "D",
            FiniteType::BC => "BC",
            FiniteType::G2 => "G",
        };
        f.write_str(s)
    }
}

impl FromStr for FiniteType {
    type Err = RootError;

    fn from_str(s: &str) -> Result<Self, RootError> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(FiniteType::A),
            "B" => Ok(FiniteType::B),
            "C" => Ok(FiniteType::C),
            "D" => Ok(FiniteType::D),
            "BC" => Ok(FiniteType::BC),
            "G" | "G2" => Ok(FiniteType::G2),
            _ => Err(RootError::UnsupportedRow(s.to_string())),
        }
    }
}

/// One irreducible real component, realized on its own symbol family.
#[derive(Clone, Debug)]
struct Component {
    symbols: Vec<Symbol>,
    roots: BTreeSet<Weight>,
    simple: Vec<Weight>,
}

type Family = fn(u32) -> Symbol;

fn unit(family: Family, k: usize) -> Weight {
    Weight::sym(family(k as u32))
}

/// `A_1` as `{±s_1}`.
fn line(family: Family) -> Component {
    let a = unit(family, 1);
    Component {
        symbols: vec![family(1)],
        roots: [a.clone(), -&a].into_iter().collect(),
        simple: vec![a],
    }
}

fn component(kind: FiniteType, rank: usize, family: Family) -> Result<Component, RootError> {
    if rank < kind.min_rank() || (kind == FiniteType::G2 && rank != 2) {
        return Err(RootError::RankTooSmall {
            kind: kind.to_string(),
            rank,
            min: kind.min_rank(),
        });
    }
    let n = match kind {
        FiniteType::A => rank + 1,
        FiniteType::G2 => 3,
        _ => rank,
    };
    let s = |k: usize| unit(family, k);
    let mut roots = BTreeSet::new();
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            let diff = &s(i) - &s(j);
            let sum = &s(i) + &s(j);
            match kind {
                FiniteType::A | FiniteType::G2 => {
                    roots.insert(diff);
                }
                _ => {
                    roots.insert(-&sum);
                    roots.insert(diff);
                    roots.insert(sum);
                }
            }
        }
        let short = matches!(kind, FiniteType::B | FiniteType::BC);
        let long = matches!(kind, FiniteType::C | FiniteType::BC);
        if short {
            roots.insert(s(i));
            roots.insert(-&s(i));
        }
        if long {
            roots.insert(s(i).scale_int(2));
            roots.insert(s(i).scale_int(-2));
        }
    }
    if kind == FiniteType::G2 {
        for i in 1..=3 {
            let rest: Weight = (1..=3).filter(|j| *j != i).fold(Weight::zero(), |acc, j| &acc + &s(j));
            let long = &s(i).scale_int(2) - &rest;
            roots.insert(-&long);
            roots.insert(long);
        }
    }
    let mut simple: Vec<Weight> = match kind {
        FiniteType::G2 => vec![&s(1) - &s(2), &(&s(2) + &s(3)) - &s(1).scale_int(2)],
        FiniteType::A => (1..=rank).map(|i| &s(i) - &s(i + 1)).collect(),
        _ => (1..rank).map(|i| &s(i) - &s(i + 1)).collect(),
    };
    match kind {
        FiniteType::B | FiniteType::BC => simple.push(s(rank)),
        FiniteType::C => simple.push(s(rank).scale_int(2)),
        FiniteType::D => simple.push(&s(rank - 1) + &s(rank)),
        _ => {}
    }
    Ok(Component {
        symbols: (1..=n).map(|k| family(k as u32)).collect(),
        roots,
        simple,
    })
}

/// Fundamental weights dual to `simple` under `form`, inside the span of `simple`.
pub fn fundamental_weights(simple: &[Weight], form: &SymmetricForm) -> Vec<Weight> {
    let l = simple.len();
    // Unknowns x_1..x_l and a homogenizing t: Σ_k x_k 2(α_k,α_j)/(α_j,α_j) − δ_ij t = 0.
    (0..l)
        .map(|i| {
            let eqs: Vec<SparseVec> = (0..l)
                .map(|j| {
                    let nj = form.norm(&simple[j]);
                    let mut row: SparseVec = (0..l)
                        .map(|k| (k, scalar::int(2) * form.pair(&simple[k], &simple[j]) / &nj))
                        .collect();
                    if i == j {
                        row.add_term(l, -scalar::one());
                    }
                    row
                })
                .collect();
            let sol = solve_linear(&eqs, l + 1);
            let v = sol.basis.into_iter().find(|v| !v.get(l).is_zero()).expect("Cartan matrix is invertible");
            let t = v.get(l);
            (0..l).fold(Weight::zero(), |acc, k| acc.add_scaled(&(v.get(k) / &t), &simple[k]))
        })
        .collect()
}

fn with_zero(roots: &BTreeSet<Weight>) -> BTreeSet<Weight> {
    let mut r = roots.clone();
    r.insert(Weight::zero());
    r
}

/// Type `(kind, rank)` with the orthonormal form on `ε_1, ε_2, …`.
pub fn gen_locally_finite(kind: FiniteType, rank: usize) -> Result<RootSet, RootError> {
    let c = component(kind, rank, Symbol::Eps)?;
    let form = SymmetricForm::diagonal(c.symbols.iter().copied(), &scalar::one());
    let mut r = RootSet::new(with_zero(&c.roots), form).with_tag(format!("{kind}{rank}"));
    r.components = vec![c.roots];
    Ok(r)
}

/// Rows of the two classification tables of root supersystems, with finite ranks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SuperRow {
    /// `A(ℓ,ℓ)`
    AEqual(usize),
    /// `B(T,T')`
    B(usize, usize),
    /// `BC(T,T')`, all three cardinality variants
    BC(usize, usize),
    /// `D(T,T')`
    D(usize, usize),
    /// `C(T,T')`
    C(usize, usize),
    /// `B(1,T)`
    BOne(usize),
    /// `C(1,T)`
    COne(usize),
    /// `AB(1,3)`
    AB13,
    /// `D(1,T)`
    DOne(usize),
    /// `B(T,1)`
    BTOne(usize),
    /// `G(1,2)`
    G12,
    /// `D(2,1,λ)`; experimental, see [`gen_supersystem`].
    D21(Scalar),
    /// `D(2,T)`
    DTwo(usize),
    /// Imaginary type `Ȧ(0,T)`
    DotA0(usize),
    /// Imaginary type `Ċ(0,T)`
    DotC0(usize),
    /// Imaginary type `Ȧ(T,T')`
    DotA(usize, usize),
}

impl SuperRow {
    /// Parses a row name such as `B(T,T')` together with its index-set sizes.
    pub fn parse(name: &str, ranks: &[usize], lambda: Option<Scalar>) -> Result<SuperRow, RootError> {
        let key: String = name.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || RootError::UnsupportedRow(format!("{name} with ranks {ranks:?}"));
        let one = |ranks: &[usize]| -> Result<usize, RootError> {
            match ranks {
                [t] => Ok(*t),
                _ => Err(bad()),
            }
        };
        let two = |ranks: &[usize]| -> Result<(usize, usize), RootError> {
            match ranks {
                [t, u] => Ok((*t, *u)),
                _ => Err(bad()),
            }
        };
        let row = match key.as_str() {
            "A(l,l)" | "A(ℓ,ℓ)" => SuperRow::AEqual(one(ranks)?),
            "B(T,T')" => {
                let (t, u) = two(ranks)?;
                SuperRow::B(t, u)
            }
            "BC(T,T')" => {
                let (t, u) = two(ranks)?;
                SuperRow::BC(t, u)
            }
            "D(T,T')" => {
                let (t, u) = two(ranks)?;
                SuperRow::D(t, u)
            }
            "C(T,T')" => {
                let (t, u) = two(ranks)?;
                SuperRow::C(t, u)
            }
            "B(1,T)" => SuperRow::BOne(one(ranks)?),
            "C(1,T)" => SuperRow::COne(one(ranks)?),
            "AB(1,3)" => SuperRow::AB13,
            "D(1,T)" => SuperRow::DOne(one(ranks)?),
            "B(T,1)" => SuperRow::BTOne(one(ranks)?),
            "G(1,2)" => SuperRow::G12,
            "D(2,1,l)" | "D(2,1,λ)" => SuperRow::D21(lambda.ok_or_else(bad)?),
            "D(2,T)" => SuperRow::DTwo(one(ranks)?),
            "dotA(0,T)" | "Ȧ(0,T)" => SuperRow::DotA0(one(ranks)?),
            "dotC(0,T)" | "Ċ(0,T)" => SuperRow::DotC0(one(ranks)?),
            "dotA(T,T')" | "Ȧ(T,T')" => {
                let (t, u) = two(ranks)?;
                SuperRow::DotA(t, u)
            }
            _ => return Err(bad()),
        };
        Ok(row)
    }

    /// Tag with the ranks substituted, such as `B(2,2)` or `dotA(0,2)`.
    pub fn tag(&self) -> String {
        match self {
            SuperRow::AEqual(l) => format!("A({l},{l})"),
            SuperRow::B(t, u) => format!("B({t},{u})"),
            SuperRow::BC(t, u) => format!("BC({t},{u})"),
            SuperRow::D(t, u) => format!("D({t},{u})"),
            SuperRow::C(t, u) => format!("C({t},{u})"),
            SuperRow::BOne(t) => format!("B(1,{t})"),
            SuperRow::COne(t) => format!("C(1,{t})"),
            SuperRow::AB13 => "AB(1,3)".into(),
            SuperRow::DOne(t) => format!("D(1,{t})"),
            SuperRow::BTOne(t) => format!("B({t},1)"),
            SuperRow::G12 => "G(1,2)".into(),
            SuperRow::D21(l) => format!("D(2,1,{})", scalar::format(l)),
            SuperRow::DTwo(t) => format!("D(2,{t})"),
            SuperRow::DotA0(t) => format!("dotA(0,{t})"),
            SuperRow::DotC0(t) => format!("dotC(0,{t})"),
            SuperRow::DotA(t, u) => format!("dotA({t},{u})"),
        }
    }

    pub fn is_experimental(&self) -> bool {
        matches!(self, SuperRow::D21(_))
    }
}

/// A component together with the multiple of which fundamental weight enters `δ*`.
struct Part {
    comp: Component,
    coeff: i64,
    omega: usize,
}

fn part(comp: Component, coeff: i64, omega: usize) -> Part {
    Part { comp, coeff, omega }
}

/// Generates a table row. Real rows get the form `c_i·(orthonormal)` on each component with
/// `c_i (kω_i, kω_i) = w_i` for the weights `w_i` below, so that `(δ*,δ*) = 0`. For
/// `D(2,1,λ)` the weights are `(1, λ, −1−λ)`; this normalization is our own choice.
pub fn gen_supersystem(row: &SuperRow) -> Result<RootSet, RootError> {
    use FiniteType::*;
    let e = Symbol::Eps as Family;
    let d = Symbol::Delta as Family;
    let g = Symbol::Gamma as Family;
    let need = |ok: bool| -> Result<(), RootError> {
        if ok {
            Ok(())
        } else {
            Err(RootError::UnsupportedRow(format!("{} violates the row's cardinality constraint", row.tag())))
        }
    };
    let bc_coeff = |t: usize| if t == 1 { 2 } else { 1 };
    let pm = scalar::one();
    let unit_weights = vec![pm.clone(), -pm.clone()];
    let (parts, weights, symmetric) = match row {
        SuperRow::AEqual(l) => {
            need(*l >= 1)?;
            let a = |f| component_a(*l, f);
            (vec![part(a(e), 1, 0), part(a(d), 1, 0)], unit_weights, true)
        }
        SuperRow::B(t, u) => {
            need(*t >= 2 && *u >= 2)?;
            (vec![part(component(B, *t, e)?, 1, 0), part(component(BC, *u, d)?, 1, 0)], unit_weights, false)
        }
        SuperRow::BC(t, u) => (
            vec![part(component(BC, *t, e)?, bc_coeff(*t), 0), part(component(BC, *u, d)?, bc_coeff(*u), 0)],
            unit_weights,
            false,
        ),
        SuperRow::D(t, u) => {
            need(*t >= 3 && *u >= 2)?;
            (vec![part(component(D, *t, e)?, 1, 0), part(component(C, *u, d)?, 1, 0)], unit_weights, false)
        }
        SuperRow::C(t, u) => {
            need(*t >= 2 && *u >= 2)?;
            (vec![part(component(C, *t, e)?, 1, 0), part(component(C, *u, d)?, 1, 0)], unit_weights, false)
        }
        SuperRow::BOne(t) => (vec![part(line(e), 2, 0), part(component(BC, *t, d)?, bc_coeff(*t), 0)], unit_weights, false),
        SuperRow::COne(t) => {
            need(*t >= 2)?;
            (vec![part(line(e), 1, 0), part(component(C, *t, d)?, 1, 0)], unit_weights, false)
        }
        SuperRow::AB13 => (vec![part(line(e), 1, 0), part(component(B, 3, d)?, 1, 2)], unit_weights, false),
        SuperRow::DOne(t) => {
            need(*t >= 3)?;
            (vec![part(line(e), 1, 0), part(component(D, *t, d)?, 1, 0)], unit_weights, false)
        }
        SuperRow::BTOne(t) => {
            need(*t >= 2)?;
            (vec![part(component(BC, 1, e)?, 2, 0), part(component(B, *t, d)?, 1, 0)], unit_weights, false)
        }
        SuperRow::G12 => (vec![part(component(BC, 1, e)?, 2, 0), part(component(G2, 2, d)?, 1, 0)], unit_weights, false),
        SuperRow::D21(lambda) => {
            need(!lambda.is_zero() && *lambda != -scalar::one())?;
            let w = vec![scalar::one(), lambda.clone(), -scalar::one() - lambda];
            (vec![part(line(e), 1, 0), part(line(d), 1, 0), part(line(g), 1, 0)], w, false)
        }
        SuperRow::DTwo(t) => {
            need(*t >= 2)?;
            let w = vec![scalar::one(), scalar::one(), scalar::int(-2)];
            (vec![part(line(e), 1, 0), part(line(d), 1, 0), part(component(C, *t, g)?, 1, 0)], w, false)
        }
        SuperRow::DotA0(t) => return imaginary_row(row, component_a(t.saturating_sub(1).max(1), e), None, *t >= 2),
        SuperRow::DotC0(t) => return imaginary_row(row, component(C, *t, e)?, None, *t >= 2),
        SuperRow::DotA(t, u) => {
            let ok = *t >= 2 && *u >= 2 && t != u;
            return imaginary_row(row, component_a(t.saturating_sub(1).max(1), e), Some(component_a(u.saturating_sub(1).max(1), d)), ok);
        }
    };
    real_row(row, parts, &weights, symmetric)
}

/// `A_ℓ` on `ℓ+1` symbols.
fn component_a(l: usize, family: Family) -> Component {
    if l == 1 {
        let a = &unit(family, 1) - &unit(family, 2);
        return Component {
            symbols: vec![family(1), family(2)],
            roots: [a.clone(), -&a].into_iter().collect(),
            simple: vec![a],
        };
    }
    component(FiniteType::A, l, family).expect("rank at least 2")
}

fn real_row(row: &SuperRow, parts: Vec<Part>, weights: &[Scalar], symmetric: bool) -> Result<RootSet, RootError> {
    let mut form = SymmetricForm::new();
    let mut delta_star = Weight::zero();
    let mut real = BTreeSet::new();
    for (p, w) in parts.iter().zip(weights) {
        let std = SymmetricForm::diagonal(p.comp.symbols.iter().copied(), &scalar::one());
        let omega = fundamental_weights(&p.comp.simple, &std)[p.omega].scale_int(p.coeff);
        let c = w / std.norm(&omega);
        form = form.merged(&std.scaled(&c));
        delta_star = &delta_star + &omega;
        real.extend(p.comp.roots.iter().cloned());
    }
    debug_assert!(form.norm(&delta_star).is_zero());
    let seeds: BTreeSet<Weight> = if symmetric {
        [delta_star.clone(), -&delta_star].into_iter().collect()
    } else {
        [delta_star].into_iter().collect()
    };
    let imag = weyl_closure(&seeds, &real, &form)?;
    let mut roots = with_zero(&real);
    roots.extend(imag);
    let mut r = RootSet::new(roots, form).with_tag(row.tag());
    r.components = parts.into_iter().map(|p| p.comp.roots).collect();
    Ok(r)
}

fn imaginary_row(row: &SuperRow, first: Component, second: Option<Component>, ok: bool) -> Result<RootSet, RootError> {
    if !ok {
        return Err(RootError::UnsupportedRow(format!("{} violates the row's cardinality constraint", row.tag())));
    }
    let mut form = SymmetricForm::diagonal(first.symbols.iter().copied(), &scalar::one());
    form.set(Symbol::AlphaStar, first.symbols[0], scalar::one());
    let mut real = first.roots.clone();
    let mut components = vec![first.roots];
    if let Some(c) = second {
        form = form.merged(&SymmetricForm::diagonal(c.symbols.iter().copied(), &-scalar::one()));
        form.set(Symbol::AlphaStar, c.symbols[0], scalar::one());
        real.extend(c.roots.iter().cloned());
        components.push(c.roots);
    }
    let a = Weight::sym(Symbol::AlphaStar);
    let seeds: BTreeSet<Weight> = [a.clone(), -&a].into_iter().collect();
    let imag = weyl_closure(&seeds, &real, &form)?;
    let mut roots = with_zero(&real);
    roots.extend(imag);
    let mut r = RootSet::new(roots, form).with_tag(row.tag());
    r.components = components;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::frac;
    use crate::roots::rootset::weyl_invariant;

    #[test]
    fn locally_finite_counts() {
        assert_eq!(gen_locally_finite(FiniteType::B, 2).unwrap().len_nonzero(), 8);
        assert_eq!(gen_locally_finite(FiniteType::BC, 2).unwrap().len_nonzero(), 12);
        assert_eq!(gen_locally_finite(FiniteType::A, 2).unwrap().len_nonzero(), 6);
        assert_eq!(gen_locally_finite(FiniteType::D, 3).unwrap().len_nonzero(), 12);
        assert_eq!(gen_locally_finite(FiniteType::C, 3).unwrap().len_nonzero(), 18);
        assert!(gen_locally_finite(FiniteType::D, 2).is_err());
        assert!(gen_locally_finite(FiniteType::A, 1).is_err());
    }

    #[test]
    fn fundamental_weights_of_b3() {
        let c = component(FiniteType::B, 3, Symbol::Eps).unwrap();
        let std = SymmetricForm::diagonal(c.symbols.iter().copied(), &scalar::one());
        let w = fundamental_weights(&c.simple, &std);
        assert_eq!(w[0], Weight::eps(1));
        assert_eq!(w[1], &Weight::eps(1) + &Weight::eps(2));
        let half = frac(1, 2);
        assert_eq!(w[2], Weight::from_pairs((1..=3).map(|k| (Symbol::Eps(k), half.clone()))));
    }

    #[test]
    fn b22_imaginary_part() {
        let r = gen_supersystem(&SuperRow::B(2, 2)).unwrap();
        let imag: Vec<_> = r.nonzero().filter(|a| !r.is_real(a)).collect();
        assert_eq!(imag.len(), 16);
        for a in imag {
            assert_eq!(a.iter().count(), 2);
        }
        assert_eq!(r.form.get(Symbol::Delta(1), Symbol::Delta(1)), -scalar::one());
        assert!(weyl_invariant(&r).unwrap().is_none());
    }

    #[test]
    fn g2_has_twelve_roots() {
        let c = component(FiniteType::G2, 2, Symbol::Delta).unwrap();
        assert_eq!(c.roots.len(), 12);
    }

    #[test]
    fn every_row_is_weyl_invariant() {
        let rows = [
            SuperRow::AEqual(1),
            SuperRow::AEqual(2),
            SuperRow::B(2, 3),
            SuperRow::BC(1, 1),
            SuperRow::BC(1, 2),
            SuperRow::BC(2, 2),
            SuperRow::D(3, 2),
            SuperRow::C(2, 2),
            SuperRow::BOne(1),
            SuperRow::BOne(2),
            SuperRow::COne(2),
            SuperRow::AB13,
            SuperRow::DOne(3),
            SuperRow::BTOne(2),
            SuperRow::G12,
            SuperRow::D21(frac(2, 1)),
            SuperRow::DTwo(2),
            SuperRow::DotA0(2),
            SuperRow::DotC0(2),
            SuperRow::DotA(2, 3),
        ];
        for row in rows {
            let r = gen_supersystem(&row).unwrap();
            assert!(weyl_invariant(&r).unwrap().is_none(), "{}", row.tag());
            let iso = r.nonzero().filter(|a| !r.is_real(a)).count();
            assert!(iso > 0, "{}", row.tag());
        }
    }

    #[test]
    fn constraint_violations() {
        assert!(gen_supersystem(&SuperRow::DotA(2, 2)).is_err());
        assert!(gen_supersystem(&SuperRow::B(1, 2)).is_err());
        assert!(gen_supersystem(&SuperRow::D21(-scalar::one())).is_err());
    }

    #[test]
    fn parse_rows() {
        assert_eq!(SuperRow::parse("B(T,T')", &[2, 2], None).unwrap(), SuperRow::B(2, 2));
        assert_eq!(SuperRow::parse("dotA(0,T)", &[2], None).unwrap(), SuperRow::DotA0(2));
        assert!(SuperRow::parse("D(2,1,l)", &[], None).is_err());
    }
}
