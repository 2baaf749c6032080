use std::collections::BTreeSet;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::lattice::Lattice;
use super::rootset::{connected_components, root_string, RootSet};
use super::weight::{Symbol, SymmetricForm, Weight};
use crate::exactalg::scalar;
use crate::exactalg::{with_pool, Coordinatizer, Eliminator, SparseVec};

const MAX_WITNESSES: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomVerdict {
    pub axiom: String,
    pub pass: bool,
    pub witnesses: Vec<String>,
}

impl AxiomVerdict {
    fn new(axiom: &str, witnesses: Vec<String>) -> Self {
        AxiomVerdict {
            axiom: axiom.into(),
            pass: witnesses.is_empty(),
            witnesses: witnesses.into_iter().take(MAX_WITNESSES).collect(),
        }
    }
}

/// Outcome of the axiom checks (S1)–(S5) plus the derived partitions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EarsReport {
    pub axioms: Vec<AxiomVerdict>,
    /// `R⁰`: nonzero roots in the radical of the form.
    pub radical_roots: Vec<String>,
    pub real: Vec<String>,
    pub imaginary: Vec<String>,
    pub nondegenerate: bool,
    pub irreducible: bool,
    /// Real roots span the same rational space as all roots.
    pub real_type: bool,
}

impl EarsReport {
    pub fn all_pass(&self) -> bool {
        self.axioms.iter().all(|a| a.pass)
    }

    /// Extended affine root supersystem with nondegenerate form.
    pub fn locally_finite(&self) -> bool {
        self.all_pass() && self.nondegenerate
    }

    pub fn verdict(&self, axiom: &str) -> Option<&AxiomVerdict> {
        self.axioms.iter().find(|a| a.axiom == axiom)
    }
}

fn symbols_of<'a, I: IntoIterator<Item = &'a Weight>>(ws: I, form: &SymmetricForm) -> Vec<Symbol> {
    let mut s: BTreeSet<Symbol> = ws.into_iter().flat_map(|w| w.support().collect::<Vec<_>>()).collect();
    s.extend(form.symbols());
    s.into_iter().collect()
}

/// `(dim span_Q ws, rank of the form restricted to that span)`.
pub fn gram_rank<'a, I: IntoIterator<Item = &'a Weight>>(ws: I, form: &SymmetricForm) -> (usize, usize) {
    let ws: Vec<&Weight> = ws.into_iter().collect();
    let symbols = symbols_of(ws.iter().copied(), form);
    let vecs: Vec<SparseVec> = ws.iter().map(|w| w.to_sparse(&symbols)).collect();
    let coord = Coordinatizer::new(&vecs);
    let basis: Vec<&Weight> = coord.independent().iter().map(|k| ws[*k]).collect();
    let mut elim = Eliminator::new(basis.len());
    for a in &basis {
        let row: SparseVec = basis.iter().enumerate().map(|(j, b)| (j, form.pair(a, b))).collect();
        elim.push(&row);
    }
    (basis.len(), elim.rank())
}

/// Checks (S1)–(S5) for `r` inside the group generated by `generators` (or by `r` itself
/// when `generators` is empty).
pub fn check_ears(generators: &[Weight], r: &RootSet) -> EarsReport {
    let form = &r.form;
    let zero = Weight::zero();
    let roots: Vec<Weight> = r.roots.iter().cloned().collect();

    let mut s1 = Vec::new();
    if !r.contains(&zero) {
        s1.push("0 is not a root".to_string());
    }
    if !generators.is_empty() {
        let of_roots = Lattice::span(roots.iter());
        let of_gens = Lattice::span(generators.iter());
        s1.extend(generators.iter().filter(|g| !of_roots.contains(g)).map(|g| format!("generator {g} outside span_Z R")));
        s1.extend(roots.iter().filter(|a| !of_gens.contains(a)).map(|a| format!("root {a} outside the group")));
    }

    let s2: Vec<String> = roots.iter().filter(|a| !r.contains(&-*a)).map(|a| format!("-({a}) missing")).collect();

    let radical: BTreeSet<Weight> = r.radical_roots();
    let real: Vec<Weight> = r.real_nonzero().into_iter().collect();
    let imaginary: Vec<Weight> = r.imaginary_nonzero().into_iter().collect();

    let (s3, s4): (Vec<String>, Vec<String>) = with_pool(|| {
        let per_alpha: Vec<(Vec<String>, Vec<String>)> = real
            .par_iter()
            .map(|a| {
                let na = form.norm(a);
                let mut s3 = Vec::new();
                let mut s4 = Vec::new();
                for b in &roots {
                    let c = scalar::int(2) * form.pair(a, b) / &na;
                    if !c.is_integer() {
                        s3.push(format!("2({b},{a})/({a},{a}) = {}", scalar::format(&c)));
                    }
                    match root_string(a, b, r) {
                        Ok(st) if st.unbroken && st.matches_cartan => {}
                        Ok(st) => s4.push(format!("string of {b} along {a}: offsets {:?}", st.offsets)),
                        Err(e) => s4.push(e.to_string()),
                    }
                }
                (s3, s4)
            })
            .collect();
        let mut s3 = Vec::new();
        let mut s4 = Vec::new();
        for (x, y) in per_alpha {
            s3.extend(x);
            s4.extend(y);
        }
        (s3, s4)
    });

    let mut s5 = Vec::new();
    for a in &imaginary {
        for b in &roots {
            if form.pair(a, b).is_zero() {
                continue;
            }
            if !r.contains(&(b - a)) && !r.contains(&(b + a)) {
                s5.push(format!("neither {b}-({a}) nor {b}+({a}) is a root"));
            }
        }
    }

    let nonzero: Vec<Weight> = r.nonzero().cloned().collect();
    let (dim, gram) = gram_rank(nonzero.iter(), form);
    let crossed: Vec<Weight> = nonzero.iter().filter(|a| !radical.contains(*a)).cloned().collect();
    let irreducible = connected_components(&crossed, |a, b| !form.pair(a, b).is_zero()).len() <= 1;
    let (real_dim, _) = gram_rank(real.iter(), form);

    EarsReport {
        axioms: vec![
            AxiomVerdict::new("S1", s1),
            AxiomVerdict::new("S2", s2),
            AxiomVerdict::new("S3", s3),
            AxiomVerdict::new("S4", s4),
            AxiomVerdict::new("S5", s5),
        ],
        radical_roots: radical.iter().map(Weight::label).collect(),
        real: real.iter().map(Weight::label).collect(),
        imaginary: imaginary.iter().map(Weight::label).collect(),
        nondegenerate: dim == gram,
        irreducible,
        real_type: real_dim == dim,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::generate::{gen_locally_finite, gen_supersystem, FiniteType, SuperRow};

    #[test]
    fn bc2_passes_with_trivial_radical() {
        let r = gen_locally_finite(FiniteType::BC, 2).unwrap();
        let rep = check_ears(&[], &r);
        assert!(rep.locally_finite(), "{rep:?}");
        assert!(rep.radical_roots.is_empty());
        assert!(rep.irreducible && rep.real_type);
    }

    #[test]
    fn b22_has_imaginary_roots() {
        let r = gen_supersystem(&SuperRow::B(2, 2)).unwrap();
        let rep = check_ears(&[], &r);
        assert!(rep.locally_finite(), "{rep:?}");
        assert_eq!(rep.imaginary.len(), 16);
    }

    #[test]
    fn deleting_a_root_from_b2_is_caught() {
        let mut r = gen_locally_finite(FiniteType::B, 2).unwrap();
        r.roots.remove(&Weight::eps(1));
        let rep = check_ears(&[], &r);
        assert!(!rep.verdict("S2").unwrap().pass || !rep.verdict("S4").unwrap().pass);
    }

    #[test]
    fn s1_against_larger_group() {
        let r = gen_locally_finite(FiniteType::C, 2).unwrap();
        let rep = check_ears(&[Weight::eps(1)], &r);
        assert!(!rep.verdict("S1").unwrap().pass);
    }

    #[test]
    fn degenerate_form_detected() {
        let mut r = gen_locally_finite(FiniteType::B, 2).unwrap();
        let d = Weight::sym(Symbol::Lambda(1));
        let extra: Vec<Weight> = r.nonzero().flat_map(|a| [a + &d, a - &d]).collect();
        r.roots.extend(extra);
        r.roots.insert(d.clone());
        r.roots.insert(-&d);
        let rep = check_ears(&[], &r);
        assert!(!rep.nondegenerate);
        assert_eq!(rep.radical_roots, vec!["-l1".to_string(), "l1".to_string()]);
    }
}
