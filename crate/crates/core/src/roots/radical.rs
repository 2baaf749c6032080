use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::Serialize;

use super::ears::{check_ears, EarsReport};
use super::rootset::RootSet;
use super::weight::{Symbol, SymmetricForm, Weight};
use crate::exactalg::scalar::{self, Scalar};
use crate::exactalg::{solve_linear, Coordinatizer, SparseVec};

/// Splitting `V = V̇ ⊕ V⁰` of the span of a root set and the fibers over the projected roots.
#[derive(Clone, Debug)]
pub struct RadicalDecomposition {
    /// Basis of the radical `V⁰`, reduced so that `radical[k]` has coefficient 1 at `pivots[k]`
    /// and 0 at every other pivot.
    pub radical: Vec<Weight>,
    pub pivots: Vec<Symbol>,
    /// `Ṙ`: the projection of `R` onto the complement `{v : v_p = 0 for all pivots p}`.
    pub dot_roots: RootSet,
    /// `S_α̇ = {σ ∈ V⁰ : α̇ + σ ∈ R}`.
    pub fibers: BTreeMap<Weight, BTreeSet<Weight>>,
    pub projected_report: EarsReport,
    /// `⋃ (α̇ + S_α̇)` equals `R`.
    pub reconstructs: bool,
    /// `0 ∈ S_α̇` for the reduced real roots (real type) or all of `Ṙ` (imaginary type).
    pub zero_in_prescribed_fibers: bool,
    /// All short-root fibers agree.
    pub short_fibers_equal: bool,
    /// All fibers over long and nonzero imaginary roots agree.
    pub long_imaginary_fibers_equal: bool,
    /// `S`, the fiber of a short real root.
    pub s: Option<BTreeSet<Weight>>,
    /// `F`, the fiber of a nonzero imaginary root (or of 0 if there is none).
    pub f: Option<BTreeSet<Weight>>,
    pub inclusions: Option<FiberInclusions>,
}

/// `S−2S ⊆ S`, `S+F ⊆ S`, `2S+F ⊆ F`, each checked for results inside the coordinate box
/// spanned by the observed fibers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberInclusions {
    pub s_minus_2s: bool,
    pub s_plus_f: bool,
    pub two_s_plus_f: bool,
    pub checked: usize,
    pub outside_window: usize,
    pub witnesses: Vec<String>,
}

impl FiberInclusions {
    pub fn all(&self) -> bool {
        self.s_minus_2s && self.s_plus_f && self.two_s_plus_f
    }
}

impl RadicalDecomposition {
    pub fn project(&self, v: &Weight) -> Weight {
        self.pivots
            .iter()
            .zip(&self.radical)
            .fold(v.clone(), |acc, (p, r)| acc.add_scaled(&-v.coeff(*p), r))
    }

    fn coords(&self, sigma: &Weight) -> Vec<Scalar> {
        self.pivots.iter().map(|p| sigma.coeff(*p)).collect()
    }
}

/// Basis of the radical of `form` on `span_Q ws`, in reduced echelon form over `symbols`.
fn radical_basis(ws: &[Weight], form: &SymmetricForm, symbols: &[Symbol]) -> (Vec<Weight>, Vec<Symbol>) {
    let vecs: Vec<SparseVec> = ws.iter().map(|w| w.to_sparse(symbols)).collect();
    let coord = Coordinatizer::new(&vecs);
    let basis: Vec<&Weight> = coord.independent().iter().map(|k| &ws[*k]).collect();
    let eqs: Vec<SparseVec> = basis
        .iter()
        .map(|a| basis.iter().enumerate().map(|(j, b)| (j, form.pair(a, b))).collect())
        .collect();
    let null = solve_linear(&eqs, basis.len());
    let mut rows: Vec<SparseVec> = null
        .basis
        .iter()
        .map(|x| x.iter().fold(SparseVec::new(), |mut acc, (j, c)| {
            acc.add_scaled(c, &basis[j].to_sparse(symbols));
            acc
        }))
        .collect();
    // Reduced row echelon form over symbol coordinates.
    let mut pivots = Vec::new();
    let mut done: Vec<SparseVec> = Vec::new();
    while let Some(pos) = rows.iter().position(|r| !r.is_zero()) {
        let mut row = rows.swap_remove(pos);
        for (p, d) in pivots.iter().zip(&done) {
            let c = row.get(*p);
            if !c.is_zero() {
                row.add_scaled(&-c, d);
            }
        }
        let Some((p, lead)) = row.iter().next().map(|(p, c)| (p, c.clone())) else { continue };
        let row = row.scaled(&(Scalar::one() / lead));
        for d in done.iter_mut() {
            let c = d.get(p);
            if !c.is_zero() {
                d.add_scaled(&-c, &row);
            }
        }
        pivots.push(p);
        done.push(row);
    }
    let mut order: Vec<usize> = (0..pivots.len()).collect();
    order.sort_by_key(|k| pivots[*k]);
    (
        order.iter().map(|k| Weight::from_sparse(&done[*k], symbols)).collect(),
        order.iter().map(|k| symbols[pivots[*k]]).collect(),
    )
}

pub fn project_radical(r: &RootSet) -> RadicalDecomposition {
    let mut symbols: BTreeSet<Symbol> = r.symbols();
    symbols.extend(r.form.symbols());
    let symbols: Vec<Symbol> = symbols.into_iter().collect();
    let roots: Vec<Weight> = r.roots.iter().cloned().collect();
    let (radical, pivots) = radical_basis(&roots, &r.form, &symbols);

    let mut decomp = RadicalDecomposition {
        radical,
        pivots,
        dot_roots: RootSet::new(BTreeSet::new(), r.form.clone()),
        fibers: BTreeMap::new(),
        projected_report: check_ears(&[], &RootSet::new(BTreeSet::new(), r.form.clone())),
        reconstructs: false,
        zero_in_prescribed_fibers: false,
        short_fibers_equal: false,
        long_imaginary_fibers_equal: false,
        s: None,
        f: None,
        inclusions: None,
    };
    for b in &roots {
        let dot = decomp.project(b);
        let sigma = b - &dot;
        decomp.fibers.entry(dot).or_default().insert(sigma);
    }
    let dot_set: BTreeSet<Weight> = decomp.fibers.keys().cloned().collect();
    let mut dot = RootSet::new(dot_set, r.form.clone());
    dot.tag = r.tag.clone();
    decomp.projected_report = check_ears(&[], &dot);

    let rebuilt: BTreeSet<Weight> = decomp.fibers.iter().flat_map(|(a, s)| s.iter().map(move |x| a + x)).collect();
    decomp.reconstructs = rebuilt == r.roots;

    let classes = dot.length_classes();
    let imaginary = dot.imaginary_nonzero();
    let real_type = decomp.projected_report.real_type;
    let zero = Weight::zero();
    let prescribed: Vec<&Weight> = if real_type {
        dot.roots.iter().filter(|a| a.is_zero() || classes.short.contains(*a) || classes.long.contains(*a)).collect()
    } else {
        dot.roots.iter().collect()
    };
    decomp.zero_in_prescribed_fibers = prescribed.iter().all(|a| decomp.fibers[*a].contains(&zero));

    let all_equal = |set: &mut dyn Iterator<Item = &Weight>| -> bool {
        let fibers: Vec<&BTreeSet<Weight>> = set.map(|a| &decomp.fibers[a]).collect();
        fibers.windows(2).all(|w| w[0] == w[1])
    };
    decomp.short_fibers_equal = all_equal(&mut classes.short.iter());
    decomp.long_imaginary_fibers_equal = all_equal(&mut classes.long.iter().chain(imaginary.iter()));

    decomp.s = classes.short.iter().next().map(|a| decomp.fibers[a].clone());
    decomp.f = imaginary.iter().next().or_else(|| dot.roots.get(&zero)).map(|a| decomp.fibers[a].clone());
    if let (Some(s), Some(f)) = (&decomp.s, &decomp.f) {
        decomp.inclusions = Some(check_inclusions(&decomp, s, f));
    }
    decomp.dot_roots = dot;
    decomp
}

fn check_inclusions(decomp: &RadicalDecomposition, s: &BTreeSet<Weight>, f: &BTreeSet<Weight>) -> FiberInclusions {
    let dims = decomp.pivots.len();
    let mut lo: Vec<Option<Scalar>> = vec![None; dims];
    let mut hi: Vec<Option<Scalar>> = vec![None; dims];
    for sigma in decomp.fibers.values().flatten() {
        for (k, c) in decomp.coords(sigma).into_iter().enumerate() {
            if lo[k].as_ref().is_none_or(|l| &c < l) {
                lo[k] = Some(c.clone());
            }
            if hi[k].as_ref().is_none_or(|h| &c > h) {
                hi[k] = Some(c);
            }
        }
    }
    let inside = |w: &Weight| -> bool {
        decomp.coords(w).iter().enumerate().all(|(k, c)| {
            lo[k].as_ref().map_or(c.is_zero(), |l| c >= l) && hi[k].as_ref().map_or(c.is_zero(), |h| c <= h)
        })
    };
    let mut out = FiberInclusions {
        s_minus_2s: true,
        s_plus_f: true,
        two_s_plus_f: true,
        checked: 0,
        outside_window: 0,
        witnesses: Vec::new(),
    };
    let two = scalar::int(2);
    let mut probe = |candidate: Weight, target: &BTreeSet<Weight>, flag: &mut bool, what: &str| {
        if !inside(&candidate) {
            out.outside_window += 1;
            return;
        }
        out.checked += 1;
        if !target.contains(&candidate) {
            *flag = false;
            if out.witnesses.len() < 8 {
                out.witnesses.push(format!("{what}: {candidate}"));
            }
        }
    };
    let (mut a, mut b, mut c) = (true, true, true);
    for x in s {
        for y in s {
            probe(x.add_scaled(&-two.clone(), y), s, &mut a, "S-2S");
        }
        for y in f {
            probe(x + y, s, &mut b, "S+F");
            probe(y.add_scaled(&two, x), f, &mut c, "2S+F");
        }
    }
    out.s_minus_2s = a;
    out.s_plus_f = b;
    out.two_s_plus_f = c;
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::generate::{gen_locally_finite, FiniteType};

    fn affine_b2(window: i64) -> RootSet {
        let base = gen_locally_finite(FiniteType::B, 2).unwrap();
        let roots = base
            .roots
            .iter()
            .flat_map(|a| (-window..=window).map(move |k| a.add_scaled(&scalar::int(k), &Weight::lambda(1))))
            .collect();
        RootSet::new(roots, base.form.clone())
    }

    #[test]
    fn affine_b2_projects_to_b2() {
        let r = affine_b2(2);
        let dec = project_radical(&r);
        assert_eq!(dec.pivots, vec![Symbol::Lambda(1)]);
        assert_eq!(dec.dot_roots.roots, gen_locally_finite(FiniteType::B, 2).unwrap().roots);
        assert!(dec.reconstructs && dec.zero_in_prescribed_fibers);
        assert!(dec.projected_report.locally_finite());
        let s = dec.s.clone().unwrap();
        assert_eq!(s.len(), 5);
        let inc = dec.inclusions.unwrap();
        assert!(inc.all(), "{inc:?}");
        assert!(inc.checked > 0 && inc.outside_window > 0);
    }

    #[test]
    fn nondegenerate_input_is_identity() {
        let r = gen_locally_finite(FiniteType::BC, 2).unwrap();
        let dec = project_radical(&r);
        assert!(dec.radical.is_empty());
        assert_eq!(dec.dot_roots.roots, r.roots);
        assert!(dec.fibers.values().all(|f| f.len() == 1 && f.contains(&Weight::zero())));
    }

    #[test]
    fn broken_fiber_is_reported() {
        let mut r = affine_b2(2);
        // Remove ε1 + λ so that S ceases to be closed under S − 2S.
        r.roots.remove(&(&Weight::eps(1) + &Weight::lambda(1)));
        r.roots.remove(&(&Weight::eps(1).scale_int(-1) - &Weight::lambda(1)));
        let dec = project_radical(&r);
        assert!(!dec.short_fibers_equal || !dec.inclusions.unwrap().all());
    }
}
