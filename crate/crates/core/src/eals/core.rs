use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::check::Verdict;
use super::{EalsError, SuperToralTriple};
use crate::exactalg::scalar::{self, Scalar};
use crate::exactalg::{AlgError, Coordinatizer, Eliminator, Parity, SparseVec, StructureTable, SuperAlgebra};
use crate::graded::rootgraded::find_toral;
use crate::roots::{connected_components, partition_even_odd, project_radical, Lattice, RadicalDecomposition, Weight};

/// A subalgebra spanned by weight vectors of an ambient triple, with its own
/// structure table in the basis `basis`.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    pub name: String,
    /// Basis vectors in ambient coordinates.
    pub basis: Vec<SparseVec>,
    pub weights: Vec<Weight>,
    table: StructureTable,
    undefined: BTreeSet<(usize, usize)>,
    /// Products that are defined in the ambient algebra but not found in the span.
    pub outside_span: usize,
}

impl SuperAlgebra for Subalgebra {
    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn parity(&self, i: usize) -> Parity {
        self.table.parities()[i]
    }

    fn bracket_basis(&self, i: usize, j: usize) -> Result<SparseVec, AlgError> {
        if self.undefined.contains(&(i, j)) {
            return Err(AlgError::OutOfWindow);
        }
        Ok(self.table.get(i, j))
    }

    fn label(&self, i: usize) -> String {
        self.table.labels()[i].clone()
    }
}

impl Subalgebra {
    pub fn table(&self) -> &StructureTable {
        &self.table
    }

    /// Indices of basis vectors of weight `w`.
    pub fn weight_space(&self, w: &Weight) -> Vec<usize> {
        (0..self.basis.len()).filter(|&i| &self.weights[i] == w).collect()
    }
}

pub(crate) fn combo_label(v: &SparseVec, label: impl Fn(usize) -> String) -> String {
    let terms: Vec<String> = v
        .iter()
        .map(|(i, c)| if c == &scalar::one() { label(i) } else { format!("{}*{}", scalar::format(c), label(i)) })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Nonzero weights `α` with `(α, β) ≠ 0` for some weight `β`.
pub fn anisotropic_support(t: &SuperToralTriple) -> Result<BTreeSet<Weight>, EalsError> {
    let roots: BTreeSet<Weight> = t.weights().iter().cloned().collect();
    let tv: BTreeMap<&Weight, SparseVec> = roots.iter().map(|a| Ok((a, t.t_alpha(a)?))).collect::<Result<_, EalsError>>()?;
    Ok(roots
        .iter()
        .filter(|a| tv.values().any(|tb| t.pair_vectors(&tv[a], tb) != scalar::zero()))
        .cloned()
        .collect())
}

/// The subalgebra generated by the root spaces of roots that are not
/// orthogonal to every root. Brackets leaving the window are skipped.
pub fn core(t: &SuperToralTriple) -> Result<Subalgebra, EalsError> {
    let support = anisotropic_support(t)?;
    let gens: Vec<usize> = (0..t.dim()).filter(|&i| support.contains(&t.weights()[i])).collect();
    let mut blocks: BTreeMap<Weight, Vec<SparseVec>> = BTreeMap::new();
    let mut queue: Vec<(Weight, SparseVec)> = Vec::new();
    let add = |blocks: &mut BTreeMap<Weight, Vec<SparseVec>>, queue: &mut Vec<(Weight, SparseVec)>, w: Weight, v: SparseVec| {
        let block = blocks.entry(w.clone()).or_default();
        let mut probe = block.clone();
        probe.push(v.clone());
        if Coordinatizer::new(&probe).rank() > block.len() {
            block.push(v.clone());
            queue.push((w, v));
        }
    };
    for &g in &gens {
        add(&mut blocks, &mut queue, t.weights()[g].clone(), SparseVec::unit(g));
    }
    while let Some((w, v)) = queue.pop() {
        for &g in &gens {
            match t.bracket_ruled(&SparseVec::unit(g), &v) {
                Ok(x) if !x.is_zero() => add(&mut blocks, &mut queue, &t.weights()[g] + &w, x),
                _ => {}
            }
        }
    }
    let mut basis = Vec::new();
    let mut weights = Vec::new();
    for (w, vs) in blocks {
        for v in vs {
            basis.push(v);
            weights.push(w.clone());
        }
    }
    Ok(span_subalgebra(t, format!("core of {}", t.name), basis, weights))
}

/// Structure table of `span(basis)`; each basis vector must be a weight vector of the given weight.
pub fn span_subalgebra(t: &SuperToralTriple, name: String, basis: Vec<SparseVec>, weights: Vec<Weight>) -> Subalgebra {
    let mut by_weight: BTreeMap<&Weight, Vec<usize>> = BTreeMap::new();
    for (i, w) in weights.iter().enumerate() {
        by_weight.entry(w).or_default().push(i);
    }
    let coords: BTreeMap<&Weight, Coordinatizer> = by_weight
        .iter()
        .map(|(w, ix)| (*w, Coordinatizer::new(&ix.iter().map(|&i| basis[i].clone()).collect::<Vec<_>>())))
        .collect();
    let parities: Vec<Parity> = basis.iter().map(|v| t.element_parity(v).unwrap_or(Parity::Even)).collect();
    let labels: Vec<String> = basis.iter().map(|v| combo_label(v, |i| t.label(i))).collect();
    let mut table = StructureTable::new(parities, labels);
    let mut undefined = BTreeSet::new();
    let mut outside_span = 0;
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            let v = match t.bracket_ruled(&basis[i], &basis[j]) {
                Ok(v) => v,
                Err(_) => {
                    undefined.insert((i, j));
                    continue;
                }
            };
            if v.is_zero() {
                continue;
            }
            let w = &weights[i] + &weights[j];
            match coords.get(&w).and_then(|c| c.coords(&v)) {
                Some(c) => table.set(i, j, c.map_indices(|k| by_weight[&w][k])),
                None => {
                    outside_span += 1;
                    undefined.insert((i, j));
                }
            }
        }
    }
    Subalgebra {
        name,
        basis,
        weights,
        table,
        undefined,
        outside_span,
    }
}

/// Basis of the center of `sub`, in the coordinates of `sub`, computed per
/// weight and parity block. Undefined products impose no condition.
pub fn center_of(sub: &Subalgebra) -> Vec<SparseVec> {
    let dim = sub.dim();
    let mut blocks: BTreeMap<(Weight, Parity), Vec<usize>> = BTreeMap::new();
    for i in 0..dim {
        blocks.entry((sub.weights[i].clone(), sub.parity(i))).or_default().push(i);
    }
    let mut out = Vec::new();
    for ix in blocks.values() {
        let mut rows: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
        for (u, &i) in ix.iter().enumerate() {
            for j in 0..dim {
                if let Ok(v) = sub.bracket_basis(i, j) {
                    for (k, c) in v.iter() {
                        rows.entry((j, k)).or_default().add_term(u, c.clone());
                    }
                }
            }
        }
        let mut elim = Eliminator::new(ix.len());
        for r in rows.values() {
            elim.push(r);
        }
        out.extend(elim.nullspace().into_iter().map(|v| v.map_indices(|u| ix[u])));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoreGradedReport {
    pub algebra: String,
    pub core_dim: usize,
    /// Connectivity of the non-orthogonality graph on the nonradical roots.
    pub irreducible: bool,
    pub radical_rank: usize,
    pub dot_roots: Vec<String>,
    /// Rank of the group generated by all fibers.
    pub lambda_rank: usize,
    pub verdicts: Vec<Verdict>,
    /// Set when the parity statements are skipped because `R⁰ ⊄ R₀`.
    pub parity_notice: Option<String>,
}

impl CoreGradedReport {
    pub fn passed(&self) -> bool {
        self.irreducible && self.verdicts.iter().all(|v| v.pass)
    }

    pub fn verdict(&self, axiom: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.axiom == axiom)
    }
}

/// Checks that the core is a predivision `(Ṙ, Λ)`-graded superalgebra: the
/// `Ṙ`-components of the core are the expected sums of root spaces, every
/// `(α̇, λ)` piece has a toral pair, and (when `R⁰ ⊆ R₀`) the parity supports
/// behave as the even/odd split of `Ṙ` predicts.
pub fn verify_core_graded(t: &SuperToralTriple) -> Result<(CoreGradedReport, RadicalDecomposition), EalsError> {
    let r = t.root_set()?;
    let dec = project_radical(&r);
    let radical: BTreeSet<Weight> = r.roots.iter().filter(|a| dec.project(a).is_zero()).cloned().collect();
    let nonradical: Vec<Weight> = r.roots.iter().filter(|a| !radical.contains(*a)).cloned().collect();
    let irreducible = connected_components(&nonradical, |a, b| r.pair(a, b) != scalar::zero()).len() <= 1;
    let c = core(t)?;
    let dot = |w: &Weight| dec.project(w);
    let dims = |ws: &[Weight], w: &Weight| ws.iter().filter(|x| *x == w).count();

    let mut decomposition = Verdict::new("core: (L_c)^α̇ = Σ_{σ∈S_α̇} L^{α̇+σ}");
    for (a, fiber) in &dec.fibers {
        if a.is_zero() {
            continue;
        }
        for s in fiber {
            let w = a + s;
            decomposition.checked += 1;
            let full = t.weight_space(&w).len();
            let have = dims(&c.weights, &w);
            if full != have {
                decomposition.fail(format!("{}: {have} of {full}", w.label()));
            }
        }
    }
    let mut zero_part = Verdict::new("core: (L_c)^0 = Σ [L^{α̇+σ}, L^{−α̇+τ}]");
    {
        let zero_weights: BTreeSet<&Weight> = c.weights.iter().filter(|w| dot(w).is_zero()).collect();
        let mut gens = Vec::new();
        for i in 0..t.dim() {
            let wi = &t.weights()[i];
            if dot(wi).is_zero() {
                continue;
            }
            for j in 0..t.dim() {
                if dot(&(wi + &t.weights()[j])).is_zero() {
                    match t.bracket_ruled(&SparseVec::unit(i), &SparseVec::unit(j)) {
                        Ok(v) if !v.is_zero() => gens.push(v),
                        Ok(_) => {}
                        Err(_) => zero_part.inconclusive += 1,
                    }
                }
            }
        }
        let spanned = Coordinatizer::new(&gens).rank();
        let have: usize = zero_weights.iter().map(|w| dims(&c.weights, w)).sum();
        zero_part.checked = gens.len() as u64;
        if spanned != have {
            zero_part.fail(format!("brackets span {spanned}, core has {have}"));
        }
    }

    let lambda = Lattice::span(dec.fibers.values().flatten());

    let mut predivision = Verdict::new("core: predivision");
    let mut pieces: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
    for (i, w) in c.weights.iter().enumerate() {
        pieces.entry(w.clone()).or_default().push(i);
    }
    let dot_weights: Vec<Weight> = c.weights.iter().map(dot).collect();
    for (w, es) in &pieces {
        let a = dot(w);
        if a.is_zero() {
            continue;
        }
        let fs = pieces.get(&-w).cloned().unwrap_or_default();
        let scalars: Vec<Scalar> = dot_weights.iter().map(|b| r.pair(b, &a)).collect();
        let mut skipped = 0u64;
        predivision.checked += 1;
        if find_toral(&c, &scalars, es, &fs, &mut skipped).is_none() {
            if skipped > 0 {
                predivision.inconclusive += 1;
                predivision.note(format!("{} undecided at this window", w.label()));
            } else {
                predivision.fail(w.label());
            }
        }
    }

    let even_roots = t.roots_of_parity(Parity::Even);
    let odd_roots = t.roots_of_parity(Parity::Odd);
    let (dot_even, dot_odd) = partition_even_odd(&dec.dot_roots).map_err(|e| EalsError::Shape(e.to_string()))?;
    let mut fine = Verdict::new("core: parity support equals the split of Ṙ");
    for (i, w) in dot_weights.iter().enumerate() {
        fine.checked += 1;
        let ok = match c.parity(i) {
            Parity::Even => dot_even.contains(w),
            Parity::Odd => dot_odd.contains(w),
        };
        if !ok {
            fine.fail(format!("{} ({:?}) over {}", c.label(i), c.parity(i), w.label()));
        }
    }
    let mut verdicts = vec![decomposition, zero_part, predivision];
    let radical_even = radical.iter().all(|s| !odd_roots.contains(s));
    let parity_notice = if radical_even {
        verdicts.extend(parity_statements(&dec, &even_roots, &odd_roots));
        verdicts.push(fine);
        None
    } else {
        Some("R⁰ has odd roots; parity statements skipped".into())
    };
    Ok((
        CoreGradedReport {
            algebra: t.name.clone(),
            core_dim: c.dim(),
            irreducible,
            radical_rank: dec.radical.len(),
            dot_roots: dec.dot_roots.roots.iter().map(Weight::label).collect(),
            lambda_rank: lambda.rank(),
            verdicts,
            parity_notice,
        },
        dec,
    ))
}

/// The four support statements for `R_0`, `R_1` over the fibers.
fn parity_statements(dec: &RadicalDecomposition, even: &BTreeSet<Weight>, odd: &BTreeSet<Weight>) -> Vec<Verdict> {
    let dot = &dec.dot_roots;
    let real = dot.real_nonzero();
    let empty = BTreeSet::new();
    let fiber = |a: &Weight| dec.fibers.get(a).unwrap_or(&empty);
    let two = scalar::int(2);
    let mut v1 = Verdict::new("parity: α̇ real, 2α̇ ∉ Ṙ ⇒ α̇+S_α̇ ⊆ R_0");
    let mut v2 = Verdict::new("parity: α̇ real, 2α̇ ∈ Ṙ ⇒ 2α̇+S_2α̇ ⊆ R_0");
    let mut v3 = Verdict::new("parity: α̇ imaginary ⇒ α̇+S_α̇ ⊆ R_1");
    let mut v4 = Verdict::new("parity: α̇+σ ∈ R_0 ⇒ α̇+τ ∉ R_1");
    for a in dot.roots.iter().filter(|a| !a.is_zero()) {
        let a2 = a.scale(&two);
        if real.contains(a) {
            if !dot.contains(&a2) {
                for s in fiber(a) {
                    v1.checked += 1;
                    if !even.contains(&(a + s)) {
                        v1.fail((a + s).label());
                    }
                }
            } else {
                for s in fiber(&a2) {
                    v2.checked += 1;
                    if !even.contains(&(&a2 + s)) {
                        v2.fail((&a2 + s).label());
                    }
                }
            }
            let has_even = fiber(a).iter().any(|s| even.contains(&(a + s)));
            v4.checked += 1;
            if has_even {
                if let Some(s) = fiber(a).iter().find(|s| odd.contains(&(a + *s))) {
                    v4.fail((a + s).label());
                }
            }
        } else {
            for s in fiber(a) {
                v3.checked += 1;
                if !odd.contains(&(a + s)) {
                    v3.fail((a + s).label());
                }
            }
        }
    }
    vec![v1, v2, v3, v4]
}
