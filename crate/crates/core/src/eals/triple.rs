use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::EalsError;
use crate::exactalg::scalar::{self, Scalar};
use crate::exactalg::{AlgError, Eliminator, LinearMap, Parity, SparseVec, StructureTable, SuperAlgebra};
use crate::roots::{RootSet, Symbol, SymmetricForm, Weight};

/// Products leaving a degree window: those whose weight, with the `radical`
/// symbols dropped, lies outside `finite_support` are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowRule {
    pub radical: Vec<Symbol>,
    pub finite_support: BTreeSet<Weight>,
}

impl WindowRule {
    pub fn finite_part(&self, w: &Weight) -> Weight {
        w.restrict(|s| !self.radical.contains(&s))
    }

    pub fn vanishes(&self, w: &Weight) -> bool {
        !self.finite_support.contains(&self.finite_part(w))
    }
}

/// Outcome of a (possibly inhomogeneous) linear solve.
pub(crate) enum Solved {
    Unique(SparseVec),
    Many(SparseVec),
    Inconsistent,
}

/// Solves `rows[i].0 · x = rows[i].1` in `n` unknowns.
pub(crate) fn solve_affine(rows: &[(SparseVec, Scalar)], n: usize) -> Solved {
    let mut elim = Eliminator::new(n + 1);
    for (a, b) in rows {
        let mut r = a.clone();
        r.add_term(n, -b.clone());
        elim.push(&r);
    }
    let null = elim.nullspace();
    let Some(pos) = null.iter().position(|v| v.get(n) != scalar::zero()) else { return Solved::Inconsistent };
    let v = &null[pos];
    let x = v.scaled(&(scalar::one() / v.get(n))).filtered(|i| i < n);
    if null.len() == 1 {
        Solved::Unique(x)
    } else {
        Solved::Many(x)
    }
}

/// `(e, f, h)` with `[e,f] = h`, `[h,e] = 2e`, `[h,f] = −2f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Triple {
    pub root: String,
    pub e: SparseVec,
    pub f: SparseVec,
    pub h: SparseVec,
}

/// A Lie superalgebra with an even invariant form and a Cartan subalgebra
/// spanned by basis vectors. Every basis vector is a weight vector.
#[derive(Clone, Debug)]
pub struct SuperToralTriple {
    pub name: String,
    table: StructureTable,
    undefined: BTreeSet<(usize, usize)>,
    form: LinearMap,
    cartan: Vec<usize>,
    weights: Vec<Weight>,
    window: Option<WindowRule>,
    /// Basis elements of the restricted dual `V†`, if the algebra has one.
    pub derivations: Vec<usize>,
    symbols: Vec<Symbol>,
    /// `values[s][j]`: symbol `s` evaluated on `cartan[j]`.
    values: Vec<Vec<Scalar>>,
}

impl SuperToralTriple {
    /// Reads off how every weight symbol acts on the Cartan basis. Fails if a
    /// Cartan element does not act diagonally, or if the weights are not a
    /// consistent set of linear functionals.
    pub fn new(
        name: String,
        table: StructureTable,
        undefined: BTreeSet<(usize, usize)>,
        form: LinearMap,
        cartan: Vec<usize>,
        weights: Vec<Weight>,
        window: Option<WindowRule>,
    ) -> Result<Self, EalsError> {
        let dim = table.parities().len();
        if form.rows() != dim || form.cols() != dim || weights.len() != dim {
            return Err(EalsError::Shape(format!("form is {}x{} and {} weights for dimension {dim}", form.rows(), form.cols(), weights.len())));
        }
        let symbols: Vec<Symbol> = weights.iter().flat_map(|w| w.support()).collect::<BTreeSet<_>>().into_iter().collect();
        let mut values = vec![Vec::with_capacity(cartan.len()); symbols.len()];
        for &h in &cartan {
            let mut rows = Vec::with_capacity(dim);
            for x in 0..dim {
                let v = if undefined.contains(&(h, x)) { return Err(EalsError::NotToral(table.labels()[h].clone())) } else { table.get(h, x) };
                let c = v.get(x);
                if v.support().any(|k| k != x) {
                    return Err(EalsError::NotToral(format!("[{}, {}]", table.labels()[h], table.labels()[x])));
                }
                let coeffs: SparseVec = symbols.iter().enumerate().map(|(s, sym)| (s, weights[x].coeff(*sym))).collect();
                rows.push((coeffs, c));
            }
            match solve_affine(&rows, symbols.len()) {
                Solved::Unique(v) => {
                    for (s, vals) in values.iter_mut().enumerate() {
                        vals.push(v.get(s));
                    }
                }
                Solved::Many(_) => return Err(EalsError::Shape("weight symbols are not determined by the action".into())),
                Solved::Inconsistent => return Err(EalsError::Shape(format!("weights disagree with the action of {}", table.labels()[h]))),
            }
        }
        Ok(SuperToralTriple {
            name,
            table,
            undefined,
            form,
            cartan,
            weights,
            window,
            derivations: Vec::new(),
            symbols,
            values,
        })
    }

    pub fn table(&self) -> &StructureTable {
        &self.table
    }

    pub fn undefined(&self) -> &BTreeSet<(usize, usize)> {
        &self.undefined
    }

    pub fn form(&self) -> &LinearMap {
        &self.form
    }

    pub fn cartan(&self) -> &[usize] {
        &self.cartan
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn window(&self) -> Option<&WindowRule> {
        self.window.as_ref()
    }

    pub fn pair_vectors(&self, x: &SparseVec, y: &SparseVec) -> Scalar {
        let mut out = scalar::zero();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                let g = self.form.get(i, j);
                if g != scalar::zero() {
                    out += a * b * g;
                }
            }
        }
        out
    }

    pub fn weight_space(&self, w: &Weight) -> Vec<usize> {
        (0..self.dim()).filter(|&i| &self.weights[i] == w).collect()
    }

    /// `α(h_j)` for each Cartan basis element.
    fn evaluate(&self, alpha: &Weight) -> Result<Vec<Scalar>, EalsError> {
        let mut out = vec![scalar::zero(); self.cartan.len()];
        for (sym, c) in alpha.iter() {
            let s = self.symbols.iter().position(|t| *t == sym).ok_or_else(|| EalsError::NotRepresentable(alpha.label()))?;
            for (j, v) in self.values[s].iter().enumerate() {
                out[j] += c * v;
            }
        }
        Ok(out)
    }

    /// The element `t_α` of the Cartan subalgebra with `(t_α, h) = α(h)`.
    pub fn t_alpha(&self, alpha: &Weight) -> Result<SparseVec, EalsError> {
        let rhs = self.evaluate(alpha)?;
        let k = self.cartan.len();
        let rows: Vec<(SparseVec, Scalar)> = (0..k)
            .map(|j| ((0..k).map(|i| (i, self.form.get(self.cartan[i], self.cartan[j]))).collect(), rhs[j].clone()))
            .collect();
        match solve_affine(&rows, k) {
            Solved::Unique(c) => Ok(c.map_indices(|i| self.cartan[i])),
            _ => Err(EalsError::NotRepresentable(alpha.label())),
        }
    }

    /// `(α, β) = (t_α, t_β)`.
    pub fn pair_weights(&self, a: &Weight, b: &Weight) -> Result<Scalar, EalsError> {
        let ta = self.t_alpha(a)?;
        let tb = self.t_alpha(b)?;
        Ok(self.pair_vectors(&ta, &tb))
    }

    /// The transported form on the weight symbols.
    pub fn weight_form(&self) -> Result<SymmetricForm, EalsError> {
        let mut f = SymmetricForm::new();
        for (i, a) in self.symbols.iter().enumerate() {
            for b in &self.symbols[i..] {
                let c = self.pair_weights(&Weight::sym(*a), &Weight::sym(*b))?;
                if c != scalar::zero() {
                    f.set(*a, *b, c);
                }
            }
        }
        Ok(f)
    }

    /// All weights, with `0`, and the transported form.
    pub fn root_set(&self) -> Result<RootSet, EalsError> {
        let mut roots: BTreeSet<Weight> = self.weights.iter().cloned().collect();
        roots.insert(Weight::zero());
        Ok(RootSet::new(roots, self.weight_form()?))
    }

    /// Weights carried by basis vectors of the given parity.
    pub fn roots_of_parity(&self, p: Parity) -> BTreeSet<Weight> {
        (0..self.dim()).filter(|&i| self.parity(i) == p).map(|i| self.weights[i].clone()).collect()
    }

    /// `[x, y]`, treating an out-of-window product as zero when the window
    /// rule says so; `[x, x] = 0` for even `x`.
    pub fn bracket_ruled(&self, x: &SparseVec, y: &SparseVec) -> Result<SparseVec, AlgError> {
        if x == y && self.element_parity(x) == Some(Parity::Even) {
            return Ok(SparseVec::new());
        }
        let mut out = SparseVec::new();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                match self.bracket_basis(i, j) {
                    Ok(v) => out.add_scaled(&(a * b), &v),
                    Err(AlgError::OutOfWindow) => {
                        let w = &self.weights[i] + &self.weights[j];
                        if !self.window.as_ref().is_some_and(|r| r.vanishes(&w)) {
                            return Err(AlgError::OutOfWindow);
                        }
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(out)
    }

    /// An `sl2`-super-triple at a root with `(α, α) ≠ 0`.
    pub fn sl2_super_triple(&self, alpha: &Weight) -> Result<Sl2Triple, EalsError> {
        let norm = self.pair_weights(alpha, alpha)?;
        if norm == scalar::zero() {
            return Err(EalsError::NotReal(alpha.label()));
        }
        let h = self.t_alpha(alpha)?.scaled(&(scalar::int(2) / norm));
        let minus = -alpha;
        for e in self.weight_space(alpha) {
            let fs: Vec<usize> = self.weight_space(&minus).into_iter().filter(|&f| self.parity(f) == self.parity(e)).collect();
            let mut images = Vec::with_capacity(fs.len());
            for &f in &fs {
                match self.bracket_basis(e, f) {
                    Ok(v) => images.push(v),
                    Err(_) => break,
                }
            }
            if images.len() < fs.len() {
                continue;
            }
            let mut rows: BTreeMap<usize, SparseVec> = BTreeMap::new();
            for (j, v) in images.iter().enumerate() {
                for (k, c) in v.iter() {
                    rows.entry(k).or_default().add_term(j, c.clone());
                }
            }
            for k in h.support() {
                rows.entry(k).or_default();
            }
            let eqs: Vec<(SparseVec, Scalar)> = rows.into_iter().map(|(k, r)| (r, h.get(k))).collect();
            let coeffs = match solve_affine(&eqs, fs.len()) {
                Solved::Unique(c) | Solved::Many(c) => c,
                Solved::Inconsistent => continue,
            };
            let f = coeffs.map_indices(|j| fs[j]);
            let e = SparseVec::unit(e);
            let he = self.bracket(&h, &e)?;
            let hf = self.bracket(&h, &f)?;
            if he == e.scaled(&scalar::int(2)) && hf == f.scaled(&scalar::int(-2)) {
                return Ok(Sl2Triple { root: alpha.label(), e, f, h });
            }
        }
        Err(EalsError::NoSl2Pair(alpha.label()))
    }
}

/// On-disk form: brackets as `(i, j, k, "p/q")`, form as `(i, j, "p/q")`,
/// weights as symbol/coefficient pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleJson {
    pub name: String,
    pub labels: Vec<String>,
    pub parity: Vec<u8>,
    pub brackets: Vec<(usize, usize, usize, String)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub undefined: Vec<(usize, usize)>,
    pub form: Vec<(usize, usize, String)>,
    pub cartan: Vec<usize>,
    pub weights: Vec<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub derivations: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowJson {
    pub radical: Vec<String>,
    pub finite_support: Vec<Vec<(String, String)>>,
}

impl SuperToralTriple {
    pub fn to_json(&self) -> TripleJson {
        let mut brackets = Vec::new();
        for (&(i, j), v) in self.table.nonzero_entries() {
            for (k, c) in v.iter() {
                brackets.push((i, j, k, scalar::format(c)));
            }
        }
        TripleJson {
            name: self.name.clone(),
            labels: self.table.labels().to_vec(),
            parity: self.table.parities().iter().map(|p| p.bit()).collect(),
            brackets,
            undefined: self.undefined.iter().copied().collect(),
            form: self.form.entries().map(|(i, j, c)| (i, j, scalar::format(c))).collect(),
            cartan: self.cartan.clone(),
            weights: self.weights.iter().map(Weight::to_pairs).collect(),
            window: self.window.as_ref().map(|w| WindowJson {
                radical: w.radical.iter().map(|s| s.to_string()).collect(),
                finite_support: w.finite_support.iter().map(Weight::to_pairs).collect(),
            }),
            derivations: self.derivations.clone(),
        }
    }

    pub fn from_json(j: &TripleJson) -> Result<Self, EalsError> {
        let dim = j.labels.len();
        let shape = |msg: String| EalsError::Shape(msg);
        if j.parity.len() != dim || j.weights.len() != dim {
            return Err(shape(format!("{} labels, {} parities, {} weights", dim, j.parity.len(), j.weights.len())));
        }
        let parities = j
            .parity
            .iter()
            .map(|&b| match b {
                0 => Ok(Parity::Even),
                1 => Ok(Parity::Odd),
                other => Err(shape(format!("parity entry {other}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut by_pair: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
        for (i, jj, k, c) in &j.brackets {
            if *i >= dim || *jj >= dim || *k >= dim {
                return Err(shape(format!("bracket entry ({i}, {jj}, {k}) out of range")));
            }
            by_pair.entry((*i, *jj)).or_default().add_term(*k, scalar::parse(c)?);
        }
        let mut table = StructureTable::new(parities, j.labels.clone());
        for ((a, b), v) in by_pair {
            table.set(a, b, v);
        }
        let mut form = Vec::with_capacity(j.form.len());
        for (a, b, c) in &j.form {
            if *a >= dim || *b >= dim {
                return Err(shape(format!("form entry ({a}, {b}) out of range")));
            }
            form.push((*a, *b, scalar::parse(c)?));
        }
        if let Some(bad) = j.cartan.iter().chain(&j.derivations).find(|&&i| i >= dim) {
            return Err(shape(format!("basis index {bad} out of range")));
        }
        if let Some((a, b)) = j.undefined.iter().find(|(a, b)| *a >= dim || *b >= dim) {
            return Err(shape(format!("undefined pair ({a}, {b}) out of range")));
        }
        let parse_weight = |p: &Vec<(String, String)>| Weight::from_string_pairs(p).map_err(|e| shape(e.to_string()));
        let weights = j.weights.iter().map(parse_weight).collect::<Result<Vec<_>, _>>()?;
        let window = match &j.window {
            None => None,
            Some(w) => Some(WindowRule {
                radical: w.radical.iter().map(|s| s.parse::<Symbol>().map_err(|e| shape(e.to_string()))).collect::<Result<_, _>>()?,
                finite_support: w.finite_support.iter().map(parse_weight).collect::<Result<_, _>>()?,
            }),
        };
        let mut t = SuperToralTriple::new(
            j.name.clone(),
            table,
            j.undefined.iter().copied().collect(),
            LinearMap::from_entries(dim, dim, form),
            j.cartan.clone(),
            weights,
            window,
        )?;
        t.derivations = j.derivations.clone();
        Ok(t)
    }
}

impl SuperAlgebra for SuperToralTriple {
    fn dim(&self) -> usize {
        self.table.parities().len()
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eals::osp_triple;
    use crate::osp::{build_context, weight_form};

    fn osp22() -> SuperToralTriple {
        osp_triple(&build_context(2, 2).unwrap()).unwrap()
    }

    #[test]
    fn zero_weight_maps_to_zero() {
        assert!(osp22().t_alpha(&Weight::zero()).unwrap().is_zero());
    }

    #[test]
    fn transported_form_matches_the_weight_form() {
        let t = osp22();
        let expected = weight_form(2, 2);
        let syms = [Weight::eps(1), Weight::eps(2), Weight::delta(1), Weight::delta(2)];
        for a in &syms {
            for b in &syms {
                assert_eq!(t.pair_weights(a, b).unwrap(), expected.pair(a, b), "({}, {})", a.label(), b.label());
            }
        }
    }

    #[test]
    fn sl2_triples_at_long_short_and_odd_roots() {
        let t = osp22();
        let e1 = Weight::eps(1);
        let d1 = Weight::delta(1);
        for (alpha, parity) in [(&e1 - &Weight::eps(2), Parity::Even), (d1.scale_int(2), Parity::Even), (d1.clone(), Parity::Odd), (e1, Parity::Even)] {
            let s = t.sl2_super_triple(&alpha).unwrap();
            assert_eq!(t.element_parity(&s.e), Some(parity));
            assert_eq!(t.element_parity(&s.f), Some(parity));
            assert_eq!(t.bracket(&s.e, &s.f).unwrap(), s.h);
            assert_eq!(t.bracket(&s.h, &s.e).unwrap(), s.e.scaled(&scalar::int(2)));
            assert_eq!(t.bracket(&s.h, &s.f).unwrap(), s.f.scaled(&scalar::int(-2)));
        }
    }

    #[test]
    fn isotropic_root_has_no_sl2_triple() {
        let t = osp22();
        let alpha = &Weight::eps(1) - &Weight::delta(1);
        assert!(matches!(t.sl2_super_triple(&alpha), Err(EalsError::NotReal(_))));
    }

    #[test]
    fn window_rule_drops_the_radical_part() {
        let rule = WindowRule { radical: vec![Symbol::Lambda(1)], finite_support: [Weight::zero(), Weight::eps(1)].into_iter().collect() };
        let w = Weight::eps(1).add_scaled(&scalar::int(5), &Weight::lambda(1));
        assert_eq!(rule.finite_part(&w), Weight::eps(1));
        assert!(!rule.vanishes(&w));
        assert!(rule.vanishes(&Weight::eps(1).scale_int(2)));
    }

    #[test]
    fn off_diagonal_cartan_action_is_rejected() {
        let mut table = StructureTable::new(vec![Parity::Even, Parity::Even], vec!["h".into(), "x".into()]);
        table.set(0, 1, SparseVec::unit(0));
        let form = LinearMap::from_entries(2, 2, [(0, 0, scalar::one()), (1, 1, scalar::one())]);
        let r = SuperToralTriple::new("bad".into(), table, BTreeSet::new(), form, vec![0], vec![Weight::zero(); 2], None);
        assert!(matches!(r, Err(EalsError::NotToral(_))));
    }

    #[test]
    fn json_form_rebuilds_the_same_brackets() {
        let t = osp_triple(&build_context(1, 1).unwrap()).unwrap();
        let back = SuperToralTriple::from_json(&t.to_json()).unwrap();
        for i in 0..t.dim() {
            for j in 0..t.dim() {
                assert_eq!(t.bracket_basis(i, j), back.bracket_basis(i, j));
            }
        }
        assert_eq!(back.weights(), t.weights());
    }

    #[test]
    fn json_with_bad_index_is_rejected() {
        let mut j = osp_triple(&build_context(1, 1).unwrap()).unwrap().to_json();
        j.cartan.push(999);
        assert!(matches!(SuperToralTriple::from_json(&j), Err(EalsError::Shape(_))));
    }
}
