use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::OspError;
use crate::exactalg::scalar::{self, Scalar};
use crate::exactalg::{
    sign_flip, supercommutator, with_pool, AlgError, Coordinatizer, Eliminator, IndexUniverse, LinearMap, Parity,
    SparseVec, StructureTable, SuperIndex, SuperMatrix,
};
use crate::roots::{Symbol, SymmetricForm, Weight};

/// Weight of the basis vector `v_ix` under the standard Cartan subalgebra.
pub fn index_weight(ix: SuperIndex) -> Weight {
    match ix {
        SuperIndex::Zero => Weight::zero(),
        SuperIndex::I(k) => Weight::eps(k),
        SuperIndex::IBar(k) => -&Weight::eps(k),
        SuperIndex::J(k) => Weight::delta(k),
        SuperIndex::JBar(k) => -&Weight::delta(k),
    }
}

/// `(v_a, v_b)`: `(v_0,v_0) = 1`, `(v_i, v_ī) = 1`, `(v_ī, v_i) = (−1)^{|i|}`.
pub fn u_pair(a: SuperIndex, b: SuperIndex) -> Scalar {
    use SuperIndex::*;
    match (a, b) {
        (Zero, Zero) => scalar::one(),
        (I(i), IBar(j)) | (J(i), JBar(j)) | (IBar(i), I(j)) if i == j => scalar::one(),
        (JBar(i), J(j)) if i == j => -scalar::one(),
        _ => Scalar::zero(),
    }
}

/// Coefficients of the condition `(x v_a, v_b) − γ(−1)^{|x||a|}(v_a, x v_b) = 0`
/// as a combination of matrix entries `x[row, col]`.
fn condition_terms(u: IndexUniverse, a: SuperIndex, b: SuperIndex, gamma: i64, parity: Parity) -> Vec<((usize, usize), Scalar)> {
    let mut out = Vec::with_capacity(2);
    let left = u_pair(b.bar(), b);
    if !left.is_zero() {
        out.push(((u.position(b.bar()), u.position(a)), left));
    }
    let right = u_pair(a, a.bar());
    if !right.is_zero() {
        let s = scalar::int(-gamma) * scalar::sign(sign_flip(parity, a.parity()));
        out.push(((u.position(a.bar()), u.position(b)), right * s));
    }
    out
}

/// Whether homogeneous `x` satisfies the γ-condition on every basis pair.
pub fn satisfies_condition(x: &SuperMatrix, gamma: i64) -> Result<bool, AlgError> {
    let parity = x.require_parity()?;
    let u = x.universe();
    let ixs = u.indices();
    for &a in &ixs {
        for &b in &ixs {
            let mut acc = Scalar::zero();
            for ((r, c), coeff) in condition_terms(u, a, b, gamma, parity) {
                acc += x.get(r, c) * coeff;
            }
            if !acc.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Solution space of the γ-condition (plus `str = 0` on the diagonal block)
/// among matrices supported on `cells`.
fn solve_block(u: IndexUniverse, gamma: i64, cells: &[(usize, usize)], parity: Parity, diagonal: bool) -> Vec<SuperMatrix> {
    let local: BTreeMap<(usize, usize), usize> = cells.iter().enumerate().map(|(k, c)| (*c, k)).collect();
    let mut pairs = BTreeSet::new();
    for &(r, c) in cells {
        let (ri, ci) = (u.index_at(r), u.index_at(c));
        pairs.insert((ci, ri.bar()));
        pairs.insert((ri.bar(), ci));
    }
    let mut elim = Eliminator::new(cells.len());
    for (a, b) in pairs {
        let eq: SparseVec = condition_terms(u, a, b, gamma, parity)
            .into_iter()
            .filter_map(|(cell, v)| local.get(&cell).map(|k| (*k, v)))
            .collect();
        elim.push(&eq);
    }
    if diagonal {
        let eq: SparseVec = cells.iter().enumerate().map(|(k, &(r, _))| (k, scalar::sign(u.parity_at(r).is_odd()))).collect();
        elim.push(&eq);
    }
    elim.nullspace()
        .into_iter()
        .map(|v| {
            let lead = v.iter().next().map(|(_, c)| c.clone()).unwrap_or_else(scalar::one);
            let v = v.scaled(&(scalar::one() / lead));
            let mut x = SuperMatrix::zero(u);
            for (k, c) in v.iter() {
                x.add_entry(cells[k].0, cells[k].1, c.clone());
            }
            x
        })
        .collect()
}

/// A homogeneous weight vector of `g` or `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub matrix: SuperMatrix,
    pub weight: Weight,
    pub parity: Parity,
    pub label: String,
}

/// Basis of weight vectors with per-weight coordinatization.
#[derive(Clone, Debug)]
pub struct WeightedBasis {
    pub elements: Vec<Element>,
    universe: IndexUniverse,
    index_weights: Vec<Weight>,
    blocks: BTreeMap<Weight, (Vec<usize>, Coordinatizer)>,
}

impl WeightedBasis {
    fn new(universe: IndexUniverse, elements: Vec<Element>) -> Self {
        let index_weights = universe.indices().into_iter().map(index_weight).collect();
        let mut by_weight: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
        for (k, e) in elements.iter().enumerate() {
            by_weight.entry(e.weight.clone()).or_default().push(k);
        }
        let blocks = by_weight
            .into_iter()
            .map(|(w, ks)| {
                let flat: Vec<SparseVec> = ks.iter().map(|k| elements[*k].matrix.flatten()).collect();
                (w, (ks, Coordinatizer::new(&flat)))
            })
            .collect();
        WeightedBasis {
            elements,
            universe,
            index_weights,
            blocks,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn parities(&self) -> Vec<Parity> {
        self.elements.iter().map(|e| e.parity).collect()
    }

    pub fn labels(&self) -> Vec<String> {
        self.elements.iter().map(|e| e.label.clone()).collect()
    }

    pub fn weights(&self) -> Vec<Weight> {
        self.elements.iter().map(|e| e.weight.clone()).collect()
    }

    pub fn matrices(&self) -> Vec<SuperMatrix> {
        self.elements.iter().map(|e| e.matrix.clone()).collect()
    }

    /// Indices of the basis elements of weight `w`.
    pub fn weight_space(&self, w: &Weight) -> &[usize] {
        self.blocks.get(w).map(|(ks, _)| ks.as_slice()).unwrap_or(&[])
    }

    /// Coordinates of `x` in this basis, or `None` if `x` is outside the span.
    pub fn coords(&self, x: &SuperMatrix) -> Option<SparseVec> {
        let mut parts: BTreeMap<Weight, SuperMatrix> = BTreeMap::new();
        for ((r, c), v) in x.entries() {
            let w = &self.index_weights[r] - &self.index_weights[c];
            parts.entry(w).or_insert_with(|| SuperMatrix::zero(self.universe)).add_entry(r, c, v.clone());
        }
        let mut out = SparseVec::new();
        for (w, part) in parts {
            let (ks, coord) = self.blocks.get(&w)?;
            let local = coord.coords(&part.flatten())?;
            for (k, c) in local.iter() {
                out.add_term(ks[k], c.clone());
            }
        }
        Some(out)
    }

    /// `Σ v_k · basis[k]`.
    pub fn combine(&self, v: &SparseVec) -> SuperMatrix {
        let mut x = SuperMatrix::zero(self.universe);
        for (k, c) in v.iter() {
            x.add_scaled(c, &self.elements[k].matrix);
        }
        x
    }
}

/// Which of the three constructed `g`-modules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Carrier {
    G,
    S,
    U,
}

impl fmt::Display for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Carrier::G => "g",
            Carrier::S => "s",
            Carrier::U => "u",
        })
    }
}

impl FromStr for Carrier {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "g" => Ok(Carrier::G),
            "s" => Ok(Carrier::S),
            "u" => Ok(Carrier::U),
            other => Err(format!("unknown module {other:?}; expected g, s or u")),
        }
    }
}

/// `g = osp(2m+1|2n)`, `s`, `u` and the Cartan subalgebra for fixed `(m, n)`.
#[derive(Debug)]
pub struct OspContext {
    pub m: u32,
    pub n: u32,
    pub universe: IndexUniverse,
    pub g: WeightedBasis,
    pub s: WeightedBasis,
    /// `h_1..h_m, d_1..d_n`; these are also the first `m+n` elements of `g`.
    pub h: Vec<SuperMatrix>,
    g_table: OnceLock<StructureTable>,
}

pub fn build_context(m: u32, n: u32) -> Result<OspContext, OspError> {
    if m == 0 || n == 0 {
        return Err(OspError::Rank { m, n });
    }
    let u = IndexUniverse::new(m, n);
    let ixs = u.indices();
    let d = ixs.len();
    let mut cells: BTreeMap<Weight, Vec<(usize, usize)>> = BTreeMap::new();
    for r in 0..d {
        for c in 0..d {
            cells.entry(&index_weight(ixs[r]) - &index_weight(ixs[c])).or_default().push((r, c));
        }
    }

    let mut h = Vec::new();
    let mut h_elements = Vec::new();
    let cartan_pairs = (1..=m)
        .map(|t| (SuperIndex::I(t), SuperIndex::IBar(t), format!("h{t}")))
        .chain((1..=n).map(|t| (SuperIndex::J(t), SuperIndex::JBar(t), format!("d{t}"))));
    for (a, b, label) in cartan_pairs {
        let x = SuperMatrix::elementary(u, a, a).sub(&SuperMatrix::elementary(u, b, b));
        h.push(x.clone());
        h_elements.push(Element {
            matrix: x,
            weight: Weight::zero(),
            parity: Parity::Even,
            label,
        });
    }

    let mut g = Vec::new();
    let mut s = Vec::new();
    for (w, block) in &cells {
        let parity = u.parity_at(block[0].0) + u.parity_at(block[0].1);
        debug_assert!(block.iter().all(|&(r, c)| u.parity_at(r) + u.parity_at(c) == parity));
        let diagonal = w.is_zero();
        let g_sol = solve_block(u, -1, block, parity, diagonal);
        if diagonal {
            if g_sol.len() != h.len() {
                return Err(AlgError::Dimension {
                    expected: h.len(),
                    got: g_sol.len(),
                }
                .into());
            }
            g.append(&mut h_elements);
        } else {
            let many = g_sol.len() > 1;
            g.extend(g_sol.into_iter().enumerate().map(|(k, x)| Element {
                matrix: x,
                weight: w.clone(),
                parity,
                label: if many { format!("x[{w}]#{}", k + 1) } else { format!("x[{w}]") },
            }));
        }
        let s_sol = solve_block(u, 1, block, parity, diagonal);
        let many = s_sol.len() > 1;
        s.extend(s_sol.into_iter().enumerate().map(|(k, x)| Element {
            matrix: x,
            weight: w.clone(),
            parity,
            label: if many { format!("s[{w}]#{}", k + 1) } else { format!("s[{w}]") },
        }));
    }

    Ok(OspContext {
        m,
        n,
        universe: u,
        g: WeightedBasis::new(u, g),
        s: WeightedBasis::new(u, s),
        h,
        g_table: OnceLock::new(),
    })
}

impl OspContext {
    /// `m(2m+1) + n(2n+1) + 2n(2m+1)`.
    pub fn expected_g_dim(&self) -> usize {
        let (m, n) = (self.m as usize, self.n as usize);
        m * (2 * m + 1) + n * (2 * n + 1) + 2 * n * (2 * m + 1)
    }

    /// The functionals `ε_1..ε_m, δ_1..δ_n`.
    pub fn functionals(&self) -> Vec<Weight> {
        (1..=self.m).map(Weight::eps).chain((1..=self.n).map(Weight::delta)).collect()
    }

    /// Structure constants of `g` in its weight basis, computed once.
    pub fn g_table(&self) -> Result<&StructureTable, OspError> {
        if let Some(t) = self.g_table.get() {
            return Ok(t);
        }
        let g = &self.g;
        let dim = g.len();
        let rows: Vec<Result<Vec<SparseVec>, OspError>> = with_pool(|| {
            (0..dim)
                .into_par_iter()
                .map(|i| {
                    (0..dim)
                        .map(|j| {
                            let c = supercommutator(&g.elements[i].matrix, &g.elements[j].matrix)?;
                            g.coords(&c).ok_or_else(|| {
                                OspError::Alg(AlgError::NotClosed {
                                    left: g.elements[i].label.clone(),
                                    right: g.elements[j].label.clone(),
                                })
                            })
                        })
                        .collect()
                })
                .collect()
        });
        let mut table = StructureTable::new(g.parities(), g.labels());
        for (i, row) in rows.into_iter().enumerate() {
            for (j, v) in row?.into_iter().enumerate() {
                table.set(i, j, v);
            }
        }
        Ok(self.g_table.get_or_init(|| table))
    }

    pub fn dim(&self, carrier: Carrier) -> usize {
        match carrier {
            Carrier::G => self.g.len(),
            Carrier::S => self.s.len(),
            Carrier::U => self.universe.dim(),
        }
    }

    pub fn parities(&self, carrier: Carrier) -> Vec<Parity> {
        match carrier {
            Carrier::G => self.g.parities(),
            Carrier::S => self.s.parities(),
            Carrier::U => (0..self.universe.dim()).map(|p| self.universe.parity_at(p)).collect(),
        }
    }

    pub fn weights(&self, carrier: Carrier) -> Vec<Weight> {
        match carrier {
            Carrier::G => self.g.weights(),
            Carrier::S => self.s.weights(),
            Carrier::U => self.universe.indices().into_iter().map(index_weight).collect(),
        }
    }

    pub fn labels(&self, carrier: Carrier) -> Vec<String> {
        match carrier {
            Carrier::G => self.g.labels(),
            Carrier::S => self.s.labels(),
            Carrier::U => self.universe.indices().into_iter().map(|ix| format!("v{ix}")).collect(),
        }
    }

    /// `ρ(x_i)` for every basis element `x_i` of `g`, as maps on the carrier's basis.
    pub fn action(&self, carrier: Carrier) -> Result<Vec<LinearMap>, OspError> {
        match carrier {
            Carrier::U => Ok(self.g.elements.iter().map(|e| LinearMap::from_super(&e.matrix)).collect()),
            Carrier::G => {
                let t = self.g_table()?;
                let d = self.g.len();
                Ok((0..d).map(|i| LinearMap::from_columns(d, (0..d).map(|j| t.get(i, j)).collect())).collect())
            }
            Carrier::S => {
                let d = self.s.len();
                self.g
                    .elements
                    .iter()
                    .map(|x| {
                        let cols = self
                            .s
                            .elements
                            .iter()
                            .map(|y| {
                                let c = supercommutator(&x.matrix, &y.matrix)?;
                                self.s.coords(&c).ok_or_else(|| OspError::NotClosed(x.label.clone()))
                            })
                            .collect::<Result<Vec<_>, _>>()?;
                        Ok(LinearMap::from_columns(d, cols))
                    })
                    .collect()
            }
        }
    }

    /// `½ str(xy)` on the basis of `g`.
    pub fn trace_form(&self, i: usize, j: usize) -> Scalar {
        let prod = self.g.elements[i].matrix.mul(&self.g.elements[j].matrix);
        prod.trace_with(true) / scalar::int(2)
    }
}

/// Simultaneous eigenspaces of the Cartan subalgebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDecomposition {
    pub carrier: Carrier,
    pub spaces: BTreeMap<Weight, Vec<usize>>,
}

impl WeightDecomposition {
    pub fn weights(&self) -> BTreeSet<Weight> {
        self.spaces.keys().cloned().collect()
    }

    pub fn multiplicity(&self, w: &Weight) -> usize {
        self.spaces.get(w).map_or(0, Vec::len)
    }

    pub fn nonzero_spaces_one_dimensional(&self) -> bool {
        self.spaces.iter().all(|(w, v)| w.is_zero() || v.len() == 1)
    }

    pub fn total_dim(&self) -> usize {
        self.spaces.values().map(Vec::len).sum()
    }
}

/// Reads each basis vector's weight off the action of `h_t`, `d_k`, failing if
/// some basis vector is not a simultaneous eigenvector.
pub fn weight_decompose(ctx: &OspContext, carrier: Carrier) -> Result<WeightDecomposition, OspError> {
    let functionals: Vec<Symbol> = (1..=ctx.m).map(Symbol::Eps).chain((1..=ctx.n).map(Symbol::Delta)).collect();
    let mut spaces: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
    for k in 0..ctx.dim(carrier) {
        let mut w = Weight::zero();
        for (h, sym) in ctx.h.iter().zip(&functionals) {
            let (image, original) = match carrier {
                Carrier::U => {
                    let v = SparseVec::unit(k);
                    (LinearMap::from_super(h).apply(&v), v)
                }
                Carrier::G => (supercommutator(h, &ctx.g.elements[k].matrix)?.flatten(), ctx.g.elements[k].matrix.flatten()),
                Carrier::S => (supercommutator(h, &ctx.s.elements[k].matrix)?.flatten(), ctx.s.elements[k].matrix.flatten()),
            };
            let label = || ctx.labels(carrier)[k].clone();
            let c = match original.iter().next() {
                Some((i, a)) => image.get(i) / a,
                None => return Err(OspError::NotEigen(label())),
            };
            if image != original.scaled(&c) {
                return Err(OspError::NotEigen(label()));
            }
            w.add_term(*sym, c);
        }
        spaces.entry(w).or_default().push(k);
    }
    Ok(WeightDecomposition { carrier, spaces })
}

fn signed_pairs(a: &Weight, b: &Weight) -> [Weight; 4] {
    [a + b, a - b, b - a, -&(a + b)]
}

/// Weights of `g`: the displayed root set `R` together with `0`.
pub fn root_set_r(m: u32, n: u32) -> BTreeSet<Weight> {
    let mut out = BTreeSet::from([Weight::zero()]);
    for r in 1..=m {
        out.insert(Weight::eps(r));
        out.insert(-&Weight::eps(r));
        for s in 1..=m {
            if r != s {
                out.extend(signed_pairs(&Weight::eps(r), &Weight::eps(s)));
            }
        }
        for p in 1..=n {
            out.extend(signed_pairs(&Weight::eps(r), &Weight::delta(p)));
        }
    }
    for p in 1..=n {
        out.insert(Weight::delta(p));
        out.insert(-&Weight::delta(p));
        for q in 1..=n {
            out.extend(signed_pairs(&Weight::delta(p), &Weight::delta(q)));
        }
    }
    out
}

/// Weights of `s`: the displayed set `Δ_s` together with `0`.
pub fn expected_s_weights(m: u32, n: u32) -> BTreeSet<Weight> {
    let mut out = BTreeSet::from([Weight::zero()]);
    for r in 1..=m {
        out.insert(Weight::eps(r));
        out.insert(-&Weight::eps(r));
        for s in 1..=m {
            out.extend(signed_pairs(&Weight::eps(r), &Weight::eps(s)));
        }
        for p in 1..=n {
            out.extend(signed_pairs(&Weight::eps(r), &Weight::delta(p)));
        }
    }
    for p in 1..=n {
        out.insert(Weight::delta(p));
        out.insert(-&Weight::delta(p));
        for q in 1..=n {
            if p != q {
                out.extend(signed_pairs(&Weight::delta(p), &Weight::delta(q)));
            }
        }
    }
    out
}

pub fn expected_u_weights(m: u32, n: u32) -> BTreeSet<Weight> {
    let mut out = BTreeSet::from([Weight::zero()]);
    for w in (1..=m).map(Weight::eps).chain((1..=n).map(Weight::delta)) {
        out.insert(-&w);
        out.insert(w);
    }
    out
}

/// `Ψ = R ∪ {±2ε_i}`.
pub fn psi(m: u32, n: u32) -> BTreeSet<Weight> {
    let mut out = root_set_r(m, n);
    for r in 1..=m {
        out.insert(Weight::eps(r).scale_int(2));
        out.insert(Weight::eps(r).scale_int(-2));
    }
    out
}

/// The form on weights with `(ε_i, ε_j) = δ_ij`, `(δ_p, δ_q) = −δ_pq`.
pub fn weight_form(m: u32, n: u32) -> SymmetricForm {
    let mut f = SymmetricForm::diagonal((1..=m).map(Symbol::Eps), &scalar::one());
    for p in 1..=n {
        f.set(Symbol::Delta(p), Symbol::Delta(p), -scalar::one());
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::supertrace;

    #[test]
    fn dimensions_at_small_ranks() {
        for (m, n, dim_g, dim_s) in [(1, 1, 12, 12), (2, 2, 40, 40), (2, 1, 23, 25)] {
            let ctx = build_context(m, n).unwrap();
            assert_eq!(ctx.g.len(), dim_g, "g at ({m},{n})");
            assert_eq!(ctx.g.len(), ctx.expected_g_dim());
            // dim s = (2m+1)(m+1) + n(2n−1) + 2n(2m+1) − 1
            let (mm, nn) = (m as usize, n as usize);
            assert_eq!(ctx.s.len(), (2 * mm + 1) * (mm + 1) + nn * (2 * nn - 1) + 2 * nn * (2 * mm + 1) - 1);
            assert_eq!(ctx.s.len(), dim_s, "s at ({m},{n})");
        }
    }

    #[test]
    fn every_basis_element_satisfies_its_condition() {
        let ctx = build_context(2, 1).unwrap();
        for e in &ctx.g.elements {
            assert!(satisfies_condition(&e.matrix, -1).unwrap(), "{}", e.label);
            assert!(supertrace(&e.matrix).is_zero());
        }
        for e in &ctx.s.elements {
            assert!(satisfies_condition(&e.matrix, 1).unwrap(), "{}", e.label);
            assert!(supertrace(&e.matrix).is_zero());
        }
    }

    #[test]
    fn weights_match_displayed_sets() {
        let ctx = build_context(2, 2).unwrap();
        let g = weight_decompose(&ctx, Carrier::G).unwrap();
        assert_eq!(g.weights(), root_set_r(2, 2));
        assert!(g.nonzero_spaces_one_dimensional());
        assert_eq!(g.multiplicity(&Weight::zero()), 4);
        assert_eq!(g.multiplicity(&Weight::eps(1).scale_int(2)), 0);
        assert_eq!(g.multiplicity(&Weight::delta(1).scale_int(2)), 1);

        let s = weight_decompose(&ctx, Carrier::S).unwrap();
        assert_eq!(s.weights(), expected_s_weights(2, 2));
        assert!(s.nonzero_spaces_one_dimensional());
        assert_eq!(s.multiplicity(&Weight::zero()), 4);
        assert_eq!(s.multiplicity(&Weight::delta(1).scale_int(2)), 0);

        let u = weight_decompose(&ctx, Carrier::U).unwrap();
        assert_eq!(u.weights(), expected_u_weights(2, 2));
        assert_eq!(u.spaces[&Weight::zero()], vec![0]);
    }

    #[test]
    fn root_count_formula() {
        for (m, n) in [(1u32, 1u32), (2, 2), (3, 1), (2, 3)] {
            let nonzero = root_set_r(m, n).len() - 1;
            let (m, n) = (m as usize, n as usize);
            assert_eq!(nonzero, 2 * m * m + 2 * n * n + 2 * n + 4 * m * n);
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let ctx = build_context(1, 1).unwrap();
        let v = SparseVec::from_dense(&(0..ctx.g.len()).map(|k| scalar::int(k as i64 - 3)).collect::<Vec<_>>());
        let x = ctx.g.combine(&v);
        assert_eq!(ctx.g.coords(&x), Some(v));
        let outside = SuperMatrix::identity(ctx.universe);
        assert_eq!(ctx.g.coords(&outside), None);
    }

    #[test]
    fn zero_rank_rejected() {
        assert!(matches!(build_context(0, 2), Err(OspError::Rank { .. })));
    }
}
