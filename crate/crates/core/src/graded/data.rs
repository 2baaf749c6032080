use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::GradedError;
use crate::exactalg::scalar::{self, Scalar};
use crate::exactalg::{sign_flip, AlgError, Coordinatizer, Eliminator, LinearMap, Parity, SparseVec, StructureTable};

/// Bilinear map on basis pairs; pairs marked undefined leave a degree window.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BilinearTable {
    entries: BTreeMap<(usize, usize), SparseVec>,
    undefined: BTreeSet<(usize, usize)>,
}

impl BilinearTable {
    pub fn set(&mut self, i: usize, j: usize, v: SparseVec) {
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn add(&mut self, i: usize, j: usize, k: usize, c: Scalar) {
        let mut v = self.entries.remove(&(i, j)).unwrap_or_default();
        v.add_term(k, c);
        self.set(i, j, v);
    }

    pub fn mark_undefined(&mut self, i: usize, j: usize) {
        self.undefined.insert((i, j));
    }

    pub fn get(&self, i: usize, j: usize) -> Result<SparseVec, AlgError> {
        if self.undefined.contains(&(i, j)) {
            return Err(AlgError::OutOfWindow);
        }
        Ok(self.entries.get(&(i, j)).cloned().unwrap_or_default())
    }

    pub fn apply(&self, x: &SparseVec, y: &SparseVec) -> Result<SparseVec, AlgError> {
        let mut out = SparseVec::new();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                out.add_scaled(&(a * b), &self.get(i, j)?);
            }
        }
        Ok(out)
    }

    fn triplets(&self) -> (Vec<(usize, usize, usize, String)>, Vec<(usize, usize)>) {
        let mut t = Vec::new();
        for (&(i, j), v) in &self.entries {
            for (k, c) in v.iter() {
                t.push((i, j, k, scalar::format(c)));
            }
        }
        (t, self.undefined.iter().copied().collect())
    }

    fn from_triplets(t: &[(usize, usize, usize, String)], undefined: &[(usize, usize)]) -> Result<Self, GradedError> {
        let mut out = BilinearTable::default();
        for (i, j, k, v) in t {
            out.add(*i, *j, *k, scalar::parse(v)?);
        }
        for &(i, j) in undefined {
            out.mark_undefined(i, j);
        }
        Ok(out)
    }
}

/// Coordinate data: an associative superalgebra `a` with superinvolution `η`,
/// an `a`-module `c` with superhermitian form `χ`, a Lie superalgebra `d`
/// acting on `b = a ⊕ c`, and a pairing `b × b → d`.
///
/// Elements of `b` are vectors with `a` in coordinates `0..dim a` and `c` after.
#[derive(Clone, Debug)]
pub struct CoordinateData {
    pub name: String,
    pub a_parity: Vec<Parity>,
    /// Degree in the `ℤ`-grading `Λ`, zero when ungraded.
    pub a_degree: Vec<i64>,
    pub a_product: BilinearTable,
    pub a_labels: Vec<String>,
    /// Column `j` is `η(a_j)`.
    pub eta: LinearMap,
    pub c_parity: Vec<Parity>,
    pub c_degree: Vec<i64>,
    pub c_labels: Vec<String>,
    /// `(a index, c index) → c`.
    pub c_action: BilinearTable,
    /// `(c, c) → a`.
    pub chi: BilinearTable,
    pub d: StructureTable,
    pub d_degree: Vec<i64>,
    /// `φ(d_t)` on `b`.
    pub phi: Vec<LinearMap>,
    /// `(b, b) → d`.
    pub pairing: BilinearTable,
    fixed: Vec<SparseVec>,
    skew: Vec<SparseVec>,
}

/// Parts of a [`CoordinateData`] before the `η`-eigenspaces are computed.
#[derive(Clone, Debug, Default)]
pub struct DataParts {
    pub name: String,
    pub a_parity: Vec<Parity>,
    pub a_degree: Vec<i64>,
    pub a_product: BilinearTable,
    /// Basis names; `a0, a1, ..` when empty.
    pub a_labels: Vec<String>,
    pub eta: Option<LinearMap>,
    pub c_parity: Vec<Parity>,
    pub c_degree: Vec<i64>,
    pub c_labels: Vec<String>,
    pub c_action: BilinearTable,
    pub chi: BilinearTable,
    pub d_parity: Vec<Parity>,
    pub d_degree: Vec<i64>,
    pub d_bracket: BilinearTable,
    pub phi: Vec<LinearMap>,
    pub pairing: BilinearTable,
}

/// Basis of `{v ∈ span(block) : η v = s v}`.
fn eigen_block(eta: &LinearMap, block: &[usize], s: &Scalar) -> Vec<SparseVec> {
    let mut rows: BTreeMap<usize, SparseVec> = BTreeMap::new();
    for (k, &i) in block.iter().enumerate() {
        let img = eta.column(i).sub(&SparseVec::term(i, s.clone()));
        for (r, a) in img.iter() {
            rows.entry(r).or_default().add_term(k, a.clone());
        }
    }
    let mut elim = Eliminator::new(block.len());
    for r in rows.values() {
        elim.push(r);
    }
    elim.nullspace().into_iter().map(|v| v.map_indices(|k| block[k])).collect()
}

impl CoordinateData {
    pub fn new(p: DataParts) -> Result<Self, GradedError> {
        let da = p.a_parity.len();
        let fill = |deg: Vec<i64>, n: usize| if deg.is_empty() { vec![0; n] } else { deg };
        let a_degree = fill(p.a_degree, da);
        let c_degree = fill(p.c_degree, p.c_parity.len());
        let d_degree = fill(p.d_degree, p.d_parity.len());
        if a_degree.len() != da || c_degree.len() != p.c_parity.len() || d_degree.len() != p.d_parity.len() {
            return Err(GradedError::Shape("degree list length".into()));
        }
        let names = |given: Vec<String>, n: usize, prefix: &str| {
            if given.is_empty() {
                Ok((0..n).map(|i| format!("{prefix}{i}")).collect())
            } else if given.len() == n {
                Ok(given)
            } else {
                Err(GradedError::Shape(format!("{prefix}: {} labels for dimension {n}", given.len())))
            }
        };
        let a_labels = names(p.a_labels, da, "a")?;
        let c_labels = names(p.c_labels, p.c_parity.len(), "c")?;
        let eta = p.eta.unwrap_or_else(|| LinearMap::identity(da));
        if eta.rows() != da || eta.cols() != da {
            return Err(GradedError::Shape(format!("eta must be {da}×{da}")));
        }
        let db = da + p.c_parity.len();
        if p.phi.len() != p.d_parity.len() || p.phi.iter().any(|f| f.rows() != db || f.cols() != db) {
            return Err(GradedError::Shape(format!("phi needs one {db}×{db} map per basis element of d")));
        }
        let mut d = StructureTable::new(p.d_parity.clone(), (0..p.d_parity.len()).map(|t| format!("d{t}")).collect());
        for i in 0..p.d_parity.len() {
            for j in 0..p.d_parity.len() {
                d.set(i, j, p.d_bracket.get(i, j)?);
            }
        }
        // Eigenvectors of η inside each (parity, degree) block, so both bases are homogeneous.
        let mut blocks: BTreeMap<(Parity, i64), Vec<usize>> = BTreeMap::new();
        for i in 0..da {
            blocks.entry((p.a_parity[i], a_degree[i])).or_default().push(i);
        }
        let (mut fixed, mut skew) = (Vec::new(), Vec::new());
        for block in blocks.values() {
            fixed.extend(eigen_block(&eta, block, &scalar::one()));
            skew.extend(eigen_block(&eta, block, &-scalar::one()));
        }
        Ok(CoordinateData {
            name: p.name,
            a_parity: p.a_parity,
            a_degree,
            a_product: p.a_product,
            a_labels,
            eta,
            c_parity: p.c_parity,
            c_degree,
            c_labels,
            c_action: p.c_action,
            chi: p.chi,
            d,
            d_degree,
            phi: p.phi,
            pairing: p.pairing,
            fixed,
            skew,
        })
    }

    pub fn dim_a(&self) -> usize {
        self.a_parity.len()
    }

    pub fn dim_c(&self) -> usize {
        self.c_parity.len()
    }

    pub fn dim_d(&self) -> usize {
        self.d.parities().len()
    }

    pub fn dim_b(&self) -> usize {
        self.dim_a() + self.dim_c()
    }

    /// Basis of the fixed points of `η` (the space paired with `g`).
    pub fn fixed(&self) -> &[SparseVec] {
        &self.fixed
    }

    /// Basis of the skew points of `η` (the space paired with `s`).
    pub fn skew(&self) -> &[SparseVec] {
        &self.skew
    }

    /// Parity of basis element `i` of `b`.
    pub fn b_parity(&self, i: usize) -> Parity {
        if i < self.dim_a() {
            self.a_parity[i]
        } else {
            self.c_parity[i - self.dim_a()]
        }
    }

    pub fn b_degree(&self, i: usize) -> i64 {
        if i < self.dim_a() {
            self.a_degree[i]
        } else {
            self.c_degree[i - self.dim_a()]
        }
    }

    pub fn a_parity_of(&self, x: &SparseVec) -> Option<Parity> {
        homogeneous(x.support().map(|i| self.a_parity[i]))
    }

    /// Parity of a homogeneous element of `c`; mixed elements read as even.
    pub fn c_parity_of(&self, x: &SparseVec) -> Parity {
        homogeneous(x.support().map(|i| self.c_parity[i])).unwrap_or(Parity::Even)
    }

    pub fn b_parity_of(&self, x: &SparseVec) -> Option<Parity> {
        homogeneous(x.support().map(|i| self.b_parity(i)))
    }

    pub fn a_mul(&self, x: &SparseVec, y: &SparseVec) -> Result<SparseVec, AlgError> {
        self.a_product.apply(x, y)
    }

    pub fn eta_of(&self, x: &SparseVec) -> SparseVec {
        self.eta.apply(x)
    }

    /// `a·c` with `a` over the basis of `a` and `c` over the basis of `c`.
    pub fn act(&self, a: &SparseVec, c: &SparseVec) -> Result<SparseVec, AlgError> {
        self.c_action.apply(a, c)
    }

    pub fn chi_of(&self, c: &SparseVec, c2: &SparseVec) -> Result<SparseVec, AlgError> {
        self.chi.apply(c, c2)
    }

    /// `xy − (−1)^{|x||y|}yx` (`flip = false`) or `xy + (−1)^{|x||y|}yx` on homogeneous elements of `a`.
    fn graded(&self, x: &SparseVec, y: &SparseVec, anti: bool) -> Result<SparseVec, GradedError> {
        let (px, py) = (self.a_parity_of(x).ok_or(AlgError::NonHomogeneous)?, self.a_parity_of(y).ok_or(AlgError::NonHomogeneous)?);
        let mut s = scalar::sign(sign_flip(px, py));
        if !anti {
            s = -s;
        }
        let mut out = self.a_mul(x, y)?;
        out.add_scaled(&s, &self.a_mul(y, x)?);
        Ok(out)
    }

    /// Supercommutator in `a`.
    pub fn a_bracket(&self, x: &SparseVec, y: &SparseVec) -> Result<SparseVec, GradedError> {
        self.graded(x, y, false)
    }

    /// `x∘y = xy + (−1)^{|x||y|}yx` in `a`.
    pub fn a_circ(&self, x: &SparseVec, y: &SparseVec) -> Result<SparseVec, GradedError> {
        self.graded(x, y, true)
    }

    fn split_b(&self, x: &SparseVec) -> (SparseVec, SparseVec) {
        let da = self.dim_a();
        (x.filtered(|i| i < da), x.filtered(|i| i >= da).map_indices(|i| i - da))
    }

    fn join_b(&self, a: &SparseVec, c: &SparseVec) -> SparseVec {
        let da = self.dim_a();
        a.plus(&c.map_indices(|i| i + da))
    }

    /// `(α+c)(α′+c′) = (αα′ + 2χ(c,c′)) + (α·c′ + (−1)^{|α′||c|} η(α′)·c)`, extended bilinearly
    /// from basis elements.
    pub fn b_product(&self, x: &SparseVec, y: &SparseVec) -> Result<SparseVec, AlgError> {
        let da = self.dim_a();
        let mut out = SparseVec::new();
        for (i, p) in x.iter() {
            for (j, q) in y.iter() {
                let coeff = p * q;
                let term = match (i < da, j < da) {
                    (true, true) => self.join_b(&self.a_product.get(i, j)?, &SparseVec::new()),
                    (true, false) => self.join_b(&SparseVec::new(), &self.c_action.get(i, j - da)?),
                    (false, true) => {
                        let s = scalar::sign(sign_flip(self.a_parity[j], self.c_parity[i - da]));
                        let eta_a = self.eta.column(j);
                        let v = self.c_action.apply(eta_a, &SparseVec::unit(i - da))?;
                        self.join_b(&SparseVec::new(), &v.scaled(&s))
                    }
                    (false, false) => self.join_b(&self.chi.get(i - da, j - da)?.scaled(&scalar::int(2)), &SparseVec::new()),
                };
                out.add_scaled(&coeff, &term);
            }
        }
        Ok(out)
    }

    fn symmetrized_chi(&self, c: &SparseVec, c2: &SparseVec, sign: i64) -> Result<SparseVec, GradedError> {
        let mut out = SparseVec::new();
        for (i, p) in c.iter() {
            for (j, q) in c2.iter() {
                let s = scalar::sign(sign_flip(self.c_parity[i], self.c_parity[j])) * scalar::int(sign);
                let mut v = self.chi.get(i, j)?;
                v.add_scaled(&s, &self.chi.get(j, i)?);
                out.add_scaled(&(p * q / scalar::int(2)), &v);
            }
        }
        Ok(out)
    }

    /// `½(χ(c,c′) + (−1)^{|c||c′|}χ(c′,c))`, checked to be fixed by `η`.
    pub fn diamond(&self, c: &SparseVec, c2: &SparseVec) -> Result<SparseVec, GradedError> {
        let v = self.symmetrized_chi(c, c2, 1)?;
        if self.eta_of(&v) != v {
            return Err(GradedError::EscapesSubspace("diamond".into()));
        }
        Ok(v)
    }

    /// `½(χ(c,c′) − (−1)^{|c||c′|}χ(c′,c))`, checked to be negated by `η`.
    pub fn heart(&self, c: &SparseVec, c2: &SparseVec) -> Result<SparseVec, GradedError> {
        let v = self.symmetrized_chi(c, c2, -1)?;
        if self.eta_of(&v) != v.neg() {
            return Err(GradedError::EscapesSubspace("heart".into()));
        }
        Ok(v)
    }

    /// `β*_{β1,β2} = [a1,a2] + [b1,b2] + 2 c1♥c2`, where `a`, `b`, `c` are the
    /// fixed, skew and module parts. The result lies in `a`.
    pub fn beta_star(&self, x: &SparseVec, y: &SparseVec) -> Result<SparseVec, GradedError> {
        let da = self.dim_a();
        let half = scalar::frac(1, 2);
        let mut out = SparseVec::new();
        for (i, p) in x.iter() {
            for (j, q) in y.iter() {
                let coeff = p * q;
                let term = match (i < da, j < da) {
                    (true, true) => {
                        let (ai, aj) = (SparseVec::unit(i), SparseVec::unit(j));
                        let (ei, ej) = (self.eta_of(&ai), self.eta_of(&aj));
                        let fixed_i = ai.plus(&ei).scaled(&half);
                        let fixed_j = aj.plus(&ej).scaled(&half);
                        let skew_i = ai.sub(&ei).scaled(&half);
                        let skew_j = aj.sub(&ej).scaled(&half);
                        self.a_bracket(&fixed_i, &fixed_j)?.plus(&self.a_bracket(&skew_i, &skew_j)?)
                    }
                    (false, false) => self.heart(&SparseVec::unit(i - da), &SparseVec::unit(j - da))?.scaled(&scalar::int(2)),
                    _ => SparseVec::new(),
                };
                out.add_scaled(&coeff, &term);
            }
        }
        Ok(out)
    }

    pub fn pair(&self, x: &SparseVec, y: &SparseVec) -> Result<SparseVec, AlgError> {
        self.pairing.apply(x, y)
    }

    /// `φ(d)β` for `d` over the basis of `d`.
    pub fn phi_apply(&self, d: &SparseVec, x: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (t, c) in d.iter() {
            out.add_scaled(c, &self.phi[t].apply(x));
        }
        out
    }

    /// Coordinates of an element of `a` in the fixed basis, if it is fixed by `η`.
    pub fn fixed_coords(&self) -> Coordinatizer {
        Coordinatizer::new(&self.fixed)
    }

    pub fn skew_coords(&self) -> Coordinatizer {
        Coordinatizer::new(&self.skew)
    }

    pub fn split_parts(&self, x: &SparseVec) -> (SparseVec, SparseVec) {
        self.split_b(x)
    }

    pub fn join_parts(&self, a: &SparseVec, c: &SparseVec) -> SparseVec {
        self.join_b(a, c)
    }
}

fn homogeneous(mut it: impl Iterator<Item = Parity>) -> Option<Parity> {
    let first = it.next().unwrap_or(Parity::Even);
    it.all(|p| p == first).then_some(first)
}

/// Builders for the desk datasets.
impl CoordinateData {
    /// `a = ℚ`, `η = id`, `c = d = 0`.
    pub fn trivial() -> Self {
        let mut prod = BilinearTable::default();
        prod.add(0, 0, 0, scalar::one());
        CoordinateData::new(DataParts {
            name: "trivial".into(),
            a_parity: vec![Parity::Even],
            a_product: prod,
            ..Default::default()
        })
        .expect("well-formed")
    }

    fn laurent_parts(window: i64) -> DataParts {
        let n = (2 * window + 1) as usize;
        let at = |k: i64| (k + window) as usize;
        let mut prod = BilinearTable::default();
        for i in -window..=window {
            for j in -window..=window {
                if (i + j).abs() <= window {
                    prod.add(at(i), at(j), at(i + j), scalar::one());
                } else {
                    prod.mark_undefined(at(i), at(j));
                }
            }
        }
        DataParts {
            name: format!("laurent(window={window})"),
            a_parity: vec![Parity::Even; n],
            a_degree: (-window..=window).collect(),
            a_product: prod,
            a_labels: (-window..=window).map(|k| format!("t^{k}")).collect(),
            ..Default::default()
        }
    }

    /// `a = ℚ[t,t⁻¹]` on the degrees `−window..=window`, `η = id`, `c = d = 0`.
    pub fn laurent(window: i64) -> Self {
        CoordinateData::new(Self::laurent_parts(window)).expect("well-formed")
    }

    /// Laurent window with `c = a` as a rank-one module and `χ(c,c′) = cc′`.
    pub fn laurent_hermitian(window: i64) -> Self {
        let mut p = Self::laurent_parts(window);
        p.name = format!("laurent-hermitian(window={window})");
        p.c_parity = p.a_parity.clone();
        p.c_degree = p.a_degree.clone();
        p.c_action = p.a_product.clone();
        p.c_labels = (-window..=window).map(|k| format!("c·t^{k}")).collect();
        p.chi = p.a_product.clone();
        CoordinateData::new(p).expect("well-formed")
    }

    /// Laurent window with a one-dimensional `d` spanned by `⟨t^i, t^j⟩ = i δ_{i+j,0}`,
    /// acting trivially on `b`.
    pub fn laurent_central(window: i64) -> Self {
        let mut p = Self::laurent_parts(window);
        p.name = format!("laurent-central(window={window})");
        let at = |k: i64| (k + window) as usize;
        for i in -window..=window {
            if i != 0 {
                p.pairing.add(at(i), at(-i), 0, scalar::int(i));
            }
        }
        p.d_parity = vec![Parity::Even];
        p.d_degree = vec![0];
        let n = p.a_parity.len();
        p.phi = vec![LinearMap::zero(n, n)];
        CoordinateData::new(p).expect("well-formed")
    }

    /// `a = ℚ e1 ⊕ ℚ e2` (orthogonal idempotents) with `η` exchanging them.
    pub fn exchange() -> Self {
        let mut prod = BilinearTable::default();
        prod.add(0, 0, 0, scalar::one());
        prod.add(1, 1, 1, scalar::one());
        let eta = LinearMap::from_entries(2, 2, [(1, 0, scalar::one()), (0, 1, scalar::one())]);
        CoordinateData::new(DataParts {
            name: "exchange".into(),
            a_parity: vec![Parity::Even; 2],
            a_product: prod,
            eta: Some(eta),
            ..Default::default()
        })
        .expect("well-formed")
    }

    /// `a = M_2(ℚ)` with `η` the transpose, `c = 0`, and `d = ℚJ` for `J = e12 − e21`
    /// acting by commutator. `⟨a,a′⟩` is `X − X^η` for `X = [a,a′]`, divided by
    /// `2(2m+1−2n)` and read as a multiple of `J`.
    pub fn matrix_transpose(m: u32, n: u32) -> Result<Self, GradedError> {
        let k = 2 * m as i64 + 1 - 2 * n as i64;
        if k == 0 {
            return Err(GradedError::Shape("2m+1−2n must be nonzero".into()));
        }
        let ij = [(1, 1), (1, 2), (2, 1), (2, 2)];
        let index = |p: (usize, usize)| ij.iter().position(|&q| q == p).expect("unit");
        let mut prod = BilinearTable::default();
        for (x, &(i, j)) in ij.iter().enumerate() {
            for (y, &(r, l)) in ij.iter().enumerate() {
                if j == r {
                    prod.add(x, y, index((i, l)), scalar::one());
                }
            }
        }
        let eta = LinearMap::from_entries(4, 4, ij.iter().enumerate().map(|(x, &(i, j))| (index((j, i)), x, scalar::one())));
        // J = e12 − e21; ad J on the basis.
        let j_mat = SparseVec::term(1, scalar::one()).sub(&SparseVec::unit(2));
        let mut ad = Vec::new();
        for x in 0..4 {
            let e = SparseVec::unit(x);
            ad.push(prod.apply(&j_mat, &e)?.sub(&prod.apply(&e, &j_mat)?));
        }
        let mut pairing = BilinearTable::default();
        for x in 0..4 {
            for y in 0..4 {
                let (ex, ey) = (SparseVec::unit(x), SparseVec::unit(y));
                let br = prod.apply(&ex, &ey)?.sub(&prod.apply(&ey, &ex)?);
                let skew = br.sub(&eta.apply(&br));
                let c = skew.get(1) / scalar::int(2 * k);
                pairing.add(x, y, 0, c);
            }
        }
        CoordinateData::new(DataParts {
            name: format!("matrix-transpose(m={m},n={n})"),
            a_parity: vec![Parity::Even; 4],
            a_product: prod,
            a_labels: vec!["e11".into(), "e12".into(), "e21".into(), "e22".into()],
            eta: Some(eta),
            d_parity: vec![Parity::Even],
            phi: vec![LinearMap::from_columns(4, ad)],
            pairing,
            ..Default::default()
        })
    }

    /// `a = M(1|1)` with `η = id`: multiplicative but not a superinvolution.
    pub fn broken_involution() -> Self {
        // Basis e11, e22 (even), e12, e21 (odd); e_ij e_kl = δ_jk e_il.
        let ij = [(1, 1), (2, 2), (1, 2), (2, 1)];
        let index = |p: (usize, usize)| ij.iter().position(|&q| q == p).expect("unit");
        let mut prod = BilinearTable::default();
        for (x, &(i, j)) in ij.iter().enumerate() {
            for (y, &(k, l)) in ij.iter().enumerate() {
                if j == k {
                    prod.add(x, y, index((i, l)), scalar::one());
                }
            }
        }
        CoordinateData::new(DataParts {
            name: "broken-involution".into(),
            a_parity: vec![Parity::Even, Parity::Even, Parity::Odd, Parity::Odd],
            a_product: prod,
            ..Default::default()
        })
        .expect("well-formed")
    }

    /// Named dataset; `m`, `n` fix the scalar `2m+1−2n` where the data depends on it.
    pub fn builtin(name: &str, m: u32, n: u32) -> Option<Self> {
        let window = |s: &str| s.parse::<i64>().ok().filter(|w| *w >= 0);
        match name {
            "trivial" => Some(Self::trivial()),
            "exchange" => Some(Self::exchange()),
            "broken-involution" => Some(Self::broken_involution()),
            "matrix-transpose" => Self::matrix_transpose(m, n).ok(),
            _ => {
                let (kind, w) = name.split_once(':')?;
                let w = window(w)?;
                match kind {
                    "laurent" => Some(Self::laurent(w)),
                    "laurent-hermitian" => Some(Self::laurent_hermitian(w)),
                    "laurent-central" => Some(Self::laurent_central(w)),
                    _ => None,
                }
            }
        }
    }
}

/// `{dim, parity, degree, product, undefined}` for `a`, `c` (product = action) and `d` (bracket).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionJson {
    pub dim: usize,
    pub parity: Vec<u8>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub degree: Vec<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
    #[serde(default)]
    pub product: Vec<(usize, usize, usize, String)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub undefined: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableJson {
    #[serde(default)]
    pub entries: Vec<(usize, usize, usize, String)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub undefined: Vec<(usize, usize)>,
}

/// On-disk coordinate data. `phi` entries are `(t, source, target, value)` on the basis of `b`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataJson {
    #[serde(default)]
    pub name: String,
    pub a: SectionJson,
    /// `(row, col, value)`; identity when omitted.
    #[serde(default)]
    pub eta: Option<Vec<(usize, usize, String)>>,
    #[serde(default)]
    pub c: SectionJson,
    #[serde(default)]
    pub chi: TableJson,
    #[serde(default)]
    pub d: SectionJson,
    #[serde(default)]
    pub phi: Vec<(usize, usize, usize, String)>,
    #[serde(default)]
    pub pairing: TableJson,
}

fn parities(bits: &[u8], dim: usize, what: &str) -> Result<Vec<Parity>, GradedError> {
    if bits.len() != dim {
        return Err(GradedError::Shape(format!("{what}: parity list has {} entries for dimension {dim}", bits.len())));
    }
    bits.iter()
        .map(|&b| match b {
            0 => Ok(Parity::Even),
            1 => Ok(Parity::Odd),
            other => Err(GradedError::Shape(format!("{what}: parity entry {other}"))),
        })
        .collect()
}

fn check_indices(t: &[(usize, usize, usize, String)], bounds: (usize, usize, usize), what: &str) -> Result<(), GradedError> {
    match t.iter().find(|(i, j, k, _)| *i >= bounds.0 || *j >= bounds.1 || *k >= bounds.2) {
        Some((i, j, k, _)) => Err(GradedError::Shape(format!("{what}: entry ({i}, {j}, {k}) out of range"))),
        None => Ok(()),
    }
}

impl CoordinateData {
    pub fn to_json(&self) -> DataJson {
        let section = |par: &[Parity], deg: &[i64], labels: &[String], t: &BilinearTable| {
            let (product, undefined) = t.triplets();
            SectionJson {
                dim: par.len(),
                parity: par.iter().map(|p| p.bit()).collect(),
                degree: if deg.iter().all(|&d| d == 0) { Vec::new() } else { deg.to_vec() },
                labels: labels.to_vec(),
                product,
                undefined,
            }
        };
        let table = |t: &BilinearTable| {
            let (entries, undefined) = t.triplets();
            TableJson { entries, undefined }
        };
        let mut d_bracket = BilinearTable::default();
        for (&(i, j), v) in self.d.nonzero_entries() {
            d_bracket.set(i, j, v.clone());
        }
        let mut phi = Vec::new();
        for (t, f) in self.phi.iter().enumerate() {
            for (r, c, v) in f.entries() {
                phi.push((t, c, r, scalar::format(v)));
            }
        }
        DataJson {
            name: self.name.clone(),
            a: section(&self.a_parity, &self.a_degree, &self.a_labels, &self.a_product),
            eta: Some(self.eta.triplets()),
            c: section(&self.c_parity, &self.c_degree, &self.c_labels, &self.c_action),
            chi: table(&self.chi),
            d: section(self.d.parities(), &self.d_degree, &[], &d_bracket),
            phi,
            pairing: table(&self.pairing),
        }
    }

    pub fn from_json(j: &DataJson) -> Result<Self, GradedError> {
        let (da, dc, dd) = (j.a.dim, j.c.dim, j.d.dim);
        let db = da + dc;
        check_indices(&j.a.product, (da, da, da), "a.product")?;
        check_indices(&j.c.product, (da, dc, dc), "c.product")?;
        check_indices(&j.chi.entries, (dc, dc, da), "chi")?;
        check_indices(&j.d.product, (dd, dd, dd), "d.product")?;
        check_indices(&j.phi, (dd, db, db), "phi")?;
        check_indices(&j.pairing.entries, (db, db, dd), "pairing")?;
        let eta = match &j.eta {
            None => None,
            Some(t) => {
                let mut entries = Vec::with_capacity(t.len());
                for (r, c, v) in t {
                    if *r >= da || *c >= da {
                        return Err(GradedError::Shape(format!("eta: entry ({r}, {c}) out of range")));
                    }
                    entries.push((*r, *c, scalar::parse(v)?));
                }
                Some(LinearMap::from_entries(da, da, entries))
            }
        };
        let mut phi_entries: Vec<Vec<(usize, usize, Scalar)>> = vec![Vec::new(); dd];
        for (t, src, dst, v) in &j.phi {
            phi_entries[*t].push((*dst, *src, scalar::parse(v)?));
        }
        CoordinateData::new(DataParts {
            name: j.name.clone(),
            a_parity: parities(&j.a.parity, da, "a")?,
            a_degree: j.a.degree.clone(),
            a_product: BilinearTable::from_triplets(&j.a.product, &j.a.undefined)?,
            a_labels: j.a.labels.clone(),
            eta,
            c_parity: parities(&j.c.parity, dc, "c")?,
            c_degree: j.c.degree.clone(),
            c_labels: j.c.labels.clone(),
            c_action: BilinearTable::from_triplets(&j.c.product, &j.c.undefined)?,
            chi: BilinearTable::from_triplets(&j.chi.entries, &j.chi.undefined)?,
            d_parity: parities(&j.d.parity, dd, "d")?,
            d_degree: j.d.degree.clone(),
            d_bracket: BilinearTable::from_triplets(&j.d.product, &j.d.undefined)?,
            phi: phi_entries.into_iter().map(|e| LinearMap::from_entries(db, db, e)).collect(),
            pairing: BilinearTable::from_triplets(&j.pairing.entries, &j.pairing.undefined)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(i: usize) -> SparseVec {
        SparseVec::unit(i)
    }

    #[test]
    fn commutative_product_is_ordinary() {
        let d = CoordinateData::laurent(2);
        // t·t⁻¹ = 1 (indices: t^k at k+2).
        assert_eq!(d.b_product(&u(3), &u(1)).unwrap(), u(2));
        assert_eq!(d.b_product(&u(4), &u(4)), Err(AlgError::OutOfWindow));
    }

    #[test]
    fn module_part_products() {
        let d = CoordinateData::laurent_hermitian(1);
        // b = a ⊕ c with a = {t⁻¹, 1, t} at 0..3 and c at 3..6.
        let c0 = u(4);
        assert_eq!(d.b_product(&c0, &c0).unwrap(), u(1).scaled(&scalar::int(2)));
        assert_eq!(d.b_product(&u(1), &c0).unwrap(), c0);
        assert_eq!(d.b_product(&c0, &u(1)).unwrap(), c0);
    }

    #[test]
    fn symmetric_form_has_zero_heart() {
        let d = CoordinateData::laurent_hermitian(1);
        for i in 0..3 {
            for j in 0..3 {
                if let Ok(h) = d.heart(&u(i), &u(j)) {
                    assert!(h.is_zero());
                }
            }
        }
        assert_eq!(d.diamond(&u(1), &u(1)).unwrap(), d.chi_of(&u(1), &u(1)).unwrap());
    }

    #[test]
    fn beta_star_on_coordinate_parts() {
        let d = CoordinateData::exchange();
        // Commutative: every bracket vanishes.
        assert!(d.beta_star(&u(0), &u(1)).unwrap().is_zero());
        let m = CoordinateData::broken_involution();
        // η = id puts everything in the fixed part: β* = [a1, a2].
        assert_eq!(m.beta_star(&u(2), &u(3)).unwrap(), m.a_bracket(&u(2), &u(3)).unwrap());
    }

    #[test]
    fn eigenspaces_of_the_exchange() {
        let d = CoordinateData::exchange();
        assert_eq!(d.fixed().len(), 1);
        assert_eq!(d.skew().len(), 1);
        assert_eq!(d.eta_of(&d.skew()[0]), d.skew()[0].neg());
    }

    #[test]
    fn named_builtins() {
        assert_eq!(CoordinateData::builtin("laurent:2", 2, 2).unwrap().dim_a(), 5);
        assert_eq!(CoordinateData::builtin("laurent-central:1", 2, 2).unwrap().dim_d(), 1);
        assert!(CoordinateData::builtin("laurent:-1", 2, 2).is_none());
    }

    #[test]
    fn json_rejects_out_of_range_entries() {
        let mut j = CoordinateData::trivial().to_json();
        j.a.product.push((0, 0, 5, "1".into()));
        assert!(matches!(CoordinateData::from_json(&j), Err(GradedError::Shape(_))));
    }
}
