use std::collections::BTreeSet;

use serde::Serialize;

use super::{verify_coordinate_axioms, CoordinateData, GradedError};
use crate::exactalg::scalar::{self, Scalar};
use crate::exactalg::{sign_flip, supercommutator, AlgError, Coordinatizer, LinearMap, Parity, SparseVec, StructureTable, SuperAlgebra, SuperMatrix, SuperVector};
use crate::osp::{bracket_uu, circ_uu, circ_xy, id_mn, index_weight, u_form, OspContext};
use crate::roots::Weight;

/// Which summand a basis element of the assembled algebra belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Sector {
    /// `g ⊗ A`
    G,
    /// `s ⊗ B`
    S,
    /// `u ⊗ c`
    U,
    /// `d`
    D,
}

/// Where a basis element comes from: `carrier` indexes the basis of `g`, `s`
/// or `u` (unused for `d`), `coordinate` indexes the fixed points, the skew
/// points, `c` or `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Origin {
    pub sector: Sector,
    pub carrier: usize,
    pub coordinate: usize,
}

/// A Lie superalgebra given by an explicit table, with a root grading (weights
/// in `ε, δ`) and a `ℤ`-grading. Pairs whose bracket leaves a degree window are
/// recorded as undefined.
#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    pub name: String,
    /// Rank of the carrier context.
    pub m: u32,
    pub n: u32,
    /// The pair `(|I₀|, |J₀|)` fixing `id_{m,n}` and `2m+1−2n`.
    pub m0: u32,
    pub n0: u32,
    table: StructureTable,
    undefined: BTreeSet<(usize, usize)>,
    origins: Vec<Origin>,
    weights: Vec<Weight>,
    degrees: Vec<i64>,
}

impl GradedAlgebra {
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        name: String,
        (m, n): (u32, u32),
        (m0, n0): (u32, u32),
        table: StructureTable,
        undefined: BTreeSet<(usize, usize)>,
        origins: Vec<Origin>,
        weights: Vec<Weight>,
        degrees: Vec<i64>,
    ) -> Self {
        let d = table.parities().len();
        assert!(origins.len() == d && weights.len() == d && degrees.len() == d, "grading data must cover the basis");
        GradedAlgebra {
            name,
            m,
            n,
            m0,
            n0,
            table,
            undefined,
            origins,
            weights,
            degrees,
        }
    }

    pub fn table(&self) -> &StructureTable {
        &self.table
    }

    pub fn undefined(&self) -> &BTreeSet<(usize, usize)> {
        &self.undefined
    }

    pub fn origins(&self) -> &[Origin] {
        &self.origins
    }

    pub fn sector(&self, i: usize) -> Sector {
        self.origins[i].sector
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn sector_indices(&self, s: Sector) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.origins[i].sector == s).collect()
    }

    /// Basis elements of weight `w`, optionally restricted to one degree.
    pub fn weight_space(&self, w: &Weight, degree: Option<i64>) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| &self.weights[i] == w && degree.is_none_or(|k| self.degrees[i] == k))
            .collect()
    }

    /// Overwrites one structure constant; used to exercise the Jacobi check.
    pub fn set_bracket(&mut self, i: usize, j: usize, v: SparseVec) {
        self.undefined.remove(&(i, j));
        self.table.set(i, j, v);
    }
}

impl SuperAlgebra for GradedAlgebra {
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

/// Products among `g`, `s`, `u` needed by the bracket rows, in weight-basis coordinates.
struct OspSide {
    ng: usize,
    ns: usize,
    nu: usize,
    g_br: Vec<SparseVec>,
    gg_circ: Vec<SparseVec>,
    gg_str: Vec<Scalar>,
    gs_circ: Vec<SparseVec>,
    gs_br: Vec<SparseVec>,
    ss_br: Vec<SparseVec>,
    ss_circ: Vec<SparseVec>,
    ss_str: Vec<Scalar>,
    g_on_u: Vec<LinearMap>,
    s_on_u: Vec<LinearMap>,
    uu_circ: Vec<SparseVec>,
    uu_br: Vec<SparseVec>,
    uu_form: Vec<Scalar>,
    /// Terms with `id_{m,n}`, present only when the grading pair is smaller than the context.
    general: Option<IdTerms>,
}

struct IdTerms {
    /// `[id, x]` in `s` and `id∘x` in `g`, for `x ∈ g`.
    g_br: Vec<SparseVec>,
    g_circ: Vec<SparseVec>,
    /// `[id, e]` in `g`, `id∘e` in `s` and `str(id e)`, for `e ∈ s`.
    s_br: Vec<SparseVec>,
    s_circ: Vec<SparseVec>,
    s_str: Vec<Scalar>,
    on_u: LinearMap,
}

fn str_prod(x: &SuperMatrix, y: &SuperMatrix) -> Scalar {
    x.mul(y).trace_with(true)
}

impl OspSide {
    fn new(ctx: &OspContext, m0: u32, n0: u32) -> Result<Self, GradedError> {
        let in_g = |x: &SuperMatrix, what: &str| ctx.g.coords(x).ok_or_else(|| GradedError::EscapesSubspace(format!("{what} (expected in g)")));
        let in_s = |x: &SuperMatrix, what: &str| ctx.s.coords(x).ok_or_else(|| GradedError::EscapesSubspace(format!("{what} (expected in s)")));
        let gm: Vec<&SuperMatrix> = ctx.g.elements.iter().map(|e| &e.matrix).collect();
        let sm: Vec<&SuperMatrix> = ctx.s.elements.iter().map(|e| &e.matrix).collect();
        let u = ctx.universe;
        let uv: Vec<SuperVector> = (0..u.dim()).map(|p| SuperVector::basis(u, u.index_at(p))).collect();
        let (ng, ns, nu) = (gm.len(), sm.len(), uv.len());

        let table = ctx.g_table()?;
        let mut side = OspSide {
            ng,
            ns,
            nu,
            g_br: Vec::with_capacity(ng * ng),
            gg_circ: Vec::with_capacity(ng * ng),
            gg_str: Vec::with_capacity(ng * ng),
            gs_circ: Vec::with_capacity(ng * ns),
            gs_br: Vec::with_capacity(ng * ns),
            ss_br: Vec::with_capacity(ns * ns),
            ss_circ: Vec::with_capacity(ns * ns),
            ss_str: Vec::with_capacity(ns * ns),
            g_on_u: gm.iter().map(|x| LinearMap::from_super(x)).collect(),
            s_on_u: sm.iter().map(|x| LinearMap::from_super(x)).collect(),
            uu_circ: Vec::with_capacity(nu * nu),
            uu_br: Vec::with_capacity(nu * nu),
            uu_form: Vec::with_capacity(nu * nu),
            general: None,
        };
        for (i, x) in gm.iter().enumerate() {
            for (j, y) in gm.iter().enumerate() {
                side.g_br.push(table.get(i, j));
                side.gg_circ.push(in_s(&circ_xy(ctx, x, y, m0, n0)?, "x∘y")?);
                side.gg_str.push(str_prod(x, y));
            }
            for e in &sm {
                side.gs_circ.push(in_g(&circ_xy(ctx, x, e, m0, n0)?, "x∘e")?);
                side.gs_br.push(in_s(&supercommutator(x, e)?, "[x,e]")?);
            }
        }
        for e in &sm {
            for f in &sm {
                side.ss_br.push(in_g(&supercommutator(e, f)?, "[e,f]")?);
                side.ss_circ.push(in_s(&circ_xy(ctx, e, f, m0, n0)?, "e∘f")?);
                side.ss_str.push(str_prod(e, f));
            }
        }
        for a in &uv {
            for b in &uv {
                side.uu_circ.push(in_g(&circ_uu(ctx, a, b)?, "u∘v")?);
                side.uu_br.push(in_s(&bracket_uu(ctx, a, b, m0, n0)?, "[u,v]")?);
                side.uu_form.push(u_form(a, b));
            }
        }
        if (m0, n0) != (ctx.m, ctx.n) {
            let id = id_mn(ctx, m0, n0)?;
            let mut t = IdTerms {
                g_br: Vec::new(),
                g_circ: Vec::new(),
                s_br: Vec::new(),
                s_circ: Vec::new(),
                s_str: Vec::new(),
                on_u: LinearMap::from_super(&id),
            };
            for x in &gm {
                t.g_br.push(in_s(&supercommutator(&id, x)?, "[id,x]")?);
                t.g_circ.push(in_g(&circ_xy(ctx, &id, x, m0, n0)?, "id∘x")?);
            }
            for e in &sm {
                t.s_br.push(in_g(&supercommutator(&id, e)?, "[id,e]")?);
                t.s_circ.push(in_s(&circ_xy(ctx, &id, e, m0, n0)?, "id∘e")?);
                t.s_str.push(str_prod(&id, e));
            }
            side.general = Some(t);
        }
        Ok(side)
    }
}

#[derive(Clone, Copy, Debug)]
enum Slot {
    G(usize, usize),
    S(usize, usize),
    U(usize, usize),
    D(usize),
}

impl Slot {
    fn sector(self) -> Sector {
        match self {
            Slot::G(..) => Sector::G,
            Slot::S(..) => Sector::S,
            Slot::U(..) => Sector::U,
            Slot::D(_) => Sector::D,
        }
    }
}

struct Assembler<'a> {
    ctx: &'a OspContext,
    data: &'a CoordinateData,
    osp: OspSide,
    fixed: Coordinatizer,
    skew: Coordinatizer,
    /// `2m+1−2n` for the grading pair.
    den: Scalar,
    /// `d_t = Σ coeff ⟨β_i, β_j⟩`, used by the general action rows.
    preimages: Vec<Vec<(usize, usize, Scalar)>>,
    nf: usize,
    nk: usize,
    nc: usize,
    slots: Vec<Slot>,
}

impl<'a> Assembler<'a> {
    fn index_g(&self, x: usize, k: usize) -> usize {
        x * self.nf + k
    }

    fn index_s(&self, e: usize, k: usize) -> usize {
        self.osp.ng * self.nf + e * self.nk + k
    }

    fn index_u(&self, u: usize, c: usize) -> usize {
        self.osp.ng * self.nf + self.osp.ns * self.nk + u * self.nc + c
    }

    fn index_d(&self, t: usize) -> usize {
        self.osp.ng * self.nf + self.osp.ns * self.nk + self.osp.nu * self.nc + t
    }

    fn parity(&self, s: Slot) -> Parity {
        let (outer, inner) = match s {
            Slot::G(x, k) => (self.ctx.g.elements[x].parity, self.coord_parity(&self.data.fixed()[k])),
            Slot::S(e, k) => (self.ctx.s.elements[e].parity, self.coord_parity(&self.data.skew()[k])),
            Slot::U(u, c) => (self.ctx.universe.parity_at(u), self.data.c_parity[c]),
            Slot::D(t) => return self.data.d.parities()[t],
        };
        Parity::from_bit(outer.is_odd() ^ inner.is_odd())
    }

    fn coord_parity(&self, a: &SparseVec) -> Parity {
        self.data.a_parity_of(a).expect("eigenbases are homogeneous")
    }

    fn put_g(&self, out: &mut SparseVec, g: &SparseVec, a: &SparseVec, coeff: &Scalar) -> Result<(), GradedError> {
        if g.is_zero() || a.is_zero() || coeff == &scalar::zero() {
            return Ok(());
        }
        let ca = self.fixed.coords(a).ok_or_else(|| GradedError::EscapesSubspace("coefficient of a g-term".into()))?;
        for (x, cx) in g.iter() {
            for (k, ck) in ca.iter() {
                out.add_term(self.index_g(x, k), coeff * cx * ck);
            }
        }
        Ok(())
    }

    fn put_s(&self, out: &mut SparseVec, s: &SparseVec, b: &SparseVec, coeff: &Scalar) -> Result<(), GradedError> {
        if s.is_zero() || b.is_zero() || coeff == &scalar::zero() {
            return Ok(());
        }
        let cb = self.skew.coords(b).ok_or_else(|| GradedError::EscapesSubspace("coefficient of an s-term".into()))?;
        for (e, ce) in s.iter() {
            for (k, ck) in cb.iter() {
                out.add_term(self.index_s(e, k), coeff * ce * ck);
            }
        }
        Ok(())
    }

    fn put_u(&self, out: &mut SparseVec, u: &SparseVec, c: &SparseVec, coeff: &Scalar) {
        for (p, cp) in u.iter() {
            for (q, cq) in c.iter() {
                out.add_term(self.index_u(p, q), coeff * cp * cq);
            }
        }
    }

    fn put_d(&self, out: &mut SparseVec, d: &SparseVec, coeff: &Scalar) {
        for (t, c) in d.iter() {
            out.add_term(self.index_d(t), coeff * c);
        }
    }

    /// `c` basis element as an element of `b`.
    fn c_in_b(&self, c: usize) -> SparseVec {
        SparseVec::unit(self.data.dim_a() + c)
    }

    fn half(&self) -> Scalar {
        scalar::frac(1, 2)
    }

    fn bracket(&self, p: Slot, q: Slot) -> Result<SparseVec, GradedError> {
        // d-action rows are written with d on the left.
        let d_right = q.sector() == Sector::D && p.sector() != Sector::D;
        if d_right || (p.sector() > q.sector() && p.sector() != Sector::D) {
            let v = self.bracket(q, p)?;
            let s = -scalar::sign(sign_flip(self.parity(p), self.parity(q)));
            return Ok(v.scaled(&s));
        }
        let data = self.data;
        let o = &self.osp;
        let half = self.half();
        let mut out = SparseVec::new();
        match (p, q) {
            (Slot::G(x, k), Slot::G(y, l)) => {
                let (a, a2) = (&data.fixed()[k], &data.fixed()[l]);
                let sign = scalar::sign(sign_flip(self.coord_parity(a), self.ctx.g.elements[y].parity));
                let ij = x * o.ng + y;
                self.put_g(&mut out, &o.g_br[ij], &data.a_circ(a, a2)?, &(&sign * &half))?;
                self.put_s(&mut out, &o.gg_circ[ij], &data.a_bracket(a, a2)?, &(&sign * &half))?;
                if o.gg_str[ij] != scalar::zero() {
                    self.put_d(&mut out, &data.pair(a, a2)?, &(&sign * &o.gg_str[ij]));
                }
            }
            (Slot::G(x, k), Slot::S(e, l)) => {
                let (a, b) = (&data.fixed()[k], &data.skew()[l]);
                let sign = scalar::sign(sign_flip(self.coord_parity(a), self.ctx.s.elements[e].parity));
                let ij = x * o.ns + e;
                self.put_g(&mut out, &o.gs_circ[ij], &data.a_bracket(a, b)?, &(&sign * &half))?;
                self.put_s(&mut out, &o.gs_br[ij], &data.a_circ(a, b)?, &(&sign * &half))?;
            }
            (Slot::S(e, k), Slot::S(f, l)) => {
                let (b, b2) = (&data.skew()[k], &data.skew()[l]);
                let sign = scalar::sign(sign_flip(self.coord_parity(b), self.ctx.s.elements[f].parity));
                let ij = e * o.ns + f;
                self.put_g(&mut out, &o.ss_br[ij], &data.a_circ(b, b2)?, &(&sign * &half))?;
                self.put_s(&mut out, &o.ss_circ[ij], &data.a_bracket(b, b2)?, &(&sign * &half))?;
                if o.ss_str[ij] != scalar::zero() {
                    self.put_d(&mut out, &data.pair(b, b2)?, &(&sign * &o.ss_str[ij]));
                }
            }
            (Slot::G(x, k), Slot::U(u, c)) | (Slot::S(x, k), Slot::U(u, c)) => {
                let (coord, rho) = match p {
                    Slot::G(..) => (&data.fixed()[k], &o.g_on_u[x]),
                    _ => (&data.skew()[k], &o.s_on_u[x]),
                };
                let sign = scalar::sign(sign_flip(self.coord_parity(coord), self.ctx.universe.parity_at(u)));
                let ac = data.act(coord, &SparseVec::unit(c))?;
                self.put_u(&mut out, rho.column(u), &ac, &sign);
            }
            (Slot::U(u, c), Slot::U(v, c2)) => {
                let sign = scalar::sign(sign_flip(data.c_parity[c], self.ctx.universe.parity_at(v)));
                let (cu, cv) = (SparseVec::unit(c), SparseVec::unit(c2));
                let ij = u * o.nu + v;
                self.put_g(&mut out, &o.uu_circ[ij], &data.diamond(&cu, &cv)?, &sign)?;
                self.put_s(&mut out, &o.uu_br[ij], &data.heart(&cu, &cv)?, &sign)?;
                if o.uu_form[ij] != scalar::zero() {
                    self.put_d(&mut out, &data.pair(&self.c_in_b(c), &self.c_in_b(c2))?, &(&sign * &o.uu_form[ij]));
                }
            }
            (Slot::D(t), Slot::D(t2)) => self.put_d(&mut out, &data.d.get(t, t2), &scalar::one()),
            (Slot::D(t), other) => match &o.general {
                None => self.d_action_remark(&mut out, t, other)?,
                Some(id) => {
                    for (i, j, coeff) in &self.preimages[t] {
                        self.d_action_general(&mut out, id, *i, *j, coeff, other)?;
                    }
                }
            },
            _ => unreachable!("slots are ordered by sector"),
        }
        Ok(out)
    }

    /// `[d, x⊗a] = (−1)^{|d||x|} x⊗φ(d)a`, and likewise on `s⊗B`, `u⊗c`.
    fn d_action_remark(&self, out: &mut SparseVec, t: usize, q: Slot) -> Result<(), GradedError> {
        let data = self.data;
        let dt = SparseVec::unit(t);
        let pd = data.d.parities()[t];
        let da = data.dim_a();
        match q {
            Slot::G(x, k) => {
                let img = data.phi_apply(&dt, &data.fixed()[k]);
                if img.support().any(|i| i >= da) {
                    return Err(GradedError::EscapesSubspace("φ(d) on A".into()));
                }
                let sign = scalar::sign(sign_flip(pd, self.ctx.g.elements[x].parity));
                self.put_g(out, &SparseVec::unit(x), &img, &sign)
            }
            Slot::S(e, k) => {
                let img = data.phi_apply(&dt, &data.skew()[k]);
                if img.support().any(|i| i >= da) {
                    return Err(GradedError::EscapesSubspace("φ(d) on B".into()));
                }
                let sign = scalar::sign(sign_flip(pd, self.ctx.s.elements[e].parity));
                self.put_s(out, &SparseVec::unit(e), &img, &sign)
            }
            Slot::U(u, c) => {
                let img = data.phi_apply(&dt, &self.c_in_b(c));
                if img.support().any(|i| i < da) {
                    return Err(GradedError::EscapesSubspace("φ(d) on c".into()));
                }
                let sign = scalar::sign(sign_flip(pd, self.ctx.universe.parity_at(u)));
                self.put_u(out, &SparseVec::unit(u), &img.map_indices(|i| i - da), &sign);
                Ok(())
            }
            Slot::D(_) => unreachable!(),
        }
    }

    /// The action rows of `⟨β1, β2⟩` with `id_{m,n}` terms, for basis elements `β1, β2` of `b`.
    fn d_action_general(&self, out: &mut SparseVec, id: &IdTerms, i: usize, j: usize, coeff: &Scalar, q: Slot) -> Result<(), GradedError> {
        let data = self.data;
        let (b1, b2) = (SparseVec::unit(i), SparseVec::unit(j));
        let pb = Parity::from_bit(data.b_parity(i).is_odd() ^ data.b_parity(j).is_odd());
        let star = data.beta_star(&b1, &b2)?;
        let two_den = &self.den * scalar::int(2);
        match q {
            Slot::G(x, k) => {
                let a = &data.fixed()[k];
                let sign = scalar::sign(sign_flip(pb, self.ctx.g.elements[x].parity));
                let c = coeff * &sign / &two_den;
                self.put_s(out, &id.g_br[x], &data.a_circ(&star, a)?, &c)?;
                self.put_g(out, &id.g_circ[x], &data.a_bracket(&star, a)?, &c)?;
            }
            Slot::S(e, k) => {
                let b = &data.skew()[k];
                let sign = scalar::sign(sign_flip(pb, self.ctx.s.elements[e].parity));
                let c = coeff * &sign / &two_den;
                self.put_g(out, &id.s_br[e], &data.a_circ(&star, b)?, &c)?;
                self.put_s(out, &id.s_circ[e], &data.a_bracket(&star, b)?, &c)?;
                if id.s_str[e] != scalar::zero() {
                    // ⟨[b1, b2], b⟩ with b1, b2 the skew parts of β1, β2.
                    let skew_part = |v: &SparseVec| {
                        let (a, _) = data.split_parts(v);
                        a.sub(&data.eta_of(&a)).scaled(&scalar::frac(1, 2))
                    };
                    let br = data.a_bracket(&skew_part(&b1), &skew_part(&b2))?;
                    let c = -(coeff * &id.s_str[e] / &self.den);
                    self.put_d(out, &data.pair(&br, b)?, &c);
                }
            }
            Slot::U(u, c) => {
                let sign = scalar::sign(sign_flip(pb, self.ctx.universe.parity_at(u)));
                let cv = SparseVec::unit(c);
                let first = data.act(&star, &cv)?;
                self.put_u(out, id.on_u.column(u), &first, &(coeff * &sign / &self.den));
                let (_, c1) = data.split_parts(&b1);
                let (_, c2) = data.split_parts(&b2);
                let pc = data.c_parity[c];
                let (p1, p2) = (data.c_parity_of(&c1), data.c_parity_of(&c2));
                let mut rest = SparseVec::new();
                if !c1.is_zero() && !c2.is_zero() {
                    let s1 = scalar::sign(sign_flip(p1, p2) ^ sign_flip(p1, pc));
                    rest.add_scaled(&s1, &data.act(&data.eta_of(&data.chi_of(&c2, &cv)?), &c1)?);
                    let s2 = scalar::sign(sign_flip(p2, pc));
                    rest.add_scaled(&-s2, &data.act(&data.eta_of(&data.chi_of(&c1, &cv)?), &c2)?);
                }
                self.put_u(out, &SparseVec::unit(u), &rest, &(coeff * &sign));
            }
            Slot::D(_) => unreachable!(),
        }
        Ok(())
    }
}

fn combo_label(v: &SparseVec, labels: &[String]) -> String {
    let terms: Vec<String> = v
        .iter()
        .map(|(i, c)| {
            if c == &scalar::one() {
                labels[i].clone()
            } else if c == &-scalar::one() {
                format!("-{}", labels[i])
            } else {
                format!("{}*{}", scalar::format(c), labels[i])
            }
        })
        .collect();
    if terms.len() == 1 {
        terms[0].clone()
    } else {
        format!("({})", terms.join("+"))
    }
}

/// `build_graded_with(ctx, data, ctx.m, ctx.n)`.
pub fn build_graded(ctx: &OspContext, data: &CoordinateData) -> Result<GradedAlgebra, GradedError> {
    build_graded_with(ctx, data, ctx.m, ctx.n)
}

/// Assembles `(g⊗A) ⊕ (s⊗B) ⊕ (u⊗c) ⊕ d` over the carrier `ctx`, with `id_{m0,n0}`
/// and `2m0+1−2n0` in the bracket rows. When `(m0, n0)` is the rank of `ctx` the
/// action of `d` is `φ`; otherwise it is given through preimages under the pairing.
pub fn build_graded_with(ctx: &OspContext, data: &CoordinateData, m0: u32, n0: u32) -> Result<GradedAlgebra, GradedError> {
    if m0 > ctx.m || n0 > ctx.n || m0 == 0 {
        return Err(GradedError::GradingPair { m0, n0, m: ctx.m, n: ctx.n });
    }
    let den = scalar::int(2 * m0 as i64 + 1 - 2 * n0 as i64);
    if den == scalar::zero() {
        return Err(GradedError::Degenerate { m: m0, n: n0 });
    }
    let report = verify_coordinate_axioms(data, m0, n0)?;
    if !report.passed() {
        return Err(GradedError::Axioms(report.failures()));
    }
    if data.fixed().len() + data.skew().len() != data.dim_a() {
        return Err(GradedError::Shape("a is not the sum of the fixed and skew points of η".into()));
    }
    let osp = OspSide::new(ctx, m0, n0)?;
    let preimages = if osp.general.is_some() { pairing_preimages(data)? } else { Vec::new() };
    let asm = Assembler {
        ctx,
        data,
        fixed: Coordinatizer::new(data.fixed()),
        skew: Coordinatizer::new(data.skew()),
        den,
        preimages,
        nf: data.fixed().len(),
        nk: data.skew().len(),
        nc: data.dim_c(),
        slots: Vec::new(),
        osp,
    };

    let mut slots = Vec::new();
    let mut labels = Vec::new();
    let mut origins = Vec::new();
    let mut weights = Vec::new();
    let mut degrees = Vec::new();
    let u_weights = ctx.weights(crate::osp::Carrier::U);
    let u_labels = ctx.labels(crate::osp::Carrier::U);
    let degree_of = |v: &SparseVec| v.support().next().map_or(0, |i| data.b_degree(i));
    for (x, el) in ctx.g.elements.iter().enumerate() {
        for (k, a) in data.fixed().iter().enumerate() {
            slots.push(Slot::G(x, k));
            labels.push(format!("{}⊗{}", el.label, combo_label(a, &data.a_labels)));
            origins.push(Origin { sector: Sector::G, carrier: x, coordinate: k });
            weights.push(el.weight.clone());
            degrees.push(degree_of(a));
        }
    }
    for (e, el) in ctx.s.elements.iter().enumerate() {
        for (k, b) in data.skew().iter().enumerate() {
            slots.push(Slot::S(e, k));
            labels.push(format!("{}⊗{}", el.label, combo_label(b, &data.a_labels)));
            origins.push(Origin { sector: Sector::S, carrier: e, coordinate: k });
            weights.push(el.weight.clone());
            degrees.push(degree_of(b));
        }
    }
    for u in 0..ctx.universe.dim() {
        for c in 0..data.dim_c() {
            slots.push(Slot::U(u, c));
            labels.push(format!("{}⊗{}", u_labels[u], data.c_labels[c]));
            origins.push(Origin { sector: Sector::U, carrier: u, coordinate: c });
            weights.push(u_weights[u].clone());
            debug_assert_eq!(u_weights[u], index_weight(ctx.universe.index_at(u)));
            degrees.push(data.c_degree[c]);
        }
    }
    for t in 0..data.dim_d() {
        slots.push(Slot::D(t));
        labels.push(data.d.labels()[t].clone());
        origins.push(Origin { sector: Sector::D, carrier: 0, coordinate: t });
        weights.push(Weight::zero());
        degrees.push(data.d_degree[t]);
    }
    let asm = Assembler { slots, ..asm };
    debug_assert_eq!(asm.slots.last().map(|&s| match s {
        Slot::D(t) => asm.index_d(t),
        Slot::U(u, c) => asm.index_u(u, c),
        Slot::S(e, k) => asm.index_s(e, k),
        Slot::G(x, k) => asm.index_g(x, k),
    }), asm.slots.len().checked_sub(1));

    let parities: Vec<Parity> = asm.slots.iter().map(|&s| asm.parity(s)).collect();
    let mut table = StructureTable::new(parities.clone(), labels);
    let mut undefined = BTreeSet::new();
    for (i, &p) in asm.slots.iter().enumerate() {
        for (j, &q) in asm.slots.iter().enumerate() {
            match asm.bracket(p, q) {
                Ok(v) => {
                    let expected = Parity::from_bit(parities[i].is_odd() ^ parities[j].is_odd());
                    if v.support().any(|k| parities[k] != expected) {
                        return Err(GradedError::Parity(format!("[{}, {}]", table.labels()[i], table.labels()[j])));
                    }
                    table.set(i, j, v);
                }
                Err(GradedError::Alg(AlgError::OutOfWindow)) => {
                    undefined.insert((i, j));
                }
                Err(e) => return Err(e),
            }
        }
    }
    let suffix = if (m0, n0) == (ctx.m, ctx.n) { String::new() } else { format!(" graded by ({m0},{n0})") };
    Ok(GradedAlgebra::from_parts(
        format!("L[{}] over osp({}|{}){suffix}", data.name, 2 * ctx.m + 1, 2 * ctx.n),
        (ctx.m, ctx.n),
        (m0, n0),
        table,
        undefined,
        origins,
        weights,
        degrees,
    ))
}

/// For each basis element `d_t`, coefficients of basis pairs `(β_i, β_j)` with `Σ c⟨β_i, β_j⟩ = d_t`.
fn pairing_preimages(data: &CoordinateData) -> Result<Vec<Vec<(usize, usize, Scalar)>>, GradedError> {
    let db = data.dim_b();
    let mut pairs = Vec::new();
    let mut images = Vec::new();
    for i in 0..db {
        for j in 0..db {
            if let Ok(v) = data.pairing.get(i, j) {
                if !v.is_zero() {
                    pairs.push((i, j));
                    images.push(v);
                }
            }
        }
    }
    let coords = Coordinatizer::new(&images);
    (0..data.dim_d())
        .map(|t| {
            let c = coords.coords(&SparseVec::unit(t)).ok_or_else(|| GradedError::Axioms(vec!["pairing is not surjective".into()]))?;
            Ok(c.iter().map(|(k, v)| (pairs[k].0, pairs[k].1, v.clone())).collect())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{check_super_antisymmetry, check_super_jacobi, Scope};
    use crate::osp::build_context;

    #[test]
    fn trivial_data_reproduces_g() {
        let ctx = build_context(2, 2).unwrap();
        let l = build_graded(&ctx, &CoordinateData::trivial()).unwrap();
        let g = ctx.g_table().unwrap();
        assert_eq!(l.dim(), ctx.g.len());
        for i in 0..l.dim() {
            for j in 0..l.dim() {
                assert_eq!(l.bracket_basis(i, j).unwrap(), g.get(i, j));
            }
        }
    }

    #[test]
    fn loop_rows_shift_degrees() {
        let ctx = build_context(1, 1).unwrap();
        let data = CoordinateData::laurent(2);
        let l = build_graded(&ctx, &data).unwrap();
        let g = ctx.g_table().unwrap();
        // [x⊗t^i, y⊗t^j] = [x,y]⊗t^{i+j}; the basis is x-major, degree-minor.
        let idx = |x: usize, k: i64| x * 5 + (k + 2) as usize;
        for x in 0..ctx.g.len() {
            for y in 0..ctx.g.len() {
                let want = g.get(x, y).map_indices(|z| idx(z, 1));
                assert_eq!(l.bracket_basis(idx(x, 1), idx(y, 0)).unwrap(), want);
            }
        }
        assert_eq!(l.bracket_basis(idx(0, 2), idx(0, 1)), Err(AlgError::OutOfWindow));
    }

    #[test]
    fn exchange_data_gives_a_special_linear_algebra() {
        // g ⊗ ℚ1 ⊕ s ⊗ ℚ(e1 − e2): dimension (2m+1+2n)² − 1.
        let ctx = build_context(1, 1).unwrap();
        let l = build_graded(&ctx, &CoordinateData::exchange()).unwrap();
        assert_eq!(l.dim(), 24);
        assert_eq!(l.sector_indices(Sector::S).len(), ctx.s.len());
        assert_eq!(check_super_antisymmetry(&l, &(0..l.dim()).collect::<Vec<_>>()).unwrap(), None);
        let r = check_super_jacobi(&l, None, Scope::Exhaustive, 0).unwrap();
        assert!(r.passed(), "{:?}", r.violation);
    }

    #[test]
    fn matrix_data_matches_a_larger_orthosymplectic_dimension() {
        let ctx = build_context(1, 1).unwrap();
        let data = CoordinateData::matrix_transpose(1, 1).unwrap();
        let l = build_graded(&ctx, &data).unwrap();
        // dim osp(6|4) = 15 + 10 + 24.
        assert_eq!(l.dim(), 49);
        let r = check_super_jacobi(&l, None, Scope::Exhaustive, 0).unwrap();
        assert!(r.passed(), "{:?}", r.violation);
    }

    #[test]
    fn hermitian_module_sector_is_closed() {
        let ctx = build_context(1, 1).unwrap();
        let l = build_graded(&ctx, &CoordinateData::laurent_hermitian(1)).unwrap();
        let u = l.sector_indices(Sector::U);
        for &i in &u {
            for &j in &u {
                if let Ok(v) = l.bracket_basis(i, j) {
                    assert!(v.support().all(|k| matches!(l.sector(k), Sector::G | Sector::D)));
                }
            }
        }
        let r = check_super_jacobi(&l, None, Scope::Sampled(20_000), 0).unwrap();
        assert!(r.passed(), "{:?}", r.violation);
    }

    #[test]
    fn corrupted_constant_breaks_jacobi() {
        let ctx = build_context(1, 1).unwrap();
        let mut l = build_graded(&ctx, &CoordinateData::trivial()).unwrap();
        let v = l.bracket_basis(0, 1).unwrap();
        l.set_bracket(0, 1, v.plus(&SparseVec::unit(0)));
        let r = check_super_jacobi(&l, None, Scope::Exhaustive, 0).unwrap();
        assert!(r.violation.is_some());
    }

    #[test]
    fn broken_involution_is_refused() {
        let ctx = build_context(1, 1).unwrap();
        assert!(matches!(build_graded(&ctx, &CoordinateData::broken_involution()), Err(GradedError::Axioms(_))));
    }

    #[test]
    fn grading_pair_must_fit() {
        let ctx = build_context(1, 1).unwrap();
        assert!(matches!(build_graded_with(&ctx, &CoordinateData::trivial(), 2, 1), Err(GradedError::GradingPair { .. })));
    }
}
