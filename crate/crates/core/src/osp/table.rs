use num_traits::{One, Zero};
use serde::Serialize;

use super::context::OspContext;
use crate::exactalg::scalar::{self, Scalar};
use crate::exactalg::{Coordinatizer, SuperIndex, SuperMatrix};
use crate::roots::Weight;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Slot {
    Zero,
    R,
    RBar,
    S,
    SBar,
    P,
    PBar,
    Q,
    QBar,
}

/// One printed entry: `(𝔞_γ)^α = span(Σ sign·γ^k·e_{j,k})`, optionally gated by `δ_{γ,gate}`.
struct PrintedRow {
    name: &'static str,
    /// Coefficients of `ε_r, ε_s, δ_p, δ_q`.
    weight: [i64; 4],
    gate: Option<i64>,
    terms: &'static [(i64, bool, Slot, Slot)],
}

use Slot::*;

const ROWS: &[PrintedRow] = &[
    PrintedRow { name: "e_r", weight: [1, 0, 0, 0], gate: None, terms: &[(1, false, R, Zero), (1, true, Zero, RBar)] },
    PrintedRow { name: "-e_r", weight: [-1, 0, 0, 0], gate: None, terms: &[(1, false, RBar, Zero), (1, true, Zero, R)] },
    PrintedRow { name: "e_r+e_s", weight: [1, 1, 0, 0], gate: None, terms: &[(1, false, R, SBar), (1, true, S, RBar)] },
    PrintedRow { name: "-e_r-e_s", weight: [-1, -1, 0, 0], gate: None, terms: &[(1, false, RBar, S), (1, true, SBar, R)] },
    PrintedRow { name: "e_r-e_s", weight: [1, -1, 0, 0], gate: None, terms: &[(1, false, R, S), (1, true, SBar, RBar)] },
    PrintedRow { name: "2e_r", weight: [2, 0, 0, 0], gate: Some(1), terms: &[(1, false, R, RBar)] },
    PrintedRow { name: "-2e_r", weight: [-2, 0, 0, 0], gate: Some(1), terms: &[(1, false, RBar, R)] },
    PrintedRow { name: "2d_p", weight: [0, 0, 2, 0], gate: Some(-1), terms: &[(1, false, P, PBar)] },
    PrintedRow { name: "-2d_p", weight: [0, 0, -2, 0], gate: Some(-1), terms: &[(1, false, PBar, P)] },
    PrintedRow { name: "d_p+d_q", weight: [0, 0, 1, 1], gate: None, terms: &[(1, false, P, QBar), (-1, true, P, QBar)] },
    PrintedRow { name: "-d_p-d_q", weight: [0, 0, -1, -1], gate: None, terms: &[(1, false, PBar, Q), (-1, true, QBar, P)] },
    PrintedRow { name: "d_p-d_q", weight: [0, 0, 1, -1], gate: None, terms: &[(1, false, P, Q), (1, true, QBar, PBar)] },
    PrintedRow { name: "d_p", weight: [0, 0, 1, 0], gate: None, terms: &[(1, false, Zero, PBar), (-1, true, P, Zero)] },
    PrintedRow { name: "-d_p", weight: [0, 0, -1, 0], gate: None, terms: &[(1, false, Zero, P), (1, true, PBar, Zero)] },
    PrintedRow { name: "e_r+d_p", weight: [1, 0, 1, 0], gate: None, terms: &[(1, false, R, PBar), (1, true, P, RBar)] },
    PrintedRow { name: "-e_r-d_p", weight: [-1, 0, -1, 0], gate: None, terms: &[(1, false, RBar, P), (-1, true, PBar, R)] },
    PrintedRow { name: "e_r-d_p", weight: [1, 0, -1, 0], gate: None, terms: &[(1, false, R, P), (-1, true, PBar, RBar)] },
    PrintedRow { name: "-e_r+d_p", weight: [-1, 0, 1, 0], gate: None, terms: &[(1, false, RBar, PBar), (1, true, P, R)] },
];

#[derive(Clone, Copy, Debug)]
struct Instance {
    r: u32,
    s: u32,
    p: u32,
    q: u32,
}

impl Instance {
    fn index(&self, slot: Slot) -> SuperIndex {
        match slot {
            Zero => SuperIndex::Zero,
            R => SuperIndex::I(self.r),
            RBar => SuperIndex::IBar(self.r),
            S => SuperIndex::I(self.s),
            SBar => SuperIndex::IBar(self.s),
            P => SuperIndex::J(self.p),
            PBar => SuperIndex::JBar(self.p),
            Q => SuperIndex::J(self.q),
            QBar => SuperIndex::JBar(self.q),
        }
    }

    fn label(&self) -> String {
        format!("r={},s={},p={}',q={}'", self.r, self.s, self.p, self.q)
    }
}

/// Outcome of comparing a printed vector with the computed weight space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RowStatus {
    /// Printed vector is nonzero and spans the (one-dimensional) weight space.
    Match,
    /// Printed vector and weight space both vanish.
    VanishingMatch,
    /// Printed vector is zero but the weight space is not.
    PrintedZero,
    /// Printed vector is nonzero but the weight space is zero.
    SpuriousVector,
    /// Printed vector lies outside the space; flipping the sign of `term` fixes it.
    SignFlip { term: usize },
    Mismatch,
}

impl RowStatus {
    pub fn agrees(&self) -> bool {
        matches!(self, RowStatus::Match | RowStatus::VanishingMatch)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowVerdict {
    pub row: String,
    pub gamma: i64,
    pub weight: String,
    pub instance: String,
    pub status: RowStatus,
    /// The same elementary matrix occurs twice in the printed expression.
    pub printed_degenerate: bool,
    pub printed: String,
    /// Spanning vector obtained from the defining equations.
    pub derived: Vec<String>,
    pub space_dim: usize,
    /// Number of index instantiations examined and whether all agreed.
    pub instances: usize,
    pub uniform: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpanTableReport {
    pub m: u32,
    pub n: u32,
    pub rows: Vec<RowVerdict>,
}

impl SpanTableReport {
    pub fn discrepancies(&self) -> impl Iterator<Item = &RowVerdict> {
        self.rows.iter().filter(|r| !r.status.agrees() || r.printed_degenerate)
    }

    pub fn verdict(&self, row: &str, gamma: i64) -> Option<&RowVerdict> {
        self.rows.iter().find(|r| r.row == row && r.gamma == gamma)
    }
}

/// `e[j,k]` terms joined with signs, for example `e[1,~2] - e[2,~1]`.
pub fn format_matrix(x: &SuperMatrix) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let u = x.universe();
    let mut out = String::new();
    for (k, ((r, c), v)) in x.entries().enumerate() {
        let neg = v < &Scalar::zero();
        let a = if neg { -v.clone() } else { v.clone() };
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if !a.is_one() {
            out.push_str(&scalar::format(&a));
            out.push('*');
        }
        out.push_str(&format!("e[{},{}]", u.index_at(r), u.index_at(c)));
    }
    out
}

fn instances(row: &PrintedRow, m: u32, n: u32) -> Vec<Instance> {
    let uses = |slots: &[Slot]| row.terms.iter().any(|(_, _, a, b)| slots.contains(a) || slots.contains(b));
    let rs: Vec<(u32, u32)> = if uses(&[S, SBar]) {
        (1..=m).flat_map(|r| (1..=m).filter(move |s| *s != r).map(move |s| (r, s))).collect()
    } else if uses(&[R, RBar]) {
        (1..=m).map(|r| (r, 0)).collect()
    } else {
        vec![(0, 0)]
    };
    let pq: Vec<(u32, u32)> = if uses(&[Q, QBar]) {
        (1..=n).flat_map(|p| (1..=n).filter(move |q| *q != p).map(move |q| (p, q))).collect()
    } else if uses(&[P, PBar]) {
        (1..=n).map(|p| (p, 0)).collect()
    } else {
        vec![(0, 0)]
    };
    rs.iter().flat_map(|&(r, s)| pq.iter().map(move |&(p, q)| Instance { r, s, p, q })).collect()
}

fn evaluate(ctx: &OspContext, row: &PrintedRow, gamma: i64, inst: Instance) -> (Weight, RowStatus, SuperMatrix, Vec<SuperMatrix>) {
    let w = Weight::eps(inst.r.max(1)).scale_int(row.weight[0])
        .add_scaled(&scalar::int(row.weight[1]), &Weight::eps(inst.s.max(1)))
        .add_scaled(&scalar::int(row.weight[2]), &Weight::delta(inst.p.max(1)))
        .add_scaled(&scalar::int(row.weight[3]), &Weight::delta(inst.q.max(1)));
    let basis = if gamma == -1 { &ctx.g } else { &ctx.s };
    let space: Vec<SuperMatrix> = basis.weight_space(&w).iter().map(|k| basis.elements[*k].matrix.clone()).collect();
    let coord = Coordinatizer::new(&space.iter().map(SuperMatrix::flatten).collect::<Vec<_>>());

    let term_matrix = |t: &(i64, bool, Slot, Slot), flip: bool| {
        let mut c = scalar::int(t.0);
        if t.1 {
            c *= scalar::int(gamma);
        }
        if flip {
            c = -c;
        }
        let mut x = SuperMatrix::zero(ctx.universe);
        x.add_entry(ctx.universe.position(inst.index(t.2)), ctx.universe.position(inst.index(t.3)), c);
        x
    };
    let build = |flip: Option<usize>| {
        let mut x = SuperMatrix::zero(ctx.universe);
        if row.gate.is_some_and(|g| g != gamma) {
            return x;
        }
        for (k, t) in row.terms.iter().enumerate() {
            x = x.add(&term_matrix(t, flip == Some(k)));
        }
        x
    };
    let printed = build(None);
    let in_space = |x: &SuperMatrix| coord.contains(&x.flatten());
    let status = if printed.is_zero() {
        if space.is_empty() {
            RowStatus::VanishingMatch
        } else {
            RowStatus::PrintedZero
        }
    } else if space.is_empty() {
        RowStatus::SpuriousVector
    } else if in_space(&printed) && space.len() == 1 {
        RowStatus::Match
    } else {
        (0..row.terms.len())
            .find(|k| {
                let x = build(Some(*k));
                !x.is_zero() && in_space(&x)
            })
            .map_or(RowStatus::Mismatch, |term| RowStatus::SignFlip { term })
    };
    (w, status, printed, space)
}

/// Checks each printed weight-space generator against the solved bases of `g` (γ = −1)
/// and `s` (γ = +1), over every admissible choice of `r ≠ s`, `p ≠ q`.
pub fn verify_span_table(ctx: &OspContext) -> SpanTableReport {
    let mut rows = Vec::new();
    for row in ROWS {
        let insts = instances(row, ctx.m, ctx.n);
        if insts.is_empty() {
            continue;
        }
        let mut seen = std::collections::BTreeSet::new();
        let printed_degenerate = row.terms.iter().any(|t| !seen.insert((t.2, t.3)));
        for gamma in [-1i64, 1] {
            let results: Vec<_> = insts.iter().map(|i| evaluate(ctx, row, gamma, *i)).collect();
            let (w, status, printed, space) = &results[0];
            let uniform = results.iter().all(|r| &r.1 == status);
            rows.push(RowVerdict {
                row: row.name.into(),
                gamma,
                weight: w.label(),
                instance: insts[0].label(),
                status: status.clone(),
                printed_degenerate,
                printed: format_matrix(printed),
                derived: space.iter().map(format_matrix).collect(),
                space_dim: space.len(),
                instances: insts.len(),
                uniform,
            });
        }
    }
    SpanTableReport {
        m: ctx.m,
        n: ctx.n,
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::osp::build_context;

    #[test]
    fn table_at_two_two() {
        let ctx = build_context(2, 2).unwrap();
        let rep = verify_span_table(&ctx);
        assert_eq!(rep.rows.len(), 36);
        assert!(rep.rows.iter().all(|r| r.uniform && r.space_dim <= 1));

        let pq = rep.verdict("d_p+d_q", 1).unwrap();
        assert!(pq.printed_degenerate);
        assert_eq!(pq.status, RowStatus::PrintedZero);
        assert_eq!(pq.derived, vec!["e[1',~2'] - e[2',~1']".to_string()]);
        let pq = rep.verdict("d_p+d_q", -1).unwrap();
        assert_eq!(pq.status, RowStatus::Mismatch);
        assert_eq!(pq.derived, vec!["e[1',~2'] + e[2',~1']".to_string()]);

        let eps = rep.verdict("e_r+e_s", -1).unwrap();
        assert_eq!(eps.status, RowStatus::Match);
        assert_eq!(eps.printed, "e[1,~2] - e[2,~1]");
        assert_eq!(rep.verdict("2e_r", 1).unwrap().printed, "e[1,~1]");
        assert_eq!(rep.verdict("2e_r", -1).unwrap().status, RowStatus::VanishingMatch);
    }

    #[test]
    fn short_odd_rows_disagree_by_one_sign() {
        let ctx = build_context(2, 2).unwrap();
        let rep = verify_span_table(&ctx);
        for row in ["d_p", "-d_p"] {
            for gamma in [1, -1] {
                let v = rep.verdict(row, gamma).unwrap();
                assert_eq!(v.status, RowStatus::SignFlip { term: 0 }, "{row} {gamma}");
            }
        }
        let d = rep.verdict("d_p", 1).unwrap();
        assert_eq!(d.derived, vec!["e[0,~1'] + e[1',0]".to_string()]);
        assert_eq!(rep.discrepancies().count(), 6);
    }
}
