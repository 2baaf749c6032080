use std::collections::BTreeMap;

use serde::Serialize;

use super::context::{build_context, Carrier, OspContext};
use super::OspError;
use crate::exactalg::scalar;
use crate::exactalg::{rank, LinearMap, SparseVec, SuperMatrix};
use crate::roots::{Symbol, Weight};

/// Certification of one sub-object against its model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubObjectCheck {
    pub name: String,
    pub dim: usize,
    pub expected_dim: usize,
    pub weights_match: bool,
    pub span_match: bool,
    pub action_match: bool,
}

impl SubObjectCheck {
    pub fn pass(&self) -> bool {
        self.dim == self.expected_dim && self.weights_match && self.span_match && self.action_match
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubContextReport {
    pub m: u32,
    pub n: u32,
    pub sub_m: u32,
    pub sub_n: u32,
    pub objects: Vec<SubObjectCheck>,
}

impl SubContextReport {
    pub fn all_pass(&self) -> bool {
        self.objects.iter().all(SubObjectCheck::pass)
    }
}

fn embed(big: &OspContext, x: &SuperMatrix) -> SuperMatrix {
    let small = x.universe();
    let mut out = SuperMatrix::zero(big.universe);
    for ((r, c), v) in x.entries() {
        out.add_entry(big.universe.position(small.index_at(r)), big.universe.position(small.index_at(c)), v.clone());
    }
    out
}

struct Realization<'a> {
    action: &'a [LinearMap],
    weights: &'a [Weight],
    /// Model carrier basis expressed in the big carrier.
    embedded: Vec<SparseVec>,
}

fn check(name: &str, ctx: &OspContext, model: &OspContext, carrier: Carrier, real: &Realization, allowed: impl Fn(&Weight) -> bool, model_action: &[LinearMap], g_embedded: &[SparseVec]) -> SubObjectCheck {
    let dim = real.weights.len();
    let mut gens: Vec<(Weight, SparseVec)> = Vec::new();
    for (k, w) in real.weights.iter().enumerate() {
        if w.is_zero() || !allowed(w) {
            continue;
        }
        gens.push((w.clone(), SparseVec::unit(k)));
        let minus = -w;
        for &i in ctx.g.weight_space(w) {
            for (j, wj) in real.weights.iter().enumerate() {
                if wj == &minus {
                    let v = real.action[i].apply(&SparseVec::unit(j));
                    if !v.is_zero() {
                        gens.push((Weight::zero(), v));
                    }
                }
            }
        }
    }
    let span: Vec<SparseVec> = gens.iter().map(|(_, v)| v.clone()).collect();
    let r_span = rank(&span, dim);
    let r_model = rank(&real.embedded, dim);
    let r_both = rank(&span.iter().chain(&real.embedded).cloned().collect::<Vec<_>>(), dim);

    let mut by_weight: BTreeMap<Weight, Vec<SparseVec>> = BTreeMap::new();
    for (w, v) in gens {
        by_weight.entry(w).or_default().push(v);
    }
    let got: BTreeMap<Weight, usize> = by_weight.iter().map(|(w, vs)| (w.clone(), rank(vs, dim))).filter(|(_, r)| *r > 0).collect();
    let mut want: BTreeMap<Weight, usize> = BTreeMap::new();
    for w in model.weights(carrier) {
        *want.entry(w).or_default() += 1;
    }

    let mut action_match = true;
    'outer: for (i, gi) in g_embedded.iter().enumerate() {
        let mut op = LinearMap::zero(dim, dim);
        for (l, c) in gi.iter() {
            op.add_scaled(c, &real.action[l]);
        }
        for (j, ej) in real.embedded.iter().enumerate() {
            let lhs = op.apply(ej);
            let mut rhs = SparseVec::new();
            for (k, c) in model_action[i].column(j).iter() {
                rhs.add_scaled(c, &real.embedded[k]);
            }
            if lhs != rhs {
                action_match = false;
                break 'outer;
            }
        }
    }

    SubObjectCheck {
        name: name.into(),
        dim: r_span,
        expected_dim: model.dim(carrier),
        weights_match: got == want,
        span_match: r_span == r_model && r_span == r_both && r_model == real.embedded.len(),
        action_match,
    }
}

/// The sub-objects spanned by root spaces with support in `{ε_i, δ_p : i ≤ sub_m, p ≤ sub_n}`,
/// each compared with the corresponding object of `osp` built directly at `(sub_m, sub_n)`.
/// The modules isomorphic to `g` and `s` are realized on copies with rescaled bases.
pub fn sub_context(ctx: &OspContext, sub_m: u32, sub_n: u32) -> Result<SubContextReport, OspError> {
    if sub_m == 0 || sub_n == 0 || sub_m > ctx.m || sub_n > ctx.n {
        return Err(OspError::SubPair {
            m: sub_m,
            n: sub_n,
            outer_m: ctx.m,
            outer_n: ctx.n,
        });
    }
    let model = build_context(sub_m, sub_n)?;
    let allowed = |w: &Weight| {
        w.support().all(|s| match s {
            Symbol::Eps(i) => i <= sub_m,
            Symbol::Delta(p) => p <= sub_n,
            _ => false,
        })
    };
    let not_closed = || OspError::NotClosed("embedded model".into());
    let g_embedded: Vec<SparseVec> = model.g.elements.iter().map(|e| ctx.g.coords(&embed(ctx, &e.matrix)).ok_or_else(not_closed)).collect::<Result<_, _>>()?;
    let s_embedded: Vec<SparseVec> = model.s.elements.iter().map(|e| ctx.s.coords(&embed(ctx, &e.matrix)).ok_or_else(not_closed)).collect::<Result<_, _>>()?;
    let u_embedded: Vec<SparseVec> = model
        .universe
        .indices()
        .into_iter()
        .map(|ix| SparseVec::unit(ctx.universe.position(ix)))
        .collect();

    let mut objects = Vec::new();
    for (name, carrier, embedded, copy) in [
        ("gg", Carrier::G, &g_embedded, false),
        ("ss", Carrier::S, &s_embedded, false),
        ("W", Carrier::G, &g_embedded, true),
        ("T", Carrier::S, &s_embedded, true),
        ("M", Carrier::U, &u_embedded, false),
    ] {
        let big_action = ctx.action(carrier)?;
        let weights = ctx.weights(carrier);
        let model_action = model.action(carrier)?;
        let (action, embedded) = if copy {
            // V = carrier with basis b'_k = b_k/(k+1): ρ'(x) = D ρ(x) D⁻¹ with D = diag(k+1).
            let d: Vec<_> = (0..weights.len()).map(|k| scalar::int(k as i64 + 1)).collect();
            let conj = |v: &SparseVec| v.iter().map(|(k, c)| (k, c * &d[k])).collect::<SparseVec>();
            let action: Vec<LinearMap> = big_action
                .iter()
                .map(|a| {
                    LinearMap::from_columns(
                        a.rows(),
                        a.columns().iter().enumerate().map(|(k, col)| conj(col).scaled(&(scalar::one() / &d[k]))).collect(),
                    )
                })
                .collect();
            (action, embedded.iter().map(conj).collect())
        } else {
            (big_action, embedded.clone())
        };
        let real = Realization {
            action: &action,
            weights: &weights,
            embedded,
        };
        objects.push(check(name, ctx, &model, carrier, &real, allowed, &model_action, &g_embedded));
    }
    Ok(SubContextReport {
        m: ctx.m,
        n: ctx.n,
        sub_m,
        sub_n,
        objects,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_pair_is_identity_embedding() {
        let ctx = build_context(1, 1).unwrap();
        let rep = sub_context(&ctx, 1, 1).unwrap();
        assert!(rep.all_pass(), "{rep:?}");
    }

    #[test]
    fn one_one_inside_two_two() {
        let ctx = build_context(2, 2).unwrap();
        let rep = sub_context(&ctx, 1, 1).unwrap();
        assert!(rep.all_pass(), "{rep:?}");
        assert_eq!(rep.objects[0].dim, 12);
        assert_eq!(rep.objects[4].dim, 5);
    }
}
