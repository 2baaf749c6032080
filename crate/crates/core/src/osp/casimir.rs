use num_traits::Zero;

use super::context::{Carrier, OspContext};
use super::OspError;
use crate::exactalg::scalar::{self, Scalar};
use crate::exactalg::{Coordinatizer, LinearMap, SparseVec};

/// `Γ = Σ coeff · x_i x_k` over basis elements of `g`, with dual bases taken
/// for the form `½ str(xy)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Casimir {
    pub terms: Vec<(usize, usize, Scalar)>,
    /// Whether odd basis elements enter with a sign `−1`.
    pub odd_signed: bool,
}

impl Casimir {
    /// The operator `Σ coeff · ρ(x_i) ρ(x_k)` for a representation given on the basis of `g`.
    pub fn act(&self, rho: &[LinearMap]) -> LinearMap {
        let d = rho.first().map_or(0, LinearMap::rows);
        let mut out = LinearMap::zero(d, d);
        for (i, k, c) in &self.terms {
            out.add_scaled(c, &rho[*i].compose(&rho[*k]));
        }
        out
    }

    /// Scalar by which `Γ` acts on one of the constructed modules.
    pub fn scalar_on(&self, ctx: &OspContext, carrier: Carrier) -> Result<Option<Scalar>, OspError> {
        Ok(self.act(&ctx.action(carrier)?).as_scalar())
    }
}

// `Γ` is even, so the graded commutator is the ordinary one.
fn commutes_with_all(op: &LinearMap, rho: &[LinearMap]) -> bool {
    rho.iter().all(|r| LinearMap::graded_commutator(op, r, false).is_zero())
}

fn candidate(dual: &[SparseVec], odd: &[bool], signed: bool) -> Casimir {
    let mut terms = Vec::new();
    for (i, d) in dual.iter().enumerate() {
        let s = scalar::sign(signed && odd[i]);
        for (k, c) in d.iter() {
            terms.push((i, k, c * &s));
        }
    }
    Casimir { terms, odd_signed: signed }
}

/// Builds `Γ`. Both sign conventions for the odd part are tried on the natural
/// module and the one commuting with the action is kept.
pub fn casimir(ctx: &OspContext) -> Result<Casimir, OspError> {
    let dim = ctx.g.len();
    // Gram columns; dual x^j = Σ_k C[k][j] x_k with Σ_k G[i][k] C[k][j] = δ_ij.
    let gram_cols: Vec<SparseVec> = (0..dim)
        .map(|k| {
            (0..dim)
                .filter_map(|i| {
                    let v = ctx.trace_form(i, k);
                    (!v.is_zero()).then_some((i, v))
                })
                .collect()
        })
        .collect();
    let coord = Coordinatizer::new(&gram_cols);
    if coord.rank() != dim {
        return Err(OspError::DegenerateForm { rank: coord.rank(), dim });
    }
    let dual: Vec<SparseVec> = (0..dim).map(|j| coord.coords(&SparseVec::unit(j)).expect("full rank")).collect();
    let odd: Vec<bool> = ctx.g.parities().iter().map(|p| p.is_odd()).collect();
    let rho = ctx.action(Carrier::U)?;
    for signed in [false, true] {
        let c = candidate(&dual, &odd, signed);
        if commutes_with_all(&c.act(&rho), &rho) {
            return Ok(c);
        }
    }
    Err(OspError::CasimirNotCentral)
}

/// Whether the supertrace form on `g` is even and invariant on every basis triple.
pub fn trace_form_invariant(ctx: &OspContext) -> Result<bool, OspError> {
    let t = ctx.g_table()?;
    let dim = ctx.g.len();
    let form = |x: &SparseVec, z: usize| -> Scalar { x.iter().map(|(i, c)| c * ctx.trace_form(i, z)).sum() };
    for i in 0..dim {
        for j in 0..dim {
            let v = ctx.trace_form(i, j);
            if !v.is_zero() && ctx.g.elements[i].parity != ctx.g.elements[j].parity {
                return Ok(false);
            }
            let xy = t.get(i, j);
            for k in 0..dim {
                let yz = t.get(j, k);
                let left = form(&xy, k);
                let right: Scalar = yz.iter().map(|(l, c)| c * ctx.trace_form(i, l)).sum();
                if left != right {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::osp::build_context;

    fn expected(m: i64, n: i64) -> [(Carrier, Scalar); 3] {
        [
            (Carrier::U, scalar::int(-2 * (n - m))),
            (Carrier::G, scalar::int(-2 - 4 * (n - m))),
            (Carrier::S, scalar::int(2 - 4 * (n - m))),
        ]
    }

    #[test]
    fn scalars_at_two_two() {
        let ctx = build_context(2, 2).unwrap();
        let c = casimir(&ctx).unwrap();
        for (carrier, value) in expected(2, 2) {
            assert_eq!(c.scalar_on(&ctx, carrier).unwrap(), Some(value), "{carrier}");
        }
    }

    #[test]
    fn commutes_with_adjoint_action() {
        let ctx = build_context(1, 1).unwrap();
        let c = casimir(&ctx).unwrap();
        let rho = ctx.action(Carrier::G).unwrap();
        assert!(commutes_with_all(&c.act(&rho), &rho));
    }

    #[test]
    fn supertrace_form_is_invariant() {
        let ctx = build_context(1, 1).unwrap();
        assert!(trace_form_invariant(&ctx).unwrap());
    }
}
