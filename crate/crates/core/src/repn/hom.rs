use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::weights::weights_of;
use super::{GModule, RepnError};
use crate::exactalg::{Eliminator, LinearMap, SparseVec};
use crate::osp::OspContext;
use crate::roots::Weight;

/// Which basis elements of `g` the maps must commute with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Over {
    /// The even part of `g`; maps are arbitrary linear maps between the carriers.
    Even,
    /// All of `g`; maps are restricted to parity-preserving ones.
    Full,
}

impl fmt::Display for Over {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Over::Even => "g0",
            Over::Full => "g",
        })
    }
}

impl FromStr for Over {
    type Err = RepnError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "g0" | "even" => Ok(Over::Even),
            "g" | "full" => Ok(Over::Full),
            other => Err(RepnError::Parse(format!("unknown algebra {other:?}; expected g0 or g"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomSpace {
    pub over: Over,
    pub unknowns: usize,
    pub dim: usize,
    pub basis: Vec<LinearMap>,
}

/// Basis of `{φ : ρ_Y(x)∘φ = φ∘ρ_X(x)}` for every basis element `x` of the chosen algebra.
pub fn hom_space(x: &GModule, y: &GModule, over: Over, ctx: &OspContext) -> Result<HomSpace, RepnError> {
    hom_space_with(x, y, over, ctx, true)
}

/// As [`hom_space`]; with `prune_by_weight = false` every matrix entry is an
/// unknown, so the weight argument is not taken for granted.
pub fn hom_space_with(x: &GModule, y: &GModule, over: Over, ctx: &OspContext, prune_by_weight: bool) -> Result<HomSpace, RepnError> {
    let acting: Vec<usize> = (0..ctx.g.len())
        .filter(|&i| over == Over::Full || !ctx.g.elements[i].parity.is_odd())
        .collect();
    let mut pairs = Vec::with_capacity(acting.len());
    for &i in &acting {
        match (x.rho(i), y.rho(i)) {
            (Some(a), Some(b)) => pairs.push((a, b)),
            _ => return Err(RepnError::ActingSet),
        }
    }

    // Unknowns φ[r][c]. The Cartan subalgebra is among the acting elements, so
    // φ preserves weights and only equal-weight entries can be nonzero.
    let (dx, dy) = (x.dim(), y.dim());
    let (wx, wy) = if prune_by_weight {
        (basis_weights(x, ctx), basis_weights(y, ctx))
    } else {
        (None, None)
    };
    let allowed = |r: usize, c: usize| -> bool {
        let same_weight = match (&wx, &wy) {
            (Some(wx), Some(wy)) => wx[c] == wy[r],
            _ => true,
        };
        same_weight && (over == Over::Even || x.parities()[c] == y.parities()[r])
    };
    let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for r in 0..dy {
        for c in 0..dx {
            if allowed(r, c) {
                let k = index.len();
                index.insert((r, c), k);
            }
        }
    }

    let mut elim = Eliminator::new(index.len());
    for (rx, ry) in pairs {
        let rx_rows = rx.transpose();
        let mut eqs: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
        for (&(k, c), &var) in &index {
            // (ρ_Y φ)[r][c] gains ρ_Y[r][k] φ[k][c].
            for (r, a) in ry.column(k).iter() {
                eqs.entry((r, c)).or_default().add_term(var, a.clone());
            }
        }
        for (&(r, k), &var) in &index {
            // (φ ρ_X)[r][c] gains φ[r][k] ρ_X[k][c].
            for (c, a) in rx_rows.column(k).iter() {
                eqs.entry((r, c)).or_default().add_term(var, -a.clone());
            }
        }
        for e in eqs.values() {
            elim.push(e);
        }
    }
    let basis: Vec<LinearMap> = elim
        .nullspace()
        .into_iter()
        .map(|sol| {
            let entries = index.iter().filter_map(|(&(r, c), &var)| {
                let v = sol.get(var);
                (!num_traits::Zero::is_zero(&v)).then_some((r, c, v))
            });
            LinearMap::from_entries(dy, dx, entries)
        })
        .collect();
    Ok(HomSpace {
        over,
        unknowns: index.len(),
        dim: basis.len(),
        basis,
    })
}

/// `Weight` of every carrier basis vector, when the Cartan action is diagonal.
pub fn basis_weights(module: &GModule, ctx: &OspContext) -> Option<Vec<Weight>> {
    weights_of(module, ctx).ok()?.basis_weights(module.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Parity;
    use crate::osp::{build_context, Carrier};

    #[test]
    fn natural_module_is_schur() {
        let ctx = build_context(2, 2).unwrap();
        let u = GModule::from_carrier(&ctx, Carrier::U).unwrap();
        let h = hom_space(&u, &u, Over::Full, &ctx).unwrap();
        assert_eq!(h.dim, 1);
        assert_eq!(h.basis[0].as_scalar().map(|c| c != num_traits::Zero::zero()), Some(true));
    }

    #[test]
    fn even_endomorphisms_of_the_natural_module() {
        // Over g0 the carrier splits into the two natural modules of its blocks.
        let ctx = build_context(2, 2).unwrap();
        let u = GModule::from_carrier(&ctx, Carrier::U).unwrap().restrict_even(&ctx);
        let h = hom_space(&u, &u, Over::Even, &ctx).unwrap();
        assert_eq!(h.dim, 2);
    }

    #[test]
    fn odd_part_of_g_to_even_part_of_u() {
        let ctx = build_context(2, 2).unwrap();
        let g = GModule::from_carrier(&ctx, Carrier::G).unwrap().restrict_even(&ctx);
        let u = GModule::from_carrier(&ctx, Carrier::U).unwrap().restrict_even(&ctx);
        let g1 = g.parity_part(&ctx, Parity::Odd).unwrap();
        let u0 = u.parity_part(&ctx, Parity::Even).unwrap();
        let line = GModule::trivial(&ctx, 1).restrict_even(&ctx);
        let x = g1.tensor(&line, &ctx).unwrap();
        assert_eq!(hom_space(&x, &u0, Over::Even, &ctx).unwrap().dim, 0);
        // Sanity: g1 maps to itself.
        assert_eq!(hom_space(&g1, &g1, Over::Even, &ctx).unwrap().dim, 1);
    }

    #[test]
    fn missing_action_is_an_error() {
        let ctx = build_context(1, 1).unwrap();
        let u = GModule::from_carrier(&ctx, Carrier::U).unwrap();
        let u_even = u.restrict_even(&ctx);
        assert_eq!(hom_space(&u_even, &u, Over::Full, &ctx), Err(RepnError::ActingSet));
    }
}
