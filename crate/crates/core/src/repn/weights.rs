use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::{GModule, RepnError};
use crate::exactalg::scalar::{self, Scalar};
use crate::exactalg::{Eliminator, LinearMap, SparseVec};
use crate::osp::OspContext;
use crate::roots::{Symbol, Weight};

/// Weight spaces of a module, each with an explicit basis in carrier coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleWeights {
    pub spaces: BTreeMap<Weight, Vec<SparseVec>>,
    /// Whether every carrier basis vector is itself a weight vector.
    pub diagonal: bool,
}

impl ModuleWeights {
    pub fn multiplicities(&self) -> BTreeMap<Weight, usize> {
        self.spaces.iter().map(|(w, b)| (w.clone(), b.len())).collect()
    }

    pub fn multiplicity(&self, w: &Weight) -> usize {
        self.spaces.get(w).map_or(0, Vec::len)
    }

    /// Weight of carrier basis vector `k` when the action of the Cartan subalgebra is diagonal.
    pub fn basis_weights(&self, dim: usize) -> Option<Vec<Weight>> {
        if !self.diagonal {
            return None;
        }
        let mut out = vec![Weight::zero(); dim];
        for (w, vs) in &self.spaces {
            for v in vs {
                out[v.support().next()?] = w.clone();
            }
        }
        Some(out)
    }
}

/// `(index in g, symbol)` for the Cartan basis `h_1..h_m, d_1..d_n`.
pub(super) fn cartan(ctx: &OspContext) -> Vec<(usize, Symbol)> {
    let syms = (1..=ctx.m).map(Symbol::Eps).chain((1..=ctx.n).map(Symbol::Delta));
    ctx.g.weight_space(&Weight::zero()).iter().copied().zip(syms).collect()
}

fn diagonal_weights(rhos: &[(&LinearMap, Symbol)], dim: usize) -> Option<Vec<Weight>> {
    (0..dim)
        .map(|k| {
            let mut w = Weight::zero();
            for (r, sym) in rhos {
                let col = r.column(k);
                if col.support().any(|i| i != k) {
                    return None;
                }
                w.add_term(*sym, col.get(k));
            }
            Some(w)
        })
        .collect()
}

/// Kernel of `op − c` restricted to the span of `basis`.
fn eigen_in(op: &LinearMap, c: &Scalar, basis: &[SparseVec]) -> Vec<SparseVec> {
    let images: Vec<SparseVec> = basis.iter().map(|b| op.apply(b).sub(&b.scaled(c))).collect();
    // Unknowns are the coefficients on `basis`; one equation per carrier coordinate.
    let mut rows: BTreeMap<usize, SparseVec> = BTreeMap::new();
    for (k, img) in images.iter().enumerate() {
        for (r, a) in img.iter() {
            rows.entry(r).or_default().add_term(k, a.clone());
        }
    }
    let mut elim = Eliminator::new(basis.len());
    for row in rows.values() {
        elim.push(row);
    }
    elim.nullspace()
        .into_iter()
        .map(|coeffs| {
            let mut v = SparseVec::new();
            for (k, a) in coeffs.iter() {
                v.add_scaled(a, &basis[k]);
            }
            v
        })
        .collect()
}

/// Simultaneous eigenspaces of the Cartan subalgebra. Eigenvalues are searched
/// among the integers inside the Gershgorin bound; anything else (or a
/// non-diagonalizable action) is rejected.
pub fn weights_of(module: &GModule, ctx: &OspContext) -> Result<ModuleWeights, RepnError> {
    let dim = module.dim();
    let mut rhos = Vec::new();
    for (i, sym) in cartan(ctx) {
        rhos.push((module.rho(i).ok_or(RepnError::CartanMissing)?, sym));
    }
    if let Some(ws) = diagonal_weights(&rhos, dim) {
        let mut spaces: BTreeMap<Weight, Vec<SparseVec>> = BTreeMap::new();
        for (k, w) in ws.into_iter().enumerate() {
            spaces.entry(w).or_default().push(SparseVec::unit(k));
        }
        return Ok(ModuleWeights { spaces, diagonal: true });
    }

    let mut parts: Vec<(Weight, Vec<SparseVec>)> = vec![(Weight::zero(), (0..dim).map(SparseVec::unit).collect())];
    for (op, sym) in &rhos {
        let bound = (0..dim)
            .map(|c| op.column(c).iter().map(|(_, a)| a.abs()).sum::<Scalar>())
            .max()
            .unwrap_or_else(Scalar::zero)
            .floor();
        let bound = scalar::as_i64(&bound).ok_or(RepnError::NotDiagonalizable(sym.to_string()))?;
        let mut next = Vec::new();
        for (w, basis) in parts {
            let mut found = 0;
            for c in -bound..=bound {
                let space = eigen_in(op, &scalar::int(c), &basis);
                if !space.is_empty() {
                    found += space.len();
                    let mut w2 = w.clone();
                    w2.add_term(*sym, scalar::int(c));
                    next.push((w2, space));
                }
            }
            if found != basis.len() {
                return Err(RepnError::NotDiagonalizable(sym.to_string()));
            }
        }
        parts = next;
    }
    Ok(ModuleWeights {
        spaces: parts.into_iter().collect(),
        diagonal: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::osp::{build_context, expected_s_weights, expected_u_weights, Carrier};

    #[test]
    fn natural_module_weights() {
        let ctx = build_context(2, 2).unwrap();
        let u = GModule::from_carrier(&ctx, Carrier::U).unwrap();
        let ws = weights_of(&u, &ctx).unwrap();
        assert!(ws.diagonal);
        let want: BTreeMap<Weight, usize> = expected_u_weights(2, 2).into_iter().map(|w| (w, 1)).collect();
        assert_eq!(ws.multiplicities(), want);
    }

    #[test]
    fn second_natural_zero_weight_fills_the_rest() {
        let ctx = build_context(2, 2).unwrap();
        let s = GModule::from_carrier(&ctx, Carrier::S).unwrap();
        let ws = weights_of(&s, &ctx).unwrap();
        let support: Vec<Weight> = ws.spaces.keys().cloned().collect();
        assert_eq!(support, expected_s_weights(2, 2).into_iter().collect::<Vec<_>>());
        let nonzero: usize = ws.spaces.iter().filter(|(w, _)| !w.is_zero()).map(|(_, b)| b.len()).sum();
        assert_eq!(ws.multiplicity(&Weight::zero()), s.dim() - nonzero);
        assert_eq!(ws.multiplicity(&Weight::zero()), 4);
    }

    #[test]
    fn rotated_basis_uses_the_eigen_search() {
        let ctx = build_context(1, 1).unwrap();
        let u = GModule::from_carrier(&ctx, Carrier::U).unwrap();
        // Replace basis vectors 0 and 1 by their sum and difference.
        let p = LinearMap::from_entries(5, 5, (2..5).map(|k| (k, k, scalar::one())).chain([
            (0, 0, scalar::one()),
            (1, 0, scalar::one()),
            (0, 1, scalar::one()),
            (1, 1, -scalar::one()),
        ]));
        let p_inv = LinearMap::from_entries(5, 5, (2..5).map(|k| (k, k, scalar::one())).chain([
            (0, 0, scalar::frac(1, 2)),
            (1, 0, scalar::frac(1, 2)),
            (0, 1, scalar::frac(1, 2)),
            (1, 1, scalar::frac(-1, 2)),
        ]));
        let action = u.actions().map(|(_, a)| p_inv.compose(a).compose(&p)).collect();
        let rotated = GModule::new(u.parities().to_vec(), u.acting().to_vec(), action).unwrap();
        let ws = weights_of(&rotated, &ctx).unwrap();
        assert!(!ws.diagonal);
        assert_eq!(ws.multiplicities(), weights_of(&u, &ctx).unwrap().multiplicities());
    }

    #[test]
    fn nilpotent_cartan_action_is_rejected() {
        let ctx = build_context(1, 1).unwrap();
        let (h, _) = cartan(&ctx)[0];
        let mut action = vec![LinearMap::zero(2, 2); ctx.g.len()];
        action[h] = LinearMap::from_entries(2, 2, [(0, 1, scalar::one())]);
        let m = GModule::new(vec![crate::exactalg::Parity::Even; 2], (0..ctx.g.len()).collect(), action).unwrap();
        assert!(matches!(weights_of(&m, &ctx), Err(RepnError::NotDiagonalizable(_))));
    }
}
