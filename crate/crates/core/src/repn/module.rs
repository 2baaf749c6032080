use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::RepnError;
use crate::exactalg::scalar::{self, Scalar};
use crate::exactalg::{sign_flip, LinearMap, Parity, SparseVec};
use crate::osp::{Carrier, OspContext};

/// A finite-dimensional module over `g` (or over the subalgebra spanned by
/// `acting`), given by the matrices of the acting basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GModule {
    parities: Vec<Parity>,
    /// Indices into the basis of `g`, ascending.
    acting: Vec<usize>,
    action: Vec<LinearMap>,
}

/// `{dim, parity, action: {label: [[row, col, "p/q"], ...]}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleJson {
    pub dim: usize,
    pub parity: Vec<u8>,
    pub action: BTreeMap<String, Vec<(usize, usize, String)>>,
}

impl GModule {
    pub fn new(parities: Vec<Parity>, acting: Vec<usize>, action: Vec<LinearMap>) -> Result<Self, RepnError> {
        let d = parities.len();
        if acting.len() != action.len() || acting.windows(2).any(|w| w[0] >= w[1]) {
            return Err(RepnError::ActingSet);
        }
        if let Some(bad) = action.iter().find(|a| a.rows() != d || a.cols() != d) {
            return Err(RepnError::Dimension {
                expected: d,
                got: bad.rows().max(bad.cols()),
            });
        }
        Ok(GModule { parities, acting, action })
    }

    /// One of the three modules built with the context.
    pub fn from_carrier(ctx: &OspContext, carrier: Carrier) -> Result<Self, RepnError> {
        Ok(GModule {
            parities: ctx.parities(carrier),
            acting: (0..ctx.g.len()).collect(),
            action: ctx.action(carrier)?,
        })
    }

    /// `dim` copies of the even trivial module.
    pub fn trivial(ctx: &OspContext, dim: usize) -> Self {
        GModule {
            parities: vec![Parity::Even; dim],
            acting: (0..ctx.g.len()).collect(),
            action: vec![LinearMap::zero(dim, dim); ctx.g.len()],
        }
    }

    pub fn dim(&self) -> usize {
        self.parities.len()
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    pub fn acting(&self) -> &[usize] {
        &self.acting
    }

    pub fn is_full(&self, ctx: &OspContext) -> bool {
        self.acting.len() == ctx.g.len()
    }

    /// `ρ(x_i)` for the basis element `i` of `g`, if it acts.
    pub fn rho(&self, i: usize) -> Option<&LinearMap> {
        self.acting.binary_search(&i).ok().map(|k| &self.action[k])
    }

    pub fn actions(&self) -> impl Iterator<Item = (usize, &LinearMap)> {
        self.acting.iter().copied().zip(&self.action)
    }

    pub fn direct_sum(parts: &[&GModule]) -> Result<Self, RepnError> {
        let Some(first) = parts.first() else {
            return Err(RepnError::ActingSet);
        };
        if parts.iter().any(|p| p.acting != first.acting) {
            return Err(RepnError::ActingSet);
        }
        let action = (0..first.acting.len())
            .map(|k| LinearMap::direct_sum(&parts.iter().map(|p| &p.action[k]).collect::<Vec<_>>()))
            .collect();
        Ok(GModule {
            parities: parts.iter().flat_map(|p| p.parities.iter().copied()).collect(),
            acting: first.acting.clone(),
            action,
        })
    }

    /// The same module with basis vector `k` moved to position `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut parities = self.parities.clone();
        for (k, &p) in perm.iter().enumerate() {
            parities[p] = self.parities[k];
        }
        GModule {
            parities,
            acting: self.acting.clone(),
            action: self.action.iter().map(|a| a.permuted(perm)).collect(),
        }
    }

    /// Restriction to the even part of `g`.
    pub fn restrict_even(&self, ctx: &OspContext) -> Self {
        let keep: Vec<usize> = (0..self.acting.len()).filter(|&k| !ctx.g.elements[self.acting[k]].parity.is_odd()).collect();
        GModule {
            parities: self.parities.clone(),
            acting: keep.iter().map(|&k| self.acting[k]).collect(),
            action: keep.iter().map(|&k| self.action[k].clone()).collect(),
        }
    }

    /// The span of the basis vectors of one parity, as a module over the even
    /// part of `g` (which preserves it). Its basis vectors are all even.
    pub fn parity_part(&self, ctx: &OspContext, parity: Parity) -> Result<Self, RepnError> {
        if self.acting.iter().any(|&i| ctx.g.elements[i].parity.is_odd()) {
            return Err(RepnError::OddActing);
        }
        let keep: Vec<usize> = (0..self.dim()).filter(|&k| self.parities[k] == parity).collect();
        let mut position = vec![usize::MAX; self.dim()];
        for (new, &old) in keep.iter().enumerate() {
            position[old] = new;
        }
        let action = self
            .action
            .iter()
            .map(|a| {
                let cols = keep.iter().map(|&c| a.column(c).map_indices(|r| position[r])).collect();
                LinearMap::from_columns(keep.len(), cols)
            })
            .collect();
        Ok(GModule {
            parities: vec![Parity::Even; keep.len()],
            acting: self.acting.clone(),
            action,
        })
    }

    /// `x(v⊗w) = xv⊗w + (−1)^{|x||v|} v⊗xw` on the basis `v_i⊗w_j ↦ i·dim(w)+j`.
    pub fn tensor(&self, other: &GModule, ctx: &OspContext) -> Result<Self, RepnError> {
        if self.acting != other.acting {
            return Err(RepnError::ActingSet);
        }
        let (da, db) = (self.dim(), other.dim());
        let mut parities = Vec::with_capacity(da * db);
        for &p in &self.parities {
            for &q in &other.parities {
                parities.push(p + q);
            }
        }
        let action = self
            .actions()
            .zip(&other.action)
            .map(|((x, a), b)| {
                let xp = ctx.g.elements[x].parity;
                let mut cols = Vec::with_capacity(da * db);
                for i in 0..da {
                    let s = scalar::sign(sign_flip(xp, self.parities[i]));
                    for j in 0..db {
                        let mut col = SparseVec::new();
                        for (r, c) in a.column(i).iter() {
                            col.add_term(r * db + j, c.clone());
                        }
                        for (r, c) in b.column(j).iter() {
                            col.add_term(i * db + r, c * &s);
                        }
                        cols.push(col);
                    }
                }
                LinearMap::from_columns(da * db, cols)
            })
            .collect();
        Ok(GModule {
            parities,
            acting: self.acting.clone(),
            action,
        })
    }

    /// First pair `(i, j)` of acting elements with `ρ([x_i,x_j]) ≠ [ρ(x_i),ρ(x_j)]`.
    /// Pairs whose bracket leaves the acting span are skipped.
    pub fn homomorphism_violation(&self, ctx: &OspContext) -> Result<Option<(usize, usize)>, RepnError> {
        let table = ctx.g_table()?;
        for (a, (i, ri)) in self.actions().enumerate() {
            for (j, rj) in self.actions().skip(a) {
                let br = table.get(i, j);
                let mut lhs = LinearMap::zero(self.dim(), self.dim());
                let mut inside = true;
                for (k, c) in br.iter() {
                    match self.rho(k) {
                        Some(rk) => lhs.add_scaled(c, rk),
                        None => inside = false,
                    }
                }
                if !inside {
                    continue;
                }
                let odd = sign_flip(ctx.g.elements[i].parity, ctx.g.elements[j].parity);
                if lhs != LinearMap::graded_commutator(ri, rj, odd) {
                    return Ok(Some((i, j)));
                }
            }
        }
        Ok(None)
    }

    pub fn to_json(&self, ctx: &OspContext) -> ModuleJson {
        ModuleJson {
            dim: self.dim(),
            parity: self.parities.iter().map(|p| p.bit()).collect(),
            action: self.actions().map(|(i, a)| (ctx.g.elements[i].label.clone(), a.triplets())).collect(),
        }
    }

    pub fn from_json(j: &ModuleJson, ctx: &OspContext) -> Result<Self, RepnError> {
        if j.parity.len() != j.dim {
            return Err(RepnError::Dimension {
                expected: j.dim,
                got: j.parity.len(),
            });
        }
        let parities = j
            .parity
            .iter()
            .map(|&b| match b {
                0 => Ok(Parity::Even),
                1 => Ok(Parity::Odd),
                other => Err(RepnError::Parse(format!("parity entry {other}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let index: BTreeMap<&str, usize> = ctx.g.elements.iter().enumerate().map(|(i, e)| (e.label.as_str(), i)).collect();
        let mut by_index: BTreeMap<usize, LinearMap> = BTreeMap::new();
        for (label, triplets) in &j.action {
            let &i = index.get(label.as_str()).ok_or_else(|| RepnError::UnknownLabel(label.clone()))?;
            let mut entries: Vec<(usize, usize, Scalar)> = Vec::with_capacity(triplets.len());
            for (r, c, v) in triplets {
                if *r >= j.dim || *c >= j.dim {
                    return Err(RepnError::Parse(format!("entry ({r}, {c}) of {label} outside dimension {}", j.dim)));
                }
                entries.push((*r, *c, scalar::parse(v)?));
            }
            by_index.insert(i, LinearMap::from_entries(j.dim, j.dim, entries));
        }
        let (acting, action) = by_index.into_iter().unzip();
        GModule::new(parities, acting, action)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::osp::build_context;

    #[test]
    fn natural_module_is_a_representation() {
        let ctx = build_context(1, 1).unwrap();
        let u = GModule::from_carrier(&ctx, Carrier::U).unwrap();
        assert_eq!(u.homomorphism_violation(&ctx).unwrap(), None);
    }

    #[test]
    fn tensor_square_is_a_representation() {
        let ctx = build_context(1, 1).unwrap();
        let u = GModule::from_carrier(&ctx, Carrier::U).unwrap();
        let uu = u.tensor(&u, &ctx).unwrap();
        assert_eq!(uu.dim(), 25);
        assert_eq!(uu.homomorphism_violation(&ctx).unwrap(), None);
    }

    #[test]
    fn dropping_the_odd_sign_breaks_the_tensor_action() {
        let ctx = build_context(1, 1).unwrap();
        let u = GModule::from_carrier(&ctx, Carrier::U).unwrap();
        let uu = u.tensor(&u, &ctx).unwrap();
        // x(v⊗w) = xv⊗w + v⊗xw, obtained by pretending every vector is even.
        let even_u = GModule {
            parities: vec![Parity::Even; u.dim()],
            ..u.clone()
        };
        let untwisted = GModule {
            action: even_u.tensor(&even_u, &ctx).unwrap().action,
            ..uu
        };
        assert!(untwisted.homomorphism_violation(&ctx).unwrap().is_some());
    }

    #[test]
    fn reads_hand_written_json() {
        let ctx = build_context(1, 1).unwrap();
        let h1 = ctx.g.elements[ctx.g.weight_space(&crate::roots::Weight::zero())[0]].label.clone();
        let raw = format!(r#"{{"dim": 2, "parity": [0, 1], "action": {{"{h1}": [[1, 0, "0"], [0, 0, "-1/2"]]}}}}"#);
        let j: ModuleJson = serde_json::from_str(&raw).unwrap();
        let m = GModule::from_json(&j, &ctx).unwrap();
        assert_eq!(m.acting().len(), 1);
        assert_eq!(m.actions().next().unwrap().1.get(0, 0), scalar::frac(-1, 2));
        let bad = ModuleJson {
            action: BTreeMap::from([("nope".to_string(), vec![])]),
            ..j
        };
        assert_eq!(GModule::from_json(&bad, &ctx), Err(RepnError::UnknownLabel("nope".into())));
    }

    #[test]
    fn parity_part_needs_even_action() {
        let ctx = build_context(1, 1).unwrap();
        let u = GModule::from_carrier(&ctx, Carrier::U).unwrap();
        assert_eq!(u.parity_part(&ctx, Parity::Even), Err(RepnError::OddActing));
        let u0 = u.restrict_even(&ctx).parity_part(&ctx, Parity::Even).unwrap();
        assert_eq!(u0.dim(), 3);
        assert_eq!(u0.homomorphism_violation(&ctx).unwrap(), None);
    }
}
