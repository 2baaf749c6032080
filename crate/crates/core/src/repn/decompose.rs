use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::weights::weights_of;
use super::{GModule, RepnError};
use crate::exactalg::scalar::Scalar;
use crate::exactalg::{rank, Coordinatizer, Eliminator, LinearMap, SparseVec};
use crate::osp::{psi, Carrier, Casimir, OspContext};
use crate::roots::{Symbol, Weight};

/// The four irreducible modules a decomposition may produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Tag {
    Adjoint,
    SecondNatural,
    Natural,
    Trivial,
}

impl Tag {
    pub const ALL: [Tag; 4] = [Tag::Adjoint, Tag::SecondNatural, Tag::Natural, Tag::Trivial];

    /// Highest weight with respect to the fixed positive system (needs `n ≥ 2`).
    pub fn highest_weight(self) -> Weight {
        match self {
            Tag::Adjoint => Weight::delta(1).scale_int(2),
            Tag::SecondNatural => &Weight::delta(1) + &Weight::delta(2),
            Tag::Natural => Weight::delta(1),
            Tag::Trivial => Weight::zero(),
        }
    }

    pub fn carrier(self) -> Option<Carrier> {
        match self {
            Tag::Adjoint => Some(Carrier::G),
            Tag::SecondNatural => Some(Carrier::S),
            Tag::Natural => Some(Carrier::U),
            Tag::Trivial => None,
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.carrier() {
            Some(c) => write!(f, "{c}"),
            None => write!(f, "trivial"),
        }
    }
}

/// Positivity for the base `δ_1−δ_2, …, δ_n−ε_1, ε_1−ε_2, …, ε_m`: the first
/// nonzero coefficient in the order `δ_1, …, δ_n, ε_1, …, ε_m` is positive.
pub fn is_positive(w: &Weight, m: u32, n: u32) -> bool {
    let order = (1..=n).map(Symbol::Delta).chain((1..=m).map(Symbol::Eps));
    for s in order {
        let c = w.coeff(s);
        if !c.is_zero() {
            return c > Scalar::zero();
        }
    }
    false
}

/// Basis of the vectors in `space` killed by every `ρ(x)`, `x` in `killers`.
fn singular_in(module: &GModule, killers: &[usize], space: &[SparseVec]) -> Vec<SparseVec> {
    let mut elim = Eliminator::new(space.len());
    for &x in killers {
        let rho = module.rho(x).expect("full action");
        let mut rows: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (k, v) in space.iter().enumerate() {
            for (r, a) in rho.apply(v).iter() {
                rows.entry(r).or_default().add_term(k, a.clone());
            }
        }
        for row in rows.values() {
            elim.push(row);
        }
    }
    elim.nullspace()
        .iter()
        .map(|c| {
            let mut v = SparseVec::new();
            for (k, a) in c.iter() {
                v.add_scaled(a, &space[k]);
            }
            v
        })
        .collect()
}

/// An irreducible model with a spanning family produced from its highest
/// weight vector by explicit words in the lowering operators.
struct Model {
    tag: Tag,
    module: GModule,
    /// `(parent, g index)`: family member `k+1` is `ρ(x) · member[parent]`.
    words: Vec<(usize, usize)>,
    /// Standard basis vectors in terms of the family.
    inverse: Vec<SparseVec>,
}

impl Model {
    fn new(ctx: &OspContext, tag: Tag, positive: &[usize], lowering: &[usize]) -> Result<Self, RepnError> {
        let module = match tag.carrier() {
            Some(c) => GModule::from_carrier(ctx, c)?,
            None => GModule::trivial(ctx, 1),
        };
        let hw = tag.highest_weight();
        let ws = weights_of(&module, ctx)?;
        let singular = singular_in(&module, positive, ws.spaces.get(&hw).map_or(&[][..], Vec::as_slice));
        if singular.len() != 1 {
            return Err(RepnError::ModelHighestWeight(tag.to_string()));
        }
        let dim = module.dim();
        let mut family = vec![singular[0].clone()];
        let mut words = Vec::new();
        let mut elim = Eliminator::new(dim);
        elim.push(&family[0]);
        let mut k = 0;
        while k < family.len() && family.len() < dim {
            for &x in lowering {
                let v = module.rho(x).expect("full action").apply(&family[k]);
                if elim.push(&v) {
                    family.push(v);
                    words.push((k, x));
                }
            }
            k += 1;
        }
        if family.len() != dim {
            return Err(RepnError::ModelHighestWeight(tag.to_string()));
        }
        let coord = Coordinatizer::new(&family);
        let inverse = (0..dim).map(|j| coord.coords(&SparseVec::unit(j)).expect("spanning family")).collect();
        Ok(Model { tag, module, words, inverse })
    }

    /// The map model → target sending the model's highest weight vector to `seed`
    /// and each generating word to the same word applied to `seed`.
    fn intertwiner(&self, target: &GModule, seed: &SparseVec) -> LinearMap {
        let mut images = vec![seed.clone()];
        for &(parent, x) in &self.words {
            let v = target.rho(x).expect("full action").apply(&images[parent]);
            images.push(v);
        }
        let cols = self
            .inverse
            .iter()
            .map(|c| {
                let mut v = SparseVec::new();
                for (k, a) in c.iter() {
                    v.add_scaled(a, &images[k]);
                }
                v
            })
            .collect();
        LinearMap::from_columns(target.dim(), cols)
    }
}

fn equivariant(phi: &LinearMap, source: &GModule, target: &GModule) -> bool {
    source.actions().all(|(x, rs)| match target.rho(x) {
        Some(rt) => rt.compose(phi) == phi.compose(rs),
        None => false,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FoundConstituent {
    pub tag: Tag,
    /// Columns are the images of the model's standard basis.
    pub intertwiner: LinearMap,
    pub injective: bool,
    pub equivariant: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub dim: usize,
    pub constituents: Vec<FoundConstituent>,
    /// Rank of the union of all images.
    pub image_rank: usize,
    pub direct: bool,
    pub exhaustive: bool,
    /// A carrier basis index outside the sum of the images.
    pub residual_witness: Option<usize>,
}

impl DecompositionReport {
    pub fn tags(&self) -> BTreeMap<Tag, usize> {
        let mut out = BTreeMap::new();
        for c in &self.constituents {
            *out.entry(c.tag).or_default() += 1;
        }
        out
    }

    pub fn success(&self) -> bool {
        self.direct && self.exhaustive && self.constituents.iter().all(|c| c.injective && c.equivariant)
    }
}

/// Splits modules into copies of `g`, `s`, `u` and the trivial module, reusing
/// the models across calls.
pub struct Decomposer<'a> {
    ctx: &'a OspContext,
    positive: Vec<usize>,
    models: Vec<Model>,
    psi: BTreeSet<Weight>,
}

impl<'a> Decomposer<'a> {
    pub fn new(ctx: &'a OspContext) -> Result<Self, RepnError> {
        if ctx.n < 2 {
            return Err(RepnError::SmallN(ctx.n));
        }
        let (mut positive, mut lowering) = (Vec::new(), Vec::new());
        for (i, e) in ctx.g.elements.iter().enumerate() {
            if is_positive(&e.weight, ctx.m, ctx.n) {
                positive.push(i);
            } else if is_positive(&-&e.weight, ctx.m, ctx.n) {
                lowering.push(i);
            }
        }
        let models = Tag::ALL.iter().map(|&t| Model::new(ctx, t, &positive, &lowering)).collect::<Result<_, _>>()?;
        Ok(Decomposer {
            ctx,
            positive,
            models,
            psi: psi(ctx.m, ctx.n),
        })
    }

    pub fn decompose(&self, module: &GModule) -> Result<DecompositionReport, RepnError> {
        if !module.is_full(self.ctx) {
            return Err(RepnError::ActingSet);
        }
        let ws = weights_of(module, self.ctx)?;
        if let Some(w) = ws.spaces.keys().find(|w| !self.psi.contains(w)) {
            return Err(RepnError::OutsidePsi(w.to_string()));
        }
        let mut constituents = Vec::new();
        let mut images: Vec<SparseVec> = Vec::new();
        for model in &self.models {
            let Some(space) = ws.spaces.get(&model.tag.highest_weight()) else {
                continue;
            };
            for seed in singular_in(module, &self.positive, space) {
                let phi = model.intertwiner(module, &seed);
                let injective = rank(phi.columns(), module.dim()) == phi.cols();
                let equivariant = equivariant(&phi, &model.module, module);
                images.extend(phi.columns().iter().cloned());
                constituents.push(FoundConstituent {
                    tag: model.tag,
                    intertwiner: phi,
                    injective,
                    equivariant,
                });
            }
        }
        let coord = Coordinatizer::new(&images);
        let image_rank = coord.rank();
        let residual_witness = (0..module.dim()).find(|&k| !coord.contains(&SparseVec::unit(k)));
        Ok(DecompositionReport {
            dim: module.dim(),
            direct: image_rank == images.len(),
            exhaustive: image_rank == module.dim(),
            image_rank,
            residual_witness,
            constituents,
        })
    }

    /// The scalar by which `Γ` acts on each constituent's image, or `None` where
    /// it is not a scalar.
    pub fn casimir_scalars(&self, casimir: &Casimir, module: &GModule, report: &DecompositionReport) -> Vec<Option<Scalar>> {
        let rho: Vec<&LinearMap> = (0..self.ctx.g.len()).map(|i| module.rho(i).expect("full action")).collect();
        let gamma = |v: &SparseVec| {
            let mut out = SparseVec::new();
            for (i, k, c) in &casimir.terms {
                out.add_scaled(c, &rho[*i].apply(&rho[*k].apply(v)));
            }
            out
        };
        report
            .constituents
            .iter()
            .map(|c| {
                let cols = c.intertwiner.columns();
                let first = cols.first()?;
                let (lead, a) = first.iter().next()?;
                let value = gamma(first).get(lead) / a;
                cols.iter().all(|v| gamma(v) == v.scaled(&value)).then_some(value)
            })
            .collect()
    }
}

pub fn decompose(module: &GModule, ctx: &OspContext) -> Result<DecompositionReport, RepnError> {
    Decomposer::new(ctx)?.decompose(module)
}

/// A direct sum of `1..=max_parts` constituents drawn from `{g, s, u, trivial}`,
/// with its basis shuffled. Returns the module and the drawn tags.
pub fn shuffled_sum(ctx: &OspContext, seed: u64, max_parts: usize) -> Result<(GModule, Vec<Tag>), RepnError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = rng.gen_range(1..=max_parts.max(1));
    let tags: Vec<Tag> = (0..count).map(|_| Tag::ALL[rng.gen_range(0..4)]).collect();
    let mut pieces = BTreeMap::new();
    for &t in &tags {
        if let std::collections::btree_map::Entry::Vacant(e) = pieces.entry(t) {
            e.insert(match t.carrier() {
                Some(c) => GModule::from_carrier(ctx, c)?,
                None => GModule::trivial(ctx, 1),
            });
        }
    }
    let parts: Vec<&GModule> = tags.iter().map(|t| &pieces[t]).collect();
    let sum = GModule::direct_sum(&parts)?;
    let mut perm: Vec<usize> = (0..sum.dim()).collect();
    perm.shuffle(&mut rng);
    Ok((sum.permuted(&perm), tags))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar;
    use crate::osp::{build_context, casimir};

    fn ctx22() -> OspContext {
        build_context(2, 2).unwrap()
    }

    #[test]
    fn positivity_follows_the_base() {
        let (m, n) = (2, 2);
        let simple = [
            &Weight::delta(1) - &Weight::delta(2),
            &Weight::delta(2) - &Weight::eps(1),
            &Weight::eps(1) - &Weight::eps(2),
            Weight::eps(2),
        ];
        assert!(simple.iter().all(|w| is_positive(w, m, n)));
        assert!(!is_positive(&(&Weight::eps(1) - &Weight::delta(2)), m, n));
        assert!(!is_positive(&Weight::zero(), m, n));
    }

    #[test]
    fn adjoint_times_two() {
        let ctx = ctx22();
        let g = GModule::from_carrier(&ctx, Carrier::G).unwrap();
        let gg = GModule::direct_sum(&[&g, &g]).unwrap();
        let rep = decompose(&gg, &ctx).unwrap();
        assert!(rep.success(), "{:?}", rep.residual_witness);
        assert_eq!(rep.tags(), BTreeMap::from([(Tag::Adjoint, 2)]));
    }

    #[test]
    fn mixed_sum_with_casimir_scalars() {
        let ctx = ctx22();
        let g = GModule::from_carrier(&ctx, Carrier::G).unwrap();
        let u = GModule::from_carrier(&ctx, Carrier::U).unwrap();
        let t = GModule::trivial(&ctx, 1);
        let module = GModule::direct_sum(&[&g, &u, &t]).unwrap();
        let d = Decomposer::new(&ctx).unwrap();
        let rep = d.decompose(&module).unwrap();
        assert!(rep.success());
        assert_eq!(rep.tags(), BTreeMap::from([(Tag::Adjoint, 1), (Tag::Natural, 1), (Tag::Trivial, 1)]));
        let c = casimir(&ctx).unwrap();
        let scalars = d.casimir_scalars(&c, &module, &rep);
        // n = m = 2: −2−4(n−m), −2(n−m), 0.
        assert_eq!(scalars, vec![Some(scalar::int(-2)), Some(scalar::int(0)), Some(scalar::int(0))]);
    }

    #[test]
    fn tensor_square_of_natural_module() {
        let ctx = ctx22();
        let u = GModule::from_carrier(&ctx, Carrier::U).unwrap();
        let uu = u.tensor(&u, &ctx).unwrap();
        let rep = decompose(&uu, &ctx).unwrap();
        assert!(rep.success());
        assert_eq!(rep.tags(), BTreeMap::from([(Tag::Adjoint, 1), (Tag::SecondNatural, 1), (Tag::Trivial, 1)]));
        // Highest weights of the constituents lie in δ1 + weights(u).
        let shifted: BTreeSet<Weight> = crate::osp::expected_u_weights(2, 2).iter().map(|w| w + &Weight::delta(1)).collect();
        assert!(rep.tags().keys().all(|t| shifted.contains(&t.highest_weight())));
    }

    #[test]
    fn weights_outside_psi_are_refused() {
        let ctx = ctx22();
        let g = GModule::from_carrier(&ctx, Carrier::G).unwrap();
        let u = GModule::from_carrier(&ctx, Carrier::U).unwrap();
        // Contains 3δ1.
        let ug = u.tensor(&g, &ctx).unwrap();
        assert!(matches!(decompose(&ug, &ctx), Err(RepnError::OutsidePsi(_))));
    }

    #[test]
    fn rank_one_odd_part_is_unsupported() {
        let ctx = build_context(2, 1).unwrap();
        assert!(matches!(Decomposer::new(&ctx), Err(RepnError::SmallN(1))));
    }
}
