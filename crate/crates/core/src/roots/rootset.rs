use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::weight::{Symbol, SymmetricForm, Weight};
use super::RootError;
use crate::exactalg::scalar::{self, Scalar};

/// Finite set of weights together with a symmetric form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSet {
    pub roots: BTreeSet<Weight>,
    pub form: SymmetricForm,
    pub tag: Option<String>,
    /// Irreducible real components as supplied by a generator, in table order.
    pub components: Vec<BTreeSet<Weight>>,
}

impl RootSet {
    pub fn new(roots: BTreeSet<Weight>, form: SymmetricForm) -> Self {
        RootSet {
            roots,
            form,
            tag: None,
            components: Vec::new(),
        }
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = Some(tag.into());
        self
    }

    pub fn contains(&self, w: &Weight) -> bool {
        self.roots.contains(w)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = &Weight> {
        self.roots.iter().filter(|w| !w.is_zero())
    }

    pub fn len_nonzero(&self) -> usize {
        self.nonzero().count()
    }

    pub fn pair(&self, a: &Weight, b: &Weight) -> Scalar {
        self.form.pair(a, b)
    }

    pub fn is_real(&self, a: &Weight) -> bool {
        !self.form.norm(a).is_zero()
    }

    /// Nonzero roots orthogonal to every root (the intersection with the radical).
    pub fn radical_roots(&self) -> BTreeSet<Weight> {
        self.nonzero()
            .filter(|a| self.roots.iter().all(|b| self.pair(a, b).is_zero()))
            .cloned()
            .collect()
    }

    pub fn real_nonzero(&self) -> BTreeSet<Weight> {
        self.nonzero().filter(|a| self.is_real(a)).cloned().collect()
    }

    /// Nonzero isotropic roots outside the radical.
    pub fn imaginary_nonzero(&self) -> BTreeSet<Weight> {
        let rad = self.radical_roots();
        self.nonzero().filter(|a| !self.is_real(a) && !rad.contains(*a)).cloned().collect()
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut s: BTreeSet<Symbol> = self.roots.iter().flat_map(|w| w.support().collect::<Vec<_>>()).collect();
        s.extend(self.form.symbols());
        s
    }

    pub fn rescaled(&self, r: &Scalar) -> RootSet {
        RootSet {
            form: self.form.scaled(r),
            ..self.clone()
        }
    }

    /// Irreducible components of the real roots, by connectivity of non-orthogonality.
    pub fn real_components(&self) -> Vec<BTreeSet<Weight>> {
        if !self.components.is_empty() {
            return self.components.clone();
        }
        let real: Vec<Weight> = self.real_nonzero().into_iter().collect();
        connected_components(&real, |a, b| !self.pair(a, b).is_zero())
    }

    /// Short, long and extra-long roots over all real components.
    pub fn length_classes(&self) -> LengthClasses {
        let mut out = LengthClasses::default();
        for comp in self.real_components() {
            let Some(min) = comp.iter().map(|a| self.form.norm(a).abs()).min() else { continue };
            let short: BTreeSet<Weight> = comp.iter().filter(|a| self.form.norm(a).abs() == min).cloned().collect();
            for a in &comp {
                if short.contains(a) {
                    out.short.insert(a.clone());
                } else if short.iter().any(|s| &s.scale_int(2) == a) {
                    out.extra_long.insert(a.clone());
                } else {
                    out.long.insert(a.clone());
                }
            }
        }
        out
    }

    /// Serializable view.
    pub fn to_json(&self) -> RootSetJson {
        let symbols: Vec<String> = self.symbols().iter().map(|s| s.to_string()).collect();
        let gram = self.form.entries().map(|(a, b, c)| (a.to_string(), b.to_string(), scalar::format(c))).collect();
        RootSetJson {
            symbols,
            gram,
            roots: self.roots.iter().map(Weight::to_pairs).collect(),
            tag: self.tag.clone(),
            components: self.components.iter().map(|c| c.iter().map(Weight::to_pairs).collect()).collect(),
        }
    }

    pub fn from_json(j: &RootSetJson) -> Result<RootSet, RootError> {
        let mut form = SymmetricForm::new();
        for (a, b, c) in &j.gram {
            let c = scalar::parse(c).map_err(|_| RootError::ParseSymbol(c.clone()))?;
            form.set(a.parse()?, b.parse()?, c);
        }
        let roots = j.roots.iter().map(|r| Weight::from_string_pairs(r)).collect::<Result<_, _>>()?;
        let components = j
            .components
            .iter()
            .map(|c| c.iter().map(|r| Weight::from_string_pairs(r)).collect::<Result<BTreeSet<_>, _>>())
            .collect::<Result<_, _>>()?;
        Ok(RootSet {
            roots,
            form,
            tag: j.tag.clone(),
            components,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LengthClasses {
    pub short: BTreeSet<Weight>,
    pub long: BTreeSet<Weight>,
    pub extra_long: BTreeSet<Weight>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSetJson {
    pub symbols: Vec<String>,
    pub gram: Vec<(String, String, String)>,
    pub roots: Vec<Vec<(String, String)>>,
    #[serde(default)]
    pub tag: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<Vec<Vec<(String, String)>>>,
}

pub fn connected_components<F: Fn(&Weight, &Weight) -> bool>(items: &[Weight], linked: F) -> Vec<BTreeSet<Weight>> {
    let mut seen = vec![false; items.len()];
    let mut out = Vec::new();
    for start in 0..items.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = BTreeSet::new();
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            comp.insert(items[i].clone());
            for j in 0..items.len() {
                if !seen[j] && linked(&items[i], &items[j]) {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// `r_α(β) = β − (2(β,α)/(α,α)) α`.
pub fn reflect(alpha: &Weight, beta: &Weight, form: &SymmetricForm) -> Result<Weight, RootError> {
    let n = form.norm(alpha);
    if n.is_zero() {
        return Err(RootError::Isotropic(alpha.label()));
    }
    let k = scalar::int(2) * form.pair(beta, alpha) / n;
    Ok(beta.add_scaled(&-k, alpha))
}

/// Root string of `β` in direction `α`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootString {
    pub p: i64,
    pub q: i64,
    pub string: Vec<String>,
    /// Multiples `k` with `β + kα ∈ R`, in increasing order.
    pub offsets: Vec<i64>,
    pub unbroken: bool,
    pub matches_cartan: bool,
}

/// Computes `{β + kα} ∩ R` and checks it is `β−pα, …, β+qα` with `p−q = 2(β,α)/(α,α)`.
pub fn root_string(alpha: &Weight, beta: &Weight, r: &RootSet) -> Result<RootString, RootError> {
    let n = r.form.norm(alpha);
    if n.is_zero() || alpha.is_zero() {
        return Err(RootError::Isotropic(alpha.label()));
    }
    let mut offsets: Vec<i64> = r
        .roots
        .iter()
        .filter_map(|g| {
            let d = g - beta;
            if d.is_zero() {
                return Some(0);
            }
            d.ratio_to(alpha).and_then(|k| scalar::as_i64(&k))
        })
        .collect();
    offsets.sort_unstable();
    let (p, q) = match (offsets.first(), offsets.last()) {
        (Some(lo), Some(hi)) => (-lo.min(&0), *hi.max(&0)),
        _ => (0, 0),
    };
    let unbroken = offsets.contains(&0) && offsets.len() as i64 == p + q + 1;
    let cartan = scalar::int(2) * r.pair(beta, alpha) / n;
    let matches_cartan = cartan == scalar::int(p - q);
    let string = offsets.iter().map(|k| beta.add_scaled(&scalar::int(*k), alpha).label()).collect();
    Ok(RootString {
        p,
        q,
        string,
        offsets,
        unbroken,
        matches_cartan,
    })
}

/// Even/odd split: `R₀ = {α ∈ R_re : 2α ∉ R}`, or `R_re ∖ (R²_re)_sh` for the two-`BC` row.
pub fn partition_even_odd(r: &RootSet) -> Result<(BTreeSet<Weight>, BTreeSet<Weight>), RootError> {
    let mut real = r.real_nonzero();
    real.insert(Weight::zero());
    let even: BTreeSet<Weight> = if r.tag.as_deref().is_some_and(|t| t.starts_with("BC(")) {
        let second = r.components.get(1).ok_or(RootError::MissingComponents)?;
        let sub = RootSet::new(second.clone(), r.form.clone());
        let short = sub.length_classes().short;
        real.into_iter().filter(|a| !short.contains(a)).collect()
    } else {
        real.into_iter().filter(|a| a.is_zero() || !r.contains(&a.scale_int(2))).collect()
    };
    let odd = r.roots.iter().filter(|a| !even.contains(*a)).cloned().collect();
    Ok((even, odd))
}

/// Closure of `seeds` under the reflections in `reflectors`.
pub fn weyl_closure(seeds: &BTreeSet<Weight>, reflectors: &BTreeSet<Weight>, form: &SymmetricForm) -> Result<BTreeSet<Weight>, RootError> {
    let mut seen = seeds.clone();
    let mut frontier: Vec<Weight> = seeds.iter().cloned().collect();
    while let Some(w) = frontier.pop() {
        for a in reflectors {
            let img = reflect(a, &w, form)?;
            if seen.insert(img.clone()) {
                frontier.push(img);
            }
        }
    }
    Ok(seen)
}

/// Whether every reflection in a real root maps `R` onto itself.
pub fn weyl_invariant(r: &RootSet) -> Result<Option<(Weight, Weight)>, RootError> {
    for a in r.real_nonzero() {
        for b in &r.roots {
            let img = reflect(&a, b, &r.form)?;
            if !r.contains(&img) {
                return Ok(Some((a, b.clone())));
            }
        }
    }
    Ok(None)
}
