use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::check::{form_checks, rank_of_rows, Verdict};
use super::core::{center_of, combo_label, core};
use super::{EalsError, SuperToralTriple, WindowRule};
use crate::exactalg::scalar::{self, Scalar};
use crate::exactalg::{Coordinatizer, Eliminator, LinearMap, Parity, SparseVec, StructureTable, SuperAlgebra};
use crate::graded::rootgraded::find_toral;
use crate::graded::{build_graded, center, verify_root_graded, CoordinateData, GradedAlgebra, Sector};
use crate::osp::{build_context, OspContext};
use crate::roots::{RootSet, Symbol, Weight};

/// `(x⊗a, y⊗a′) = ½str(xy)·τ(aa′)` on `g⊗A`, with `τ` the sum of the
/// coefficients on degree-0 basis elements of `a`.
pub fn loop_form(ctx: &OspContext, l: &GradedAlgebra, data: &CoordinateData) -> Result<LinearMap, EalsError> {
    let n = l.dim();
    let mut entries = Vec::new();
    for i in 0..n {
        let oi = l.origins()[i];
        if oi.sector != Sector::G {
            return Err(EalsError::Shape(format!("{} is outside g⊗A", l.label(i))));
        }
        for j in 0..n {
            let oj = l.origins()[j];
            if l.degrees()[i] + l.degrees()[j] != 0 {
                continue;
            }
            let kappa = ctx.trace_form(oi.carrier, oj.carrier);
            if kappa == scalar::zero() {
                continue;
            }
            let prod = data.a_mul(&data.fixed()[oi.coordinate], &data.fixed()[oj.coordinate])?;
            let tau: Scalar = prod.iter().filter(|(k, _)| data.a_degree[*k] == 0).map(|(_, c)| c.clone()).sum();
            if tau != scalar::zero() {
                entries.push((i, j, kappa * tau));
            }
        }
    }
    Ok(LinearMap::from_entries(n, n, entries))
}

/// `osp(2m+1|2n) ⊗ ℚ[t, t⁻¹]` truncated to degrees `|k| ≤ window`, with its loop form.
pub fn loop_osp(m: u32, n: u32, window: i64) -> Result<(GradedAlgebra, LinearMap), EalsError> {
    let ctx = build_context(m, n)?;
    let data = CoordinateData::laurent(window);
    let l = build_graded(&ctx, &data)?;
    let form = loop_form(&ctx, &l, &data)?;
    Ok((l, form))
}

/// `osp(2m+1|2n)` with the form `½str` and its diagonal Cartan subalgebra.
pub fn osp_triple(ctx: &OspContext) -> Result<SuperToralTriple, EalsError> {
    let table = ctx.g_table()?.clone();
    let dim = ctx.g.elements.len();
    let entries = (0..dim).flat_map(|i| (0..dim).map(move |j| (i, j))).map(|(i, j)| (i, j, ctx.trace_form(i, j))).filter(|(_, _, c)| c != &scalar::zero());
    let form = LinearMap::from_entries(dim, dim, entries.collect::<Vec<_>>());
    let cartan = ctx.g.weight_space(&Weight::zero()).to_vec();
    SuperToralTriple::new(format!("osp({}|{})", 2 * ctx.m + 1, 2 * ctx.n), table, BTreeSet::new(), form, cartan, ctx.g.weights(), None)
}

/// `g ⊕ V ⊕ V†` with `V = ℚλ`, `V† = ℚd`, `d(λ) = 1`.
#[derive(Clone, Debug)]
pub struct AffinizedAlgebra {
    pub triple: SuperToralTriple,
    pub base_dim: usize,
    /// Index of `λ`, absent when every degree is 0.
    pub lambda_index: Option<usize>,
    pub derivation_index: Option<usize>,
    /// The chosen toral elements `k_α`, one per nonzero root of the grading subsystem.
    pub toral: Vec<SparseVec>,
    pub hypotheses: Vec<Verdict>,
}

fn base_as_triple(base: &GradedAlgebra, form: &LinearMap, cartan: Vec<usize>) -> Result<SuperToralTriple, EalsError> {
    SuperToralTriple::new(base.name.clone(), base.table().clone(), base.undefined().clone(), form.clone(), cartan, base.weights().to_vec(), None)
}

/// `e ∈ ^λg^0_i`, `f ∈ ^{−λ}g^0_i` with `[e, f] = 0` and `(e, f) ≠ 0`.
fn zero_weight_pair(base: &GradedAlgebra, form: &LinearMap, es: &[usize], fs: &[usize]) -> bool {
    for &e in es {
        let fs: Vec<usize> = fs.iter().copied().filter(|&f| base.parity(f) == base.parity(e)).collect();
        let Ok(images) = fs.iter().map(|&f| base.bracket_basis(e, f)).collect::<Result<Vec<_>, _>>() else { continue };
        let mut rows: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (j, v) in images.iter().enumerate() {
            for (k, c) in v.iter() {
                rows.entry(k).or_default().add_term(j, c.clone());
            }
        }
        let mut elim = Eliminator::new(fs.len());
        for r in rows.values() {
            elim.push(r);
        }
        for sol in elim.nullspace() {
            let p: Scalar = sol.iter().map(|(j, c)| c * form.get(e, fs[j])).sum();
            if p != scalar::zero() {
                return true;
            }
        }
    }
    false
}

/// Checks the hypotheses on the window and builds the affinization. `r` is the
/// root system grading `base`, `phi` its grading subsystem.
pub fn affinize(base: &GradedAlgebra, form: &LinearMap, r: &RootSet, phi: &RootSet) -> Result<AffinizedAlgebra, EalsError> {
    let n = base.dim();
    if base.weights().iter().any(|w| w.support().any(|s| matches!(s, Symbol::Lambda(_)))) {
        return Err(EalsError::Shape("base weights must not use λ symbols".into()));
    }
    let zero = Weight::zero();
    let cartan_g = base.weight_space(&zero, Some(0));
    let mut hyp = Vec::new();

    let mut centerless = Verdict::new("base: centerless");
    let z = center(base);
    centerless.checked = n as u64;
    if let Some(v) = z.first() {
        centerless.fail(combo_label(v, |i| base.label(i)));
    }
    hyp.push(centerless);

    let mut degrees = Verdict::new("base: (^λg, ^μg) = 0 unless λ+μ = 0");
    for (i, j, _) in form.entries() {
        degrees.checked += 1;
        if base.degrees()[i] + base.degrees()[j] != 0 {
            degrees.fail(format!("({}, {})", base.label(i), base.label(j)));
        }
    }
    hyp.push(degrees);

    let as_triple = base_as_triple(base, form, cartan_g.clone())?;
    for mut v in form_checks(&as_triple) {
        v.axiom = format!("base: {}", v.axiom);
        hyp.push(v);
    }

    let mut toral = Vec::new();
    let mut toral_v = Verdict::new("base: toral elements at every nonzero root of the grading subsystem");
    let mut skipped = 0;
    for a in phi.nonzero() {
        toral_v.checked += 1;
        let scalars: Vec<Scalar> = base.weights().iter().map(|b| r.pair(b, a)).collect();
        match find_toral(base, &scalars, &base.weight_space(a, Some(0)), &base.weight_space(&-a, Some(0)), &mut skipped) {
            Some((_, _, k)) => toral.push(k),
            None => toral_v.fail(a.label()),
        }
    }
    toral_v.inconclusive = skipped;
    hyp.push(toral_v);
    let mut toral_form = Verdict::new("base: form nondegenerate on the toral span");
    let t_rank = Coordinatizer::new(&toral).rank();
    let gram_rank = rank_of_rows(
        toral.iter().map(|x| toral.iter().enumerate().map(|(j, y)| (j, pair(form, x, y))).collect()),
        toral.len(),
    );
    toral_form.checked = toral.len() as u64;
    if gram_rank != t_rank {
        toral_form.fail(format!("Gram rank {gram_rank}, span {t_rank}"));
    }
    hyp.push(toral_form);
    let mut toral_span = Verdict::new("base: toral span is ^0g^0");
    toral_span.checked = cartan_g.len() as u64;
    let cartan_vecs: Vec<SparseVec> = cartan_g.iter().map(|&i| SparseVec::unit(i)).collect();
    if t_rank != cartan_g.len() || toral.iter().any(|k| !Coordinatizer::new(&cartan_vecs).contains(k)) {
        toral_span.fail(format!("rank {t_rank} against dim {}", cartan_g.len()));
    }
    hyp.push(toral_span);

    let mut zero_pairs = Verdict::new("base: ^λg^0 pairs with [e,f] = 0, (e,f) ≠ 0");
    let degs: BTreeSet<i64> = base.degrees().iter().copied().collect();
    for &d in &degs {
        for p in [Parity::Even, Parity::Odd] {
            let es: Vec<usize> = base.weight_space(&zero, Some(d)).into_iter().filter(|&i| base.parity(i) == p).collect();
            if es.is_empty() {
                continue;
            }
            zero_pairs.checked += 1;
            if !zero_weight_pair(base, form, &es, &base.weight_space(&zero, Some(-d))) {
                zero_pairs.fail(format!("degree {d} ({p:?})"));
            }
        }
    }
    hyp.push(zero_pairs);

    let rg = verify_root_graded(base, r, phi)?;
    let mut pred = Verdict::new("base: predivision");
    pred.checked = 1;
    pred.inconclusive = rg.skipped_out_of_window;
    if !rg.predivision {
        for w in rg.predivision_missing.iter().chain(&rg.toral_missing).chain(&rg.outside_r) {
            pred.fail(w.clone());
        }
        if pred.pass {
            pred.fail("root grading fails".into());
        }
    }
    hyp.push(pred);

    if let Some(bad) = hyp.iter().find(|v| !v.pass) {
        return Err(EalsError::Hypothesis { label: bad.axiom.clone(), witnesses: bad.witnesses.clone() });
    }

    let graded = base.degrees().iter().any(|&d| d != 0);
    let extra = if graded { 2 } else { 0 };
    let dim = n + extra;
    let (li, di) = (n, n + 1);
    let mut parities: Vec<Parity> = (0..n).map(|i| base.parity(i)).collect();
    let mut labels: Vec<String> = (0..n).map(|i| base.label(i)).collect();
    let mut weights: Vec<Weight> = (0..n).map(|i| base.weights()[i].add_scaled(&scalar::int(base.degrees()[i]), &Weight::lambda(1))).collect();
    if graded {
        parities.extend([Parity::Even, Parity::Even]);
        labels.extend(["λ".to_string(), "d".to_string()]);
        weights.extend([zero.clone(), zero.clone()]);
    }
    let mut table = StructureTable::new(parities, labels);
    let mut undefined = BTreeSet::new();
    for i in 0..n {
        let di_ = base.degrees()[i];
        for j in 0..n {
            match base.bracket_basis(i, j) {
                Ok(mut v) => {
                    if graded && di_ != 0 && di_ + base.degrees()[j] == 0 {
                        let c = form.get(i, j);
                        if c != scalar::zero() {
                            v.add_term(li, scalar::int(di_) * c);
                        }
                    }
                    table.set(i, j, v);
                }
                Err(_) => {
                    undefined.insert((i, j));
                }
            }
        }
        if graded && di_ != 0 {
            table.set(di, i, SparseVec::term(i, scalar::int(di_)));
            table.set(i, di, SparseVec::term(i, scalar::int(-di_)));
        }
    }
    let mut entries: Vec<(usize, usize, Scalar)> = form.entries().map(|(i, j, c)| (i, j, c.clone())).collect();
    let mut cartan = cartan_g.clone();
    if graded {
        entries.extend([(li, di, scalar::one()), (di, li, scalar::one())]);
        cartan.extend([li, di]);
    }
    let l_form = LinearMap::from_entries(dim, dim, entries);
    let rule = WindowRule {
        radical: vec![Symbol::Lambda(1)],
        finite_support: base.weights().iter().cloned().collect(),
    };
    let mut triple = SuperToralTriple::new(format!("affinization of {}", base.name), table, undefined, l_form, cartan, weights, Some(rule))?;
    if graded {
        triple.derivations = vec![di];
    }
    Ok(AffinizedAlgebra {
        triple,
        base_dim: n,
        lambda_index: graded.then_some(li),
        derivation_index: graded.then_some(di),
        toral,
        hypotheses: hyp,
    })
}

fn pair(form: &LinearMap, x: &SparseVec, y: &SparseVec) -> Scalar {
    let mut out = scalar::zero();
    for (i, a) in x.iter() {
        for (j, b) in y.iter() {
            out += a * b * form.get(i, j);
        }
    }
    out
}

/// `core(L) / Z(core)` against the base through the projection `Π` onto `g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundTripReport {
    pub core_dim: usize,
    pub center: Vec<String>,
    pub projection_rank: usize,
    pub surjective: bool,
    /// The core has no component along `V†`.
    pub core_inside_g_plus_v: bool,
    /// `Z(core) = core ∩ V = ker Π`.
    pub center_is_kernel: bool,
    pub checked: u64,
    pub skipped_out_of_window: u64,
    pub mismatches: Vec<String>,
}

impl RoundTripReport {
    pub fn passed(&self) -> bool {
        self.surjective && self.core_inside_g_plus_v && self.center_is_kernel && self.mismatches.is_empty()
    }
}

pub fn round_trip(aff: &AffinizedAlgebra, base: &GradedAlgebra) -> Result<RoundTripReport, EalsError> {
    let t = &aff.triple;
    let n = aff.base_dim;
    let c = core(t)?;
    let z: Vec<SparseVec> = center_of(&c)
        .into_iter()
        .map(|v| v.iter().fold(SparseVec::new(), |mut acc, (k, a)| {
            acc.add_scaled(a, &c.basis[k]);
            acc
        }))
        .collect();
    let project = |v: &SparseVec| v.filtered(|i| i < n);
    let projected: Vec<SparseVec> = c.basis.iter().map(project).collect();
    let coords = Coordinatizer::new(&projected);
    let projection_rank = coords.rank();
    let core_inside_g_plus_v = aff.derivation_index.is_none_or(|d| c.basis.iter().all(|v| v.get(d) == scalar::zero()));
    let v_only = |v: &SparseVec| v.support().all(|i| Some(i) == aff.lambda_index);
    let center_is_kernel = z.len() + projection_rank == c.dim() && z.iter().all(v_only);

    let mut section = Vec::with_capacity(n);
    for i in 0..n {
        let Some(k) = coords.coords(&SparseVec::unit(i)) else { break };
        section.push(k.iter().fold(SparseVec::new(), |mut acc, (j, a)| {
            acc.add_scaled(a, &c.basis[j]);
            acc
        }));
    }
    let (mut checked, mut skipped, mut mismatches) = (0u64, 0u64, Vec::new());
    if section.len() == n {
        for i in 0..n {
            for j in 0..n {
                let Ok(expected) = base.bracket_basis(i, j) else {
                    skipped += 1;
                    continue;
                };
                let Ok(got) = t.bracket_ruled(&section[i], &section[j]) else {
                    skipped += 1;
                    continue;
                };
                checked += 1;
                if project(&got) != expected && mismatches.len() < 8 {
                    mismatches.push(format!("[{}, {}]", base.label(i), base.label(j)));
                }
            }
        }
    }
    Ok(RoundTripReport {
        core_dim: c.dim(),
        center: z.iter().map(|v| combo_label(v, |i| t.label(i))).collect(),
        projection_rank,
        surjective: projection_rank == n,
        core_inside_g_plus_v,
        center_is_kernel,
        checked,
        skipped_out_of_window: skipped,
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eals::{check_eals, verify_core_graded};
    use crate::exactalg::{check_super_jacobi, Scope};
    use crate::graded::r_root_set;

    #[test]
    fn degree_zero_base_is_not_extended() {
        let ctx = build_context(1, 1).unwrap();
        let data = CoordinateData::trivial();
        let l = build_graded(&ctx, &data).unwrap();
        let form = loop_form(&ctx, &l, &data).unwrap();
        let r = r_root_set(1, 1);
        let aff = affinize(&l, &form, &r, &r).unwrap();
        assert_eq!(aff.triple.dim(), l.dim());
        assert_eq!(aff.lambda_index, None);
        assert!(aff.triple.derivations.is_empty());
        assert!(check_eals(&aff.triple).unwrap().passed());
    }

    #[test]
    fn affinized_loop_algebra() {
        let (l, form) = loop_osp(1, 1, 1).unwrap();
        let r = r_root_set(1, 1);
        let aff = affinize(&l, &form, &r, &r).unwrap();
        assert_eq!(aff.triple.dim(), 3 * 12 + 2);
        let (li, di) = (aff.lambda_index.unwrap(), aff.derivation_index.unwrap());
        assert_eq!(aff.triple.t_alpha(&Weight::lambda(1)).unwrap(), SparseVec::unit(li));
        assert_eq!(aff.triple.pair_vectors(&SparseVec::unit(li), &SparseVec::unit(di)), scalar::one());
        assert!(check_super_jacobi(&aff.triple, None, Scope::Sampled(20_000), 0).unwrap().passed());
        let rep = check_eals(&aff.triple).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.verdict("(ad x)^3 V† = 0").unwrap().pass);
        let rt = round_trip(&aff, &l).unwrap();
        assert!(rt.passed(), "{rt:?}");
        assert_eq!(rt.core_dim, aff.triple.dim() - 1);
        assert_eq!(rt.center.len(), 1);
        let (cg, dec) = verify_core_graded(&aff.triple).unwrap();
        assert!(cg.passed(), "{cg:?}");
        assert_eq!(dec.dot_roots.roots, r.roots);
    }

    #[test]
    fn central_base_is_rejected() {
        let ctx = build_context(1, 1).unwrap();
        let data = CoordinateData::laurent_central(1);
        let l = build_graded(&ctx, &data).unwrap();
        let form = LinearMap::from_entries(l.dim(), l.dim(), Vec::new());
        let r = r_root_set(1, 1);
        match affinize(&l, &form, &r, &r) {
            Err(EalsError::Hypothesis { label, .. }) => assert_eq!(label, "base: centerless"),
            other => panic!("{other:?}"),
        }
    }
}
