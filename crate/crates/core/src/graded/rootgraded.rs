use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{GradedAlgebra, GradedError};
use crate::exactalg::scalar::{self, Scalar};
use crate::exactalg::{AlgError, Coordinatizer, Eliminator, Parity, SparseVec, StructureTable, SuperAlgebra};
use crate::osp::{psi, root_set_r, weight_form};
use crate::roots::{partition_even_odd, RootSet, Symbol, Weight};

/// `e`, `f` and `k = [e, f]` for one root and degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToralWitness {
    pub root: String,
    pub degree: i64,
    pub e: String,
    pub f: String,
    pub k: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootGradedReport {
    pub algebra: String,
    pub dim: usize,
    /// Nonzero weights with a nonzero weight space.
    pub support: Vec<String>,
    pub outside_r: Vec<String>,
    pub zero_space_dim: usize,
    /// Rank of `Σ_{α≠0} [L^α, L^{−α}]`.
    pub zero_space_generated: usize,
    pub compatible: bool,
    pub compatibility_witness: Option<String>,
    pub phi_contains_zero: bool,
    pub phi_inside_r: bool,
    pub toral: Vec<ToralWitness>,
    pub toral_missing: Vec<String>,
    pub root_graded: bool,
    pub fine: bool,
    pub fine_witness: Option<String>,
    pub predivision: bool,
    pub predivision_missing: Vec<String>,
    /// Brackets left out of the checks because they leave the degree window.
    pub skipped_out_of_window: u64,
}

/// `Ψ` with the weight form, tagged `BC(m,n)`, with its `ε` and `δ` real components.
pub fn psi_root_set(m: u32, n: u32) -> RootSet {
    let form = weight_form(m, n);
    let all = psi(m, n);
    let only = |keep: fn(Symbol) -> bool| -> BTreeSet<Weight> { all.iter().filter(|w| !w.is_zero() && w.support().all(keep)).cloned().collect() };
    let eps = only(|s| matches!(s, Symbol::Eps(_)));
    let delta = only(|s| matches!(s, Symbol::Delta(_)));
    let mut r = RootSet::new(all, form).with_tag(format!("BC({m},{n})"));
    r.components = vec![eps, delta];
    r
}

/// The weights of `g` with the weight form, tagged `B(m,n)`.
pub fn r_root_set(m: u32, n: u32) -> RootSet {
    RootSet::new(root_set_r(m, n), weight_form(m, n)).with_tag(format!("B({m},{n})"))
}

fn combo(v: &SparseVec, l: &dyn SuperAlgebra) -> String {
    let terms: Vec<String> = v
        .iter()
        .map(|(i, c)| if c == &scalar::one() { l.label(i) } else { format!("{}*{}", scalar::format(c), l.label(i)) })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Searches for `f ∈ span(fs)` with `k = [e_i, f]` nonzero and acting on each
/// basis vector `x` as the scalar `scalars[x]`; `e_i` runs over `es`.
pub(crate) fn find_toral(l: &dyn SuperAlgebra, scalars: &[Scalar], es: &[usize], fs: &[usize], skipped: &mut u64) -> Option<(usize, SparseVec, SparseVec)> {
    let dim = l.dim();
    for &e in es {
        let fs_same: Vec<usize> = fs.iter().copied().filter(|&f| l.parity(f) == l.parity(e)).collect();
        let mut ks = Vec::with_capacity(fs_same.len());
        let mut ok = true;
        for &f in &fs_same {
            match l.bracket_basis(e, f) {
                Ok(k) => ks.push(k),
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok || ks.iter().all(SparseVec::is_zero) {
            continue;
        }
        // Unknowns: coefficients of f (0..q) and the scale s (index q).
        let q = fs_same.len();
        let mut elim = Eliminator::new(q + 1);
        for x in 0..dim {
            let mut rows: BTreeMap<usize, SparseVec> = BTreeMap::new();
            let mut defined = true;
            for (j, k) in ks.iter().enumerate() {
                match l.bracket(k, &SparseVec::unit(x)) {
                    Ok(v) => {
                        for (r, c) in v.iter() {
                            rows.entry(r).or_default().add_term(j, c.clone());
                        }
                    }
                    Err(_) => {
                        defined = false;
                        break;
                    }
                }
            }
            if !defined {
                *skipped += 1;
                continue;
            }
            rows.entry(x).or_default().add_term(q, -scalars[x].clone());
            for r in rows.values() {
                elim.push(r);
            }
        }
        let sol = elim.nullspace().into_iter().find(|v| v.get(q) != scalar::zero());
        if let Some(v) = sol {
            let s = v.get(q);
            let coeffs = v.filtered(|j| j < q).scaled(&(scalar::one() / s));
            let f: SparseVec = coeffs.map_indices(|j| fs_same[j]);
            let mut k = SparseVec::new();
            for (j, c) in coeffs.iter() {
                k.add_scaled(c, &ks[j]);
            }
            if !k.is_zero() {
                return Some((e, f, k));
            }
        }
    }
    None
}

/// Checks the root-graded axioms of `l` for the root system `r` (support,
/// gradings, generation of the zero space) and a grading subsystem `phi`
/// (toral elements), then the fine and predivision properties.
pub fn verify_root_graded(l: &GradedAlgebra, r: &RootSet, phi: &RootSet) -> Result<RootGradedReport, GradedError> {
    let dim = l.dim();
    let mut skipped = 0u64;
    let mut spaces: BTreeMap<(Weight, i64), Vec<usize>> = BTreeMap::new();
    for i in 0..dim {
        spaces.entry((l.weights()[i].clone(), l.degrees()[i])).or_default().push(i);
    }
    let support: BTreeSet<Weight> = l.weights().iter().filter(|w| !w.is_zero()).cloned().collect();
    let outside_r: Vec<String> = l.weights().iter().filter(|w| !r.contains(w)).map(Weight::label).collect::<BTreeSet<_>>().into_iter().collect();

    // Both gradings respected by every defined bracket.
    let mut compatibility_witness = None;
    'outer: for i in 0..dim {
        for j in 0..dim {
            let v = match l.bracket_basis(i, j) {
                Ok(v) => v,
                Err(AlgError::OutOfWindow) => continue,
                Err(e) => return Err(e.into()),
            };
            let w = &l.weights()[i] + &l.weights()[j];
            let d = l.degrees()[i] + l.degrees()[j];
            if v.support().any(|k| l.weights()[k] != w || l.degrees()[k] != d) {
                compatibility_witness = Some(format!("[{}, {}]", l.label(i), l.label(j)));
                break 'outer;
            }
        }
    }

    // L⁰ against the span of the brackets of opposite root spaces.
    let zero: Vec<usize> = (0..dim).filter(|&i| l.weights()[i].is_zero()).collect();
    let mut gens = Vec::new();
    for i in 0..dim {
        let w = &l.weights()[i];
        if w.is_zero() {
            continue;
        }
        let minus = -w;
        for j in 0..dim {
            if l.weights()[j] == minus {
                match l.bracket_basis(i, j) {
                    Ok(v) if !v.is_zero() => gens.push(v),
                    Ok(_) => {}
                    Err(_) => skipped += 1,
                }
            }
        }
    }
    let zero_space_generated = Coordinatizer::new(&gens).rank();

    let by_weight_degree = |w: &Weight, d: i64| spaces.get(&(w.clone(), d)).cloned().unwrap_or_default();
    let phi_contains_zero = phi.contains(&Weight::zero());
    let phi_inside_r = phi.roots.iter().all(|a| r.contains(a));
    let mut toral = Vec::new();
    let mut toral_missing = Vec::new();
    for a in phi.nonzero() {
        let es = by_weight_degree(a, 0);
        let fs = by_weight_degree(&-a, 0);
        let scalars: Vec<Scalar> = l.weights().iter().map(|b| r.pair(b, a)).collect();
        match find_toral(l, &scalars, &es, &fs, &mut skipped) {
            Some((e, f, k)) => toral.push(ToralWitness {
                root: a.label(),
                degree: 0,
                e: l.label(e),
                f: combo(&f, l),
                k: combo(&k, l),
            }),
            None => toral_missing.push(a.label()),
        }
    }

    // Fine: parity of each basis vector matches the even/odd split of R.
    let (even, odd) = partition_even_odd(r).map_err(|e| GradedError::Shape(e.to_string()))?;
    let fine_witness = (0..dim)
        .find(|&i| {
            let w = &l.weights()[i];
            match l.parity(i) {
                Parity::Even => !even.contains(w),
                Parity::Odd => !odd.contains(w),
            }
        })
        .map(|i| format!("{} has parity {:?} at weight {}", l.label(i), l.parity(i), l.weights()[i].label()));

    let mut predivision_missing = Vec::new();
    for ((w, d), es) in &spaces {
        if w.is_zero() {
            continue;
        }
        let fs = by_weight_degree(&-w, -d);
        let scalars: Vec<Scalar> = l.weights().iter().map(|b| r.pair(b, w)).collect();
        if find_toral(l, &scalars, es, &fs, &mut skipped).is_none() {
            predivision_missing.push(format!("{} in degree {d}", w.label()));
        }
    }

    let compatible = compatibility_witness.is_none();
    let root_graded = outside_r.is_empty()
        && compatible
        && zero_space_generated == zero.len()
        && phi_contains_zero
        && phi_inside_r
        && toral_missing.is_empty();
    Ok(RootGradedReport {
        algebra: l.name.clone(),
        dim,
        support: support.iter().map(Weight::label).collect(),
        outside_r,
        zero_space_dim: zero.len(),
        zero_space_generated,
        compatible,
        compatibility_witness,
        phi_contains_zero,
        phi_inside_r,
        toral,
        toral_missing,
        root_graded,
        fine: root_graded && fine_witness.is_none(),
        fine_witness,
        predivision: root_graded && predivision_missing.is_empty(),
        predivision_missing,
        skipped_out_of_window: skipped,
    })
}

/// Basis of the center, computed inside each block of equal weight, degree and
/// parity. Pairs whose bracket leaves the window impose no condition.
pub fn center(l: &GradedAlgebra) -> Vec<SparseVec> {
    let dim = l.dim();
    let mut blocks: BTreeMap<(Weight, i64, Parity), Vec<usize>> = BTreeMap::new();
    for i in 0..dim {
        blocks.entry((l.weights()[i].clone(), l.degrees()[i], l.parity(i))).or_default().push(i);
    }
    let mut out = Vec::new();
    for sub in blocks.values() {
        let mut rows: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
        for (u, &i) in sub.iter().enumerate() {
            for j in 0..dim {
                if let Ok(v) = l.bracket_basis(i, j) {
                    for (k, c) in v.iter() {
                        rows.entry((j, k)).or_default().add_term(u, c.clone());
                    }
                }
            }
        }
        let mut elim = Eliminator::new(sub.len());
        for r in rows.values() {
            elim.push(r);
        }
        out.extend(elim.nullspace().into_iter().map(|v| v.map_indices(|u| sub[u])));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientReport {
    pub center: Vec<String>,
    /// Whether the center lies in the zero weight space.
    pub center_in_zero_weight: bool,
    pub quotient_dim: usize,
}

/// `L / Z(L)` on the basis vectors of `L` complementary to the center; both
/// gradings are inherited.
pub fn quotient_by_center(l: &GradedAlgebra) -> (GradedAlgebra, QuotientReport) {
    let z = center(l);
    let dim = l.dim();
    let mut family = z.clone();
    family.extend((0..dim).map(SparseVec::unit));
    let coords = Coordinatizer::new(&family);
    let kept: Vec<usize> = coords.independent().iter().filter(|&&k| k >= z.len()).map(|&k| k - z.len()).collect();
    let new_index: BTreeMap<usize, usize> = kept.iter().enumerate().map(|(a, &b)| (b, a)).collect();
    let reduce = |v: &SparseVec| -> SparseVec {
        let c = coords.coords(v).expect("the family spans");
        c.filtered(|k| k >= z.len()).map_indices(|k| new_index[&(k - z.len())])
    };
    let mut table = StructureTable::new(kept.iter().map(|&i| l.parity(i)).collect(), kept.iter().map(|&i| l.label(i)).collect());
    let mut undefined = BTreeSet::new();
    for (a, &i) in kept.iter().enumerate() {
        for (b, &j) in kept.iter().enumerate() {
            match l.bracket_basis(i, j) {
                Ok(v) => table.set(a, b, reduce(&v)),
                Err(_) => {
                    undefined.insert((a, b));
                }
            }
        }
    }
    let report = QuotientReport {
        center: z.iter().map(|v| combo(v, l)).collect(),
        center_in_zero_weight: z.iter().all(|v| v.support().all(|i| l.weights()[i].is_zero())),
        quotient_dim: kept.len(),
    };
    let quotient = GradedAlgebra::from_parts(
        if z.is_empty() { l.name.clone() } else { format!("{}/Z", l.name) },
        (l.m, l.n),
        (l.m0, l.n0),
        table,
        undefined,
        kept.iter().map(|&i| l.origins()[i]).collect(),
        kept.iter().map(|&i| l.weights()[i].clone()).collect(),
        kept.iter().map(|&i| l.degrees()[i]).collect(),
    );
    (quotient, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{check_super_jacobi, Scope};
    use crate::graded::{build_graded, CoordinateData};
    use crate::osp::build_context;

    #[test]
    fn even_odd_split_of_the_grading_sets() {
        let (even, odd) = partition_even_odd(&psi_root_set(2, 2)).unwrap();
        assert!(even.contains(&Weight::eps(1).scale_int(2)));
        assert!(even.contains(&Weight::eps(1)));
        assert!(odd.contains(&Weight::delta(1)));
        assert!(odd.contains(&(&Weight::eps(1) + &Weight::delta(2))));
        let (even, odd) = partition_even_odd(&r_root_set(2, 2)).unwrap();
        assert!(even.contains(&Weight::delta(1).scale_int(2)));
        assert!(odd.contains(&Weight::delta(2)));
    }

    #[test]
    fn trivial_data_is_fine_and_predivision() {
        let ctx = build_context(1, 1).unwrap();
        let l = build_graded(&ctx, &CoordinateData::trivial()).unwrap();
        let r = r_root_set(1, 1);
        let rep = verify_root_graded(&l, &r, &r).unwrap();
        assert!(rep.root_graded, "{rep:?}");
        assert!(rep.fine && rep.predivision, "{rep:?}");
        assert_eq!(rep.zero_space_generated, rep.zero_space_dim);
    }

    #[test]
    fn module_sector_only_adds_weights_of_u() {
        let ctx = build_context(1, 1).unwrap();
        let l = build_graded(&ctx, &CoordinateData::laurent_hermitian(1)).unwrap();
        let r = psi_root_set(1, 1);
        let rep = verify_root_graded(&l, &r, &r_root_set(1, 1)).unwrap();
        assert!(rep.outside_r.is_empty());
        assert!(rep.root_graded, "{rep:?}");
    }

    #[test]
    fn central_summand_is_stripped() {
        let ctx = build_context(1, 1).unwrap();
        let l = build_graded(&ctx, &CoordinateData::laurent_central(1)).unwrap();
        let (q, rep) = quotient_by_center(&l);
        assert_eq!(rep.center.len(), 1);
        assert!(rep.center_in_zero_weight);
        assert_eq!(q.dim(), l.dim() - 1);
        let loops = build_graded(&ctx, &CoordinateData::laurent(1)).unwrap();
        for i in 0..q.dim() {
            for j in 0..q.dim() {
                assert_eq!(q.bracket_basis(i, j), loops.bracket_basis(i, j));
            }
        }
        assert!(check_super_jacobi(&q, None, Scope::Sampled(2000), 0).unwrap().passed());
    }

    #[test]
    fn centerless_input_is_unchanged() {
        let ctx = build_context(1, 1).unwrap();
        let l = build_graded(&ctx, &CoordinateData::trivial()).unwrap();
        let (q, rep) = quotient_by_center(&l);
        assert!(rep.center.is_empty());
        assert_eq!(q.table().nonzero_entries().count(), l.table().nonzero_entries().count());
    }
}
