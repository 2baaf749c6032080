use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use super::{EalsError, SuperToralTriple};
use crate::exactalg::scalar::{self, Scalar};
use crate::exactalg::{with_pool, AlgError, Eliminator, Parity, SparseVec, SuperAlgebra};
use crate::roots::Weight;

const MAX_WITNESSES: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub axiom: String,
    pub pass: bool,
    pub checked: u64,
    /// Cases the degree window could not decide.
    pub inconclusive: u64,
    pub witnesses: Vec<String>,
}

impl Verdict {
    pub(crate) fn new(axiom: &str) -> Self {
        Verdict {
            axiom: axiom.into(),
            pass: true,
            checked: 0,
            inconclusive: 0,
            witnesses: Vec::new(),
        }
    }

    pub(crate) fn fail(&mut self, witness: String) {
        self.pass = false;
        self.note(witness);
    }

    pub(crate) fn note(&mut self, witness: String) {
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(witness);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EalsReport {
    pub algebra: String,
    pub dim: usize,
    pub roots: usize,
    pub real_roots: usize,
    pub verdicts: Vec<Verdict>,
}

impl EalsReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn verdict(&self, axiom: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.axiom == axiom)
    }
}

pub(crate) fn rank_of_rows(rows: impl Iterator<Item = SparseVec>, n: usize) -> usize {
    let mut e = Eliminator::new(n);
    for r in rows {
        e.push(&r);
    }
    e.rank()
}

pub(crate) fn form_checks(t: &SuperToralTriple) -> Vec<Verdict> {
    let dim = t.dim();
    let g = t.form();
    let mut even = Verdict::new("form: even");
    let mut sym = Verdict::new("form: supersymmetric");
    for (i, j, c) in g.entries() {
        even.checked += 1;
        sym.checked += 1;
        if t.parity(i) != t.parity(j) {
            even.fail(format!("({}, {}) = {}", t.label(i), t.label(j), scalar::format(c)));
        }
        let expected = c * scalar::sign(t.parity(i).is_odd() && t.parity(j).is_odd());
        if g.get(j, i) != expected {
            sym.fail(format!("({}, {}) against ({}, {})", t.label(i), t.label(j), t.label(j), t.label(i)));
        }
    }

    // (x, [y, z]) through the entries of [y, z] that the row of x can see.
    let mut seen_by: BTreeMap<(usize, usize), Vec<(usize, Scalar)>> = BTreeMap::new();
    for y in 0..dim {
        for z in 0..dim {
            if let Ok(v) = t.bracket_basis(y, z) {
                for (k, c) in v.iter() {
                    seen_by.entry((k, y)).or_default().push((z, c.clone()));
                }
            }
        }
    }
    let rows: Vec<Vec<(usize, Scalar)>> = (0..dim).map(|x| (0..dim).map(|k| (k, g.get(x, k))).filter(|(_, c)| c != &scalar::zero()).collect()).collect();
    let per_x: Vec<(u64, u64, Vec<String>)> = with_pool(|| {
        (0..dim)
            .into_par_iter()
            .map(|x| {
                let (mut checked, mut skipped, mut bad) = (0u64, 0u64, Vec::new());
                for y in 0..dim {
                    let Ok(xy) = t.bracket_basis(x, y) else {
                        skipped += 1;
                        continue;
                    };
                    let mut lhs: BTreeMap<usize, Scalar> = BTreeMap::new();
                    for (k, c) in xy.iter() {
                        for (z, gk) in &rows[k] {
                            *lhs.entry(*z).or_insert_with(scalar::zero) += c * gk;
                        }
                    }
                    let mut rhs: BTreeMap<usize, Scalar> = BTreeMap::new();
                    for (k, gxk) in &rows[x] {
                        for (z, c) in seen_by.get(&(*k, y)).map(Vec::as_slice).unwrap_or(&[]) {
                            *rhs.entry(*z).or_insert_with(scalar::zero) += gxk * c;
                        }
                    }
                    let zs: BTreeSet<usize> = lhs.keys().chain(rhs.keys()).copied().collect();
                    for z in zs {
                        if t.undefined().contains(&(y, z)) {
                            skipped += 1;
                            continue;
                        }
                        checked += 1;
                        let l = lhs.get(&z).cloned().unwrap_or_else(scalar::zero);
                        let r = rhs.get(&z).cloned().unwrap_or_else(scalar::zero);
                        if l != r && bad.len() < MAX_WITNESSES {
                            bad.push(format!("([{}, {}], {})", t.label(x), t.label(y), t.label(z)));
                        }
                    }
                }
                (checked, skipped, bad)
            })
            .collect()
    });
    let mut inv = Verdict::new("form: invariant");
    for (c, s, bad) in per_x {
        inv.checked += c;
        inv.inconclusive += s;
        for w in bad {
            inv.fail(w);
        }
    }

    let mut nondeg = Verdict::new("form: nondegenerate");
    let rank = rank_of_rows(g.columns().iter().cloned(), dim);
    nondeg.checked = dim as u64;
    if rank < dim {
        nondeg.fail(format!("rank {rank} of {dim}"));
    }
    let cartan = t.cartan();
    let mut on_h = Verdict::new("form: nondegenerate on h");
    let hrank = rank_of_rows(cartan.iter().map(|&i| cartan.iter().enumerate().map(|(j, &k)| (j, g.get(i, k))).collect()), cartan.len());
    on_h.checked = cartan.len() as u64;
    if cartan.is_empty() {
        on_h.fail("h is zero".into());
    } else if hrank < cartan.len() {
        on_h.fail(format!("rank {hrank} of {}", cartan.len()));
    }
    vec![even, sym, inv, nondeg, on_h]
}

fn toral_check(t: &SuperToralTriple) -> Verdict {
    let mut v = Verdict::new("h: even abelian, acting diagonally");
    for &h in t.cartan() {
        if t.parity(h) != Parity::Even {
            v.fail(format!("{} is odd", t.label(h)));
        }
        for &k in t.cartan() {
            v.checked += 1;
            if !t.bracket_basis(h, k).map(|x| x.is_zero()).unwrap_or(false) {
                v.fail(format!("[{}, {}] ≠ 0", t.label(h), t.label(k)));
            }
        }
    }
    v
}

/// `e ∈ (L_i)^α` and `f ∈ (L_i)^{−α}` with `0 ≠ [e, f] ∈ h`, searched over basis `e`.
fn pair_into_cartan(t: &SuperToralTriple, alpha: &Weight, parity: Parity) -> Option<(usize, SparseVec)> {
    let cartan: BTreeSet<usize> = t.cartan().iter().copied().collect();
    let fs: Vec<usize> = t.weight_space(&-alpha).into_iter().filter(|&f| t.parity(f) == parity).collect();
    for e in t.weight_space(alpha).into_iter().filter(|&e| t.parity(e) == parity) {
        let Ok(images) = fs.iter().map(|&f| t.bracket_basis(e, f)).collect::<Result<Vec<_>, _>>() else { continue };
        let mut outside: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (j, v) in images.iter().enumerate() {
            for (k, c) in v.iter().filter(|(k, _)| !cartan.contains(k)) {
                outside.entry(k).or_default().add_term(j, c.clone());
            }
        }
        let mut elim = Eliminator::new(fs.len());
        for r in outside.values() {
            elim.push(r);
        }
        for sol in elim.nullspace() {
            let mut k = SparseVec::new();
            for (j, c) in sol.iter() {
                k.add_scaled(c, &images[j]);
            }
            if !k.is_zero() {
                return Some((e, sol.map_indices(|j| fs[j])));
            }
        }
    }
    None
}

/// Largest `k ≥ 0` with `β + kα` a root; through finite parts when a window rule is present.
fn string_top(t: &SuperToralTriple, roots: &BTreeSet<Weight>, alpha: &Weight, beta: &Weight) -> usize {
    let (a, b, support) = match t.window() {
        Some(rule) => {
            let mut s = rule.finite_support.clone();
            s.insert(Weight::zero());
            (rule.finite_part(alpha), rule.finite_part(beta), s)
        }
        None => (alpha.clone(), beta.clone(), roots.clone()),
    };
    let bound = support.len() + 1;
    (0..=bound).filter(|&k| support.contains(&b.add_scaled(&scalar::int(k as i64), &a))).max().unwrap_or(0)
}

/// Certifies the EALS axioms: pairing root vectors into `h` at every nonzero
/// root and parity, and nilpotency of `ad x` for basis vectors `x` of
/// nonisotropic roots, with the exponent read off root strings. Also checks the
/// triple's own axioms, the `sl2`-super-triples and `t_α = (e,f)^{-1}[e,f]`, and
/// `(ad x)³ d = 0` on the restricted dual when there is one.
pub fn check_eals(t: &SuperToralTriple) -> Result<EalsReport, EalsError> {
    let mut verdicts = form_checks(t);
    verdicts.push(toral_check(t));
    let roots: BTreeSet<Weight> = t.weights().iter().cloned().chain([Weight::zero()]).collect();
    let cartan_ok = verdicts.iter().all(|v| v.axiom != "form: nondegenerate on h" || v.pass);
    if !cartan_ok {
        return Ok(EalsReport {
            algebra: t.name.clone(),
            dim: t.dim(),
            roots: roots.len(),
            real_roots: 0,
            verdicts,
        });
    }

    let mut tvec: BTreeMap<Weight, SparseVec> = BTreeMap::new();
    for a in &roots {
        tvec.insert(a.clone(), t.t_alpha(a)?);
    }
    let norms: BTreeMap<Weight, Scalar> = tvec.iter().map(|(a, ta)| (a.clone(), t.pair_vectors(ta, ta))).collect();
    let real: Vec<&Weight> = roots.iter().filter(|a| norms[*a] != scalar::zero()).collect();

    let mut paired = Verdict::new("EALS (1): root vectors pair into h");
    for a in roots.iter().filter(|a| !a.is_zero()) {
        for p in [Parity::Even, Parity::Odd] {
            if !t.weight_space(a).iter().any(|&i| t.parity(i) == p) {
                continue;
            }
            paired.checked += 1;
            if pair_into_cartan(t, a, p).is_none() {
                paired.fail(format!("{} ({p:?})", a.label()));
            }
        }
    }

    let mut sl2 = Verdict::new("sl2-super-triples at real roots");
    let mut t_rep = Verdict::new("t_α = (e,f)^{-1}[e,f]");
    for a in &real {
        sl2.checked += 1;
        match t.sl2_super_triple(a) {
            Ok(tr) => {
                t_rep.checked += 1;
                let ef = t.pair_vectors(&tr.e, &tr.f);
                let ta = t.t_alpha(a)?;
                if ef == scalar::zero() || tr.h != ta.scaled(&ef) {
                    t_rep.fail(a.label());
                }
            }
            Err(EalsError::NoSl2Pair(w)) => sl2.fail(w),
            Err(e) => return Err(e),
        }
    }

    let results: Vec<(u64, u64, Vec<String>, Option<String>)> = with_pool(|| {
        real.par_iter()
            .map(|a| nilpotency_at(t, &roots, a))
            .collect()
    });
    let mut nil = Verdict::new("EALS (2): ad x nilpotent within the root-string bound");
    let mut tight = Vec::new();
    for (checked, skipped, bad, tight_at) in results {
        nil.checked += checked;
        nil.inconclusive += skipped;
        for w in bad {
            nil.fail(w);
        }
        tight.extend(tight_at);
    }
    let mut bound = Verdict::new("nilpotency bound attained");
    bound.checked = tight.len() as u64;
    match tight.first() {
        Some(w) => bound.note(w.clone()),
        None if real.is_empty() => {}
        None => bound.fail("no witness attains the bound".into()),
    }
    verdicts.extend([paired, sl2, t_rep, nil, bound]);

    if !t.derivations.is_empty() {
        verdicts.push(cube_kills_derivations(t, &tvec)?);
    }
    Ok(EalsReport {
        algebra: t.name.clone(),
        dim: t.dim(),
        roots: roots.len(),
        real_roots: real.len(),
        verdicts,
    })
}

fn nilpotency_at(t: &SuperToralTriple, roots: &BTreeSet<Weight>, alpha: &Weight) -> (u64, u64, Vec<String>, Option<String>) {
    let (mut checked, mut skipped, mut bad, mut tight) = (0u64, 0u64, Vec::new(), None);
    for x in t.weight_space(alpha) {
        let xv = SparseVec::unit(x);
        'y: for y in 0..t.dim() {
            let n = string_top(t, roots, alpha, &t.weights()[y]) + 1;
            let mut v = SparseVec::unit(y);
            let mut steps = 0;
            while steps < n && !v.is_zero() {
                match t.bracket_ruled(&xv, &v) {
                    Ok(w) => v = w,
                    Err(_) => {
                        skipped += 1;
                        continue 'y;
                    }
                }
                steps += 1;
            }
            checked += 1;
            if !v.is_zero() {
                if bad.len() < MAX_WITNESSES {
                    bad.push(format!("(ad {})^{n} {} ≠ 0", t.label(x), t.label(y)));
                }
            } else if steps == n && tight.is_none() {
                tight = Some(format!("(ad {})^{} {} ≠ 0, exponent {n}", t.label(x), n - 1, t.label(y)));
            }
        }
    }
    (checked, skipped, bad, tight)
}

/// `(ad x)³ d = 0` for `d` in the restricted dual and `x` in a root space of a root that is not isotropic-central.
fn cube_kills_derivations(t: &SuperToralTriple, tvec: &BTreeMap<Weight, SparseVec>) -> Result<Verdict, EalsError> {
    let mut v = Verdict::new("(ad x)^3 V† = 0");
    let central: BTreeSet<&Weight> = tvec
        .iter()
        .filter(|(_, ta)| tvec.values().all(|tb| t.pair_vectors(ta, tb) == scalar::zero()))
        .map(|(a, _)| a)
        .collect();
    for x in 0..t.dim() {
        if central.contains(&t.weights()[x]) {
            continue;
        }
        let xv = SparseVec::unit(x);
        for &d in &t.derivations {
            let mut w = SparseVec::unit(d);
            let mut decided = true;
            for _ in 0..3 {
                match t.bracket_ruled(&xv, &w) {
                    Ok(next) => w = next,
                    Err(AlgError::OutOfWindow) => {
                        decided = false;
                        break;
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            if !decided {
                v.inconclusive += 1;
                continue;
            }
            v.checked += 1;
            if !w.is_zero() {
                v.fail(format!("(ad {})^3 {} ≠ 0", t.label(x), t.label(d)));
            }
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eals::{core, osp_triple};
    use crate::exactalg::{check_super_jacobi, LinearMap, Scope, StructureTable};
    use crate::osp::build_context;
    use crate::roots::Weight;
    use std::collections::BTreeSet;

    /// `h, d, x, y` with `[d,x] = x`, `[d,y] = −y`, `[x,y] = h`, `(h,d) = (x,y) = 1`.
    /// Its only nonzero roots `±ε1` are isotropic.
    pub(crate) fn oscillator() -> SuperToralTriple {
        let mut t = StructureTable::new(vec![Parity::Even; 4], ["h", "d", "x", "y"].map(String::from).to_vec());
        let one = scalar::one();
        t.set(1, 2, SparseVec::unit(2));
        t.set(2, 1, SparseVec::term(2, -one.clone()));
        t.set(1, 3, SparseVec::term(3, -one.clone()));
        t.set(3, 1, SparseVec::unit(3));
        t.set(2, 3, SparseVec::unit(0));
        t.set(3, 2, SparseVec::term(0, -one.clone()));
        let form = LinearMap::from_entries(4, 4, [(0, 1, one.clone()), (1, 0, one.clone()), (2, 3, one.clone()), (3, 2, one)]);
        let w = vec![Weight::zero(), Weight::zero(), Weight::eps(1), -&Weight::eps(1)];
        SuperToralTriple::new("oscillator".into(), t, BTreeSet::new(), form, vec![0, 1], w, None).unwrap()
    }

    #[test]
    fn osp_satisfies_the_axioms() {
        let t = osp_triple(&build_context(1, 1).unwrap()).unwrap();
        let rep = check_eals(&t).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.real_roots, 6);
        assert!(rep.verdict("nilpotency bound attained").unwrap().pass);
    }

    #[test]
    fn isotropic_oscillator_has_trivial_core() {
        let t = oscillator();
        assert!(check_super_jacobi(&t, None, Scope::Exhaustive, 0).unwrap().passed());
        let rep = check_eals(&t).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.real_roots, 0);
        assert_eq!(core(&t).unwrap().dim(), 0);
    }

    #[test]
    fn degenerate_form_on_h_is_reported() {
        let mut t = StructureTable::new(vec![Parity::Even; 2], vec!["h".into(), "c".into()]);
        t.set(0, 0, SparseVec::new());
        let form = LinearMap::from_entries(2, 2, [(0, 0, scalar::one())]);
        let w = vec![Weight::zero(); 2];
        let t = SuperToralTriple::new("degenerate".into(), t, BTreeSet::new(), form, vec![0, 1], w, None).unwrap();
        let rep = check_eals(&t).unwrap();
        assert!(!rep.passed());
        assert!(!rep.verdict("form: nondegenerate on h").unwrap().pass);
        assert!(!rep.verdict("form: nondegenerate").unwrap().pass);
    }
}
