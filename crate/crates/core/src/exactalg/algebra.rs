use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::index::{sign_flip, Parity};
use super::linsolve::{solve_linear, Coordinatizer};
use super::matrix::{supercommutator, SuperMatrix};
use super::scalar;
use super::sparse::SparseVec;
use super::AlgError;

/// A finite-dimensional (or windowed) superalgebra given by its basis brackets.
pub trait SuperAlgebra: Sync {
    fn dim(&self) -> usize;
    fn parity(&self, i: usize) -> Parity;
    fn bracket_basis(&self, i: usize, j: usize) -> Result<SparseVec, AlgError>;

    fn label(&self, i: usize) -> String {
        format!("b{i}")
    }

    fn bracket(&self, x: &SparseVec, y: &SparseVec) -> Result<SparseVec, AlgError> {
        let mut out = SparseVec::new();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                out.add_scaled(&(a * b), &self.bracket_basis(i, j)?);
            }
        }
        Ok(out)
    }

    /// Parity of a nonzero homogeneous element; zero counts as even.
    fn element_parity(&self, x: &SparseVec) -> Option<Parity> {
        let mut it = x.support().map(|i| self.parity(i));
        let first = it.next().unwrap_or(Parity::Even);
        it.all(|p| p == first).then_some(first)
    }
}

/// Explicit table of bracket constants.
#[derive(Clone, Debug)]
pub struct StructureTable {
    parities: Vec<Parity>,
    labels: Vec<String>,
    brackets: BTreeMap<(usize, usize), SparseVec>,
}

impl StructureTable {
    pub fn new(parities: Vec<Parity>, labels: Vec<String>) -> Self {
        assert_eq!(parities.len(), labels.len());
        StructureTable {
            parities,
            labels,
            brackets: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, value: SparseVec) {
        if value.is_zero() {
            self.brackets.remove(&(i, j));
        } else {
            self.brackets.insert((i, j), value);
        }
    }

    pub fn get(&self, i: usize, j: usize) -> SparseVec {
        self.brackets.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn nonzero_entries(&self) -> impl Iterator<Item = (&(usize, usize), &SparseVec)> {
        self.brackets.iter()
    }

    /// Table of the algebra spanned by homogeneous matrices closed under the supercommutator.
    pub fn from_matrices(basis: &[SuperMatrix], labels: Vec<String>) -> Result<Self, AlgError> {
        let flat: Vec<SparseVec> = basis.iter().map(SuperMatrix::flatten).collect();
        let coords = Coordinatizer::new(&flat);
        if coords.rank() != basis.len() {
            return Err(AlgError::Dependent);
        }
        let parities = basis.iter().map(SuperMatrix::require_parity).collect::<Result<Vec<_>, _>>()?;
        let mut table = StructureTable::new(parities, labels);
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                let c = supercommutator(&basis[i], &basis[j])?;
                let v = coords.coords(&c.flatten()).ok_or(AlgError::NotClosed {
                    left: table.labels[i].clone(),
                    right: table.labels[j].clone(),
                })?;
                table.set(i, j, v);
            }
        }
        Ok(table)
    }

    /// Copies the brackets of any algebra into an explicit table.
    pub fn from_algebra(alg: &dyn SuperAlgebra) -> Result<Self, AlgError> {
        let n = alg.dim();
        let mut table = StructureTable::new((0..n).map(|i| alg.parity(i)).collect(), (0..n).map(|i| alg.label(i)).collect());
        for i in 0..n {
            for j in 0..n {
                table.set(i, j, alg.bracket_basis(i, j)?);
            }
        }
        Ok(table)
    }
}

impl SuperAlgebra for StructureTable {
    fn dim(&self) -> usize {
        self.parities.len()
    }

    fn parity(&self, i: usize) -> Parity {
        self.parities[i]
    }

    fn bracket_basis(&self, i: usize, j: usize) -> Result<SparseVec, AlgError> {
        Ok(self.get(i, j))
    }

    fn label(&self, i: usize) -> String {
        self.labels[i].clone()
    }
}

/// How many basis triples to examine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "mode", content = "count")]
pub enum Scope {
    Exhaustive,
    Sampled(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobiReport {
    pub scope: Scope,
    pub seed: u64,
    pub checked: u64,
    pub skipped_out_of_window: u64,
    /// Smallest violating triple `(x, y, z)` as basis labels.
    pub violation: Option<[String; 3]>,
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none() && self.checked > 0
    }
}

/// `[[x,y],z] − [x,[y,z]] + (−1)^{|x||y|}[y,[x,z]]` for basis elements.
pub fn jacobiator(alg: &dyn SuperAlgebra, i: usize, j: usize, k: usize) -> Result<SparseVec, AlgError> {
    let xy = alg.bracket_basis(i, j)?;
    let yz = alg.bracket_basis(j, k)?;
    let xz = alg.bracket_basis(i, k)?;
    let mut out = alg.bracket(&xy, &SparseVec::unit(k))?;
    out.add_scaled(&-scalar::one(), &alg.bracket(&SparseVec::unit(i), &yz)?);
    let s = scalar::sign(sign_flip(alg.parity(i), alg.parity(j)));
    out.add_scaled(&s, &alg.bracket(&SparseVec::unit(j), &xz)?);
    Ok(out)
}

/// Super-Jacobi sweep over triples drawn from `pool` (all basis elements when `None`).
/// Out-of-window brackets are counted and skipped; sampling continues until
/// `k` triples were actually checked or `20k` draws were made.
pub fn check_super_jacobi(alg: &dyn SuperAlgebra, pool: Option<&[usize]>, scope: Scope, seed: u64) -> Result<JacobiReport, AlgError> {
    let all: Vec<usize>;
    let pool = match pool {
        Some(p) => p,
        None => {
            all = (0..alg.dim()).collect();
            &all
        }
    };
    let triples: Vec<(usize, usize, usize)> = match scope {
        Scope::Exhaustive => {
            let mut t = Vec::with_capacity(pool.len().pow(3));
            for &i in pool {
                for &j in pool {
                    for &k in pool {
                        t.push((i, j, k));
                    }
                }
            }
            t
        }
        Scope::Sampled(k) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let draws = k.saturating_mul(20);
            let mut t = Vec::with_capacity(draws.min(1 << 24) as usize);
            for _ in 0..draws {
                let pick = |rng: &mut ChaCha8Rng| pool[rng.gen_range(0..pool.len())];
                t.push((pick(&mut rng), pick(&mut rng), pick(&mut rng)));
            }
            t
        }
    };
    let target = match scope {
        Scope::Exhaustive => u64::MAX,
        Scope::Sampled(k) => k,
    };
    // Triples are evaluated in parallel chunks; results are folded in draw order.
    let (checked, skipped, violation) = with_pool(|| -> Result<_, AlgError> {
        let mut checked = 0u64;
        let mut skipped = 0u64;
        let mut violation = None;
        for chunk in triples.chunks(4096) {
            if checked >= target || violation.is_some() {
                break;
            }
            let outcomes: Vec<Result<bool, AlgError>> =
                chunk.par_iter().map(|&(i, j, k)| jacobiator(alg, i, j, k).map(|v| v.is_zero())).collect();
            for (&(i, j, k), outcome) in chunk.iter().zip(outcomes) {
                if checked >= target {
                    break;
                }
                match outcome {
                    Ok(true) => checked += 1,
                    Ok(false) => {
                        checked += 1;
                        if violation.is_none() {
                            violation = Some([alg.label(i), alg.label(j), alg.label(k)]);
                        }
                    }
                    Err(AlgError::OutOfWindow) => skipped += 1,
                    Err(e) => return Err(e),
                }
            }
        }
        Ok((checked, skipped, violation))
    })?;
    Ok(JacobiReport {
        scope,
        seed,
        checked,
        skipped_out_of_window: skipped,
        violation,
    })
}

/// Checks `[x,y] = −(−1)^{|x||y|}[y,x]` on all basis pairs of `pool`.
pub fn check_super_antisymmetry(alg: &dyn SuperAlgebra, pool: &[usize]) -> Result<Option<(usize, usize)>, AlgError> {
    for &i in pool {
        for &j in pool {
            if j < i {
                continue;
            }
            let a = match alg.bracket_basis(i, j) {
                Err(AlgError::OutOfWindow) => continue,
                r => r?,
            };
            let b = alg.bracket_basis(j, i)?;
            let s = scalar::sign(!sign_flip(alg.parity(i), alg.parity(j)));
            if a != b.scaled(&s) {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// Basis of `{z ∈ span(sub) : [z, b] = 0 for all b ∈ test}` as vectors over the algebra basis.
pub fn centralizer(alg: &dyn SuperAlgebra, sub: &[usize], test: &[usize]) -> Result<Vec<SparseVec>, AlgError> {
    let mut columns: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
    for (u, &i) in sub.iter().enumerate() {
        for &j in test {
            for (k, c) in alg.bracket_basis(i, j)?.iter() {
                columns.entry((j, k)).or_default().add_term(u, c.clone());
            }
        }
    }
    let eqs: Vec<SparseVec> = columns.into_values().collect();
    let sol = solve_linear(&eqs, sub.len());
    Ok(sol.basis.into_iter().map(|v| v.map_indices(|u| sub[u])).collect())
}

/// Number of worker threads for sweeps: `SUPERROOT_THREADS` or rayon's default.
pub fn thread_cap() -> Option<usize> {
    std::env::var("SUPERROOT_THREADS").ok().and_then(|v| v.parse().ok()).filter(|n| *n > 0)
}

pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    match thread_cap() {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        None => f(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::index::IndexUniverse;
    use crate::exactalg::scalar::int;

    fn gl11() -> StructureTable {
        let u = IndexUniverse::new(1, 1);
        let ixs = u.indices();
        let mut basis = Vec::new();
        let mut labels = Vec::new();
        for &j in &ixs {
            for &k in &ixs {
                basis.push(SuperMatrix::elementary(u, j, k));
                labels.push(format!("e[{j},{k}]"));
            }
        }
        StructureTable::from_matrices(&basis, labels).unwrap()
    }

    #[test]
    fn gl_of_small_superspace_is_lie_superalgebra() {
        let t = gl11();
        assert_eq!(t.dim(), 25);
        let r = check_super_jacobi(&t, None, Scope::Exhaustive, 0).unwrap();
        assert!(r.passed());
        assert_eq!(r.checked, 25u64.pow(3));
        let all: Vec<usize> = (0..25).collect();
        assert_eq!(check_super_antisymmetry(&t, &all).unwrap(), None);
    }

    #[test]
    fn corrupted_constant_is_caught() {
        let mut t = gl11();
        let bad = t.get(1, 5).plus(&SparseVec::term(0, int(1)));
        t.set(1, 5, bad);
        let r = check_super_jacobi(&t, None, Scope::Exhaustive, 0).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn center_of_gl_is_identity_line() {
        let t = gl11();
        let all: Vec<usize> = (0..25).collect();
        let z = centralizer(&t, &all, &all).unwrap();
        assert_eq!(z.len(), 1);
        let u = IndexUniverse::new(1, 1);
        let diag: Vec<usize> = u.indices().iter().map(|ix| {
            let p = u.position(*ix);
            p * 5 + p
        }).collect();
        let support: Vec<usize> = z[0].support().collect();
        assert_eq!(support, diag);
    }
}
