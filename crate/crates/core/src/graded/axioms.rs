use serde::Serialize;

use super::{CoordinateData, GradedError};
use crate::exactalg::scalar::{self, Scalar};
use crate::exactalg::{check_super_antisymmetry, check_super_jacobi, sign_flip, AlgError, Coordinatizer, Parity, Scope, SparseVec};

/// One axiom checked on basis tuples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub label: String,
    pub passed: bool,
    pub checked: u64,
    pub skipped_out_of_window: u64,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub data: String,
    pub m: u32,
    pub n: u32,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, label: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.label == label)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}: {}", c.label, c.witness.as_deref().unwrap_or("-")))
            .collect()
    }
}

/// Runs `holds` on each tuple; the first failure is the witness.
fn sweep<T>(label: &str, tuples: impl IntoIterator<Item = T>, mut holds: impl FnMut(&T) -> Result<bool, GradedError>, describe: impl Fn(&T) -> String) -> Result<AxiomCheck, GradedError> {
    let mut out = AxiomCheck {
        label: label.to_string(),
        passed: true,
        checked: 0,
        skipped_out_of_window: 0,
        witness: None,
    };
    for t in tuples {
        match holds(&t) {
            Ok(true) => out.checked += 1,
            Ok(false) => {
                out.checked += 1;
                out.passed = false;
                out.witness = Some(describe(&t));
                break;
            }
            Err(GradedError::Alg(AlgError::OutOfWindow)) => out.skipped_out_of_window += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)))
}

fn triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
}

fn sgn(odd: bool) -> Scalar {
    scalar::sign(odd)
}

fn parity_of_sum(a: Parity, b: Parity) -> Parity {
    Parity::from_bit(a.is_odd() ^ b.is_odd())
}

/// Whether every basis vector in the support of `v` has parity `p`.
fn has_parity(v: &SparseVec, p: Parity, parity: impl Fn(usize) -> Parity) -> bool {
    v.support().all(|i| parity(i) == p)
}

/// Structure checks on the data and the nine conditions of the structure
/// theorem, each on all basis tuples, with `2m+1−2n` as the scalar.
pub fn verify_coordinate_axioms(data: &CoordinateData, m: u32, n: u32) -> Result<AxiomReport, GradedError> {
    let k = scalar::int(2 * m as i64 + 1 - 2 * n as i64);
    if k == scalar::zero() {
        return Err(GradedError::Degenerate { m, n });
    }
    let (da, dc, dd, db) = (data.dim_a(), data.dim_c(), data.dim_d(), data.dim_b());
    let ua = SparseVec::unit;
    let uc = SparseVec::unit;
    let ub = SparseVec::unit;
    let c_in_b = |c: usize| SparseVec::unit(da + c);
    let a_name = |i: usize| data.a_labels[i].clone();
    let c_name = |i: usize| data.c_labels[i].clone();
    let b_name = |i: usize| if i < da { a_name(i) } else { c_name(i - da) };
    let d_name = |t: usize| data.d.labels()[t].clone();
    let a_par = |i: usize| data.a_parity[i];
    let c_par = |i: usize| data.c_parity[i];
    let b_par = |i: usize| data.b_parity(i);
    let d_par = |t: usize| data.d.parities()[t];
    let mut checks = Vec::new();

    // Structure of the coordinates.
    checks.push(sweep(
        "a: products are even",
        pairs(da),
        |&(i, j)| Ok(has_parity(&data.a_product.get(i, j)?, parity_of_sum(a_par(i), a_par(j)), a_par)),
        |&(i, j)| format!("{}·{}", a_name(i), a_name(j)),
    )?);
    checks.push(sweep(
        "a: associative",
        triples(da),
        |&(i, j, l)| {
            let left = data.a_mul(&data.a_mul(&ua(i), &ua(j))?, &ua(l))?;
            let right = data.a_mul(&ua(i), &data.a_mul(&ua(j), &ua(l))?)?;
            Ok(left == right)
        },
        |&(i, j, l)| format!("({}, {}, {})", a_name(i), a_name(j), a_name(l)),
    )?);
    checks.push(sweep(
        "eta: even",
        0..da,
        |&i| Ok(has_parity(&data.eta_of(&ua(i)), a_par(i), a_par)),
        |&i| a_name(i),
    )?);
    checks.push(sweep("eta: involutive", 0..da, |&i| Ok(data.eta_of(&data.eta_of(&ua(i))) == ua(i)), |&i| a_name(i))?);
    checks.push(sweep(
        "eta: superinvolution",
        pairs(da),
        |&(i, j)| {
            let left = data.eta_of(&data.a_mul(&ua(i), &ua(j))?);
            let right = data.a_mul(&data.eta_of(&ua(j)), &data.eta_of(&ua(i)))?.scaled(&sgn(sign_flip(a_par(i), a_par(j))));
            Ok(left == right)
        },
        |&(i, j)| format!("η({}·{})", a_name(i), a_name(j)),
    )?);
    checks.push(sweep(
        "c: action is even",
        (0..da).flat_map(|i| (0..dc).map(move |j| (i, j))),
        |&(i, j)| Ok(has_parity(&data.c_action.get(i, j)?, parity_of_sum(a_par(i), c_par(j)), c_par)),
        |&(i, j)| format!("{}·{}", a_name(i), c_name(j)),
    )?);
    checks.push(sweep(
        "c: associative module",
        (0..da).flat_map(|i| (0..da).flat_map(move |j| (0..dc).map(move |l| (i, j, l)))),
        |&(i, j, l)| {
            let left = data.act(&data.a_mul(&ua(i), &ua(j))?, &uc(l))?;
            let right = data.act(&ua(i), &data.act(&ua(j), &uc(l))?)?;
            Ok(left == right)
        },
        |&(i, j, l)| format!("({}, {}, {})", a_name(i), a_name(j), c_name(l)),
    )?);
    checks.push(sweep(
        "chi: even",
        pairs(dc),
        |&(i, j)| Ok(has_parity(&data.chi.get(i, j)?, parity_of_sum(c_par(i), c_par(j)), a_par)),
        |&(i, j)| format!("χ({}, {})", c_name(i), c_name(j)),
    )?);
    checks.push(sweep(
        "chi: superhermitian",
        pairs(dc),
        |&(i, j)| {
            let left = data.eta_of(&data.chi.get(i, j)?);
            let right = data.chi.get(j, i)?.scaled(&sgn(sign_flip(c_par(i), c_par(j))));
            Ok(left == right)
        },
        |&(i, j)| format!("χ({}, {})", c_name(i), c_name(j)),
    )?);
    checks.push(sweep(
        "chi: a-linear",
        (0..da).flat_map(|i| (0..dc).flat_map(move |j| (0..dc).map(move |l| (i, j, l)))),
        |&(i, j, l)| {
            let left = data.chi_of(&data.act(&ua(i), &uc(j))?, &uc(l))?;
            let right = data.a_mul(&ua(i), &data.chi.get(j, l)?)?;
            Ok(left == right)
        },
        |&(i, j, l)| format!("χ({}·{}, {})", a_name(i), c_name(j), c_name(l)),
    )?);
    checks.push(sweep(
        "a: fixed and skew points span",
        std::iter::once(()),
        |_| Ok(data.fixed().len() + data.skew().len() == da),
        |_| format!("{} fixed + {} skew for dim {da}", data.fixed().len(), data.skew().len()),
    )?);
    let d_anti = check_super_antisymmetry(&data.d, &(0..dd).collect::<Vec<_>>())?;
    checks.push(AxiomCheck {
        label: "d: super-antisymmetric".into(),
        passed: d_anti.is_none(),
        checked: (dd * dd) as u64,
        skipped_out_of_window: 0,
        witness: d_anti.map(|(i, j)| format!("[{}, {}]", d_name(i), d_name(j))),
    });
    if dd > 0 {
        let jac = check_super_jacobi(&data.d, None, Scope::Exhaustive, 0)?;
        checks.push(AxiomCheck {
            label: "d: super Jacobi".into(),
            passed: jac.violation.is_none(),
            checked: jac.checked,
            skipped_out_of_window: 0,
            witness: jac.violation.map(|w| w.join(", ")),
        });
    }
    checks.push(sweep(
        "phi: even representation",
        pairs(dd),
        |&(s, t)| {
            let (ps, pt) = (d_par(s), d_par(t));
            for i in 0..db {
                if !has_parity(&data.phi[s].apply(&ub(i)), parity_of_sum(ps, b_par(i)), b_par) {
                    return Ok(false);
                }
            }
            let bracket = data.d.get(s, t);
            let sign = sgn(sign_flip(ps, pt));
            for i in 0..db {
                let lhs = data.phi_apply(&bracket, &ub(i));
                let st = data.phi[s].apply(&data.phi[t].apply(&ub(i)));
                let ts = data.phi[t].apply(&data.phi[s].apply(&ub(i)));
                if lhs != st.sub(&ts.scaled(&sign)) {
                    return Ok(false);
                }
            }
            Ok(true)
        },
        |&(s, t)| format!("({}, {})", d_name(s), d_name(t)),
    )?);

    // The nine conditions.
    let mut images = Vec::new();
    let pair_parity = sweep(
        "pairing: even",
        pairs(db),
        |&(i, j)| {
            let v = data.pairing.get(i, j)?;
            images.push(v.clone());
            Ok(has_parity(&v, parity_of_sum(b_par(i), b_par(j)), d_par))
        },
        |&(i, j)| format!("⟨{}, {}⟩", b_name(i), b_name(j)),
    )?;
    checks.push(pair_parity);
    let rank = Coordinatizer::new(&images).rank();
    checks.push(AxiomCheck {
        label: "pairing: surjective".into(),
        passed: rank == dd,
        checked: 1,
        skipped_out_of_window: 0,
        witness: (rank != dd).then(|| format!("image has dimension {rank}, d has dimension {dd}")),
    });
    checks.push(sweep(
        "pairing: super-skew",
        pairs(db),
        |&(i, j)| {
            let s = -sgn(sign_flip(b_par(i), b_par(j)));
            Ok(data.pairing.get(j, i)? == data.pairing.get(i, j)?.scaled(&s))
        },
        |&(i, j)| format!("⟨{}, {}⟩", b_name(i), b_name(j)),
    )?);
    let mut parts: Vec<(usize, SparseVec, String)> = Vec::new();
    for (k, v) in data.fixed().iter().enumerate() {
        parts.push((0, v.clone(), format!("A{k}")));
    }
    for (k, v) in data.skew().iter().enumerate() {
        parts.push((1, v.clone(), format!("B{k}")));
    }
    for c in 0..dc {
        parts.push((2, c_in_b(c), c_name(c)));
    }
    let cross: Vec<(usize, usize)> = pairs(parts.len()).filter(|&(i, j)| parts[i].0 != parts[j].0).collect();
    checks.push(sweep(
        "pairing: A, B, c mutually orthogonal",
        cross,
        |&(i, j)| Ok(data.pair(&parts[i].1, &parts[j].1)?.is_zero()),
        |&(i, j)| format!("⟨{}, {}⟩", parts[i].2, parts[j].2),
    )?);
    checks.push(sweep(
        "d acts by superderivations",
        (0..dd).flat_map(|t| pairs(db).map(move |(i, j)| (t, i, j))),
        |&(t, i, j)| {
            let d = SparseVec::unit(t);
            let lhs = data.phi_apply(&d, &data.b_product(&ub(i), &ub(j))?);
            let mut rhs = data.b_product(&data.phi_apply(&d, &ub(i)), &ub(j))?;
            rhs.add_scaled(&sgn(sign_flip(d_par(t), b_par(i))), &data.b_product(&ub(i), &data.phi_apply(&d, &ub(j)))?);
            Ok(lhs == rhs)
        },
        |&(t, i, j)| format!("{} on {}·{}", d_name(t), b_name(i), b_name(j)),
    )?);
    let fixed_c = Coordinatizer::new(data.fixed());
    let skew_c = Coordinatizer::new(data.skew());
    checks.push(sweep(
        "d preserves A, B and c",
        (0..dd).flat_map(|t| (0..parts.len()).map(move |i| (t, i))),
        |&(t, i)| {
            let img = data.phi_apply(&SparseVec::unit(t), &parts[i].1);
            let (a, c) = data.split_parts(&img);
            Ok(match parts[i].0 {
                0 => c.is_zero() && fixed_c.contains(&a),
                1 => c.is_zero() && skew_c.contains(&a),
                _ => a.is_zero(),
            })
        },
        |&(t, i)| format!("{} on {}", d_name(t), parts[i].2),
    )?);
    checks.push(sweep(
        "pairing is d-equivariant",
        (0..dd).flat_map(|t| pairs(db).map(move |(i, j)| (t, i, j))),
        |&(t, i, j)| {
            let d = SparseVec::unit(t);
            let pij = data.pairing.get(i, j)?;
            let mut lhs = SparseVec::new();
            for (s, c) in pij.iter() {
                lhs.add_scaled(c, &data.d.get(t, s));
            }
            let mut rhs = data.pair(&data.phi_apply(&d, &ub(i)), &ub(j))?;
            rhs.add_scaled(&sgn(sign_flip(d_par(t), b_par(i))), &data.pair(&ub(i), &data.phi_apply(&d, &ub(j)))?);
            Ok(lhs == rhs)
        },
        |&(t, i, j)| format!("{} on ⟨{}, {}⟩", d_name(t), b_name(i), b_name(j)),
    )?);
    checks.push(sweep(
        "pairing: cyclic identity",
        triples(db),
        |&(i, j, l)| {
            let (p1, p2, p3) = (b_par(i), b_par(j), b_par(l));
            let mut sum = data.pair(&ub(i), &data.b_product(&ub(j), &ub(l))?)?.scaled(&sgn(sign_flip(p1, p3)));
            sum.add_scaled(&sgn(sign_flip(p2, p1)), &data.pair(&ub(j), &data.b_product(&ub(l), &ub(i))?)?);
            sum.add_scaled(&sgn(sign_flip(p3, p2)), &data.pair(&ub(l), &data.b_product(&ub(i), &ub(j))?)?);
            Ok(sum.is_zero())
        },
        |&(i, j, l)| format!("({}, {}, {})", b_name(i), b_name(j), b_name(l)),
    )?);
    let two_k = &k * scalar::int(2);
    // [a, a′] − [a, a′]^η
    let twisted = |i: usize, j: usize| -> Result<SparseVec, GradedError> {
        let br = data.a_bracket(&ua(i), &ua(j))?;
        Ok(br.sub(&data.eta_of(&br)))
    };
    let chi_twisted = |i: usize, j: usize| -> Result<SparseVec, GradedError> {
        let x = data.chi.get(i, j)?;
        Ok(x.sub(&data.eta_of(&x)))
    };
    checks.push(sweep(
        "⟨a,a′⟩ on a",
        triples(da),
        |&(i, j, l)| {
            let lhs = data.phi_apply(&data.pair(&ua(i), &ua(j))?, &ua(l));
            let rhs = data.a_bracket(&twisted(i, j)?, &ua(l))?.scaled(&(scalar::one() / &two_k));
            Ok(lhs == rhs)
        },
        |&(i, j, l)| format!("⟨{}, {}⟩{}", a_name(i), a_name(j), a_name(l)),
    )?);
    checks.push(sweep(
        "⟨a,a′⟩ on c",
        (0..da).flat_map(|i| (0..da).flat_map(move |j| (0..dc).map(move |l| (i, j, l)))),
        |&(i, j, l)| {
            let lhs = data.phi_apply(&data.pair(&ua(i), &ua(j))?, &c_in_b(l));
            let rhs = data.act(&twisted(i, j)?, &uc(l))?.scaled(&(scalar::one() / &two_k));
            Ok(lhs == data.join_parts(&SparseVec::new(), &rhs))
        },
        |&(i, j, l)| format!("⟨{}, {}⟩{}", a_name(i), a_name(j), c_name(l)),
    )?);
    checks.push(sweep(
        "⟨c,c′⟩ on a",
        (0..dc).flat_map(|i| (0..dc).flat_map(move |j| (0..da).map(move |l| (i, j, l)))),
        |&(i, j, l)| {
            let lhs = data.phi_apply(&data.pair(&c_in_b(i), &c_in_b(j))?, &ua(l));
            let rhs = data.a_bracket(&chi_twisted(i, j)?, &ua(l))?.scaled(&(scalar::one() / &k));
            Ok(lhs == rhs)
        },
        |&(i, j, l)| format!("⟨{}, {}⟩{}", c_name(i), c_name(j), a_name(l)),
    )?);
    checks.push(sweep(
        "⟨c,c′⟩ on c",
        triples(dc),
        |&(i, j, l)| {
            let (p, q, r) = (c_par(i), c_par(j), c_par(l));
            let lhs = data.phi_apply(&data.pair(&c_in_b(i), &c_in_b(j))?, &c_in_b(l));
            let mut rhs = data.act(&chi_twisted(i, j)?, &uc(l))?.scaled(&(scalar::one() / &k));
            let s1 = sgn(p.is_odd() && (q.is_odd() ^ r.is_odd()));
            rhs.add_scaled(&s1, &data.act(&data.eta_of(&data.chi.get(j, l)?), &uc(i))?);
            let s2 = -sgn(sign_flip(q, r));
            rhs.add_scaled(&s2, &data.act(&data.eta_of(&data.chi.get(i, l)?), &uc(j))?);
            Ok(lhs == data.join_parts(&SparseVec::new(), &rhs))
        },
        |&(i, j, l)| format!("⟨{}, {}⟩{}", c_name(i), c_name(j), c_name(l)),
    )?);

    Ok(AxiomReport {
        data: data.name.clone(),
        m,
        n,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_and_laurent_data_pass() {
        for data in [CoordinateData::trivial(), CoordinateData::laurent(2), CoordinateData::laurent_hermitian(2), CoordinateData::exchange()] {
            let r = verify_coordinate_axioms(&data, 2, 2).unwrap();
            assert!(r.passed(), "{}: {:?}", data.name, r.failures());
        }
    }

    #[test]
    fn window_edges_are_skipped_not_failed() {
        let r = verify_coordinate_axioms(&CoordinateData::laurent(2), 2, 2).unwrap();
        let assoc = r.check("a: associative").unwrap();
        assert!(assoc.skipped_out_of_window > 0);
        assert!(assoc.checked > 0);
    }

    #[test]
    fn central_and_matrix_data_pass() {
        let r = verify_coordinate_axioms(&CoordinateData::laurent_central(2), 2, 2).unwrap();
        assert!(r.passed(), "{:?}", r.failures());
        let r = verify_coordinate_axioms(&CoordinateData::matrix_transpose(2, 2).unwrap(), 2, 2).unwrap();
        assert!(r.passed(), "{:?}", r.failures());
        // The matrix pairing is scaled for one value of 2m+1−2n only.
        let r = verify_coordinate_axioms(&CoordinateData::matrix_transpose(2, 2).unwrap(), 3, 2).unwrap();
        assert!(!r.check("⟨a,a′⟩ on a").unwrap().passed);
    }

    #[test]
    fn untwisted_involution_is_caught() {
        let r = verify_coordinate_axioms(&CoordinateData::broken_involution(), 2, 2).unwrap();
        let c = r.check("eta: superinvolution").unwrap();
        assert!(!c.passed);
        assert!(c.witness.is_some());
    }

    #[test]
    fn pairing_must_reach_all_of_d() {
        let mut p = super::super::DataParts {
            name: "extra-d".into(),
            a_parity: vec![Parity::Even],
            d_parity: vec![Parity::Even],
            phi: vec![crate::exactalg::LinearMap::zero(1, 1)],
            ..Default::default()
        };
        p.a_product.add(0, 0, 0, scalar::one());
        let data = CoordinateData::new(p).unwrap();
        let r = verify_coordinate_axioms(&data, 2, 2).unwrap();
        assert!(!r.check("pairing: surjective").unwrap().passed);
    }
}
