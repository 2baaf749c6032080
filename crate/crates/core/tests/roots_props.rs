use std::collections::BTreeSet;

use proptest::prelude::*;
use superroot::exactalg::scalar;
use superroot::roots::{check_ears, gen_locally_finite, gen_supersystem, root_string, weyl_closure, FiniteType, RootSet, SuperRow, Weight};

fn sample(k: usize) -> RootSet {
    match k {
        0 => gen_locally_finite(FiniteType::B, 2),
        1 => gen_locally_finite(FiniteType::C, 2),
        2 => gen_locally_finite(FiniteType::BC, 2),
        3 => gen_locally_finite(FiniteType::D, 3),
        4 => gen_locally_finite(FiniteType::A, 2),
        5 => gen_supersystem(&SuperRow::B(2, 2)),
        6 => gen_supersystem(&SuperRow::BC(2, 2)),
        _ => gen_supersystem(&SuperRow::DotA0(2)),
    }
    .unwrap()
}

/// `(p, q)` found by stepping `β ± kα` until leaving `R`, for `|k| ≤ 8`.
fn brute_string(alpha: &Weight, beta: &Weight, r: &RootSet) -> (i64, i64) {
    let hit = |k: i64| r.contains(&beta.add_scaled(&scalar::int(k), alpha));
    let p = (1..=8).take_while(|&k| hit(-k)).count() as i64;
    let q = (1..=8).take_while(|&k| hit(k)).count() as i64;
    (p, q)
}

#[test]
fn bc2_strings_match_brute_force() {
    let r = gen_locally_finite(FiniteType::BC, 2).unwrap();
    let real = r.real_nonzero();
    assert_eq!(real.len(), 12);
    for a in &real {
        for b in &r.roots {
            let s = root_string(a, b, &r).unwrap();
            assert_eq!((s.p, s.q), brute_string(a, b, &r), "string of {b} along {a}");
            assert!(s.unbroken && s.matches_cartan);
        }
    }
}

#[test]
fn every_single_deletion_from_bc2_fails() {
    let r = gen_locally_finite(FiniteType::BC, 2).unwrap();
    for a in r.nonzero() {
        let mut cut = r.clone();
        cut.roots.remove(a);
        assert!(!check_ears(&[], &cut).all_pass(), "deleting {a} went unnoticed");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rescaling_keeps_every_verdict(k in 0usize..8, num in 1i64..7, den in 1i64..7) {
        let r = sample(k);
        let c = scalar::frac(num, den);
        let a = check_ears(&[], &r);
        let b = check_ears(&[], &r.rescaled(&c));
        prop_assert!(a.all_pass());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn real_roots_are_weyl_closed(k in 0usize..8) {
        let r = sample(k);
        let real = r.real_nonzero();
        let seeds: BTreeSet<Weight> = real.iter().take(1).cloned().collect();
        let orbit = weyl_closure(&seeds, &real, &r.form).unwrap();
        prop_assert!(orbit.is_subset(&r.roots));
        let all = weyl_closure(&r.roots, &real, &r.form).unwrap();
        prop_assert_eq!(all, r.roots.clone());
    }
}
