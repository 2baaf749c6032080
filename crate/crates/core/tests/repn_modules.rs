use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use superroot::exactalg::Parity;
use superroot::osp::{build_context, Carrier, OspContext};
use superroot::repn::{hom_space, hom_space_with, Decomposer, GModule, Over, Tag};

fn even_part_module(ctx: &OspContext, carrier: Carrier, parity: Parity) -> GModule {
    GModule::from_carrier(ctx, carrier).unwrap().restrict_even(ctx).parity_part(ctx, parity).unwrap()
}

#[test]
fn odd_part_tensor_natural_to_second_natural_vanishes() {
    let ctx = build_context(2, 2).unwrap();
    let g1 = even_part_module(&ctx, Carrier::G, Parity::Odd);
    let s0 = even_part_module(&ctx, Carrier::S, Parity::Even);
    for p in [Parity::Even, Parity::Odd] {
        let up = even_part_module(&ctx, Carrier::U, p);
        let x = g1.tensor(&up, &ctx).unwrap();
        assert_eq!(hom_space(&x, &s0, Over::Even, &ctx).unwrap().dim, 0, "parity {p:?}");
        let full = hom_space_with(&x, &s0, Over::Even, &ctx, false).unwrap();
        assert_eq!(full.unknowns, x.dim() * s0.dim());
        assert_eq!(full.dim, 0, "parity {p:?}");
    }
}

#[test]
fn shuffled_sums_round_trip() {
    let ctx = build_context(2, 2).unwrap();
    let d = Decomposer::new(&ctx).unwrap();
    let pieces: BTreeMap<Tag, GModule> = [
        (Tag::Adjoint, GModule::from_carrier(&ctx, Carrier::G).unwrap()),
        (Tag::SecondNatural, GModule::from_carrier(&ctx, Carrier::S).unwrap()),
        (Tag::Natural, GModule::from_carrier(&ctx, Carrier::U).unwrap()),
        (Tag::Trivial, GModule::trivial(&ctx, 1)),
    ]
    .into_iter()
    .collect();
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let count = rng.gen_range(1..=6);
        let tags: Vec<Tag> = (0..count).map(|_| Tag::ALL[rng.gen_range(0..4)]).collect();
        let parts: Vec<&GModule> = tags.iter().map(|t| &pieces[t]).collect();
        let sum = GModule::direct_sum(&parts).unwrap();
        let mut perm: Vec<usize> = (0..sum.dim()).collect();
        perm.shuffle(&mut rng);
        let module = sum.permuted(&perm);
        let rep = d.decompose(&module).unwrap();
        let mut want = BTreeMap::new();
        for t in &tags {
            *want.entry(*t).or_insert(0) += 1;
        }
        assert!(rep.success(), "seed {seed}");
        assert_eq!(rep.tags(), want, "seed {seed}");
    }
}
