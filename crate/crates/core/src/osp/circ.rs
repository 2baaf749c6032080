use num_traits::Zero;

use super::context::{u_pair, OspContext};
use super::OspError;
use crate::exactalg::scalar::{self, Scalar};
use crate::exactalg::{sign_flip, supertrace, IndexUniverse, SuperIndex, SuperMatrix, SuperVector};

/// `id_{m0,n0}`: identity on `v_0` and on `v_i, v_ī` for `i ≤ m0` (even) or `i ≤ n0` (odd), zero elsewhere.
pub fn id_mn(ctx: &OspContext, m0: u32, n0: u32) -> Result<SuperMatrix, OspError> {
    if m0 > ctx.m || n0 > ctx.n {
        return Err(OspError::SubPair {
            m: m0,
            n: n0,
            outer_m: ctx.m,
            outer_n: ctx.n,
        });
    }
    let u = ctx.universe;
    let mut x = SuperMatrix::zero(u);
    for ix in u.indices() {
        let keep = match ix {
            SuperIndex::Zero => true,
            SuperIndex::I(k) | SuperIndex::IBar(k) => k <= m0,
            SuperIndex::J(k) | SuperIndex::JBar(k) => k <= n0,
        };
        if keep {
            let p = u.position(ix);
            x.add_entry(p, p, scalar::one());
        }
    }
    Ok(x)
}

/// The bilinear form on vectors of `u`.
pub fn u_form(u: &SuperVector, v: &SuperVector) -> Scalar {
    let mut acc = Scalar::zero();
    for (i, a) in u.coords.iter() {
        for (j, b) in v.coords.iter() {
            let c = u_pair(u.universe.index_at(i), v.universe.index_at(j));
            if !c.is_zero() {
                acc += a * b * c;
            }
        }
    }
    acc
}

/// Matrix of `w ↦ (v,w)·a + c·(u,w)·b` plus `k·id` on the basis of `u`.
fn rank_two(universe: IndexUniverse, a: &SuperVector, v: &SuperVector, b: &SuperVector, u: &SuperVector, c: &Scalar) -> SuperMatrix {
    let mut x = SuperMatrix::zero(universe);
    for col in 0..universe.dim() {
        let w = SuperVector::basis(universe, universe.index_at(col));
        let vw = u_form(v, &w);
        let uw = u_form(u, &w);
        for (r, coeff) in a.coords.iter() {
            x.add_entry(r, col, coeff * &vw);
        }
        for (r, coeff) in b.coords.iter() {
            x.add_entry(r, col, coeff * &uw * c);
        }
    }
    x
}

fn denominator(m0: u32, n0: u32) -> Scalar {
    scalar::int(2 * m0 as i64 + 1 - 2 * n0 as i64)
}

/// `[u,v]: w ↦ (v,w)u + (−1)^{|u||v|}(u,w)v − (2(u,v)/(2m0+1−2n0)) id_{m0,n0}(w)`.
pub fn bracket_uu(ctx: &OspContext, u: &SuperVector, v: &SuperVector, m0: u32, n0: u32) -> Result<SuperMatrix, OspError> {
    let (pu, pv) = (u.parity().ok_or(crate::exactalg::AlgError::NonHomogeneous)?, v.parity().ok_or(crate::exactalg::AlgError::NonHomogeneous)?);
    let s = scalar::sign(sign_flip(pu, pv));
    let mut x = rank_two(ctx.universe, u, v, v, u, &s);
    let k = scalar::int(2) * u_form(u, v) / denominator(m0, n0);
    x.add_scaled(&-k, &id_mn(ctx, m0, n0)?);
    Ok(x)
}

/// `u∘v: w ↦ (v,w)u − (−1)^{|u||v|}(u,w)v`.
pub fn circ_uu(ctx: &OspContext, u: &SuperVector, v: &SuperVector) -> Result<SuperMatrix, OspError> {
    let (pu, pv) = (u.parity().ok_or(crate::exactalg::AlgError::NonHomogeneous)?, v.parity().ok_or(crate::exactalg::AlgError::NonHomogeneous)?);
    let s = -scalar::sign(sign_flip(pu, pv));
    Ok(rank_two(ctx.universe, u, v, v, u, &s))
}

/// `x∘y = xy + (−1)^{|x||y|}yx − (2 str(xy)/(2m0+1−2n0)) id_{m0,n0}`.
pub fn circ_xy(ctx: &OspContext, x: &SuperMatrix, y: &SuperMatrix, m0: u32, n0: u32) -> Result<SuperMatrix, OspError> {
    let s = scalar::sign(sign_flip(x.require_parity()?, y.require_parity()?));
    let xy = x.mul(y);
    let mut out = xy.clone();
    out.add_scaled(&s, &y.mul(x));
    let k = scalar::int(2) * supertrace(&xy) / denominator(m0, n0);
    out.add_scaled(&-k, &id_mn(ctx, m0, n0)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::osp::{build_context, satisfies_condition};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_homogeneous(ctx: &OspContext, rng: &mut ChaCha8Rng, odd: bool) -> SuperVector {
        let u = ctx.universe;
        let mut v = SuperVector {
            universe: u,
            coords: Default::default(),
        };
        for p in 0..u.dim() {
            if u.parity_at(p).is_odd() == odd {
                v.coords.add_term(p, scalar::int(rng.gen_range(-3..=3)));
            }
        }
        v
    }

    #[test]
    fn full_identity_has_parity_count_supertrace() {
        let ctx = build_context(2, 2).unwrap();
        assert_eq!(supertrace(&id_mn(&ctx, 2, 2).unwrap()), scalar::int(1));
        assert_eq!(supertrace(&id_mn(&ctx, 1, 2).unwrap()), scalar::int(-1));
        assert!(id_mn(&ctx, 3, 1).is_err());
    }

    #[test]
    fn circle_lands_in_g_and_bracket_in_s() {
        let ctx = build_context(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let (a, b) = (rng.gen_bool(0.5), rng.gen_bool(0.5));
            let u = random_homogeneous(&ctx, &mut rng, a);
            let v = random_homogeneous(&ctx, &mut rng, b);
            let c = circ_uu(&ctx, &u, &v).unwrap();
            assert!(ctx.g.coords(&c).is_some());
            assert!(satisfies_condition(&c, -1).unwrap());
            let br = bracket_uu(&ctx, &u, &v, 2, 2).unwrap();
            assert!(satisfies_condition(&br, 1).unwrap());
            assert!(ctx.s.coords(&br).is_some());
        }
    }

    #[test]
    fn circ_xy_is_supertraceless_in_full_context() {
        let ctx = build_context(2, 2).unwrap();
        for x in ctx.g.elements.iter().step_by(3) {
            for y in ctx.s.elements.iter().step_by(5) {
                let z = circ_xy(&ctx, &x.matrix, &y.matrix, 2, 2).unwrap();
                if (x.parity + y.parity).is_odd() {
                    continue;
                }
                assert!(supertrace(&z).is_zero(), "{} {}", x.label, y.label);
            }
        }
    }
}
