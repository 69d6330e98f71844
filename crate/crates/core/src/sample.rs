//! Random instances for the verification suites.

use std::sync::Arc;

use rand::Rng;

use crate::field::{Fe, FieldCtx};
use crate::ramfilt::{GroupDescriptor, JumpProfile};
use crate::series::{LaurentSeries, Precision};
use crate::witt::WittVec2;

pub fn element<R: Rng>(k: &FieldCtx, rng: &mut R) -> Fe {
    k.from_index(rng.gen_range(0..k.order()))
        .expect("index in range")
}

pub fn nonzero<R: Rng>(k: &FieldCtx, rng: &mut R) -> Fe {
    k.from_index(rng.gen_range(1..k.order()))
        .expect("index in range")
}

/// Sparse random series on `[lo, hi)`, truncated at `hi`.
pub fn series<R: Rng>(k: &Arc<FieldCtx>, rng: &mut R, lo: i64, hi: i64) -> LaurentSeries {
    let mut terms = Vec::new();
    for e in lo..hi {
        if rng.gen_bool(0.5) {
            terms.push((e, element(k, rng)));
        }
    }
    LaurentSeries::from_terms(k, &terms, Precision::Bounded(hi))
}

/// Series in standard form with pole order exactly `n` (prime to `p`), whose
/// leading coefficient is an `n`-th power. No constant term, no positive part.
pub fn standard_form<R: Rng>(k: &Arc<FieldCtx>, rng: &mut R, n: i64, prec: i64) -> LaurentSeries {
    let p = k.characteristic() as i64;
    let r = nonzero(k, rng);
    let mut terms = vec![(-n, k.pow(r, n as u64))];
    for e in (-n + 1)..0 {
        if e % p != 0 && rng.gen_bool(0.4) {
            terms.push((e, element(k, rng)));
        }
    }
    LaurentSeries::from_terms(k, &terms, Precision::Bounded(prec))
}

/// `g^p − g` for a random `g` with poles down to `t^{-depth}`.
pub fn artin_schreier_noise<R: Rng>(
    k: &Arc<FieldCtx>,
    rng: &mut R,
    depth: i64,
    prec: i64,
) -> LaurentSeries {
    let g = series(k, rng, -depth, prec);
    g.frobenius().sub(&g).expect("same field").truncate(prec)
}

pub fn witt<R: Rng>(k: &Arc<FieldCtx>, rng: &mut R, depth: i64, prec: i64) -> WittVec2 {
    WittVec2::new(series(k, rng, -depth, prec), series(k, rng, -depth, prec)).expect("same field")
}

/// Lower-numbered profile with up to `max_jumps` jumps on a random divisor chain.
pub fn lower_profile<R: Rng>(rng: &mut R, p: u64, max_jumps: usize) -> JumpProfile {
    let count = rng.gen_range(0..=max_jumps);
    let mut orders = vec![1u64];
    let mut rank = 0;
    for _ in 0..count {
        let step = rng.gen_range(1..=2);
        rank += step as usize;
        orders.push(orders.last().unwrap() * p.pow(step));
    }
    orders.reverse();
    let mut jumps = Vec::with_capacity(count);
    let mut last = 0i64;
    for _ in 0..count {
        last += rng.gen_range(1..=12);
        jumps.push(last);
    }
    let group = GroupDescriptor::elementary(p, rank);
    JumpProfile::lower(&jumps, orders, group).expect("valid profile")
}
