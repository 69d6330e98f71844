//! Reduction of Artin-Schreier data to standard form.
//!
//! A series `f` is rewritten as `f_red + (x^p − x)` where `f_red` has only
//! poles of order prime to `p`, a constant from a fixed set of
//! representatives of `k/℘(k)`, and no positive part.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Fe;
use crate::series::{LaurentSeries, Precision};
use crate::witt::WittVec2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AsKind {
    /// Pole of order `n`, prime to `p`.
    WildReduced { n: i64 },
    /// No pole; the constant has nonzero absolute trace `trace`.
    Unramified { trace: u32 },
    /// `f ∈ ℘(K)`.
    Trivial,
}

impl AsKind {
    pub fn pole_order(&self) -> Option<i64> {
        match *self {
            AsKind::WildReduced { n } => Some(n),
            _ => None,
        }
    }

    pub fn is_wild(&self) -> bool {
        matches!(self, AsKind::WildReduced { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedAS {
    pub f_red: LaurentSeries,
    /// `f − f_red = shift^p − shift`
    pub shift: LaurentSeries,
    pub kind: AsKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedWitt2 {
    pub vec_red: WittVec2,
    /// `original −_w vec_red = (F − 1)(shift)`
    pub shift: WittVec2,
    pub kinds: [AsKind; 2],
}

impl ReducedWitt2 {
    /// `(n0, n1)` when component 0 is wild; a component 1 without pole gives 0.
    pub fn pole_orders(&self) -> Option<(i64, i64)> {
        let n0 = self.kinds[0].pole_order()?;
        Some((n0, self.kinds[1].pole_order().unwrap_or(0)))
    }
}

/// `−Σ_{i≥0} h^{p^i}` for `v(h) ≥ 1`, a solution of `x^p − x = h` modulo `t^bound`.
fn positive_part_shift(h: &LaurentSeries, bound: i64) -> Result<LaurentSeries> {
    let ctx = h.ctx();
    if h.is_zero() {
        return Ok(LaurentSeries::exact_zero(ctx));
    }
    let mut acc = LaurentSeries::exact_zero(ctx);
    let mut cur = h.clone();
    while !cur.is_zero() && cur.order()? < bound {
        acc = acc.add(&cur)?;
        cur = cur.frobenius();
    }
    Ok(acc.neg().truncate(bound))
}

pub fn reduce_as(f: &LaurentSeries) -> Result<ReducedAS> {
    let ctx = f.ctx().clone();
    let p = ctx.characteristic() as i64;
    let prec = f.precision();

    let mut poles: BTreeMap<i64, Fe> = f.terms().filter(|&(k, _)| k < 0).collect();
    let mut kept: Vec<(i64, Fe)> = Vec::new();
    let mut shift_terms: Vec<(i64, Fe)> = Vec::new();
    while let Some((k, c)) = poles.pop_first() {
        if k % p == 0 {
            // c t^{pm} = (r t^m)^p − r t^m + r t^m
            let r = ctx.frobenius_inv(c);
            let m = k / p;
            let slot = poles.entry(m).or_insert(Fe::ZERO);
            *slot = ctx.add(*slot, r);
            if slot.is_zero() {
                poles.remove(&m);
            }
            shift_terms.push((m, r));
        } else {
            kept.push((k, c));
        }
    }
    let pole_shift = LaurentSeries::from_terms(&ctx, &shift_terms, Precision::Exact);
    let pole_part = |prec| LaurentSeries::from_terms(&ctx, &kept, prec);

    if let Precision::Bounded(n) = prec {
        if n <= 0 {
            let lowest = kept.first().map(|t| t.0);
            return match lowest {
                Some(k) if k < n => Ok(ReducedAS {
                    f_red: pole_part(prec),
                    shift: pole_shift.truncate(n),
                    kind: AsKind::WildReduced { n: -k },
                }),
                _ => Err(Error::precision(format!(
                    "series known only to O(t^{n}); no pole of order prime to p survives below the precision floor"
                ))),
            };
        }
    }

    // constant term: keep Tr(c)·θ with Tr(θ) = 1, absorb the trace-zero rest
    let c = f.coeff(0);
    let tr = ctx.trace(c);
    let rep = ctx.mul(ctx.from_int(tr as i64), ctx.trace_one());
    let r = ctx
        .artin_schreier_root(ctx.sub(c, rep))
        .ok_or_else(|| Error::Internal("trace-zero constant without Artin-Schreier root".into()))?;

    let positive: Vec<(i64, Fe)> = f.terms().filter(|&(k, _)| k > 0).collect();
    let h = LaurentSeries::from_terms(&ctx, &positive, prec);
    let bound = match prec {
        Precision::Bounded(n) => n,
        Precision::Exact => p * h.max_exponent().unwrap_or(0) + 1,
    };
    let h = LaurentSeries::from_terms(&ctx, &positive, Precision::Exact);
    let x = positive_part_shift(&h, bound)?;

    let mut red_terms = kept.clone();
    red_terms.push((0, rep));
    let f_red = LaurentSeries::from_terms(&ctx, &red_terms, prec);
    let shift = pole_shift.add(&LaurentSeries::constant(&ctx, r))?.add(&x)?;
    let kind = match kept.first() {
        Some(&(k, _)) => AsKind::WildReduced { n: -k },
        None if tr != 0 => AsKind::Unramified { trace: tr },
        None => AsKind::Trivial,
    };
    Ok(ReducedAS { f_red, shift, kind })
}

/// Reduce component 0, carry the correction into component 1 with `−_w`,
/// then reduce component 1.
pub fn reduce_witt2(v: &WittVec2) -> Result<ReducedWitt2> {
    let r0 = reduce_as(v.a0())?;
    let x0 = r0.shift.clone();
    let w = v.sub(&WittVec2::from_first(x0.clone()).frobenius_minus_id())?;
    let r1 = reduce_as(w.a1())?;
    let vec_red = WittVec2::new(r0.f_red.clone(), r1.f_red.clone())?;
    let shift = WittVec2::new(x0, r1.shift.clone())?;
    debug_assert!(w.a0().agrees_with(&r0.f_red));
    Ok(ReducedWitt2 {
        vec_red,
        shift,
        kinds: [r0.kind, r1.kind],
    })
}

/// Relation between two Witt vectors defining cyclic extensions of degree `p²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "c", rename_all = "snake_case")]
pub enum EquivClass {
    Equal,
    /// `v0 ≡ c·w0 mod ℘(K)` but the full vectors differ.
    SharedSubfield(u32),
    Disjoint,
}

/// The `c ∈ {1, …, p−1}` with `f − c·g ∈ ℘(K)`, if any.
pub fn as_multiple(f: &LaurentSeries, g: &LaurentSeries) -> Result<Option<u32>> {
    let p = f.ctx().characteristic();
    for c in 1..p {
        let d = f.sub(&g.scale_int(c as i64))?;
        if reduce_as(&d)?.kind == AsKind::Trivial {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

pub fn equivalence_class_test(v: &WittVec2, w: &WittVec2) -> Result<EquivClass> {
    let p = v.ctx().characteristic() as i64;
    let Some(c0) = as_multiple(v.a0(), w.a0())? else {
        return Ok(EquivClass::Disjoint);
    };
    for k in 0..p {
        let c = c0 as i64 + p * k;
        let d = v.sub(&w.scale_int(c))?;
        let r = reduce_witt2(&d)?;
        if r.kinds == [AsKind::Trivial, AsKind::Trivial] {
            return Ok(EquivClass::Equal);
        }
    }
    Ok(EquivClass::SharedSubfield(c0))
}
