//! Witt addition and subtraction through ghost components.
//!
//! Coefficients are lifted coordinate-wise to the Galois ring
//! `GR(p², e) = (Z/p²)[x]/(M̂)`, with `M̂` the integer lift of the field
//! modulus. A vector `(x0, x1)` has ghost components `(x0, x0^p + p·x1)`,
//! which add componentwise; the result is pulled back by dividing
//! `W1 − ŝ0^p` by `p`. Arithmetic uses sparse Laurent polynomials and shares
//! nothing with [`crate::series`] beyond reading and writing coefficients.

use std::cmp::min;
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{same_field, Fe, FieldCtx};
use crate::series::{LaurentSeries, Precision};
use crate::witt::WittVec2;

/// `GR(p², e)` with elements as coordinate vectors of length `e`.
struct GaloisRing {
    p: u64,
    m: u64,
    e: usize,
    /// `x^e = −Σ modulus[i] x^i`, lifted
    modulus: Vec<u64>,
}

type Gr = Vec<u64>;
type Poly = BTreeMap<i64, Gr>;

impl GaloisRing {
    fn new(ctx: &FieldCtx) -> Self {
        let p = ctx.characteristic() as u64;
        GaloisRing {
            p,
            m: p * p,
            e: ctx.degree() as usize,
            modulus: ctx.modulus().iter().map(|&c| c as u64).collect(),
        }
    }

    fn is_zero(&self, a: &Gr) -> bool {
        a.iter().all(|&c| c == 0)
    }

    fn add(&self, a: &Gr, b: &Gr) -> Gr {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.m).collect()
    }

    fn sub(&self, a: &Gr, b: &Gr) -> Gr {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x + self.m - y) % self.m)
            .collect()
    }

    fn mul(&self, a: &Gr, b: &Gr) -> Gr {
        let e = self.e;
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.m;
            }
        }
        for d in (e..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for i in 0..e {
                let sub = c * self.modulus[i] % self.m;
                prod[d - e + i] = (prod[d - e + i] + self.m - sub) % self.m;
            }
        }
        prod.truncate(e);
        prod
    }

    fn lift(&self, ctx: &FieldCtx, c: Fe) -> Gr {
        ctx.coords(c).into_iter().map(|x| x as u64).collect()
    }

    fn scale_p(&self, a: &Gr) -> Gr {
        a.iter().map(|x| x * self.p % self.m).collect()
    }

    /// Exact division by `p`; the caller guarantees divisibility.
    fn div_p(&self, a: &Gr) -> Gr {
        a.iter()
            .map(|&x| {
                assert!(
                    x % self.p == 0,
                    "ghost inversion: division by p is not exact"
                );
                x / self.p
            })
            .collect()
    }
}

fn poly_lift(r: &GaloisRing, s: &LaurentSeries) -> Poly {
    s.terms().map(|(k, c)| (k, r.lift(s.ctx(), c))).collect()
}

fn poly_add(r: &GaloisRing, a: &Poly, b: &Poly, negate: bool) -> Poly {
    let mut out = a.clone();
    for (k, c) in b {
        let zero = vec![0; r.e];
        let cur = out.get(k).unwrap_or(&zero);
        let next = if negate { r.sub(cur, c) } else { r.add(cur, c) };
        out.insert(*k, next);
    }
    out.retain(|_, c| !r.is_zero(c));
    out
}

fn poly_mul(r: &GaloisRing, a: &Poly, b: &Poly) -> Poly {
    let mut out: Poly = BTreeMap::new();
    for (i, x) in a {
        for (j, y) in b {
            let t = r.mul(x, y);
            let slot = out.entry(i + j).or_insert_with(|| vec![0; r.e]);
            *slot = r.add(slot, &t);
        }
    }
    out.retain(|_, c| !r.is_zero(c));
    out
}

fn poly_pow(r: &GaloisRing, a: &Poly, n: u64) -> Poly {
    let mut out: Poly = BTreeMap::new();
    let mut one = vec![0; r.e];
    one[0] = 1;
    out.insert(0, one);
    for _ in 0..n {
        out = poly_mul(r, &out, a);
    }
    out
}

/// Reduction mod `p` back to a series over `ctx`.
fn poly_reduce(
    r: &GaloisRing,
    ctx: &Arc<FieldCtx>,
    a: &Poly,
    prec: Precision,
) -> Result<LaurentSeries> {
    let mut terms = Vec::with_capacity(a.len());
    for (k, c) in a {
        let coords: Vec<u32> = c.iter().map(|&x| (x % r.p) as u32).collect();
        terms.push((*k, ctx.from_coords(&coords)?));
    }
    Ok(LaurentSeries::from_terms(ctx, &terms, prec))
}

/// Valuation lower bound; exact zero yields `None`.
fn vlb(s: &LaurentSeries) -> Option<i64> {
    match s.valuation() {
        Ok(v) => v,
        Err(_) => s.precision().bound(),
    }
}

/// How far `x^i·y^j` is known when `x`, `y` are known to their precisions:
/// perturbing `x` by `O(t^N)` moves it by `O(t^{N + (i−1)v(x) + j·v(y)})`.
fn monomial_precision(x: &LaurentSeries, i: i64, y: &LaurentSeries, j: i64) -> Precision {
    let (Some(vx), Some(vy)) = (vlb(x), vlb(y)) else {
        return Precision::Exact;
    };
    let (vx, vy) = (if i == 0 { 0 } else { vx }, if j == 0 { 0 } else { vy });
    let mut prec = Precision::Exact;
    if i > 0 {
        if let Precision::Bounded(n) = x.precision() {
            prec = min(prec, Precision::Bounded(n + (i - 1) * vx + j * vy));
        }
    }
    if j > 0 {
        if let Precision::Bounded(n) = y.precision() {
            prec = min(prec, Precision::Bounded(n + i * vx + (j - 1) * vy));
        }
    }
    prec
}

/// Precision of component 1: the carry is a combination of `a0^{p−i}·b0^i`
/// for `0 < i < p` (every such coefficient is a unit), plus `b0^p` when
/// subtracting in characteristic 2.
fn component_one_precision(a: &WittVec2, b: &WittVec2, p: i64, negate: bool) -> Precision {
    let mut prec = min(a.a1().precision(), b.a1().precision());
    for i in 1..p {
        prec = min(prec, monomial_precision(a.a0(), p - i, b.a0(), i));
    }
    if negate && p == 2 && vlb(b.a0()).is_some() {
        // a square in characteristic 2 is Frobenius, so it keeps twice the precision
        if let Precision::Bounded(n) = b.a0().precision() {
            prec = min(prec, Precision::Bounded(2 * n));
        }
    }
    prec
}

fn ghost_combine(a: &WittVec2, b: &WittVec2, negate: bool) -> Result<WittVec2> {
    if !same_field(a.ctx(), b.ctx()) {
        return Err(Error::ContextMismatch);
    }
    let ctx = a.ctx().clone();
    let r = GaloisRing::new(&ctx);
    let p = r.p;
    let ghost = |x: &WittVec2| -> (Poly, Poly) {
        let x0 = poly_lift(&r, x.a0());
        let x1 = poly_lift(&r, x.a1());
        let w1 = poly_add(
            &r,
            &poly_pow(&r, &x0, p),
            &x1.iter().map(|(k, c)| (*k, r.scale_p(c))).collect(),
            false,
        );
        (x0, w1)
    };
    let (a0, aw1) = ghost(a);
    let (b0, bw1) = ghost(b);
    let s0 = poly_add(&r, &a0, &b0, negate);
    let sw1 = poly_add(&r, &aw1, &bw1, negate);
    let diff = poly_add(&r, &sw1, &poly_pow(&r, &s0, p), true);
    let s1: Poly = diff.iter().map(|(k, c)| (*k, r.div_p(c))).collect();
    let prec0 = min(a.a0().precision(), b.a0().precision());
    let prec1 = component_one_precision(a, b, p as i64, negate);
    WittVec2::new(
        poly_reduce(&r, &ctx, &s0, prec0)?,
        poly_reduce(&r, &ctx, &s1, prec1)?,
    )
}

/// Witt sum computed through ghost components.
pub fn ghost_oracle_add(a: &WittVec2, b: &WittVec2) -> Result<WittVec2> {
    ghost_combine(a, b, false)
}

/// Witt difference computed through ghost components.
pub fn ghost_oracle_sub(a: &WittVec2, b: &WittVec2) -> Result<WittVec2> {
    ghost_combine(a, b, true)
}
