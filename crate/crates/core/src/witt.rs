//! Length-2 Witt vectors over `k((t))` and the operator `F − 1`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{same_field, FieldCtx};
use crate::series::LaurentSeries;

pub use crate::ghost::{ghost_oracle_add, ghost_oracle_sub};

#[derive(Clone, PartialEq, Eq)]
pub struct WittVec2 {
    a0: LaurentSeries,
    a1: LaurentSeries,
}

impl fmt::Debug for WittVec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for WittVec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W2( {} ; {} )", self.a0, self.a1)
    }
}

/// `binom(p, i) / p mod p` for `1 ≤ i ≤ p − 1`, as `(p−1)(p−2)…(p−i+1) / i!`.
pub fn bracket_coefficient(ctx: &FieldCtx, i: u32) -> i64 {
    let p = ctx.characteristic() as i64;
    assert!(i >= 1 && (i as i64) < p, "bracket index out of range");
    let mut num = 1i64;
    let mut den = 1i64;
    for j in 1..i as i64 {
        num = num * (p - j) % p;
    }
    for j in 1..=i as i64 {
        den = den * j % p;
    }
    let inv = ctx.inv(ctx.from_int(den)).expect("i! is a unit for i < p");
    ctx.mul(ctx.from_int(num), inv).index() as i64
}

/// Powers `x^0, …, x^{p−1}`.
fn powers(x: &LaurentSeries, p: u32) -> Vec<LaurentSeries> {
    let mut out = Vec::with_capacity(p as usize);
    out.push(LaurentSeries::one(x.ctx()));
    for i in 1..p as usize {
        let next = out[i - 1].mul(x).expect("same context");
        out.push(next);
    }
    out
}

/// `Σ_{i=1}^{p−1} sign(i)·C_i·a^{p−i} b^i` with `sign(i) = (−1)^i` when `alternate`.
fn bracket(a: &LaurentSeries, b: &LaurentSeries, alternate: bool) -> Result<LaurentSeries> {
    let ctx = a.ctx().clone();
    let p = ctx.characteristic();
    let pa = powers(a, p);
    let pb = powers(b, p);
    let mut acc = LaurentSeries::exact_zero(&ctx);
    for i in 1..p {
        let mut c = bracket_coefficient(&ctx, i);
        if alternate && i % 2 == 1 {
            c = -c;
        }
        let term = pa[(p - i) as usize].mul(&pb[i as usize])?.scale_int(c);
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

impl WittVec2 {
    pub fn new(a0: LaurentSeries, a1: LaurentSeries) -> Result<Self> {
        if !same_field(a0.ctx(), a1.ctx()) {
            return Err(Error::ContextMismatch);
        }
        Ok(WittVec2 { a0, a1 })
    }

    pub fn zero(ctx: &Arc<FieldCtx>) -> Self {
        WittVec2 {
            a0: LaurentSeries::exact_zero(ctx),
            a1: LaurentSeries::exact_zero(ctx),
        }
    }

    /// `(x, 0)`.
    pub fn from_first(x: LaurentSeries) -> Self {
        let a1 = LaurentSeries::exact_zero(x.ctx());
        WittVec2 { a0: x, a1 }
    }

    pub fn a0(&self) -> &LaurentSeries {
        &self.a0
    }

    pub fn a1(&self) -> &LaurentSeries {
        &self.a1
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.a0.ctx()
    }

    pub fn is_zero(&self) -> bool {
        self.a0.is_zero() && self.a1.is_zero()
    }

    pub fn truncate(&self, n: i64) -> WittVec2 {
        WittVec2 {
            a0: self.a0.truncate(n),
            a1: self.a1.truncate(n),
        }
    }

    /// Componentwise agreement wherever both sides are determined.
    pub fn agrees_with(&self, other: &WittVec2) -> bool {
        self.a0.agrees_with(&other.a0) && self.a1.agrees_with(&other.a1)
    }

    fn check(&self, other: &WittVec2) -> Result<()> {
        if same_field(self.ctx(), other.ctx()) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    /// `(a0 + b0, a1 + b1 − Σ C_i a0^{p−i} b0^i)`.
    pub fn add(&self, other: &WittVec2) -> Result<WittVec2> {
        self.check(other)?;
        let s0 = self.a0.add(&other.a0)?;
        let s1 = self
            .a1
            .add(&other.a1)?
            .sub(&bracket(&self.a0, &other.a0, false)?)?;
        Ok(WittVec2 { a0: s0, a1: s1 })
    }

    /// `(a0 − b0, a1 − b1 − [Σ (−1)^i C_i a0^{p−i} b0^i + ε·b0^p])`, where
    /// `ε = (1 + (−1)^p)/p` is 1 for `p = 2` and 0 otherwise.
    pub fn sub(&self, other: &WittVec2) -> Result<WittVec2> {
        self.check(other)?;
        let ctx = self.ctx();
        let d0 = self.a0.sub(&other.a0)?;
        let mut br = bracket(&self.a0, &other.a0, true)?;
        if ctx.characteristic() == 2 {
            br = br.add(&other.a0.frobenius())?;
        }
        let d1 = self.a1.sub(&other.a1)?.sub(&br)?;
        Ok(WittVec2 { a0: d0, a1: d1 })
    }

    pub fn neg(&self) -> WittVec2 {
        WittVec2::zero(self.ctx()).sub(self).expect("same context")
    }

    /// `n`-fold Witt sum (`n` may be negative).
    pub fn scale_int(&self, n: i64) -> WittVec2 {
        let base = if n < 0 { self.neg() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = WittVec2::zero(self.ctx());
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.add(&b).expect("same context");
            }
            e >>= 1;
            if e > 0 {
                b = b.add(&b).expect("same context");
            }
        }
        acc
    }

    /// Componentwise Frobenius `(a0^p, a1^p)`.
    pub fn frobenius(&self) -> WittVec2 {
        WittVec2 {
            a0: self.a0.frobenius(),
            a1: self.a1.frobenius(),
        }
    }

    /// `(a0^p, a1^p) −_w (a0, a1)`.
    pub fn frobenius_minus_id(&self) -> WittVec2 {
        self.frobenius().sub(self).expect("same context")
    }
}

pub fn witt_add(a: &WittVec2, b: &WittVec2) -> Result<WittVec2> {
    a.add(b)
}

pub fn witt_sub(a: &WittVec2, b: &WittVec2) -> Result<WittVec2> {
    a.sub(b)
}

pub fn frobenius_minus_id(x: &WittVec2) -> WittVec2 {
    x.frobenius_minus_id()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fe;
    use crate::literal::parse_witt_in;
    use crate::series::Precision;

    fn w(ctx: &Arc<FieldCtx>, s: &str) -> WittVec2 {
        parse_witt_in(ctx, s).unwrap()
    }

    fn mono(ctx: &Arc<FieldCtx>, c: i64, k: i64) -> LaurentSeries {
        LaurentSeries::monomial(ctx, ctx.from_int(c), k)
    }

    #[test]
    fn bracket_coefficients_are_binomials_over_p() {
        let k = FieldCtx::prime(7).unwrap();
        // C(7, i) / 7 = 1, 3, 5, 5, 3, 1
        let got: Vec<i64> = (1..7).map(|i| bracket_coefficient(&k, i)).collect();
        assert_eq!(got, vec![1, 3, 5, 5, 3, 1]);
        let k3 = FieldCtx::prime(3).unwrap();
        assert_eq!(bracket_coefficient(&k3, 2), 1);
    }

    #[test]
    fn one_plus_one_in_char_two() {
        let k = FieldCtx::prime(2).unwrap();
        let one = WittVec2::from_first(LaurentSeries::one(&k));
        let two = one.add(&one).unwrap();
        assert!(two.a0().is_exact_zero());
        assert_eq!(two.a1(), &LaurentSeries::one(&k));
        assert_eq!(ghost_oracle_add(&one, &one).unwrap(), two);
    }

    #[test]
    fn identities() {
        let k = FieldCtx::prime(3).unwrap();
        let a = WittVec2::new(mono(&k, 1, -2), mono(&k, 1, -1)).unwrap();
        let z = WittVec2::zero(&k);
        assert_eq!(a.add(&z).unwrap(), a);
        assert_eq!(a.sub(&z).unwrap(), a);
        assert!(a.sub(&a).unwrap().is_zero());
        let b = WittVec2::from_first(mono(&k, 1, -1));
        let r = b.add(&a).unwrap().sub(&a).unwrap();
        assert_eq!(r, b);
    }

    #[test]
    fn additive_inverse_p3() {
        let k = FieldCtx::prime(3).unwrap();
        let a = WittVec2::from_first(mono(&k, 1, -1));
        let b = WittVec2::from_first(mono(&k, -1, -1));
        let s = a.add(&b).unwrap();
        assert!(s.a0().is_exact_zero());
        // −[a0² b0 + a0 b0²] = −[−t^-3 + t^-3] = 0
        assert!(s.a1().is_exact_zero());
        assert_eq!(ghost_oracle_add(&a, &b).unwrap(), s);
    }

    #[test]
    fn frobenius_minus_id_char_two() {
        let k = FieldCtx::prime(2).unwrap();
        let x = WittVec2::from_first(mono(&k, 1, -1));
        let y = x.frobenius_minus_id();
        let expect = w(&k, "W2(t^-2 + t^-1 + O(t^100); t^-3 + t^-2 + O(t^100))");
        assert!(y.agrees_with(&expect));
        assert!(y.a0().is_exact() && y.a1().is_exact());
        assert_eq!(ghost_oracle_sub(&x.frobenius(), &x).unwrap(), y);
    }

    #[test]
    fn prime_field_constants_are_killed() {
        for p in [2u32, 3, 5] {
            let k = FieldCtx::new(p, 2).unwrap();
            for c0 in k.elements() {
                for c1 in k.elements() {
                    let x = WittVec2::new(
                        LaurentSeries::constant(&k, c0),
                        LaurentSeries::constant(&k, c1),
                    )
                    .unwrap();
                    let in_fp = k.is_in_prime_field(c0) && k.is_in_prime_field(c1);
                    assert_eq!(x.frobenius_minus_id().is_zero(), in_fp, "p={p}");
                }
            }
        }
    }

    #[test]
    fn scaling_matches_repeated_addition() {
        let k = FieldCtx::prime(3).unwrap();
        let a = WittVec2::new(mono(&k, 1, -1), mono(&k, 2, -2)).unwrap();
        let mut acc = WittVec2::zero(&k);
        for n in 0..10 {
            assert_eq!(a.scale_int(n), acc);
            acc = acc.add(&a).unwrap();
        }
        // 9·a = 0 in W2
        assert!(a.scale_int(9).is_zero());
        assert_eq!(a.scale_int(-1).add(&a).unwrap(), WittVec2::zero(&k));
    }

    #[test]
    fn truncated_components_propagate_precision() {
        let k = FieldCtx::prime(3).unwrap();
        let a = w(&k, "W2(t^-1 + t + O(t^5); t^-2 + O(t^5))");
        let b = w(&k, "W2(t^-2 + O(t^6); O(t^6))");
        let s = a.add(&b).unwrap();
        assert!(s.a1().precision() <= Precision::Bounded(5));
        let o = ghost_oracle_add(&a, &b).unwrap();
        assert!(s.agrees_with(&o));
        assert_eq!(s.sub(&b).unwrap().a0().coeff(-1), Fe::ONE);
    }
}
