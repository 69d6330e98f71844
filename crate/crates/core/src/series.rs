//! Truncated Laurent series `Σ c_k t^k + O(t^N)` over `F_{p^e}`.
//!
//! Coefficients are stored densely from the valuation upward. A series is
//! either known modulo `t^N` ([`Precision::Bounded`]) or is an exact Laurent
//! polynomial ([`Precision::Exact`]). Every operation propagates precision so
//! that no reported coefficient depends on unknown input terms.

use std::cmp::{max, min};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{same_field, Fe, FieldCtx};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Precision {
    /// Known modulo `t^N`.
    Bounded(i64),
    Exact,
}

impl Precision {
    pub fn shift(self, d: i64) -> Precision {
        match self {
            Precision::Bounded(n) => Precision::Bounded(n + d),
            Precision::Exact => Precision::Exact,
        }
    }

    pub fn bound(self) -> Option<i64> {
        match self {
            Precision::Bounded(n) => Some(n),
            Precision::Exact => None,
        }
    }

    /// Whether the coefficient of `t^k` is determined.
    pub fn covers(self, k: i64) -> bool {
        match self {
            Precision::Bounded(n) => k < n,
            Precision::Exact => true,
        }
    }

    fn scale(self, f: i64) -> Precision {
        match self {
            Precision::Bounded(n) => Precision::Bounded(n * f),
            Precision::Exact => Precision::Exact,
        }
    }
}

#[derive(Clone)]
pub struct LaurentSeries {
    ctx: Arc<FieldCtx>,
    start: i64,
    coeffs: Vec<Fe>,
    prec: Precision,
}

impl PartialEq for LaurentSeries {
    fn eq(&self, other: &Self) -> bool {
        same_field(&self.ctx, &other.ctx)
            && self.prec == other.prec
            && self.coeffs == other.coeffs
            && (self.coeffs.is_empty() || self.start == other.start)
    }
}

impl Eq for LaurentSeries {}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with_var(f, "t")
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

impl LaurentSeries {
    /// Builds a series from a dense coefficient run starting at `t^start`,
    /// dropping zeros and anything at or beyond the precision.
    pub fn from_dense(ctx: &Arc<FieldCtx>, start: i64, coeffs: Vec<Fe>, prec: Precision) -> Self {
        let mut s = LaurentSeries {
            ctx: ctx.clone(),
            start,
            coeffs,
            prec,
        };
        s.normalize();
        s
    }

    pub fn from_terms(ctx: &Arc<FieldCtx>, terms: &[(i64, Fe)], prec: Precision) -> Self {
        let live: Vec<(i64, Fe)> = terms
            .iter()
            .copied()
            .filter(|&(k, c)| !c.is_zero() && prec.covers(k))
            .collect();
        if live.is_empty() {
            return Self::zero(ctx, prec);
        }
        let lo = live.iter().map(|t| t.0).min().unwrap();
        let hi = live.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![Fe::ZERO; (hi - lo + 1) as usize];
        for (k, c) in live {
            let slot = &mut coeffs[(k - lo) as usize];
            *slot = ctx.add(*slot, c);
        }
        Self::from_dense(ctx, lo, coeffs, prec)
    }

    /// `O(t^N)` or, with [`Precision::Exact`], the exact zero.
    pub fn zero(ctx: &Arc<FieldCtx>, prec: Precision) -> Self {
        LaurentSeries {
            ctx: ctx.clone(),
            start: 0,
            coeffs: Vec::new(),
            prec,
        }
    }

    pub fn exact_zero(ctx: &Arc<FieldCtx>) -> Self {
        Self::zero(ctx, Precision::Exact)
    }

    pub fn one(ctx: &Arc<FieldCtx>) -> Self {
        Self::monomial(ctx, Fe::ONE, 0)
    }

    /// Exact `c·t^k`.
    pub fn monomial(ctx: &Arc<FieldCtx>, c: Fe, k: i64) -> Self {
        Self::from_dense(ctx, k, vec![c], Precision::Exact)
    }

    /// Exact constant.
    pub fn constant(ctx: &Arc<FieldCtx>, c: Fe) -> Self {
        Self::monomial(ctx, c, 0)
    }

    fn normalize(&mut self) {
        if let Precision::Bounded(n) = self.prec {
            let keep = (n - self.start).clamp(0, self.coeffs.len() as i64) as usize;
            self.coeffs.truncate(keep);
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(i) => {
                if i > 0 {
                    self.coeffs.drain(..i);
                    self.start += i as i64;
                }
            }
            None => {
                self.coeffs.clear();
                self.start = 0;
            }
        }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec == Precision::Exact
    }

    /// True when no nonzero coefficient is known (exact zero or `O(t^N)`).
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.is_zero() && self.is_exact()
    }

    /// Valuation: `Some(v)` for a nonzero series, `None` for the exact zero.
    /// A series that is zero only to its precision has no readable valuation.
    pub fn valuation(&self) -> Result<Option<i64>> {
        if !self.coeffs.is_empty() {
            return Ok(Some(self.start));
        }
        match self.prec {
            Precision::Exact => Ok(None),
            Precision::Bounded(n) => Err(Error::precision(format!(
                "series is zero to precision O(t^{n}); valuation unknown"
            ))),
        }
    }

    /// Valuation of a series that must be nonzero.
    pub fn order(&self) -> Result<i64> {
        match self.valuation()? {
            Some(v) => Ok(v),
            None => Err(Error::ZeroDivision),
        }
    }

    /// Lower bound for the valuation; `None` means `+∞` (exact zero).
    fn val_bound(&self) -> Option<i64> {
        if !self.coeffs.is_empty() {
            Some(self.start)
        } else {
            self.prec.bound()
        }
    }

    pub fn leading_coefficient(&self) -> Option<Fe> {
        self.coeffs.first().copied()
    }

    /// Largest stored exponent.
    pub fn max_exponent(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.start + self.coeffs.len() as i64 - 1)
        }
    }

    pub fn coeff(&self, k: i64) -> Fe {
        if k < self.start {
            return Fe::ZERO;
        }
        self.coeffs
            .get((k - self.start) as usize)
            .copied()
            .unwrap_or(Fe::ZERO)
    }

    /// Nonzero terms `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Fe)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, &c)| (self.start + i as i64, c))
    }

    fn check_ctx(&self, other: &LaurentSeries) -> Result<()> {
        if same_field(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn truncate(&self, n: i64) -> LaurentSeries {
        let prec = min(self.prec, Precision::Bounded(n));
        Self::from_dense(&self.ctx, self.start, self.coeffs.clone(), prec)
    }

    /// Coefficients agree on every exponent both series determine.
    pub fn agrees_with(&self, other: &LaurentSeries) -> bool {
        if !same_field(&self.ctx, &other.ctx) {
            return false;
        }
        let prec = min(self.prec, other.prec);
        let lo = min(self.start, other.start);
        let hi = max(
            self.max_exponent().unwrap_or(lo),
            other.max_exponent().unwrap_or(lo),
        );
        (lo..=hi)
            .filter(|&k| prec.covers(k))
            .all(|k| self.coeff(k) == other.coeff(k))
    }

    fn combine(&self, other: &LaurentSeries, negate_other: bool) -> Result<LaurentSeries> {
        self.check_ctx(other)?;
        let prec = min(self.prec, other.prec);
        if self.is_zero() && other.is_zero() {
            return Ok(Self::zero(&self.ctx, prec));
        }
        let lo = match (self.is_zero(), other.is_zero()) {
            (true, _) => other.start,
            (_, true) => self.start,
            _ => min(self.start, other.start),
        };
        let hi = max(
            self.max_exponent().unwrap_or(i64::MIN),
            other.max_exponent().unwrap_or(i64::MIN),
        );
        let hi = match prec {
            Precision::Bounded(n) => min(hi, n - 1),
            Precision::Exact => hi,
        };
        if hi < lo {
            return Ok(Self::zero(&self.ctx, prec));
        }
        let k = &self.ctx;
        let coeffs = (lo..=hi)
            .map(|e| {
                let b = other.coeff(e);
                let b = if negate_other { k.neg(b) } else { b };
                k.add(self.coeff(e), b)
            })
            .collect();
        Ok(Self::from_dense(k, lo, coeffs, prec))
    }

    pub fn add(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        self.combine(other, true)
    }

    pub fn neg(&self) -> LaurentSeries {
        let k = &self.ctx;
        let coeffs = self.coeffs.iter().map(|&c| k.neg(c)).collect();
        Self::from_dense(k, self.start, coeffs, self.prec)
    }

    pub fn scale(&self, c: Fe) -> LaurentSeries {
        let k = &self.ctx;
        if c.is_zero() {
            let prec = match self.val_bound() {
                None => Precision::Exact,
                Some(_) => self.prec,
            };
            return Self::zero(k, prec);
        }
        let coeffs = self.coeffs.iter().map(|&x| k.mul(x, c)).collect();
        Self::from_dense(k, self.start, coeffs, self.prec)
    }

    pub fn scale_int(&self, n: i64) -> LaurentSeries {
        self.scale(self.ctx.from_int(n))
    }

    /// Multiplication by `t^d`.
    pub fn shift(&self, d: i64) -> LaurentSeries {
        LaurentSeries {
            ctx: self.ctx.clone(),
            start: if self.coeffs.is_empty() {
                0
            } else {
                self.start + d
            },
            coeffs: self.coeffs.clone(),
            prec: self.prec.shift(d),
        }
    }

    pub fn mul(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        self.check_ctx(other)?;
        let (va, vb) = match (self.val_bound(), other.val_bound()) {
            (None, _) | (_, None) => return Ok(Self::exact_zero(&self.ctx)),
            (Some(a), Some(b)) => (a, b),
        };
        let prec = min(self.prec.shift(vb), other.prec.shift(va));
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.ctx, prec));
        }
        let start = self.start + other.start;
        let full = self.coeffs.len() + other.coeffs.len() - 1;
        let len = match prec {
            Precision::Bounded(n) => (n - start).clamp(0, full as i64) as usize,
            Precision::Exact => full,
        };
        let coeffs = conv(&self.ctx, &self.coeffs, &other.coeffs, len);
        Ok(Self::from_dense(&self.ctx, start, coeffs, prec))
    }

    pub fn square(&self) -> LaurentSeries {
        self.mul(self).expect("same context")
    }

    pub fn pow(&self, n: u64) -> LaurentSeries {
        let mut result = Self::one(&self.ctx);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).expect("same context");
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        result
    }

    /// Integer power; negative exponents go through [`invert`](Self::invert).
    pub fn powi(&self, n: i64) -> Result<LaurentSeries> {
        if n >= 0 {
            Ok(self.pow(n as u64))
        } else {
            Ok(self.invert()?.pow(n.unsigned_abs()))
        }
    }

    fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn invert(&self) -> Result<LaurentSeries> {
        if self.is_zero() {
            return Err(match self.prec {
                Precision::Exact => Error::ZeroDivision,
                Precision::Bounded(n) => Error::precision(format!("cannot invert O(t^{n})")),
            });
        }
        let k = &self.ctx;
        if self.is_exact() {
            if self.is_monomial() {
                return Ok(Self::monomial(k, k.inv(self.coeffs[0])?, -self.start));
            }
            return Err(Error::UnboundedPrecision);
        }
        let rel = self.prec.bound().unwrap() - self.start;
        let inv = inv_unit(k, &self.coeffs, rel as usize)?;
        Ok(Self::from_dense(
            k,
            -self.start,
            inv,
            Precision::Bounded(rel - self.start),
        ))
    }

    pub fn div(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        self.mul(&other.invert()?)
    }

    /// Coefficient-wise Frobenius: `(Σ c_k t^k)^p = Σ c_k^p t^{pk}`.
    pub fn frobenius(&self) -> LaurentSeries {
        let k = &self.ctx;
        let p = k.characteristic() as i64;
        let terms: Vec<(i64, Fe)> = self.terms().map(|(e, c)| (e * p, k.frobenius(c))).collect();
        Self::from_terms(k, &terms, self.prec.scale(p))
    }

    /// `p`-th root of a series supported on exponents divisible by `p`.
    pub fn pth_root(&self) -> Result<LaurentSeries> {
        let k = &self.ctx;
        let p = k.characteristic() as i64;
        let mut terms = Vec::with_capacity(self.coeffs.len());
        for (e, c) in self.terms() {
            if e % p != 0 {
                return Err(Error::ExponentNotDivisible {
                    exponent: e,
                    p: p as u32,
                });
            }
            terms.push((e / p, k.frobenius_inv(c)));
        }
        let prec = match self.prec {
            Precision::Bounded(n) => Precision::Bounded(ceil_div(n, p)),
            Precision::Exact => Precision::Exact,
        };
        Ok(Self::from_terms(k, &terms, prec))
    }

    /// Term-wise `d/dt`.
    pub fn derivative(&self) -> LaurentSeries {
        let k = &self.ctx;
        let terms: Vec<(i64, Fe)> = self
            .terms()
            .map(|(e, c)| (e - 1, k.scale_int(c, e)))
            .collect();
        Self::from_terms(k, &terms, self.prec.shift(-1))
    }

    /// `n`-th root of a series of valuation 0, `gcd(n, p) = 1`.
    pub fn nth_root_one_unit(&self, n: u64) -> Result<LaurentSeries> {
        match self.valuation()? {
            Some(0) => self.nth_root(n),
            Some(v) => Err(Error::ValuationNotDivisible { valuation: v, n }),
            None => Err(Error::ZeroDivision),
        }
    }

    /// `n`-th root of a series whose valuation is divisible by `n`.
    ///
    /// The leading coefficient of the result is the lexicographically least
    /// `n`-th root of the input's leading coefficient.
    pub fn nth_root(&self, n: u64) -> Result<LaurentSeries> {
        let k = &self.ctx;
        let p = k.characteristic() as u64;
        if n == 0 || n.is_multiple_of(p) {
            return Err(Error::IndexDivisibleByP { n, p: p as u32 });
        }
        let v = self.order()?;
        if v.rem_euclid(n as i64) != 0 {
            return Err(Error::ValuationNotDivisible { valuation: v, n });
        }
        let r0 = k.nth_root_min(self.coeffs[0], n)?;
        let vr = v / n as i64;
        if self.is_exact() {
            if self.is_monomial() {
                return Ok(Self::monomial(k, r0, vr));
            }
            return Err(Error::UnboundedPrecision);
        }
        let rel = (self.prec.bound().unwrap() - v) as usize;
        let root = unit_nth_root(k, &self.coeffs, n, r0, rel)?;
        Ok(Self::from_dense(
            k,
            vr,
            root,
            Precision::Bounded(vr + rel as i64),
        ))
    }

    /// Composition `self(s)`.
    ///
    /// A truncated series needs `v(s) ≥ 1`. An exact Laurent polynomial
    /// accepts any `s`, provided negative powers of `s` can be formed.
    pub fn substitute(&self, s: &LaurentSeries) -> Result<LaurentSeries> {
        self.check_ctx(s)?;
        let k = &self.ctx;
        if self.is_zero() {
            return match self.prec {
                Precision::Exact => Ok(Self::exact_zero(k)),
                Precision::Bounded(n) => {
                    let vs = s.order()?;
                    if vs < 1 {
                        return Err(Error::DivergentSubstitution(
                            "O(t^N) composed with a series of nonpositive valuation".into(),
                        ));
                    }
                    Ok(Self::zero(
                        k,
                        min(Precision::Bounded(n * vs), s.prec.shift((n - 1) * vs)),
                    ))
                }
            };
        }
        let vs = s.order()?;
        if vs < 1 && !self.is_exact() {
            return Err(Error::DivergentSubstitution(
                "a truncated series can only be composed with a series of positive valuation"
                    .into(),
            ));
        }
        let lo = self.start;
        let hi = self.max_exponent().unwrap();
        // a(s) = s^lo · P(s) with P a polynomial (Horner), plus O(s^N).
        let mut acc = Self::constant(k, self.coeff(hi));
        for e in (lo..hi).rev() {
            acc = acc.mul(s)?.add(&Self::constant(k, self.coeff(e)))?;
        }
        let mut out = acc.mul(&s.powi(lo)?)?;
        if let Precision::Bounded(n) = self.prec {
            out = out.truncate(n * vs);
        }
        Ok(out)
    }

    pub(crate) fn write_with_var(&self, f: &mut impl fmt::Write, var: &str) -> fmt::Result {
        let k = &self.ctx;
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coeff = k.format(c);
            let mono = match e {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{e}"),
            };
            match (c == Fe::ONE, mono.is_empty()) {
                (_, true) => write!(f, "{coeff}")?,
                (true, false) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{coeff}*{mono}")?,
            }
        }
        match self.prec {
            Precision::Bounded(n) => {
                if !first {
                    write!(f, " + ")?;
                }
                write!(f, "O({var}^{n})")
            }
            Precision::Exact => {
                if first {
                    write!(f, "0")?;
                }
                Ok(())
            }
        }
    }

    /// Rendering in another variable name.
    pub fn display_in(&self, var: &str) -> String {
        let mut s = String::new();
        self.write_with_var(&mut s, var).expect("string write");
        s
    }
}

/// Truncated product of two dense coefficient runs.
fn conv(k: &FieldCtx, a: &[Fe], b: &[Fe], len: usize) -> Vec<Fe> {
    if k.degree() == 1 {
        let p = k.characteristic() as u64;
        let mut acc = vec![0u64; len];
        for (i, x) in a.iter().enumerate().take(len) {
            let x = x.index() as u64;
            if x == 0 {
                continue;
            }
            let lim = min(len - i, b.len());
            for (slot, y) in acc[i..i + lim].iter_mut().zip(&b[..lim]) {
                *slot += x * y.index() as u64;
            }
            if i % 4096 == 4095 {
                acc.iter_mut().for_each(|s| *s %= p);
            }
        }
        return acc
            .into_iter()
            .map(|s| k.from_int((s % p) as i64))
            .collect();
    }
    let mut out = vec![Fe::ZERO; len];
    for (i, &x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        let lim = min(len - i, b.len());
        for j in 0..lim {
            out[i + j] = k.add(out[i + j], k.mul(x, b[j]));
        }
    }
    out
}

/// First `len` coefficients of `1/a` for a dense run with `a[0] != 0`.
fn inv_unit(k: &FieldCtx, a: &[Fe], len: usize) -> Result<Vec<Fe>> {
    let a0_inv = k.inv(a[0])?;
    let neg_a0_inv = k.neg(a0_inv);
    let mut out = Vec::with_capacity(len);
    if len == 0 {
        return Ok(out);
    }
    out.push(a0_inv);
    if k.degree() == 1 {
        let p = k.characteristic() as u64;
        for n in 1..len {
            let mut s = 0u64;
            for j in 1..=min(n, a.len() - 1) {
                s += a[j].index() as u64 * out[n - j].index() as u64;
            }
            out.push(k.mul(k.from_int((s % p) as i64), neg_a0_inv));
        }
        return Ok(out);
    }
    for n in 1..len {
        let mut s = Fe::ZERO;
        for j in 1..=min(n, a.len() - 1) {
            s = k.add(s, k.mul(a[j], out[n - j]));
        }
        out.push(k.mul(s, neg_a0_inv));
    }
    Ok(out)
}

fn pow_trunc(k: &FieldCtx, a: &[Fe], n: u64, len: usize) -> Vec<Fe> {
    let mut result = vec![Fe::ONE];
    let mut base = a[..min(a.len(), len)].to_vec();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result = conv(k, &result, &base, min(len, result.len() + base.len() - 1));
        }
        e >>= 1;
        if e > 0 {
            base = conv(k, &base, &base, min(len, 2 * base.len() - 1));
        }
    }
    result.resize(len, Fe::ZERO);
    result
}

/// Newton iteration `r ← r + (a − r^n) / (n r^{n−1})` with doubling precision.
fn unit_nth_root(k: &FieldCtx, a: &[Fe], n: u64, r0: Fe, len: usize) -> Result<Vec<Fe>> {
    let mut r = vec![r0];
    let mut have = 1usize;
    let n_inv = k.inv(k.from_int(n as i64))?;
    while have < len {
        let target = min(2 * have, len);
        r.resize(target, Fe::ZERO);
        let r_pow = pow_trunc(k, &r, n - 1, target);
        let r_n = conv(k, &r_pow, &r, target);
        let mut resid: Vec<Fe> = (0..target)
            .map(|i| k.sub(a.get(i).copied().unwrap_or(Fe::ZERO), r_n[i]))
            .collect();
        resid.iter_mut().for_each(|c| *c = k.mul(*c, n_inv));
        let denom_inv = inv_unit(k, &r_pow, target)?;
        let corr = conv(k, &resid, &denom_inv, target);
        for i in 0..target {
            r[i] = k.add(r[i], corr[i]);
        }
        have = target;
    }
    r.truncate(len);
    Ok(r)
}
