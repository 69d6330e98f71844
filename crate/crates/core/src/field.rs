//! Finite fields `F_{p^e}` with table-driven arithmetic.
//!
//! Elements are stored as an index `c_0 + c_1 p + ... + c_{e-1} p^{e-1}` where
//! `(c_0, ..., c_{e-1})` is the coordinate vector in the power basis of the
//! modulus. Multiplication goes through discrete log tables, so fields are
//! limited to at most 65536 elements.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

const MAX_FIELD_SIZE: u64 = 1 << 16;

/// An element of a finite field. Meaningless without its [`FieldCtx`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fe(u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn index(self) -> u32 {
        self.0
    }
}

/// Defining data of `F_{p^e}`: the characteristic, the degree and a monic
/// irreducible modulus over `F_p`.
pub struct FieldCtx {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<Fe>,
    log: Vec<u32>,
    trace_one: Fe,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Dense polynomials over F_p, coefficients low to high.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let factor = (r[top] as u64 * lead_inv as u64 % p as u64) as u32;
        if factor != 0 {
            let off = top - dm;
            for (i, &mc) in m.iter().enumerate() {
                let sub = (factor as u64 * mc as u64 % p as u64) as u32;
                r[off + i] = (r[off + i] + p - sub) % p;
            }
        }
        r.pop();
        poly_trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
    poly_rem(&out, m, p)
}

fn mod_inv(a: u32, p: u32) -> u32 {
    // p prime, a != 0
    mod_pow(a as u64, (p - 2) as u64, p as u64) as u32
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn digits(mut idx: u32, p: u32, e: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(e as usize);
    for _ in 0..e {
        out.push(idx % p);
        idx /= p;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let deg = modulus.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for k in 0..count {
            let mut g = digits(k as u32, p, d as u32);
            g.push(1);
            if poly_rem(modulus, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn default_modulus(p: u32, e: u32) -> Vec<u32> {
    if e == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(e);
    for k in 0..count {
        let mut m = digits(k as u32, p, e);
        m.push(1);
        if m[0] != 0 && is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

impl FieldCtx {
    pub fn prime(p: u32) -> Result<Arc<Self>> {
        Self::new(p, 1)
    }

    /// `F_{p^e}` with the first irreducible monic modulus in index order.
    pub fn new(p: u32, e: u32) -> Result<Arc<Self>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::BadModulus(
                "extension degree must be at least 1".into(),
            ));
        }
        Self::check_size(p, e)?;
        Self::build(p, default_modulus(p, e))
    }

    /// `F_p[x]/(modulus)`; `modulus` is monic, coefficients low to high.
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Arc<Self>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if modulus.len() < 2 {
            return Err(Error::BadModulus(
                "modulus must have degree at least 1".into(),
            ));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::BadModulus(format!(
                "coefficients must lie in 0..{p}"
            )));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(Error::BadModulus("modulus must be monic".into()));
        }
        let e = (modulus.len() - 1) as u32;
        Self::check_size(p, e)?;
        if !is_irreducible(&modulus, p) {
            return Err(Error::ReducibleModulus { p });
        }
        Self::build(p, modulus)
    }

    fn check_size(p: u32, e: u32) -> Result<()> {
        let q = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
        if q > MAX_FIELD_SIZE {
            return Err(Error::FieldTooLarge { p, e });
        }
        Ok(())
    }

    fn build(p: u32, modulus: Vec<u32>) -> Result<Arc<Self>> {
        let e = (modulus.len() - 1) as u32;
        let q = p.pow(e);
        let slow_mul = |a: u32, b: u32| -> u32 {
            let r = poly_mulmod(&digits(a, p, e), &digits(b, p, e), &modulus, p);
            let mut d = r;
            d.resize(e as usize, 0);
            undigits(&d, p)
        };
        // find a generator of the multiplicative group
        let mut exp = Vec::with_capacity((q - 1) as usize);
        let mut found = false;
        for g in 1..q {
            exp.clear();
            let mut x = 1u32;
            loop {
                exp.push(Fe(x));
                x = slow_mul(x, g);
                if x == 1 {
                    break;
                }
            }
            if exp.len() == (q - 1) as usize {
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::Internal("no primitive element found".into()));
        }
        let mut log = vec![0u32; q as usize];
        for (i, x) in exp.iter().enumerate() {
            log[x.0 as usize] = i as u32;
        }
        let mut ctx = FieldCtx {
            p,
            e,
            q,
            modulus,
            exp,
            log,
            trace_one: Fe::ONE,
        };
        let trace_one = ctx
            .elements_lex()
            .find(|&a| ctx.trace(a) == 1)
            .ok_or_else(|| Error::Internal("trace is not surjective".into()))?;
        ctx.trace_one = trace_one;
        Ok(Arc::new(ctx))
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }

    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    /// Element with the given coordinates (missing trailing coordinates are 0).
    pub fn from_coords(&self, coords: &[u32]) -> Result<Fe> {
        if coords.len() > self.e as usize {
            return Err(Error::BadModulus(format!(
                "element has {} coordinates but the field has degree {}",
                coords.len(),
                self.e
            )));
        }
        let mut d: Vec<u32> = coords.iter().map(|&c| c % self.p).collect();
        d.resize(self.e as usize, 0);
        Ok(Fe(undigits(&d, self.p)))
    }

    pub fn coords(&self, a: Fe) -> Vec<u32> {
        digits(a.0, self.p, self.e)
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_index(&self, idx: u32) -> Result<Fe> {
        if idx >= self.q {
            return Err(Error::BadModulus(format!(
                "element index {idx} out of range"
            )));
        }
        Ok(Fe(idx))
    }

    pub fn is_in_prime_field(&self, a: Fe) -> bool {
        a.0 < self.p
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.e == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= self.p { s - self.p } else { s });
        }
        let (mut x, mut y) = (a.0, b.0);
        let (mut r, mut pw) = (0u32, 1u32);
        for _ in 0..self.e {
            r += ((x % self.p + y % self.p) % self.p) * pw;
            x /= self.p;
            y /= self.p;
            pw = pw.wrapping_mul(self.p);
        }
        Fe(r)
    }

    pub fn neg(&self, a: Fe) -> Fe {
        if self.e == 1 {
            return Fe(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        let mut x = a.0;
        let (mut r, mut pw) = (0u32, 1u32);
        for _ in 0..self.e {
            r += ((self.p - x % self.p) % self.p) * pw;
            x /= self.p;
            pw = pw.wrapping_mul(self.p);
        }
        Fe(r)
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        if self.e == 1 {
            return Fe((a.0 as u64 * b.0 as u64 % self.p as u64) as u32);
        }
        let s = self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64;
        self.exp[(s % (self.q as u64 - 1)) as usize]
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.0 == 0 {
            return Err(Error::ZeroDivision);
        }
        let n = self.q - 1;
        Ok(self.exp[((n - self.log[a.0 as usize]) % n) as usize])
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, n: u64) -> Fe {
        if n == 0 {
            return Fe::ONE;
        }
        if a.0 == 0 {
            return Fe::ZERO;
        }
        let ord = (self.q - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        self.exp[((l as u128 * (n % ord) as u128) % ord as u128) as usize]
    }

    /// Multiply by an integer (image in the prime field).
    pub fn scale_int(&self, a: Fe, n: i64) -> Fe {
        self.mul(a, self.from_int(n))
    }

    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.p as u64)
    }

    /// Inverse Frobenius `a ↦ a^{1/p} = a^{p^{e-1}}`.
    pub fn frobenius_inv(&self, a: Fe) -> Fe {
        self.pow(a, (self.p as u64).pow(self.e - 1))
    }

    /// Absolute trace to `F_p`, returned as an integer in `0..p`.
    pub fn trace(&self, a: Fe) -> u32 {
        let mut acc = Fe::ZERO;
        let mut x = a;
        for _ in 0..self.e {
            acc = self.add(acc, x);
            x = self.frobenius(x);
        }
        debug_assert!(self.is_in_prime_field(acc));
        acc.0
    }

    /// Fixed element of trace 1, used as representative of `k / ℘(k)`.
    pub fn trace_one(&self) -> Fe {
        self.trace_one
    }

    /// Sort key realising the lexicographic order on coordinate vectors
    /// `(c_0, c_1, ...)`.
    pub fn lex_key(&self, a: Fe) -> u32 {
        let d = self.coords(a);
        d.iter().fold(0u32, |acc, &c| acc * self.p + c)
    }

    pub fn lex_cmp(&self, a: Fe, b: Fe) -> Ordering {
        self.lex_key(a).cmp(&self.lex_key(b))
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.q).map(Fe)
    }

    /// All elements in lexicographic coordinate order.
    pub fn elements_lex(&self) -> impl Iterator<Item = Fe> + '_ {
        let mut all: Vec<Fe> = self.elements().collect();
        all.sort_by_key(|&a| self.lex_key(a));
        all.into_iter()
    }

    /// Every `x` with `x^n = c`, by exhaustive search.
    pub fn nth_roots(&self, c: Fe, n: u64) -> Vec<Fe> {
        self.elements().filter(|&x| self.pow(x, n) == c).collect()
    }

    /// The lexicographically least `n`-th root of `c`.
    pub fn nth_root_min(&self, c: Fe, n: u64) -> Result<Fe> {
        self.nth_roots(c, n)
            .into_iter()
            .min_by_key(|&x| self.lex_key(x))
            .ok_or_else(|| Error::RootNotInField {
                n,
                element: self.format(c),
                p: self.p,
                e: self.e,
            })
    }

    /// Some `x` with `x^p - x = c`, if one exists (requires `Tr(c) = 0`).
    pub fn artin_schreier_root(&self, c: Fe) -> Option<Fe> {
        self.elements_lex()
            .find(|&x| self.sub(self.frobenius(x), x) == c)
    }

    /// Literal form: an integer for prime fields, `[c0,c1,...]` otherwise.
    pub fn format(&self, a: Fe) -> String {
        if self.e == 1 {
            a.0.to_string()
        } else {
            let d = self.coords(a);
            let parts: Vec<String> = d.iter().map(|c| c.to_string()).collect();
            format!("[{}]", parts.join(","))
        }
    }
}

/// Two contexts are interchangeable when they describe the same field.
pub fn same_field(a: &Arc<FieldCtx>, b: &Arc<FieldCtx>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_fields() -> Vec<Arc<FieldCtx>> {
        vec![
            FieldCtx::prime(2).unwrap(),
            FieldCtx::prime(3).unwrap(),
            FieldCtx::prime(5).unwrap(),
            FieldCtx::new(2, 3).unwrap(),
            FieldCtx::new(3, 2).unwrap(),
            FieldCtx::new(2, 6).unwrap(),
            FieldCtx::new(5, 2).unwrap(),
        ]
    }

    #[test]
    fn rejects_composite_characteristic() {
        assert_eq!(FieldCtx::prime(4).unwrap_err(), Error::NotPrime(4));
        assert_eq!(FieldCtx::new(1, 2).unwrap_err(), Error::NotPrime(1));
    }

    #[test]
    fn rejects_reducible_modulus() {
        // x^2 + 1 = (x + 1)^2 over F_2
        assert_eq!(
            FieldCtx::with_modulus(2, vec![1, 0, 1]).unwrap_err(),
            Error::ReducibleModulus { p: 2 }
        );
        // x^2 + 1 is irreducible over F_3
        assert!(FieldCtx::with_modulus(3, vec![1, 0, 1]).is_ok());
        assert!(matches!(
            FieldCtx::with_modulus(3, vec![1, 0, 2]),
            Err(Error::BadModulus(_))
        ));
    }

    #[test]
    fn field_axioms_on_full_tables() {
        for k in small_fields() {
            let all: Vec<Fe> = k.elements().collect();
            for &a in &all {
                assert_eq!(k.add(a, k.neg(a)), Fe::ZERO);
                if !a.is_zero() {
                    assert_eq!(k.mul(a, k.inv(a).unwrap()), Fe::ONE);
                }
                for &b in all.iter().step_by(3) {
                    assert_eq!(k.add(a, b), k.add(b, a));
                    assert_eq!(k.mul(a, b), k.mul(b, a));
                    for &c in all.iter().step_by(7) {
                        assert_eq!(k.add(k.add(a, b), c), k.add(a, k.add(b, c)));
                        assert_eq!(k.mul(k.mul(a, b), c), k.mul(a, k.mul(b, c)));
                        assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_is_a_bijection() {
        for k in small_fields() {
            let mut images: Vec<Fe> = k.elements().map(|a| k.frobenius(a)).collect();
            images.sort();
            images.dedup();
            assert_eq!(images.len() as u32, k.order());
            for a in k.elements() {
                let roots = k.nth_roots(a, k.characteristic() as u64);
                assert_eq!(roots.len(), 1);
                assert_eq!(roots[0], k.frobenius_inv(a));
            }
        }
    }

    #[test]
    fn trace_counts() {
        for k in small_fields() {
            let zero_trace = k.elements().filter(|&a| k.trace(a) == 0).count() as u32;
            assert_eq!(zero_trace, k.order() / k.characteristic());
            for a in k.elements() {
                assert_eq!(k.artin_schreier_root(a).is_some(), k.trace(a) == 0);
            }
        }
    }

    #[test]
    fn minimal_root_choice() {
        let k = FieldCtx::prime(5).unwrap();
        // square roots of 4 in F_5 are 2 and 3
        assert_eq!(k.nth_root_min(k.from_int(4), 2).unwrap(), k.from_int(2));
        assert!(matches!(
            k.nth_root_min(k.from_int(3), 2),
            Err(Error::RootNotInField { n: 2, .. })
        ));
        let k25 = FieldCtx::new(5, 2).unwrap();
        let three = k25.from_int(3);
        let r = k25.nth_root_min(three, 2).unwrap();
        assert_eq!(k25.mul(r, r), three);
        for other in k25.nth_roots(three, 2) {
            assert!(k25.lex_key(r) <= k25.lex_key(other));
        }
    }

    #[test]
    fn literal_format() {
        let k = FieldCtx::new(3, 2).unwrap();
        let a = k.from_coords(&[2, 1]).unwrap();
        assert_eq!(k.format(a), "[2,1]");
        assert_eq!(k.coords(a), vec![2, 1]);
    }
}
