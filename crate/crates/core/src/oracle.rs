//! Jumps read off explicit series, without the jump formulas.
//!
//! With `a0^p − a0 = α0` and `n0 = −v(α0)`, set `y = a0^{-1/n0}`. Then
//! `M = K(a0) = k((y))`, and `t` is the power series `T(y)` solving
//! `t^{n0} = R(y)·u0(t)` with `R = α0^{-1} = y^{n0 p}(1 − y^{n0(p−1)})^{-1}` and
//! `u0 = t^{n0}·α0`. The generator `σ: a0 ↦ a0 + 1` sends `y` to
//! `y(1 + y^{n0})^{-1/n0}`, and `v(σy − y) − 1` is the jump of `M/K`.
//!
//! For a length-2 vector, `a1^p − a1 = α1(T(y)) − d` where `d` is the carry
//! of `(a0^p, 0) − (a0, 0)` in the Witt ring. Reducing that over `k((y))`
//! gives the jump of `L/M`, which is the second lower jump of `L/K`.

use serde::Serialize;

use crate::asreduce::{reduce_as, AsKind, ReducedAS, ReducedWitt2};
use crate::error::{Error, Result};
use crate::series::LaurentSeries;
use crate::witt::{witt_sub, WittVec2};

/// Relative precision used when the caller has no preference.
pub fn default_precision(p: i64, n0: i64, n1: i64) -> i64 {
    p * p * (n0 + n1) + 2 * p * p + 4
}

/// How the oracle picks its working precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrecPolicy {
    Default,
    /// `k` times the default.
    Scaled(i64),
    Fixed(i64),
}

impl PrecPolicy {
    pub fn resolve(self, p: i64, n0: i64, n1: i64) -> i64 {
        match self {
            PrecPolicy::Default => default_precision(p, n0, n1),
            PrecPolicy::Scaled(k) => k * default_precision(p, n0, n1),
            PrecPolicy::Fixed(n) => n,
        }
    }

    pub fn doubled(self) -> PrecPolicy {
        match self {
            PrecPolicy::Default => PrecPolicy::Scaled(2),
            PrecPolicy::Scaled(k) => PrecPolicy::Scaled(2 * k),
            PrecPolicy::Fixed(n) => PrecPolicy::Fixed(2 * n),
        }
    }
}

/// `n`-th root with leading coefficient 1 of a series with leading coefficient 1.
fn principal_root(s: &LaurentSeries, n: u64) -> Result<LaurentSeries> {
    let r = s.nth_root(n)?;
    let k = r.ctx();
    let lead = r.leading_coefficient().ok_or(Error::ZeroDivision)?;
    Ok(r.scale(k.inv(lead)?))
}

fn wild(kind: &AsKind, what: &str) -> Result<i64> {
    kind.pole_order()
        .ok_or_else(|| Error::Degenerate(format!("{what} is not wildly ramified")))
}

/// Valuation read that must sit strictly below the precision floor.
fn read_valuation(s: &LaurentSeries, what: &str) -> Result<i64> {
    match s.valuation() {
        Ok(Some(v)) => Ok(v),
        Ok(None) => Err(Error::Internal(format!("{what} vanishes identically"))),
        Err(_) => Err(Error::precision(format!(
            "{what} is O(y^{}); raise the precision",
            s.precision().bound().unwrap_or(0)
        ))),
    }
}

/// The K-uniformizer `t` as a series in `y`, with the data that produced it.
#[derive(Clone, Debug)]
pub struct Uniformizer {
    pub n0: i64,
    /// `t = T(y)`
    pub t: LaurentSeries,
    /// `α0` as a series in `t`
    pub alpha0: LaurentSeries,
}

/// Solve `T^{n0} = R(y)·u0(T)` by Newton iteration to relative precision `prec`.
pub fn uniformizer(alpha0: &LaurentSeries, n0: i64, prec: i64) -> Result<Uniformizer> {
    let k = alpha0.ctx();
    let p = k.characteristic() as i64;
    if prec < 1 {
        return Err(Error::precision("relative precision must be positive"));
    }
    let n = n0 as u64;
    let one = LaurentSeries::one(k);
    let z = LaurentSeries::monomial(k, k.one(), n0 * (p - 1));
    // 1 − y^{n0(p−1)}, as a truncated unit
    let w = one.sub(&z)?.truncate(prec);
    let r = w.invert()?.shift(n0 * p);
    let u0 = alpha0.shift(n0);
    let du0 = u0.derivative();
    let c = u0.coeff(0);
    if c.is_zero() {
        return Err(Error::Internal("α0 does not have pole order n0".into()));
    }
    let lead = k.nth_root_min(c, n)?;
    let mut t = principal_root(&w.invert()?, n)?.scale(lead).shift(p);
    let nn = k.from_int(n0);
    let mut steps = 0;
    loop {
        let h = t.pow(n).sub(&r.mul(&u0.substitute(&t)?)?)?;
        let dh = t.pow(n - 1).scale(nn).sub(&r.mul(&du0.substitute(&t)?)?)?;
        let next = t.sub(&h.div(&dh)?)?.truncate(p + prec);
        let settled = next.sub(&t)?.is_zero() && next.precision() == t.precision();
        t = next;
        steps += 1;
        if settled {
            break;
        }
        if steps > 64 {
            return Err(Error::Internal(
                "Newton iteration for t(y) did not settle".into(),
            ));
        }
    }
    // α0(T) must be a0^p − a0 = y^{−n0 p} − y^{−n0}
    let rel = alpha0
        .substitute(&t)?
        .sub(&LaurentSeries::monomial(k, k.one(), -n0 * p))?
        .add(&LaurentSeries::monomial(k, k.one(), -n0))?;
    if !rel.is_zero() {
        return Err(Error::Internal(format!(
            "α0(t(y)) differs from y^-{} - y^-{n0}: {rel}",
            n0 * p
        )));
    }
    Ok(Uniformizer {
        n0,
        t,
        alpha0: alpha0.clone(),
    })
}

/// `σ(y) = y·(1 + y^{n0})^{-1/n0}` to relative precision `prec`.
pub fn sigma_y(u: &Uniformizer, prec: i64) -> Result<LaurentSeries> {
    let k = u.t.ctx();
    let base = LaurentSeries::one(k)
        .add(&LaurentSeries::monomial(k, k.one(), u.n0))?
        .truncate(prec);
    Ok(principal_root(&base, u.n0 as u64)?.invert()?.shift(1))
}

/// The jump of `K(a0)/K`, read as `v(σy − y) − 1`.
pub fn oracle_p_cyclic_jump(f: &ReducedAS, prec: i64) -> Result<i64> {
    let n0 = wild(&f.kind, "the Artin-Schreier element")?;
    let u = uniformizer(&f.f_red, n0, prec)?;
    let sy = sigma_y(&u, prec)?;
    // σ fixes t
    let moved = u.t.substitute(&sy)?.sub(&u.t)?;
    if !moved.is_zero() {
        return Err(Error::Internal(format!("σ moves t: {moved}")));
    }
    let y = LaurentSeries::monomial(sy.ctx(), sy.ctx().one(), 1);
    Ok(read_valuation(&sy.sub(&y)?, "σy - y")? - 1)
}

/// `a1^p − a1` as a series in `y`, before any reduction.
pub fn second_as_element(v: &ReducedWitt2, prec: i64) -> Result<(Uniformizer, LaurentSeries)> {
    let n0 = wild(&v.kinds[0], "component 0")?;
    let u = uniformizer(v.vec_red.a0(), n0, prec)?;
    let k = u.t.ctx();
    let p = k.characteristic() as i64;
    let a0 = LaurentSeries::monomial(k, k.one(), -n0);
    let a0p = LaurentSeries::monomial(k, k.one(), -n0 * p);
    let carry = witt_sub(&WittVec2::from_first(a0p), &WittVec2::from_first(a0))?;
    let alpha1 = v.vec_red.a1().substitute(&u.t)?;
    let beta = alpha1.sub(carry.a1())?;
    Ok((u, beta))
}

fn first_coprime_exponent(s: &LaurentSeries, p: i64) -> Option<i64> {
    s.terms().map(|(e, _)| e).find(|e| e % p != 0)
}

/// The second lower jump of the cyclic degree-`p²` extension, read as the
/// reduced pole order of `a1^p − a1` over `k((y))`.
pub fn oracle_p2_second_jump(v: &ReducedWitt2, prec: i64) -> Result<i64> {
    let (u, beta) = second_as_element(v, prec)?;
    let p = beta.ctx().characteristic() as i64;
    let n0 = u.n0;
    let n1 = v.kinds[1].pole_order().unwrap_or(0);
    if n1 > p * n0 {
        let expect = (n0 - n1) * p - n0;
        let floor = beta.precision().bound().unwrap_or(i64::MAX);
        if floor <= expect {
            return Err(Error::precision(format!(
                "a1^p - a1 known only to O(y^{floor}), the claim needs y^{expect}"
            )));
        }
        match first_coprime_exponent(&beta, p) {
            Some(e) if e == expect => {}
            got => {
                return Err(Error::ClaimViolated(format!(
                    "first exponent prime to p is {got:?}, expected {expect}"
                )))
            }
        }
    }
    let red = reduce_as(&beta)?;
    match red.kind {
        AsKind::WildReduced { n } => {
            let floor = red.f_red.precision().bound().unwrap_or(i64::MAX);
            if -n >= floor {
                return Err(Error::precision(format!(
                    "pole y^-{n} is not below the floor O(y^{floor})"
                )));
            }
            Ok(n)
        }
        other => Err(Error::ClaimViolated(format!(
            "a1^p - a1 reduces to {other:?} over k((y))"
        ))),
    }
}

/// Derivative valuations in the construction, with the values they should take.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerivativeReport {
    pub dt_dy: i64,
    pub dt_dy_expected: i64,
    pub dlhs_dy: i64,
    pub dlhs_dy_expected: i64,
}

/// `v(dt/dy) = p·n0 − n0 + p − 1`, and `v(d(a1^p − a1)/dy)` is one less
/// than the first exponent prime to `p`: `(n0 − n1)p − n0` when
/// `n1 > p·n0`, otherwise `−n0(p² − p + 1)` from the Witt carry.
pub fn oracle_derivative_check(v: &ReducedWitt2, prec: i64) -> Result<DerivativeReport> {
    let (u, beta) = second_as_element(v, prec)?;
    let p = beta.ctx().characteristic() as i64;
    let n0 = u.n0;
    let n1 = v.kinds[1].pole_order().unwrap_or(0);
    let rep = DerivativeReport {
        dt_dy: read_valuation(&u.t.derivative(), "dt/dy")?,
        dt_dy_expected: p * n0 - n0 + p - 1,
        dlhs_dy: read_valuation(&beta.derivative(), "d(a1^p - a1)/dy")?,
        dlhs_dy_expected: if n1 > p * n0 {
            (n0 - n1) * p - n0 - 1
        } else {
            -n0 * (p * p - p + 1) - 1
        },
    };
    if rep.dt_dy != rep.dt_dy_expected || rep.dlhs_dy != rep.dlhs_dy_expected {
        return Err(Error::ClaimViolated(format!("{rep:?}")));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asreduce::reduce_witt2;
    use crate::field::FieldCtx;
    use crate::literal::{parse_series_in, parse_witt_in};

    fn as_jump(p: u32, lit: &str, prec: i64) -> i64 {
        let k = FieldCtx::prime(p).unwrap();
        let f = reduce_as(&parse_series_in(&k, lit).unwrap()).unwrap();
        oracle_p_cyclic_jump(&f, prec).unwrap()
    }

    #[test]
    fn p_cyclic_examples() {
        assert_eq!(as_jump(3, "t^-1 + O(t^20)", 20), 1);
        assert_eq!(as_jump(2, "t^-5 + O(t^20)", 20), 5);
        // 3 has no square root in F_5; over F_25 it does
        let k5 = FieldCtx::prime(5).unwrap();
        let f = reduce_as(&parse_series_in(&k5, "3*t^-2 + O(t^20)").unwrap()).unwrap();
        assert!(matches!(
            oracle_p_cyclic_jump(&f, 20),
            Err(Error::RootNotInField { .. })
        ));
        let k25 = FieldCtx::new(5, 2).unwrap();
        let f = reduce_as(&parse_series_in(&k25, "3*t^-2 + O(t^20)").unwrap()).unwrap();
        assert_eq!(oracle_p_cyclic_jump(&f, 20).unwrap(), 2);
        assert_eq!(as_jump(5, "t^-3 + t^-1 + 2 + t + O(t^30)", 40), 3);
    }

    fn witt(p: u32, lit: &str) -> ReducedWitt2 {
        let k = FieldCtx::prime(p).unwrap();
        reduce_witt2(&parse_witt_in(&k, lit).unwrap()).unwrap()
    }

    #[test]
    fn p2_examples() {
        for (p, lit, n0, n1, expect) in [
            (3, "W2(t^-1 + O(t^10); t^-2 + O(t^10))", 1, 2, 7),
            (3, "W2(t^-1 + O(t^10); t^-5 + O(t^10))", 1, 5, 13),
            (2, "W2(t^-1 + O(t^10); t^-1 + O(t^10))", 1, 1, 3),
            (2, "W2(t^-3 + O(t^10); t^-7 + O(t^10))", 3, 7, 11),
        ] {
            let v = witt(p, lit);
            let prec = default_precision(p as i64, n0, n1);
            assert_eq!(oracle_p2_second_jump(&v, prec).unwrap(), expect, "{lit}");
            assert_eq!(oracle_p2_second_jump(&v, 2 * prec).unwrap(), expect);
        }
    }

    #[test]
    fn derivative_examples() {
        let v = witt(3, "W2(t^-1 + O(t^10); t^-5 + O(t^10))");
        let d = oracle_derivative_check(&v, default_precision(3, 1, 5)).unwrap();
        assert_eq!(d.dt_dy, 4);
        assert_eq!(d.dlhs_dy, -14);
        let v = witt(2, "W2(t^-3 + O(t^10); t^-1 + O(t^10))");
        let d = oracle_derivative_check(&v, default_precision(2, 3, 1)).unwrap();
        assert_eq!(d.dt_dy, 4);
    }

    #[test]
    fn low_precision_is_reported() {
        let v = witt(3, "W2(t^-1 + O(t^10); t^-5 + O(t^10))");
        assert!(matches!(
            oracle_p2_second_jump(&v, 1),
            Err(Error::InsufficientPrecision(_))
        ));
    }
}
