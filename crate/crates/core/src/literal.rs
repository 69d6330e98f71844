//! Text literals for series, Witt vectors and cover polynomials.
//!
//! ```text
//! p=3 e=1; 2*t^-5 + t^-1 + 1 + O(t^20)
//! p=5 e=2 modulus=[2,4,1]; [1,3]*t^-2 + O(t^10)
//! W2( t^-1 + O(t^30) ; t^-2 + O(t^30) )
//! ```
//!
//! The `p=.. e=..;` header is optional when the caller already has a field.
//! Coefficients are integers (reduced mod p) or coordinate lists `[c0,c1,..]`
//! over the prime field, lowest coordinate first.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{same_field, Fe, FieldCtx};
use crate::series::{LaurentSeries, Precision};
use crate::witt::WittVec2;

fn err(column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        column,
        message: message.into(),
    }
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    /// column of `chars[0]` in the caller's text (1-based)
    base: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, base: usize) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
            base,
            _src: src,
        }
    }

    fn col(&self) -> usize {
        self.base + self.pos
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            let found = self
                .peek()
                .map_or("end of input".to_string(), |f| format!("'{f}'"));
            Err(err(self.col(), format!("expected '{c}', found {found}")))
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_ascii_alphanumeric() || self.chars[self.pos] == '_')
            && (self.pos > start || self.chars[self.pos].is_ascii_alphabetic())
        {
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            Some(self.chars[start..self.pos].iter().collect())
        }
    }

    fn unsigned(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(err(self.col(), "expected a number"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse()
            .map_err(|_| err(self.base + start, format!("number {s} is too large")))
    }

    fn integer(&mut self) -> Result<i64> {
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let col = self.col();
        let v = self.unsigned()?;
        let v = i64::try_from(v).map_err(|_| err(col, "number is too large"))?;
        Ok(if neg { -v } else { v })
    }

    /// Exponent after `^`: `-5`, `{-5}` or `(-5)`.
    fn exponent(&mut self) -> Result<i64> {
        for (open, close) in [('{', '}'), ('(', ')')] {
            if self.eat(open) {
                let v = self.integer()?;
                self.expect(close)?;
                return Ok(v);
            }
        }
        self.integer()
    }

    fn uint_list(&mut self) -> Result<Vec<u64>> {
        self.expect('[')?;
        let mut out = Vec::new();
        if self.eat(']') {
            return Ok(out);
        }
        loop {
            out.push(self.unsigned()?);
            if self.eat(']') {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }
}

/// Field header `p=.. e=.. [modulus=[..]]`, without the trailing `;`.
pub fn parse_field_header(text: &str) -> Result<Arc<FieldCtx>> {
    let mut cur = Cursor::new(text, 1);
    let ctx = header(&mut cur)?;
    if !cur.at_end() {
        return Err(err(cur.col(), "unexpected input after field header"));
    }
    Ok(ctx)
}

fn header(cur: &mut Cursor) -> Result<Arc<FieldCtx>> {
    let mut p = None;
    let mut e = None;
    let mut modulus = None;
    let mut p_col = cur.col();
    while let Some(c) = cur.peek() {
        if c == ';' {
            break;
        }
        let col = cur.col();
        let key = cur
            .ident()
            .ok_or_else(|| err(col, "expected 'p=', 'e=' or 'modulus='"))?;
        cur.expect('=')?;
        match key.as_str() {
            "p" => {
                p_col = cur.col();
                p = Some(cur.unsigned()?);
            }
            "e" => e = Some(cur.unsigned()?),
            "modulus" | "m" => modulus = Some(cur.uint_list()?),
            other => return Err(err(col, format!("unknown header key '{other}'"))),
        }
    }
    let p = p.ok_or_else(|| err(cur.col(), "field header needs p="))?;
    let p = u32::try_from(p).map_err(|_| err(p_col, "p is too large"))?;
    let field_err = |e: Error| match e {
        Error::NotPrime(_) => err(p_col, format!("p must be prime (got {p})")),
        other => other,
    };
    match modulus {
        Some(m) => {
            let m: Vec<u32> = m
                .into_iter()
                .map(|c| c.min(u32::MAX as u64) as u32)
                .collect();
            let ctx = FieldCtx::with_modulus(p, m).map_err(field_err)?;
            if let Some(e) = e {
                if e != ctx.degree() as u64 {
                    return Err(Error::BadModulus(format!(
                        "e={e} but the modulus has degree {}",
                        ctx.degree()
                    )));
                }
            }
            Ok(ctx)
        }
        None => {
            let e = u32::try_from(e.unwrap_or(1))
                .map_err(|_| Error::FieldTooLarge { p, e: u32::MAX })?;
            FieldCtx::new(p, e).map_err(field_err)
        }
    }
}

/// Whether the text starts with a `p=` header.
fn has_header(text: &str) -> bool {
    let t = text.trim_start();
    let rest = t.strip_prefix('p');
    matches!(rest.map(|r| r.trim_start().starts_with('=')), Some(true))
}

fn split_header<'a>(
    text: &'a str,
    ctx: Option<&Arc<FieldCtx>>,
) -> Result<(Arc<FieldCtx>, &'a str, usize)> {
    if has_header(text) {
        let semi = text
            .find(';')
            .ok_or_else(|| err(text.chars().count() + 1, "expected ';' after field header"))?;
        let mut cur = Cursor::new(&text[..semi], 1);
        let parsed = header(&mut cur)?;
        if let Some(c) = ctx {
            if !same_field(c, &parsed) {
                return Err(err(
                    1,
                    "literal header disagrees with the surrounding field",
                ));
            }
        }
        let base = text[..semi].chars().count() + 2;
        Ok((parsed, &text[semi + 1..], base))
    } else {
        let c = ctx.ok_or_else(|| err(1, "missing field header 'p=.. e=..;'"))?;
        Ok((c.clone(), text, 1))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Tail {
    Required,
    Forbidden,
}

fn coefficient(cur: &mut Cursor, ctx: &FieldCtx) -> Result<Fe> {
    let col = cur.col();
    if cur.peek() == Some('[') {
        let list = cur.uint_list()?;
        let p = ctx.characteristic() as u64;
        let coords: Vec<u32> = list.iter().map(|&c| (c % p) as u32).collect();
        if coords.len() > ctx.degree() as usize {
            return Err(err(
                col,
                format!(
                    "coefficient has {} coordinates but e = {}",
                    coords.len(),
                    ctx.degree()
                ),
            ));
        }
        return ctx.from_coords(&coords);
    }
    Ok(ctx.from_int(cur.integer()?))
}

fn series_body(
    cur: &mut Cursor,
    ctx: &Arc<FieldCtx>,
    var: &str,
    tail: Tail,
) -> Result<LaurentSeries> {
    let mut terms: Vec<(i64, Fe, usize)> = Vec::new();
    let mut prec: Option<(i64, usize)> = None;
    let mut first = true;
    loop {
        if cur.at_end() || cur.peek() == Some(';') || cur.peek() == Some(')') {
            if first {
                return Err(err(cur.col(), "empty series"));
            }
            break;
        }
        let negative = if first {
            cur.eat('-')
        } else if cur.eat('+') {
            false
        } else if cur.eat('-') {
            true
        } else {
            return Err(err(cur.col(), "expected '+' or '-' between terms"));
        };
        first = false;
        cur.skip_ws();
        let col = cur.col();
        // O-term
        let save = cur.pos;
        if cur.ident().as_deref() == Some("O") {
            if negative {
                return Err(err(col, "O-term cannot be negated"));
            }
            cur.expect('(')?;
            let vcol = cur.col();
            if cur.ident().as_deref() != Some(var) {
                return Err(err(vcol, format!("expected O({var}^N)")));
            }
            let n = if cur.eat('^') { cur.exponent()? } else { 1 };
            cur.expect(')')?;
            if tail == Tail::Forbidden {
                return Err(err(col, "polynomial literals are exact and take no O-term"));
            }
            if prec.is_some() {
                return Err(err(col, "more than one O-term"));
            }
            prec = Some((n, col));
            continue;
        }
        cur.pos = save;
        if prec.is_some() {
            return Err(err(col, "the O-term must come last"));
        }
        let c = match cur.peek() {
            Some(ch) if ch.is_ascii_digit() || ch == '[' => {
                let c = coefficient(cur, ctx)?;
                if cur.eat('*') {
                    Some(c)
                } else {
                    // bare constant
                    let c = if negative { ctx.neg(c) } else { c };
                    terms.push((0, c, col));
                    continue;
                }
            }
            _ => None,
        };
        let vcol = cur.col();
        match cur.ident() {
            Some(ref v) if v == var => {}
            Some(v) => {
                return Err(err(
                    vcol,
                    format!("unknown variable '{v}', expected '{var}'"),
                ))
            }
            None => return Err(err(vcol, format!("expected a coefficient or '{var}'"))),
        }
        let k = if cur.eat('^') { cur.exponent()? } else { 1 };
        let c = c.unwrap_or(Fe::ONE);
        let c = if negative { ctx.neg(c) } else { c };
        terms.push((k, c, col));
    }
    let prec = match (prec, tail) {
        (Some((n, _)), _) => Precision::Bounded(n),
        (None, Tail::Required) => {
            return Err(err(cur.col(), format!("missing trailing O({var}^N)")))
        }
        (None, Tail::Forbidden) => Precision::Exact,
    };
    if let Precision::Bounded(n) = prec {
        if let Some(&(k, _, col)) = terms.iter().find(|t| t.0 >= n) {
            return Err(err(
                col,
                format!("term {var}^{k} is not below the declared precision O({var}^{n})"),
            ));
        }
    }
    if tail == Tail::Forbidden {
        if let Some(&(k, _, col)) = terms.iter().find(|t| t.0 < 0) {
            return Err(err(col, format!("negative exponent {k} in a polynomial")));
        }
    }
    let flat: Vec<(i64, Fe)> = terms.into_iter().map(|(k, c, _)| (k, c)).collect();
    Ok(LaurentSeries::from_terms(ctx, &flat, prec))
}

fn finish(cur: &mut Cursor) -> Result<()> {
    if cur.at_end() {
        Ok(())
    } else {
        Err(err(cur.col(), "unexpected trailing input"))
    }
}

/// Series literal with a mandatory header.
pub fn parse_series(text: &str) -> Result<LaurentSeries> {
    parse_series_opt(text, None)
}

/// Series literal over `ctx`; a header, if present, must agree with it.
pub fn parse_series_in(ctx: &Arc<FieldCtx>, text: &str) -> Result<LaurentSeries> {
    parse_series_opt(text, Some(ctx))
}

fn parse_series_opt(text: &str, ctx: Option<&Arc<FieldCtx>>) -> Result<LaurentSeries> {
    let (ctx, body, base) = split_header(text, ctx)?;
    let mut cur = Cursor::new(body, base);
    let s = series_body(&mut cur, &ctx, "t", Tail::Required)?;
    finish(&mut cur)?;
    Ok(s)
}

/// Exact polynomial in `var` with non-negative exponents, e.g. `x^3 + 2*x`.
pub fn parse_polynomial_in(ctx: &Arc<FieldCtx>, text: &str, var: &str) -> Result<LaurentSeries> {
    let (ctx, body, base) = split_header(text, Some(ctx))?;
    let mut cur = Cursor::new(body, base);
    let s = series_body(&mut cur, &ctx, var, Tail::Forbidden)?;
    finish(&mut cur)?;
    Ok(s)
}

pub fn parse_witt(text: &str) -> Result<WittVec2> {
    parse_witt_opt(text, None)
}

pub fn parse_witt_in(ctx: &Arc<FieldCtx>, text: &str) -> Result<WittVec2> {
    parse_witt_opt(text, Some(ctx))
}

fn parse_witt_opt(text: &str, ctx: Option<&Arc<FieldCtx>>) -> Result<WittVec2> {
    let (ctx, body, base) = split_header(text, ctx)?;
    let mut cur = Cursor::new(body, base);
    let col = cur.col();
    if cur.ident().as_deref() != Some("W2") {
        return Err(err(col, "expected 'W2('"));
    }
    cur.expect('(')?;
    let a0 = series_body(&mut cur, &ctx, "t", Tail::Required)?;
    cur.expect(';')?;
    let a1 = series_body(&mut cur, &ctx, "t", Tail::Required)?;
    cur.expect(')')?;
    finish(&mut cur)?;
    WittVec2::new(a0, a1)
}

/// `p=.. e=..` (plus `modulus=[..]` when e > 1).
pub fn render_header(ctx: &FieldCtx) -> String {
    if ctx.degree() == 1 {
        format!("p={} e=1", ctx.characteristic())
    } else {
        let m: Vec<String> = ctx.modulus().iter().map(|c| c.to_string()).collect();
        format!(
            "p={} e={} modulus=[{}]",
            ctx.characteristic(),
            ctx.degree(),
            m.join(",")
        )
    }
}

/// Self-contained literal that [`parse_series`] reads back.
pub fn render_series(s: &LaurentSeries) -> String {
    format!("{}; {}", render_header(s.ctx()), s)
}

pub fn render_witt(w: &WittVec2) -> String {
    format!("{}; {}", render_header(w.ctx()), w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_literal() {
        let s = parse_series("p=3 e=1; 2*t^-5 + t^-1 + 1 + O(t^20)").unwrap();
        let k = s.ctx().clone();
        assert_eq!(s.coeff(-5), k.from_int(2));
        assert_eq!(s.coeff(-1), Fe::ONE);
        assert_eq!(s.coeff(0), Fe::ONE);
        assert_eq!(s.precision(), Precision::Bounded(20));
        assert_eq!(parse_series(&render_series(&s)).unwrap(), s);
    }

    #[test]
    fn signs_and_braces() {
        let k = FieldCtx::prime(5).unwrap();
        let s = parse_series_in(&k, "-t^{-2} - 3*t + t^(4) + O(t^10)").unwrap();
        assert_eq!(s.coeff(-2), k.from_int(4));
        assert_eq!(s.coeff(1), k.from_int(2));
        assert_eq!(s.coeff(4), Fe::ONE);
        let z = parse_series_in(&k, "O(t^3)").unwrap();
        assert!(z.is_zero());
        assert_eq!(z.precision(), Precision::Bounded(3));
    }

    #[test]
    fn extension_coefficients() {
        let s = parse_series("p=5 e=2; [1,3]*t^-2 + 2 + O(t^10)").unwrap();
        let k = s.ctx().clone();
        assert_eq!(k.coords(s.coeff(-2)), vec![1, 3]);
        let back = parse_series(&render_series(&s)).unwrap();
        assert_eq!(back, s);
        assert!(parse_series("p=5 e=2; [1,2,3]*t + O(t^3)").is_err());
    }

    #[test]
    fn explicit_modulus() {
        let s = parse_series("p=2 e=2 modulus=[1,1,1]; [0,1]*t^-1 + O(t^4)").unwrap();
        assert_eq!(s.ctx().modulus(), &[1, 1, 1]);
        assert!(matches!(
            parse_series("p=2 e=2 modulus=[1,0,1]; t + O(t^4)"),
            Err(Error::ReducibleModulus { p: 2 })
        ));
    }

    #[test]
    fn rejections() {
        match parse_series("p=4 e=1; t + O(t^3)") {
            Err(Error::Parse { message, column }) => {
                assert!(message.contains("p must be prime"));
                assert_eq!(column, 3);
            }
            other => panic!("{other:?}"),
        }
        match parse_series("p=3 e=1; t^-1 + t^5 + O(t^5)") {
            Err(Error::Parse { message, column }) => {
                assert!(message.contains("not below the declared precision"));
                assert_eq!(column, 17);
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_series("p=3 e=1; t^-1 + 1").is_err());
        assert!(parse_series("t^-1 + O(t^4)").is_err());
        assert!(parse_series("p=3; t^-1 + O(t^4) + t").is_err());
        assert!(parse_series("p=3; t^-1 + y + O(t^4)").is_err());
        assert!(parse_series("p=3; t^-1 t + O(t^4)").is_err());
    }

    #[test]
    fn witt_literal() {
        let w = parse_witt("p=3 e=1; W2( t^-1 + O(t^20) ; 2*t^-2 + O(t^20) )").unwrap();
        assert_eq!(w.a1().coeff(-2), w.ctx().from_int(2));
        assert_eq!(parse_witt(&render_witt(&w)).unwrap(), w);
        let k = FieldCtx::prime(3).unwrap();
        assert!(parse_witt_in(&k, "W2(t^-1 + O(t^4))").is_err());
    }

    #[test]
    fn polynomials() {
        let k = FieldCtx::prime(2).unwrap();
        let f = parse_polynomial_in(&k, "x^3 + x + 1", "x").unwrap();
        assert!(f.is_exact());
        assert_eq!(f.max_exponent(), Some(3));
        assert!(parse_polynomial_in(&k, "x^3 + O(x^5)", "x").is_err());
        assert!(parse_polynomial_in(&k, "x^-1", "x").is_err());
    }
}
