//! Job files.
//!
//! A job is a TOML document with a `[field]` table, one or two
//! `[[extension]]` tables and optional `[options]`:
//!
//! ```toml
//! [field]
//! p = 3
//! e = 1
//!
//! [[extension]]
//! type = "witt2"
//! vector = "W2( t^-1 + O(t^30) ; t^-2 + O(t^30) )"
//!
//! [options]
//! command = "jumps"
//! ```
//!
//! Extension types: `as` (key `series`), `witt2` (key `vector`) and `cover`
//! (keys `group`, one of `Z/p`, `Z/p^2`, `(Z/p)^2`, and `polynomials`, a list
//! of polynomials in `x`). Series and Witt literals use the library syntax
//! without the field header and must end in `O(t^N)`. Errors carry the line
//! and column in the job file.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Deserialize;
use toml::Spanned;
use wildram::field::same_field;
use wildram::genus::CoverSpec;
use wildram::literal::{parse_polynomial_in, parse_series_in, parse_witt_in};
use wildram::{Error, FieldCtx, LaurentSeries, WittVec2};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for JobError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.column, self.message
        )
    }
}

impl std::error::Error for JobError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Reduce,
    Jumps,
    Genus,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Reduce => "reduce",
            Command::Jumps => "jumps",
            Command::Genus => "genus",
            Command::Verify => "verify",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "reduce" => Ok(Command::Reduce),
            "jumps" => Ok(Command::Jumps),
            "genus" => Ok(Command::Genus),
            "verify" => Ok(Command::Verify),
            other => Err(format!(
                "unknown command '{other}' (expected reduce, jumps, genus or verify)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverGroup {
    PCyclic,
    CyclicP2,
    ElementaryP2,
}

impl CoverGroup {
    pub fn name(self) -> &'static str {
        match self {
            CoverGroup::PCyclic => "Z/p",
            CoverGroup::CyclicP2 => "Z/p^2",
            CoverGroup::ElementaryP2 => "(Z/p)^2",
        }
    }

    fn arity(self) -> usize {
        match self {
            CoverGroup::PCyclic => 1,
            _ => 2,
        }
    }
}

/// Polynomials in `x` for a cover of the projective line branched only at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub group: CoverGroup,
    pub polynomials: Vec<LaurentSeries>,
}

impl Cover {
    pub fn spec(&self) -> wildram::Result<CoverSpec> {
        let f = &self.polynomials;
        match self.group {
            CoverGroup::PCyclic => CoverSpec::p_cyclic(&f[0]),
            CoverGroup::CyclicP2 => CoverSpec::cyclic_p2(&f[0], &f[1]),
            CoverGroup::ElementaryP2 => CoverSpec::elementary_p2(&f[0], &f[1]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extension {
    ArtinSchreier(LaurentSeries),
    Witt2(WittVec2),
    Cover(Cover),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct JobOptions {
    pub command: Option<Command>,
    pub prec: Option<i64>,
}

#[derive(Clone, Debug)]
pub struct JobSpec {
    pub field: Arc<FieldCtx>,
    pub extensions: Vec<Extension>,
    pub options: JobOptions,
}

impl PartialEq for JobSpec {
    fn eq(&self, other: &Self) -> bool {
        same_field(&self.field, &other.field)
            && self.extensions == other.extensions
            && self.options == other.options
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJob {
    field: Spanned<RawField>,
    #[serde(default)]
    extension: Vec<Spanned<RawExtension>>,
    #[serde(default)]
    options: Option<RawOptions>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    p: Spanned<i64>,
    #[serde(default)]
    e: Option<Spanned<i64>>,
    #[serde(default)]
    modulus: Option<Spanned<Vec<i64>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExtension {
    #[serde(rename = "type")]
    kind: Spanned<String>,
    series: Option<Spanned<String>>,
    vector: Option<Spanned<String>>,
    group: Option<Spanned<String>>,
    polynomials: Option<Spanned<Vec<Spanned<String>>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOptions {
    command: Option<Spanned<String>>,
    prec: Option<Spanned<i64>>,
}

/// Byte offset to 1-based line and column (in characters).
fn position(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let start = before.rfind('\n').map_or(0, |i| i + 1);
    (line, before[start..].chars().count() + 1)
}

struct Doc<'a> {
    text: &'a str,
}

impl Doc<'_> {
    fn at(&self, offset: usize, message: impl Into<String>) -> JobError {
        let (line, column) = position(self.text, offset);
        JobError {
            line,
            column,
            message: message.into(),
        }
    }

    fn at_span<T>(&self, s: &Spanned<T>, message: impl Into<String>) -> JobError {
        self.at(s.span().start, message)
    }

    /// Maps a library error raised while parsing the string value `s`.
    fn literal_error(&self, s: &Spanned<String>, e: Error) -> JobError {
        let open = s.span().start;
        let quote =
            if self.text[open..].starts_with("\"\"\"") || self.text[open..].starts_with("'''") {
                3
            } else {
                1
            };
        match e {
            Error::Parse { column, message } => {
                let inner = s
                    .get_ref()
                    .char_indices()
                    .nth(column.saturating_sub(1))
                    .map_or(s.get_ref().len(), |(i, _)| i);
                self.at(open + quote + inner, message)
            }
            other => self.at(open, other.to_string()),
        }
    }
}

fn field(doc: &Doc, raw: &Spanned<RawField>) -> Result<Arc<FieldCtx>, JobError> {
    let f = raw.get_ref();
    let p = *f.p.get_ref();
    let p =
        u32::try_from(p).map_err(|_| doc.at_span(&f.p, format!("p must be prime (got {p})")))?;
    let e = match &f.e {
        Some(e) => u32::try_from(*e.get_ref())
            .ok()
            .filter(|&e| e >= 1)
            .ok_or_else(|| doc.at_span(e, "e must be a positive integer"))?,
        None => 1,
    };
    let ctx = match &f.modulus {
        Some(m) => {
            let coeffs = m
                .get_ref()
                .iter()
                .map(|&c| {
                    u32::try_from(c)
                        .map_err(|_| doc.at_span(m, "modulus coefficients must be non-negative"))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if coeffs.len() != e as usize + 1 {
                return Err(doc.at_span(
                    m,
                    format!("modulus must have e + 1 = {} coefficients", e + 1),
                ));
            }
            FieldCtx::with_modulus(p, coeffs).map_err(|err| doc.at_span(m, err.to_string()))?
        }
        None => FieldCtx::new(p, e).map_err(|err| doc.at_span(&f.p, err.to_string()))?,
    };
    Ok(ctx)
}

fn required<'a>(
    doc: &Doc,
    ext: &Spanned<RawExtension>,
    value: &'a Option<Spanned<String>>,
    key: &str,
) -> Result<&'a Spanned<String>, JobError> {
    value.as_ref().ok_or_else(|| {
        doc.at_span(
            ext,
            format!(
                "extension of type '{}' needs '{key}'",
                ext.get_ref().kind.get_ref()
            ),
        )
    })
}

fn extension(
    doc: &Doc,
    ctx: &Arc<FieldCtx>,
    raw: &Spanned<RawExtension>,
) -> Result<Extension, JobError> {
    let r = raw.get_ref();
    let stray = |keys: &[(&str, bool)]| -> Result<(), JobError> {
        match keys.iter().find(|(_, present)| *present) {
            Some((k, _)) => Err(doc.at_span(
                raw,
                format!("key '{k}' does not apply to type '{}'", r.kind.get_ref()),
            )),
            None => Ok(()),
        }
    };
    match r.kind.get_ref().as_str() {
        "as" => {
            stray(&[
                ("vector", r.vector.is_some()),
                ("group", r.group.is_some()),
                ("polynomials", r.polynomials.is_some()),
            ])?;
            let s = required(doc, raw, &r.series, "series")?;
            let f = parse_series_in(ctx, s.get_ref()).map_err(|e| doc.literal_error(s, e))?;
            Ok(Extension::ArtinSchreier(f))
        }
        "witt2" => {
            stray(&[
                ("series", r.series.is_some()),
                ("group", r.group.is_some()),
                ("polynomials", r.polynomials.is_some()),
            ])?;
            let s = required(doc, raw, &r.vector, "vector")?;
            let w = parse_witt_in(ctx, s.get_ref()).map_err(|e| doc.literal_error(s, e))?;
            Ok(Extension::Witt2(w))
        }
        "cover" => {
            stray(&[
                ("series", r.series.is_some()),
                ("vector", r.vector.is_some()),
            ])?;
            let g = required(doc, raw, &r.group, "group")?;
            let group = match g.get_ref().as_str() {
                "Z/p" => CoverGroup::PCyclic,
                "Z/p^2" => CoverGroup::CyclicP2,
                "(Z/p)^2" => CoverGroup::ElementaryP2,
                other => {
                    return Err(doc.at_span(
                        g,
                        format!("unknown cover group '{other}' (expected Z/p, Z/p^2 or (Z/p)^2)"),
                    ))
                }
            };
            let polys = r
                .polynomials
                .as_ref()
                .ok_or_else(|| doc.at_span(raw, "extension of type 'cover' needs 'polynomials'"))?;
            if polys.get_ref().len() != group.arity() {
                return Err(doc.at_span(
                    polys,
                    format!(
                        "a {} cover takes {} polynomial(s)",
                        group.name(),
                        group.arity()
                    ),
                ));
            }
            let polynomials = polys
                .get_ref()
                .iter()
                .map(|s| {
                    parse_polynomial_in(ctx, s.get_ref(), "x").map_err(|e| doc.literal_error(s, e))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let cover = Cover { group, polynomials };
            cover
                .spec()
                .map_err(|e| doc.at_span(polys, e.to_string()))?;
            Ok(Extension::Cover(cover))
        }
        other => Err(doc.at_span(
            &r.kind,
            format!("unknown extension type '{other}' (expected as, witt2 or cover)"),
        )),
    }
}

pub fn parse_job(text: &str) -> Result<JobSpec, JobError> {
    let doc = Doc { text };
    let raw: RawJob = toml::from_str(text).map_err(|e| {
        let offset = e.span().map_or(0, |s| s.start);
        doc.at(offset, e.message().to_string())
    })?;
    let ctx = field(&doc, &raw.field)?;
    let extensions = raw
        .extension
        .iter()
        .map(|x| extension(&doc, &ctx, x))
        .collect::<Result<Vec<_>, _>>()?;
    match extensions.len() {
        1 | 2 => {}
        n => {
            return Err(doc.at_span(
                &raw.field,
                format!("a job has one or two extensions (found {n})"),
            ))
        }
    }
    if extensions.len() == 2 && extensions.iter().any(|x| matches!(x, Extension::Cover(_))) {
        return Err(doc.at_span(&raw.extension[1], "a cover job has exactly one extension"));
    }
    let mut options = JobOptions::default();
    if let Some(o) = raw.options {
        if let Some(c) = o.command {
            options.command = Some(
                c.get_ref()
                    .parse()
                    .map_err(|m: String| doc.at_span(&c, m))?,
            );
        }
        if let Some(n) = o.prec {
            if *n.get_ref() < 1 {
                return Err(doc.at_span(&n, "prec must be positive"));
            }
            options.prec = Some(*n.get_ref());
        }
    }
    Ok(JobSpec {
        field: ctx,
        extensions,
        options,
    })
}

fn quoted(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

impl JobSpec {
    /// TOML text that [`parse_job`] reads back to an equal job.
    pub fn render(&self) -> String {
        let k = &self.field;
        let mut out = format!("[field]\np = {}\ne = {}\n", k.characteristic(), k.degree());
        if k.degree() > 1 {
            let m: Vec<String> = k.modulus().iter().map(|c| c.to_string()).collect();
            out += &format!("modulus = [{}]\n", m.join(", "));
        }
        for x in &self.extensions {
            out += "\n[[extension]]\n";
            match x {
                Extension::ArtinSchreier(f) => {
                    out += &format!("type = \"as\"\nseries = {}\n", quoted(&f.to_string()));
                }
                Extension::Witt2(w) => {
                    out += &format!("type = \"witt2\"\nvector = {}\n", quoted(&w.to_string()));
                }
                Extension::Cover(c) => {
                    let polys: Vec<String> = c
                        .polynomials
                        .iter()
                        .map(|f| quoted(&f.display_in("x")))
                        .collect();
                    out += &format!(
                        "type = \"cover\"\ngroup = {}\npolynomials = [{}]\n",
                        quoted(c.group.name()),
                        polys.join(", ")
                    );
                }
            }
        }
        if self.options != JobOptions::default() {
            out += "\n[options]\n";
            if let Some(c) = self.options.command {
                out += &format!("command = \"{}\"\n", c.name());
            }
            if let Some(n) = self.options.prec {
                out += &format!("prec = {n}\n");
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str =
        "[field]\np = 2\n\n[[extension]]\ntype = \"as\"\nseries = \"t^-3 + O(t^5)\"\n";

    #[test]
    fn minimal_job() {
        let job = parse_job(MINIMAL).unwrap();
        assert_eq!(job.field.characteristic(), 2);
        assert_eq!(job.extensions.len(), 1);
        assert_eq!(job.options, JobOptions::default());
        assert_eq!(parse_job(&job.render()).unwrap(), job);
    }

    #[test]
    fn p_not_prime() {
        let e = parse_job(&MINIMAL.replace("p = 2", "p = 4")).unwrap_err();
        assert_eq!((e.line, e.column), (2, 5));
        assert!(e.message.contains("p must be prime"), "{e}");
    }

    #[test]
    fn term_beyond_precision() {
        let e = parse_job(&MINIMAL.replace("t^-3 + O(t^5)", "t^-3 + t^7 + O(t^5)")).unwrap_err();
        assert_eq!(e.line, 6);
        assert!(
            e.message.contains("not below the declared precision"),
            "{e}"
        );
    }

    #[test]
    fn missing_big_o() {
        let e = parse_job(&MINIMAL.replace(" + O(t^5)", "")).unwrap_err();
        assert_eq!(e.line, 6);
        assert!(
            e.message.contains("O(t^N)") || e.message.contains("O("),
            "{e}"
        );
    }

    #[test]
    fn reducible_modulus() {
        let text = "[field]\np = 2\ne = 2\nmodulus = [1, 0, 1]\n\n[[extension]]\ntype = \"as\"\nseries = \"t^-1 + O(t^2)\"\n";
        let e = parse_job(text).unwrap_err();
        assert_eq!(e.line, 4);
        assert!(e.message.contains("reducible"), "{e}");
    }

    #[test]
    fn syntax_error_position() {
        let e = parse_job("[field]\np = = 2\n").unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn cover_and_options_round_trip() {
        let text = "[field]\np = 5\ne = 2\nmodulus = [2, 4, 1]\n\n[[extension]]\ntype = \"cover\"\ngroup = \"(Z/p)^2\"\npolynomials = [\"x^3\", \"x + [0,1]*x^3\"]\n\n[options]\ncommand = \"genus\"\nprec = 90\n";
        let job = parse_job(text).unwrap();
        assert_eq!(job.options.command, Some(Command::Genus));
        assert_eq!(job.render(), text);
        assert_eq!(parse_job(&job.render()).unwrap(), job);
    }

    #[test]
    fn witt_round_trip() {
        let text = "[field]\np = 3\ne = 1\n\n[[extension]]\ntype = \"witt2\"\nvector = \"W2( t^-1 + O(t^9) ; 2*t^-5 + t^-2 + O(t^9) )\"\n";
        let job = parse_job(text).unwrap();
        assert_eq!(parse_job(&job.render()).unwrap(), job);
    }

    #[test]
    fn structural_errors() {
        let bad_type = MINIMAL.replace("\"as\"", "\"witt3\"");
        assert!(parse_job(&bad_type)
            .unwrap_err()
            .message
            .contains("unknown extension type"));
        let stray = MINIMAL.replace("type = \"as\"", "type = \"as\"\nvector = \"W2(O(t);O(t))\"");
        assert!(parse_job(&stray)
            .unwrap_err()
            .message
            .contains("does not apply"));
        assert!(parse_job("[field]\np = 3\n")
            .unwrap_err()
            .message
            .contains("one or two"));
        let cover = "[field]\np = 3\n\n[[extension]]\ntype = \"cover\"\ngroup = \"Z/p^2\"\npolynomials = [\"x\"]\n";
        assert!(parse_job(cover).unwrap_err().message.contains("takes 2"));
        let unknown = format!("{MINIMAL}\n[options]\ncommand = \"plot\"\n");
        let e = parse_job(&unknown).unwrap_err();
        assert_eq!(e.line, 9);
    }
}
