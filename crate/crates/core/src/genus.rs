//! Genus of covers of the projective line branched only at infinity.
//!
//! Cover data are polynomials in `x`; at infinity the local parameter is
//! `t = x^{-1}`, and everything below works in `k((t))`.

use std::sync::Arc;

use crate::asreduce::{reduce_as, reduce_witt2};
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::ramfilt::{
    classify_p_cyclic_compositum, jumps_p2_cyclic, jumps_p_cyclic, Filtration, PCyclicCompositum,
};
use crate::report::{RamReport, Status};
use crate::series::LaurentSeries;
use crate::witt::WittVec2;

/// A Galois cover of `P^1` branched only at `x = ∞`, with data in `t = x^{-1}`.
#[derive(Clone, Debug)]
pub enum CoverSpec {
    PCyclic(LaurentSeries),
    ElementaryP2(LaurentSeries, LaurentSeries),
    CyclicP2(WittVec2),
}

/// `f(x) ↦ f(t^{-1})`; rejects anything that is not a polynomial in `x`.
pub fn at_infinity(f: &LaurentSeries) -> Result<LaurentSeries> {
    if !f.is_exact() {
        return Err(Error::Degenerate(
            "cover data must be an exact polynomial in x".into(),
        ));
    }
    if let Some(v) = f.valuation()? {
        if v < 0 {
            return Err(Error::Degenerate(format!(
                "x^{v} has a pole at x = 0; the cover would be branched away from infinity"
            )));
        }
    }
    let k = f.ctx();
    f.substitute(&LaurentSeries::monomial(k, k.one(), -1))
}

impl CoverSpec {
    pub fn p_cyclic(f: &LaurentSeries) -> Result<Self> {
        Ok(CoverSpec::PCyclic(at_infinity(f)?))
    }

    pub fn elementary_p2(f0: &LaurentSeries, f1: &LaurentSeries) -> Result<Self> {
        Ok(CoverSpec::ElementaryP2(at_infinity(f0)?, at_infinity(f1)?))
    }

    pub fn cyclic_p2(f0: &LaurentSeries, f1: &LaurentSeries) -> Result<Self> {
        Ok(CoverSpec::CyclicP2(WittVec2::new(
            at_infinity(f0)?,
            at_infinity(f1)?,
        )?))
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        match self {
            CoverSpec::PCyclic(f) | CoverSpec::ElementaryP2(f, _) => f.ctx(),
            CoverSpec::CyclicP2(v) => v.ctx(),
        }
    }

    fn p(&self) -> i64 {
        self.ctx().characteristic() as i64
    }

    pub fn kind_label(&self) -> &'static str {
        match self {
            CoverSpec::PCyclic(_) => "p-cyclic",
            CoverSpec::ElementaryP2(..) => "elementary-p2",
            CoverSpec::CyclicP2(_) => "cyclic-p2",
        }
    }
}

/// Closed-form value and the branch that produced it.
///
/// The value is kept as `2g`: the drop case can be a half-integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    pub twice: i64,
    pub case: String,
}

impl ClosedForm {
    pub fn genus(&self) -> Option<i64> {
        (self.twice % 2 == 0).then_some(self.twice / 2)
    }

    pub fn render(&self) -> String {
        match self.genus() {
            Some(g) => g.to_string(),
            None => format!("{}/2", self.twice),
        }
    }
}

fn half(twice: i64, what: &str) -> Result<i64> {
    if twice % 2 != 0 {
        return Err(Error::Internal(format!("{what}: 2g = {twice} is odd")));
    }
    Ok(twice / 2)
}

fn wild_pole(f: &LaurentSeries, what: &str) -> Result<i64> {
    reduce_as(f)?
        .kind
        .pole_order()
        .ok_or_else(|| Error::Degenerate(format!("{what} is not totally ramified at infinity")))
}

fn elementary_class(f0: &LaurentSeries, f1: &LaurentSeries) -> Result<PCyclicCompositum> {
    let class = classify_p_cyclic_compositum(f0, f1)?;
    if let PCyclicCompositum::NotTotallyRamified { .. } = class {
        return Err(Error::Degenerate(
            "the cover is not totally ramified at infinity (an unramified quotient appears)".into(),
        ));
    }
    Ok(class)
}

/// The closed forms. For an elementary cover with equal pole orders
/// and a drop, this is the stated third case, which need not agree with
/// [`genus_via_rh`].
pub fn genus_closed_form(c: &CoverSpec) -> Result<ClosedForm> {
    let p = c.p();
    let pp = p * p;
    let mut exact = true;
    let (twice, case) = match c {
        CoverSpec::PCyclic(f) => {
            let r = wild_pole(f, "the Artin-Schreier cover")?;
            ((p - 1) * (r - 1), "p-cyclic: (p-1)(r-1)/2".to_string())
        }
        CoverSpec::ElementaryP2(f0, f1) => match elementary_class(f0, f1)? {
            PCyclicCompositum::Distinct { i: n0, j: n1 } => (
                (n1 - 1) * pp - (n1 - n0) * p - n0 + 1,
                format!("(Z/p)^2, n0 < n1 ({n0} < {n1})"),
            ),
            PCyclicCompositum::NoDrop { i: n0 } => (
                (n0 - 1) * pp - n0 + 1,
                format!("(Z/p)^2, n0 = n1 = {n0}, no drop"),
            ),
            PCyclicCompositum::Drop { i: n0, l, .. } => {
                exact = false;
                (
                    (l - 1) * pp - (n0 - l) * p - l + 1,
                    format!("(Z/p)^2, n0 = n1 = {n0}, drop to {l} (closed form)"),
                )
            }
            PCyclicCompositum::NotTotallyRamified { .. } => unreachable!(),
        },
        CoverSpec::CyclicP2(v) => {
            let rv = reduce_witt2(v)?;
            let n0 = rv.kinds[0].pole_order().ok_or_else(|| {
                Error::Degenerate("component 0 is not totally ramified at infinity".into())
            })?;
            let n1 = rv.kinds[1].pole_order().unwrap_or(0);
            if n1 <= p * n0 {
                (
                    n0 * (p - 1) * (pp + 1) - pp + 1,
                    format!("Z/p^2, n1 <= p*n0 ({n1} <= {})", p * n0),
                )
            } else {
                (
                    (n1 - 1) * pp - (n1 - n0) * p - n0 + 1,
                    format!("Z/p^2, n1 > p*n0 ({n1} > {})", p * n0),
                )
            }
        }
    };
    if exact {
        half(twice, &case)?;
    }
    Ok(ClosedForm { twice, case })
}

/// Filtration of the inertia group at the point above infinity.
pub fn cover_filtration(c: &CoverSpec) -> Result<Filtration> {
    let p = c.p() as u64;
    match c {
        CoverSpec::PCyclic(f) => {
            wild_pole(f, "the Artin-Schreier cover")?;
            jumps_p_cyclic(&reduce_as(f)?)
        }
        CoverSpec::ElementaryP2(f0, f1) => elementary_class(f0, f1)?.filtration(p),
        CoverSpec::CyclicP2(v) => jumps_p2_cyclic(&reduce_witt2(v)?),
    }
}

/// `g = (−2|G| + deg R + 2) / 2` with `deg R` from Hilbert's formula.
pub fn genus_from_filtration(f: &Filtration) -> Result<i64> {
    let order = f.lower.orders()[0] as i64;
    let g = half(-2 * order + f.different_degree() + 2, "Riemann-Hurwitz")?;
    if g < 0 {
        return Err(Error::Internal(format!("negative genus {g}")));
    }
    Ok(g)
}

pub fn genus_via_rh(c: &CoverSpec) -> Result<i64> {
    genus_from_filtration(&cover_filtration(c)?)
}

/// Full report: filtration, Riemann-Hurwitz genus, and the closed form as a
/// regression check.
pub fn genus_report(c: &CoverSpec) -> Result<RamReport> {
    let filt = cover_filtration(c)?;
    let rh = genus_from_filtration(&filt)?;
    let closed = genus_closed_form(c)?;
    let mut r = RamReport::from_filtration(format!("cover, {}", closed.case), &filt, None);
    r.genus = Some(rh);
    if closed.genus() == Some(rh) {
        r.notes
            .push(format!("closed form and Riemann-Hurwitz agree: {rh}"));
    } else {
        r.notes.push(format!("closed form: {}", closed.render()));
        r.notes.push(format!("Riemann-Hurwitz: {rh}"));
        r.status = Status::DiscrepancyFlag(format!(
            "closed form gives {}, Riemann-Hurwitz gives {rh}",
            closed.render()
        ));
    }
    Ok(r)
}
