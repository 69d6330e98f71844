//! Dispatch of a job to the library, and the randomized suite behind `verify --trials`.

use std::collections::BTreeSet;

use num_rational::Rational64;
use wildram::asreduce::{reduce_as, reduce_witt2, AsKind, ReducedAS, ReducedWitt2};
use wildram::genus::{cover_filtration, genus_report, CoverSpec};
use wildram::oracle::{
    oracle_derivative_check, oracle_p2_second_jump, oracle_p_cyclic_jump, PrecPolicy,
};
use wildram::ramfilt::{
    compositum_p2, compositum_p_cyclic, jumps_p2_cyclic, jumps_p_cyclic, lower_to_upper,
};
use wildram::report::{RamReport, Status};
use wildram::suite::{self, Outcome};
use wildram::{Error, LaurentSeries, WittVec2};

use crate::job::{Command, Extension, JobSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_UNDETERMINED: i32 = 2;
pub const EXIT_DISCREPANCY: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Library(#[from] Error),
    #[error("{0}")]
    Usage(String),
}

pub fn exit_code(r: &RamReport) -> i32 {
    match r.status {
        Status::Undetermined(_) => EXIT_UNDETERMINED,
        Status::DiscrepancyFlag(_) => EXIT_DISCREPANCY,
        _ => EXIT_OK,
    }
}

/// The data the filtration routines see: covers are moved to the local variable at infinity.
enum Local {
    One(LaurentSeries),
    Cyclic(WittVec2),
    Pair(LaurentSeries, LaurentSeries),
    WittPair(WittVec2, WittVec2),
}

fn local(job: &JobSpec) -> Result<(Local, Option<CoverSpec>), RunError> {
    use Extension::*;
    Ok(match job.extensions.as_slice() {
        [ArtinSchreier(f)] => (Local::One(f.clone()), None),
        [Witt2(w)] => (Local::Cyclic(w.clone()), None),
        [ArtinSchreier(f), ArtinSchreier(g)] => (Local::Pair(f.clone(), g.clone()), None),
        [Witt2(v), Witt2(w)] => (Local::WittPair(v.clone(), w.clone()), None),
        [Cover(c)] => {
            let spec = c.spec()?;
            let data = match &spec {
                CoverSpec::PCyclic(f) => Local::One(f.clone()),
                CoverSpec::CyclicP2(w) => Local::Cyclic(w.clone()),
                CoverSpec::ElementaryP2(f, g) => Local::Pair(f.clone(), g.clone()),
            };
            (data, Some(spec))
        }
        _ => {
            return Err(RunError::Usage(
                "two extensions must have the same type (as + as or witt2 + witt2)".into(),
            ))
        }
    })
}

fn p_cyclic_report(r: &ReducedAS) -> Result<RamReport, Error> {
    let p = r.f_red.ctx().characteristic();
    let trivial = |group: String, case: &str| RamReport {
        group,
        case: case.into(),
        upper_jumps: Vec::new(),
        lower_jumps: Vec::new(),
        orders: vec![1],
        different_degree: Some(0),
        genus: None,
        status: Status::FormulaOnly,
        notes: Vec::new(),
    };
    Ok(match r.kind {
        AsKind::WildReduced { n } => RamReport::from_filtration(
            format!("Z/p, reduced pole order {n}"),
            &jumps_p_cyclic(r)?,
            None,
        ),
        AsKind::Unramified { .. } => trivial(format!("Z/{p}, inertia 1"), "unramified"),
        AsKind::Trivial => trivial("1".into(), "trivial extension"),
    })
}

fn cyclic_report(r: &ReducedWitt2) -> Result<RamReport, Error> {
    let f = jumps_p2_cyclic(r)?;
    let (n0, n1) = r.pole_orders().expect("wild component 0");
    let p = r.vec_red.ctx().characteristic() as i64;
    let branch = if n1 <= p * n0 {
        "n1 <= p*n0"
    } else {
        "n1 > p*n0"
    };
    Ok(RamReport::from_filtration(
        format!("Z/p^2, pole orders ({n0}, {n1}), {branch}"),
        &f,
        None,
    ))
}

fn jumps(data: &Local, cover: Option<&CoverSpec>) -> Result<RamReport, Error> {
    if let Some(c) = cover {
        let f = cover_filtration(c)?;
        return Ok(RamReport::from_filtration(
            format!("cover, {}", c.kind_label()),
            &f,
            None,
        ));
    }
    match data {
        Local::One(f) => p_cyclic_report(&reduce_as(f)?),
        Local::Cyclic(w) => cyclic_report(&reduce_witt2(w)?),
        Local::Pair(f, g) => compositum_p_cyclic(f, g),
        Local::WittPair(v, w) => compositum_p2(v, w),
    }
}

fn reduction_notes(data: &Local) -> Result<Vec<String>, Error> {
    let as_notes = |label: &str, f: &LaurentSeries| -> Result<Vec<String>, Error> {
        let r = reduce_as(f)?;
        Ok(vec![
            format!("{label} reduced: {}", r.f_red),
            format!("{label} shift: {}", r.shift),
            format!("{label} kind: {}", kind_text(&r.kind)),
        ])
    };
    let witt_notes = |label: &str, w: &WittVec2| -> Result<Vec<String>, Error> {
        let r = reduce_witt2(w)?;
        Ok(vec![
            format!("{label} reduced: {}", r.vec_red),
            format!("{label} shift: {}", r.shift),
            format!(
                "{label} kinds: {}; {}",
                kind_text(&r.kinds[0]),
                kind_text(&r.kinds[1])
            ),
        ])
    };
    Ok(match data {
        Local::One(f) => as_notes("f", f)?,
        Local::Cyclic(w) => witt_notes("v", w)?,
        Local::Pair(f, g) => [as_notes("f", f)?, as_notes("g", g)?].concat(),
        Local::WittPair(v, w) => [witt_notes("v", v)?, witt_notes("w", w)?].concat(),
    })
}

fn kind_text(k: &AsKind) -> String {
    match k {
        AsKind::WildReduced { n } => format!("pole of order {n}"),
        AsKind::Unramified { trace } => format!("unramified (constant of trace {trace})"),
        AsKind::Trivial => "trivial".into(),
    }
}

fn integer_jumps(r: &RamReport) -> BTreeSet<Rational64> {
    r.upper_jumps.iter().copied().collect()
}

/// Jump of each degree-`p` subextension of `K(f, g)` by the oracle.
fn subfield_jumps(
    f: &LaurentSeries,
    g: &LaurentSeries,
    prec: PrecPolicy,
) -> Result<Vec<i64>, Error> {
    let p = f.ctx().characteristic() as i64;
    let mut gens = vec![g.clone()];
    for a in 0..p {
        gens.push(f.add(&g.scale_int(a))?);
    }
    let mut out = Vec::new();
    for h in gens {
        let r = reduce_as(&h)?;
        if let AsKind::WildReduced { n } = r.kind {
            out.push(oracle_p_cyclic_jump(&r, prec.resolve(p, n, 0))?);
        }
    }
    Ok(out)
}

/// Oracle lower jumps of a cyclic degree-`p²` extension and its derivative check.
fn cyclic_oracle(w: &WittVec2, prec: PrecPolicy) -> Result<(Vec<i64>, String), Error> {
    let r = reduce_witt2(w)?;
    let (n0, n1) = r
        .pole_orders()
        .ok_or_else(|| Error::Degenerate("component 0 is not wildly ramified".into()))?;
    let p = w.ctx().characteristic() as i64;
    let first = oracle_p_cyclic_jump(&reduce_as(r.vec_red.a0())?, prec.resolve(p, n0, 0))?;
    let n = prec.resolve(p, n0, n1);
    let second = oracle_p2_second_jump(&r, n)?;
    let d = oracle_derivative_check(&r, n)?;
    let note = format!(
        "derivative valuations: dt/dy {} (expected {}), d(a1^p - a1)/dy {} (expected {})",
        d.dt_dy, d.dt_dy_expected, d.dlhs_dy, d.dlhs_dy_expected
    );
    Ok((vec![first, second], note))
}

fn verify(data: &Local, mut report: RamReport, prec: PrecPolicy) -> Result<RamReport, Error> {
    let mismatch: Option<String> = match data {
        Local::One(f) => {
            let r = reduce_as(f)?;
            match r.kind {
                AsKind::WildReduced { n } => {
                    let p = f.ctx().characteristic() as i64;
                    let j = oracle_p_cyclic_jump(&r, prec.resolve(p, n, 0))?;
                    report.notes.push(format!("oracle jump: {j}"));
                    (report.lower_jumps != [j])
                        .then(|| format!("oracle jump {j}, formula {:?}", report.lower_jumps))
                }
                _ => {
                    report
                        .notes
                        .push("no wild ramification; nothing for the oracle to read".into());
                    None
                }
            }
        }
        Local::Cyclic(w) => {
            let (lower, note) = cyclic_oracle(w, prec)?;
            report.notes.push(format!("oracle lower jumps: {lower:?}"));
            report.notes.push(note);
            (report.lower_jumps != lower).then(|| {
                format!(
                    "oracle lower jumps {lower:?}, formula {:?}",
                    report.lower_jumps
                )
            })
        }
        Local::Pair(f, g) => {
            let js = subfield_jumps(f, g, prec)?;
            report
                .notes
                .push(format!("oracle jumps of the degree-p subfields: {js:?}"));
            let set: BTreeSet<Rational64> =
                js.iter().map(|&j| Rational64::from_integer(j)).collect();
            (set != integer_jumps(&report))
                .then(|| format!("subfield jumps {js:?} do not match the upper jumps"))
        }
        Local::WittPair(v, w) => {
            let mut bad = None;
            for (label, x) in [("v", v), ("w", w)] {
                let (lower, _) = cyclic_oracle(x, prec)?;
                let p = x.ctx().characteristic() as u64;
                let up = lower_to_upper(&wildram::ramfilt::JumpProfile::lower(
                    &lower,
                    vec![p * p, p, 1],
                    wildram::ramfilt::GroupDescriptor::cyclic(p * p),
                )?)?;
                report.notes.push(format!(
                    "oracle upper jumps of {label}: {}",
                    up.jumps()
                        .iter()
                        .map(|j| j.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                ));
                let all = integer_jumps(&report);
                if !report.upper_jumps.is_empty() && !up.jumps().iter().all(|j| all.contains(j)) {
                    bad = Some(format!(
                        "upper jumps of {label} are missing from the compositum"
                    ));
                }
            }
            bad
        }
    };
    report.status = match (report.status, mismatch) {
        (_, Some(m)) => Status::DiscrepancyFlag(format!("oracle disagrees: {m}")),
        (Status::FormulaOnly, None) => Status::OracleConfirmed,
        (other, None) => {
            report
                .notes
                .push("oracle agrees with the reported jumps".into());
            other
        }
    };
    Ok(report)
}

pub fn run(job: &JobSpec, command: Command, prec: PrecPolicy) -> Result<RamReport, RunError> {
    let (data, cover) = local(job)?;
    let report = match command {
        Command::Reduce => {
            let mut r = jumps(&data, cover.as_ref())?;
            r.notes.extend(reduction_notes(&data)?);
            r
        }
        Command::Jumps => jumps(&data, cover.as_ref())?,
        Command::Genus => {
            let c = cover.as_ref().ok_or_else(|| {
                RunError::Usage("genus needs an extension of type 'cover'".into())
            })?;
            genus_report(c)?
        }
        Command::Verify => {
            let base = match &cover {
                Some(c) => genus_report(c)?,
                None => jumps(&data, None)?,
            };
            verify(&data, base, prec)?
        }
    };
    Ok(report)
}

/// The randomized checks with `trials` cases per family, seeded by `seed`.
pub fn run_suite(trials: usize, seed: u64, prec: PrecPolicy) -> Result<Vec<Outcome>, Error> {
    let mut out = Vec::new();
    for p in [2, 3, 5, 7] {
        out.push(suite::witt_vs_ghost(p, trials, seed)?);
    }
    for p in [2, 3, 5] {
        out.push(suite::p_cyclic_oracle(p, trials, seed, prec)?);
        out.push(suite::p2_oracle_grid(p, 12, seed, prec)?);
        out.extend(suite::genus_routes(p, 15)?);
        out.extend(suite::p_cyclic_composita(p, trials, seed)?);
        out.push(suite::p2_undetermined(p)?);
    }
    out.push(suite::herbrand_round_trip(trials, seed));
    Ok(out)
}
