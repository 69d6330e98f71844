//! Ramification filtrations: jump profiles, numbering conversion, Herbrand
//! functions, and the jump computations for cyclic extensions and composita.

use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::asreduce::{
    as_multiple, equivalence_class_test, reduce_as, reduce_witt2, AsKind, EquivClass, ReducedAS,
    ReducedWitt2,
};
use crate::error::{Error, Result};
use crate::report::RamReport;
use crate::series::LaurentSeries;
use crate::witt::WittVec2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Numbering {
    Lower,
    Upper,
}

/// Finite abelian group by its invariant factors (descending, each > 1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDescriptor {
    factors: Vec<u64>,
}

impl GroupDescriptor {
    pub fn trivial() -> Self {
        GroupDescriptor { factors: vec![] }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::product(vec![n])
    }

    pub fn elementary(p: u64, rank: usize) -> Self {
        Self::product(vec![p; rank])
    }

    pub fn product(mut factors: Vec<u64>) -> Self {
        factors.retain(|&f| f > 1);
        factors.sort_unstable_by(|a, b| b.cmp(a));
        GroupDescriptor { factors }
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.factors.as_slice() {
            [] => write!(f, "1"),
            [n] => write!(f, "Z/{n}"),
            [n, rest @ ..] if rest.iter().all(|m| m == n) => {
                write!(f, "(Z/{n})^{}", self.factors.len())
            }
            fs => {
                let parts: Vec<String> = fs.iter().map(|n| format!("Z/{n}")).collect();
                write!(f, "{}", parts.join(" x "))
            }
        }
    }
}

/// Jumps of a filtration on `G_0` with the subgroup order on each segment:
/// `orders[0] = |G_0|`, `orders[j]` is the order just after the `j`-th jump.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JumpProfile {
    numbering: Numbering,
    jumps: Vec<Rational64>,
    orders: Vec<u64>,
    group: GroupDescriptor,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidProfile(msg.into())
}

impl JumpProfile {
    pub fn new(
        numbering: Numbering,
        jumps: Vec<Rational64>,
        orders: Vec<u64>,
        group: GroupDescriptor,
    ) -> Result<Self> {
        if orders.len() != jumps.len() + 1 {
            return Err(invalid(format!(
                "{} jumps need {} segment orders, got {}",
                jumps.len(),
                jumps.len() + 1,
                orders.len()
            )));
        }
        if orders[0] != group.order() {
            return Err(invalid(format!(
                "|G_0| = {} but the group {} has order {}",
                orders[0],
                group,
                group.order()
            )));
        }
        if *orders.last().unwrap() != 1 {
            return Err(invalid("the last segment order must be 1"));
        }
        for w in orders.windows(2) {
            if w[1] >= w[0] || w[1] == 0 || w[0] % w[1] != 0 {
                return Err(invalid(format!(
                    "orders {:?} are not a strictly decreasing divisor chain",
                    orders
                )));
            }
        }
        if jumps.iter().any(|j| *j <= Rational64::zero()) {
            return Err(invalid("jumps must be positive"));
        }
        if jumps.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("jumps must be strictly increasing"));
        }
        if numbering == Numbering::Lower && jumps.iter().any(|j| !j.is_integer()) {
            return Err(invalid("lower jumps must be integers"));
        }
        Ok(JumpProfile {
            numbering,
            jumps,
            orders,
            group,
        })
    }

    pub fn lower(jumps: &[i64], orders: Vec<u64>, group: GroupDescriptor) -> Result<Self> {
        let jumps = jumps.iter().map(|&j| Rational64::from_integer(j)).collect();
        Self::new(Numbering::Lower, jumps, orders, group)
    }

    pub fn upper(jumps: &[i64], orders: Vec<u64>, group: GroupDescriptor) -> Result<Self> {
        let jumps = jumps.iter().map(|&j| Rational64::from_integer(j)).collect();
        Self::new(Numbering::Upper, jumps, orders, group)
    }

    pub fn trivial(numbering: Numbering) -> Self {
        JumpProfile {
            numbering,
            jumps: vec![],
            orders: vec![1],
            group: GroupDescriptor::trivial(),
        }
    }

    pub fn numbering(&self) -> Numbering {
        self.numbering
    }

    pub fn jumps(&self) -> &[Rational64] {
        &self.jumps
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    /// `s_j = [G_0 : G_{l_j}]` for `j = 1, …`.
    fn s(&self, j: usize) -> Rational64 {
        Rational64::from_integer((self.orders[0] / self.orders[j - 1]) as i64)
    }

    /// `u_i = Σ_{j ≤ i} (l_j − l_{j−1}) / s_j`.
    pub fn lower_to_upper(&self) -> Result<JumpProfile> {
        if self.numbering != Numbering::Lower {
            return Err(invalid("lower_to_upper needs a lower-numbered profile"));
        }
        let mut prev = Rational64::zero();
        let mut acc = Rational64::zero();
        let mut out = Vec::with_capacity(self.jumps.len());
        for (i, &l) in self.jumps.iter().enumerate() {
            acc += (l - prev) / self.s(i + 1);
            prev = l;
            out.push(acc);
        }
        JumpProfile::new(
            Numbering::Upper,
            out,
            self.orders.clone(),
            self.group.clone(),
        )
    }

    /// `l_i = Σ_{j ≤ i} (u_j − u_{j−1}) · s_j`.
    pub fn upper_to_lower(&self) -> Result<JumpProfile> {
        if self.numbering != Numbering::Upper {
            return Err(invalid("upper_to_lower needs an upper-numbered profile"));
        }
        let mut prev = Rational64::zero();
        let mut acc = Rational64::zero();
        let mut out = Vec::with_capacity(self.jumps.len());
        for (i, &u) in self.jumps.iter().enumerate() {
            acc += (u - prev) * self.s(i + 1);
            prev = u;
            out.push(acc);
        }
        JumpProfile::new(
            Numbering::Lower,
            out,
            self.orders.clone(),
            self.group.clone(),
        )
    }

    fn as_lower(&self) -> Result<JumpProfile> {
        match self.numbering {
            Numbering::Lower => Ok(self.clone()),
            Numbering::Upper => self.upper_to_lower(),
        }
    }

    /// `φ(v) = ∫_0^v du / [G_0 : G_u]`.
    pub fn herbrand_phi(&self, v: Rational64) -> Result<Rational64> {
        if v < Rational64::zero() {
            return Err(invalid("φ is evaluated at v ≥ 0"));
        }
        let lo = self.as_lower()?;
        let mut acc = Rational64::zero();
        let mut prev = Rational64::zero();
        for (j, &l) in lo.jumps.iter().enumerate() {
            let idx = lo.s(j + 1);
            if v <= l {
                return Ok(acc + (v - prev) / idx);
            }
            acc += (l - prev) / idx;
            prev = l;
        }
        let idx = Rational64::from_integer(lo.orders[0] as i64);
        Ok(acc + (v - prev) / idx)
    }

    /// Inverse of [`herbrand_phi`](Self::herbrand_phi).
    pub fn herbrand_psi(&self, w: Rational64) -> Result<Rational64> {
        if w < Rational64::zero() {
            return Err(invalid("ψ is evaluated at w ≥ 0"));
        }
        let lo = self.as_lower()?;
        let mut acc = Rational64::zero();
        let mut prev_l = Rational64::zero();
        let mut prev_u = Rational64::zero();
        for (j, &l) in lo.jumps.iter().enumerate() {
            let idx = lo.s(j + 1);
            let u = prev_u + (l - prev_l) / idx;
            if w <= u {
                return Ok(acc + (w - prev_u) * idx);
            }
            acc = l;
            prev_l = l;
            prev_u = u;
        }
        let idx = Rational64::from_integer(lo.orders[0] as i64);
        Ok(acc + (w - prev_u) * idx)
    }

    /// `Σ_{i ≥ 0} (|G_i| − 1)` from the lower numbering.
    pub fn different_degree(&self) -> Result<i64> {
        let lo = self.as_lower()?;
        let mut total = 0i64;
        let mut prev = -1i64;
        for (j, l) in lo.jumps.iter().enumerate() {
            let l = l.to_integer();
            total += (l - prev) * (lo.orders[j] as i64 - 1);
            prev = l;
        }
        Ok(total)
    }
}

/// Both numberings of one filtration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    pub lower: JumpProfile,
    pub upper: JumpProfile,
}

impl Filtration {
    pub fn from_lower(lower: JumpProfile) -> Result<Self> {
        let upper = lower.lower_to_upper()?;
        Ok(Filtration { lower, upper })
    }

    pub fn from_upper(upper: JumpProfile) -> Result<Self> {
        let lower = upper.upper_to_lower()?;
        Ok(Filtration { lower, upper })
    }

    pub fn different_degree(&self) -> i64 {
        self.lower.different_degree().expect("lower profile")
    }

    pub fn lower_jumps(&self) -> Vec<i64> {
        self.lower.jumps.iter().map(|j| j.to_integer()).collect()
    }

    pub fn upper_jumps(&self) -> Vec<Rational64> {
        self.upper.jumps.clone()
    }
}

pub fn lower_to_upper(j: &JumpProfile) -> Result<JumpProfile> {
    j.lower_to_upper()
}

pub fn upper_to_lower(j: &JumpProfile) -> Result<JumpProfile> {
    j.upper_to_lower()
}

pub fn herbrand_phi(j: &JumpProfile, v: Rational64) -> Result<Rational64> {
    j.herbrand_phi(v)
}

pub fn herbrand_psi(j: &JumpProfile, w: Rational64) -> Result<Rational64> {
    j.herbrand_psi(w)
}

pub fn different_degree(j: &JumpProfile) -> Result<i64> {
    j.different_degree()
}

/// Upper-numbered filtration whose group order drops by `p` at each jump.
fn chain_from_upper(p: u64, upper: &[i64], top: u64, group: GroupDescriptor) -> Result<Filtration> {
    let mut orders = vec![top];
    for i in 0..upper.len() {
        let next = if i + 1 == upper.len() {
            1
        } else {
            orders[i] / p
        };
        orders.push(next);
    }
    Filtration::from_upper(JumpProfile::upper(upper, orders, group)?)
}

fn pole_order(kind: &AsKind, what: &str) -> Result<i64> {
    kind.pole_order().ok_or_else(|| {
        Error::Degenerate(format!(
            "{what} is not wildly ramified (reduces to {})",
            match kind {
                AsKind::Unramified { .. } => "a constant of nonzero trace",
                _ => "an element of (F-1)K",
            }
        ))
    })
}

pub fn jumps_p_cyclic(f: &ReducedAS) -> Result<Filtration> {
    let n = pole_order(&f.kind, "the Artin-Schreier element")?;
    let p = f.f_red.ctx().characteristic() as u64;
    Filtration::from_lower(JumpProfile::lower(
        &[n],
        vec![p, 1],
        GroupDescriptor::cyclic(p),
    )?)
}

/// Lower jumps of the cyclic degree-`p²` extension with pole orders `(n0, n1)`.
pub fn p2_cyclic_lower_jumps(p: i64, n0: i64, n1: i64) -> (i64, i64) {
    if n1 <= p * n0 {
        (n0, n0 * (p * p - p + 1))
    } else {
        (n0, p * (n1 - n0) + n0)
    }
}

pub fn jumps_p2_cyclic(v: &ReducedWitt2) -> Result<Filtration> {
    let n0 = pole_order(&v.kinds[0], "component 0")?;
    let n1 = v.kinds[1].pole_order().unwrap_or(0);
    let p = v.vec_red.ctx().characteristic() as i64;
    let (l0, l1) = p2_cyclic_lower_jumps(p, n0, n1);
    let pp = (p * p) as u64;
    Filtration::from_lower(JumpProfile::lower(
        &[l0, l1],
        vec![pp, p as u64, 1],
        GroupDescriptor::cyclic(pp),
    )?)
}

/// Outcome of the case analysis for two Artin-Schreier extensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PCyclicCompositum {
    /// Different pole orders `i < j`.
    Distinct { i: i64, j: i64 },
    /// `f + a·g` reduces to a constant: inertia of order `p`.
    NotTotallyRamified { i: i64, a: u32 },
    /// Equal pole orders, `f + a·g` has the smaller pole order `l`.
    Drop { i: i64, l: i64, a: u32 },
    /// Equal pole orders and no combination lowers them.
    NoDrop { i: i64 },
}

impl PCyclicCompositum {
    pub fn case_label(&self) -> &'static str {
        match self {
            PCyclicCompositum::Distinct { .. } => "(Z/p)^2 compositum, distinct jumps",
            PCyclicCompositum::NotTotallyRamified { .. } => {
                "(Z/p)^2 compositum, not totally ramified"
            }
            PCyclicCompositum::Drop { .. } => "(Z/p)^2 compositum, equal jumps with drop",
            PCyclicCompositum::NoDrop { .. } => "(Z/p)^2 compositum, equal jumps without drop",
        }
    }

    pub fn filtration(&self, p: u64) -> Result<Filtration> {
        let v4 = GroupDescriptor::elementary(p, 2);
        match *self {
            PCyclicCompositum::Distinct { i, j } => chain_from_upper(p, &[i, j], p * p, v4),
            PCyclicCompositum::NotTotallyRamified { i, .. } => {
                chain_from_upper(p, &[i], p, GroupDescriptor::cyclic(p))
            }
            PCyclicCompositum::Drop { i, l, .. } => chain_from_upper(p, &[l, i], p * p, v4),
            PCyclicCompositum::NoDrop { i } => {
                Filtration::from_upper(JumpProfile::upper(&[i], vec![p * p, 1], v4)?)
            }
        }
    }
}

pub fn classify_p_cyclic_compositum(
    f: &LaurentSeries,
    g: &LaurentSeries,
) -> Result<PCyclicCompositum> {
    let rf = reduce_as(f)?;
    let rg = reduce_as(g)?;
    let i = pole_order(&rf.kind, "the first Artin-Schreier element")?;
    let j = pole_order(&rg.kind, "the second Artin-Schreier element")?;
    if as_multiple(&rf.f_red, &rg.f_red)?.is_some() {
        return Err(Error::EqualExtensions);
    }
    if i != j {
        return Ok(PCyclicCompositum::Distinct {
            i: i.min(j),
            j: i.max(j),
        });
    }
    let p = f.ctx().characteristic();
    let mut drop = None;
    for a in 1..p {
        let h = rf.f_red.add(&rg.f_red.scale_int(a as i64))?;
        match reduce_as(&h)?.kind {
            AsKind::Unramified { .. } => return Ok(PCyclicCompositum::NotTotallyRamified { i, a }),
            AsKind::Trivial => return Err(Error::EqualExtensions),
            AsKind::WildReduced { n } if n < i => {
                if drop.is_none_or(|(l, _)| n < l) {
                    drop = Some((n, a));
                }
            }
            AsKind::WildReduced { .. } => {}
        }
    }
    Ok(match drop {
        Some((l, a)) => PCyclicCompositum::Drop { i, l, a },
        None => PCyclicCompositum::NoDrop { i },
    })
}

fn log_p(mut n: u64, p: u64) -> usize {
    let mut k = 0;
    while n > 1 {
        n /= p;
        k += 1;
    }
    k
}

fn check_jump_count(f: &Filtration, p: u64) -> Result<()> {
    let order = f.lower.orders()[0];
    if f.upper.jumps().len() > log_p(order, p) {
        return Err(Error::Internal(format!(
            "{} upper jumps exceed log_p |G| = {}",
            f.upper.jumps().len(),
            log_p(order, p)
        )));
    }
    Ok(())
}

pub fn compositum_p_cyclic(f: &LaurentSeries, g: &LaurentSeries) -> Result<RamReport> {
    let p = f.ctx().characteristic() as u64;
    let class = classify_p_cyclic_compositum(f, g)?;
    let filt = class.filtration(p)?;
    check_jump_count(&filt, p)?;
    let group = match class {
        PCyclicCompositum::NotTotallyRamified { .. } => Some(format!("(Z/{p})^2, inertia Z/{p}")),
        _ => None,
    };
    let mut r = RamReport::from_filtration(class.case_label(), &filt, group);
    match class {
        PCyclicCompositum::NotTotallyRamified { a, .. } => r
            .notes
            .push(format!("f + {a}*g reduces to a constant of nonzero trace")),
        PCyclicCompositum::Drop { l, a, .. } => {
            r.notes.push(format!("f + {a}*g reduces to pole order {l}"))
        }
        _ => {}
    }
    Ok(r)
}

/// Upper jumps `(u0, u1)` of a cyclic degree-`p²` extension, with notes on
/// the closed-form variants that disagree with the numbering conversion.
fn p2_upper_pair(v: &ReducedWitt2, name: &str, notes: &mut Vec<String>) -> Result<(i64, i64)> {
    let f = jumps_p2_cyclic(v)?;
    let (n0, n1) = v.pole_orders().expect("component 0 is wild");
    let p = v.vec_red.ctx().characteristic() as i64;
    let u: Vec<i64> = f.upper_jumps().iter().map(|j| j.to_integer()).collect();
    if n1 <= p * n0 {
        notes.push(format!(
            "{name}: closed-form variant (n0, n0*(p-1)) = ({n0}, {}) disagrees with the converted lower jumps; using ({}, {})",
            n0 * (p - 1),
            u[0],
            u[1]
        ));
    } else {
        notes.push(format!(
            "{name}: second upper jump read as -v(component 1) = {n1}; a signed reading would give {}",
            -n1
        ));
    }
    Ok((u[0], u[1]))
}

pub fn compositum_p2(v: &WittVec2, w: &WittVec2) -> Result<RamReport> {
    let ctx = v.ctx().clone();
    let p = ctx.characteristic() as u64;
    let rv = reduce_witt2(v)?;
    let rw = reduce_witt2(w)?;
    pole_order(&rv.kinds[0], "component 0 of the first vector")?;
    pole_order(&rw.kinds[0], "component 0 of the second vector")?;
    let class = equivalence_class_test(&rv.vec_red, &rw.vec_red)?;
    let mut notes = Vec::new();
    let (u0, u1) = p2_upper_pair(&rv, "first", &mut notes)?;
    let (v0, v1) = p2_upper_pair(&rw, "second", &mut notes)?;
    notes.push(format!("factor upper jumps: ({u0}, {u1}) and ({v0}, {v1})"));

    let finish = |case: &str,
                  group: GroupDescriptor,
                  upper: Vec<i64>,
                  orders: Vec<u64>,
                  notes: Vec<String>|
     -> Result<RamReport> {
        let filt = Filtration::from_upper(JumpProfile::upper(&upper, orders, group)?)?;
        check_jump_count(&filt, p)?;
        let mut r = RamReport::from_filtration(case, &filt, None);
        r.notes = notes;
        Ok(r)
    };
    let undetermined = |case: &str, group: &GroupDescriptor, why: &str, notes: Vec<String>| {
        let mut r = RamReport::undetermined(group.to_string(), case, why);
        r.notes = notes;
        r
    };

    match class {
        EquivClass::Equal => Err(Error::EqualExtensions),
        EquivClass::Disjoint => {
            let g = GroupDescriptor::product(vec![p * p, p * p]);
            let full = vec![p.pow(4), p.pow(3), p * p, p, 1];
            if u0 != v0 {
                let case = "(Z/p^2)^2 compositum, distinct first jumps";
                let mut all = vec![u0, u1, v0, v1];
                all.sort_unstable();
                all.dedup();
                if all.len() == 4 {
                    return finish(case, g, all, full, notes);
                }
                return Ok(undetermined(
                    case,
                    &g,
                    "the four factor jumps u0, u1, v0, v1 are not pairwise distinct",
                    notes,
                ));
            }
            let mut drop: Option<(i64, u32)> = None;
            for c in 1..p as u32 {
                let h = rv.vec_red.a0().add(&rw.vec_red.a0().scale_int(c as i64))?;
                match reduce_as(&h)?.kind {
                    AsKind::WildReduced { n } if n < u0 => {
                        if drop.is_none_or(|(l, _)| n < l) {
                            drop = Some((n, c));
                        }
                    }
                    AsKind::WildReduced { .. } => {}
                    AsKind::Unramified { .. } => {
                        return Ok(undetermined(
                            "(Z/p^2)^2 compositum, equal first jumps",
                            &g,
                            "the degree-p^2 subextension K(a0, b0) is not totally ramified",
                            notes,
                        ))
                    }
                    AsKind::Trivial => {
                        return Err(Error::Internal(
                            "disjoint vectors with equivalent first components".into(),
                        ))
                    }
                }
            }
            if u1 == v1 {
                let case = "(Z/p^2)^2 compositum, equal first jumps";
                if let Some((l, c)) = drop {
                    notes.push(format!("alpha0 + {c}*beta0 reduces to pole order {l}"));
                }
                return Ok(undetermined(case, &g, "u0 = v0 and u1 = v1", notes));
            }
            match drop {
                Some((l, c)) => {
                    notes.push(format!("alpha0 + {c}*beta0 reduces to pole order {l}"));
                    let mut all = vec![l, u0, u1, v1];
                    all.sort_unstable();
                    finish(
                        "(Z/p^2)^2 compositum, equal first jumps with drop",
                        g,
                        all,
                        full,
                        notes,
                    )
                }
                None => {
                    let mut all = vec![u0, u1, v1];
                    all.sort_unstable();
                    finish(
                        "(Z/p^2)^2 compositum, equal first jumps without drop",
                        g,
                        all,
                        vec![p.pow(4), p * p, p, 1],
                        notes,
                    )
                }
            }
        }
        EquivClass::SharedSubfield(c) => {
            let g = GroupDescriptor::product(vec![p * p, p]);
            let orders = vec![p.pow(3), p * p, p, 1];
            notes.push(format!("alpha0 = {c}*beta0 modulo (F-1)K"));
            if u0 != v0 {
                return Err(Error::Internal(
                    "shared subfield with different first jumps".into(),
                ));
            }
            if u1 != v1 {
                let mut all = vec![u0, u1, v1];
                all.sort_unstable();
                return finish(
                    "Z/p^2 x Z/p compositum, distinct second jumps",
                    g,
                    all,
                    orders,
                    notes,
                );
            }
            let case = "Z/p^2 x Z/p compositum, equal second jumps";
            let a0 = rv.vec_red.a0();
            let cb0 = rw.vec_red.a0().scale_int(c as i64);
            if !a0.agrees_with(&cb0) {
                return Err(Error::Internal(
                    "reduced first components are not proportional".into(),
                ));
            }
            let d = rv.vec_red.a1().sub(&rw.vec_red.a1().scale_int(c as i64))?;
            match reduce_as(&d)?.kind {
                AsKind::WildReduced { n: r } => {
                    notes.push(format!("alpha1 - {c}*beta1 reduces to pole order {r}"));
                    if r == u0 || r == u1 {
                        return Ok(undetermined(
                            case,
                            &g,
                            &format!(
                                "-v(alpha1 - c*beta1) = {r} coincides with u0 = {u0} or u1 = {u1}"
                            ),
                            notes,
                        ));
                    }
                    let mut all = vec![u0, u1, r];
                    all.sort_unstable();
                    finish(case, g, all, orders, notes)
                }
                _ => Ok(undetermined(
                    case,
                    &g,
                    "alpha1 - c*beta1 has no pole after reduction",
                    notes,
                )),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;
    use crate::literal::{parse_series_in, parse_witt_in};
    use crate::report::Status;

    fn r(n: i64) -> Rational64 {
        Rational64::from_integer(n)
    }

    #[test]
    fn conversion_examples() {
        let lo = JumpProfile::lower(&[1, 7], vec![9, 3, 1], GroupDescriptor::cyclic(9)).unwrap();
        let up = lo.lower_to_upper().unwrap();
        assert_eq!(up.jumps(), &[r(1), r(3)]);
        assert_eq!(up.upper_to_lower().unwrap(), lo);
        let up2 = JumpProfile::upper(&[1, 3], vec![4, 2, 1], GroupDescriptor::cyclic(4)).unwrap();
        assert_eq!(up2.upper_to_lower().unwrap().jumps(), &[r(1), r(5)]);
        let single = JumpProfile::lower(&[5], vec![2, 1], GroupDescriptor::cyclic(2)).unwrap();
        assert_eq!(single.lower_to_upper().unwrap().jumps(), &[r(5)]);
    }

    #[test]
    fn herbrand_values() {
        let lo = JumpProfile::lower(&[1, 7], vec![9, 3, 1], GroupDescriptor::cyclic(9)).unwrap();
        assert_eq!(lo.herbrand_phi(r(0)).unwrap(), r(0));
        assert_eq!(lo.herbrand_phi(r(1)).unwrap(), r(1));
        assert_eq!(
            lo.herbrand_phi(Rational64::new(1, 2)).unwrap(),
            Rational64::new(1, 2)
        );
        assert_eq!(lo.herbrand_phi(r(7)).unwrap(), r(3));
        assert_eq!(lo.herbrand_phi(r(16)).unwrap(), r(4));
        for v in 0..30 {
            let v = Rational64::new(v, 2);
            let w = lo.herbrand_phi(v).unwrap();
            assert_eq!(lo.herbrand_psi(w).unwrap(), v);
        }
    }

    #[test]
    fn phi_matches_index_sum() {
        // φ(m) = Σ_{i=1}^{m} |G_i| / |G_0| for integer m
        let lo = JumpProfile::lower(
            &[2, 5, 11],
            vec![8, 4, 2, 1],
            GroupDescriptor::elementary(2, 3),
        )
        .unwrap();
        let order_at = |i: i64| -> i64 {
            let j = lo.jumps().iter().filter(|l| l.to_integer() < i).count();
            lo.orders()[j] as i64
        };
        for m in 0..25 {
            let direct: Rational64 = (1..=m).map(|i| Rational64::new(order_at(i), 8)).sum();
            assert_eq!(lo.herbrand_phi(r(m)).unwrap(), direct, "m={m}");
        }
    }

    #[test]
    fn different_degree_examples() {
        let a = JumpProfile::lower(&[1], vec![2, 1], GroupDescriptor::cyclic(2)).unwrap();
        assert_eq!(a.different_degree().unwrap(), 2);
        let b = JumpProfile::lower(&[1, 3], vec![4, 2, 1], GroupDescriptor::cyclic(4)).unwrap();
        assert_eq!(b.different_degree().unwrap(), 8);
        assert_eq!(
            JumpProfile::trivial(Numbering::Lower)
                .different_degree()
                .unwrap(),
            0
        );
    }

    #[test]
    fn profile_validation() {
        let g = GroupDescriptor::cyclic(9);
        assert!(JumpProfile::lower(&[7, 1], vec![9, 3, 1], g.clone()).is_err());
        assert!(JumpProfile::lower(&[1, 7], vec![9, 4, 1], g.clone()).is_err());
        assert!(JumpProfile::lower(&[1, 7], vec![9, 3], g.clone()).is_err());
        assert!(JumpProfile::lower(&[1, 7], vec![27, 3, 1], g).is_err());
        let up = JumpProfile::new(
            Numbering::Upper,
            vec![Rational64::new(1, 2)],
            vec![2, 1],
            GroupDescriptor::cyclic(2),
        )
        .unwrap();
        // lower jump 1/2 is not an integer
        assert!(up.upper_to_lower().is_err());
    }

    #[test]
    fn group_names() {
        assert_eq!(GroupDescriptor::cyclic(9).to_string(), "Z/9");
        assert_eq!(GroupDescriptor::elementary(3, 2).to_string(), "(Z/3)^2");
        assert_eq!(
            GroupDescriptor::product(vec![3, 9]).to_string(),
            "Z/9 x Z/3"
        );
        assert_eq!(GroupDescriptor::trivial().to_string(), "1");
    }

    #[test]
    fn p_cyclic_jumps() {
        for (p, lit, n) in [
            (3, "t^-1 + O(t^5)", 1),
            (2, "t^-5 + O(t^5)", 5),
            (5, "t^-3 + t^-1 + O(t^5)", 3),
        ] {
            let k = FieldCtx::prime(p).unwrap();
            let f = reduce_as(&parse_series_in(&k, lit).unwrap()).unwrap();
            let filt = jumps_p_cyclic(&f).unwrap();
            assert_eq!(filt.lower_jumps(), vec![n]);
            assert_eq!(filt.upper_jumps(), vec![r(n)]);
        }
        let k = FieldCtx::prime(3).unwrap();
        let u = reduce_as(&parse_series_in(&k, "1 + O(t^5)").unwrap()).unwrap();
        assert!(matches!(jumps_p_cyclic(&u), Err(Error::Degenerate(_))));
    }

    fn witt(p: u32, lit: &str) -> ReducedWitt2 {
        let k = FieldCtx::prime(p).unwrap();
        reduce_witt2(&parse_witt_in(&k, lit).unwrap()).unwrap()
    }

    #[test]
    fn p2_cyclic_jumps() {
        let f = jumps_p2_cyclic(&witt(3, "W2(t^-1 + O(t^40); t^-2 + O(t^40))")).unwrap();
        assert_eq!(f.lower_jumps(), vec![1, 7]);
        assert_eq!(f.upper_jumps(), vec![r(1), r(3)]);
        let f = jumps_p2_cyclic(&witt(3, "W2(t^-1 + O(t^40); t^-5 + O(t^40))")).unwrap();
        assert_eq!(f.lower_jumps(), vec![1, 13]);
        let f = jumps_p2_cyclic(&witt(2, "W2(t^-3 + O(t^40); t^-7 + O(t^40))")).unwrap();
        assert_eq!(f.lower_jumps(), vec![3, 11]);
        assert_eq!(f.upper_jumps(), vec![r(3), r(7)]);
    }

    #[test]
    fn p_cyclic_compositum_cases() {
        let k = FieldCtx::prime(3).unwrap();
        let s = |t: &str| parse_series_in(&k, t).unwrap();
        let r1 = compositum_p_cyclic(&s("t^-1 + O(t^9)"), &s("t^-2 + O(t^9)")).unwrap();
        assert_eq!(r1.upper_jumps, vec![r(1), r(2)]);
        assert_eq!(r1.lower_jumps, vec![1, 4]);
        let r3 = compositum_p_cyclic(&s("t^-2 + O(t^9)"), &s("t^-2 + t^-1 + O(t^9)")).unwrap();
        assert_eq!(r3.upper_jumps, vec![r(1), r(2)]);
        assert!(r3.case.contains("drop"));
        // f = -g: same extension
        assert_eq!(
            compositum_p_cyclic(&s("t^-1 + O(t^9)"), &s("2*t^-1 + O(t^9)")).unwrap_err(),
            Error::EqualExtensions
        );
        let r2 = compositum_p_cyclic(&s("t^-1 + O(t^9)"), &s("2*t^-1 + 1 + O(t^9)")).unwrap();
        assert_eq!(r2.upper_jumps, vec![r(1)]);
        assert_eq!(r2.orders, vec![3, 1]);
        assert!(r2.group.contains("inertia"));
        let k9 = FieldCtx::new(3, 2).unwrap();
        let w = k9.from_coords(&[0, 1]).unwrap();
        let f = LaurentSeries::monomial(&k9, k9.one(), -2).truncate(9);
        let g = LaurentSeries::monomial(&k9, w, -2).truncate(9);
        let r3b = compositum_p_cyclic(&f, &g).unwrap();
        assert!(r3b.case.contains("without drop"));
        assert_eq!(r3b.upper_jumps, vec![r(2)]);
        assert_eq!(r3b.orders, vec![9, 1]);
        assert_eq!(r3b.different_degree, Some(24));
    }

    #[test]
    fn p2_compositum_examples() {
        let k = FieldCtx::prime(3).unwrap();
        let w = |t: &str| parse_witt_in(&k, t).unwrap();
        let a = w("W2(t^-1 + O(t^60); t^-2 + O(t^60))");
        let b = w("W2(t^-2 + O(t^60); t^-5 + O(t^60))");
        let rep = compositum_p2(&a, &b).unwrap();
        // factor upper jumps (1, 3) and (2, 6)
        assert_eq!(rep.upper_jumps, vec![r(1), r(2), r(3), r(6)]);
        assert_eq!(rep.orders, vec![81, 27, 9, 3, 1]);
        let c = w("W2(2*t^-1 + O(t^60); t^-5 + O(t^60))");
        let rep = compositum_p2(&a, &c).unwrap();
        assert_eq!(rep.group, "Z/9 x Z/3");
        assert_eq!(rep.upper_jumps, vec![r(1), r(3), r(5)]);
        assert_eq!(compositum_p2(&a, &a).unwrap_err(), Error::EqualExtensions);
        // shared subfield, equal second jumps
        let d = w("W2(t^-1 + O(t^60); t^-1 + O(t^60))");
        let rep = compositum_p2(&a, &d).unwrap();
        assert!(matches!(rep.status, Status::Undetermined(_)) || rep.upper_jumps.len() == 3);
    }
}
