//! Cross-checks between independent routes, on random and exhaustive inputs.
//!
//! Each check returns an [`Outcome`] with the values it produced, so two runs
//! (for example at two working precisions) can be compared value by value.

use std::sync::Arc;

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::asreduce::{reduce_as, reduce_witt2, AsKind};
use crate::error::Result;
use crate::field::{Fe, FieldCtx};
use crate::genus::{genus_closed_form, genus_report, genus_via_rh, CoverSpec};
use crate::oracle::{oracle_p2_second_jump, oracle_p_cyclic_jump, PrecPolicy};
use crate::ramfilt::{
    classify_p_cyclic_compositum, compositum_p2, jumps_p2_cyclic, jumps_p_cyclic, Filtration,
    PCyclicCompositum,
};
use crate::report::Status;
use crate::sample;
use crate::series::{LaurentSeries, Precision};
use crate::witt::{ghost_oracle_add, ghost_oracle_sub, witt_add, witt_sub, WittVec2};

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub name: String,
    pub cases: usize,
    pub failed: usize,
    /// The first few failures.
    pub failures: Vec<String>,
    /// Values produced by the check, in order.
    pub values: Vec<i64>,
}

impl Outcome {
    pub fn new(name: impl Into<String>) -> Self {
        Outcome {
            name: name.into(),
            cases: 0,
            failed: 0,
            failures: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < 8 {
                self.failures.push(detail());
            }
        }
    }

    /// Record a case whose computation may itself fail.
    pub fn attempt(&mut self, what: impl Fn() -> String, run: impl FnOnce() -> Result<bool>) {
        match run() {
            Ok(ok) => self.record(ok, what),
            Err(e) => self.record(false, || format!("{}: {e}", what())),
        }
    }

    pub fn passed(&self) -> bool {
        self.cases > 0 && self.failed == 0
    }

    pub fn merge(mut self, other: Outcome) -> Outcome {
        self.cases += other.cases;
        self.failed += other.failed;
        self.failures.extend(other.failures);
        self.failures.truncate(8);
        self.values.extend(other.values);
        self
    }
}

fn rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn coprime(p: i64, max: i64) -> impl Iterator<Item = i64> {
    (1..=max).filter(move |n| n % p != 0)
}

fn random_coprime<R: Rng>(rng: &mut R, p: i64, lo: i64, hi: i64) -> i64 {
    loop {
        let n = rng.gen_range(lo..=hi);
        if n % p != 0 {
            return n;
        }
    }
}

/// An element of `F_{p^2}` outside `F_p`.
fn non_prime(k: &FieldCtx) -> Fe {
    k.elements()
        .find(|&x| !k.is_in_prime_field(x))
        .expect("proper extension")
}

fn monomial(k: &Arc<FieldCtx>, c: Fe, e: i64) -> LaurentSeries {
    LaurentSeries::monomial(k, c, e)
}

/// `witt_add`/`witt_sub` against the ghost-component route, half the cases
/// over `F_p` and half over `F_{p^2}`, with independent component precisions.
pub fn witt_vs_ghost(p: u32, count: usize, seed: u64) -> Result<Outcome> {
    let fields = [FieldCtx::prime(p)?, FieldCtx::new(p, 2)?];
    let mut rng = rng(seed, 1000 + p as u64);
    let mut out = Outcome::new(format!("witt vs ghost, p={p}"));
    for i in 0..count {
        let k = &fields[i % 2];
        let vector = |rng: &mut ChaCha8Rng| {
            let component = |rng: &mut ChaCha8Rng| {
                let depth = rng.gen_range(0..6);
                let prec = rng.gen_range(1..7);
                sample::series(k, rng, -depth, prec)
            };
            let c0 = component(rng);
            let c1 = component(rng);
            WittVec2::new(c0, c1).expect("same field")
        };
        let a = vector(&mut rng);
        let b = vector(&mut rng);
        out.attempt(
            || format!("a = {a}, b = {b}"),
            || {
                Ok(witt_add(&a, &b)? == ghost_oracle_add(&a, &b)?
                    && witt_sub(&a, &b)? == ghost_oracle_sub(&a, &b)?)
            },
        );
    }
    Ok(out)
}

/// The series oracle against the reduced pole order for random Artin-Schreier
/// elements, at the given precision and at twice that precision.
pub fn p_cyclic_oracle(p: u32, count: usize, seed: u64, prec: PrecPolicy) -> Result<Outcome> {
    let k = FieldCtx::prime(p)?;
    let pi = p as i64;
    let mut rng = rng(seed, 2000 + p as u64);
    let mut out = Outcome::new(format!("p-cyclic oracle, p={p}"));
    for _ in 0..count {
        let n = random_coprime(&mut rng, pi, 1, 15);
        let clean = sample::standard_form(&k, &mut rng, n, 1);
        let depth = rng.gen_range(0..=6);
        let f = clean.add(&sample::artin_schreier_noise(&k, &mut rng, depth, 1))?;
        let mut got = (0, 0);
        out.attempt(
            || format!("f = {f}"),
            || {
                let r = reduce_as(&f)?;
                let formula = jumps_p_cyclic(&r)?.lower_jumps()[0];
                got = (
                    oracle_p_cyclic_jump(&r, prec.resolve(pi, n, 0))?,
                    oracle_p_cyclic_jump(&r, prec.doubled().resolve(pi, n, 0))?,
                );
                Ok(r.f_red == clean && formula == n && got == (n, n))
            },
        );
        out.values.push(got.0);
    }
    Ok(out)
}

/// Every reduced pair `(n0, n1)` up to `max_n`: the series oracle for the
/// second lower jump against the case split of the jump formula.
pub fn p2_oracle_grid(p: u32, max_n: i64, seed: u64, prec: PrecPolicy) -> Result<Outcome> {
    let k = FieldCtx::prime(p)?;
    let pi = p as i64;
    let mut rng = rng(seed, 3000 + p as u64);
    let mut out = Outcome::new(format!("p^2 oracle grid, p={p}"));
    for n0 in coprime(pi, max_n) {
        for n1 in coprime(pi, max_n) {
            let v = WittVec2::new(
                sample::standard_form(&k, &mut rng, n0, 1),
                sample::standard_form(&k, &mut rng, n1, 1),
            )?;
            let mut got = 0;
            out.attempt(
                || format!("(n0, n1) = ({n0}, {n1}), v = {v}"),
                || {
                    let r = reduce_witt2(&v)?;
                    let formula = jumps_p2_cyclic(&r)?.lower_jumps()[1];
                    got = oracle_p2_second_jump(&r, prec.resolve(pi, n0, n1))?;
                    let again = oracle_p2_second_jump(&r, prec.doubled().resolve(pi, n0, n1))?;
                    Ok(r.pole_orders() == Some((n0, n1)) && got == formula && again == got)
                },
            );
            out.values.push(got);
        }
    }
    Ok(out)
}

fn x_poly(k: &Arc<FieldCtx>, terms: &[(i64, Fe)]) -> LaurentSeries {
    LaurentSeries::from_terms(k, terms, Precision::Exact)
}

/// Closed forms against Riemann-Hurwitz for all covers with pole orders up
/// to `max_pole`. The drop case of the closed form is expected to be flagged.
pub fn genus_routes(p: u32, max_pole: i64) -> Result<Vec<Outcome>> {
    let k = FieldCtx::prime(p)?;
    let k2 = FieldCtx::new(p, 2)?;
    let pi = p as i64;
    let one = k.one();
    let mut cyclic_p = Outcome::new(format!("genus p-cyclic, p={p}"));
    let mut cyclic_p2 = Outcome::new(format!("genus Z/p^2, p={p}"));
    let mut distinct = Outcome::new(format!("genus (Z/p)^2 n0 < n1, p={p}"));
    let mut no_drop = Outcome::new(format!("genus (Z/p)^2 n0 = n1, p={p}"));
    let mut dropped = Outcome::new(format!("genus (Z/p)^2 drop, flagged, p={p}"));

    for r in coprime(pi, max_pole) {
        let c = CoverSpec::p_cyclic(&x_poly(&k, &[(r, one)]))?;
        let g = genus_via_rh(&c)?;
        let closed = genus_closed_form(&c)?.genus();
        cyclic_p.record(closed == Some(g) && 2 * g == (pi - 1) * (r - 1), || {
            format!("r = {r}: closed {closed:?}, rh {g}")
        });
        cyclic_p.values.push(g);
    }

    for n0 in coprime(pi, max_pole) {
        let mut prev: Option<(bool, i64)> = None;
        for n1 in std::iter::once(0).chain(coprime(pi, max_pole)) {
            let a1 = if n1 == 0 {
                LaurentSeries::exact_zero(&k)
            } else {
                x_poly(&k, &[(n1, one)])
            };
            let c = CoverSpec::cyclic_p2(&x_poly(&k, &[(n0, one)]), &a1)?;
            let g = genus_via_rh(&c)?;
            let closed = genus_closed_form(&c)?.genus();
            let branch = n1 > pi * n0;
            let monotone = match prev {
                Some((b, h)) if b == branch => h <= g,
                _ => true,
            };
            prev = Some((branch, g));
            cyclic_p2.record(closed == Some(g) && monotone, || {
                format!("(n0, n1) = ({n0}, {n1}): closed {closed:?}, rh {g}")
            });
            cyclic_p2.values.push(g);
        }
    }

    for n0 in coprime(pi, max_pole) {
        let mut prev = None;
        for n1 in coprime(pi, max_pole).filter(|&n| n > n0) {
            let c = CoverSpec::elementary_p2(&x_poly(&k, &[(n0, one)]), &x_poly(&k, &[(n1, one)]))?;
            let g = genus_via_rh(&c)?;
            let closed = genus_closed_form(&c)?.genus();
            let monotone = prev.is_none_or(|h| h <= g);
            prev = Some(g);
            distinct.record(closed == Some(g) && monotone, || {
                format!("(n0, n1) = ({n0}, {n1}): closed {closed:?}, rh {g}")
            });
            distinct.values.push(g);
        }
    }

    let w = non_prime(&k2);
    for n in coprime(pi, max_pole) {
        let c = CoverSpec::elementary_p2(&x_poly(&k2, &[(n, k2.one())]), &x_poly(&k2, &[(n, w)]))?;
        let g = genus_via_rh(&c)?;
        let closed = genus_closed_form(&c)?.genus();
        no_drop.record(closed == Some(g), || {
            format!("n = {n}: closed {closed:?}, rh {g}")
        });
        no_drop.values.push(g);
    }

    let minus = k.neg(one);
    for n in coprime(pi, max_pole) {
        for l in coprime(pi, n - 1) {
            let c = CoverSpec::elementary_p2(
                &x_poly(&k, &[(n, one)]),
                &x_poly(&k, &[(l, one), (n, minus)]),
            )?;
            let twice = (n - 1) * pi * pi - (n - l) * pi - l + 1;
            let expect = twice / 2;
            let rep = genus_report(&c)?;
            let flagged = matches!(rep.status, Status::DiscrepancyFlag(_));
            let both = rep.notes.iter().any(|s| s.starts_with("closed form:"))
                && rep
                    .notes
                    .iter()
                    .any(|s| s == &format!("Riemann-Hurwitz: {expect}"));
            dropped.record(
                twice % 2 == 0 && flagged && both && rep.genus == Some(expect),
                || format!("(n, l) = ({n}, {l}): {:?} {:?}", rep.genus, rep.status),
            );
            dropped.values.push(rep.genus.unwrap_or(-1));
        }
    }
    Ok(vec![cyclic_p, cyclic_p2, distinct, no_drop, dropped])
}

/// Lower to upper and back, and `ψ ∘ φ`, on random profiles.
pub fn herbrand_round_trip(count: usize, seed: u64) -> Outcome {
    let mut rng = rng(seed, 4000);
    let mut out = Outcome::new("Herbrand round trip");
    for i in 0..count {
        let p = [2u64, 3, 5][i % 3];
        let lo = sample::lower_profile(&mut rng, p, 4);
        let v = Rational64::new(rng.gen_range(0..400), rng.gen_range(1..7));
        let snapshot = lo.clone();
        out.attempt(
            || format!("{snapshot:?}, v = {v}"),
            || {
                let up = lo.lower_to_upper()?;
                let back = up.upper_to_lower()?;
                let w = lo.herbrand_phi(v)?;
                Ok(back == lo && lo.herbrand_psi(w)? == v && up.herbrand_phi(v)? == w)
            },
        );
    }
    out
}

/// `Σ_H (p−1)(jump(K(γ_H)/K) + 1)` over the `p + 1` degree-`p` subfields:
/// the different degree by the conductor-discriminant formula.
fn conductor_sum(f: &LaurentSeries, g: &LaurentSeries) -> Result<Option<i64>> {
    let p = f.ctx().characteristic() as i64;
    let mut total = 0;
    let mut gens = vec![g.clone()];
    for a in 0..p {
        gens.push(f.add(&g.scale_int(a))?);
    }
    for h in gens {
        match reduce_as(&h)?.kind {
            AsKind::WildReduced { n } => total += (p - 1) * (n + 1),
            _ => return Ok(None),
        }
    }
    Ok(Some(total))
}

fn structural(filt: &Filtration, p: u64) -> bool {
    let order = filt.lower.orders()[0];
    let mut log = 0;
    let mut m = order;
    while m > 1 {
        m /= p;
        log += 1;
    }
    let up = filt.upper.jumps();
    up.len() <= log
        && up.first() == filt.lower.jumps().first()
        && filt.lower.jumps().iter().all(|j| j.is_integer())
}

/// The three cases of the elementary compositum on constructed inputs; case
/// 3 is split into the drop and no-drop branches.
pub fn p_cyclic_composita(p: u32, per_case: usize, seed: u64) -> Result<Vec<Outcome>> {
    let k = FieldCtx::prime(p)?;
    let k2 = FieldCtx::new(p, 2)?;
    let pi = p as i64;
    let pu = p as u64;
    let mut rng = rng(seed, 5000 + p as u64);
    let mut case1 = Outcome::new(format!("compositum case 1, p={p}"));
    let mut case2 = Outcome::new(format!("compositum case 2, p={p}"));
    let mut case3a = Outcome::new(format!("compositum case 3 drop, p={p}"));
    let mut case3b = Outcome::new(format!("compositum case 3 no drop, p={p}"));
    let n = 1;
    let noise = |k: &Arc<FieldCtx>, rng: &mut ChaCha8Rng| {
        let d = rng.gen_range(0..=4);
        sample::artin_schreier_noise(k, rng, d, n)
    };
    let rat = |v: &[i64]| {
        v.iter()
            .map(|&x| Rational64::from_integer(x))
            .collect::<Vec<_>>()
    };

    for _ in 0..per_case {
        let i = random_coprime(&mut rng, pi, 1, 12);
        let j = loop {
            let j = random_coprime(&mut rng, pi, 1, 12);
            if j != i {
                break j;
            }
        };
        let f = sample::standard_form(&k, &mut rng, i, n).add(&noise(&k, &mut rng))?;
        let g = sample::standard_form(&k, &mut rng, j, n).add(&noise(&k, &mut rng))?;
        case1.attempt(
            || format!("f = {f}, g = {g}"),
            || {
                let class = classify_p_cyclic_compositum(&f, &g)?;
                let filt = class.filtration(pu)?;
                let (a, b) = (i.min(j), i.max(j));
                Ok(class == PCyclicCompositum::Distinct { i: a, j: b }
                    && filt.upper.jumps() == rat(&[a, b]).as_slice()
                    && filt.lower_jumps() == vec![a, a + pi * (b - a)]
                    && structural(&filt, pu)
                    && conductor_sum(&f, &g)? == Some(filt.different_degree()))
            },
        );
    }

    for _ in 0..per_case {
        let i = random_coprime(&mut rng, pi, 1, 12);
        let a = rng.gen_range(1..pi);
        let clean = sample::standard_form(&k, &mut rng, i, n);
        let f = clean.add(&noise(&k, &mut rng))?;
        let inv_a = k.inv(k.from_int(a))?;
        let g = clean
            .scale(k.neg(inv_a))
            .add(&LaurentSeries::constant(&k, k.trace_one()).truncate(n))?
            .add(&noise(&k, &mut rng))?;
        case2.attempt(
            || format!("f = {f}, g = {g}"),
            || {
                let class = classify_p_cyclic_compositum(&f, &g)?;
                let filt = class.filtration(pu)?;
                Ok(
                    matches!(class, PCyclicCompositum::NotTotallyRamified { i: ci, .. } if ci == i)
                        && filt.upper.jumps() == rat(&[i]).as_slice()
                        && filt.lower.orders() == [pu, 1]
                        && structural(&filt, pu),
                )
            },
        );
    }

    for _ in 0..per_case {
        let i = random_coprime(&mut rng, pi, 2, 12);
        let l = random_coprime(&mut rng, pi, 1, i - 1);
        let a = rng.gen_range(1..pi);
        let clean = sample::standard_form(&k, &mut rng, i, n);
        let h = sample::standard_form(&k, &mut rng, l, n);
        let f = clean.add(&noise(&k, &mut rng))?;
        let inv_a = k.inv(k.from_int(a))?;
        let g = h.sub(&clean)?.scale(inv_a).add(&noise(&k, &mut rng))?;
        case3a.attempt(
            || format!("f = {f}, g = {g}"),
            || {
                let class = classify_p_cyclic_compositum(&f, &g)?;
                let filt = class.filtration(pu)?;
                Ok(matches!(class, PCyclicCompositum::Drop { i: ci, l: cl, .. } if ci == i && cl == l)
                    && filt.upper.jumps() == rat(&[l, i]).as_slice()
                    && structural(&filt, pu)
                    && conductor_sum(&f, &g)? == Some(filt.different_degree()))
            },
        );
    }

    // i-th powers of F_{p^2}^* must not all lie in F_p^*, or no leading ratio escapes F_p
    for _ in 0..per_case {
        let i = loop {
            let i = random_coprime(&mut rng, pi, 1, 12);
            if k2
                .elements()
                .any(|x| !k2.is_in_prime_field(k2.pow(x, i as u64)))
            {
                break i;
            }
        };
        let f = sample::standard_form(&k2, &mut rng, i, n);
        let g = loop {
            let g = sample::standard_form(&k2, &mut rng, i, n);
            let ratio = k2.div(g.coeff(-i), f.coeff(-i))?;
            if !k2.is_in_prime_field(ratio) {
                break g;
            }
        };
        let f = f.add(&noise(&k2, &mut rng))?;
        let g = g.add(&noise(&k2, &mut rng))?;
        case3b.attempt(
            || format!("f = {f}, g = {g}"),
            || {
                let class = classify_p_cyclic_compositum(&f, &g)?;
                let filt = class.filtration(pu)?;
                Ok(class == PCyclicCompositum::NoDrop { i }
                    && filt.upper.jumps() == rat(&[i]).as_slice()
                    && filt.lower.orders() == [pu * pu, 1]
                    && structural(&filt, pu)
                    && conductor_sum(&f, &g)? == Some(filt.different_degree()))
            },
        );
    }
    Ok(vec![case1, case2, case3a, case3b])
}

/// Degree-`p²` composita built to violate the hypotheses that determine the
/// filtration; each must come back Undetermined.
pub fn p2_undetermined_inputs(p: u32) -> Result<Vec<(String, WittVec2, WittVec2)>> {
    let k = FieldCtx::prime(p)?;
    let k2 = FieldCtx::new(p, 2)?;
    let pi = p as i64;
    let m = pi * (pi + 1) + 1;
    let one = k.one();
    let mono = |k: &Arc<FieldCtx>, c: Fe, e: i64| monomial(k, c, e);
    let w = non_prime(&k2);
    Ok(vec![
        (
            "disjoint, u0 != v0, u1 = v1".into(),
            WittVec2::new(mono(&k, one, -1), mono(&k, one, -m))?,
            WittVec2::new(mono(&k, one, -(pi + 1)), mono(&k, one, -m))?,
        ),
        (
            "disjoint, u0 = v0, u1 = v1".into(),
            WittVec2::new(mono(&k2, k2.one(), -1), mono(&k2, k2.one(), -m))?,
            WittVec2::new(mono(&k2, w, -1), mono(&k2, k2.one(), -m))?,
        ),
        (
            "shared subfield, alpha1 - c*beta1 hits u0".into(),
            WittVec2::new(
                mono(&k, one, -1),
                mono(&k, one, -m)
                    .add(&mono(&k, one, -1))?
                    .add(&mono(&k, k.trace_one(), 0))?,
            )?,
            WittVec2::new(mono(&k, one, -1), mono(&k, one, -m))?,
        ),
        (
            "shared subfield, alpha1 - c*beta1 hits u1".into(),
            WittVec2::new(mono(&k2, k2.one(), -1), mono(&k2, w, -m))?,
            WittVec2::new(mono(&k2, k2.one(), -1), mono(&k2, k2.one(), -m))?,
        ),
    ])
}

pub fn p2_undetermined(p: u32) -> Result<Outcome> {
    let mut out = Outcome::new(format!("p^2 composita outside the hypotheses, p={p}"));
    for (label, v, w) in p2_undetermined_inputs(p)? {
        out.attempt(
            || label.clone(),
            || {
                Ok(matches!(
                    compositum_p2(&v, &w)?.status,
                    Status::Undetermined(_)
                ))
            },
        );
    }
    Ok(out)
}
