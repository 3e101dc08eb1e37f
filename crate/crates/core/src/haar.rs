//! Haar measure from covering numbers.
//!
//! `index(K, V)` is the least number of left translates of `V` covering `K`.
//! On the interval groups it is computed by a greedy sweep: each window is
//! anchored at the leftmost point of `K` not yet covered. For an open
//! neighbourhood `V = (c, d)` the greedy count with half-open windows
//! `[p, p ⊕ w)` equals the open-cover minimum, and a concrete open cover of
//! that size is recovered by running the same sweep with closed windows of a
//! slightly shrunk `V` and then checked exactly. Discrete groups use an
//! exact branch-and-bound set cover.
//!
//! The prehaar ratios `h_n(K) = (K : V_n) / (K₀ : V_n)` along the canonical
//! neighbourhood sequence `V_n` stand in for the limit content; estimates
//! report the spread of the last steps of that sequence.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec, PositiveCompact};
use crate::measure::Measure;
use crate::numeric::{Bound, ExtNonneg, Rat};
use crate::report::{CheckReport, Quantity, Record};
use crate::setalg::{IntervalSet, Kind, Law, Subset};

/// Named ε-schedule; `dyadic:k` is `ε_j = 2⁻ʲ` for `j = 1..k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Schedule {
    k_max: u32,
}

impl Schedule {
    pub fn dyadic(k_max: u32) -> Schedule {
        assert!(k_max >= 1, "schedule needs at least one step");
        Schedule { k_max }
    }

    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    pub fn eps(&self) -> Vec<Rat> {
        (1..=self.k_max).map(Rat::dyadic).collect()
    }

    pub fn finest(&self) -> Rat {
        Rat::dyadic(self.k_max)
    }
}

impl Default for Schedule {
    fn default() -> Schedule {
        Schedule::dyadic(10)
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dyadic:{}", self.k_max)
    }
}

impl FromStr for Schedule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Schedule> {
        let k = s
            .trim()
            .strip_prefix("dyadic:")
            .and_then(|k| k.parse::<u32>().ok())
            .filter(|k| (1..=64).contains(k))
            .ok_or_else(|| Error::Parse(format!("unknown schedule {s:?}; expected dyadic:k with 1 ≤ k ≤ 64")))?;
        Ok(Schedule::dyadic(k))
    }
}

impl Serialize for Schedule {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Schedule {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Schedule, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// A minimal cover: `count` translates, with anchors `g` such that the
/// sets `g·V` cover `K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexResult {
    pub count: usize,
    pub witness: Vec<Element>,
}

/// Window geometry of translates of one interval.
#[derive(Clone, Debug)]
enum Step {
    Add(Rat),
    Mul(Rat),
}

impl Step {
    fn advance(&self, p: &Rat, m: usize) -> Rat {
        match self {
            Step::Add(w) => p + w * Rat::int(m as i64),
            Step::Mul(r) => p * r.pow(m as i32),
        }
    }

    /// Least `m ≥ 1` with `advance(p, m) > b`, or `≥ b` when `reach` is set.
    fn needed(&self, p: &Rat, b: &Rat, reach: bool) -> usize {
        let ok = |m: usize| {
            let e = self.advance(p, m);
            if reach {
                e >= *b
            } else {
                e > *b
            }
        };
        let guess = match self {
            Step::Add(w) => {
                let k = ((b - p) / w.clone()).floor();
                k.try_into().unwrap_or(usize::MAX / 2).max(1)
            }
            Step::Mul(r) => {
                let t = (b / p).to_f64();
                ((t.ln() / r.to_f64().ln()).floor().max(0.0) as usize).max(1)
            }
        };
        let mut m = guess;
        while m > 1 && ok(m - 1) {
            m -= 1;
        }
        while !ok(m) {
            m += 1;
        }
        m
    }
}

/// Greedy count of windows of the given step over the components of a
/// compact interval set. Open or half-open windows are swept as `[p, p ⊕ w)`,
/// closed ones as `[p, p ⊕ w]`.
fn sweep(comps: &[(Rat, Rat)], step: &Step, closed: bool) -> usize {
    let mut count = 0usize;
    let mut end: Option<Rat> = None;
    for (a, b) in comps {
        let p = match &end {
            Some(e) if closed && e >= b => continue,
            Some(e) if !closed && e > b => continue,
            Some(e) if e >= a => e.clone(),
            _ => a.clone(),
        };
        let m = step.needed(&p, b, closed);
        count += m;
        end = Some(step.advance(&p, m));
    }
    count
}

/// Starts of closed windows covering `comps`, swept left to right. Each
/// start after the first in a component is the previous window's end
/// rounded down to a multiple of `2^-bits`, which keeps the numbers small and
/// only adds overlap. Stops early once `limit` is exceeded.
fn closed_starts(comps: &[(Rat, Rat)], step: &Step, bits: u32, limit: usize) -> Vec<Rat> {
    let grid = Rat::dyadic(bits);
    let mut starts = Vec::new();
    let mut end: Option<Rat> = None;
    for (a, b) in comps {
        let mut s = match &end {
            Some(e) if e >= b => continue,
            Some(e) if e >= a => e.clone(),
            _ => a.clone(),
        };
        loop {
            let e = step.advance(&s, 1);
            starts.push(s);
            if starts.len() > limit {
                return starts;
            }
            if e >= *b {
                end = Some(e);
                break;
            }
            s = Rat::from_bigint((&e / &grid).floor()) * &grid;
        }
    }
    starts
}

fn single_interval(w: &IntervalSet) -> Result<(Rat, Rat)> {
    match w.finite_intervals().as_deref() {
        Some([(a, b)]) if a < b => Ok((a.clone(), b.clone())),
        _ => Err(Error::Unsupported(format!(
            "covering by translates of {w} needs a single bounded interval of positive length"
        ))),
    }
}

fn step_for(law: Law, a: &Rat, b: &Rat) -> Step {
    match law {
        Law::Additive => Step::Add(b - a),
        Law::Multiplicative => Step::Mul(b / a),
    }
}

fn compact_components(g: &GroupSpec, k: &Subset) -> Result<Vec<(Rat, Rat)>> {
    if !g.is_compact(k) {
        return Err(Error::Precondition(format!("{k} is not compact in {g}")));
    }
    let iv = k.as_intervals()?;
    Ok(iv.finite_intervals().expect("compact sets are bounded"))
}

/// Exact minimum number of translates `x·W` covering `K`, discrete groups.
fn discrete_cover(g: &GroupSpec, k: &Subset, w: &Subset, want_witness: bool) -> Result<IndexResult> {
    let ks = g.enumerate(k)?;
    if ks.is_empty() {
        return Ok(IndexResult { count: 0, witness: Vec::new() });
    }
    let ws = g.enumerate(w).map_err(|_| Error::Unsupported(format!("covering set {w} must be finite")))?;
    if ws.is_empty() {
        return Err(Error::Precondition("cannot cover a nonempty set with translates of ∅".into()));
    }
    let e = g.identity();
    if ws == [e.clone()] {
        return Ok(IndexResult { count: ks.len(), witness: if want_witness { ks } else { Vec::new() } });
    }
    if ks.len() > 128 {
        return Err(Error::Unsupported(format!("exact cover of {} points exceeds the 128-point limit", ks.len())));
    }
    let mut cands: Vec<(Element, u128)> = Vec::new();
    for kk in &ks {
        for ww in &ws {
            let x = g.op(kk, &g.inverse(ww)?)?;
            if cands.iter().any(|(y, _)| *y == x) {
                continue;
            }
            let xinv = g.inverse(&x)?;
            let mut mask = 0u128;
            for (i, kk2) in ks.iter().enumerate() {
                if g.contains(w, &g.op(&xinv, kk2)?)? {
                    mask |= 1 << i;
                }
            }
            cands.push((x, mask));
        }
    }
    cands.sort_by(|a, b| b.1.count_ones().cmp(&a.1.count_ones()).then_with(|| a.0.cmp(&b.0)));
    let full: u128 = if ks.len() == 128 { u128::MAX } else { (1u128 << ks.len()) - 1 };
    let widest = cands[0].1.count_ones() as usize;
    let mut chosen = Vec::new();
    for depth in ks.len().div_ceil(widest)..=ks.len() {
        if cover_dfs(&cands, full, 0, depth, &mut chosen) {
            let witness = chosen.iter().map(|&i| cands[i].0.clone()).collect();
            return Ok(IndexResult { count: depth, witness });
        }
    }
    Err(Error::Invariant("singleton translates always cover".into()))
}

fn cover_dfs(cands: &[(Element, u128)], full: u128, covered: u128, left: usize, chosen: &mut Vec<usize>) -> bool {
    if covered == full {
        return true;
    }
    if left == 0 {
        return false;
    }
    let missing = full & !covered;
    let best = cands.iter().map(|(_, m)| (m & missing).count_ones()).max().unwrap_or(0) as usize;
    if best * left < missing.count_ones() as usize {
        return false;
    }
    let target = missing.trailing_zeros();
    for (i, (_, m)) in cands.iter().enumerate() {
        if m >> target & 1 == 1 {
            chosen.push(i);
            if cover_dfs(cands, full, covered | m, left - 1, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Least number of translates `x·W` covering the compact set `K`, for any
/// `W` with nonempty interior (an interval on the continuous groups).
pub fn index_by(g: &GroupSpec, k: &Subset, w: &Subset) -> Result<usize> {
    let k = g.normalize(k)?;
    let w = g.normalize(w)?;
    if k.is_empty() {
        return Ok(0);
    }
    if g.is_discrete() {
        return Ok(discrete_cover(g, &k, &w, false)?.count);
    }
    let comps = compact_components(g, &k)?;
    let wi = w.as_intervals()?;
    let (a, b) = single_interval(wi)?;
    let step = step_for(g.law().expect("interval group"), &a, &b);
    Ok(sweep(&comps, &step, wi.kind() == Kind::Closed))
}

fn check_neighbourhood(g: &GroupSpec, v: &Subset) -> Result<()> {
    if !g.is_open(v) || !g.contains(v, &g.identity())? {
        return Err(Error::Precondition(format!("{v} is not an open neighbourhood of the identity")));
    }
    Ok(())
}

/// `(K : V)` for an open neighbourhood `V` of the identity.
pub fn index_count(g: &GroupSpec, k: &Subset, v: &Subset) -> Result<usize> {
    let v = g.normalize(v)?;
    check_neighbourhood(g, &v)?;
    index_by(g, k, &v)
}

/// `(K : V)` together with a verified witness cover.
pub fn index(g: &GroupSpec, k: &Subset, v: &Subset) -> Result<IndexResult> {
    let k = g.normalize(k)?;
    let v = g.normalize(v)?;
    check_neighbourhood(g, &v)?;
    if k.is_empty() {
        return Ok(IndexResult { count: 0, witness: Vec::new() });
    }
    let result = if g.is_discrete() {
        discrete_cover(g, &k, &v, true)?
    } else {
        continuous_witness(g, &k, &v)?
    };
    verify_cover(g, &k, &v, &result.witness)?;
    Ok(result)
}

fn continuous_witness(g: &GroupSpec, k: &Subset, v: &Subset) -> Result<IndexResult> {
    let law = g.law().expect("interval group");
    let comps = compact_components(g, k)?;
    let (c, d) = single_interval(v.as_intervals()?)?;
    let target = sweep(&comps, &step_for(law, &c, &d), false);
    let width = &d - &c;
    for j in [2, 4, 8, 16, 32, 64, 96] {
        let delta = Rat::dyadic(j) * &width;
        let (c2, d2) = (&c + &delta, &d - &delta);
        let starts = closed_starts(&comps, &step_for(law, &c2, &d2), 2 * j + 64, target);
        let count = starts.len();
        if count == target {
            let witness = starts
                .into_iter()
                .map(|s| {
                    Element::Num(match law {
                        Law::Additive => s - &c2,
                        Law::Multiplicative => s / c2.clone(),
                    })
                })
                .collect();
            return Ok(IndexResult { count, witness });
        }
    }
    Err(Error::Invariant(format!("no closed cover of size {target} found for {k}")))
}

/// Exact check that the translates `x·V` of the witness cover `K`.
pub fn verify_cover(g: &GroupSpec, k: &Subset, v: &Subset, witness: &[Element]) -> Result<()> {
    let union = if g.is_discrete() {
        let mut u = g.empty_set();
        for x in witness {
            u = u.union(&g.translate_set(x, v)?)?;
        }
        u
    } else {
        let mut ivs = Vec::new();
        for x in witness {
            ivs.extend(g.translate_set(x, v)?.as_intervals()?.intervals().iter().cloned());
        }
        Subset::Intervals(IntervalSet::new(v.as_intervals()?.kind(), ivs)?)
    };
    if k.is_subset_of(&union) {
        Ok(())
    } else {
        Err(Error::Invariant(format!("witness translates do not cover {k}")))
    }
}

/// `h_U(K) = (K : U) / (K₀ : U)`.
pub fn prehaar(g: &GroupSpec, k0: &PositiveCompact, u: &Subset, k: &Subset) -> Result<Rat> {
    let den = index_count(g, k0.set(), u)?;
    if den == 0 {
        return Err(Error::Invariant("index of K₀ is zero".into()));
    }
    Ok(Rat::new(index_count(g, k, u)? as i64, den as i64))
}

/// `K·U⁻¹`.
pub fn separation_set(g: &GroupSpec, k: &Subset, u: &Subset) -> Result<Subset> {
    let uinv = g.invert_set(&g.normalize(u)?)?;
    let k = g.normalize(k)?;
    match (&k, &uinv) {
        (Subset::Intervals(ki), Subset::Intervals(ui)) if !g.is_discrete() => {
            Ok(Subset::Intervals(ki.sumset(ui, g.law().expect("interval group"))?))
        }
        _ => {
            let mut out = g.empty_set();
            for kk in g.enumerate(&k)? {
                out = out.union(&g.translate_set(&kk, &uinv)?)?;
            }
            Ok(out)
        }
    }
}

/// Inputs for one round of the prehaar lemma checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrehaarCase {
    pub k: Subset,
    pub k2: Subset,
    pub x: Element,
}

/// The prehaar lemma, exactly: the submultiplicative bound, bounds by
/// `(K : K₀)`, `h_U(K₀) = 1`, translation invariance, monotonicity,
/// subadditivity, and additivity when `KU⁻¹ ∩ K′U⁻¹ = ∅`.
pub fn prehaar_properties_check(
    g: &GroupSpec,
    k0: &PositiveCompact,
    u: &Subset,
    cases: &[PrehaarCase],
) -> Result<CheckReport> {
    let idx = |k: &Subset| index_count(g, k, u);
    let i0 = idx(k0.set())?;
    let h = |k: &Subset| -> Result<Rat> { Ok(Rat::new(idx(k)? as i64, i0 as i64)) };
    let mut rep = CheckReport::new("prehaar_properties");
    rep.push(
        Record::new(0, "h_U(K₀) = 1")
            .input("U", u)
            .value(Quantity::rat("h_K0", &h(k0.set())?))
            .pass_if(h(k0.set())? == Rat::one()),
    );
    let records = cases
        .par_iter()
        .map(|case| -> Result<Vec<Record>> {
            let (k, k2) = (g.normalize(&case.k)?, g.normalize(&case.k2)?);
            let union = k.union(&k2)?;
            let meet = k.intersect(&k2)?;
            let xk = g.translate_set(&case.x, &k)?;
            let (ik, ik2, iu, im, ixk) = (idx(&k)?, idx(&k2)?, idx(&union)?, idx(&meet)?, idx(&xk)?);
            let ik_k0 = index_by(g, &k, k0.set())?;
            let hk = Rat::new(ik as i64, i0 as i64);
            let hk2 = Rat::new(ik2 as i64, i0 as i64);
            let hu = Rat::new(iu as i64, i0 as i64);
            let tag = |r: Record| r.input("K", &k).input("K'", &k2).input("U", u);
            let separated = separation_set(g, &k, u)?.is_disjoint(&separation_set(g, &k2, u)?)?;
            let mut out = vec![
                tag(Record::new(0, "(K:U) ≤ (K:K₀)(K₀:U)"))
                    .value(Quantity::rat("K_U", &Rat::int(ik as i64)))
                    .value(Quantity::rat("bound", &Rat::int((ik_k0 * i0) as i64)))
                    .pass_if(ik <= ik_k0 * i0),
                tag(Record::new(0, "0 ≤ h_U(K) ≤ (K:K₀)"))
                    .value(Quantity::rat("h_K", &hk))
                    .pass_if(!hk.is_negative() && hk <= Rat::int(ik_k0 as i64)),
                tag(Record::new(0, "h_U(xK) = h_U(K)"))
                    .input("x", &case.x)
                    .pass_if(ixk == ik),
                tag(Record::new(0, "monotone"))
                    .pass_if(im <= ik && ik <= iu),
                tag(Record::new(0, "h_U(K∪K') ≤ h_U(K) + h_U(K')"))
                    .value(Quantity::rat("h_union", &hu))
                    .value(Quantity::rat("h_sum", &(&hk + &hk2)))
                    .pass_if(hu <= &hk + &hk2),
            ];
            if separated {
                out.push(
                    tag(Record::new(0, "additive when KU⁻¹ ∩ K'U⁻¹ = ∅"))
                        .value(Quantity::rat("h_union", &hu))
                        .value(Quantity::rat("h_sum", &(&hk + &hk2)))
                        .residual((&hu - (&hk + &hk2)).abs())
                        .pass_if(hu == &hk + &hk2),
                );
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    for r in records.into_iter().flatten() {
        rep.push(r);
    }
    Ok(rep)
}

/// Prehaar values `h_n(K)` for `n = 1..n_max` and a list of compacts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChaarEstimate {
    pub k0: Subset,
    pub n_max: u32,
    pub sets: Vec<Subset>,
    /// `values[i][n-1] = h_n(sets[i])`.
    pub values: Vec<Vec<Rat>>,
    /// Largest `|h_n − h_{n+1}|` over the last two steps and all sets.
    pub cauchy_gap: Rat,
}

impl ChaarEstimate {
    pub fn find(&self, s: &Subset) -> Option<usize> {
        self.sets.iter().position(|t| t == s)
    }

    pub fn last(&self, i: usize) -> &Rat {
        self.values[i].last().expect("n_max ≥ 1")
    }
}

pub fn chaar_estimate(g: &GroupSpec, k0: &PositiveCompact, ks: &[Subset], n_max: u32) -> Result<ChaarEstimate> {
    if n_max == 0 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    let sets = ks.iter().map(|k| g.normalize(k)).collect::<Result<Vec<_>>>()?;
    let dens = (1..=n_max)
        .into_par_iter()
        .map(|n| index_count(g, k0.set(), &g.shrink_basis(n)))
        .collect::<Result<Vec<_>>>()?;
    let values = sets
        .par_iter()
        .map(|k| {
            (1..=n_max)
                .map(|n| Ok(Rat::new(index_count(g, k, &g.shrink_basis(n))? as i64, dens[n as usize - 1] as i64)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let tail_from = values.first().map_or(0, |v| v.len().saturating_sub(3));
    let cauchy_gap = values
        .iter()
        .flat_map(|v| v[tail_from..].windows(2).map(|w| (&w[1] - &w[0]).abs()))
        .max()
        .unwrap_or_else(Rat::zero);
    Ok(ChaarEstimate { k0: k0.set().clone(), n_max, sets, values, cauchy_gap })
}

/// Whether `b` is a translate `x·a`, and by which `x`.
fn translate_between(g: &GroupSpec, a: &Subset, b: &Subset) -> Result<Option<Element>> {
    match (a, b) {
        (Subset::Intervals(ai), Subset::Intervals(bi)) => {
            let (Some(Bound::Fin(p)), Some(Bound::Fin(q))) =
                (ai.intervals().first().map(|i| &i.0), bi.intervals().first().map(|i| &i.0))
            else {
                return Ok(None);
            };
            let x = Element::Num(match g.law().expect("interval group") {
                Law::Additive => q - p,
                Law::Multiplicative => q / p.clone(),
            });
            Ok((g.element(&x).is_ok() && g.translate_set(&x, a)? == *b).then_some(x))
        }
        (Subset::Points(_), Subset::Points(_)) => {
            for i in 0..g.order().expect("finite") {
                let x = Element::Idx(i);
                if g.translate_set(&x, a)? == *b {
                    return Ok(Some(x));
                }
            }
            Ok(None)
        }
        _ => Ok(None),
    }
}

/// The chaar lemma on the sets of an estimate. Nonnegativity, `h(∅) = 0`,
/// `h(K₀) = 1`, translation invariance, monotonicity and subadditivity are
/// checked exactly at every `n`; additivity of disjoint compacts at
/// `n_max`, within `tolerance`.
pub fn chaar_properties_check(g: &GroupSpec, est: &ChaarEstimate, tolerance: &Rat) -> Result<CheckReport> {
    let k0 = PositiveCompact::new(g, &est.k0)?;
    let mut rep = CheckReport::new("chaar_properties");
    let empty = g.empty_set();
    let n_range = 1..=est.n_max;
    let zero_ok = n_range.clone().all(|n| prehaar(g, &k0, &g.shrink_basis(n), &empty).is_ok_and(|h| h.is_zero()));
    rep.push(Record::new(0, "h(∅) = 0").pass_if(zero_ok));
    let one_ok = n_range.clone().all(|n| prehaar(g, &k0, &g.shrink_basis(n), &est.k0).is_ok_and(|h| h == Rat::one()));
    rep.push(Record::new(0, "h(K₀) = 1").pass_if(one_ok));
    let m = est.sets.len();
    for i in 0..m {
        let nonneg = est.values[i].iter().all(|h| !h.is_negative());
        rep.push(
            Record::new(0, "h(K) ≥ 0")
                .input("K", &est.sets[i])
                .value(Quantity::rat("h_nmax", est.last(i)))
                .pass_if(nonneg),
        );
    }
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            let (a, b) = (&est.sets[i], &est.sets[j]);
            let all_n = |f: &dyn Fn(&Rat, &Rat) -> bool| est.values[i].iter().zip(&est.values[j]).all(|(x, y)| f(x, y));
            if i < j {
                if let Some(x) = translate_between(g, a, b)? {
                    rep.push(
                        Record::new(0, "h(xK) = h(K)")
                            .input("K", a)
                            .input("x", &x)
                            .pass_if(all_n(&|p, q| p == q)),
                    );
                }
            }
            if a != b && a.is_subset_of(b) {
                rep.push(
                    Record::new(0, "K ⊆ K' ⇒ h(K) ≤ h(K')")
                        .input("K", a)
                        .input("K'", b)
                        .pass_if(all_n(&|p, q| p <= q)),
                );
            }
            if i < j {
                let union = a.union(b)?;
                if let Some(k) = est.find(&union).filter(|&k| k != i && k != j) {
                    let sub = (0..est.values[k].len())
                        .all(|n| est.values[k][n] <= &est.values[i][n] + &est.values[j][n]);
                    rep.push(
                        Record::new(0, "h(K∪K') ≤ h(K) + h(K')")
                            .input("K", a)
                            .input("K'", b)
                            .pass_if(sub),
                    );
                    if a.is_disjoint(b)? {
                        let res = (est.last(k) - (est.last(i) + est.last(j))).abs();
                        rep.push(
                            Record::new(0, "K ∩ K' = ∅ ⇒ h(K∪K') = h(K) + h(K')")
                                .input("K", a)
                                .input("K'", b)
                                .value(Quantity::rat("h_union", est.last(k)))
                                .value(Quantity::rat("h_sum", &(est.last(i) + est.last(j))))
                                .value(Quantity::rat("tolerance", tolerance))
                                .residual(res.clone())
                                .pass_if(res <= *tolerance),
                        );
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// A content on compact sets.
pub trait ContentFn: Sync {
    fn group(&self) -> &GroupSpec;
    fn content(&self, k: &Subset) -> Result<ExtNonneg>;
}

/// An exact measure restricted to compacts, e.g. length or counting.
pub struct MeasureContent(pub Measure);

impl ContentFn for MeasureContent {
    fn group(&self) -> &GroupSpec {
        self.0.group()
    }

    fn content(&self, k: &Subset) -> Result<ExtNonneg> {
        self.0.eval(k)
    }
}

/// `K ↦ h_{V_n}(K)`; unbounded sets get `∞`.
pub struct PrehaarContent {
    group: GroupSpec,
    k0: PositiveCompact,
    v: Subset,
}

impl PrehaarContent {
    pub fn new(group: &GroupSpec, k0: &Subset, n: u32) -> Result<PrehaarContent> {
        Ok(PrehaarContent { group: group.clone(), k0: PositiveCompact::new(group, k0)?, v: group.shrink_basis(n) })
    }
}

impl ContentFn for PrehaarContent {
    fn group(&self) -> &GroupSpec {
        &self.group
    }

    fn content(&self, k: &Subset) -> Result<ExtNonneg> {
        let bounded = match k {
            Subset::Intervals(i) => i.is_bounded(),
            Subset::Points(_) => true,
        };
        if !bounded {
            return Ok(ExtNonneg::Infinity);
        }
        Ok(ExtNonneg::Finite(prehaar(&self.group, &self.k0, &self.v, k)?))
    }
}

/// A monotone approximating sequence and where it ended.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Approx {
    pub values: Vec<ExtNonneg>,
    pub last: ExtNonneg,
    /// `|x_K − x_{K−1}|`; zero for single-step sequences.
    pub last_step: ExtNonneg,
}

impl Approx {
    fn from_values(values: Vec<ExtNonneg>) -> Approx {
        let last = values.last().cloned().unwrap_or_else(ExtNonneg::zero);
        let last_step = match values.len() {
            0 | 1 => ExtNonneg::zero(),
            n => values[n - 1].abs_diff(&values[n - 2]),
        };
        Approx { values, last, last_step }
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] >= w[1])
    }
}

/// Inner content of an open set: `h(shrink(U, ε_k))`, nondecreasing in `k`.
/// On discrete groups every finite set is compact and open, so the value is
/// `h(U)` at once.
pub fn inner_content(h: &dyn ContentFn, u: &Subset, schedule: &Schedule) -> Result<Approx> {
    let g = h.group();
    let u = g.normalize(u)?;
    if g.is_discrete() {
        return Ok(Approx::from_values(vec![h.content(&u)?]));
    }
    let vals = schedule
        .eps()
        .iter()
        .map(|e| h.content(&g.inner_compact(&u, e)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(Approx::from_values(vals))
}

/// Outer measure induced by the inner content: the inner content of
/// `fatten(A, ε_k)`, each evaluated at the finest shrink; nonincreasing.
pub fn outer_measure_from_content(h: &dyn ContentFn, a: &Subset, schedule: &Schedule) -> Result<Approx> {
    let g = h.group();
    let a = g.normalize(a)?;
    if g.is_discrete() {
        return inner_content(h, &a, schedule);
    }
    let fine = schedule.finest();
    let vals = schedule
        .eps()
        .iter()
        .map(|e| h.content(&g.inner_compact(&g.outer_open(&a, e)?, &fine)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(Approx::from_values(vals))
}

/// Lower and upper values of an outer measure on a set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OuterBracket {
    pub lower: ExtNonneg,
    pub upper: ExtNonneg,
}

impl OuterBracket {
    pub fn gap(&self) -> ExtNonneg {
        self.upper.abs_diff(&self.lower)
    }
}

pub trait OuterEvaluator: Sync {
    fn outer(&self, a: &Subset) -> Result<OuterBracket>;
}

/// Outer measure from a content: the upper value is the last term of the
/// outer sequence, the lower one the content of the finest shrink of `A`.
pub struct ContentOuter<'a> {
    pub content: &'a dyn ContentFn,
    pub schedule: Schedule,
}

impl OuterEvaluator for ContentOuter<'_> {
    fn outer(&self, a: &Subset) -> Result<OuterBracket> {
        let g = self.content.group();
        let a = g.normalize(a)?;
        let upper = outer_measure_from_content(self.content, &a, &self.schedule)?.last;
        let lower = self.content.content(&g.inner_compact(&a, &self.schedule.finest())?)?;
        Ok(OuterBracket { lower: lower.min(upper.clone()), upper })
    }
}

/// `m(P) = m(P∩A) + m(P\A)` for each probe, up to `tolerance` plus the
/// three bracket gaps.
pub fn caratheodory_check(
    m: &dyn OuterEvaluator,
    a: &Subset,
    probes: &[Subset],
    tolerance: &Rat,
) -> Result<CheckReport> {
    let records = probes
        .par_iter()
        .map(|p| -> Result<Record> {
            let whole = m.outer(p)?;
            let inside = m.outer(&p.intersect(a)?)?;
            let outside = m.outer(&p.difference(a)?)?;
            let split = &inside.upper + &outside.upper;
            let res = whole.upper.abs_diff(&split);
            let gaps = whole.gap() + inside.gap() + outside.gap();
            let allowed = ExtNonneg::Finite(tolerance.clone()) + gaps.clone();
            let mut r = Record::new(0, "m(P) = m(P∩A) + m(P\\A)")
                .input("A", a)
                .input("P", p)
                .value(Quantity::ext("m_P", &whole.upper))
                .value(Quantity::ext("m_split", &split))
                .value(Quantity::ext("bracket_gaps", &gaps));
            if let Some(x) = res.as_finite() {
                r = r.residual(x.clone());
            }
            Ok(r.pass_if(res <= allowed))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CheckReport::with_records("caratheodory", records))
}

/// A normalised Haar measure value with its bracket.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HaarEstimate {
    pub lo: ExtNonneg,
    pub hi: ExtNonneg,
    pub point: ExtNonneg,
    pub cauchy_gap: Rat,
    pub exact: bool,
}

impl HaarEstimate {
    fn exact(v: ExtNonneg) -> HaarEstimate {
        HaarEstimate { lo: v.clone(), hi: v.clone(), point: v, cauchy_gap: Rat::zero(), exact: true }
    }

    pub fn width(&self) -> ExtNonneg {
        self.hi.abs_diff(&self.lo)
    }
}

/// Haar measure of `A` normalised at `K₀`, from prehaar values at `V_n`.
/// On discrete groups this is `(A : {e}) / (K₀ : {e})`, exact. Otherwise
/// `A` is squeezed between `shrink(A, ε)` and `shrink(fatten(A, ε), ε)` at
/// the finest `ε` of the schedule, `K₀` likewise, and the bracket
/// `[lo(A)/hi(K₀) − c, hi(A)/lo(K₀) + c]` is returned, `c` being the Cauchy
/// gap of the four prehaar sequences involved.
pub fn haar_measure_estimate(
    g: &GroupSpec,
    k0: &Subset,
    a: &Subset,
    n: u32,
    schedule: &Schedule,
) -> Result<HaarEstimate> {
    let k0 = PositiveCompact::new(g, k0)?;
    let a = g.normalize(a)?;
    if a.is_empty() {
        return Ok(HaarEstimate::exact(ExtNonneg::zero()));
    }
    if g.is_discrete() {
        if let Subset::Intervals(i) = &a {
            if !i.is_bounded() {
                return Ok(HaarEstimate::exact(ExtNonneg::Infinity));
            }
        }
        let v = g.shrink_basis(n);
        return Ok(HaarEstimate::exact(ExtNonneg::Finite(prehaar(g, &k0, &v, &a)?)));
    }
    if !a.as_intervals()?.is_bounded() {
        return Ok(HaarEstimate::exact(ExtNonneg::Infinity));
    }
    let eps = schedule.finest();
    let inner = |s: &Subset| g.inner_compact(s, &eps);
    let outer = |s: &Subset| -> Result<Subset> { inner(&g.outer_open(s, &eps)?) };
    let sets = vec![inner(&a)?, outer(&a)?, inner(k0.set())?, outer(k0.set())?];
    let est = chaar_estimate(g, &k0, &sets, n)?;
    let [lo_a, hi_a, lo_0, hi_0] = [0, 1, 2, 3].map(|i| est.last(i).clone());
    if !lo_0.is_positive() {
        return Err(Error::Precondition(format!(
            "schedule {schedule} is too coarse: shrinking {} leaves nothing",
            k0.set()
        )));
    }
    let c = est.cauchy_gap.clone();
    let lo = (lo_a / hi_0 - &c).max(Rat::zero());
    let hi = hi_a / lo_0 + &c;
    let point = lo.midpoint(&hi);
    Ok(HaarEstimate {
        lo: ExtNonneg::Finite(lo),
        hi: ExtNonneg::Finite(hi),
        point: ExtNonneg::Finite(point),
        cauchy_gap: c,
        exact: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setalg::FiniteSet;

    fn iv(s: &str) -> Subset {
        Subset::Intervals(s.parse().unwrap())
    }

    fn q(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn pc(g: &GroupSpec, s: &str) -> PositiveCompact {
        PositiveCompact::new(g, &iv(s)).unwrap()
    }

    #[test]
    fn index_examples() {
        let r = GroupSpec::RealAdd;
        let res = index(&r, &iv("[0,1]"), &iv("(-1/4,1/4)")).unwrap();
        assert_eq!(res.count, 3);
        assert_eq!(res.witness.len(), 3);
        assert_eq!(index(&r, &iv("∅"), &iv("(-1/4,1/4)")).unwrap().count, 0);
        let res = index(&GroupSpec::PosMul, &iv("[1,4]"), &iv("(2/3,3/2)")).unwrap();
        assert_eq!(res.count, 2);
        let s3 = GroupSpec::symmetric(3);
        let t = s3.table().unwrap();
        let r3 = (1..6).find(|&g| t.mul(g, t.mul(g, g)) == 0 && t.mul(g, g) != 0).unwrap();
        let k = Subset::Points(FiniteSet::new(6, [0, r3, t.mul(r3, r3)]).unwrap());
        assert_eq!(index(&s3, &k, &s3.shrink_basis(0)).unwrap().count, 3);
    }

    #[test]
    fn index_preconditions() {
        let r = GroupSpec::RealAdd;
        assert!(matches!(index(&r, &iv("[0,1]"), &iv("(1,2)")), Err(Error::Precondition(_))));
        assert!(matches!(index(&r, &iv("[0,1]"), &iv("[-1,1]")), Err(Error::Precondition(_))));
        assert!(matches!(index(&r, &iv("[0,1)"), &iv("(-1,1)")), Err(Error::Precondition(_))));
        assert!(matches!(index(&r, &iv("[0,1]"), &iv("(-1,-1/2) ∪ (-1/4,1)")), Err(Error::Unsupported(_))));
    }

    #[test]
    fn prehaar_examples() {
        let r = GroupSpec::RealAdd;
        let k0 = pc(&r, "[0,1]");
        let u = iv("(-1/4,1/4)");
        assert_eq!(prehaar(&r, &k0, &u, &iv("[0,2]")).unwrap(), q("5/3"));
        assert_eq!(prehaar(&r, &k0, &u, &iv("[0,1]")).unwrap(), Rat::one());
        assert_eq!(prehaar(&r, &k0, &u, &iv("∅")).unwrap(), Rat::zero());
    }

    #[test]
    fn chaar_closed_form() {
        let r = GroupSpec::RealAdd;
        let est = chaar_estimate(&r, &pc(&r, "[0,1]"), &[iv("[0,2]")], 10).unwrap();
        for n in 1..=10u32 {
            // (2ⁿ + 1) / (2ⁿ⁻¹ + 1)
            let expect = Rat::new((1 << n) + 1, (1 << (n - 1)) + 1);
            assert_eq!(est.values[0][n as usize - 1], expect);
        }
        assert_eq!(est.last(0), &q("1025/513"));
        assert!((est.last(0) - Rat::int(2)).abs() < Rat::dyadic(8));
    }

    #[test]
    fn chaar_multiplicative_reference() {
        let p = GroupSpec::PosMul;
        let est = chaar_estimate(&p, &pc(&p, "[1,2]"), &[iv("[1,4]")], 10).unwrap();
        let reference = 4f64.ln() / 2f64.ln();
        assert!((est.last(0).to_f64() - reference).abs() < 0.02);
    }

    #[test]
    fn chaar_finite_is_ratio_of_sizes() {
        let s3 = GroupSpec::symmetric(3);
        let k0 = PositiveCompact::new(&s3, &Subset::Points(FiniteSet::new(6, [0, 1]).unwrap())).unwrap();
        let k = Subset::Points(FiniteSet::new(6, [2, 3, 5]).unwrap());
        let est = chaar_estimate(&s3, &k0, &[k], 4).unwrap();
        assert!(est.values[0].iter().all(|h| *h == q("3/2")));
        assert!(est.cauchy_gap.is_zero());
    }

    #[test]
    fn witness_covers_and_has_minimal_size() {
        let r = GroupSpec::RealAdd;
        for (k, v) in [
            ("[0,1]", "(-1/4,1/4)"),
            ("[0,1] ∪ [5/4,2]", "(-1/8,1/4)"),
            ("[0,1/2] ∪ [3/4,3/4] ∪ [1,3]", "(-1/3,1/5)"),
            ("[0,2]", "(-1/1024,1/1024)"),
        ] {
            let res = index(&r, &iv(k), &iv(v)).unwrap();
            assert_eq!(res.count, index_count(&r, &iv(k), &iv(v)).unwrap());
        }
        let res = index(&GroupSpec::PosMul, &iv("[1,4]"), &GroupSpec::PosMul.shrink_basis(10)).unwrap();
        assert_eq!(res.count, 711);
    }

    #[test]
    fn separation_sets() {
        let r = GroupSpec::RealAdd;
        let u = iv("(-1/4,1/4)");
        assert_eq!(separation_set(&r, &iv("[0,1]"), &u).unwrap(), iv("(-1/4,5/4)"));
        let rep = prehaar_properties_check(
            &r,
            &pc(&r, "[0,1]"),
            &u,
            &[PrehaarCase { k: iv("[0,1]"), k2: iv("[5,6]"), x: Element::Num(q("7/3")) }],
        )
        .unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.records.iter().any(|r| r.label.starts_with("additive")));
    }

    #[test]
    fn chaar_check_examples() {
        let r = GroupSpec::RealAdd;
        let sets = [iv("[0,1]"), iv("[2,3]"), iv("[0,1] ∪ [2,3]"), iv("[5,6]")];
        let est = chaar_estimate(&r, &pc(&r, "[0,1]"), &sets, 6).unwrap();
        let rep = chaar_properties_check(&r, &est, &Rat::zero()).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.records.iter().any(|r| r.label.starts_with("K ∩ K'")));
        assert!(rep.records.iter().any(|r| r.label.starts_with("h(xK)")));
    }

    #[test]
    fn inner_and_outer_for_length() {
        let len = MeasureContent(Measure::lebesgue(Rat::one()));
        let sched = Schedule::dyadic(6);
        let inner = inner_content(&len, &iv("(0,1)"), &sched).unwrap();
        for (k, v) in inner.values.iter().enumerate() {
            assert_eq!(*v, ExtNonneg::Finite(Rat::one() - Rat::dyadic(k as u32)));
        }
        assert!(inner.is_nondecreasing());
        assert_eq!(inner_content(&len, &iv("∅"), &sched).unwrap().last, ExtNonneg::zero());
        let outer = outer_measure_from_content(&len, &iv("[0,1)"), &sched).unwrap();
        assert!(outer.is_nonincreasing());
        for (k, v) in outer.values.iter().enumerate() {
            let gap = v.abs_diff(&ExtNonneg::one());
            assert!(gap <= ExtNonneg::Finite(Rat::int(4) * Rat::dyadic(k as u32 + 1)));
        }
        assert_eq!(outer_measure_from_content(&len, &iv("∅"), &sched).unwrap().last, ExtNonneg::zero());
    }

    #[test]
    fn discrete_inner_content_is_exact() {
        let s3 = GroupSpec::symmetric(3);
        let cnt = MeasureContent(Measure::counting(&s3));
        let u = Subset::Points(FiniteSet::new(6, [1, 4]).unwrap());
        let a = inner_content(&cnt, &u, &Schedule::dyadic(5)).unwrap();
        assert_eq!(a.values, vec![ExtNonneg::int(2)]);
    }

    #[test]
    fn caratheodory_examples() {
        let len = MeasureContent(Measure::lebesgue(Rat::one()));
        let m = ContentOuter { content: &len, schedule: Schedule::dyadic(8) };
        let rep = caratheodory_check(&m, &iv("[0,1)"), &[iv("[-1,2)"), iv("[0,1)")], &Rat::zero()).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.records[0].residual, Some(Rat::zero()));
        assert_eq!(rep.records[0].values[0].exact.as_deref(), Some("3"));
        let rep = caratheodory_check(&m, &iv("∅"), &[iv("[-1,2)")], &Rat::zero()).unwrap();
        assert_eq!(rep.records[0].residual, Some(Rat::zero()));
    }

    #[test]
    fn haar_estimate_examples() {
        let r = GroupSpec::RealAdd;
        let est = haar_measure_estimate(&r, &iv("[0,1]"), &iv("[0,3)"), 10, &Schedule::dyadic(10)).unwrap();
        assert!(est.lo <= ExtNonneg::int(3) && ExtNonneg::int(3) <= est.hi, "{est:?}");
        assert!(est.width() <= ExtNonneg::Finite(q("1/20")));
        let s3 = GroupSpec::symmetric(3);
        for m in 0..64u64 {
            let a = Subset::Points(FiniteSet::from_mask(6, m));
            let e = haar_measure_estimate(&s3, &s3.full_set().unwrap(), &a, 3, &Schedule::default()).unwrap();
            assert!(e.exact);
            assert_eq!(e.point, ExtNonneg::Finite(Rat::new(m.count_ones() as i64, 6)));
        }
        assert_eq!(
            haar_measure_estimate(&r, &iv("[0,1]"), &iv("∅"), 10, &Schedule::default()).unwrap().point,
            ExtNonneg::zero()
        );
    }

    #[test]
    fn schedule_parsing() {
        assert_eq!("dyadic:7".parse::<Schedule>().unwrap().eps().len(), 7);
        assert!("linear:3".parse::<Schedule>().is_err());
        assert!("dyadic:0".parse::<Schedule>().is_err());
        assert_eq!(serde_json::to_string(&Schedule::dyadic(4)).unwrap(), "\"dyadic:4\"");
    }
}
