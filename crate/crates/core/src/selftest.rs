//! Seeded property suites over every module. Each suite is a list of check
//! reports; cases draw from per-case random streams and are collected in
//! case order, so the report depends only on the seed.

use rand::Rng;
use rayon::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec, PositiveCompact};
use crate::haar::{
    caratheodory_check, chaar_estimate, chaar_properties_check, haar_measure_estimate, index, index_count,
    inner_content, outer_measure_from_content, prehaar, prehaar_properties_check, ContentFn, ContentOuter,
    PrehaarCase, PrehaarContent, Schedule,
};
use crate::measure::{Measure, MeasureKind, MeasureSpec};
use crate::numeric::{ExtNonneg, Rat, VecQ};
use crate::product::{
    fubini_check, fubini_integrability_check, prod_measure, rect, rectangle, rectangle_law_check,
    symmetric_formula_check, tonelli_check, SimpleFunc2D, StepFuncVec2D,
};
use crate::report::{CheckReport, Quantity, Record, Summary, Verdict};
use crate::sample::{self, case_rng};
use crate::setalg::{FinitePairSet, FiniteSet, IntervalSet, Kind, Region, Subset};
use crate::simple::{SimpleFunc, StepFuncVec};
use crate::uniqueness::{
    inversion_duality_check, key_identity_check, measure_preserving_check, pair_region, right_translate_check,
    uniqueness_check,
};

/// Suite names in run order.
pub const SUITES: &[&str] = &[
    "numeric",
    "setalg",
    "group",
    "measure",
    "haar_index",
    "haar_lebesgue",
    "haar_multiplicative",
    "haar_finite",
    "prehaar_lemma",
    "extension",
    "product",
    "transforms",
    "negative_controls",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub summary: Summary,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    fn new(suite: &str, checks: Vec<CheckReport>) -> SuiteReport {
        let mut summary = Summary::default();
        for c in &checks {
            summary.absorb(&c.summary());
        }
        SuiteReport { suite: suite.into(), summary, checks }
    }

    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub version: String,
    pub seed: u64,
    pub summary: Summary,
    pub suites: Vec<SuiteReport>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.suite == name)
    }
}

/// Runs the named suites (all of them for `None`).
pub fn selftest(seed: u64, only: Option<&[String]>) -> Result<SelftestReport> {
    let names: Vec<&str> = match only {
        None => SUITES.to_vec(),
        Some(list) => {
            for n in list {
                if !SUITES.contains(&n.as_str()) {
                    return Err(Error::Domain(format!("unknown suite {n:?}; known: {}", SUITES.join(", "))));
                }
            }
            SUITES.iter().copied().filter(|s| list.iter().any(|n| n == s)).collect()
        }
    };
    let suites = names.par_iter().map(|n| run_suite(n, seed)).collect::<Result<Vec<_>>>()?;
    let mut summary = Summary::default();
    for s in &suites {
        summary.absorb(&s.summary);
    }
    Ok(SelftestReport { version: env!("CARGO_PKG_VERSION").into(), seed, summary, suites })
}

pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport> {
    let checks = match name {
        "numeric" => numeric_suite(seed),
        "setalg" => setalg_suite(seed),
        "group" => group_suite(seed),
        "measure" => measure_suite(seed),
        "haar_index" => haar_index_suite(seed),
        "haar_lebesgue" => haar_lebesgue_suite(),
        "haar_multiplicative" => haar_multiplicative_suite(),
        "haar_finite" => haar_finite_suite(),
        "prehaar_lemma" => prehaar_lemma_suite(seed),
        "extension" => extension_suite(seed),
        "product" => product_suite(seed),
        "transforms" => transforms_suite(seed),
        "negative_controls" => negative_controls_suite(seed),
        _ => return Err(Error::Domain(format!("unknown suite {name:?}"))),
    };
    Ok(SuiteReport::new(name, checks))
}

/// `n` cases, each with its own stream, collected in order.
fn cases<T: Send>(
    seed: u64,
    tag: &str,
    n: usize,
    f: impl Fn(&mut ChaCha8Rng, usize) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    (0..n).into_par_iter().map(|i| f(&mut case_rng(seed, tag, i as u64), i)).collect()
}

/// Errors become a failing record instead of aborting the suite.
fn guard(check: &str, f: impl FnOnce() -> Result<CheckReport>) -> CheckReport {
    f().unwrap_or_else(|e| {
        CheckReport::with_records(check, [Record::new(0, "evaluation").verdict(Verdict::Fail).note(e.to_string())])
    })
}

fn concat(check: &str, reps: impl IntoIterator<Item = CheckReport>) -> CheckReport {
    let mut out = CheckReport::new(check);
    for r in reps {
        out.extend(r);
    }
    out
}

/// One summary record for a large batch, followed by the first failures.
fn fold(check: &str, label: &str, inputs: &[(&str, String)], reps: impl IntoIterator<Item = CheckReport>) -> CheckReport {
    let mut summary = Summary::default();
    let mut failures = Vec::new();
    let mut cases = 0usize;
    for rep in reps {
        cases += 1;
        summary.absorb(&rep.summary());
        failures.extend(rep.failures().take(5 - failures.len().min(5)).cloned());
    }
    let mut r = Record::new(0, label)
        .value(Quantity::rat("cases", &Rat::int(cases as i64)))
        .value(Quantity::rat("records_pass", &Rat::int(summary.pass as i64)))
        .value(Quantity::rat("records_fail", &Rat::int(summary.fail as i64)))
        .value(Quantity::rat("records_unsupported", &Rat::int(summary.unsupported as i64)));
    for (k, v) in inputs {
        r = r.input(k, v);
    }
    if let Some(m) = &summary.max_residual {
        r = r.residual(m.clone());
    }
    CheckReport::with_records(check, std::iter::once(r.pass_if(summary.fail == 0)).chain(failures))
}

fn q(s: &str) -> Rat {
    s.parse().expect("literal rational")
}

fn closed(a: Rat, b: Rat) -> Subset {
    Subset::Intervals(IntervalSet::closed(a, b).expect("a < b"))
}

fn fin(x: Rat) -> ExtNonneg {
    ExtNonneg::Finite(x)
}

fn lebesgue_scales() -> Vec<Rat> {
    ["1", "2", "1/2", "3/2", "5/2", "1/3"].iter().map(|s| q(s)).collect()
}

fn pick<T: Clone>(rng: &mut impl Rng, xs: &[T]) -> T {
    xs[rng.random_range(0..xs.len())].clone()
}

fn counting(g: &GroupSpec, scale: Rat) -> Measure {
    Measure::new(g.clone(), MeasureSpec::new(MeasureKind::Counting { scale })).expect("counting is defined")
}

fn test_groups() -> Vec<GroupSpec> {
    vec![GroupSpec::RealAdd, GroupSpec::PosMul, GroupSpec::IntAdd, GroupSpec::symmetric(3), GroupSpec::cyclic(5)]
}

// ---------------------------------------------------------------- numeric

fn numeric_suite(seed: u64) -> Vec<CheckReport> {
    vec![guard("numeric_laws", || {
        let recs = cases(seed, "numeric", 200, |rng, _| {
            let a = sample::grid_rat(rng, -20, 20, 12);
            let b = sample::grid_rat(rng, -20, 20, 12);
            let c = sample::grid_rat(rng, -20, 20, 12);
            let field = &(&a + &b) - &b == a
                && &a * &(&b + &c) == &(&a * &b) + &(&a * &c)
                && (b.is_zero() || &(&a / &b) * &b == a);
            let text = a.to_string().parse::<Rat>()? == a;
            let x = sample::ext_value(rng, 0.3);
            let y = sample::ext_value(rng, 0.3);
            let ext = &x * &ExtNonneg::zero() == ExtNonneg::zero()
                && &x + &ExtNonneg::Infinity == ExtNonneg::Infinity
                && &x + &y == &y + &x
                && x.to_string().parse::<ExtNonneg>()? == x;
            let u = sample::vec_value(rng, 3);
            let v = sample::vec_value(rng, 3);
            let norm = u.checked_add(&v)?.norm() <= &u.norm() + &v.norm() && u.scale(&c).norm() == &c.abs() * &u.norm();
            Ok(vec![
                Record::new(0, "field laws").input("a", &a).input("b", &b).input("c", &c).pass_if(field),
                Record::new(0, "text round trip").input("a", &a).pass_if(text),
                Record::new(0, "extended arithmetic").input("x", &x).input("y", &y).pass_if(ext),
                Record::new(0, "sup norm").input("u", &u).input("v", &v).pass_if(norm),
            ])
        })?;
        Ok(CheckReport::with_records("numeric_laws", recs.into_iter().flatten()))
    })]
}

// ---------------------------------------------------------------- setalg

fn setalg_suite(seed: u64) -> Vec<CheckReport> {
    let intervals = guard("interval_algebra", || {
        let recs = cases(seed, "setalg", 200, |rng, _| {
            let a = sample::interval_set(rng, Kind::HalfOpen, 3, -4, 4, 8);
            let b = sample::interval_set(rng, Kind::HalfOpen, 3, -4, 4, 8);
            let (u, m, d) = (a.union(&b)?, a.intersect(&b)?, a.difference(&b)?);
            let modular = u.length() + m.length() == a.length() + b.length();
            let split = d.union(&m)? == a && d.is_disjoint(&b);
            let text = a.to_string().parse::<IntervalSet>()? == a;
            let c = sample::interval_set(rng, Kind::Closed, 3, -4, 4, 8);
            let topo = c.interior().is_subset_of(&c) && c.closure() == c && c.interior().length() == c.length();
            Ok(vec![
                Record::new(0, "|A∪B| + |A∩B| = |A| + |B|").input("A", &a).input("B", &b).pass_if(modular),
                Record::new(0, "A = (A∖B) ⊔ (A∩B)").input("A", &a).input("B", &b).pass_if(split),
                Record::new(0, "text round trip").input("A", &a).pass_if(text),
                Record::new(0, "interior ⊆ K = closure").input("K", &c).pass_if(topo),
            ])
        })?;
        Ok(CheckReport::with_records("interval_algebra", recs.into_iter().flatten()))
    });
    let finite = guard("finite_algebra", || {
        let recs = cases(seed, "setalg_finite", 100, |rng, _| {
            let a = sample::finite_subset(rng, 6, true);
            let b = sample::finite_subset(rng, 6, true);
            let ok = a.union(&b)?.len() + a.intersect(&b)?.len() == a.len() + b.len()
                && a.difference(&b)?.union(&a.intersect(&b)?)? == a;
            let p = sample::pair_set(rng, 4);
            let t = p.transpose().transpose() == p;
            Ok(vec![
                Record::new(0, "|A∪B| + |A∩B| = |A| + |B|").input("A", &a).input("B", &b).pass_if(ok),
                Record::new(0, "transpose is an involution").input("A", format!("{p:?}")).pass_if(t),
            ])
        })?;
        Ok(CheckReport::with_records("finite_algebra", recs.into_iter().flatten()))
    });
    let rects = guard("rect_algebra", || {
        let recs = cases(seed, "setalg_rects", 100, |rng, _| {
            let a = sample::rect_union(rng, 3, 4);
            let b = sample::rect_union(rng, 3, 4);
            let twice = a.transpose()?.transpose()? == a;
            let m = Measure::lebesgue(Rat::one());
            let area = |r: &crate::setalg::RectUnion| prod_measure(&m, &m, &Region::Rects(r.clone()));
            let u = a.combine(&b, crate::setalg::SetOp::Union)?;
            let i = a.combine(&b, crate::setalg::SetOp::Intersect)?;
            let modular = area(&u)? + area(&i)? == area(&a)? + area(&b)?;
            Ok(vec![
                Record::new(0, "transpose is an involution").input("A", format!("{a:?}")).pass_if(twice),
                Record::new(0, "area(A∪B) + area(A∩B) = area(A) + area(B)")
                    .input("A", format!("{a:?}"))
                    .input("B", format!("{b:?}"))
                    .pass_if(modular),
            ])
        })?;
        Ok(CheckReport::with_records("rect_algebra", recs.into_iter().flatten()))
    });
    vec![intervals, finite, rects]
}

// ---------------------------------------------------------------- group

fn group_suite(seed: u64) -> Vec<CheckReport> {
    test_groups()
        .into_iter()
        .map(|g| {
            let check = format!("group_axioms[{g}]");
            guard(&check.clone(), || {
                let recs = cases(seed, &check, 100, |rng, _| {
                    let (a, b, c) = (sample::element(rng, &g, 8), sample::element(rng, &g, 8), sample::element(rng, &g, 8));
                    let e = g.identity();
                    let assoc = g.op(&g.op(&a, &b)?, &c)? == g.op(&a, &g.op(&b, &c)?)?;
                    let unit = g.op(&e, &a)? == a && g.op(&a, &e)? == a;
                    let inv = g.op(&a, &g.inverse(&a)?)? == e;
                    let s = sample::measurable(rng, &g, 3, 8);
                    let back = g.preimage_translate(&a, &g.translate_set(&a, &s)?)? == g.normalize(&s)?;
                    let twice = g.invert_set(&g.invert_set(&s)?)? == g.normalize(&s)?;
                    let sides = g.translate_set_right(&g.translate_set(&a, &s)?, &b)?
                        == g.translate_set(&a, &g.translate_set_right(&s, &b)?)?;
                    Ok(vec![
                        Record::new(0, "(ab)c = a(bc)").input("a", &a).input("b", &b).input("c", &c).pass_if(assoc),
                        Record::new(0, "ea = ae = a").input("a", &a).pass_if(unit),
                        Record::new(0, "a·a⁻¹ = e").input("a", &a).pass_if(inv),
                        Record::new(0, "a⁻¹(aA) = A").input("a", &a).input("A", &s).pass_if(back),
                        Record::new(0, "(A⁻¹)⁻¹ = A").input("A", &s).pass_if(twice),
                        Record::new(0, "(aA)b = a(Ab)").input("a", &a).input("b", &b).input("A", &s).pass_if(sides),
                    ])
                })?;
                Ok(CheckReport::with_records(check.clone(), recs.into_iter().flatten()))
            })
        })
        .collect()
}

// ---------------------------------------------------------------- measure

fn invariant_measures() -> Vec<Measure> {
    vec![
        Measure::lebesgue(q("3/2")),
        counting(&GroupSpec::IntAdd, q("2")),
        counting(&GroupSpec::symmetric(3), Rat::one()),
        counting(&GroupSpec::cyclic(5), q("1/5")),
    ]
}

fn measure_suite(seed: u64) -> Vec<CheckReport> {
    let mut out = Vec::new();
    for m in invariant_measures() {
        let g = m.group().clone();
        let tag = format!("measure[{g}]");
        out.push(guard("left_invariance", || {
            let cs = cases(seed, &format!("{tag}/inv"), 100, |rng, _| {
                Ok((sample::element(rng, &g, 8), sample::measurable(rng, &g, 3, 8)))
            })?;
            m.left_invariance_check(&cs)
        }));
        out.push(guard("integrals", || {
            let recs = cases(seed, &format!("{tag}/int"), 100, |rng, _| {
                let f = sample::simple_func(rng, &g, 3, 8, 0.1);
                let h = sample::simple_func(rng, &g, 3, 8, 0.1);
                let c = ExtNonneg::Finite(sample::grid_rat(rng, 0, 4, 3));
                let add = m.lintegral(&f.add(&h)?)? == m.lintegral(&f)? + m.lintegral(&h)?;
                let scale = m.lintegral(&f.scale(&c)?)? == &c * &m.lintegral(&f)?;
                let finite = sample::simple_func(rng, &g, 3, 8, 0.0);
                let b = m.bintegral(&StepFuncVec::from_simple(&finite)?)?;
                let consistent = fin(b.components()[0].clone()) == m.lintegral(&finite)?;
                let chain: Vec<SimpleFunc> =
                    (1..=4).map(|k| finite.scale(&fin(Rat::new(k, 4)))).collect::<Result<_>>()?;
                let mono = m.monotone_convergence_check(&chain, None, None)?.passed();
                Ok(vec![
                    Record::new(0, "∫⁻(f+h) = ∫⁻f + ∫⁻h").input("f", format!("{f:?}")).input("h", format!("{h:?}")).pass_if(add),
                    Record::new(0, "∫⁻cf = c∫⁻f").input("c", &c).pass_if(scale),
                    Record::new(0, "Bochner integral of a real step function = ∫⁻").pass_if(consistent),
                    Record::new(0, "monotone chain").pass_if(mono),
                ])
            })?;
            Ok(CheckReport::with_records("integrals", recs.into_iter().flatten()))
        }));
        out.push(guard("regularity", || {
            let sets = cases(seed, &format!("{tag}/reg"), 20, |rng, _| {
                Ok((
                    sample::compact(rng, &g, 3, 8),
                    sample::measurable(rng, &g, 3, 8),
                    sample::neighbourhood(rng, &g),
                ))
            })?;
            let (ks, ms, us): (Vec<_>, Vec<_>, Vec<_>) = unzip3(sets);
            m.regular_check(&ks, &ms, &us, &Schedule::dyadic(10), &Rat::dyadic(6))
        }));
        out.push(guard("positivity", || {
            let reps = cases(seed, &format!("{tag}/pos"), 20, |rng, _| {
                let u = sample::neighbourhood(rng, &g);
                let c = Rat::new(rng.random_range(1..=4), 2);
                m.positivity_check(&u, &SimpleFunc::constant_on(&u, fin(c.clone()))?, &c)
            })?;
            Ok(concat("positivity", reps))
        }));
    }
    out
}

fn unzip3<A, B, C>(v: Vec<(A, B, C)>) -> (Vec<A>, Vec<B>, Vec<C>) {
    let mut out = (Vec::new(), Vec::new(), Vec::new());
    for (a, b, c) in v {
        out.0.push(a);
        out.1.push(b);
        out.2.push(c);
    }
    out
}

// ---------------------------------------------------------------- haar

/// Smallest `m` with `ratio^m > span`; covering count of `[a, b]` by
/// open windows of multiplicative width `ratio`, computed by repeated
/// multiplication.
fn mul_cover_oracle(a: &Rat, b: &Rat, ratio: &Rat) -> usize {
    let span = b / a;
    let mut m = 1;
    let mut p = ratio.clone();
    while p <= span {
        p = &p * ratio;
        m += 1;
    }
    m
}

fn haar_index_suite(seed: u64) -> Vec<CheckReport> {
    let additive = guard("index_single_interval", || {
        let recs = cases(seed, "index/add", 200, |rng, _| {
            let pts = sample::grid_points(rng, 2, -6, 6, 8);
            let r = Rat::new(rng.random_range(1..=24), 16);
            let k = closed(pts[0].clone(), pts[1].clone());
            let v = Subset::Intervals(IntervalSet::open(-r.clone(), r.clone())?);
            let got = index_count(&GroupSpec::RealAdd, &k, &v)?;
            let len = &pts[1] - &pts[0];
            let w = &r + &r;
            let want = (&len / &w).floor().to_string().parse::<usize>().expect("small") + 1;
            Ok(Record::new(0, "(K:V) = ⌊len K / len V⌋ + 1")
                .input("K", &k)
                .input("V", &v)
                .value(Quantity::rat("index", &Rat::int(got as i64)))
                .value(Quantity::rat("oracle", &Rat::int(want as i64)))
                .pass_if(got == want))
        })?;
        Ok(CheckReport::with_records("index_single_interval", recs))
    });
    let multiplicative = guard("index_single_interval_mul", || {
        let recs = cases(seed, "index/mul", 200, |rng, _| {
            let pts = sample::grid_points(rng, 2, 1, 12, 8);
            let c = Rat::new(rng.random_range(17..=40), 16);
            let k = closed(pts[0].clone(), pts[1].clone());
            let v = Subset::Intervals(IntervalSet::open(c.checked_recip().expect("c > 0"), c.clone())?);
            let got = index_count(&GroupSpec::PosMul, &k, &v)?;
            let want = mul_cover_oracle(&pts[0], &pts[1], &(&c * &c));
            Ok(Record::new(0, "(K:V) = min{m : c^(2m) > b/a}")
                .input("K", &k)
                .input("V", &v)
                .value(Quantity::rat("index", &Rat::int(got as i64)))
                .value(Quantity::rat("oracle", &Rat::int(want as i64)))
                .pass_if(got == want))
        })?;
        Ok(CheckReport::with_records("index_single_interval_mul", recs))
    });
    let groups = test_groups();
    let witnesses = guard("index_witness", || {
        let recs = cases(seed, "index/witness", 150, |rng, i| {
            let g = &groups[i % groups.len()];
            let k = sample::compact(rng, g, 3, 8);
            let v = if g.is_discrete() && !matches!(g, GroupSpec::IntAdd) {
                sample::neighbourhood(rng, g)
            } else {
                g.shrink_basis(rng.random_range(1..=6))
            };
            let res = index(g, &k, &v)?;
            let x = sample::element(rng, g, 8);
            let shifted = index_count(g, &g.translate_set(&x, &k)?, &v)?;
            Ok(vec![
                Record::new(0, "verified witness of size (K:V)")
                    .input("G", g)
                    .input("K", &k)
                    .input("V", &v)
                    .value(Quantity::rat("index", &Rat::int(res.count as i64)))
                    .pass_if(res.witness.len() == res.count),
                Record::new(0, "(xK:V) = (K:V)")
                    .input("G", g)
                    .input("x", &x)
                    .pass_if(shifted == res.count),
            ])
        })?;
        Ok(CheckReport::with_records("index_witness", recs.into_iter().flatten()))
    });
    let estimate = guard("haar_estimate_invariance", || {
        let k0 = closed(Rat::zero(), Rat::one());
        let sched = Schedule::dyadic(8);
        let recs = cases(seed, "index/estimate", 40, |rng, _| {
            let g = GroupSpec::RealAdd;
            let a = sample::measurable(rng, &g, 3, 8);
            let x = sample::element(rng, &g, 8);
            let e1 = haar_measure_estimate(&g, &k0, &a, 10, &sched)?;
            let e2 = haar_measure_estimate(&g, &k0, &g.translate_set(&x, &a)?, 10, &sched)?;
            Ok(Record::new(0, "μ̂(xA) and μ̂(A) brackets overlap")
                .input("A", &a)
                .input("x", &x)
                .value(Quantity::bracket("mu_A", &e1.lo, &e1.hi))
                .value(Quantity::bracket("mu_xA", &e2.lo, &e2.hi))
                .pass_if(e1.lo <= e2.hi && e2.lo <= e1.hi))
        })?;
        Ok(CheckReport::with_records("haar_estimate_invariance", recs))
    });
    vec![additive, multiplicative, witnesses, estimate]
}

/// Prehaar values on `(ℝ,+)`, `K₀ = [0,1]`, against the single-interval
/// count `(⌊L·2ⁿ⁻¹⌋ + 1)/(2ⁿ⁻¹ + 1)` and the bound `4·2⁻ⁿ⁺¹`.
fn haar_lebesgue_suite() -> Vec<CheckReport> {
    let g = GroupSpec::RealAdd;
    vec![guard("prehaar_lebesgue", || {
        let k0 = PositiveCompact::new(&g, &closed(Rat::zero(), Rat::one()))?;
        let mut rep = CheckReport::new("prehaar_lebesgue");
        for l in ["2", "3", "7/2"] {
            let l = q(l);
            let k = closed(Rat::zero(), l.clone());
            for n in 4..=10u32 {
                let h = prehaar(&g, &k0, &g.shrink_basis(n), &k)?;
                let half = Rat::dyadic(n - 1).checked_recip().expect("nonzero");
                let oracle = Rat::from_bigint((&l * &half).floor() + 1) / (&half + Rat::one());
                let bound = Rat::int(4) * Rat::dyadic(n - 1);
                let err = (&h - &l).abs();
                rep.push(
                    Record::new(0, "|h_Vn([0,L]) − L| ≤ 4·2⁻ⁿ⁺¹")
                        .input("L", &l)
                        .input("n", n)
                        .value(Quantity::rat("prehaar", &h))
                        .value(Quantity::rat("bound", &bound))
                        .residual(err.clone())
                        .pass_if(err <= bound),
                );
                rep.push(
                    Record::new(0, "h_Vn([0,L]) = (⌊L·2ⁿ⁻¹⌋+1)/(2ⁿ⁻¹+1)")
                        .input("L", &l)
                        .input("n", n)
                        .value(Quantity::rat("prehaar", &h))
                        .value(Quantity::rat("oracle", &oracle))
                        .pass_if(h == oracle),
                );
            }
        }
        let h = prehaar(&g, &k0, &g.shrink_basis(10), &closed(Rat::zero(), Rat::int(2)))?;
        rep.push(
            Record::new(0, "h_V10([0,2]) = 1025/513")
                .value(Quantity::rat("prehaar", &h))
                .pass_if(h == q("1025/513")),
        );
        Ok(rep)
    })]
}

fn haar_multiplicative_suite() -> Vec<CheckReport> {
    let g = GroupSpec::PosMul;
    vec![guard("prehaar_multiplicative", || {
        let k0 = PositiveCompact::new(&g, &closed(Rat::one(), Rat::int(2)))?;
        let h = prehaar(&g, &k0, &g.shrink_basis(10), &closed(Rat::one(), Rat::int(4)))?;
        let reference = 4f64.ln() / 2f64.ln();
        let err = (h.to_f64() - reference).abs();
        Ok(CheckReport::with_records(
            "prehaar_multiplicative",
            [Record::new(0, "|h_V10([1,4]) − log 4/log 2| ≤ 0.02")
                .input("K0", "[1,2]")
                .input("K", "[1,4]")
                .value(Quantity::rat("prehaar", &h))
                .value(Quantity::float("reference", reference))
                .value(Quantity::float("error", err))
                .pass_if(err <= 0.02)],
        ))
    })]
}

/// Every `K₀` and every `A` on `S₃` and `ℤ/5`.
fn haar_finite_suite() -> Vec<CheckReport> {
    [GroupSpec::symmetric(3), GroupSpec::cyclic(5)]
        .into_iter()
        .map(|g| {
            let check = format!("haar_finite[{g}]");
            guard(&check.clone(), || {
                let n = g.order().expect("finite");
                let sched = Schedule::default();
                let reps = (1u64..1 << n)
                    .into_par_iter()
                    .map(|m0| -> Result<CheckReport> {
                        let k0 = Subset::Points(FiniteSet::from_mask(n, m0));
                        let recs = (0u64..1 << n)
                            .map(|ma| -> Result<Record> {
                                let a = Subset::Points(FiniteSet::from_mask(n, ma));
                                let est = haar_measure_estimate(&g, &k0, &a, 1, &sched)?;
                                let want = fin(Rat::new(ma.count_ones() as i64, m0.count_ones() as i64));
                                Ok(Record::new(0, "μ̂(A) = |A|/|K₀|")
                                    .input("K0", &k0)
                                    .input("A", &a)
                                    .pass_if(est.exact && est.lo == want && est.hi == want))
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Ok(CheckReport::with_records(check.clone(), recs))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(fold(&check, "μ̂(A) = |A|/|K₀| for all K₀ ≠ ∅ and all A", &[("G", g.to_string())], reps))
            })
        })
        .collect()
}

fn lemma_k0(g: &GroupSpec) -> Subset {
    match g {
        GroupSpec::RealAdd => closed(Rat::zero(), Rat::one()),
        GroupSpec::PosMul => closed(Rat::one(), Rat::int(2)),
        GroupSpec::IntAdd => Subset::Intervals(IntervalSet::half_open(Rat::zero(), Rat::int(3)).expect("nonempty")),
        GroupSpec::Finite(t) => Subset::Points(FiniteSet::new(t.order(), [0, t.order() / 2]).expect("in range")),
    }
}

/// A compact disjoint from `k`.
fn disjoint_compact(rng: &mut ChaCha8Rng, g: &GroupSpec, k: &Subset) -> Result<Subset> {
    let shift = match g {
        GroupSpec::RealAdd => Rat::int(20),
        GroupSpec::IntAdd => Rat::int(40),
        _ => Rat::int(64),
    };
    match g {
        GroupSpec::RealAdd | GroupSpec::IntAdd | GroupSpec::PosMul => {
            g.translate_set(&Element::Num(shift), &sample::compact(rng, g, 2, 8))
        }
        GroupSpec::Finite(t) => {
            let rest = FiniteSet::full(t.order()).difference(k.as_points()?)?;
            let pick: Vec<usize> = rest.iter().filter(|_| rng.random_bool(0.6)).collect();
            let pick = if pick.is_empty() { rest.iter().take(1).collect() } else { pick };
            Ok(Subset::Points(FiniteSet::new(t.order(), pick)?))
        }
    }
}

fn prehaar_lemma_suite(seed: u64) -> Vec<CheckReport> {
    let mut out = Vec::new();
    for g in test_groups() {
        let k0 = lemma_k0(&g);
        let tag = format!("lemma[{g}]");
        out.push(guard(&format!("prehaar_properties[{g}]"), || {
            let k0 = PositiveCompact::new(&g, &k0)?;
            let reps = cases(seed, &format!("{tag}/prehaar"), 200, |rng, i| {
                let u = match g {
                    GroupSpec::Finite(_) => sample::neighbourhood(rng, &g),
                    _ => g.shrink_basis(rng.random_range(2..=8)),
                };
                let k = sample::compact(rng, &g, 3, 8);
                let k2 = if i % 2 == 0 { disjoint_compact(rng, &g, &k)? } else { sample::compact(rng, &g, 3, 8) };
                let x = sample::element(rng, &g, 8);
                prehaar_properties_check(&g, &k0, &u, &[PrehaarCase { k, k2, x }])
            })?;
            Ok(concat(&format!("prehaar_properties[{g}]"), reps))
        }));
        out.push(guard(&format!("chaar_properties[{g}]"), || {
            let pk0 = PositiveCompact::new(&g, &k0)?;
            let blocks = cases(seed, &format!("{tag}/chaar"), 12, |rng, _| {
                let k = g.normalize(&sample::compact(rng, &g, 3, 8))?;
                let xk = g.translate_set(&sample::element(rng, &g, 8), &k)?;
                let k2 = g.normalize(&disjoint_compact(rng, &g, &k)?)?;
                let u = k.union(&k2)?;
                Ok(vec![k, xk, k2, u])
            })?;
            let mut sets: Vec<Subset> = vec![k0.clone()];
            for s in blocks.into_iter().flatten() {
                if !sets.contains(&s) {
                    sets.push(s);
                }
            }
            let est = chaar_estimate(&g, &pk0, &sets, 10)?;
            let mut rep = chaar_properties_check(&g, &est, &est.cauchy_gap)?;
            rep.push(
                Record::new(0, "Cauchy gap over n = 8..10")
                    .input("G", &g)
                    .value(Quantity::rat("cauchy_gap", &est.cauchy_gap))
                    .verdict(Verdict::Exempt),
            );
            Ok(rep)
        }));
    }
    out
}

// ---------------------------------------------------------------- extension

fn extension_suite(seed: u64) -> Vec<CheckReport> {
    let groups = [GroupSpec::RealAdd, GroupSpec::PosMul];
    let contents: Vec<PrehaarContent> =
        groups.iter().map(|g| PrehaarContent::new(g, &lemma_k0(g), 10).expect("positive compact")).collect();
    let sched = Schedule::dyadic(6);
    let sandwich = guard("sandwich", || {
        let recs = cases(seed, "extension/sandwich", 100, |rng, i| {
            let h = &contents[i % 2];
            let g = h.group();
            let k = sample::compact(rng, g, 3, 8);
            let interior = Subset::Intervals(k.as_intervals()?.interior());
            let hk = h.content(&k)?;
            let inner = inner_content(h, &interior, &sched)?;
            let outer = outer_measure_from_content(h, &k, &sched)?;
            let gaps = &inner.last_step + &outer.last_step;
            let ok = inner.last <= &hk + &gaps && hk <= &outer.last + &gaps;
            Ok(vec![
                Record::new(0, "μ(int K) ≤ h(K) ≤ μ(K)")
                    .input("G", g)
                    .input("K", &k)
                    .value(Quantity::ext("mu_interior", &inner.last))
                    .value(Quantity::ext("h_K", &hk))
                    .value(Quantity::ext("mu_K", &outer.last))
                    .value(Quantity::ext("gaps", &gaps))
                    .pass_if(ok),
                Record::new(0, "inner nondecreasing, outer nonincreasing in ε")
                    .input("G", g)
                    .input("K", &k)
                    .pass_if(inner.is_nondecreasing() && outer.is_nonincreasing()),
            ])
        })?;
        Ok(CheckReport::with_records("sandwich", recs.into_iter().flatten()))
    });
    let cara = guard("caratheodory", || {
        let reps = cases(seed, "extension/caratheodory", 100, |rng, i| {
            let h = &contents[i % 2];
            let g = h.group();
            let a = sample::measurable(rng, g, 3, 8);
            let p = sample::measurable(rng, g, 3, 8);
            let m = ContentOuter { content: h, schedule: sched.clone() };
            let mut rep = caratheodory_check(&m, &a, std::slice::from_ref(&p), &Rat::zero())?;
            for s in [&a, &p] {
                let inner = inner_content(h, &Subset::Intervals(s.as_intervals()?.interior()), &sched)?;
                let outer = outer_measure_from_content(h, s, &sched)?;
                rep.push(
                    Record::new(0, "inner nondecreasing, outer nonincreasing in ε")
                        .input("G", g)
                        .input("A", s)
                        .pass_if(inner.is_nondecreasing() && outer.is_nonincreasing()),
                );
            }
            Ok(rep)
        })?;
        Ok(concat("caratheodory", reps))
    });
    vec![sandwich, cara]
}

// ---------------------------------------------------------------- product

fn product_suite(seed: u64) -> Vec<CheckReport> {
    let scales = lebesgue_scales();
    let mut out = Vec::new();
    let lebesgue = cases(seed, "product/lebesgue", 500, |rng, _| {
        let (s1, s2) = (pick(rng, &scales), pick(rng, &scales));
        let (mu, nu) = (Measure::lebesgue(s1.clone()), Measure::lebesgue(s2.clone()));
        let g = GroupSpec::RealAdd;
        let x = sample::measurable(rng, &g, 3, 4);
        let y = sample::measurable(rng, &g, 3, 4);
        let region = Region::Rects(sample::rect_union(rng, 3, 4));
        let f = sample::simple_func_2d(rng, 3, 4, 0.1);
        let v = sample::step_vec_2d(rng, 3, 2, 4);
        Ok([
            guard("rectangle_law", || rectangle_law_check(&mu, &nu, &[(x, y)])),
            guard("transpose_symmetry", || symmetric_formula_check(&mu, &nu, &region)),
            guard("tonelli", || tonelli_check(&mu, &nu, &f)),
            guard("fubini_integrability", || fubini_integrability_check(&mu, &nu, &v)),
            guard("fubini", || fubini_check(&mu, &nu, &v)),
            guard("sweep_oracle", || sweep_oracle_check(&mu, &nu, (&s1, &s2), &f, &v)),
        ])
    });
    match lebesgue {
        Ok(rows) => {
            let names = ["rectangle_law", "transpose_symmetry", "tonelli", "fubini_integrability", "fubini", "sweep_oracle"];
            let mut cols: Vec<Vec<CheckReport>> = vec![Vec::new(); names.len()];
            for row in rows {
                for (c, r) in cols.iter_mut().zip(row) {
                    c.push(r);
                }
            }
            for (n, c) in names.iter().zip(cols) {
                out.push(concat(&format!("{n}[lebesgue]"), c));
            }
        }
        Err(e) => out.push(guard("product[lebesgue]", || Err(e))),
    }
    out.extend(s3_product_checks());
    out
}

/// `scale_μ·len(X) · scale_ν·len(Y)` summed over the slabs of a region.
fn slab_area(scales: (&Rat, &Rat), r: &Region) -> Result<ExtNonneg> {
    let Region::Rects(u) = r else {
        return Err(Error::Domain("oracle needs a rectangle union".into()));
    };
    Ok(u.slab_decompose()
        .iter()
        .map(|(x, y)| fin(scales.0.clone()) * x.length() * (fin(scales.1.clone()) * y.length()))
        .sum())
}

/// Double integrals against the piece-area sums, without slicing.
fn sweep_oracle_check(
    mu: &Measure,
    nu: &Measure,
    scales: (&Rat, &Rat),
    f: &SimpleFunc2D,
    v: &StepFuncVec2D,
) -> Result<CheckReport> {
    let mut want = ExtNonneg::zero();
    for (r, c) in f.pieces() {
        want = want + slab_area(scales, r)? * c.clone();
    }
    let t = crate::product::tonelli(mu, nu, f)?;
    let mut want_v = VecQ::zeros(v.dim());
    for (r, c) in v.pieces() {
        let a = slab_area(scales, r)?;
        let a = a.as_finite().ok_or_else(|| Error::Domain("unbounded piece".into()))?;
        want_v = want_v.checked_add(&c.scale(a))?;
    }
    let fv = crate::product::fubini(mu, nu, v)?;
    Ok(CheckReport::with_records(
        "sweep_oracle",
        [
            Record::new(0, "∫∫⁻f = Σ value·area")
                .value(Quantity::ext("tonelli", &t.double))
                .value(Quantity::ext("oracle", &want))
                .pass_if(t.double == want && t.iter_x == want && t.iter_y == want),
            Record::new(0, "∫∫f = Σ value·area")
                .value(Quantity::vector("fubini", &fv.double))
                .value(Quantity::vector("oracle", &want_v))
                .pass_if(fv.double == want_v && fv.iter_x == want_v && fv.iter_y == want_v),
        ],
    ))
}

/// `S₃ × S₃` with counting and `3/2`·counting: every rectangle
/// `χ_{A×B}`, and every function constant on the four products of `A₃`
/// cosets with values in `{0, 1, 2, ∞}` (vector analogue
/// `{0, (1,0), (−1,2), (0,−3)}`).
fn s3_product_checks() -> Vec<CheckReport> {
    let g = GroupSpec::symmetric(3);
    let n = 6;
    let mu = counting(&g, Rat::one());
    let nu = counting(&g, q("3/2"));
    let rects = guard("rectangles[S3xS3]", || {
        let reps = (0u64..1 << (2 * n))
            .into_par_iter()
            .map(|m| -> Result<CheckReport> {
                let a = Subset::Points(FiniteSet::from_mask(n, m & 63));
                let b = Subset::Points(FiniteSet::from_mask(n, m >> 6));
                let f = SimpleFunc2D::indicator(&rectangle(&a, &b)?)?;
                let v = StepFuncVec2D::from_simple(&f)?;
                Ok(concat(
                    "rectangles",
                    [
                        rectangle_law_check(&mu, &nu, &[(a.clone(), b.clone())])?,
                        symmetric_formula_check(&mu, &nu, &rectangle(&a, &b)?)?,
                        tonelli_check(&mu, &nu, &f)?,
                        fubini_integrability_check(&mu, &nu, &v)?,
                        fubini_check(&mu, &nu, &v)?,
                    ],
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(fold("rectangles[S3xS3]", "rectangle law, transpose, Tonelli, Fubini on every χ_{A×B}", &[], reps))
    });
    let cosets = guard("coset_functions[S3xS3]", || {
        let t = g.table().expect("finite");
        let even: Vec<usize> = (0..n).map(|y| t.mul(y, y)).collect();
        let a3 = FiniteSet::new(n, even)?;
        let odd = FiniteSet::full(n).difference(&a3)?;
        let cells: Vec<Region> = [(&a3, &a3), (&a3, &odd), (&odd, &a3), (&odd, &odd)]
            .iter()
            .map(|(x, y)| Ok(Region::Pairs(FinitePairSet::product(x, y)?)))
            .collect::<Result<_>>()?;
        let vals = [ExtNonneg::zero(), ExtNonneg::one(), ExtNonneg::int(2), ExtNonneg::Infinity];
        let vecs = [VecQ::from_ints(&[0, 0]), VecQ::from_ints(&[1, 0]), VecQ::from_ints(&[-1, 2]), VecQ::from_ints(&[0, -3])];
        let reps = (0usize..256)
            .into_par_iter()
            .map(|code| -> Result<CheckReport> {
                let digit = |c: usize| (code >> (2 * c)) & 3;
                let f = SimpleFunc2D::new((0..4).map(|c| (cells[c].clone(), vals[digit(c)].clone())).collect())?;
                let v = StepFuncVec2D::new(2, (0..4).map(|c| (cells[c].clone(), vecs[digit(c)].clone())).collect())?;
                Ok(concat(
                    "coset_functions",
                    [
                        tonelli_check(&mu, &nu, &f)?,
                        fubini_integrability_check(&mu, &nu, &v)?,
                        fubini_check(&mu, &nu, &v)?,
                    ],
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(fold("coset_functions[S3xS3]", "Tonelli and Fubini on all 256 coset step functions", &[], reps))
    });
    vec![rects, cosets]
}

// ---------------------------------------------------------------- transforms

fn transforms_suite(seed: u64) -> Vec<CheckReport> {
    let mut out = Vec::new();
    for g in [GroupSpec::cyclic(2), GroupSpec::cyclic(3), GroupSpec::cyclic(4), GroupSpec::klein()] {
        let check = format!("measure_preserving[{g}]");
        out.push(guard(&check.clone(), || {
            let n = g.order().expect("finite");
            let (mu, nu) = (counting(&g, Rat::one()), counting(&g, q("2")));
            let total = 1u64 << (n * n);
            let chunk = 1024u64;
            let reps = (0..total.div_ceil(chunk))
                .into_par_iter()
                .map(|c| {
                    let regions = (c * chunk..((c + 1) * chunk).min(total))
                        .map(|m| pair_region(&g, m))
                        .collect::<Result<Vec<_>>>()?;
                    measure_preserving_check(&g, &mu, &nu, &regions)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(fold(&check, "S and T preserve μ×ν on every A ⊆ G×G", &[("subsets", total.to_string())], reps))
        }));
    }
    out.push(guard("measure_preserving[S3]", || {
        let g = GroupSpec::symmetric(3);
        let regions = cases(seed, "transforms/s3", 1000, |rng, _| Ok(Region::Pairs(sample::pair_set(rng, 6))))?;
        measure_preserving_check(&g, &counting(&g, Rat::one()), &counting(&g, q("1/3")), &regions)
    }));
    out.push(guard("measure_preserving[real_add]", || {
        let scales = lebesgue_scales();
        let reps = cases(seed, "transforms/real", 200, |rng, _| {
            let (mu, nu) = (Measure::lebesgue(pick(rng, &scales)), Measure::lebesgue(pick(rng, &scales)));
            let region = Region::Rects(sample::rect_union(rng, 3, 4));
            measure_preserving_check(&GroupSpec::RealAdd, &mu, &nu, &[region])
        })?;
        Ok(concat("measure_preserving[real_add]", reps))
    }));
    out.push(guard("key_identity", || {
        let groups = [GroupSpec::RealAdd, GroupSpec::IntAdd, GroupSpec::symmetric(3)];
        let scales = lebesgue_scales();
        let reps = cases(seed, "transforms/key", 200, |rng, i| {
            let g = &groups[i % 3];
            let (s1, s2) = (pick(rng, &scales), pick(rng, &scales));
            let (mu, nu) = match g {
                GroupSpec::RealAdd => (Measure::lebesgue(s1), Measure::lebesgue(s2)),
                _ => (counting(g, s1), counting(g, s2)),
            };
            let k = sample::compact(rng, g, 2, 4);
            let f = sample::simple_func(rng, g, 3, 4, 0.1);
            key_identity_check(g, &mu, &nu, &k, &f)
        })?;
        Ok(concat("key_identity", reps))
    }));
    let sched = Schedule::default();
    out.push(guard("uniqueness[real_add]", || {
        let g = GroupSpec::RealAdd;
        let sets = cases(seed, "transforms/unique_real", 60, |rng, _| Ok(sample::measurable(rng, &g, 3, 8)))?;
        uniqueness_check(&g, &Measure::lebesgue(q("5/2")), &lemma_k0(&g), &sets, 10, &sched, &Rat::zero())
    }));
    for g in [GroupSpec::symmetric(3), GroupSpec::cyclic(5), GroupSpec::IntAdd] {
        let check = format!("uniqueness[{g}]");
        out.push(guard(&check.clone(), || {
            let nu = counting(&g, q("3"));
            let sets: Vec<Subset> = match g.order() {
                Some(n) => (0u64..1 << n).map(|m| Subset::Points(FiniteSet::from_mask(n, m))).collect(),
                None => cases(seed, "transforms/unique_int", 40, |rng, _| Ok(sample::measurable(rng, &g, 3, 1)))?,
            };
            let mut rep = uniqueness_check(&g, &nu, &lemma_k0(&g), &sets, 1, &sched, &Rat::zero())?;
            let max = rep.summary().max_residual.unwrap_or_else(Rat::zero);
            rep.push(
                Record::new(0, "residual exactly 0")
                    .input("G", &g)
                    .value(Quantity::rat("max_residual", &max))
                    .pass_if(max.is_zero()),
            );
            Ok(rep)
        }));
    }
    out.push(guard("inversion_duality", || {
        let measures = [
            Measure::lebesgue(q("3/2")),
            Measure::new(GroupSpec::RealAdd, MeasureSpec::dirac(Element::Num(q("1/2"))))?,
            counting(&GroupSpec::symmetric(3), Rat::one()),
        ];
        let reps = cases(seed, "transforms/inversion", 60, |rng, i| {
            let m = &measures[i % 3];
            let g = m.group();
            // Reflection of a half-open set moves its endpoints, where an atom
            // can sit; the atom gets closed sets, whose reflection is exact.
            let a = if i % 3 == 1 { sample::compact(rng, g, 3, 8) } else { sample::measurable(rng, g, 3, 8) };
            inversion_duality_check(g, m, &[(sample::element(rng, g, 8), a)])
        })?;
        Ok(concat("inversion_duality", reps))
    }));
    out.push(guard("right_translate", || {
        let measures = [Measure::lebesgue(Rat::one()), counting(&GroupSpec::symmetric(3), Rat::one())];
        let reps = cases(seed, "transforms/right", 40, |rng, i| {
            let m = &measures[i % 2];
            let g = m.group();
            let a = sample::compact(rng, g, 3, 8);
            let xs: Vec<Element> = (0..3).map(|_| sample::element(rng, g, 8)).collect();
            right_translate_check(g, m, &a, &xs)
        })?;
        Ok(concat("right_translate", reps))
    }));
    out
}

// ---------------------------------------------------------------- negative controls

fn expect_precondition(label: &str, r: Result<impl std::fmt::Debug>) -> Record {
    match r {
        Err(Error::Precondition(msg)) => Record::new(0, label).note(msg),
        Err(e) => Record::new(0, label).verdict(Verdict::Fail).note(format!("wrong error: {e}")),
        Ok(v) => Record::new(0, label).verdict(Verdict::Fail).note(format!("accepted: {v:?}")),
    }
}

fn negative_controls_suite(seed: u64) -> Vec<CheckReport> {
    let g = GroupSpec::RealAdd;
    let dirac = guard("dirac_not_invariant", || {
        let m = Measure::new(g.clone(), MeasureSpec::dirac(Element::Num(Rat::zero())))?;
        let cs = cases(seed, "negative/dirac", 50, |rng, _| {
            Ok((sample::element(rng, &g, 8), sample::measurable(rng, &g, 3, 8)))
        })?;
        let rep = m.left_invariance_check(&cs)?;
        let failed = rep.count(Verdict::Fail);
        Ok(CheckReport::with_records(
            "dirac_not_invariant",
            [Record::new(0, "δ₀ fails left invariance on some case")
                .value(Quantity::rat("failing_cases", &Rat::int(failed as i64)))
                .pass_if(failed >= 1)],
        ))
    });
    let sigma = guard("non_sigma_finite_rejected", || {
        let a = rect(Rat::zero(), Rat::one(), Rat::zero(), Rat::one())?;
        let flagged = Measure::new(g.clone(), MeasureSpec::lebesgue(Rat::one()).not_sigma_finite())?;
        let continuum_count = counting(&g, Rat::one());
        let leb = Measure::lebesgue(Rat::one());
        Ok(CheckReport::with_records(
            "non_sigma_finite_rejected",
            [
                expect_precondition("flagged factor rejected", prod_measure(&flagged, &leb, &a)),
                expect_precondition("counting on ℝ rejected", prod_measure(&leb, &continuum_count, &a)),
            ],
        ))
    });
    let key = guard("key_identity_rejects_null_k", || {
        let k = closed(Rat::zero(), Rat::one());
        let f = SimpleFunc::indicator(&closed(Rat::zero(), Rat::int(2)))?;
        let s3 = GroupSpec::symmetric(3);
        Ok(CheckReport::with_records(
            "key_identity_rejects_null_k",
            [
                expect_precondition(
                    "ν(K) = 0 rejected on ℝ",
                    key_identity_check(&g, &Measure::lebesgue(Rat::one()), &Measure::lebesgue(Rat::zero()), &k, &f),
                ),
                expect_precondition(
                    "ν(K) = 0 rejected on S3",
                    key_identity_check(
                        &s3,
                        &counting(&s3, Rat::one()),
                        &counting(&s3, Rat::zero()),
                        &Subset::Points(FiniteSet::full(6)),
                        &SimpleFunc::indicator(&Subset::Points(FiniteSet::full(6)))?,
                    ),
                ),
            ],
        ))
    });
    let zero = guard("zero_measure_unique", || {
        let sets = cases(seed, "negative/zero", 20, |rng, _| Ok(sample::measurable(rng, &g, 3, 8)))?;
        let rep = uniqueness_check(&g, &Measure::lebesgue(Rat::zero()), &lemma_k0(&g), &sets, 10, &Schedule::default(), &Rat::zero())?;
        Ok(CheckReport::with_records(
            "zero_measure_unique",
            [Record::new(0, "ν = 0 passes uniqueness")
                .value(Quantity::rat("cases", &Rat::int(rep.records.len() as i64)))
                .pass_if(rep.passed() && rep.count(Verdict::Pass) == sets.len())],
        ))
    });
    vec![dirac, sigma, key, zero]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(run_suite("nope", 1).is_err());
        assert!(selftest(1, Some(&["nope".to_string()])).is_err());
    }

    #[test]
    fn fold_keeps_failures() {
        let bad = CheckReport::with_records("c", [Record::new(0, "x").verdict(Verdict::Fail)]);
        let good = CheckReport::with_records("c", [Record::new(0, "x")]);
        let rep = fold("c", "all", &[], [good, bad]);
        assert_eq!(rep.records.len(), 2);
        assert_eq!(rep.records[0].verdict, Verdict::Fail);
    }

    #[test]
    fn oracles() {
        assert_eq!(mul_cover_oracle(&Rat::one(), &Rat::int(4), &Rat::int(2)), 3);
        assert_eq!(mul_cover_oracle(&Rat::one(), &q("15/4"), &Rat::int(2)), 2);
    }

    #[test]
    fn lebesgue_suite_passes() {
        let s = run_suite("haar_lebesgue", 0).unwrap();
        assert!(s.passed(), "{:?}", s.summary);
        assert_eq!(s.summary.pass, 3 * 7 * 2 + 1);
    }
}
