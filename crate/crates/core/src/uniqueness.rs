//! Uniqueness of left-invariant measures as executable checks: the shear
//! maps `S` and `T` preserve `μ×ν`, right translates keep positive measure,
//! the key identity trades ν-integrals for μ-integrals, and any invariant ν
//! equals `ν(K₀)` times the Haar measure normalised at `K₀`.
//!
//! Transform preimages are measured through their sections. On finite
//! groups every pair is enumerated. On ℝ and ℤ the section of `S⁻¹(A)` at
//! `x` is `x⁻¹·A_x` and that of `T⁻¹(A)` is `A^{x⁻¹}·x⁻¹`; their measures
//! are read at two points of every cell of a breakpoint partition, and the
//! evaluation is refused unless both readings agree.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};
use crate::haar::{haar_measure_estimate, Schedule};
use crate::measure::Measure;
use crate::numeric::{Bound, ExtNonneg, Rat};
use crate::product::{prod_measure, region_slice};
use crate::report::{CheckReport, Quantity, Record, Verdict};
use crate::setalg::{x_cells, FinitePairSet, IntervalSet, Kind, Region, RectUnion, Subset};
use crate::simple::SimpleFunc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TransformKind {
    /// `(x, y) ↦ (x, x·y)`.
    S,
    /// `(x, y) ↦ (y·x, x⁻¹)`.
    T,
    /// `(x, y) ↦ (y, x)`.
    R,
    /// `(x, y) ↦ (x, x⁻¹·y)`.
    SInv,
}

impl TransformKind {
    pub fn apply(self, g: &GroupSpec, x: &Element, y: &Element) -> Result<(Element, Element)> {
        Ok(match self {
            TransformKind::S => (x.clone(), g.op(x, y)?),
            TransformKind::T => (g.op(y, x)?, g.inverse(x)?),
            TransformKind::R => (y.clone(), x.clone()),
            TransformKind::SInv => (x.clone(), g.op(&g.inverse(x)?, y)?),
        })
    }
}

/// `{(x, y) : kind(x, y) ∈ A}` on a finite group.
pub fn finite_preimage(g: &GroupSpec, kind: TransformKind, a: &FinitePairSet) -> Result<FinitePairSet> {
    let n = g.order().ok_or_else(|| Error::Domain(format!("{g} is not finite")))?;
    if a.carrier() != n {
        return Err(Error::Domain(format!("pair set over {} points, group of order {n}", a.carrier())));
    }
    let mut pairs = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let (u, v) = kind.apply(g, &Element::Idx(x), &Element::Idx(y))?;
            if a.contains(u.idx().expect("finite"), v.idx().expect("finite")) {
                pairs.push((x, y));
            }
        }
    }
    FinitePairSet::new(n, pairs)
}

fn unsupported(what: &str, m: &Measure) -> Error {
    Error::Unsupported(format!(
        "{what} needs a translation-invariant measure on {}, got {:?}",
        m.group(),
        m.spec()
    ))
}

/// Section of `kind⁻¹(A)` at `x`.
fn preimage_section(g: &GroupSpec, kind: TransformKind, a: &RectUnion, at: &Rat) -> Result<Subset> {
    let x = Element::Num(at.clone());
    let col = |v: &Rat| -> Result<Subset> { Ok(Subset::Intervals(a.transpose()?.slice_x(v))) };
    let row = Subset::Intervals(a.slice_x(at));
    match kind {
        TransformKind::S => g.preimage_translate(&x, &row),
        TransformKind::SInv => g.translate_set(&x, &row),
        TransformKind::R => col(at),
        TransformKind::T => {
            let xinv = g.inverse(&x)?;
            let xr = xinv.num().expect("interval group").clone();
            g.translate_set_right(&col(&xr)?, &xinv)
        }
    }
}

fn breakpoints(g: &GroupSpec, kind: TransformKind, a: &RectUnion) -> Result<Vec<Rat>> {
    let ends = |u: &RectUnion| -> Vec<Rat> {
        u.slabs().iter().flat_map(|s| [s.x.0.fin().cloned(), s.x.1.fin().cloned()]).flatten().collect()
    };
    let mut pts = match kind {
        TransformKind::S | TransformKind::SInv => ends(a),
        TransformKind::R => ends(&a.transpose()?),
        TransformKind::T => {
            let mut out = Vec::new();
            for b in ends(&a.transpose()?) {
                let inv = g.inverse(&Element::Num(b.clone()))?.num().expect("interval group").clone();
                if g.is_discrete() {
                    out.push(&inv + Rat::one());
                }
                out.push(inv);
            }
            out
        }
    };
    pts.sort();
    pts.dedup();
    Ok(pts)
}

/// Two sample points of a cell, inside the group.
fn cell_samples(g: &GroupSpec, cell: &(Bound, Bound)) -> [Rat; 2] {
    let one = Rat::one();
    match (cell, g.is_discrete()) {
        ((Bound::NegInf, Bound::PosInf), _) => [Rat::zero(), one],
        ((Bound::NegInf, Bound::Fin(d)), _) => [d - &one, d - Rat::int(2)],
        ((Bound::Fin(c), Bound::PosInf), true) => [c.clone(), c + &one],
        ((Bound::Fin(c), Bound::PosInf), false) => [c + &one, c + Rat::int(2)],
        ((Bound::Fin(c), Bound::Fin(d)), true) => [c.clone(), d - &one],
        ((Bound::Fin(c), Bound::Fin(d)), false) => {
            let m = c.midpoint(d);
            [m.clone(), c.midpoint(&m)]
        }
        _ => unreachable!("cells are nonempty"),
    }
}

/// `(μ×ν)(kind⁻¹(A))`.
pub fn transform_preimage_measure(
    g: &GroupSpec,
    kind: TransformKind,
    mu: &Measure,
    nu: &Measure,
    a: &Region,
) -> Result<ExtNonneg> {
    match a {
        Region::Pairs(p) => prod_measure(mu, nu, &Region::Pairs(finite_preimage(g, kind, p)?)),
        Region::Rects(u) => {
            for m in [mu, nu] {
                if !m.is_invariant_family() || m.group() != g {
                    return Err(unsupported("exact evaluation of transform preimages", m));
                }
            }
            let mut pieces = Vec::new();
            for (cell, _) in x_cells(&breakpoints(g, kind, u)?) {
                let [p, q] = cell_samples(g, &cell);
                let vp = nu.eval(&preimage_section(g, kind, u, &p)?)?;
                let vq = nu.eval(&preimage_section(g, kind, u, &q)?)?;
                if vp != vq {
                    return Err(Error::Unsupported(format!(
                        "section measure is not constant on the cell {cell:?}: {vp} vs {vq}"
                    )));
                }
                let set = IntervalSet::new(Kind::HalfOpen, vec![cell])?;
                pieces.push((Subset::Intervals(set), vp));
            }
            mu.lintegral(&SimpleFunc::new(pieces)?)
        }
    }
}

/// Per region: `(μ×ν)(S⁻¹A) = (μ×ν)(T⁻¹A) = (μ×ν)(A)`; on finite groups
/// also `T = S⁻¹∘R∘S∘R` pointwise. Measures outside the invariant family
/// get an unsupported verdict.
pub fn measure_preserving_check(g: &GroupSpec, mu: &Measure, nu: &Measure, cases: &[Region]) -> Result<CheckReport> {
    let mut rep = CheckReport::new("measure_preserving");
    if let Some(n) = g.order() {
        let mut ok = true;
        for x in 0..n {
            for y in 0..n {
                let (x, y) = (Element::Idx(x), Element::Idx(y));
                let direct = TransformKind::T.apply(g, &x, &y)?;
                let (a, b) = TransformKind::R.apply(g, &x, &y)?;
                let (a, b) = TransformKind::S.apply(g, &a, &b)?;
                let (a, b) = TransformKind::R.apply(g, &a, &b)?;
                ok &= direct == TransformKind::SInv.apply(g, &a, &b)?;
            }
        }
        rep.push(Record::new(0, "T = S⁻¹∘R∘S∘R").input("G", g).pass_if(ok));
    }
    let invariant = mu.is_invariant_family() && nu.is_invariant_family();
    let records = cases
        .par_iter()
        .map(|a| -> Result<Vec<Record>> {
            let label = |k: TransformKind| format!("(μ×ν)({k:?}⁻¹A) = (μ×ν)(A)");
            let tag = |r: Record| r.input("A", format!("{a:?}"));
            if !invariant {
                return Ok([TransformKind::S, TransformKind::T]
                    .map(|k| {
                        tag(Record::new(0, label(k)))
                            .verdict(Verdict::Unsupported)
                            .note("measures outside the translation-invariant family")
                    })
                    .to_vec());
            }
            let base = prod_measure(mu, nu, a)?;
            [TransformKind::S, TransformKind::T]
                .iter()
                .map(|&k| {
                    let r = tag(Record::new(0, label(k)));
                    Ok(match transform_preimage_measure(g, k, mu, nu, a) {
                        Ok(v) => {
                            let mut r = r.value(Quantity::ext("preimage", &v)).value(Quantity::ext("product", &base));
                            if let Some(res) = v.abs_diff(&base).as_finite() {
                                r = r.residual(res.clone());
                            }
                            r.pass_if(v == base)
                        }
                        Err(Error::Unsupported(msg)) => r.verdict(Verdict::Unsupported).note(msg),
                        Err(e) => return Err(e),
                    })
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    for r in records.into_iter().flatten() {
        rep.push(r);
    }
    Ok(rep)
}

/// Exact equality, or overlapping brackets for estimates.
fn same_measure(m: &Measure, a: &Subset, b: &Subset) -> Result<(bool, ExtNonneg, ExtNonneg)> {
    let (lo1, hi1) = m.eval_bracket(a)?;
    let (lo2, hi2) = m.eval_bracket(b)?;
    let ok = if m.is_exact() { lo1 == lo2 } else { lo1 <= hi2 && lo2 <= hi1 };
    Ok((ok, lo1, lo2))
}

/// `μ(A⁻¹) > 0` and `μ(A·x) > 0` for each `x`, given `μ(A) > 0`; the
/// values `x ↦ μ(A·x)` are reported.
pub fn right_translate_check(g: &GroupSpec, mu: &Measure, a: &Subset, xs: &[Element]) -> Result<CheckReport> {
    let a = g.normalize(a)?;
    let (mu_a, _) = mu.eval_bracket(&a)?;
    if mu_a.is_zero() {
        return Err(Error::Precondition(format!("μ({a}) = 0")));
    }
    let mut rep = CheckReport::new("right_translate");
    let inv = mu.eval(&g.invert_set(&a)?)?;
    rep.push(Record::new(0, "μ(A⁻¹) > 0").input("A", &a).value(Quantity::ext("mu_A_inv", &inv)).pass_if(!inv.is_zero()));
    for x in xs {
        let ax = g.translate_set_right(&a, x)?;
        let v = mu.eval(&ax)?;
        rep.push(
            Record::new(0, "μ(A·x) > 0")
                .input("A", &a)
                .input("x", x)
                .value(Quantity::ext("mu_Ax", &v))
                .value(Quantity::ext("mu_A", &mu_a))
                .pass_if(!v.is_zero()),
        );
    }
    Ok(rep)
}

/// Points at which to read `ν(K·y)` on a piece.
fn piece_samples(g: &GroupSpec, s: &Subset) -> Result<Vec<Element>> {
    match s {
        Subset::Points(p) => Ok(p.iter().map(Element::Idx).collect()),
        Subset::Intervals(iv) => Ok(iv
            .intervals()
            .iter()
            .flat_map(|c| cell_samples(g, c))
            .map(Element::Num)
            .collect()),
    }
}

/// Both sides of `μ(K)·∫⁻ f(y⁻¹)/ν(K·y) dν(y) = ∫⁻ f dμ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyIdentity {
    pub lhs: ExtNonneg,
    pub rhs: ExtNonneg,
    /// `y ↦ f(y⁻¹)/ν(K·y)`.
    pub integrand: SimpleFunc,
}

pub fn key_identity(g: &GroupSpec, mu: &Measure, nu: &Measure, k: &Subset, f: &SimpleFunc) -> Result<KeyIdentity> {
    let k = g.normalize(k)?;
    if !g.is_compact(&k) {
        return Err(Error::Precondition(format!("K = {k} must be compact")));
    }
    for m in [mu, nu] {
        if !m.is_invariant_family() || m.group() != g {
            return Err(unsupported("the key identity", m));
        }
    }
    let nu_k = nu.eval(&k)?;
    if nu_k.is_zero() {
        return Err(Error::Precondition(format!("ν(K) = 0 for K = {k}; the identity needs ν(K) > 0")));
    }
    let mut pieces = Vec::new();
    for (s, v) in f.pieces() {
        let s_inv = g.invert_set(&g.normalize(s)?)?;
        let mut readings = Vec::new();
        for y in piece_samples(g, &s_inv)? {
            if g.contains(&s_inv, &y)? {
                readings.push(nu.eval(&g.translate_set_right(&k, &y)?)?);
            }
        }
        readings.dedup();
        let c = match readings.as_slice() {
            [c] => c.clone(),
            [] => continue,
            _ => return Err(Error::Unsupported(format!("ν(K·y) is not constant on {s_inv}"))),
        };
        let Some(c) = c.as_finite().filter(|c| c.is_positive()).cloned() else {
            return Err(Error::Precondition(format!("ν(K·y) = {c} is not in (0, ∞) on {s_inv}")));
        };
        let value = match v {
            ExtNonneg::Finite(q) => ExtNonneg::Finite(q / c),
            ExtNonneg::Infinity => ExtNonneg::Infinity,
        };
        pieces.push((s_inv, value));
    }
    let integrand = SimpleFunc::new(pieces)?;
    let lhs = mu.eval(&k)? * nu.lintegral(&integrand)?;
    let rhs = mu.lintegral(f)?;
    Ok(KeyIdentity { lhs, rhs, integrand })
}

pub fn key_identity_check(g: &GroupSpec, mu: &Measure, nu: &Measure, k: &Subset, f: &SimpleFunc) -> Result<CheckReport> {
    let ki = key_identity(g, mu, nu, k, f)?;
    let mut r = Record::new(0, "μ(K)·∫⁻ f(y⁻¹)/ν(Ky) dν(y) = ∫⁻ f dμ")
        .input("K", k)
        .input("f", format!("{f:?}"))
        .input("integrand", format!("{:?}", ki.integrand))
        .value(Quantity::ext("lhs", &ki.lhs))
        .value(Quantity::ext("rhs", &ki.rhs));
    if let Some(res) = ki.lhs.abs_diff(&ki.rhs).as_finite() {
        r = r.residual(res.clone());
    }
    Ok(CheckReport::with_records("key_identity", [r.pass_if(ki.lhs == ki.rhs)]))
}

/// `|ν(A) − ν(K₀)·μ̂(A)| ≤ tolerance + ν(K₀)·width(μ̂(A))` per test set,
/// with `μ̂` the Haar estimate normalised at `K₀`.
pub fn uniqueness_check(
    g: &GroupSpec,
    nu: &Measure,
    k0: &Subset,
    test_sets: &[Subset],
    n: u32,
    schedule: &Schedule,
    tolerance: &Rat,
) -> Result<CheckReport> {
    if !nu.is_sigma_finite() || !(nu.is_invariant_family() || nu.is_zero_measure()) || nu.group() != g {
        return Err(Error::Precondition(format!("ν = {:?} is not a σ-finite left-invariant measure on {g}", nu.spec())));
    }
    let nu_k0 = nu.eval(k0)?;
    let records = test_sets
        .par_iter()
        .map(|a| -> Result<Record> {
            let est = haar_measure_estimate(g, k0, a, n, schedule)?;
            let nu_a = nu.eval(a)?;
            let scaled = &nu_k0 * &est.point;
            let diff = nu_a.abs_diff(&scaled);
            let allowed = ExtNonneg::Finite(tolerance.clone()) + &nu_k0 * &est.width();
            let mut r = Record::new(0, "ν(A) = ν(K₀)·μ(A)")
                .input("A", a)
                .value(Quantity::ext("nu_A", &nu_a))
                .value(Quantity::ext("nu_K0", &nu_k0))
                .value(Quantity::bracket("haar_A", &est.lo, &est.hi))
                .value(Quantity::ext("allowed", &allowed));
            if let Some(res) = diff.as_finite() {
                r = r.residual(res.clone());
            }
            let ok = if nu_a == scaled { true } else { diff.is_finite() && diff <= allowed };
            Ok(r.pass_if(ok))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CheckReport::with_records("uniqueness", records))
}

/// Per case `(g, A)`: `μ̌̌ = μ` on `A`; `μ(g⁻¹A) = μ(A)` exactly when
/// `μ̌(A⁻¹·g) = μ̌(A⁻¹)`; and outer regularity at `A` for `μ` matches that
/// at `A⁻¹` for `μ̌`.
pub fn inversion_duality_check(g: &GroupSpec, mu: &Measure, cases: &[(Element, Subset)]) -> Result<CheckReport> {
    let check = mu.inverted();
    let schedule = Schedule::dyadic(8);
    let tol = Rat::dyadic(3);
    let records = cases
        .par_iter()
        .map(|(x, a)| -> Result<Record> {
            let a = g.normalize(a)?;
            let a_inv = g.invert_set(&a)?;
            let twice = check.inverted();
            let involution = twice.eval_bracket(&a)? == mu.eval_bracket(&a)? && twice == *mu;
            let (left, _, _) = same_measure(mu, &g.preimage_translate(x, &a)?, &a)?;
            let (right, _, _) = same_measure(&check, &g.translate_set_right(&a_inv, x)?, &a_inv)?;
            let reg = |m: &Measure, s: &Subset| -> Result<Verdict> {
                Ok(m.regular_check(&[], std::slice::from_ref(s), &[], &schedule, &tol)?.records[0].verdict)
            };
            let (reg_mu, reg_check) = (reg(mu, &a)?, reg(&check, &a_inv)?);
            Ok(Record::new(0, "inversion duality")
                .input("g", x)
                .input("A", &a)
                .value(Quantity::flag("involution", involution))
                .value(Quantity::flag("left_invariant", left))
                .value(Quantity::flag("check_right_invariant", right))
                .value(Quantity::flag("regular", reg_mu == Verdict::Pass))
                .value(Quantity::flag("check_regular", reg_check == Verdict::Pass))
                .pass_if(involution && left == right && reg_mu == reg_check))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CheckReport::with_records("inversion_duality", records))
}

/// `Region` of `A ⊆ G×G` from a bitmask over pairs, for finite groups.
pub fn pair_region(g: &GroupSpec, mask: u64) -> Result<Region> {
    let n = g.order().ok_or_else(|| Error::Domain(format!("{g} is not finite")))?;
    Ok(Region::Pairs(FinitePairSet::from_mask(n, mask)))
}

/// Sections of `kind⁻¹(A)` as a check on [`region_slice`]: for finite
/// groups, the section at `x` of the enumerated preimage.
pub fn finite_section(g: &GroupSpec, kind: TransformKind, a: &FinitePairSet, x: usize) -> Result<Subset> {
    region_slice(&Region::Pairs(finite_preimage(g, kind, a)?), &Element::Idx(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::MeasureSpec;
    use crate::product::rect;
    use crate::setalg::FiniteSet;

    fn q(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn iv(s: &str) -> Subset {
        Subset::Intervals(s.parse().unwrap())
    }

    #[test]
    fn finite_exhaustive_preservation() {
        let s3 = GroupSpec::symmetric(3);
        let c = Measure::counting(&s3);
        for mask in [0u64, 1, 0b1011, (1 << 36) - 1, 0x5_5555_5555, 0x1234_5678] {
            let a = pair_region(&s3, mask).unwrap();
            for k in [TransformKind::S, TransformKind::T, TransformKind::R, TransformKind::SInv] {
                assert_eq!(
                    transform_preimage_measure(&s3, k, &c, &c, &a).unwrap(),
                    ExtNonneg::int(mask.count_ones() as u64)
                );
            }
        }
        let rep = measure_preserving_check(&s3, &c, &c, &[pair_region(&s3, 0b110101).unwrap()]).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.count(Verdict::Pass), 3);
    }

    #[test]
    fn section_formula_on_finite_groups() {
        let s3 = GroupSpec::symmetric(3);
        let t = s3.table().unwrap();
        let a = FinitePairSet::from_mask(6, 0x9_3a51_c2e7);
        for x in 0..6 {
            let row = Subset::Points(a.slice_x(x));
            let expect = s3.preimage_translate(&Element::Idx(x), &row).unwrap();
            assert_eq!(finite_section(&s3, TransformKind::S, &a, x).unwrap(), expect);
            let xi = t.inv(x);
            let col = Subset::Points(a.transpose().slice_x(xi));
            let expect = s3.translate_set_right(&col, &Element::Idx(xi)).unwrap();
            assert_eq!(finite_section(&s3, TransformKind::T, &a, x).unwrap(), expect);
        }
    }

    #[test]
    fn real_rectangles() {
        let r = GroupSpec::RealAdd;
        let m = Measure::lebesgue(Rat::one());
        let a = rect(q("0"), q("1"), q("0"), q("1")).unwrap();
        assert_eq!(transform_preimage_measure(&r, TransformKind::S, &m, &m, &a).unwrap(), ExtNonneg::one());
        assert_eq!(transform_preimage_measure(&r, TransformKind::T, &m, &m, &a).unwrap(), ExtNonneg::one());
        let empty = Region::Rects(RectUnion::empty());
        assert_eq!(transform_preimage_measure(&r, TransformKind::S, &m, &m, &empty).unwrap(), ExtNonneg::zero());
        let l = rect(q("0"), q("2"), q("0"), q("1/2"))
            .unwrap()
            .combine(&rect(q("1/3"), q("1"), q("1/2"), q("5")).unwrap(), crate::setalg::SetOp::Union)
            .unwrap();
        let nu = Measure::lebesgue(q("3/2"));
        let rep = measure_preserving_check(&r, &m, &nu, &[a, l]).unwrap();
        assert!(rep.passed() && rep.count(Verdict::Pass) == 4, "{rep:?}");
    }

    #[test]
    fn integer_rectangles() {
        let z = GroupSpec::IntAdd;
        let c = Measure::counting(&z);
        let a = rect(q("0"), q("3"), q("-1"), q("2")).unwrap();
        for k in [TransformKind::S, TransformKind::T] {
            assert_eq!(transform_preimage_measure(&z, k, &c, &c, &a).unwrap(), ExtNonneg::int(9));
        }
    }

    #[test]
    fn dirac_is_unsupported() {
        let r = GroupSpec::RealAdd;
        let m = Measure::lebesgue(Rat::one());
        let d = Measure::new(r.clone(), MeasureSpec::dirac(Element::Num(Rat::zero()))).unwrap();
        let rep = measure_preserving_check(&r, &m, &d, &[rect(q("0"), q("1"), q("0"), q("1")).unwrap()]).unwrap();
        assert_eq!(rep.count(Verdict::Unsupported), 2);
        assert_eq!(rep.count(Verdict::Pass), 0);
    }

    #[test]
    fn right_translates() {
        let r = GroupSpec::RealAdd;
        let m = Measure::lebesgue(Rat::one());
        let rep = right_translate_check(&r, &m, &iv("[0,1)"), &[Element::Num(Rat::int(5))]).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.records[1].values[0].exact.as_deref(), Some("1"));
        let s3 = GroupSpec::symmetric(3);
        let a = Subset::Points(FiniteSet::new(6, [1, 2]).unwrap());
        let xs: Vec<Element> = (0..6).map(Element::Idx).collect();
        let rep = right_translate_check(&s3, &Measure::counting(&s3), &a, &xs).unwrap();
        assert!(rep.records[1..].iter().all(|r| r.values[0].exact.as_deref() == Some("2")));
    }

    #[test]
    fn key_identity_examples() {
        let r = GroupSpec::RealAdd;
        let m = Measure::lebesgue(Rat::one());
        let f = SimpleFunc::indicator(&iv("[0,1)")).unwrap();
        let ki = key_identity(&r, &m, &m, &iv("[0,1]"), &f).unwrap();
        assert_eq!((ki.lhs, ki.rhs), (ExtNonneg::one(), ExtNonneg::one()));
        let nu = Measure::lebesgue(Rat::int(3));
        let f = SimpleFunc::indicator(&iv("[0,4)")).unwrap();
        let ki = key_identity(&r, &m, &nu, &iv("[0,2]"), &f).unwrap();
        assert_eq!((ki.lhs, ki.rhs), (ExtNonneg::int(4), ExtNonneg::int(4)));
        let s3 = GroupSpec::symmetric(3);
        let c = Measure::counting(&s3);
        let f = SimpleFunc::new(vec![
            (Subset::Points(FiniteSet::new(6, [1, 4]).unwrap()), ExtNonneg::int(2)),
            (Subset::Points(FiniteSet::new(6, [3]).unwrap()), ExtNonneg::int(7)),
        ])
        .unwrap();
        let ki = key_identity(&s3, &c, &c, &s3.full_set().unwrap(), &f).unwrap();
        assert_eq!((ki.lhs, ki.rhs), (ExtNonneg::int(11), ExtNonneg::int(11)));
    }

    #[test]
    fn key_identity_rejects_null_k() {
        let r = GroupSpec::RealAdd;
        let m = Measure::lebesgue(Rat::one());
        let f = SimpleFunc::indicator(&iv("[0,1)")).unwrap();
        assert!(matches!(key_identity(&r, &m, &m, &iv("[0,0]"), &f), Err(Error::Precondition(_))));
        assert!(matches!(key_identity(&r, &m, &m, &iv("[0,1)"), &f), Err(Error::Precondition(_))));
    }

    #[test]
    fn uniqueness_examples() {
        let r = GroupSpec::RealAdd;
        let nu = Measure::lebesgue(q("5/2"));
        let rep = uniqueness_check(&r, &nu, &iv("[0,1]"), &[iv("[0,3)")], 10, &Schedule::dyadic(10), &Rat::zero()).unwrap();
        assert!(rep.passed(), "{rep:?}");
        let s3 = GroupSpec::symmetric(3);
        let sets: Vec<Subset> = (0..64).map(|m| Subset::Points(FiniteSet::from_mask(6, m))).collect();
        let rep = uniqueness_check(&s3, &Measure::counting(&s3), &s3.full_set().unwrap(), &sets, 1, &Schedule::default(), &Rat::zero())
            .unwrap();
        assert!(rep.passed());
        assert_eq!(rep.summary().max_residual, Some(Rat::zero()));
        let zero = Measure::lebesgue(Rat::zero());
        assert!(uniqueness_check(&r, &zero, &iv("[0,1]"), &[iv("[0,3)")], 4, &Schedule::dyadic(4), &Rat::zero())
            .unwrap()
            .passed());
    }

    #[test]
    fn inversion_duality_examples() {
        let r = GroupSpec::RealAdd;
        let cases = vec![(Element::Num(q("3/4")), iv("[0,1)")), (Element::Num(q("-2")), iv("[1,2) ∪ [5,7)"))];
        let rep = inversion_duality_check(&r, &Measure::lebesgue(Rat::one()), &cases).unwrap();
        assert!(rep.passed(), "{rep:?}");
        let d = Measure::new(r.clone(), MeasureSpec::dirac(Element::Num(Rat::int(1)))).unwrap();
        let cases = vec![(Element::Num(Rat::int(3)), iv("[0,2)"))];
        let rep = inversion_duality_check(&r, &d, &cases).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.records[0].values[1].exact.as_deref(), Some("false"));
        assert_eq!(d.inverted().eval(&iv("[-1,0)")).unwrap(), ExtNonneg::one());
        assert_eq!(d.inverted().eval(&iv("[-2,-1)")).unwrap(), ExtNonneg::zero());
        assert_eq!(d.inverted().eval(&iv("[-1,-1]")).unwrap(), ExtNonneg::one());
    }
}
