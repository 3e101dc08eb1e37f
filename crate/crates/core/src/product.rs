//! Binary product measures through the slice formula
//! `(μ×ν)(A) = ∫⁻ ν(A_x) dμ(x)`, and exact Tonelli/Fubini checks on
//! two-dimensional step functions.
//!
//! Regions are unions of half-open rectangles stored as x-slabs, or sets of
//! pairs of a finite group. On either, the slice `A_x` is constant on the
//! cells of a finite x-partition, so every slice function is a simple
//! function and all integrals reduce to finite sums.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::Element;
use crate::measure::Measure;
use crate::numeric::{ExtNonneg, Rat, VecQ};
use crate::report::{CheckReport, Quantity, Record};
use crate::setalg::{x_cells, FinitePairSet, FiniteSet, IntervalSet, Kind, Region, RectUnion, SetOp, Subset};
use crate::simple::{PieceValue, SimpleFunc, Step, StepFuncVec};

/// Piecewise-constant function on a product: disjoint nonempty regions,
/// nonzero values, one region per value, sorted by value.
#[derive(Clone, PartialEq, Eq)]
pub struct Step2<V> {
    pieces: Vec<(Region, V)>,
}

pub type SimpleFunc2D = Step2<ExtNonneg>;

/// x-cells refining every region, each with a sample point.
fn region_cells(regions: &[&Region]) -> Result<Vec<(Subset, Element)>> {
    let mut pts = Vec::new();
    let mut carrier = None;
    let mut rects = false;
    for r in regions {
        match r {
            Region::Rects(u) => {
                rects = true;
                for s in u.slabs() {
                    pts.extend(s.x.0.fin().cloned());
                    pts.extend(s.x.1.fin().cloned());
                }
            }
            Region::Pairs(p) => {
                if carrier.is_some_and(|c| c != p.carrier()) {
                    return Err(Error::Domain("pair sets over different carriers".into()));
                }
                carrier = Some(p.carrier());
            }
        }
    }
    match (rects, carrier) {
        (true, Some(_)) => Err(Error::Domain("cannot mix rectangle unions and pair sets".into())),
        (true, None) => {
            pts.sort();
            pts.dedup();
            Ok(x_cells(&pts)
                .into_iter()
                .map(|(cell, x)| {
                    let set = IntervalSet::new(Kind::HalfOpen, vec![cell]).expect("nonempty cell");
                    (Subset::Intervals(set), Element::Num(x))
                })
                .collect())
        }
        (false, Some(n)) => Ok((0..n)
            .map(|i| (Subset::Points(FiniteSet::singleton(n, i).expect("in range")), Element::Idx(i)))
            .collect()),
        (false, None) => Ok(Vec::new()),
    }
}

/// `A_x = {y : (x, y) ∈ A}`.
pub fn region_slice(a: &Region, x: &Element) -> Result<Subset> {
    match (a, x) {
        (Region::Rects(u), Element::Num(q)) => Ok(Subset::Intervals(u.slice_x(q))),
        (Region::Pairs(p), Element::Idx(i)) if *i < p.carrier() => Ok(Subset::Points(p.slice_x(*i))),
        _ => Err(Error::Domain(format!("cannot slice {a:?} at {x}"))),
    }
}

/// `X × Y` for half-open interval sets or finite sets.
pub fn rectangle(x: &Subset, y: &Subset) -> Result<Region> {
    match (x, y) {
        (Subset::Intervals(a), Subset::Intervals(b)) => Ok(Region::Rects(RectUnion::from_rects(&[(
            a.to_half_open()?,
            b.to_half_open()?,
        )])?)),
        (Subset::Points(a), Subset::Points(b)) => Ok(Region::Pairs(FinitePairSet::product(a, b)?)),
        _ => Err(Error::Domain("rectangle factors must share a carrier style".into())),
    }
}

impl<V: PieceValue> Step2<V> {
    pub fn new(pieces: Vec<(Region, V)>) -> Result<Step2<V>> {
        let mut kept: Vec<(Region, V)> = Vec::with_capacity(pieces.len());
        for (r, v) in pieces {
            if r.is_empty() {
                continue;
            }
            for (t, _) in &kept {
                if !t.combine(&r, SetOp::Intersect)?.is_empty() {
                    return Err(Error::Domain("overlapping regions".into()));
                }
            }
            kept.push((r, v));
        }
        let mut merged: Vec<(Region, V)> = Vec::new();
        for (r, v) in kept {
            if v.is_zero() {
                continue;
            }
            match merged.iter_mut().find(|(_, w)| *w == v) {
                Some((t, _)) => *t = t.combine(&r, SetOp::Union)?,
                None => merged.push((r, v)),
            }
        }
        merged.sort_by(|a, b| a.1.cmp(&b.1));
        Ok(Step2 { pieces: merged })
    }

    pub fn zero() -> Step2<V> {
        Step2 { pieces: Vec::new() }
    }

    pub fn pieces(&self) -> &[(Region, V)] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    /// `(y, x) ↦ f(x, y)`.
    pub fn transpose(&self) -> Result<Step2<V>> {
        Step2::new(self.pieces.iter().map(|(r, v)| Ok((r.transpose()?, v.clone()))).collect::<Result<_>>()?)
    }

    pub fn map<W: PieceValue>(&self, f: impl Fn(&V) -> W) -> Result<Step2<W>> {
        Step2::new(self.pieces.iter().map(|(r, v)| (r.clone(), f(v))).collect())
    }

    /// The sections `f_x = f(x, ·)`, one per x-cell.
    pub fn sections(&self) -> Result<Vec<(Subset, Step<V>)>> {
        let regions: Vec<&Region> = self.pieces.iter().map(|(r, _)| r).collect();
        region_cells(&regions)?
            .into_iter()
            .map(|(cell, x)| {
                let pieces = self
                    .pieces
                    .iter()
                    .map(|(r, v)| Ok((region_slice(r, &x)?, v.clone())))
                    .collect::<Result<Vec<_>>>()?;
                Ok((cell, Step::new(pieces)?))
            })
            .collect()
    }
}

impl SimpleFunc2D {
    pub fn indicator(a: &Region) -> Result<SimpleFunc2D> {
        SimpleFunc2D::new(vec![(a.clone(), ExtNonneg::one())])
    }
}

/// Vector-valued step function on a product.
#[derive(Clone, PartialEq, Eq)]
pub struct StepFuncVec2D {
    dim: usize,
    inner: Step2<VecQ>,
}

impl StepFuncVec2D {
    pub fn new(dim: usize, pieces: Vec<(Region, VecQ)>) -> Result<StepFuncVec2D> {
        if dim == 0 {
            return Err(Error::Domain("vector dimension must be at least 1".into()));
        }
        if let Some((_, v)) = pieces.iter().find(|(_, v)| v.dim() != dim) {
            return Err(Error::Domain(format!("value {v} does not have dimension {dim}")));
        }
        Ok(StepFuncVec2D { dim, inner: Step2::new(pieces)? })
    }

    pub fn zero(dim: usize) -> StepFuncVec2D {
        StepFuncVec2D { dim, inner: Step2::zero() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[(Region, VecQ)] {
        self.inner.pieces()
    }

    pub fn transpose(&self) -> Result<StepFuncVec2D> {
        Ok(StepFuncVec2D { dim: self.dim, inner: self.inner.transpose()? })
    }

    pub fn norm_fn(&self) -> Result<SimpleFunc2D> {
        self.inner.map(|v| ExtNonneg::Finite(v.norm()))
    }

    pub fn sections(&self) -> Result<Vec<(Subset, StepFuncVec)>> {
        self.inner
            .sections()?
            .into_iter()
            .map(|(cell, s)| Ok((cell, StepFuncVec::new(self.dim, s.pieces().to_vec())?)))
            .collect()
    }

    pub fn from_simple(f: &SimpleFunc2D) -> Result<StepFuncVec2D> {
        let pieces = f
            .pieces()
            .iter()
            .map(|(r, v)| match v {
                ExtNonneg::Finite(q) => Ok((r.clone(), VecQ::new(vec![q.clone()])?)),
                ExtNonneg::Infinity => Err(Error::Domain("infinite value has no vector embedding".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        StepFuncVec2D::new(1, pieces)
    }
}

fn require_sigma_finite(ms: &[&Measure]) -> Result<()> {
    match ms.iter().find(|m| !m.is_sigma_finite()) {
        Some(m) => Err(Error::Precondition(format!(
            "{:?} on {} is not σ-finite; product measures need σ-finite factors",
            m.spec(),
            m.group()
        ))),
        None => Ok(()),
    }
}

/// `x ↦ ν(A_x)`.
pub fn slice_measure_fn(nu: &Measure, a: &Region) -> Result<SimpleFunc> {
    require_sigma_finite(&[nu])?;
    let pieces = region_cells(&[a])?
        .into_iter()
        .map(|(cell, x)| Ok((cell, nu.eval(&region_slice(a, &x)?)?)))
        .collect::<Result<Vec<_>>>()?;
    SimpleFunc::new(pieces)
}

/// `(μ×ν)(A) = ∫⁻ ν(A_x) dμ(x)`.
pub fn prod_measure(mu: &Measure, nu: &Measure, a: &Region) -> Result<ExtNonneg> {
    require_sigma_finite(&[mu, nu])?;
    mu.lintegral(&slice_measure_fn(nu, a)?)
}

/// `∫⁻ f d(μ×ν)` as a sum over the pieces of `f`.
pub fn prod_lintegral(mu: &Measure, nu: &Measure, f: &SimpleFunc2D) -> Result<ExtNonneg> {
    let mut total = ExtNonneg::zero();
    for (r, v) in f.pieces() {
        total = total + prod_measure(mu, nu, r)? * v.clone();
    }
    Ok(total)
}

/// Per case `(X, Y)`: `(μ×ν)(X×Y) = μ(X)·ν(Y)`.
pub fn rectangle_law_check(mu: &Measure, nu: &Measure, cases: &[(Subset, Subset)]) -> Result<CheckReport> {
    let mut rep = CheckReport::new("rectangle_law");
    for (x, y) in cases {
        let lhs = prod_measure(mu, nu, &rectangle(x, y)?)?;
        let rhs = mu.eval(x)? * nu.eval(y)?;
        rep.push(outcome(Record::new(0, "(μ×ν)(X×Y) = μ(X)ν(Y)").input("X", x).input("Y", y), &lhs, &rhs));
    }
    Ok(rep)
}

fn outcome(r: Record, lhs: &ExtNonneg, rhs: &ExtNonneg) -> Record {
    let mut r = r.value(Quantity::ext("lhs", lhs)).value(Quantity::ext("rhs", rhs));
    if let Some(res) = lhs.abs_diff(rhs).as_finite() {
        r = r.residual(res.clone());
    }
    r.pass_if(lhs == rhs)
}

/// `∫⁻ ν(A_x) dμ(x) = ∫⁻ μ(A^y) dν(y)`, the second computed on the transpose.
pub fn symmetric_formula_check(mu: &Measure, nu: &Measure, a: &Region) -> Result<CheckReport> {
    let lhs = prod_measure(mu, nu, a)?;
    let rhs = prod_measure(nu, mu, &a.transpose()?)?;
    let r = Record::new(0, "(μ×ν)(A) = (ν×μ)(Aᵀ)").input("A", format!("{a:?}"));
    Ok(CheckReport::with_records("symmetric_formula", [outcome(r, &lhs, &rhs)]))
}

/// Double integral and both iterated integrals of a nonnegative simple
/// function, with the inner integrals as simple-function witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TonelliValues {
    pub double: ExtNonneg,
    pub iter_x: ExtNonneg,
    pub iter_y: ExtNonneg,
    /// `x ↦ ∫⁻ f(x, y) dν(y)`.
    pub inner_x: SimpleFunc,
    /// `y ↦ ∫⁻ f(x, y) dμ(x)`.
    pub inner_y: SimpleFunc,
}

fn inner_lintegral(nu: &Measure, f: &SimpleFunc2D) -> Result<SimpleFunc> {
    let pieces = f
        .sections()?
        .into_iter()
        .map(|(cell, s)| Ok((cell, nu.lintegral(&s)?)))
        .collect::<Result<Vec<_>>>()?;
    SimpleFunc::new(pieces)
}

pub fn tonelli(mu: &Measure, nu: &Measure, f: &SimpleFunc2D) -> Result<TonelliValues> {
    require_sigma_finite(&[mu, nu])?;
    let double = prod_lintegral(mu, nu, f)?;
    let inner_x = inner_lintegral(nu, f)?;
    let inner_y = inner_lintegral(mu, &f.transpose()?)?;
    Ok(TonelliValues { double, iter_x: mu.lintegral(&inner_x)?, iter_y: nu.lintegral(&inner_y)?, inner_x, inner_y })
}

pub fn tonelli_check(mu: &Measure, nu: &Measure, f: &SimpleFunc2D) -> Result<CheckReport> {
    let t = tonelli(mu, nu, f)?;
    let ok = t.double == t.iter_x && t.iter_x == t.iter_y;
    let res = [&t.iter_x, &t.iter_y].iter().filter_map(|v| t.double.abs_diff(v).as_finite().cloned()).max();
    let mut r = Record::new(0, "∫⁻∫⁻ f d(μ×ν) = ∫⁻(∫⁻ f dν)dμ = ∫⁻(∫⁻ f dμ)dν")
        .input("f", format!("{f:?}"))
        .input("inner_x", format!("{:?}", t.inner_x))
        .input("inner_y", format!("{:?}", t.inner_y))
        .value(Quantity::ext("double", &t.double))
        .value(Quantity::ext("iterated_x", &t.iter_x))
        .value(Quantity::ext("iterated_y", &t.iter_y));
    if let Some(res) = res {
        r = r.residual(res);
    }
    Ok(CheckReport::with_records("tonelli", [r.pass_if(ok)]))
}

/// Integrability of `f` over `μ×ν` and the two sectionwise conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FubiniConditions {
    pub integrable: bool,
    /// `f_x` is ν-integrable off a μ-null set.
    pub sections_integrable: bool,
    /// `x ↦ ∫ ‖f_x‖ dν` is μ-integrable.
    pub norm_integrable: bool,
}

impl FubiniConditions {
    pub fn equivalent(&self) -> bool {
        self.integrable == (self.sections_integrable && self.norm_integrable)
    }
}

pub fn fubini_conditions(mu: &Measure, nu: &Measure, f: &StepFuncVec2D) -> Result<FubiniConditions> {
    require_sigma_finite(&[mu, nu])?;
    let norm = f.norm_fn()?;
    let integrable = prod_lintegral(mu, nu, &norm)?.is_finite();
    let mut bad = Vec::new();
    let mut inner = Vec::new();
    for (cell, s) in f.sections()? {
        if !nu.integrable(&s)? {
            bad.push(cell.clone());
        }
        inner.push((cell, nu.lintegral(&s.norm_fn()?)?));
    }
    let mut bad_measure = ExtNonneg::zero();
    for cell in &bad {
        bad_measure = bad_measure + mu.eval(cell)?;
    }
    let norm_integrable = mu.lintegral(&SimpleFunc::new(inner)?)?.is_finite();
    Ok(FubiniConditions { integrable, sections_integrable: bad_measure.is_zero(), norm_integrable })
}

pub fn fubini_integrability_check(mu: &Measure, nu: &Measure, f: &StepFuncVec2D) -> Result<CheckReport> {
    let c = fubini_conditions(mu, nu, f)?;
    let r = Record::new(0, "integrable ⇔ sections a.e. integrable ∧ ∫‖f_x‖dν integrable")
        .input("f", format!("{f:?}"))
        .value(Quantity::flag("integrable", c.integrable))
        .value(Quantity::flag("sections_integrable", c.sections_integrable))
        .value(Quantity::flag("norm_integrable", c.norm_integrable))
        .pass_if(c.equivalent());
    Ok(CheckReport::with_records("fubini_integrability", [r]))
}

/// Bochner double integral and both iterated integrals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FubiniValues {
    pub double: VecQ,
    pub iter_x: VecQ,
    pub iter_y: VecQ,
    pub inner_x: StepFuncVec,
    pub inner_y: StepFuncVec,
}

fn inner_bintegral(nu: &Measure, f: &StepFuncVec2D) -> Result<StepFuncVec> {
    let pieces = f
        .sections()?
        .into_iter()
        .map(|(cell, s)| Ok((cell, nu.bintegral(&s)?)))
        .collect::<Result<Vec<_>>>()?;
    StepFuncVec::new(f.dim(), pieces)
}

pub fn fubini(mu: &Measure, nu: &Measure, f: &StepFuncVec2D) -> Result<FubiniValues> {
    if !fubini_conditions(mu, nu, f)?.integrable {
        return Err(Error::Precondition(
            "f is not integrable over μ×ν: ∫⁻ ‖f‖ d(μ×ν) = ∞, so the iterated integrals need not agree".into(),
        ));
    }
    let mut double = VecQ::zeros(f.dim());
    for (r, v) in f.pieces() {
        let m = prod_measure(mu, nu, r)?;
        let m = m.as_finite().ok_or_else(|| Error::Invariant("integrable piece of infinite measure".into()))?;
        double = double.checked_add(&v.scale(m))?;
    }
    let inner_x = inner_bintegral(nu, f)?;
    let inner_y = inner_bintegral(mu, &f.transpose()?)?;
    Ok(FubiniValues { double, iter_x: mu.bintegral(&inner_x)?, iter_y: nu.bintegral(&inner_y)?, inner_x, inner_y })
}

pub fn fubini_check(mu: &Measure, nu: &Measure, f: &StepFuncVec2D) -> Result<CheckReport> {
    let v = fubini(mu, nu, f)?;
    let res = v.double.sub(&v.iter_x)?.norm().max(v.double.sub(&v.iter_y)?.norm());
    let r = Record::new(0, "∫ f d(μ×ν) = ∫(∫ f dν)dμ = ∫(∫ f dμ)dν")
        .input("f", format!("{f:?}"))
        .value(Quantity::vector("double", &v.double))
        .value(Quantity::vector("iterated_x", &v.iter_x))
        .value(Quantity::vector("iterated_y", &v.iter_y))
        .residual(res.clone())
        .pass_if(res.is_zero());
    Ok(CheckReport::with_records("fubini", [r]))
}

#[derive(Serialize, Deserialize)]
struct Piece2Repr<V> {
    region: Region,
    value: V,
}

#[derive(Serialize, Deserialize)]
struct Step2Repr<V> {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    pieces: Vec<Piece2Repr<V>>,
}

fn repr<V: Clone>(pieces: &[(Region, V)], dim: Option<usize>) -> Step2Repr<V> {
    Step2Repr {
        dim,
        pieces: pieces.iter().map(|(r, v)| Piece2Repr { region: r.clone(), value: v.clone() }).collect(),
    }
}

impl Serialize for SimpleFunc2D {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        repr(&self.pieces, None).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SimpleFunc2D {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<SimpleFunc2D, D::Error> {
        let r = Step2Repr::<ExtNonneg>::deserialize(d)?;
        SimpleFunc2D::new(r.pieces.into_iter().map(|p| (p.region, p.value)).collect())
            .map_err(serde::de::Error::custom)
    }
}

impl Serialize for StepFuncVec2D {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        repr(self.pieces(), Some(self.dim)).serialize(s)
    }
}

impl<'de> Deserialize<'de> for StepFuncVec2D {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<StepFuncVec2D, D::Error> {
        let r = Step2Repr::<VecQ>::deserialize(d)?;
        let dim = r.dim.or_else(|| r.pieces.first().map(|p| p.value.dim())).unwrap_or(1);
        StepFuncVec2D::new(dim, r.pieces.into_iter().map(|p| (p.region, p.value)).collect())
            .map_err(serde::de::Error::custom)
    }
}

fn show_region(r: &Region) -> String {
    match r {
        Region::Rects(u) => u
            .slabs()
            .iter()
            .map(|s| format!("{}×({})", s.x_set(), s.y))
            .collect::<Vec<_>>()
            .join(" ∪ "),
        Region::Pairs(p) => format!("{:?}", p.pairs()),
    }
}

impl<V: fmt::Debug> fmt::Debug for Step2<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() {
            return f.write_str("0");
        }
        for (i, (r, v)) in self.pieces.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{v:?}·χ[{}]", show_region(r))?;
        }
        Ok(())
    }
}

impl fmt::Debug for StepFuncVec2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ℚ^{}:{:?}", self.dim, self.inner)
    }
}

/// `[x0,x1) × [y0,y1)` as a region.
pub fn rect(x0: Rat, x1: Rat, y0: Rat, y1: Rat) -> Result<Region> {
    Ok(Region::Rects(RectUnion::rect(x0, x1, y0, y1)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::measure::MeasureSpec;

    fn q(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn r(x0: i64, x1: i64, y0: i64, y1: i64) -> Region {
        rect(Rat::int(x0), Rat::int(x1), Rat::int(y0), Rat::int(y1)).unwrap()
    }

    fn leb(s: &str) -> Measure {
        Measure::lebesgue(q(s))
    }

    fn l_shape() -> Region {
        r(0, 2, 0, 1).combine(&r(0, 1, 1, 2), SetOp::Union).unwrap()
    }

    fn iv(s: &str) -> Subset {
        Subset::Intervals(s.parse().unwrap())
    }

    #[test]
    fn slice_functions() {
        let f = slice_measure_fn(&leb("1"), &r(0, 1, 0, 3)).unwrap();
        assert_eq!(f, SimpleFunc::constant_on(&iv("[0,1)"), ExtNonneg::int(3)).unwrap());
        let f = slice_measure_fn(&leb("1"), &l_shape()).unwrap();
        let expect = SimpleFunc::new(vec![(iv("[0,1)"), ExtNonneg::int(2)), (iv("[1,2)"), ExtNonneg::one())]).unwrap();
        assert_eq!(f, expect);
        assert!(slice_measure_fn(&leb("1"), &Region::Rects(RectUnion::empty())).unwrap().is_zero());
    }

    #[test]
    fn product_measure_examples() {
        let m = leb("1");
        assert_eq!(prod_measure(&m, &m, &r(0, 1, 0, 3)).unwrap(), ExtNonneg::int(3));
        assert_eq!(prod_measure(&m, &m, &l_shape()).unwrap(), ExtNonneg::int(3));
        assert_eq!(prod_measure(&m, &m, &Region::Rects(RectUnion::empty())).unwrap(), ExtNonneg::zero());
        let rep = symmetric_formula_check(&leb("2"), &leb("1/3"), &l_shape()).unwrap();
        assert!(rep.passed());
        let rep = rectangle_law_check(&leb("2"), &leb("5"), &[(iv("[0,1) ∪ [2,4)"), iv("[1,3/2)"))]).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.records[0].values[0].exact.as_deref(), Some("15"));
    }

    #[test]
    fn non_sigma_finite_rejected() {
        let bad = Measure::new(GroupSpec::RealAdd, MeasureSpec::counting()).unwrap();
        assert!(matches!(prod_measure(&leb("1"), &bad, &r(0, 1, 0, 1)), Err(Error::Precondition(_))));
        let flagged = Measure::new(GroupSpec::RealAdd, MeasureSpec::lebesgue(Rat::one()).not_sigma_finite()).unwrap();
        assert!(matches!(prod_measure(&flagged, &leb("1"), &r(0, 1, 0, 1)), Err(Error::Precondition(_))));
    }

    #[test]
    fn tonelli_examples() {
        let m = leb("1");
        let t = tonelli(&m, &m, &SimpleFunc2D::indicator(&r(0, 1, 0, 1)).unwrap()).unwrap();
        assert_eq!((t.double.clone(), t.iter_x.clone(), t.iter_y.clone()), (ExtNonneg::one(), ExtNonneg::one(), ExtNonneg::one()));
        let f = SimpleFunc2D::new(vec![(r(0, 1, 0, 2), ExtNonneg::int(2)), (r(1, 2, 0, 1), ExtNonneg::int(3))]).unwrap();
        let t = tonelli(&m, &m, &f).unwrap();
        assert_eq!(t.double, ExtNonneg::int(7));
        assert_eq!(t.iter_x, ExtNonneg::int(7));
        assert_eq!(t.iter_y, ExtNonneg::int(7));
        assert!(tonelli_check(&m, &m, &f).unwrap().passed());
        let inf = SimpleFunc2D::new(vec![(r(0, 1, 0, 1), ExtNonneg::Infinity)]).unwrap();
        let t = tonelli(&m, &m, &inf).unwrap();
        assert!(!t.double.is_finite() && !t.iter_x.is_finite() && !t.iter_y.is_finite());
    }

    fn v2(a: i64, b: i64) -> VecQ {
        VecQ::from_ints(&[a, b])
    }

    #[test]
    fn fubini_examples() {
        let m = leb("1");
        let f = StepFuncVec2D::new(2, vec![(r(0, 1, 0, 1), v2(1, 1)), (r(1, 2, 0, 1), v2(-2, 0))]).unwrap();
        let v = fubini(&m, &m, &f).unwrap();
        assert_eq!(v.double, v2(-1, 1));
        assert_eq!(v.iter_x, v2(-1, 1));
        assert_eq!(v.iter_y, v2(-1, 1));
        assert!(fubini_check(&m, &m, &f).unwrap().passed());
        let z = fubini(&m, &m, &StepFuncVec2D::zero(2)).unwrap();
        assert_eq!(z.double, v2(0, 0));
        assert!(fubini_integrability_check(&m, &m, &StepFuncVec2D::zero(2)).unwrap().passed());
    }

    #[test]
    fn fubini_part_one_with_counting_sections() {
        let mu = leb("1");
        let nu = Measure::counting(&GroupSpec::IntAdd);
        let ray: IntervalSet = "[0,inf)".parse().unwrap();
        let strip = Region::Rects(RectUnion::from_rects(&[("[0,1)".parse().unwrap(), ray.clone())]).unwrap());
        let f = StepFuncVec2D::new(2, vec![(strip, v2(1, 0))]).unwrap();
        let c = fubini_conditions(&mu, &nu, &f).unwrap();
        assert!(!c.integrable && !c.sections_integrable && !c.norm_integrable && c.equivalent());
        assert!(matches!(fubini(&mu, &nu, &f), Err(Error::Precondition(_))));
        let g = StepFuncVec2D::new(2, vec![(r(0, 1, 0, 3), v2(1, 2))]).unwrap();
        let v = fubini(&mu, &nu, &g).unwrap();
        assert_eq!(v.double, v2(3, 6));
        assert_eq!(v.iter_y, v2(3, 6));
    }

    #[test]
    fn finite_products() {
        let s3 = GroupSpec::symmetric(3);
        let c = Measure::counting(&s3);
        let a = Region::Pairs(FinitePairSet::new(6, [(0, 1), (0, 2), (3, 5)]).unwrap());
        assert_eq!(prod_measure(&c, &c, &a).unwrap(), ExtNonneg::int(3));
        assert!(symmetric_formula_check(&c, &c, &a).unwrap().passed());
        let f = SimpleFunc2D::new(vec![(a, ExtNonneg::int(2))]).unwrap();
        assert_eq!(tonelli(&c, &c, &f).unwrap().iter_y, ExtNonneg::int(6));
    }

    #[test]
    fn overlapping_regions_rejected() {
        assert!(SimpleFunc2D::new(vec![(r(0, 2, 0, 2), ExtNonneg::one()), (r(1, 3, 1, 3), ExtNonneg::one())]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f: StepFuncVec2D = serde_json::from_str(
            r#"{"pieces":[{"region":{"rects":[["[0,1)","[0,1)"]]},"value":["1","1"]},
                          {"region":{"rects":[["[1,2)","[0,1)"]]},"value":["-2","0"]}]}"#,
        )
        .unwrap();
        assert_eq!(f.dim(), 2);
        let back: StepFuncVec2D = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(back, f);
    }
}
