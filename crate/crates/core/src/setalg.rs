//! Exact set algebras: finite unions of rational intervals (closed, open or
//! half-open), subsets of a finite carrier, and 2-D rectangle unions kept in
//! x-slab form.
//!
//! Boolean operations run an endpoint sweep over the point sets: the line is
//! cut at every finite endpoint into points and open gaps, membership is
//! decided once per piece, and maximal runs are reassembled. The result is
//! then read back in the requested kind, or rejected when that kind cannot
//! represent it.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{Bound, ExtNonneg, Rat};

/// Topology kind of an [`IntervalSet`]; half-open intervals are `[lo, hi)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Closed,
    Open,
    HalfOpen,
}

impl Kind {
    fn flags(self) -> (bool, bool) {
        match self {
            Kind::Closed => (true, true),
            Kind::Open => (false, false),
            Kind::HalfOpen => (true, false),
        }
    }
}

/// Group law acting on interval endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Law {
    Additive,
    Multiplicative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersect,
    Diff,
}

impl SetOp {
    fn apply(self, a: bool, b: bool) -> bool {
        match self {
            SetOp::Union => a || b,
            SetOp::Intersect => a && b,
            SetOp::Diff => a && !b,
        }
    }
}

/// One interval with explicit endpoint closedness. Infinite ends are open.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Span {
    pub lo: Bound,
    pub lo_closed: bool,
    pub hi: Bound,
    pub hi_closed: bool,
}

impl Span {
    pub fn new(lo: Bound, lo_closed: bool, hi: Bound, hi_closed: bool) -> Span {
        let lo_closed = lo_closed && lo.is_finite();
        let hi_closed = hi_closed && hi.is_finite();
        Span { lo, lo_closed, hi, hi_closed }
    }

    fn is_empty(&self) -> bool {
        match self.lo.cmp(&self.hi) {
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => !(self.lo.is_finite() && self.lo_closed && self.hi_closed),
            std::cmp::Ordering::Greater => true,
        }
    }

    fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    fn contains(&self, x: &Rat) -> bool {
        let above = match &self.lo {
            Bound::NegInf => true,
            Bound::Fin(a) => {
                if self.lo_closed {
                    a <= x
                } else {
                    a < x
                }
            }
            Bound::PosInf => false,
        };
        let below = match &self.hi {
            Bound::PosInf => true,
            Bound::Fin(b) => {
                if self.hi_closed {
                    x <= b
                } else {
                    x < b
                }
            }
            Bound::NegInf => false,
        };
        above && below
    }
}

/// Canonical point set: sorted, disjoint, non-touching spans.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub(crate) struct PointSet {
    spans: Vec<Span>,
}

enum Piece {
    Gap { lo: Bound, hi: Bound, sample: Rat },
    Point(Rat),
}

impl PointSet {
    pub fn from_spans(mut spans: Vec<Span>) -> PointSet {
        spans.retain(|s| !s.is_empty());
        spans.sort_by(|a, b| a.lo.cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed)));
        let mut out: Vec<Span> = Vec::with_capacity(spans.len());
        for s in spans {
            if let Some(last) = out.last_mut() {
                let touches = match last.hi.cmp(&s.lo) {
                    std::cmp::Ordering::Less => false,
                    std::cmp::Ordering::Equal => last.hi_closed || s.lo_closed,
                    std::cmp::Ordering::Greater => true,
                };
                if touches {
                    match s.hi.cmp(&last.hi) {
                        std::cmp::Ordering::Greater => {
                            last.hi = s.hi;
                            last.hi_closed = s.hi_closed;
                        }
                        std::cmp::Ordering::Equal => last.hi_closed |= s.hi_closed,
                        std::cmp::Ordering::Less => {}
                    }
                    continue;
                }
            }
            out.push(s);
        }
        PointSet { spans: out }
    }

    pub fn spans(&self) -> &[Span] {
        &self.spans
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    pub fn contains(&self, x: &Rat) -> bool {
        let probe = Bound::Fin(x.clone());
        let idx = self.spans.partition_point(|s| s.lo <= probe);
        idx > 0 && self.spans[idx - 1].contains(x)
    }

    fn endpoints(&self, into: &mut Vec<Rat>) {
        for s in &self.spans {
            if let Bound::Fin(q) = &s.lo {
                into.push(q.clone());
            }
            if let Bound::Fin(q) = &s.hi {
                into.push(q.clone());
            }
        }
    }

    /// Pointwise boolean combination of any number of point sets.
    pub fn combine_many(sets: &[&PointSet], f: impl Fn(&[bool]) -> bool) -> PointSet {
        let mut pts = Vec::new();
        for s in sets {
            s.endpoints(&mut pts);
        }
        pts.sort();
        pts.dedup();
        let mut pieces = Vec::with_capacity(2 * pts.len() + 1);
        if pts.is_empty() {
            pieces.push(Piece::Gap { lo: Bound::NegInf, hi: Bound::PosInf, sample: Rat::zero() });
        } else {
            pieces.push(Piece::Gap {
                lo: Bound::NegInf,
                hi: Bound::Fin(pts[0].clone()),
                sample: &pts[0] - Rat::one(),
            });
            for (i, p) in pts.iter().enumerate() {
                pieces.push(Piece::Point(p.clone()));
                match pts.get(i + 1) {
                    Some(nx) => pieces.push(Piece::Gap {
                        lo: Bound::Fin(p.clone()),
                        hi: Bound::Fin(nx.clone()),
                        sample: p.midpoint(nx),
                    }),
                    None => pieces.push(Piece::Gap {
                        lo: Bound::Fin(p.clone()),
                        hi: Bound::PosInf,
                        sample: p + Rat::one(),
                    }),
                }
            }
        }
        let mut flags = vec![false; sets.len()];
        let mut spans = Vec::new();
        let mut open: Option<(Bound, bool, Bound, bool)> = None;
        for piece in pieces {
            let sample = match &piece {
                Piece::Gap { sample, .. } => sample,
                Piece::Point(p) => p,
            };
            for (flag, s) in flags.iter_mut().zip(sets) {
                *flag = s.contains(sample);
            }
            let inside = f(&flags);
            let (left, left_closed, right, right_closed) = match &piece {
                Piece::Gap { lo, hi, .. } => (lo.clone(), false, hi.clone(), false),
                Piece::Point(p) => (Bound::Fin(p.clone()), true, Bound::Fin(p.clone()), true),
            };
            if inside {
                match open.as_mut() {
                    Some(cur) => {
                        cur.2 = right;
                        cur.3 = right_closed;
                    }
                    None => open = Some((left, left_closed, right, right_closed)),
                }
            } else if let Some((a, ac, b, bc)) = open.take() {
                spans.push(Span::new(a, ac, b, bc));
            }
        }
        if let Some((a, ac, b, bc)) = open.take() {
            spans.push(Span::new(a, ac, b, bc));
        }
        PointSet::from_spans(spans)
    }

    pub fn combine(&self, other: &PointSet, op: SetOp) -> PointSet {
        PointSet::combine_many(&[self, other], |f| op.apply(f[0], f[1]))
    }

    pub fn is_subset_of(&self, other: &PointSet) -> bool {
        self.combine(other, SetOp::Diff).is_empty()
    }

    /// Exact reading in `kind`, or a representation error.
    pub fn to_kind(&self, kind: Kind) -> Result<IntervalSet> {
        let (lc, hc) = kind.flags();
        let mut intervals = Vec::with_capacity(self.spans.len());
        for s in &self.spans {
            let lo_ok = !s.lo.is_finite() || s.lo_closed == lc;
            let hi_ok = !s.hi.is_finite() || s.hi_closed == hc;
            if !lo_ok || !hi_ok || (s.is_point() && kind != Kind::Closed) {
                return Err(Error::Representation(format!(
                    "point set {} is not a finite union of {:?} intervals",
                    IntervalSet::render_spans(&self.spans),
                    kind
                )));
            }
            intervals.push((s.lo.clone(), s.hi.clone()));
        }
        Ok(IntervalSet { kind, intervals })
    }

    /// Half-open reading that ignores endpoint closedness. Isolated points
    /// cannot be carried over and are rejected.
    pub fn to_half_open_lossy(&self) -> Result<IntervalSet> {
        if let Some(p) = self.spans.iter().find(|s| s.is_point()) {
            return Err(Error::Representation(format!(
                "isolated point {} has no half-open representation",
                p.lo
            )));
        }
        let spans = self
            .spans
            .iter()
            .map(|s| Span::new(s.lo.clone(), true, s.hi.clone(), false))
            .collect();
        PointSet::from_spans(spans).to_kind(Kind::HalfOpen)
    }

    pub fn to_any_kind(&self) -> Result<IntervalSet> {
        self.to_kind(Kind::Open)
            .or_else(|_| self.to_kind(Kind::Closed))
            .or_else(|_| self.to_kind(Kind::HalfOpen))
    }
}

/// Canonical finite union of disjoint intervals of one kind.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "IntervalSetRepr", into = "IntervalSetRepr")]
pub struct IntervalSet {
    kind: Kind,
    intervals: Vec<(Bound, Bound)>,
}

/// Structured form, or bracket notation such as `"[0,1) ∪ [2,3)"` on input.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntervalSetRepr {
    Parts { kind: Kind, intervals: Vec<(Bound, Bound)> },
    Text(String),
}

impl TryFrom<IntervalSetRepr> for IntervalSet {
    type Error = Error;
    fn try_from(r: IntervalSetRepr) -> Result<IntervalSet> {
        match r {
            IntervalSetRepr::Parts { kind, intervals } => IntervalSet::new(kind, intervals),
            IntervalSetRepr::Text(t) => t.parse(),
        }
    }
}

impl From<IntervalSet> for IntervalSetRepr {
    fn from(s: IntervalSet) -> IntervalSetRepr {
        IntervalSetRepr::Parts { kind: s.kind, intervals: s.intervals }
    }
}

fn bound_op(b: &Bound, g: &Rat, law: Law) -> Result<Bound> {
    match (b, law) {
        (Bound::Fin(q), Law::Additive) => Ok(Bound::Fin(q + g)),
        (b, Law::Additive) => Ok(b.clone()),
        (Bound::Fin(q), Law::Multiplicative) if q.is_positive() => Ok(Bound::Fin(q * g)),
        (b, Law::Multiplicative) => Err(Error::Domain(format!(
            "multiplicative law needs finite positive endpoints, got {b}"
        ))),
    }
}

impl IntervalSet {
    /// Validates and canonicalizes. `lo = hi` is accepted only for closed
    /// intervals (a point).
    pub fn new(kind: Kind, intervals: Vec<(Bound, Bound)>) -> Result<IntervalSet> {
        let (lc, hc) = kind.flags();
        let mut spans = Vec::with_capacity(intervals.len());
        for (lo, hi) in intervals {
            if lo == Bound::PosInf || hi == Bound::NegInf || lo > hi {
                return Err(Error::Representation(format!("invalid interval ({lo}, {hi})")));
            }
            if lo == hi && kind != Kind::Closed {
                return Err(Error::Representation(format!(
                    "degenerate interval at {lo} is only valid for closed sets"
                )));
            }
            spans.push(Span::new(lo, lc, hi, hc));
        }
        PointSet::from_spans(spans).to_kind(kind)
    }

    pub fn from_rats(kind: Kind, intervals: &[(Rat, Rat)]) -> Result<IntervalSet> {
        IntervalSet::new(
            kind,
            intervals.iter().map(|(a, b)| (Bound::Fin(a.clone()), Bound::Fin(b.clone()))).collect(),
        )
    }

    pub fn closed(lo: Rat, hi: Rat) -> Result<IntervalSet> {
        IntervalSet::new(Kind::Closed, vec![(lo.into(), hi.into())])
    }

    pub fn open(lo: Rat, hi: Rat) -> Result<IntervalSet> {
        IntervalSet::new(Kind::Open, vec![(lo.into(), hi.into())])
    }

    pub fn half_open(lo: Rat, hi: Rat) -> Result<IntervalSet> {
        IntervalSet::new(Kind::HalfOpen, vec![(lo.into(), hi.into())])
    }

    pub fn empty(kind: Kind) -> IntervalSet {
        IntervalSet { kind, intervals: Vec::new() }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn intervals(&self) -> &[(Bound, Bound)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.intervals.iter().all(|(a, b)| a.is_finite() && b.is_finite())
    }

    pub fn component_count(&self) -> usize {
        self.intervals.len()
    }

    /// Finite endpoints of a bounded set, in order.
    pub fn finite_intervals(&self) -> Option<Vec<(Rat, Rat)>> {
        self.intervals
            .iter()
            .map(|(a, b)| Some((a.fin()?.clone(), b.fin()?.clone())))
            .collect()
    }

    pub(crate) fn point_set(&self) -> PointSet {
        let (lc, hc) = self.kind.flags();
        PointSet {
            spans: self
                .intervals
                .iter()
                .map(|(a, b)| Span::new(a.clone(), lc, b.clone(), hc))
                .collect(),
        }
    }

    pub fn contains(&self, x: &Rat) -> bool {
        self.point_set().contains(x)
    }

    /// Boolean operation with an explicit result kind. Exact when the
    /// result is representable in `kind`; for mixed-kind inputs and a
    /// half-open target the boundary closedness is dropped.
    pub fn combine_as(&self, other: &IntervalSet, op: SetOp, kind: Kind) -> Result<IntervalSet> {
        let ps = self.point_set().combine(&other.point_set(), op);
        match ps.to_kind(kind) {
            Ok(s) => Ok(s),
            Err(e) => {
                if kind == Kind::HalfOpen && self.kind != other.kind {
                    ps.to_half_open_lossy()
                } else {
                    Err(e)
                }
            }
        }
    }

    fn same_kind_op(&self, other: &IntervalSet, op: SetOp) -> Result<IntervalSet> {
        if self.kind != other.kind {
            return Err(Error::Domain(format!(
                "kind mismatch {:?} vs {:?}; use combine_as with an explicit result kind",
                self.kind, other.kind
            )));
        }
        self.combine_as(other, op, self.kind)
    }

    pub fn union(&self, other: &IntervalSet) -> Result<IntervalSet> {
        self.same_kind_op(other, SetOp::Union)
    }

    pub fn intersect(&self, other: &IntervalSet) -> Result<IntervalSet> {
        self.same_kind_op(other, SetOp::Intersect)
    }

    pub fn difference(&self, other: &IntervalSet) -> Result<IntervalSet> {
        self.same_kind_op(other, SetOp::Diff)
    }

    /// Point-set inclusion, across kinds.
    pub fn is_subset_of(&self, other: &IntervalSet) -> bool {
        self.point_set().is_subset_of(&other.point_set())
    }

    pub fn is_disjoint(&self, other: &IntervalSet) -> bool {
        self.point_set().combine(&other.point_set(), SetOp::Intersect).is_empty()
    }

    /// Total length, independent of kind.
    pub fn length(&self) -> ExtNonneg {
        let mut total = Rat::zero();
        for (a, b) in &self.intervals {
            match (a, b) {
                (Bound::Fin(a), Bound::Fin(b)) => total = total + (b - a),
                _ => return ExtNonneg::Infinity,
            }
        }
        ExtNonneg::Finite(total)
    }

    /// Number of integers in the set.
    pub fn lattice_count(&self) -> ExtNonneg {
        let mut total = num_bigint::BigInt::from(0);
        for s in self.point_set().spans() {
            let (Bound::Fin(a), Bound::Fin(b)) = (&s.lo, &s.hi) else {
                return ExtNonneg::Infinity;
            };
            let lower = if s.lo_closed { a.ceil() } else { a.floor() + 1 };
            let upper = if s.hi_closed { b.floor() } else { b.ceil() - 1 };
            if upper >= lower {
                total += upper - lower + 1;
            }
        }
        ExtNonneg::Finite(Rat::from_bigint(total))
    }

    /// Forward image `g·S` under the law: shift by `g` or scale by `g > 0`.
    pub fn translate(&self, g: &Rat, law: Law) -> Result<IntervalSet> {
        if law == Law::Multiplicative && !g.is_positive() {
            return Err(Error::Domain(format!("multiplicative translate by nonpositive {g}")));
        }
        let intervals = self
            .intervals
            .iter()
            .map(|(a, b)| Ok((bound_op(a, g, law)?, bound_op(b, g, law)?)))
            .collect::<Result<Vec<_>>>()?;
        IntervalSet::new(self.kind, intervals)
    }

    /// Pointwise inverse. Half-open `[a,b)` maps to the true image `(−b,−a]`
    /// re-read as `[−b,−a)`, which preserves every boundary-null measure.
    pub fn invert(&self, law: Law) -> Result<IntervalSet> {
        let intervals = self
            .intervals
            .iter()
            .map(|(a, b)| match law {
                Law::Additive => Ok((b.negate(), a.negate())),
                Law::Multiplicative => match (a, b) {
                    (Bound::Fin(a), Bound::Fin(b)) if a.is_positive() => Ok((
                        Bound::Fin(b.checked_recip().expect("positive")),
                        Bound::Fin(a.checked_recip().expect("positive")),
                    )),
                    _ => Err(Error::Domain(format!(
                        "multiplicative inverse needs finite positive endpoints, got ({a}, {b})"
                    ))),
                },
            })
            .collect::<Result<Vec<_>>>()?;
        IntervalSet::new(self.kind, intervals)
    }

    fn check_eps(eps: &Rat) -> Result<()> {
        if eps.is_positive() {
            Ok(())
        } else {
            Err(Error::Domain(format!("epsilon must be positive, got {eps}")))
        }
    }

    /// Open superset: every interval widened by `eps` on both sides.
    pub fn fatten(&self, eps: &Rat) -> Result<IntervalSet> {
        Self::check_eps(eps)?;
        let intervals = self
            .intervals
            .iter()
            .map(|(a, b)| (a.shift(&-eps), b.shift(eps)))
            .collect();
        IntervalSet::new(Kind::Open, intervals)
    }

    /// Open superset that moves only the closed endpoints outward.
    pub fn open_hull(&self, eps: &Rat) -> Result<IntervalSet> {
        Self::check_eps(eps)?;
        let spans = self
            .point_set()
            .spans()
            .iter()
            .map(|s| {
                let lo = if s.lo_closed { s.lo.shift(&-eps) } else { s.lo.clone() };
                let hi = if s.hi_closed { s.hi.shift(eps) } else { s.hi.clone() };
                Span::new(lo, false, hi, false)
            })
            .collect();
        PointSet::from_spans(spans).to_kind(Kind::Open)
    }

    /// Closed subset: every interval narrowed by `eps` on both sides;
    /// intervals of width at most `2·eps` vanish.
    pub fn shrink(&self, eps: &Rat) -> Result<IntervalSet> {
        Self::check_eps(eps)?;
        let two_eps = eps * Rat::int(2);
        let mut intervals = Vec::new();
        for (a, b) in &self.intervals {
            if let (Bound::Fin(a), Bound::Fin(b)) = (a, b) {
                if b - a <= two_eps {
                    continue;
                }
            }
            intervals.push((a.shift(eps), b.shift(&-eps)));
        }
        IntervalSet::new(Kind::Closed, intervals)
    }

    pub fn closure(&self) -> IntervalSet {
        let spans = self
            .point_set()
            .spans()
            .iter()
            .map(|s| Span::new(s.lo.clone(), true, s.hi.clone(), true))
            .collect();
        PointSet::from_spans(spans).to_kind(Kind::Closed).expect("closed spans")
    }

    pub fn interior(&self) -> IntervalSet {
        let spans = self
            .point_set()
            .spans()
            .iter()
            .map(|s| Span::new(s.lo.clone(), false, s.hi.clone(), false))
            .collect();
        PointSet::from_spans(spans).to_kind(Kind::Open).expect("open spans")
    }

    /// Re-reads the same point set in another kind, exactly.
    pub fn with_kind(&self, kind: Kind) -> Result<IntervalSet> {
        self.point_set().to_kind(kind)
    }

    /// Half-open reading of the point set, dropping endpoint closedness.
    pub fn to_half_open(&self) -> Result<IntervalSet> {
        self.point_set().to_half_open_lossy()
    }

    /// Minkowski combination `{a ∘ b : a ∈ self, b ∈ other}` under the law.
    pub fn sumset(&self, other: &IntervalSet, law: Law) -> Result<IntervalSet> {
        let combine = |x: &Bound, y: &Bound| -> Result<Bound> {
            match law {
                Law::Additive => match (x, y) {
                    (Bound::Fin(a), Bound::Fin(b)) => Ok(Bound::Fin(a + b)),
                    (Bound::Fin(_), b) => Ok(b.clone()),
                    (a, _) => Ok(a.clone()),
                },
                Law::Multiplicative => match (x, y) {
                    (Bound::Fin(a), Bound::Fin(b)) if a.is_positive() && b.is_positive() => {
                        Ok(Bound::Fin(a * b))
                    }
                    _ => Err(Error::Domain("multiplicative sumset needs positive bounded sets".into())),
                },
            }
        };
        let a_ps = self.point_set();
        let b_ps = other.point_set();
        let mut spans = Vec::new();
        for s in a_ps.spans() {
            for t in b_ps.spans() {
                spans.push(Span::new(
                    combine(&s.lo, &t.lo)?,
                    s.lo_closed && t.lo_closed,
                    combine(&s.hi, &t.hi)?,
                    s.hi_closed && t.hi_closed,
                ));
            }
        }
        PointSet::from_spans(spans).to_any_kind()
    }

    pub(crate) fn render_spans(spans: &[Span]) -> String {
        if spans.is_empty() {
            return "∅".into();
        }
        spans
            .iter()
            .map(|s| {
                format!(
                    "{}{},{}{}",
                    if s.lo_closed { '[' } else { '(' },
                    s.lo,
                    s.hi,
                    if s.hi_closed { ']' } else { ')' }
                )
            })
            .collect::<Vec<_>>()
            .join(" ∪ ")
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&IntervalSet::render_spans(self.point_set().spans()))
    }
}

impl fmt::Debug for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{{{}}}", self.kind, self)
    }
}

impl FromStr for IntervalSet {
    type Err = Error;

    /// Bracket notation: `[0,1]`, `(0,1)`, `[0,1) ∪ [2,3)`. Components may be
    /// joined by `∪`, `U`, `u` or `|` and must share one kind. `∅` and
    /// `empty` denote the empty half-open set.
    fn from_str(s: &str) -> Result<IntervalSet> {
        let t = s.trim();
        if t == "∅" || t == "empty" || t.is_empty() {
            return Ok(IntervalSet::empty(Kind::HalfOpen));
        }
        let mut kind: Option<Kind> = None;
        let mut intervals = Vec::new();
        let mut rest = t;
        loop {
            rest = rest.trim_start_matches(|c: char| c.is_whitespace() || "∪Uu|".contains(c));
            if rest.is_empty() {
                break;
            }
            let open_c = rest.chars().next().unwrap();
            if open_c != '[' && open_c != '(' {
                return Err(Error::Parse(format!("expected '[' or '(' in {s:?}")));
            }
            let close_at = rest
                .find([']', ')'])
                .ok_or_else(|| Error::Parse(format!("unterminated interval in {s:?}")))?;
            let close_c = rest[close_at..].chars().next().unwrap();
            let inner = &rest[1..close_at];
            let (a, b) = inner
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("interval needs two endpoints in {s:?}")))?;
            let k = match (open_c, close_c) {
                ('[', ']') => Kind::Closed,
                ('(', ')') => Kind::Open,
                ('[', ')') => Kind::HalfOpen,
                _ => return Err(Error::Parse(format!("unsupported interval shape in {s:?}"))),
            };
            if kind.is_some_and(|kk| kk != k) {
                return Err(Error::Parse(format!("mixed interval kinds in {s:?}")));
            }
            kind = Some(k);
            intervals.push((a.parse::<Bound>()?, b.parse::<Bound>()?));
            rest = &rest[close_at + close_c.len_utf8()..];
        }
        IntervalSet::new(kind.unwrap_or(Kind::HalfOpen), intervals)
    }
}

/// A subset of the carrier `{0, …, carrier−1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "FiniteSetRepr")]
pub struct FiniteSet {
    carrier: usize,
    members: BTreeSet<usize>,
}

#[derive(Deserialize)]
struct FiniteSetRepr {
    carrier: usize,
    members: Vec<usize>,
}

impl TryFrom<FiniteSetRepr> for FiniteSet {
    type Error = Error;
    fn try_from(r: FiniteSetRepr) -> Result<FiniteSet> {
        FiniteSet::new(r.carrier, r.members)
    }
}

impl FiniteSet {
    pub fn new(carrier: usize, members: impl IntoIterator<Item = usize>) -> Result<FiniteSet> {
        if carrier == 0 {
            return Err(Error::Domain("carrier must be nonempty".into()));
        }
        let members: BTreeSet<usize> = members.into_iter().collect();
        if let Some(&m) = members.iter().next_back() {
            if m >= carrier {
                return Err(Error::Domain(format!("member {m} outside carrier of size {carrier}")));
            }
        }
        Ok(FiniteSet { carrier, members })
    }

    pub fn empty(carrier: usize) -> FiniteSet {
        FiniteSet { carrier, members: BTreeSet::new() }
    }

    pub fn full(carrier: usize) -> FiniteSet {
        FiniteSet { carrier, members: (0..carrier).collect() }
    }

    pub fn singleton(carrier: usize, x: usize) -> Result<FiniteSet> {
        FiniteSet::new(carrier, [x])
    }

    /// Subset encoded by the low `carrier` bits of `mask`.
    pub fn from_mask(carrier: usize, mask: u64) -> FiniteSet {
        FiniteSet { carrier, members: (0..carrier).filter(|i| mask >> i & 1 == 1).collect() }
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(&x)
    }

    fn check_carrier(&self, other: &FiniteSet) -> Result<()> {
        if self.carrier != other.carrier {
            return Err(Error::Domain(format!("carrier mismatch {} vs {}", self.carrier, other.carrier)));
        }
        Ok(())
    }

    pub fn union(&self, other: &FiniteSet) -> Result<FiniteSet> {
        self.check_carrier(other)?;
        Ok(FiniteSet { carrier: self.carrier, members: &self.members | &other.members })
    }

    pub fn intersect(&self, other: &FiniteSet) -> Result<FiniteSet> {
        self.check_carrier(other)?;
        Ok(FiniteSet { carrier: self.carrier, members: &self.members & &other.members })
    }

    pub fn difference(&self, other: &FiniteSet) -> Result<FiniteSet> {
        self.check_carrier(other)?;
        Ok(FiniteSet { carrier: self.carrier, members: &self.members - &other.members })
    }

    pub fn is_subset_of(&self, other: &FiniteSet) -> bool {
        self.carrier == other.carrier && self.members.is_subset(&other.members)
    }

    pub fn map(&self, f: impl Fn(usize) -> usize) -> FiniteSet {
        FiniteSet { carrier: self.carrier, members: self.members.iter().map(|&x| f(x)).collect() }
    }
}

impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self, self.carrier)
    }
}

/// A subset of `{0..n−1} × {0..n−1}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "FinitePairSetRepr")]
pub struct FinitePairSet {
    carrier: usize,
    #[serde(rename = "pairs")]
    members: BTreeSet<(usize, usize)>,
}

#[derive(Deserialize)]
struct FinitePairSetRepr {
    carrier: usize,
    pairs: Vec<(usize, usize)>,
}

impl TryFrom<FinitePairSetRepr> for FinitePairSet {
    type Error = Error;
    fn try_from(r: FinitePairSetRepr) -> Result<FinitePairSet> {
        FinitePairSet::new(r.carrier, r.pairs)
    }
}

impl FinitePairSet {
    pub fn new(carrier: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<FinitePairSet> {
        if carrier == 0 {
            return Err(Error::Domain("carrier must be nonempty".into()));
        }
        let members: BTreeSet<_> = pairs.into_iter().collect();
        if let Some(p) = members.iter().find(|(x, y)| *x >= carrier || *y >= carrier) {
            return Err(Error::Domain(format!("pair {p:?} outside carrier of size {carrier}")));
        }
        Ok(FinitePairSet { carrier, members })
    }

    pub fn product(a: &FiniteSet, b: &FiniteSet) -> Result<FinitePairSet> {
        if a.carrier() != b.carrier() {
            return Err(Error::Domain("carrier mismatch".into()));
        }
        FinitePairSet::new(a.carrier(), a.iter().flat_map(|x| b.iter().map(move |y| (x, y))))
    }

    /// Subset of the `n²` pairs encoded by the bits of `mask`, pair `(x, y)`
    /// at bit `x·n + y`.
    pub fn from_mask(carrier: usize, mask: u64) -> FinitePairSet {
        let members = (0..carrier * carrier)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| (i / carrier, i % carrier))
            .collect();
        FinitePairSet { carrier, members }
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.members.contains(&(x, y))
    }

    pub fn slice_x(&self, x: usize) -> FiniteSet {
        FiniteSet {
            carrier: self.carrier,
            members: self.members.range((x, 0)..(x + 1, 0)).map(|&(_, y)| y).collect(),
        }
    }

    pub fn transpose(&self) -> FinitePairSet {
        FinitePairSet { carrier: self.carrier, members: self.members.iter().map(|&(x, y)| (y, x)).collect() }
    }

    pub fn combine(&self, other: &FinitePairSet, op: SetOp) -> Result<FinitePairSet> {
        if self.carrier != other.carrier {
            return Err(Error::Domain("carrier mismatch".into()));
        }
        let members = match op {
            SetOp::Union => &self.members | &other.members,
            SetOp::Intersect => &self.members & &other.members,
            SetOp::Diff => &self.members - &other.members,
        };
        Ok(FinitePairSet { carrier: self.carrier, members })
    }

    pub fn map(&self, f: impl Fn(usize, usize) -> (usize, usize)) -> FinitePairSet {
        FinitePairSet { carrier: self.carrier, members: self.members.iter().map(|&(x, y)| f(x, y)).collect() }
    }
}

/// One x-slab `[x_lo, x_hi) × y` of a [`RectUnion`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slab {
    pub x: (Bound, Bound),
    pub y: IntervalSet,
}

impl Slab {
    pub fn x_set(&self) -> IntervalSet {
        IntervalSet { kind: Kind::HalfOpen, intervals: vec![self.x.clone()] }
    }
}

/// Finite union of half-open rectangles, stored as disjoint x-slabs with a
/// canonical half-open y-set each; adjacent slabs with equal y-sets are
/// merged, so the form is unique.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RectUnionRepr")]
pub struct RectUnion {
    slabs: Vec<Slab>,
}

/// Canonical slabs, or a list of half-open rectangles `[X, Y]` on input.
#[derive(Deserialize)]
#[serde(untagged)]
enum RectUnionRepr {
    Slabs { slabs: Vec<Slab> },
    Rects { rects: Vec<(IntervalSet, IntervalSet)> },
}

impl TryFrom<RectUnionRepr> for RectUnion {
    type Error = Error;
    fn try_from(r: RectUnionRepr) -> Result<RectUnion> {
        match r {
            RectUnionRepr::Slabs { slabs } => RectUnion::new(slabs),
            RectUnionRepr::Rects { rects } => RectUnion::from_rects(&rects),
        }
    }
}

/// Half-open cells cut at the given sorted breakpoints, rays included, each
/// with an interior sample point.
pub(crate) fn x_cells(pts: &[Rat]) -> Vec<((Bound, Bound), Rat)> {
    if pts.is_empty() {
        return vec![((Bound::NegInf, Bound::PosInf), Rat::zero())];
    }
    let mut cells = vec![((Bound::NegInf, Bound::Fin(pts[0].clone())), &pts[0] - Rat::one())];
    for w in pts.windows(2) {
        cells.push(((Bound::Fin(w[0].clone()), Bound::Fin(w[1].clone())), w[0].clone()));
    }
    let last = pts.last().unwrap();
    cells.push(((Bound::Fin(last.clone()), Bound::PosInf), last.clone()));
    cells
}

impl RectUnion {
    pub fn new(slabs: Vec<Slab>) -> Result<RectUnion> {
        let mut slabs: Vec<Slab> = slabs.into_iter().filter(|s| !s.y.is_empty()).collect();
        for s in &slabs {
            if s.x.0 >= s.x.1 || s.x.0 == Bound::PosInf || s.x.1 == Bound::NegInf {
                return Err(Error::Representation(format!("empty or invalid slab x-range {:?}", s.x)));
            }
            if s.y.kind() != Kind::HalfOpen {
                return Err(Error::Representation("slab y-sets must be half-open".into()));
            }
        }
        slabs.sort_by(|a, b| a.x.0.cmp(&b.x.0));
        let mut out: Vec<Slab> = Vec::with_capacity(slabs.len());
        for s in slabs {
            if let Some(last) = out.last_mut() {
                if last.x.1 > s.x.0 {
                    return Err(Error::Representation("overlapping slabs".into()));
                }
                if last.x.1 == s.x.0 && last.y == s.y {
                    last.x.1 = s.x.1;
                    continue;
                }
            }
            out.push(s);
        }
        Ok(RectUnion { slabs: out })
    }

    pub fn empty() -> RectUnion {
        RectUnion { slabs: Vec::new() }
    }

    /// `[x0,x1) × [y0,y1)`.
    pub fn rect(x0: Rat, x1: Rat, y0: Rat, y1: Rat) -> Result<RectUnion> {
        RectUnion::from_rects(&[(IntervalSet::half_open(x0, x1)?, IntervalSet::half_open(y0, y1)?)])
    }

    /// Union of products `X_i × Y_i` of half-open sets.
    pub fn from_rects(rects: &[(IntervalSet, IntervalSet)]) -> Result<RectUnion> {
        if rects.iter().any(|(x, y)| x.kind() != Kind::HalfOpen || y.kind() != Kind::HalfOpen) {
            return Err(Error::Representation("rectangle factors must be half-open".into()));
        }
        let mut pts = Vec::new();
        for (x, _) in rects {
            x.point_set().endpoints(&mut pts);
        }
        pts.sort();
        pts.dedup();
        let mut slabs = Vec::new();
        for (cell, sample) in x_cells(&pts) {
            let ys: Vec<(Bound, Bound)> = rects
                .iter()
                .filter(|(x, _)| x.contains(&sample))
                .flat_map(|(_, y)| y.intervals().iter().cloned())
                .collect();
            let y = IntervalSet::new(Kind::HalfOpen, ys)?;
            slabs.push(Slab { x: cell, y });
        }
        RectUnion::new(slabs)
    }

    pub fn slabs(&self) -> &[Slab] {
        &self.slabs
    }

    pub fn is_empty(&self) -> bool {
        self.slabs.is_empty()
    }

    /// The slice `{y : (x, y) ∈ A}`.
    pub fn slice_x(&self, x: &Rat) -> IntervalSet {
        let probe = Bound::Fin(x.clone());
        self.slabs
            .iter()
            .find(|s| s.x.0 <= probe && probe < s.x.1)
            .map(|s| s.y.clone())
            .unwrap_or_else(|| IntervalSet::empty(Kind::HalfOpen))
    }

    pub fn contains(&self, x: &Rat, y: &Rat) -> bool {
        self.slice_x(x).contains(y)
    }

    /// The canonical slab list as (x-interval, y-set) pairs; `x ↦ ν(A_x)` is
    /// constant on each.
    pub fn slab_decompose(&self) -> Vec<(IntervalSet, IntervalSet)> {
        self.slabs.iter().map(|s| (s.x_set(), s.y.clone())).collect()
    }

    /// The mirror image `{(y, x) : (x, y) ∈ A}`.
    pub fn transpose(&self) -> Result<RectUnion> {
        let mut rects = Vec::new();
        for s in &self.slabs {
            for iv in s.y.intervals() {
                rects.push((IntervalSet::new(Kind::HalfOpen, vec![iv.clone()])?, s.x_set()));
            }
        }
        RectUnion::from_rects(&rects)
    }

    pub fn combine(&self, other: &RectUnion, op: SetOp) -> Result<RectUnion> {
        let mut pts = Vec::new();
        for s in self.slabs.iter().chain(&other.slabs) {
            for b in [&s.x.0, &s.x.1] {
                if let Bound::Fin(q) = b {
                    pts.push(q.clone());
                }
            }
        }
        pts.sort();
        pts.dedup();
        let mut slabs = Vec::new();
        for (cell, sample) in x_cells(&pts) {
            let y = self.slice_x(&sample).combine_as(&other.slice_x(&sample), op, Kind::HalfOpen)?;
            slabs.push(Slab { x: cell, y });
        }
        RectUnion::new(slabs)
    }
}

/// A set in one of the 1-D algebras.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Subset {
    Intervals(IntervalSet),
    Points(FiniteSet),
}

impl Subset {
    pub fn is_empty(&self) -> bool {
        match self {
            Subset::Intervals(s) => s.is_empty(),
            Subset::Points(s) => s.is_empty(),
        }
    }

    pub fn as_intervals(&self) -> Result<&IntervalSet> {
        match self {
            Subset::Intervals(s) => Ok(s),
            Subset::Points(_) => Err(Error::Domain("expected an interval set".into())),
        }
    }

    pub fn as_points(&self) -> Result<&FiniteSet> {
        match self {
            Subset::Points(s) => Ok(s),
            Subset::Intervals(_) => Err(Error::Domain("expected a finite set".into())),
        }
    }

    fn mismatch() -> Error {
        Error::Domain("cannot combine interval sets with finite sets".into())
    }

    pub fn combine(&self, other: &Subset, op: SetOp) -> Result<Subset> {
        match (self, other) {
            (Subset::Intervals(a), Subset::Intervals(b)) => {
                let kind = if a.kind() == b.kind() { a.kind() } else { Kind::HalfOpen };
                Ok(Subset::Intervals(a.combine_as(b, op, kind)?))
            }
            (Subset::Points(a), Subset::Points(b)) => Ok(Subset::Points(match op {
                SetOp::Union => a.union(b)?,
                SetOp::Intersect => a.intersect(b)?,
                SetOp::Diff => a.difference(b)?,
            })),
            _ => Err(Subset::mismatch()),
        }
    }

    pub fn union(&self, other: &Subset) -> Result<Subset> {
        self.combine(other, SetOp::Union)
    }

    pub fn intersect(&self, other: &Subset) -> Result<Subset> {
        self.combine(other, SetOp::Intersect)
    }

    pub fn difference(&self, other: &Subset) -> Result<Subset> {
        self.combine(other, SetOp::Diff)
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        match (self, other) {
            (Subset::Intervals(a), Subset::Intervals(b)) => a.is_subset_of(b),
            (Subset::Points(a), Subset::Points(b)) => a.is_subset_of(b),
            _ => false,
        }
    }

    pub fn is_disjoint(&self, other: &Subset) -> Result<bool> {
        match (self, other) {
            (Subset::Intervals(a), Subset::Intervals(b)) => Ok(a.is_disjoint(b)),
            (Subset::Points(a), Subset::Points(b)) => Ok(a.intersect(b)?.is_empty()),
            _ => Err(Subset::mismatch()),
        }
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subset::Intervals(s) => write!(f, "{s}"),
            Subset::Points(s) => write!(f, "{s}"),
        }
    }
}

impl From<IntervalSet> for Subset {
    fn from(s: IntervalSet) -> Subset {
        Subset::Intervals(s)
    }
}

impl From<FiniteSet> for Subset {
    fn from(s: FiniteSet) -> Subset {
        Subset::Points(s)
    }
}

/// A set in one of the 2-D product algebras.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Region {
    Rects(RectUnion),
    Pairs(FinitePairSet),
}

impl Region {
    pub fn is_empty(&self) -> bool {
        match self {
            Region::Rects(r) => r.is_empty(),
            Region::Pairs(p) => p.is_empty(),
        }
    }

    pub fn transpose(&self) -> Result<Region> {
        Ok(match self {
            Region::Rects(r) => Region::Rects(r.transpose()?),
            Region::Pairs(p) => Region::Pairs(p.transpose()),
        })
    }

    /// Disjoint x-pieces with their (constant) slices; the slice is empty
    /// off these pieces.
    pub fn x_partition(&self) -> Vec<(Subset, Subset)> {
        match self {
            Region::Rects(r) => r
                .slab_decompose()
                .into_iter()
                .map(|(x, y)| (Subset::Intervals(x), Subset::Intervals(y)))
                .collect(),
            Region::Pairs(p) => (0..p.carrier())
                .filter_map(|x| {
                    let row = p.slice_x(x);
                    (!row.is_empty()).then(|| {
                        (Subset::Points(FiniteSet::singleton(p.carrier(), x).expect("in range")), Subset::Points(row))
                    })
                })
                .collect(),
        }
    }

    pub fn combine(&self, other: &Region, op: SetOp) -> Result<Region> {
        match (self, other) {
            (Region::Rects(a), Region::Rects(b)) => Ok(Region::Rects(a.combine(b, op)?)),
            (Region::Pairs(a), Region::Pairs(b)) => Ok(Region::Pairs(a.combine(b, op)?)),
            _ => Err(Error::Domain("cannot combine rectangle unions with pair sets".into())),
        }
    }
}

impl From<RectUnion> for Region {
    fn from(r: RectUnion) -> Region {
        Region::Rects(r)
    }
}

impl From<FinitePairSet> for Region {
    fn from(p: FinitePairSet) -> Region {
        Region::Pairs(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn iset(s: &str) -> IntervalSet {
        s.parse().unwrap()
    }

    /// Membership oracle on a dyadic grid, independent of the sweep.
    fn grid_agrees(actual: &IntervalSet, expect: impl Fn(&Rat) -> bool) {
        for i in -64..=160 {
            let x = Rat::new(i, 32);
            assert_eq!(actual.contains(&x), expect(&x), "at {x} for {actual}");
        }
    }

    #[test]
    fn union_merges_adjacent_closed() {
        assert_eq!(iset("[0,1]").union(&iset("[1,2]")).unwrap(), iset("[0,2]"));
    }

    #[test]
    fn half_open_difference() {
        let a = iset("[0,2)");
        let b = iset("[1/2,1)");
        let d = a.difference(&b).unwrap();
        assert_eq!(d, iset("[0,1/2) ∪ [1,2)"));
        grid_agrees(&d, |x| a.contains(x) && !b.contains(x));
    }

    #[test]
    fn disjoint_opens_intersect_empty() {
        assert!(iset("(0,1)").intersect(&iset("(1,2)")).unwrap().is_empty());
        // open sets touching at an excluded point stay separate
        assert_eq!(iset("(0,1)").union(&iset("(1,2)")).unwrap().component_count(), 2);
    }

    #[test]
    fn mixed_kind_rules() {
        assert!(iset("[0,1]").intersect(&iset("(1/2,2)")).is_err());
        let r = iset("[0,1]").combine_as(&iset("(1/2,2)"), SetOp::Intersect, Kind::HalfOpen).unwrap();
        assert_eq!(r, iset("[1/2,1)"));
        // isolated point has no half-open reading
        assert!(iset("[0,1]").combine_as(&iset("[1,2)"), SetOp::Intersect, Kind::HalfOpen).is_err());
        // same-kind closed difference is not closed
        assert!(matches!(iset("[0,2]").difference(&iset("[1,2]")), Err(Error::Representation(_))));
    }

    #[test]
    fn length_examples() {
        assert_eq!(iset("[0,1]").length(), ExtNonneg::one());
        assert_eq!(IntervalSet::empty(Kind::HalfOpen).length(), ExtNonneg::zero());
        assert_eq!(iset("[0,1/2) ∪ [3/4,1)").length(), ExtNonneg::Finite(q("3/4")));
        assert_eq!(iset("[0,inf)").length(), ExtNonneg::Infinity);
    }

    #[test]
    fn translate_examples() {
        assert_eq!(iset("[0,1)").translate(&q("5"), Law::Additive).unwrap(), iset("[5,6)"));
        assert_eq!(iset("[1,4]").translate(&q("1/2"), Law::Multiplicative).unwrap(), iset("[1/2,2]"));
        assert!(IntervalSet::empty(Kind::HalfOpen).translate(&q("3"), Law::Additive).unwrap().is_empty());
        assert!(matches!(iset("[1,4]").translate(&q("-1"), Law::Multiplicative), Err(Error::Domain(_))));
        assert!(iset("[-1,4]").translate(&q("2"), Law::Multiplicative).is_err());
    }

    #[test]
    fn invert_examples() {
        assert_eq!(iset("[0,1]").invert(Law::Additive).unwrap(), iset("[-1,0]"));
        assert_eq!(iset("[1,2]").invert(Law::Multiplicative).unwrap(), iset("[1/2,1]"));
        let a = iset("[0,1) ∪ [2,3)");
        let inv = a.invert(Law::Additive).unwrap();
        assert_eq!(inv, iset("[-3,-2) ∪ [-1,0)"));
        // the true reflection differs only at endpoints
        for i in -128..=128 {
            let x = Rat::new(i, 32);
            if [-3, -2, -1, 0].iter().any(|&e| x == Rat::int(e)) {
                continue;
            }
            assert_eq!(inv.contains(&x), a.contains(&-&x));
        }
        assert_eq!(inv.length(), a.length());
        assert!(iset("[0,2]").invert(Law::Multiplicative).is_err());
    }

    #[test]
    fn fatten_shrink_examples() {
        let e = q("1/8");
        assert_eq!(iset("[0,1]").fatten(&e).unwrap(), iset("(-1/8,9/8)"));
        assert_eq!(iset("[0,1]").shrink(&e).unwrap(), iset("[1/8,7/8]"));
        assert!(iset("[0,1/8]").shrink(&e).unwrap().is_empty());
        assert!(iset("[0,1]").fatten(&Rat::zero()).is_err());
        assert_eq!(iset("[0,1)").open_hull(&e).unwrap(), iset("(-1/8,1)"));
    }

    #[test]
    fn closure_interior() {
        assert_eq!(iset("(0,1) ∪ (1,2)").closure(), iset("[0,2]"));
        assert_eq!(iset("[0,1]").interior(), iset("(0,1)"));
    }

    #[test]
    fn lattice_counts() {
        assert_eq!(iset("[0,3)").lattice_count(), ExtNonneg::int(3));
        assert_eq!(iset("[1/2,3/2)").lattice_count(), ExtNonneg::int(1));
        assert_eq!(iset("(0,3)").lattice_count(), ExtNonneg::int(2));
        assert_eq!(iset("[0,3]").lattice_count(), ExtNonneg::int(4));
        assert_eq!(iset("[0,inf)").lattice_count(), ExtNonneg::Infinity);
    }

    #[test]
    fn sumset_separation_sets() {
        let u_inv = iset("(-1/4,1/4)");
        assert_eq!(iset("[0,1]").sumset(&u_inv, Law::Additive).unwrap(), iset("(-1/4,5/4)"));
        assert_eq!(
            iset("[1,2]").sumset(&iset("(1/2,2)"), Law::Multiplicative).unwrap(),
            iset("(1/2,4)")
        );
    }

    #[test]
    fn parse_notation() {
        assert_eq!(iset("[0,1) U [2,3)"), iset("[0,1) ∪ [2,3)"));
        assert!("[0,1) ∪ (2,3)".parse::<IntervalSet>().is_err());
        assert!("(0,1]".parse::<IntervalSet>().is_err());
        assert!("[2,1]".parse::<IntervalSet>().is_err());
        assert!("[0,1/0]".parse::<IntervalSet>().is_err());
    }

    #[test]
    fn json_shapes() {
        let s: IntervalSet =
            serde_json::from_str(r#"{"kind":"half_open","intervals":[["0","1"],["3/2","2"]]}"#).unwrap();
        assert_eq!(s, iset("[0,1) ∪ [3/2,2)"));
        assert_eq!(
            serde_json::to_string(&s).unwrap(),
            r#"{"kind":"half_open","intervals":[["0","1"],["3/2","2"]]}"#
        );
        let r: RectUnion = serde_json::from_str(
            r#"{"slabs":[{"x":["0","1"],"y":{"kind":"half_open","intervals":[["0","3"]]}}]}"#,
        )
        .unwrap();
        assert_eq!(r, RectUnion::rect(q("0"), q("1"), q("0"), q("3")).unwrap());
        let sub: Subset = serde_json::from_str(r#"{"carrier":6,"members":[0,2]}"#).unwrap();
        assert_eq!(sub, Subset::Points(FiniteSet::new(6, [0, 2]).unwrap()));
        assert!(serde_json::from_str::<FiniteSet>(r#"{"carrier":3,"members":[5]}"#).is_err());
        let t: Subset = serde_json::from_str(r#""[0,1) ∪ [3/2,2)""#).unwrap();
        assert_eq!(t, Subset::Intervals(s));
        let l: RectUnion = serde_json::from_str(r#"{"rects":[["[0,2)","[0,1)"],["[0,1)","[1,2)"]]}"#).unwrap();
        assert_eq!(l, l_shape());
        assert!(serde_json::from_str::<IntervalSet>(r#""[0,1/0)""#).is_err());
    }

    fn l_shape() -> RectUnion {
        RectUnion::from_rects(&[(iset("[0,2)"), iset("[0,1)")), (iset("[0,1)"), iset("[1,2)"))]).unwrap()
    }

    #[test]
    fn slices() {
        let a = RectUnion::rect(q("0"), q("1"), q("0"), q("3")).unwrap();
        assert_eq!(a.slice_x(&q("1/2")), iset("[0,3)"));
        let l = l_shape();
        assert_eq!(l.slice_x(&q("1/2")), iset("[0,2)"));
        assert_eq!(l.slice_x(&q("3/2")), iset("[0,1)"));
        assert!(l.slice_x(&q("5")).is_empty());
        assert!(l.slice_x(&q("2")).is_empty());
        assert_eq!(l.slabs().len(), 2);
    }

    #[test]
    fn transpose_of_l_shape() {
        let t = l_shape().transpose().unwrap();
        assert_eq!(t.slice_x(&q("1/2")), iset("[0,2)"));
        assert_eq!(t.slice_x(&q("3/2")), iset("[0,1)"));
        assert_eq!(t.transpose().unwrap(), l_shape());
    }

    #[test]
    fn overlapping_slabs_rejected() {
        let y = iset("[0,1)");
        let slabs = vec![
            Slab { x: (Bound::Fin(q("0")), Bound::Fin(q("2"))), y: y.clone() },
            Slab { x: (Bound::Fin(q("1")), Bound::Fin(q("3"))), y },
        ];
        assert!(RectUnion::new(slabs).is_err());
    }

    #[test]
    fn pair_sets() {
        let p = FinitePairSet::new(3, [(0, 1), (0, 2), (2, 0)]).unwrap();
        assert_eq!(p.slice_x(0), FiniteSet::new(3, [1, 2]).unwrap());
        assert!(p.slice_x(1).is_empty());
        assert!(p.transpose().contains(1, 0));
        assert!(FinitePairSet::new(2, [(0, 2)]).is_err());
    }

    fn arb_half_open() -> impl Strategy<Value = IntervalSet> {
        proptest::collection::vec((-16i64..16, 1i64..8), 0..4).prop_map(|v| {
            let ivs: Vec<(Rat, Rat)> =
                v.into_iter().map(|(a, w)| (Rat::new(a, 4), Rat::new(a + w, 4))).collect();
            IntervalSet::from_rats(Kind::HalfOpen, &ivs).unwrap()
        })
    }

    fn arb_rect_union() -> impl Strategy<Value = RectUnion> {
        proptest::collection::vec((-8i64..8, 1i64..6, -8i64..8, 1i64..6), 0..4).prop_map(|v| {
            let rects: Vec<_> = v
                .into_iter()
                .map(|(x, w, y, h)| {
                    (
                        IntervalSet::half_open(Rat::new(x, 2), Rat::new(x + w, 2)).unwrap(),
                        IntervalSet::half_open(Rat::new(y, 2), Rat::new(y + h, 2)).unwrap(),
                    )
                })
                .collect();
            RectUnion::from_rects(&rects).unwrap()
        })
    }

    proptest! {
        #[test]
        fn canonicalization_idempotent(a in arb_half_open()) {
            let again = IntervalSet::new(a.kind(), a.intervals().to_vec()).unwrap();
            prop_assert_eq!(&again, &a);
        }

        #[test]
        fn length_is_a_valuation(a in arb_half_open(), b in arb_half_open()) {
            let lhs = a.union(&b).unwrap().length() + a.intersect(&b).unwrap().length();
            prop_assert_eq!(lhs, a.length() + b.length());
        }

        #[test]
        fn length_translation_invariant(a in arb_half_open(), n in -40i64..40, d in 1i64..9) {
            prop_assert_eq!(a.translate(&Rat::new(n, d), Law::Additive).unwrap().length(), a.length());
        }

        #[test]
        fn ops_match_pointwise(a in arb_half_open(), b in arb_half_open()) {
            let u = a.union(&b).unwrap();
            let i = a.intersect(&b).unwrap();
            let d = a.difference(&b).unwrap();
            for k in -40..=40 {
                let x = Rat::new(k, 8);
                prop_assert_eq!(u.contains(&x), a.contains(&x) || b.contains(&x));
                prop_assert_eq!(i.contains(&x), a.contains(&x) && b.contains(&x));
                prop_assert_eq!(d.contains(&x), a.contains(&x) && !b.contains(&x));
            }
        }

        #[test]
        fn invert_is_involutive(a in arb_half_open()) {
            prop_assert_eq!(a.invert(Law::Additive).unwrap().invert(Law::Additive).unwrap(), a);
        }
    }

    #[test]
    fn slab_slices_match_membership_1000_cases() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let n = rng.random_range(0..4);
            let rects: Vec<_> = (0..n)
                .map(|_| {
                    let x = rng.random_range(-8i64..8);
                    let y = rng.random_range(-8i64..8);
                    (
                        IntervalSet::half_open(Rat::new(x, 2), Rat::new(x + rng.random_range(1..6), 2)).unwrap(),
                        IntervalSet::half_open(Rat::new(y, 2), Rat::new(y + rng.random_range(1..6), 2)).unwrap(),
                    )
                })
                .collect();
            let a = RectUnion::from_rects(&rects).unwrap();
            let x = Rat::new(rng.random_range(-40i64..40), 4);
            let slice = a.slice_x(&x);
            for k in -40..40 {
                let y = Rat::new(k, 4);
                let direct = rects.iter().any(|(rx, ry)| rx.contains(&x) && ry.contains(&y));
                assert_eq!(slice.contains(&y), direct);
            }
        }
    }

    proptest! {
        #[test]
        fn rect_combine_pointwise(a in arb_rect_union(), b in arb_rect_union()) {
            let u = a.combine(&b, SetOp::Union).unwrap();
            let d = a.combine(&b, SetOp::Diff).unwrap();
            for i in -10..10 {
                for j in -10..10 {
                    let (x, y) = (Rat::new(i, 2), Rat::new(j, 2));
                    prop_assert_eq!(u.contains(&x, &y), a.contains(&x, &y) || b.contains(&x, &y));
                    prop_assert_eq!(d.contains(&x, &y), a.contains(&x, &y) && !b.contains(&x, &y));
                }
            }
        }
    }
}
