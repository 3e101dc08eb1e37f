//! Finitely many disjoint pieces with constant values: nonnegative simple
//! functions ([`SimpleFunc`]) and vector-valued step functions
//! ([`StepFuncVec`]), on either 1-D algebra.

use std::fmt;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::Element;
use crate::numeric::{Bound, ExtNonneg, Rat, VecQ};
use crate::setalg::{x_cells, FiniteSet, IntervalSet, Kind, Subset};

pub trait PieceValue: Clone + PartialEq + Ord + fmt::Debug {
    fn is_zero(&self) -> bool;
}

impl PieceValue for ExtNonneg {
    fn is_zero(&self) -> bool {
        ExtNonneg::is_zero(self)
    }
}

impl PieceValue for VecQ {
    fn is_zero(&self) -> bool {
        VecQ::is_zero(self)
    }
}

/// Canonical piecewise-constant function: disjoint nonempty sets (half-open
/// intervals or finite sets), nonzero values, one piece per distinct value,
/// sorted by value. Zero off the pieces.
#[derive(Clone, PartialEq, Eq)]
pub struct Step<V> {
    pieces: Vec<(Subset, V)>,
}

pub type SimpleFunc = Step<ExtNonneg>;

/// Disjoint cells covering the carrier, refining every given set, each with
/// a sample point.
pub fn common_cells(sets: &[&Subset]) -> Result<Vec<(Subset, Element)>> {
    let mut pts = Vec::new();
    let mut carrier: Option<usize> = None;
    let mut intervals = false;
    for s in sets {
        match s {
            Subset::Intervals(iv) => {
                intervals = true;
                for (a, b) in iv.intervals() {
                    pts.extend(a.fin().cloned());
                    pts.extend(b.fin().cloned());
                }
            }
            Subset::Points(p) => {
                if carrier.is_some_and(|c| c != p.carrier()) {
                    return Err(Error::Domain("finite sets over different carriers".into()));
                }
                carrier = Some(p.carrier());
            }
        }
    }
    match (intervals, carrier) {
        (true, Some(_)) => Err(Error::Domain("cannot mix interval sets and finite sets".into())),
        (false, Some(n)) => Ok((0..n)
            .map(|i| (Subset::Points(FiniteSet::singleton(n, i).expect("in range")), Element::Idx(i)))
            .collect()),
        (true, None) => {
            pts.sort();
            pts.dedup();
            Ok(x_cells(&pts)
                .into_iter()
                .map(|(cell, sample)| {
                    let set = IntervalSet::new(Kind::HalfOpen, vec![cell]).expect("nonempty cell");
                    (Subset::Intervals(set), Element::Num(sample))
                })
                .collect())
        }
        (false, None) => Ok(Vec::new()),
    }
}

fn half_open_reading(s: &Subset) -> Result<Subset> {
    match s {
        Subset::Intervals(iv) if iv.kind() != Kind::HalfOpen => Ok(Subset::Intervals(iv.to_half_open()?)),
        _ => Ok(s.clone()),
    }
}

impl<V: PieceValue> Step<V> {
    /// Canonicalizes. Interval pieces given as closed or open sets are read
    /// as half-open, which moves only their endpoints.
    pub fn new(pieces: Vec<(Subset, V)>) -> Result<Step<V>> {
        let mut kept: Vec<(Subset, V)> = Vec::with_capacity(pieces.len());
        for (s, v) in pieces {
            let s = half_open_reading(&s)?;
            if s.is_empty() {
                continue;
            }
            for (t, _) in &kept {
                if !s.is_disjoint(t)? {
                    return Err(Error::Domain(format!("pieces {t} and {s} overlap")));
                }
            }
            kept.push((s, v));
        }
        let mut merged: Vec<(Subset, V)> = Vec::new();
        for (s, v) in kept {
            if v.is_zero() {
                continue;
            }
            match merged.iter_mut().find(|(_, w)| *w == v) {
                Some((t, _)) => *t = t.union(&s)?,
                None => merged.push((s, v)),
            }
        }
        merged.sort_by(|a, b| a.1.cmp(&b.1));
        Ok(Step { pieces: merged })
    }

    pub fn zero() -> Step<V> {
        Step { pieces: Vec::new() }
    }

    pub fn pieces(&self) -> &[(Subset, V)] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Value at `x`; `None` means zero.
    pub fn value_at(&self, x: &Element) -> Option<&V> {
        self.pieces
            .iter()
            .find(|(s, _)| match (s, x) {
                (Subset::Intervals(iv), Element::Num(q)) => iv.contains(q),
                (Subset::Points(p), Element::Idx(i)) => p.contains(*i),
                _ => false,
            })
            .map(|(_, v)| v)
    }

    /// Pointwise combination over a common refinement.
    pub fn combine<W: PieceValue>(fs: &[&Step<V>], f: impl Fn(&[Option<&V>]) -> Option<W>) -> Result<Step<W>> {
        let sets: Vec<&Subset> = fs.iter().flat_map(|g| g.pieces.iter().map(|(s, _)| s)).collect();
        let mut pieces = Vec::new();
        for (cell, sample) in common_cells(&sets)? {
            let vals: Vec<Option<&V>> = fs.iter().map(|g| g.value_at(&sample)).collect();
            if let Some(w) = f(&vals) {
                pieces.push((cell, w));
            }
        }
        Step::new(pieces)
    }

    pub fn map<W: PieceValue>(&self, f: impl Fn(&V) -> W) -> Result<Step<W>> {
        Step::new(self.pieces.iter().map(|(s, v)| (s.clone(), f(v))).collect())
    }

    /// True when every set of `self` lies inside the given set.
    pub fn support_within(&self, s: &Subset) -> bool {
        self.pieces.iter().all(|(t, _)| t.is_subset_of(s))
    }
}

impl SimpleFunc {
    pub fn indicator(s: &Subset) -> Result<SimpleFunc> {
        SimpleFunc::new(vec![(s.clone(), ExtNonneg::one())])
    }

    pub fn constant_on(s: &Subset, c: ExtNonneg) -> Result<SimpleFunc> {
        SimpleFunc::new(vec![(s.clone(), c)])
    }

    pub fn add(&self, other: &SimpleFunc) -> Result<SimpleFunc> {
        Step::combine(&[self, other], |v| {
            let z = ExtNonneg::zero();
            Some(v[0].unwrap_or(&z) + v[1].unwrap_or(&z))
        })
    }

    pub fn scale(&self, c: &ExtNonneg) -> Result<SimpleFunc> {
        self.map(|v| c * v)
    }

    /// Pointwise `self ≤ other`.
    pub fn le(&self, other: &SimpleFunc) -> Result<bool> {
        let diff = Step::combine(&[self, other], |v| {
            let z = ExtNonneg::zero();
            (v[0].unwrap_or(&z) > v[1].unwrap_or(&z)).then(ExtNonneg::one)
        })?;
        Ok(diff.is_zero())
    }

    pub fn max(&self, other: &SimpleFunc) -> Result<SimpleFunc> {
        Step::combine(&[self, other], |v| {
            let z = ExtNonneg::zero();
            Some(v[0].unwrap_or(&z).clone().max(v[1].unwrap_or(&z).clone()))
        })
    }
}

/// Vector-valued step function into `ℚ^dim`.
#[derive(Clone, PartialEq, Eq)]
pub struct StepFuncVec {
    dim: usize,
    inner: Step<VecQ>,
}

impl StepFuncVec {
    pub fn new(dim: usize, pieces: Vec<(Subset, VecQ)>) -> Result<StepFuncVec> {
        if dim == 0 {
            return Err(Error::Domain("vector dimension must be at least 1".into()));
        }
        if let Some((_, v)) = pieces.iter().find(|(_, v)| v.dim() != dim) {
            return Err(Error::Domain(format!("value {v} does not have dimension {dim}")));
        }
        Ok(StepFuncVec { dim, inner: Step::new(pieces)? })
    }

    pub fn zero(dim: usize) -> StepFuncVec {
        StepFuncVec { dim, inner: Step::zero() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[(Subset, VecQ)] {
        self.inner.pieces()
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    pub fn value_at(&self, x: &Element) -> VecQ {
        self.inner.value_at(x).cloned().unwrap_or_else(|| VecQ::zeros(self.dim))
    }

    /// `x ↦ ‖f(x)‖` as a simple function.
    pub fn norm_fn(&self) -> Result<SimpleFunc> {
        self.inner.map(|v| ExtNonneg::Finite(v.norm()))
    }

    /// Embeds a finite simple function as a one-dimensional step function.
    pub fn from_simple(f: &SimpleFunc) -> Result<StepFuncVec> {
        let pieces = f
            .pieces()
            .iter()
            .map(|(s, v)| match v {
                ExtNonneg::Finite(q) => Ok((s.clone(), VecQ::new(vec![q.clone()])?)),
                ExtNonneg::Infinity => Err(Error::Domain("infinite value has no vector embedding".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        StepFuncVec::new(1, pieces)
    }
}

#[derive(Serialize, Deserialize)]
struct PieceRepr<V> {
    set: Subset,
    value: V,
}

#[derive(Serialize, Deserialize)]
struct StepRepr<V> {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    pieces: Vec<PieceRepr<V>>,
}

fn to_repr<V: Clone>(pieces: &[(Subset, V)], dim: Option<usize>) -> StepRepr<V> {
    StepRepr {
        dim,
        pieces: pieces.iter().map(|(s, v)| PieceRepr { set: s.clone(), value: v.clone() }).collect(),
    }
}

impl Serialize for SimpleFunc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        to_repr(&self.pieces, None).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SimpleFunc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<SimpleFunc, D::Error> {
        let r = StepRepr::<ExtNonneg>::deserialize(d)?;
        SimpleFunc::new(r.pieces.into_iter().map(|p| (p.set, p.value)).collect()).map_err(serde::de::Error::custom)
    }
}

impl Serialize for StepFuncVec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        to_repr(self.pieces(), Some(self.dim)).serialize(s)
    }
}

impl<'de> Deserialize<'de> for StepFuncVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<StepFuncVec, D::Error> {
        let r = StepRepr::<VecQ>::deserialize(d)?;
        let dim = r.dim.or_else(|| r.pieces.first().map(|p| p.value.dim())).unwrap_or(1);
        StepFuncVec::new(dim, r.pieces.into_iter().map(|p| (p.set, p.value)).collect())
            .map_err(serde::de::Error::custom)
    }
}

impl<V: fmt::Debug> fmt::Debug for Step<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() {
            return f.write_str("0");
        }
        for (i, (s, v)) in self.pieces.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{v:?}·χ{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for StepFuncVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ℚ^{}:{:?}", self.dim, self.inner)
    }
}

/// Parses a JSON document into any of the step-function types.
pub fn from_json<T: DeserializeOwned>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

/// Interval `[lo, hi)` as a subset, for tests and generators.
pub fn ho(lo: Rat, hi: Rat) -> Result<Subset> {
    Ok(Subset::Intervals(IntervalSet::new(Kind::HalfOpen, vec![(Bound::Fin(lo), Bound::Fin(hi))])?))
}
