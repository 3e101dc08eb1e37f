//! The concrete groups: finite groups given by Cayley tables, the integers,
//! the rational stand-in for (ℝ, +), and the positive rationals under
//! multiplication.
//!
//! Sets live in the algebra of the carrier: [`FiniteSet`] for finite groups
//! and [`IntervalSet`] otherwise. Subsets of ℤ are stored as half-open
//! intervals with integer endpoints, `[a, b)` standing for `{a, …, b−1}`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{Bound, Rat};
use crate::setalg::{FiniteSet, IntervalSet, Kind, Law, PointSet, Span, Subset};

/// A group element: an index into a Cayley table, or a rational number.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Element {
    Idx(usize),
    Num(Rat),
}

impl Element {
    pub fn num(&self) -> Option<&Rat> {
        match self {
            Element::Num(q) => Some(q),
            Element::Idx(_) => None,
        }
    }

    pub fn idx(&self) -> Option<usize> {
        match self {
            Element::Idx(i) => Some(*i),
            Element::Num(_) => None,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Idx(i) => write!(f, "#{i}"),
            Element::Num(q) => write!(f, "{q}"),
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Rat> for Element {
    fn from(q: Rat) -> Element {
        Element::Num(q)
    }
}

/// Multiplication table of a finite group on `{0, …, n−1}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CayleyTable {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl CayleyTable {
    /// Validates the group axioms exhaustively, associativity included.
    pub fn new(table: Vec<Vec<usize>>, identity: usize) -> Result<CayleyTable> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Domain("empty Cayley table".into()));
        }
        if identity >= n {
            return Err(Error::Domain(format!("identity {identity} out of range")));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Domain(format!("row {i} has length {} != {n}", row.len())));
            }
            let mut seen = vec![false; n];
            for &x in row {
                if x >= n || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::Domain(format!("row {i} is not a permutation")));
                }
            }
        }
        for j in 0..n {
            let mut seen = vec![false; n];
            for row in &table {
                if std::mem::replace(&mut seen[row[j]], true) {
                    return Err(Error::Domain(format!("column {j} is not a permutation")));
                }
            }
        }
        for (x, row) in table.iter().enumerate() {
            if table[identity][x] != x || row[identity] != x {
                return Err(Error::Domain(format!("{identity} is not a two-sided identity")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::Domain(format!("associativity fails at ({a},{b},{c})")));
                    }
                }
            }
        }
        let inverse = (0..n)
            .map(|a| (0..n).find(|&b| table[a][b] == identity).expect("latin square"))
            .collect();
        Ok(CayleyTable { table, identity, inverse })
    }

    /// Cyclic group ℤ/n with `i·j = (i+j) mod n`.
    pub fn cyclic(n: usize) -> Result<CayleyTable> {
        CayleyTable::new((0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect(), 0)
    }

    /// Klein four-group, `i·j = i xor j`.
    pub fn klein() -> CayleyTable {
        CayleyTable::new((0..4).map(|i| (0..4).map(|j| i ^ j).collect()).collect(), 0).expect("klein")
    }

    /// Symmetric group on `m` letters; permutations in lexicographic order,
    /// product `(p·q)(i) = p(q(i))`. Index 0 is the identity.
    pub fn symmetric(m: usize) -> Result<CayleyTable> {
        if m == 0 || m > 5 {
            return Err(Error::Domain(format!("symmetric group S{m} not supported")));
        }
        let mut perms: Vec<Vec<usize>> = vec![(0..m).collect()];
        loop {
            let mut p = perms.last().unwrap().clone();
            let Some(i) = (0..m.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
                break;
            };
            let j = (i + 1..m).rev().find(|&j| p[j] > p[i]).unwrap();
            p.swap(i, j);
            p[i + 1..].reverse();
            perms.push(p);
        }
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
        let table = perms
            .iter()
            .map(|p| perms.iter().map(|q| index(&q.iter().map(|&k| p[k]).collect())).collect())
            .collect();
        CayleyTable::new(table, 0)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..self.order()).all(|b| self.table[a][b] == self.table[b][a]))
    }
}

/// One of the supported groups.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GroupSpec {
    Finite(Arc<CayleyTable>),
    IntAdd,
    RealAdd,
    PosMul,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum GroupRepr {
    Finite {
        cayley: Vec<Vec<usize>>,
        #[serde(default)]
        identity: usize,
    },
    Symmetric {
        n: usize,
    },
    Cyclic {
        n: usize,
    },
    Klein,
    IntAdd,
    RealAdd,
    PosMul,
}

impl Serialize for GroupSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            GroupSpec::Finite(t) => GroupRepr::Finite { cayley: t.table.clone(), identity: t.identity },
            GroupSpec::IntAdd => GroupRepr::IntAdd,
            GroupSpec::RealAdd => GroupRepr::RealAdd,
            GroupSpec::PosMul => GroupRepr::PosMul,
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<GroupSpec, D::Error> {
        let table = match GroupRepr::deserialize(d)? {
            GroupRepr::Finite { cayley, identity } => CayleyTable::new(cayley, identity),
            GroupRepr::Symmetric { n } => CayleyTable::symmetric(n),
            GroupRepr::Cyclic { n } => CayleyTable::cyclic(n),
            GroupRepr::Klein => Ok(CayleyTable::klein()),
            GroupRepr::IntAdd => return Ok(GroupSpec::IntAdd),
            GroupRepr::RealAdd => return Ok(GroupSpec::RealAdd),
            GroupRepr::PosMul => return Ok(GroupSpec::PosMul),
        };
        table.map(GroupSpec::finite).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Finite(t) => write!(f, "finite({})", t.order()),
            GroupSpec::IntAdd => f.write_str("int_add"),
            GroupSpec::RealAdd => f.write_str("real_add"),
            GroupSpec::PosMul => f.write_str("pos_mul"),
        }
    }
}

/// Lattice reading of an interval set: the integers it contains, as
/// half-open integer ranges.
pub(crate) fn lattice_canon(s: &IntervalSet) -> IntervalSet {
    let spans = s
        .point_set()
        .spans()
        .iter()
        .filter_map(|sp| {
            let lo = match &sp.lo {
                Bound::Fin(a) => Bound::Fin(Rat::from_bigint(if sp.lo_closed { a.ceil() } else { a.floor() + 1 })),
                b => b.clone(),
            };
            let hi = match &sp.hi {
                Bound::Fin(b) => Bound::Fin(Rat::from_bigint(if sp.hi_closed { b.floor() + 1 } else { b.ceil() })),
                b => b.clone(),
            };
            (lo < hi).then(|| Span::new(lo, true, hi, false))
        })
        .collect();
    PointSet::from_spans(spans).to_kind(Kind::HalfOpen).expect("half-open spans")
}

fn is_lattice_canon(s: &IntervalSet) -> bool {
    s.kind() == Kind::HalfOpen
        && s.intervals().iter().all(|(a, b)| {
            a.fin().is_none_or(Rat::is_integer) && b.fin().is_none_or(Rat::is_integer)
        })
}

impl GroupSpec {
    pub fn finite(t: CayleyTable) -> GroupSpec {
        GroupSpec::Finite(Arc::new(t))
    }

    pub fn symmetric(m: usize) -> GroupSpec {
        GroupSpec::finite(CayleyTable::symmetric(m).expect("supported degree"))
    }

    pub fn cyclic(n: usize) -> GroupSpec {
        GroupSpec::finite(CayleyTable::cyclic(n).expect("positive order"))
    }

    pub fn klein() -> GroupSpec {
        GroupSpec::finite(CayleyTable::klein())
    }

    pub fn table(&self) -> Option<&CayleyTable> {
        match self {
            GroupSpec::Finite(t) => Some(t),
            _ => None,
        }
    }

    pub fn order(&self) -> Option<usize> {
        self.table().map(CayleyTable::order)
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, GroupSpec::Finite(_) | GroupSpec::IntAdd)
    }

    pub fn is_abelian(&self) -> bool {
        self.table().is_none_or(CayleyTable::is_abelian)
    }

    pub fn law(&self) -> Option<Law> {
        match self {
            GroupSpec::Finite(_) => None,
            GroupSpec::IntAdd | GroupSpec::RealAdd => Some(Law::Additive),
            GroupSpec::PosMul => Some(Law::Multiplicative),
        }
    }

    pub fn identity(&self) -> Element {
        match self {
            GroupSpec::Finite(t) => Element::Idx(t.identity()),
            GroupSpec::IntAdd | GroupSpec::RealAdd => Element::Num(Rat::zero()),
            GroupSpec::PosMul => Element::Num(Rat::one()),
        }
    }

    /// Reads an element of this group, accepting integers written either
    /// way for the discrete groups.
    pub fn element(&self, e: &Element) -> Result<Element> {
        let bad = || Error::Domain(format!("{e} is not an element of {self}"));
        match (self, e) {
            (GroupSpec::Finite(t), Element::Idx(i)) if *i < t.order() => Ok(e.clone()),
            (GroupSpec::Finite(t), Element::Num(q)) => match q.to_i64() {
                Some(i) if q.is_integer() && i >= 0 && (i as usize) < t.order() => Ok(Element::Idx(i as usize)),
                _ => Err(bad()),
            },
            (GroupSpec::Finite(_), _) => Err(bad()),
            (GroupSpec::IntAdd, Element::Num(q)) if q.is_integer() => Ok(e.clone()),
            (GroupSpec::IntAdd, Element::Num(_)) => Err(bad()),
            (GroupSpec::RealAdd, Element::Num(_)) => Ok(e.clone()),
            (GroupSpec::PosMul, Element::Num(q)) if q.is_positive() => Ok(e.clone()),
            (GroupSpec::PosMul, Element::Num(_)) => Err(bad()),
            (_, Element::Idx(i)) => self.element(&Element::Num(Rat::int(*i as i64))),
        }
    }

    fn as_num<'a>(&self, e: &'a Element) -> Result<&'a Rat> {
        e.num().ok_or_else(|| Error::Domain(format!("{e} is not an element of {self}")))
    }

    fn as_idx(&self, t: &CayleyTable, e: &Element) -> Result<usize> {
        match e {
            Element::Idx(i) if *i < t.order() => Ok(*i),
            _ => match self.element(e)? {
                Element::Idx(i) => Ok(i),
                Element::Num(_) => unreachable!(),
            },
        }
    }

    pub fn op(&self, a: &Element, b: &Element) -> Result<Element> {
        match self {
            GroupSpec::Finite(t) => Ok(Element::Idx(t.mul(self.as_idx(t, a)?, self.as_idx(t, b)?))),
            GroupSpec::IntAdd | GroupSpec::RealAdd => {
                let (a, b) = (self.element(a)?, self.element(b)?);
                Ok(Element::Num(self.as_num(&a)? + self.as_num(&b)?))
            }
            GroupSpec::PosMul => {
                let (a, b) = (self.element(a)?, self.element(b)?);
                Ok(Element::Num(self.as_num(&a)? * self.as_num(&b)?))
            }
        }
    }

    pub fn inverse(&self, a: &Element) -> Result<Element> {
        match self {
            GroupSpec::Finite(t) => Ok(Element::Idx(t.inv(self.as_idx(t, a)?))),
            GroupSpec::IntAdd | GroupSpec::RealAdd => {
                let a = self.element(a)?;
                Ok(Element::Num(Rat::zero() - self.as_num(&a)?))
            }
            GroupSpec::PosMul => {
                let a = self.element(a)?;
                Ok(Element::Num(self.as_num(&a)?.checked_recip().expect("positive")))
            }
        }
    }

    /// Checks that `s` belongs to this group's set algebra in canonical form.
    pub fn check_set(&self, s: &Subset) -> Result<()> {
        match (self, s) {
            (GroupSpec::Finite(t), Subset::Points(p)) if p.carrier() == t.order() => Ok(()),
            (GroupSpec::Finite(t), Subset::Points(p)) => Err(Error::Domain(format!(
                "finite set over carrier {} used in a group of order {}",
                p.carrier(),
                t.order()
            ))),
            (GroupSpec::IntAdd, Subset::Intervals(i)) if is_lattice_canon(i) => Ok(()),
            (GroupSpec::IntAdd, Subset::Intervals(_)) => Err(Error::Domain(
                "integer sets must be half-open ranges with integer endpoints".into(),
            )),
            (GroupSpec::RealAdd, Subset::Intervals(_)) => Ok(()),
            (GroupSpec::PosMul, Subset::Intervals(i)) => {
                if i.intervals().iter().all(|(a, b)| {
                    a.fin().is_some_and(Rat::is_positive) && b.is_finite()
                }) {
                    Ok(())
                } else {
                    Err(Error::Domain(format!("{i} is not a bounded subset of (0, ∞) away from 0")))
                }
            }
            _ => Err(Error::Domain(format!("set {s} is not in the algebra of {self}"))),
        }
    }

    /// Brings a set into this group's canonical algebra form (the lattice
    /// reading for ℤ), then validates it.
    pub fn normalize(&self, s: &Subset) -> Result<Subset> {
        let out = match (self, s) {
            (GroupSpec::IntAdd, Subset::Intervals(i)) => Subset::Intervals(lattice_canon(i)),
            _ => s.clone(),
        };
        self.check_set(&out)?;
        Ok(out)
    }

    pub fn contains(&self, s: &Subset, e: &Element) -> Result<bool> {
        let e = self.element(e)?;
        match (s, &e) {
            (Subset::Points(p), Element::Idx(i)) => Ok(p.contains(*i)),
            (Subset::Intervals(iv), Element::Num(q)) => Ok(iv.contains(q)),
            _ => Err(Error::Domain(format!("{e} cannot be tested against {s}"))),
        }
    }

    /// Forward left translate `g·S`.
    pub fn translate_set(&self, g: &Element, s: &Subset) -> Result<Subset> {
        self.check_set(s)?;
        let g = self.element(g)?;
        match (self, s) {
            (GroupSpec::Finite(t), Subset::Points(p)) => {
                let g = self.as_idx(t, &g)?;
                Ok(Subset::Points(p.map(|x| t.mul(g, x))))
            }
            (_, Subset::Intervals(iv)) => {
                let law = self.law().expect("interval group");
                Ok(Subset::Intervals(iv.translate(self.as_num(&g)?, law)?))
            }
            _ => unreachable!("checked"),
        }
    }

    /// Forward right translate `S·g`.
    pub fn translate_set_right(&self, s: &Subset, g: &Element) -> Result<Subset> {
        match (self, s) {
            (GroupSpec::Finite(t), Subset::Points(p)) => {
                self.check_set(s)?;
                let g = self.as_idx(t, g)?;
                Ok(Subset::Points(p.map(|x| t.mul(x, g))))
            }
            _ => self.translate_set(g, s),
        }
    }

    /// The preimage `(h ↦ g·h)⁻¹(S) = g⁻¹·S`.
    pub fn preimage_translate(&self, g: &Element, s: &Subset) -> Result<Subset> {
        self.translate_set(&self.inverse(g)?, s)
    }

    /// `S⁻¹`; half-open interval sets are reflected as `[−b, −a)`.
    pub fn invert_set(&self, s: &Subset) -> Result<Subset> {
        self.check_set(s)?;
        match (self, s) {
            (GroupSpec::Finite(t), Subset::Points(p)) => Ok(Subset::Points(p.map(|x| t.inv(x)))),
            (GroupSpec::IntAdd, Subset::Intervals(iv)) => Ok(Subset::Intervals(
                iv.invert(Law::Additive)?.translate(&Rat::one(), Law::Additive)?,
            )),
            (_, Subset::Intervals(iv)) => Ok(Subset::Intervals(iv.invert(self.law().expect("interval group"))?)),
            _ => unreachable!("checked"),
        }
    }

    /// The `n`-th canonical open neighbourhood of the identity.
    pub fn shrink_basis(&self, n: u32) -> Subset {
        let eps = Rat::dyadic(n);
        match self {
            GroupSpec::Finite(t) => Subset::Points(FiniteSet::singleton(t.order(), t.identity()).expect("identity")),
            GroupSpec::IntAdd => Subset::Intervals(IntervalSet::half_open(Rat::zero(), Rat::one()).expect("unit")),
            GroupSpec::RealAdd => Subset::Intervals(IntervalSet::open(-&eps, eps).expect("nonempty")),
            GroupSpec::PosMul => {
                let hi = Rat::one() + eps;
                Subset::Intervals(IntervalSet::open(hi.checked_recip().expect("positive"), hi).expect("nonempty"))
            }
        }
    }

    pub fn empty_set(&self) -> Subset {
        match self {
            GroupSpec::Finite(t) => Subset::Points(FiniteSet::empty(t.order())),
            _ => Subset::Intervals(IntervalSet::empty(Kind::HalfOpen)),
        }
    }

    pub fn full_set(&self) -> Option<Subset> {
        self.order().map(|n| Subset::Points(FiniteSet::full(n)))
    }

    pub fn is_compact(&self, s: &Subset) -> bool {
        match (self, s) {
            (GroupSpec::Finite(_), Subset::Points(_)) => true,
            (GroupSpec::IntAdd, Subset::Intervals(i)) => i.is_bounded(),
            (_, Subset::Intervals(i)) => i.is_empty() || (i.kind() == Kind::Closed && i.is_bounded()),
            _ => false,
        }
    }

    pub fn is_open(&self, s: &Subset) -> bool {
        match (self, s) {
            (GroupSpec::Finite(_), Subset::Points(_)) | (GroupSpec::IntAdd, Subset::Intervals(_)) => true,
            (_, Subset::Intervals(i)) => i.is_empty() || i.kind() == Kind::Open,
            _ => false,
        }
    }

    pub fn has_interior(&self, s: &Subset) -> bool {
        match s {
            Subset::Points(p) => !p.is_empty(),
            Subset::Intervals(i) if self.is_discrete() => !i.is_empty(),
            Subset::Intervals(i) => i.intervals().iter().any(|(a, b)| a < b),
        }
    }

    /// Compact subset approximating `s` from inside; the identity on
    /// discrete groups, `shrink` by `eps` otherwise.
    pub fn inner_compact(&self, s: &Subset, eps: &Rat) -> Result<Subset> {
        match s {
            Subset::Intervals(i) if !self.is_discrete() => Ok(Subset::Intervals(i.shrink(eps)?)),
            _ => Ok(s.clone()),
        }
    }

    /// Open superset of `s`; the identity on discrete groups, `fatten` by
    /// `eps` otherwise.
    pub fn outer_open(&self, s: &Subset, eps: &Rat) -> Result<Subset> {
        match s {
            Subset::Intervals(i) if !self.is_discrete() => Ok(Subset::Intervals(i.fatten(eps)?)),
            _ => Ok(s.clone()),
        }
    }

    /// Open superset that keeps open endpoints in place.
    pub fn open_hull(&self, s: &Subset, eps: &Rat) -> Result<Subset> {
        match s {
            Subset::Intervals(i) if !self.is_discrete() => Ok(Subset::Intervals(i.open_hull(eps)?)),
            _ => Ok(s.clone()),
        }
    }

    /// Every element of a bounded discrete set, in order.
    pub fn enumerate(&self, s: &Subset) -> Result<Vec<Element>> {
        match (self, s) {
            (GroupSpec::Finite(_), Subset::Points(p)) => Ok(p.iter().map(Element::Idx).collect()),
            (GroupSpec::IntAdd, Subset::Intervals(i)) => {
                let mut out = Vec::new();
                for (a, b) in i.finite_intervals().ok_or_else(|| {
                    Error::Unsupported(format!("cannot enumerate the unbounded set {i}"))
                })? {
                    let (a, b) = (a.to_i64().expect("small"), b.to_i64().expect("small"));
                    if b - a > 1 << 20 {
                        return Err(Error::Unsupported(format!("set {i} too large to enumerate")));
                    }
                    out.extend((a..b).map(|k| Element::Num(Rat::int(k))));
                }
                Ok(out)
            }
            _ => Err(Error::Unsupported(format!("cannot enumerate {s} in {self}"))),
        }
    }
}

/// A compact set with nonempty interior, the normalising set of a Haar
/// measure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveCompact {
    set: Subset,
}

impl PositiveCompact {
    pub fn new(g: &GroupSpec, set: &Subset) -> Result<PositiveCompact> {
        let set = g.normalize(set)?;
        if !g.is_compact(&set) {
            return Err(Error::Precondition(format!("{set} is not compact in {g}")));
        }
        if !g.has_interior(&set) {
            return Err(Error::Precondition(format!("{set} has empty interior in {g}")));
        }
        Ok(PositiveCompact { set })
    }

    pub fn set(&self) -> &Subset {
        &self.set
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iv(s: &str) -> Subset {
        Subset::Intervals(s.parse().unwrap())
    }

    fn q(s: &str) -> Element {
        Element::Num(s.parse().unwrap())
    }

    fn pts(n: usize, m: &[usize]) -> Subset {
        Subset::Points(FiniteSet::new(n, m.iter().copied()).unwrap())
    }

    #[test]
    fn symmetric_three() {
        let t = CayleyTable::symmetric(3).unwrap();
        assert_eq!(t.order(), 6);
        assert!(!t.is_abelian());
        let three_cycles: Vec<usize> = (1..6).filter(|&g| t.mul(g, t.mul(g, g)) == 0 && t.mul(g, g) != 0).collect();
        assert_eq!(three_cycles.len(), 2);
        let r = three_cycles[0];
        let g = GroupSpec::symmetric(3);
        assert_eq!(g.translate_set(&Element::Idx(r), &pts(6, &[0])).unwrap(), pts(6, &[r]));
        assert_eq!(g.invert_set(&pts(6, &[r])).unwrap(), pts(6, &[t.mul(r, r)]));
    }

    #[test]
    fn bad_tables_rejected() {
        assert!(CayleyTable::new(vec![vec![0, 1], vec![0, 1]], 0).is_err());
        assert!(CayleyTable::new(vec![vec![1, 0], vec![0, 1]], 0).is_err());
        // a Latin square with identity that is not associative
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(CayleyTable::new(loop5, 0).is_err());
    }

    #[test]
    fn group_axioms_hold_for_builtins() {
        for t in [
            CayleyTable::symmetric(4).unwrap(),
            CayleyTable::cyclic(7).unwrap(),
            CayleyTable::klein(),
            CayleyTable::symmetric(1).unwrap(),
        ] {
            assert!(CayleyTable::new(t.rows().to_vec(), t.identity()).is_ok());
        }
        assert_eq!(CayleyTable::symmetric(5).unwrap().order(), 120);
    }

    #[test]
    fn translate_examples() {
        assert_eq!(GroupSpec::RealAdd.translate_set(&q("2"), &iv("[0,1)")).unwrap(), iv("[2,3)"));
        assert_eq!(GroupSpec::PosMul.translate_set(&q("3"), &iv("[1,2]")).unwrap(), iv("[3,6]"));
        assert!(GroupSpec::PosMul.translate_set(&q("-3"), &iv("[1,2]")).is_err());
        assert_eq!(GroupSpec::RealAdd.preimage_translate(&q("2"), &iv("[0,1)")).unwrap(), iv("[-2,-1)"));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(GroupSpec::RealAdd.invert_set(&iv("[0,1]")).unwrap(), iv("[-1,0]"));
        assert_eq!(GroupSpec::PosMul.invert_set(&iv("[1,4]")).unwrap(), iv("[1/4,1]"));
        // {0,1,2} ↦ {−2,−1,0}
        assert_eq!(GroupSpec::IntAdd.invert_set(&iv("[0,3)")).unwrap(), iv("[-2,1)"));
    }

    #[test]
    fn shrink_basis_examples() {
        assert_eq!(GroupSpec::RealAdd.shrink_basis(2), iv("(-1/4,1/4)"));
        assert_eq!(GroupSpec::PosMul.shrink_basis(1), iv("(2/3,3/2)"));
        let s3 = GroupSpec::symmetric(3);
        assert_eq!(s3.shrink_basis(9), pts(6, &[0]));
        assert_eq!(GroupSpec::IntAdd.shrink_basis(4), iv("[0,1)"));
    }

    #[test]
    fn shrink_basis_nested() {
        for g in [GroupSpec::RealAdd, GroupSpec::PosMul] {
            for n in 0..20 {
                let (a, b) = (g.shrink_basis(n + 1), g.shrink_basis(n));
                assert!(a.is_subset_of(&b));
                assert!(g.contains(&a, &g.identity()).unwrap());
                let Subset::Intervals(ai) = &a else { panic!() };
                assert!(ai.length().to_f64() < 3.0 * 0.5f64.powi(n as i32 + 1));
            }
        }
    }

    #[test]
    fn lattice_normalization() {
        let z = GroupSpec::IntAdd;
        assert_eq!(z.normalize(&iv("[0,3]")).unwrap(), iv("[0,4)"));
        assert_eq!(z.normalize(&iv("(0,3)")).unwrap(), iv("[1,3)"));
        assert_eq!(z.normalize(&iv("[1/2,5/2)")).unwrap(), iv("[1,3)"));
        assert!(z.check_set(&iv("[1/2,3)")).is_err());
        assert!(z.translate_set(&q("1/2"), &iv("[0,1)")).is_err());
    }

    #[test]
    fn positive_compacts() {
        assert!(PositiveCompact::new(&GroupSpec::RealAdd, &iv("[0,1]")).is_ok());
        assert!(PositiveCompact::new(&GroupSpec::RealAdd, &iv("[0,0]")).is_err());
        assert!(PositiveCompact::new(&GroupSpec::RealAdd, &iv("(0,1)")).is_err());
        assert!(PositiveCompact::new(&GroupSpec::symmetric(3), &pts(6, &[])).is_err());
        assert!(PositiveCompact::new(&GroupSpec::IntAdd, &iv("[0,inf)")).is_err());
    }

    #[test]
    fn json_group_specs() {
        let g: GroupSpec = serde_json::from_str(r#"{"type":"real_add"}"#).unwrap();
        assert_eq!(g, GroupSpec::RealAdd);
        let g: GroupSpec = serde_json::from_str(r#"{"type":"finite","cayley":[[0,1],[1,0]],"identity":0}"#).unwrap();
        assert_eq!(g, GroupSpec::cyclic(2));
        assert_eq!(serde_json::to_string(&g).unwrap(), r#"{"type":"finite","cayley":[[0,1],[1,0]],"identity":0}"#);
        let g: GroupSpec = serde_json::from_str(r#"{"type":"symmetric","n":3}"#).unwrap();
        assert_eq!(g.order(), Some(6));
        assert!(serde_json::from_str::<GroupSpec>(r#"{"type":"finite","cayley":[[0,0],[1,1]]}"#).is_err());
    }

    fn arb_half_open() -> impl Strategy<Value = IntervalSet> {
        proptest::collection::vec((-16i64..16, 1i64..8), 0..4).prop_map(|v| {
            let ivs: Vec<(Rat, Rat)> = v.into_iter().map(|(a, w)| (Rat::new(a, 4), Rat::new(a + w, 4))).collect();
            IntervalSet::from_rats(Kind::HalfOpen, &ivs).unwrap()
        })
    }

    proptest! {
        #[test]
        fn translation_is_an_automorphism(a in arb_half_open(), b in arb_half_open(), n in -30i64..30) {
            let g = GroupSpec::RealAdd;
            let e = Element::Num(Rat::new(n, 3));
            let (sa, sb) = (Subset::Intervals(a.clone()), Subset::Intervals(b.clone()));
            let lhs = g.translate_set(&e, &sa.union(&sb).unwrap()).unwrap();
            let rhs = g.translate_set(&e, &sa).unwrap().union(&g.translate_set(&e, &sb).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            let lhs = g.translate_set(&e, &sa.intersect(&sb).unwrap()).unwrap();
            let rhs = g.translate_set(&e, &sa).unwrap().intersect(&g.translate_set(&e, &sb).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn finite_invert_involutive(mask in 0u64..64) {
            let g = GroupSpec::symmetric(3);
            let s = Subset::Points(FiniteSet::from_mask(6, mask));
            prop_assert_eq!(g.invert_set(&g.invert_set(&s).unwrap()).unwrap(), s);
        }

        #[test]
        fn integer_invert_involutive(a in -20i64..20, w in 1i64..10) {
            let g = GroupSpec::IntAdd;
            let s = Subset::Intervals(IntervalSet::half_open(Rat::int(a), Rat::int(a + w)).unwrap());
            prop_assert_eq!(g.invert_set(&g.invert_set(&s).unwrap()).unwrap(), s);
        }
    }
}
