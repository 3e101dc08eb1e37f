//! Seeded random inputs. Every case draws from its own ChaCha stream keyed
//! by (seed, suite, case index), so a case does not depend on which thread
//! ran it or on how many cases came before.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::group::{Element, GroupSpec};
use crate::numeric::{Bound, ExtNonneg, Rat, VecQ};
use crate::product::{SimpleFunc2D, StepFuncVec2D};
use crate::setalg::{FinitePairSet, FiniteSet, IntervalSet, Kind, Region, RectUnion, Subset};
use crate::simple::{SimpleFunc, StepFuncVec};

/// The random stream of one case.
pub fn case_rng(seed: u64, suite: &str, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&index.to_le_bytes());
    for (k, b) in key[16..].iter_mut().zip(suite.bytes()) {
        *k = b;
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(suite.len() as u64);
    rng
}

/// `k/den` with `lo·den ≤ k ≤ hi·den`.
pub fn grid_rat(rng: &mut impl Rng, lo: i64, hi: i64, den: i64) -> Rat {
    Rat::new(rng.random_range(lo * den..=hi * den), den)
}

/// `count` distinct sorted grid points in `[lo, hi]`.
pub fn grid_points(rng: &mut impl Rng, count: usize, lo: i64, hi: i64, den: i64) -> Vec<Rat> {
    let span = ((hi - lo) * den + 1) as usize;
    let count = count.min(span);
    let mut picks = rand::seq::index::sample(rng, span, count).into_vec();
    picks.sort_unstable();
    picks.into_iter().map(|k| Rat::new(lo * den + k as i64, den)).collect()
}

/// Up to `max_comps` disjoint intervals of the given kind with endpoints on
/// the grid `ℤ/den` inside `[lo, hi]`; never empty.
pub fn interval_set(rng: &mut impl Rng, kind: Kind, max_comps: usize, lo: i64, hi: i64, den: i64) -> IntervalSet {
    let comps = rng.random_range(1..=max_comps);
    let pts = grid_points(rng, 2 * comps, lo, hi, den);
    let ivs: Vec<(Rat, Rat)> = pts.chunks(2).filter(|c| c.len() == 2).map(|c| (c[0].clone(), c[1].clone())).collect();
    IntervalSet::from_rats(kind, &ivs).expect("sorted distinct endpoints")
}

/// Nonempty subset of `{0..n}` (possibly all of it), or any subset when
/// `allow_empty`.
pub fn finite_subset(rng: &mut impl Rng, n: usize, allow_empty: bool) -> FiniteSet {
    loop {
        let s = FiniteSet::new(n, (0..n).filter(|_| rng.random_bool(0.5))).expect("in range");
        if allow_empty || !s.is_empty() {
            return s;
        }
    }
}

/// A group element; rationals on the grid `ℤ/den`, positive for `PosMul`.
pub fn element(rng: &mut impl Rng, g: &GroupSpec, den: i64) -> Element {
    match g {
        GroupSpec::Finite(t) => Element::Idx(rng.random_range(0..t.order())),
        GroupSpec::IntAdd => Element::Num(Rat::int(rng.random_range(-20..=20))),
        GroupSpec::RealAdd => Element::Num(grid_rat(rng, -10, 10, den)),
        GroupSpec::PosMul => {
            let x = Rat::new(rng.random_range(den..=4 * den), den);
            Element::Num(if rng.random_bool(0.5) { x } else { x.checked_recip().expect("positive") })
        }
    }
}

/// A compact set with nonempty interior in the group.
pub fn compact(rng: &mut impl Rng, g: &GroupSpec, max_comps: usize, den: i64) -> Subset {
    match g {
        GroupSpec::Finite(t) => Subset::Points(finite_subset(rng, t.order(), false)),
        GroupSpec::IntAdd => Subset::Intervals(interval_set(rng, Kind::HalfOpen, max_comps, -8, 8, 1)),
        GroupSpec::RealAdd => Subset::Intervals(interval_set(rng, Kind::Closed, max_comps, -4, 4, den)),
        GroupSpec::PosMul => {
            let s = interval_set(rng, Kind::Closed, max_comps, 1, 8, den);
            let iv = s
                .finite_intervals()
                .expect("bounded")
                .into_iter()
                .map(|(a, b)| (Bound::Fin(a / Rat::int(2)), Bound::Fin(b / Rat::int(2))))
                .collect();
            Subset::Intervals(IntervalSet::new(Kind::Closed, iv).expect("valid"))
        }
    }
}

/// A measurable (half-open, or finite) set.
pub fn measurable(rng: &mut impl Rng, g: &GroupSpec, max_comps: usize, den: i64) -> Subset {
    match g {
        GroupSpec::Finite(t) => Subset::Points(finite_subset(rng, t.order(), true)),
        GroupSpec::IntAdd => Subset::Intervals(interval_set(rng, Kind::HalfOpen, max_comps, -8, 8, 1)),
        GroupSpec::RealAdd => Subset::Intervals(interval_set(rng, Kind::HalfOpen, max_comps, -4, 4, den)),
        GroupSpec::PosMul => match compact(rng, g, max_comps, den) {
            Subset::Intervals(s) => Subset::Intervals(s.to_half_open().expect("closed set")),
            p => p,
        },
    }
}

/// An open neighbourhood of the identity.
pub fn neighbourhood(rng: &mut impl Rng, g: &GroupSpec) -> Subset {
    match g {
        GroupSpec::Finite(t) => {
            let mut s = finite_subset(rng, t.order(), true);
            s = s.union(&FiniteSet::singleton(t.order(), t.identity()).expect("in range")).expect("same carrier");
            Subset::Points(s)
        }
        GroupSpec::IntAdd => g.shrink_basis(0),
        GroupSpec::RealAdd => {
            let a = Rat::new(rng.random_range(1..=16), 32);
            let b = Rat::new(rng.random_range(1..=16), 32);
            Subset::Intervals(IntervalSet::open(-a, b).expect("a, b > 0"))
        }
        GroupSpec::PosMul => {
            let a = Rat::new(rng.random_range(16..=31), 32);
            let b = Rat::new(rng.random_range(33..=48), 32);
            Subset::Intervals(IntervalSet::open(a, b).expect("a < 1 < b"))
        }
    }
}

/// Value from `{1, 2, 3/2, 1/3}`, or `∞` with probability `p_inf`.
pub fn ext_value(rng: &mut impl Rng, p_inf: f64) -> ExtNonneg {
    if rng.random_bool(p_inf) {
        return ExtNonneg::Infinity;
    }
    ExtNonneg::Finite(Rat::new(rng.random_range(1..=6), rng.random_range(1..=3)))
}

pub fn vec_value(rng: &mut impl Rng, dim: usize) -> VecQ {
    VecQ::new((0..dim).map(|_| Rat::new(rng.random_range(-6..=6), rng.random_range(1..=3))).collect()).expect("dim ≥ 1")
}

/// A simple function on a measurable-set grid.
pub fn simple_func(rng: &mut impl Rng, g: &GroupSpec, pieces: usize, den: i64, p_inf: f64) -> SimpleFunc {
    let cells = grid_cells(rng, g, pieces, den);
    SimpleFunc::new(cells.into_iter().map(|c| (c, ext_value(rng, p_inf))).collect()).expect("disjoint cells")
}

pub fn step_vec(rng: &mut impl Rng, g: &GroupSpec, pieces: usize, dim: usize, den: i64) -> StepFuncVec {
    let cells = grid_cells(rng, g, pieces, den);
    StepFuncVec::new(dim, cells.into_iter().map(|c| (c, vec_value(rng, dim))).collect()).expect("disjoint cells")
}

/// Up to `pieces` disjoint nonempty sets.
fn grid_cells(rng: &mut impl Rng, g: &GroupSpec, pieces: usize, den: i64) -> Vec<Subset> {
    match g {
        GroupSpec::Finite(t) => {
            let n = t.order();
            let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..=pieces)).collect();
            (1..=pieces)
                .map(|l| Subset::Points(FiniteSet::new(n, (0..n).filter(|&i| labels[i] == l)).expect("in range")))
                .filter(|s| !s.is_empty())
                .collect()
        }
        _ => {
            let (lo, hi, den) = match g {
                GroupSpec::IntAdd => (-8, 8, 1),
                GroupSpec::PosMul => (1, 6, den),
                _ => (-4, 4, den),
            };
            let pts = grid_points(rng, pieces + 1, lo, hi, den);
            pts.windows(2)
                .filter(|_| rng.random_bool(0.8))
                .map(|w| Subset::Intervals(IntervalSet::half_open(w[0].clone(), w[1].clone()).expect("lo < hi")))
                .collect()
        }
    }
}

/// A union of up to `rects` half-open rectangles on the grid `ℤ/den`.
pub fn rect_union(rng: &mut impl Rng, rects: usize, den: i64) -> RectUnion {
    let k = rng.random_range(1..=rects);
    let parts: Vec<(IntervalSet, IntervalSet)> = (0..k)
        .map(|_| {
            let x = grid_points(rng, 2, -3, 3, den);
            let y = grid_points(rng, 2, -3, 3, den);
            (
                IntervalSet::half_open(x[0].clone(), x[1].clone()).expect("lo < hi"),
                IntervalSet::half_open(y[0].clone(), y[1].clone()).expect("lo < hi"),
            )
        })
        .collect();
    RectUnion::from_rects(&parts).expect("half-open factors")
}

/// Grid over `[−3,3]²`: random x and y breakpoints, each cell getting a
/// label in `0..=labels` (0 = off).
fn grid_labels(rng: &mut impl Rng, cuts: usize, labels: usize, den: i64) -> Vec<(Region, usize)> {
    let xs = grid_points(rng, cuts + 1, -3, 3, den);
    let ys = grid_points(rng, cuts + 1, -3, 3, den);
    let mut out = Vec::new();
    for xw in xs.windows(2) {
        for yw in ys.windows(2) {
            let l = rng.random_range(0..=labels);
            if l > 0 {
                let r = RectUnion::rect(xw[0].clone(), xw[1].clone(), yw[0].clone(), yw[1].clone()).expect("cell");
                out.push((Region::Rects(r), l));
            }
        }
    }
    out
}

/// Random nonnegative 2-D simple function on a grid; values drawn per label.
pub fn simple_func_2d(rng: &mut impl Rng, cuts: usize, den: i64, p_inf: f64) -> SimpleFunc2D {
    let values: Vec<ExtNonneg> = (0..3).map(|_| ext_value(rng, p_inf)).collect();
    let cells = grid_labels(rng, cuts, 3, den);
    SimpleFunc2D::new(cells.into_iter().map(|(r, l)| (r, values[l - 1].clone())).collect()).expect("disjoint")
}

/// Random vector-valued 2-D step function on a grid.
pub fn step_vec_2d(rng: &mut impl Rng, cuts: usize, dim: usize, den: i64) -> StepFuncVec2D {
    let values: Vec<VecQ> = (0..3).map(|_| vec_value(rng, dim)).collect();
    let cells = grid_labels(rng, cuts, 3, den);
    StepFuncVec2D::new(dim, cells.into_iter().map(|(r, l)| (r, values[l - 1].clone())).collect()).expect("disjoint")
}

/// Random subset of `G×G` for a finite group of order `n`.
pub fn pair_set(rng: &mut impl Rng, n: usize) -> FinitePairSet {
    FinitePairSet::new(n, (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|_| rng.random_bool(0.5)))
        .expect("in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u32> = (0..4).map(|_| case_rng(42, "haar", 3).random()).collect();
        let b: Vec<u32> = (0..4).map(|_| case_rng(42, "haar", 3).random()).collect();
        assert_eq!(a, b);
        let x: u64 = case_rng(42, "haar", 3).random();
        let y: u64 = case_rng(42, "haar", 4).random();
        let z: u64 = case_rng(42, "product", 3).random();
        let w: u64 = case_rng(43, "haar", 3).random();
        assert!(x != y && x != z && x != w);
    }

    #[test]
    fn generated_sets_are_valid() {
        for i in 0..50 {
            let mut rng = case_rng(7, "sets", i);
            for g in [GroupSpec::RealAdd, GroupSpec::PosMul, GroupSpec::IntAdd, GroupSpec::symmetric(3)] {
                let k = compact(&mut rng, &g, 3, 8);
                assert!(g.is_compact(&g.normalize(&k).unwrap()), "{k}");
                let u = neighbourhood(&mut rng, &g);
                assert!(g.is_open(&u) && g.contains(&u, &g.identity()).unwrap(), "{g} {u}");
                g.check_set(&measurable(&mut rng, &g, 3, 8)).unwrap();
                g.element(&element(&mut rng, &g, 8)).unwrap();
            }
        }
    }
}
