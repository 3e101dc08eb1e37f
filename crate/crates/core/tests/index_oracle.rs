//! Covering numbers against independent searches: a dynamic program over
//! every grid start on the line, and exhaustive anchor subsets on finite
//! groups.

use std::collections::HashMap;

use haarlab_core::group::GroupSpec;
use haarlab_core::haar::{index, index_count};
use haarlab_core::setalg::{FiniteSet, IntervalSet, Subset};
use haarlab_core::Rat;
use proptest::prelude::*;

/// Least number of windows `[x, x+w)`, `x` an integer, covering the union of
/// the integer intervals `comps`. Every start in `(q-w, q]` is tried for the
/// leftmost uncovered point `q`, not just `q` itself.
fn grid_cover(comps: &[(i64, i64)], w: i64) -> usize {
    fn go(p: i64, comps: &[(i64, i64)], w: i64, memo: &mut HashMap<i64, usize>) -> usize {
        let q = match comps.iter().filter(|&&(_, r)| r >= p).map(|&(l, _)| l.max(p)).min() {
            None => return 0,
            Some(q) => q,
        };
        if let Some(&c) = memo.get(&q) {
            return c;
        }
        let best = (q - w + 1..=q).map(|x| 1 + go(x + w, comps, w, memo)).min().expect("w ≥ 1");
        memo.insert(q, best);
        best
    }
    go(i64::MIN / 4, comps, w, &mut HashMap::new())
}

fn closed_union(comps: &[(i64, i64)], den: i64) -> Subset {
    let mut s = IntervalSet::empty(haarlab_core::setalg::Kind::Closed);
    for &(l, r) in comps {
        s = s.union(&IntervalSet::closed(Rat::new(l, den), Rat::new(r, den)).unwrap()).unwrap();
    }
    Subset::Intervals(s)
}

fn comps_strategy() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-24i64..24, 0i64..16), 1..=3)
        .prop_map(|v| v.into_iter().map(|(l, len)| (l, l + len)).collect())
}

/// Merges overlapping or touching integer intervals.
fn merged(mut comps: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    comps.sort();
    let mut out: Vec<(i64, i64)> = Vec::new();
    for (l, r) in comps {
        match out.last_mut() {
            Some(last) if l <= last.1 => last.1 = last.1.max(r),
            _ => out.push((l, r)),
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn real_line_index_matches_grid_search(comps in comps_strategy(), a in 1i64..=16, b in 1i64..=16) {
        // K has endpoints in 1/8, V = (-a/32, b/32); everything lives on the 1/32 grid.
        let k = closed_union(&comps.iter().map(|&(l, r)| (4 * l, 4 * r)).collect::<Vec<_>>(), 32);
        let v = Subset::Intervals(IntervalSet::open(Rat::new(-a, 32), Rat::new(b, 32)).unwrap());
        let g = GroupSpec::RealAdd;
        let grid: Vec<(i64, i64)> = merged(comps.iter().map(|&(l, r)| (4 * l, 4 * r)).collect());
        let want = grid_cover(&grid, a + b);
        prop_assert_eq!(index_count(&g, &k, &v).unwrap(), want);
        let r = index(&g, &k, &v).unwrap();
        prop_assert_eq!(r.count, want);
        prop_assert_eq!(r.witness.len(), want);
    }
}

fn brute_cover(g: &GroupSpec, k: &FiniteSet, v: &FiniteSet) -> usize {
    let n = g.order().unwrap();
    let translate = |x: usize| -> u64 {
        v.iter().fold(0u64, |m, y| m | 1 << g.table().unwrap().mul(x, y))
    };
    let kmask = k.iter().fold(0u64, |m, x| m | 1 << x);
    (0u64..1 << n)
        .filter(|anchors| {
            let cover = (0..n).filter(|x| anchors >> x & 1 == 1).fold(0u64, |m, x| m | translate(x));
            cover & kmask == kmask
        })
        .map(|anchors| anchors.count_ones() as usize)
        .min()
        .unwrap()
}

#[test]
fn finite_index_matches_exhaustive_anchor_search() {
    for g in [GroupSpec::symmetric(3), GroupSpec::cyclic(5), GroupSpec::klein()] {
        let n = g.order().unwrap();
        for kmask in 1u64..1 << n {
            let k = FiniteSet::from_mask(n, kmask);
            for vmask in (1u64..1 << n).filter(|m| m & 1 == 1) {
                let v = FiniteSet::from_mask(n, vmask);
                let got = index_count(&g, &Subset::Points(k.clone()), &Subset::Points(v.clone())).unwrap();
                assert_eq!(got, brute_cover(&g, &k, &v), "{g}: K={k:?} V={v:?}");
            }
        }
    }
}

#[test]
fn grid_oracle_sanity() {
    assert_eq!(grid_cover(&[(0, 32)], 32), 2);
    assert_eq!(grid_cover(&[(0, 31)], 32), 1);
    assert_eq!(grid_cover(&[(0, 0), (31, 31)], 32), 1);
    assert_eq!(grid_cover(&[(0, 0), (32, 32)], 32), 2);
    assert_eq!(grid_cover(&[], 4), 0);
}
