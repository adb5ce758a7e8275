//! The optimal-matching metric `d` between rigged sets.
//!
//! Both sets are expanded by multiplicity and padded with copies of the
//! sticky point (each side receives the other side's rank), after which `d`
//! is a min-cost bipartite assignment: sticky-sticky pairs are free, a
//! sticky-point pair costs the point's sticky distance, and point-point
//! pairs cost the space distance. An exhaustive permutation oracle and the
//! increasing-enumeration check live here too.

use crate::rigged::{RiggedError, RiggedSet, Space, SpacePoint};
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatchingError {
    #[error(transparent)]
    Rigged(#[from] RiggedError),
    #[error("padded instance of size {0} exceeds the brute-force limit {1}")]
    SizeLimit(usize, usize),
}

/// An optimal matching: total cost plus the realized pairs. Every non-sticky
/// point of either set appears exactly `mult` times among the pairs.
#[derive(Debug, Clone)]
pub struct MatchingResult {
    pub cost: f64,
    pub pairs: Vec<(SpacePoint, SpacePoint)>,
}

fn pair_cost(space: Space, a: SpacePoint, b: SpacePoint) -> f64 {
    match (a, b) {
        (SpacePoint::Sticky, SpacePoint::Sticky) => 0.0,
        (SpacePoint::Sticky, SpacePoint::At(x)) | (SpacePoint::At(x), SpacePoint::Sticky) => {
            space.sticky_dist(x)
        }
        (SpacePoint::At(x), SpacePoint::At(y)) => space.dist(x, y),
    }
}

fn canonical_key(s: &RiggedSet) -> impl Ord + '_ {
    s.entries()
        .iter()
        .map(|&(x, m)| (ordered_float::NotNanWrapper(x), m))
        .collect::<Vec<_>>()
}

// Tiny total-order wrapper; coordinates are finite by construction.
mod ordered_float {
    #[derive(PartialEq)]
    pub struct NotNanWrapper(pub f64);
    impl Eq for NotNanWrapper {}
    impl PartialOrd for NotNanWrapper {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for NotNanWrapper {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            self.0.total_cmp(&other.0)
        }
    }
}

fn padded_points(s: &RiggedSet, pad: usize) -> Vec<SpacePoint> {
    let mut pts: Vec<SpacePoint> = s.expand().into_iter().map(SpacePoint::At).collect();
    pts.extend(std::iter::repeat_n(SpacePoint::Sticky, pad));
    pts
}

/// Dense min-cost assignment via shortest augmenting paths, O(n^3).
/// Returns the column assigned to each row.
fn assignment(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    let inf = f64::INFINITY;
    // 1-based potentials over rows (u) and columns (v); p[j] is the row
    // matched to column j, column 0 is the virtual root.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut row_to_col = vec![0usize; n];
    for j in 1..=n {
        row_to_col[p[j] - 1] = j - 1;
    }
    row_to_col
}

/// The metric `d(S, T)` with one realizing matching.
///
/// Exactly symmetric: the operands are ordered canonically before solving,
/// so `d(S, T)` and `d(T, S)` run the identical computation.
pub fn distance_d(s: &RiggedSet, t: &RiggedSet) -> Result<MatchingResult, MatchingError> {
    if s.space() != t.space() {
        return Err(RiggedError::SpaceMismatch.into());
    }
    if canonical_key(t) < canonical_key(s) {
        let m = distance_d(t, s)?;
        return Ok(MatchingResult {
            cost: m.cost,
            pairs: m.pairs.into_iter().map(|(a, b)| (b, a)).collect(),
        });
    }
    let space = s.space();
    let left = padded_points(s, t.rank() as usize);
    let right = padded_points(t, s.rank() as usize);
    debug_assert_eq!(left.len(), right.len());
    if left.is_empty() {
        return Ok(MatchingResult {
            cost: 0.0,
            pairs: Vec::new(),
        });
    }
    let cost: Vec<Vec<f64>> = left
        .iter()
        .map(|&a| right.iter().map(|&b| pair_cost(space, a, b)).collect())
        .collect();
    let row_to_col = assignment(&cost);
    let mut pairs: Vec<(SpacePoint, SpacePoint)> = row_to_col
        .iter()
        .enumerate()
        .map(|(i, &j)| (left[i], right[j]))
        .collect();
    // Only the cost is contractual; order pairs deterministically.
    pairs.sort_by(|a, b| {
        let key = |p: &(SpacePoint, SpacePoint)| {
            let k = |q: SpacePoint| match q {
                SpacePoint::Sticky => (0u8, 0.0),
                SpacePoint::At(x) => (1u8, x),
            };
            (k(p.0), k(p.1))
        };
        key(a).partial_cmp(&key(b)).unwrap()
    });
    let total = pairs
        .iter()
        .map(|&(a, b)| pair_cost(space, a, b))
        .sum::<f64>();
    Ok(MatchingResult { cost: total, pairs })
}

/// Exact minimum over all permutations of the padded point lists. Only
/// feasible for `rank(S) + rank(T) <= limit` (8 by default).
pub fn brute_force_d(s: &RiggedSet, t: &RiggedSet) -> Result<f64, MatchingError> {
    const LIMIT: usize = 8;
    if s.space() != t.space() {
        return Err(RiggedError::SpaceMismatch.into());
    }
    let n = (s.rank() + t.rank()) as usize;
    if n > LIMIT {
        return Err(MatchingError::SizeLimit(n, LIMIT));
    }
    let space = s.space();
    let left = padded_points(s, t.rank() as usize);
    let right = padded_points(t, s.rank() as usize);
    if left.is_empty() {
        return Ok(0.0);
    }
    let mut perm: Vec<usize> = (0..right.len()).collect();
    let mut best = f64::INFINITY;
    permute(&mut perm, 0, &mut |p| {
        let c: f64 = p
            .iter()
            .enumerate()
            .map(|(i, &j)| pair_cost(space, left[i], right[j]))
            .sum();
        if c < best {
            best = c;
        }
    });
    Ok(best)
}

fn permute(items: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Checks that some pair of increasing sticky-padded enumerations achieves
/// the matching cost, searching over all placements of sticky copies at the
/// cut point (angle 0 on the front, 2pi on the back).
///
/// Enumerations are compared with plain real-line distance on [0, 2pi], as
/// in the increasing-enumeration form of the metric.
pub fn monotone_matching_check(s: &RiggedSet, t: &RiggedSet) -> Result<bool, MatchingError> {
    debug_assert_eq!(
        s.space(),
        Space::Circle,
        "cut-point enumeration lives on the circle"
    );
    let d = distance_d(s, t)?.cost;
    let sv = s.expand();
    let tv = t.expand();
    let p = sv.len();
    let q = tv.len();
    let mut best = f64::INFINITY;
    for len in p.max(q)..=(p + q) {
        for front_s in 0..=(len - p) {
            let back_s = len - p - front_s;
            for front_t in 0..=(len - q) {
                let back_t = len - q - front_t;
                let at = |v: &[f64], front: usize, back: usize, i: usize| -> f64 {
                    if i < front {
                        0.0
                    } else if i < front + v.len() {
                        v[i - front]
                    } else {
                        debug_assert!(i < front + v.len() + back);
                        TAU
                    }
                };
                let mut cost = 0.0;
                for i in 0..len {
                    cost += (at(&sv, front_s, back_s, i) - at(&tv, front_t, back_t, i)).abs();
                }
                if cost < best {
                    best = cost;
                }
            }
        }
    }
    if p == 0 && q == 0 {
        best = 0.0;
    }
    Ok((best - d).abs() <= 1e-10)
}
