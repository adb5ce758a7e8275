//! Spectral-flow counting along tracked paths.
//!
//! The crossing number of a single argument trajectory through a fixed
//! angle counts strict passages at full weight and boundary arrivals at
//! half weight. Summing over the tracks of a lifted path gives the
//! mu-invariant: a step function of the angle with values in half-integers,
//! stored exactly (doubled integer values, jump angles taken from the
//! projected endpoint sets).

use crate::lift::ArgumentTrack;
use crate::matching::distance_d;
use crate::rigged::{RiggedSet, Space};
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MuError {
    #[error("junction sets differ by {dist}; paths cannot be concatenated")]
    JunctionMismatch { dist: f64 },
    #[error("path is not a loop: endpoint ranks {start} and {end}")]
    NotALoop { start: u32, end: u32 },
    #[error("mu-invariant of a loop came out non-constant; tracking failed")]
    NonConstant,
}

/// Angles closer than this to a counting boundary are treated as exact
/// boundary hits.
const BOUNDARY_SNAP: f64 = 1e-9;

fn count_integers(a: f64, b: f64, inclusive: bool, snap: f64) -> i64 {
    let near = |x: f64| (x - x.round()).abs() <= snap;
    let k_min = if near(a) {
        if inclusive {
            a.round() as i64
        } else {
            a.round() as i64 + 1
        }
    } else {
        a.floor() as i64 + 1
    };
    let k_max = if near(b) {
        if inclusive {
            b.round() as i64
        } else {
            b.round() as i64 - 1
        }
    } else {
        b.floor() as i64
    };
    (k_max - k_min + 1).max(0)
}

fn crossing_doubled_snap(theta: f64, th1: f64, th2: f64, snap_radians: f64) -> i64 {
    if th2 < th1 {
        return -crossing_doubled_snap(theta, th2, th1, snap_radians);
    }
    let a = (th1 - theta) / TAU;
    let b = (th2 - theta) / TAU;
    let snap = snap_radians / TAU;
    count_integers(a, b, false, snap) + count_integers(a, b, true, snap)
}

/// Twice the crossing number `[theta; th1, th2]`: how often the point
/// `e^{it}` passes `e^{i theta}` counterclockwise as `t` runs from `th1` to
/// `th2`, with boundary arrivals worth one half. Doubling keeps the result
/// an exact integer.
pub fn crossing_count_doubled(theta: f64, th1: f64, th2: f64) -> i64 {
    crossing_doubled_snap(theta, th1, th2, BOUNDARY_SNAP)
}

/// The mu-invariant of a tracked path: an exact step function on `(0, 2pi)`
/// with half-integer values, jumping only at angles of the projected
/// endpoint sets.
#[derive(Debug, Clone)]
pub struct MuInvariant {
    /// Sorted jump angles in `(0, 2pi)`.
    breakpoints: Vec<f64>,
    /// Twice the value on each of the `breakpoints.len() + 1` open
    /// intervals; always even (integer values) away from the jumps.
    doubled: Vec<i64>,
    start_set: RiggedSet,
    end_set: RiggedSet,
}

impl MuInvariant {
    /// Builds a mu-invariant directly from the unwrapped endpoint arguments
    /// of a continuous enumeration.
    pub fn from_endpoints(start_args: &[f64], end_args: &[f64]) -> MuInvariant {
        assert_eq!(start_args.len(), end_args.len());
        let project = |args: &[f64]| {
            let pts = args.iter().filter_map(|v| {
                let a = v.rem_euclid(TAU);
                (Space::Circle.sticky_dist(a) > 1e-12).then_some((a, 1u32))
            });
            RiggedSet::circle(pts).unwrap()
        };
        let start_set = project(start_args);
        let end_set = project(end_args);

        let mut candidates: Vec<f64> = start_set
            .entries()
            .iter()
            .chain(end_set.entries().iter())
            .map(|&(a, _)| a)
            .collect();
        candidates.sort_by(|a, b| a.total_cmp(b));
        candidates.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);

        let mut edges = vec![0.0];
        edges.extend(candidates.iter().copied());
        edges.push(TAU);

        let mut doubled = Vec::with_capacity(edges.len() - 1);
        for w in edges.windows(2) {
            let width = w[1] - w[0];
            let mid = 0.5 * (w[0] + w[1]);
            let snap = (width * 0.25).min(BOUNDARY_SNAP);
            let v: i64 = start_args
                .iter()
                .zip(end_args)
                .map(|(&a, &b)| crossing_doubled_snap(mid, a, b, snap))
                .sum();
            debug_assert!(v % 2 == 0, "non-integer value away from jump angles");
            doubled.push(v);
        }

        // Canonical form: keep only genuine jumps.
        let mut breakpoints = Vec::new();
        let mut values = vec![doubled[0]];
        for (i, &bp) in candidates.iter().enumerate() {
            if doubled[i + 1] != *values.last().unwrap() {
                breakpoints.push(bp);
                values.push(doubled[i + 1]);
            }
        }
        MuInvariant {
            breakpoints,
            doubled: values,
            start_set,
            end_set,
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Twice the values on the open intervals between breakpoints.
    pub fn doubled_interval_values(&self) -> &[i64] {
        &self.doubled
    }

    pub fn start_set(&self) -> &RiggedSet {
        &self.start_set
    }

    pub fn end_set(&self) -> &RiggedSet {
        &self.end_set
    }

    fn interval_doubled(&self, theta: f64) -> i64 {
        let idx = self.breakpoints.partition_point(|&b| b < theta);
        self.doubled[idx]
    }

    /// Value at an angle; at a jump angle this is the mean of the one-sided
    /// limits, which can be a half-integer.
    pub fn eval(&self, theta: f64) -> f64 {
        for (i, &b) in self.breakpoints.iter().enumerate() {
            if (theta - b).abs() <= 1e-12 {
                return (self.doubled[i] + self.doubled[i + 1]) as f64 / 4.0;
            }
        }
        self.interval_doubled(theta) as f64 / 2.0
    }

    /// Exact integral over `(0, 2pi)`.
    pub fn integral(&self) -> f64 {
        let mut edges = vec![0.0];
        edges.extend(self.breakpoints.iter().copied());
        edges.push(TAU);
        edges
            .windows(2)
            .zip(&self.doubled)
            .map(|(w, &v)| (w[1] - w[0]) * v as f64 / 2.0)
            .sum()
    }

    /// True when both invariants have identical values and matching jump
    /// angles within `angle_tol`.
    pub fn equiv(&self, other: &MuInvariant, angle_tol: f64) -> bool {
        self.doubled == other.doubled
            && self.breakpoints.len() == other.breakpoints.len()
            && self
                .breakpoints
                .iter()
                .zip(&other.breakpoints)
                .all(|(a, b)| (a - b).abs() <= angle_tol)
    }

    /// Pointwise difference evaluated on the merged continuity intervals.
    /// Breakpoints of the two invariants are clustered at `angle_tol`, so
    /// slivers between nearly-equal jump angles are skipped.
    pub fn difference_on_intervals(&self, other: &MuInvariant, angle_tol: f64) -> Vec<f64> {
        let mut bps: Vec<f64> = self
            .breakpoints
            .iter()
            .chain(other.breakpoints.iter())
            .copied()
            .collect();
        bps.sort_by(|a, b| a.total_cmp(b));
        bps.dedup_by(|a, b| (*a - *b).abs() <= angle_tol);
        let mut edges = vec![0.0];
        edges.extend(bps);
        edges.push(TAU);
        edges
            .windows(2)
            .filter(|w| w[1] - w[0] > 2.0 * angle_tol)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                (self.interval_doubled(mid) - other.interval_doubled(mid)) as f64 / 2.0
            })
            .collect()
    }
}

/// The mu-invariant of a lifted path.
pub fn mu_invariant(track: &ArgumentTrack) -> MuInvariant {
    assert!(
        track.start_at_identity(),
        "mu-invariant needs the start-at-identity normalization"
    );
    MuInvariant::from_endpoints(&track.start_args(), &track.end_args())
}

/// Concatenation in the path parameter: pointwise sum of the invariants,
/// defined when the junction endpoint sets agree.
pub fn mu_concat(m1: &MuInvariant, m2: &MuInvariant) -> Result<MuInvariant, MuError> {
    let dist = distance_d(m1.end_set(), m2.start_set())
        .map_err(|_| MuError::JunctionMismatch { dist: f64::NAN })?
        .cost;
    if dist > 1e-9 {
        return Err(MuError::JunctionMismatch { dist });
    }
    let mut bps: Vec<f64> = m1
        .breakpoints
        .iter()
        .chain(m2.breakpoints.iter())
        .copied()
        .collect();
    bps.sort_by(|a, b| a.total_cmp(b));
    bps.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);

    let mut edges = vec![0.0];
    edges.extend(bps.iter().copied());
    edges.push(TAU);
    let doubled: Vec<i64> = edges
        .windows(2)
        .map(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            m1.interval_doubled(mid) + m2.interval_doubled(mid)
        })
        .collect();

    let mut breakpoints = Vec::new();
    let mut values = vec![doubled[0]];
    for (i, &bp) in bps.iter().enumerate() {
        if doubled[i + 1] != *values.last().unwrap() {
            breakpoints.push(bp);
            values.push(doubled[i + 1]);
        }
    }
    Ok(MuInvariant {
        breakpoints,
        doubled: values,
        start_set: m1.start_set.clone(),
        end_set: m2.end_set.clone(),
    })
}

/// Exact integral of the mu-invariant over `(0, 2pi)`; equals the endpoint
/// argument sum of the underlying track.
pub fn mu_integral(m: &MuInvariant) -> f64 {
    m.integral()
}

/// For a loop (both endpoint sets empty) the mu-invariant is a constant
/// integer: the winding number. Returns it, or an error if the path does
/// not close up or tracking produced a non-constant invariant.
pub fn loop_constancy_check(track: &ArgumentTrack) -> Result<i64, MuError> {
    let m = mu_invariant(track);
    if !m.start_set().is_empty() || !m.end_set().is_empty() {
        return Err(MuError::NotALoop {
            start: m.start_set().rank(),
            end: m.end_set().rank(),
        });
    }
    if !m.breakpoints.is_empty() || m.doubled.len() != 1 || m.doubled[0] % 2 != 0 {
        return Err(MuError::NonConstant);
    }
    Ok(m.doubled[0] / 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lift::{lift_path, loop_path, LiftParams, SpectrumPath};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn cc(theta: f64, a: f64, b: f64) -> f64 {
        crossing_count_doubled(theta, a, b) as f64 / 2.0
    }

    #[test]
    fn crossing_count_examples() {
        assert_eq!(cc(PI, 0.0, TAU), 1.0);
        assert_eq!(cc(PI, 0.0, PI), 0.5);
        assert_eq!(cc(PI, 0.0, 3.0 * PI), 1.5);
        // Antisymmetry and additivity.
        assert_eq!(cc(1.0, 5.0, 2.0), -cc(1.0, 2.0, 5.0));
        let (a, b, c_) = (0.3, 7.9, -2.4);
        assert_eq!(cc(2.0, a, c_), cc(2.0, a, b) + cc(2.0, b, c_));
    }

    #[test]
    fn single_track_matches_pointwise_counts() {
        let m = MuInvariant::from_endpoints(&[0.0], &[3.0 * FRAC_PI_2]);
        for theta in [0.1, 1.0, 3.0, 4.0, 5.5, 6.1] {
            assert_eq!(m.eval(theta), cc(theta, 0.0, 3.0 * FRAC_PI_2), "at {theta}");
        }
        // Half-integer at the jump angle.
        assert_eq!(m.eval(3.0 * FRAC_PI_2), 0.5);
        assert!((m.integral() - 3.0 * FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn loop_windings() {
        for n in [1u32, 2, 5] {
            let t = lift_path(&loop_path(n), &LiftParams::default()).unwrap();
            assert_eq!(loop_constancy_check(&t).unwrap(), n as i64);
            let m = mu_invariant(&t);
            assert!((mu_integral(&m) - TAU * n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn trivial_path_mu_zero() {
        let p = SpectrumPath::new((0.0, 1.0), true, |_| {
            RiggedSet::circle(std::iter::empty()).unwrap()
        });
        let t = lift_path(&p, &LiftParams::default()).unwrap();
        assert_eq!(loop_constancy_check(&t).unwrap(), 0);
    }

    fn half_open_path() -> SpectrumPath {
        // Two points flowing to pi and -pi/2.
        SpectrumPath::new((0.0, 1.0), true, |r| {
            if r == 0.0 {
                return RiggedSet::circle(std::iter::empty()).unwrap();
            }
            let a1 = (PI * r).rem_euclid(TAU);
            let a2 = (-FRAC_PI_2 * r).rem_euclid(TAU);
            RiggedSet::circle([(a1, 1), (a2, 1)]).unwrap()
        })
    }

    #[test]
    fn concat_agrees_with_whole() {
        let p = half_open_path();
        let whole = mu_invariant(&lift_path(&p, &LiftParams::default()).unwrap());
        for split in [0.37, 0.5, 0.81] {
            let first = SpectrumPath::new_fallible((0.0, split), true, {
                let p = p.clone();
                move |r| p.sample(r).map_err(|e| e.to_string())
            });
            let second = SpectrumPath::new_fallible((split, 1.0), false, {
                let p = p.clone();
                move |r| p.sample(r).map_err(|e| e.to_string())
            });
            let t1 = lift_path(&first, &LiftParams::default()).unwrap();
            let t2 = lift_path(&second, &LiftParams::default()).unwrap();
            // Re-anchor the second half on the first half's ending arguments
            // by construction: its initial args are the sampled angles, so
            // concatenation works on the mu level through the junction sets.
            let m1 = mu_invariant(&t1);
            let m2 = MuInvariant::from_endpoints(&t2.start_args(), &t2.end_args());
            let joined = mu_concat(&m1, &m2).unwrap();
            assert!(joined.equiv(&whole, 1e-9), "split at {split}");
        }
    }

    #[test]
    fn concat_with_trivial_second_half() {
        let p = half_open_path();
        let m = mu_invariant(&lift_path(&p, &LiftParams::default()).unwrap());
        let constant = MuInvariant::from_endpoints(&m_end_args(&p), &m_end_args(&p));
        let joined = mu_concat(&m, &constant).unwrap();
        assert!(joined.equiv(&m, 1e-9));
    }

    #[test]
    fn three_way_splits_agree_with_whole() {
        let p = half_open_path();
        let whole = mu_invariant(&lift_path(&p, &LiftParams::default()).unwrap());
        for (a, b) in [(0.21, 0.58), (0.33, 0.74), (0.5, 0.9)] {
            let segment = |lo: f64, hi: f64, at_identity: bool| {
                let p = p.clone();
                let seg = SpectrumPath::new_fallible((lo, hi), at_identity, move |r| {
                    p.sample(r).map_err(|e| e.to_string())
                });
                let t = lift_path(&seg, &LiftParams::default()).unwrap();
                MuInvariant::from_endpoints(&t.start_args(), &t.end_args())
            };
            let m1 = segment(0.0, a, true);
            let m2 = segment(a, b, false);
            let m3 = segment(b, 1.0, false);
            let joined = mu_concat(&mu_concat(&m1, &m2).unwrap(), &m3).unwrap();
            assert!(joined.equiv(&whole, 1e-9), "split at ({a}, {b})");
        }
    }

    #[test]
    fn rank_three_projection_loop_winds_three_times() {
        use crate::linalg::{self, CMat};
        use crate::unispec::{unitary_spectrum_path, PATH_CLUSTER_TOL};
        use num_complex::Complex64;
        use rand::SeedableRng;

        // U(r) = exp(2 pi i r P) for a rank-3 orthogonal projection in C^5:
        // three eigenvalues circle once, the rest stay at 1.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(33);
        let q = linalg::random_unitary(5, &mut rng);
        let mut d = CMat::zeros(5, 5);
        for i in 0..3 {
            d[(i, i)] = Complex64::new(1.0, 0.0);
        }
        let projection = q.mul(&d).mul(&q.adjoint());
        let path = unitary_spectrum_path((0.0, 1.0), true, PATH_CLUSTER_TOL, move |r| {
            linalg::unitary_exp_i(&projection, TAU * r).unwrap()
        });
        let track = lift_path(&path, &LiftParams::default()).unwrap();
        assert_eq!(loop_constancy_check(&track).unwrap(), 3);
    }

    fn m_end_args(p: &SpectrumPath) -> Vec<f64> {
        lift_path(p, &LiftParams::default()).unwrap().end_args()
    }

    #[test]
    fn concat_junction_mismatch() {
        let p = half_open_path();
        let m = mu_invariant(&lift_path(&p, &LiftParams::default()).unwrap());
        let other = MuInvariant::from_endpoints(&[0.0], &[1.0]);
        assert!(matches!(
            mu_concat(&m, &other),
            Err(MuError::JunctionMismatch { .. })
        ));
    }

    #[test]
    fn integral_matches_endpoint_sum() {
        let p = half_open_path();
        let t = lift_path(&p, &LiftParams::default()).unwrap();
        let m = mu_invariant(&t);
        assert!((mu_integral(&m) - t.endpoint_sum()).abs() < 1e-6);
        assert!((mu_integral(&m) - FRAC_PI_2).abs() < 1e-9);
    }

    #[test]
    fn jumps_only_at_endpoint_angles() {
        let p = half_open_path();
        let t = lift_path(&p, &LiftParams::default()).unwrap();
        let m = mu_invariant(&t);
        let allowed: Vec<f64> = m
            .start_set()
            .entries()
            .iter()
            .chain(m.end_set().entries())
            .map(|&(a, _)| a)
            .collect();
        for &bp in m.breakpoints() {
            assert!(allowed.iter().any(|&a| (a - bp).abs() < 1e-9));
        }
    }

    #[test]
    fn lift_independence_across_tolerances() {
        let p = half_open_path();
        let coarse = lift_path(&p, &LiftParams::default()).unwrap();
        let fine = lift_path(
            &p,
            &LiftParams {
                step_tol: 0.02,
                ..LiftParams::default()
            },
        )
        .unwrap();
        let m1 = mu_invariant(&coarse);
        let m2 = mu_invariant(&fine);
        assert!(m1.equiv(&m2, 1e-9));
    }
}
