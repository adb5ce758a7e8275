//! Continuous enumeration of circle spectra along a parameter path.
//!
//! A path of rigged sets is sampled adaptively until consecutive sets are
//! close in the matching metric, then consecutive samples are matched and
//! each matched point's argument is unwrapped to the real representative
//! nearest its predecessor. The points of `2 pi Z` act as absorbing (sticky)
//! states: a point matched to the sticky point freezes at the nearest
//! multiple of `2 pi`, and a point born from the sticky point starts at `0`
//! in a fresh track.

use crate::matching::{distance_d, MatchingError};
use crate::rigged::{RiggedSet, Space, SpacePoint};
use std::f64::consts::{PI, TAU};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LiftError {
    #[error("bisection depth {depth} exceeded on [{r0}, {r1}] (step distance {dist})")]
    DepthExceeded {
        r0: f64,
        r1: f64,
        depth: u32,
        dist: f64,
    },
    #[error("track projection at r = {r} misses the sampled set by {dist}")]
    SamplerInconsistent { r: f64, dist: f64 },
    #[error("path is flagged to start at the identity but S(a) has rank {0}")]
    NotIdentityStart(u32),
    #[error("sampled step [{r0}, {r1}] moves a point by {dist}, past the pi/2 bound")]
    StepTooLarge { r0: f64, r1: f64, dist: f64 },
    #[error("sampler produced a {0:?}-space set; lifting needs circle spectra")]
    NotCircleSpace(Space),
    #[error("sampler failed at r = {r}: {message}")]
    SamplerFailed { r: f64, message: String },
    #[error(transparent)]
    Matching(#[from] MatchingError),
}

/// Tolerances steering [`lift_path`].
#[derive(Debug, Clone, Copy)]
pub struct LiftParams {
    /// Adjacent samples must be closer than this in the metric `d`.
    pub step_tol: f64,
    /// Allowed mismatch when a node is reconstructed from the tracks.
    pub node_tol: f64,
    /// Bisection depth limit.
    pub max_depth: u32,
    /// Uniform seed grid refined by bisection. Loops come back to their
    /// start, so the endpoints alone cannot witness the motion; the seed
    /// grid must resolve the path's coarse features.
    pub min_intervals: u32,
}

impl Default for LiftParams {
    fn default() -> Self {
        LiftParams {
            step_tol: 0.1,
            node_tol: 1e-8,
            max_depth: 40,
            min_intervals: 16,
        }
    }
}

/// A deterministic map from a closed parameter interval into circle rigged
/// sets.
#[derive(Clone)]
pub struct SpectrumPath {
    domain: (f64, f64),
    sampler: Arc<dyn Fn(f64) -> Result<RiggedSet, String> + Send + Sync>,
    start_at_identity: bool,
}

impl SpectrumPath {
    pub fn new(
        domain: (f64, f64),
        start_at_identity: bool,
        sampler: impl Fn(f64) -> RiggedSet + Send + Sync + 'static,
    ) -> Self {
        Self::new_fallible(domain, start_at_identity, move |r| Ok(sampler(r)))
    }

    /// A path whose sampler can fail (eigen-solver trouble, resonances).
    pub fn new_fallible(
        domain: (f64, f64),
        start_at_identity: bool,
        sampler: impl Fn(f64) -> Result<RiggedSet, String> + Send + Sync + 'static,
    ) -> Self {
        assert!(domain.0 < domain.1, "empty parameter interval");
        SpectrumPath {
            domain,
            sampler: Arc::new(sampler),
            start_at_identity,
        }
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn start_at_identity(&self) -> bool {
        self.start_at_identity
    }

    pub fn sample(&self, r: f64) -> Result<RiggedSet, LiftError> {
        (self.sampler)(r).map_err(|message| LiftError::SamplerFailed { r, message })
    }
}

/// Per-eigenvalue unwrapped argument trajectories over a sampled grid.
///
/// Every track spans the whole grid: before its birth and after its
/// absorption it sits exactly on a multiple of `2 pi`, which projects to the
/// sticky point and therefore to no set element.
#[derive(Debug, Clone)]
pub struct ArgumentTrack {
    grid: Vec<f64>,
    tracks: Vec<Vec<f64>>,
    start_at_identity: bool,
}

impl ArgumentTrack {
    /// Assembles a track from raw data; used by file import.
    pub fn from_raw(grid: Vec<f64>, tracks: Vec<Vec<f64>>, start_at_identity: bool) -> Self {
        assert!(tracks.iter().all(|t| t.len() == grid.len()));
        ArgumentTrack {
            grid,
            tracks,
            start_at_identity,
        }
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn track_count(&self) -> usize {
        self.tracks.len()
    }

    pub fn node_count(&self) -> usize {
        self.grid.len()
    }

    pub fn start_at_identity(&self) -> bool {
        self.start_at_identity
    }

    /// Unwrapped argument of track `j` at grid node `k`.
    pub fn theta(&self, j: usize, k: usize) -> f64 {
        self.tracks[j][k]
    }

    pub fn track(&self, j: usize) -> &[f64] {
        &self.tracks[j]
    }

    /// Arguments at the first node.
    pub fn start_args(&self) -> Vec<f64> {
        self.tracks.iter().map(|t| t[0]).collect()
    }

    /// Arguments at the last node.
    pub fn end_args(&self) -> Vec<f64> {
        self.tracks.iter().map(|t| *t.last().unwrap()).collect()
    }

    /// Projection of node `k` back to a circle rigged set: arguments modulo
    /// `2 pi`, with multiples of `2 pi` dropped into the sticky point.
    pub fn project(&self, k: usize) -> RiggedSet {
        project_args(self.tracks.iter().map(|t| t[k]))
    }

    /// Sum of argument increments over the path.
    pub fn endpoint_sum(&self) -> f64 {
        assert!(
            self.start_at_identity,
            "endpoint_sum requires the start-at-identity normalization"
        );
        self.tracks
            .iter()
            .map(|t| t.last().unwrap() - t.first().unwrap())
            .sum()
    }

    /// Sum of |argument increment| over one step, for the
    /// matching-optimality consistency bound.
    pub fn step_variation(&self, k: usize) -> f64 {
        self.tracks.iter().map(|t| (t[k + 1] - t[k]).abs()).sum()
    }
}

fn project_args(args: impl Iterator<Item = f64>) -> RiggedSet {
    let pts = args.filter_map(|v| {
        let a = v.rem_euclid(TAU);
        if Space::Circle.sticky_dist(a) <= 1e-12 {
            None
        } else {
            Some((a, 1u32))
        }
    });
    RiggedSet::circle(pts).expect("projected angles stay inside (0, 2pi)")
}

/// Real representative of `delta` in `(-pi, pi]`.
fn wrap_pm_pi(delta: f64) -> f64 {
    let mut d = delta.rem_euclid(TAU);
    if d > PI {
        d -= TAU;
    }
    d
}

fn check_circle(s: &RiggedSet) -> Result<(), LiftError> {
    if s.space() != Space::Circle {
        return Err(LiftError::NotCircleSpace(s.space()));
    }
    Ok(())
}

/// Adaptively samples and lifts a spectrum path into unwrapped argument
/// tracks.
pub fn lift_path(path: &SpectrumPath, params: &LiftParams) -> Result<ArgumentTrack, LiftError> {
    let (a, b) = path.domain();
    let sa = path.sample(a)?;
    check_circle(&sa)?;
    if path.start_at_identity() && !sa.is_empty() {
        return Err(LiftError::NotIdentityStart(sa.rank()));
    }
    // Depth-first refinement over a uniform seed grid; nodes come out in
    // parameter order.
    let k = params.min_intervals.max(1);
    let mut seed_nodes: Vec<(f64, RiggedSet)> = Vec::with_capacity(k as usize + 1);
    seed_nodes.push((a, sa.clone()));
    for i in 1..=k {
        let r = if i == k {
            b
        } else {
            a + (b - a) * i as f64 / k as f64
        };
        let s = path.sample(r)?;
        check_circle(&s)?;
        seed_nodes.push((r, s));
    }
    let mut nodes: Vec<(f64, RiggedSet)> = vec![(a, sa)];
    let mut stack: Vec<(f64, RiggedSet, f64, RiggedSet, u32)> = Vec::new();
    for w in seed_nodes.windows(2).rev() {
        stack.push((w[0].0, w[0].1.clone(), w[1].0, w[1].1.clone(), 0));
    }
    while let Some((r0, s0, r1, s1, depth)) = stack.pop() {
        let m = distance_d(&s0, &s1)?;
        let max_disp = m
            .pairs
            .iter()
            .map(|&(x, y)| pair_displacement(x, y))
            .fold(0.0f64, f64::max);
        if m.cost < params.step_tol && max_disp < PI / 2.0 {
            nodes.push((r1, s1));
            continue;
        }
        if depth >= params.max_depth {
            return Err(LiftError::DepthExceeded {
                r0,
                r1,
                depth,
                dist: m.cost,
            });
        }
        let rm = 0.5 * (r0 + r1);
        let sm = path.sample(rm)?;
        check_circle(&sm)?;
        // Push the right half first so the left half is processed first.
        stack.push((rm, sm.clone(), r1, s1, depth + 1));
        stack.push((r0, s0, rm, sm, depth + 1));
    }

    let (grid, sets): (Vec<f64>, Vec<RiggedSet>) = nodes.into_iter().unzip();
    track_from_samples(&grid, &sets, path.start_at_identity(), params.node_tol)
}

fn pair_displacement(x: SpacePoint, y: SpacePoint) -> f64 {
    match (x, y) {
        (SpacePoint::Sticky, SpacePoint::Sticky) => 0.0,
        (SpacePoint::Sticky, SpacePoint::At(t)) => Space::Circle.sticky_dist(t),
        (SpacePoint::At(s), SpacePoint::Sticky) => Space::Circle.sticky_dist(s),
        (SpacePoint::At(s), SpacePoint::At(t)) => Space::Circle.dist(s, t),
    }
}

/// Builds argument tracks from a pre-sampled node list. Every consecutive
/// pair must already satisfy the displacement bound; no refinement is done.
pub fn track_from_samples(
    grid: &[f64],
    sets: &[RiggedSet],
    start_at_identity: bool,
    node_tol: f64,
) -> Result<ArgumentTrack, LiftError> {
    assert_eq!(grid.len(), sets.len());
    assert!(!grid.is_empty(), "need at least one node");
    for s in sets {
        check_circle(s)?;
    }
    if start_at_identity && !sets[0].is_empty() {
        return Err(LiftError::NotIdentityStart(sets[0].rank()));
    }

    struct Build {
        vals: Vec<f64>,
        alive: bool,
    }
    let mut tracks: Vec<Build> = sets[0]
        .expand()
        .into_iter()
        .map(|angle| Build {
            vals: vec![angle],
            alive: true,
        })
        .collect();

    for k in 1..grid.len() {
        let m = distance_d(&sets[k - 1], &sets[k])?;
        // Pool of live tracks keyed by their current projected angle.
        let mut pool: Vec<(f64, usize)> = tracks
            .iter()
            .enumerate()
            .filter(|(_, t)| t.alive)
            .map(|(idx, t)| (t.vals[k - 1].rem_euclid(TAU), idx))
            .collect();
        let mut next: Vec<Option<f64>> = tracks.iter().map(|_| None).collect();
        let mut births: Vec<f64> = Vec::new();

        for &(src, dst) in &m.pairs {
            let disp = pair_displacement(src, dst);
            if disp >= PI / 2.0 {
                return Err(LiftError::StepTooLarge {
                    r0: grid[k - 1],
                    r1: grid[k],
                    dist: disp,
                });
            }
            match (src, dst) {
                (SpacePoint::Sticky, SpacePoint::Sticky) => {}
                (SpacePoint::Sticky, SpacePoint::At(t)) => births.push(wrap_pm_pi(t)),
                (SpacePoint::At(s), dst) => {
                    let slot = pool
                        .iter()
                        .enumerate()
                        .filter(|(_, &(angle, _))| {
                            Space::Circle.dist(angle, s) <= node_tol.max(1e-9)
                        })
                        .min_by(|(_, x), (_, y)| {
                            Space::Circle
                                .dist(x.0, s)
                                .total_cmp(&Space::Circle.dist(y.0, s))
                        })
                        .map(|(i, _)| i);
                    let Some(slot) = slot else {
                        return Err(LiftError::SamplerInconsistent {
                            r: grid[k - 1],
                            dist: Space::Circle.sticky_dist(s),
                        });
                    };
                    let (_, idx) = pool.swap_remove(slot);
                    let theta = tracks[idx].vals[k - 1];
                    match dst {
                        SpacePoint::At(t) => {
                            let angle_now = theta.rem_euclid(TAU);
                            next[idx] = Some(theta + wrap_pm_pi(t - angle_now));
                        }
                        SpacePoint::Sticky => {
                            tracks[idx].alive = false;
                            next[idx] = Some(TAU * (theta / TAU).round());
                        }
                    }
                }
            }
        }

        for (idx, t) in tracks.iter_mut().enumerate() {
            let v = match next[idx] {
                Some(v) => v,
                None => *t.vals.last().unwrap(), // frozen at its 2 pi multiple
            };
            t.vals.push(v);
        }
        for v in births {
            let mut vals = vec![0.0; k];
            vals.push(v);
            tracks.push(Build { vals, alive: true });
        }

        // Node reconstruction must reproduce the sampled set.
        let projected = project_args(tracks.iter().map(|t| t.vals[k]));
        let err = distance_d(&projected, &sets[k])?.cost;
        if err > node_tol {
            return Err(LiftError::SamplerInconsistent {
                r: grid[k],
                dist: err,
            });
        }
    }

    Ok(ArgumentTrack {
        grid: grid.to_vec(),
        tracks: tracks.into_iter().map(|t| t.vals).collect(),
        start_at_identity,
    })
}

/// The N-fold loop: `r` in `[0, 1]` maps to the point `2 pi r` with
/// multiplicity `n` (empty at the endpoints).
pub fn loop_path(n: u32) -> SpectrumPath {
    SpectrumPath::new((0.0, 1.0), true, move |r| {
        let angle = (TAU * r).rem_euclid(TAU);
        if Space::Circle.sticky_dist(angle) <= 1e-12 {
            RiggedSet::empty(Space::Circle)
        } else {
            RiggedSet::circle([(angle, n)]).unwrap()
        }
    })
}

/// A fixed-endpoint deformation of the N-fold loop: at `t = 0` all copies
/// ride together, at larger `t` each copy wiggles by its own multiple of
/// `sin(pi r)`. Every deformation stage keeps winding number `n`.
pub fn deformed_loop_path(n: u32, t: f64) -> SpectrumPath {
    SpectrumPath::new((0.0, 1.0), true, move |r| {
        let base = TAU * r;
        let pts = (0..n).filter_map(|j| {
            let wiggle = t * 0.3 * (j + 1) as f64 / n as f64 * (PI * r).sin();
            let angle = (base + wiggle).rem_euclid(TAU);
            (Space::Circle.sticky_dist(angle) > 1e-12).then_some((angle, 1u32))
        });
        RiggedSet::circle(pts).unwrap()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn constant_empty_path_has_no_tracks() {
        let p = SpectrumPath::new((0.0, 1.0), true, |_| RiggedSet::empty(Space::Circle));
        let t = lift_path(&p, &LiftParams::default()).unwrap();
        assert_eq!(t.track_count(), 0);
        assert_eq!(t.endpoint_sum(), 0.0);
        assert!(t.project(0).is_empty());
    }

    #[test]
    fn loop_path_lifts_to_straight_lines() {
        for n in [1u32, 3] {
            let t = lift_path(&loop_path(n), &LiftParams::default()).unwrap();
            assert_eq!(t.track_count(), n as usize);
            let sum = t.endpoint_sum();
            assert!(
                (sum - TAU * n as f64).abs() < 1e-9,
                "n = {n}: endpoint sum {sum}"
            );
            for (k, &r) in t.grid().iter().enumerate() {
                for j in 0..t.track_count() {
                    assert!((t.theta(j, k) - TAU * r).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn diag_two_phase_path() {
        // Spectrum of diag(e^{i pi r}, e^{-i pi r / 2}).
        let p = SpectrumPath::new((0.0, 1.0), true, |r| {
            if r == 0.0 {
                return RiggedSet::empty(Space::Circle);
            }
            let a1 = (PI * r).rem_euclid(TAU);
            let a2 = (-PI * r / 2.0).rem_euclid(TAU);
            RiggedSet::circle([(a1, 1), (a2, 1)]).unwrap()
        });
        let t = lift_path(&p, &LiftParams::default()).unwrap();
        assert_eq!(t.track_count(), 2);
        let mut ends = t.end_args();
        ends.sort_by(|a, b| a.total_cmp(b));
        assert!((ends[0] - (-FRAC_PI_2)).abs() < 1e-9);
        assert!((ends[1] - PI).abs() < 1e-9);
        assert!((t.endpoint_sum() - FRAC_PI_2).abs() < 1e-9);
    }

    #[test]
    fn projection_round_trip() {
        let p = SpectrumPath::new((0.0, 1.0), true, |r| {
            if r == 0.0 {
                return RiggedSet::empty(Space::Circle);
            }
            RiggedSet::circle([((1.3 * r).rem_euclid(TAU), 2)]).unwrap()
        });
        let t = lift_path(&p, &LiftParams::default()).unwrap();
        for (k, &r) in t.grid().iter().enumerate() {
            let d = distance_d(&t.project(k), &p.sample(r).unwrap())
                .unwrap()
                .cost;
            assert!(d <= 1e-8, "node {k}: {d}");
        }
    }

    #[test]
    fn projection_drops_whole_turns() {
        let t = ArgumentTrack::from_raw(vec![0.0], vec![vec![TAU + FRAC_PI_2], vec![TAU]], false);
        let s = t.project(0);
        assert_eq!(s.rank(), 1);
        assert!((s.entries()[0].0 - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn step_variation_bounded_by_metric_cost() {
        let p = SpectrumPath::new((0.0, 1.0), true, |r| {
            if r == 0.0 {
                return RiggedSet::empty(Space::Circle);
            }
            RiggedSet::circle([
                ((2.0 * r).rem_euclid(TAU), 1),
                ((TAU - 1.5 * r).rem_euclid(TAU), 1),
            ])
            .unwrap()
        });
        let t = lift_path(&p, &LiftParams::default()).unwrap();
        for k in 0..t.node_count() - 1 {
            let d = distance_d(&t.project(k), &t.project(k + 1)).unwrap().cost;
            let var = t.step_variation(k);
            assert!(
                var <= d + 4.0 * 1e-8 + 1e-12,
                "step {k}: variation {var} vs cost {d}"
            );
        }
    }

    #[test]
    fn tail_sums_shrink_with_more_leading_tracks() {
        // Drop the K largest tracks; the worst remaining absolute sum over
        // the grid must shrink monotonically in K.
        let p = SpectrumPath::new((0.0, 1.0), true, |r| {
            if r == 0.0 {
                return RiggedSet::empty(Space::Circle);
            }
            RiggedSet::circle([
                ((2.5 * r).rem_euclid(TAU), 1),
                ((1.2 * r).rem_euclid(TAU), 1),
                ((TAU - 0.4 * r).rem_euclid(TAU), 1),
            ])
            .unwrap()
        });
        let t = lift_path(&p, &LiftParams::default()).unwrap();
        let mut order: Vec<usize> = (0..t.track_count()).collect();
        let sup = |j: usize| t.track(j).iter().map(|v| v.abs()).fold(0.0f64, f64::max);
        order.sort_by(|&a, &b| sup(b).total_cmp(&sup(a)));
        let tail = |k: usize| -> f64 {
            (0..t.node_count())
                .map(|node| {
                    order[k..]
                        .iter()
                        .map(|&j| t.theta(j, node).abs())
                        .sum::<f64>()
                })
                .fold(0.0f64, f64::max)
        };
        let mut last = f64::INFINITY;
        for k in 0..=t.track_count() {
            let cur = tail(k);
            assert!(cur <= last + 1e-15, "tail sum grew at K = {k}");
            last = cur;
        }
        assert_eq!(last, 0.0);
    }

    #[test]
    fn wild_path_exhausts_depth() {
        // Discontinuous jump halfway: bisection cannot shrink the step.
        let p = SpectrumPath::new((0.0, 1.0), true, |r| {
            if r < 0.5 {
                RiggedSet::empty(Space::Circle)
            } else {
                RiggedSet::circle([(3.0, 1)]).unwrap()
            }
        });
        let params = LiftParams {
            max_depth: 12,
            ..LiftParams::default()
        };
        assert!(matches!(
            lift_path(&p, &params),
            Err(LiftError::DepthExceeded { .. })
        ));
    }

    #[test]
    fn identity_start_enforced() {
        let p = SpectrumPath::new((0.0, 1.0), true, |_| RiggedSet::circle([(1.0, 1)]).unwrap());
        assert!(matches!(
            lift_path(&p, &LiftParams::default()),
            Err(LiftError::NotIdentityStart(1))
        ));
    }
}
