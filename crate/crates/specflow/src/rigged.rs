//! Finite-rank rigged multisets on the circle and the line.
//!
//! A rigged set is a finite list of distinct points with positive integer
//! multiplicities, living in a space with one distinguished *sticky* point of
//! infinite multiplicity: the point `1` (angle `0`) on the circle, `0` on the
//! line. The sticky point never appears among the stored entries; it is
//! implicit in every set. Counting functions and the quotient `L1` metric
//! `rho1` live here as well.

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use thiserror::Error;

/// Coordinates closer than this are merged into a single entry.
pub const COORD_MERGE_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RiggedError {
    #[error("operands live in different spaces")]
    SpaceMismatch,
    #[error("subtrahend multiplicity {got} exceeds {have} at coordinate {at}")]
    DominanceViolation { at: f64, have: u32, got: u32 },
    #[error("invalid point {0}: {1}")]
    InvalidPoint(f64, &'static str),
    #[error("operation requires {expected:?} space, set is {got:?}")]
    WrongSpace { expected: Space, got: Space },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Circle,
    Line,
}

impl Space {
    /// Distance from a coordinate to the sticky point of the space.
    pub fn sticky_dist(self, x: f64) -> f64 {
        match self {
            Space::Circle => {
                let a = x.rem_euclid(TAU);
                a.min(TAU - a)
            }
            Space::Line => x.abs(),
        }
    }

    /// Distance between two coordinates (geodesic arc length on the circle).
    pub fn dist(self, a: f64, b: f64) -> f64 {
        match self {
            Space::Circle => {
                let d = (a - b).abs().rem_euclid(TAU);
                d.min(TAU - d)
            }
            Space::Line => (a - b).abs(),
        }
    }

    fn validate(self, x: f64) -> Result<(), RiggedError> {
        if !x.is_finite() {
            return Err(RiggedError::InvalidPoint(x, "not finite"));
        }
        match self {
            Space::Circle if x <= 0.0 || x >= TAU => {
                Err(RiggedError::InvalidPoint(x, "angle outside (0, 2pi)"))
            }
            Space::Line if x == 0.0 => Err(RiggedError::InvalidPoint(x, "line value is zero")),
            _ => Ok(()),
        }
    }
}

/// A point of the circle minus the sticky point, as an angle in `(0, 2pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirclePoint(f64);

impl CirclePoint {
    pub fn new(angle: f64) -> Result<Self, RiggedError> {
        Space::Circle.validate(angle)?;
        Ok(CirclePoint(angle))
    }

    pub fn angle(self) -> f64 {
        self.0
    }
}

/// A nonzero real point of the line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinePoint(f64);

impl LinePoint {
    pub fn new(value: f64) -> Result<Self, RiggedError> {
        Space::Line.validate(value)?;
        Ok(LinePoint(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// A point reference that may name the implicit sticky point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpacePoint {
    Sticky,
    At(f64),
}

/// Multiplicity of a point in a rigged set; the sticky point is infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Multiplicity {
    Finite(u32),
    Infinite,
}

/// A finite-rank rigged multiset: distinct sorted coordinates with
/// multiplicities, plus the implicit sticky point.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RiggedSetRepr", into = "RiggedSetRepr")]
pub struct RiggedSet {
    space: Space,
    entries: Vec<(f64, u32)>,
}

#[derive(Serialize, Deserialize)]
struct RiggedSetRepr {
    space: Space,
    points: Vec<PointRepr>,
}

#[derive(Serialize, Deserialize)]
struct PointRepr {
    x: f64,
    mult: u32,
}

impl TryFrom<RiggedSetRepr> for RiggedSet {
    type Error = RiggedError;
    fn try_from(r: RiggedSetRepr) -> Result<Self, RiggedError> {
        RiggedSet::from_points(r.space, r.points.into_iter().map(|p| (p.x, p.mult)))
    }
}

impl From<RiggedSet> for RiggedSetRepr {
    fn from(s: RiggedSet) -> Self {
        RiggedSetRepr {
            space: s.space,
            points: s
                .entries
                .into_iter()
                .map(|(x, mult)| PointRepr { x, mult })
                .collect(),
        }
    }
}

impl RiggedSet {
    pub fn empty(space: Space) -> Self {
        RiggedSet {
            space,
            entries: Vec::new(),
        }
    }

    /// Builds a set from arbitrary (coordinate, multiplicity) pairs, sorting
    /// and merging coordinates within [`COORD_MERGE_TOL`]. Zero
    /// multiplicities are dropped.
    pub fn from_points(
        space: Space,
        points: impl IntoIterator<Item = (f64, u32)>,
    ) -> Result<Self, RiggedError> {
        let mut pts: Vec<(f64, u32)> = Vec::new();
        for (x, m) in points {
            if m == 0 {
                continue;
            }
            space.validate(x)?;
            pts.push((x, m));
        }
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut entries: Vec<(f64, u32)> = Vec::new();
        for (x, m) in pts {
            match entries.last_mut() {
                Some(last) if (x - last.0).abs() <= COORD_MERGE_TOL => last.1 += m,
                _ => entries.push((x, m)),
            }
        }
        Ok(RiggedSet { space, entries })
    }

    pub fn circle(points: impl IntoIterator<Item = (f64, u32)>) -> Result<Self, RiggedError> {
        Self::from_points(Space::Circle, points)
    }

    pub fn line(points: impl IntoIterator<Item = (f64, u32)>) -> Result<Self, RiggedError> {
        Self::from_points(Space::Line, points)
    }

    pub fn space(&self) -> Space {
        self.space
    }

    /// Sorted (coordinate, multiplicity) entries, sticky point excluded.
    pub fn entries(&self) -> &[(f64, u32)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total multiplicity of the non-sticky part.
    pub fn rank(&self) -> u32 {
        self.entries.iter().map(|e| e.1).sum()
    }

    /// Coordinates repeated by multiplicity, ascending.
    pub fn expand(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.rank() as usize);
        for &(x, m) in &self.entries {
            for _ in 0..m {
                out.push(x);
            }
        }
        out
    }

    /// Multiplicity of a point; the sticky point always reports infinity.
    pub fn mult(&self, q: SpacePoint) -> Multiplicity {
        match q {
            SpacePoint::Sticky => Multiplicity::Infinite,
            SpacePoint::At(x) => Multiplicity::Finite(
                self.entries
                    .iter()
                    .find(|e| (e.0 - x).abs() <= COORD_MERGE_TOL)
                    .map_or(0, |e| e.1),
            ),
        }
    }

    /// Pointwise sum of multiplicities.
    pub fn sum(&self, other: &RiggedSet) -> Result<RiggedSet, RiggedError> {
        if self.space != other.space {
            return Err(RiggedError::SpaceMismatch);
        }
        RiggedSet::from_points(
            self.space,
            self.entries.iter().chain(other.entries.iter()).copied(),
        )
    }

    /// Pointwise difference; `other` must be dominated by `self`.
    pub fn difference(&self, other: &RiggedSet) -> Result<RiggedSet, RiggedError> {
        if self.space != other.space {
            return Err(RiggedError::SpaceMismatch);
        }
        let mut remaining = self.entries.clone();
        for &(x, m) in &other.entries {
            let slot = remaining
                .iter_mut()
                .find(|e| (e.0 - x).abs() <= COORD_MERGE_TOL);
            match slot {
                Some(e) if e.1 >= m => e.1 -= m,
                Some(e) => {
                    return Err(RiggedError::DominanceViolation {
                        at: x,
                        have: e.1,
                        got: m,
                    })
                }
                None => {
                    return Err(RiggedError::DominanceViolation {
                        at: x,
                        have: 0,
                        got: m,
                    })
                }
            }
        }
        remaining.retain(|e| e.1 > 0);
        Ok(RiggedSet {
            space: self.space,
            entries: remaining,
        })
    }

    /// True if `self <= other` pointwise in multiplicity.
    pub fn dominated_by(&self, other: &RiggedSet) -> bool {
        self.space == other.space && other.difference(self).is_ok()
    }

    /// Keeps the points at sticky-distance strictly less than `eps`.
    pub fn truncate_eps(&self, eps: f64) -> RiggedSet {
        assert!(eps > 0.0, "eps must be positive");
        RiggedSet {
            space: self.space,
            entries: self
                .entries
                .iter()
                .copied()
                .filter(|&(x, _)| self.space.sticky_dist(x) < eps)
                .collect(),
        }
    }

    /// Splits a line-space set into its positive and negative parts.
    pub fn pos_neg_parts(&self) -> Result<(RiggedSet, RiggedSet), RiggedError> {
        if self.space != Space::Line {
            return Err(RiggedError::WrongSpace {
                expected: Space::Line,
                got: self.space,
            });
        }
        let split = |keep: fn(f64) -> bool| RiggedSet {
            space: Space::Line,
            entries: self
                .entries
                .iter()
                .copied()
                .filter(|&(x, _)| keep(x))
                .collect(),
        };
        Ok((split(|x| x > 0.0), split(|x| x < 0.0)))
    }

    /// Equality as multisets, with coordinates compared at `tol`.
    pub fn approx_eq(&self, other: &RiggedSet, tol: f64) -> bool {
        self.space == other.space
            && self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| (a.0 - b.0).abs() <= tol && a.1 == b.1)
    }
}

/// An integer-valued left-continuous step function on `(0, 2pi)`, modulo a
/// shared additive integer. The value just right of `0` is taken to be `0`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StepFunction {
    /// Sorted jump angles in `(0, 2pi)` with nonzero integer jump sizes.
    jumps: Vec<(f64, i64)>,
}

impl StepFunction {
    pub fn new(jumps: impl IntoIterator<Item = (f64, i64)>) -> Self {
        let mut js: Vec<(f64, i64)> = jumps.into_iter().filter(|j| j.1 != 0).collect();
        js.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, i64)> = Vec::new();
        for (a, s) in js {
            match merged.last_mut() {
                Some(last) if (a - last.0).abs() <= COORD_MERGE_TOL => last.1 += s,
                _ => merged.push((a, s)),
            }
        }
        merged.retain(|j| j.1 != 0);
        StepFunction { jumps: merged }
    }

    pub fn jumps(&self) -> &[(f64, i64)] {
        &self.jumps
    }

    /// Left-continuous evaluation: jumps located at `a` take effect for
    /// angles strictly greater than `a`.
    pub fn value(&self, theta: f64) -> i64 {
        self.jumps
            .iter()
            .take_while(|&&(a, _)| a < theta)
            .map(|&(_, s)| s)
            .sum()
    }

    pub fn add(&self, other: &StepFunction) -> StepFunction {
        StepFunction::new(self.jumps.iter().chain(other.jumps.iter()).copied())
    }

    pub fn sub(&self, other: &StepFunction) -> StepFunction {
        StepFunction::new(
            self.jumps
                .iter()
                .copied()
                .chain(other.jumps.iter().map(|&(a, s)| (a, -s))),
        )
    }

    /// Equality modulo a shared integer constant: identical jump structure.
    pub fn equiv_mod_const(&self, other: &StepFunction, angle_tol: f64) -> bool {
        self.jumps.len() == other.jumps.len()
            && self
                .jumps
                .iter()
                .zip(&other.jumps)
                .all(|(a, b)| (a.0 - b.0).abs() <= angle_tol && a.1 == b.1)
    }

    /// Constant pieces `(start, end, value)` covering `(0, 2pi)`.
    pub fn pieces(&self) -> Vec<(f64, f64, i64)> {
        let mut out = Vec::with_capacity(self.jumps.len() + 1);
        let mut start = 0.0;
        let mut value = 0i64;
        for &(a, s) in &self.jumps {
            if a > start {
                out.push((start, a, value));
            }
            start = a;
            value += s;
        }
        out.push((start, TAU, value));
        out
    }

    /// Exact integral over `(0, 2pi)` of `|f + n|`.
    pub fn integral_abs_shifted(&self, n: i64) -> f64 {
        self.pieces()
            .iter()
            .map(|&(a, b, v)| (b - a) * (v + n).abs() as f64)
            .sum()
    }

    /// Exact integral over `(0, 2pi)`.
    pub fn integral(&self) -> f64 {
        self.pieces()
            .iter()
            .map(|&(a, b, v)| (b - a) * v as f64)
            .sum()
    }
}

/// Counting function of a circle-space set: jumps by `-mult(s)` at each
/// point angle `s`, so that (modulo a constant) it counts points above the
/// angle. Satisfies `f_{S+T} = f_S + f_T`.
pub fn counting_function(s: &RiggedSet) -> StepFunction {
    debug_assert_eq!(
        s.space(),
        Space::Circle,
        "counting functions live on the circle"
    );
    StepFunction::new(s.entries().iter().map(|&(a, m)| (a, -(m as i64))))
}

/// The quotient `L1` distance: `min over n in Z` of the integral of
/// `|f - g + n|` over `(0, 2pi)`. Returns the distance and a minimizing `n`.
///
/// The objective is piecewise-linear convex in `n`, so the minimizer is an
/// integer weighted median of `g - f` against arc-length measure.
pub fn rho1(f: &StepFunction, g: &StepFunction) -> (f64, i64) {
    let h = f.sub(g);
    let pieces = h.pieces();
    // Weighted median of -value over piece lengths.
    let mut vals: Vec<(i64, f64)> = pieces.iter().map(|&(a, b, v)| (-v, b - a)).collect();
    vals.sort_by_key(|&(v, _)| v);
    let total: f64 = vals.iter().map(|&(_, w)| w).sum();
    let mut acc = 0.0;
    let mut n = vals.last().map_or(0, |&(v, _)| v);
    for &(v, w) in &vals {
        acc += w;
        if acc >= total / 2.0 {
            n = v;
            break;
        }
    }
    // The median may sit on a flat edge; settle it against both neighbours.
    let eval = |k: i64| h.integral_abs_shifted(k);
    let mut best = (eval(n), n);
    for k in [n - 1, n + 1] {
        let c = eval(k);
        if c < best.0 {
            best = (c, k);
        }
    }
    (best.0, best.1)
}

/// Brute-force scan over the full integer range of `g - f`; oracle for
/// [`rho1`].
pub fn rho1_scan(f: &StepFunction, g: &StepFunction) -> f64 {
    let h = f.sub(g);
    let pieces = h.pieces();
    let lo = pieces.iter().map(|p| -p.2).min().unwrap_or(0);
    let hi = pieces.iter().map(|p| -p.2).max().unwrap_or(0);
    (lo..=hi)
        .map(|n| h.integral_abs_shifted(n))
        .fold(f64::INFINITY, f64::min)
}
