//! Thickness of sampled spherical curves: the smallest circumradius over all
//! triples of distinct samples, plus the forbidden-geodesic-ball test.
//!
//! Both thickness engines skip a triple only when one of its sides exceeds
//! twice the best radius found so far. A triangle's circumradius is at least
//! half its longest side, so a skipped triple can neither beat nor tie the
//! final minimum and the reported minimum and witness do not depend on the
//! skip order. The brute-force engine finds its candidates by scanning; the
//! accelerated engine asks a [`SpatialGrid`] sized to the current bound.

use std::f64::consts::FRAC_PI_2;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::SampledCurve;
use crate::error::{Error, Result};
use crate::geom::{
    angle_to_chord, circumradius_sq_parts, circumradius_unchecked, geodesic_dist, walk_geodesic, Vec3,
};
use crate::grid::SpatialGrid;

/// Relative slack on the side-length cutoff; keeps the skip safe against
/// rounding in the circumradius formula.
const PRUNE_SLACK: f64 = 1e-9;

/// Accelerated engine: number of base indices handled between grid rebuilds.
const BLOCK: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThicknessReport {
    /// Euclidean thickness: the minimal circumradius.
    pub delta: f64,
    /// Lexicographically smallest index triple attaining `delta`.
    pub witness: [usize; 3],
    /// `asin(delta)`, the intrinsic half-width of the tube.
    pub spherical_theta: f64,
}

/// `asin(delta)` for `delta` in (0, 1]. Values above 1 by no more than
/// rounding noise are clamped.
pub fn spherical_thickness(delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta <= 1.0 + 1e-12) {
        return Err(Error::OutOfRange(delta));
    }
    Ok(delta.min(1.0).asin())
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Best {
    r: f64,
    t: [usize; 3],
}

impl Best {
    const NONE: Best = Best {
        r: f64::INFINITY,
        t: [usize::MAX; 3],
    };

    #[inline]
    fn offer(&mut self, r: f64, t: [usize; 3]) {
        if r < self.r || (r == self.r && t < self.t) {
            *self = Best { r, t };
        }
    }

    fn merge(mut self, other: Best) -> Best {
        self.offer(other.r, other.t);
        self
    }
}

/// Shared upper bound on the minimum, readable from all workers. Positive
/// doubles order like their bit patterns, so `fetch_min` on the bits works.
struct Bound(AtomicU64);

impl Bound {
    fn new(r: f64) -> Self {
        Bound(AtomicU64::new(r.to_bits()))
    }

    #[inline]
    fn get(&self) -> f64 {
        f64::from_bits(self.0.load(Ordering::Relaxed))
    }

    #[inline]
    fn lower(&self, r: f64) {
        self.0.fetch_min(r.to_bits(), Ordering::Relaxed);
    }
}

#[inline]
fn cutoff2(bound: f64) -> f64 {
    4.0 * bound * bound * (1.0 + PRUNE_SLACK)
}

/// Coordinates split by axis so the candidate filter vectorizes.
struct Columns {
    x: Vec<f64>,
    y: Vec<f64>,
    z: Vec<f64>,
}

impl Columns {
    fn new<'a>(pts: impl IntoIterator<Item = &'a Vec3>) -> Self {
        let mut c = Columns {
            x: Vec::new(),
            y: Vec::new(),
            z: Vec::new(),
        };
        c.extend(pts);
        c
    }

    fn extend<'a>(&mut self, pts: impl IntoIterator<Item = &'a Vec3>) {
        for p in pts {
            self.x.push(p.x);
            self.y.push(p.y);
            self.z.push(p.z);
        }
    }
}

const LANES: usize = 8;

/// Calls `hit(k, r)` for every `k >= from` whose triple `(a, b, cols[k])`
/// has circumradius `r` at most `bound` (with `PRUNE_SLACK`). `r` is
/// bit-identical to `circumradius_unchecked(a, b, cols[k])`.
#[inline]
fn scan_third(
    cols: &Columns,
    from: usize,
    a: &Vec3,
    b: &Vec3,
    bound: f64,
    mut hit: impl FnMut(usize, f64),
) {
    if (b - a).norm_squared() > cutoff2(bound) {
        return;
    }
    let lim2 = bound * bound * (1.0 + PRUNE_SLACK);
    let n = cols.x.len();
    let mut k = from;
    while k < n {
        let len = LANES.min(n - k);
        let (xs, ys, zs) = (&cols.x[k..k + len], &cols.y[k..k + len], &cols.z[k..k + len]);
        let mut num = [f64::INFINITY; LANES];
        let mut den = [1.0; LANES];
        if len == LANES {
            for l in 0..LANES {
                (num[l], den[l]) = circumradius_sq_parts(a, b, xs[l], ys[l], zs[l]);
            }
        } else {
            for l in 0..len {
                (num[l], den[l]) = circumradius_sq_parts(a, b, xs[l], ys[l], zs[l]);
            }
        }
        let mut keep = [false; LANES];
        for l in 0..LANES {
            keep[l] = num[l] <= lim2 * den[l];
        }
        if keep.iter().any(|&x| x) {
            for l in (0..LANES).filter(|&l| keep[l]) {
                hit(k + l, (num[l] / den[l]).sqrt());
            }
        }
        k += len;
    }
}

/// Minimum over consecutive (cyclic when closed) triples: a cheap starting
/// bound that every engine re-derives during its own enumeration.
fn local_bound(pts: &[Vec3], closed: bool) -> Best {
    let m = pts.len();
    let count = if closed { m } else { m - 2 };
    let mut best = Best::NONE;
    for s in 0..count {
        let mut t = [s, (s + 1) % m, (s + 2) % m];
        t.sort_unstable();
        best.offer(circumradius_unchecked(&pts[t[0]], &pts[t[1]], &pts[t[2]]), t);
    }
    best
}

fn finish(best: Best, m: usize) -> Result<ThicknessReport> {
    if !best.r.is_finite() {
        return Err(Error::InvalidCurve(format!(
            "no non-degenerate triple among {m} samples"
        )));
    }
    debug_assert!(best.r <= 1.0 + 1e-9, "spherical thickness above 1: {}", best.r);
    Ok(ThicknessReport {
        delta: best.r,
        witness: best.t,
        spherical_theta: best.r.min(1.0).asin(),
    })
}

/// Exhaustive enumeration of index triples `i < j < k` in lexicographic
/// order.
pub fn thickness_bruteforce(curve: &SampledCurve) -> Result<ThicknessReport> {
    let pts = curve.vecs();
    let m = pts.len();
    if m < 3 {
        return Err(Error::TooFewPoints(m));
    }
    let bound = Bound::new(local_bound(&pts, curve.is_closed()).r);
    let cols = Columns::new(&pts);
    let best = (0..m - 2)
        .into_par_iter()
        .map(|i| {
            let mut best = Best::NONE;
            let pi = &pts[i];
            for j in i + 1..m - 1 {
                let pj = &pts[j];
                let lim = bound.get().min(best.r);
                scan_third(&cols, j + 1, pi, pj, lim, |k, r| {
                    if r <= best.r {
                        best.offer(r, [i, j, k]);
                    }
                });
            }
            bound.lower(best.r);
            best
        })
        .reduce(|| Best::NONE, Best::merge);
    finish(best, m)
}

/// Same result as [`thickness_bruteforce`], with candidate pairs drawn from
/// a spatial grid whose cells shrink with the running bound.
pub fn thickness_accelerated(curve: &SampledCurve) -> Result<ThicknessReport> {
    let pts = curve.vecs();
    let m = pts.len();
    if m < 3 {
        return Err(Error::TooFewPoints(m));
    }
    let start = local_bound(&pts, curve.is_closed());
    let bound = Bound::new(start.r);
    let mut grid = SpatialGrid::build(&pts, 2.0 * start.r);
    let mut best = Best::NONE;
    let mut base = 0;
    while base < m - 2 {
        let end = (base + BLOCK).min(m - 2);
        let block_best = (base..end)
            .into_par_iter()
            .map(|i| {
                let mut best = Best::NONE;
                let pi = &pts[i];
                let reach = 2.0 * bound.get() * (1.0 + PRUNE_SLACK);
                let mut near = grid.within(&pts, pi, reach);
                near.retain(|&j| j > i);
                let local = Columns::new(near.iter().map(|&j| &pts[j]));
                for (a, &j) in near.iter().enumerate() {
                    let pj = &pts[j];
                    let lim = bound.get().min(best.r);
                    scan_third(&local, a + 1, pi, pj, lim, |b, r| {
                        let k = near[b];
                        if r <= best.r {
                            best.offer(r, [i, j, k]);
                        }
                    });
                }
                bound.lower(best.r);
                best
            })
            .reduce(|| Best::NONE, Best::merge);
        best = best.merge(block_best);
        let reach = 2.0 * bound.get();
        if reach < 0.5 * grid.cell_size() {
            grid = SpatialGrid::build(&pts, reach);
        }
        base = end;
    }
    finish(best, m)
}

/// Which of the two tangent balls at a sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FgbViolation {
    /// Sample whose tangent ball is penetrated.
    pub sample: usize,
    pub side: Side,
    /// Curve sample inside the ball.
    pub intruder: usize,
    /// How far inside: `theta - dist(intruder, center)`.
    pub depth: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FgbReport {
    pub theta: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Most violating pair, if any sample entered a ball beyond tolerance.
    pub worst: Option<FgbViolation>,
}

/// Checks that no sample lies in an open geodesic ball of radius `theta`
/// tangent to the curve at another sample (up to `tolerance`).
pub fn fgb_check(curve: &SampledCurve, theta: f64, tolerance: f64) -> Result<FgbReport> {
    if !(theta > 0.0 && theta <= FRAC_PI_2) {
        return Err(Error::InvalidTheta(theta));
    }
    let tolerance = tolerance.max(0.0);
    let points = curve.points();
    let pts = curve.vecs();
    let tangents = curve.tangents();
    let limit = theta - tolerance;
    let reach = angle_to_chord(limit.max(0.0)) * (1.0 + PRUNE_SLACK);
    let grid = SpatialGrid::build(&pts, reach);

    let worst = (0..pts.len())
        .into_par_iter()
        .map(|i| {
            let normal = points[i].vec().cross(&tangents[i]);
            let mut worst: Option<FgbViolation> = None;
            for (side, dir) in [(Side::Left, normal), (Side::Right, -normal)] {
                let center = walk_geodesic(&points[i], &dir, theta);
                grid.for_each_candidate(center.vec(), reach, |q| {
                    if q == i {
                        return;
                    }
                    let d = geodesic_dist(&points[q], &center);
                    if d < limit {
                        let v = FgbViolation {
                            sample: i,
                            side,
                            intruder: q,
                            depth: theta - d,
                        };
                        worst = pick_worse(worst, Some(v));
                    }
                });
            }
            worst
        })
        .reduce(|| None, pick_worse);

    Ok(FgbReport {
        theta,
        tolerance,
        passed: worst.is_none(),
        worst,
    })
}

fn pick_worse(a: Option<FgbViolation>, b: Option<FgbViolation>) -> Option<FgbViolation> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => {
            let key = |v: &FgbViolation| (v.sample, v.side == Side::Right, v.intruder);
            if b.depth > a.depth || (b.depth == a.depth && key(&b) < key(&a)) {
                Some(b)
            } else {
                Some(a)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{rotate_vec, UnitVec};
    use std::f64::consts::PI;

    fn circle(colatitude: f64, m: usize) -> SampledCurve {
        SampledCurve::from_fn(m, true, |s| {
            let phi = 2.0 * PI * s;
            Vec3::new(
                colatitude.sin() * phi.cos(),
                colatitude.sin() * phi.sin(),
                colatitude.cos(),
            )
        })
        .unwrap()
    }

    /// Every triple, no skipping at all.
    fn exhaustive(curve: &SampledCurve) -> (f64, [usize; 3]) {
        let p = curve.vecs();
        let mut best = (f64::INFINITY, [0; 3]);
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                for k in j + 1..p.len() {
                    let r = circumradius_unchecked(&p[i], &p[j], &p[k]);
                    if r < best.0 {
                        best = (r, [i, j, k]);
                    }
                }
            }
        }
        best
    }

    #[test]
    fn spherical_thickness_examples() {
        assert!((spherical_thickness(1.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((spherical_thickness((PI / 8.0).sin()).unwrap() - PI / 8.0).abs() < 1e-15);
        assert!((spherical_thickness(0.5).unwrap() - PI / 6.0).abs() < 1e-15);
        assert!(spherical_thickness(0.0).is_err());
        assert!(spherical_thickness(1.01).is_err());
        assert!(spherical_thickness(f64::NAN).is_err());
    }

    #[test]
    fn equator_and_latitude() {
        let eq = circle(FRAC_PI_2, 720);
        let r = thickness_bruteforce(&eq).unwrap();
        assert!((r.delta - 1.0).abs() < 1e-4);
        let a = thickness_accelerated(&eq).unwrap();
        assert_eq!((a.delta, a.witness), (r.delta, r.witness));

        let lat = circle(PI / 6.0, 720);
        let r = thickness_bruteforce(&lat).unwrap();
        assert!((r.delta - 0.5).abs() < 1e-4);
        assert!((r.spherical_theta - PI / 6.0).abs() < 1e-3);
        let a = thickness_accelerated(&lat).unwrap();
        assert_eq!((a.delta, a.witness), (r.delta, r.witness));
    }

    #[test]
    fn witness_attains_delta() {
        let lat = circle(1.0, 150);
        let r = thickness_bruteforce(&lat).unwrap();
        let p = lat.vecs();
        let [i, j, k] = r.witness;
        assert!(i < j && j < k);
        let again = crate::geom::circumradius(&p[i], &p[j], &p[k]).unwrap();
        assert!((again - r.delta).abs() <= 1e-12);
    }

    #[test]
    fn bruteforce_matches_exhaustive_scan() {
        for (colat, m) in [(0.4, 90), (1.2, 120), (FRAC_PI_2, 61)] {
            let c = circle(colat, m);
            let r = thickness_bruteforce(&c).unwrap();
            assert_eq!((r.delta, r.witness), exhaustive(&c));
        }
    }

    #[test]
    fn near_touching_strands() {
        // two latitudinal circles 0.2 apart, joined into one sample list
        let m = 150;
        let mut pts = Vec::new();
        for (colat, dir) in [(1.0f64, 1.0), (1.2f64, -1.0)] {
            for s in 0..m {
                let phi = dir * 2.0 * PI * s as f64 / m as f64;
                pts.push(UnitVec::from_spherical(colat, phi));
            }
        }
        let curve = SampledCurve::new(pts, false).unwrap();
        let b = thickness_bruteforce(&curve).unwrap();
        let a = thickness_accelerated(&curve).unwrap();
        assert_eq!((a.delta, a.witness), (b.delta, b.witness));
        let half_gap = (0.1f64).sin();
        assert!((b.delta - half_gap).abs() < 2e-3, "{}", b.delta);
        assert_eq!((b.delta, b.witness), exhaustive(&curve));
    }

    #[test]
    fn too_few_points() {
        // SampledCurve refuses < 3 points, so the engines never see them
        assert!(matches!(
            SampledCurve::new(vec![UnitVec::X], true),
            Err(Error::TooFewPoints(1))
        ));
    }

    #[test]
    fn isometry_invariance() {
        let c = SampledCurve::from_fn(200, true, |s| {
            let phi = 2.0 * PI * s;
            Vec3::new(phi.cos(), phi.sin(), 0.2 * (3.0 * phi).sin())
        })
        .unwrap();
        let r = thickness_bruteforce(&c).unwrap();
        let axis = UnitVec::from_xyz(0.3, -1.0, 0.5).unwrap();
        for angle in [0.3, 1.7, 4.0] {
            let rc = thickness_bruteforce(&c.rotated(&axis, angle)).unwrap();
            assert!((rc.delta - r.delta).abs() < 1e-12);
        }
    }

    #[test]
    fn fgb_equator_hemispheres() {
        let eq = circle(FRAC_PI_2, 720);
        let rep = fgb_check(&eq, FRAC_PI_2, 1e-9).unwrap();
        assert!(rep.passed, "{rep:?}");
        assert!(fgb_check(&eq, 0.0, 1e-3).is_err());
        assert!(fgb_check(&eq, 1.6, 1e-3).is_err());
    }

    #[test]
    fn fgb_detects_crossing() {
        // figure eight around the north pole
        let c = SampledCurve::from_fn(801, true, |s| {
            let t = 2.0 * PI * s;
            Vec3::new(0.6 * t.sin(), 0.6 * t.sin() * t.cos(), 1.0)
        })
        .unwrap();
        for theta in [0.01, 0.1, 0.5, 1.2] {
            let rep = fgb_check(&c, theta, 1e-3).unwrap();
            assert!(!rep.passed, "theta {theta}");
            assert!(rep.worst.unwrap().depth > 1e-3);
        }
    }

    #[test]
    fn fgb_small_circle_threshold() {
        // circle of spherical radius 0.4: balls of radius <= 0.4 fit inside
        let c = circle(0.4, 1000);
        assert!(fgb_check(&c, 0.4, 1e-3).unwrap().passed);
        assert!(!fgb_check(&c, 0.5, 1e-3).unwrap().passed);
        let axis = UnitVec::from_xyz(1.0, 1.0, 0.0).unwrap();
        let moved: Vec<UnitVec> = c
            .points()
            .iter()
            .map(|p| UnitVec::new(rotate_vec(p.vec(), &axis, 0.8)).unwrap())
            .collect();
        let moved = SampledCurve::new(moved, true).unwrap();
        assert!(fgb_check(&moved, 0.4, 1e-3).unwrap().passed);
    }
}
