//! Spherical and Euclidean primitives on the unit sphere.
//!
//! Intrinsic quantities (geodesic distances, spherical radii) are radians;
//! Euclidean quantities (chords, circumradii) are plain lengths in the ambient
//! space of the unit sphere.

use std::f64::consts::PI;

use nalgebra::Vector3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitSphere};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// Minimum separation below which two points count as coincident.
pub const COINCIDENCE_EPS: f64 = 1e-12;

/// Relative area cutoff below which a triple is treated as collinear.
pub const COLLINEAR_EPS: f64 = 1e-15;

/// A point (or direction) on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct UnitVec(Vec3);

impl UnitVec {
    pub const NORTH: UnitVec = UnitVec(Vec3::new(0.0, 0.0, 1.0));
    pub const SOUTH: UnitVec = UnitVec(Vec3::new(0.0, 0.0, -1.0));
    pub const X: UnitVec = UnitVec(Vec3::new(1.0, 0.0, 0.0));
    pub const Y: UnitVec = UnitVec(Vec3::new(0.0, 1.0, 0.0));
    pub const Z: UnitVec = UnitVec::NORTH;

    /// Normalizes `v`; `None` for a (near) zero vector or non-finite input.
    pub fn new(v: Vec3) -> Option<Self> {
        let norm = v.norm();
        if !norm.is_finite() || norm < 1e-300 {
            return None;
        }
        Some(UnitVec(v / norm))
    }

    pub fn from_xyz(x: f64, y: f64, z: f64) -> Option<Self> {
        Self::new(Vec3::new(x, y, z))
    }

    /// Point at colatitude `theta` (from +z) and longitude `phi` (from +x).
    pub fn from_spherical(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        UnitVec(Vec3::new(st * cp, st * sp, ct))
    }

    /// Keeps `v` bit for bit when its norm is within `1e-12` of one,
    /// otherwise normalizes. Used when reading stored coordinates.
    pub fn new_lenient(v: Vec3) -> Option<Self> {
        let norm = v.norm();
        if (norm - 1.0).abs() <= 1e-12 {
            Some(UnitVec(v))
        } else {
            Self::new(v)
        }
    }

    /// Wraps a vector that is already unit length. Renormalizes anyway so the
    /// invariant holds to machine precision.
    pub(crate) fn renormalized(v: Vec3) -> Self {
        UnitVec(v / v.norm())
    }

    #[inline]
    pub fn vec(&self) -> &Vec3 {
        &self.0
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.0.x
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.0.y
    }

    #[inline]
    pub fn z(&self) -> f64 {
        self.0.z
    }

    pub fn dot(&self, other: &UnitVec) -> f64 {
        self.0.dot(&other.0)
    }

    pub fn antipode(&self) -> UnitVec {
        UnitVec(-self.0)
    }
}

impl std::ops::Neg for UnitVec {
    type Output = UnitVec;
    fn neg(self) -> UnitVec {
        self.antipode()
    }
}

impl From<UnitVec> for [f64; 3] {
    fn from(u: UnitVec) -> Self {
        [u.0.x, u.0.y, u.0.z]
    }
}

impl TryFrom<[f64; 3]> for UnitVec {
    type Error = String;
    fn try_from(a: [f64; 3]) -> std::result::Result<Self, String> {
        UnitVec::new_lenient(Vec3::new(a[0], a[1], a[2]))
            .ok_or_else(|| format!("cannot normalize vector {a:?}"))
    }
}

/// Open geodesic ball (spherical cap) of intrinsic radius in (0, pi/2].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicBall {
    center: UnitVec,
    radius: f64,
}

impl GeodesicBall {
    pub fn new(center: UnitVec, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius <= PI / 2.0) {
            return Err(Error::InvalidTheta(radius));
        }
        Ok(GeodesicBall { center, radius })
    }

    pub fn center(&self) -> UnitVec {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Euclidean radius of the boundary circle.
    pub fn boundary_radius(&self) -> f64 {
        self.radius.sin()
    }

    pub fn contains(&self, p: &UnitVec) -> bool {
        geodesic_dist(&self.center, p) < self.radius
    }
}

/// Intrinsic distance on the unit sphere, in `[0, pi]`.
#[inline]
pub fn geodesic_dist(a: &UnitVec, b: &UnitVec) -> f64 {
    let cross = a.0.cross(&b.0).norm();
    cross.atan2(a.0.dot(&b.0))
}

/// Geodesic distance corresponding to a Euclidean chord on the unit sphere.
#[inline]
pub fn chord_to_angle(chord: f64) -> f64 {
    2.0 * (0.5 * chord).clamp(0.0, 1.0).asin()
}

/// Euclidean chord subtending the geodesic distance `angle`.
#[inline]
pub fn angle_to_chord(angle: f64) -> f64 {
    2.0 * (0.5 * angle.clamp(0.0, PI)).sin()
}

/// Circumradius of three points in space.
///
/// Returns `f64::INFINITY` for collinear (zero-area) triples.
pub fn circumradius(a: &Vec3, b: &Vec3, c: &Vec3) -> Result<f64> {
    if (a - b).norm() <= COINCIDENCE_EPS {
        return Err(Error::DegenerateTriple(0, 1));
    }
    if (b - c).norm() <= COINCIDENCE_EPS {
        return Err(Error::DegenerateTriple(1, 2));
    }
    if (c - a).norm() <= COINCIDENCE_EPS {
        return Err(Error::DegenerateTriple(0, 2));
    }
    Ok(circumradius_unchecked(a, b, c))
}

/// Kernel form of [`circumradius`]: coincident or collinear triples give
/// `f64::INFINITY` instead of an error. Argument order matters only in the
/// last bits; callers comparing results must pass triples in a fixed order.
#[inline]
pub fn circumradius_unchecked(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    let (num, den) = circumradius_sq_parts(a, b, c.x, c.y, c.z);
    (num / den).sqrt()
}

/// Squared circumradius as `(|ab|^2 |ac|^2 |bc|^2, 4 |ab x ac|^2)`, or
/// `(inf, 1)` for coincident or collinear points. Scalar arithmetic in a
/// fixed order, so batched callers reproduce [`circumradius_unchecked`]
/// bit for bit with `(num / den).sqrt()`.
#[inline(always)]
pub(crate) fn circumradius_sq_parts(a: &Vec3, b: &Vec3, x: f64, y: f64, z: f64) -> (f64, f64) {
    let (abx, aby, abz) = (b.x - a.x, b.y - a.y, b.z - a.z);
    let (acx, acy, acz) = (x - a.x, y - a.y, z - a.z);
    let (bcx, bcy, bcz) = (x - b.x, y - b.y, z - b.z);
    let lab2 = abx * abx + aby * aby + abz * abz;
    let lac2 = acx * acx + acy * acy + acz * acz;
    let lbc2 = bcx * bcx + bcy * bcy + bcz * bcz;
    let cx = aby * acz - abz * acy;
    let cy = abz * acx - abx * acz;
    let cz = abx * acy - aby * acx;
    // |ab x ac|^2 = (2 * area)^2
    let cr2 = cx * cx + cy * cy + cz * cz;
    let max2 = lab2.max(lac2).max(lbc2);
    let min2 = lab2.min(lac2).min(lbc2);
    let degenerate = (min2 <= COINCIDENCE_EPS * COINCIDENCE_EPS)
        | (0.25 * cr2 <= (COLLINEAR_EPS * max2) * (COLLINEAR_EPS * max2));
    if degenerate {
        (f64::INFINITY, 1.0)
    } else {
        (lab2 * lac2 * lbc2, 4.0 * cr2)
    }
}

/// Rodrigues rotation of `p` about `axis` by `angle` (right-hand rule).
pub fn rotate_about_axis(p: &UnitVec, axis: &UnitVec, angle: f64) -> UnitVec {
    UnitVec::renormalized(rotate_vec(&p.0, axis, angle))
}

pub(crate) fn rotate_vec(v: &Vec3, axis: &UnitVec, angle: f64) -> Vec3 {
    let k = &axis.0;
    let (s, c) = angle.sin_cos();
    v * c + k.cross(v) * s + k * (k.dot(v) * (1.0 - c))
}

/// Walks from `p` along the great circle with initial unit direction `dir`
/// (tangent to the sphere at `p`) for geodesic distance `dist`.
pub fn walk_geodesic(p: &UnitVec, dir: &Vec3, dist: f64) -> UnitVec {
    let (s, c) = dist.sin_cos();
    UnitVec::renormalized(p.0 * c + dir * s)
}

/// A circular arc on the sphere:
/// `point(t) = cos(rho) axis + sin(rho) (cos t e1 + sin t e2)` for `t` between
/// `t0` and `t0 + sweep`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub axis: UnitVec,
    pub rho: f64,
    pub e1: UnitVec,
    pub e2: UnitVec,
    pub t0: f64,
    pub sweep: f64,
}

impl Arc {
    /// Builds an arc with `e2 = axis x e1`, so `(e1, e2, axis)` is right-handed.
    /// `e1` must be perpendicular to `axis`.
    pub fn new(axis: UnitVec, rho: f64, e1: UnitVec, t0: f64, sweep: f64) -> Self {
        let e2 = UnitVec::renormalized(axis.0.cross(&e1.0));
        Arc {
            axis,
            rho,
            e1,
            e2,
            t0,
            sweep,
        }
    }

    pub fn t1(&self) -> f64 {
        self.t0 + self.sweep
    }

    /// Euclidean radius of the carrying circle.
    pub fn circle_radius(&self) -> f64 {
        self.rho.sin()
    }

    pub fn length(&self) -> f64 {
        self.sweep.abs() * self.rho.sin()
    }

    pub fn point(&self, t: f64) -> Result<UnitVec> {
        self.check_param(t)?;
        Ok(self.point_unchecked(t))
    }

    pub fn tangent(&self, t: f64) -> Result<UnitVec> {
        self.check_param(t)?;
        Ok(self.tangent_unchecked(t))
    }

    pub fn point_unchecked(&self, t: f64) -> UnitVec {
        let (s, c) = t.sin_cos();
        let (sr, cr) = self.rho.sin_cos();
        UnitVec::renormalized(self.axis.0 * cr + (self.e1.0 * c + self.e2.0 * s) * sr)
    }

    /// Unit tangent in the direction of travel.
    pub fn tangent_unchecked(&self, t: f64) -> UnitVec {
        let (s, c) = t.sin_cos();
        let d = self.e2.0 * c - self.e1.0 * s;
        let d = if self.sweep < 0.0 { -d } else { d };
        UnitVec::renormalized(d)
    }

    /// Point at fraction `f` in `[0, 1]` of the sweep.
    pub fn point_at_fraction(&self, f: f64) -> UnitVec {
        self.point_unchecked(self.t0 + f * self.sweep)
    }

    pub fn start(&self) -> UnitVec {
        self.point_unchecked(self.t0)
    }

    pub fn end(&self) -> UnitVec {
        self.point_unchecked(self.t1())
    }

    pub fn midpoint(&self) -> UnitVec {
        self.point_at_fraction(0.5)
    }

    pub fn start_tangent(&self) -> UnitVec {
        self.tangent_unchecked(self.t0)
    }

    pub fn end_tangent(&self) -> UnitVec {
        self.tangent_unchecked(self.t1())
    }

    /// Same point set traversed in the opposite direction.
    pub fn reversed(&self) -> Arc {
        Arc {
            t0: self.t1(),
            sweep: -self.sweep,
            ..*self
        }
    }

    /// Rigid rotation of the whole arc.
    pub fn rotated(&self, axis: &UnitVec, angle: f64) -> Arc {
        Arc {
            axis: rotate_about_axis(&self.axis, axis, angle),
            e1: rotate_about_axis(&self.e1, axis, angle),
            e2: rotate_about_axis(&self.e2, axis, angle),
            ..*self
        }
    }

    fn check_param(&self, t: f64) -> Result<()> {
        let (lo, hi) = if self.sweep >= 0.0 {
            (self.t0, self.t1())
        } else {
            (self.t1(), self.t0)
        };
        let slack = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
        if t.is_nan() || t < lo - slack || t > hi + slack {
            return Err(Error::ParamOutOfRange { t, lo, hi });
        }
        Ok(())
    }
}

/// How to place sample points on the sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphereSampling {
    /// Deterministic golden-angle spiral.
    Fibonacci,
    /// Uniform random points from a seeded generator.
    Random(u64),
}

pub fn sample_sphere(count: usize, scheme: SphereSampling) -> Vec<UnitVec> {
    match scheme {
        SphereSampling::Fibonacci => fibonacci_sphere(count),
        SphereSampling::Random(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            UnitSphere
                .sample_iter(&mut rng)
                .take(count)
                .map(|[x, y, z]: [f64; 3]| UnitVec::renormalized(Vec3::new(x, y, z)))
                .collect()
        }
    }
}

fn fibonacci_sphere(count: usize) -> Vec<UnitVec> {
    let golden_angle = PI * (3.0 - 5f64.sqrt());
    let m = count as f64;
    (0..count)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / m;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let (s, c) = (golden_angle * i as f64).sin_cos();
            UnitVec::renormalized(Vec3::new(r * c, r * s, z))
        })
        .collect()
}
