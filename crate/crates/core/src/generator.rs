//! Explicit sphere-filling ropes built from stacks of latitudinal semicircles.
//!
//! Every construction lives on the same seam: the great circle in the
//! xz-plane, with the western hemisphere `y <= 0` and the eastern hemisphere
//! `y >= 0`. A seam position `p` sits at angle `p * unit` from the north pole
//! towards `+x`. Each hemisphere carries a stack of semicircles centred on
//! one seam position `c`: the semicircle through position `p` ends at
//! `2c - p`. A position fixed by that reflection is a pole of the stack, a
//! degenerate semicircle where the rope ends. Rotating the eastern stack
//! about `+y` shifts its centre along the seam.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::curve::{CurveSpec, Family, SolutionId};
use crate::error::{Error, Result};
use crate::geom::{geodesic_dist, sample_sphere, Arc, SphereSampling, UnitVec, Vec3};
use crate::thickness::thickness_accelerated;
use crate::verifier::{coverage_report, endpoint_geometry, EndpointGeometry};

/// Spherical thickness of the closed family: `pi / (2n)`.
pub fn closed_theta(n: u32) -> f64 {
    PI / (2.0 * n as f64)
}

/// Euclidean thickness of the closed family: `sin(pi / (2n))`.
pub fn closed_thickness(n: u32) -> f64 {
    closed_theta(n).sin()
}

/// Spherical thickness of the open family: `pi / n`.
pub fn open_omega(n: u32) -> f64 {
    PI / n as f64
}

/// Euclidean thickness of the open family: `sin(pi / n)`.
pub fn open_thickness(n: u32) -> f64 {
    open_omega(n).sin()
}

pub fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Euler's totient by trial division.
pub fn euler_phi(n: u32) -> u32 {
    let mut rest = n;
    let mut phi = n;
    let mut p = 2;
    while p * p <= rest {
        if rest % p == 0 {
            while rest % p == 0 {
                rest /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if rest > 1 {
        phi -= phi / rest;
    }
    phi
}

/// Which side of the seam an arc lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Hemisphere {
    West,
    East,
}

impl Hemisphere {
    fn other(self) -> Self {
        match self {
            Hemisphere::West => Hemisphere::East,
            Hemisphere::East => Hemisphere::West,
        }
    }
}

/// One arc of a seam walk: a semicircle from `from` to `to` on `side`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SeamStep {
    pub side: Hemisphere,
    pub from: u32,
    pub to: u32,
}

/// A connected piece of the joined stacks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeamComponent {
    pub closed: bool,
    /// Seam positions in traversal order (the closing position of a loop is
    /// not repeated).
    pub positions: Vec<u32>,
    pub steps: Vec<SeamStep>,
}

/// Two semicircle stacks joined along the seam.
#[derive(Debug, Clone, PartialEq, Eq)]
struct SeamLayout {
    /// Number of seam positions around the full circle.
    modulus: u32,
    /// Occupied positions, ascending.
    positions: Vec<u32>,
    west_center: u32,
    east_center: u32,
}

impl SeamLayout {
    fn partner(&self, side: Hemisphere, p: u32) -> Option<u32> {
        let c = match side {
            Hemisphere::West => self.west_center,
            Hemisphere::East => self.east_center,
        };
        let q = (2 * c + 2 * self.modulus - p) % self.modulus;
        (q != p).then_some(q)
    }

    fn index(&self, p: u32) -> usize {
        self.positions.binary_search(&p).expect("seam position")
    }

    /// Walks every component by alternating west and east partners. Paths
    /// (which start and end at poles) come first, then loops, each started
    /// at its smallest unvisited position.
    fn components(&self, loop_start_side: Hemisphere) -> Vec<SeamComponent> {
        let mut seen = vec![false; self.positions.len()];
        let mut out = Vec::new();
        let degree = |p: u32| {
            usize::from(self.partner(Hemisphere::West, p).is_some())
                + usize::from(self.partner(Hemisphere::East, p).is_some())
        };
        // paths from their first free end
        for &p in &self.positions {
            if seen[self.index(p)] || degree(p) > 1 {
                continue;
            }
            let side = if self.partner(Hemisphere::West, p).is_some() {
                Hemisphere::West
            } else {
                Hemisphere::East
            };
            out.push(self.walk(p, side, &mut seen));
        }
        for &p in &self.positions {
            if !seen[self.index(p)] {
                out.push(self.walk(p, loop_start_side, &mut seen));
            }
        }
        out
    }

    fn walk(&self, start: u32, mut side: Hemisphere, seen: &mut [bool]) -> SeamComponent {
        let mut positions = vec![start];
        let mut steps = Vec::new();
        seen[self.index(start)] = true;
        let mut at = start;
        loop {
            let Some(next) = self.partner(side, at) else {
                return SeamComponent {
                    closed: false,
                    positions,
                    steps,
                };
            };
            steps.push(SeamStep {
                side,
                from: at,
                to: next,
            });
            if next == start {
                return SeamComponent {
                    closed: true,
                    positions,
                    steps,
                };
            }
            seen[self.index(next)] = true;
            positions.push(next);
            at = next;
            side = side.other();
        }
    }
}

fn closed_layout(n: u32, k: u32) -> SeamLayout {
    // unit theta_n; the 2n seam points sit at odd multiples
    SeamLayout {
        modulus: 4 * n,
        positions: (0..2 * n).map(|j| 2 * j + 1).collect(),
        west_center: 0,
        east_center: (2 * k) % (4 * n),
    }
}

fn open_layout(n: u32, k: u32) -> SeamLayout {
    // unit omega_n; the n seam points sit at even multiples. For odd n both
    // stacks carry one pole; for even n the western stack carries both poles
    // and the eastern stack none, shifted by an odd multiple of omega_n.
    let shift = if n % 2 == 0 { 2 * k + 1 } else { 2 * k };
    SeamLayout {
        modulus: 2 * n,
        positions: (0..n).map(|j| 2 * j).collect(),
        west_center: 0,
        east_center: shift % (2 * n),
    }
}

/// Pairings and component count of the closed construction for `(n, k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeamPermutation {
    pub n: u32,
    pub k: u32,
    /// `west[j]`: seam point joined to `j` by a western semicircle.
    pub west: Vec<usize>,
    /// `east[j]`: seam point joined to `j` by a rotated eastern semicircle.
    pub east: Vec<usize>,
    /// Closed loops formed by alternating the two pairings, as seam indices.
    pub cycles: Vec<Vec<usize>>,
    pub component_count: usize,
}

/// Seam point `j` in `Z_2n` sits at cut-circle angle `(2j+1) theta_n`. The
/// western pairing is `j -> -1-j`, the eastern one after rotating by
/// `2k theta_n` is `j -> 2k-1-j`. Components are counted by walking.
pub fn seam_permutation(n: u32, k: u32) -> Result<SeamPermutation> {
    if n == 0 {
        return Err(Error::InvalidN { n, min: 1 });
    }
    if k >= n {
        return Err(Error::InvalidK { n, k });
    }
    let m = 2 * n as i64;
    let wrap = |x: i64| x.rem_euclid(m) as usize;
    let west: Vec<usize> = (0..m).map(|j| wrap(-1 - j)).collect();
    let east: Vec<usize> = (0..m).map(|j| wrap(2 * k as i64 - 1 - j)).collect();

    let mut seen = vec![false; m as usize];
    let mut cycles = Vec::new();
    for start in 0..m as usize {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut at = start;
        // both pairings are fixed-point free, so the walk is an even loop
        loop {
            cycle.push(at);
            seen[at] = true;
            at = west[at];
            cycle.push(at);
            seen[at] = true;
            at = east[at];
            if at == start {
                break;
            }
        }
        cycles.push(cycle);
    }
    Ok(SeamPermutation {
        n,
        k,
        component_count: cycles.len(),
        west,
        east,
        cycles,
    })
}

/// All `k` in `[0, n)` with `gcd(n, k) = 1`, and their count `phi(n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Enumeration {
    pub n: u32,
    pub ks: Vec<u32>,
    pub count: u32,
}

pub fn enumerate_solutions(n: u32) -> Enumeration {
    let ks: Vec<u32> = (0..n).filter(|&k| gcd(n, k) == 1).collect();
    Enumeration {
        n,
        count: euler_phi(n),
        ks,
    }
}

/// Position on the seam circle.
fn seam_point(angle: f64) -> Vec3 {
    Vec3::new(angle.sin(), 0.0, angle.cos())
}

/// Semicircle on `side` of the seam, centred on the seam at `center_angle`,
/// from seam angle `from_angle` to its reflection.
fn seam_semicircle(side: Hemisphere, center_angle: f64, from_angle: f64) -> Arc {
    let delta = (from_angle - center_angle + PI).rem_euclid(2.0 * PI) - PI;
    let rho = delta.abs();
    let axis = UnitVec::renormalized(seam_point(center_angle));
    let e1 = UnitVec::renormalized(Vec3::new(center_angle.cos(), 0.0, -center_angle.sin()));
    // e2 = +y; t in (0, pi) is east, t in (pi, 2pi) is west
    let (t0, sweep) = match (delta > 0.0, side) {
        (true, Hemisphere::East) => (0.0, PI),
        (true, Hemisphere::West) => (0.0, -PI),
        (false, Hemisphere::East) => (PI, -PI),
        (false, Hemisphere::West) => (PI, PI),
    };
    Arc::new(axis, rho, e1, t0, sweep)
}

fn arcs_for(layout: &SeamLayout, unit: f64, steps: &[SeamStep]) -> Vec<Arc> {
    steps
        .iter()
        .map(|s| {
            let c = match s.side {
                Hemisphere::West => layout.west_center,
                Hemisphere::East => layout.east_center,
            };
            seam_semicircle(s.side, c as f64 * unit, s.from as f64 * unit)
        })
        .collect()
}

/// Closed solution `(n, k)`: `n` latitudinal circles at colatitudes
/// `(2i+1) pi/(2n)`, cut along the seam, with the eastern halves turned by
/// `2k pi/(2n)` about `+y`. The arcs follow the single loop, starting with
/// the western half of the northernmost circle at its `x > 0` end.
pub fn generate_closed(n: u32, k: u32) -> Result<CurveSpec> {
    let perm = seam_permutation(n, k)?;
    if perm.component_count != 1 {
        return Err(Error::NotCoprime {
            n,
            k,
            components: perm.component_count,
        });
    }
    let layout = closed_layout(n, k);
    let components = layout.components(Hemisphere::West);
    debug_assert_eq!(components.len(), 1);
    let arcs = arcs_for(&layout, closed_theta(n), &components[0].steps);
    Ok(CurveSpec {
        arcs,
        closed: true,
        meta: Some(SolutionId {
            family: Family::Closed,
            n,
            k,
        }),
    })
}

/// Length of the family's solutions. Closed: `2 pi / sin(pi/(2n))`. Open:
/// the summed semicircle lengths of the two stacks, which do not depend on
/// `k`.
pub fn analytic_length(family: Family, n: u32) -> f64 {
    match family {
        Family::Closed => 2.0 * PI / closed_thickness(n),
        Family::Open => {
            let layout = open_layout(n.max(1), 0);
            let unit = open_omega(n.max(1));
            [Hemisphere::West, Hemisphere::East]
                .into_iter()
                .map(|side| {
                    let c = match side {
                        Hemisphere::West => layout.west_center,
                        Hemisphere::East => layout.east_center,
                    };
                    // each non-pole position is an end of exactly one semicircle
                    let ends: f64 = layout
                        .positions
                        .iter()
                        .filter(|&&p| layout.partner(side, p).is_some())
                        .map(|&p| {
                            let delta = (p as f64 - c as f64) * unit;
                            PI * delta.sin().abs()
                        })
                        .sum();
                    ends / 2.0
                })
                .sum()
        }
    }
}

/// Conditions a constructed open curve has to meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Gate {
    /// The joined stacks form one path.
    SinglePath,
    /// Sampled thickness equals `sin(pi/n)`.
    Thickness,
    /// Every sphere point lies within `pi/n` of the curve.
    Coverage,
    /// Endpoints antipodal exactly when `n` is even.
    Endpoints,
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gate::SinglePath => "single-path",
            Gate::Thickness => "thickness",
            Gate::Coverage => "coverage",
            Gate::Endpoints => "endpoints",
        })
    }
}

/// Sampling and tolerances used to gate [`generate_open`].
pub mod open_gates {
    pub const THICKNESS_SAMPLES: usize = 1000;
    pub const THICKNESS_TOL: f64 = 1e-3;
    pub const COVERAGE_SAMPLES_PER_ARC: usize = 500;
    pub const COVERAGE_GRID: usize = 100_000;
    pub const COVERAGE_TOL: f64 = 2e-3;
    pub const ANTIPODAL_TOL: f64 = 1e-9;
}

/// Open solution of thickness `sin(pi/n)`.
///
/// Both hemispheres carry semicircles centred on the seam at spacing
/// `2 pi/n`, plus the stack poles as degenerate members. For odd `n` each
/// stack has one pole and the eastern stack is turned by `2k pi/n`; for even
/// `n` the western stack holds both poles, the eastern stack none, and it is
/// turned by `(2k+1) pi/n`. The rope runs from the north pole along the
/// unique seam path. The result is returned only if it passes every
/// [`Gate`].
pub fn generate_open(n: u32, k: u32) -> Result<CurveSpec> {
    if n < 2 {
        return Err(Error::InvalidN { n, min: 2 });
    }
    if k >= n {
        return Err(Error::InvalidK { n, k });
    }
    let fail = |gate: Gate, witness: String| Error::ConstructionFailed {
        n,
        k,
        gate,
        witness,
    };
    let layout = open_layout(n, k);
    let components = layout.components(Hemisphere::West);
    let path = match components.as_slice() {
        [only] if !only.closed && only.positions.len() == layout.positions.len() => only,
        _ => {
            return Err(fail(
                Gate::SinglePath,
                format!("seam splits into {} components", components.len()),
            ))
        }
    };
    let mut steps = path.steps.clone();
    // start at the north pole, seam position 0
    if path.positions.last() == Some(&0) {
        steps.reverse();
        for s in &mut steps {
            std::mem::swap(&mut s.from, &mut s.to);
        }
    }
    let spec = CurveSpec {
        arcs: arcs_for(&layout, open_omega(n), &steps),
        closed: false,
        meta: Some(SolutionId {
            family: Family::Open,
            n,
            k,
        }),
    };
    check_open_gates(&spec, n).map_err(|(gate, witness)| fail(gate, witness))?;
    Ok(spec)
}

fn check_open_gates(spec: &CurveSpec, n: u32) -> std::result::Result<(), (Gate, String)> {
    use open_gates::*;
    let target = open_thickness(n);
    let sampled = spec
        .sample(THICKNESS_SAMPLES)
        .map_err(|e| (Gate::Thickness, e.to_string()))?;
    let report = thickness_accelerated(&sampled).map_err(|e| (Gate::Thickness, e.to_string()))?;
    if (report.delta - target).abs() > THICKNESS_TOL {
        return Err((
            Gate::Thickness,
            format!(
                "delta {} vs {} at samples {:?}",
                report.delta, target, report.witness
            ),
        ));
    }

    let omega = open_omega(n).min(PI / 2.0);
    let dense = spec
        .sample_per_arc(COVERAGE_SAMPLES_PER_ARC)
        .map_err(|e| (Gate::Coverage, e.to_string()))?;
    let grid = sample_sphere(COVERAGE_GRID, SphereSampling::Fibonacci);
    let coverage =
        coverage_report(&dense, omega, &grid, COVERAGE_TOL).map_err(|e| (Gate::Coverage, e.to_string()))?;
    if coverage.max_gap > open_omega(n) + COVERAGE_TOL {
        return Err((
            Gate::Coverage,
            format!("max gap {} exceeds {}", coverage.max_gap, open_omega(n)),
        ));
    }

    let ends = endpoint_geometry(spec);
    let antipodal = matches!(ends, EndpointGeometry::Antipodal { .. });
    if antipodal != (n % 2 == 0) {
        return Err((Gate::Endpoints, format!("{ends:?} for n = {n}")));
    }
    Ok(())
}

/// Rotation-invariant summary of a curve for congruence tests.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub arc_count: usize,
    /// Total length in units of [`Fingerprint::QUANTUM`].
    pub length: i64,
    /// Sorted pairwise geodesic distances between probe points, quantized.
    pub distances: Vec<i64>,
    /// Handedness sign; `0` for curves congruent to their mirror image.
    pub chirality: i8,
}

impl Fingerprint {
    pub const QUANTUM: f64 = 1e-9;

    /// Equality allowing each quantized value to be off by one step, which
    /// absorbs rounding that lands on a quantization boundary.
    pub fn matches(&self, other: &Fingerprint) -> bool {
        self.arc_count == other.arc_count
            && self.chirality == other.chirality
            && (self.length - other.length).abs() <= 1
            && self.distances.len() == other.distances.len()
            && self
                .distances
                .iter()
                .zip(&other.distances)
                .all(|(a, b)| (a - b).abs() <= 1)
    }
}

/// Probes each arc at `samples_per_arc` interior points (`1` = midpoints),
/// collects the sorted pairwise distances, and adds length, arc count and a
/// chirality sign. Different fingerprints mean non-congruent curves.
pub fn congruence_fingerprint(curve: &CurveSpec, samples_per_arc: usize) -> Fingerprint {
    let per = samples_per_arc.max(1);
    let q = |x: f64| (x / Fingerprint::QUANTUM).round() as i64;
    let probes: Vec<UnitVec> = curve
        .arcs
        .iter()
        .flat_map(|a| (0..per).map(move |s| a.point_at_fraction((s as f64 + 0.5) / per as f64)))
        .collect();
    let mut distances = Vec::with_capacity(probes.len() * probes.len().saturating_sub(1) / 2);
    for (i, a) in probes.iter().enumerate() {
        for b in &probes[i + 1..] {
            distances.push(q(geodesic_dist(a, b)));
        }
    }
    distances.sort_unstable();

    // sum over probe pairs of det(p, q, T_p) (T_p . q): odd under reflection,
    // unchanged by rotation and by reversing the traversal direction
    let tangents: Vec<UnitVec> = curve
        .arcs
        .iter()
        .flat_map(|a| {
            (0..per).map(move |s| {
                a.tangent_unchecked(a.t0 + a.sweep * (s as f64 + 0.5) / per as f64)
            })
        })
        .collect();
    let mut handedness = 0.0;
    for (p, t) in probes.iter().zip(&tangents) {
        for q in &probes {
            handedness += p.vec().cross(q.vec()).dot(t.vec()) * t.dot(q);
        }
    }
    handedness /= (probes.len() * probes.len()) as f64;
    let chirality = if handedness.abs() < 1e-9 {
        0
    } else {
        handedness.signum() as i8
    };

    Fingerprint {
        arc_count: curve.arcs.len(),
        length: q(curve.length()),
        distances,
        chirality,
    }
}
