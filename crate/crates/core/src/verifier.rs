//! Global checks on curves: sphere coverage, the tube area law, C1 joins
//! and simplicity, and where an open curve ends.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{CurveSpec, SampledCurve};
use crate::error::{Error, Result};
use crate::geom::{
    angle_to_chord, chord_to_angle, geodesic_dist, sample_sphere, SphereSampling, UnitVec,
};
use crate::grid::SpatialGrid;

/// Gap allowed between consecutive arc ends.
pub const JUNCTION_GAP_TOL: f64 = 1e-12;
/// Allowed difference of unit tangents at a junction.
pub const JUNCTION_TANGENT_TOL: f64 = 1e-9;
/// Endpoints count as antipodal within this distance of `pi`.
pub const ANTIPODAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoverageReport {
    pub theta: f64,
    pub tolerance: f64,
    pub grid_size: usize,
    /// Largest distance from a grid point to the nearest curve sample.
    pub max_gap: f64,
    /// Fraction of grid points within `theta + tolerance` of the curve.
    pub covered_fraction: f64,
    /// `covered_fraction * 4 pi`.
    pub tube_area_estimate: f64,
    pub curve_length: f64,
    /// `max_gap <= theta + tolerance`.
    pub sphere_filling: bool,
}

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta <= FRAC_PI_2 {
        Ok(())
    } else {
        Err(Error::InvalidTheta(theta))
    }
}

fn index_for(curve: &SampledCurve, theta: f64) -> SpatialGrid {
    let cell = (0.5 * angle_to_chord(theta)).max(2.0 * angle_to_chord(curve.max_step()));
    SpatialGrid::build(&curve.vecs(), cell)
}

/// Distance from each query point to the nearest curve sample, through the
/// spatial index.
pub fn nearest_distances(curve: &SampledCurve, queries: &[UnitVec], theta: f64) -> Vec<f64> {
    let index = index_for(curve, theta);
    let points = curve.points();
    queries
        .par_iter()
        .map(|q| index.nearest_geodesic(points, q))
        .collect()
}

/// Same as [`nearest_distances`] by full scan; used to audit the index.
pub fn nearest_distances_naive(curve: &SampledCurve, queries: &[UnitVec]) -> Vec<f64> {
    queries
        .par_iter()
        .map(|q| {
            curve
                .points()
                .iter()
                .map(|p| geodesic_dist(q, p))
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

pub fn coverage_report(
    curve: &SampledCurve,
    theta: f64,
    grid: &[UnitVec],
    tolerance: f64,
) -> Result<CoverageReport> {
    check_theta(theta)?;
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let dists = nearest_distances(curve, grid, theta);
    let max_gap = dists.iter().copied().fold(0.0, f64::max);
    let covered = dists.iter().filter(|&&d| d <= theta + tolerance).count();
    let covered_fraction = covered as f64 / grid.len() as f64;
    Ok(CoverageReport {
        theta,
        tolerance,
        grid_size: grid.len(),
        max_gap,
        covered_fraction,
        tube_area_estimate: covered_fraction * 4.0 * PI,
        curve_length: curve.length(),
        sphere_filling: max_gap <= theta + tolerance,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TubeAreaCheck {
    /// Monte Carlo area of the open `theta`-neighbourhood.
    pub estimate: f64,
    /// `2 sin(theta) * length`.
    pub law: f64,
    pub relative_error: f64,
}

/// Compares a Monte Carlo estimate of the tube area with
/// `2 sin(theta) * length`. The law needs an embedded tube, i.e. thickness at
/// least `sin(theta)`; that is the caller's responsibility.
pub fn tube_area_law_check(
    curve: &SampledCurve,
    theta: f64,
    mc_points: usize,
    seed: u64,
) -> Result<TubeAreaCheck> {
    check_theta(theta)?;
    if !curve.is_closed() {
        return Err(Error::OpenCurveUnsupported);
    }
    if mc_points == 0 {
        return Err(Error::EmptyGrid);
    }
    let queries = sample_sphere(mc_points, SphereSampling::Random(seed));
    let index = index_for(curve, theta);
    let points = curve.points();
    let inside = queries
        .par_iter()
        .filter(|q| index.any_within_geodesic(points, q, theta))
        .count();
    let estimate = 4.0 * PI * inside as f64 / mc_points as f64;
    let law = 2.0 * theta.sin() * curve.length();
    Ok(TubeAreaCheck {
        estimate,
        law,
        relative_error: (estimate - law).abs() / law,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShapeReport {
    pub passed: bool,
    /// Largest gap between the end of one arc and the start of the next.
    pub max_junction_gap: f64,
    /// Largest unit-tangent mismatch at a junction.
    pub max_tangent_mismatch: f64,
    /// Junction (index of the arc it ends) with the largest mismatch.
    pub worst_junction: Option<usize>,
    /// Closed flag agrees with whether the ends meet.
    pub closure_consistent: bool,
    /// Smallest geodesic distance between samples of non-adjacent arcs.
    pub min_nonadjacent_distance: f64,
    pub failures: Vec<String>,
}

/// C1 continuity, closure and simplicity of a piecewise-circular curve.
pub fn c1_and_simplicity_check(spec: &CurveSpec, samples_per_arc: usize) -> ShapeReport {
    let m = spec.arcs.len();
    let mut failures = Vec::new();
    let mut max_gap = 0.0f64;
    let mut max_mismatch = 0.0f64;
    let mut worst = None;

    let junctions = if spec.closed { m } else { m.saturating_sub(1) };
    for i in 0..junctions {
        let (a, b) = (&spec.arcs[i], &spec.arcs[(i + 1) % m]);
        let gap = (a.end().vec() - b.start().vec()).norm();
        let mismatch = (a.end_tangent().vec() - b.start_tangent().vec()).norm();
        max_gap = max_gap.max(gap);
        if worst.is_none() || mismatch > max_mismatch {
            max_mismatch = mismatch;
            worst = Some(i);
        }
        if gap > JUNCTION_GAP_TOL {
            failures.push(format!("arcs {i} and {} do not meet (gap {gap:e})", (i + 1) % m));
        } else if mismatch > JUNCTION_TANGENT_TOL {
            failures.push(format!(
                "tangent jump {mismatch:e} between arcs {i} and {}",
                (i + 1) % m
            ));
        }
    }

    let closure_consistent = match (spec.start(), spec.end()) {
        (Some(s), Some(e)) => {
            let meet = (s.vec() - e.vec()).norm() <= JUNCTION_GAP_TOL;
            meet == spec.closed
        }
        _ => false,
    };
    if !closure_consistent {
        failures.push(if spec.closed {
            "closed curve whose ends do not meet".to_owned()
        } else {
            "open curve whose ends coincide".to_owned()
        });
    }

    let min_nonadjacent_distance = nonadjacent_distance(spec, samples_per_arc.max(2));
    if min_nonadjacent_distance <= 1e-9 {
        failures.push(format!(
            "non-adjacent arcs come within {min_nonadjacent_distance:e}"
        ));
    }

    ShapeReport {
        passed: failures.is_empty(),
        max_junction_gap: max_gap,
        max_tangent_mismatch: max_mismatch,
        worst_junction: worst,
        closure_consistent,
        min_nonadjacent_distance,
        failures,
    }
}

fn nonadjacent_distance(spec: &CurveSpec, per_arc: usize) -> f64 {
    let m = spec.arcs.len();
    let samples: Vec<Vec<UnitVec>> = spec
        .arcs
        .iter()
        .map(|a| {
            (0..=per_arc)
                .map(|s| a.point_at_fraction(s as f64 / per_arc as f64))
                .collect()
        })
        .collect();
    let adjacent = |i: usize, j: usize| {
        j == i + 1 || (spec.closed && i == 0 && j == m - 1)
    };
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .filter(|&(i, j)| !adjacent(i, j))
        .collect();
    let min_chord2 = pairs
        .par_iter()
        .map(|&(i, j)| {
            let mut best = f64::INFINITY;
            for p in &samples[i] {
                for q in &samples[j] {
                    best = best.min((p.vec() - q.vec()).norm_squared());
                }
            }
            best
        })
        .reduce(|| f64::INFINITY, f64::min);
    if min_chord2.is_finite() {
        chord_to_angle(min_chord2.sqrt())
    } else {
        f64::INFINITY
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EndpointGeometry {
    Closed,
    Antipodal { distance: f64 },
    NonAntipodal { distance: f64 },
}

pub fn endpoint_geometry(spec: &CurveSpec) -> EndpointGeometry {
    if spec.closed {
        return EndpointGeometry::Closed;
    }
    match (spec.start(), spec.end()) {
        (Some(s), Some(e)) => {
            let distance = geodesic_dist(&s, &e);
            if (distance - PI).abs() <= ANTIPODAL_TOL {
                EndpointGeometry::Antipodal { distance }
            } else {
                EndpointGeometry::NonAntipodal { distance }
            }
        }
        _ => EndpointGeometry::NonAntipodal { distance: 0.0 },
    }
}
