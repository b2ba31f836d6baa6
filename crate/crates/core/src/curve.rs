//! Curve representations: exact piecewise-circular specs and point samples.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{geodesic_dist, rotate_about_axis, Arc, UnitVec, Vec3};

/// Minimum separation of consecutive samples.
pub const MIN_SAMPLE_GAP: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Closed,
    Open,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Closed => "closed",
            Family::Open => "open",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "closed" => Ok(Family::Closed),
            "open" => Ok(Family::Open),
            other => Err(format!("unknown family `{other}`")),
        }
    }
}

/// Key of one constructed solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SolutionId {
    pub family: Family,
    pub n: u32,
    pub k: u32,
}

impl fmt::Display for SolutionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(n={}, k={})", self.family, self.n, self.k)
    }
}

/// A curve made of circular arcs, traversed in order.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    pub arcs: Vec<Arc>,
    pub closed: bool,
    pub meta: Option<SolutionId>,
}

impl CurveSpec {
    pub fn new(arcs: Vec<Arc>, closed: bool) -> Self {
        CurveSpec {
            arcs,
            closed,
            meta: None,
        }
    }

    pub fn length(&self) -> f64 {
        self.arcs.iter().map(Arc::length).sum()
    }

    pub fn start(&self) -> Option<UnitVec> {
        self.arcs.first().map(Arc::start)
    }

    pub fn end(&self) -> Option<UnitVec> {
        self.arcs.last().map(Arc::end)
    }

    /// Rigid rotation of every arc.
    pub fn rotated(&self, axis: &UnitVec, angle: f64) -> CurveSpec {
        CurveSpec {
            arcs: self.arcs.iter().map(|a| a.rotated(axis, angle)).collect(),
            ..self.clone()
        }
    }

    /// Samples each arc at `per_arc + 1` equally spaced parameters and joins
    /// them, dropping the point shared by consecutive arcs (and the closing
    /// point of a closed curve).
    pub fn sample_per_arc(&self, per_arc: usize) -> Result<SampledCurve> {
        let counts = vec![per_arc.max(1); self.arcs.len()];
        self.sample_with_counts(&counts)
    }

    /// Samples with roughly `total` points spread proportionally to arc
    /// length, at least two intervals per arc.
    pub fn sample(&self, total: usize) -> Result<SampledCurve> {
        let length = self.length();
        let counts: Vec<usize> = self
            .arcs
            .iter()
            .map(|a| ((total as f64 * a.length() / length).round() as usize).max(2))
            .collect();
        self.sample_with_counts(&counts)
    }

    fn sample_with_counts(&self, counts: &[usize]) -> Result<SampledCurve> {
        let mut points: Vec<UnitVec> = Vec::with_capacity(counts.iter().sum::<usize>() + 1);
        for (arc, &m) in self.arcs.iter().zip(counts) {
            for s in 0..=m {
                let p = arc.point_at_fraction(s as f64 / m as f64);
                if let Some(last) = points.last() {
                    if (p.vec() - last.vec()).norm() <= MIN_SAMPLE_GAP {
                        continue;
                    }
                }
                points.push(p);
            }
        }
        if self.closed && points.len() > 1 {
            let first = points[0];
            if (points[points.len() - 1].vec() - first.vec()).norm() <= MIN_SAMPLE_GAP {
                points.pop();
            }
        }
        SampledCurve::new(points, self.closed)
    }
}

/// Ordered samples of a curve on the sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    points: Vec<UnitVec>,
    closed: bool,
    /// Chord-summed length up to each sample; a closed curve has one extra
    /// entry for the closing segment.
    cumulative: Vec<f64>,
}

impl SampledCurve {
    pub fn new(points: Vec<UnitVec>, closed: bool) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::TooFewPoints(points.len()));
        }
        let mut cumulative = Vec::with_capacity(points.len() + 1);
        cumulative.push(0.0);
        let segments = points.len() - usize::from(!closed);
        for i in 0..segments {
            let a = points[i].vec();
            let b = points[(i + 1) % points.len()].vec();
            let gap = (b - a).norm();
            if gap <= MIN_SAMPLE_GAP {
                return Err(Error::InvalidCurve(format!(
                    "samples {i} and {} coincide",
                    (i + 1) % points.len()
                )));
            }
            cumulative.push(cumulative[i] + gap);
        }
        Ok(SampledCurve {
            points,
            closed,
            cumulative,
        })
    }

    pub fn from_fn(m: usize, closed: bool, f: impl Fn(f64) -> Vec3) -> Result<Self> {
        let denom = if closed { m } else { m - 1 } as f64;
        let points = (0..m)
            .map(|i| {
                UnitVec::new(f(i as f64 / denom))
                    .ok_or_else(|| Error::InvalidCurve(format!("sample {i} is not normalizable")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(points, closed)
    }

    pub fn points(&self) -> &[UnitVec] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn cumulative_arclength(&self) -> &[f64] {
        &self.cumulative
    }

    /// Total chord-summed length.
    pub fn length(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    pub fn vecs(&self) -> Vec<Vec3> {
        self.points.iter().map(|p| *p.vec()).collect()
    }

    pub fn rotated(&self, axis: &UnitVec, angle: f64) -> SampledCurve {
        let points = self
            .points
            .iter()
            .map(|p| rotate_about_axis(p, axis, angle))
            .collect();
        SampledCurve::new(points, self.closed).expect("rotation preserves sample gaps")
    }

    /// Unit tangents by central differences of the samples (one-sided at the
    /// ends of an open curve), projected onto the tangent plane.
    pub fn tangents(&self) -> Vec<Vec3> {
        let m = self.points.len();
        (0..m)
            .map(|i| {
                let (prev, next) = if self.closed {
                    ((i + m - 1) % m, (i + 1) % m)
                } else {
                    (i.saturating_sub(1), (i + 1).min(m - 1))
                };
                let p = self.points[i].vec();
                let d = self.points[next].vec() - self.points[prev].vec();
                let d = d - p * p.dot(&d);
                d / d.norm()
            })
            .collect()
    }

    /// Largest geodesic distance between consecutive samples.
    pub fn max_step(&self) -> f64 {
        let m = self.points.len();
        let segments = m - usize::from(!self.closed);
        (0..segments)
            .map(|i| geodesic_dist(&self.points[i], &self.points[(i + 1) % m]))
            .fold(0.0, f64::max)
    }
}
