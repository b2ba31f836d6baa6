//! The `verify` report.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write;
use std::path::Path;

use ropes_core::{
    c1_and_simplicity_check, coverage_report, endpoint_geometry, sample_sphere,
    spherical_thickness, thickness_accelerated, CoverageReport, CurveSpec, EndpointGeometry,
    Family, ShapeReport, SolutionId, SphereSampling,
};
use serde::Serialize;

use crate::{exit, Failure, VerifyArgs};

/// Allowed shortfall of the measured thickness below `sin(theta)`.
pub const THICKNESS_TOL: f64 = 1e-3;
/// Allowed excess of the coverage gap over `theta`.
pub const COVERAGE_TOL: f64 = 2e-3;
/// Coverage is measured on this many samples per arc.
pub const COVERAGE_SAMPLES_PER_ARC: usize = 500;
/// Samples per arc for the junction and simplicity check.
pub const SHAPE_SAMPLES_PER_ARC: usize = 64;
/// `--theta` values this far above `pi/2` are read as `pi/2`.
pub const THETA_ROUNDING: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ThetaSource {
    Flag,
    Family,
    Measured,
}

#[derive(Debug, Serialize)]
pub struct ThicknessGate {
    pub samples: usize,
    pub delta: f64,
    pub witness: [usize; 3],
    /// `sin(theta) - THICKNESS_TOL`.
    pub required: f64,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct CoverageGate {
    #[serde(flatten)]
    pub report: CoverageReport,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct EndpointGate {
    pub geometry: EndpointGeometry,
    /// What the file's family predicts, if it names one.
    pub expected: Option<&'static str>,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub solution: Option<SolutionId>,
    pub arcs: usize,
    pub closed: bool,
    pub length: f64,
    pub theta: f64,
    pub theta_source: ThetaSource,
    pub thickness: ThicknessGate,
    pub coverage: CoverageGate,
    pub shape: ShapeReport,
    pub endpoints: EndpointGate,
    pub passed: bool,
}

pub fn clamp_theta(theta: f64) -> Result<f64, Failure> {
    if theta > 0.0 && theta <= FRAC_PI_2 {
        Ok(theta)
    } else if theta > FRAC_PI_2 && theta <= FRAC_PI_2 + THETA_ROUNDING {
        Ok(FRAC_PI_2)
    } else {
        Err(Failure::new(
            exit::USAGE,
            format!("--theta {theta} outside (0, pi/2]"),
        ))
    }
}

fn expected_endpoints(spec: &CurveSpec) -> Option<&'static str> {
    let meta = spec.meta?;
    Some(match meta.family {
        Family::Closed => "closed",
        Family::Open if meta.n % 2 == 0 => "antipodal",
        Family::Open => "non_antipodal",
    })
}

pub fn run(
    spec: &CurveSpec,
    theta: Option<(f64, ThetaSource)>,
    args: &VerifyArgs,
) -> Result<VerifyReport, Failure> {
    let sampled = spec.sample(args.samples as usize)?;
    let thick = thickness_accelerated(&sampled)?;
    let (theta, theta_source) = match theta {
        Some(t) => t,
        None => (spherical_thickness(thick.delta)?, ThetaSource::Measured),
    };
    let required = theta.sin() - THICKNESS_TOL;
    let thickness = ThicknessGate {
        samples: sampled.len(),
        delta: thick.delta,
        witness: thick.witness,
        required,
        passed: thick.delta >= required,
    };

    let grid_size = args.grid_size as usize;
    let grid = match args.seed {
        Some(seed) => sample_sphere(grid_size, SphereSampling::Random(seed)),
        None => sample_sphere(grid_size, SphereSampling::Fibonacci),
    };
    let dense = spec.sample_per_arc(COVERAGE_SAMPLES_PER_ARC)?;
    let cov = coverage_report(&dense, theta, &grid, COVERAGE_TOL)?;
    let coverage = CoverageGate {
        passed: cov.sphere_filling && cov.covered_fraction == 1.0,
        report: cov,
    };

    let shape = c1_and_simplicity_check(spec, SHAPE_SAMPLES_PER_ARC);

    let geometry = endpoint_geometry(spec);
    let expected = expected_endpoints(spec);
    let observed = match geometry {
        EndpointGeometry::Closed => "closed",
        EndpointGeometry::Antipodal { .. } => "antipodal",
        EndpointGeometry::NonAntipodal { .. } => "non_antipodal",
    };
    let endpoints = EndpointGate {
        geometry,
        expected,
        passed: expected.is_none_or(|e| e == observed),
    };

    let passed = thickness.passed && coverage.passed && shape.passed && endpoints.passed;
    Ok(VerifyReport {
        solution: spec.meta,
        arcs: spec.arcs.len(),
        closed: spec.closed,
        length: spec.length(),
        theta,
        theta_source,
        thickness,
        coverage,
        shape,
        endpoints,
        passed,
    })
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn human(r: &VerifyReport, input: &Path) -> String {
    let mut out = String::new();
    let w = &mut out;
    writeln!(w, "file        {}", input.display()).unwrap();
    match r.solution {
        Some(id) => writeln!(w, "solution    {id}").unwrap(),
        None => writeln!(w, "solution    (unlabelled)").unwrap(),
    }
    writeln!(
        w,
        "curve       {} arcs, {}, length {:.12}",
        r.arcs,
        if r.closed { "closed" } else { "open" },
        r.length
    )
    .unwrap();
    let source = match r.theta_source {
        ThetaSource::Flag => "from --theta",
        ThetaSource::Family => "from the file's family",
        ThetaSource::Measured => "from the measured thickness",
    };
    writeln!(w, "theta       {:.12} ({source}), sin(theta) {:.12}", r.theta, r.theta.sin()).unwrap();
    let t = &r.thickness;
    writeln!(
        w,
        "thickness   delta {:.12} on {} samples, witness {:?}, need >= {:.12}  {}",
        t.delta,
        t.samples,
        t.witness,
        t.required,
        verdict(t.passed)
    )
    .unwrap();
    let c = &r.coverage.report;
    writeln!(
        w,
        "coverage    max_gap {:.12}, covered_fraction {:.6} on {} grid points, need max_gap <= {:.12}  {}",
        c.max_gap,
        c.covered_fraction,
        c.grid_size,
        c.theta + c.tolerance,
        verdict(r.coverage.passed)
    )
    .unwrap();
    let s = &r.shape;
    writeln!(
        w,
        "shape       junction gap {:.3e}, tangent mismatch {:.3e}, closure {}, min non-adjacent distance {:.3e}  {}",
        s.max_junction_gap,
        s.max_tangent_mismatch,
        if s.closure_consistent { "consistent" } else { "inconsistent" },
        s.min_nonadjacent_distance,
        verdict(s.passed)
    )
    .unwrap();
    for f in &s.failures {
        writeln!(w, "            {f}").unwrap();
    }
    let e = &r.endpoints;
    let geometry = match e.geometry {
        EndpointGeometry::Closed => "closed".to_owned(),
        EndpointGeometry::Antipodal { distance } => format!("antipodal (distance {distance:.12})"),
        EndpointGeometry::NonAntipodal { distance } => {
            format!("not antipodal (distance {distance:.12})")
        }
    };
    let expected = e.expected.map_or(String::new(), |x| format!(", expected {x}"));
    writeln!(w, "endpoints   {geometry}{expected}  {}", verdict(e.passed)).unwrap();
    writeln!(w, "result      {}", verdict(r.passed)).unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_rounding() {
        assert_eq!(clamp_theta(1.5708).unwrap(), FRAC_PI_2);
        assert_eq!(clamp_theta(0.5).unwrap(), 0.5);
        assert!(clamp_theta(1.6).is_err());
        assert!(clamp_theta(0.0).is_err());
        assert!(clamp_theta(f64::NAN).is_err());
    }
}
