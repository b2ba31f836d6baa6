//! Thick curves ("ropes") on the unit sphere.
//!
//! * [`geom`]: distances, circumradius, rotations, circular arcs, sphere sampling.
//! * [`thickness`]: minimal triple circumradius of sampled curves and the
//!   forbidden-ball test.
//! * [`generator`]: the closed `(n, k)` families and the open families,
//!   seam bookkeeping, totient enumeration, congruence fingerprints.
//! * [`verifier`]: coverage, tube area law, C1/simplicity, endpoint checks.
//! * [`io`]: `CurveFileV1` JSON plus OBJ, PLY and SVG output.

pub mod curve;
pub mod error;
pub mod generator;
pub mod geom;
pub mod grid;
pub mod io;
pub mod thickness;
pub mod verifier;

pub use curve::{CurveSpec, Family, SampledCurve, SolutionId};
pub use error::{Error, Result};
pub use generator::{
    analytic_length, closed_theta, closed_thickness, congruence_fingerprint,
    enumerate_solutions, generate_closed, generate_open, open_omega, open_thickness,
    seam_permutation, Enumeration, Fingerprint, Gate, SeamPermutation,
};
pub use geom::{
    circumradius, geodesic_dist, rotate_about_axis, sample_sphere, Arc, GeodesicBall,
    SphereSampling, UnitVec, Vec3,
};
pub use thickness::{
    fgb_check, spherical_thickness, thickness_accelerated, thickness_bruteforce, FgbReport,
    ThicknessReport,
};
pub use verifier::{
    c1_and_simplicity_check, coverage_report, endpoint_geometry, tube_area_law_check,
    CoverageReport, EndpointGeometry, ShapeReport, TubeAreaCheck,
};
