//! File formats: `CurveFileV1` JSON, OBJ/PLY display meshes and SVG views.

pub mod json;
pub mod mesh;
pub mod svg;

pub use json::{from_json, to_json, CurveFileV1};
pub use mesh::{polyline, to_obj, to_ply, tube, Mesh, TUBE_SIDES};
pub use svg::to_svg;
