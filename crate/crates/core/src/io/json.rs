//! `CurveFileV1`: the JSON form of a [`CurveSpec`].
//!
//! Reals are written with 17 significant digits in exponent form, so every
//! binary64 value survives a round trip and re-serializing a parsed file
//! reproduces it byte for byte.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::curve::{CurveSpec, Family, SolutionId};
use crate::error::{Error, Result};
use crate::geom::{Arc, UnitVec};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveFileV1 {
    pub format_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    pub closed: bool,
    pub arcs: Vec<Arc>,
}

impl From<&CurveSpec> for CurveFileV1 {
    fn from(spec: &CurveSpec) -> Self {
        CurveFileV1 {
            format_version: FORMAT_VERSION,
            family: spec.meta.map(|m| m.family),
            n: spec.meta.map(|m| m.n),
            k: spec.meta.map(|m| m.k),
            closed: spec.closed,
            arcs: spec.arcs.clone(),
        }
    }
}

impl TryFrom<CurveFileV1> for CurveSpec {
    type Error = Error;

    fn try_from(file: CurveFileV1) -> Result<Self> {
        if file.format_version != FORMAT_VERSION {
            return Err(Error::Parse(format!(
                "unsupported format_version {}",
                file.format_version
            )));
        }
        let meta = match (file.family, file.n, file.k) {
            (Some(family), Some(n), Some(k)) => Some(SolutionId { family, n, k }),
            (None, None, None) => None,
            _ => {
                return Err(Error::Parse(
                    "family, n and k must be given together".to_owned(),
                ))
            }
        };
        for (i, a) in file.arcs.iter().enumerate() {
            let finite = [a.rho, a.t0, a.sweep].iter().all(|v| v.is_finite());
            if !finite || !(a.rho > 0.0 && a.rho < std::f64::consts::PI) {
                return Err(Error::Parse(format!("arc {i}: rho must lie in (0, pi)")));
            }
            if a.sweep.abs() > 2.0 * std::f64::consts::PI + 1e-12 {
                return Err(Error::Parse(format!("arc {i}: |sweep| exceeds 2 pi")));
            }
            let ortho = |u: &UnitVec, v: &UnitVec| u.dot(v).abs() <= 1e-9;
            if !(ortho(&a.axis, &a.e1) && ortho(&a.axis, &a.e2) && ortho(&a.e1, &a.e2)) {
                return Err(Error::Parse(format!("arc {i}: frame is not orthonormal")));
            }
            if a.e1.vec().cross(a.e2.vec()).dot(a.axis.vec()) < 0.0 {
                return Err(Error::Parse(format!("arc {i}: frame is left-handed")));
            }
        }
        if file.arcs.is_empty() {
            return Err(Error::Parse("no arcs".to_owned()));
        }
        Ok(CurveSpec {
            arcs: file.arcs,
            closed: file.closed,
            meta,
        })
    }
}

/// Pretty JSON with every float as `d.dddddddddddddddde±x`.
struct FullPrecision<'a>(PrettyFormatter<'a>);

impl Formatter for FullPrecision<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if !value.is_finite() {
            return Err(io::Error::new(
                io::ErrorKind::InvalidData,
                "non-finite number",
            ));
        }
        write!(w, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn end_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_key(w)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json(spec: &CurveSpec) -> Result<String> {
    let file = CurveFileV1::from(spec);
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FullPrecision(PrettyFormatter::new()));
    file.serialize(&mut ser)
        .map_err(|e| Error::Parse(e.to_string()))?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("JSON output is UTF-8"))
}

pub fn from_json(text: &str) -> Result<CurveSpec> {
    let file: CurveFileV1 =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    CurveSpec::try_from(file)
}
