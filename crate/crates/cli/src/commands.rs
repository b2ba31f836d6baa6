use std::fs;
use std::io::{self, Write};
use std::path::Path;

use ropes_core::generator::open_omega;
use ropes_core::io::{from_json, polyline, to_json, to_obj, to_ply, to_svg, tube, TUBE_SIDES};
use ropes_core::{
    analytic_length, closed_theta, enumerate_solutions, generate_closed, generate_open,
    thickness_accelerated, thickness_bruteforce, CurveSpec, Error, Family,
};
use serde::Serialize;

use crate::report::{self, ThetaSource};
use crate::{
    exit, Engine, EnumerateArgs, ExportArgs, Failure, Format, GenerateArgs, MeshArgs,
    ThicknessArgs, VerifyArgs,
};

type Outcome = Result<u8, Failure>;

/// Thickness half-width a labelled curve was built for.
pub fn family_theta(family: Family, n: u32) -> f64 {
    match family {
        Family::Closed => closed_theta(n),
        Family::Open => open_omega(n),
    }
}

pub fn read_curve(path: &Path) -> Result<CurveSpec, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(exit::IO, format!("{}: {e}", path.display())))?;
    from_json(&text).map_err(|e| match e {
        Error::Parse(msg) => Failure::new(exit::PARSE, format!("{}: {msg}", path.display())),
        other => Failure::from(other),
    })
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    let result = match path {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    };
    result.map_err(|e| {
        let target = path.map_or("standard output".to_owned(), |p| p.display().to_string());
        Failure::new(exit::IO, format!("{target}: {e}"))
    })
}

fn render(spec: &CurveSpec, format: Format, mesh: &MeshArgs) -> Result<String, Failure> {
    let name = spec
        .meta
        .map_or("curve".to_owned(), |m| format!("{}_{}_{}", m.family, m.n, m.k));
    let build_mesh = || -> Result<_, Failure> {
        let curve = spec.sample_per_arc(mesh.samples_per_arc as usize)?;
        Ok(if mesh.tube {
            let theta = spec.meta.map_or(0.05, |m| family_theta(m.family, m.n));
            tube(&curve, theta.sin(), TUBE_SIDES)
        } else {
            polyline(&curve)
        })
    };
    Ok(match format {
        Format::Json => to_json(spec)?,
        Format::Obj => to_obj(&build_mesh()?, &name),
        Format::Ply => to_ply(&build_mesh()?),
        Format::Svg => to_svg(spec),
    })
}

pub fn generate(args: &GenerateArgs) -> Outcome {
    let built = match args.family {
        Family::Closed => generate_closed(args.n, args.k),
        Family::Open => generate_open(args.n, args.k),
    };
    let spec = match built {
        Ok(spec) => spec,
        Err(Error::NotCoprime { n, k, components }) => {
            return Err(Failure::new(
                exit::GATE,
                format!("n = {n} and k = {k} are not coprime\ncomponents: {components}"),
            ));
        }
        Err(e) => return Err(e.into()),
    };
    let text = render(&spec, args.format, &args.mesh)?;
    write_output(args.mesh.output.as_deref(), &text)?;
    Ok(exit::OK)
}

pub fn export(args: &ExportArgs) -> Outcome {
    let spec = read_curve(&args.input)?;
    let text = render(&spec, args.format.into(), &args.mesh)?;
    write_output(args.mesh.output.as_deref(), &text)?;
    Ok(exit::OK)
}

pub fn verify(args: &VerifyArgs) -> Outcome {
    let spec = read_curve(&args.input)?;
    let theta = match args.theta {
        Some(t) => Some((report::clamp_theta(t)?, ThetaSource::Flag)),
        None => spec
            .meta
            .map(|m| (family_theta(m.family, m.n), ThetaSource::Family)),
    };
    let report = report::run(&spec, theta, args)?;
    let text = if args.json {
        serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
    } else {
        report::human(&report, &args.input)
    };
    write_output(None, &text)?;
    Ok(if report.passed { exit::OK } else { exit::GATE })
}

#[derive(Serialize)]
struct ThicknessOutput {
    samples: usize,
    engine: &'static str,
    delta: f64,
    spherical_theta: f64,
    witness: [usize; 3],
}

pub fn thickness(args: &ThicknessArgs) -> Outcome {
    let spec = read_curve(&args.input)?;
    let curve = spec.sample(args.samples as usize)?;
    let (engine, r) = match args.engine {
        Engine::Brute => ("brute", thickness_bruteforce(&curve)?),
        Engine::Accelerated => ("accelerated", thickness_accelerated(&curve)?),
    };
    let out = ThicknessOutput {
        samples: curve.len(),
        engine,
        delta: r.delta,
        spherical_theta: r.spherical_theta,
        witness: r.witness,
    };
    let text = if args.json {
        serde_json::to_string_pretty(&out).expect("output serializes") + "\n"
    } else {
        format!(
            "samples          {}\nengine           {}\ndelta            {:.12}\nspherical theta  {:.12}\nwitness          {} {} {}\n",
            out.samples, out.engine, out.delta, out.spherical_theta,
            out.witness[0], out.witness[1], out.witness[2]
        )
    };
    write_output(None, &text)?;
    Ok(exit::OK)
}

fn parse_range(text: &str) -> Result<(u32, u32), Failure> {
    let bad = || Failure::new(exit::USAGE, format!("invalid range `{text}`; expected a..b with 1 <= a <= b"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: u32 = a.trim().parse().map_err(|_| bad())?;
    let b: u32 = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok((a, b))
}

#[derive(Serialize)]
struct EnumerateRow {
    n: u32,
    ks: Vec<u32>,
    phi: u32,
    length: f64,
}

pub fn enumerate(args: &EnumerateArgs) -> Outcome {
    let (lo, hi) = match (&args.select.n, &args.select.range) {
        (Some(0), _) => return Err(Failure::new(exit::USAGE, "n must be at least 1")),
        (Some(n), _) => (*n, *n),
        (None, Some(r)) => parse_range(r)?,
        (None, None) => unreachable!("clap requires --n or --range"),
    };
    let rows: Vec<EnumerateRow> = (lo..=hi)
        .map(|n| {
            let e = enumerate_solutions(n);
            EnumerateRow {
                n,
                phi: e.count,
                ks: e.ks,
                length: analytic_length(Family::Closed, n),
            }
        })
        .collect();
    let text = if args.json {
        serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n"
    } else {
        let mut out = format!("{:>5}  {:>5}  {:>18}  k\n", "n", "phi", "length");
        for r in &rows {
            let ks: Vec<String> = r.ks.iter().map(u32::to_string).collect();
            out.push_str(&format!(
                "{:>5}  {:>5}  {:>18.12}  {}\n",
                r.n,
                r.phi,
                r.length,
                ks.join(" ")
            ));
        }
        out
    };
    write_output(None, &text)?;
    Ok(exit::OK)
}
