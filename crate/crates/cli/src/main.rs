use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use medial_cli::suite::rows_to_csv;
use medial_cli::{render, run_suite_detailed, BackFace, Projection, RenderSpec, SampleSpec};
use medial_core::bounds::{compute_bounds_with_probe, DEFAULT_PROBE_DEPTH};
use medial_core::examples::{
    example1_record, example1_triangle, example2_record, example3_record, example3_triangle, example4_record,
    example4_triangle,
};
use medial_core::mesh::{max_depth, subdivide_to_with_limit};
use medial_core::{Geometry, LabeledTriangle, TriangulationJson, TriangulationLevel};

#[derive(Parser)]
#[command(name = "medial", version, about = "Medial triangle subdivision in constant curvature")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the full-level triangulation T_depth as JSON.
    Subdivide {
        #[arg(long)]
        space: Geometry,
        /// Side lengths a,b,c.
        #[arg(long, value_delimiter = ',')]
        sides: Vec<f64>,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 0.0)]
        rotation: f64,
        /// Raise the memory guard (otherwise MEDIAL_SUBDIV_MAX_DEPTH or 10).
        #[arg(long)]
        max_depth: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the verification suite described by a TOML sample spec.
    Verify {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Per-step table of every examined path.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Print the bound constants of a seed triangle.
    Bounds {
        #[arg(long)]
        space: Geometry,
        #[arg(long, value_delimiter = ',')]
        sides: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_PROBE_DEPTH)]
        probe_depth: usize,
    },
    /// Reproduce one of the four worked examples.
    Example {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
        which: u8,
        #[arg(long, default_value_t = 5.0)]
        apex_height: f64,
        #[arg(long, default_value_t = 8.0)]
        half_base: f64,
        #[arg(long, default_value_t = 1.0)]
        half_leg: f64,
        #[arg(long, default_value = "h2")]
        space: Geometry,
        #[arg(long, default_value_t = std::f64::consts::PI - 0.01)]
        leg: f64,
        #[arg(long, default_value_t = 0.2)]
        eps: f64,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Also draw the subdivided example triangle.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Draw a triangulation JSON file as SVG.
    Render {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        projection: Projection,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 16)]
        samples: usize,
        #[arg(long, default_value_t = 800.0)]
        size: f64,
        #[arg(long, default_value_t = 0.75)]
        stroke: f64,
        /// Drop far-side sphere edges instead of dashing them.
        #[arg(long)]
        omit_back: bool,
    },
}

fn emit(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn triangle(space: Geometry, sides: &[f64], rotation: f64) -> anyhow::Result<LabeledTriangle> {
    let [a, b, c] = sides else { bail!("expected three side lengths") };
    Ok(LabeledTriangle::from_sides(*a, *b, *c, space, rotation)?)
}

/// Exit status on success: 0 when every check passed, 1 otherwise.
fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Subdivide { space, sides, depth, rotation, max_depth: limit, out } => {
            let t = triangle(space, &sides, rotation)?;
            let level = subdivide_to_with_limit(&t, depth, limit.unwrap_or_else(max_depth))?;
            emit(&out, &serde_json::to_string(&level.to_json())?)?;
            Ok(0)
        }
        Command::Verify { spec, depth, report, csv } => {
            let text = std::fs::read_to_string(&spec).with_context(|| format!("reading {}", spec.display()))?;
            let spec = SampleSpec::from_toml(&text)?;
            let out = run_suite_detailed(&spec, depth, csv.is_some())?;
            let r = &out.report;
            emit(&report, &r.to_json())?;
            if let Some(path) = csv {
                std::fs::write(&path, rows_to_csv(&out.rows)?)?;
            }
            eprintln!(
                "{} samples, {} entries, {} failed, {} errors, rejection rate {:.3}",
                r.samples, r.evaluated, r.failed, r.errors, r.rejection_rate
            );
            Ok(r.exit_code() as u8)
        }
        Command::Bounds { space, sides, probe_depth } => {
            let t = triangle(space, &sides, 0.0)?;
            let b = compute_bounds_with_probe(&t, probe_depth)?;
            println!("{}", serde_json::to_string_pretty(&b)?);
            Ok(0)
        }
        Command::Example { which, apex_height, half_base, half_leg, space, leg, eps, depth, svg } => {
            let record = match which {
                1 => example1_record(apex_height, half_base)?,
                2 => example2_record(half_base, half_leg, space)?,
                3 => example3_record(leg)?,
                _ => example4_record(eps, depth)?,
            };
            println!("{}", serde_json::to_string_pretty(&record)?);
            if let Some(path) = svg {
                let (t, n) = match which {
                    1 => (example1_triangle(apex_height, half_base)?, 1),
                    2 => (LabeledTriangle::from_sides(2.0 * half_base, 2.0 * half_leg, 2.0 * half_leg, space, 0.0)?, 1),
                    3 => (example3_triangle(leg)?, 1),
                    _ => (example4_triangle(record.outputs["colatitude"].as_f64().unwrap_or(1.0))?, depth),
                };
                let projection = match t.geometry() {
                    Geometry::Hyperbolic => Projection::PoincareDisk,
                    Geometry::Spherical => Projection::OrthographicSphere,
                    Geometry::Euclidean => Projection::Flat,
                };
                let level = subdivide_to_with_limit(&t, n, n)?;
                std::fs::write(&path, render(&level, &RenderSpec::new(projection))?)?;
            }
            Ok(if record.passed() { 0 } else { 1 })
        }
        Command::Render { input, projection, out, samples, size, stroke, omit_back } => {
            let text = std::fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            let json: TriangulationJson = serde_json::from_str(&text)?;
            let level = TriangulationLevel::from_json(&json)?;
            let spec = RenderSpec {
                projection,
                samples_per_edge: samples,
                size,
                stroke,
                back_face: if omit_back { BackFace::Omit } else { BackFace::Dashed },
            };
            emit(&out, &render(&level, &spec)?)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
