//! SVG figures of a triangulation level.
//!
//! Geodesic edges are drawn as polylines through [`interpolate`] samples.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use medial_core::{interpolate, Error, Geometry, Point, Result, TriangulationLevel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Projection {
    PoincareDisk,
    UpperHalfPlane,
    OrthographicSphere,
    Flat,
}

impl Projection {
    pub fn geometry(self) -> Geometry {
        match self {
            Projection::PoincareDisk | Projection::UpperHalfPlane => Geometry::Hyperbolic,
            Projection::OrthographicSphere => Geometry::Spherical,
            Projection::Flat => Geometry::Euclidean,
        }
    }
}

impl std::str::FromStr for Projection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "poincare-disk" | "disk" => Ok(Projection::PoincareDisk),
            "upper-half-plane" | "half-plane" => Ok(Projection::UpperHalfPlane),
            "orthographic-sphere" | "orthographic" => Ok(Projection::OrthographicSphere),
            "flat" => Ok(Projection::Flat),
            other => Err(Error::ConfigError(format!("unknown projection `{other}`"))),
        }
    }
}

/// What to do with sphere points on the far hemisphere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackFace {
    Dashed,
    Omit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenderSpec {
    pub projection: Projection,
    pub samples_per_edge: usize,
    /// Canvas width and height in pixels.
    pub size: f64,
    pub stroke: f64,
    pub back_face: BackFace,
}

impl RenderSpec {
    pub fn new(projection: Projection) -> Self {
        RenderSpec { projection, samples_per_edge: 16, size: 800.0, stroke: 0.75, back_face: BackFace::Dashed }
    }
}

/// Model coordinates of `p` in the plane of the projection, and whether
/// the point faces the viewer.
pub fn project(p: &Point, projection: Projection) -> Result<([f64; 2], bool)> {
    if p.geometry() != projection.geometry() {
        return Err(Error::GeometryMismatch { expected: projection.geometry(), found: p.geometry() });
    }
    let c = p.coords();
    Ok(match projection {
        Projection::PoincareDisk => ([c.x / (1.0 + c.z), c.y / (1.0 + c.z)], true),
        Projection::UpperHalfPlane => {
            // Cayley map w ↦ i(1 + w)/(1 − w) from the disk.
            let (u, v) = (c.x / (1.0 + c.z), c.y / (1.0 + c.z));
            let den = (1.0 - u) * (1.0 - u) + v * v;
            ([-2.0 * v / den, (1.0 - u * u - v * v) / den], true)
        }
        Projection::OrthographicSphere => ([c.x, c.y], c.z >= 0.0),
        Projection::Flat => ([c.x, c.y], true),
    })
}

/// Affine map from model coordinates to the canvas, `y` pointing down.
struct Viewport {
    min: [f64; 2],
    scale: f64,
    pad: f64,
    height: f64,
}

impl Viewport {
    fn fit(min: [f64; 2], max: [f64; 2], size: f64) -> Self {
        let pad = 0.05 * size;
        let span = (max[0] - min[0]).max(max[1] - min[1]).max(f64::MIN_POSITIVE);
        Viewport { min, scale: (size - 2.0 * pad) / span, pad, height: size }
    }

    fn map(&self, q: [f64; 2]) -> [f64; 2] {
        [
            self.pad + (q[0] - self.min[0]) * self.scale,
            self.height - self.pad - (q[1] - self.min[1]) * self.scale,
        ]
    }
}

fn edge_samples(p: &Point, q: &Point, n: usize) -> Result<Vec<Point>> {
    (0..n).map(|k| interpolate(p, q, k as f64 / n as f64)).collect()
}

/// Sampled closed boundary of face `i`.
fn face_outline(level: &TriangulationLevel, i: usize, n: usize) -> Result<Vec<Point>> {
    let [a, b, c] = level.face_vertices(i);
    let mut out = edge_samples(&a, &b, n)?;
    out.extend(edge_samples(&b, &c, n)?);
    out.extend(edge_samples(&c, &a, n)?);
    out.push(a);
    Ok(out)
}

fn path_data(runs: &[Vec<[f64; 2]>], close: bool) -> String {
    let mut d = String::new();
    for run in runs.iter().filter(|r| r.len() > 1) {
        for (k, q) in run.iter().enumerate() {
            let _ = write!(d, "{}{:.3} {:.3} ", if k == 0 { "M" } else { "L" }, q[0], q[1]);
        }
    }
    if close {
        d.push('Z');
    }
    d.trim_end().to_string()
}

/// Splits a polyline into maximal runs on one side of the view.
fn split_runs(points: &[([f64; 2], bool)], front: bool) -> Vec<Vec<[f64; 2]>> {
    let mut runs = vec![Vec::new()];
    for (q, f) in points {
        if *f == front {
            runs.last_mut().unwrap().push(*q);
        } else if !runs.last().unwrap().is_empty() {
            runs.push(Vec::new());
        }
    }
    runs
}

/// The level as an SVG document with one `tri` path per visible face.
pub fn render(level: &TriangulationLevel, spec: &RenderSpec) -> Result<String> {
    if spec.samples_per_edge < 2 {
        return Err(Error::ConfigError("samples_per_edge must be at least 2".into()));
    }
    if level.geometry() != spec.projection.geometry() {
        return Err(Error::ConfigError(format!(
            "projection {:?} cannot show a {} triangulation",
            spec.projection,
            level.geometry()
        )));
    }
    let mut faces = Vec::with_capacity(level.len());
    for i in 0..level.len() {
        let pts = face_outline(level, i, spec.samples_per_edge)?;
        faces.push(pts.iter().map(|p| project(p, spec.projection)).collect::<Result<Vec<_>>>()?);
    }

    let size = spec.size;
    let view = match spec.projection {
        Projection::PoincareDisk | Projection::OrthographicSphere => Viewport::fit([-1.0, -1.0], [1.0, 1.0], size),
        Projection::UpperHalfPlane | Projection::Flat => {
            let (mut min, mut max) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
            if spec.projection == Projection::UpperHalfPlane {
                min[1] = 0.0;
            }
            for (q, _) in faces.iter().flatten() {
                for k in 0..2 {
                    min[k] = min[k].min(q[k]);
                    max[k] = max[k].max(q[k]);
                }
            }
            Viewport::fit(min, max, size)
        }
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    match spec.projection {
        Projection::PoincareDisk | Projection::OrthographicSphere => {
            let [cx, cy] = view.map([0.0, 0.0]);
            let _ = writeln!(
                svg,
                r##"<circle class="boundary" cx="{cx:.3}" cy="{cy:.3}" r="{:.3}" fill="none" stroke="#888"/>"##,
                view.scale
            );
        }
        Projection::UpperHalfPlane => {
            let [_, y] = view.map([0.0, 0.0]);
            let _ = writeln!(svg, r##"<line class="boundary" x1="0" y1="{y:.3}" x2="{size}" y2="{y:.3}" stroke="#888"/>"##);
        }
        Projection::Flat => {}
    }
    let stroke = spec.stroke;
    for face in &faces {
        let mapped: Vec<([f64; 2], bool)> = face.iter().map(|(q, f)| (view.map(*q), *f)).collect();
        let all_front = mapped.iter().all(|(_, f)| *f);
        let front = split_runs(&mapped, true);
        if front.iter().any(|r| r.len() > 1) {
            let _ = writeln!(
                svg,
                r#"<path class="tri" d="{}" fill="none" stroke="black" stroke-width="{stroke}"/>"#,
                path_data(&front, all_front)
            );
        }
        if !all_front && spec.back_face == BackFace::Dashed {
            let back = split_runs(&mapped, false);
            let _ = writeln!(
                svg,
                r##"<path class="back" d="{}" fill="none" stroke="#999" stroke-width="{stroke}" stroke-dasharray="4 3"/>"##,
                path_data(&back, false)
            );
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use medial_core::{subdivide_to, LabeledTriangle};

    #[test]
    fn apex_maps_to_disk_origin() {
        let (q, front) = project(&Point::origin(Geometry::Hyperbolic), Projection::PoincareDisk).unwrap();
        assert_eq!(q, [0.0, 0.0]);
        assert!(front);
        let (h, _) = project(&Point::origin(Geometry::Hyperbolic), Projection::UpperHalfPlane).unwrap();
        assert!((h[0]).abs() < 1e-15 && (h[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn depth_two_has_sixteen_paths() {
        let t = LabeledTriangle::from_sides(1.0, 1.2, 0.9, Geometry::Hyperbolic, 0.3).unwrap();
        let level = subdivide_to(&t, 2).unwrap();
        let svg = render(&level, &RenderSpec::new(Projection::PoincareDisk)).unwrap();
        assert_eq!(svg.matches(r#"class="tri""#).count(), 16);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }

    fn coordinates(svg: &str) -> Vec<f64> {
        svg.lines()
            .filter_map(|l| l.split(" d=\"").nth(1))
            .flat_map(|d| d.split('"').next().unwrap().split(|c: char| c == ' ' || c.is_ascii_alphabetic()))
            .filter(|t| !t.is_empty())
            .map(|t| t.parse().unwrap())
            .collect()
    }

    #[test]
    fn points_stay_on_canvas() {
        let cases = [
            (Geometry::Hyperbolic, Projection::PoincareDisk, 3.0),
            (Geometry::Hyperbolic, Projection::UpperHalfPlane, 2.0),
            (Geometry::Spherical, Projection::OrthographicSphere, 1.5),
            (Geometry::Euclidean, Projection::Flat, 3.0),
        ];
        for (g, projection, side) in cases {
            let t = LabeledTriangle::from_sides(side, side * 0.9, side * 1.1, g, 0.7).unwrap();
            let level = subdivide_to(&t, 3).unwrap();
            let spec = RenderSpec::new(projection);
            let xs = coordinates(&render(&level, &spec).unwrap());
            assert!(!xs.is_empty());
            assert!(xs.iter().all(|&x| (0.0..=spec.size).contains(&x)), "{projection:?}");
        }
    }

    #[test]
    fn incompatible_projection() {
        let t = LabeledTriangle::from_sides(1.0, 1.0, 1.0, Geometry::Spherical, 0.0).unwrap();
        let level = subdivide_to(&t, 1).unwrap();
        let r = render(&level, &RenderSpec::new(Projection::PoincareDisk));
        assert!(matches!(r, Err(Error::ConfigError(_))));
        let mut spec = RenderSpec::new(Projection::OrthographicSphere);
        spec.samples_per_edge = 1;
        assert!(matches!(render(&level, &spec), Err(Error::ConfigError(_))));
    }
}
