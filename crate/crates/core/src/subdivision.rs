//! Labeled triangles and the medial subdivision step.
//!
//! Vertices are stored in role order `(A, B, C)`: `A` is incident to `α` and
//! opposite side `a = |BC|`, and cyclically. The children of `ABC`, with
//! `D, E, F` the midpoints of `BC, CA, AB`, are stored in role order too:
//!
//! | child     | `(A, B, C)` roles | parallel sides |
//! |-----------|-------------------|----------------|
//! | `Central` | `(D, E, F)`       | `a, b, c`      |
//! | `CornerA` | `(A, F, E)`       | `a`            |
//! | `CornerB` | `(F, B, D)`       | `b`            |
//! | `CornerC` | `(E, D, C)`       | `c`            |
//!
//! A side contained in a parent side inherits its letter; the remaining side
//! is named after the parent side it does not meet.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::kernel::{angle_at, distance, midpoint, translate_to_origin, GeodesicLine, Point, ANTIPODAL_TOL};
use crate::space::{Geometry, Space};
use crate::trig;

const COLLINEAR_TOL: f64 = 1e-12;

/// Which of the four children of a medial subdivision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ChildIndex {
    Central,
    CornerA,
    CornerB,
    CornerC,
}

impl ChildIndex {
    pub const ALL: [ChildIndex; 4] =
        [ChildIndex::Central, ChildIndex::CornerA, ChildIndex::CornerB, ChildIndex::CornerC];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    /// Sides `[a, b, c]` of the child that are parallel sides of the parent's.
    pub fn parallel_sides(self) -> [bool; 3] {
        match self {
            ChildIndex::Central => [true, true, true],
            ChildIndex::CornerA => [true, false, false],
            ChildIndex::CornerB => [false, true, false],
            ChildIndex::CornerC => [false, false, true],
        }
    }

    fn symbol(self) -> char {
        char::from(b'0' + self as u8)
    }
}

/// A finite word over the four children, read from the root triangle down.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NestedPath {
    pub steps: Vec<ChildIndex>,
}

impl NestedPath {
    pub fn new(steps: Vec<ChildIndex>) -> Self {
        NestedPath { steps }
    }

    pub fn all_central(depth: usize) -> Self {
        NestedPath { steps: vec![ChildIndex::Central; depth] }
    }

    pub fn depth(&self) -> usize {
        self.steps.len()
    }
}

impl fmt::Display for NestedPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            write!(f, "{}", s.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for NestedPath {
    type Err = Error;

    /// Digits `0..=3`, or the letters `o` (central) and `a`, `b`, `c` (corners).
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| match c.to_ascii_lowercase() {
                '0' | 'o' => Ok(ChildIndex::Central),
                '1' | 'a' => Ok(ChildIndex::CornerA),
                '2' | 'b' => Ok(ChildIndex::CornerB),
                '3' | 'c' => Ok(ChildIndex::CornerC),
                other => Err(Error::ConfigError(format!("invalid path symbol `{other}`"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(NestedPath::new)
    }
}

/// A geodesic triangle with vertices in role order `(A, B, C)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LabeledTriangle {
    vertices: [Point; 3],
    sides: [f64; 3],
    geometry: Geometry,
}

impl LabeledTriangle {
    /// Builds a triangle without validation; side lengths are measured.
    pub(crate) fn from_vertices(vertices: [Point; 3]) -> Self {
        let g = vertices[0].geometry();
        let d = |i: usize, j: usize| distance(&vertices[i], &vertices[j]).expect("same space");
        LabeledTriangle { sides: [d(1, 2), d(2, 0), d(0, 1)], vertices, geometry: g }
    }

    /// The triangle with the given side lengths, `A` at the origin and `AB`
    /// leaving at angle `rotation`.
    pub fn from_sides(a: f64, b: f64, c: f64, g: Geometry, rotation: f64) -> Result<Self> {
        let alpha = trig::law_of_cosines_angle(a, b, c, g)?;
        let pa = Point::origin(g);
        let pb = Point::from_polar(g, c, rotation);
        let pc = Point::from_polar(g, b, rotation + alpha);
        validate_triangle(&pa, &pb, &pc, Space::unit(g))
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn vertices(&self) -> &[Point; 3] {
        &self.vertices
    }

    pub fn a(&self) -> &Point {
        &self.vertices[0]
    }

    pub fn b(&self) -> &Point {
        &self.vertices[1]
    }

    pub fn c(&self) -> &Point {
        &self.vertices[2]
    }

    /// `[a, b, c] = [|BC|, |CA|, |AB|]`.
    pub fn sides(&self) -> [f64; 3] {
        self.sides
    }

    pub fn max_side(&self) -> f64 {
        self.sides.iter().copied().fold(0.0, f64::max)
    }

    pub fn perimeter(&self) -> f64 {
        self.sides.iter().sum()
    }

    /// `[α, β, γ]`, measured in the model.
    pub fn angles(&self) -> Result<[f64; 3]> {
        let [a, b, c] = &self.vertices;
        Ok([angle_at(a, b, c)?, angle_at(b, c, a)?, angle_at(c, a, b)?])
    }

    /// Line through the side opposite vertex `i` (0 → `BC`, 1 → `CA`, 2 → `AB`).
    pub fn side_line(&self, i: usize) -> Result<GeodesicLine> {
        let p = &self.vertices[(i + 1) % 3];
        let q = &self.vertices[(i + 2) % 3];
        GeodesicLine::through(p, q)
    }

    /// Heights `[h_A, h_B, h_C]`: distance of each vertex to the line
    /// prolonging the opposite side.
    pub fn heights(&self) -> Result<[f64; 3]> {
        let mut h = [0.0; 3];
        for (i, slot) in h.iter_mut().enumerate() {
            *slot = self.side_line(i)?.distance_to(&self.vertices[i])?;
        }
        Ok(h)
    }

    /// Midpoints `[D, E, F]` of `BC`, `CA`, `AB`.
    pub fn midpoints(&self) -> Result<[Point; 3]> {
        let [a, b, c] = &self.vertices;
        Ok([midpoint(b, c)?, midpoint(c, a)?, midpoint(a, b)?])
    }

    /// The same triangle relabeled `(B, C, A)`: side `b` takes the role of `a`.
    pub fn rotated(&self) -> Self {
        let [a, b, c] = self.vertices;
        let [sa, sb, sc] = self.sides;
        LabeledTriangle { vertices: [b, c, a], sides: [sb, sc, sa], geometry: self.geometry }
    }

    /// Whether `p` lies in the closed triangle, with its distance to the boundary lines.
    ///
    /// Returns the smallest signed distance to the three side lines, positive
    /// on the interior side.
    pub fn interior_margin(&self, p: &Point) -> Result<f64> {
        let mut margin = f64::INFINITY;
        for i in 0..3 {
            let line = self.side_line(i)?;
            let sign = line.side(&self.vertices[i]).signum();
            let s = line.side(p) * sign;
            let d = line.distance_to(p)?;
            margin = margin.min(if s >= 0.0 { d } else { -d });
        }
        Ok(margin)
    }

    /// The congruent triangle moved by an isometry so that `A` is the origin.
    ///
    /// Side lengths are kept as they are. Small triangles far from the origin
    /// lose relative precision in their coordinates; moving them back keeps
    /// later midpoints and distances accurate to a few ulps.
    pub fn recentered(&self) -> Result<Self> {
        let a = self.vertices[0];
        let mut vertices = [a; 3];
        for (slot, v) in vertices.iter_mut().zip(&self.vertices) {
            *slot = translate_to_origin(&a, v)?;
        }
        Ok(LabeledTriangle { vertices, ..*self })
    }

    /// Spherical excess (or defect) `α + β + γ − π`.
    pub fn angle_excess(&self) -> Result<f64> {
        let [x, y, z] = self.angles()?;
        Ok(x + y + z - PI)
    }
}

/// Validates three points as a non-degenerate geodesic triangle.
///
/// On the sphere the vertices must lie in a common open hemisphere. Three
/// linearly independent unit vectors always do; coplanar triples either fit
/// in an open half great circle (collinear) or do not (not in a hemisphere).
pub fn validate_triangle(a: &Point, b: &Point, c: &Point, space: Space) -> Result<LabeledTriangle> {
    let g = space.geometry;
    for p in [a, b, c] {
        if p.geometry() != g {
            return Err(Error::SpaceMismatch(g, p.geometry()));
        }
    }
    if g == Geometry::Spherical {
        for (p, q) in [(a, b), (b, c), (c, a)] {
            if distance(p, q)? >= PI - ANTIPODAL_TOL {
                return Err(Error::AntipodalVertices);
            }
        }
    }
    let ab = b.coords() - a.coords();
    let ac = c.coords() - a.coords();
    let scale = ab.norm() * ac.norm();
    let degenerate = match g {
        Geometry::Euclidean => (ab.x * ac.y - ab.y * ac.x).abs() <= COLLINEAR_TOL * scale,
        _ => a.coords().dot(&ab.cross(&ac)).abs() <= COLLINEAR_TOL * scale,
    };
    if degenerate || scale == 0.0 {
        if g == Geometry::Spherical {
            let t = LabeledTriangle::from_vertices([*a, *b, *c]);
            if t.perimeter() >= 2.0 * PI - ANTIPODAL_TOL {
                return Err(Error::NotInOpenHemisphere);
            }
        }
        return Err(Error::Collinear);
    }
    Ok(LabeledTriangle::from_vertices([*a, *b, *c]))
}

/// Children of `t` in [`ChildIndex`] order.
pub fn medial_subdivide(t: &LabeledTriangle) -> Result<[LabeledTriangle; 4]> {
    if t.sides.iter().any(|&s| !(s > 0.0)) {
        return Err(Error::DegenerateTriangle);
    }
    let m = t.midpoints()?;
    Ok(children_from_midpoints(t, m))
}

pub(crate) fn child_roles<T: Copy>(v: &[T; 3], m: [T; 3], child: ChildIndex) -> [T; 3] {
    let [a, b, c] = *v;
    let [d, e, f] = m;
    match child {
        ChildIndex::Central => [d, e, f],
        ChildIndex::CornerA => [a, f, e],
        ChildIndex::CornerB => [f, b, d],
        ChildIndex::CornerC => [e, d, c],
    }
}

/// Builds a child; sides lying on a parent side are exactly half of it.
fn make_child(parent: &LabeledTriangle, m: [Point; 3], which: ChildIndex) -> LabeledTriangle {
    let mut t = LabeledTriangle::from_vertices(child_roles(&parent.vertices, m, which));
    for (i, parallel) in which.parallel_sides().into_iter().enumerate() {
        if !parallel {
            t.sides[i] = 0.5 * parent.sides[i];
        }
    }
    t
}

fn children_from_midpoints(parent: &LabeledTriangle, m: [Point; 3]) -> [LabeledTriangle; 4] {
    ChildIndex::ALL.map(|which| make_child(parent, m, which))
}

/// One child, without building its siblings.
pub fn child(t: &LabeledTriangle, which: ChildIndex) -> Result<LabeledTriangle> {
    if t.sides.iter().any(|&s| !(s > 0.0)) {
        return Err(Error::DegenerateTriangle);
    }
    let m = t.midpoints()?;
    Ok(make_child(t, m, which))
}

/// Lengths, angles and heights of one triangle of a nested sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepMetrics {
    pub n: usize,
    /// Child chosen to reach this step (`None` for `t₀`).
    pub child: Option<ChildIndex>,
    pub sides: [f64; 3],
    pub angles: [f64; 3],
    pub heights: [f64; 3],
    /// `2ⁿ · [a, b, c]`.
    pub normalized_sides: [f64; 3],
    /// `2ⁿ · [h_A, h_B, h_C]`.
    pub normalized_heights: [f64; 3],
}

impl StepMetrics {
    pub fn of(t: &LabeledTriangle, n: usize, child: Option<ChildIndex>) -> Result<Self> {
        let scale = (n as f64).exp2();
        let sides = t.sides();
        let heights = t.heights()?;
        Ok(StepMetrics {
            n,
            child,
            sides,
            angles: t.angles()?,
            heights,
            normalized_sides: sides.map(|s| s * scale),
            normalized_heights: heights.map(|h| h * scale),
        })
    }

    pub fn angle_sum(&self) -> f64 {
        self.angles.iter().sum()
    }
}

/// The triangles `t₀, t₁, …` selected by `path`.
///
/// Each `t_n` with `n ≥ 1` is returned [recentered](LabeledTriangle::recentered),
/// so only its intrinsic quantities (lengths, angles, heights) are meaningful.
pub fn nested_triangles(t0: &LabeledTriangle, path: &NestedPath) -> Result<Vec<LabeledTriangle>> {
    let mut out = Vec::with_capacity(path.depth() + 1);
    out.push(*t0);
    let mut t = t0.recentered()?;
    for &step in &path.steps {
        t = child(&t, step)?.recentered()?;
        out.push(t);
    }
    Ok(out)
}

/// Per-step metrics of the nested sequence selected by `path`.
pub fn nested_sequence(t0: &LabeledTriangle, path: &NestedPath) -> Result<Vec<StepMetrics>> {
    let tris = nested_triangles(t0, path)?;
    tris.iter()
        .enumerate()
        .map(|(n, t)| StepMetrics::of(t, n, if n == 0 { None } else { Some(path.steps[n - 1]) }))
        .collect()
}
