//! Model arithmetic on the plane, the unit sphere and the hyperboloid.
//!
//! Curved geometries use embedding coordinates: the unit sphere in R³ and the
//! upper sheet `x² + y² − t² = −1` of the hyperboloid with the Minkowski form.
//! Flat points keep `z = 0`. Every point-producing operation renormalizes its
//! result back onto the surface; a drift larger than [`HARD_DRIFT`] is an error.

use nalgebra::Vector3;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::space::Geometry;

pub type Vec3 = Vector3<f64>;

/// Largest surface deviation tolerated before renormalization is refused.
pub const HARD_DRIFT: f64 = 1e-6;
/// Surface tolerance of stored points.
pub const SURFACE_TOL: f64 = 1e-12;
/// Spherical pairs closer than this to antipodal have no unique geodesic.
pub const ANTIPODAL_TOL: f64 = 1e-9;

const COINCIDENT: f64 = 1e-15;

/// The bilinear form of the model: dot product on the plane and the sphere,
/// Minkowski product on the hyperboloid.
#[inline]
pub fn inner(g: Geometry, a: &Vec3, b: &Vec3) -> f64 {
    match g {
        Geometry::Euclidean => a.x * b.x + a.y * b.y,
        Geometry::Spherical => a.dot(b),
        Geometry::Hyperbolic => a.x * b.x + a.y * b.y - a.z * b.z,
    }
}

/// A point of the model surface.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    coords: Vec3,
    geometry: Geometry,
}

impl Point {
    /// Validates and renormalizes raw model coordinates.
    pub fn new(geometry: Geometry, coords: Vec3) -> Result<Self> {
        if !coords.iter().all(|c| c.is_finite()) {
            return Err(Error::OffSurface { deviation: f64::INFINITY });
        }
        match geometry {
            Geometry::Euclidean => {
                if coords.z.abs() > HARD_DRIFT {
                    return Err(Error::OffSurface { deviation: coords.z.abs() });
                }
                Ok(Point { coords: Vec3::new(coords.x, coords.y, 0.0), geometry })
            }
            Geometry::Spherical => {
                let n = coords.norm();
                let dev = (n - 1.0).abs();
                if dev > HARD_DRIFT {
                    return Err(Error::OffSurface { deviation: dev });
                }
                Ok(Point { coords: coords / n, geometry })
            }
            Geometry::Hyperbolic => {
                let q = inner(geometry, &coords, &coords);
                let dev = (q + 1.0).abs();
                if dev > HARD_DRIFT || coords.z <= 0.0 {
                    return Err(Error::OffSurface { deviation: dev });
                }
                Ok(Point { coords: coords / (-q).sqrt(), geometry })
            }
        }
    }

    /// Builds a point from two (flat) or three (curved) coordinates.
    pub fn from_slice(geometry: Geometry, c: &[f64]) -> Result<Self> {
        let v = match (geometry, c) {
            (Geometry::Euclidean, [x, y]) => Vec3::new(*x, *y, 0.0),
            (Geometry::Euclidean, [x, y, z]) | (_, [x, y, z]) => Vec3::new(*x, *y, *z),
            _ => return Err(Error::DomainError(format!("expected coordinates, got {} values", c.len()))),
        };
        Self::new(geometry, v)
    }

    pub fn euclidean(x: f64, y: f64) -> Self {
        Point { coords: Vec3::new(x, y, 0.0), geometry: Geometry::Euclidean }
    }

    pub fn spherical(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::new(Geometry::Spherical, Vec3::new(x, y, z))
    }

    pub fn hyperbolic(x: f64, y: f64, t: f64) -> Result<Self> {
        Self::new(Geometry::Hyperbolic, Vec3::new(x, y, t))
    }

    /// The base point: `(0,0)`, the north pole, or the hyperboloid apex.
    pub fn origin(geometry: Geometry) -> Self {
        let coords = match geometry {
            Geometry::Euclidean => Vec3::zeros(),
            _ => Vec3::new(0.0, 0.0, 1.0),
        };
        Point { coords, geometry }
    }

    /// Geodesic polar coordinates around [`Point::origin`].
    pub fn from_polar(geometry: Geometry, radius: f64, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let coords = match geometry {
            Geometry::Euclidean => Vec3::new(radius * c, radius * s, 0.0),
            Geometry::Spherical => {
                let r = radius.sin();
                Vec3::new(r * c, r * s, radius.cos())
            }
            Geometry::Hyperbolic => {
                let r = radius.sinh();
                Vec3::new(r * c, r * s, radius.cosh())
            }
        };
        Point { coords, geometry }
    }

    /// Normalizes a vector that is already close to the surface.
    pub(crate) fn renormalized(geometry: Geometry, v: Vec3) -> Result<Self> {
        Self::new(geometry, v)
    }

    /// Projects an arbitrary nonzero vector radially onto the surface.
    pub(crate) fn radial(geometry: Geometry, v: Vec3) -> Result<Self> {
        match geometry {
            Geometry::Euclidean => Ok(Point { coords: Vec3::new(v.x, v.y, 0.0), geometry }),
            Geometry::Spherical => {
                let n = v.norm();
                if n < COINCIDENT {
                    return Err(Error::NoUniqueGeodesic);
                }
                Ok(Point { coords: v / n, geometry })
            }
            Geometry::Hyperbolic => {
                let q = -inner(geometry, &v, &v);
                if q <= 0.0 || v.z <= 0.0 {
                    return Err(Error::OffSurface { deviation: f64::INFINITY });
                }
                Ok(Point { coords: v / q.sqrt(), geometry })
            }
        }
    }

    pub fn coords(&self) -> &Vec3 {
        &self.coords
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    /// Coordinates as a plain vector: two entries for flat points, three otherwise.
    pub fn to_vec(&self) -> Vec<f64> {
        match self.geometry {
            Geometry::Euclidean => vec![self.coords.x, self.coords.y],
            _ => vec![self.coords.x, self.coords.y, self.coords.z],
        }
    }

    /// Deviation from the model surface (0 for flat points).
    pub fn surface_deviation(&self) -> f64 {
        match self.geometry {
            Geometry::Euclidean => self.coords.z.abs(),
            Geometry::Spherical => (self.coords.norm() - 1.0).abs(),
            Geometry::Hyperbolic => (inner(self.geometry, &self.coords, &self.coords) + 1.0).abs(),
        }
    }
}

fn same_space(p: &Point, q: &Point) -> Result<Geometry> {
    if p.geometry != q.geometry {
        return Err(Error::SpaceMismatch(p.geometry, q.geometry));
    }
    Ok(p.geometry)
}

/// Geodesic distance.
pub fn distance(p: &Point, q: &Point) -> Result<f64> {
    let g = same_space(p, q)?;
    Ok(raw_distance(g, &p.coords, &q.coords))
}

pub(crate) fn raw_distance(g: Geometry, p: &Vec3, q: &Vec3) -> f64 {
    match g {
        Geometry::Euclidean => (p.x - q.x).hypot(p.y - q.y),
        Geometry::Spherical => p.cross(q).norm().atan2(p.dot(q)),
        Geometry::Hyperbolic => {
            let d = p - q;
            let s = inner(g, &d, &d).max(0.0);
            2.0 * (0.5 * s.sqrt()).asinh()
        }
    }
}

/// Unit tangent at `p` pointing toward `q`, with the distance between them.
fn log_direction(g: Geometry, p: &Vec3, q: &Vec3) -> (Vec3, f64) {
    let w = q - p;
    let u = match g {
        Geometry::Euclidean => w,
        Geometry::Spherical => w - p * w.dot(p),
        Geometry::Hyperbolic => w + p * inner(g, p, &w),
    };
    let norm = inner(g, &u, &u).max(0.0).sqrt();
    let d = raw_distance(g, p, q);
    if norm == 0.0 {
        (Vec3::zeros(), d)
    } else {
        (u / norm, d)
    }
}

/// Point at arclength `s` from `p` along the unit tangent `u`.
fn exp_along(g: Geometry, p: &Vec3, u: &Vec3, s: f64) -> Vec3 {
    match g {
        Geometry::Euclidean => p + u * s,
        Geometry::Spherical => p * s.cos() + u * s.sin(),
        Geometry::Hyperbolic => p * s.cosh() + u * s.sinh(),
    }
}

/// Point at fraction `t` of the minimal geodesic from `p` to `q`.
pub fn interpolate(p: &Point, q: &Point, t: f64) -> Result<Point> {
    let g = same_space(p, q)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::DomainError(format!("interpolation parameter {t} outside [0, 1]")));
    }
    if g == Geometry::Spherical && raw_distance(g, &p.coords, &q.coords) >= PI - ANTIPODAL_TOL {
        return Err(Error::NoUniqueGeodesic);
    }
    if t == 0.0 {
        return Ok(*p);
    }
    if t == 1.0 {
        return Ok(*q);
    }
    if g == Geometry::Euclidean {
        return Ok(Point::euclidean(
            p.coords.x + t * (q.coords.x - p.coords.x),
            p.coords.y + t * (q.coords.y - p.coords.y),
        ));
    }
    let d = raw_distance(g, &p.coords, &q.coords);
    if d == 0.0 {
        return Ok(*p);
    }
    // Weights of the two endpoints; the combination stays in their plane,
    // which the tangent-vector form loses for far-out hyperbolic points.
    let (wp, wq) = match g {
        Geometry::Spherical => (((1.0 - t) * d).sin(), (t * d).sin()),
        _ => (((1.0 - t) * d).sinh(), (t * d).sinh()),
    };
    Point::radial(g, p.coords * wp + q.coords * wq)
}

/// Geodesic midpoint, computed by the closed form `(p + q)` renormalized.
pub fn midpoint(p: &Point, q: &Point) -> Result<Point> {
    let g = same_space(p, q)?;
    match g {
        Geometry::Euclidean => Ok(Point::euclidean(
            0.5 * (p.coords.x + q.coords.x),
            0.5 * (p.coords.y + q.coords.y),
        )),
        Geometry::Spherical => {
            if raw_distance(g, &p.coords, &q.coords) >= PI - ANTIPODAL_TOL {
                return Err(Error::NoUniqueGeodesic);
            }
            Point::radial(g, p.coords + q.coords)
        }
        Geometry::Hyperbolic => Point::radial(g, p.coords + q.coords),
    }
}

/// Moves `w` at `v` into the tangent plane of the base point, as a flat 2-vector.
fn tangent_at_origin(g: Geometry, v: &Vec3, w: &Vec3) -> Result<(f64, f64, f64)> {
    let diff = w - v;
    match g {
        Geometry::Euclidean => Ok((diff.x, diff.y, 0.0)),
        Geometry::Spherical => {
            let u = diff - v * diff.dot(v);
            // Rotation taking v to the north pole, applied to the tangent vector.
            let (x, y) = rotate_to_pole(v, &u);
            Ok((x, y, 0.0))
        }
        Geometry::Hyperbolic => {
            let u = diff + v * inner(g, v, &diff);
            let k = (v.x * u.x + v.y * u.y) / (v.z + 1.0) - u.z;
            Ok((u.x + k * v.x, u.y + k * v.y, 0.0))
        }
    }
}

/// Tangent vector `u` at `v` expressed in an orthonormal frame of `T_v S²`.
fn rotate_to_pole(v: &Vec3, u: &Vec3) -> (f64, f64) {
    // Any orthonormal frame works; angles only depend on the inner products.
    let helper = if v.z.abs() < 0.9 { Vec3::z() } else { Vec3::x() };
    let e1 = helper.cross(v).normalize();
    let e2 = v.cross(&e1);
    (u.dot(&e1), u.dot(&e2))
}

/// Interior angle at `v` between the geodesics toward `p` and `q`, in `[0, π]`.
pub fn angle_at(v: &Point, p: &Point, q: &Point) -> Result<f64> {
    let g = same_space(v, p)?;
    same_space(v, q)?;
    let (ux, uy, _) = tangent_at_origin(g, &v.coords, &p.coords)?;
    let (wx, wy, _) = tangent_at_origin(g, &v.coords, &q.coords)?;
    let nu = ux.hypot(uy);
    let nw = wx.hypot(wy);
    if nu < COINCIDENT || nw < COINCIDENT {
        return Err(Error::DegenerateAngle);
    }
    let cross = ux * wy - uy * wx;
    let dot = ux * wx + uy * wy;
    Ok(cross.abs().atan2(dot))
}

/// A complete geodesic: line, great circle, or hyperbolic geodesic line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeodesicLine {
    anchor: Point,
    direction: Vec3,
}

impl GeodesicLine {
    /// Builds a line from an anchor and a tangent direction (renormalized).
    pub fn new(anchor: Point, direction: Vec3) -> Result<Self> {
        let g = anchor.geometry;
        let p = anchor.coords;
        let d = match g {
            Geometry::Euclidean => Vec3::new(direction.x, direction.y, 0.0),
            Geometry::Spherical => direction - p * direction.dot(&p),
            Geometry::Hyperbolic => direction + p * inner(g, &p, &direction),
        };
        let n = inner(g, &d, &d);
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::DomainError("line direction is degenerate".into()));
        }
        Ok(GeodesicLine { anchor, direction: d / n.sqrt() })
    }

    /// The line through two distinct points, anchored at `p` and directed to `q`.
    pub fn through(p: &Point, q: &Point) -> Result<Self> {
        let g = same_space(p, q)?;
        if g == Geometry::Spherical && raw_distance(g, &p.coords, &q.coords) >= PI - ANTIPODAL_TOL {
            return Err(Error::NoUniqueGeodesic);
        }
        let (u, d) = log_direction(g, &p.coords, &q.coords);
        if d < COINCIDENT {
            return Err(Error::DegenerateTriangle);
        }
        Ok(GeodesicLine { anchor: *p, direction: u })
    }

    pub fn anchor(&self) -> &Point {
        &self.anchor
    }

    pub fn direction(&self) -> &Vec3 {
        &self.direction
    }

    pub fn geometry(&self) -> Geometry {
        self.anchor.geometry
    }

    /// Tangency residual ⟨anchor, direction⟩ in the model form.
    pub fn tangency_residual(&self) -> f64 {
        inner(self.geometry(), &self.anchor.coords, &self.direction)
    }

    /// Point at signed arclength `s` from the anchor.
    pub fn point_at(&self, s: f64) -> Point {
        let g = self.geometry();
        let v = exp_along(g, &self.anchor.coords, &self.direction, s);
        Point::radial(g, v).expect("points on a line stay on the surface")
    }

    /// Unit normal of the plane cutting out the line (curved geometries), or
    /// the unit normal direction in the plane (flat geometry).
    fn normal(&self) -> Vec3 {
        let a = self.anchor.coords;
        let d = self.direction;
        match self.geometry() {
            Geometry::Euclidean => Vec3::new(-d.y, d.x, 0.0),
            Geometry::Spherical => a.cross(&d),
            Geometry::Hyperbolic => {
                let c = a.cross(&d);
                let n = Vec3::new(c.x, c.y, -c.z);
                let q = inner(Geometry::Hyperbolic, &n, &n);
                n / q.sqrt()
            }
        }
    }

    /// The line through `p` perpendicular to this one.
    ///
    /// In the curved models the plane normal is itself a unit tangent at every
    /// point of the line, so it serves as the perpendicular direction.
    pub fn perpendicular_through(&self, p: &Point) -> Result<GeodesicLine> {
        let n = self.normal();
        match self.geometry() {
            Geometry::Euclidean => GeodesicLine::new(*p, n),
            _ => {
                let foot = self.project(p)?.foot;
                GeodesicLine::new(foot, n)
            }
        }
    }

    /// Signed model coefficient of `p` against the line normal.
    fn normal_component(&self, p: &Point) -> f64 {
        let n = self.normal();
        match self.geometry() {
            Geometry::Euclidean => (p.coords - self.anchor.coords).dot(&n),
            Geometry::Spherical => p.coords.dot(&n),
            Geometry::Hyperbolic => inner(Geometry::Hyperbolic, &p.coords, &n),
        }
    }

    /// Minimal distance from `p` to the line; `π/2` for a pole of a great circle.
    pub fn distance_to(&self, p: &Point) -> Result<f64> {
        same_space(&self.anchor, p)?;
        let s = self.normal_component(p);
        Ok(match self.geometry() {
            Geometry::Euclidean => s.abs(),
            Geometry::Spherical => {
                let n = self.normal();
                let rest = (p.coords - n * s).norm();
                s.abs().atan2(rest)
            }
            Geometry::Hyperbolic => s.abs().asinh(),
        })
    }

    /// Side of the line `p` lies on: the sign of its normal component.
    pub fn side(&self, p: &Point) -> f64 {
        self.normal_component(p)
    }

    /// Orthogonal projection of `p` onto the line.
    pub fn project(&self, p: &Point) -> Result<ProjectionResult> {
        same_space(&self.anchor, p)?;
        let g = self.geometry();
        let n = self.normal();
        let s = self.normal_component(p);
        match g {
            Geometry::Euclidean => {
                let foot = p.coords - n * s;
                Ok(ProjectionResult { foot: Point::euclidean(foot.x, foot.y), height: s.abs() })
            }
            Geometry::Spherical => {
                let raw = p.coords - n * s;
                let r = raw.norm();
                if r < SURFACE_TOL {
                    return Err(Error::PoleProjection);
                }
                Ok(ProjectionResult {
                    foot: Point { coords: raw / r, geometry: g },
                    height: s.abs().atan2(r),
                })
            }
            Geometry::Hyperbolic => {
                let raw = p.coords - n * s;
                Ok(ProjectionResult {
                    foot: Point::radial(g, raw)?,
                    height: s.abs().asinh(),
                })
            }
        }
    }

    /// Signed arclength coordinate of a point lying on the line.
    pub fn coordinate_of(&self, p: &Point) -> f64 {
        let g = self.geometry();
        let a = &self.anchor.coords;
        let d = &self.direction;
        match g {
            Geometry::Euclidean => (p.coords - a).dot(d),
            Geometry::Spherical => p.coords.dot(d).atan2(p.coords.dot(a)),
            Geometry::Hyperbolic => {
                let x = inner(g, &p.coords, d);
                x.asinh()
            }
        }
    }
}

/// Foot of the perpendicular and the height realizing it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectionResult {
    pub foot: Point,
    pub height: f64,
}

/// Convenience wrapper for [`GeodesicLine::project`].
pub fn project_to_line(p: &Point, line: &GeodesicLine) -> Result<ProjectionResult> {
    line.project(p)
}

/// Isometry sending `center` to [`Point::origin`], applied to `p`.
///
/// Used by the renderer and by constructions that are easier at the origin.
pub fn translate_to_origin(center: &Point, p: &Point) -> Result<Point> {
    let g = same_space(center, p)?;
    let v = center.coords;
    let w = p.coords;
    let out = match g {
        Geometry::Euclidean => Vec3::new(w.x - v.x, w.y - v.y, 0.0),
        Geometry::Spherical => {
            let helper = if v.z.abs() < 0.9 { Vec3::z() } else { Vec3::x() };
            let e1 = helper.cross(&v).normalize();
            let e2 = v.cross(&e1);
            Vec3::new(w.dot(&e1), w.dot(&e2), w.dot(&v))
        }
        Geometry::Hyperbolic => {
            let k = (v.x * w.x + v.y * w.y) / (v.z + 1.0) - w.z;
            Vec3::new(w.x + k * v.x, w.y + k * v.y, v.z * w.z - v.x * w.x - v.y * w.y)
        }
    };
    Point::renormalized(g, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn distance_examples() {
        let p = Point::spherical(1.0, 0.0, 0.0).unwrap();
        let q = Point::spherical(0.0, 1.0, 0.0).unwrap();
        assert!(close(distance(&p, &q).unwrap(), FRAC_PI_2, 1e-15));
        let o = Point::origin(Geometry::Hyperbolic);
        let h = Point::hyperbolic(1f64.sinh(), 0.0, 1f64.cosh()).unwrap();
        assert!(close(distance(&o, &h).unwrap(), 1.0, 1e-15));
        assert_eq!(distance(&h, &h).unwrap(), 0.0);
        assert_eq!(distance(&p, &p).unwrap(), 0.0);
    }

    #[test]
    fn mixed_spaces_rejected() {
        let p = Point::origin(Geometry::Spherical);
        let q = Point::origin(Geometry::Hyperbolic);
        assert!(matches!(distance(&p, &q), Err(Error::SpaceMismatch(..))));
        assert!(matches!(midpoint(&p, &q), Err(Error::SpaceMismatch(..))));
    }

    #[test]
    fn off_surface_rejected() {
        assert!(matches!(Point::spherical(1.0, 1.0, 0.0), Err(Error::OffSurface { .. })));
        assert!(Point::spherical(1.0 + 1e-9, 0.0, 0.0).is_ok());
        assert!(Point::hyperbolic(0.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn interpolate_examples() {
        let p = Point::euclidean(0.0, 0.0);
        let q = Point::euclidean(2.0, 0.0);
        assert_eq!(interpolate(&p, &q, 0.5).unwrap(), Point::euclidean(1.0, 0.0));
        assert_eq!(interpolate(&p, &q, 0.0).unwrap(), p);
        assert_eq!(interpolate(&p, &q, 1.0).unwrap(), q);
        let a = Point::spherical(1.0, 0.0, 0.0).unwrap();
        let b = Point::spherical(0.0, 1.0, 0.0).unwrap();
        let m = interpolate(&a, &b, 0.5).unwrap();
        assert!((m.coords() - Vec3::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        let anti = Point::spherical(-1.0, 0.0, 0.0).unwrap();
        assert_eq!(interpolate(&a, &anti, 0.3), Err(Error::NoUniqueGeodesic));
        assert_eq!(midpoint(&a, &anti), Err(Error::NoUniqueGeodesic));
    }

    #[test]
    fn midpoint_examples() {
        let p = Point::hyperbolic(1f64.sinh(), 0.0, 1f64.cosh()).unwrap();
        let q = Point::hyperbolic(-(1f64.sinh()), 0.0, 1f64.cosh()).unwrap();
        let m = midpoint(&p, &q).unwrap();
        assert!((m.coords() - Vec3::new(0.0, 0.0, 1.0)).norm() < 1e-15);
        let a = Point::spherical(1.0, 0.0, 0.0).unwrap();
        let b = Point::spherical(0.0, 1.0, 0.0).unwrap();
        let m = midpoint(&a, &b).unwrap();
        assert!((m.coords() - Vec3::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        let m = midpoint(&Point::euclidean(0.0, 0.0), &Point::euclidean(2.0, 4.0)).unwrap();
        assert_eq!(m, Point::euclidean(1.0, 2.0));
    }

    #[test]
    fn angle_examples() {
        let a = Point::spherical(1.0, 0.0, 0.0).unwrap();
        let b = Point::spherical(0.0, 1.0, 0.0).unwrap();
        let c = Point::spherical(0.0, 0.0, 1.0).unwrap();
        for (v, p, q) in [(a, b, c), (b, c, a), (c, a, b)] {
            assert!(close(angle_at(&v, &p, &q).unwrap(), FRAC_PI_2, 1e-15));
        }
        let o = Point::euclidean(0.0, 0.0);
        let angle = angle_at(&o, &Point::euclidean(1.0, 0.0), &Point::euclidean(0.0, 1.0)).unwrap();
        assert!(close(angle, FRAC_PI_2, 1e-15));
        assert_eq!(angle_at(&o, &o, &Point::euclidean(1.0, 0.0)), Err(Error::DegenerateAngle));
    }

    #[test]
    fn hyperbolic_equilateral_angle() {
        // 50-digit evaluation of the dual law of cosines for side 1.
        const ALPHA: f64 = 0.918_797_872_178_027_4;
        let g = Geometry::Hyperbolic;
        let a = Point::origin(g);
        let b = Point::from_polar(g, 1.0, 0.0);
        let c = Point::from_polar(g, 1.0, ALPHA);
        assert!(close(distance(&b, &c).unwrap(), 1.0, 1e-14));
        for (v, p, q) in [(a, b, c), (b, c, a), (c, a, b)] {
            assert!(close(angle_at(&v, &p, &q).unwrap(), ALPHA, 1e-13));
        }
    }

    #[test]
    fn projection_examples() {
        let line = GeodesicLine::new(Point::euclidean(0.0, 0.0), Vec3::new(1.0, 0.0, 0.0)).unwrap();
        let r = line.project(&Point::euclidean(1.0, 1.0)).unwrap();
        assert!((r.foot.coords() - Vec3::new(1.0, 0.0, 0.0)).norm() < 1e-15);
        assert!(close(r.height, 1.0, 1e-15));
        let on = Point::euclidean(3.0, 0.0);
        let r = line.project(&on).unwrap();
        assert_eq!(r.foot, on);
        assert_eq!(r.height, 0.0);

        let eq = GeodesicLine::through(
            &Point::spherical(1.0, 0.0, 0.0).unwrap(),
            &Point::spherical(0.0, 1.0, 0.0).unwrap(),
        )
        .unwrap();
        let pole = Point::origin(Geometry::Spherical);
        assert_eq!(eq.project(&pole), Err(Error::PoleProjection));
        assert!(close(eq.distance_to(&pole).unwrap(), FRAC_PI_2, 1e-15));
    }

    #[test]
    fn projection_on_hyperbolic_line() {
        let g = Geometry::Hyperbolic;
        let line = GeodesicLine::through(&Point::origin(g), &Point::from_polar(g, 1.0, 0.0)).unwrap();
        let p = Point::from_polar(g, 0.7, FRAC_PI_2);
        let r = line.project(&p).unwrap();
        assert!(close(r.height, 0.7, 1e-14));
        assert!(distance(&r.foot, &Point::origin(g)).unwrap() < 1e-14);
        assert!(line.tangency_residual().abs() < 1e-15);
    }

    #[test]
    fn translation_is_an_isometry() {
        for g in Geometry::ALL {
            let c = Point::from_polar(g, 0.8, 0.3);
            let p = Point::from_polar(g, 1.1, 2.0);
            let q = Point::from_polar(g, 0.4, -1.0);
            let tc = translate_to_origin(&c, &c).unwrap();
            assert!(distance(&tc, &Point::origin(g)).unwrap() < 1e-14);
            let d0 = distance(&p, &q).unwrap();
            let d1 = distance(&translate_to_origin(&c, &p).unwrap(), &translate_to_origin(&c, &q).unwrap())
                .unwrap();
            assert!(close(d0, d1, 1e-13), "{g}: {d0} vs {d1}");
        }
    }
}
