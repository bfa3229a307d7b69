//! The single-step pathologies of the subdivision in curved geometries.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{Error, Result};
use crate::kernel::{distance, GeodesicLine, Point};
use crate::mesh::subdivide_to_with_limit;
use crate::space::{Geometry, Space};
use crate::subdivision::{medial_subdivide, validate_triangle, LabeledTriangle};
use crate::trig;

/// Angles of the stretched hyperbolic isosceles triangle and its children.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stretch {
    pub alpha0: f64,
    /// `α₁` of the Central, CornerA, CornerB and CornerC children.
    pub alpha1: [f64; 4],
}

impl Stretch {
    pub fn max_alpha1(&self) -> f64 {
        self.alpha1.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_ratio(&self) -> f64 {
        self.max_alpha1() / self.alpha0
    }
}

/// Hyperbolic isosceles triangle with apex `A` at distance `apex_height`
/// from the line `BC`, and `B`, `C` at `∓half_base` from the foot of `A`.
pub fn example1_triangle(apex_height: f64, half_base: f64) -> Result<LabeledTriangle> {
    if !(apex_height > 0.0 && half_base > 0.0) {
        return Err(Error::DomainError("apex height and half base must be positive".into()));
    }
    let g = Geometry::Hyperbolic;
    let a = Point::from_polar(g, apex_height, FRAC_PI_2);
    let b = Point::from_polar(g, half_base, PI);
    let c = Point::from_polar(g, half_base, 0.0);
    validate_triangle(&a, &b, &c, Space::hyperbolic())
}

/// `α₀` and the four possible `α₁` of the stretched triangle.
pub fn example1_stretch(apex_height: f64, half_base: f64) -> Result<Stretch> {
    let t = example1_triangle(apex_height, half_base)?;
    let alpha0 = t.angles()?[0];
    let kids = medial_subdivide(&t)?;
    let mut alpha1 = [0.0; 4];
    for (slot, k) in alpha1.iter_mut().zip(&kids) {
        *slot = k.angles()?[0];
    }
    Ok(Stretch { alpha0, alpha1 })
}

/// Right isosceles spherical triangle with apex `A` at the north pole.
pub fn example3_triangle(leg: f64) -> Result<LabeledTriangle> {
    if !(leg > 0.0) || leg >= PI - 1e-9 {
        return Err(Error::DomainError(format!("leg {leg} outside (0, π)")));
    }
    let g = Geometry::Spherical;
    let a = Point::origin(g);
    let b = Point::from_polar(g, leg, 0.0);
    let c = Point::from_polar(g, leg, FRAC_PI_2);
    validate_triangle(&a, &b, &c, Space::spherical())
}

/// `(|BC|, |EF|)` for the right isosceles triangle with legs `leg`.
pub fn example3_stretch(leg: f64) -> Result<(f64, f64)> {
    let t = example3_triangle(leg)?;
    let [_, e, f] = t.midpoints()?;
    Ok((t.sides()[0], distance(&e, &f)?))
}

/// Equidistributed triple on the latitude circle at `colatitude`.
pub fn example4_triangle(colatitude: f64) -> Result<LabeledTriangle> {
    if !(colatitude > 0.0) {
        return Err(Error::DomainError("colatitude must be positive".into()));
    }
    if colatitude >= FRAC_PI_2 {
        return Err(Error::NotInOpenHemisphere);
    }
    let g = Geometry::Spherical;
    let p = |k: f64| Point::from_polar(g, colatitude, k * TAU / 3.0);
    validate_triangle(&p(0.0), &p(1.0), &p(2.0), Space::spherical())
}

/// What `T_N` of the near-equator triangle looks like.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NearEquator {
    /// Largest distance from a sampled edge point of `T_N` to the sides of `T₀`.
    pub max_deviation: f64,
    /// Largest distance between two vertices of `T_N`.
    pub diameter: f64,
    /// Largest side of a single triangle of `T_N`.
    pub mesh_diameter: f64,
}

/// Samples per edge used for [`NearEquator::max_deviation`].
pub const EDGE_SAMPLES: usize = 16;

/// Distance from `p` to the geodesic segment `qr`.
fn distance_to_segment(p: &Point, q: &Point, r: &Point) -> Result<f64> {
    let ends = distance(p, q)?.min(distance(p, r)?);
    let line = GeodesicLine::through(q, r)?;
    let Ok(foot) = line.project(p) else { return Ok(ends) };
    let s = line.coordinate_of(&foot.foot);
    if (0.0..=distance(q, r)?).contains(&s) {
        Ok(foot.height.min(ends))
    } else {
        Ok(ends)
    }
}

pub fn example4_near_equator(colatitude: f64, n: usize) -> Result<NearEquator> {
    let t0 = example4_triangle(colatitude)?;
    let level = subdivide_to_with_limit(&t0, n, n)?;
    let sides: Vec<_> = (0..3).map(|i| (t0.vertices()[(i + 1) % 3], t0.vertices()[(i + 2) % 3])).collect();
    let mut max_deviation: f64 = 0.0;
    for (p, q) in level.edge_incidence().keys() {
        let (p, q) = (&level.vertices()[*p as usize], &level.vertices()[*q as usize]);
        let line = GeodesicLine::through(p, q)?;
        let len = distance(p, q)?;
        for k in 0..=EDGE_SAMPLES {
            let x = line.point_at(len * k as f64 / EDGE_SAMPLES as f64);
            let mut best = f64::INFINITY;
            for (a, b) in &sides {
                best = best.min(distance_to_segment(&x, a, b)?);
            }
            max_deviation = max_deviation.max(best);
        }
    }
    let v = level.vertices();
    let mut diameter: f64 = 0.0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            diameter = diameter.max(distance(&v[i], &v[j])?);
        }
    }
    let mesh_diameter = level.triangles().iter().map(LabeledTriangle::max_side).fold(0.0, f64::max);
    Ok(NearEquator { max_deviation, diameter, mesh_diameter })
}

/// A colatitude whose `T_N` stays within `eps` of the sides of `T₀`,
/// found by halving the gap to the equator.
pub fn example4_search(eps: f64, n: usize) -> Result<(f64, NearEquator)> {
    let mut gap = 0.5;
    for _ in 0..60 {
        let colatitude = FRAC_PI_2 - gap;
        let r = example4_near_equator(colatitude, n)?;
        if r.max_deviation < eps {
            return Ok((colatitude, r));
        }
        gap /= 2.0;
    }
    Err(Error::DomainError(format!("no colatitude reaches deviation {eps} at depth {n}")))
}

/// A serializable record of one example run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExampleRecord {
    pub example: u8,
    pub parameters: Value,
    pub outputs: Value,
    pub assertions: Vec<Assertion>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub margin: f64,
}

fn check(name: &str, margin: f64) -> Assertion {
    Assertion { name: name.into(), passed: margin > 0.0, margin }
}

impl ExampleRecord {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }
}

/// Record of the stretched isosceles triangle at the given parameters.
pub fn example1_record(apex_height: f64, half_base: f64) -> Result<ExampleRecord> {
    let s = example1_stretch(apex_height, half_base)?;
    Ok(ExampleRecord {
        example: 1,
        parameters: json!({ "apex_height": apex_height, "half_base": half_base }),
        outputs: json!({ "alpha0": s.alpha0, "alpha1": s.alpha1, "max_ratio": s.max_ratio() }),
        assertions: vec![
            check("max alpha1 > pi - 0.1", s.max_alpha1() - (PI - 0.1)),
            check("alpha0 < 0.1", 0.1 - s.alpha0),
            check("alpha1 / alpha0 > 100", s.max_ratio() - 100.0),
        ],
    })
}

/// The isosceles angle comparison `β′` vs `β`, decided by `u` vs `h`.
pub fn example2_record(half_base: f64, half_leg: f64, g: Geometry) -> Result<ExampleRecord> {
    let s = trig::isosceles_apex_angles(half_base, half_leg, g)?;
    // In H² the angle shrinks exactly when u > h; on S² the comparison flips.
    let predicted_shrink = match g {
        Geometry::Hyperbolic => s.u > s.h,
        Geometry::Spherical => s.u < s.h,
        Geometry::Euclidean => false,
    };
    let observed_shrink = s.beta_prime < s.beta;
    let consistent = g == Geometry::Euclidean || predicted_shrink == observed_shrink;
    Ok(ExampleRecord {
        example: 2,
        parameters: json!({ "half_base": half_base, "half_leg": half_leg, "space": g }),
        outputs: json!({ "beta": s.beta, "beta_prime": s.beta_prime, "u": s.u, "h": s.h }),
        assertions: vec![Assertion { name: "criterion u vs h".into(), passed: consistent, margin: (s.u - s.h).abs() }],
    })
}

pub fn example3_record(leg: f64) -> Result<ExampleRecord> {
    let (bc, ef) = example3_stretch(leg)?;
    Ok(ExampleRecord {
        example: 3,
        parameters: json!({ "leg": leg }),
        outputs: json!({ "bc": bc, "ef": ef, "ratio": ef / bc }),
        assertions: vec![
            check("|EF| > pi/2 - 0.02", ef - (FRAC_PI_2 - 0.02)),
            check("|EF| / |BC| > 10", ef / bc - 10.0),
        ],
    })
}

pub fn example4_record(eps: f64, n: usize) -> Result<ExampleRecord> {
    let (colatitude, r) = example4_search(eps, n)?;
    Ok(ExampleRecord {
        example: 4,
        parameters: json!({ "eps": eps, "depth": n }),
        outputs: json!({
            "colatitude": colatitude,
            "max_deviation": r.max_deviation,
            "diameter": r.diameter,
            "mesh_diameter": r.mesh_diameter,
        }),
        assertions: vec![
            check("max deviation < eps", eps - r.max_deviation),
            check("diameter > pi/2", r.diameter - FRAC_PI_2),
            check("mesh diameter > pi/2", r.mesh_diameter - FRAC_PI_2),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example1_witness() {
        let s = example1_stretch(5.0, 8.0).unwrap();
        assert!(s.alpha0 < 0.1);
        assert!(s.max_alpha1() > PI - 0.1);
        assert!(s.max_ratio() > 100.0);
        assert!(example1_record(5.0, 8.0).unwrap().passed());
        // At half base 5 the best child only reaches a right angle.
        assert!((example1_stretch(5.0, 5.0).unwrap().max_alpha1() - FRAC_PI_2).abs() < 1e-3);
        assert!(matches!(example1_stretch(0.0, 1.0), Err(Error::DomainError(_))));
    }

    #[test]
    fn example1_grows_with_half_base() {
        let mut prev = 0.0;
        for hb in [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0] {
            let m = example1_stretch(5.0, hb).unwrap().max_alpha1();
            assert!(m > prev, "half base {hb}: {m} <= {prev}");
            prev = m;
        }
    }

    #[test]
    fn example3_near_antipodal_leg() {
        let r = example3_record(PI - 0.01).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn example4_near_equator_witness() {
        let r = example4_record(0.2, 3).unwrap();
        assert!(r.passed(), "{r:?}");
        // Close to the equator the deviation shrinks as the colatitude grows.
        let devs: Vec<f64> = [1.5, 1.55, 1.565]
            .iter()
            .map(|&c| example4_near_equator(c, 3).unwrap().max_deviation)
            .collect();
        assert!(devs.windows(2).all(|w| w[1] < w[0]), "{devs:?}");
    }

    #[test]
    fn example1_small_is_euclidean() {
        let s = example1_stretch(1e-4, 1e-4).unwrap();
        for a in s.alpha1 {
            assert!((a / s.alpha0 - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn example3_right_angle_leg() {
        let (bc, ef) = example3_stretch(FRAC_PI_2).unwrap();
        assert!((bc - FRAC_PI_2).abs() < 1e-14);
        // cos|EF| = cos²(π/4)
        assert!((ef - 0.5f64.acos()).abs() < 1e-14);
        assert!(matches!(example3_stretch(PI), Err(Error::DomainError(_))));
    }

    #[test]
    fn example4_rejects_equator() {
        assert_eq!(example4_near_equator(FRAC_PI_2, 1), Err(Error::NotInOpenHemisphere));
    }
}
