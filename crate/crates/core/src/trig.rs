//! Closed-form trigonometry of the three geometries.
//!
//! Every law is written once against the generalized pair (`sn`, `cs`) of the
//! geometry (`sinh`/`cosh`, identity/1, `sin`/`cos`). These formulas never
//! touch model coordinates, which makes them an independent check on
//! [`crate::kernel`].

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::space::Geometry;

/// Angle opposite `a` in the triangle with sides `a`, `b`, `c`.
///
/// Uses the half-angle form `tan²(α/2) = sn(s−b)·sn(s−c) / (sn(s)·sn(s−a))`,
/// which stays accurate for needle-like and tiny triangles.
pub fn law_of_cosines_angle(a: f64, b: f64, c: f64, g: Geometry) -> Result<f64> {
    let s = 0.5 * (a + b + c);
    let (sa, sb, sc) = (s - a, s - b, s - c);
    let valid = a > 0.0 && b > 0.0 && c > 0.0 && sa > 0.0 && sb > 0.0 && sc > 0.0;
    if !valid || (g == Geometry::Spherical && s >= PI) {
        return Err(Error::NotATriangle(a, b, c));
    }
    let num = g.sn(sb) * g.sn(sc);
    let den = g.sn(s) * g.sn(sa);
    Ok(2.0 * num.sqrt().atan2(den.sqrt()))
}

/// Side opposite the angle `gamma` enclosed by sides `a` and `b`.
pub fn law_of_cosines_side(a: f64, b: f64, gamma: f64, g: Geometry) -> f64 {
    // Haversine form: sn²(c/2) = sn²((a−b)/2) + sn(a)·sn(b)·sin²(γ/2).
    let d = g.sn(0.5 * (a - b));
    let sg = (0.5 * gamma).sin();
    let r = (d * d + g.sn(a) * g.sn(b) * sg * sg).max(0.0).sqrt();
    2.0 * g.asn(r)
}

/// Hypotenuse of a right triangle with the given legs.
pub fn right_hypotenuse(leg1: f64, leg2: f64, g: Geometry) -> f64 {
    law_of_cosines_side(leg1, leg2, FRAC_PI_2, g)
}

/// Side `|X′Y′|` of a Lambert quadrilateral `XYY′X′` (right angles at `X`,
/// `Y`, `X′`, apex `Y′`) with base `|XY|` and leg `|YY′|`:
/// `sn|X′Y′| = sn|XY| · cs|YY′|`.
pub fn lambert_summit(base: f64, leg: f64, g: Geometry) -> Result<f64> {
    if !(base >= 0.0) || !(leg >= 0.0) {
        return Err(Error::DomainError(format!("lambert lengths must be non-negative: {base}, {leg}")));
    }
    match g {
        Geometry::Hyperbolic => Ok((base.sinh() * leg.cosh()).asinh()),
        Geometry::Euclidean => Ok(base),
        Geometry::Spherical => {
            if base >= FRAC_PI_2 || leg >= FRAC_PI_2 {
                return Err(Error::DomainError(format!(
                    "spherical lambert lengths must be below pi/2: {base}, {leg}"
                )));
            }
            let s = base.sin() * leg.cos();
            if s > 1.0 {
                return Err(Error::DomainError("sin(base)·cos(leg) exceeds 1".into()));
            }
            Ok(s.asin())
        }
    }
}

/// The single-step angle comparison of an isosceles triangle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsoscelesStep {
    /// Base angle of the triangle.
    pub beta: f64,
    /// Corresponding angle of the central child, at the midpoint of a leg.
    pub beta_prime: f64,
    /// Half-medial length: distance from the base midpoint to a leg midpoint.
    pub u: f64,
    /// Height from the apex to the base.
    pub h: f64,
    /// Half of the apex angle.
    pub alpha: f64,
    /// Angle at the base midpoint between the median and the half-medial segment.
    pub alpha_prime: f64,
}

/// Base angle `β` and the central-child angle `β′` of the isosceles triangle
/// with base `2·half_base` and legs `2·half_leg`.
///
/// With `D` the base midpoint, `E` a leg midpoint and `A` the apex:
/// `tan α′ = sin α / sin β`, `cot β′ · cot α′ = cs(u)`, `cos β = sin α · cs(h)`.
pub fn isosceles_apex_angles(half_base: f64, half_leg: f64, g: Geometry) -> Result<IsoscelesStep> {
    let (base, leg) = (2.0 * half_base, 2.0 * half_leg);
    let realizable = half_base > 0.0 && half_leg > 0.0 && base < 2.0 * leg;
    if !realizable || (g == Geometry::Spherical && leg >= FRAC_PI_2) {
        return Err(Error::NotATriangle(base, leg, leg));
    }
    // Right triangle D-C-A: legs half_base and h, hypotenuse `leg`.
    let h = match g {
        Geometry::Hyperbolic => (leg.cosh() / half_base.cosh()).acosh(),
        Geometry::Euclidean => (leg * leg - half_base * half_base).sqrt(),
        Geometry::Spherical => (leg.cos() / half_base.cos()).clamp(-1.0, 1.0).acos(),
    };
    let (sin_alpha, cos_beta) = match g {
        Geometry::Hyperbolic => (half_base.sinh() / leg.sinh(), half_base.tanh() / leg.tanh()),
        Geometry::Euclidean => (half_base / leg, half_base / leg),
        Geometry::Spherical => (half_base.sin() / leg.sin(), half_base.tan() / leg.tan()),
    };
    let alpha = sin_alpha.clamp(-1.0, 1.0).asin();
    let beta = cos_beta.clamp(-1.0, 1.0).acos();
    // Triangle D-C-E: sides half_base, half_leg with angle beta at C.
    let u = law_of_cosines_side(half_base, half_leg, beta, g);
    let alpha_prime = alpha.sin().atan2(beta.sin());
    let beta_prime = 1f64.atan2(g.cs(u) * alpha_prime.tan());
    Ok(IsoscelesStep { beta, beta_prime, u, h, alpha, alpha_prime })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{angle_at, distance, midpoint, Point};
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_6};

    #[test]
    fn law_of_cosines_examples() {
        let s = law_of_cosines_angle(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2, Geometry::Spherical).unwrap();
        assert!((s - FRAC_PI_2).abs() < 1e-15);
        let e = law_of_cosines_angle(1.3, 1.3, 1.3, Geometry::Euclidean).unwrap();
        assert!((e - FRAC_PI_3).abs() < 1e-15);
        // 50-digit value of arccos(cosh 1 / (cosh 1 + 1)).
        let h = law_of_cosines_angle(1.0, 1.0, 1.0, Geometry::Hyperbolic).unwrap();
        assert!((h - 0.918_797_872_178_027_4).abs() < 1e-15);
    }

    #[test]
    fn violated_triangle_inequality() {
        for g in Geometry::ALL {
            assert!(matches!(law_of_cosines_angle(3.0, 1.0, 1.0, g), Err(Error::NotATriangle(..))));
        }
        assert!(law_of_cosines_angle(2.5, 2.5, 2.5, Geometry::Spherical).is_err());
    }

    #[test]
    fn side_and_angle_round_trip() {
        for g in Geometry::ALL {
            let (b, c, alpha) = (0.7, 1.1, 1.9);
            let a = law_of_cosines_side(b, c, alpha, g);
            let back = law_of_cosines_angle(a, b, c, g).unwrap();
            assert!((back - alpha).abs() < 1e-13, "{g}: {back} vs {alpha}");
        }
    }

    #[test]
    fn lambert_examples() {
        assert_eq!(lambert_summit(0.0, 0.4, Geometry::Hyperbolic).unwrap(), 0.0);
        let h = lambert_summit(1.0, 1.0, Geometry::Hyperbolic).unwrap();
        assert!((h - (1f64.sinh() * 1f64.cosh()).asinh()).abs() < 1e-15);
        assert!((h - 1.356_944_490_074_306_5).abs() < 1e-15);
        let s = lambert_summit(FRAC_PI_6, FRAC_PI_3, Geometry::Spherical).unwrap();
        assert!((s - 0.25f64.asin()).abs() < 1e-15);
        assert!(matches!(lambert_summit(1.0, 1.6, Geometry::Spherical), Err(Error::DomainError(_))));
    }

    #[test]
    fn lambert_monotonicity() {
        for &(b, l) in &[(0.2, 0.3), (1.0, 0.5), (1.4, 1.2)] {
            assert!(lambert_summit(b, l, Geometry::Hyperbolic).unwrap() > b);
            assert!(lambert_summit(b, l, Geometry::Spherical).unwrap() < b);
        }
    }

    #[test]
    fn pythagoras_reduces_from_cosine_rule() {
        // cos|D'C| = cos|CC'|·cos|D'C'|
        let (p, q) = (0.4, 0.9);
        let c = right_hypotenuse(p, q, Geometry::Spherical);
        assert!((c.cos() - p.cos() * q.cos()).abs() < 1e-15);
        let c = right_hypotenuse(p, q, Geometry::Hyperbolic);
        assert!((c.cosh() - p.cosh() * q.cosh()).abs() < 1e-14);
    }

    /// Builds the isosceles triangle in the model and measures β′ directly.
    fn constructed_beta_prime(half_base: f64, half_leg: f64, g: Geometry) -> (f64, f64) {
        let step = isosceles_apex_angles(half_base, half_leg, g).unwrap();
        let d = Point::origin(g);
        let b = Point::from_polar(g, half_base, PI);
        let c = Point::from_polar(g, half_base, 0.0);
        let a = Point::from_polar(g, step.h, FRAC_PI_2);
        assert!((distance(&a, &c).unwrap() - 2.0 * half_leg).abs() < 1e-12);
        let e = midpoint(&c, &a).unwrap();
        let f = midpoint(&a, &b).unwrap();
        (angle_at(&c, &a, &b).unwrap(), angle_at(&e, &d, &f).unwrap())
    }

    #[test]
    fn isosceles_closed_form_matches_construction() {
        for g in Geometry::ALL {
            for &(hb, hl) in &[(0.3, 0.5), (0.7, 0.75), (0.2, 0.35), (0.6, 0.7), (0.58, 0.3)] {
                let step = isosceles_apex_angles(hb, hl, g).unwrap();
                let (beta, beta_prime) = constructed_beta_prime(hb, hl, g);
                assert!((step.beta - beta).abs() < 1e-12, "{g} beta");
                assert!((step.beta_prime - beta_prime).abs() < 1e-9, "{g} beta'");
                // cos β = sin α · cs(h)
                assert!((step.beta.cos() - step.alpha.sin() * g.cs(step.h)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn isosceles_angle_criterion() {
        // Wide triangle: u > h, the angle shrinks in H² and grows on S².
        let wide = isosceles_apex_angles(1.2, 0.7, Geometry::Hyperbolic).unwrap();
        assert!(wide.u > wide.h);
        assert!(wide.beta_prime < wide.beta);
        // Tall triangle: u < h, the angle grows in H².
        let tall = isosceles_apex_angles(0.3, 1.2, Geometry::Hyperbolic).unwrap();
        assert!(tall.u < tall.h);
        assert!(tall.beta_prime > tall.beta);
        // On the sphere the comparison is reversed.
        let s_wide = isosceles_apex_angles(0.58, 0.3, Geometry::Spherical).unwrap();
        assert!(s_wide.u > s_wide.h && s_wide.beta_prime > s_wide.beta);
        let s_tall = isosceles_apex_angles(0.5, 0.3, Geometry::Spherical).unwrap();
        assert!(s_tall.u < s_tall.h && s_tall.beta_prime < s_tall.beta);
        let s_tall = isosceles_apex_angles(0.1, 0.7, Geometry::Spherical).unwrap();
        assert!(s_tall.u < s_tall.h && s_tall.beta_prime < s_tall.beta);
        let e = isosceles_apex_angles(0.5, 0.4, Geometry::Euclidean).unwrap();
        assert!((e.beta_prime - e.beta).abs() < 1e-14);
    }

    #[test]
    fn unrealizable_isosceles() {
        assert!(isosceles_apex_angles(1.0, 0.4, Geometry::Hyperbolic).is_err());
        assert!(isosceles_apex_angles(0.1, 0.9, Geometry::Spherical).is_err());
    }
}
