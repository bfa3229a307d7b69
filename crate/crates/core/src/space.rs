//! The three model geometries of constant curvature.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Curvature class after rescaling to κ ∈ {−1, 0, +1}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Geometry {
    #[serde(rename = "h2")]
    Hyperbolic,
    #[serde(rename = "e2")]
    Euclidean,
    #[serde(rename = "s2")]
    Spherical,
}

impl Geometry {
    pub const ALL: [Geometry; 3] = [Geometry::Hyperbolic, Geometry::Euclidean, Geometry::Spherical];

    pub fn kappa(self) -> i8 {
        match self {
            Geometry::Hyperbolic => -1,
            Geometry::Euclidean => 0,
            Geometry::Spherical => 1,
        }
    }

    pub fn is_curved(self) -> bool {
        self != Geometry::Euclidean
    }

    /// `sinh`, identity or `sin`: the generalized sine of the geometry.
    pub fn sn(self, x: f64) -> f64 {
        match self {
            Geometry::Hyperbolic => x.sinh(),
            Geometry::Euclidean => x,
            Geometry::Spherical => x.sin(),
        }
    }

    /// `cosh`, 1 or `cos`.
    pub fn cs(self, x: f64) -> f64 {
        match self {
            Geometry::Hyperbolic => x.cosh(),
            Geometry::Euclidean => 1.0,
            Geometry::Spherical => x.cos(),
        }
    }

    /// Inverse of [`Geometry::sn`] on the principal branch.
    pub fn asn(self, y: f64) -> f64 {
        match self {
            Geometry::Hyperbolic => y.asinh(),
            Geometry::Euclidean => y,
            Geometry::Spherical => y.clamp(-1.0, 1.0).asin(),
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            Geometry::Hyperbolic => "h2",
            Geometry::Euclidean => "e2",
            Geometry::Spherical => "s2",
        }
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Geometry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "h2" | "hyperbolic" | "h" => Ok(Geometry::Hyperbolic),
            "e2" | "euclidean" | "e" | "flat" => Ok(Geometry::Euclidean),
            "s2" | "spherical" | "s" | "sphere" => Ok(Geometry::Spherical),
            other => Err(Error::ConfigError(format!("unknown space `{other}`"))),
        }
    }
}

/// A surface of constant curvature, canonicalized to κ ∈ {−1, 0, +1}.
///
/// `scale` is the length unit |κ|^{-1/2} of the original metric; it is kept
/// for reporting only; all computations run at unit curvature.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Space {
    pub geometry: Geometry,
    pub scale: f64,
}

impl Space {
    /// Canonicalizes an arbitrary curvature.
    pub fn with_curvature(kappa: f64) -> Result<Self> {
        if !kappa.is_finite() {
            return Err(Error::DomainError(format!("curvature {kappa} is not finite")));
        }
        let (geometry, scale) = if kappa == 0.0 {
            (Geometry::Euclidean, 1.0)
        } else if kappa < 0.0 {
            (Geometry::Hyperbolic, (-kappa).powf(-0.5))
        } else {
            (Geometry::Spherical, kappa.powf(-0.5))
        };
        Ok(Space { geometry, scale })
    }

    pub fn unit(geometry: Geometry) -> Self {
        Space { geometry, scale: 1.0 }
    }

    pub fn hyperbolic() -> Self {
        Self::unit(Geometry::Hyperbolic)
    }

    pub fn euclidean() -> Self {
        Self::unit(Geometry::Euclidean)
    }

    pub fn spherical() -> Self {
        Self::unit(Geometry::Spherical)
    }

    pub fn kappa(&self) -> i8 {
        self.geometry.kappa()
    }

    /// Converts a length measured in the original metric to unit curvature.
    pub fn to_canonical_length(&self, length: f64) -> f64 {
        length / self.scale
    }
}

impl From<Geometry> for Space {
    fn from(g: Geometry) -> Self {
        Space::unit(g)
    }
}
