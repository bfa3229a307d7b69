//! Bound constants for lengths, heights and angles along nested sequences.
//!
//! For a seed triangle `t₀` every nested sequence satisfies, per side and vertex,
//!
//! ```text
//! s₀·l_s ≤ 2ⁿ·s_n ≤ s₀·L_s      (sides a, b, c)
//! h₀·l_h ≤ 2ⁿ·h_n ≤ h₀·L_h      (heights from A, B, C)
//! α₀·l_α < α_n < α₀·L_α          (angles α, β, γ)
//! ```
//!
//! Constants are indexed by role: `[a, b, c]` for sides and `[A, B, C]` for
//! heights and angles. The height and side formulas for vertex `B` (resp. `C`)
//! are those of vertex `A` applied to the relabeled triangle `(B, C, A)`
//! (resp. `(C, A, B)`).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

use crate::error::{Error, Result};
use crate::space::Geometry;
use crate::subdivision::{medial_subdivide, ChildIndex, LabeledTriangle};

/// Depth up to which [`spherical_decay_constants`] enumerates all children.
pub const EXHAUSTIVE_DEPTH: usize = 8;
/// Default probe depth for the spherical decay constants.
pub const DEFAULT_PROBE_DEPTH: usize = 12;
const C_HEADROOM: f64 = 1e-6;

/// A two-sided multiplicative bound `lower ≤ x/x₀ ≤ upper`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sandwich {
    pub lower: f64,
    pub upper: f64,
}

impl Sandwich {
    pub const ONE: Sandwich = Sandwich { lower: 1.0, upper: 1.0 };

    pub fn new(lower: f64, upper: f64) -> Self {
        Sandwich { lower, upper }
    }
}

/// Empirical decay constants of a spherical seed.
///
/// `c` and `n` certify `a_{k+1} ≤ c·a_k/2` at every probed step, with all
/// sides below `π/3` from step `n` on. The remaining fields are the worst
/// partial sums over the first `n` steps.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayConstants {
    pub c: f64,
    pub n: usize,
    /// Largest `Σ_{i<n} ln(2 sin(s_{i+1}/2) / sin(s_i/2))` over probed paths and sides.
    pub c_n: f64,
    /// Largest `Σ_{i<n} ln(2 sin h_{i+1} / sin h_i)` over probed paths and vertices.
    pub c_n_prime: f64,
    /// Smallest `Π_{i<n} 2 sin h_{i+1} / sin h_i` over probed paths and vertices.
    pub height_product_floor: f64,
    /// Largest observed `2 s_{k+1}/s_k` before headroom.
    pub max_ratio: f64,
    pub probe_depth: usize,
}

/// Every constant of the three sandwiches for one seed triangle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    pub geometry: Geometry,
    /// `[(l_a, L_a), (l_b, L_b), (l_c, L_c)]`.
    pub lengths: [Sandwich; 3],
    /// Height constants for the heights from `A`, `B`, `C`.
    pub heights: [Sandwich; 3],
    /// Sine-level constants: `l′ ≤ sin α_n / sin α₀ ≤ L′`.
    pub sines: [Sandwich; 3],
    /// `[(l_α, L_α), (l_β, L_β), (l_γ, L_γ)]`.
    pub angles: [Sandwich; 3],
    /// Non-positive when the constants do not certify any angle gap.
    pub delta: f64,
    pub decay: Option<DecayConstants>,
    /// Height correction terms at `n = 0`, per vertex.
    pub eps0: [f64; 3],
    /// `1 − sn(s₀ l_s)/(l_s sn(s₀))` for the side adjacent to each angle.
    pub eps0_prime: [f64; 3],
}

impl BoundConstants {
    pub fn l_a(&self) -> f64 {
        self.lengths[0].lower
    }

    pub fn big_l_a(&self) -> f64 {
        self.lengths[0].upper
    }

    pub fn l_h(&self) -> f64 {
        self.heights[0].lower
    }

    pub fn big_l_h(&self) -> f64 {
        self.heights[0].upper
    }
}

fn check_geometry(t: &LabeledTriangle, expected: Geometry) -> Result<()> {
    if t.geometry() != expected {
        return Err(Error::GeometryMismatch { expected, found: t.geometry() });
    }
    Ok(())
}

/// Side roles `(a, b, c)` seen from vertex `i`: the opposite side, the next, the previous.
fn roles(sides: [f64; 3], i: usize) -> (f64, f64, f64) {
    (sides[i], sides[(i + 1) % 3], sides[(i + 2) % 3])
}

/// `e^{−b₀/2}`.
pub fn hyperbolic_l(b0: f64) -> Result<f64> {
    if !(b0 > 0.0) || !b0.is_finite() {
        return Err(Error::DegenerateTriangle);
    }
    Ok((-b0 / 2.0).exp())
}

/// `[l_a, l_b, l_c]` of a hyperbolic seed: `l_a = e^{−b₀/2}` and cyclically.
pub fn hyperbolic_length_constant(t0: &LabeledTriangle) -> Result<[f64; 3]> {
    check_geometry(t0, Geometry::Hyperbolic)?;
    let s = t0.sides();
    Ok([hyperbolic_l(s[1])?, hyperbolic_l(s[2])?, hyperbolic_l(s[0])?])
}

/// `ε₀ = (sinh h₀ − h₀)/sinh h₀`.
pub fn hyperbolic_eps(h0: f64) -> f64 {
    (h0.sinh() - h0) / h0.sinh()
}

/// Largest height a hyperbolic descendant can have at the vertex with
/// adjacent sides `b, c`. Past step 0 sides are at most half their seed
/// value, and a height is shorter than both adjacent sides.
fn hyperbolic_height_cap(h0: f64, l_h: f64, b: f64, c: f64) -> f64 {
    h0.max((h0 * l_h / 2.0).min(b.min(c) / 2.0))
}

/// `(l_h, L_h)` per vertex of a hyperbolic seed.
///
/// `L_h = (sinh h₀/h₀)·e^{b₀/2 + 2a₀}`. For the lower bound each step
/// multiplies `sinh h` by at least `1/(cosh(b_k/2) cosh(c_k/2))`, and
/// `ln cosh x ≤ x²/2`, so `2ⁿ sinh h_n ≥ sinh h₀ · e^{−(b₀² + c₀²)/6}`;
/// converting back to `h_n` costs `(1 − ε)` evaluated at the largest
/// height a descendant can have.
pub fn hyperbolic_height_constants(t0: &LabeledTriangle) -> Result<[Sandwich; 3]> {
    check_geometry(t0, Geometry::Hyperbolic)?;
    let h = t0.heights()?;
    let sides = t0.sides();
    Ok(std::array::from_fn(|i| {
        let (a, b, c) = roles(sides, i);
        let h0 = h[i];
        let upper = h0.sinh() / h0 * (b / 2.0 + 2.0 * a).exp();
        let h_max = hyperbolic_height_cap(h0, upper, b, c);
        let lower = (-(b * b + c * c) / 6.0).exp() * h0.sinh() / h0 * (1.0 - hyperbolic_eps(h_max));
        Sandwich::new(lower, upper)
    }))
}

#[derive(Clone, Copy)]
struct ProbeNode {
    t: LabeledTriangle,
    heights: [f64; 3],
    length_sum: f64,
    height_sum_max: f64,
    height_sum_min: f64,
}

#[derive(Clone, Copy, Debug)]
struct DepthStats {
    max_ratio: f64,
    max_side: f64,
    max_length_sum: f64,
    max_height_sum: f64,
    min_height_sum: f64,
}

impl DepthStats {
    const EMPTY: DepthStats = DepthStats {
        max_ratio: 0.0,
        max_side: 0.0,
        max_length_sum: f64::NEG_INFINITY,
        max_height_sum: f64::NEG_INFINITY,
        min_height_sum: f64::INFINITY,
    };

    fn merge(self, o: DepthStats) -> DepthStats {
        DepthStats {
            max_ratio: self.max_ratio.max(o.max_ratio),
            max_side: self.max_side.max(o.max_side),
            max_length_sum: self.max_length_sum.max(o.max_length_sum),
            max_height_sum: self.max_height_sum.max(o.max_height_sum),
            min_height_sum: self.min_height_sum.min(o.min_height_sum),
        }
    }

    fn of_node(n: &ProbeNode) -> DepthStats {
        DepthStats {
            max_ratio: 0.0,
            max_side: n.t.max_side(),
            max_length_sum: n.length_sum,
            max_height_sum: n.height_sum_max,
            min_height_sum: n.height_sum_min,
        }
    }
}

impl ProbeNode {
    fn root(t: LabeledTriangle) -> Result<Self> {
        Ok(ProbeNode { t, heights: t.heights()?, length_sum: 0.0, height_sum_max: 0.0, height_sum_min: 0.0 })
    }

    /// The child, and the largest `2s'/s` over its three sides.
    fn child(&self, c: LabeledTriangle) -> Result<(ProbeNode, f64)> {
        let g = c.geometry();
        let heights = c.heights()?;
        let (ps, cs) = (self.t.sides(), c.sides());
        let mut ratio = 0f64;
        let mut length_step = f64::NEG_INFINITY;
        let mut h_hi = f64::NEG_INFINITY;
        let mut h_lo = f64::INFINITY;
        for i in 0..3 {
            ratio = ratio.max(2.0 * cs[i] / ps[i]);
            length_step = length_step.max((2.0 * g.sn(cs[i] / 2.0) / g.sn(ps[i] / 2.0)).ln());
            let hs = (2.0 * g.sn(heights[i]) / g.sn(self.heights[i])).ln();
            h_hi = h_hi.max(hs);
            h_lo = h_lo.min(hs);
        }
        let node = ProbeNode {
            t: c,
            heights,
            length_sum: self.length_sum + length_step,
            height_sum_max: self.height_sum_max + h_hi,
            height_sum_min: self.height_sum_min + h_lo,
        };
        Ok((node, ratio))
    }
}

/// Per-depth statistics of the probe: index `k` describes the triangles at
/// depth `k` and the steps leading into them.
fn probe(t0: &LabeledTriangle, probe_depth: usize) -> Result<Vec<DepthStats>> {
    let root = ProbeNode::root(*t0)?;
    let mut stats = vec![DepthStats::of_node(&root)];
    let mut frontier = vec![root];
    let exhaustive = probe_depth.min(EXHAUSTIVE_DEPTH);
    for _ in 0..exhaustive {
        let next: Vec<(ProbeNode, f64)> = frontier
            .par_iter()
            .map(|node| {
                let kids = medial_subdivide(&node.t)?;
                kids.iter().map(|k| node.child(*k)).collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        let s = next
            .par_iter()
            .map(|(n, r)| DepthStats { max_ratio: *r, ..DepthStats::of_node(n) })
            .reduce(|| DepthStats::EMPTY, DepthStats::merge);
        stats.push(s);
        frontier = next.into_iter().map(|(n, _)| n).collect();
    }
    if probe_depth > exhaustive {
        let extra = probe_depth - exhaustive;
        let tails = frontier
            .par_iter()
            .map(|start| {
                let mut out = Vec::with_capacity(extra);
                let mut node = *start;
                for _ in 0..extra {
                    let kid = crate::subdivision::child(&node.t, ChildIndex::Central)?;
                    let (n, r) = node.child(kid)?;
                    out.push(DepthStats { max_ratio: r, ..DepthStats::of_node(&n) });
                    node = n;
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        for k in 0..extra {
            stats.push(tails.iter().map(|t| t[k]).fold(DepthStats::EMPTY, DepthStats::merge));
        }
    }
    Ok(stats)
}

/// Decay constants certified by the probe for a given `N`, if any.
fn decay_at(stats: &[DepthStats], n: usize, probe_depth: usize) -> Option<DecayConstants> {
    // Sides never grow, so `ε_k ≤ ε₀` along every probed path.
    if stats.iter().skip(1).any(|s| !(s.max_ratio < 2.0)) {
        return None;
    }
    if n >= stats.len() || stats[n..].iter().any(|s| !(s.max_side < FRAC_PI_3)) {
        return None;
    }
    let max_ratio = stats[n + 1..].iter().map(|s| s.max_ratio).fold(0.0, f64::max);
    let c = max_ratio.max(1.0) * (1.0 + C_HEADROOM);
    if !(c < 2.0) {
        return None;
    }
    let (c_n, c_n_prime, floor) = if n == 0 {
        (0.0, 0.0, 1.0)
    } else {
        (stats[n].max_length_sum, stats[n].max_height_sum, stats[n].min_height_sum.exp())
    };
    Some(DecayConstants { c, n, c_n, c_n_prime, height_product_floor: floor, max_ratio, probe_depth })
}

/// `(C, N, C_N, C′_N)` of a spherical seed, found by probing.
///
/// All children are enumerated to depth [`EXHAUSTIVE_DEPTH`], after which
/// every branch continues through central children to `probe_depth`. `N` is
/// the first depth from which every probed side stays below `π/3`, and `C`
/// the largest observed `2s_{k+1}/s_k` after step `N` (at least 1), with a
/// small headroom.
pub fn spherical_decay_constants(t0: &LabeledTriangle, probe_depth: usize) -> Result<DecayConstants> {
    check_geometry(t0, Geometry::Spherical)?;
    let stats = probe(t0, probe_depth)?;
    (0..stats.len().saturating_sub(1))
        .find_map(|n| decay_at(&stats, n, probe_depth))
        .ok_or(Error::ProbeInconclusive(probe_depth))
}

/// `s₀ (C/2)^N / (2 − C)`. Bounds `Σ_{i≥N} s_{i+1}/2`, and half of `Σ_{i≥N} s_i`.
fn geometric_tail(s0: f64, d: &DecayConstants) -> f64 {
    s0 * (d.c / 2.0).powi(d.n as i32) / (2.0 - d.c)
}

fn spherical_lengths(t0: &LabeledTriangle, d: &DecayConstants) -> [Sandwich; 3] {
    t0.sides().map(|s0| {
        let eps = s0 / s0.sin() - 1.0;
        Sandwich::new(1.0, (1.0 + eps) * (geometric_tail(s0, d) + d.c_n).exp())
    })
}

/// Height constants on S². Past step `N` every step multiplies `sin h` by a
/// factor in `[cos c_{k+1} cos²(a_k/2), 1/(cos(b_k/2) cos c_{k+1})]`.
fn spherical_heights(t0: &LabeledTriangle, d: &DecayConstants) -> Result<[Sandwich; 3]> {
    let h = t0.heights()?;
    let sides = t0.sides();
    Ok(std::array::from_fn(|i| {
        let (a, b, c) = roles(sides, i);
        let h0 = h[i];
        let growth = (geometric_tail(b, d) + 2.0 * geometric_tail(c, d) + d.c_n_prime).exp();
        // `2ⁿh_n ≤ (h_n / sin h_n)·2ⁿ sin h_n`, with `h_n` at most `h_max` for n ≥ 1.
        let mut h_max = h0;
        let mut upper = h0 / h0.sin() * growth;
        for _ in 0..32 {
            let next = h0 * (upper / 2.0).max(1.0);
            if next >= FRAC_PI_2 || next <= h_max {
                break;
            }
            h_max = next;
            upper = h_max / h_max.sin() * growth;
        }
        let lower = h0.sin() / h0 * d.height_product_floor * (-2.0 * (geometric_tail(c, d) + geometric_tail(a, d))).exp();
        Sandwich::new(lower, upper)
    }))
}

/// Sum of `ln` of the multiplicative spread of all constants; smaller is tighter.
fn spread(lengths: &[Sandwich; 3], heights: &[Sandwich; 3]) -> f64 {
    lengths.iter().chain(heights).map(|s| (s.upper / s.lower).ln()).sum()
}

/// The admissible `N` giving the tightest constants.
///
/// Any `N` certified by the probe is valid; a larger `N` trades the
/// geometric tail for the observed partial sums.
fn spherical_constants(t0: &LabeledTriangle, probe_depth: usize) -> Result<(DecayConstants, [Sandwich; 3], [Sandwich; 3])> {
    let stats = probe(t0, probe_depth)?;
    let last = EXHAUSTIVE_DEPTH.min(stats.len().saturating_sub(2));
    let mut best: Option<(f64, DecayConstants, [Sandwich; 3], [Sandwich; 3])> = None;
    for n in 0..=last {
        let Some(d) = decay_at(&stats, n, probe_depth) else { continue };
        let lengths = spherical_lengths(t0, &d);
        let heights = spherical_heights(t0, &d)?;
        let score = spread(&lengths, &heights);
        if best.as_ref().is_none_or(|b| score < b.0) {
            best = Some((score, d, lengths, heights));
        }
    }
    best.map(|(_, d, l, h)| (d, l, h)).ok_or(Error::ProbeInconclusive(probe_depth))
}

/// Sine-level angle constants from the side and height sandwiches.
///
/// `sin α = sn(h_C)/sn(b)`, with `h_C` the height from `C` onto `AB`; each
/// factor is bounded using the monotonicity of `sn(x)/x`.
fn sine_constants(t0: &LabeledTriangle, lengths: &[Sandwich; 3], heights: &[Sandwich; 3]) -> Result<[Sandwich; 3]> {
    let g = t0.geometry();
    let h = t0.heights()?;
    let sides = t0.sides();
    Ok(std::array::from_fn(|i| {
        let j = (i + 2) % 3;
        let k = (i + 1) % 3;
        let (h0, hs) = (h[j], heights[j]);
        let (s0, ss) = (sides[k], lengths[k]);
        match g {
            Geometry::Euclidean => Sandwich::ONE,
            Geometry::Hyperbolic => {
                let (_, b, c) = roles(sides, j);
                let h_max = hyperbolic_height_cap(h0, hs.upper, b, c);
                let upper = h0 * hs.upper * h_max.sinh() / h_max * s0.sinh() / (s0 * ss.lower * h0.sinh());
                let lower = h0 * hs.lower / h0.sinh();
                Sandwich::new(lower, upper)
            }
            Geometry::Spherical => {
                let xs = s0 * (ss.upper / 2.0).max(1.0);
                let xh = h0 * (hs.upper / 2.0).max(1.0);
                let upper = h0 * hs.upper * xs * s0.sin() / (s0 * xs.sin() * h0.sin());
                let lower = h0 * hs.lower * xh.sin() * s0.sin() / (xh * s0 * ss.upper * h0.sin());
                Sandwich::new(lower, upper)
            }
        }
    }))
}

/// Angle intervals `[lo, hi]` containing every `α_n`, per vertex.
///
/// The sine bounds give two candidate intervals; in H² an obtuse angle stays
/// obtuse, which selects one. The angle sum then sharpens both ends: it is
/// `π` minus the defect in H² and `π` plus the excess on S², and the defect
/// (excess) of a descendant never exceeds that of `t₀`.
fn angle_intervals(t0: &LabeledTriangle, sines: &[Sandwich; 3]) -> Result<[(f64, f64); 3]> {
    let g = t0.geometry();
    let angles = t0.angles()?;
    if g == Geometry::Euclidean {
        return Ok(angles.map(|a| (a, a)));
    }
    let asin = |x: f64| x.min(1.0).asin();
    let mut iv: [(f64, f64); 3] = std::array::from_fn(|i| {
        let s = angles[i].sin();
        let (lo, hi) = (asin(s * sines[i].lower), asin(s * sines[i].upper));
        if g == Geometry::Hyperbolic && angles[i] > FRAC_PI_2 {
            (PI - hi, PI - lo)
        } else {
            (lo, PI - lo)
        }
    });
    let excess = t0.angle_excess()?.abs();
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let cap = match g {
            Geometry::Hyperbolic => PI - iv[j].0 - iv[k].0,
            _ => PI + excess - iv[j].0 - iv[k].0,
        };
        iv[i].1 = iv[i].1.min(cap);
    }
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let floor = match g {
            Geometry::Hyperbolic => PI - excess - iv[j].1 - iv[k].1,
            _ => PI - iv[j].1 - iv[k].1,
        };
        iv[i].0 = iv[i].0.max(floor);
    }
    Ok(iv)
}

/// `[(l_α, L_α), (l_β, L_β), (l_γ, L_γ)]` and the sine-level constants.
pub fn angle_constants(t0: &LabeledTriangle) -> Result<([Sandwich; 3], [Sandwich; 3])> {
    let b = compute_bounds(t0)?;
    Ok((b.angles, b.sines))
}

/// `δ = min over vertices of min(α₀ l_α, π − α₀ L_α)`.
///
/// Fails with [`Error::InconsistentConstants`] when the constants are too
/// loose to give a positive `δ`.
pub fn theorem_a_delta(t0: &LabeledTriangle) -> Result<f64> {
    let delta = compute_bounds(t0)?.delta;
    if !(delta > 0.0) {
        return Err(Error::InconsistentConstants(delta));
    }
    Ok(delta)
}

/// All constants with the default probe depth.
pub fn compute_bounds(t0: &LabeledTriangle) -> Result<BoundConstants> {
    compute_bounds_with_probe(t0, DEFAULT_PROBE_DEPTH)
}

pub fn compute_bounds_with_probe(t0: &LabeledTriangle, probe_depth: usize) -> Result<BoundConstants> {
    let g = t0.geometry();
    let sides = t0.sides();
    let h = t0.heights()?;
    let (lengths, heights, decay, eps0) = match g {
        Geometry::Euclidean => ([Sandwich::ONE; 3], [Sandwich::ONE; 3], None, [0.0; 3]),
        Geometry::Hyperbolic => {
            let l = hyperbolic_length_constant(t0)?;
            let lengths = l.map(|x| Sandwich::new(x, 1.0));
            (lengths, hyperbolic_height_constants(t0)?, None, h.map(hyperbolic_eps))
        }
        Geometry::Spherical => {
            let (d, lengths, heights) = spherical_constants(t0, probe_depth)?;
            (lengths, heights, Some(d), h.map(|x| x / x.sin() - 1.0))
        }
    };
    let sines = sine_constants(t0, &lengths, &heights)?;
    let angles0 = t0.angles()?;
    let iv = angle_intervals(t0, &sines)?;
    let angles: [Sandwich; 3] = std::array::from_fn(|i| Sandwich::new(iv[i].0 / angles0[i], iv[i].1 / angles0[i]));
    let delta = iv.iter().map(|&(lo, hi)| lo.min(PI - hi)).fold(f64::INFINITY, f64::min);
    let eps0_prime = std::array::from_fn(|i| {
        let k = (i + 1) % 3;
        let (s0, l) = (sides[k], lengths[k].lower);
        1.0 - g.sn(s0 * l) / (l * g.sn(s0))
    });
    Ok(BoundConstants { geometry: g, lengths, heights, sines, angles, delta, decay, eps0, eps0_prime })
}
