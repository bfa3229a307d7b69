//! Step-by-step numerical ledger of the relations used in the stability
//! proofs, evaluated on the kernel's constructions along a nested path.
//!
//! Every relation is stated for the vertex in role `A` and the side `a`; the
//! ledger evaluates it for all three vertices by relabeling. Notation per
//! step: `D, E, F` are the midpoints of `BC, CA, AB`; `A′, B′, C′, D′` the
//! feet of `A, B, C, D` on the line `FE`; `E′` the foot of `E` on `BC`.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

use crate::error::Result;
use crate::kernel::{angle_at, distance, midpoint, GeodesicLine, Point};
use crate::space::Geometry;
use crate::subdivision::{medial_subdivide, nested_triangles, ChildIndex, LabeledTriangle, NestedPath};
use crate::trig;

/// Absolute tolerance for equalities.
pub const EQUALITY_TOL: f64 = 1e-9;
/// Allowed negative margin for strict inequalities.
pub const MARGIN_TOL: f64 = 1e-11;
/// Spherical relations are evaluated only on triangles with all sides below this.
pub const SPHERICAL_GATE: f64 = FRAC_PI_3;

/// Every relation name the ledger can emit.
pub const RELATIONS: &[&str] = &[
    "midpoint_inequality",
    "half_side_log_ratio",
    "half_side_log_ratio_leg",
    "saccheri_leg_half_side",
    "pythagoras_hypotenuse",
    "lambert_half_side",
    "sine_ratio_identity",
    "sine_ratio_above_one",
    "sine_ratio_hypotenuse",
    "sine_ratio_bound",
    "sine_ratio_log_sum",
    "height_sine_law_e",
    "height_sine_law_c",
    "medial_sine_law",
    "height_ratio_rho",
    "rho_bound",
    "lambert_central_height",
    "height_sine_law_ratio",
    "central_height_ratio",
    "central_height_ratio_lower",
    "corner_height_ratio",
    "central_height_ratio_upper",
    "isosceles_cot_product",
    "isosceles_tan_half_apex",
    "isosceles_base_angle",
    "saccheri_base",
    "saccheri_base_midpoint",
    "saccheri_leg_b",
    "saccheri_leg_c",
    "saccheri_summit_angle",
    "central_height_extremal",
    "obtuse_preserved",
    "acute_preserved",
    "angle_sum_defect",
    "angle_excess_area",
    "angle_sum_flat",
    "jester_hat_congruence_gc",
    "jester_hat_congruence_hb",
    "jester_hat_translation",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationKind {
    Equality,
    StrictLess,
    StrictGreater,
}

/// One evaluated relation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub name: String,
    /// Index `n` of the parent triangle `t_n`.
    pub step: usize,
    /// Vertex playing the role of `A` (0, 1, 2).
    pub vertex: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub kind: RelationKind,
    /// `lhs − rhs` for equalities; the signed margin (positive when the
    /// inequality holds) otherwise.
    pub residual: f64,
    pub satisfied: bool,
    /// The hypotheses of the relation do not hold at this step.
    pub skipped: bool,
}

impl LedgerEntry {
    pub fn evaluate(name: &str, step: usize, vertex: usize, lhs: f64, rhs: f64, kind: RelationKind) -> Self {
        let residual = match kind {
            RelationKind::Equality | RelationKind::StrictGreater => lhs - rhs,
            RelationKind::StrictLess => rhs - lhs,
        };
        let satisfied = match kind {
            RelationKind::Equality => residual.abs() <= EQUALITY_TOL,
            _ => residual >= -MARGIN_TOL,
        };
        LedgerEntry { name: name.into(), step, vertex, lhs, rhs, kind, residual, satisfied, skipped: false }
    }

    pub fn skip(name: &str, step: usize, vertex: usize, kind: RelationKind) -> Self {
        LedgerEntry {
            name: name.into(),
            step,
            vertex,
            lhs: 0.0,
            rhs: 0.0,
            kind,
            residual: 0.0,
            satisfied: true,
            skipped: true,
        }
    }

    pub fn failed(&self) -> bool {
        !self.skipped && !self.satisfied
    }
}

use RelationKind::{Equality as Equal, StrictGreater as Gt, StrictLess as Lt};

struct Sink<'a> {
    out: &'a mut Vec<LedgerEntry>,
    step: usize,
    vertex: usize,
}

impl Sink<'_> {
    fn push(&mut self, name: &str, lhs: f64, rhs: f64, kind: RelationKind) {
        self.out.push(LedgerEntry::evaluate(name, self.step, self.vertex, lhs, rhs, kind));
    }

    fn skip(&mut self, name: &str, kind: RelationKind) {
        self.out.push(LedgerEntry::skip(name, self.step, self.vertex, kind));
    }
}

fn rotate(t: &LabeledTriangle, times: usize) -> LabeledTriangle {
    (0..times).fold(*t, |t, _| t.rotated())
}

/// The same child seen after relabeling the parent `times` steps.
fn rotate_child(c: ChildIndex, times: usize) -> ChildIndex {
    match c {
        ChildIndex::Central => ChildIndex::Central,
        corner => ChildIndex::from_index(1 + (corner.index() - 1 + 3 - times % 3) % 3).expect("corner"),
    }
}

fn d(p: &Point, q: &Point) -> Result<f64> {
    distance(p, q)
}

/// Points of the standard construction on a triangle in role order.
struct Frame {
    g: Geometry,
    a: f64,
    b: f64,
    c: f64,
    vertex: [Point; 3],
    mid: [Point; 3],
    /// Feet of `A, B, C, D` on `FE`.
    on_fe: [Point; 4],
    /// Foot of `E` on `BC`.
    e_foot: Point,
    h: f64,
    angles: [f64; 3],
}

impl Frame {
    fn new(t: &LabeledTriangle) -> Result<Self> {
        let [a, b, c] = t.sides();
        let vertex = *t.vertices();
        let mid = t.midpoints()?;
        let [dm, e, f] = mid;
        let fe = GeodesicLine::through(&f, &e)?;
        let foot = |p: &Point| fe.project(p).map(|r| r.foot);
        let on_fe = [foot(&vertex[0])?, foot(&vertex[1])?, foot(&vertex[2])?, foot(&dm)?];
        let e_foot = t.side_line(0)?.project(&e)?.foot;
        Ok(Frame {
            g: t.geometry(),
            a,
            b,
            c,
            vertex,
            mid,
            on_fe,
            e_foot,
            h: t.heights()?[0],
            angles: t.angles()?,
        })
    }

    /// `|CC′|`, the Saccheri leg.
    fn leg(&self) -> Result<f64> {
        d(&self.vertex[2], &self.on_fe[2])
    }
}

/// Relations on one subdivision step, for all three vertex roles.
fn step_entries(parent: &LabeledTriangle, child: &LabeledTriangle, which: ChildIndex, n: usize, out: &mut Vec<LedgerEntry>) -> Result<()> {
    let g = parent.geometry();
    let small = g != Geometry::Spherical || parent.max_side() < SPHERICAL_GATE;
    for i in 0..3 {
        let p = rotate(parent, i);
        let ch = rotate(child, i);
        let which = rotate_child(which, i);
        let mut s = Sink { out, step: n, vertex: i };
        if !small {
            for name in RELATIONS {
                if *name != "sine_ratio_log_sum" {
                    s.skip(name, Equal);
                }
            }
            continue;
        }
        let f = Frame::new(&p)?;
        let [a1, _, c1] = ch.sides();
        let h1 = ch.heights()?[0];
        let child_angles = ch.angles()?;
        let parallel = which.parallel_sides()[0];

        saccheri(&f, &mut s)?;
        isosceles(&f, &mut s)?;
        extremal(&p, &mut s)?;
        preservation(&f, child_angles[0], &mut s);
        if i == 0 {
            angle_sum(child, &mut s)?;
        }

        if parallel {
            parallel_side(&f, a1, &mut s)?;
            for e in jester_hat_check(&p)? {
                s.out.push(LedgerEntry { step: n, vertex: i, ..e });
            }
        } else {
            for name in ["midpoint_inequality", "half_side_log_ratio", "lambert_half_side", "jester_hat_translation"] {
                s.skip(name, Lt);
            }
        }

        if which == ChildIndex::Central {
            central_heights(&f, h1, c1, &mut s)?;
        } else if g == Geometry::Spherical {
            let ratio = 2.0 * h1.sin() / f.h.sin();
            let rhs = if which == ChildIndex::CornerA { c1.cos() * (f.a / 2.0).cos().powi(2) } else { c1.cos() };
            s.push("corner_height_ratio", ratio, rhs, Gt);
        }
    }
    Ok(())
}

/// Saccheri quadrilateral `C′B′BC` over the line `FE`.
fn saccheri(f: &Frame, s: &mut Sink) -> Result<()> {
    let [a_, b_, c_, d_] = &f.on_fe;
    let [_, e, fm] = &f.mid;
    s.push("saccheri_base", d(b_, c_)?, 2.0 * d(fm, e)?, Equal);
    s.push("saccheri_base_midpoint", d(d_, b_)?, d(d_, c_)?, Equal);
    let aa = d(&f.vertex[0], a_)?;
    s.push("saccheri_leg_b", d(&f.vertex[1], b_)?, aa, Equal);
    s.push("saccheri_leg_c", f.leg()?, aa, Equal);
    let summit = angle_at(&f.vertex[2], c_, &f.vertex[1])?;
    let kind = match f.g {
        Geometry::Hyperbolic => Lt,
        Geometry::Euclidean => Equal,
        Geometry::Spherical => Gt,
    };
    s.push("saccheri_summit_angle", summit, FRAC_PI_2, kind);
    Ok(())
}

/// Relations that need `a_{n+1}` to be the side parallel to `a_n`.
fn parallel_side(f: &Frame, a1: f64, s: &mut Sink) -> Result<()> {
    let g = f.g;
    let (a, b, c) = (f.a, f.b, f.c);
    let kind = match g {
        Geometry::Hyperbolic => Lt,
        Geometry::Euclidean => Equal,
        Geometry::Spherical => Gt,
    };
    s.push("midpoint_inequality", a1, a / 2.0, kind);

    let leg = f.leg()?;
    let [_, _, cv] = &f.vertex;
    let [_, _, c_, d_] = &f.on_fe;
    if g != Geometry::Spherical {
        let lhs = (a / (2.0 * a1)).ln();
        s.push("half_side_log_ratio", lhs, b / 2.0, Lt);
        s.push("half_side_log_ratio_leg", lhs, leg, Lt);
        s.push("saccheri_leg_half_side", leg, b / 2.0, Lt);
    }
    let d_c = d(d_, cv)?;
    let d_c_ = d(d_, c_)?;
    s.push("pythagoras_hypotenuse", g.cs(d_c), g.cs(leg) * g.cs(d_c_), Equal);
    s.push("lambert_half_side", g.sn(a / 2.0), g.sn(a1) * g.cs(leg), Equal);
    if g == Geometry::Spherical {
        let ratio = 2.0 * (a1 / 2.0).sin() / (a / 2.0).sin();
        s.push("sine_ratio_identity", ratio, 1.0 / ((a1 / 2.0).cos() * leg.cos()), Equal);
        s.push("sine_ratio_above_one", ratio, 1.0, Gt);
        s.push("sine_ratio_hypotenuse", ratio, a1.cos() / (d_c.cos() * (a1 / 2.0).cos()), Equal);
        s.push("sine_ratio_bound", ratio, 1.0 / ((a1 / 2.0).cos() * (b / 2.0).cos()), Lt);
    }

    // Heights from E and C, and the factor ρ relating them.
    let [_, e, fm] = &f.mid;
    let ee_ = d(e, &f.e_foot)?;
    let gamma = f.angles[2];
    let gamma_p = angle_at(e, fm, &f.vertex[0])?;
    let rho = g.sn(c / 2.0) / g.sn(c) * g.sn(a) / g.sn(a1);
    s.push("height_sine_law_e", g.sn(ee_), gamma.sin() * g.sn(b / 2.0), Equal);
    s.push("height_sine_law_c", g.sn(leg), gamma_p.sin() * g.sn(b / 2.0), Equal);
    s.push("medial_sine_law", gamma_p.sin(), rho * gamma.sin(), Equal);
    s.push("height_ratio_rho", g.sn(leg), rho * g.sn(ee_), Equal);
    if g == Geometry::Hyperbolic {
        s.push("rho_bound", rho, (a / 2.0).sinh() * (a / 2.0).cosh() / (2.0 * (a1 / 2.0).sinh()), Lt);
    }
    Ok(())
}

/// Height relations for a Central step; `h1` is the child's height at `D`.
fn central_heights(f: &Frame, h1: f64, c1: f64, s: &mut Sink) -> Result<()> {
    let g = f.g;
    let [_, e, _] = &f.mid;
    let d_ = &f.on_fe[3];
    let ee_ = d(e, &f.e_foot)?;
    let ed_ = d(e, d_)?;
    s.push("lambert_central_height", g.sn(h1), g.sn(ee_) / g.cs(ed_), Equal);
    s.push("height_sine_law_ratio", g.sn(f.h) / g.sn(ee_), g.sn(f.b) / g.sn(f.b / 2.0), Equal);
    let ratio = 2.0 * g.sn(h1) / g.sn(f.h);
    s.push("central_height_ratio", ratio, 1.0 / (g.cs(f.b / 2.0) * g.cs(ed_)), Equal);
    let bound = 1.0 / (g.cs(f.b / 2.0) * g.cs(c1));
    match g {
        Geometry::Hyperbolic => s.push("central_height_ratio_lower", ratio, bound, Gt),
        Geometry::Spherical => s.push("central_height_ratio_upper", ratio, bound, Lt),
        Geometry::Euclidean => {}
    }
    Ok(())
}

/// The isosceles triangle with base `a` and legs `max(b, c)`, built in the
/// model with the base midpoint `D` at the origin.
fn isosceles(f: &Frame, s: &mut Sink) -> Result<()> {
    let g = f.g;
    let half_base = f.a / 2.0;
    let half_leg = f.b.max(f.c) / 2.0;
    let h = trig::isosceles_apex_angles(half_base, half_leg, g)?.h;
    let dp = Point::origin(g);
    let b = Point::from_polar(g, half_base, PI);
    let c = Point::from_polar(g, half_base, 0.0);
    let a = Point::from_polar(g, h, FRAC_PI_2);
    let e = midpoint(&c, &a)?;
    let fm = midpoint(&a, &b)?;
    let alpha = angle_at(&a, &dp, &c)?;
    let beta = angle_at(&c, &a, &dp)?;
    let alpha_p = angle_at(&dp, &a, &e)?;
    let beta_p = angle_at(&e, &dp, &fm)?;
    let u = d(&dp, &e)?;
    let h = d(&dp, &a)?;
    s.push("isosceles_cot_product", 1.0 / (beta_p.tan() * alpha_p.tan()), g.cs(u), Equal);
    s.push("isosceles_tan_half_apex", alpha_p.tan(), alpha.sin() / beta.sin(), Equal);
    s.push("isosceles_base_angle", beta.cos(), alpha.sin() * g.cs(h), Equal);
    Ok(())
}

/// The Central child's height at `A`'s role is the smallest (H²) or largest
/// (S²) among the four children.
fn extremal(p: &LabeledTriangle, s: &mut Sink) -> Result<()> {
    let kids = medial_subdivide(p)?;
    let hs = kids.iter().map(|k| k.heights().map(|h| h[0])).collect::<Result<Vec<_>>>()?;
    let (central, corners) = (hs[0], &hs[1..]);
    match p.geometry() {
        Geometry::Hyperbolic => s.push("central_height_extremal", central, corners.iter().copied().fold(f64::INFINITY, f64::min), Lt),
        Geometry::Spherical => s.push("central_height_extremal", central, corners.iter().copied().fold(0.0, f64::max), Gt),
        Geometry::Euclidean => s.push("central_height_extremal", central, corners[0], Equal),
    }
    Ok(())
}

fn preservation(f: &Frame, child_angle: f64, s: &mut Sink) {
    match f.g {
        Geometry::Hyperbolic if f.angles[0] > FRAC_PI_2 => s.push("obtuse_preserved", child_angle, FRAC_PI_2, Gt),
        Geometry::Hyperbolic => s.skip("obtuse_preserved", Gt),
        Geometry::Spherical if f.angles[0] < FRAC_PI_2 => s.push("acute_preserved", child_angle, FRAC_PI_2, Lt),
        Geometry::Spherical => s.skip("acute_preserved", Lt),
        Geometry::Euclidean => {}
    }
}

/// Area of a spherical triangle from its vertices:
/// `tan(E/2) = |A·(B×C)| / (1 + A·B + B·C + C·A)`.
pub fn spherical_area(t: &LabeledTriangle) -> f64 {
    let [a, b, c] = t.vertices().map(|p| *p.coords());
    let num = a.dot(&b.cross(&c)).abs();
    let den = 1.0 + a.dot(&b) + b.dot(&c) + c.dot(&a);
    2.0 * num.atan2(den)
}

fn angle_sum(t: &LabeledTriangle, s: &mut Sink) -> Result<()> {
    let sum: f64 = t.angles()?.iter().sum();
    match t.geometry() {
        Geometry::Hyperbolic => s.push("angle_sum_defect", sum, PI, Lt),
        Geometry::Spherical => s.push("angle_excess_area", sum - PI, spherical_area(t), Equal),
        Geometry::Euclidean => s.push("angle_sum_flat", sum, PI, Equal),
    }
    Ok(())
}

/// Extends `FE` by `|FE|` past both ends to `G` (beyond `E`) and `H`
/// (beyond `F`). The triangles `GEC`, `FEA`, `FHB` are congruent, and the
/// isometry along `FE` carrying `C` to `B` moves points of the line by
/// `2|FE|`, which is the least displacement in H² and the largest on S².
pub fn jester_hat_check(t: &LabeledTriangle) -> Result<Vec<LedgerEntry>> {
    let g = t.geometry();
    let [a, b, c] = t.vertices();
    let [_, e, f] = t.midpoints()?;
    let line = GeodesicLine::through(&f, &e)?;
    let a1 = d(&f, &e)?;
    let gp = line.point_at(2.0 * a1);
    let hp = line.point_at(-a1);
    let mut out = Vec::new();
    let mut s = Sink { out: &mut out, step: 0, vertex: 0 };
    s.push("jester_hat_congruence_gc", d(&gp, c)?, d(&f, a)?, Equal);
    s.push("jester_hat_congruence_hb", d(&hp, b)?, d(&e, a)?, Equal);
    let kind = match g {
        Geometry::Hyperbolic => Gt,
        Geometry::Euclidean => Equal,
        Geometry::Spherical => Lt,
    };
    s.push("jester_hat_translation", t.sides()[0], 2.0 * a1, kind);
    Ok(out)
}

/// Accumulated spherical sine ratios of each side along the path, from the
/// first step where all sides are below [`SPHERICAL_GATE`].
fn log_sum_entries(tris: &[LabeledTriangle], path: &NestedPath, out: &mut Vec<LedgerEntry>) {
    let depth = path.depth();
    let start = tris.iter().position(|t| t.max_side() < SPHERICAL_GATE).filter(|&n| n < depth);
    for i in 0..3 {
        let Some(start) = start else {
            out.push(LedgerEntry::skip("sine_ratio_log_sum", depth, i, Lt));
            continue;
        };
        let (mut lhs, mut rhs) = (0.0, 0.0);
        for n in start..depth {
            let (s0, s1) = (tris[n].sides(), tris[n + 1].sides());
            let (a, b, a1) = (s0[i], s0[(i + 1) % 3], s1[i]);
            lhs += (2.0 * (a1 / 2.0).sin() / (a / 2.0).sin()).ln();
            rhs += a1 / 2.0;
            if path.steps[n].parallel_sides()[i] {
                rhs += b / 2.0;
            }
        }
        out.push(LedgerEntry::evaluate("sine_ratio_log_sum", depth, i, lhs, rhs, Lt));
    }
}

/// All ledger entries along `path`, sorted by step, then vertex.
pub fn inequality_ledger(t0: &LabeledTriangle, path: &NestedPath) -> Result<Vec<LedgerEntry>> {
    let tris = nested_triangles(t0, path)?;
    let mut out = Vec::new();
    for (n, &which) in path.steps.iter().enumerate() {
        step_entries(&tris[n], &tris[n + 1], which, n, &mut out)?;
    }
    if t0.geometry() == Geometry::Spherical {
        log_sum_entries(&tris, path, &mut out);
    }
    Ok(out)
}

/// Count of evaluated and failed entries per relation name.
pub fn summarize(entries: &[LedgerEntry]) -> std::collections::BTreeMap<String, (usize, usize)> {
    let mut m = std::collections::BTreeMap::new();
    for e in entries.iter().filter(|e| !e.skipped) {
        let slot = m.entry(e.name.clone()).or_insert((0, 0));
        slot.0 += 1;
        slot.1 += e.failed() as usize;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotate_child_tracks_corners() {
        assert_eq!(rotate_child(ChildIndex::CornerB, 1), ChildIndex::CornerA);
        assert_eq!(rotate_child(ChildIndex::CornerC, 2), ChildIndex::CornerA);
        assert_eq!(rotate_child(ChildIndex::CornerA, 1), ChildIndex::CornerC);
        assert_eq!(rotate_child(ChildIndex::Central, 2), ChildIndex::Central);
    }

    #[test]
    fn euclidean_star_is_degenerate() {
        let t = LabeledTriangle::from_sides(3.0, 4.0, 5.0, Geometry::Euclidean, 0.3).unwrap();
        let entries = inequality_ledger(&t, &NestedPath::all_central(5)).unwrap();
        let star: Vec<_> = entries.iter().filter(|e| e.name == "half_side_log_ratio").collect();
        assert_eq!(star.len(), 15);
        for e in star {
            assert!(e.lhs.abs() < 1e-14 && e.satisfied);
        }
        assert!(entries.iter().all(|e| !e.failed()), "{:?}", entries.iter().find(|e| e.failed()));
    }

    #[test]
    fn hyperbolic_central_path() {
        let t = LabeledTriangle::from_sides(2.1, 1.4, 2.7, Geometry::Hyperbolic, 1.0).unwrap();
        let entries = inequality_ledger(&t, &NestedPath::all_central(15)).unwrap();
        let failed: Vec<_> = entries.iter().filter(|e| e.failed()).collect();
        assert!(failed.is_empty(), "{failed:?}");
    }

    #[test]
    fn spherical_small_triangle() {
        let t = LabeledTriangle::from_sides(0.25, 0.2, 0.28, Geometry::Spherical, 0.0).unwrap();
        let path: NestedPath = "012301230123012".parse().unwrap();
        let entries = inequality_ledger(&t, &path).unwrap();
        assert!(entries.iter().all(|e| !e.failed()), "{:?}", entries.iter().find(|e| e.failed()));
        for name in ["pythagoras_hypotenuse", "sine_ratio_bound", "central_height_ratio_upper", "saccheri_base"] {
            assert!(entries.iter().any(|e| e.name == name && !e.skipped), "{name}");
        }
    }

    #[test]
    fn jester_hat_comparisons() {
        let h = LabeledTriangle::from_sides(1.5, 1.2, 1.0, Geometry::Hyperbolic, 0.0).unwrap();
        let e = jester_hat_check(&h).unwrap();
        assert!(e.iter().all(|x| x.satisfied));
        assert!(e[2].lhs > e[2].rhs);
        let s = LabeledTriangle::from_sides(0.5, 0.6, 0.4, Geometry::Spherical, 0.0).unwrap();
        let e = jester_hat_check(&s).unwrap();
        assert!(e.iter().all(|x| x.satisfied));
        assert!(e[2].lhs < e[2].rhs);
    }

    #[test]
    fn spherical_area_of_octant() {
        use crate::kernel::Point;
        use crate::space::Space;
        let t = crate::subdivision::validate_triangle(
            &Point::spherical(1.0, 0.0, 0.0).unwrap(),
            &Point::spherical(0.0, 1.0, 0.0).unwrap(),
            &Point::spherical(0.0, 0.0, 1.0).unwrap(),
            Space::spherical(),
        )
        .unwrap();
        assert!((spherical_area(&t) - FRAC_PI_2).abs() < 1e-15);
    }
}
