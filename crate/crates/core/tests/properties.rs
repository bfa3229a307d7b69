use proptest::prelude::*;
use std::f64::consts::PI;

use medial_core::bounds::compute_bounds;
use medial_core::examples::{example1_triangle, example3_triangle, example4_triangle};
use medial_core::kernel::inner;
use medial_core::ledger::summarize;
use medial_core::mesh::{subdivide_level, subdivide_to, TriangulationLevel};
use medial_core::trig::{isosceles_apex_angles, lambert_summit, law_of_cosines_angle, right_hypotenuse};
use medial_core::{
    angle_at, distance, inequality_ledger, interpolate, medial_subdivide, midpoint, nested_sequence,
    ChildIndex, Geometry, GeodesicLine, LabeledTriangle, NestedPath, Point, Space,
};

fn geometry() -> impl Strategy<Value = Geometry> {
    prop_oneof![Just(Geometry::Hyperbolic), Just(Geometry::Euclidean), Just(Geometry::Spherical)]
}

fn curved() -> impl Strategy<Value = Geometry> {
    prop_oneof![Just(Geometry::Hyperbolic), Just(Geometry::Spherical)]
}

fn point(g: Geometry) -> impl Strategy<Value = Point> {
    let reach = if g == Geometry::Spherical { 1.4 } else { 2.5 };
    (0.0..reach, 0.0..2.0 * PI).prop_map(move |(r, t)| Point::from_polar(g, r, t))
}

fn point_pair() -> impl Strategy<Value = (Point, Point)> {
    geometry().prop_flat_map(|g| (point(g), point(g)))
}

fn path(depth: usize) -> impl Strategy<Value = NestedPath> {
    prop::collection::vec(0usize..4, depth)
        .prop_map(|v| NestedPath::new(v.into_iter().map(|i| ChildIndex::from_index(i).unwrap()).collect()))
}

/// A triangle with sides in the acceptance ranges of its geometry.
fn seed(g: Geometry) -> impl Strategy<Value = LabeledTriangle> {
    let hi = if g == Geometry::Spherical { 1.0 } else { 3.0 };
    (0.1..hi, 0.1..hi, 0.1..hi, 0.0..2.0 * PI)
        .prop_filter_map("not a triangle", move |(a, b, c, r)| LabeledTriangle::from_sides(a, b, c, g, r).ok())
}

fn surface_residual(p: &Point) -> f64 {
    let c = p.coords();
    match p.geometry() {
        Geometry::Euclidean => c.z.abs(),
        Geometry::Spherical => (c.norm() - 1.0).abs(),
        Geometry::Hyperbolic => (inner(Geometry::Hyperbolic, c, c) + 1.0).abs(),
    }
}

proptest! {
    #[test]
    fn midpoint_bisects((p, q) in point_pair()) {
        prop_assume!(distance(&p, &q).unwrap() > 1e-9);
        let m = midpoint(&p, &q).unwrap();
        let (pm, mq, pq) = (distance(&p, &m).unwrap(), distance(&m, &q).unwrap(), distance(&p, &q).unwrap());
        prop_assert!((pm - mq).abs() <= 1e-12, "{pm} vs {mq}");
        prop_assert!((pm - pq / 2.0).abs() <= 1e-12);
        prop_assert!(surface_residual(&m) <= 1e-12);
    }

    #[test]
    fn projection_is_nearest(
        (p, q, x) in geometry().prop_flat_map(|g| (point(g), point(g), point(g))),
        ts in prop::collection::vec(-3.0..3.0f64, 100),
    ) {
        prop_assume!(distance(&p, &q).unwrap() > 1e-3);
        let line = GeodesicLine::through(&p, &q).unwrap();
        let Ok(foot) = line.project(&x) else { return Ok(()) };
        prop_assert!(surface_residual(&foot.foot) <= 1e-12);
        let to_foot = distance(&x, &foot.foot).unwrap();
        for s in ts {
            prop_assert!(to_foot <= distance(&x, &line.point_at(s)).unwrap() + 1e-10);
        }
    }

    #[test]
    fn interpolation_is_uniform((p, q) in point_pair(), t in 0.0..0.9f64, dt in 1e-6..0.1f64) {
        let d = distance(&p, &q).unwrap();
        prop_assume!(d > 1e-3);
        let x = interpolate(&p, &q, t).unwrap();
        let y = interpolate(&p, &q, t + dt).unwrap();
        let step = distance(&x, &y).unwrap();
        prop_assert!((step - dt * d).abs() <= 1e-10 * dt * d, "{step} vs {}", dt * d);
    }

    #[test]
    fn rescaled_curvature_keeps_angles(a in 0.2..1.0f64, b in 0.2..1.0f64, c in 0.2..1.0f64, lambda in 0.3..3.0f64, sign in prop_oneof![Just(-1.0), Just(1.0)]) {
        // Sides measured at curvature sign·λ⁻² equal the unit sides scaled by λ.
        let s = Space::with_curvature(sign / (lambda * lambda)).unwrap();
        let canon = |x: f64| s.to_canonical_length(x * lambda);
        let direct = law_of_cosines_angle(a, b, c, s.geometry);
        let scaled = law_of_cosines_angle(canon(a), canon(b), canon(c), s.geometry);
        if let (Ok(x), Ok(y)) = (direct, scaled) {
            prop_assert!((x - y).abs() <= 1e-10);
        }
    }

    #[test]
    fn kernel_angles_match_cosine_rule(g in geometry(), pts in (0.0..1.3f64, 0.0..6.3f64, 0.0..1.3f64, 0.0..6.3f64, 0.0..1.3f64, 0.0..6.3f64)) {
        let p = |r: f64, t: f64| Point::from_polar(g, r, t);
        let (a, b, c) = (p(pts.0, pts.1), p(pts.2, pts.3), p(pts.4, pts.5));
        let Ok(t) = medial_core::validate_triangle(&a, &b, &c, Space::unit(g)) else { return Ok(()) };
        let [sa, sb, sc] = t.sides();
        prop_assume!(sa.min(sb).min(sc) > 1e-3);
        let k = angle_at(&a, &b, &c).unwrap();
        prop_assert!((k - law_of_cosines_angle(sa, sb, sc, g).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn isosceles_closed_form_matches_kernel(g in curved(), hb in 0.05..1.0f64, hl in 0.05..1.0f64) {
        prop_assume!(hl > hb * 1.01);
        let Ok(s) = isosceles_apex_angles(hb, hl, g) else { return Ok(()) };
        let t = LabeledTriangle::from_sides(2.0 * hb, 2.0 * hl, 2.0 * hl, g, 0.0).unwrap();
        let [d, e, f] = t.midpoints().unwrap();
        // β′ is the angle of the central child at the midpoint of the leg CA.
        let beta_prime = angle_at(&e, &d, &f).unwrap();
        prop_assert!((beta_prime - s.beta_prime).abs() <= 1e-9, "{beta_prime} vs {}", s.beta_prime);
    }

    #[test]
    fn lambert_with_zero_leg_is_its_base(g in geometry(), base in 0.0..1.5f64, leg in 0.0..1.5f64) {
        prop_assert!((lambert_summit(base, 0.0, g).unwrap() - base).abs() <= 1e-12);
        // Pythagoras: cs(hyp) = cs(leg₁)·cs(leg₂).
        let h = right_hypotenuse(base, leg, g);
        prop_assert!((g.cs(h) - g.cs(base) * g.cs(leg)).abs() <= 1e-12 * g.cs(h).abs().max(1.0));
    }

    #[test]
    fn one_step_midpoint_inequality(t in curved().prop_flat_map(seed)) {
        let s0 = t.sides();
        for (k, child) in medial_subdivide(&t).unwrap().iter().enumerate() {
            let s1 = child.sides();
            for i in 0..3 {
                let m = match t.geometry() {
                    Geometry::Hyperbolic => s0[i] / 2.0 - s1[i],
                    _ => s1[i] - s0[i] / 2.0,
                };
                prop_assert!(m >= -1e-11);
                if k == 0 {
                    prop_assert!(m > 1e-12 * s0[i]);
                }
            }
        }
    }

    #[test]
    fn central_child_is_interior(t in geometry().prop_flat_map(seed), u in 0.02..0.48f64) {
        let central = medial_subdivide(&t).unwrap()[0];
        let [p, q, r] = central.vertices();
        for (x, y) in [(p, q), (q, r), (r, p)] {
            let s = interpolate(x, y, u).unwrap();
            prop_assert!(t.interior_margin(&s).unwrap() > 0.0);
        }
    }

    #[test]
    fn normalized_lengths_are_monotone(t in curved().prop_flat_map(seed), path in path(16)) {
        let seq = nested_sequence(&t, &path).unwrap();
        for w in seq.windows(2) {
            for i in 0..3 {
                let (x, y) = (w[0].normalized_sides[i], w[1].normalized_sides[i]);
                match t.geometry() {
                    Geometry::Hyperbolic => prop_assert!(y <= x * (1.0 + 1e-12)),
                    _ => prop_assert!(y >= x * (1.0 - 1e-12)),
                }
            }
        }
    }

    #[test]
    fn hyperbolic_angle_sum_below_pi(t in seed(Geometry::Hyperbolic), path in path(12)) {
        for m in nested_sequence(&t, &path).unwrap() {
            prop_assert!(m.angle_sum() < PI);
        }
    }

    #[test]
    fn examples_are_valid(h in 0.1..6.0f64, hb in 0.1..9.0f64, leg in 0.1..3.1f64, colat in 0.05..1.55f64) {
        prop_assert!(example1_triangle(h, hb).is_ok());
        prop_assert!(example3_triangle(leg).is_ok());
        prop_assert!(example4_triangle(colat).is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ledger_holds_on_random_paths(t in curved().prop_flat_map(seed), path in path(12)) {
        let entries = inequality_ledger(&t, &path).unwrap();
        let failed: Vec<_> = entries.iter().filter(|e| e.failed()).collect();
        prop_assert!(failed.is_empty(), "{failed:?}");
        prop_assert!(summarize(&entries).values().all(|&(_, f)| f == 0));
    }

    #[test]
    fn sandwiches_hold_on_random_paths(t in curved().prop_flat_map(seed), path in path(20)) {
        let b = compute_bounds(&t).unwrap();
        let seq = nested_sequence(&t, &path).unwrap();
        let m0 = &seq[0];
        for m in &seq[1..] {
            for i in 0..3 {
                let (x, x0) = (m.normalized_sides[i], m0.sides[i]);
                prop_assert!(x >= x0 * b.lengths[i].lower - 1e-9 && x <= x0 * b.lengths[i].upper + 1e-12);
                let (h, h0) = (m.normalized_heights[i], m0.heights[i]);
                prop_assert!(h >= h0 * b.heights[i].lower - 1e-9 && h <= h0 * b.heights[i].upper + 1e-9);
                let (a, a0) = (m.angles[i], m0.angles[i]);
                prop_assert!(a > a0 * b.angles[i].lower && a < a0 * b.angles[i].upper);
                prop_assert!(a > b.delta && a < PI - b.delta);
            }
        }
    }

    #[test]
    fn edge_decay_after_the_probe(t in seed(Geometry::Spherical)) {
        let n0 = compute_bounds(&t).unwrap().decay.unwrap().n;
        let max0 = t.max_side();
        let mut level = TriangulationLevel::root(&t);
        for n in 1..=7 {
            level = subdivide_level(&level).unwrap();
            let max_n = level.triangles().iter().map(LabeledTriangle::max_side).fold(0.0, f64::max);
            if n >= n0 {
                prop_assert!(max_n <= max0 * 0.8f64.powi(n as i32), "depth {n}: {max_n}");
            }
        }
    }
}

#[test]
fn interior_edges_are_shared_twice() {
    let t = LabeledTriangle::from_sides(2.0, 2.5, 1.7, Geometry::Hyperbolic, 0.0).unwrap();
    let level = subdivide_to(&t, 5).unwrap();
    let inc = level.edge_incidence();
    assert!(inc.values().all(|&c| c == 1 || c == 2));
    assert_eq!(inc.values().filter(|&&c| c == 1).count(), 3 * 32);
}
