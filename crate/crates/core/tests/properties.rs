use jball_core::ballgeom::{extract_region, topology_check, trace_boundary};
use jball_core::punctured::{canonical_transport, disk_decomposition};
use jball_core::suite::sample_domains;
use jball_core::{annulus_bounds, in_j_ball, j_distance, Domain, Point, Radius, Similarity, Vec2};
use proptest::prelude::*;

fn pt() -> impl Strategy<Value = Vec2> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(x, y)| Vec2::new(x, y))
}

fn planar_domains() -> Vec<Domain> {
    sample_domains().into_iter().map(|(_, g)| g).filter(Domain::is_planar).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn j_is_a_metric(k in 0usize..6, a in pt(), b in pt(), c in pt()) {
        let g = &planar_domains()[k];
        let (a, b, c) = (Point::from(a), Point::from(b), Point::from(c));
        prop_assume!([&a, &b, &c].iter().all(|p| g.depth(p).unwrap().is_some_and(|d| d > 1e-9)));
        let ab = j_distance(g, &a, &b).unwrap();
        prop_assert!(ab >= 0.0);
        prop_assert_eq!(j_distance(g, &a, &a).unwrap(), 0.0);
        prop_assert!((ab - j_distance(g, &b, &a).unwrap()).abs() <= 1e-12 * (1.0 + ab));
        let ac = j_distance(g, &a, &c).unwrap();
        let cb = j_distance(g, &c, &b).unwrap();
        prop_assert!(ab <= ac + cb + 1e-12 * (1.0 + ab));
    }

    #[test]
    fn similarity_invariance(a in pt(), b in pt(), angle in -3.0..3.0f64, scale in 0.1..10.0f64, shift in pt()) {
        let g = Domain::punctured(vec![Point::xy(0.2, -0.4), Point::xy(1.5, 1.0)]).unwrap();
        let t = Similarity { anchor: shift, angle, scale };
        let h = g.transformed(&t).unwrap();
        let (pa, pb) = (Point::from(a), Point::from(b));
        prop_assume!(g.depth(&pa).unwrap().is_some_and(|d| d > 1e-6));
        prop_assume!(g.depth(&pb).unwrap().is_some_and(|d| d > 1e-6));
        let before = j_distance(&g, &pa, &pb).unwrap();
        let after = j_distance(&h, &Point::from(t.apply(a)), &Point::from(t.apply(b))).unwrap();
        prop_assert!((before - after).abs() <= 1e-9 * (1.0 + before));
    }

    #[test]
    fn canonical_position_preserves_membership(p in pt(), x in pt(), m in 0.05..2.0f64, y in pt()) {
        prop_assume!(p.dist(x) > 1e-3 && y.dist(p) > 1e-9);
        let t = canonical_transport(&Point::from(p), &Point::from(x)).unwrap();
        prop_assert!(t.apply(x).dist(Vec2::new(1.0, 0.0)) < 1e-12);
        let g = Domain::punctured(vec![Point::from(p)]).unwrap();
        let r = Radius::new(m).unwrap();
        let j = j_distance(&g, &Point::from(x), &Point::from(y)).unwrap();
        prop_assume!((j - m).abs() > 1e-9);
        prop_assert_eq!(in_j_ball(&g, &Point::from(x), r, &Point::from(y)).unwrap(), disk_decomposition(r).contains(t.apply(y)));
    }

    #[test]
    fn ball_grows_with_radius(a in pt(), m in 0.05..2.5f64, dm in 0.0..1.0f64, y in pt()) {
        let g = Domain::half_plane(Vec2::new(0.0, -1.0), 3.5).unwrap();
        let x = Point::from(a);
        let inside = in_j_ball(&g, &x, Radius::new(m).unwrap(), &Point::from(y)).unwrap();
        let bigger = in_j_ball(&g, &x, Radius::new(m + dm).unwrap(), &Point::from(y)).unwrap();
        prop_assert!(!inside || bigger);
    }

    #[test]
    fn sandwich_in_the_punctured_plane(m in 0.01..3.0f64, r in 0.0..1.0f64, t in 0.0..6.3f64) {
        let g = Domain::punctured_plane();
        let x = Point::xy(1.0, 0.0);
        let rm = Radius::new(m).unwrap();
        let b = annulus_bounds(1.0, rm).unwrap();
        let inner = Point::from(Vec2::new(1.0, 0.0) + Vec2::polar(r * b.inner_radius * 0.999_999, t));
        prop_assert!(in_j_ball(&g, &x, rm, &inner).unwrap());
        let outer = Point::from(Vec2::new(1.0, 0.0) + Vec2::polar(b.outer_radius * (1.0 + 1e-9 + r), t));
        prop_assert!(!in_j_ball(&g, &x, rm, &outer).unwrap());
    }
}

#[test]
fn region_area_converges_under_refinement() {
    let g = Domain::punctured_plane();
    let x = Point::xy(1.0, 0.0);
    for m in [0.4, 0.9, 1.3] {
        let r = Radius::new(m).unwrap();
        let coarse = extract_region(&g, &x, r, Some(2.0 * m.exp_m1() / 256.0)).unwrap();
        let fine = extract_region(&g, &x, r, Some(m.exp_m1() / 256.0)).unwrap();
        let finer = extract_region(&g, &x, r, Some(m.exp_m1() / 512.0)).unwrap();
        let (a0, a1, a2) = (coarse.area(), fine.area(), finer.area());
        assert!((a2 - a1).abs() <= (a1 - a0).abs() + 1e-3 * a2, "M = {m}: {a0} {a1} {a2}");
        assert_eq!(topology_check(&coarse).unwrap().components, topology_check(&finer).unwrap().components);
    }
}

#[test]
fn traced_boundary_lies_on_the_sphere() {
    for (name, g) in sample_domains().into_iter().filter(|(_, g)| g.is_planar()) {
        let x = if g.contains2(Vec2::new(1.0, 0.5)) { Point::xy(1.0, 0.5) } else { Point::xy(0.0, 0.0) };
        let x = if g.depth(&x).unwrap().is_some() { x } else { Point::xy(0.0, -0.1) };
        let m = 0.8;
        let grid = extract_region(&g, &x, Radius::new(m).unwrap(), None).unwrap();
        let h = grid.spacing();
        let dx = g.boundary_distance(&x).unwrap();
        for line in trace_boundary(&grid).unwrap() {
            for v in &line.points {
                let j = j_distance(&g, &x, &Point::from(*v)).unwrap_or(f64::INFINITY);
                // Vertices on the domain boundary have infinite j.
                if g.distance_to_boundary2(*v) < 2.0 * h {
                    continue;
                }
                let bound = 4.0 * h / g.distance_to_boundary2(*v).min(dx);
                assert!((j - m).abs() < bound, "{name}: j = {j} at {v:?}, h = {h}");
            }
        }
    }
}
