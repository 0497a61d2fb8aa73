//! Named test domains and random convex polygon generators.

use std::f64::consts::PI;

use rand::Rng;

use crate::geometry::{clip_half_plane, cone_hull, convex_hull, regular_ngon, ConvexPolygon, Point2};

/// The decagon of the 0.357 lower-bound construction, in its original coordinates.
pub fn lower_bound_decagon() -> ConvexPolygon {
    let v = [
        (0.536, 0.0),
        (0.84, 0.3),
        (0.8, 0.67),
        (0.58, 1.0),
        (0.21, 1.21),
        (-0.21, 1.21),
        (-0.58, 1.0),
        (-0.8, 0.67),
        (-0.84, 0.3),
        (-0.536, 0.0),
    ];
    ConvexPolygon::new(v.iter().map(|&(x, y)| Point2::new(x, y)).collect()).expect("decagon is convex")
}

fn rect(w: f64, h: f64) -> ConvexPolygon {
    ConvexPolygon::new(vec![
        Point2::new(-w / 2.0, -h / 2.0),
        Point2::new(w / 2.0, -h / 2.0),
        Point2::new(w / 2.0, h / 2.0),
        Point2::new(-w / 2.0, h / 2.0),
    ])
    .expect("rectangle")
}

/// Convex polygon with `n` vertices at sorted random angles and radii in
/// `[1 − wobble, 1 + wobble]`, convexified and scaled to unit area.
pub fn random_convex_polygon<R: Rng>(rng: &mut R, n: usize, wobble: f64) -> ConvexPolygon {
    loop {
        let mut angles: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 2.0 * PI).collect();
        angles.sort_by(f64::total_cmp);
        let pts: Vec<Point2> = angles
            .iter()
            .map(|&t| Point2::from_polar(1.0 + wobble * (2.0 * rng.gen::<f64>() - 1.0), t))
            .collect();
        let hull = convex_hull(&pts);
        if hull.len() >= 3 {
            if let Ok(p) = ConvexPolygon::new(hull) {
                // reject slivers
                if p.inradius_and_center().0 > 0.05 * p.diameter() {
                    return p.with_area(1.0);
                }
            }
        }
    }
}

/// Unit-area convex polygon containing the disk of radius `rho` at the origin:
/// an intersection of `m` random half-planes at support distance at least
/// `rho`, scaled up to unit area. Requires `π rho² < 1`.
pub fn random_polygon_containing_disk<R: Rng>(rng: &mut R, rho: f64) -> ConvexPolygon {
    assert!(PI * rho * rho < 1.0, "disk must have area below one");
    let big = 10.0;
    loop {
        let m = rng.gen_range(3..=12);
        let mut region = vec![
            Point2::new(-big, -big),
            Point2::new(big, -big),
            Point2::new(big, big),
            Point2::new(-big, big),
        ];
        let phase = rng.gen::<f64>() * 2.0 * PI;
        for j in 0..m {
            // jittered directions so the half-planes always bound a region
            let t = phase + 2.0 * PI * (j as f64 + 0.8 * rng.gen::<f64>()) / m as f64;
            let u = Point2::from_polar(1.0, t);
            let h = rho * (1.0 + 0.6 * rng.gen::<f64>().powi(2));
            region = clip_half_plane(&region, -u, -h);
        }
        let Ok(p) = ConvexPolygon::new(region) else { continue };
        if p.area() > 1.0 || p.diameter() > big {
            continue;
        }
        let out = p.scale(1.0 / p.area().sqrt());
        debug_assert!((out.area() - 1.0).abs() < 1e-12);
        return out;
    }
}

#[derive(Debug, Clone)]
pub struct CorpusDomain {
    pub name: String,
    pub polygon: ConvexPolygon,
}

/// Twenty unit-area domains: disk approximation, squares, triangles, thin
/// rectangles, regular polygons, the decagon, cone hulls and seeded random
/// polygons.
pub fn audit_corpus() -> Vec<CorpusDomain> {
    use rand::SeedableRng;
    let mut out: Vec<(String, ConvexPolygon)> = vec![
        ("disk24".into(), regular_ngon(24, 1.0).unwrap()),
        ("square".into(), rect(1.0, 1.0)),
        (
            "square_rotated".into(),
            rect(1.0, 1.0).rotate(0.4).translate(Point2::new(3.0, -1.0)),
        ),
        ("equilateral".into(), regular_ngon(3, 1.0).unwrap()),
        (
            "right_triangle".into(),
            ConvexPolygon::new(vec![
                Point2::new(0.0, 0.0),
                Point2::new(1.0, 0.0),
                Point2::new(0.0, 1.0),
            ])
            .unwrap(),
        ),
        (
            "obtuse_triangle".into(),
            ConvexPolygon::new(vec![
                Point2::new(0.0, 0.0),
                Point2::new(3.0, 0.0),
                Point2::new(0.6, 0.5),
            ])
            .unwrap(),
        ),
        ("rect_2".into(), rect(2.0, 1.0)),
        ("rect_4".into(), rect(4.0, 1.0)),
        ("rect_10".into(), rect(10.0, 1.0)),
        ("pentagon".into(), regular_ngon(5, 1.0).unwrap()),
        ("hexagon".into(), regular_ngon(6, 1.0).unwrap()),
        ("decagon".into(), lower_bound_decagon()),
        ("cone_0.4".into(), cone_hull(0.4, 1.0, 12).unwrap().polygon_approx),
        ("cone_0.5".into(), cone_hull(0.5, 1.0, 12).unwrap().polygon_approx),
    ];
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    for i in 0..3 {
        out.push((format!("random_{i}"), random_convex_polygon(&mut rng, 5 + 2 * i, 0.4)));
    }
    for i in 0..3 {
        out.push((
            format!("random_disk_{i}"),
            random_polygon_containing_disk(&mut rng, 0.4),
        ));
    }
    out.into_iter()
        .map(|(name, p)| CorpusDomain {
            name,
            polygon: p.with_area(1.0),
        })
        .collect()
}
