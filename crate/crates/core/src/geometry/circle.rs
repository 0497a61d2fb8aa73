use super::{ConvexPolygon, DiskSpec, Point2};

/// Exact area of `polygon ∩ disk`.
///
/// Signed accumulation over edges: each edge contributes the signed area of the
/// disk intersected with the triangle (center, a, b), split into straight
/// triangle pieces inside the disk and circular sectors outside it.
pub fn circle_polygon_intersection_area(polygon: &ConvexPolygon, disk: &DiskSpec) -> f64 {
    let c = disk.center;
    let r = disk.radius;
    let total: f64 = polygon
        .edges()
        .map(|e| triangle_disk_signed_area(e.a - c, e.b - c, r))
        .sum();
    total.clamp(0.0, polygon.area().min(disk.area()))
}

/// `|{x ∈ polygon : |x| ≤ r}|`.
pub fn sublevel_area(polygon: &ConvexPolygon, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    circle_polygon_intersection_area(
        polygon,
        &DiskSpec {
            center: Point2::ORIGIN,
            radius: r,
        },
    )
}

/// Signed area of `B(0, r) ∩ triangle(0, a, b)`.
fn triangle_disk_signed_area(a: Point2, b: Point2, r: f64) -> f64 {
    let d = b - a;
    let dd = d.norm_sq();
    if dd == 0.0 {
        return 0.0;
    }
    // |a + t d|² = r²  ⇔  dd t² + 2 (a·d) t + |a|² − r² = 0
    let bq = a.dot(d);
    let cq = a.norm_sq() - r * r;
    let disc = bq * bq - dd * cq;
    let mut cuts = [0.0, 0.0, 0.0, 0.0];
    let mut m = 1;
    if disc > 0.0 {
        let s = disc.sqrt();
        for t in [(-bq - s) / dd, (-bq + s) / dd] {
            if t > 0.0 && t < 1.0 {
                cuts[m] = t;
                m += 1;
            }
        }
    }
    cuts[m] = 1.0;
    let mut area = 0.0;
    for k in 0..m {
        let p = a + d * cuts[k];
        let q = a + d * cuts[k + 1];
        let mid = a + d * (0.5 * (cuts[k] + cuts[k + 1]));
        if mid.norm_sq() <= r * r {
            area += 0.5 * p.cross(q);
        } else {
            area += 0.5 * r * r * p.cross(q).atan2(p.dot(q));
        }
    }
    area
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn square(x0: f64, y0: f64, x1: f64, y1: f64) -> ConvexPolygon {
        ConvexPolygon::new(vec![
            Point2::new(x0, y0),
            Point2::new(x1, y0),
            Point2::new(x1, y1),
            Point2::new(x0, y1),
        ])
        .unwrap()
    }

    fn unit_disk(c: Point2) -> DiskSpec {
        DiskSpec::new(c, 1.0).unwrap()
    }

    #[test]
    fn disk_inside_square() {
        let a = circle_polygon_intersection_area(&square(-2.0, -2.0, 2.0, 2.0), &unit_disk(Point2::ORIGIN));
        assert!((a - PI).abs() < 1e-14);
    }

    #[test]
    fn disjoint_is_zero() {
        let sq = square(-2.0, -2.0, 2.0, 2.0).translate(Point2::new(10.0, 10.0));
        assert_eq!(circle_polygon_intersection_area(&sq, &unit_disk(Point2::ORIGIN)), 0.0);
    }

    #[test]
    fn half_disk() {
        let a = circle_polygon_intersection_area(&square(0.0, -2.0, 2.0, 2.0), &unit_disk(Point2::ORIGIN));
        assert!((a - PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn polygon_inside_disk() {
        let sq = square(-0.5, -0.5, 0.5, 0.5);
        let a = circle_polygon_intersection_area(&sq, &unit_disk(Point2::ORIGIN));
        assert!((a - 1.0).abs() < 1e-15);
    }

    #[test]
    fn circular_segment() {
        // disk radius 1, half-plane y ≥ 0.5 inside a big box: segment area
        let sq = square(-3.0, 0.5, 3.0, 3.0);
        let a = circle_polygon_intersection_area(&sq, &unit_disk(Point2::ORIGIN));
        let h = 0.5f64;
        let exact = (h).acos() - h * (1.0 - h * h).sqrt();
        assert!((a - exact).abs() < 1e-14, "{a} vs {exact}");
    }

    #[test]
    fn quarter_disk_sublevel() {
        let sq = square(0.0, 0.0, 1.0, 1.0);
        assert!((sublevel_area(&sq, 1.0) - PI / 4.0).abs() < 1e-14);
        assert_eq!(sublevel_area(&sq, 0.0), 0.0);
        assert!((sublevel_area(&sq, 2f64.sqrt() + 1e-9) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn matches_grid_count() {
        let tri = ConvexPolygon::new(vec![
            Point2::new(-0.3, -0.8),
            Point2::new(1.2, 0.1),
            Point2::new(-0.5, 0.9),
        ])
        .unwrap();
        let disk = DiskSpec::new(Point2::new(0.2, 0.1), 0.7).unwrap();
        let n = 2000;
        let (x0, x1, y0, y1) = (-0.5, 1.2, -0.8, 0.9);
        let (hx, hy) = ((x1 - x0) / n as f64, (y1 - y0) / n as f64);
        let mut count = 0usize;
        for i in 0..n {
            for j in 0..n {
                let p = Point2::new(x0 + (i as f64 + 0.5) * hx, y0 + (j as f64 + 0.5) * hy);
                if tri.contains(p, 0.0) && disk.contains(p) {
                    count += 1;
                }
            }
        }
        let grid = count as f64 * hx * hy;
        let exact = circle_polygon_intersection_area(&tri, &disk);
        assert!((grid - exact).abs() < 2e-4, "{grid} vs {exact}");
    }
}
