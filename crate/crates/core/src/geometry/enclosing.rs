use super::{DiskSpec, Point2};

/// Smallest disk containing all points (Welzl's incremental algorithm).
pub fn min_enclosing_disk(points: &[Point2]) -> DiskSpec {
    assert!(!points.is_empty());
    let mut c = points[0];
    let mut r = 0.0;
    let eps = 1e-12;
    let inside = |c: Point2, r: f64, p: Point2| p.dist(c) <= r * (1.0 + eps) + eps * 1e-3;
    for i in 1..points.len() {
        if inside(c, r, points[i]) {
            continue;
        }
        c = points[i];
        r = 0.0;
        for j in 0..i {
            if inside(c, r, points[j]) {
                continue;
            }
            c = (points[i] + points[j]) * 0.5;
            r = points[i].dist(c);
            for k in 0..j {
                if inside(c, r, points[k]) {
                    continue;
                }
                match circumcircle(points[i], points[j], points[k]) {
                    Some((cc, rr)) => {
                        c = cc;
                        r = rr;
                    }
                    None => {
                        // collinear: widest pair
                        let pairs = [(points[i], points[j]), (points[i], points[k]), (points[j], points[k])];
                        let (a, b) = pairs
                            .into_iter()
                            .max_by(|x, y| x.0.dist(x.1).total_cmp(&y.0.dist(y.1)))
                            .unwrap();
                        c = (a + b) * 0.5;
                        r = a.dist(c);
                    }
                }
            }
        }
    }
    DiskSpec { center: c, radius: r }
}

fn circumcircle(a: Point2, b: Point2, c: Point2) -> Option<(Point2, f64)> {
    let (ab, ac) = (b - a, c - a);
    let d = 2.0 * ab.cross(ac);
    if d.abs() < 1e-300 {
        return None;
    }
    let (b2, c2) = (ab.norm_sq(), ac.norm_sq());
    let ux = (ac.y * b2 - ab.y * c2) / d;
    let uy = (ab.x * c2 - ac.x * b2) / d;
    let center = a + Point2::new(ux, uy);
    Some((center, center.dist(a)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_enclosing_disk() {
        let pts = [
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
            Point2::new(0.5, 0.5),
        ];
        let d = min_enclosing_disk(&pts);
        assert!(d.center.dist(Point2::new(0.5, 0.5)) < 1e-12);
        assert!((d.radius - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn obtuse_triangle_uses_diameter() {
        let pts = [Point2::new(-1.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.0, 0.2)];
        let d = min_enclosing_disk(&pts);
        assert!((d.radius - 1.0).abs() < 1e-12);
    }

    #[test]
    fn all_points_covered() {
        let pts: Vec<Point2> = (0..50)
            .map(|k| {
                let t = k as f64 * 0.7;
                Point2::new(t.sin() * (1.0 + 0.3 * (3.0 * t).cos()), t.cos() * 0.8)
            })
            .collect();
        let d = min_enclosing_disk(&pts);
        assert!(pts.iter().all(|p| p.dist(d.center) <= d.radius * (1.0 + 1e-9)));
    }
}
