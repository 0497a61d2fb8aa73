//! Newtonian volume potential of a constant source over a convex polygon.
//!
//! `φ(x) = -(s/2π) ∫_Ω log|x - y| dy` satisfies `-Δφ = s`. Integrating by parts
//! turns the area integral into a sum of closed-form edge integrals.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{ConvexPolygon, Edge, Point2};

/// Target point expressed in the local frame of one edge.
#[derive(Debug, Clone, Copy)]
pub struct SegmentQuadParams {
    /// `(a - x)·v`
    pub alpha: f64,
    /// `(b - x)·v`
    pub beta: f64,
    /// `(x - a)·n`, positive on the inner side.
    pub sigma: f64,
    pub tangent: Point2,
    pub normal: Point2,
}

impl SegmentQuadParams {
    pub fn new(edge: &Edge, x: Point2) -> Self {
        Self {
            alpha: (edge.a - x).dot(edge.tangent),
            beta: (edge.b - x).dot(edge.tangent),
            sigma: (x - edge.a).dot(edge.normal),
            tangent: edge.tangent,
            normal: edge.normal,
        }
    }

    /// Raw frame values; tangent `(1, 0)` and normal `(0, 1)`.
    pub fn from_values(alpha: f64, beta: f64, sigma: f64) -> Self {
        Self {
            alpha,
            beta,
            sigma,
            tangent: Point2::new(1.0, 0.0),
            normal: Point2::new(0.0, 1.0),
        }
    }

    /// Angle subtended by the segment, `atan(β/σ) − atan(α/σ)`, written with
    /// `atan2` so that `σ → 0` needs no special case.
    fn subtended_angle(&self) -> f64 {
        let (a, b, s) = (self.alpha, self.beta, self.sigma);
        ((b - a) * s).atan2(s * s + a * b)
    }
}

/// `t log √(t² + σ²)` with the value 0 at `t = 0`.
#[inline]
fn t_log_r(t: f64, sigma: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        0.5 * t * (t * t + sigma * sigma).ln()
    }
}

/// `∫_α^β (log √(t² + σ²) − ½) dt`.
pub fn segment_log_integral(q: &SegmentQuadParams) -> f64 {
    let (a, b, s) = (q.alpha, q.beta, q.sigma);
    if a == b {
        return 0.0;
    }
    let angle = if s == 0.0 { 0.0 } else { s * q.subtended_angle() };
    t_log_r(b, s) - t_log_r(a, s) - 1.5 * (b - a) + angle
}

/// `(∫_α^β t/(t² + σ²) dt, ∫_α^β σ/(t² + σ²) dt)`.
pub fn segment_vector_integral(q: &SegmentQuadParams) -> Result<(f64, f64)> {
    let (a, b, s) = (q.alpha, q.beta, q.sigma);
    if s == 0.0 && a.min(b) <= 0.0 && a.max(b) >= 0.0 {
        return Err(Error::OnBoundarySegment);
    }
    let log_ratio = 0.5 * ((b * b + s * s).ln() - (a * a + s * s).ln());
    Ok((log_ratio, q.subtended_angle()))
}

/// Volume potential of the constant source `strength` on `polygon`.
#[derive(Debug, Clone)]
pub struct VolumePotential {
    pub polygon: ConvexPolygon,
    pub strength: f64,
}

impl VolumePotential {
    pub fn new(polygon: ConvexPolygon, strength: f64) -> Result<Self> {
        if !(strength > 0.0) || !strength.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "strength must be positive, got {strength}"
            )));
        }
        Ok(Self { polygon, strength })
    }

    /// `φ(x)`; valid on the closed domain (and outside it).
    pub fn phi(&self, x: Point2) -> f64 {
        let sum: f64 = self
            .polygon
            .edges()
            .map(|e| {
                let q = SegmentQuadParams::new(&e, x);
                -q.sigma * segment_log_integral(&q)
            })
            .sum();
        self.strength * sum / (4.0 * PI)
    }

    /// `∇φ(x)`. Fails only at polygon vertices, where the boundary form is singular.
    pub fn grad_phi(&self, x: Point2) -> Result<Point2> {
        if self.polygon.nearest_vertex_distance(x) <= 1e-14 * self.polygon.diameter() {
            return Err(Error::VertexEvaluation { x: x.x, y: x.y });
        }
        Ok(self.grad_phi_unchecked(x))
    }

    /// `∇φ` without the vertex check; callers guarantee `x` is not a vertex.
    pub(crate) fn grad_phi_unchecked(&self, x: Point2) -> Point2 {
        let mut g = Point2::ORIGIN;
        for e in self.polygon.edges() {
            let q = SegmentQuadParams::new(&e, x);
            let i_log = segment_log_integral(&q);
            // σ L and σ Θ vanish with σ; L itself blows up only at the endpoints.
            let (sl, st) = if q.sigma == 0.0 {
                (0.0, 0.0)
            } else {
                let log_ratio =
                    0.5 * ((q.beta * q.beta + q.sigma * q.sigma).ln() - (q.alpha * q.alpha + q.sigma * q.sigma).ln());
                (q.sigma * log_ratio, q.sigma * q.subtended_angle())
            };
            g = g + e.normal * (-i_log - st) + e.tangent * sl;
        }
        g * (self.strength / (4.0 * PI))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::regular_ngon;
    use crate::quadrature::adaptive;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn log_quad(a: f64, b: f64, s: f64) -> f64 {
        // split at 0 so the log singularity sits at an endpoint
        let f = |t: f64| 0.5 * (t * t + s * s).ln() - 0.5;
        if a < 0.0 && b > 0.0 {
            adaptive(a, 0.0, 1e-14, f) + adaptive(0.0, b, 1e-14, f)
        } else {
            adaptive(a, b, 1e-14, f)
        }
    }

    #[test]
    fn log_integral_empty_interval() {
        assert_eq!(
            segment_log_integral(&SegmentQuadParams::from_values(0.3, 0.3, 0.7)),
            0.0
        );
    }

    #[test]
    fn log_integral_on_the_line() {
        // ∫_{-1}^{1} (log|t| − ½) dt = −2 − 1
        let v = segment_log_integral(&SegmentQuadParams::from_values(-1.0, 1.0, 0.0));
        assert!((v + 3.0).abs() < 1e-15, "{v}");
        assert!((v - log_quad(-1.0, 1.0, 0.0)).abs() < 1e-10);
    }

    #[test]
    fn log_integral_matches_quadrature() {
        let v = segment_log_integral(&SegmentQuadParams::from_values(0.0, 1.0, 1.0));
        assert!((v - log_quad(0.0, 1.0, 1.0)).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a: f64 = rng.gen_range(-3.0..2.0);
            let b = a + rng.gen_range(0.01..3.0);
            let s: f64 = rng.gen_range(-2.0..2.0);
            let v = segment_log_integral(&SegmentQuadParams::from_values(a, b, s));
            assert!((v - log_quad(a, b, s)).abs() < 1e-11, "{a} {b} {s}");
        }
    }

    #[test]
    fn vector_integral_closed_forms() {
        let (l, t) = segment_vector_integral(&SegmentQuadParams::from_values(0.0, 1.0, 1.0)).unwrap();
        assert!((l - 0.5 * 2f64.ln()).abs() < 1e-15);
        assert!((t - PI / 4.0).abs() < 1e-15);
        let (l, _) = segment_vector_integral(&SegmentQuadParams::from_values(-0.7, 0.7, 0.3)).unwrap();
        assert!(l.abs() < 1e-15);
        assert!(matches!(
            segment_vector_integral(&SegmentQuadParams::from_values(-1.0, 1.0, 0.0)),
            Err(Error::OnBoundarySegment)
        ));
    }

    #[test]
    fn vector_integral_matches_quadrature() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let a: f64 = rng.gen_range(-3.0..2.0);
            let b = a + rng.gen_range(0.01..3.0);
            let s: f64 = rng.gen_range(0.05..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let (l, t) = segment_vector_integral(&SegmentQuadParams::from_values(a, b, s)).unwrap();
            let lq = adaptive(a, b, 1e-14, |x| x / (x * x + s * s));
            let tq = adaptive(a, b, 1e-14, |x| s / (x * x + s * s));
            assert!((l - lq).abs() < 1e-12 && (t - tq).abs() < 1e-12);
        }
    }

    #[test]
    fn disk_center_value() {
        let p = regular_ngon(1024, PI * 0.49).unwrap();
        let v = VolumePotential::new(p, 1.0).unwrap();
        let r: f64 = 0.7;
        let exact = r * r / 4.0 - 0.5 * r * r * r.ln();
        assert!((v.phi(Point2::ORIGIN) - exact).abs() < 1e-6);
    }

    #[test]
    fn linear_in_strength() {
        let p = regular_ngon(7, 1.0).unwrap();
        let v1 = VolumePotential::new(p.clone(), 1.0).unwrap();
        let v2 = VolumePotential::new(p, 2.0).unwrap();
        let x = Point2::new(0.1, -0.2);
        assert_eq!(v2.phi(x), 2.0 * v1.phi(x));
    }

    #[test]
    fn symmetric_points_agree() {
        let p = regular_ngon(6, 1.0).unwrap();
        let v = VolumePotential::new(p, 1.0).unwrap();
        let x = Point2::new(0.21, 0.13);
        let y = x.rotate(PI / 3.0);
        assert!((v.phi(x) - v.phi(y)).abs() < 1e-12);
        assert!(v.grad_phi(Point2::ORIGIN).unwrap().norm() < 1e-12);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let p = ConvexPolygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.3, 0.1),
            Point2::new(1.1, 0.9),
            Point2::new(0.2, 1.2),
        ])
        .unwrap();
        let v = VolumePotential::new(p.clone(), 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = 1e-5;
        let mut n = 0;
        while n < 100 {
            let x = Point2::new(rng.gen_range(0.0..1.3), rng.gen_range(0.0..1.2));
            if p.inner_margin(x) < 1e-3 {
                continue;
            }
            n += 1;
            let g = v.grad_phi(x).unwrap();
            let gx = (v.phi(x + Point2::new(h, 0.0)) - v.phi(x - Point2::new(h, 0.0))) / (2.0 * h);
            let gy = (v.phi(x + Point2::new(0.0, h)) - v.phi(x - Point2::new(0.0, h))) / (2.0 * h);
            assert!((g.x - gx).abs() < 1e-7 && (g.y - gy).abs() < 1e-7);
        }
    }

    #[test]
    fn negative_laplacian_is_strength() {
        let p = regular_ngon(5, 2.0).unwrap();
        let v = VolumePotential::new(p, 2.0).unwrap();
        let h = 1e-4;
        for x in [Point2::new(0.1, 0.2), Point2::new(-0.3, 0.0), Point2::new(0.0, -0.4)] {
            let lap = (v.phi(x + Point2::new(h, 0.0))
                + v.phi(x - Point2::new(h, 0.0))
                + v.phi(x + Point2::new(0.0, h))
                + v.phi(x - Point2::new(0.0, h))
                - 4.0 * v.phi(x))
                / (h * h);
            assert!((-lap - 2.0).abs() < 2e-4, "{lap}");
        }
    }

    #[test]
    fn radial_gradient_on_disk() {
        let r0: f64 = 0.8;
        let p = regular_ngon(1024, PI * r0 * r0).unwrap();
        let v = VolumePotential::new(p, 1.0).unwrap();
        for r in [0.1, 0.4, 0.7] {
            let g = v.grad_phi(Point2::from_polar(r, 0.3)).unwrap();
            // inside the disk, dφ/dr = −r/2
            assert!((g.norm() - r / 2.0).abs() < 1e-5);
        }
    }

    #[test]
    fn continuous_up_to_the_boundary() {
        let p = regular_ngon(4, 1.0).unwrap();
        let v = VolumePotential::new(p.clone(), 1.0).unwrap();
        let e = p.edge(1);
        let x0 = e.point_at(0.37);
        let x1 = x0 + e.normal * 1e-10;
        assert!((v.phi(x0) - v.phi(x1)).abs() < 1e-8);
        let (g0, g1) = (v.grad_phi(x0).unwrap(), v.grad_phi(x1).unwrap());
        assert!((g0 - g1).norm() < 1e-8);
        assert!(matches!(v.grad_phi(p.vertex(2)), Err(Error::VertexEvaluation { .. })));
    }
}
