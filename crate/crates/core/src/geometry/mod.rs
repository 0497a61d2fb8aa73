//! Exact convex-polygon geometry.
//!
//! Every domain in the crate is a [`ConvexPolygon`]: a counterclockwise vertex
//! list, validated once at construction. Curved domains (disks, ellipses) are
//! handled upstream by many-vertex approximations.

mod asymmetry;
mod circle;
mod cone;
mod enclosing;
mod hull;

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use asymmetry::{fraenkel_asymmetry, AsymmetryResult};
pub use circle::{circle_polygon_intersection_area, sublevel_area};
pub use cone::{cone_hull, cone_hull_area, ConeHull};
pub use enclosing::min_enclosing_disk;
pub use hull::convex_hull;

/// Relative tolerance of the convexity test, scaled by the squared diameter.
pub const CONVEXITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 2-D cross product.
    #[inline]
    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    /// Counterclockwise rotation by 90 degrees.
    #[inline]
    pub fn perp(self) -> Point2 {
        Point2::new(-self.y, self.x)
    }

    pub fn rotate(self, angle: f64) -> Point2 {
        let (s, c) = angle.sin_cos();
        Point2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn from_polar(r: f64, theta: f64) -> Point2 {
        let (s, c) = theta.sin_cos();
        Point2::new(r * c, r * s)
    }
}

impl Add for Point2 {
    type Output = Point2;
    #[inline]
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    #[inline]
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    #[inline]
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    #[inline]
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl From<[f64; 2]> for Point2 {
    fn from(v: [f64; 2]) -> Self {
        Point2::new(v[0], v[1])
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

/// A disk `{x : |x - center| ≤ radius}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskSpec {
    pub center: Point2,
    pub radius: f64,
}

impl DiskSpec {
    pub fn new(center: Point2, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() || !center.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "disk radius must be positive and finite, got {radius}"
            )));
        }
        Ok(Self { center, radius })
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.dist(self.center) <= self.radius
    }
}

/// One edge of a polygon in its local frame.
#[derive(Debug, Clone, Copy)]
pub struct Edge {
    pub a: Point2,
    pub b: Point2,
    /// Unit tangent from `a` to `b`.
    pub tangent: Point2,
    /// Unit inward normal (left of the tangent for counterclockwise polygons).
    pub normal: Point2,
    pub length: f64,
}

impl Edge {
    fn new(a: Point2, b: Point2) -> Self {
        let d = b - a;
        let length = d.norm();
        let tangent = d * (1.0 / length);
        Self {
            a,
            b,
            tangent,
            normal: tangent.perp(),
            length,
        }
    }

    /// Point at arclength fraction `t ∈ [0, 1]`.
    #[inline]
    pub fn point_at(&self, t: f64) -> Point2 {
        self.a + (self.b - self.a) * t
    }

    /// Signed distance of `p` from the edge line, positive on the inner side.
    #[inline]
    pub fn inner_distance(&self, p: Point2) -> f64 {
        (p - self.a).dot(self.normal)
    }

    /// Euclidean distance from `p` to the closed segment, and the closest
    /// parameter `t ∈ [0, 1]`.
    pub fn segment_distance(&self, p: Point2) -> (f64, f64) {
        let t = ((p - self.a).dot(self.tangent) / self.length).clamp(0.0, 1.0);
        (p.dist(self.point_at(t)), t)
    }
}

/// A convex polygon with counterclockwise vertices.
///
/// Serialises as `{"vertices": [[x, y], ...]}`; deserialisation validates and
/// reverses clockwise input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolygonJson", into = "PolygonJson")]
pub struct ConvexPolygon {
    vertices: Vec<Point2>,
}

#[derive(Serialize, Deserialize)]
struct PolygonJson {
    vertices: Vec<[f64; 2]>,
}

impl TryFrom<PolygonJson> for ConvexPolygon {
    type Error = Error;

    fn try_from(j: PolygonJson) -> Result<Self> {
        ConvexPolygon::new(j.vertices.iter().map(|&[x, y]| Point2::new(x, y)).collect())
    }
}

impl From<ConvexPolygon> for PolygonJson {
    fn from(p: ConvexPolygon) -> Self {
        PolygonJson {
            vertices: p.vertices.iter().map(|v| [v.x, v.y]).collect(),
        }
    }
}

impl ConvexPolygon {
    /// Validates and stores the vertices. Clockwise input is reversed.
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        let mut vertices = vertices;
        if vertices.len() < 3 {
            return Err(Error::InvalidPolygon(format!(
                "need at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidPolygon("non-finite coordinate".into()));
        }
        let signed = shoelace(&vertices);
        if signed < 0.0 {
            vertices.reverse();
        }
        let diam = diameter(&vertices);
        if !(diam > 0.0) {
            return Err(Error::InvalidPolygon("degenerate polygon".into()));
        }
        let n = vertices.len();
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            if a.dist(b) <= 1e-14 * diam {
                return Err(Error::InvalidPolygon(format!("repeated vertex at index {i}")));
            }
        }
        let tol = CONVEXITY_TOL * diam * diam;
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            if (b - a).cross(c - b) < -tol {
                return Err(Error::InvalidPolygon(format!("not convex at vertex {}", (i + 1) % n)));
            }
        }
        // A star with winding number > 1 passes the local test; total turning must be 2π.
        let turning: f64 = (0..n)
            .map(|i| {
                let a = vertices[i];
                let b = vertices[(i + 1) % n];
                let c = vertices[(i + 2) % n];
                let (u, v) = (b - a, c - b);
                u.cross(v).atan2(u.dot(v))
            })
            .sum();
        if (turning - 2.0 * PI).abs() > 1e-6 {
            return Err(Error::InvalidPolygon("self-intersecting vertex order".into()));
        }
        let area = shoelace(&vertices);
        if !(area > 1e-14 * diam * diam) {
            return Err(Error::InvalidPolygon("non-positive area".into()));
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> Point2 {
        self.vertices[i % self.vertices.len()]
    }

    pub fn edge(&self, i: usize) -> Edge {
        Edge::new(self.vertex(i), self.vertex(i + 1))
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.len()).map(move |i| self.edge(i))
    }

    /// Shoelace area.
    pub fn area(&self) -> f64 {
        shoelace(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|e| e.length).sum()
    }

    /// Area centroid.
    pub fn centroid(&self) -> Point2 {
        let o = self.vertices[0];
        let mut cx = 0.0;
        let mut cy = 0.0;
        let mut a2 = 0.0;
        for i in 1..self.len() - 1 {
            let p = self.vertices[i] - o;
            let q = self.vertices[i + 1] - o;
            let w = p.cross(q);
            a2 += w;
            cx += w * (p.x + q.x);
            cy += w * (p.y + q.y);
        }
        Point2::new(o.x + cx / (3.0 * a2), o.y + cy / (3.0 * a2))
    }

    pub fn diameter(&self) -> f64 {
        diameter(&self.vertices)
    }

    /// Smallest inner distance to the edge lines; positive iff strictly inside.
    pub fn inner_margin(&self, p: Point2) -> f64 {
        self.edges().map(|e| e.inner_distance(p)).fold(f64::INFINITY, f64::min)
    }

    /// Closed-set membership with an absolute tolerance.
    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        self.inner_margin(p) >= -tol
    }

    /// Strict interior membership.
    pub fn contains_strict(&self, p: Point2) -> bool {
        self.inner_margin(p) > 0.0
    }

    /// Distance from `p` to the boundary, with the index and parameter of the
    /// closest edge point.
    pub fn boundary_distance(&self, p: Point2) -> (f64, usize, f64) {
        let mut best = (f64::INFINITY, 0, 0.0);
        for (i, e) in self.edges().enumerate() {
            let (d, t) = e.segment_distance(p);
            if d < best.0 {
                best = (d, i, t);
            }
        }
        best
    }

    /// For interior points the distance to the boundary is the smallest edge-line distance.
    pub fn distance_to_boundary(&self, p: Point2) -> f64 {
        self.boundary_distance(p).0
    }

    pub fn translate(&self, d: Point2) -> ConvexPolygon {
        ConvexPolygon {
            vertices: self.vertices.iter().map(|&p| p + d).collect(),
        }
    }

    /// Scaling about the origin.
    pub fn scale(&self, s: f64) -> ConvexPolygon {
        assert!(s > 0.0);
        ConvexPolygon {
            vertices: self.vertices.iter().map(|&p| p * s).collect(),
        }
    }

    /// Rotation about the origin.
    pub fn rotate(&self, angle: f64) -> ConvexPolygon {
        ConvexPolygon {
            vertices: self.vertices.iter().map(|&p| p.rotate(angle)).collect(),
        }
    }

    /// Same polygon with the vertex list starting at index `k`.
    pub fn cycle_start(&self, k: usize) -> ConvexPolygon {
        let n = self.len();
        ConvexPolygon {
            vertices: (0..n).map(|i| self.vertices[(i + k) % n]).collect(),
        }
    }

    /// Rescaled about the centroid to the given area.
    pub fn with_area(&self, target: f64) -> ConvexPolygon {
        let c = self.centroid();
        let s = (target / self.area()).sqrt();
        ConvexPolygon {
            vertices: self.vertices.iter().map(|&p| c + (p - c) * s).collect(),
        }
    }

    /// Radius of the largest inscribed disk and its (Chebyshev) center.
    ///
    /// Bisection on the radius: the polygon shrunk by `r` is the intersection of
    /// the offset half-planes, computed by successive clipping. The returned
    /// center is the centroid of the last nonempty shrunk region, which is the
    /// midpoint of the center segment when it is not unique.
    pub fn inradius_and_center(&self) -> (f64, Point2) {
        let edges: Vec<Edge> = self.edges().collect();
        let shrunk = |r: f64| -> Option<Vec<Point2>> {
            let mut region = self.vertices.clone();
            for e in &edges {
                region = clip_half_plane(&region, e.normal, e.normal.dot(e.a) + r);
                if region.is_empty() {
                    return None;
                }
            }
            Some(region)
        };
        let centroid = self.centroid();
        let mut lo = self.inner_margin(centroid).max(0.0);
        let mut hi = self.diameter();
        let mut best = shrunk(lo).unwrap_or_else(|| vec![centroid]);
        for _ in 0..200 {
            if hi - lo <= 1e-15 * self.diameter() {
                break;
            }
            let mid = 0.5 * (lo + hi);
            match shrunk(mid) {
                Some(region) => {
                    lo = mid;
                    best = region;
                }
                None => hi = mid,
            }
        }
        let center = points_centroid(&best);
        (self.inner_margin(center), center)
    }

    /// `∫_Ω |x - origin|² dx`, exact, by signed triangle fans from `origin`.
    pub fn polar_momentum(&self, origin: Point2) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| {
                let a = self.vertices[i] - origin;
                let b = self.vertices[(i + 1) % n] - origin;
                let signed_area = 0.5 * a.cross(b);
                signed_area * (a.norm_sq() + b.norm_sq() + a.dot(b)) / 6.0
            })
            .sum()
    }

    pub fn circle_intersection_area(&self, disk: &DiskSpec) -> f64 {
        circle_polygon_intersection_area(self, disk)
    }

    /// Minimum distance between any vertex and the given point.
    pub fn nearest_vertex_distance(&self, p: Point2) -> f64 {
        self.vertices.iter().map(|v| v.dist(p)).fold(f64::INFINITY, f64::min)
    }

    /// Whether `other` is contained in `self` (all of its vertices are).
    pub fn contains_polygon(&self, other: &ConvexPolygon, tol: f64) -> bool {
        other.vertices.iter().all(|&v| self.contains(v, tol))
    }
}

/// Regular `n`-gon centred at the origin with exact area `target_area` and a
/// horizontal bottom edge.
pub fn regular_ngon(n: usize, target_area: f64) -> Result<ConvexPolygon> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("regular n-gon needs n >= 3, got {n}")));
    }
    if !(target_area > 0.0) {
        return Err(Error::InvalidParameter("target area must be positive".into()));
    }
    let nf = n as f64;
    let radius = (2.0 * target_area / (nf * (2.0 * PI / nf).sin())).sqrt();
    let start = -PI / 2.0 - PI / nf;
    let vertices = (0..n)
        .map(|k| Point2::from_polar(radius, start + 2.0 * PI * k as f64 / nf))
        .collect();
    ConvexPolygon::new(vertices)
}

/// Area of a polygon with the given counterclockwise vertices (signed).
pub fn shoelace(vertices: &[Point2]) -> f64 {
    let n = vertices.len();
    if n < 3 {
        return 0.0;
    }
    let o = vertices[0];
    0.5 * (1..n - 1)
        .map(|i| (vertices[i] - o).cross(vertices[i + 1] - o))
        .sum::<f64>()
}

fn diameter(vertices: &[Point2]) -> f64 {
    let mut d = 0.0f64;
    for (i, a) in vertices.iter().enumerate() {
        for b in &vertices[i + 1..] {
            d = d.max(a.dist(*b));
        }
    }
    d
}

fn points_centroid(points: &[Point2]) -> Point2 {
    let a = shoelace(points);
    if points.len() >= 3 && a.abs() > 1e-300 {
        let o = points[0];
        let mut c = Point2::ORIGIN;
        let mut a2 = 0.0;
        for i in 1..points.len() - 1 {
            let p = points[i] - o;
            let q = points[i + 1] - o;
            let w = p.cross(q);
            a2 += w;
            c = c + (p + q) * w;
        }
        if a2.abs() > 0.0 {
            return o + c * (1.0 / (3.0 * a2));
        }
    }
    let n = points.len().max(1) as f64;
    points.iter().fold(Point2::ORIGIN, |acc, &p| acc + p) * (1.0 / n)
}

/// Sutherland–Hodgman clip of a convex region to `{x : normal·x ≥ offset}`.
pub(crate) fn clip_half_plane(region: &[Point2], normal: Point2, offset: f64) -> Vec<Point2> {
    let n = region.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let p = region[i];
        let q = region[(i + 1) % n];
        let dp = normal.dot(p) - offset;
        let dq = normal.dot(q) - offset;
        if dp >= 0.0 {
            out.push(p);
        }
        if (dp >= 0.0) != (dq >= 0.0) {
            let t = dp / (dp - dq);
            out.push(p + (q - p) * t);
        }
    }
    out
}
