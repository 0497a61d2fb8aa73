//! Gauss–Legendre rules, triangle rules and adaptive 1-D integration.

use std::f64::consts::PI;

use crate::geometry::Point2;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the `n`-point rule by Newton iteration on the three-term recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess, refined by Newton.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(mid + half * t))
            .sum::<f64>()
            * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Globally adaptive Gauss–Legendre integration on `[a, b]`.
///
/// Each interval carries the difference between its 15-point estimate and the
/// sum of its two halves as an error estimate; the worst interval is bisected
/// until the total estimate drops below `tol` or roundoff level, or the
/// interval budget is spent.
pub fn adaptive<F: FnMut(f64) -> f64>(a: f64, b: f64, tol: f64, mut f: F) -> f64 {
    thread_local! {
        static RULE: GaussLegendre = GaussLegendre::new(15);
    }
    RULE.with(|rule| adaptive_with(rule, a, b, tol, &mut f))
}

const MAX_INTERVALS: usize = 4000;

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

fn adaptive_with<F: FnMut(f64) -> f64>(rule: &GaussLegendre, a: f64, b: f64, tol: f64, f: &mut F) -> f64 {
    let piece = |a: f64, b: f64, whole: f64, f: &mut F| {
        let m = 0.5 * (a + b);
        let l = rule.integrate(a, m, &mut *f);
        let r = rule.integrate(m, b, &mut *f);
        (
            Piece {
                a,
                b: m,
                value: l,
                err: f64::INFINITY,
            },
            Piece {
                a: m,
                b,
                value: r,
                err: f64::INFINITY,
            },
            (l + r - whole).abs(),
        )
    };
    let whole = rule.integrate(a, b, &mut *f);
    let (l, r, e) = piece(a, b, whole, f);
    let mut pieces = vec![Piece { err: 0.5 * e, ..l }, Piece { err: 0.5 * e, ..r }];
    loop {
        let total: f64 = pieces.iter().map(|p| p.value).sum();
        let err: f64 = pieces.iter().map(|p| p.err).sum();
        if err <= tol || err <= 1e-15 * total.abs() || pieces.len() >= MAX_INTERVALS {
            return total;
        }
        let (k, _) =
            pieces.iter().enumerate().fold(
                (0, f64::NEG_INFINITY),
                |acc, (i, p)| if p.err > acc.1 { (i, p.err) } else { acc },
            );
        let worst = pieces.swap_remove(k);
        if worst.b - worst.a <= 1e-15 * (b - a).abs() {
            pieces.push(Piece { err: 0.0, ..worst });
            continue;
        }
        let (l, r, e) = piece(worst.a, worst.b, worst.value, f);
        pieces.push(Piece { err: 0.5 * e, ..l });
        pieces.push(Piece { err: 0.5 * e, ..r });
    }
}

/// Seven-point, degree-5 rule on a triangle (barycentric points, weights sum to 1).
const TRI7: [(f64, f64, f64, f64); 7] = {
    const A1: f64 = 0.059_715_871_789_769_82;
    const B1: f64 = 0.470_142_064_105_115_1;
    const A2: f64 = 0.797_426_985_353_087_3;
    const B2: f64 = 0.101_286_507_323_456_3;
    const W0: f64 = 0.225;
    const W1: f64 = 0.132_394_152_788_506_2;
    const W2: f64 = 0.125_939_180_544_827_2;
    [
        (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, W0),
        (A1, B1, B1, W1),
        (B1, A1, B1, W1),
        (B1, B1, A1, W1),
        (A2, B2, B2, W2),
        (B2, A2, B2, W2),
        (B2, B2, A2, W2),
    ]
};

/// Points and weights of the 7-point rule on the triangle `(a, b, c)`.
pub fn triangle7(a: Point2, b: Point2, c: Point2) -> impl Iterator<Item = (Point2, f64)> {
    let area = 0.5 * ((b - a).cross(c - a)).abs();
    TRI7.iter().map(move |&(l0, l1, l2, w)| {
        (
            Point2::new(l0 * a.x + l1 * b.x + l2 * c.x, l0 * a.y + l1 * b.y + l2 * c.y),
            w * area,
        )
    })
}

/// Collapsed (Duffy) tensor Gauss rule on a triangle; exact for polynomials of
/// degree `2n - 2`.
pub fn triangle_collapsed(a: Point2, b: Point2, c: Point2, n: usize) -> Vec<(Point2, f64)> {
    let gl = GaussLegendre::new(n);
    let jac = ((b - a).cross(c - a)).abs();
    let mut out = Vec::with_capacity(n * n);
    for (&s, &ws) in gl.nodes.iter().zip(&gl.weights) {
        let u = 0.5 * (s + 1.0);
        for (&t, &wt) in gl.nodes.iter().zip(&gl.weights) {
            let v = 0.5 * (t + 1.0) * (1.0 - u);
            let p = a + (b - a) * u + (c - a) * v;
            out.push((p, 0.25 * ws * wt * (1.0 - u) * jac));
        }
    }
    out
}

/// Pairwise (cascade) summation, independent of thread scheduling.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 16 {
        return values.iter().sum();
    }
    let (l, r) = values.split_at(values.len() / 2);
    pairwise_sum(l) + pairwise_sum(r)
}
