//! Independent ground truth: closed forms and a walk-on-spheres estimator.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ConvexPolygon, Point2};
use crate::optim::bisect;
use crate::quadrature::pairwise_sum;

/// Torsion function of the disk of radius `R` at distance `r` from the center:
/// `(u, |∇u|) = (s (R² − r²)/4, s r/2)`.
pub fn disk_closed_form(radius: f64, strength: f64, r: f64) -> Result<(f64, f64)> {
    if !(radius > 0.0) || !(0.0..=radius).contains(&r) {
        return Err(Error::InvalidParameter(format!(
            "need 0 <= r <= R, got r = {r}, R = {radius}"
        )));
    }
    Ok((strength * (radius * radius - r * r) / 4.0, strength * r / 2.0))
}

/// The ellipse family `u = 1 − (a x² + (1 − a) y²)/2`, which solves `−Δu = 1`
/// inside `{u > 0}`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EllipseTorsion {
    pub a: f64,
}

impl EllipseTorsion {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "ellipse parameter must be in (0, 1), got {a}"
            )));
        }
        Ok(Self { a })
    }

    /// Semi-axes `(√(2/a), √(2/(1 − a)))` along x and y.
    pub fn semi_axes(&self) -> (f64, f64) {
        ((2.0 / self.a).sqrt(), (2.0 / (1.0 - self.a)).sqrt())
    }

    pub fn area(&self) -> f64 {
        let (p, q) = self.semi_axes();
        PI * p * q
    }

    pub fn u(&self, x: Point2) -> f64 {
        1.0 - 0.5 * (self.a * x.x * x.x + (1.0 - self.a) * x.y * x.y)
    }

    pub fn grad(&self, x: Point2) -> Point2 {
        Point2::new(-self.a * x.x, -(1.0 - self.a) * x.y)
    }

    /// Maximal boundary gradient, attained at the ends of the short axis.
    pub fn max_grad(&self) -> f64 {
        let a = self.a.max(1.0 - self.a);
        (2.0 * a).sqrt()
    }

    /// Convex polygon with `n` vertices on the ellipse, rescaled to `area`.
    pub fn polygon(&self, n: usize, area: f64) -> Result<ConvexPolygon> {
        let (p, q) = self.semi_axes();
        let verts = (0..n)
            .map(|k| {
                let t = 2.0 * PI * (k as f64 + 0.5) / n as f64;
                Point2::new(p * t.cos(), q * t.sin())
            })
            .collect();
        Ok(ConvexPolygon::new(verts)?.with_area(area))
    }
}

/// Lower bound `√(2a) (a(1 − a))^{1/4} / √(2π)` on `max|∇u| / |Ω|^{1/2}` from
/// the ellipse family, using the gradient `√(2a)` at the end of the x semi-axis.
/// Exact for `a ≥ 1/2`.
pub fn ellipse_c(a: f64) -> f64 {
    if !(a > 0.0 && a < 1.0) {
        return 0.0;
    }
    (2.0 * a).sqrt() * (a * (1.0 - a)).powf(0.25) / (2.0 * PI).sqrt()
}

/// Maximiser of [`ellipse_c`]: the root of `d/da log c = 3/(4a) − 1/(4(1 − a))`
/// on `(0, 1)`.
pub fn optimal_ellipse() -> (f64, f64) {
    let a = bisect(|a| 3.0 / (4.0 * a) - 1.0 / (4.0 * (1.0 - a)), 1e-9, 1.0 - 1e-9, 1e-15)
        .expect("log-derivative changes sign on (0, 1)");
    (a, ellipse_c(a))
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WosConfig {
    pub n_paths: usize,
    /// Stop once the walker is this close to the boundary.
    pub stop_distance: f64,
    pub seed: u64,
}

impl Default for WosConfig {
    fn default() -> Self {
        Self {
            n_paths: 100_000,
            stop_distance: 1e-6,
            seed: 0,
        }
    }
}

/// Walk-on-spheres estimate of the expected exit time of standard Brownian
/// motion from `p` started at `x`, i.e. the torsion function for `−Δu = 2`.
///
/// Path `k` draws from its own ChaCha stream, so results do not depend on the
/// thread count. Returns `(mean, standard error)`.
pub fn wos_lifetime(p: &ConvexPolygon, x: Point2, cfg: &WosConfig) -> Result<(f64, f64)> {
    if !p.contains_strict(x) {
        return Err(Error::OutsideDomain { x: x.x, y: x.y });
    }
    if cfg.n_paths == 0 || !(cfg.stop_distance > 0.0) {
        return Err(Error::InvalidParameter(
            "need n_paths >= 1 and stop_distance > 0".into(),
        ));
    }
    // Half-plane form of the edges: distance = min_i (n_i·x − c_i).
    let lines: Vec<(Point2, f64)> = p.edges().map(|e| (e.normal, e.normal.dot(e.a))).collect();
    let dist = |z: Point2| lines.iter().map(|&(n, c)| n.dot(z) - c).fold(f64::INFINITY, f64::min);
    let samples: Vec<f64> = (0..cfg.n_paths)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(k as u64);
            let mut z = x;
            let mut acc = 0.0;
            loop {
                let d = dist(z);
                if d < cfg.stop_distance {
                    break acc;
                }
                acc += 0.5 * d * d;
                let th = rng.gen::<f64>() * 2.0 * PI;
                z = z + Point2::new(th.cos(), th.sin()) * d;
            }
        })
        .collect();
    let n = samples.len() as f64;
    let mean = pairwise_sum(&samples) / n;
    let sq: Vec<f64> = samples.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = if samples.len() > 1 {
        pairwise_sum(&sq) / (n - 1.0)
    } else {
        0.0
    };
    Ok((mean, (var / n).sqrt()))
}

/// Flux-normalised constant of the unit square, `max|∇u| / (s |Ω|^{1/2})`.
///
/// From the sine series of the square torsion function, the midpoint flux is
/// `(4/π²) Σ_{m odd} sin(mπ/2) tanh(mπ/2)/m²`; the tanh-free part sums to
/// Catalan's constant.
pub fn square_c() -> f64 {
    const CATALAN: f64 = 0.915_965_594_177_219;
    let mut corr = 0.0;
    let mut m = 1u32;
    loop {
        let mf = m as f64;
        let sign = if (m / 2) & 1 == 0 { 1.0 } else { -1.0 };
        let term = sign * (1.0 - (mf * PI / 2.0).tanh()) / (mf * mf);
        corr += term;
        if term.abs() < 1e-18 {
            break;
        }
        m += 2;
    }
    4.0 / (PI * PI) * (CATALAN - corr)
}

/// `max u` of the unit square for `−Δu = 1`, from the one-dimensional series
/// `u = x(1 − x)/2 − Σ_{m odd} 4/(π³m³) cosh(mπ(y − ½))/cosh(mπ/2) sin(mπx)`.
pub fn square_max_u() -> f64 {
    let mut s = 0.125;
    let mut m = 1u32;
    while m < 200 {
        let mf = m as f64;
        let sign = if (m / 2) & 1 == 0 { 1.0 } else { -1.0 };
        s -= 4.0 * sign / (PI.powi(3) * mf.powi(3) * (mf * PI / 2.0).cosh());
        m += 2;
    }
    s
}

/// `∫u` of the unit square for `−Δu = 1`: `1/12 − Σ_{m odd} 16 tanh(mπ/2)/(π⁵m⁵)`.
pub fn square_rigidity() -> f64 {
    let mut s = 1.0 / 12.0;
    let mut m = 1u32;
    while m < 2000 {
        let mf = m as f64;
        s -= 16.0 * (mf * PI / 2.0).tanh() / (PI.powi(5) * mf.powi(5));
        m += 2;
    }
    s
}
