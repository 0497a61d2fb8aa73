//! Brownian upper bound for the boundary gradient of nearly round domains.
//!
//! A particle started at distance `ε` from a supporting line either hits the
//! line before time `T`, or survives inside the strip `0 < y < π` and then
//! lives at most as long as in the enclosing unit-area disk. Everything is per
//! unit `ε` in the limit `ε → 0`, and lifetimes use the `−Δu = 2` normalization.

use std::f64::consts::PI;

use libm::{erf, erfc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::optim::golden_max;
use crate::quadrature::{adaptive, GaussLegendre};

/// Radius of the unit-area disk.
pub const UNIT_DISK_RADIUS: f64 = 0.564_189_583_547_756_3;

/// `P(T_ε ≤ t) = 2 − 2Φ(ε/√t) = erfc(ε/√(2t))` for Brownian motion started at `ε`.
pub fn hitting_cdf(eps: f64, t: f64) -> f64 {
    if eps <= 0.0 {
        return 1.0;
    }
    erfc(eps / (2.0 * t).sqrt())
}

/// `ψ(t) = ε/(√(2π) t^{3/2}) e^{−ε²/(2t)}`, the density of `T_ε`.
pub fn hitting_density(eps: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    eps / ((2.0 * PI).sqrt() * t.powf(1.5)) * (-eps * eps / (2.0 * t)).exp()
}

/// `∫₀^T ψ(t) t dt` by adaptive quadrature in `τ = √t`, which removes the
/// `t^{−1/2}` factor: the integrand becomes `2ε/√(2π) e^{−ε²/(2τ²)}`.
#[allow(non_snake_case)]
pub fn mean_before_T(eps: f64, T: f64) -> f64 {
    if eps <= 0.0 || T <= 0.0 {
        return 0.0;
    }
    let c = 2.0 * eps / (2.0 * PI).sqrt();
    adaptive(0.0, T.sqrt(), 1e-16 * c * T.sqrt(), |tau| {
        if tau == 0.0 {
            0.0
        } else {
            c * (-eps * eps / (2.0 * tau * tau)).exp()
        }
    })
}

/// Heat kernel of the strip `[0, π]` with Dirichlet ends at time `T`.
#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StripKernelParams {
    pub T: f64,
    /// Series stop at the first `k` with `k e^{−k²T/2} < truncation_tol`.
    pub truncation_tol: f64,
    /// Lower bound on the number of series terms.
    pub min_terms: usize,
}

impl StripKernelParams {
    #[allow(non_snake_case)]
    pub fn new(T: f64) -> Result<Self> {
        if !(T > 0.0) || !T.is_finite() {
            return Err(Error::InvalidParameter(format!("T must be positive, got {T}")));
        }
        Ok(Self {
            T,
            truncation_tol: 1e-17,
            min_terms: 0,
        })
    }

    pub fn n_terms(&self) -> usize {
        let mut k = 1usize;
        while (k as f64) * (-((k * k) as f64) * self.T / 2.0).exp() >= self.truncation_tol {
            k += 1;
        }
        k.max(self.min_terms)
    }

    /// Same kernel with twice as many series terms.
    pub fn doubled(&self) -> Self {
        Self {
            min_terms: 2 * self.n_terms(),
            ..*self
        }
    }

    /// `Σ_k e^{−k²T/2} k sin(ky)`.
    pub fn weighted_sine(&self, y: f64) -> f64 {
        (1..=self.n_terms())
            .map(|k| {
                let kf = k as f64;
                (-kf * kf * self.T / 2.0).exp() * kf * (kf * y).sin()
            })
            .sum()
    }

    /// Exact survival probability per unit `ε`: `(4/π) Σ_{k odd} e^{−k²T/2}`.
    pub fn survival_mass(&self) -> f64 {
        4.0 / PI
            * (1..=self.n_terms())
                .step_by(2)
                .map(|k| (-((k * k) as f64) * self.T / 2.0).exp())
                .sum::<f64>()
    }

    /// Half-line survival probability per unit `ε`: `√(2/π)/√T`.
    pub fn half_line_mass(&self) -> f64 {
        (2.0 / PI).sqrt() / self.T.sqrt()
    }

    /// Survivor mass in `[a, b]` per unit `ε`, from the termwise antiderivative.
    pub fn profile_mass(&self, a: f64, b: f64) -> f64 {
        2.0 / PI
            * (1..=self.n_terms())
                .map(|k| {
                    let kf = k as f64;
                    (-kf * kf * self.T / 2.0).exp() * ((kf * a).cos() - (kf * b).cos())
                })
                .sum::<f64>()
    }
}

/// The `ε → 0` survivor profile per unit `ε`: `(2/π) Σ k e^{−k²T/2} sin(ky)`.
pub fn strip_survivor_profile(k: &StripKernelParams, ys: &[f64]) -> Vec<f64> {
    ys.iter().map(|&y| 2.0 / PI * k.weighted_sine(y)).collect()
}

/// How survivors are normalised into a conditional density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Normalization {
    /// Divide by the half-line survival `√(2/π)/√T`:
    /// `s(x, y) = e^{−x²/(2T)}/π Σ e^{−k²T/2} k sin(ky)`.
    HalfLine,
    /// Divide by the exact strip survival series.
    Exact,
}

impl Normalization {
    /// Factor `f` with `s(x, y) = f e^{−x²/(2T)} Σ e^{−k²T/2} k sin(ky)`.
    fn factor(self, k: &StripKernelParams) -> f64 {
        match self {
            Normalization::HalfLine => 1.0 / PI,
            Normalization::Exact => 2.0 / PI / (2.0 * PI * k.T).sqrt() / k.survival_mass(),
        }
    }

    /// Survival probability per unit `ε` matching this normalization.
    fn survival(self, k: &StripKernelParams) -> f64 {
        match self {
            Normalization::HalfLine => k.half_line_mass(),
            Normalization::Exact => k.survival_mass(),
        }
    }
}

/// Survivor density `s(x, y) = e^{−x²/(2T)}/π Σ e^{−k²T/2} k sin(ky)`.
pub fn survivor_density_s(k: &StripKernelParams, x: f64, y: f64) -> f64 {
    survivor_density(k, Normalization::HalfLine, x, y)
}

pub fn survivor_density(k: &StripKernelParams, norm: Normalization, x: f64, y: f64) -> f64 {
    norm.factor(k) * (-x * x / (2.0 * k.T)).exp() * k.weighted_sine(y)
}

/// `∫ e^{−x²/(2T)} (a − (x − xc)²/2) dx` over `[xc − w, xc + w]`, `a = w²/2`.
fn gaussian_cap(t: f64, xc: f64, w: f64) -> f64 {
    let s = (2.0 * t).sqrt();
    let g0 = |x: f64| (PI * t / 2.0).sqrt() * erf(x / s);
    let e = |x: f64| (-x * x / (2.0 * t)).exp();
    let g1 = |x: f64| -t * e(x);
    let g2 = |x: f64| t * (g0(x) - x * e(x));
    let (lo, hi) = (xc - w, xc + w);
    // width-first form of g0(hi) − g0(lo) avoids cancellation for small w
    let d0 = if lo >= 0.0 || hi <= 0.0 {
        let (l, h) = if hi <= 0.0 { (-hi, -lo) } else { (lo, hi) };
        (PI * t / 2.0).sqrt() * (erfc(l / s) - erfc(h / s))
    } else {
        g0(hi) - g0(lo)
    };
    let a = 0.5 * w * w;
    (a - 0.5 * xc * xc) * d0 + xc * (g1(hi) - g1(lo)) - 0.5 * (g2(hi) - g2(lo))
}

/// `∫ s(x, y) v(x, y) dx dy` over the strip, with
/// `v = (1/(2π) − |(x, y) − c|²/2)₊` the lifetime in the unit-area disk at `c`.
///
/// The x-integral is closed form; the y-integral runs over `y = yc + R sin θ`,
/// which makes the integrand smooth up to the rim.
pub fn survivor_integral(k: &StripKernelParams, norm: Normalization, center: Point2) -> f64 {
    let r = UNIT_DISK_RADIUS;
    let th = |y: f64| ((y - center.y) / r).clamp(-1.0, 1.0).asin();
    let (t0, t1) = (th(0.0), th(PI));
    if t1 <= t0 {
        return 0.0;
    }
    let f = norm.factor(k);
    adaptive(t0, t1, 1e-15, |theta| {
        let y = center.y + r * theta.sin();
        let w = r * theta.cos();
        f * k.weighted_sine(y) * gaussian_cap(k.T, center.x, w) * r * theta.cos()
    })
}

/// The same integral by tensor Gauss–Legendre quadrature in polar coordinates
/// around the disk center, clipped to the strip.
pub fn survivor_integral_polar(k: &StripKernelParams, norm: Normalization, center: Point2, n: usize) -> f64 {
    let r = UNIT_DISK_RADIUS;
    let gl = GaussLegendre::new(n);
    let mut total = 0.0;
    // angular pieces split where the rim meets y = 0 or y = π keep the
    // radial clip smooth on each piece
    let mut cuts = vec![0.0, 2.0 * PI];
    for line in [0.0, PI] {
        let s = (line - center.y) / r;
        if s.abs() < 1.0 {
            let a = s.asin();
            cuts.push(a.rem_euclid(2.0 * PI));
            cuts.push((PI - a).rem_euclid(2.0 * PI));
        }
    }
    cuts.sort_by(f64::total_cmp);
    for win in cuts.windows(2) {
        let (a, b) = (win[0], win[1]);
        if b - a < 1e-15 {
            continue;
        }
        total += gl.integrate(a, b, |phi| {
            let (sn, cs) = phi.sin_cos();
            // radial extent inside the strip along this ray
            let mut rmax = r;
            if sn > 0.0 {
                rmax = rmax.min((PI - center.y) / sn);
            } else if sn < 0.0 {
                rmax = rmax.min(-center.y / sn);
            }
            if rmax <= 0.0 {
                return 0.0;
            }
            gl.integrate(0.0, rmax, |rho| {
                let (x, y) = (center.x + rho * cs, center.y + rho * sn);
                let v = 1.0 / (2.0 * PI) - 0.5 * rho * rho;
                survivor_density(k, norm, x, y) * v * rho
            })
        });
    }
    total
}

/// Range of admissible disk centers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CenterRange {
    /// Any translation meeting the strip.
    Unconstrained,
    /// Disks contained in the strip.
    InsideStrip,
}

const CENTER_SCAN: usize = 400;

/// `M = max_{yc} ∫ s v` with `xc = 0` (the survivor density is even in `x`).
#[allow(non_snake_case)]
pub fn survivor_integral_M(k: &StripKernelParams) -> (f64, Point2) {
    survivor_integral_max(k, Normalization::HalfLine, CenterRange::Unconstrained)
}

pub fn survivor_integral_max(k: &StripKernelParams, norm: Normalization, range: CenterRange) -> (f64, Point2) {
    let r = UNIT_DISK_RADIUS;
    let (lo, hi) = match range {
        CenterRange::Unconstrained => (-r + 1e-9, PI + r - 1e-9),
        CenterRange::InsideStrip => (r, PI - r),
    };
    let m = |yc: f64| survivor_integral(k, norm, Point2::new(0.0, yc));
    let h = (hi - lo) / CENTER_SCAN as f64;
    let (mut best_y, mut best) = (lo, f64::NEG_INFINITY);
    for i in 0..=CENTER_SCAN {
        let y = lo + h * i as f64;
        let v = m(y);
        if v > best {
            best = v;
            best_y = y;
        }
    }
    let (y, v) = golden_max(m, (best_y - h).max(lo), (best_y + h).min(hi), 1e-12);
    if v >= best {
        (v, Point2::new(0.0, y))
    } else {
        (best, Point2::new(0.0, best_y))
    }
}

/// `√(2/π)√T + √(2/π)(T + M)/√T`.
#[allow(non_snake_case)]
pub fn bound_raw(T: f64, M: f64) -> f64 {
    let c = (2.0 / PI).sqrt();
    c * T.sqrt() + c * (T + M) / T.sqrt()
}

/// Upper bound at one survival time. `bound_raw` is the lifetime slope
/// (strength 2); `bound_c = bound_raw / 2` bounds `max|∇u| / |Ω|^{1/2}` for
/// strength 1.
#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundResult {
    pub T: f64,
    pub M: f64,
    pub center: Point2,
    pub bound_raw: f64,
    pub bound_c: f64,
    /// `bound_c` with survivors normalised by the exact strip survival.
    pub exact_normalization_bound_c: f64,
    /// `bound_c` with the disk kept inside the strip.
    pub constrained_bound_c: f64,
    /// The minimiser sits at an end of the scanned grid.
    pub at_grid_edge: bool,
}

impl BoundResult {
    pub fn certified(&self) -> bool {
        self.bound_c < 1.0 / (2.0 * PI).sqrt()
    }
}

#[allow(non_snake_case)]
pub fn bound_at(T: f64) -> Result<BoundResult> {
    let k = StripKernelParams::new(T)?;
    let (m, center) = survivor_integral_M(&k);
    let raw = bound_raw(T, m);
    let (m_exact, _) = survivor_integral_max(&k, Normalization::Exact, CenterRange::Unconstrained);
    let exact = (2.0 / PI).sqrt() * T.sqrt() + Normalization::Exact.survival(&k) * (T + m_exact);
    let (m_con, _) = survivor_integral_max(&k, Normalization::HalfLine, CenterRange::InsideStrip);
    Ok(BoundResult {
        T,
        M: m,
        center,
        bound_raw: raw,
        bound_c: raw / 2.0,
        exact_normalization_bound_c: exact / 2.0,
        constrained_bound_c: bound_raw(T, m_con) / 2.0,
        at_grid_edge: false,
    })
}

/// Evaluates the bound on every grid time (in parallel) and returns all rows
/// plus the minimiser of `bound_raw`. Fails if the minimiser is not below
/// `1/√(2π)`.
pub fn scan_upper_bound(t_grid: &[f64]) -> Result<(Vec<BoundResult>, BoundResult)> {
    if t_grid.is_empty() {
        return Err(Error::InvalidParameter("empty T grid".into()));
    }
    let rows: Vec<BoundResult> = t_grid.par_iter().map(|&t| bound_at(t)).collect::<Result<_>>()?;
    let i = (0..rows.len())
        .min_by(|&a, &b| rows[a].bound_raw.total_cmp(&rows[b].bound_raw))
        .expect("nonempty");
    let mut best = rows[i];
    best.at_grid_edge = rows.len() > 1 && (i == 0 || i == rows.len() - 1);
    if !best.certified() {
        return Err(Error::BoundNotCertified { bound_c: best.bound_c });
    }
    Ok((rows, best))
}

pub fn certify_upper_bound(t_grid: &[f64]) -> Result<BoundResult> {
    scan_upper_bound(t_grid).map(|(_, b)| b)
}

/// Survivor y-histogram from simulated walks.
#[derive(Debug, Clone, Serialize)]
pub struct SurvivorHistogram {
    pub edges: Vec<f64>,
    /// Normalised density of survivor positions per bin.
    pub density: Vec<f64>,
    pub survivors: usize,
    pub paths: usize,
}

/// Brownian motion started at `eps`, killed at `0` and `π`, run to time `T`
/// with `steps` Gaussian increments. Crossings between grid times are caught
/// with the Brownian-bridge probability `exp(−2 d₀ d₁ / dt)` for each barrier.
#[allow(non_snake_case)]
pub fn survivor_histogram_mc(
    eps: f64,
    T: f64,
    paths: usize,
    steps: usize,
    bins: usize,
    seed: u64,
) -> Result<SurvivorHistogram> {
    if !(eps > 0.0 && eps < PI) || !(T > 0.0) || paths == 0 || steps == 0 || bins == 0 {
        return Err(Error::InvalidParameter(
            "survivor simulation needs 0 < eps < π, T > 0 and nonzero counts".into(),
        ));
    }
    let dt = T / steps as f64;
    let sd = dt.sqrt();
    let ends: Vec<Option<f64>> = (0..paths)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let mut y = eps;
            for _ in 0..steps {
                let z: f64 = rng.sample(StandardNormal);
                let y1 = y + sd * z;
                if y1 <= 0.0 || y1 >= PI {
                    return None;
                }
                let kill = (-2.0 * y * y1 / dt).exp() + (-2.0 * (PI - y) * (PI - y1) / dt).exp();
                if rng.gen::<f64>() < kill {
                    return None;
                }
                y = y1;
            }
            Some(y)
        })
        .collect();
    let bw = PI / bins as f64;
    let mut counts = vec![0usize; bins];
    for y in ends.iter().flatten() {
        counts[((y / bw) as usize).min(bins - 1)] += 1;
    }
    let survivors: usize = counts.iter().sum();
    let density = counts
        .iter()
        .map(|&c| {
            if survivors == 0 {
                0.0
            } else {
                c as f64 / (survivors as f64 * bw)
            }
        })
        .collect();
    Ok(SurvivorHistogram {
        edges: (0..=bins).map(|i| i as f64 * bw).collect(),
        density,
        survivors,
        paths,
    })
}
