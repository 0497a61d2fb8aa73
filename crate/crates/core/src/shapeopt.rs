//! Derivative-free search for convex polygons with a large `c = max|∇u| / |Ω|^{1/2}`.

use std::cell::RefCell;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bie::Resolution;
use crate::error::{Error, Result};
use crate::geometry::{convex_hull, ConvexPolygon, Point2};
use crate::optim::{nelder_mead_simplex, NelderMeadOptions};
use crate::torsion::flux_c_value;

/// Star-shaped parametrisation: vertex `i` at `r_i (cos θ_i, sin θ_i)`.
///
/// With `mirror` set, every vertex off the vertical axis is duplicated under
/// `x ↦ −x`, so only one half of the polygon is free.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeParams {
    pub angles: Vec<f64>,
    pub radii: Vec<f64>,
    pub mirror: bool,
}

const AXIS_TOL: f64 = 1e-12;

impl ShapeParams {
    /// Regular `n`-gon with a horizontal bottom edge, matching
    /// [`crate::geometry::regular_ngon`].
    pub fn regular(n: usize, mirror: bool) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!("need at least 3 vertices, got {n}")));
        }
        let all: Vec<f64> = (0..n)
            .map(|k| -PI / 2.0 - PI / n as f64 + 2.0 * PI * k as f64 / n as f64)
            .collect();
        let angles: Vec<f64> = if mirror {
            all.into_iter().filter(|t| t.cos() > -AXIS_TOL).collect()
        } else {
            all
        };
        let radii = vec![1.0; angles.len()];
        Ok(Self { angles, radii, mirror })
    }

    /// Radial parameters of `p` about its centroid. With `mirror`, `p` must be
    /// symmetric under reflection in the vertical line through the centroid.
    pub fn from_polygon(p: &ConvexPolygon, mirror: bool) -> Result<Self> {
        let c = p.centroid();
        let rel: Vec<Point2> = p.vertices().iter().map(|&v| v - c).collect();
        let scale = p.diameter();
        let keep: Vec<Point2> = if mirror {
            for v in &rel {
                let m = Point2::new(-v.x, v.y);
                if !rel.iter().any(|w| w.dist(m) < 1e-9 * scale) {
                    return Err(Error::InvalidParameter("polygon is not mirror symmetric".into()));
                }
            }
            rel.into_iter().filter(|v| v.x > -AXIS_TOL * scale).collect()
        } else {
            rel
        };
        Ok(Self {
            angles: keep.iter().map(|v| v.y.atan2(v.x)).collect(),
            radii: keep.iter().map(|v| v.norm()).collect(),
            mirror,
        })
    }

    pub fn n_free(&self) -> usize {
        self.radii.len()
    }

    fn with_log_radii(&self, x: &[f64]) -> Self {
        Self {
            radii: x.iter().map(|v| v.exp()).collect(),
            ..self.clone()
        }
    }
}

/// Polygon of the parameters: convex hull of the (mirrored) points, rescaled
/// to unit area.
pub fn decode(params: &ShapeParams) -> Result<ConvexPolygon> {
    if params.angles.len() != params.radii.len() {
        return Err(Error::InvalidParameter("angles and radii differ in length".into()));
    }
    if params.radii.iter().any(|&r| !(r > 0.0) || !r.is_finite()) {
        return Err(Error::InvalidParameter("radii must be positive".into()));
    }
    let mut pts = Vec::with_capacity(2 * params.radii.len());
    for (&t, &r) in params.angles.iter().zip(&params.radii) {
        let p = Point2::from_polar(r, t);
        pts.push(p);
        if params.mirror && t.cos().abs() > AXIS_TOL {
            pts.push(Point2::new(-p.x, p.y));
        }
    }
    let hull = convex_hull(&pts);
    if hull.len() < 3 {
        return Err(Error::InvalidPolygon(format!("hull has {} vertices", hull.len())));
    }
    let poly = ConvexPolygon::new(hull)?;
    Ok(poly.with_area(1.0))
}

/// Value assigned to shapes that cannot be decoded or solved.
pub const PENALTY: f64 = -1e3;

/// `c` of the decoded shape at the given resolution, [`PENALTY`] on failure.
pub fn objective(params: &ShapeParams, res: Resolution) -> f64 {
    try_objective(params, res).unwrap_or(PENALTY)
}

fn try_objective(params: &ShapeParams, res: Resolution) -> Result<f64> {
    let p = decode(params)?;
    Ok(flux_c_value(&p, res)?.0)
}

/// Best shape found by [`optimize`].
#[derive(Debug, Clone, Serialize)]
pub struct ShapeCandidate {
    pub polygon: ConvexPolygon,
    pub params: ShapeParams,
    /// `c` at [`Self::solve_resolution`].
    pub c: f64,
    pub solve_resolution: Resolution,
    /// Coarse evaluations spent.
    pub evaluations: usize,
    /// Best coarse `c` after each evaluation.
    pub history: Vec<f64>,
    /// Largest coarse `c` of any candidate seen.
    pub max_candidate_c: f64,
    pub restarts: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct OptimizeOptions {
    pub search_resolution: Resolution,
    pub final_resolution: Resolution,
    /// Initial simplex size in log-radius.
    pub initial_step: f64,
    /// Simplex diameter at which a Nelder–Mead run is considered converged.
    pub x_tol: f64,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self {
            search_resolution: Resolution::coarse(),
            final_resolution: Resolution::default(),
            initial_step: 0.1,
            x_tol: 1e-4,
        }
    }
}

struct SearchState {
    evals: usize,
    history: Vec<f64>,
    best_x: Vec<f64>,
    best_c: f64,
    max_seen: f64,
}

/// Nelder–Mead on log-radii with random restarts around the incumbent.
///
/// `budget` counts coarse solves. The final candidate is re-solved at the fine
/// resolution and compared against the start, so the result never has a
/// smaller `c` than the start.
pub fn optimize(start: &ShapeParams, budget: usize, seed: u64) -> Result<ShapeCandidate> {
    optimize_with(start, budget, seed, OptimizeOptions::default())
}

pub fn optimize_with(start: &ShapeParams, budget: usize, seed: u64, opts: OptimizeOptions) -> Result<ShapeCandidate> {
    let start_poly = decode(start)?;
    let fine_c = |p: &ConvexPolygon| flux_c_value(p, opts.final_resolution).map(|r| r.0);
    if budget == 0 {
        return Ok(ShapeCandidate {
            c: fine_c(&start_poly)?,
            polygon: start_poly,
            params: start.clone(),
            solve_resolution: opts.final_resolution,
            evaluations: 0,
            history: Vec::new(),
            max_candidate_c: f64::NAN,
            restarts: 0,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = start.n_free();
    let x0: Vec<f64> = start.radii.iter().map(|r| r.ln()).collect();
    let state = RefCell::new(SearchState {
        evals: 0,
        history: Vec::with_capacity(budget),
        best_x: x0.clone(),
        best_c: f64::NEG_INFINITY,
        max_seen: f64::NEG_INFINITY,
    });
    let mut restarts = 0usize;

    let mut f = |x: &[f64]| -> f64 {
        let mut s = state.borrow_mut();
        if s.evals >= budget {
            return f64::INFINITY;
        }
        s.evals += 1;
        let c = objective(&start.with_log_radii(x), opts.search_resolution);
        s.max_seen = s.max_seen.max(c);
        if c > s.best_c {
            s.best_c = c;
            s.best_x = x.to_vec();
        }
        let b = s.best_c;
        s.history.push(b);
        -c
    };

    let mut step = opts.initial_step;
    let mut simplex: Vec<Vec<f64>> = std::iter::once(x0.clone())
        .chain((0..n).map(|i| {
            let mut v = x0.clone();
            v[i] += step;
            v
        }))
        .collect();
    let nm = NelderMeadOptions {
        max_evals: usize::MAX,
        f_tol: 1e-10,
        x_tol: opts.x_tol,
    };
    loop {
        nelder_mead_simplex(&mut f, simplex, nm);
        if state.borrow().evals >= budget {
            break;
        }
        restarts += 1;
        step = (0.7 * step).max(5.0 * opts.x_tol);
        // random simplex around the incumbent
        let center = state.borrow().best_x.clone();
        simplex = std::iter::once(center.clone())
            .chain((0..n).map(|_| {
                center
                    .iter()
                    .map(|&c| c + step * (2.0 * rng.gen::<f64>() - 1.0))
                    .collect()
            }))
            .collect();
    }
    let SearchState {
        evals,
        history,
        best_x,
        max_seen,
        ..
    } = state.into_inner();

    let best_params = start.with_log_radii(&best_x);
    let best_poly = decode(&best_params)?;
    let c_best = fine_c(&best_poly)?;
    let c_start = fine_c(&start_poly)?;
    let (polygon, params, c) = if c_best >= c_start {
        (best_poly, best_params, c_best)
    } else {
        (start_poly, start.clone(), c_start)
    };
    Ok(ShapeCandidate {
        polygon,
        params,
        c,
        solve_resolution: opts.final_resolution,
        evaluations: evals,
        history,
        max_candidate_c: max_seen,
        restarts,
    })
}
