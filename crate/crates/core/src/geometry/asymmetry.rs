use std::f64::consts::PI;

use serde::Serialize;

use super::{circle_polygon_intersection_area, ConvexPolygon, DiskSpec, Point2};
use crate::error::{Error, Result};
use crate::optim::{nelder_mead, NelderMeadOptions};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct AsymmetryResult {
    /// `|B Δ Ω| / |Ω|` at the best equal-area ball, in `[0, 2]`.
    pub asymmetry: f64,
    /// Center of the best ball.
    pub center: Point2,
    /// `|B ∩ Ω|` at the best ball.
    pub overlap: f64,
}

/// Fraenkel asymmetry of a convex polygon.
///
/// With `|B| = |Ω|` the symmetric difference is `2(|Ω| − |B ∩ Ω|)`, so the ball
/// center is chosen to maximise the overlap. Nelder–Mead over the center,
/// started from both the centroid and the Chebyshev center.
pub fn fraenkel_asymmetry(p: &ConvexPolygon) -> Result<AsymmetryResult> {
    let area = p.area();
    let radius = (area / PI).sqrt();
    let overlap = |c: Point2| circle_polygon_intersection_area(p, &DiskSpec { center: c, radius });
    let starts = [p.centroid(), p.inradius_and_center().1];
    let step = 0.05 * radius;
    let opts = NelderMeadOptions {
        max_evals: 4000,
        f_tol: 1e-16 * area,
        x_tol: 1e-11 * radius,
    };
    let mut best: Option<(Point2, f64)> = None;
    let mut any_converged = false;
    for s in starts {
        let r = nelder_mead(|x| -overlap(Point2::new(x[0], x[1])), &[s.x, s.y], &[step, step], opts);
        any_converged |= r.converged;
        let c = Point2::new(r.x[0], r.x[1]);
        let v = -r.value;
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((c, v));
        }
    }
    let (center, ov) = best.expect("at least one start");
    if !any_converged {
        return Err(Error::NoConvergence {
            what: "asymmetry center search",
            detail: format!("best overlap {ov} of area {area} at ({}, {})", center.x, center.y),
        });
    }
    Ok(AsymmetryResult {
        asymmetry: (2.0 * (1.0 - ov / area)).clamp(0.0, 2.0),
        center,
        overlap: ov,
    })
}
