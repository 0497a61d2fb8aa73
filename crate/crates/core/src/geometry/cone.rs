use std::f64::consts::PI;

use serde::Serialize;

use super::{ConvexPolygon, Point2};
use crate::error::{Error, Result};
use crate::optim::bisect;

/// Convex hull of the disk `B(0, rho)` and the point `(apex_distance, 0)`.
#[derive(Debug, Clone, Serialize)]
pub struct ConeHull {
    pub rho: f64,
    pub apex_distance: f64,
    #[serde(skip)]
    pub polygon_approx: ConvexPolygon,
}

/// Closed-form area of the hull of `B(0, rho)` and a point at distance `d ≥ rho`.
pub fn cone_hull_area(rho: f64, d: f64) -> f64 {
    let d = d.max(rho);
    rho * (d * d - rho * rho).max(0.0).sqrt() + rho * rho * (PI - (rho / d).clamp(-1.0, 1.0).acos())
}

/// Cone hull with the given area, approximated by a polygon with `n_arc` arc
/// vertices plus the apex.
///
/// The arc endpoints sit exactly on the tangent points; the interior arc
/// vertices are pushed out slightly so that the polygon area equals the
/// closed-form hull area.
pub fn cone_hull(rho: f64, target_area: f64, n_arc: usize) -> Result<ConeHull> {
    if !(rho > 0.0) || !(target_area > 0.0) {
        return Err(Error::InvalidParameter("rho and target area must be positive".into()));
    }
    if n_arc < 8 {
        return Err(Error::InvalidParameter(format!("need n_arc >= 8, got {n_arc}")));
    }
    let disk_area = PI * rho * rho;
    if disk_area > target_area * (1.0 + 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "rho = {rho} too large: disk area {disk_area} exceeds target {target_area}"
        )));
    }
    if disk_area >= target_area * (1.0 - 1e-14) {
        // Degenerate: the hull is the disk itself.
        let m = n_arc;
        let dth = 2.0 * PI / m as f64;
        let r_eq = rho * (dth / dth.sin()).sqrt();
        let verts = (0..m).map(|k| Point2::from_polar(r_eq, k as f64 * dth)).collect();
        return Ok(ConeHull {
            rho,
            apex_distance: rho,
            polygon_approx: ConvexPolygon::new(verts)?,
        });
    }

    let hi = target_area / rho + rho;
    let d = bisect(|d| cone_hull_area(rho, d) - target_area, rho, hi, 1e-15 * hi)
        .ok_or_else(|| Error::InvalidParameter("no apex distance solves the area constraint".into()))?;

    let theta0 = (rho / d).acos();
    let m = n_arc - 1; // arc intervals
    let span = 2.0 * PI - 2.0 * theta0;
    let dth = span / m as f64;
    let s = dth.sin();
    // ½[2 ρ ρ' s + (m − 2) ρ'² s] = ½ ρ² span
    let (qa, qb, qc) = ((m as f64 - 2.0) * s, 2.0 * rho * s, -rho * rho * span);
    let r_in = if qa.abs() < 1e-300 {
        -qc / qb
    } else {
        (-qb + (qb * qb - 4.0 * qa * qc).sqrt()) / (2.0 * qa)
    };

    let mut verts = Vec::with_capacity(n_arc + 1);
    verts.push(Point2::new(d, 0.0));
    for k in 0..=m {
        let th = theta0 + k as f64 * dth;
        let r = if k == 0 || k == m { rho } else { r_in };
        verts.push(Point2::from_polar(r, th));
    }
    Ok(ConeHull {
        rho,
        apex_distance: d,
        polygon_approx: ConvexPolygon::new(verts)?,
    })
}
