//! Solved torsion fields, derived scalars and the inequality audits.

use std::f64::consts::PI;

use serde::Serialize;

use crate::bie::{
    solve_boundary_flux, solve_dirichlet_density, BoundaryMesh, DensitySolution, FluxSolution, Resolution,
};
use crate::error::{Error, Result};
use crate::geometry::{fraenkel_asymmetry, ConvexPolygon, Point2};
use crate::potential::VolumePotential;
use crate::quadrature::{adaptive, triangle7, triangle_collapsed, GaussLegendre};

/// Torsion function of one polygon with everything the audits need.
#[derive(Debug, Clone)]
pub struct TorsionSolution {
    pub polygon: ConvexPolygon,
    pub strength: f64,
    pub resolution: Resolution,
    pub flux: FluxSolution,
    pub density: DensitySolution,
    pub max_grad: f64,
    pub max_grad_point: Point2,
    pub max_u: f64,
    pub argmax_u: Point2,
    /// `∫_Ω u dx` from the density representation.
    pub rigidity: f64,
    /// `∫_Ω |∇u|² dx` from the boundary flux (Pohozaev identity).
    pub dirichlet_energy: f64,
}

/// Solves `−Δu = strength` on `p` with `u = 0` on the boundary.
pub fn solve(p: &ConvexPolygon, strength: f64, res: Resolution) -> Result<TorsionSolution> {
    res.validate()?;
    let mesh = BoundaryMesh::build(p, res)?;
    let flux = solve_boundary_flux(p, &mesh, strength)?;
    let density = solve_dirichlet_density(p, &mesh, strength)?;
    let (max_grad, max_grad_point) = flux.max_boundary_gradient();
    let (max_u, argmax_u) = maximize_u(&density)?;
    let rigidity = rigidity_from_density(&density)?;
    let dirichlet_energy = pohozaev_energy(&flux);
    Ok(TorsionSolution {
        polygon: p.clone(),
        strength,
        resolution: res,
        flux,
        density,
        max_grad,
        max_grad_point,
        max_u,
        argmax_u,
        rigidity,
        dirichlet_energy,
    })
}

/// `max|∇u| / (s |Ω|^{1/2})` from the flux equation alone, with its location.
pub fn flux_c_value(p: &ConvexPolygon, res: Resolution) -> Result<(f64, Point2)> {
    res.validate()?;
    let mesh = BoundaryMesh::build(p, res)?;
    let flux = solve_boundary_flux(p, &mesh, 1.0)?;
    let (g, x) = flux.max_boundary_gradient();
    Ok((g / p.area().sqrt(), x))
}

/// `max|∇u| / (s |Ω|^{1/2})`, invariant under scaling and strength.
pub fn c_value(t: &TorsionSolution) -> f64 {
    t.max_grad / (t.strength * t.polygon.area().sqrt())
}

impl TorsionSolution {
    pub fn c_value(&self) -> f64 {
        c_value(self)
    }

    pub fn eval_u(&self, x: Point2) -> Result<f64> {
        self.density.eval_u_near(x)
    }

    /// Central-difference gradient of `u`, valid up to the boundary.
    pub fn grad_u(&self, x: Point2) -> Result<Point2> {
        let margin = self.polygon.inner_margin(x);
        if !(margin > 0.0) {
            return Err(Error::OutsideDomain { x: x.x, y: x.y });
        }
        let h = (1e-5 * self.polygon.area().sqrt()).min(0.25 * margin);
        let (ex, ey) = (Point2::new(h, 0.0), Point2::new(0.0, h));
        Ok(Point2::new(
            (self.eval_u(x + ex)? - self.eval_u(x - ex)?) / (2.0 * h),
            (self.eval_u(x + ey)? - self.eval_u(x - ey)?) / (2.0 * h),
        ))
    }

    /// Rigidity from the boundary flux alone:
    /// `¼ [∮ |x − c|² q ds − s J(c)]` with `J` the polar momentum about `c`.
    pub fn rigidity_from_flux(&self) -> f64 {
        let c = self.polygon.centroid();
        let m = &self.flux.mesh;
        let moment: f64 = (0..m.len())
            .map(|j| (m.nodes[j] - c).norm_sq() * self.flux.q[j] * m.weights[j])
            .sum();
        0.25 * (moment - self.strength * self.polygon.polar_momentum(c))
    }
}

/// `∫u = ∫φ + ∫ψ`, both reduced to boundary integrals.
///
/// With `w = |x − c|²/4` (so `Δw = 1`) Green's identity gives
/// `∫φ = −s J(c)/4 + Σ_e [h_e/2 ∫_e φ + ¼ ∫_e |x − c|² ∂φ/∂ν]`, `h_e` the
/// distance from `c` to edge `e`. For the double layer
/// `ψ = Σ_j w_j σ_j (x − y_j)·n_j/|x − y_j|²`,
/// `∫_Ω (x − y)/|x − y|² dx = 2π ∇φ₁(y)` with `φ₁` the unit-strength potential.
fn rigidity_from_density(d: &DensitySolution) -> Result<f64> {
    let p = d.polygon();
    let c = p.centroid();
    let scale = d.strength.abs() * p.area() * p.area();
    let unit = VolumePotential::new(p.clone(), 1.0)?;
    let mut vol = -0.25 * d.strength * p.polar_momentum(c);
    for e in p.edges() {
        let h = e.inner_distance(c);
        let f = |t: f64| {
            let x = e.point_at(t);
            0.5 * h * d.potential.phi(x) + 0.25 * (x - c).norm_sq() * d.potential.grad_phi_unchecked(x).dot(e.normal)
        };
        vol += e.length * adaptive(0.0, 1.0, 1e-15 * scale / p.len() as f64, f);
    }
    let m = &d.mesh;
    let mut harmonic = 0.0;
    for j in 0..m.len() {
        harmonic += m.weights[j] * d.sigma[j] * unit.grad_phi(m.nodes[j])?.dot(m.normals[j]);
    }
    Ok(vol + 2.0 * PI * harmonic)
}

/// `∫|∇u|² = ¼ Σ_e h_e ∫_e q² ds`, `h_e` the distance from the centroid to edge `e`.
fn pohozaev_energy(flux: &FluxSolution) -> f64 {
    let p = flux.polygon();
    let c = p.centroid();
    let m = &flux.mesh;
    let h: Vec<f64> = m.edges().iter().map(|e| e.inner_distance(c)).collect();
    0.25 * (0..m.len())
        .map(|j| h[m.edge_of[j]] * flux.q[j] * flux.q[j] * m.weights[j])
        .sum::<f64>()
}

/// Adaptive integral over the polygon: fan triangles from the centroid, each
/// split into four until the 7-point rule agrees with its children.
pub fn interior_integral<F>(p: &ConvexPolygon, tol: f64, mut f: F) -> Result<f64>
where
    F: FnMut(Point2) -> Result<f64>,
{
    let c = p.centroid();
    let area = p.area();
    let mut total = 0.0;
    for e in p.edges() {
        let tri_area = 0.5 * (e.a - c).cross(e.b - c);
        let whole = tri_rule(c, e.a, e.b, &mut f)?;
        total += refine_triangle(c, e.a, e.b, whole, tol * tri_area / area, 0, &mut f)?;
    }
    Ok(total)
}

fn tri_rule<F: FnMut(Point2) -> Result<f64>>(a: Point2, b: Point2, c: Point2, f: &mut F) -> Result<f64> {
    let mut s = 0.0;
    for (x, w) in triangle7(a, b, c) {
        s += w * f(x)?;
    }
    Ok(s)
}

const MAX_TRIANGLE_DEPTH: usize = 10;

fn refine_triangle<F: FnMut(Point2) -> Result<f64>>(
    a: Point2,
    b: Point2,
    c: Point2,
    whole: f64,
    tol: f64,
    depth: usize,
    f: &mut F,
) -> Result<f64> {
    let (ab, bc, ca) = ((a + b) * 0.5, (b + c) * 0.5, (c + a) * 0.5);
    let kids = [(a, ab, ca), (ab, b, bc), (ca, bc, c), (ab, bc, ca)];
    let mut vals = [0.0; 4];
    for (v, &(p, q, r)) in vals.iter_mut().zip(&kids) {
        *v = tri_rule(p, q, r, f)?;
    }
    let sum: f64 = vals.iter().sum();
    if depth >= MAX_TRIANGLE_DEPTH || (sum - whole).abs() <= tol {
        return Ok(sum);
    }
    let mut out = 0.0;
    for (v, &(p, q, r)) in vals.iter().zip(&kids) {
        out += refine_triangle(p, q, r, *v, 0.25 * tol, depth + 1, f)?;
    }
    Ok(out)
}

/// Number of starting points for the maximisation of `u`.
pub const MAX_U_STARTS: usize = 16;

/// Maximises `u` by damped Newton iteration with finite-difference
/// derivatives from [`MAX_U_STARTS`] starting points. `√u` is concave, so all
/// starts must reach the same point; disagreement beyond `1e-6 |Ω|^{1/2}` is
/// reported as an error.
fn maximize_u(d: &DensitySolution) -> Result<(f64, Point2)> {
    let p = d.polygon();
    let scale = p.area().sqrt();
    let mut best: Option<(f64, Point2)> = None;
    let mut values = Vec::with_capacity(MAX_U_STARTS);
    for x0 in start_points(p) {
        let (v, x) = newton_ascent(d, x0, scale)?;
        values.push(v);
        if best.is_none_or(|(bv, _)| v > bv) {
            best = Some((v, x));
        }
    }
    let (v, x) = best.expect("at least one start");
    // The maximiser itself is ill-conditioned on elongated domains (u is
    // exponentially flat along the long axis), so compare values only.
    let spread = values.iter().map(|w| v - w).fold(0.0, f64::max);
    if spread > 1e-9 * v.abs() {
        return Err(Error::NoConvergence {
            what: "maximum of u",
            detail: format!("multistart ascent values disagree by {spread:e}"),
        });
    }
    Ok((v, x))
}

fn start_points(p: &ConvexPolygon) -> Vec<Point2> {
    let c = p.centroid();
    let mut out = vec![c, p.inradius_and_center().1];
    let n = MAX_U_STARTS - 2;
    for k in 0..n {
        let th = 2.0 * PI * (k as f64 + 0.5) / n as f64;
        let dir = Point2::from_polar(1.0, th);
        // distance from c to the boundary along dir
        let reach = p
            .edges()
            .filter_map(|e| {
                let dn = dir.dot(e.normal);
                (dn < 0.0).then(|| e.inner_distance(c) / -dn)
            })
            .fold(f64::INFINITY, f64::min);
        out.push(c + dir * (0.5 * reach));
    }
    out
}

fn newton_ascent(d: &DensitySolution, x0: Point2, scale: f64) -> Result<(f64, Point2)> {
    let p = d.polygon();
    let h = 1e-4 * scale;
    let u = |x: Point2| d.eval_u_near(x);
    let mut x = x0;
    let mut ux = u(x)?;
    for _ in 0..200 {
        let margin = p.inner_margin(x);
        let hh = h.min(0.25 * margin);
        let (ex, ey) = (Point2::new(hh, 0.0), Point2::new(0.0, hh));
        let (uxp, uxm, uyp, uym) = (u(x + ex)?, u(x - ex)?, u(x + ey)?, u(x - ey)?);
        let g = Point2::new((uxp - uxm) / (2.0 * hh), (uyp - uym) / (2.0 * hh));
        let hxx = (uxp - 2.0 * ux + uxm) / (hh * hh);
        let hyy = (uyp - 2.0 * ux + uym) / (hh * hh);
        let hxy = (u(x + ex + ey)? - u(x + ex - ey)? - u(x - ex + ey)? + u(x - ex - ey)?) / (4.0 * hh * hh);
        let det = hxx * hyy - hxy * hxy;
        // Levenberg shift makes the model concave; along a flat ridge this
        // moves much farther than a plain gradient step
        let half_gap = (0.25 * (hxx - hyy).powi(2) + hxy * hxy).sqrt();
        let (lmax, lmin) = (0.5 * (hxx + hyy) + half_gap, 0.5 * (hxx + hyy) - half_gap);
        let mu = if hxx < 0.0 && det > 0.0 {
            0.0
        } else {
            lmax + 1e-3 * lmin.abs().max(f64::MIN_POSITIVE)
        };
        let (a, c) = (hxx - mu, hyy - mu);
        let d = a * c - hxy * hxy;
        let mut step = Point2::new(-(c * g.x - hxy * g.y) / d, -(a * g.y - hxy * g.x) / d);
        let cap = 0.1 * scale;
        if !(step.norm() <= cap) {
            step = if step.is_finite() {
                step * (cap / step.norm())
            } else {
                g * (cap / g.norm().max(1e-300))
            };
        }
        let u_before = ux;
        let mut accepted = false;
        for _ in 0..60 {
            let y = x + step;
            if p.inner_margin(y) > 0.0 {
                let uy = u(y)?;
                if uy >= ux - 1e-15 * ux.abs() {
                    x = y;
                    ux = uy;
                    accepted = true;
                    break;
                }
            }
            step = step * 0.5;
        }
        // keep doubling while u still rises (flat ridges)
        while accepted && step.norm() < 0.1 * scale {
            let y = x + step;
            if p.inner_margin(y) <= 0.0 {
                break;
            }
            let uy = u(y)?;
            if uy <= ux {
                break;
            }
            x = y;
            ux = uy;
            step = step * 2.0;
        }
        // a stalled value also ends the ascent: on long thin domains u is flat
        // along the axis and the iterate can drift without gaining anything
        if !accepted || step.norm() < 1e-10 * scale || ux - u_before <= 1e-14 * ux.abs() {
            return Ok((ux, x));
        }
    }
    Err(Error::NoConvergence {
        what: "Newton ascent for max u",
        detail: format!("no convergence from ({}, {})", x0.x, x0.y),
    })
}

/// One inequality with both sides recorded.
#[derive(Debug, Clone, Serialize)]
pub struct AuditCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`.
    pub slack: f64,
    pub pass: bool,
}

/// Absolute and relative tolerance of every audit check.
pub const AUDIT_ABS_TOL: f64 = 1e-6;
pub const AUDIT_REL_TOL: f64 = 1e-4;

impl AuditCheck {
    /// `lhs ≤ rhs` up to the audit tolerance.
    pub fn le(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let tol = AUDIT_ABS_TOL + AUDIT_REL_TOL * rhs.abs().max(lhs.abs());
        Self {
            name: name.into(),
            lhs,
            rhs,
            slack: rhs - lhs,
            pass: lhs <= rhs + tol,
        }
    }

    /// Slack relative to the right-hand side.
    pub fn relative_slack(&self) -> f64 {
        self.slack / self.rhs.abs().max(f64::MIN_POSITIVE)
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct AuditReport {
    pub checks: Vec<AuditCheck>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn extend(&mut self, other: AuditReport) {
        self.checks.extend(other.checks);
    }

    pub fn get(&self, name: &str) -> Option<&AuditCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Gradient bound from the P-function `|∇u|² + 2s u`, which peaks at the
/// maximum of `u`: `max|∇u|² ≤ 2 s max u`. For `s = 2` this is `|∇u| ≤ 2 ‖u‖^{1/2}`.
pub fn audit_sperb(t: &TorsionSolution) -> Result<AuditReport> {
    let s = t.strength;
    let p_at_max = 2.0 * s * t.max_u;
    let mut p_max = t.flux.q.iter().map(|q| q * q).fold(0.0, f64::max);
    p_max = p_max.max(t.max_grad * t.max_grad);
    let c = t.polygon.centroid();
    for e in t.polygon.edges() {
        for (x, _) in triangle7(c, e.a, e.b) {
            let g = t.grad_u(x)?;
            p_max = p_max.max(g.norm_sq() + 2.0 * s * t.eval_u(x)?);
        }
    }
    Ok(AuditReport {
        checks: vec![
            AuditCheck::le("sperb_gradient_bound", t.max_grad * t.max_grad, p_at_max),
            AuditCheck::le("sperb_p_function_max", p_max, p_at_max),
        ],
    })
}

/// `max u² ≤ (1/2π) ∫|∇u|²`, sharp on the disk.
pub fn audit_payne(t: &TorsionSolution) -> AuditReport {
    AuditReport {
        checks: vec![AuditCheck::le(
            "payne",
            t.max_u * t.max_u,
            t.dirichlet_energy / (2.0 * PI),
        )],
    }
}

/// `|Ω| max u ≤ (s/2) ∫|x − x₀|² dx + ∫ u dx` with `x₀` the maximiser; for
/// `s = 2` and unit area this reads `‖u‖∞ ≤ J(x₀) + T`.
pub fn audit_max_u_momentum(t: &TorsionSolution) -> AuditReport {
    let j = t.polygon.polar_momentum(t.argmax_u);
    AuditReport {
        checks: vec![AuditCheck::le(
            "max_u_momentum_bound",
            t.polygon.area() * t.max_u,
            0.5 * t.strength * j + t.rigidity,
        )],
    }
}

/// Test functions for the boundary-flux (Hermite–Hadamard) inequality; all are
/// subharmonic.
#[derive(Debug, Clone, Copy, Serialize)]
pub enum TestFunction {
    Constant,
    /// `ax (x − cx)² + ay (y − cy)²` with `ax, ay ≥ 0`.
    Quadratic {
        center: Point2,
        ax: f64,
        ay: f64,
    },
    /// `Re((z − c)^k) + shift`; `shift = None` picks the smallest shift that
    /// makes the function nonnegative on the boundary.
    Harmonic {
        k: u32,
        center: Point2,
        shift: Option<f64>,
    },
}

impl TestFunction {
    fn eval(&self, x: Point2, shift: f64) -> f64 {
        match *self {
            TestFunction::Constant => 1.0,
            TestFunction::Quadratic { center, ax, ay } => {
                let d = x - center;
                ax * d.x * d.x + ay * d.y * d.y
            }
            TestFunction::Harmonic { k, center, .. } => {
                let d = x - center;
                let (r, th) = (d.norm(), d.y.atan2(d.x));
                r.powi(k as i32) * (k as f64 * th).cos() + shift
            }
        }
    }

    fn degree(&self) -> usize {
        match *self {
            TestFunction::Constant => 0,
            TestFunction::Quadratic { .. } => 2,
            TestFunction::Harmonic { k, .. } => k as usize,
        }
    }
}

/// `s ∫_Ω f ≤ max q ∮ f` for subharmonic `f ≥ 0` on the boundary.
pub fn audit_hermite_hadamard(t: &TorsionSolution, f: &TestFunction) -> Result<AuditReport> {
    if let TestFunction::Quadratic { ax, ay, .. } = *f {
        if ax < 0.0 || ay < 0.0 {
            return Err(Error::InvalidParameter("quadratic test function must be convex".into()));
        }
    }
    let p = &t.polygon;
    // boundary minimum of the unshifted function on a fine sample
    let bmin = p
        .edges()
        .flat_map(|e| (0..=256).map(move |k| e.point_at(k as f64 / 256.0)))
        .map(|x| f.eval(x, 0.0))
        .fold(f64::INFINITY, f64::min);
    let shift = match *f {
        TestFunction::Harmonic { shift: None, .. } => (-bmin).max(0.0),
        TestFunction::Harmonic { shift: Some(s), .. } => s,
        _ => 0.0,
    };
    let scale = p
        .vertices()
        .iter()
        .map(|&v| f.eval(v, shift).abs())
        .fold(1e-300, f64::max);
    if bmin + shift < -1e-12 * scale {
        return Err(Error::NegativeOnBoundary { min: bmin + shift });
    }
    let n = f.degree() / 2 + 2;
    let c = p.centroid();
    let mut interior = 0.0;
    for e in p.edges() {
        for (x, w) in triangle_collapsed(c, e.a, e.b, n) {
            interior += w * f.eval(x, shift);
        }
    }
    let gl = GaussLegendre::new(n + 1);
    let boundary: f64 = p
        .edges()
        .map(|e| gl.integrate(0.0, 1.0, |s| f.eval(e.point_at(s), shift)) * e.length)
        .sum();
    Ok(AuditReport {
        checks: vec![AuditCheck::le(
            "hermite_hadamard",
            t.strength * interior,
            t.max_grad * boundary,
        )],
    })
}

/// Runs every audit with the standard test-function family.
pub fn audit_all(t: &TorsionSolution) -> Result<AuditReport> {
    let mut r = audit_sperb(t)?;
    r.extend(audit_payne(t));
    r.extend(audit_max_u_momentum(t));
    let c = t.polygon.centroid();
    for f in [
        TestFunction::Constant,
        TestFunction::Quadratic {
            center: c,
            ax: 1.0,
            ay: 1.0,
        },
        TestFunction::Harmonic {
            k: 3,
            center: c,
            shift: None,
        },
    ] {
        let mut h = audit_hermite_hadamard(t, &f)?;
        for chk in &mut h.checks {
            chk.name = format!("{}_{}", chk.name, test_function_tag(&f));
        }
        r.extend(h);
    }
    Ok(r)
}

fn test_function_tag(f: &TestFunction) -> &'static str {
    match f {
        TestFunction::Constant => "constant",
        TestFunction::Quadratic { .. } => "quadratic",
        TestFunction::Harmonic { .. } => "harmonic",
    }
}

/// One row of the quantitative Saint Venant report.
#[derive(Debug, Clone, Serialize)]
pub struct SaintVenantEntry {
    pub rigidity: f64,
    /// `T(disk) − T(Ω)` at strength 2 and unit area.
    pub deficit: f64,
    pub asymmetry: f64,
    /// `deficit / A³`, absent when the asymmetry is below [`MIN_ASYMMETRY_FOR_RATIO`].
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SaintVenantReport {
    pub entries: Vec<SaintVenantEntry>,
    pub all_nonnegative: bool,
    pub min_ratio: Option<f64>,
}

pub const MIN_ASYMMETRY_FOR_RATIO: f64 = 1e-3;

/// Torsional rigidity deficit against the equal-area disk for unit-area
/// polygons at strength 2, and its ratio to the cubed Fraenkel asymmetry.
pub fn quantitative_saint_venant_check(samples: &[ConvexPolygon], res: Resolution) -> Result<SaintVenantReport> {
    let disk = 1.0 / (4.0 * PI);
    let mut entries = Vec::with_capacity(samples.len());
    for p in samples {
        if (p.area() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!("sample area {} is not 1", p.area())));
        }
        let t = solve(p, 2.0, res)?;
        let asym = fraenkel_asymmetry(p)?.asymmetry;
        let deficit = disk - t.rigidity;
        entries.push(SaintVenantEntry {
            rigidity: t.rigidity,
            deficit,
            asymmetry: asym,
            ratio: (asym >= MIN_ASYMMETRY_FOR_RATIO).then(|| deficit / asym.powi(3)),
        });
    }
    let all_nonnegative = entries.iter().all(|e| e.deficit >= -AUDIT_ABS_TOL);
    let min_ratio = entries.iter().filter_map(|e| e.ratio).reduce(f64::min);
    Ok(SaintVenantReport {
        entries,
        all_nonnegative,
        min_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::regular_ngon;

    fn unit_square() -> ConvexPolygon {
        regular_ngon(4, 1.0).unwrap()
    }

    #[test]
    fn interior_integral_of_polynomial() {
        let p = regular_ngon(5, 1.0).unwrap();
        let c = Point2::new(0.1, -0.05);
        let v = interior_integral(&p, 1e-14, |x| Ok((x - c).norm_sq())).unwrap();
        assert!((v - p.polar_momentum(c)).abs() < 1e-13);
    }

    #[test]
    fn square_solution_invariants() {
        let p = unit_square();
        let t = solve(&p, 1.0, Resolution::default()).unwrap();
        assert!((t.c_value() - crate::oracles::square_c()).abs() < 1e-8);
        assert!(
            (t.rigidity - crate::oracles::square_rigidity()).abs() < 1e-9,
            "{}",
            t.rigidity
        );
        assert!((t.rigidity - t.rigidity_from_flux()).abs() < 1e-9);
        assert!((t.dirichlet_energy - t.rigidity).abs() < 1e-6 * t.rigidity);
        assert!(t.argmax_u.norm() < 1e-7, "{:?}", t.argmax_u);
        assert!((t.max_u - crate::oracles::square_max_u()).abs() < 1e-9, "{}", t.max_u);
    }

    #[test]
    fn audits_pass_on_square() {
        let t = solve(&unit_square(), 1.0, Resolution::default()).unwrap();
        let r = audit_all(&t).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn hermite_hadamard_rejects_negative_boundary_values() {
        let t = solve(&unit_square(), 1.0, Resolution::coarse()).unwrap();
        let f = TestFunction::Harmonic {
            k: 2,
            center: Point2::ORIGIN,
            shift: Some(0.0),
        };
        assert!(matches!(
            audit_hermite_hadamard(&t, &f),
            Err(Error::NegativeOnBoundary { .. })
        ));
    }
}
