use std::f64::consts::PI;
use std::sync::OnceLock;

use torsion_core::bounds::bound_at;
use torsion_core::corpus::{audit_corpus, lower_bound_decagon, CorpusDomain};
use torsion_core::geometry::{fraenkel_asymmetry, regular_ngon};
use torsion_core::torsion::{audit_all, quantitative_saint_venant_check, solve};
use torsion_core::{ConvexPolygon, Point2, Resolution, TorsionSolution};

struct Solved {
    domain: CorpusDomain,
    t: TorsionSolution,
}

/// Corpus solved once at strength 1.
fn solved() -> &'static [Solved] {
    static CELL: OnceLock<Vec<Solved>> = OnceLock::new();
    CELL.get_or_init(|| {
        audit_corpus()
            .into_iter()
            .map(|d| {
                let t = solve(&d.polygon, 1.0, Resolution::auto(&d.polygon)).unwrap();
                Solved { domain: d, t }
            })
            .collect()
    })
}

#[test]
fn audits_pass_on_every_domain() {
    for s in solved() {
        let r = audit_all(&s.t).unwrap();
        assert!(
            r.passed(),
            "{}: {:?}",
            s.domain.name,
            r.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>()
        );
    }
}

#[test]
fn dirichlet_energy_equals_strength_times_rigidity() {
    for s in solved() {
        let t = &s.t;
        let rel = (t.dirichlet_energy - t.strength * t.rigidity).abs() / (t.strength * t.rigidity);
        assert!(rel < 1e-6, "{}: {rel:e}", s.domain.name);
    }
}

#[test]
fn rigidity_agrees_between_density_and_flux() {
    for s in solved() {
        let t = &s.t;
        // the flux route weights q by |x − c|², so the weak corner layer at
        // near-flat vertices (many-sided polygons) costs it a few 1e-6
        let rel = (t.rigidity - t.rigidity_from_flux()).abs() / t.rigidity;
        assert!(rel < 1e-5, "{}: {rel:e}", s.domain.name);
    }
}

#[test]
fn constant_stays_below_brownian_bound_near_disk() {
    let b = bound_at(0.13).unwrap();
    let limit = 1.0 / (2.0 * PI).sqrt();
    for s in solved() {
        let c = s.t.c_value();
        assert!(c <= limit + 1e-3, "{}: {c}", s.domain.name);
        if fraenkel_asymmetry(&s.domain.polygon).unwrap().asymmetry <= 0.05 {
            assert!(c <= b.bound_c + 1e-3, "{}: {c} > {}", s.domain.name, b.bound_c);
        }
    }
}

#[test]
fn saint_venant_deficit_is_nonnegative() {
    let polys: Vec<ConvexPolygon> = audit_corpus()
        .into_iter()
        .filter(|d| d.polygon.len() <= 12)
        .map(|d| d.polygon)
        .collect();
    let r = quantitative_saint_venant_check(&polys, Resolution::coarse()).unwrap();
    assert!(r.all_nonnegative, "{:?}", r.entries);
    assert!(r.min_ratio.unwrap() > 0.0);
}

#[test]
fn max_u_is_monotone_under_inclusion() {
    let res = Resolution::coarse();
    let pairs: Vec<(ConvexPolygon, ConvexPolygon)> = vec![
        // unit square inside a 24-gon of area 2
        (regular_ngon(4, 1.0).unwrap(), regular_ngon(24, 2.0).unwrap()),
        // decagon inside a slightly dilated copy
        {
            let d = lower_bound_decagon();
            let c = d.centroid();
            let big = d.translate(-c).scale(1.05).translate(c);
            (d, big)
        },
        // triangle inside its bounding rectangle
        (
            ConvexPolygon::new(vec![
                Point2::new(0.0, 0.0),
                Point2::new(2.0, 0.0),
                Point2::new(0.5, 1.0),
            ])
            .unwrap(),
            ConvexPolygon::new(vec![
                Point2::new(0.0, 0.0),
                Point2::new(2.0, 0.0),
                Point2::new(2.0, 1.0),
                Point2::new(0.0, 1.0),
            ])
            .unwrap(),
        ),
    ];
    for (inner, outer) in pairs {
        assert!(outer.contains_polygon(&inner, 1e-12));
        let a = solve(&inner, 2.0, res).unwrap();
        let b = solve(&outer, 2.0, res).unwrap();
        assert!(a.max_u <= b.max_u, "{} > {}", a.max_u, b.max_u);
        assert!(a.rigidity <= b.rigidity);
    }
}

#[test]
fn solution_scales_with_domain() {
    // u_λ(λx) = λ² u(x), so max_u scales by λ², rigidity by λ⁴, c is invariant
    let p = lower_bound_decagon();
    let q = p.scale(2.0).translate(Point2::new(-3.0, 5.0));
    let (a, b) = (
        solve(&p, 1.0, Resolution::default()).unwrap(),
        solve(&q, 1.0, Resolution::default()).unwrap(),
    );
    assert!((b.max_u / a.max_u - 4.0).abs() < 1e-8);
    assert!((b.rigidity / a.rigidity - 16.0).abs() < 1e-7);
    assert!((b.c_value() - a.c_value()).abs() < 1e-9);
}
