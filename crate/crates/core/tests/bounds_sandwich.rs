use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use robin_honeycomb::bounds::{
    asymptotic_check, eig_lower_width, eig_upper, tor_lower_width, tor_upper, within, Functional,
    ShapeReference,
};
use robin_honeycomb::geometry::{random_convex_polygon, ConvexPolygon};

#[test]
fn square_sandwich_holds() {
    let reference = ShapeReference::new("square", ConvexPolygon::unit_square(), 0.05).unwrap();
    for beta in [0.1, 1.0, 10.0] {
        let r = reference.report(beta).unwrap();
        assert!(r.sandwich_ok, "beta = {beta}: {:?}", r.violations);
        assert!(r.rows().iter().all(|row| row.ok));
        assert_eq!(r.rows().len(), 8);
    }
}

#[test]
fn negative_beta_reports_only_upper_bounds() {
    let reference = ShapeReference::new("square", ConvexPolygon::unit_square(), 0.05).unwrap();
    let r = reference.report(-1.0).unwrap();
    assert!(
        r.eig_lower_sperb.is_none() && r.eig_lower_bossel.is_none() && r.eig_lower_width.is_none()
    );
    assert!(r.fem_torsion_inv.is_none());
    assert!(r.fem_eig <= r.eig_upper);
    let rows = r.rows();
    assert_eq!(rows.len(), 2);
    assert!(rows[1].fem.is_none());
}

#[test]
fn thin_rectangle_width_bound_dominates() {
    let rect = ConvexPolygon::rectangle(4.0, 1.0).unwrap();
    let reference = ShapeReference::new("rect", rect, 0.04).unwrap();
    let r = reference.report(1.0).unwrap();
    assert!(r.sandwich_ok, "{:?}", r.violations);
    let width = r.eig_lower_width.unwrap();
    assert!(width > r.eig_lower_sperb.unwrap() && width > r.eig_lower_bossel.unwrap());
}

#[test]
fn random_pentagon_sandwich() {
    let poly = random_convex_polygon(&mut ChaCha8Rng::seed_from_u64(7), 5).unwrap();
    let h = 0.04 * poly.area().sqrt();
    let reference = ShapeReference::new("pentagon", poly, h).unwrap();
    for beta in [0.1, 1.0, 10.0] {
        let r = reference.report(beta).unwrap();
        assert!(r.sandwich_ok, "beta = {beta}: {:?}", r.violations);
    }
}

#[test]
fn closed_form_bounds_are_homogeneous() {
    // value(t P, beta / t) = value(P, beta) / t^2 for the eigenvalue bounds,
    // and / t^4 for the inverse torsion bounds
    let poly = ConvexPolygon::regular(5, 1.0).unwrap();
    let t = 3.0;
    let big = poly.dilate(t);
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-10 * b.abs();
    assert!(close(
        eig_upper(&big, 2.0 / t).unwrap() * t * t,
        eig_upper(&poly, 2.0).unwrap()
    ));
    assert!(close(
        eig_lower_width(&big, 2.0 / t).unwrap().value * t * t,
        eig_lower_width(&poly, 2.0).unwrap().value
    ));
    assert!(close(
        tor_upper(&big, 2.0 / t).unwrap() * t.powi(4),
        tor_upper(&poly, 2.0).unwrap()
    ));
    assert!(close(
        tor_lower_width(&big, 2.0 / t).unwrap().value * t.powi(4),
        tor_lower_width(&poly, 2.0).unwrap().value
    ));
}

#[test]
fn small_beta_deviation_shrinks() {
    let square = ConvexPolygon::unit_square();
    for f in [Functional::Eig, Functional::Torsion] {
        let rows = asymptotic_check(&square, f, &[1e-1, 1e-2, 1e-3], 0.05).unwrap();
        assert!(rows.windows(2).all(|w| w[1].deviation < w[0].deviation));
        let last = rows.last().unwrap();
        assert!(last.deviation / last.target < 0.01);
    }
}

#[test]
fn tolerance_helper() {
    assert!(within(1.0, 1.0));
    assert!(within(1.001, 1.0));
    assert!(!within(1.01, 1.0));
    assert!(within(-4.0, -3.999));
}
