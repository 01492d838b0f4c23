use std::f64::consts::PI;

use robin_honeycomb::fem::{self, triangulate, FemSolver};
use robin_honeycomb::geometry::{ConvexPolygon, Point, RoundedBody};
use robin_honeycomb::robin1d::eig_interval;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn square_matches_separable_value() {
    let square = ConvexPolygon::unit_square();
    let solver = FemSolver::new(&square, 0.05).unwrap();
    for beta in [-1.0, 0.5, 1.0, 5.0] {
        let r = solver.robin_eig(beta).unwrap();
        let exact = 2.0 * eig_interval(beta);
        assert!(rel(r.extrapolated, exact) < 5e-3, "beta = {beta}");
        assert!(r.residual <= 1e-10);
    }
    let mu2 = solver.neumann_mu2().unwrap();
    assert!(rel(mu2.extrapolated, PI * PI) < 5e-3);
}

#[test]
fn error_drops_by_at_least_three_per_halving() {
    let square = ConvexPolygon::unit_square();
    let exact = 2.0 * eig_interval(1.0);
    let r = fem::robin_eig(&square, 1.0, 0.1).unwrap();
    let [coarse, fine] = r.refinement_pair;
    let factor = (coarse - exact).abs() / (fine - exact).abs();
    assert!(factor >= 3.0, "factor {factor}");
    // P1 eigenvalues approximate from above
    assert!(fine > exact && coarse > fine);
}

#[test]
fn eigenvalue_scaling_law() {
    // lambda(t P, beta / t) = lambda(P, beta) / t^2
    let poly = ConvexPolygon::regular(5, 1.0).unwrap();
    let base = fem::robin_eig(&poly, 2.0, 0.05).unwrap().extrapolated;
    for t in [0.5, 3.0] {
        let scaled = fem::robin_eig(&poly.dilate(t), 2.0 / t, 0.05 * t)
            .unwrap()
            .extrapolated;
        assert!(rel(scaled * t * t, base) < 1e-8, "t = {t}");
    }
}

#[test]
fn torsion_scaling_law() {
    // tau(t P, beta / t) = t^4 tau(P, beta)
    let poly = ConvexPolygon::rectangle(2.0, 1.0).unwrap();
    let base = fem::robin_torsion(&poly, 1.0, 0.05).unwrap().extrapolated;
    let t = 2.5;
    let scaled = fem::robin_torsion(&poly.dilate(t), 1.0 / t, 0.05 * t)
        .unwrap()
        .extrapolated;
    assert!(rel(scaled, t.powi(4) * base) < 1e-8);
}

#[test]
fn eigenvalue_increases_with_beta() {
    let poly = ConvexPolygon::regular(6, 1.0).unwrap();
    let solver = FemSolver::new(&poly, 0.08).unwrap();
    let values: Vec<f64> = [-2.0, -0.5, 0.1, 1.0, 10.0, 100.0]
        .iter()
        .map(|&b| solver.robin_eig(b).unwrap().value)
        .collect();
    assert!(values.windows(2).all(|w| w[1] > w[0]), "{values:?}");
}

#[test]
fn torsion_decreases_with_beta() {
    // the constant test function gives tau >= A^2 / (beta P)
    let square = ConvexPolygon::unit_square();
    let solver = FemSolver::new(&square, 0.08).unwrap();
    let mut last = f64::INFINITY;
    for beta in [0.1, 1.0, 10.0, 100.0] {
        let tau = solver.robin_torsion(beta).unwrap().value;
        assert!(tau < last && tau >= 0.25 / beta, "beta = {beta}");
        last = tau;
    }
    // approaching the Dirichlet value 0.0351442 from above
    assert!(last > 0.03514 && last < 0.04, "{last}");
}

#[test]
fn disk_sigma_infty() {
    let disk = RoundedBody::disk(Point::new(0.0, 0.0), 1.0)
        .unwrap()
        .polygonize(64)
        .unwrap();
    let s = fem::sigma_infty(&disk, 0.08).unwrap();
    assert!(rel(s.extrapolated, PI / 8.0) < 5e-3, "{}", s.extrapolated);
}

#[test]
fn unsupported_torsion_beta() {
    let square = ConvexPolygon::unit_square();
    assert!(fem::robin_torsion(&square, -1.0, 0.1).is_err());
}

#[test]
fn mesh_is_conforming() {
    let poly = ConvexPolygon::regular(7, 2.0).unwrap();
    let mesh = triangulate(&poly, 0.1).unwrap();
    mesh.validate(&poly).unwrap();
    assert!(rel(mesh.area(), poly.area()) < 1e-12);
    assert!(rel(mesh.boundary_length(), poly.perimeter()) < 1e-12);
    let fine = mesh.refine();
    assert!(rel(fine.area(), poly.area()) < 1e-12);
    assert!(fine.max_edge() <= 0.5 * mesh.max_edge() + 1e-12);
}
