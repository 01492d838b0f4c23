//! FEM Robin eigenvalues of the unit square against the separable exact
//! value `2 lambda_1(interval)`, plus the Neumann gap and `Sigma_infty`.
//!
//! ```text
//! cargo run --release --example fem_square [mesh_h]
//! ```

use robin_honeycomb::fem::FemSolver;
use robin_honeycomb::geometry::ConvexPolygon;
use robin_honeycomb::robin1d::eig_interval;

fn main() -> robin_honeycomb::Result<()> {
    let h: f64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0.05);
    let square = ConvexPolygon::unit_square();
    let fem = FemSolver::new(&square, h)?;
    println!(
        "mesh h = {h}: {} / {} nodes",
        fem.coarse.num_nodes(),
        fem.fine.num_nodes()
    );
    println!(
        "{:>6} {:>14} {:>14} {:>14} {:>10}",
        "beta", "h", "h/2", "extrapolated", "rel err"
    );
    for beta in [-1.0, 0.5, 1.0, 5.0] {
        let r = fem.robin_eig(beta)?;
        let exact = 2.0 * eig_interval(beta);
        println!(
            "{:>6} {:>14.8} {:>14.8} {:>14.8} {:>10.2e}   exact {:.8}",
            beta,
            r.refinement_pair[0],
            r.refinement_pair[1],
            r.extrapolated,
            (r.extrapolated - exact).abs() / exact.abs(),
            exact
        );
    }
    let mu2 = fem.neumann_mu2()?;
    println!(
        "\nmu_2 = {:.8} (pi^2 = {:.8})",
        mu2.extrapolated,
        std::f64::consts::PI.powi(2)
    );
    let sigma = fem.sigma_infty()?;
    println!("Sigma_infty = {:.8}", sigma.extrapolated);
    let tau = fem.robin_torsion(1.0)?;
    println!("torsion(beta = 1) = {:.8}", tau.extrapolated);
    Ok(())
}
