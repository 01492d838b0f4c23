//! Exact Robin eigenvalue and torsion on an interval, and the thin-strip
//! limits `lambda(w beta)/w -> 2 beta`, `1/tau(w beta)/w -> 2 beta`.
//!
//! ```text
//! cargo run --release --example interval_robin
//! ```

use robin_honeycomb::robin1d::{
    eig_interval, eig_relation_residual, small_width_eig_limit, small_width_torsion_limit,
    torsion_interval,
};

fn main() -> robin_honeycomb::Result<()> {
    println!(
        "{:>10} {:>22} {:>10} {:>16}",
        "alpha", "lambda_1", "residual", "torsion"
    );
    for alpha in [-10.0, -1.0, -1e-3, 1e-3, 1.0, 10.0, 1e6] {
        let lambda = eig_interval(alpha);
        let tau = match torsion_interval(alpha) {
            Ok(t) => format!("{t:.10}"),
            Err(_) => "-".into(),
        };
        println!(
            "{:>10} {:>22.15} {:>10.1e} {:>16}",
            alpha,
            lambda,
            eig_relation_residual(alpha, lambda),
            tau
        );
    }

    let ws = [1e-1, 1e-2, 1e-3, 1e-4];
    for beta in [1.0, 5.0] {
        let eig = small_width_eig_limit(beta, &ws)?;
        let tor = small_width_torsion_limit(beta, &ws)?;
        println!("\nbeta = {beta}: target 2 beta = {}", 2.0 * beta);
        for ((w, e), t) in ws.iter().zip(&eig).zip(&tor) {
            println!("  w = {w:<8e} eig/w = {e:<14.8} torsion^-1/w = {t:.8}");
        }
    }
    Ok(())
}
