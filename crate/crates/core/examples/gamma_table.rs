//! The Faber-Krahn constants `gamma(n) = |P|^(3/2) h2(P)` of regular n-gons.
//!
//! ```text
//! cargo run --release --example gamma_table
//! ```

use robin_honeycomb::cheeger::gamma_table;

fn main() -> robin_honeycomb::Result<()> {
    let rows = gamma_table(3..=16)?;
    println!("{:>3} {:>16} {:>16}", "n", "gamma", "gamma^(2/5)");
    for r in &rows {
        println!("{:>3} {:>16.12} {:>16.12}", r.n, r.gamma, r.gamma_pow_2_5);
    }
    // a disk is its own 2-Cheeger set, so the limit is Per/sqrt(Area)
    let disk = 2.0 * std::f64::consts::PI.sqrt();
    println!("\nn -> inf limit: {disk:.12}");
    Ok(())
}
