//! Normalized partition energies of hexagonal clusters in the unit square.
//!
//! ```text
//! cargo run --release --example honeycomb_table
//! ```

use robin_honeycomb::geometry::ConvexPolygon;
use robin_honeycomb::honeycomb::{asymptotic_table, HoneycombConfig, PartitionFunctional};

fn main() -> robin_honeycomb::Result<()> {
    let square = ConvexPolygon::unit_square();
    let config = HoneycombConfig::default();
    let ks = [16, 64, 256, 1024, 4096];
    for f in [
        PartitionFunctional::PerimeterP1,
        PartitionFunctional::Eig,
        PartitionFunctional::Torsion,
        PartitionFunctional::EigMax,
        PartitionFunctional::TorMax,
        PartitionFunctional::TorMaxPrinted,
    ] {
        println!("{}", f.name());
        println!(
            "{:>6} {:>8} {:>12} {:>12} {:>10}",
            "k", "eps_k", "scaled", "target", "deviation"
        );
        for r in asymptotic_table(&square, 1.0, &ks, f, &config)? {
            println!(
                "{:>6} {:>8.4} {:>12.6} {:>12.6} {:>10.2e}",
                r.k, r.epsilon, r.scaled, r.target, r.deviation
            );
        }
        println!();
    }
    Ok(())
}
