//! Every eigenvalue and torsion bound next to the FEM value, for a few shapes.
//!
//! ```text
//! cargo run --release --example bounds_sandwich
//! ```

use robin_honeycomb::bounds::{asymptotic_check, Functional, ShapeReference};
use robin_honeycomb::geometry::ConvexPolygon;

fn main() -> robin_honeycomb::Result<()> {
    let shapes = [
        ("square", ConvexPolygon::unit_square()),
        ("hexagon", ConvexPolygon::regular(6, 1.0)?),
        ("rectangle 4x1", ConvexPolygon::rectangle(4.0, 1.0)?),
    ];
    for (name, poly) in shapes {
        let h = 0.04 * poly.area().sqrt();
        let reference = ShapeReference::new(name, poly, h)?;
        for beta in [-1.0, 0.1, 1.0, 10.0] {
            let report = reference.report(beta)?;
            println!(
                "{name}, beta = {beta}: sandwich {}",
                if report.sandwich_ok { "ok" } else { "BROKEN" }
            );
            for row in report.rows() {
                let fem = row.fem.map_or("-".to_string(), |v| format!("{v:.6}"));
                println!(
                    "  {:<18} {:>14.6}  fem {:>10}",
                    row.bound_name, row.value, fem
                );
            }
        }
        println!();
    }

    let square = ConvexPolygon::unit_square();
    println!("small beta on the square: value/beta -> P/A, P/A^2");
    for f in [Functional::Eig, Functional::Torsion] {
        for row in asymptotic_check(&square, f, &[1e-1, 1e-2, 1e-3], 0.05)? {
            println!(
                "  {:?} beta = {:<6} ratio {:.8} target {} deviation {:.2e}",
                f, row.beta, row.ratio, row.target, row.deviation
            );
        }
    }
    Ok(())
}
