//! Cheeger and 2-Cheeger constants of a few convex polygons, closed form next
//! to the brute-force oracle.
//!
//! ```text
//! cargo run --release --example cheeger_constants
//! ```

use robin_honeycomb::cheeger::{cheeger_closed_form, cheeger_oracle, hex_constants, ORACLE_GRID};
use robin_honeycomb::geometry::ConvexPolygon;

fn main() -> robin_honeycomb::Result<()> {
    let shapes = [
        ("square", ConvexPolygon::unit_square()),
        ("triangle", ConvexPolygon::regular(3, 1.0)?),
        ("hexagon", ConvexPolygon::regular(6, 1.0)?),
        ("rectangle 4x1", ConvexPolygon::rectangle(4.0, 1.0)?),
    ];
    println!(
        "{:<14} {:>2} {:>10} {:>18} {:>18} {:>6}",
        "shape", "p", "radius", "closed form", "oracle", "valid"
    );
    for (name, poly) in &shapes {
        for p in [1, 2] {
            let closed = cheeger_closed_form(poly, p)?;
            let oracle = cheeger_oracle(poly, p, ORACLE_GRID)?;
            println!(
                "{:<14} {:>2} {:>10.6} {:>18.12} {:>18.12} {:>6}",
                name, p, closed.radius, closed.constant, oracle.constant, closed.valid_closed_form
            );
        }
    }
    let hex = hex_constants();
    println!(
        "\nunit-area hexagon: h = {:.12}, h2 = {:.12}",
        hex.h, hex.h2
    );
    println!(
        "2 + sqrt(pi)     = {:.12}",
        2.0 + std::f64::consts::PI.sqrt()
    );
    Ok(())
}
