//! Reading and writing the polygon exchange format, and the basic geometry
//! a polygon exposes.
//!
//! ```text
//! cargo run --release --example polygon_io [polygon.json]
//! ```

use robin_honeycomb::geometry::{
    inner_parallel_body, load_polygon_file, parse_polygon_json, polygon_to_json,
};

fn main() -> robin_honeycomb::Result<()> {
    let poly = match std::env::args().nth(1) {
        Some(path) => load_polygon_file(path)?,
        // clockwise on purpose: it is reoriented on load
        None => parse_polygon_json(r#"{"vertices": [[0, 0], [0, 1], [2, 1.5], [3, 0]]}"#)?,
    };
    println!("{}", polygon_to_json(&poly));
    let (diam, dir) = poly.diameter();
    println!(
        "area {:.6}, perimeter {:.6}, inradius {:.6}",
        poly.area(),
        poly.perimeter(),
        poly.inradius()
    );
    println!(
        "diameter {:.6} along ({:.4}, {:.4})",
        diam,
        dir.x(),
        dir.y()
    );
    println!("width across the diameter {:.6}", poly.width(&dir.perp()));
    println!("sum cot(theta/2) = {:.6}", poly.lambda_sum());
    for r in [0.1, 0.3] {
        match inner_parallel_body(&poly, r)? {
            Some(core) => println!(
                "core at r = {r}: area {:.6}, {} edges",
                core.area(),
                core.edge_count()
            ),
            None => println!("core at r = {r}: empty"),
        }
    }
    Ok(())
}
