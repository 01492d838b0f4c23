//! Random convex polygons never beat the regular n-gon on `|P|^(3/2) h2(P)`.
//!
//! ```text
//! cargo run --release --example faber_krahn_scan [count] [seed]
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use robin_honeycomb::cheeger::fk_deficit;
use robin_honeycomb::geometry::random_convex_polygon;

fn main() -> robin_honeycomb::Result<()> {
    let mut args = std::env::args().skip(1);
    let count: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(500);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(42);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut worst = (f64::INFINITY, String::new());
    for i in 0..count {
        let poly = random_convex_polygon(&mut rng, 3 + i % 8)?;
        let d = fk_deficit(&poly)?;
        if d < worst.0 {
            worst = (d, poly.to_string());
        }
    }
    println!("{count} polygons, seed {seed}");
    println!("smallest deficit {:.3e} at {}", worst.0, worst.1);
    Ok(())
}
