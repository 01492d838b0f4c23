use std::f64::consts::PI;

use rand::Rng;

use super::{ConvexPolygon, Point};
use crate::error::{Error, Result};

/// Andrew's monotone chain; returns the hull counter-clockwise without
/// collinear points.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                if (b - a).cross(p - b) <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Random convex polygon with (up to) `n` vertices: `n` points on a randomly
/// stretched and rotated ellipse at jittered angles, then the convex hull.
pub fn random_convex_polygon<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<ConvexPolygon> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("n = {n} < 3")));
    }
    for _ in 0..1000 {
        let a = 1.0;
        let b: f64 = rng.gen_range(0.25..1.0);
        let rot: f64 = rng.gen_range(0.0..PI);
        let step = 2.0 * PI / n as f64;
        let mut angles: Vec<f64> = (0..n)
            .map(|j| j as f64 * step + rng.gen_range(-0.4..0.4) * step)
            .collect();
        angles.sort_by(f64::total_cmp);
        let (s, c) = rot.sin_cos();
        let pts: Vec<Point> = angles
            .iter()
            .map(|t| {
                let (x, y) = (a * t.cos(), b * t.sin());
                Point::new(c * x - s * y, s * x + c * y)
            })
            .collect();
        let hull = convex_hull(&pts);
        if hull.len() < 3 {
            continue;
        }
        if let Ok(p) = ConvexPolygon::new(hull) {
            return Ok(p);
        }
    }
    Err(Error::DegeneratePolygon(
        "random polygon generation failed".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hull_of_square_with_interior_points() {
        let pts = vec![
            Point::new(0.0, 0.0),
            Point::new(0.5, 0.5),
            Point::new(1.0, 0.0),
            Point::new(0.5, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ];
        let hull = convex_hull(&pts);
        assert_eq!(hull.len(), 4);
        assert!(ConvexPolygon::new(hull).is_ok());
    }

    #[test]
    fn random_polygons_are_valid_and_reproducible() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let first: Vec<_> = (0..20)
            .map(|i| random_convex_polygon(&mut rng, 3 + i % 8).unwrap())
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for (i, p) in first.iter().enumerate() {
            let q = random_convex_polygon(&mut rng, 3 + i % 8).unwrap();
            assert_eq!(p, &q);
            assert!(p.len() >= 3 && p.len() <= 3 + i % 8);
        }
    }
}
