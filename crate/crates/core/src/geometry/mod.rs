//! Convex polygon primitives, parallel bodies and hexagonal lattices.
//!
//! Polygons are stored counter-clockwise and strictly convex. Rounded bodies
//! (a convex core dilated by a disk) represent Cheeger-type sets; their
//! perimeter and area follow the Steiner formula.

mod io;
mod lattice;
mod offset;
mod random;

pub use io::{load_polygon_file, parse_polygon_json, polygon_to_json, PolygonFile};
pub(crate) use lattice::lattice_with_frame_area;
pub use lattice::{hex_lattice_cells, HexLattice};
pub use offset::{inner_parallel_body, Core, RoundedBody};
pub use random::{convex_hull, random_convex_polygon};

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point (or vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for Point {
    fn from(v: [f64; 2]) -> Self {
        Point::new(v[0], v[1])
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    pub fn scale(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }

    /// Counter-clockwise rotation by a quarter turn.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        Point::new(self.x + t * (o.x - self.x), self.y + t * (o.y - self.y))
    }
}

impl std::ops::Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl std::ops::Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Unit vector in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Direction {
    x: f64,
    y: f64,
}

impl TryFrom<[f64; 2]> for Direction {
    type Error = Error;
    fn try_from(v: [f64; 2]) -> Result<Self> {
        Direction::new(v[0], v[1])
    }
}

impl From<Direction> for [f64; 2] {
    fn from(d: Direction) -> Self {
        [d.x, d.y]
    }
}

impl Direction {
    /// Normalizes `(x, y)`; fails for the zero vector.
    pub fn new(x: f64, y: f64) -> Result<Self> {
        let n = x.hypot(y);
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "direction ({x}, {y}) cannot be normalized"
            )));
        }
        Ok(Direction { x: x / n, y: y / n })
    }

    pub fn from_angle(theta: f64) -> Self {
        Direction {
            x: theta.cos(),
            y: theta.sin(),
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn as_point(&self) -> Point {
        Point::new(self.x, self.y)
    }

    pub fn perp(&self) -> Direction {
        Direction {
            x: -self.y,
            y: self.x,
        }
    }

    /// Representative of the line `±self` with `x > 0`, or `x == 0, y > 0`.
    pub fn canonical(&self) -> Direction {
        if self.x < 0.0 || (self.x == 0.0 && self.y < 0.0) {
            Direction {
                x: -self.x,
                y: -self.y,
            }
        } else {
            *self
        }
    }
}

const COLLINEAR_TOL: f64 = 1e-12;

/// Strictly convex polygon with counter-clockwise vertices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl<'de> Deserialize<'de> for ConvexPolygon {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            vertices: Vec<Point>,
        }
        let raw = Raw::deserialize(d)?;
        ConvexPolygon::new(raw.vertices).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for ConvexPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "polygon[")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({}, {})", v.x, v.y)?;
        }
        write!(f, "]")
    }
}

fn signed_area(vs: &[Point]) -> f64 {
    let n = vs.len();
    let mut s = 0.0;
    for i in 0..n {
        s += vs[i].cross(vs[(i + 1) % n]);
    }
    0.5 * s
}

fn bbox_scale(vs: &[Point]) -> f64 {
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for v in vs {
        x0 = x0.min(v.x);
        y0 = y0.min(v.y);
        x1 = x1.max(v.x);
        y1 = y1.max(v.y);
    }
    (x1 - x0).hypot(y1 - y0)
}

impl ConvexPolygon {
    /// Validates a counter-clockwise, strictly convex vertex list.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::DegeneratePolygon(format!("{n} vertices")));
        }
        if vertices
            .iter()
            .any(|v| !v.x.is_finite() || !v.y.is_finite())
        {
            return Err(Error::DegeneratePolygon("non-finite coordinate".into()));
        }
        let scale = bbox_scale(&vertices);
        if !(scale > 0.0) {
            return Err(Error::DegeneratePolygon("zero extent".into()));
        }
        let area = signed_area(&vertices);
        if area.abs() <= 1e-14 * scale * scale {
            return Err(Error::DegeneratePolygon(format!("area {area:e}")));
        }
        if area < 0.0 {
            return Err(Error::Clockwise);
        }
        let tol = COLLINEAR_TOL * scale * scale;
        for i in 0..n {
            let a = vertices[(i + n - 1) % n];
            let b = vertices[i];
            let c = vertices[(i + 1) % n];
            if (b - a).cross(c - b) <= tol {
                return Err(Error::NotConvex { index: i });
            }
        }
        // Locally convex turns with total turning 2pi: reject star-shaped windings.
        let turning: f64 = (0..n)
            .map(|i| {
                let e0 = vertices[i] - vertices[(i + n - 1) % n];
                let e1 = vertices[(i + 1) % n] - vertices[i];
                e0.cross(e1).atan2(e0.dot(e1))
            })
            .sum();
        if (turning - 2.0 * PI).abs() > 1e-6 {
            return Err(Error::NotConvex { index: 0 });
        }
        Ok(ConvexPolygon { vertices })
    }

    /// Like [`ConvexPolygon::new`] but accepts clockwise input, reversing it.
    /// Returns whether the input was reversed.
    pub fn new_any_orientation(mut vertices: Vec<Point>) -> Result<(Self, bool)> {
        let reversed = vertices.len() >= 3 && signed_area(&vertices) < 0.0;
        if reversed {
            vertices.reverse();
        }
        Ok((ConvexPolygon::new(vertices)?, reversed))
    }

    /// Axis-aligned rectangle `[0, a] x [0, b]`.
    pub fn rectangle(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::InvalidArgument(format!("rectangle {a} x {b}")));
        }
        ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(a, 0.0),
            Point::new(a, b),
            Point::new(0.0, b),
        ])
    }

    pub fn unit_square() -> Self {
        ConvexPolygon::rectangle(1.0, 1.0).expect("unit square")
    }

    /// Regular `n`-gon of the given area, centered at the origin, with a
    /// horizontal bottom edge.
    pub fn regular(n: usize, target_area: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument(format!(
                "regular polygon needs n >= 3, got {n}"
            )));
        }
        if !(target_area > 0.0) || !target_area.is_finite() {
            return Err(Error::InvalidArgument(format!("area {target_area}")));
        }
        let nf = n as f64;
        // area = n/2 R^2 sin(2pi/n)
        let circumradius = (2.0 * target_area / (nf * (2.0 * PI / nf).sin())).sqrt();
        let offset = -0.5 * PI - PI / nf;
        let vertices = (0..n)
            .map(|j| {
                let t = offset + 2.0 * PI * j as f64 / nf;
                Point::new(circumradius * t.cos(), circumradius * t.sin())
            })
            .collect();
        ConvexPolygon::new(vertices)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i % self.vertices.len()]
    }

    /// Edges `(v_i, v_{i+1})`.
    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Outward unit normal of edge `i` together with the support value
    /// `c_i = <n_i, v_i>`, so that the polygon is `{x : <n_i, x> <= c_i}`.
    pub fn edge_lines(&self) -> Vec<(Point, f64)> {
        self.edges()
            .map(|(a, b)| {
                let e = b - a;
                let n = Point::new(e.y, -e.x).scale(1.0 / e.norm());
                (n, n.dot(a))
            })
            .collect()
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| a.dist(b)).sum()
    }

    pub fn edge_lengths(&self) -> Vec<f64> {
        self.edges().map(|(a, b)| a.dist(b)).collect()
    }

    /// Interior angles `theta_i` at each vertex.
    pub fn interior_angles(&self) -> Vec<f64> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let p = self.vertices[(i + n - 1) % n] - self.vertices[i];
                let q = self.vertices[(i + 1) % n] - self.vertices[i];
                q.cross(p).atan2(q.dot(p))
            })
            .collect()
    }

    /// `sum_i cot(theta_i / 2)` over the interior angles.
    pub fn lambda_sum(&self) -> f64 {
        self.interior_angles()
            .iter()
            .map(|t| 1.0 / (0.5 * t).tan())
            .sum()
    }

    pub fn centroid(&self) -> Point {
        let n = self.vertices.len();
        let (mut cx, mut cy, mut a2) = (0.0, 0.0, 0.0);
        let o = self.vertices[0];
        for i in 0..n {
            let p = self.vertices[i] - o;
            let q = self.vertices[(i + 1) % n] - o;
            let c = p.cross(q);
            a2 += c;
            cx += (p.x + q.x) * c;
            cy += (p.y + q.y) * c;
        }
        Point::new(o.x + cx / (3.0 * a2), o.y + cy / (3.0 * a2))
    }

    /// Length of the bounding-box diagonal; the scale for tolerances.
    pub fn scale(&self) -> f64 {
        bbox_scale(&self.vertices)
    }

    /// Maximum vertex distance and its direction. Ties resolve to the
    /// lexicographically smallest canonical direction.
    pub fn diameter(&self) -> (f64, Direction) {
        let vs = &self.vertices;
        let mut best = 0.0f64;
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                best = best.max(vs[i].dist(vs[j]));
            }
        }
        let tol = 1e-12 * best;
        let mut dir: Option<Direction> = None;
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                if vs[i].dist(vs[j]) >= best - tol {
                    let d = vs[j] - vs[i];
                    let cand = Direction::new(d.x, d.y)
                        .expect("distinct vertices")
                        .canonical();
                    dir = Some(match dir {
                        Some(cur) if (cur.x, cur.y) <= (cand.x, cand.y) => cur,
                        _ => cand,
                    });
                }
            }
        }
        (best, dir.expect("polygon has at least two vertices"))
    }

    /// Support extent `max <x, xi> - min <x, xi>` over the vertices.
    pub fn width(&self, xi: &Direction) -> f64 {
        let d = xi.as_point();
        let (lo, hi) = self
            .vertices
            .iter()
            .fold((f64::MAX, f64::MIN), |(lo, hi), v| {
                let s = v.dot(d);
                (lo.min(s), hi.max(s))
            });
        hi - lo
    }

    /// Width orthogonal to a diameter divided by the diameter.
    pub fn conv_eps_ratio(&self) -> f64 {
        let (d, dir) = self.diameter();
        self.width(&dir.perp()) / d
    }

    /// Whether the polygon belongs to `Conv(eps)`.
    pub fn in_conv_eps(&self, eps: f64) -> bool {
        self.conv_eps_ratio() >= eps
    }

    /// Minimum over edges of the inward distance to the edge line; positive
    /// inside, the distance to the boundary for interior points.
    pub fn boundary_distance(&self, p: Point) -> f64 {
        self.edge_lines()
            .iter()
            .map(|(n, c)| c - n.dot(p))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, p: Point, tol: f64) -> bool {
        self.boundary_distance(p) >= -tol
    }

    /// Largest `r` for which the inner parallel body is non-empty.
    pub fn inradius(&self) -> f64 {
        let lines = self.edge_lines();
        let mut lo = 0.0;
        let mut hi = self.width(&self.diameter().1.perp());
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if offset::clip_offset(&self.vertices, &lines, mid).is_empty() {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        lo
    }

    pub fn translate(&self, by: Point) -> ConvexPolygon {
        ConvexPolygon {
            vertices: self.vertices.iter().map(|&v| v + by).collect(),
        }
    }

    /// Dilation about the origin by `t > 0`.
    pub fn dilate(&self, t: f64) -> ConvexPolygon {
        assert!(t > 0.0, "dilation factor must be positive");
        ConvexPolygon {
            vertices: self.vertices.iter().map(|&v| v.scale(t)).collect(),
        }
    }

    /// Whether `other` lies inside `self` (vertex test, valid by convexity).
    pub fn contains_polygon(&self, other: &ConvexPolygon, tol: f64) -> bool {
        other.vertices.iter().all(|&v| self.contains(v, tol))
    }
}

/// Regular `n`-gon of the given area; see [`ConvexPolygon::regular`].
pub fn regular_ngon(n: usize, target_area: f64) -> Result<ConvexPolygon> {
    ConvexPolygon::regular(n, target_area)
}

/// Unit-area regular hexagon with a horizontal bottom edge.
pub fn unit_hexagon() -> ConvexPolygon {
    ConvexPolygon::regular(6, 1.0).expect("hexagon")
}
