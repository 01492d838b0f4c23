use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{ConvexPolygon, Point};
use crate::error::{Error, Result};

/// Core of a rounded body: a convex polygon, or the degenerate segment and
/// point cases reached at the inradius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Core {
    Point { at: Point },
    Segment { a: Point, b: Point },
    Polygon(ConvexPolygon),
}

impl Core {
    /// Perimeter of the core; a segment counts both sides.
    pub fn perimeter(&self) -> f64 {
        match self {
            Core::Point { .. } => 0.0,
            Core::Segment { a, b } => 2.0 * a.dist(*b),
            Core::Polygon(p) => p.perimeter(),
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            Core::Polygon(p) => p.area(),
            _ => 0.0,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        !matches!(self, Core::Polygon(_))
    }

    pub fn vertices(&self) -> Vec<Point> {
        match self {
            Core::Point { at } => vec![*at],
            Core::Segment { a, b } => vec![*a, *b],
            Core::Polygon(p) => p.vertices().to_vec(),
        }
    }

    /// Number of polygon edges, 0 for degenerate cores.
    pub fn edge_count(&self) -> usize {
        match self {
            Core::Polygon(p) => p.len(),
            _ => 0,
        }
    }

    /// Euclidean distance from `p` to the core (zero inside).
    pub fn distance(&self, p: Point) -> f64 {
        match self {
            Core::Point { at } => at.dist(p),
            Core::Segment { a, b } => segment_distance(p, *a, *b),
            Core::Polygon(poly) => {
                if poly.boundary_distance(p) >= 0.0 {
                    0.0
                } else {
                    poly.edges()
                        .map(|(a, b)| segment_distance(p, a, b))
                        .fold(f64::INFINITY, f64::min)
                }
            }
        }
    }

    /// Like [`Core::distance`] but negative inside a polygon core.
    pub fn signed_distance(&self, p: Point) -> f64 {
        match self {
            Core::Polygon(poly) if poly.boundary_distance(p) > 0.0 => -poly.boundary_distance(p),
            _ => self.distance(p),
        }
    }

    fn map(&self, f: impl Fn(Point) -> Point) -> Core {
        match self {
            Core::Point { at } => Core::Point { at: f(*at) },
            Core::Segment { a, b } => Core::Segment { a: f(*a), b: f(*b) },
            Core::Polygon(p) => Core::Polygon(ConvexPolygon {
                vertices: p.vertices().iter().map(|&v| f(v)).collect(),
            }),
        }
    }
}

fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let d = b - a;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(d) / len2).clamp(0.0, 1.0);
    p.dist(a.lerp(b, t))
}

/// Minkowski sum of a convex core with a closed disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundedBody {
    pub core: Core,
    pub radius: f64,
}

impl RoundedBody {
    pub fn new(core: Core, radius: f64) -> Result<Self> {
        if !(radius >= 0.0) || !radius.is_finite() {
            return Err(Error::InvalidArgument(format!("radius {radius}")));
        }
        if core.is_degenerate() && radius == 0.0 {
            return Err(Error::InvalidArgument(
                "degenerate core with zero radius".into(),
            ));
        }
        Ok(RoundedBody { core, radius })
    }

    /// Disk of radius `r` centered at `c`.
    pub fn disk(c: Point, r: f64) -> Result<Self> {
        RoundedBody::new(Core::Point { at: c }, r)
    }

    /// Steiner perimeter `Per(core) + 2 pi r`.
    pub fn perimeter(&self) -> f64 {
        self.core.perimeter() + 2.0 * PI * self.radius
    }

    /// Steiner area `|core| + r Per(core) + pi r^2`.
    pub fn area(&self) -> f64 {
        let r = self.radius;
        self.core.area() + r * self.core.perimeter() + PI * r * r
    }

    /// `(perimeter, area)`.
    pub fn measures(&self) -> (f64, f64) {
        (self.perimeter(), self.area())
    }

    pub fn is_degenerate(&self) -> bool {
        self.core.is_degenerate()
    }

    pub fn contains(&self, p: Point, tol: f64) -> bool {
        self.core.distance(p) <= self.radius + tol
    }

    pub fn translate(&self, by: Point) -> RoundedBody {
        RoundedBody {
            core: self.core.map(|v| v + by),
            radius: self.radius,
        }
    }

    /// Dilation about the origin.
    pub fn dilate(&self, t: f64) -> RoundedBody {
        assert!(t > 0.0, "dilation factor must be positive");
        RoundedBody {
            core: self.core.map(|v| v.scale(t)),
            radius: self.radius * t,
        }
    }

    /// Inscribed polygon: every corner arc is replaced by `arcs_per_corner`
    /// chords; a point core becomes a regular `arcs_per_corner`-gon.
    pub fn polygonize(&self, arcs_per_corner: usize) -> Result<ConvexPolygon> {
        if arcs_per_corner < 1 {
            return Err(Error::InvalidArgument(
                "arcs_per_corner must be >= 1".into(),
            ));
        }
        let r = self.radius;
        if r == 0.0 {
            return match &self.core {
                Core::Polygon(p) => Ok(p.clone()),
                _ => Err(Error::DegeneratePolygon(
                    "degenerate core with r = 0".into(),
                )),
            };
        }
        let vs = self.core.vertices();
        let mut out = Vec::new();
        if vs.len() == 1 {
            let n = arcs_per_corner.max(3);
            for j in 0..n {
                let t = 2.0 * PI * j as f64 / n as f64;
                out.push(vs[0] + Point::new(t.cos(), t.sin()).scale(r));
            }
            return ConvexPolygon::new(out);
        }
        let n = vs.len();
        // outward normal angle of edge i = (v_i, v_{i+1})
        let normal_angle: Vec<f64> = (0..n)
            .map(|i| {
                let e = vs[(i + 1) % n] - vs[i];
                (-e.x).atan2(e.y)
            })
            .collect();
        for i in 0..n {
            let start = normal_angle[(i + n - 1) % n];
            let mut sweep = normal_angle[i] - start;
            while sweep <= 0.0 {
                sweep += 2.0 * PI;
            }
            while sweep > 2.0 * PI {
                sweep -= 2.0 * PI;
            }
            for s in 0..=arcs_per_corner {
                let t = start + sweep * s as f64 / arcs_per_corner as f64;
                out.push(vs[i] + Point::new(t.cos(), t.sin()).scale(r));
            }
        }
        ConvexPolygon::new(out)
    }
}

/// Sutherland-Hodgman clip of `vertices` by `<n_i, x> <= c_i - r`, with
/// near-duplicate vertices merged.
pub(crate) fn clip_offset(vertices: &[Point], lines: &[(Point, f64)], r: f64) -> Vec<Point> {
    let mut poly: Vec<Point> = vertices.to_vec();
    for &(n, c) in lines {
        if poly.is_empty() {
            break;
        }
        let bound = c - r;
        let m = poly.len();
        let mut next = Vec::with_capacity(m + 2);
        for i in 0..m {
            let p = poly[i];
            let q = poly[(i + 1) % m];
            let sp = n.dot(p) - bound;
            let sq = n.dot(q) - bound;
            if sp <= 0.0 {
                next.push(p);
            }
            if (sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0) {
                let t = sp / (sp - sq);
                next.push(p.lerp(q, t));
            }
        }
        poly = next;
    }
    let scale = super::bbox_scale(vertices);
    dedupe(poly, 1e-12 * scale)
}

fn dedupe(poly: Vec<Point>, tol: f64) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(poly.len());
    for p in poly {
        if out.last().is_none_or(|q: &Point| q.dist(p) > tol) {
            out.push(p);
        }
    }
    while out.len() > 1 && out[0].dist(*out.last().unwrap()) <= tol {
        out.pop();
    }
    out
}

/// Drops vertices whose turn is below the collinearity tolerance.
fn drop_flat_vertices(mut vs: Vec<Point>, tol: f64) -> Vec<Point> {
    loop {
        let n = vs.len();
        if n < 3 {
            return vs;
        }
        let flat = (0..n).find(|&i| {
            let a = vs[(i + n - 1) % n];
            let b = vs[i];
            let c = vs[(i + 1) % n];
            (b - a).cross(c - b) <= tol
        });
        match flat {
            Some(i) => {
                vs.remove(i);
            }
            None => return vs,
        }
    }
}

/// Points of `P` at distance at least `r` from the complement: the
/// intersection of the edge half-planes moved inward by `r`.
///
/// Returns `Ok(None)` when the body is empty (`r` beyond the inradius). Cores
/// with area below `1e-14 scale^2` collapse to a segment or a point.
pub fn inner_parallel_body(p: &ConvexPolygon, r: f64) -> Result<Option<Core>> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("offset radius {r}")));
    }
    if r == 0.0 {
        return Ok(Some(Core::Polygon(p.clone())));
    }
    let scale = p.scale();
    let pts = clip_offset(p.vertices(), &p.edge_lines(), r);
    if pts.is_empty() {
        return Ok(None);
    }
    let area = super::signed_area(&pts).abs();
    if area < 1e-14 * scale * scale || pts.len() < 3 {
        let (mut best, mut pair) = (0.0, (pts[0], pts[0]));
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let d = pts[i].dist(pts[j]);
                if d > best {
                    best = d;
                    pair = (pts[i], pts[j]);
                }
            }
        }
        if best <= 1e-9 * scale {
            let n = pts.len() as f64;
            let c = pts
                .iter()
                .fold(Point::default(), |acc, &q| acc + q)
                .scale(1.0 / n);
            return Ok(Some(Core::Point { at: c }));
        }
        return Ok(Some(Core::Segment {
            a: pair.0,
            b: pair.1,
        }));
    }
    let vs = drop_flat_vertices(pts, super::COLLINEAR_TOL * scale * scale);
    match ConvexPolygon::new(vs) {
        Ok(poly) => Ok(Some(Core::Polygon(poly))),
        Err(e) => Err(Error::DegeneratePolygon(format!(
            "inner body at r = {r}: {e}"
        ))),
    }
}
