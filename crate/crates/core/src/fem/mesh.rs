use std::collections::HashMap;
use std::io::Write;

use serde::Serialize;
use spade::{DelaunayTriangulation, HasPosition, Point2, Triangulation};

use crate::error::{Error, Result};
use crate::geometry::{ConvexPolygon, Point};

/// Default node budget for [`triangulate`].
pub const NODE_CAP: usize = 500_000;

/// Triangulation of a convex polygon with its oriented boundary chain.
#[derive(Debug, Clone, Serialize)]
pub struct Mesh {
    pub nodes: Vec<Point>,
    /// Counter-clockwise node triples.
    pub triangles: Vec<[usize; 3]>,
    /// Boundary edges `(a, b)` with the domain on the left.
    pub boundary_edges: Vec<[usize; 2]>,
    /// Target edge length.
    pub h: f64,
}

struct Site {
    pos: Point2<f64>,
    id: usize,
}

impl HasPosition for Site {
    type Scalar = f64;
    fn position(&self) -> Point2<f64> {
        self.pos
    }
}

fn tri_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * (b - a).cross(c - a)
}

/// Boundary points at spacing at most `h` on every edge, plus a triangular
/// lattice of spacing `h` through the centroid, kept `0.45 h` away from the
/// boundary; Delaunay-triangulated.
pub fn triangulate(poly: &ConvexPolygon, h: f64) -> Result<Mesh> {
    triangulate_with_cap(poly, h, NODE_CAP)
}

/// Approximate node count of [`triangulate`] at size `h`.
pub fn estimate_nodes(poly: &ConvexPolygon, h: f64) -> usize {
    (poly.area() / (0.5 * 3f64.sqrt() * h * h) + poly.perimeter() / h).ceil() as usize
}

pub fn triangulate_with_cap(poly: &ConvexPolygon, h: f64, cap: usize) -> Result<Mesh> {
    let (diam, _) = poly.diameter();
    if !(h > 0.0 && h < diam) {
        return Err(Error::InvalidArgument(format!(
            "mesh size {h} must lie in (0, {diam})"
        )));
    }
    let estimate = estimate_nodes(poly, h);
    if estimate > cap {
        return Err(Error::NodeBudget {
            nodes: estimate,
            cap,
        });
    }

    let n = poly.len();
    let mut nodes: Vec<Point> = Vec::new();
    // polygon edges each boundary node sits on (vertices sit on two)
    let mut on_edge: Vec<[usize; 2]> = Vec::new();
    for (i, (a, b)) in poly.edges().enumerate() {
        let m = ((b - a).norm() / h).ceil().max(1.0) as usize;
        nodes.push(a);
        on_edge.push([i, (i + n - 1) % n]);
        for j in 1..m {
            nodes.push(a.lerp(b, j as f64 / m as f64));
            on_edge.push([i, i]);
        }
    }
    let n_boundary = nodes.len();

    let c = poly.centroid();
    let dy = 0.5 * 3f64.sqrt() * h;
    let reach = poly.scale();
    let nj = (reach / dy).ceil() as i64 + 1;
    let ni = (reach / h).ceil() as i64 + 2;
    for j in -nj..=nj {
        for i in -ni..=ni {
            let p = c + Point::new(h * (i as f64 + 0.5 * j as f64), dy * j as f64);
            if poly.boundary_distance(p) >= 0.45 * h {
                nodes.push(p);
            }
        }
    }
    if nodes.len() > cap {
        return Err(Error::NodeBudget {
            nodes: nodes.len(),
            cap,
        });
    }

    let sites: Vec<Site> = nodes
        .iter()
        .enumerate()
        .map(|(id, p)| Site {
            pos: Point2::new(p.x, p.y),
            id,
        })
        .collect();
    let dt = DelaunayTriangulation::<Site>::bulk_load(sites)
        .map_err(|e| Error::InvalidMesh(format!("delaunay: {e:?}")))?;

    let shares_edge = |a: usize, b: usize, c: usize| {
        if a >= n_boundary || b >= n_boundary || c >= n_boundary {
            return false;
        }
        on_edge[a]
            .iter()
            .any(|e| on_edge[b].contains(e) && on_edge[c].contains(e))
    };
    let mut triangles = Vec::new();
    for face in dt.inner_faces() {
        let [a, b, c] = face.vertices().map(|v| v.data().id);
        // three nodes on one straight side: a rounding sliver, not a triangle
        if shares_edge(a, b, c) {
            continue;
        }
        if tri_area(nodes[a], nodes[b], nodes[c]) > 0.0 {
            triangles.push([a, b, c]);
        } else {
            triangles.push([a, c, b]);
        }
    }
    triangles.sort_unstable();
    let mesh = Mesh::from_parts(nodes, triangles, h)?;
    mesh.validate(poly)?;
    Ok(mesh)
}

impl Mesh {
    /// Builds a mesh from nodes and triangles, deriving the boundary edges.
    pub fn from_parts(nodes: Vec<Point>, triangles: Vec<[usize; 3]>, h: f64) -> Result<Self> {
        let mut count: HashMap<(usize, usize), (usize, [usize; 2])> = HashMap::new();
        for t in &triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                let e = count.entry((a.min(b), a.max(b))).or_insert((0, [a, b]));
                e.0 += 1;
            }
        }
        let mut boundary_edges: Vec<[usize; 2]> = count
            .into_values()
            .filter(|(c, _)| *c == 1)
            .map(|(_, e)| e)
            .collect();
        boundary_edges.sort_unstable();
        Ok(Self {
            nodes,
            triangles,
            boundary_edges,
            h,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn area(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| tri_area(self.nodes[t[0]], self.nodes[t[1]], self.nodes[t[2]]))
            .sum()
    }

    pub fn boundary_length(&self) -> f64 {
        self.boundary_edges
            .iter()
            .map(|e| self.nodes[e[0]].dist(self.nodes[e[1]]))
            .sum()
    }

    pub fn max_edge(&self) -> f64 {
        self.triangles
            .iter()
            .flat_map(|t| (0..3).map(move |k| (t[k], t[(k + 1) % 3])))
            .map(|(a, b)| self.nodes[a].dist(self.nodes[b]))
            .fold(0.0, f64::max)
    }

    /// Checks orientation, the closed boundary chain, boundary nodes on
    /// `poly`, and that every node belongs to a triangle.
    pub fn validate(&self, poly: &ConvexPolygon) -> Result<()> {
        let min_area = 1e-16 * poly.area();
        for t in &self.triangles {
            let a = tri_area(self.nodes[t[0]], self.nodes[t[1]], self.nodes[t[2]]);
            if !(a > min_area) {
                return Err(Error::InvalidMesh(format!("triangle {t:?} has area {a:e}")));
            }
        }
        let mut used = vec![false; self.nodes.len()];
        for t in &self.triangles {
            for &i in t {
                used[i] = true;
            }
        }
        if let Some(i) = used.iter().position(|u| !u) {
            return Err(Error::InvalidMesh(format!("node {i} is in no triangle")));
        }

        let mut next: HashMap<usize, usize> = HashMap::new();
        for e in &self.boundary_edges {
            if next.insert(e[0], e[1]).is_some() {
                return Err(Error::InvalidMesh(format!(
                    "node {} starts two boundary edges",
                    e[0]
                )));
            }
        }
        let start = self
            .boundary_edges
            .first()
            .map(|e| e[0])
            .ok_or_else(|| Error::InvalidMesh("no boundary edges".into()))?;
        let mut at = start;
        for step in 1..=self.boundary_edges.len() {
            at = *next
                .get(&at)
                .ok_or_else(|| Error::InvalidMesh(format!("boundary chain breaks at {at}")))?;
            if at == start && step != self.boundary_edges.len() {
                return Err(Error::InvalidMesh("boundary has several loops".into()));
            }
        }
        if at != start {
            return Err(Error::InvalidMesh("boundary chain does not close".into()));
        }

        let tol = 1e-12 * poly.scale();
        for e in &self.boundary_edges {
            let p = self.nodes[e[0]];
            if poly.boundary_distance(p).abs() > tol {
                return Err(Error::InvalidMesh(format!(
                    "boundary node {p:?} is off the polygon"
                )));
            }
        }
        Ok(())
    }

    /// Uniform refinement: every triangle splits into four through its edge
    /// midpoints. Midpoints of boundary edges stay on straight sides.
    pub fn refine(&self) -> Mesh {
        let mut nodes = self.nodes.clone();
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, nodes: &mut Vec<Point>| -> usize {
            *mid.entry((a.min(b), a.max(b))).or_insert_with(|| {
                nodes.push(nodes[a].lerp(nodes[b], 0.5));
                nodes.len() - 1
            })
        };
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        for &[a, b, c] in &self.triangles {
            let ab = midpoint(a, b, &mut nodes);
            let bc = midpoint(b, c, &mut nodes);
            let ca = midpoint(c, a, &mut nodes);
            triangles.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        let mut boundary_edges = Vec::with_capacity(2 * self.boundary_edges.len());
        for &[a, b] in &self.boundary_edges {
            let m = midpoint(a, b, &mut nodes);
            boundary_edges.extend([[a, m], [m, b]]);
        }
        boundary_edges.sort_unstable();
        Mesh {
            nodes,
            triangles,
            boundary_edges,
            h: 0.5 * self.h,
        }
    }

    /// ASCII export: a header `nodes triangles boundary_edges`, then one line
    /// per node (`x y`), triangle (`i j k`) and boundary edge (`i j`).
    pub fn export_ascii<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(
            out,
            "{} {} {}",
            self.nodes.len(),
            self.triangles.len(),
            self.boundary_edges.len()
        )?;
        for p in &self.nodes {
            writeln!(out, "{:.17e} {:.17e}", p.x, p.y)?;
        }
        for t in &self.triangles {
            writeln!(out, "{} {} {}", t[0], t[1], t[2])?;
        }
        for e in &self.boundary_edges {
            writeln!(out, "{} {}", e[0], e[1])?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{inner_parallel_body, RoundedBody};

    #[test]
    fn coarse_square() {
        let sq = ConvexPolygon::unit_square();
        let m = triangulate(&sq, 0.5).unwrap();
        assert!(m.triangles.len() >= 8);
        assert!((m.area() - 1.0).abs() < 1e-14);
        assert!((m.boundary_length() - 4.0).abs() < 1e-14);
        assert!(m.max_edge() <= 0.75);
    }

    #[test]
    fn square_refinement_keeps_boundary() {
        let sq = ConvexPolygon::unit_square();
        let m = triangulate(&sq, 0.1).unwrap();
        let f = m.refine();
        f.validate(&sq).unwrap();
        assert_eq!(f.triangles.len(), 4 * m.triangles.len());
        assert!((m.boundary_length() - 4.0).abs() < 1e-13);
        assert!((f.boundary_length() - 4.0).abs() < 1e-13);
        assert!((f.area() - 1.0).abs() < 1e-13);
        assert!(m.max_edge() <= 1.5 * 0.1);
        assert!(f.max_edge() <= 1.5 * 0.05);
    }

    #[test]
    fn rounded_hexagon_boundary() {
        let hex = ConvexPolygon::regular(6, 1.0).unwrap();
        let body =
            RoundedBody::new(inner_parallel_body(&hex, 0.25).unwrap().unwrap(), 0.25).unwrap();
        let poly = body.polygonize(48).unwrap();
        let m = triangulate(&poly, 0.02).unwrap();
        assert!((m.boundary_length() - body.perimeter()).abs() < 1e-3);
        assert!(m.max_edge() <= 1.5 * 0.02);
    }

    #[test]
    fn skinny_and_random_shapes() {
        for poly in [
            ConvexPolygon::rectangle(4.0, 1.0).unwrap(),
            ConvexPolygon::rectangle(1.0, 0.01).unwrap(),
            ConvexPolygon::regular(3, 1.0).unwrap(),
            ConvexPolygon::regular(64, 2.0).unwrap(),
        ] {
            let h = 0.2 * poly.inradius().min(0.5);
            let m = triangulate(&poly, h).unwrap();
            assert!((m.area() - poly.area()).abs() < 1e-12 * poly.area().max(1.0));
            assert!((m.boundary_length() - poly.perimeter()).abs() < 1e-12 * poly.perimeter());
            m.refine().validate(&poly).unwrap();
        }
    }

    #[test]
    fn budget_and_range() {
        let sq = ConvexPolygon::unit_square();
        assert!(matches!(
            triangulate_with_cap(&sq, 0.01, 1000),
            Err(Error::NodeBudget { .. })
        ));
        assert!(triangulate(&sq, 2.0).is_err());
        assert!(triangulate(&sq, 0.0).is_err());
    }

    #[test]
    fn broken_meshes_rejected() {
        let sq = ConvexPolygon::unit_square();
        let m = triangulate(&sq, 0.5).unwrap();
        let mut bad = m.clone();
        bad.triangles.pop();
        let bad = Mesh::from_parts(bad.nodes, bad.triangles, 0.5).unwrap();
        assert!(bad.validate(&sq).is_err());
        let mut flipped = m.clone();
        flipped.triangles[0].swap(1, 2);
        assert!(flipped.validate(&sq).is_err());
    }

    #[test]
    fn ascii_export() {
        let sq = ConvexPolygon::unit_square();
        let m = triangulate(&sq, 0.5).unwrap();
        let mut buf = Vec::new();
        m.export_ascii(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        let header: Vec<usize> = lines
            .next()
            .unwrap()
            .split_whitespace()
            .map(|s| s.parse().unwrap())
            .collect();
        assert_eq!(
            header,
            vec![m.nodes.len(), m.triangles.len(), m.boundary_edges.len()]
        );
        assert_eq!(lines.count(), header.iter().sum::<usize>());
    }
}
