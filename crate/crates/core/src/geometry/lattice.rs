use serde::Serialize;

use super::{ConvexPolygon, Point};
use crate::error::{Error, Result};

/// Congruent flat-top regular hexagons on a lattice inside a container.
#[derive(Debug, Clone, Serialize)]
pub struct HexLattice {
    /// Side length of every hexagon.
    pub side: f64,
    /// Area of every hexagon.
    pub frame_area: f64,
    /// Centers of the selected hexagons, nearest to the container centroid first.
    pub centers: Vec<Point>,
    /// Number of lattice hexagons that fit (at least `centers.len()`).
    pub capacity: usize,
}

impl HexLattice {
    /// The hexagon frame centered at the origin.
    pub fn template(&self) -> ConvexPolygon {
        ConvexPolygon::regular(6, self.frame_area).expect("positive area")
    }

    pub fn frames(&self) -> Vec<ConvexPolygon> {
        let t = self.template();
        self.centers.iter().map(|&c| t.translate(c)).collect()
    }

    /// Interiors pairwise disjoint: for same-orientation hexagons `H`, the
    /// interiors of `c1 + H` and `c2 + H` meet iff `c2 - c1` lies in `int(2H)`.
    pub fn frames_disjoint(&self) -> bool {
        let double = self.template().dilate(2.0);
        let reach = 4.0 * self.side;
        let tol = 1e-9 * self.side;
        let cs = &self.centers;
        for i in 0..cs.len() {
            for j in i + 1..cs.len() {
                let d = cs[j] - cs[i];
                if d.x.abs() < reach && d.y.abs() < reach && double.boundary_distance(d) > tol {
                    return false;
                }
            }
        }
        true
    }
}

fn lattice_centers_at(
    container: &ConvexPolygon,
    frame: &ConvexPolygon,
    side: f64,
    anchor: Point,
) -> Vec<Point> {
    let tol = 1e-12 * container.scale();
    let dx = 1.5 * side;
    let dy = 3f64.sqrt() * side;
    let reach = container.scale();
    let ni = (reach / dx).ceil() as i64 + 1;
    let nj = (reach / dy).ceil() as i64 + 1;
    let mut fits = Vec::new();
    for i in -ni..=ni {
        let shift = if i.rem_euclid(2) == 1 { 0.5 } else { 0.0 };
        for j in -nj..=nj {
            let c = anchor + Point::new(dx * i as f64, dy * (j as f64 + shift));
            if frame
                .vertices()
                .iter()
                .all(|&v| container.contains(v + c, tol))
            {
                fits.push(c);
            }
        }
    }
    fits
}

/// Lattice placement with the most hexagons inside the container. Anchors
/// are tried on an 8 x 8 grid over one lattice period, starting at the
/// centroid; ties keep the earlier anchor.
fn lattice_centers(container: &ConvexPolygon, side: f64) -> Vec<Point> {
    const STEPS: usize = 8;
    let c0 = container.centroid();
    let frame = ConvexPolygon::regular(6, 1.5 * 3f64.sqrt() * side * side).expect("hexagon");
    let dx = 1.5 * side;
    let dy = 3f64.sqrt() * side;
    let mut best: Vec<Point> = Vec::new();
    for s in 0..STEPS {
        for u in 0..STEPS {
            let (fs, fu) = (s as f64 / STEPS as f64, u as f64 / STEPS as f64);
            let anchor = c0 + Point::new(fs * dx, fs * 0.5 * dy + fu * dy);
            let fits = lattice_centers_at(container, &frame, side, anchor);
            if fits.len() > best.len() {
                best = fits;
            }
        }
    }
    best.sort_by(|a, b| {
        let da = a.dist(c0);
        let db = b.dist(c0);
        da.total_cmp(&db)
            .then(a.x.total_cmp(&b.x))
            .then(a.y.total_cmp(&b.y))
    });
    best
}

/// Places `k` hexagons of area `(1 - eps) |container| / k` on a flat-top
/// lattice, keeping the `k` nearest to the container centroid.
///
/// Fails with the number of hexagons that do fit when fewer than `k` fit.
pub fn hex_lattice_cells(container: &ConvexPolygon, k: usize, eps: f64) -> Result<HexLattice> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be >= 1".into()));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon {eps} not in (0, 1)"
        )));
    }
    let frame_area = (1.0 - eps) * container.area() / k as f64;
    lattice_with_frame_area(container, k, frame_area)
}

pub(crate) fn lattice_with_frame_area(
    container: &ConvexPolygon,
    k: usize,
    frame_area: f64,
) -> Result<HexLattice> {
    let side = (2.0 * frame_area / (3.0 * 3f64.sqrt())).sqrt();
    let mut centers = lattice_centers(container, side);
    let capacity = centers.len();
    if capacity < k {
        return Err(Error::ClusterInfeasible {
            requested: k,
            max_feasible: capacity,
        });
    }
    centers.truncate(k);
    Ok(HexLattice {
        side,
        frame_area,
        centers,
        capacity,
    })
}
