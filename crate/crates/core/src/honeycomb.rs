//! Hexagonal clusters and their partition energies.
//!
//! A `k`-cluster in `Omega` places `k` copies of `t C`, where `C` is a
//! Cheeger set of the unit-area regular hexagon `H` and `t^2 = (1 - eps)
//! |Omega| / k`, one inside each hexagon of a lattice of frames `t H`. By the
//! scaling laws
//!
//! ```text
//! lambda_1(t C, beta) = t^-2 lambda_1(C, t beta)
//! tau^-1(t C, beta)   = t^-4 tau^-1(C, t beta)
//! ```
//!
//! so all cells of one cluster cost a single FEM solve on `C`. Normalized
//! sums approach `beta h(H) / sqrt(1 - eps)` (eigenvalue) and
//! `beta h_2(H) / (1 - eps)^{3/2}` (torsion) as `k` grows.
//!
//! When fewer than `k` frames of area `(1 - eps) |Omega| / k` fit, the frame
//! area is shrunk in steps of `0.5%` until they do; reports carry the
//! effective `eps` that results and compare against the matching target.

use rayon::prelude::*;
use serde::Serialize;

use crate::cheeger::{hex_cheeger_set, hex_constants};
use crate::error::{Error, Result};
use crate::fem::FemSolver;
use crate::geometry::{
    lattice_with_frame_area, unit_hexagon, ConvexPolygon, Core, Point, RoundedBody,
};

const SHRINK: f64 = 0.995;
const MAX_SHRINK_STEPS: usize = 2000;

/// Shape of the reference cell placed in every lattice hexagon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CellShape {
    /// The 1-Cheeger set `C(H)`.
    Cheeger,
    /// The 2-Cheeger set `C_2(H)`.
    Cheeger2,
    /// The hexagon `H` itself.
    Hexagon,
}

impl CellShape {
    /// The reference cell inside the unit-area hexagon centered at the origin.
    pub fn unit_cell(self) -> Result<RoundedBody> {
        match self {
            CellShape::Cheeger => hex_cheeger_set(1),
            CellShape::Cheeger2 => hex_cheeger_set(2),
            CellShape::Hexagon => RoundedBody::new(Core::Polygon(unit_hexagon()), 0.0),
        }
    }
}

/// `k` translated copies of one scaled reference cell.
#[derive(Debug, Clone, Serialize)]
pub struct Cluster {
    pub container: ConvexPolygon,
    pub k: usize,
    /// Requested `eps`.
    pub epsilon: f64,
    /// `1 - k t^2 / |Omega|` after any feasibility shrink.
    pub effective_epsilon: f64,
    pub shape: CellShape,
    /// Dilation `t` applied to the unit reference cell.
    pub scale: f64,
    /// Reference cell `t C`, centered at the origin.
    pub cell: RoundedBody,
    /// Area of each cell.
    pub cell_area: f64,
    /// Translations of the reference cell.
    pub centers: Vec<Point>,
}

impl Cluster {
    pub fn cells(&self) -> Vec<RoundedBody> {
        self.centers
            .iter()
            .map(|&c| self.cell.translate(c))
            .collect()
    }

    /// Area of each lattice hexagon, `t^2`.
    pub fn frame_area(&self) -> f64 {
        self.scale * self.scale
    }

    /// Containment in the container and pairwise disjoint interiors.
    ///
    /// Cells are centrally symmetric, so the interiors of `c_i + K` and
    /// `c_j + K` meet iff `(c_j - c_i) / 2` lies within distance `r` of the
    /// core. The polygonized cells are also checked for containment.
    pub fn verify(&self) -> Result<()> {
        let omega = &self.container;
        let tol = 1e-10 * omega.scale();
        let r = self.cell.radius;
        let core_vs = self.cell.core.vertices();
        let poly = self.cell.polygonize(16)?;
        for (i, &c) in self.centers.iter().enumerate() {
            let inside = core_vs
                .iter()
                .all(|&v| omega.boundary_distance(v + c) >= r - tol)
                && omega.contains_polygon(&poly.translate(c), tol);
            if !inside {
                return Err(Error::InvalidArgument(format!(
                    "cell {i} leaves the container"
                )));
            }
        }
        let reach = 2.0 * core_vs.iter().map(|v| v.norm()).fold(0.0, f64::max) + 2.0 * r;
        let mut order: Vec<usize> = (0..self.centers.len()).collect();
        order.sort_by(|&a, &b| self.centers[a].x.total_cmp(&self.centers[b].x));
        for (ii, &i) in order.iter().enumerate() {
            for &j in &order[ii + 1..] {
                let d = self.centers[j] - self.centers[i];
                if d.x > reach {
                    break;
                }
                if d.y.abs() > reach {
                    continue;
                }
                if self.cell.core.signed_distance(d.scale(0.5)) < r - tol {
                    return Err(Error::InvalidArgument(format!("cells {i} and {j} overlap")));
                }
            }
        }
        Ok(())
    }
}

fn check_k_eps(k: usize, eps: f64) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be >= 1".into()));
    }
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::InvalidArgument(format!(
            "epsilon {eps} not in [0, 1)"
        )));
    }
    Ok(())
}

fn assemble(
    omega: &ConvexPolygon,
    k: usize,
    eps: f64,
    shape: CellShape,
    frame_area: f64,
    centers: Vec<Point>,
) -> Result<Cluster> {
    let scale = frame_area.sqrt();
    let cell = shape.unit_cell()?.dilate(scale);
    let cluster = Cluster {
        container: omega.clone(),
        k,
        epsilon: eps,
        effective_epsilon: 1.0 - k as f64 * frame_area / omega.area(),
        shape,
        scale,
        cell_area: cell.area(),
        cell,
        centers,
    };
    cluster.verify()?;
    Ok(cluster)
}

/// Cluster of `C(H)` copies with frames of area exactly `(1 - eps) |Omega| / k`.
pub fn build_cluster(omega: &ConvexPolygon, k: usize, eps: f64) -> Result<Cluster> {
    build_cluster_with(omega, k, eps, CellShape::Cheeger, false)
}

/// Like [`build_cluster`], optionally shrinking the frames until `k` fit.
pub fn build_cluster_with(
    omega: &ConvexPolygon,
    k: usize,
    eps: f64,
    shape: CellShape,
    adjust: bool,
) -> Result<Cluster> {
    check_k_eps(k, eps)?;
    let mut frame_area = (1.0 - eps) * omega.area() / k as f64;
    let mut first_err = None;
    for _ in 0..MAX_SHRINK_STEPS {
        match lattice_with_frame_area(omega, k, frame_area) {
            Ok(lat) => return assemble(omega, k, eps, shape, frame_area, lat.centers),
            Err(e @ Error::ClusterInfeasible { .. }) => {
                if !adjust {
                    return Err(e);
                }
                first_err.get_or_insert(e);
                frame_area *= SHRINK;
            }
            Err(e) => return Err(e),
        }
    }
    Err(first_err.expect("at least one attempt"))
}

/// Energy tags for [`PartitionReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionFunctional {
    PerimeterP1,
    PerimeterP2,
    Eig,
    Torsion,
    /// Torsion sum under the `|Omega|^{1/2} / k^{3/2}` normalization.
    TorsionPrinted,
    EigMax,
    TorMax,
    /// Torsion maximum under the `|Omega|^{1/2} / k^{1/2}` normalization.
    TorMaxPrinted,
}

impl PartitionFunctional {
    pub fn name(self) -> &'static str {
        match self {
            Self::PerimeterP1 => "perimeter_p1",
            Self::PerimeterP2 => "perimeter_p2",
            Self::Eig => "eig",
            Self::Torsion => "torsion",
            Self::TorsionPrinted => "torsion_printed",
            Self::EigMax => "eig_max",
            Self::TorMax => "tor_max",
            Self::TorMaxPrinted => "tor_max_printed",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "perimeter_p1" => Self::PerimeterP1,
            "perimeter_p2" => Self::PerimeterP2,
            "eig" => Self::Eig,
            "torsion" => Self::Torsion,
            "torsion_printed" => Self::TorsionPrinted,
            "eig_max" => Self::EigMax,
            "tor_max" => Self::TorMax,
            "tor_max_printed" => Self::TorMaxPrinted,
            other => return Err(Error::Parse(format!("unknown functional '{other}'"))),
        })
    }

    /// `(a, b)` in `scaled = |Omega|^a raw / k^b`.
    pub fn exponents(self) -> (f64, f64) {
        match self {
            Self::PerimeterP1 | Self::Eig => (0.5, 1.5),
            Self::PerimeterP2 | Self::Torsion => (1.5, 2.5),
            Self::TorsionPrinted => (0.5, 1.5),
            Self::EigMax | Self::TorMaxPrinted => (0.5, 0.5),
            Self::TorMax => (1.5, 1.5),
        }
    }

    fn uses_beta(self) -> bool {
        !matches!(self, Self::PerimeterP1 | Self::PerimeterP2)
    }

    fn is_torsion(self) -> bool {
        matches!(
            self,
            Self::Torsion | Self::TorsionPrinted | Self::TorMax | Self::TorMaxPrinted
        )
    }

    /// Hexagonal limit for a given `eps`.
    pub fn target(self, beta: f64, eps: f64) -> f64 {
        let hc = hex_constants();
        let b = if self.uses_beta() { beta } else { 1.0 };
        if matches!(self, Self::PerimeterP1 | Self::Eig | Self::EigMax) {
            b * hc.h / (1.0 - eps).sqrt()
        } else {
            b * hc.h2 / (1.0 - eps).powf(1.5)
        }
    }

    /// Cell shape used in the default construction.
    pub fn default_cell(self) -> CellShape {
        if self.is_torsion() {
            CellShape::Cheeger2
        } else {
            CellShape::Cheeger
        }
    }
}

/// One row of a partition table.
#[derive(Debug, Clone, Serialize)]
pub struct PartitionReport {
    pub functional: PartitionFunctional,
    pub k: usize,
    /// Effective `eps` of the cluster.
    pub epsilon: f64,
    pub requested_epsilon: f64,
    pub beta: f64,
    /// Sum (or maximum) over the cells.
    pub raw_sum: f64,
    pub scaled: f64,
    pub exponents: (f64, f64),
    /// Limit at the effective `eps`.
    pub target: f64,
    /// Limit at the requested `eps`.
    pub target_uncorrected: f64,
    /// `|scaled - target| / target`.
    pub deviation: f64,
    /// Sum of `beta Per / Area^p` over the polygonized cells (an upper bound
    /// for `raw_sum` of the spectral sums; absent otherwise).
    pub upper_sum: Option<f64>,
    /// `beta h / sqrt(1 - eps) - beta^2 |Omega|^{1/2} / k^{1/2}` for `eig`.
    pub lower_composite: Option<f64>,
    pub cell: CellShape,
}

/// Knobs for the partition evaluations.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HoneycombConfig {
    pub epsilon: f64,
    /// Mesh size on the unit-scale reference cell.
    pub mesh_h: f64,
    /// Chords per rounded corner of the polygonized reference cell.
    pub arcs: usize,
    /// Cell shape override; `None` picks the Cheeger set that matches the functional.
    pub cell: Option<CellShape>,
}

impl Default for HoneycombConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.05,
            mesh_h: 0.03,
            arcs: 48,
            cell: None,
        }
    }
}

/// FEM discretization of one unit-scale reference cell, shared by every `k`.
pub struct ReferenceCell {
    pub shape: CellShape,
    pub polygon: ConvexPolygon,
    pub fem: FemSolver,
}

impl ReferenceCell {
    pub fn new(shape: CellShape, arcs: usize, mesh_h: f64) -> Result<Self> {
        let polygon = shape.unit_cell()?.polygonize(arcs)?;
        let fem = FemSolver::new(&polygon, mesh_h)?;
        Ok(Self {
            shape,
            polygon,
            fem,
        })
    }

    /// `lambda_1(t C, beta)` through the scaling law.
    pub fn eig(&self, t: f64, beta: f64) -> Result<f64> {
        Ok(self.fem.robin_eig(t * beta)?.extrapolated / (t * t))
    }

    /// `tau^{-1}(t C, beta)` through the scaling law.
    pub fn torsion_inv(&self, t: f64, beta: f64) -> Result<f64> {
        Ok(1.0 / self.fem.robin_torsion(t * beta)?.extrapolated / t.powi(4))
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "beta must be positive, got {beta}"
        )));
    }
    Ok(())
}

fn report(
    functional: PartitionFunctional,
    cluster: &Cluster,
    beta: f64,
    raw_sum: f64,
    upper_sum: Option<f64>,
) -> PartitionReport {
    let (a, b) = functional.exponents();
    let k = cluster.k as f64;
    let omega = cluster.container.area();
    let scaled = omega.powf(a) * raw_sum / k.powf(b);
    let target = functional.target(beta, cluster.effective_epsilon);
    let lower_composite =
        (functional == PartitionFunctional::Eig).then(|| target - beta * beta * (omega / k).sqrt());
    PartitionReport {
        functional,
        k: cluster.k,
        epsilon: cluster.effective_epsilon,
        requested_epsilon: cluster.epsilon,
        beta,
        raw_sum,
        scaled,
        exponents: (a, b),
        target,
        target_uncorrected: functional.target(beta, cluster.epsilon),
        deviation: (scaled - target).abs() / target,
        upper_sum,
        lower_composite,
        cell: cluster.shape,
    }
}

/// `sum_i Per(E_i) / Area(E_i)^p` with exact rounded-body measures.
pub fn partition_sum_perimeter(cluster: &Cluster, p: u32) -> Result<PartitionReport> {
    let functional = match p {
        1 => PartitionFunctional::PerimeterP1,
        2 => PartitionFunctional::PerimeterP2,
        _ => return Err(Error::InvalidArgument(format!("p must be 1 or 2, got {p}"))),
    };
    let raw: f64 = cluster
        .cells()
        .iter()
        .map(|c| {
            let (per, area) = c.measures();
            per / area.powi(p as i32)
        })
        .sum();
    Ok(report(functional, cluster, 1.0, raw, None))
}

fn spectral_report(
    functional: PartitionFunctional,
    cluster: &Cluster,
    reference: &ReferenceCell,
    beta: f64,
) -> Result<PartitionReport> {
    check_beta(beta)?;
    if reference.shape != cluster.shape {
        return Err(Error::InvalidArgument(
            "reference cell does not match the cluster".into(),
        ));
    }
    let t = cluster.scale;
    let k = cluster.k as f64;
    let poly = &reference.polygon;
    let (per, area) = (t * poly.perimeter(), t * t * poly.area());
    let (single, upper_single) = if functional.is_torsion() {
        (reference.torsion_inv(t, beta)?, beta * per / (area * area))
    } else {
        (reference.eig(t, beta)?, beta * per / area)
    };
    let is_max = matches!(
        functional,
        PartitionFunctional::EigMax
            | PartitionFunctional::TorMax
            | PartitionFunctional::TorMaxPrinted
    );
    // congruent cells: every term of the sum (and the maximum) is `single`
    let (raw, upper) = if is_max {
        (single, upper_single)
    } else {
        (k * single, k * upper_single)
    };
    Ok(report(functional, cluster, beta, raw, Some(upper)))
}

/// `sum_i lambda_1(E_i, beta)` over a cluster of `C(H)` copies.
pub fn partition_sum_eig(
    cluster: &Cluster,
    reference: &ReferenceCell,
    beta: f64,
) -> Result<PartitionReport> {
    spectral_report(PartitionFunctional::Eig, cluster, reference, beta)
}

/// `sum_i tau^{-1}(E_i, beta)` over a cluster of `C_2(H)` copies.
pub fn partition_sum_torsion(
    cluster: &Cluster,
    reference: &ReferenceCell,
    beta: f64,
) -> Result<PartitionReport> {
    spectral_report(PartitionFunctional::Torsion, cluster, reference, beta)
}

/// `max_i` of the eigenvalue or inverse torsion over the cells.
pub fn sup_functionals(
    cluster: &Cluster,
    reference: &ReferenceCell,
    beta: f64,
    functional: PartitionFunctional,
) -> Result<PartitionReport> {
    match functional {
        PartitionFunctional::EigMax
        | PartitionFunctional::TorMax
        | PartitionFunctional::TorMaxPrinted => {
            spectral_report(functional, cluster, reference, beta)
        }
        other => Err(Error::InvalidArgument(format!(
            "{} is not a sup functional",
            other.name()
        ))),
    }
}

/// Reports for every `k` in `k_list` (increasing), evaluated in parallel on
/// the current rayon pool and returned in `k_list` order.
pub fn asymptotic_table(
    omega: &ConvexPolygon,
    beta: f64,
    k_list: &[usize],
    functional: PartitionFunctional,
    config: &HoneycombConfig,
) -> Result<Vec<PartitionReport>> {
    if k_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "k_list must be strictly increasing".into(),
        ));
    }
    if functional.uses_beta() {
        check_beta(beta)?;
    }
    let shape = config.cell.unwrap_or(functional.default_cell());
    let reference = if functional.uses_beta() {
        Some(ReferenceCell::new(shape, config.arcs, config.mesh_h)?)
    } else {
        None
    };
    k_list
        .par_iter()
        .map(|&k| {
            let cluster = build_cluster_with(omega, k, config.epsilon, shape, true)?;
            match functional {
                PartitionFunctional::PerimeterP1 => partition_sum_perimeter(&cluster, 1),
                PartitionFunctional::PerimeterP2 => partition_sum_perimeter(&cluster, 2),
                f => spectral_report(
                    f,
                    &cluster,
                    reference.as_ref().expect("reference cell"),
                    beta,
                ),
            }
        })
        .collect()
}

/// CSV with columns `functional,k,epsilon,beta,raw_sum,scaled,target,deviation`.
/// Each functional's block closes with a `k = inf` row holding the target at
/// the requested `eps`.
pub fn write_table_csv<W: std::io::Write>(rows: &[PartitionReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record([
        "functional",
        "k",
        "epsilon",
        "beta",
        "raw_sum",
        "scaled",
        "target",
        "deviation",
    ])
    .map_err(csv_err)?;
    for (i, r) in rows.iter().enumerate() {
        w.write_record([
            r.functional.name().to_string(),
            r.k.to_string(),
            r.epsilon.to_string(),
            r.beta.to_string(),
            r.raw_sum.to_string(),
            r.scaled.to_string(),
            r.target.to_string(),
            r.deviation.to_string(),
        ])
        .map_err(csv_err)?;
        let block_ends = rows.get(i + 1).is_none_or(|n| n.functional != r.functional);
        if block_ends {
            w.write_record([
                r.functional.name().to_string(),
                "inf".to_string(),
                r.requested_epsilon.to_string(),
                r.beta.to_string(),
                String::new(),
                r.target_uncorrected.to_string(),
                r.target_uncorrected.to_string(),
                "0".to_string(),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}
