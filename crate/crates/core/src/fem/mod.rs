//! P1 finite elements on convex polygons.
//!
//! Every solve runs on a Delaunay mesh of size `h` and on its uniform
//! refinement, and reports both values together with the Richardson
//! extrapolation `v(h/2) + (v(h/2) - v(h)) / 3` for second-order convergence.
//!
//! The discrete forms are the stiffness matrix `K`, the consistent mass
//! matrix `M`, the boundary mass `B` (exact on each edge) and the loads
//! `F = M 1` and `b_i = int_{dOmega} phi_i`.

pub mod mesh;
pub mod sparse;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::ConvexPolygon;
pub use mesh::{estimate_nodes, triangulate, triangulate_with_cap, Mesh, NODE_CAP};
use sparse::{combine, dot, norm, rcm_ordering, CsrMatrix, EnvelopeCholesky, Pattern};

/// Relative residual at which eigen-iterations stop.
pub const EIG_TOL: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 5000;
const BLOCK: usize = 4;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SolveReport {
    /// Value on the finer mesh.
    pub value: f64,
    /// Coarse mesh size; the finer mesh has `mesh_h / 2`.
    pub mesh_h: f64,
    /// Values at `h` and `h/2`.
    pub refinement_pair: [f64; 2],
    pub extrapolated: f64,
    /// Largest relative algebraic residual of the two solves.
    pub residual: f64,
}

impl SolveReport {
    fn from_pair(h: f64, coarse: Solution, fine: Solution) -> Self {
        Self {
            value: fine.value,
            mesh_h: h,
            refinement_pair: [coarse.value, fine.value],
            extrapolated: fine.value + (fine.value - coarse.value) / 3.0,
            residual: coarse.residual.max(fine.residual),
        }
    }
}

/// Result of a single-mesh solve.
#[derive(Debug, Clone)]
pub struct Solution {
    pub value: f64,
    /// Eigenvector or state, one entry per mesh node.
    pub vector: Vec<f64>,
    /// `|A x - lambda M x| / (|A|_inf |x|)` or `|A u - f| / (|A|_inf |u|)`.
    pub residual: f64,
    pub iterations: usize,
}

/// Assembled operators on one mesh.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub mesh: Mesh,
    pattern: Pattern,
    perm: Vec<usize>,
    stiffness: Vec<f64>,
    mass: Vec<f64>,
    boundary_mass: Vec<f64>,
    load: Vec<f64>,
    boundary_load: Vec<f64>,
    area: f64,
    perimeter: f64,
}

impl Discretization {
    pub fn new(mesh: Mesh) -> Self {
        let n = mesh.num_nodes();
        let pairs = mesh
            .triangles
            .iter()
            .flat_map(|t| [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])]);
        let pattern = Pattern::from_adjacency(n, pairs);
        let perm = rcm_ordering(&pattern);
        let nnz = pattern.nnz();
        let (mut stiffness, mut mass, mut boundary_mass) =
            (vec![0.0; nnz], vec![0.0; nnz], vec![0.0; nnz]);
        let mut load = vec![0.0; n];
        let mut boundary_load = vec![0.0; n];

        for t in &mesh.triangles {
            let p = t.map(|i| mesh.nodes[i]);
            let area = 0.5 * (p[1] - p[0]).cross(p[2] - p[0]);
            // gradients of the hat functions times 2 * area
            let g: [(f64, f64); 3] = std::array::from_fn(|i| {
                let (a, b) = (p[(i + 1) % 3], p[(i + 2) % 3]);
                (a.y - b.y, b.x - a.x)
            });
            for i in 0..3 {
                load[t[i]] += area / 3.0;
                for j in 0..3 {
                    let k = pattern.index(t[i], t[j]);
                    stiffness[k] += (g[i].0 * g[j].0 + g[i].1 * g[j].1) / (4.0 * area);
                    mass[k] += area / 12.0 * if i == j { 2.0 } else { 1.0 };
                }
            }
        }
        let mut perimeter = 0.0;
        for &[a, b] in &mesh.boundary_edges {
            let len = mesh.nodes[a].dist(mesh.nodes[b]);
            perimeter += len;
            boundary_load[a] += 0.5 * len;
            boundary_load[b] += 0.5 * len;
            for (i, j, w) in [(a, a, 2.0), (b, b, 2.0), (a, b, 1.0), (b, a, 1.0)] {
                boundary_mass[pattern.index(i, j)] += w * len / 6.0;
            }
        }
        let area = load.iter().sum();
        Self {
            mesh,
            pattern,
            perm,
            stiffness,
            mass,
            boundary_mass,
            load,
            boundary_load,
            area,
            perimeter,
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.pattern.n()
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    /// `K + beta B`.
    pub fn robin_operator(&self, beta: f64) -> CsrMatrix<'_> {
        combine(
            &self.pattern,
            &[(1.0, &self.stiffness), (beta, &self.boundary_mass)],
        )
    }

    pub fn mass_matrix(&self) -> CsrMatrix<'_> {
        combine(&self.pattern, &[(1.0, &self.mass)])
    }

    /// `int |grad u|^2 + beta int_{dOmega} u^2` over `int u^2`.
    pub fn rayleigh_quotient(&self, beta: f64, u: &[f64]) -> f64 {
        let a = self.robin_operator(beta);
        dot(u, &a.mul(u)) / dot(u, &self.mass_matrix().mul(u))
    }

    /// Principal eigenpair of `K + beta B` against `M`.
    pub fn robin_eig(&self, beta: f64) -> Result<Solution> {
        if !beta.is_finite() {
            return Err(Error::InvalidArgument(format!("beta = {beta}")));
        }
        // lambda_1 <= beta P / A, so this shift is below the target
        let shift = (beta * self.perimeter / self.area).min(0.0) - 1.0;
        self.lowest_eigenpair(beta, shift, false)
    }

    /// First nonzero Neumann eigenpair: the constant mode is deflated.
    pub fn neumann_mu2(&self) -> Result<Solution> {
        self.lowest_eigenpair(0.0, -1.0, true)
    }

    fn factor_shifted(&self, beta: f64, mut shift: f64) -> Result<(EnvelopeCholesky, f64)> {
        let mut last = None;
        for _ in 0..30 {
            let shifted = combine(
                &self.pattern,
                &[
                    (1.0, &self.stiffness),
                    (beta, &self.boundary_mass),
                    (-shift, &self.mass),
                ],
            );
            match EnvelopeCholesky::factor(&shifted, &self.perm) {
                Ok(f) => return Ok((f, shift)),
                Err(e @ Error::NotPositiveDefinite { .. }) => {
                    log::debug!("shift {shift} indefinite, lowering");
                    last = Some(e);
                    shift = 2.0 * shift - 1.0;
                }
                Err(e) => return Err(e),
            }
        }
        Err(last.expect("at least one attempt"))
    }

    /// Block inverse iteration with Rayleigh-Ritz on `BLOCK` vectors.
    fn lowest_eigenpair(&self, beta: f64, shift: f64, deflate: bool) -> Result<Solution> {
        let n = self.num_nodes();
        let a = self.robin_operator(beta);
        let m = self.mass_matrix();
        let a_norm = a.norm_inf();
        let (factor, _) = self.factor_shifted(beta, shift)?;
        let constant = vec![1.0 / self.area.sqrt(); n];
        let project = |y: &mut Vec<f64>| {
            if deflate {
                let c = dot(&constant, &m.mul(y));
                for (yi, ci) in y.iter_mut().zip(&constant) {
                    *yi -= c * ci;
                }
            }
        };

        let nodes = &self.mesh.nodes;
        let (cx, cy) = (
            nodes.iter().map(|p| p.x).sum::<f64>() / n as f64,
            nodes.iter().map(|p| p.y).sum::<f64>() / n as f64,
        );
        let s = nodes
            .iter()
            .map(|p| (p.x - cx).abs().max((p.y - cy).abs()))
            .fold(0.0, f64::max);
        let starts: [fn(f64, f64) -> f64; BLOCK] = if deflate {
            [|x, _| x, |_, y| y, |x, y| x * y, |x, y| x * x - 0.5 * y * y]
        } else {
            [|_, _| 1.0, |x, _| x, |_, y| y, |x, y| x * y + 0.3 * x * x]
        };
        let mut block: Vec<Vec<f64>> = starts
            .iter()
            .map(|f| {
                nodes
                    .iter()
                    .map(|p| f((p.x - cx) / s, (p.y - cy) / s))
                    .collect()
            })
            .collect();

        let mut residual = f64::INFINITY;
        for it in 1..=MAX_ITERATIONS {
            let mut ys: Vec<Vec<f64>> = block
                .iter()
                .map(|x| {
                    let mut y = factor.solve(&m.mul(x));
                    project(&mut y);
                    y
                })
                .collect();
            m_orthonormalize(&mut ys, &m);
            let ay: Vec<Vec<f64>> = ys.iter().map(|y| a.mul(y)).collect();
            let k = ys.len();
            let h = DMatrix::from_fn(k, k, |i, j| {
                0.5 * (dot(&ys[i], &ay[j]) + dot(&ys[j], &ay[i]))
            });
            let eig = SymmetricEigen::new(h);
            let mut idx: Vec<usize> = (0..k).collect();
            idx.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
            block = idx
                .iter()
                .map(|&c| {
                    let mut x = vec![0.0; n];
                    for (r, y) in ys.iter().enumerate() {
                        let w = eig.eigenvectors[(r, c)];
                        for (xi, yi) in x.iter_mut().zip(y) {
                            *xi += w * yi;
                        }
                    }
                    x
                })
                .collect();
            let x = &block[0];
            let lambda = eig.eigenvalues[idx[0]];
            let ax = a.mul(x);
            let mx = m.mul(x);
            let r: Vec<f64> = ax.iter().zip(&mx).map(|(u, v)| u - lambda * v).collect();
            residual = norm(&r) / (a_norm * norm(x));
            if residual <= EIG_TOL {
                let mut vector = block.swap_remove(0);
                // fix the sign so the largest entry is positive
                let big = vector
                    .iter()
                    .copied()
                    .fold(0.0, |b: f64, v| if v.abs() > b.abs() { v } else { b });
                if big < 0.0 {
                    vector.iter_mut().for_each(|v| *v = -*v);
                }
                return Ok(Solution {
                    value: lambda,
                    vector,
                    residual,
                    iterations: it,
                });
            }
        }
        Err(Error::NoConvergence {
            iterations: MAX_ITERATIONS,
            residual,
        })
    }

    /// Solves `(K + beta B) u = F`; the value is `tau = F . u`.
    pub fn robin_torsion(&self, beta: f64) -> Result<Solution> {
        if !(beta > 0.0) {
            return Err(Error::Unsupported(format!(
                "torsion needs beta > 0 (got {beta}); negative beta is a free-boundary problem"
            )));
        }
        let a = self.robin_operator(beta);
        let factor = EnvelopeCholesky::factor(&a, &self.perm)?;
        let u = factor.solve(&self.load);
        let residual = linear_residual(&a, &u, &self.load);
        Ok(Solution {
            value: dot(&self.load, &u),
            vector: u,
            residual,
            iterations: 1,
        })
    }

    /// `Sigma_infty = int u` for `-Lap u = 1`, `du/dn = -|A| / |P|`, `int_{dOmega} u = 0`.
    ///
    /// The singular Neumann system is solved with node 0 pinned, then shifted
    /// by the constant that zeroes the boundary mean.
    pub fn sigma_infty(&self) -> Result<Solution> {
        let n = self.num_nodes();
        let ratio = self.area / self.perimeter;
        let rhs: Vec<f64> = self
            .load
            .iter()
            .zip(&self.boundary_load)
            .map(|(f, b)| f - ratio * b)
            .collect();
        let imbalance: f64 = rhs.iter().sum();
        if imbalance.abs() > 1e-10 * self.area {
            return Err(Error::InvalidMesh(format!(
                "incompatible Neumann data: {imbalance:e}"
            )));
        }
        let k = combine(&self.pattern, &[(1.0, &self.stiffness)]);
        let mut pinned = k.clone();
        for i in 0..n {
            for idx in self.pattern.row(i) {
                let j = self.pattern.cols[idx];
                if i == 0 || j == 0 {
                    pinned.vals[idx] = if i == j { 1.0 } else { 0.0 };
                }
            }
        }
        let mut b = rhs.clone();
        b[0] = 0.0;
        let factor = EnvelopeCholesky::factor(&pinned, &self.perm)?;
        let mut u = factor.solve(&b);
        let c = -dot(&self.boundary_load, &u) / self.perimeter;
        u.iter_mut().for_each(|v| *v += c);
        let residual = linear_residual(&k, &u, &rhs);
        Ok(Solution {
            value: dot(&self.load, &u),
            vector: u,
            residual,
            iterations: 1,
        })
    }
}

fn linear_residual(a: &CsrMatrix, u: &[f64], f: &[f64]) -> f64 {
    let r: Vec<f64> = a.mul(u).iter().zip(f).map(|(x, y)| x - y).collect();
    norm(&r) / (a.norm_inf() * norm(u))
}

/// Modified Gram-Schmidt in the `M` inner product, applied twice.
fn m_orthonormalize(vs: &mut [Vec<f64>], m: &CsrMatrix) {
    for _ in 0..2 {
        for i in 0..vs.len() {
            let (done, rest) = vs.split_at_mut(i);
            let v = &mut rest[0];
            for u in done.iter() {
                let c = dot(u, &m.mul(v));
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= c * ui;
                }
            }
            let len = dot(v, &m.mul(v)).sqrt();
            v.iter_mut().for_each(|x| *x /= len);
        }
    }
}

/// Nested pair of discretizations (`h` and `h/2`) of one polygon.
#[derive(Debug, Clone)]
pub struct FemSolver {
    pub h: f64,
    pub coarse: Discretization,
    pub fine: Discretization,
}

impl FemSolver {
    pub fn new(poly: &ConvexPolygon, h: f64) -> Result<Self> {
        let mesh = triangulate(poly, h)?;
        let fine_mesh = mesh.refine();
        if fine_mesh.num_nodes() > NODE_CAP {
            return Err(Error::NodeBudget {
                nodes: fine_mesh.num_nodes(),
                cap: NODE_CAP,
            });
        }
        Ok(Self {
            h,
            coarse: Discretization::new(mesh),
            fine: Discretization::new(fine_mesh),
        })
    }

    fn pair(&self, f: impl Fn(&Discretization) -> Result<Solution>) -> Result<SolveReport> {
        Ok(SolveReport::from_pair(
            self.h,
            f(&self.coarse)?,
            f(&self.fine)?,
        ))
    }

    pub fn robin_eig(&self, beta: f64) -> Result<SolveReport> {
        self.pair(|d| d.robin_eig(beta))
    }

    /// Reports `tau`, not its reciprocal.
    pub fn robin_torsion(&self, beta: f64) -> Result<SolveReport> {
        self.pair(|d| d.robin_torsion(beta))
    }

    pub fn neumann_mu2(&self) -> Result<SolveReport> {
        self.pair(|d| d.neumann_mu2())
    }

    pub fn sigma_infty(&self) -> Result<SolveReport> {
        self.pair(|d| d.sigma_infty())
    }
}

pub fn robin_eig(poly: &ConvexPolygon, beta: f64, h: f64) -> Result<SolveReport> {
    FemSolver::new(poly, h)?.robin_eig(beta)
}

pub fn robin_torsion(poly: &ConvexPolygon, beta: f64, h: f64) -> Result<SolveReport> {
    if !(beta > 0.0) {
        return Err(Error::Unsupported(format!(
            "torsion needs beta > 0, got {beta}"
        )));
    }
    FemSolver::new(poly, h)?.robin_torsion(beta)
}

pub fn neumann_mu2(poly: &ConvexPolygon, h: f64) -> Result<SolveReport> {
    FemSolver::new(poly, h)?.neumann_mu2()
}

pub fn sigma_infty(poly: &ConvexPolygon, h: f64) -> Result<SolveReport> {
    FemSolver::new(poly, h)?.sigma_infty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::robin1d::eig_interval;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn assembly_identities() {
        let sq = ConvexPolygon::unit_square();
        let d = Discretization::new(triangulate(&sq, 0.2).unwrap());
        assert!((d.area() - 1.0).abs() < 1e-14);
        assert!((d.perimeter() - 4.0).abs() < 1e-14);
        let ones = vec![1.0; d.num_nodes()];
        // K 1 = 0, 1' M 1 = |A|, 1' B 1 = |P|
        let k1 = d.robin_operator(0.0).mul(&ones);
        assert!(norm(&k1) < 1e-12);
        assert!((dot(&ones, &d.mass_matrix().mul(&ones)) - 1.0).abs() < 1e-13);
        let b1 = d.robin_operator(1.0).mul(&ones);
        assert!((ones.iter().zip(&b1).map(|(a, b)| a * b).sum::<f64>() - 4.0).abs() < 1e-13);
    }

    #[test]
    fn square_robin_eigenvalue() {
        let sq = ConvexPolygon::unit_square();
        let fem = FemSolver::new(&sq, 0.05).unwrap();
        for beta in [-1.0, 1.0] {
            let exact = 2.0 * eig_interval(beta);
            let r = fem.robin_eig(beta).unwrap();
            assert!(
                rel(r.extrapolated, exact) < 1e-3,
                "beta {beta}: {r:?} vs {exact}"
            );
            assert!(r.residual <= EIG_TOL);
        }
    }

    #[test]
    fn rayleigh_identity_and_positivity() {
        let sq = ConvexPolygon::unit_square();
        let d = Discretization::new(triangulate(&sq, 0.1).unwrap());
        let s = d.robin_eig(2.0).unwrap();
        assert!(rel(d.rayleigh_quotient(2.0, &s.vector), s.value) < 1e-10);
        assert!(s.vector.iter().all(|&v| v > 0.0));
    }

    #[test]
    fn neumann_square() {
        let sq = ConvexPolygon::unit_square();
        let r = neumann_mu2(&sq, 0.05).unwrap();
        assert!(rel(r.extrapolated, PI * PI) < 1e-3, "{r:?}");
    }

    #[test]
    fn torsion_and_sigma_on_disk() {
        let disk = ConvexPolygon::regular(128, PI).unwrap();
        let fem = FemSolver::new(&disk, 0.08).unwrap();
        let s = fem.sigma_infty().unwrap();
        assert!(rel(s.extrapolated, PI / 8.0) < 5e-3, "{s:?}");
        // radial torsion of the unit disk: u = (1 - r^2)/4 + 1/(2 beta)
        let beta = 2.0;
        let t = fem.robin_torsion(beta).unwrap();
        let exact = PI / 8.0 + PI / (2.0 * beta);
        assert!(rel(t.extrapolated, exact) < 5e-3, "{t:?}");
        assert!(fem.robin_torsion(0.0).is_err());
        assert!(robin_torsion(&disk, -1.0, 0.1).is_err());
    }
}
