//! Upper and lower bounds for the Robin eigenvalue `lambda_1(Omega, beta)`
//! and the inverse torsion `tau^{-1}(Omega, beta)`, checked against FEM.
//!
//! Upper bounds come from the constant test function. Lower bounds:
//!
//! | bound | eigenvalue | inverse torsion |
//! |---|---|---|
//! | Neumann data | `1 / (1/mu_2 + A/(beta P))` | `1 / (Sigma_infty + A^2/(beta P))` |
//! | Cheeger | `beta h - beta^2` | `(beta h - beta^2) / A` |
//! | slicing | `lambda_1(I, w beta) / w^2` | `tau^{-1}(I, w beta) / (w^3 |E_xi|)` |
//!
//! In the slicing bounds `w` is the width in the slicing direction and
//! `|E_xi|` the length of the projection onto the orthogonal line.

use std::f64::consts::PI;

use serde::Serialize;

use crate::cheeger::{cheeger_closed_form, cheeger_oracle, ORACLE_GRID};
use crate::error::{Error, Result};
use crate::fem::{FemSolver, SolveReport};
use crate::geometry::{ConvexPolygon, Direction};
use crate::robin1d::{eig_interval, torsion_inv_interval};

/// Relative slack allowed between a bound and the extrapolated FEM value.
pub const FEM_TOL: f64 = 2e-3;

fn require_nonzero(beta: f64) -> Result<()> {
    if beta == 0.0 || !beta.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "beta must be finite and nonzero, got {beta}"
        )));
    }
    Ok(())
}

fn require_positive(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "beta must be positive, got {beta}"
        )));
    }
    Ok(())
}

/// `beta |dP| / |P|`, an upper bound for either sign of `beta`.
pub fn eig_upper(p: &ConvexPolygon, beta: f64) -> Result<f64> {
    require_nonzero(beta)?;
    Ok(beta * p.perimeter() / p.area())
}

pub fn eig_lower_sperb(p: &ConvexPolygon, beta: f64, mu2: f64) -> Result<f64> {
    require_positive(beta)?;
    if !(mu2 > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "mu_2 must be positive, got {mu2}"
        )));
    }
    Ok(1.0 / (1.0 / mu2 + p.area() / (beta * p.perimeter())))
}

/// Cheeger constant: closed form when it applies, otherwise the oracle.
pub fn cheeger_constant(p: &ConvexPolygon) -> Result<f64> {
    let closed = cheeger_closed_form(p, 1)?;
    if closed.valid_closed_form {
        Ok(closed.constant)
    } else {
        Ok(cheeger_oracle(p, 1, ORACLE_GRID)?.constant)
    }
}

/// `beta h - beta^2`; negative for `beta > h`.
pub fn eig_lower_bossel(p: &ConvexPolygon, beta: f64) -> Result<f64> {
    require_positive(beta)?;
    let h = cheeger_constant(p)?;
    Ok(beta * h - beta * beta)
}

/// 360 directions over a half turn, the edge normals and the direction
/// orthogonal to a diameter.
pub fn sample_directions(p: &ConvexPolygon) -> Vec<Direction> {
    let mut dirs: Vec<Direction> = (0..360)
        .map(|i| Direction::from_angle(PI * i as f64 / 360.0))
        .collect();
    for (n, _) in p.edge_lines() {
        if let Ok(d) = Direction::new(n.x, n.y) {
            dirs.push(d);
        }
    }
    dirs.push(p.diameter().1.perp());
    dirs
}

/// A slicing bound with the direction that attains it.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WidthBound {
    pub value: f64,
    pub direction: Direction,
    /// Width along `direction` (the longest chord of the slicing).
    pub width: f64,
    /// Length of the projection onto the orthogonal line.
    pub projection: f64,
}

fn best_over_directions(
    p: &ConvexPolygon,
    f: impl Fn(f64, f64) -> Result<f64>,
) -> Result<WidthBound> {
    let mut best: Option<WidthBound> = None;
    for d in sample_directions(p) {
        let w = p.width(&d);
        let proj = p.width(&d.perp());
        let value = f(w, proj)?;
        if best.is_none_or(|b| value > b.value) {
            best = Some(WidthBound {
                value,
                direction: d,
                width: w,
                projection: proj,
            });
        }
    }
    Ok(best.expect("non-empty direction set"))
}

/// `max_xi lambda_1(I, w beta) / w^2`, attained at the minimal width.
pub fn eig_lower_width(p: &ConvexPolygon, beta: f64) -> Result<WidthBound> {
    require_positive(beta)?;
    best_over_directions(p, |w, _| Ok(eig_interval(w * beta) / (w * w)))
}

/// `beta |dP| / |P|^2`.
pub fn tor_upper(p: &ConvexPolygon, beta: f64) -> Result<f64> {
    require_nonzero(beta)?;
    Ok(beta * p.perimeter() / (p.area() * p.area()))
}

pub fn tor_lower_keady(p: &ConvexPolygon, beta: f64, sigma_infty: f64) -> Result<f64> {
    require_positive(beta)?;
    if !(sigma_infty > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "Sigma_infty must be positive, got {sigma_infty}"
        )));
    }
    let a = p.area();
    Ok(1.0 / (sigma_infty + a * a / (beta * p.perimeter())))
}

/// `max_xi tau^{-1}(I, w beta) / (w^3 |E_xi|)`.
pub fn tor_lower_width(p: &ConvexPolygon, beta: f64) -> Result<WidthBound> {
    require_positive(beta)?;
    best_over_directions(p, |w, proj| {
        Ok(torsion_inv_interval(w * beta)? / (w.powi(3) * proj))
    })
}

/// `(beta h - beta^2) / |P|`.
pub fn tor_lower_cheeger(p: &ConvexPolygon, beta: f64) -> Result<f64> {
    Ok(eig_lower_bossel(p, beta)? / p.area())
}

/// Every bound for one shape and `beta`, with the FEM references.
#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub shape: String,
    pub beta: f64,
    pub eig_upper: f64,
    pub eig_lower_sperb: Option<f64>,
    pub eig_lower_bossel: Option<f64>,
    pub eig_lower_width: Option<f64>,
    pub tor_upper: f64,
    pub tor_lower_keady: Option<f64>,
    pub tor_lower_width: Option<f64>,
    pub tor_lower_cheeger: Option<f64>,
    pub fem_eig: f64,
    /// Absent for `beta < 0`.
    pub fem_torsion_inv: Option<f64>,
    pub mu2: Option<f64>,
    pub sigma_infty: Option<f64>,
    pub sandwich_ok: bool,
    pub violations: Vec<String>,
}

/// One CSV row: `shape,beta,bound_name,value,fem,ok`.
#[derive(Debug, Clone, Serialize)]
pub struct BoundRow {
    pub shape: String,
    pub beta: f64,
    pub bound_name: String,
    pub value: f64,
    /// Absent when the FEM value is undefined (torsion at `beta < 0`).
    pub fem: Option<f64>,
    pub ok: bool,
}

/// `a <= b` up to [`FEM_TOL`] relative slack.
pub fn within(a: f64, b: f64) -> bool {
    a <= b + FEM_TOL * a.abs().max(b.abs())
}

impl BoundsReport {
    fn eig_lowers(&self) -> [(&'static str, Option<f64>); 3] {
        [
            ("eig_lower_sperb", self.eig_lower_sperb),
            ("eig_lower_bossel", self.eig_lower_bossel),
            ("eig_lower_width", self.eig_lower_width),
        ]
    }

    fn tor_lowers(&self) -> [(&'static str, Option<f64>); 3] {
        [
            ("tor_lower_keady", self.tor_lower_keady),
            ("tor_lower_width", self.tor_lower_width),
            ("tor_lower_cheeger", self.tor_lower_cheeger),
        ]
    }

    fn check(&mut self) {
        let mut v = Vec::new();
        for (name, b) in self.eig_lowers() {
            if let Some(b) = b {
                if !within(b, self.fem_eig) {
                    v.push(format!("{name} = {b} exceeds fem_eig = {}", self.fem_eig));
                }
            }
        }
        if !within(self.fem_eig, self.eig_upper) {
            v.push(format!(
                "fem_eig = {} exceeds eig_upper = {}",
                self.fem_eig, self.eig_upper
            ));
        }
        if let Some(t) = self.fem_torsion_inv {
            for (name, b) in self.tor_lowers() {
                if let Some(b) = b {
                    if !within(b, t) {
                        v.push(format!("{name} = {b} exceeds fem_torsion_inv = {t}"));
                    }
                }
            }
            if !within(t, self.tor_upper) {
                v.push(format!(
                    "fem_torsion_inv = {t} exceeds tor_upper = {}",
                    self.tor_upper
                ));
            }
        }
        self.sandwich_ok = v.is_empty();
        self.violations = v;
    }

    pub fn rows(&self) -> Vec<BoundRow> {
        let row = |name: &str, value: f64, fem: f64, ok: bool| BoundRow {
            shape: self.shape.clone(),
            beta: self.beta,
            bound_name: name.to_string(),
            value,
            fem: (!fem.is_nan()).then_some(fem),
            ok,
        };
        let mut rows = vec![row(
            "eig_upper",
            self.eig_upper,
            self.fem_eig,
            within(self.fem_eig, self.eig_upper),
        )];
        for (name, b) in self.eig_lowers() {
            if let Some(b) = b {
                rows.push(row(name, b, self.fem_eig, within(b, self.fem_eig)));
            }
        }
        match self.fem_torsion_inv {
            Some(t) => {
                rows.push(row(
                    "tor_upper",
                    self.tor_upper,
                    t,
                    within(t, self.tor_upper),
                ));
                for (name, b) in self.tor_lowers() {
                    if let Some(b) = b {
                        rows.push(row(name, b, t, within(b, t)));
                    }
                }
            }
            None => rows.push(row("tor_upper", self.tor_upper, f64::NAN, true)),
        }
        rows
    }
}

/// A shape with its FEM discretization and the `beta`-independent data.
pub struct ShapeReference {
    pub name: String,
    pub polygon: ConvexPolygon,
    pub fem: FemSolver,
    pub mu2: SolveReport,
    pub sigma_infty: SolveReport,
}

impl ShapeReference {
    pub fn new(name: impl Into<String>, polygon: ConvexPolygon, mesh_h: f64) -> Result<Self> {
        let fem = FemSolver::new(&polygon, mesh_h)?;
        let mu2 = fem.neumann_mu2()?;
        let sigma_infty = fem.sigma_infty()?;
        Ok(Self {
            name: name.into(),
            polygon,
            fem,
            mu2,
            sigma_infty,
        })
    }

    pub fn report(&self, beta: f64) -> Result<BoundsReport> {
        require_nonzero(beta)?;
        let p = &self.polygon;
        let fem_eig = self.fem.robin_eig(beta)?.extrapolated;
        let positive = beta > 0.0;
        let (mu2, sigma) = (self.mu2.extrapolated, self.sigma_infty.extrapolated);
        let when = |f: &dyn Fn() -> Result<f64>| -> Result<Option<f64>> {
            if positive {
                f().map(Some)
            } else {
                Ok(None)
            }
        };
        let mut report = BoundsReport {
            shape: self.name.clone(),
            beta,
            eig_upper: eig_upper(p, beta)?,
            eig_lower_sperb: when(&|| eig_lower_sperb(p, beta, mu2))?,
            eig_lower_bossel: when(&|| eig_lower_bossel(p, beta))?,
            eig_lower_width: when(&|| Ok(eig_lower_width(p, beta)?.value))?,
            tor_upper: tor_upper(p, beta)?,
            tor_lower_keady: when(&|| tor_lower_keady(p, beta, sigma))?,
            tor_lower_width: when(&|| Ok(tor_lower_width(p, beta)?.value))?,
            tor_lower_cheeger: when(&|| tor_lower_cheeger(p, beta))?,
            fem_eig,
            fem_torsion_inv: when(&|| Ok(1.0 / self.fem.robin_torsion(beta)?.extrapolated))?,
            mu2: positive.then_some(mu2),
            sigma_infty: positive.then_some(sigma),
            sandwich_ok: true,
            violations: Vec::new(),
        };
        report.check();
        Ok(report)
    }
}

pub fn compute_report(
    name: &str,
    p: &ConvexPolygon,
    beta: f64,
    mesh_h: f64,
) -> Result<BoundsReport> {
    ShapeReference::new(name, p.clone(), mesh_h)?.report(beta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Functional {
    Eig,
    Torsion,
}

/// One row of the small-`beta` asymptotic table.
#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticRow {
    pub beta: f64,
    pub value: f64,
    /// `value / beta`.
    pub ratio: f64,
    /// `|P|/|A|` for the eigenvalue, `|P|/|A|^2` for the torsion.
    pub target: f64,
    pub deviation: f64,
    /// `fem`, or `upper_bound` for torsion at `beta < 0`.
    pub source: &'static str,
}

/// `value / beta` against its small-`beta` limit.
pub fn asymptotic_check(
    p: &ConvexPolygon,
    functional: Functional,
    betas: &[f64],
    mesh_h: f64,
) -> Result<Vec<AsymptoticRow>> {
    let fem = FemSolver::new(p, mesh_h)?;
    let target = match functional {
        Functional::Eig => p.perimeter() / p.area(),
        Functional::Torsion => p.perimeter() / (p.area() * p.area()),
    };
    betas
        .iter()
        .map(|&beta| {
            require_nonzero(beta)?;
            let (value, source) = match functional {
                Functional::Eig => (fem.robin_eig(beta)?.extrapolated, "fem"),
                Functional::Torsion if beta > 0.0 => {
                    (1.0 / fem.robin_torsion(beta)?.extrapolated, "fem")
                }
                Functional::Torsion => (tor_upper(p, beta)?, "upper_bound"),
            };
            let ratio = value / beta;
            Ok(AsymptoticRow {
                beta,
                value,
                ratio,
                target,
                deviation: (ratio - target).abs(),
                source,
            })
        })
        .collect()
}
