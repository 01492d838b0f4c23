//! `p`-Cheeger constants of convex polygons for `p` in `{1, 2}`.
//!
//! For a convex polygon the optimal set is an inner rounding: the inner
//! parallel body at distance `r` dilated by a disk of radius `r`. While the
//! rounding keeps every side of the polygon, the Steiner formula gives
//!
//! ```text
//! Per = |dP| - 2 r (Lambda - pi),    Area = |P| - r^2 (Lambda - pi)
//! ```
//!
//! with `Lambda = sum cot(theta_i / 2)`, and the optimal radius solves a
//! quadratic. [`cheeger_oracle`] minimizes over `r` by brute force instead
//! and is valid for every convex polygon.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{inner_parallel_body, ConvexPolygon, RoundedBody};
use crate::optimize::golden_section;

/// Default grid for [`cheeger_oracle`].
pub const ORACLE_GRID: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Oracle,
}

/// A `p`-Cheeger constant together with its optimal rounded set.
#[derive(Debug, Clone, Serialize)]
pub struct CheegerResult {
    pub exponent: f64,
    /// Radius of the free arcs of the optimal set.
    pub radius: f64,
    /// `h_p = Per(set) / Area(set)^p`.
    pub constant: f64,
    /// `None` only when a closed-form radius exceeds the inradius.
    pub set: Option<RoundedBody>,
    pub method: Method,
    /// Whether the closed form applies: the rounding at `radius` keeps every
    /// side of the polygon.
    pub valid_closed_form: bool,
}

fn check_exponent(p: u32) -> Result<()> {
    if p == 1 || p == 2 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "closed form only for p in {{1, 2}}, got {p}"
        )))
    }
}

/// Largest `r` for which the inner parallel body keeps every edge: edge `i`
/// shrinks to zero at `l_i / (cot(theta_i/2) + cot(theta_{i+1}/2))`.
pub fn overlap_critical_radius(p: &ConvexPolygon) -> f64 {
    let cots: Vec<f64> = p
        .interior_angles()
        .iter()
        .map(|t| 1.0 / (0.5 * t).tan())
        .collect();
    let n = p.len();
    p.edge_lengths()
        .iter()
        .enumerate()
        .map(|(i, l)| l / (cots[i] + cots[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min)
}

/// `f(r) = (|dP| - 2 r (Lambda - pi)) / (|P| - r^2 (Lambda - pi))^p`, the
/// quotient of the rounding that keeps every side.
pub fn cheeger_profile(poly: &ConvexPolygon, r: f64, p: u32) -> Result<f64> {
    check_exponent(p)?;
    let limit = overlap_critical_radius(poly);
    if !(r >= 0.0 && r < limit) {
        return Err(Error::RadiusOutOfRange { radius: r, limit });
    }
    let c = poly.lambda_sum() - PI;
    let per = poly.perimeter() - 2.0 * r * c;
    let area = poly.area() - r * r * c;
    Ok(per / area.powi(p as i32))
}

fn rounded_set(poly: &ConvexPolygon, r: f64) -> Result<Option<RoundedBody>> {
    Ok(match inner_parallel_body(poly, r)? {
        Some(core) => Some(RoundedBody::new(core, r)?),
        None => None,
    })
}

/// Closed-form radius and constant.
///
/// `p = 1`: `r` is the smaller root of `(Lambda - pi) r^2 - |dP| r + |P| = 0`
/// and `h = 1/r`. `p = 2`: `r_2 = |P| / (|dP| + sqrt(|dP|^2 - 3 |P| (Lambda - pi)))`
/// and `h_2 = f(r_2)`. The constant always follows the formula; it is the
/// true Cheeger constant only when `valid_closed_form` holds.
pub fn cheeger_closed_form(poly: &ConvexPolygon, p: u32) -> Result<CheegerResult> {
    check_exponent(p)?;
    let area = poly.area();
    let per = poly.perimeter();
    let c = poly.lambda_sum() - PI;
    debug_assert!(c > 0.0);
    let (radius, constant) = if p == 1 {
        let disc = per * per - 4.0 * c * area;
        if disc < 0.0 {
            return Err(Error::NegativeDiscriminant(disc));
        }
        // smaller root, written without cancellation
        let r = 2.0 * area / (per + disc.sqrt());
        (r, 1.0 / r)
    } else {
        let disc = per * per - 3.0 * area * c;
        if disc < 0.0 {
            return Err(Error::NegativeDiscriminant(disc));
        }
        let r = area / (per + disc.sqrt());
        let h = (per - 2.0 * r * c) / (area - r * r * c).powi(2);
        (r, h)
    };
    let valid = radius <= overlap_critical_radius(poly) * (1.0 + 1e-12);
    Ok(CheegerResult {
        exponent: p as f64,
        radius,
        constant,
        set: rounded_set(poly, radius)?,
        method: Method::ClosedForm,
        valid_closed_form: valid,
    })
}

/// `Per(K_r) / Area(K_r)^p` for the rounding `K_r` of the inner parallel body.
pub fn rounded_quotient(poly: &ConvexPolygon, r: f64, p: f64) -> f64 {
    match inner_parallel_body(poly, r) {
        Ok(Some(core)) => {
            let body = RoundedBody { core, radius: r };
            let (per, area) = body.measures();
            per / area.powf(p)
        }
        _ => f64::INFINITY,
    }
}

/// Brute-force `p`-Cheeger constant for integer `p`; see [`cheeger_oracle_general`].
pub fn cheeger_oracle(poly: &ConvexPolygon, p: u32, grid: usize) -> Result<CheegerResult> {
    cheeger_oracle_general(poly, p as f64, grid)
}

/// Minimizes `Per(K_r) / Area(K_r)^p` over `r in (0, inradius]` by a grid scan
/// followed by golden-section refinement around the best grid point.
/// Unimodality is not assumed.
pub fn cheeger_oracle_general(poly: &ConvexPolygon, p: f64, grid: usize) -> Result<CheegerResult> {
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!("exponent {p} < 1")));
    }
    if grid < 64 {
        return Err(Error::InvalidArgument(format!("oracle grid {grid} < 64")));
    }
    let rmax = poly.inradius();
    let q = |r: f64| rounded_quotient(poly, r, p);
    let step = rmax / grid as f64;
    let (mut best_i, mut best_q) = (1usize, f64::INFINITY);
    for i in 1..=grid {
        let v = q(step * i as f64);
        if v < best_q {
            best_q = v;
            best_i = i;
        }
    }
    let lo = step * (best_i - 1) as f64;
    let hi = (step * (best_i + 1) as f64).min(rmax);
    let (mut r, mut h) = golden_section(q, lo, hi, 1e-12 * rmax);
    let r_grid = step * best_i as f64;
    if best_q < h {
        r = r_grid;
        h = best_q;
    }
    let valid = r <= overlap_critical_radius(poly) * (1.0 + 1e-12);
    Ok(CheegerResult {
        exponent: p,
        radius: r,
        constant: h,
        set: rounded_set(poly, r)?,
        method: Method::Oracle,
        valid_closed_form: valid,
    })
}

/// `Phi(x, y)`: the value of `|P|^{3/2} h_2(P)` for a polygon whose 2-Cheeger
/// set touches every side, in terms of `x = |dP| / |P|^{1/2}` and `y = Lambda`.
pub fn phi(x: f64, y: f64) -> Result<f64> {
    let tol = 1e-12 * (1.0 + x * x);
    if !(x * x >= 4.0 * y - tol && y >= PI - 1e-12) {
        return Err(Error::OutsideAdmissibleRegion { x, y });
    }
    let s = (x * x - 3.0 * y + 3.0 * PI).sqrt() + x;
    let num = x - 2.0 * (y - PI) / s;
    let den = 1.0 - (y - PI) / (s * s);
    Ok(num / (den * den))
}

/// `zeta(x) = Phi(x, x^2 / 4)`.
pub fn zeta(x: f64) -> f64 {
    let s = (x * x + 12.0 * PI).sqrt();
    (s + 2.0 * x).powi(3) / (16.0 * (x * (s + x) + 4.0 * PI))
}

/// Minimum of `|P|^{3/2} h_2(P)` over convex polygons with at most `n` sides,
/// attained by the regular `n`-gon.
pub fn gamma(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "gamma needs n >= 3, got {n}"
        )));
    }
    let nf = n as f64;
    let t = nf * (PI / nf).tan();
    let a = t.sqrt();
    let b = (t + 3.0 * PI).sqrt();
    Ok((2.0 * a + b).powi(3) / (8.0 * (t + a * b + PI)))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GammaRow {
    pub n: usize,
    pub gamma: f64,
    pub gamma_pow_2_5: f64,
}

pub fn gamma_table(ns: impl IntoIterator<Item = usize>) -> Result<Vec<GammaRow>> {
    ns.into_iter()
        .map(|n| {
            let g = gamma(n)?;
            Ok(GammaRow {
                n,
                gamma: g,
                gamma_pow_2_5: g.powf(0.4),
            })
        })
        .collect()
}

/// `|P|^{3/2} h_2(P) - gamma(n)` with `h_2` from the oracle; nonnegative by
/// the discrete Faber-Krahn inequality.
pub fn fk_deficit(poly: &ConvexPolygon) -> Result<f64> {
    let h2 = cheeger_oracle(poly, 2, ORACLE_GRID)?.constant;
    Ok(poly.area().powf(1.5) * h2 - gamma(poly.len())?)
}

/// Cheeger constants of the unit-area regular hexagon.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HexConstants {
    pub h: f64,
    pub h2: f64,
}

pub fn hex_constants() -> HexConstants {
    let hex = crate::geometry::unit_hexagon();
    HexConstants {
        h: cheeger_closed_form(&hex, 1).expect("hexagon").constant,
        h2: cheeger_closed_form(&hex, 2).expect("hexagon").constant,
    }
}

/// The `p`-Cheeger set of the unit-area regular hexagon centered at the origin.
pub fn hex_cheeger_set(p: u32) -> Result<RoundedBody> {
    let hex = crate::geometry::unit_hexagon();
    cheeger_closed_form(&hex, p)?
        .set
        .ok_or_else(|| Error::DegeneratePolygon("hexagon Cheeger set".into()))
}
