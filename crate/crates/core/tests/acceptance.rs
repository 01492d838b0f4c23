//! End-to-end acceptance run: one line per criterion, nonzero exit if any fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use robin_honeycomb::bounds::{asymptotic_check, Functional, ShapeReference};
use robin_honeycomb::cheeger::{
    cheeger_closed_form, cheeger_oracle, fk_deficit, gamma, phi, zeta, ORACLE_GRID,
};
use robin_honeycomb::fem::FemSolver;
use robin_honeycomb::geometry::{random_convex_polygon, ConvexPolygon};
use robin_honeycomb::honeycomb::{
    asymptotic_table, HoneycombConfig, PartitionFunctional, PartitionReport,
};
use robin_honeycomb::robin1d::{
    eig_interval, eig_relation_residual, small_width_eig_limit, small_width_torsion_limit,
};
use robin_honeycomb::Result;

type Check = fn() -> Result<Vec<String>>;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn c1_closed_forms() -> Result<Vec<String>> {
    let mut failures = Vec::new();
    // unit-area hexagon straight from the quadratic for r_2
    let side = (2.0 / (3.0 * 3f64.sqrt())).sqrt();
    let (area, per) = (1.0, 6.0 * side);
    let c = 6.0 / 3f64.sqrt() - PI;
    let r2 = area / (per + (per * per - 3.0 * c * area).sqrt());
    let h2 = (per - 2.0 * r2 * c) / (area - r2 * r2 * c).powi(2);
    let independent = area.powf(1.5) * h2;
    let g6 = gamma(6)?;
    if rel(g6, independent) > 1e-12 {
        failures.push(format!("gamma(6) = {g6}, independent {independent}"));
    }
    let h = cheeger_closed_form(&ConvexPolygon::unit_square(), 1)?.constant;
    if rel(h, 2.0 + PI.sqrt()) > 1e-12 {
        failures.push(format!("h(square) = {h}"));
    }
    Ok(failures)
}

fn c2_oracle_equivalence() -> Result<Vec<String>> {
    let mut polys: Vec<ConvexPolygon> = (3..=12)
        .map(|n| ConvexPolygon::regular(n, 1.0))
        .collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut random = 0;
    for i in 0..10_000 {
        if random == 50 {
            break;
        }
        let p = random_convex_polygon(&mut rng, 3 + i % 8)?;
        if cheeger_closed_form(&p, 1)?.valid_closed_form
            && cheeger_closed_form(&p, 2)?.valid_closed_form
        {
            polys.push(p);
            random += 1;
        }
    }
    let mut failures = Vec::new();
    if random < 50 {
        failures.push(format!(
            "only {random} random polygons with a valid closed form"
        ));
    }
    for poly in &polys {
        for p in [1, 2] {
            let closed = cheeger_closed_form(poly, p)?;
            let oracle = cheeger_oracle(poly, p, ORACLE_GRID)?;
            let e = rel(closed.constant, oracle.constant);
            if !closed.valid_closed_form || e > 1e-8 {
                failures.push(format!("{poly}, p = {p}: relative difference {e:e}"));
            }
        }
    }
    Ok(failures)
}

fn c3_faber_krahn() -> Result<Vec<String>> {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for i in 0..500 {
        let p = random_convex_polygon(&mut rng, 3 + i % 8)?;
        let d = fk_deficit(&p)?;
        if d < -1e-10 {
            failures.push(format!("polygon {i}: deficit {d:e}"));
        }
    }
    for n in 3..=10 {
        let d = fk_deficit(&ConvexPolygon::regular(n, 1.0)?)?;
        if d.abs() > 1e-10 {
            failures.push(format!("regular {n}-gon: deficit {d:e}"));
        }
    }
    Ok(failures)
}

fn c4_monotonicity() -> Result<Vec<String>> {
    let mut failures = Vec::new();
    let g: Vec<f64> = (3..=64)
        .map(|n| gamma(n).map(|v| v.powf(0.4)))
        .collect::<Result<_>>()?;
    for (i, w) in g.windows(3).enumerate() {
        if !(w[1] < w[0] && w[2] < w[1]) || w[0] + w[2] < 2.0 * w[1] {
            failures.push(format!("gamma^(2/5) fails at n = {}", i + 4));
        }
    }
    let dy = 1e-6;
    for i in 0..50 {
        let y = PI + dy + 30.0 * i as f64 / 49.0;
        for j in 0..50 {
            let x = 2.0 * (y + dy).sqrt() * (1.0 + 2.0 * j as f64 / 49.0);
            let d = (phi(x, y + dy)? - phi(x, y - dy)?) / (2.0 * dy);
            if d > 1e-9 {
                failures.push(format!("dPhi/dy({x}, {y}) = {d:e}"));
            }
        }
    }
    let x0 = 2.0 * PI.sqrt();
    let xs: Vec<f64> = (0..200).map(|i| x0 + 20.0 * i as f64 / 199.0).collect();
    for w in xs.windows(2) {
        if zeta(w[1]) < zeta(w[0]) {
            failures.push(format!("zeta decreases at {}", w[1]));
        }
    }
    Ok(failures)
}

fn c5_interval() -> Result<Vec<String>> {
    let mut failures = Vec::new();
    for alpha in [1e-3, -1e-3, 1.0, -1.0, 10.0, -10.0, 1e6] {
        let r = eig_relation_residual(alpha, eig_interval(alpha));
        if r > 1e-12 {
            failures.push(format!("alpha = {alpha}: residual {r:e}"));
        }
    }
    for beta in [1.0, 5.0] {
        let e = small_width_eig_limit(beta, &[1e-3])?[0];
        if rel(e, 2.0 * beta) > 0.01 {
            failures.push(format!("eigenvalue limit at beta = {beta}: {e}"));
        }
        let t = small_width_torsion_limit(beta, &[1e-4])?[0];
        if rel(t, 2.0 * beta) > 0.005 {
            failures.push(format!("torsion limit at beta = {beta}: {t}"));
        }
    }
    Ok(failures)
}

fn c6_fem_square() -> Result<Vec<String>> {
    let mut failures = Vec::new();
    let fem = FemSolver::new(&ConvexPolygon::unit_square(), 0.05)?;
    for beta in [-1.0, 0.5, 1.0, 5.0] {
        let v = fem.robin_eig(beta)?.extrapolated;
        let exact = 2.0 * eig_interval(beta);
        if rel(v, exact) > 0.005 {
            failures.push(format!("beta = {beta}: {v} vs {exact}"));
        }
    }
    let mu2 = fem.neumann_mu2()?.extrapolated;
    if rel(mu2, PI * PI) > 0.005 {
        failures.push(format!("mu_2 = {mu2}"));
    }
    Ok(failures)
}

fn c7_sandwich() -> Result<Vec<String>> {
    let pentagon = random_convex_polygon(&mut ChaCha8Rng::seed_from_u64(7), 5)?;
    let shapes = [
        ("square", ConvexPolygon::unit_square()),
        ("hexagon", ConvexPolygon::regular(6, 1.0)?),
        ("rectangle 4x1", ConvexPolygon::rectangle(4.0, 1.0)?),
        ("random pentagon", pentagon),
    ];
    let mut failures = Vec::new();
    for (name, poly) in shapes {
        let h = 0.04 * poly.area().sqrt();
        let reference = ShapeReference::new(name, poly, h)?;
        for beta in [0.1, 1.0, 10.0] {
            let r = reference.report(beta)?;
            let complete = r.fem_torsion_inv.is_some() && r.rows().len() == 8;
            if !r.sandwich_ok || !complete {
                failures.push(format!("{name}, beta = {beta}: {:?}", r.violations));
            }
        }
    }
    Ok(failures)
}

fn c8_small_beta() -> Result<Vec<String>> {
    let mut failures = Vec::new();
    let square = ConvexPolygon::unit_square();
    for f in [Functional::Eig, Functional::Torsion] {
        let rows = asymptotic_check(&square, f, &[1e-1, 1e-2, 1e-3], 0.05)?;
        if !rows.windows(2).all(|w| w[1].deviation < w[0].deviation) {
            failures.push(format!("{f:?}: deviations not decreasing"));
        }
        let last = rows.last().expect("three rows");
        if last.deviation > 0.01 * last.target {
            failures.push(format!(
                "{f:?}: final ratio {} vs {}",
                last.ratio, last.target
            ));
        }
    }
    Ok(failures)
}

const KS: [usize; 5] = [16, 64, 256, 1024, 4096];

fn table(f: PartitionFunctional) -> Result<Vec<PartitionReport>> {
    asymptotic_table(
        &ConvexPolygon::unit_square(),
        1.0,
        &KS,
        f,
        &HoneycombConfig::default(),
    )
}

fn describe(rows: &[PartitionReport]) -> String {
    rows.iter()
        .map(|r| format!("k={} dev={:.2e}", r.k, r.deviation))
        .collect::<Vec<_>>()
        .join(", ")
}

fn c9_honeycomb() -> Result<Vec<String>> {
    let mut failures = Vec::new();
    for r in table(PartitionFunctional::PerimeterP1)? {
        if r.deviation > 1e-10 {
            failures.push(format!(
                "perimeter sum at k = {}: deviation {:e}",
                r.k, r.deviation
            ));
        }
    }
    let eig = table(PartitionFunctional::Eig)?;
    if !eig.windows(2).all(|w| w[1].deviation < w[0].deviation) || eig[4].deviation > 0.1 {
        failures.push(format!("eig: {}", describe(&eig)));
    }
    let tor = table(PartitionFunctional::Torsion)?;
    if tor[4].deviation > 0.1 {
        failures.push(format!("torsion: {}", describe(&tor)));
    }
    Ok(failures)
}

fn c10_sup() -> Result<Vec<String>> {
    let mut failures = Vec::new();
    let eig = table(PartitionFunctional::EigMax)?;
    if eig[4].deviation > 0.1 {
        failures.push(format!("eig_max: {}", describe(&eig)));
    }
    let tor = table(PartitionFunctional::TorMax)?;
    if tor[4].deviation > 0.1 {
        failures.push(format!("tor_max: {}", describe(&tor)));
    }
    let printed = table(PartitionFunctional::TorMaxPrinted)?;
    println!(
        "       tor_max under the |Omega|^(1/2)/k^(1/2) scaling: {}",
        describe(&printed)
    );
    Ok(failures)
}

fn main() {
    let criteria: [(&str, Check, Duration); 10] = [
        (
            "C1 closed-form reproduction",
            c1_closed_forms,
            Duration::from_secs(1),
        ),
        (
            "C2 oracle equivalence",
            c2_oracle_equivalence,
            Duration::from_secs(30),
        ),
        (
            "C3 discrete Faber-Krahn",
            c3_faber_krahn,
            Duration::from_secs(120),
        ),
        (
            "C4 monotonicity suite",
            c4_monotonicity,
            Duration::from_secs(5),
        ),
        ("C5 interval solver", c5_interval, Duration::from_secs(1)),
        (
            "C6 FEM on the square",
            c6_fem_square,
            Duration::from_secs(120),
        ),
        ("C7 bound sandwich", c7_sandwich, Duration::from_secs(600)),
        (
            "C8 small-beta asymptotics",
            c8_small_beta,
            Duration::from_secs(300),
        ),
        ("C9 honeycomb sums", c9_honeycomb, Duration::from_secs(900)),
        ("C10 sup-type estimators", c10_sup, Duration::from_secs(900)),
    ];
    let mut failed = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let mut problems = match result {
            Ok(p) => p,
            Err(e) => vec![format!("error: {e}")],
        };
        if elapsed > budget {
            problems.push(format!("took {elapsed:.2?}, budget {budget:?}"));
        }
        let status = if problems.is_empty() { "PASS" } else { "FAIL" };
        println!("[{status}] {name} ({elapsed:.2?})");
        for p in problems.iter().take(5) {
            println!("       {p}");
        }
        if !problems.is_empty() {
            failed += 1;
        }
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
