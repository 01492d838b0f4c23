//! Command-line front end.
//!
//! Arguments are parsed and validated into a [`RunConfig`] before any work
//! starts; output is written only once the whole command has succeeded.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 a checked
//! property failed (the output is still written).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{BoundsReport, ShapeReference};
use crate::cheeger::{
    cheeger_closed_form, cheeger_oracle, fk_deficit, gamma_table, CheegerResult, ORACLE_GRID,
};
use crate::error::{Error, Result};
use crate::fem::{estimate_nodes, NODE_CAP};
use crate::geometry::{
    load_polygon_file, parse_polygon_json, random_convex_polygon, ConvexPolygon,
};
use crate::honeycomb::{
    asymptotic_table, write_table_csv, CellShape, HoneycombConfig, PartitionFunctional,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_PROPERTY: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum CellArg {
    /// Cheeger sets matching the functional.
    Cheeger,
    Hexagon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
pub enum CommandKind {
    /// p-Cheeger constant: closed form checked against the oracle.
    Cheeger,
    /// Table of gamma(n) and gamma(n)^(2/5).
    Gamma,
    /// All eigenvalue and torsion bounds against FEM.
    Bounds,
    /// Normalized partition energies of hexagonal clusters.
    Honeycomb,
    /// Faber-Krahn deficits of random convex polygons.
    FkScan,
}

#[derive(Debug, Parser)]
#[command(
    name = "robin-honeycomb",
    version,
    about = "Cheeger constants, Robin spectra and honeycomb asymptotics"
)]
pub struct Args {
    #[command(subcommand)]
    pub command: CommandKind,
    /// Builtin shape: square, regular:N (unit area) or rectangle:A:B.
    #[arg(long, global = true)]
    pub shape: Option<String>,
    /// Polygon file `{"vertices": [[x, y], ...]}`.
    #[arg(long, global = true)]
    pub polygon_file: Option<PathBuf>,
    /// Inline polygon JSON.
    #[arg(long, global = true)]
    pub polygon: Option<String>,
    /// Robin parameter(s), comma separated.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub beta: Vec<f64>,
    /// Coarse mesh size (the solve also uses h/2).
    #[arg(long, global = true)]
    pub mesh_h: Option<f64>,
    #[arg(long, global = true, value_delimiter = ',')]
    pub k_list: Vec<usize>,
    #[arg(long, global = true, default_value_t = 0.05)]
    pub epsilon: f64,
    #[arg(long, global = true, default_value_t = 1)]
    pub p: u32,
    /// Inclusive range `A..B` (or `A:B`): n for gamma, vertex counts for fk-scan.
    #[arg(long, global = true)]
    pub n_range: Option<String>,
    /// Largest vertex count for fk-scan (shorthand for `--n-range 3..N`).
    #[arg(long, global = true, conflicts_with = "n_range")]
    pub n_max: Option<usize>,
    #[arg(long, global = true, default_value_t = 500)]
    pub count: usize,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Worker threads for batch items.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Honeycomb functionals, comma separated (eig, torsion, perimeter_p1, ...).
    #[arg(long, global = true, value_delimiter = ',')]
    pub functional: Vec<String>,
    #[arg(long, global = true, value_enum, default_value_t = CellArg::Cheeger)]
    pub cells: CellArg,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

/// A validated command.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub shape_name: String,
    pub polygon: Option<ConvexPolygon>,
    pub betas: Vec<f64>,
    pub mesh_h: f64,
    pub k_list: Vec<usize>,
    pub epsilon: f64,
    pub p: u32,
    pub n_range: (usize, usize),
    pub count: usize,
    pub seed: u64,
    pub jobs: usize,
    pub functionals: Vec<PartitionFunctional>,
    pub cells: CellArg,
    pub format: Format,
    pub out: Option<PathBuf>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

/// `square`, `regular:N` (unit area) or `rectangle:A:B`.
pub fn parse_shape(text: &str) -> Result<ConvexPolygon> {
    let parts: Vec<&str> = text.split(':').collect();
    let num = |s: &str| -> Result<f64> {
        s.parse()
            .map_err(|_| Error::Parse(format!("bad number '{s}' in shape")))
    };
    match parts.as_slice() {
        ["square"] => Ok(ConvexPolygon::unit_square()),
        ["regular", n] => {
            let n: usize = n
                .parse()
                .map_err(|_| Error::Parse(format!("bad vertex count '{n}'")))?;
            ConvexPolygon::regular(n, 1.0)
        }
        ["rectangle", a, b] => ConvexPolygon::rectangle(num(a)?, num(b)?),
        _ => Err(Error::Parse(format!(
            "unknown shape '{text}' (square, regular:N, rectangle:A:B)"
        ))),
    }
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s
        .split_once("..")
        .or_else(|| s.split_once(':'))
        .ok_or_else(|| Error::Parse(format!("range '{s}' is not A..B")))?;
    let a: usize = a
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad range start '{a}'")))?;
    let b: usize = b
        .trim()
        .trim_start_matches('=')
        .parse()
        .map_err(|_| Error::Parse(format!("bad range end '{b}'")))?;
    if a > b {
        return Err(invalid(format!("empty range {a}..{b}")));
    }
    Ok((a, b))
}

impl RunConfig {
    pub fn from_args(args: Args) -> Result<Self> {
        let sources = [
            args.shape.is_some(),
            args.polygon_file.is_some(),
            args.polygon.is_some(),
        ];
        if sources.iter().filter(|s| **s).count() > 1 {
            return Err(invalid(
                "give at most one of --shape, --polygon-file, --polygon",
            ));
        }
        let (shape_name, polygon) = if let Some(s) = &args.shape {
            (s.clone(), Some(parse_shape(s)?))
        } else if let Some(path) = &args.polygon_file {
            (path.display().to_string(), Some(load_polygon_file(path)?))
        } else if let Some(text) = &args.polygon {
            ("inline".to_string(), Some(parse_polygon_json(text)?))
        } else {
            (String::new(), None)
        };

        let command = args.command;
        let needs_polygon = matches!(command, CommandKind::Cheeger | CommandKind::Bounds);
        let (shape_name, polygon) = match (polygon, command) {
            (None, CommandKind::Honeycomb) => {
                ("square".to_string(), Some(ConvexPolygon::unit_square()))
            }
            (None, _) if needs_polygon => {
                return Err(invalid(
                    "this command needs --shape, --polygon-file or --polygon",
                ))
            }
            (p, _) => (shape_name, p),
        };

        if args.beta.iter().any(|b| !b.is_finite() || *b == 0.0) {
            return Err(invalid("--beta values must be finite and nonzero"));
        }
        let mut betas = args.beta.clone();
        let functionals: Vec<PartitionFunctional> = if args.functional.is_empty() {
            vec![PartitionFunctional::Eig]
        } else {
            args.functional
                .iter()
                .map(|s| PartitionFunctional::parse(s.trim()))
                .collect::<Result<_>>()?
        };
        match command {
            CommandKind::Bounds if betas.is_empty() => return Err(invalid("bounds needs --beta")),
            CommandKind::Honeycomb => {
                let spectral = functionals.iter().any(|f| {
                    !matches!(
                        f,
                        PartitionFunctional::PerimeterP1 | PartitionFunctional::PerimeterP2
                    )
                });
                if spectral && betas.len() != 1 {
                    return Err(invalid(
                        "honeycomb needs exactly one --beta for spectral functionals",
                    ));
                }
                if spectral && betas[0] <= 0.0 {
                    return Err(invalid("honeycomb needs --beta > 0"));
                }
                if betas.is_empty() {
                    betas.push(1.0);
                }
            }
            _ => {}
        }

        if !(args.p == 1 || args.p == 2) {
            return Err(invalid(format!("--p must be 1 or 2, got {}", args.p)));
        }
        if !(args.epsilon >= 0.0 && args.epsilon < 1.0) {
            return Err(invalid(format!(
                "--epsilon must lie in [0, 1), got {}",
                args.epsilon
            )));
        }
        let k_list = if args.k_list.is_empty() {
            vec![16, 64, 256, 1024, 4096]
        } else {
            args.k_list.clone()
        };
        if k_list.contains(&0) || k_list.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("--k-list must be positive and strictly increasing"));
        }

        let default_range = match command {
            CommandKind::FkScan => (3, 10),
            _ => (3, 64),
        };
        let n_range = match (&args.n_range, args.n_max) {
            (Some(s), _) => parse_range(s)?,
            (None, Some(n)) => (3, n),
            (None, None) => default_range,
        };
        if n_range.1 < n_range.0 {
            return Err(invalid("--n-max must be at least 3"));
        }
        if n_range.0 < 3 {
            return Err(invalid("--n-range must start at 3 or more"));
        }
        if command == CommandKind::FkScan && args.count == 0 {
            return Err(invalid("--count must be positive"));
        }

        let mesh_h = match (args.mesh_h, command) {
            (Some(h), _) => h,
            (None, CommandKind::Honeycomb) => HoneycombConfig::default().mesh_h,
            (None, _) => polygon.as_ref().map_or(0.05, |p| 0.04 * p.area().sqrt()),
        };
        if !(mesh_h > 0.0 && mesh_h.is_finite()) {
            return Err(invalid(format!("--mesh-h must be positive, got {mesh_h}")));
        }
        if command == CommandKind::Bounds {
            let poly = polygon.as_ref().expect("checked above");
            let (diam, _) = poly.diameter();
            if mesh_h >= diam {
                return Err(invalid(format!(
                    "--mesh-h {mesh_h} is not below the diameter {diam}"
                )));
            }
            let nodes = 4 * estimate_nodes(poly, mesh_h);
            if nodes > NODE_CAP {
                return Err(Error::NodeBudget {
                    nodes,
                    cap: NODE_CAP,
                });
            }
        }

        let jobs = match args.jobs {
            Some(0) => return Err(invalid("--jobs must be positive")),
            Some(j) => j,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        };

        Ok(Self {
            command,
            shape_name,
            polygon,
            betas,
            mesh_h,
            k_list,
            epsilon: args.epsilon,
            p: args.p,
            n_range,
            count: args.count,
            seed: args.seed,
            jobs,
            functionals,
            cells: args.cells,
            format: args.format,
            out: args.out,
        })
    }
}

/// Rendered output and any property violation found on the way.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub text: String,
    pub violations: Vec<String>,
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

#[derive(Debug, Serialize)]
struct CheegerOutput {
    shape: String,
    closed_form: CheegerResult,
    oracle: CheegerResult,
    relative_difference: f64,
    agree: bool,
}

#[derive(Debug, Serialize)]
struct CheegerRow<'a> {
    shape: &'a str,
    method: &'a str,
    exponent: f64,
    radius: f64,
    constant: f64,
    valid_closed_form: bool,
}

fn cmd_cheeger(cfg: &RunConfig) -> Result<Outcome> {
    let poly = cfg.polygon.as_ref().expect("validated");
    let closed = cheeger_closed_form(poly, cfg.p)?;
    let oracle = cheeger_oracle(poly, cfg.p, ORACLE_GRID)?;
    let rel = (closed.constant - oracle.constant).abs() / oracle.constant;
    let agree = rel <= 1e-8;
    let mut violations = Vec::new();
    if closed.valid_closed_form && !agree {
        violations.push(format!(
            "closed form {} and oracle {} disagree",
            closed.constant, oracle.constant
        ));
    }
    let text = match cfg.format {
        Format::Json => to_json(&CheegerOutput {
            shape: cfg.shape_name.clone(),
            closed_form: closed,
            oracle,
            relative_difference: rel,
            agree,
        })?,
        Format::Csv => {
            let row = |method, r: &CheegerResult| CheegerRow {
                shape: &cfg.shape_name,
                method,
                exponent: r.exponent,
                radius: r.radius,
                constant: r.constant,
                valid_closed_form: r.valid_closed_form,
            };
            to_csv(&[row("closed_form", &closed), row("oracle", &oracle)])?
        }
    };
    Ok(Outcome { text, violations })
}

fn cmd_gamma(cfg: &RunConfig) -> Result<Outcome> {
    let rows = gamma_table(cfg.n_range.0..=cfg.n_range.1)?;
    let mut violations = Vec::new();
    for w in rows.windows(2) {
        if w[1].gamma_pow_2_5 >= w[0].gamma_pow_2_5 {
            violations.push(format!("gamma^(2/5) not decreasing at n = {}", w[1].n));
        }
    }
    let text = match cfg.format {
        Format::Json => to_json(&rows)?,
        Format::Csv => to_csv(&rows)?,
    };
    Ok(Outcome { text, violations })
}

fn cmd_bounds(cfg: &RunConfig) -> Result<Outcome> {
    let poly = cfg.polygon.clone().expect("validated");
    let reference = ShapeReference::new(cfg.shape_name.clone(), poly, cfg.mesh_h)?;
    let reports: Vec<BoundsReport> = cfg
        .betas
        .par_iter()
        .map(|&b| reference.report(b))
        .collect::<Result<_>>()?;
    let violations = reports
        .iter()
        .flat_map(|r| {
            r.violations
                .iter()
                .map(move |v| format!("beta = {}: {v}", r.beta))
        })
        .collect();
    let text = match cfg.format {
        Format::Json => to_json(&reports)?,
        Format::Csv => to_csv(&reports.iter().flat_map(|r| r.rows()).collect::<Vec<_>>())?,
    };
    Ok(Outcome { text, violations })
}

fn cmd_honeycomb(cfg: &RunConfig) -> Result<Outcome> {
    let omega = cfg.polygon.as_ref().expect("validated");
    let beta = cfg.betas[0];
    let mut rows = Vec::new();
    for &f in &cfg.functionals {
        let config = HoneycombConfig {
            epsilon: cfg.epsilon,
            mesh_h: cfg.mesh_h,
            cell: (cfg.cells == CellArg::Hexagon).then_some(CellShape::Hexagon),
            ..HoneycombConfig::default()
        };
        rows.extend(asymptotic_table(omega, beta, &cfg.k_list, f, &config)?);
    }
    let text = match cfg.format {
        Format::Json => to_json(&rows)?,
        Format::Csv => {
            let mut buf = Vec::new();
            write_table_csv(&rows, &mut buf)?;
            String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))?
        }
    };
    Ok(Outcome {
        text,
        violations: Vec::new(),
    })
}

/// Per vertex count statistics of the Faber-Krahn deficit.
#[derive(Debug, Clone, Serialize)]
pub struct DeficitStats {
    /// Vertex count, or `all`.
    pub n: String,
    pub count: usize,
    pub min_deficit: f64,
    pub mean_deficit: f64,
    pub max_deficit: f64,
    /// Deficit of the regular n-gon (absent for `all`).
    pub regular_deficit: Option<f64>,
}

fn stats(n: String, values: &[f64], regular: Option<f64>) -> DeficitStats {
    DeficitStats {
        n,
        count: values.len(),
        min_deficit: values.iter().copied().fold(f64::INFINITY, f64::min),
        mean_deficit: values.iter().sum::<f64>() / values.len() as f64,
        max_deficit: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        regular_deficit: regular,
    }
}

fn cmd_fk_scan(cfg: &RunConfig) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (lo, hi) = cfg.n_range;
    let polys: Vec<ConvexPolygon> = (0..cfg.count)
        .map(|i| random_convex_polygon(&mut rng, lo + i % (hi - lo + 1)))
        .collect::<Result<_>>()?;
    let deficits: Vec<f64> = polys.par_iter().map(fk_deficit).collect::<Result<_>>()?;

    let mut rows = Vec::new();
    for n in 3..=hi {
        let vals: Vec<f64> = polys
            .iter()
            .zip(&deficits)
            .filter(|(p, _)| p.len() == n)
            .map(|(_, d)| *d)
            .collect();
        if !vals.is_empty() {
            let regular = fk_deficit(&ConvexPolygon::regular(n, 1.0)?)?;
            rows.push(stats(n.to_string(), &vals, Some(regular)));
        }
    }
    rows.push(stats("all".into(), &deficits, None));
    let mut violations: Vec<String> = polys
        .iter()
        .zip(&deficits)
        .enumerate()
        .filter(|(_, (_, d))| **d < -1e-10)
        .map(|(i, (p, d))| format!("polygon {i} ({p}) has deficit {d:e}"))
        .collect();
    for r in &rows {
        if let Some(d) = r.regular_deficit {
            if d.abs() > 1e-10 {
                violations.push(format!("regular {}-gon has deficit {d:e}", r.n));
            }
        }
    }
    let text = match cfg.format {
        Format::Json => to_json(&rows)?,
        Format::Csv => to_csv(&rows)?,
    };
    Ok(Outcome { text, violations })
}

/// Runs a validated command on a pool of `cfg.jobs` threads.
pub fn execute(cfg: &RunConfig) -> Result<Outcome> {
    log::info!(
        "{:?} on {} with {} threads",
        cfg.command,
        cfg.shape_name,
        cfg.jobs
    );
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::Io(e.to_string()))?;
    pool.install(|| match cfg.command {
        CommandKind::Cheeger => cmd_cheeger(cfg),
        CommandKind::Gamma => cmd_gamma(cfg),
        CommandKind::Bounds => cmd_bounds(cfg),
        CommandKind::Honeycomb => cmd_honeycomb(cfg),
        CommandKind::FkScan => cmd_fk_scan(cfg),
    })
}

/// Exit code for an error raised while validating (`validating = true`) or
/// while computing.
pub fn exit_code(err: &Error, validating: bool) -> i32 {
    if validating {
        return EXIT_INVALID;
    }
    match err {
        Error::InvalidArgument(_)
        | Error::Parse(_)
        | Error::DegeneratePolygon(_)
        | Error::NotConvex { .. }
        | Error::Clockwise
        | Error::Unsupported(_)
        | Error::NodeBudget { .. } => EXIT_INVALID,
        _ => EXIT_NUMERICAL,
    }
}

/// Parses `argv`, runs the command and writes its output. Returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
        }
    };
    let cfg = match RunConfig::from_args(args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e, true);
        }
    };
    let outcome = match execute(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e, false);
        }
    };
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, &outcome.text),
        None => std::io::stdout().write_all(outcome.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_NUMERICAL;
    }
    for v in &outcome.violations {
        eprintln!("violation: {v}");
    }
    if outcome.violations.is_empty() {
        EXIT_OK
    } else {
        EXIT_PROPERTY
    }
}
