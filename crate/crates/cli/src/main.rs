//! `genus1`: stability constants, region scans, moment pencils and tangent
//! certificates for the curves `y^2 + (x^2 - 1)(x^2 + a x + b) = 0`.
//!
//! Exit codes: 0 success (or "inside"), 1 "outside", 2 error, 3 budget
//! exceeded.

mod num;
mod svg;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use log::warn;
use rayon::prelude::*;

use genus1_core::curve::in_parameter_set;
use genus1_core::lasserre::{
    build_pencil, coords_of, hull_row, membership, outer_polygon, support, HullRow, LasserreError, Membership,
    SubspaceSpec,
};
use genus1_core::sos::{
    gamma_max, interval_certificate, region_le3, stability_constant, SosError, DEFAULT_D_MAX,
};
use genus1_core::tangent::{decompose_tangent, render_certificate};
use genus1_core::{CurveError, CurveParams, RealPoint};

use num::fmt12;

#[derive(Parser)]
#[command(name = "genus1", version, about = "SOS certificates and lifted LMIs for genus-one curves")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Stability constant N(a, b) with its witness residual.
    Stability {
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, default_value_t = DEFAULT_D_MAX)]
        dmax: usize,
    },
    /// Scan a grid over (a, b) and compare N <= 3 with the closed form.
    Region {
        #[arg(long, default_value_t = 60)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, default_value_t = -1.9, allow_hyphen_values = true)]
        a_min: f64,
        #[arg(long, default_value_t = 1.9, allow_hyphen_values = true)]
        a_max: f64,
        #[arg(long, default_value_t = -0.9, allow_hyphen_values = true)]
        b_min: f64,
        #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
        b_max: f64,
        /// Points needing a larger degree are written with N = -1.
        #[arg(long, default_value_t = 20)]
        dmax: usize,
    },
    /// Table of gamma_max(N) against the Markov cap 4(N-2)^2.
    GammaTable {
        #[arg(long, default_value_t = 9)]
        nmax: usize,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_D_MAX)]
        dmax: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export the moment pencil.
    Pencil {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        k: usize,
        #[arg(long = "L", default_value = "1,x,y")]
        l: String,
        #[arg(long, value_enum, default_value_t = Format::Sdpa)]
        format: Format,
        #[arg(long)]
        out: PathBuf,
    },
    /// Membership of (x, y) in the relaxation of the convex hull.
    Member {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, allow_hyphen_values = true)]
        y: f64,
    },
    /// Maximum of cx*x + cy*y over the relaxation.
    Support {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, allow_hyphen_values = true)]
        cx: f64,
        #[arg(long, allow_hyphen_values = true)]
        cy: f64,
    },
    /// Support values over evenly spaced directions.
    Hull {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 64)]
        directions: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Explicit certificate for the tangent line at (x0, ±sqrt(-q(x0))).
    TangentCert {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, allow_hyphen_values = true)]
        x0: f64,
        #[arg(long, value_enum, default_value_t = Branch::Upper)]
        branch: Branch,
        #[arg(long, default_value_t = DEFAULT_D_MAX)]
        dmax: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct CurveArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: f64,
    #[arg(long, allow_hyphen_values = true)]
    b: f64,
}

impl CurveArgs {
    fn curve(&self) -> Result<CurveParams, Failure> {
        CurveParams::new(self.a, self.b).map_err(|e| Failure::Error(e.to_string()))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Sdpa,
}

#[derive(Clone, Copy, ValueEnum)]
enum Branch {
    Upper,
    Lower,
}

enum Failure {
    Error(String),
    Budget(String),
}

impl From<SosError> for Failure {
    fn from(e: SosError) -> Self {
        match e {
            SosError::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            e => Failure::Error(e.to_string()),
        }
    }
}

impl From<LasserreError> for Failure {
    fn from(e: LasserreError) -> Self {
        Failure::Error(e.to_string())
    }
}

impl From<CurveError> for Failure {
    fn from(e: CurveError) -> Self {
        Failure::Error(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Error(e.to_string())
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Some(n) = std::env::var("GENUS1_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            warn!("could not configure {n} threads: {e}");
        }
    }
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Error(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cmd: Cmd) -> Result<u8, Failure> {
    match cmd {
        Cmd::Stability { a, b, dmax } => {
            let r = stability_constant(a, b, dmax)?;
            println!("N={} d={} residual={}", r.n, r.d, fmt12(r.residual));
            if r.upper_bound_only {
                eprintln!("note: an indeterminate degree was skipped; N is an upper bound");
            }
            Ok(0)
        }
        Cmd::Region {
            grid,
            out,
            svg,
            a_min,
            a_max,
            b_min,
            b_max,
            dmax,
        } => cmd_region(grid, (a_min, a_max, b_min, b_max), dmax, out, svg),
        Cmd::GammaTable { nmax, tol, dmax, out } => cmd_gamma_table(nmax, tol, dmax, out),
        Cmd::Pencil {
            curve,
            k,
            l,
            format: Format::Sdpa,
            out,
        } => {
            let c = curve.curve()?;
            let spec: SubspaceSpec = l.parse()?;
            let p = build_pencil(&c, &spec, k)?;
            fs::write(&out, p.export_sdpa(None)?)?;
            println!("size={} coords={} lifted={}", p.size(), p.num_coords(), p.num_lifted());
            Ok(0)
        }
        Cmd::Member { curve, k, x, y } => {
            let c = curve.curve()?;
            let spec = SubspaceSpec::plane();
            let p = build_pencil(&c, &spec, k)?;
            match membership(&p, &coords_of(&spec, x, y))? {
                Membership::Inside { margin, .. } => {
                    println!("inside margin={}", fmt12(margin));
                    Ok(0)
                }
                Membership::Outside { .. } => {
                    println!("outside");
                    Ok(1)
                }
                Membership::Indeterminate { margin } => {
                    println!("indeterminate margin={}", fmt12(margin));
                    Ok(0)
                }
            }
        }
        Cmd::Support { curve, k, cx, cy } => {
            let c = curve.curve()?;
            let p = build_pencil(&c, &SubspaceSpec::plane(), k)?;
            let s = support(&p, &[cx, cy])?;
            println!(
                "value={} x={} y={} regime={}",
                fmt12(s.value),
                fmt12(s.coords[0]),
                fmt12(s.coords[1]),
                regime(&c, k)
            );
            Ok(0)
        }
        Cmd::Hull {
            curve,
            k,
            directions,
            out,
            svg,
        } => cmd_hull(curve.curve()?, k, directions, out, svg),
        Cmd::TangentCert {
            curve,
            x0,
            branch,
            dmax,
            out,
        } => {
            let c = curve.curve()?;
            let qx = c.q().eval(x0);
            if qx > 1e-12 {
                return Err(Failure::Error(format!("x0 = {x0} is not on the real curve")));
            }
            let y = (-qx).max(0.0).sqrt();
            let y = match branch {
                Branch::Upper => y,
                Branch::Lower => -y,
            };
            let (_, base) = interval_certificate(&c, dmax)?;
            let cert = decompose_tangent(&c, RealPoint { x: x0, y }, &base)
                .map_err(|e| Failure::Error(e.to_string()))?;
            let text = render_certificate(&cert);
            match out {
                Some(path) => fs::write(path, &text)?,
                None => print!("{text}"),
            }
            Ok(0)
        }
    }
}

/// Whether the relaxation order reaches the stability constant, in which
/// case the relaxation is the convex hull itself.
fn regime(c: &CurveParams, k: usize) -> &'static str {
    match stability_constant(c.a(), c.b(), 2 * k) {
        Ok(r) if r.n <= k => "exact",
        _ => "outer",
    }
}

fn grid_values(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn cmd_region(
    grid: usize,
    window: (f64, f64, f64, f64),
    dmax: usize,
    out: PathBuf,
    svg_path: Option<PathBuf>,
) -> Result<u8, Failure> {
    if grid < 2 {
        return Err(Failure::Error("grid must be at least 2".into()));
    }
    let (a0, a1, b0, b1) = window;
    let avals = grid_values(a0, a1, grid);
    let bvals = grid_values(b0, b1, grid);
    let points: Vec<(f64, f64)> = avals
        .iter()
        .flat_map(|&a| bvals.iter().map(move |&b| (a, b)))
        .filter(|&(a, b)| in_parameter_set(a, b))
        .collect();
    if points.is_empty() {
        return Err(Failure::Error("window does not meet the parameter set".into()));
    }
    let rows: Vec<(f64, f64, i64, bool)> = points
        .par_iter()
        .map(|&(a, b)| {
            let n = match stability_constant(a, b, dmax) {
                Ok(r) => r.n as i64,
                Err(_) => -1,
            };
            (a, b, n, region_le3(a, b).unwrap_or(false))
        })
        .collect();
    let failures = rows.iter().filter(|r| r.2 < 0).count();
    let mut csv = String::from("a,b,N,predicted_le3\n");
    for (a, b, n, p) in &rows {
        csv.push_str(&format!("{},{},{n},{p}\n", fmt12(*a), fmt12(*b)));
    }
    fs::write(&out, csv)?;
    if let Some(path) = svg_path {
        let (da, db) = ((a1 - a0) / (grid - 1) as f64, (b1 - b0) / (grid - 1) as f64);
        let mut canvas = svg::Canvas::new(600.0, 600.0, (a0 - da, a1 + da, b0 - db, b1 + db));
        for (a, b, n, _) in &rows {
            let fill = match n {
                n if *n < 0 => "#999999",
                n if *n <= 3 => "#f2d13a",
                _ => "#d2402f",
            };
            canvas.rect((a - da / 2.0, b - db / 2.0), (a + da / 2.0, b + db / 2.0), fill);
        }
        // closed-form boundary b = -1 + sqrt(a^4/16 + a^2)
        let curve: Vec<(f64, f64)> = grid_values(a0, a1, 400)
            .into_iter()
            .map(|a| (a, -1.0 + (a.powi(4) / 16.0 + a * a).sqrt()))
            .collect();
        canvas.polyline(&curve, "black", false);
        fs::write(path, canvas.finish())?;
    }
    if failures > 0 {
        eprintln!("warning: {failures} grid points exceeded dmax={dmax} (written as N=-1)");
    }
    Ok(0)
}

fn cmd_gamma_table(nmax: usize, tol: f64, dmax: usize, out: Option<PathBuf>) -> Result<u8, Failure> {
    if nmax < 3 {
        return Err(Failure::Error("nmax must be at least 3".into()));
    }
    let rows: Vec<String> = (3..=nmax)
        .into_par_iter()
        .map(|n| {
            let cap = 4 * (n - 2) * (n - 2);
            match gamma_max(n, tol, dmax) {
                Ok(g) => format!("{n},{},{cap}", fmt12(g)),
                Err(e) => {
                    warn!("N={n}: {e}");
                    format!("{n},budget_exceeded,{cap}")
                }
            }
        })
        .collect();
    let mut csv = String::from("N,gamma_max,markov_cap\n");
    for r in rows {
        csv.push_str(&r);
        csv.push('\n');
    }
    match out {
        Some(path) => fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    Ok(0)
}

fn cmd_hull(c: CurveParams, k: usize, n: usize, out: PathBuf, svg_path: Option<PathBuf>) -> Result<u8, Failure> {
    if n < 3 {
        return Err(Failure::Error("need at least 3 directions".into()));
    }
    let p = build_pencil(&c, &SubspaceSpec::plane(), k)?;
    let rows = (0..n)
        .into_par_iter()
        .map(|i| hull_row(&p, i, n))
        .collect::<Result<Vec<HullRow>, _>>()?;
    let mut csv = String::from("dir_x,dir_y,value,opt_x,opt_y\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt12(r.direction.0),
            fmt12(r.direction.1),
            fmt12(r.value),
            fmt12(r.optimizer.0),
            fmt12(r.optimizer.1)
        ));
    }
    fs::write(&out, csv)?;
    eprintln!("regime={}", regime(&c, k));
    if let Some(path) = svg_path {
        let poly = outer_polygon(&rows);
        let ext = poly
            .iter()
            .fold(1.0f64, |m, &(x, y)| m.max(x.abs()).max(y.abs()))
            .min(10.0)
            * 1.1;
        let mut canvas = svg::Canvas::new(600.0, 600.0, (-ext, ext, -ext, ext));
        let pts = genus1_core::curve::sample_real_points(&c, 2000)?;
        // draw each branch of each oval as a polyline sorted by x
        for (lo, hi) in c.real_intervals() {
            for sign in [1.0, -1.0] {
                let branch: Vec<(f64, f64)> = pts
                    .iter()
                    .filter(|q| q.x >= lo && q.x <= hi && (q.y * sign >= 0.0))
                    .map(|q| (q.x, q.y))
                    .collect();
                canvas.polyline(&branch, "#1f5fbf", false);
            }
        }
        canvas.polyline(&poly, "#d2402f", true);
        fs::write(path, canvas.finish())?;
    }
    Ok(0)
}
