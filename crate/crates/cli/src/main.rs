//! `trapfermi`: tables of moments, expansion coefficients, densities,
//! transforms and edge profiles for a filled shell of trapped fermions, and
//! the cross-check suite.

mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use trapfermi::density::{density_via_generating_function, ShellDensity};
use trapfermi::edge::{edge_convergence, edge_ode_residual, edge_profile};
use trapfermi::fourier::{rho_hat, rho_hat_ode_residual};
use trapfermi::moments::{moment_closed_form, moment_recurrence_table};
use trapfermi::mu::build_mu_triangle;
use trapfermi::verify::{run_suite, Mode, Tolerances};
use trapfermi::ShellSpec;

use table::{rational_cells, Cell, Meta, Table, RATIONAL_COLUMNS};

/// Directory used for output files when `--output` is not given.
const OUT_DIR_ENV: &str = "TRAPFERMI_OUT_DIR";

#[derive(Parser, Debug)]
#[command(
    name = "trapfermi",
    version,
    about = "Exact and asymptotic density of a filled shell of trapped fermions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact radial moments m_{2k}, k = 0..=k_max.
    Moments {
        #[command(flatten)]
        shell: ShellArgs,
        #[arg(long, default_value_t = 10)]
        k_max: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Rows k = 0..=k_max of the large-M̃ coefficient triangle μ_{k,l}.
    Mu {
        #[arg(long, default_value_t = 1)]
        d: u32,
        #[arg(long, default_value_t = 10)]
        k_max: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Density ρ(r) on a uniform grid, with the generating-function cross-check.
    Density {
        #[command(flatten)]
        shell: ShellArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Fourier transform ρ̂(k) on a uniform grid of |k| = r, with its ODE residual.
    Transform {
        #[command(flatten)]
        shell: ShellArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Edge profile F_d(s) on a uniform s grid, its ODE residual and the gap
    /// to the rescaled density at shell M.
    Edge {
        #[arg(long, default_value_t = 1)]
        d: u32,
        #[arg(long = "M", visible_alias = "m", default_value_t = 16)]
        m: u32,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Runs every cross-check suite and prints a pass/fail table.
    Verify {
        /// Dimensions to check; repeat for several.
        #[arg(long = "d", default_values_t = [1u32, 2, 3])]
        d: Vec<u32>,
        #[arg(long, conflicts_with = "full")]
        quick: bool,
        /// Acceptance-size parameter boxes (default).
        #[arg(long)]
        full: bool,
        /// Override a numeric contract, e.g. `--tol density_ode=1e-7`.
        #[arg(long = "tol", value_name = "NAME=VALUE")]
        tol: Vec<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Debug)]
struct ShellArgs {
    #[arg(long, default_value_t = 1)]
    d: u32,
    /// Highest filled shell.
    #[arg(long = "M", visible_alias = "m", default_value_t = 0)]
    m: u32,
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Grid start (`--s-min` for `edge`).
    #[arg(
        long,
        visible_alias = "s-min",
        default_value_t = 0.0,
        allow_negative_numbers = true
    )]
    r_min: f64,
    /// Grid end; defaults to a value suited to the command.
    #[arg(long, visible_alias = "s-max", allow_negative_numbers = true)]
    r_max: Option<f64>,
    #[arg(long, default_value_t = 101)]
    n_samples: usize,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output file; defaults to stdout, or a file in $TRAPFERMI_OUT_DIR when set.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<trapfermi::Error> for Failure {
    fn from(e: trapfermi::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn shell_spec(d: u32, m: u32) -> Result<ShellSpec, Failure> {
    Ok(ShellSpec::new(d, m)?)
}

fn meta_for(spec: Option<ShellSpec>, d: serde_json::Value, command: &'static str) -> Meta {
    Meta {
        d,
        m: spec.map(|s| s.shell()),
        n0: spec.map(|s| s.particle_number().to_string()),
        two_m_tilde: spec.map(|s| s.two_m_tilde()),
        command,
        version: env!("CARGO_PKG_VERSION"),
    }
}

fn grid(g: &GridArgs, default_max: f64) -> Result<Vec<f64>, Failure> {
    let hi = g.r_max.unwrap_or(default_max);
    if !(g.r_min.is_finite() && hi.is_finite()) || g.r_min > hi {
        return usage(format!("invalid grid [{}, {hi}]", g.r_min));
    }
    match g.n_samples {
        0 => usage("--n-samples must be positive"),
        1 => Ok(vec![g.r_min]),
        n => Ok((0..n)
            .map(|i| g.r_min + (hi - g.r_min) * i as f64 / (n - 1) as f64)
            .collect()),
    }
}

fn rel(r: trapfermi::density::Residual) -> Cell {
    Cell::Float(r.relative())
}

fn moments_table(spec: ShellSpec, k_max: u32) -> Table {
    let mut t = Table::new([&["k"][..], &RATIONAL_COLUMNS].concat());
    let rec = moment_recurrence_table(spec, k_max);
    for k in 0..=k_max {
        let q = moment_closed_form(spec, k);
        debug_assert_eq!(q, rec.values[k as usize]);
        let mut row = vec![Cell::Int(k as i64)];
        row.extend(rational_cells(&q));
        t.push(row);
    }
    t
}

fn mu_table(d: u32, k_max: u32) -> Table {
    let mut t = Table::new([&["k", "l"][..], &RATIONAL_COLUMNS].concat());
    let tri = build_mu_triangle(d, k_max);
    for k in 0..=k_max {
        for (l, q) in tri.row(k).iter().enumerate() {
            let mut row = vec![Cell::Int(k as i64), Cell::Int(l as i64)];
            row.extend(rational_cells(q));
            t.push(row);
        }
    }
    t
}

fn density_table(spec: ShellSpec, rs: &[f64]) -> Result<Table, Failure> {
    if rs.iter().any(|&r| r < 0.0) {
        return usage("radii must be non-negative");
    }
    let mut t = Table::new(vec!["r", "rho", "rho_generating", "rel_diff"]);
    let dens = ShellDensity::new(spec);
    for &r in rs {
        let a = dens.value(r);
        let b = density_via_generating_function(spec, r);
        let diff = if a == 0.0 {
            (a - b).abs()
        } else {
            ((a - b) / a).abs()
        };
        t.push(vec![
            Cell::Float(r),
            Cell::Float(a),
            Cell::Float(b),
            Cell::Float(diff),
        ]);
    }
    Ok(t)
}

fn transform_table(spec: ShellSpec, ks: &[f64]) -> Result<Table, Failure> {
    let mut t = Table::new(vec!["k", "rho_hat", "ode_rel_residual"]);
    for &k in ks {
        let v = rho_hat(spec, k)?.value;
        let res = if k > 0.0 {
            rel(rho_hat_ode_residual(spec, k)?)
        } else {
            Cell::Null
        };
        t.push(vec![Cell::Float(k), Cell::Float(v), res]);
    }
    Ok(t)
}

fn edge_table(spec: ShellSpec, ss: &[f64]) -> Result<Table, Failure> {
    let mut t = Table::new(vec!["s", "F", "ode_rel_residual", "finite_m_value", "gap"]);
    for &s in ss {
        let f = edge_profile(spec.d(), s)?;
        let res = edge_ode_residual(spec.d(), s)?;
        let conv = edge_convergence(spec, s)?;
        t.push(vec![
            Cell::Float(s),
            Cell::Float(f),
            rel(res),
            Cell::Float(conv.finite_value),
            Cell::Float(conv.gap),
        ]);
    }
    Ok(t)
}

fn parse_tolerances(items: &[String]) -> Result<Tolerances, Failure> {
    let mut tol = Tolerances::default();
    for item in items {
        let Some((name, value)) = item.split_once('=') else {
            return usage(format!("tolerance override `{item}` is not NAME=VALUE"));
        };
        let value: f64 = match value.parse() {
            Ok(v) if v >= 0.0 => v,
            _ => {
                return usage(format!(
                    "tolerance `{name}` needs a non-negative number, got `{value}`"
                ))
            }
        };
        let slot = match name {
            "density_oracle_rel" => &mut tol.density_oracle_rel,
            "normalization_rel" => &mut tol.normalization_rel,
            "density_ode" => &mut tol.density_ode,
            "fourier_ode" => &mut tol.fourier_ode,
            "integro" => &mut tol.integro,
            "tail_transform" => &mut tol.tail_transform,
            "scaled_ode" => &mut tol.scaled_ode,
            "operator" => &mut tol.operator,
            "meixner" => &mut tol.meixner,
            "edge_ode" => &mut tol.edge_ode,
            "real_k_rel" => &mut tol.real_k_rel,
            _ => return usage(format!("unknown tolerance `{name}`")),
        };
        *slot = value;
    }
    Ok(tol)
}

/// Emits a table to the requested destination. `text_default` selects the
/// fixed-width layout when no format was asked for.
fn emit(
    table: &Table,
    meta: &Meta,
    out: &OutputArgs,
    file_stem: &str,
    text_default: bool,
) -> Result<(), Failure> {
    let format = out.format.unwrap_or(Format::Csv);
    let path = match (&out.output, std::env::var_os(OUT_DIR_ENV)) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(dir)) => {
            Some(Path::new(&dir).join(format!("{file_stem}.{}", format.extension())))
        }
        (None, None) => None,
    };
    let mut sink: Box<dyn Write> = match &path {
        Some(p) => {
            Box::new(BufWriter::new(File::create(p).map_err(|e| {
                Failure::Runtime(format!("{}: {e}", p.display()))
            })?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match (out.format, text_default && path.is_none()) {
        (None, true) => table.write_text(&mut sink)?,
        (Some(Format::Json), _) => table
            .write_json(meta, &mut sink)
            .map_err(|e| Failure::Runtime(e.to_string()))?,
        _ => table
            .write_csv(&mut sink)
            .map_err(|e| Failure::Runtime(e.to_string()))?,
    }
    sink.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Moments { shell, k_max, out } => {
            let spec = shell_spec(shell.d, shell.m)?;
            let meta = meta_for(Some(spec), spec.d().into(), "moments");
            emit(
                &moments_table(spec, k_max),
                &meta,
                &out,
                &format!("moments_d{}_M{}", shell.d, shell.m),
                false,
            )?;
        }
        Command::Mu { d, k_max, out } => {
            shell_spec(d, 0)?;
            let meta = meta_for(None, d.into(), "mu");
            emit(&mu_table(d, k_max), &meta, &out, &format!("mu_d{d}"), false)?;
        }
        Command::Density {
            shell,
            grid: g,
            out,
        } => {
            let spec = shell_spec(shell.d, shell.m)?;
            let rs = grid(&g, spec.turning_radius() + 2.0)?;
            let meta = meta_for(Some(spec), spec.d().into(), "density");
            emit(
                &density_table(spec, &rs)?,
                &meta,
                &out,
                &format!("density_d{}_M{}", shell.d, shell.m),
                false,
            )?;
        }
        Command::Transform {
            shell,
            grid: g,
            out,
        } => {
            let spec = shell_spec(shell.d, shell.m)?;
            let ks = grid(&g, 8.0)?;
            if ks.iter().any(|&k| k < 0.0) {
                return usage("frequencies must be non-negative");
            }
            let meta = meta_for(Some(spec), spec.d().into(), "transform");
            emit(
                &transform_table(spec, &ks)?,
                &meta,
                &out,
                &format!("transform_d{}_M{}", shell.d, shell.m),
                false,
            )?;
        }
        Command::Edge { d, m, grid: g, out } => {
            let spec = shell_spec(d, m)?;
            let ss = grid(&g, 3.0)?;
            let meta = meta_for(Some(spec), d.into(), "edge");
            emit(
                &edge_table(spec, &ss)?,
                &meta,
                &out,
                &format!("edge_d{d}_M{m}"),
                false,
            )?;
        }
        Command::Verify {
            d,
            quick,
            full: _,
            tol,
            out,
        } => {
            if d.contains(&0) {
                return usage("dimensions must be at least 1");
            }
            let tol = parse_tolerances(&tol)?;
            let mode = if quick { Mode::Quick } else { Mode::Full };
            let outcomes = run_suite(&d, mode, &tol);
            let mut t = Table::new(vec!["status", "check", "detail"]);
            for o in &outcomes {
                t.push(vec![
                    Cell::Text(if o.passed { "PASS" } else { "FAIL" }.into()),
                    Cell::Text(o.name.into()),
                    Cell::Text(o.detail.clone()),
                ]);
            }
            let meta = meta_for(None, d.clone().into(), "verify");
            emit(&t, &meta, &out, "verify", true)?;
            if outcomes.iter().any(|o| !o.passed) {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
