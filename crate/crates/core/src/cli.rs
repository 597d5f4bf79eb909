//! The `coxvar` command line.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 undecided
//! prediction, 4 resource cap exceeded.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::invariants::basis_for_degree;
use crate::oracle::{count_components, export_mesh, memory_budget};
use crate::quadric::{QuarticCoefficients, DEFAULT_TOL};
use crate::sweep::{grid_for, run_sweep, write_csv, RangeSpec, SweepConfig, DEFAULT_MAX_POINTS};
use crate::topology::{predict_with_tol, Kind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "coxvar", version, about = "Components of B_n-invariant quartic varieties")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct CoeffArgs {
    #[arg(long = "A", allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long = "B", allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long = "C", allow_negative_numbers = true)]
    pub c: f64,
    #[arg(long = "D", allow_negative_numbers = true)]
    pub d: f64,
    /// Number of variables.
    #[arg(long = "dim")]
    pub n: usize,
    /// Substitution exponent: the family has degree 2^(m+1).
    #[arg(long, default_value_t = 1)]
    pub m: u32,
}

impl CoeffArgs {
    fn quartic(&self) -> Result<QuarticCoefficients, Error> {
        QuarticCoefficients::with_exponent(self.a, self.b, self.c, self.d, self.n, self.m)
    }
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Box half-width; chosen automatically when absent.
    #[arg(long = "L")]
    pub half_width: Option<f64>,
    /// Cells per axis.
    #[arg(long = "res")]
    pub resolution: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the σ-monomial basis of invariants of a given degree.
    Basis {
        #[arg(long)]
        degree: u32,
        #[arg(long = "dim")]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Predict the component structure from the coefficients.
    Predict {
        #[command(flatten)]
        coeffs: CoeffArgs,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Count components numerically on a grid.
    Oracle {
        #[command(flatten)]
        coeffs: CoeffArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare predictor and oracle over a coefficient lattice (CSV).
    Sweep {
        /// `v`, `lo:hi` or `lo:hi:step`; defaults to the built-in lattice.
        #[arg(long = "A", allow_hyphen_values = true)]
        a: Option<RangeSpec>,
        #[arg(long = "B", allow_hyphen_values = true)]
        b: Option<RangeSpec>,
        #[arg(long = "C", allow_hyphen_values = true)]
        c: Option<RangeSpec>,
        #[arg(long = "D", allow_hyphen_values = true)]
        d: Option<RangeSpec>,
        #[arg(long = "dim")]
        n: usize,
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// Step for ranges given as `lo:hi`.
        #[arg(long, default_value_t = 1.0)]
        step: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_POINTS)]
        max_points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export the zero set as an OBJ mesh (n = 3) or segment CSV (n = 2).
    Mesh {
        #[command(flatten)]
        coeffs: CoeffArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Resource(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ResourceLimit { .. } => Failure::Resource(e.to_string()),
            Error::Io(_) => Failure::Io(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) => (EXIT_USAGE, m),
                Failure::Resource(m) => (EXIT_RESOURCE, m),
                Failure::Io(m) => (EXIT_FAILURE, m),
            };
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn write_json<T: Serialize>(value: &T, out: &mut dyn Write) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct BasisJson {
    degree: u32,
    dim: usize,
    basis: Vec<Vec<u32>>,
    monomials: Vec<String>,
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Basis { degree, n, format } => {
            let basis = basis_for_degree(degree, n)?;
            match format {
                Format::Json => write_json(
                    &BasisJson {
                        degree,
                        dim: n,
                        basis: basis.iter().map(|p| p.parts().to_vec()).collect(),
                        monomials: basis.iter().map(|p| p.monomial()).collect(),
                    },
                    out,
                )?,
                Format::Text => {
                    for p in &basis {
                        writeln!(out, "{}\t{}", p, p.monomial())?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Predict { coeffs, tol, format } => {
            if !(tol.is_finite() && tol > 0.0) {
                return Err(Failure::Usage(format!("tolerance must be positive, got {tol}")));
            }
            let g = predict_with_tol(&coeffs.quartic()?, tol);
            match format {
                Format::Json => write_json(&g, out)?,
                Format::Text => {
                    writeln!(out, "kind: {}", g.kind.as_str())?;
                    writeln!(
                        out,
                        "components: {} ({} compact, {} unbounded)",
                        g.total_components, g.compact_components, g.unbounded_components
                    )?;
                    writeln!(out, "nested: {}", g.nested)?;
                    if let Some(b) = &g.betti {
                        let b: Vec<String> = b.iter().map(u64::to_string).collect();
                        writeln!(out, "betti: [{}]", b.join(", "))?;
                    }
                    writeln!(out, "quadric: {}", g.quadric.kind.as_str())?;
                }
            }
            if g.kind == Kind::Undecided {
                writeln!(
                    err,
                    "prediction undecided ({}); run `coxvar oracle` with the same coefficients for a numerical count",
                    g.reason.as_deref().unwrap_or("unknown reason")
                )?;
                return Ok(EXIT_UNDECIDED);
            }
            Ok(EXIT_OK)
        }
        Command::Oracle {
            coeffs,
            grid,
            format,
            out: path,
        } => {
            let q = coeffs.quartic()?;
            let spec = grid_for(&q, grid.half_width, grid.resolution)?;
            spec.check_budget(memory_budget())?;
            let rep = count_components(&q, &spec)?;
            let mut file;
            let sink: &mut dyn Write = match &path {
                Some(p) => {
                    file = BufWriter::new(File::create(p)?);
                    &mut file
                }
                None => out,
            };
            match format {
                Format::Json => write_json(&rep, sink)?,
                Format::Text => {
                    writeln!(sink, "total: {}", rep.total)?;
                    writeln!(sink, "compact: {}", rep.compact)?;
                    writeln!(sink, "nesting pairs: {:?}", rep.nesting_pairs)?;
                    writeln!(
                        sink,
                        "grid: n={} L={} r={}",
                        rep.grid.n, rep.grid.half_width, rep.grid.resolution
                    )?;
                }
            }
            sink.flush()?;
            Ok(EXIT_OK)
        }
        Command::Sweep {
            a,
            b,
            c,
            d,
            n,
            m,
            step,
            grid,
            tol,
            max_points,
            out: path,
        } => {
            let mut cfg = SweepConfig::default_for(n);
            cfg.m = m;
            cfg.step = step;
            cfg.tol = tol;
            cfg.max_points = max_points;
            cfg.half_width = grid.half_width;
            cfg.resolution = grid.resolution;
            for (slot, v) in [(&mut cfg.a, a), (&mut cfg.b, b), (&mut cfg.c, c), (&mut cfg.d, d)] {
                if let Some(v) = v {
                    *slot = v;
                }
            }
            let outcome = run_sweep(&cfg)?;
            match &path {
                Some(p) => {
                    let mut f = BufWriter::new(File::create(p)?);
                    write_csv(&outcome.rows, &mut f)?;
                    f.flush()?;
                }
                None => write_csv(&outcome.rows, out)?,
            }
            writeln!(err, "{}", outcome.summary)?;
            Ok(EXIT_OK)
        }
        Command::Mesh {
            coeffs,
            grid,
            out: path,
        } => {
            let q = coeffs.quartic()?;
            let spec = grid_for(&q, grid.half_width, grid.resolution)?;
            let summary = export_mesh(&q, &spec, &path)?;
            let rep = count_components(&q, &spec)?;
            writeln!(
                out,
                "wrote {} vertices and {} elements to {}",
                summary.vertices,
                summary.elements,
                path.display()
            )?;
            writeln!(out, "components: {} ({} compact)", rep.total, rep.compact)?;
            Ok(EXIT_OK)
        }
    }
}
