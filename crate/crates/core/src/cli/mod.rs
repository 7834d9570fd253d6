//! The `kdvb` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or domain error.

pub mod manifest;
pub mod output;

use std::ffi::OsString;
use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factorizer::{factorize_compound, factorize_kdvb, verify_factorization, Branch, KDVB_P_OFFSET};
use crate::params::{reduce, PhysicalParams, ReducedParams};
use crate::solutions::{phase_sweep_surface, sample, Family, PhaseSweep, WaveSolution};
use crate::verify::{linspace, run_suite, Scope, Tolerances};

use manifest::{FigureJob, Grid, Manifest};
use output::{Format, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "kdvb", version, about = "Travelling-wave solutions of the KdV-Burgers equations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Factorization coefficients and their constraint residuals.
    Factorize(FactorizeArgs),
    /// Sample a solution family on a grid.
    Evaluate(EvaluateArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
    /// Sample the regular family over the imaginary phase θ₀ = iaπ.
    Sweep(SweepArgs),
    /// Write the data behind one of the figures listed in the manifest.
    Figure(FigureArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Equation {
    Kdvb,
    Compound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sign {
    Plus,
    Minus,
}

impl From<Sign> for Branch {
    fn from(s: Sign) -> Self {
        match s {
            Sign::Plus => Branch::Plus,
            Sign::Minus => Branch::Minus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

/// Physical coefficients; giving `--s` switches a command to physical mode.
#[derive(Debug, Clone, Args)]
pub struct PhysicalArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "s")]
    pub mu: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "s")]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "s")]
    pub beta: Option<f64>,
    /// Wave velocity.
    #[arg(long, allow_hyphen_values = true, requires = "s")]
    pub v: Option<f64>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub xi0: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub xi0_im: f64,
}

impl PhysicalArgs {
    fn params(&self) -> Result<Option<PhysicalParams>> {
        let Some(s) = self.s else { return Ok(None) };
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| Error::InvalidInput(format!("physical mode needs --{name}")))
        };
        let params = PhysicalParams::new(
            s,
            need(self.mu, "mu")?,
            need(self.alpha, "alpha")?,
            self.beta.unwrap_or(0.0),
            need(self.v, "v")?,
            Complex64::new(self.xi0, self.xi0_im),
        )?;
        Ok(Some(params))
    }
}

#[derive(Debug, Clone, Args)]
pub struct FactorizeArgs {
    #[arg(long = "eq", value_enum)]
    pub equation: Equation,
    /// Displacement δ of the KdVB factorization.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<f64>,
    #[command(flatten)]
    pub physical: PhysicalArgs,
    #[arg(long, value_enum, default_value_t = Sign::Plus)]
    pub sign: Sign,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_scope(s: &str) -> std::result::Result<Scope, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<f64>,
    /// Slope parameter of the rational families.
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    pub k0: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub theta0: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub theta0_im: f64,
    /// Purely imaginary phase θ₀ = iaπ.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["theta0", "theta0_im"])]
    pub phase_a: Option<f64>,
    #[command(flatten)]
    pub physical: PhysicalArgs,
    #[arg(long, allow_hyphen_values = true, default_value_t = -60.0)]
    pub theta_min: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 60.0)]
    pub theta_max: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = -60.0)]
    pub x_min: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 60.0)]
    pub x_max: f64,
    /// Times for physical mode, comma separated.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', default_value = "0")]
    pub t: Vec<f64>,
    /// Number of grid points in θ (reduced) or x (physical).
    #[arg(long, default_value_t = 601)]
    pub points: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// all, factorization, compound-rational, or a family name.
    #[arg(long, value_parser = parse_scope, default_value = "all")]
    pub scope: Scope,
    /// Overrides every tolerance class.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub tol_analytic: Option<f64>,
    #[arg(long)]
    pub tol_pde: Option<f64>,
    #[arg(long)]
    pub tol_oracle: Option<f64>,
    /// Scale every solution by this factor before checking (negative control).
    #[arg(long, default_value_t = 1.0)]
    pub perturb: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_parser = parse_family, default_value = "kdvb-regular")]
    pub family: Family,
    #[arg(long, allow_hyphen_values = true, default_value_t = -5.0)]
    pub a_min: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub a_max: f64,
    #[arg(long, default_value_t = 51)]
    pub a_steps: usize,
    #[arg(long, allow_hyphen_values = true, default_value_t = -40.0)]
    pub theta_min: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 40.0)]
    pub theta_max: f64,
    #[arg(long, default_value_t = 401)]
    pub points: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    /// Figure number.
    pub id: u32,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Alternative manifest; defaults to the bundled one.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

/// Failure of a command, mapped onto an exit code by [`run`].
#[derive(Debug)]
enum Failure {
    Usage(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("i/o error: {e}"))
    }
}

type CmdResult = std::result::Result<(), Failure>;

/// Parses `args` (including the program name) and runs the command, writing
/// to the given streams. Returns the process exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Factorize(a) => factorize(a, out),
        Command::Evaluate(a) => evaluate(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Sweep(a) => sweep(a, out),
        Command::Figure(a) => figure(a, out),
    };
    match result.and_then(|()| out.flush().map_err(Failure::from)) {
        Ok(()) => EXIT_OK,
        Err(Failure::Verification) => EXIT_VERIFY_FAILED,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

/// Entry point used by the binary.
pub fn run() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

#[derive(Debug, Serialize)]
struct FactorizationReport {
    equation: &'static str,
    branch: String,
    a: f64,
    b: f64,
    c: Option<f64>,
    p: f64,
    q: f64,
    k: f64,
    delta: Option<f64>,
    discriminant: Option<f64>,
    constraints: Vec<Constraint>,
}

#[derive(Debug, Serialize)]
struct Constraint {
    name: &'static str,
    residual: f64,
}

/// Deterministic sample points for the constraint residuals.
fn constraint_samples(complex: bool) -> Vec<Complex64> {
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    (1..=64)
        .map(|i| {
            let r = 0.1 + 9.9 * (i as f64 * golden).fract();
            if complex {
                Complex64::from_polar(r / 5.0, 2.0 * PI * (i as f64 * 2f64.sqrt()).fract())
            } else {
                Complex64::new(r, 0.0)
            }
        })
        .collect()
}

fn factorize(a: &FactorizeArgs, out: &mut dyn Write) -> CmdResult {
    let physical = a.physical.params()?;
    let branch = Branch::from(a.sign);
    let report = match a.equation {
        Equation::Kdvb => {
            let delta = match (&physical, a.delta) {
                (Some(_), Some(_)) => return Err(Failure::Usage("give either --delta or physical coefficients".into())),
                (Some(p), None) => {
                    if p.beta != 0.0 {
                        return Err(Failure::Usage("the KdVB factorization needs beta = 0".into()));
                    }
                    (reduce(p)?.p - KDVB_P_OFFSET) / 2.0
                }
                (None, d) => d.unwrap_or(0.0),
            };
            let f = factorize_kdvb(delta, branch);
            let r = verify_factorization(&f, &constraint_samples(false))?;
            FactorizationReport {
                equation: "kdvb",
                branch: branch.to_string(),
                a: f.a,
                b: f.b,
                c: None,
                p: f.p,
                q: 0.0,
                k: f.k,
                delta: Some(f.delta),
                discriminant: None,
                constraints: vec![
                    Constraint { name: "p = 2 delta + 6/25", residual: (f.p - 2.0 * f.delta - KDVB_P_OFFSET).abs() },
                    Constraint { name: "k = p delta - delta^2", residual: (f.k - (f.p * f.delta - f.delta * f.delta)).abs() },
                    Constraint { name: "f1 f2 = F/U", residual: r.product },
                    Constraint { name: "f2 + d(f1 U)/dU = 1", residual: r.derivative },
                ],
            }
        }
        Equation::Compound => {
            let reduced = match &physical {
                Some(p) => {
                    if a.p.is_some() || a.q.is_some() {
                        return Err(Failure::Usage("give either --p/--q or physical coefficients".into()));
                    }
                    reduce(p)?
                }
                None => {
                    let q = a.q.ok_or_else(|| Failure::Usage("compound factorization needs --q".into()))?;
                    ReducedParams::new(a.p.unwrap_or(0.0), q)
                }
            };
            let f = factorize_compound(&reduced, branch)?;
            let r = verify_factorization(&f, &constraint_samples(true))?;
            FactorizationReport {
                equation: "compound",
                branch: branch.to_string(),
                a: f.a,
                b: f.b,
                c: Some(f.c),
                p: f.p,
                q: f.q,
                k: f.k,
                delta: None,
                discriminant: Some(f.discriminant()),
                constraints: vec![
                    Constraint { name: "A^2 = q/2", residual: (f.a * f.a - f.q / 2.0).abs() },
                    Constraint { name: "B = (A+1)/(3A)", residual: (f.b - (f.a + 1.0) / (3.0 * f.a)).abs() },
                    Constraint { name: "k = C(1-2A)/(3A)", residual: (f.k - f.c * (1.0 - 2.0 * f.a) / (3.0 * f.a)).abs() },
                    Constraint { name: "f1 f2 = F/U", residual: r.product },
                    Constraint { name: "f2 + d(f1 U)/dU = 1", residual: r.derivative },
                ],
            }
        }
    };
    match a.format {
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, &report).map_err(|e| Failure::Usage(e.to_string()))?;
            writeln!(out)?;
        }
        ReportFormat::Text => {
            writeln!(out, "equation: {}", report.equation)?;
            writeln!(out, "branch:   {}", report.branch)?;
            writeln!(out, "A = {}", report.a)?;
            writeln!(out, "B = {}", report.b)?;
            if let Some(c) = report.c {
                writeln!(out, "C = {c}")?;
            }
            if let Some(d) = report.delta {
                writeln!(out, "delta = {d}")?;
            }
            writeln!(out, "p = {}", report.p)?;
            if report.equation == "compound" {
                writeln!(out, "q = {}", report.q)?;
            }
            writeln!(out, "k = {}", report.k)?;
            if let Some(d) = report.discriminant {
                writeln!(out, "B^2 - 4AC = {d}")?;
            }
            writeln!(out, "constraints:")?;
            for c in &report.constraints {
                writeln!(out, "  {:<24} residual {:.3e}", c.name, c.residual)?;
            }
        }
    }
    Ok(())
}

fn grid(min: f64, max: f64, points: usize, what: &str) -> Result<Vec<f64>> {
    if points == 0 {
        return Err(Error::InvalidInput(format!("empty {what} grid")));
    }
    if !(min.is_finite() && max.is_finite()) || (points > 1 && min >= max) {
        return Err(Error::InvalidInput(format!("bad {what} range [{min}, {max}]")));
    }
    Ok(linspace(min, max, points))
}

fn reduced_solution(a: &EvaluateArgs) -> Result<WaveSolution> {
    let theta0 = match a.phase_a {
        Some(phase) => Complex64::new(0.0, phase * PI),
        None => Complex64::new(a.theta0, a.theta0_im),
    };
    let need = |v: Option<f64>, name: &str| {
        v.ok_or_else(|| Error::InvalidInput(format!("{} needs --{name}", a.family)))
    };
    match a.family {
        Family::KdvbRegular | Family::KdvbSingular => WaveSolution::kdvb(a.family, a.delta.unwrap_or(0.0), theta0),
        Family::CompoundTanhPlus | Family::CompoundTanhMinus => {
            WaveSolution::compound(a.family, need(a.p, "p")?, need(a.q, "q")?, theta0)
        }
        Family::RationalPlus | Family::RationalMinus => WaveSolution::rational(a.family, need(a.q, "q")?, a.k0, theta0),
        Family::Constant(b) => WaveSolution::constant(need(a.q, "q")?, b),
    }
}

/// Reduced-variable profile on a θ grid.
pub fn reduced_table(solution: &WaveSolution, thetas: &[f64]) -> Result<Table> {
    let mut table = Table::new(vec!["theta"]);
    for &th in thetas {
        table.rows.push((vec![th], sample(solution.eval(Complex64::new(th, 0.0)))?));
    }
    Ok(table)
}

/// Physical profile on an `x × t` grid (t outer, x inner).
pub fn physical_table(solution: &WaveSolution, xs: &[f64], ts: &[f64]) -> Result<Table> {
    let mut table = Table::new(vec!["x", "t"]);
    for &t in ts {
        for &x in xs {
            table.rows.push((vec![x, t], sample(solution.eval_physical(x, t))?));
        }
    }
    Ok(table)
}

fn emit(table: &Table, format: Format, path: Option<&Path>, out: &mut dyn Write) -> CmdResult {
    match path {
        Some(path) => {
            let file = File::create(path).map_err(|e| Failure::Usage(format!("cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            table.write(format, &mut w)?;
            w.flush()?;
        }
        None => table.write(format, out)?,
    }
    Ok(())
}

fn evaluate(a: &EvaluateArgs, out: &mut dyn Write) -> CmdResult {
    let table = match a.physical.params()? {
        Some(params) => {
            if a.phase_a.is_some() || a.theta0 != 0.0 || a.theta0_im != 0.0 {
                return Err(Failure::Usage("physical mode takes the phase from --xi0/--xi0-im".into()));
            }
            let xs = grid(a.x_min, a.x_max, a.points, "x")?;
            if a.t.is_empty() || a.t.iter().any(|t| !t.is_finite()) {
                return Err(Failure::Usage("bad --t list".into()));
            }
            let solution = WaveSolution::from_physical(a.family, &params, a.k0)?;
            physical_table(&solution, &xs, &a.t)?
        }
        None => {
            let thetas = grid(a.theta_min, a.theta_max, a.points, "theta")?;
            reduced_table(&reduced_solution(a)?, &thetas)?
        }
    };
    emit(&table, a.format, a.out.as_deref(), out)
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> CmdResult {
    let mut tol = a.tol.map(Tolerances::uniform).unwrap_or_default();
    if let Some(t) = a.tol_analytic {
        tol.analytic = t;
    }
    if let Some(t) = a.tol_pde {
        tol.pde = t;
    }
    if let Some(t) = a.tol_oracle {
        tol.oracle = t;
    }
    let report = run_suite(a.scope, &tol, a.perturb)?;
    writeln!(out, "scope: {}", report.scope)?;
    if report.perturbation != 1.0 {
        writeln!(out, "perturbation: every solution scaled by {}", report.perturbation)?;
    }
    writeln!(out, "{report}")?;
    if report.passed() {
        writeln!(out, "verification passed")?;
        Ok(())
    } else {
        writeln!(out, "verification FAILED")?;
        out.flush()?;
        Err(Failure::Verification)
    }
}

/// Surface of the phase sweep as a table with columns `a, theta`.
pub fn sweep_table(family: Family, sweep: &PhaseSweep, thetas: &[f64]) -> Result<Table> {
    let surface = phase_sweep_surface(family, sweep, thetas)?;
    let mut table = Table::new(vec!["a", "theta"]);
    for (i, &a) in surface.a.iter().enumerate() {
        for (&th, cell) in surface.theta.iter().zip(surface.row(i)) {
            table.rows.push((vec![a, th], *cell));
        }
    }
    Ok(table)
}

fn sweep(a: &SweepArgs, out: &mut dyn Write) -> CmdResult {
    let sweep = PhaseSweep::new(a.a_min, a.a_max, a.a_steps)?;
    let thetas = grid(a.theta_min, a.theta_max, a.points, "theta")?;
    let table = sweep_table(a.family, &sweep, &thetas)?;
    emit(&table, a.format, a.out.as_deref(), out)
}

fn grid_of(g: &Grid, what: &str) -> Result<Vec<f64>> {
    grid(g.min, g.max, g.points, what)
}

fn figure(a: &FigureArgs, out: &mut dyn Write) -> CmdResult {
    let manifest = match &a.manifest {
        Some(path) => Manifest::load(path)?,
        None => Manifest::builtin(),
    };
    let spec = manifest.figure(a.id)?;
    std::fs::create_dir_all(&a.out_dir)
        .map_err(|e| Failure::Usage(format!("cannot create {}: {e}", a.out_dir.display())))?;
    let ext = a.format.extension();
    let mut written: Vec<(PathBuf, String)> = Vec::new();
    match &spec.job {
        FigureJob::Evaluate { family, phase_a, theta } => {
            let solution = WaveSolution::kdvb(*family, 0.0, Complex64::new(0.0, phase_a * PI))?;
            let table = reduced_table(&solution, &grid_of(theta, "theta")?)?;
            let path = a.out_dir.join(format!("fig{}.{ext}", spec.id));
            emit(&table, a.format, Some(&path), out)?;
            written.push((path, format!("{family}, theta0 = {}i*pi", phase_a)));
        }
        FigureJob::Sweep { family, sweep, theta } => {
            let table = sweep_table(*family, sweep, &grid_of(theta, "theta")?)?;
            let path = a.out_dir.join(format!("fig{}.{ext}", spec.id));
            emit(&table, a.format, Some(&path), out)?;
            written.push((path, format!("{family}, a in [{}, {}]", sweep.a_min(), sweep.a_max())));
        }
        FigureJob::Physical { family, params, x, t } => {
            let xs = grid_of(x, "x")?;
            for (i, p) in params.iter().enumerate() {
                let solution = WaveSolution::from_physical(*family, p, 0.0)?;
                let table = physical_table(&solution, &xs, &[*t])?;
                let path = a.out_dir.join(format!("fig{}_{}.{ext}", spec.id, i + 1));
                emit(&table, a.format, Some(&path), out)?;
                written.push((path, format!("{family}, v = {}", p.v)));
            }
        }
    }
    writeln!(out, "figure {}: {}", spec.id, spec.description)?;
    for (path, what) in written {
        writeln!(out, "  {}  ({what})", path.display())?;
    }
    Ok(())
}
