//! The `kdnm` command line: `traj` writes a coherence trajectory, `sweep`
//! the measure across a parameter range, `check` runs a property suite.
//!
//! Exit codes: 0 success, 1 failed check, 2 usage or parameter error, 3 IO
//! error, 4 numerical failure.

pub mod config;
pub mod csv;
pub mod svg;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::nonmarkov::{fiducial_state, sweep, trajectory};
use crate::suites::{run_suite, Suite, DEFAULT_SEED};

pub use config::{Command, RunConfig, SweepSpec};

#[derive(Debug, PartialEq, Eq)]
pub enum CliError {
    Usage(String),
    Io(String),
    Numerical(String),
    CheckFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::CheckFailed(_) => 1,
            Self::Usage(_) => 2,
            Self::Io(_) => 3,
            Self::Numerical(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Self::Usage(m) | Self::Io(m) | Self::Numerical(m) | Self::CheckFailed(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Self::Numerical(e.to_string())
        } else {
            Self::Usage(e.to_string())
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "kdnm", version, about = "KD coherence trajectories and non-Markovianity sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Coherence trajectory of one channel run (CSV: t, ckd, l1, nc, R or absB).
    Traj(RunArgs),
    /// Non-Markovianity across a parameter range (CSV: paramValue, nCkd, nCl1).
    Sweep(RunArgs),
    /// Run a property suite: a1, a2, a3, a4, a5, kd-invariants, oracle-volterra.
    Check {
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Args, Debug, Default)]
#[command(allow_negative_numbers = true)]
struct RunArgs {
    /// Flat `key = value` file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// dephase1q, damp1q, dephase2q or damp2q.
    #[arg(long)]
    channel: Option<String>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long = "omega-c")]
    omega_c: Option<f64>,
    /// standard (default) or literal.
    #[arg(long = "rate-form")]
    rate_form: Option<String>,
    #[arg(long)]
    gamma0: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    varpi: Option<f64>,
    #[arg(long)]
    h1: Option<f64>,
    #[arg(long)]
    h2: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long = "t-max")]
    t_max: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    /// fixed (default) or optimized.
    #[arg(long)]
    basis: Option<String>,
    #[arg(long)]
    param: Option<String>,
    #[arg(long)]
    from: Option<f64>,
    #[arg(long)]
    to: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// CSV path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long = "grid-points")]
    grid_points: Option<usize>,
    #[arg(long = "refine-iters")]
    refine_iters: Option<usize>,
    #[arg(long)]
    tolerance: Option<f64>,
    /// Maximise over single-qubit pure initial states on an N x N Bloch grid.
    #[arg(long = "initial-grid")]
    initial_grid: Option<usize>,
}

impl RunArgs {
    fn overrides(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                m.insert(k.to_string(), v);
            }
        };
        let f = |x: Option<f64>| x.map(|v| v.to_string());
        let u = |x: Option<usize>| x.map(|v| v.to_string());
        let p = |x: &Option<PathBuf>| x.as_ref().map(|v| v.to_string_lossy().into_owned());
        put("channel", self.channel.clone());
        put("s", f(self.s));
        put("omega_c", f(self.omega_c));
        put("rate_form", self.rate_form.clone());
        put("gamma0", f(self.gamma0));
        put("kappa", f(self.kappa));
        put("varpi", f(self.varpi));
        put("h1", f(self.h1));
        put("h2", f(self.h2));
        put("lambda", f(self.lambda));
        put("t_max", f(self.t_max));
        put("n", u(self.n));
        put("basis", self.basis.clone());
        put("param", self.param.clone());
        put("from", f(self.from));
        put("to", f(self.to));
        put("steps", u(self.steps));
        put("out", p(&self.out));
        put("svg", p(&self.svg));
        put("grid_points", u(self.grid_points));
        put("refine_iters", u(self.refine_iters));
        put("tolerance", f(self.tolerance));
        put("initial_grid", u(self.initial_grid));
        m
    }

    fn into_config(self, command: Command) -> Result<RunConfig, CliError> {
        let mut merged = match &self.config {
            Some(path) => config::read_config_file(path)?,
            None => BTreeMap::new(),
        };
        merged.extend(self.overrides());
        RunConfig::from_map(command, merged)
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Writes a validated CSV to `cfg.out` (or `stdout`) and the optional SVG.
fn emit(cfg: &RunConfig, csv_text: &str, svg_text: impl FnOnce() -> String, stdout: &mut dyn Write) -> Result<(), CliError> {
    csv::validate(csv_text)?;
    match &cfg.out {
        Some(path) => write_file(path, csv_text)?,
        None => stdout
            .write_all(csv_text.as_bytes())
            .map_err(|e| CliError::Io(format!("stdout: {e}")))?,
    }
    if let Some(path) = &cfg.svg {
        write_file(path, &svg_text())?;
    }
    Ok(())
}

pub fn cmd_traj(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let rho0 = fiducial_state(cfg.channel.kind());
    let tr = trajectory(&cfg.channel, &rho0, &cfg.grid, &cfg.basis, &cfg.optimizer)?;
    let t = tr.times();
    let driver = cfg.channel.driver_name();
    let text = csv::render(&["t", "ckd", "l1", "nc", driver], &[&t, &tr.ckd, &tr.l1, &tr.nc, &tr.driver]);
    let title = format!("{} ({})", cfg.channel, cfg.basis);
    emit(
        cfg,
        &text,
        || svg::line_plot(&title, "t", &t, &[("C_KD", &tr.ckd), ("l1", &tr.l1), ("N_c", &tr.nc)]),
        stdout,
    )
}

pub fn cmd_sweep(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let spec = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Usage("sweep needs --param, --from, --to and --steps".into()))?;
    let rows = sweep(&cfg.channel, spec.param, &spec.range, &cfg.grid, &cfg.basis, &cfg.optimizer, spec.initial)?;
    let mut xs = Vec::new();
    let mut nckd = Vec::new();
    let mut ncl1 = Vec::new();
    let mut first_error: Option<CliError> = None;
    for row in rows {
        match row.result {
            Ok(m) => {
                xs.push(row.value);
                nckd.push(m.n_ckd);
                ncl1.push(m.n_cl1);
            }
            Err(e) => {
                let _ = writeln!(stderr, "row {}={}: {e}", spec.param, row.value);
                first_error.get_or_insert(CliError::from(e));
            }
        }
    }
    let text = csv::render(&["paramValue", "nCkd", "nCl1"], &[&xs, &nckd, &ncl1]);
    let title = format!("{} sweep of {}", cfg.channel.kind(), spec.param);
    emit(
        cfg,
        &text,
        || svg::line_plot(&title, spec.param.name(), &xs, &[("N_CKD", &nckd), ("N_Cl1", &ncl1)]),
        stdout,
    )?;
    first_error.map_or(Ok(()), Err)
}

pub fn cmd_check(suite: &str, seed: u64, stdout: &mut dyn Write) -> Result<(), CliError> {
    let suite: Suite = suite.parse()?;
    let report = run_suite(suite, seed)?;
    writeln!(stdout, "{report}").map_err(|e| CliError::Io(format!("stdout: {e}")))?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::CheckFailed(format!("suite {suite} failed")))
    }
}

/// Parses `args` (including the program name) and runs the command; returns
/// the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Sub::Traj(a) => a.into_config(Command::Traj).and_then(|cfg| cmd_traj(&cfg, stdout)),
        Sub::Sweep(a) => a
            .into_config(Command::Sweep)
            .and_then(|cfg| cmd_sweep(&cfg, stdout, stderr)),
        Sub::Check { suite, seed } => cmd_check(&suite, seed, stdout),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "kdnm: {}", e.message());
            e.exit_code()
        }
    }
}
