//! Command-line front end: `psi`, `survival`, `fit`, `oracle`, `figures`
//! and `verify`.
//!
//! Data go to CSV files in `--out`, each run also writes
//! `<command>.manifest.json`. Passing that manifest back through `--config`
//! replays the run.

pub mod commands;
pub mod output;
pub mod settings;
pub mod verify;

use crate::error::{Error, Result};
use clap::{Args, Parser, Subcommand};
use output::{RunManifest, Table};
use settings::Settings;
use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "deltaquench", version, about = "Quench of a delta-function well: exact dynamics and checks")]
pub struct Cli {
    /// Output directory (created if missing).
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// key=value settings file, or a run manifest to replay.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Print the resolved settings and exit.
    #[arg(long, global = true)]
    pub show_config: bool,
    /// Reserved; every pipeline is deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Wavefunction on a spatial grid.
    Psi(PsiArgs),
    /// Survival amplitude and probability over a time range.
    Survival(SurvivalArgs),
    /// Power-law and exponential fits of a decay curve.
    Fit(FitArgs),
    /// Crank-Nicolson quench compared with the closed forms.
    Oracle(OracleArgs),
    /// Data behind the three figures, mu = 3.
    Figures(FiguresArgs),
    /// Self-check suites with a JSON report.
    Verify(VerifyArgs),
}

#[derive(Debug, Args, Default)]
pub struct ModelArgs {
    #[arg(long)]
    pub mu: Option<f64>,
    /// Output file stem.
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Debug, Args, Default)]
pub struct GridArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub xmin: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub xmax: Option<f64>,
    #[arg(long)]
    pub nx: Option<usize>,
}

#[derive(Debug, Args, Default)]
pub struct TimeArgs {
    #[arg(long)]
    pub tmin: Option<f64>,
    #[arg(long)]
    pub tmax: Option<f64>,
    #[arg(long)]
    pub nt: Option<usize>,
    /// linear or log.
    #[arg(long)]
    pub spacing: Option<String>,
}

#[derive(Debug, Args, Default)]
pub struct LatticeArgs {
    /// Grid spacing.
    #[arg(long)]
    pub h: Option<f64>,
    /// Box half-width.
    #[arg(long = "box")]
    pub box_half_width: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// Square-well width; 0 is a single-node delta.
    #[arg(long)]
    pub well_width: Option<f64>,
    #[arg(long)]
    pub cap_strength: Option<f64>,
    #[arg(long)]
    pub cap_width: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PsiArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub t: Option<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
    /// exact, kernel, shorttime, longtime, farfield or oracle.
    #[arg(long)]
    pub method: Option<String>,
    #[command(flatten)]
    pub lattice: LatticeArgs,
}

#[derive(Debug, Args)]
pub struct SurvivalArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub time: TimeArgs,
    /// exact, quadrature, shorttime, longtime or oracle.
    #[arg(long)]
    pub method: Option<String>,
    /// Short-time series order, 1 to 5.
    #[arg(long)]
    pub order: Option<usize>,
    #[command(flatten)]
    pub lattice: LatticeArgs,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// CSV from `survival`; omit to generate the exact series.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub window_lo: Option<f64>,
    #[arg(long)]
    pub window_hi: Option<f64>,
    /// escape (1 - P) or envelope (peaks of |P - P_inf|).
    #[arg(long)]
    pub target: Option<String>,
    #[arg(long)]
    pub nt: Option<usize>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Comma-separated snapshot times.
    #[arg(long)]
    pub times: Option<String>,
    /// Survival samples up to the last snapshot.
    #[arg(long)]
    pub nt: Option<usize>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub lattice: LatticeArgs,
}

#[derive(Debug, Args)]
pub struct FiguresArgs {
    /// 1, 2, 3 or all.
    #[arg(long)]
    pub which: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// cerf, exact, survival, oracle or all.
    #[arg(long)]
    pub suite: Option<String>,
    /// mu for the oracle suite.
    #[arg(long)]
    pub mu: Option<f64>,
    /// Report file stem.
    #[arg(long)]
    pub name: Option<String>,
    /// Tolerance override, `check=value`; repeatable.
    #[arg(long = "tol")]
    pub tolerances: Vec<String>,
    #[command(flatten)]
    pub lattice: LatticeArgs,
}

type Pairs = Vec<(String, String)>;

fn push<T: ToString>(p: &mut Pairs, key: &'static str, v: &Option<T>) {
    if let Some(v) = v {
        p.push((key.to_string(), v.to_string()));
    }
}

impl ModelArgs {
    fn pairs(&self, p: &mut Pairs) {
        push(p, "mu", &self.mu);
        push(p, "name", &self.name);
    }
}

impl GridArgs {
    fn pairs(&self, p: &mut Pairs) {
        push(p, "xmin", &self.xmin);
        push(p, "xmax", &self.xmax);
        push(p, "nx", &self.nx);
    }
}

impl TimeArgs {
    fn pairs(&self, p: &mut Pairs) {
        push(p, "tmin", &self.tmin);
        push(p, "tmax", &self.tmax);
        push(p, "nt", &self.nt);
        push(p, "spacing", &self.spacing);
    }
}

impl LatticeArgs {
    fn pairs(&self, p: &mut Pairs) {
        push(p, "h", &self.h);
        push(p, "box", &self.box_half_width);
        push(p, "dt", &self.dt);
        push(p, "well_width", &self.well_width);
        push(p, "cap_strength", &self.cap_strength);
        push(p, "cap_width", &self.cap_width);
    }
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Psi(_) => "psi",
            Command::Survival(_) => "survival",
            Command::Fit(_) => "fit",
            Command::Oracle(_) => "oracle",
            Command::Figures(_) => "figures",
            Command::Verify(_) => "verify",
        }
    }

    /// Flags given on the command line, as settings pairs.
    fn pairs(&self) -> Result<Pairs> {
        let mut p = Pairs::new();
        match self {
            Command::Psi(a) => {
                a.model.pairs(&mut p);
                push(&mut p, "t", &a.t);
                a.grid.pairs(&mut p);
                push(&mut p, "method", &a.method);
                a.lattice.pairs(&mut p);
            }
            Command::Survival(a) => {
                a.model.pairs(&mut p);
                a.time.pairs(&mut p);
                push(&mut p, "method", &a.method);
                push(&mut p, "order", &a.order);
                a.lattice.pairs(&mut p);
            }
            Command::Fit(a) => {
                a.model.pairs(&mut p);
                push(&mut p, "input", &a.input.as_ref().map(|p| p.display().to_string()));
                push(&mut p, "window_lo", &a.window_lo);
                push(&mut p, "window_hi", &a.window_hi);
                push(&mut p, "target", &a.target);
                push(&mut p, "nt", &a.nt);
            }
            Command::Oracle(a) => {
                a.model.pairs(&mut p);
                push(&mut p, "times", &a.times);
                push(&mut p, "nt", &a.nt);
                a.grid.pairs(&mut p);
                a.lattice.pairs(&mut p);
            }
            Command::Figures(a) => push(&mut p, "which", &a.which),
            Command::Verify(a) => {
                push(&mut p, "suite", &a.suite);
                push(&mut p, "mu", &a.mu);
                push(&mut p, "name", &a.name);
                a.lattice.pairs(&mut p);
                for t in &a.tolerances {
                    let (k, v) = t
                        .split_once('=')
                        .ok_or_else(|| Error::Usage(format!("--tol expects check=value, got `{t}`")))?;
                    p.push((format!("tol.{}", k.trim()), v.to_string()));
                }
            }
        }
        Ok(p)
    }
}

/// Defaults, then `--config`, then flags.
pub fn resolve(cli: &Cli) -> Result<Settings> {
    let mut s = Settings::default();
    if let Some(path) = &cli.config {
        s.load_file(path)?;
    }
    if let Some(cmd) = &cli.command {
        s.apply(cmd.pairs()?)?;
    }
    if let Some(seed) = cli.seed {
        s.seed = seed;
    }
    Ok(s)
}

fn stem(s: &Settings, default: &str) -> String {
    if s.name.is_empty() {
        default.to_string()
    } else {
        s.name.clone()
    }
}

fn write_table(dir: &Path, file: String, table: &Table, outputs: &mut Vec<String>) -> Result<()> {
    table.write(&dir.join(&file))?;
    outputs.push(file);
    Ok(())
}

fn write_json<T: serde::Serialize>(dir: &Path, file: String, value: &T, outputs: &mut Vec<String>) -> Result<()> {
    std::fs::write(dir.join(&file), serde_json::to_string_pretty(value)?)?;
    outputs.push(file);
    Ok(())
}

/// Execute a parsed invocation. Returns the process exit status.
pub fn execute(cli: &Cli) -> Result<u8> {
    let s = resolve(cli)?;
    if cli.show_config {
        let _ = write!(std::io::stdout().lock(), "{}", s.show());
        return Ok(0);
    }
    let cmd = cli
        .command
        .as_ref()
        .ok_or_else(|| Error::Usage("no subcommand given; see --help".into()))?;
    let dir = cli.out.as_path();
    std::fs::create_dir_all(dir)?;
    let mut outputs = Vec::new();
    let mut status = 0;
    match cmd {
        Command::Psi(_) => {
            let t = commands::psi_table(&s)?;
            write_table(dir, format!("{}.csv", stem(&s, "psi")), &t, &mut outputs)?;
        }
        Command::Survival(_) => {
            let t = commands::survival_table(&s)?;
            write_table(dir, format!("{}.csv", stem(&s, "survival")), &t, &mut outputs)?;
        }
        Command::Fit(_) => {
            let report = commands::fit_report(&s)?;
            // a closed pipe downstream is not an error
            let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(&report)?);
            write_json(dir, format!("{}.json", stem(&s, "fit")), &report, &mut outputs)?;
        }
        Command::Oracle(_) => {
            let run = commands::oracle_run(&s)?;
            let base = stem(&s, "oracle");
            write_table(dir, format!("{base}_survival.csv"), &run.survival, &mut outputs)?;
            for (t, table) in &run.snapshots {
                write_table(dir, format!("{base}_t{t}.csv"), table, &mut outputs)?;
            }
            for snap in &run.report.snapshots {
                eprintln!("t = {}: l2_rel = {:.3e}", snap.t, snap.comparison.l2_rel);
            }
            write_json(dir, format!("{base}.json"), &run.report, &mut outputs)?;
        }
        Command::Figures(_) => {
            let which: Vec<u8> = match s.which.as_str() {
                "all" => vec![1, 2, 3],
                w => vec![w.parse().map_err(|_| Error::Usage(format!("--which takes 1, 2, 3 or all, got `{w}`")))?],
            };
            for w in which {
                for (name, fs) in commands::figure_settings(&s, w)? {
                    let table = if w == 1 {
                        commands::psi_table(&fs)?
                    } else {
                        commands::survival_table(&fs)?
                    };
                    write_table(dir, format!("{name}.csv"), &table, &mut outputs)?;
                }
            }
        }
        Command::Verify(_) => {
            let report = verify::run_suites(&s)?;
            for c in &report.checks {
                eprintln!(
                    "{} [{}] {}: {:.3e} (tol {:.1e}) {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.suite,
                    c.name,
                    c.value,
                    c.tolerance,
                    c.detail
                );
            }
            eprintln!("verify: {} passed, {} failed", report.passed, report.failed);
            write_json(dir, format!("{}.json", stem(&s, "verify")), &report, &mut outputs)?;
            if !report.ok() {
                status = 1;
            }
        }
    }
    let mut manifest = RunManifest::new(cmd.name(), s.to_pairs());
    manifest.outputs = outputs;
    manifest.write(dir)?;
    Ok(status)
}

/// Parse `args` and run. Errors are printed to stderr with status 2.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
