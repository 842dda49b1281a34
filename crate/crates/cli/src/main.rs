use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use bec_core::sweep::{self, format_sig, Column, SweepTable};
use bec_core::{check_validity, max_anisotropy, solve_fugacity, Shape, TrapSpec, DEFAULT_THRESHOLD};
use clap::{Parser, Subcommand, ValueEnum};

mod config;

use config::ConfigFile;

#[derive(Debug, Parser)]
#[command(name = "bec", version, about = "Finite-N Bose-Einstein condensation in harmonic traps")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    opts: Opts,
}

#[derive(Debug, Clone, Default, clap::Args)]
struct Opts {
    /// Trap shape: isotropic, disk or cigar.
    #[arg(long, global = true)]
    shape: Option<String>,
    /// Anisotropy parameter s >= 1.
    #[arg(long = "s", global = true)]
    s: Option<f64>,
    /// Atom number (comma-separated list for fig2).
    #[arg(long = "n", global = true)]
    n: Option<String>,
    /// Reduced temperature k_B T / (hbar omega).
    #[arg(long = "t", global = true)]
    t: Option<f64>,
    /// Continuum threshold: how many level spacings k_B Tc must exceed.
    #[arg(long, global = true)]
    threshold: Option<f64>,
    #[arg(long, global = true)]
    points: Option<usize>,
    #[arg(long, global = true)]
    n_min: Option<f64>,
    #[arg(long, global = true)]
    n_max: Option<f64>,
    #[arg(long, global = true)]
    t_points: Option<usize>,
    /// Largest s in an anisotropy scan (default: 2.5 times the validity bound).
    #[arg(long, global = true)]
    s_max_scan: Option<f64>,
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// key = value file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// CSV reference curve merged on the first column.
    #[arg(long, global = true)]
    overlay: Option<PathBuf>,
    /// Allow atom numbers below the continuum-validity range.
    #[arg(long = "unsafe", global = true)]
    allow_unsafe: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rescaled T_{0.1%}, T_{0.5%}, T_{1%} and first-order Tc against log10 N.
    Fig1,
    /// Condensate fraction against T/Tc0.
    Fig2,
    /// Exact T_{0.1%} against first-order Tc over the anisotropy s.
    Anisoscan,
    /// Continuum-validity report.
    Validity,
    /// One-shot grand-canonical state at (trap, N, t).
    Solve,
}

/// Flags merged over the config file.
struct Settings {
    opts: Opts,
    file: ConfigFile,
}

impl Settings {
    fn new(opts: Opts) -> Result<Self> {
        let file = match &opts.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        Ok(Settings { opts, file })
    }

    fn pick<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T: std::str::FromStr,
        T::Err: std::fmt::Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.file.parsed(key),
        }
    }

    fn shape(&self) -> Result<Option<Shape>> {
        match self.opts.shape.as_deref().or(self.file.get("shape")) {
            Some(s) => Ok(Some(s.parse()?)),
            None => Ok(None),
        }
    }

    fn trap(&self) -> Result<TrapSpec> {
        let shape = self.shape()?.unwrap_or(Shape::Isotropic);
        let s = self.pick(self.opts.s, "s")?.unwrap_or(1.0);
        Ok(TrapSpec::new(shape, s)?)
    }

    fn n_list(&self) -> Result<Option<Vec<f64>>> {
        let Some(raw) = self.opts.n.clone().or_else(|| self.file.get("n").map(str::to_string)) else {
            return Ok(None);
        };
        raw.split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|e| anyhow!("invalid atom number '{v}': {e}")))
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    fn n_single(&self) -> Result<Option<f64>> {
        match self.n_list()? {
            None => Ok(None),
            Some(v) if v.len() == 1 => Ok(Some(v[0])),
            Some(v) => bail!("expected a single atom number, got {} values", v.len()),
        }
    }

    fn threshold(&self) -> Result<f64> {
        Ok(self.pick(self.opts.threshold, "threshold")?.unwrap_or(DEFAULT_THRESHOLD))
    }

    fn format(&self) -> Result<Format> {
        Ok(self.pick(self.opts.format, "format")?.unwrap_or(Format::Csv))
    }

    fn allow_unsafe(&self) -> Result<bool> {
        Ok(self.opts.allow_unsafe || self.file.parsed::<bool>("unsafe")?.unwrap_or(false))
    }

    fn out(&self) -> Option<PathBuf> {
        self.opts.out.clone().or_else(|| self.file.get("out").map(PathBuf::from))
    }

    fn overlay(&self) -> Option<PathBuf> {
        self.opts.overlay.clone().or_else(|| self.file.get("overlay").map(PathBuf::from))
    }
}

fn read_overlay(path: &Path) -> Result<SweepTable> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("opening overlay {}", path.display()))?;
    let columns: Vec<Column> = reader.headers()?.iter().map(Column::parse_header).collect();
    if columns.len() < 2 {
        bail!("overlay {} needs at least two columns", path.display());
    }
    let mut table = SweepTable::new(columns);
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let row = record
            .iter()
            .map(|v| v.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .with_context(|| format!("overlay {} row {}", path.display(), i + 1))?;
        table.push_row(row)?;
    }
    Ok(table)
}

fn render_table(settings: &Settings, mut table: SweepTable) -> Result<String> {
    if let Some(path) = settings.overlay() {
        table.merge_overlay(&read_overlay(&path)?);
        table.set_meta("overlay", path.display());
    }
    Ok(match settings.format()? {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    })
}

/// Renders the requested output and returns it with its destination.
fn run(cli: Cli) -> Result<(String, Option<PathBuf>)> {
    let settings = Settings::new(cli.opts)?;
    let text = render(&settings, cli.command)?;
    Ok((text, settings.out()))
}

fn render(settings: &Settings, command: Command) -> Result<String> {
    match command {
        Command::Fig1 => {
            let n_min = settings.pick(settings.opts.n_min, "n_min")?.unwrap_or(1e4);
            let n_max = settings.pick(settings.opts.n_max, "n_max")?.unwrap_or(1e7);
            let points = settings.pick(settings.opts.points, "points")?.unwrap_or(25);
            let table = sweep::fig1(n_min, n_max, points, settings.allow_unsafe()?)?;
            render_table(settings, table)
        }
        Command::Fig2 => {
            let ns = settings.n_list()?.unwrap_or_else(|| vec![1e4, 1e5]);
            let t_points = settings.pick(settings.opts.t_points, "t_points")?.unwrap_or(60);
            render_table(settings, sweep::fig2(&ns, t_points)?)
        }
        Command::Anisoscan => {
            let shape = settings
                .shape()?
                .ok_or_else(|| anyhow!("anisoscan needs --shape disk or --shape cigar"))?;
            let n = settings.n_single()?.unwrap_or(1e5);
            let threshold = settings.threshold()?;
            let s_max_scan = match settings.pick(settings.opts.s_max_scan, "s_max_scan")? {
                Some(v) => v,
                None => 2.5 * max_anisotropy(shape, n, threshold)?,
            };
            let points = settings.pick(settings.opts.points, "points")?.unwrap_or(25);
            let table = sweep::cmd_anisoscan(shape, n, s_max_scan, points, threshold)?;
            render_table(settings, table)
        }
        Command::Validity => {
            let trap = settings.trap()?;
            let n = settings.n_single()?.ok_or_else(|| anyhow!("validity needs --n"))?;
            let report = check_validity(&trap, n, settings.threshold()?)?;
            Ok(match settings.format()? {
                Format::Csv => format!("{report}\n"),
                Format::Json => serde_json::to_string_pretty(&report)? + "\n",
            })
        }
        Command::Solve => {
            let trap = settings.trap()?;
            let n = settings.n_single()?.ok_or_else(|| anyhow!("solve needs --n"))?;
            let t = settings.pick(settings.opts.t, "t")?.ok_or_else(|| anyhow!("solve needs --t"))?;
            let state = solve_fugacity(&trap, n, t)?;
            Ok(match settings.format()? {
                Format::Csv => {
                    let fields = [
                        ("n_atoms", state.n_atoms),
                        ("t", state.t),
                        ("z", state.z),
                        ("one_minus_z", state.one_minus_z),
                        ("n0", state.n0),
                        ("f0", state.f0),
                        ("residual", state.residual),
                    ];
                    let mut out = format!("trap: {}\n", state.trap);
                    for (k, v) in fields {
                        out.push_str(&format!("{k}: {}\n", format_sig(v)));
                    }
                    out
                }
                Format::Json => serde_json::to_string_pretty(&state)? + "\n",
            })
        }
    }
}

fn configure_workers() -> Result<()> {
    if let Ok(raw) = std::env::var("BEC_NUM_WORKERS") {
        let workers: usize =
            raw.trim().parse().with_context(|| format!("BEC_NUM_WORKERS = '{raw}'"))?;
        if workers == 0 {
            bail!("BEC_NUM_WORKERS must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(workers).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_workers().and_then(|_| {
        let (text, target) = run(cli)?;
        match target {
            Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display())),
            None => std::io::stdout().write_all(text.as_bytes()).context("writing stdout"),
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
