//! The `billiards` command line.
//!
//! Every subcommand takes a table, either a JSON file or the name of a
//! built-in scenario, writes its declared outputs atomically and prints a
//! one-line JSON summary. Exit status: 0 on success, 1 on a domain error
//! (with a JSON error object on stderr), 2 on a usage error.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::analysis::{
    chaos_verdict, find_period_two, lyapunov, phase_portrait, portrait_svg, random_state, rng,
    sweep, AnalysisError, SweepConfig,
};
use crate::dynamics::{trajectory, DynamicsError, Termination};
use crate::reduction::{reduce_table, ReductionError};
use crate::table::scenarios::{build_scenario, ScenarioParams, SCENARIOS};
use crate::table::{table_from_json, table_to_json, write_json_pretty, BilliardTable, TableError};

/// Seed used by every randomized subcommand unless `--seed` is given.
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "billiards",
    version,
    about = "Mathematical and physical billiards"
)]
struct Cli {
    /// Worker threads for parallel subcommands (0: one per core).
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check closure, orientation and self-intersection of a table.
    Validate {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a named scenario table.
    Scenario {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Erode a table by the particle radius. Also writes `<out>.report.json`.
    Reduce {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Iterate the billiard map from a seeded random state (CSV).
    Simulate {
        #[command(flatten)]
        table: TableArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find and classify period-two orbits (JSON).
    Classify {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long, default_value_t = 0.0)]
        r: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate the largest Lyapunov exponent (JSON).
    Lyapunov {
        #[command(flatten)]
        table: TableArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        transient: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Phase portrait in (s, sin theta) (CSV, optional SVG).
    Portrait {
        #[command(flatten)]
        table: TableArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Number of seed orbits.
        #[arg(long, default_value_t = 16)]
        samples: usize,
        /// Collisions per orbit.
        #[arg(long, default_value_t = 2000)]
        iters: usize,
        #[arg(long, default_value = "100x100", value_parser = parse_grid)]
        grid: (usize, usize),
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Track stability and chaos over a range of particle radii (CSV).
    Sweep {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long = "r-min", default_value_t = 0.0)]
        r_min: f64,
        #[arg(long = "r-max")]
        r_max: f64,
        #[arg(long, default_value_t = 11)]
        steps: usize,
        /// Lyapunov collisions per radius (0 skips the estimate).
        #[arg(long, default_value_t = 20_000)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        transient: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct TableArgs {
    /// Table JSON file or scenario name.
    table: String,
    #[arg(long = "R")]
    big_r: Option<f64>,
    #[arg(long = "R1")]
    r1: Option<f64>,
    #[arg(long = "R2")]
    r2: Option<f64>,
    #[arg(long = "L")]
    l: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    w: Option<f64>,
    #[arg(long)]
    phi: Option<f64>,
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    d: Option<f64>,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Particle radius; the table is reduced first when positive.
    #[arg(long, default_value_t = 0.0)]
    r: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected NxM, got {s:?}"))?;
    let n = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let m = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    Ok((n, m))
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Input(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Table(TableError::Invalid(_))
            | CliError::Reduction(ReductionError::InvalidTable(_)) => "InvalidTable",
            CliError::Table(_) => "TableError",
            CliError::Reduction(ReductionError::TableVanished { .. }) => "TableVanished",
            CliError::Reduction(ReductionError::UnsupportedTopology { .. }) => {
                "UnsupportedTopology"
            }
            CliError::Reduction(ReductionError::InvalidRadius(_)) => "InvalidRadius",
            CliError::Analysis(AnalysisError::NoOrbit(_)) => "NoOrbit",
            CliError::Analysis(AnalysisError::InsufficientIterations { .. }) => {
                "InsufficientIterations"
            }
            CliError::Analysis(_) => "AnalysisError",
            CliError::Dynamics(_) => "DynamicsError",
            CliError::Io { .. } => "IoError",
            CliError::Input(_) => "InputError",
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

impl TableArgs {
    fn params(&self) -> ScenarioParams {
        let mut p = ScenarioParams::new();
        for (key, v) in [
            ("R", self.big_r),
            ("R1", self.r1),
            ("R2", self.r2),
            ("L", self.l),
            ("a", self.a),
            ("w", self.w),
            ("phi", self.phi),
            ("h", self.h),
            ("d", self.d),
        ] {
            if let Some(v) = v {
                p.set(key, v);
            }
        }
        p
    }

    /// Loads the table without validating it.
    fn load_raw(&self) -> Result<BilliardTable, CliError> {
        let path = Path::new(&self.table);
        if path.is_file() {
            let text = std::fs::read_to_string(path).map_err(io_err(path))?;
            return Ok(table_from_json(&text)?);
        }
        if SCENARIOS.contains(&self.table.as_str()) {
            return Ok(build_scenario(&self.table, &self.params())?);
        }
        Err(CliError::Input(format!(
            "{:?} is neither a table file nor a scenario ({})",
            self.table,
            SCENARIOS.join(", ")
        )))
    }

    fn load(&self) -> Result<BilliardTable, CliError> {
        Ok(self.load_raw()?.checked()?)
    }

    fn load_reduced(&self, r: f64) -> Result<BilliardTable, CliError> {
        let table = self.load()?;
        if r == 0.0 {
            return Ok(table);
        }
        Ok(reduce_table(&table, r)?.reduced)
    }
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err(path))?;
    tmp.write_all(contents.as_bytes()).map_err(io_err(path))?;
    tmp.persist(path).map_err(|e| io_err(path)(e.error))?;
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> String {
    write_json_pretty(v).expect("report types serialize")
}

fn sidecar(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map_or_else(|| "reduced".into(), |s| s.to_string_lossy().into_owned());
    out.with_file_name(format!("{stem}.report.json"))
}

fn path_str(p: &Option<PathBuf>) -> Option<String> {
    p.as_ref().map(|p| p.display().to_string())
}

fn execute(cmd: Command) -> Result<serde_json::Value, CliError> {
    match cmd {
        Command::Validate { table, out } => {
            let t = table.load_raw()?;
            let report = t.validate();
            if let Some(out) = &out {
                write_atomic(out, &to_json(&report))?;
            }
            if !report.valid {
                return Err(TableError::Invalid(report.failures).into());
            }
            Ok(json!({
                "command": "validate",
                "name": t.name,
                "valid": true,
                "components": t.components().len(),
                "out": path_str(&out),
            }))
        }
        Command::Scenario { table, out } => {
            if !SCENARIOS.contains(&table.table.as_str()) {
                return Err(TableError::UnknownScenario(table.table.clone()).into());
            }
            let t = table.load()?;
            if let Some(out) = &out {
                write_atomic(out, &table_to_json(&t))?;
            }
            Ok(json!({
                "command": "scenario",
                "name": t.name,
                "components": t.components().len(),
                "out": path_str(&out),
            }))
        }
        Command::Reduce { table, r, out } => {
            let t = table.load()?;
            let res = reduce_table(&t, r)?;
            if let Some(out) = &out {
                write_atomic(out, &table_to_json(&res.reduced))?;
                write_atomic(&sidecar(out), &to_json(&res.report))?;
            }
            Ok(json!({
                "command": "reduce",
                "r": r,
                "components_before": res.report.components_before,
                "components_after": res.report.components_after,
                "vanished": res.report.vanished,
                "out": path_str(&out),
            }))
        }
        Command::Simulate { table, run, n, out } => {
            let t = table.load_reduced(run.r)?;
            let x0 = random_state(&t, &mut rng(run.seed));
            let tr = trajectory(&t, &x0, n)?;
            let mut csv = String::from("iter,component_id,s,theta,sin_theta,x,y\n");
            for (i, x) in std::iter::once(&x0).chain(&tr.states).enumerate() {
                let (p, _) = t.embed(x);
                let _ = writeln!(
                    csv,
                    "{i},{},{},{},{},{},{}",
                    t.component(x.component).id,
                    x.s,
                    x.theta,
                    x.sin_theta,
                    p.x,
                    p.y
                );
            }
            if let Some(out) = &out {
                write_atomic(out, &csv)?;
            }
            let termination = match tr.termination {
                Termination::Completed => "completed",
                Termination::Corner(_) => "corner",
                Termination::Grazing(_) => "grazing",
            };
            Ok(json!({
                "command": "simulate",
                "r": run.r,
                "seed": run.seed,
                "collisions": tr.states.len(),
                "termination": termination,
                "out": path_str(&out),
            }))
        }
        Command::Classify { table, r, out } => {
            let t = table.load_reduced(r)?;
            let orbits = find_period_two(&t);
            if orbits.is_empty() {
                return Err(
                    AnalysisError::NoOrbit(format!("{} has no period-two orbit", t.name)).into(),
                );
            }
            let rows: Vec<_> = orbits
                .iter()
                .map(|o| {
                    json!({
                        "L": o.length,
                        "k0": o.k0,
                        "k1": o.k1,
                        "class": o.analytic_class.to_string(),
                        "trace": o.monodromy_trace,
                        "resonance_ok": o.elliptic_resonance_ok,
                    })
                })
                .collect();
            let doc = json!({ "orbits": rows });
            if let Some(out) = &out {
                write_atomic(out, &to_json(&doc))?;
            }
            let classes: Vec<String> = orbits
                .iter()
                .map(|o| o.analytic_class.to_string())
                .collect();
            Ok(json!({
                "command": "classify",
                "r": r,
                "orbits": orbits.len(),
                "classes": classes,
                "out": path_str(&out),
            }))
        }
        Command::Lyapunov {
            table,
            run,
            n,
            transient,
            out,
        } => {
            let t = table.load_reduced(run.r)?;
            let x0 = random_state(&t, &mut rng(run.seed));
            let est = lyapunov(&t, &x0, n, transient, run.seed)?;
            let verdict = chaos_verdict(&est);
            let doc = json!({ "r": run.r, "estimate": est, "verdict": verdict });
            if let Some(out) = &out {
                write_atomic(out, &to_json(&doc))?;
            }
            Ok(json!({
                "command": "lyapunov",
                "r": run.r,
                "lambda": est.lambda,
                "stderr": est.stderr,
                "verdict": verdict,
                "out": path_str(&out),
            }))
        }
        Command::Portrait {
            table,
            run,
            samples,
            iters,
            grid,
            out,
            svg,
        } => {
            let t = table.load_reduced(run.r)?;
            let p = phase_portrait(&t, samples, iters, grid, run.seed)?;
            if let Some(out) = &out {
                let mut csv = String::from("orbit_id,iter,s,sin_theta\n");
                for (k, o) in p.orbits.iter().enumerate() {
                    for (i, (s, q)) in o.samples.iter().enumerate() {
                        let _ = writeln!(csv, "{k},{i},{s},{q}");
                    }
                }
                write_atomic(out, &csv)?;
            }
            if let Some(svg) = &svg {
                write_atomic(svg, &portrait_svg(&p, 5000))?;
            }
            let regular = p
                .orbits
                .iter()
                .filter(|o| o.label == crate::analysis::OrbitLabel::Regular)
                .count();
            Ok(json!({
                "command": "portrait",
                "r": run.r,
                "seed": run.seed,
                "orbits": p.orbits.len(),
                "regular": regular,
                "out": path_str(&out),
                "svg": path_str(&svg),
            }))
        }
        Command::Sweep {
            table,
            r_min,
            r_max,
            steps,
            n,
            transient,
            seed,
            out,
        } => {
            let t = table.load()?;
            let cfg = SweepConfig {
                r_min,
                r_max,
                steps,
                lyapunov_iters: n,
                transient,
                seed,
                orbit: None,
            };
            let rep = sweep(&t, &cfg)?;
            if let Some(out) = &out {
                let mut csv = String::from(
                    "r,n_components,orbit_class,lambda,lambda_stderr,transition_flag\n",
                );
                for p in &rep.points {
                    let opt = |v: Option<f64>| v.map_or_else(String::new, |v| v.to_string());
                    let _ = writeln!(
                        csv,
                        "{},{},{},{},{},{}",
                        p.r,
                        p.n_components.map_or_else(String::new, |n| n.to_string()),
                        p.orbit_class()
                            .map_or_else(|| "none".to_owned(), |c| c.to_string()),
                        opt(p.lyapunov.map(|l| l.lambda)),
                        opt(p.lyapunov.map(|l| l.stderr)),
                        u8::from(p.transition)
                    );
                }
                write_atomic(out, &csv)?;
            }
            Ok(json!({
                "command": "sweep",
                "steps": steps,
                "tracked_orbit": rep.tracked_orbit,
                "transitions": rep.transitions,
                "out": path_str(&out),
            }))
        }
    }
}

/// Runs the command line `argv` (including the program name) and returns
/// the process exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = if cli.workers > 0 {
        match rayon::ThreadPoolBuilder::new()
            .num_threads(cli.workers)
            .build()
        {
            Ok(pool) => pool.install(|| execute(cli.command)),
            Err(e) => Err(CliError::Input(e.to_string())),
        }
    } else {
        execute(cli.command)
    };
    match result {
        Ok(summary) => {
            println!("{summary}");
            0
        }
        Err(e) => {
            eprintln!("{}", json!({ "error": e.kind(), "message": e.to_string() }));
            1
        }
    }
}
