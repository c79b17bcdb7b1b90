//! `zakharov-trig`: run the Zakharov integrator experiments and write CSV files.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use zakharov_core::config::{parse_config, Config, ConfigLayer, ProblemKind, Step};
use zakharov_core::harness::{
    conservation_run, convergence_studies, read_snapshot, soliton_snapshots, write_convergence,
    write_run, write_snapshot, ConservationSpec, ConvergenceSpec, HarnessError, Problem, StepSize,
};
use zakharov_core::integrators::Method;
use zakharov_core::{selftest, SolitonParams};

const OUT_DIR_ENV: &str = "ZAK_OUT_DIR";

#[derive(Parser, Debug)]
#[command(
    name = "zakharov-trig",
    version,
    about = "Trigonometric integrators for the periodic Zakharov system",
    after_help = "Settings are applied in order: built-in defaults, then --config FILE, then flags.\n\
                  Exit status: 0 success, 1 invalid input or failed selftest, 2 numerical divergence."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// One trajectory per scheme: diagnostics CSV plus a final snapshot
    Run(Settings),
    /// Error against a reference at T for every step in `taus`, with fitted orders
    Converge(Settings),
    /// Snapshots of |E|, u and u' at the requested `times`
    Soliton(Settings),
    /// L2 and energy deviation series
    Conserve(Settings),
    /// Run the acceptance criteria and report pass or fail for each
    Selftest {
        /// Criteria to run, by number [default: all of 1-9]
        ids: Vec<u32>,
    },
}

#[derive(Args, Debug, Default)]
struct Settings {
    /// Flat key=value file; flags override its values [default: none]
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// first, second, both or rk4 [default: both]
    #[arg(long)]
    scheme: Option<String>,
    /// example1, soliton or custom [default: soliton]
    #[arg(long)]
    problem: Option<String>,
    /// Fourier modes, a power of two >= 8 [default: 1024 for example1, 512 otherwise]
    #[arg(long = "K")]
    k: Option<String>,
    /// Torus length [default: 2*pi for example1, 20*pi otherwise]
    #[arg(long = "L")]
    l: Option<String>,
    /// Time step; excludes --CFL [default: unset]
    #[arg(long, conflicts_with = "cfl")]
    tau: Option<String>,
    /// tau / dx^2, rounded so that the step divides T [default: 5]
    #[arg(long = "CFL")]
    cfl: Option<String>,
    /// Final time [default: 1]
    #[arg(long = "T")]
    t: Option<String>,
    /// Record diagnostics every n steps [default: 1]
    #[arg(long)]
    sample_every: Option<String>,
    /// Sobolev index s of the error norm [default: 0]
    #[arg(long)]
    s_norm: Option<String>,
    /// Soliton parameter B [default: 0.5]
    #[arg(long = "B")]
    b: Option<String>,
    /// Soliton parameter C [default: 0.15]
    #[arg(long = "C")]
    c: Option<String>,
    /// 2/3-rule dealiasing of products, true or false [default: false]
    #[arg(long)]
    dealias: Option<String>,
    /// Nonlinear coupling, true or false [default: true]
    #[arg(long)]
    coupled: Option<String>,
    /// Output directory [default: $ZAK_OUT_DIR, else .]
    #[arg(long)]
    out_dir: Option<String>,
    /// Comma-separated step sizes for converge [default: 0.004,0.002,0.001,0.0005]
    #[arg(long)]
    taus: Option<String>,
    /// Comma-separated snapshot times [default: 0,T/2,T]
    #[arg(long)]
    times: Option<String>,
    /// Snapshot CSV with the initial data of problem=custom [default: none]
    #[arg(long)]
    init_file: Option<String>,
}

impl Settings {
    fn layer(&self) -> Result<ConfigLayer> {
        let flags = [
            ("scheme", &self.scheme),
            ("problem", &self.problem),
            ("K", &self.k),
            ("L", &self.l),
            ("tau", &self.tau),
            ("CFL", &self.cfl),
            ("T", &self.t),
            ("sample_every", &self.sample_every),
            ("s_norm", &self.s_norm),
            ("B", &self.b),
            ("C", &self.c),
            ("dealias", &self.dealias),
            ("coupled", &self.coupled),
            ("out_dir", &self.out_dir),
            ("taus", &self.taus),
            ("times", &self.times),
            ("init_file", &self.init_file),
        ];
        let pairs = flags
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k, v.clone())));
        Ok(ConfigLayer::from_pairs(pairs)?)
    }

    fn resolve(&self) -> Result<Config> {
        let mut config = Config::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            let layer = parse_config(&text).with_context(|| format!("in {}", path.display()))?;
            config.apply(&layer).with_context(|| format!("in {}", path.display()))?;
        }
        config.apply(&self.layer()?).context("in command-line flags")?;
        if config.out_dir.is_none() {
            config.out_dir = Some(
                std::env::var_os(OUT_DIR_ENV)
                    .map(PathBuf::from)
                    .unwrap_or_else(|| PathBuf::from(".")),
            );
        }
        Ok(config)
    }
}

/// Problem data together with the grid it should be sampled on.
fn problem(config: &Config) -> Result<(Problem, usize, f64)> {
    match config.problem {
        ProblemKind::Example1 => Ok((Problem::Example1, config.modes(), config.length())),
        ProblemKind::Soliton => {
            let params = SolitonParams::new(config.b, config.c)?;
            Ok((Problem::Soliton(params), config.modes(), config.length()))
        }
        ProblemKind::Custom => {
            let Some(path) = &config.init_file else {
                bail!("problem=custom needs init_file");
            };
            let snapshot = read_snapshot(path)?;
            let grid = snapshot.fields.grid().clone();
            let modes = config.modes.unwrap_or(grid.modes());
            let length = config.length.unwrap_or(grid.length());
            Ok((Problem::Custom(Arc::new(snapshot.fields)), modes, length))
        }
    }
}

fn step_size(config: &Config) -> StepSize {
    match config.step {
        Step::Tau(t) => StepSize::Tau(t),
        Step::Cfl(c) => StepSize::Cfl(c),
    }
}

fn conservation_spec(config: &Config, method: Method) -> Result<ConservationSpec> {
    let (problem, modes, length) = problem(config)?;
    Ok(ConservationSpec {
        method,
        problem,
        step: step_size(config),
        modes,
        length,
        t_end: config.t_end,
        sample_every: config.sample_every,
        dealias: config.dealias,
        coupled: config.coupled,
    })
}

fn out_dir(config: &Config) -> Result<PathBuf> {
    let dir = config.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir)
}

fn wrote(path: &Path) {
    println!("wrote {}", path.display());
}

fn cmd_run(config: &Config, name: &str) -> Result<()> {
    let dir = out_dir(config)?;
    for method in config.scheme.methods() {
        let spec = conservation_spec(config, method)?;
        let record = conservation_run(&spec)?;
        let path = dir.join(format!("{name}_{method}.csv"));
        write_run(&record, &path)?;
        wrote(&path);
        if name == "run" {
            let last = soliton_snapshots(&spec, &[config.t_end])?.remove(0);
            let path = dir.join(format!("{name}_{method}_final.csv"));
            write_snapshot(&last, &path)?;
            wrote(&path);
        }
        println!(
            "{method}: {} rows, max relative L2 drift {:.3e}",
            record.rows.len(),
            record.max_relative_l2_drift()
        );
    }
    Ok(())
}

fn cmd_converge(config: &Config) -> Result<()> {
    let mut schemes = Vec::new();
    for method in config.scheme.methods() {
        match method {
            Method::Trig(s) => schemes.push(s),
            Method::Rk4 => bail!("converge studies first and second; rk4 is the reference"),
        }
    }
    let (problem, modes, length) = problem(config)?;
    let spec = ConvergenceSpec {
        problem,
        taus: config.taus.clone(),
        modes,
        length,
        t_end: config.t_end,
        s_index: config.s_norm,
    };
    let dir = out_dir(config)?;
    for record in convergence_studies(&spec, &schemes)? {
        let path = dir.join(format!("converge_{}.csv", record.scheme));
        write_convergence(&record, &path)?;
        wrote(&path);
        let fit = record.fit()?;
        println!(
            "{}: slope {:.4} (r^2 {:.6}, {} rows excluded)",
            record.scheme,
            fit.slope,
            fit.r_squared,
            fit.excluded.len()
        );
    }
    Ok(())
}

fn cmd_soliton(config: &Config) -> Result<()> {
    let dir = out_dir(config)?;
    for method in config.scheme.methods() {
        let spec = conservation_spec(config, method)?;
        let mut last_step = None;
        for snap in soliton_snapshots(&spec, &config.times())? {
            // requested times that snap to the same step share one file
            if last_step.replace(snap.step) == Some(snap.step) {
                continue;
            }
            let path = dir.join(format!("soliton_{method}_t{:?}.csv", snap.t));
            write_snapshot(&snap, &path)?;
            wrote(&path);
        }
    }
    Ok(())
}

fn cmd_selftest(ids: &[u32]) -> bool {
    let mut all = true;
    for (i, criterion) in selftest::criteria().iter().enumerate() {
        if !ids.is_empty() && !ids.contains(&(i as u32 + 1)) {
            continue;
        }
        let report = criterion();
        println!("{report}");
        all &= report.passed;
    }
    all
}

fn dispatch(command: &Command) -> Result<bool> {
    match command {
        Command::Run(s) => cmd_run(&s.resolve()?, "run")?,
        Command::Conserve(s) => cmd_run(&s.resolve()?, "conserve")?,
        Command::Converge(s) => cmd_converge(&s.resolve()?)?,
        Command::Soliton(s) => cmd_soliton(&s.resolve()?)?,
        Command::Selftest { ids } => {
            if let Some(bad) = ids.iter().find(|i| !(1..=9).contains(*i)) {
                bail!("no criterion {bad}; criteria are numbered 1 to 9");
            }
            return Ok(cmd_selftest(ids));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(&cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            let diverged = e
                .downcast_ref::<HarnessError>()
                .is_some_and(HarnessError::is_divergence);
            ExitCode::from(if diverged { 2 } else { 1 })
        }
    }
}
