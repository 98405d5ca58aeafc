//! `qwm`: build generalized hypercubes, evolve walks on them, scan for
//! uniform mixing and run the mixing checks.
//!
//! Exit codes: 0 success, 1 failed check or oracle deviation, 2 usage error.

mod commands;
mod family;

use std::fmt;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use family::GraphArgs;

#[derive(Debug)]
pub struct CliError {
    code: u8,
    msg: String,
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self { code: 2, msg: msg.into() }
    }

    pub fn check(msg: impl Into<String>) -> Self {
        Self { code: 1, msg: msg.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.msg)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::usage(format!("i/o: {e}"))
    }
}

#[derive(Debug, Parser)]
#[command(name = "qwm", version, about = "Exact continuous-time quantum walks on generalized hypercubes")]
struct Cli {
    /// Worker threads for scans (defaults to all cores).
    #[arg(long, global = true, env = "QWM_THREADS")]
    threads: Option<usize>,
    /// Write the table or report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<std::path::PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigenvalue table `a,weight,lambda`.
    Spectrum {
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Amplitudes and probabilities at one time, `vertex,re,im,prob`.
    Walk {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, allow_hyphen_values = true)]
        time: f64,
        /// Start vertex: a bit string of the graph's width or a decimal index.
        #[arg(long, default_value = "0")]
        start: String,
        /// Equal superposition of the listed vertices, e.g. `0,110`.
        #[arg(long, conflicts_with = "start")]
        superposition: Option<String>,
    },
    /// Grid scan of tv distance and max off-zero |P^| with a summary.
    Scan {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        t_max: f64,
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        /// Uniformity tolerance on max off-zero |P^|.
        #[arg(long, default_value_t = qwmix::mixing::GRID_TOL)]
        tol: f64,
        #[arg(long, default_value = "0")]
        start: String,
        #[arg(long, conflicts_with = "start")]
        superposition: Option<String>,
    },
    /// Run the mixing checks and emit a JSON report.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: commands::Suite,
        #[arg(long, default_value_t = 6)]
        max_n: u32,
        #[arg(long, default_value_t = 6)]
        q_max: usize,
        #[arg(long, default_value_t = qwmix::verify::DEFAULT_EPS)]
        tol: f64,
    },
    /// Fast spectral route vs dense eigendecomposition at seeded random times.
    OracleCompare {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random times are drawn from [0, t-max).
        #[arg(long, default_value_t = 10.0)]
        t_max: f64,
        /// Extra fixed times, checked before the random ones.
        #[arg(long = "time", allow_hyphen_values = true)]
        times: Vec<f64>,
        #[arg(long, default_value = "0")]
        start: String,
        #[arg(long, conflicts_with = "start")]
        superposition: Option<String>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(k) = cli.threads {
        if k == 0 {
            return Err(CliError::usage("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| CliError::usage(e.to_string()))?;
    }
    let mut out = commands::Sink::new(cli.output.as_deref());
    let result = match cli.command {
        Command::Spectrum { graph } => commands::spectrum(&graph, &mut out),
        Command::Walk { graph, time, start, superposition } => {
            commands::walk(&graph, time, &start, superposition.as_deref(), &mut out)
        }
        Command::Scan { graph, t_max, steps, tol, start, superposition } => {
            commands::scan(&graph, t_max, steps, tol, &start, superposition.as_deref(), &mut out)
        }
        Command::Verify { suite, max_n, q_max, tol } => commands::verify(suite, max_n, q_max, tol, &mut out),
        Command::OracleCompare { graph, trials, seed, t_max, times, start, superposition } => {
            let plan = commands::OraclePlan { trials, seed, t_max, times };
            commands::oracle_compare(&graph, &plan, &start, superposition.as_deref(), &mut out)
        }
    };
    // reports are written even when a check fails
    if result.as_ref().map_or_else(|e| e.code == 1, |_| true) {
        out.finish()?;
    }
    result
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qwm: {e}");
            ExitCode::from(e.code)
        }
    }
}
