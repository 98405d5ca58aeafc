use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use qwmix::graph::{GraphKind, DEFAULT_ORACLE_CAP};
use qwmix::mixing::{scan_probe, MixingProbe, MixingReport};
use qwmix::verify::{
    admissible_etas, verify_bbqn, verify_bunkbed_theorem, verify_eta_theorem, verify_hamming, verify_hypercube,
    Verdict, ORACLE_TOL,
};
use qwmix::walk::{DenseOracle, Evolver};
use qwmix::z2n::BooleanFunction;

use crate::family::{fmt_complex, fmt_value, initial_state, GraphArgs};
use crate::CliError;

/// Single writer for the main output. Tables go to `--output` or stdout;
/// summary notes go to stdout when the table goes to a file, else stderr.
pub struct Sink {
    path: Option<PathBuf>,
    body: String,
}

impl Sink {
    pub fn new(path: Option<&Path>) -> Self {
        Self { path: path.map(Path::to_path_buf), body: String::new() }
    }

    pub fn line(&mut self, s: impl AsRef<str>) {
        self.body.push_str(s.as_ref());
        self.body.push('\n');
    }

    pub fn note(&self, s: impl AsRef<str>) {
        if self.path.is_some() {
            println!("{}", s.as_ref());
        } else {
            eprintln!("{}", s.as_ref());
        }
    }

    pub fn finish(self) -> Result<(), CliError> {
        match &self.path {
            Some(p) => fs::write(p, &self.body)?,
            None => {
                let mut stdout = std::io::stdout().lock();
                match stdout.write_all(self.body.as_bytes()).and_then(|_| stdout.flush()) {
                    // a closed reader (e.g. `| head`) is not an error
                    Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                    r => r?,
                }
            }
        }
        Ok(())
    }
}

fn core_err(e: qwmix::Error) -> CliError {
    CliError::usage(e.to_string())
}

pub fn spectrum(args: &GraphArgs, out: &mut Sink) -> Result<(), CliError> {
    let spec = args.build()?;
    out.line("a,weight,lambda");
    for e in spec.eigenvalues() {
        out.line(format!("{},{},{}", e.label, e.weight, fmt_value(e.value)));
    }
    Ok(())
}

pub fn walk(args: &GraphArgs, t: f64, start: &str, sup: Option<&str>, out: &mut Sink) -> Result<(), CliError> {
    if !t.is_finite() {
        return Err(CliError::usage("--time must be finite"));
    }
    let spec = args.build()?;
    let init = initial_state(&spec, start, sup)?;
    let psi = Evolver::new(&spec, &init).map_err(core_err)?.amplitudes(t);
    out.line("vertex,re,im,prob");
    for (v, c) in psi.amps.iter().enumerate() {
        let (re, im) = fmt_complex(*c);
        out.line(format!("{v},{re},{im},{:e}", c.norm_sqr()));
    }
    Ok(())
}

pub fn scan(
    args: &GraphArgs,
    t_max: f64,
    steps: usize,
    tol: f64,
    start: &str,
    sup: Option<&str>,
    out: &mut Sink,
) -> Result<(), CliError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::usage("--tol must be positive"));
    }
    let spec = args.build()?;
    let init = initial_state(&spec, start, sup)?;
    let probe = MixingProbe::new(&spec, &init).map_err(core_err)?;
    let summary = scan_probe(&probe, t_max, steps, tol).map_err(core_err)?;

    out.line(MixingReport::csv_header());
    for r in &summary.reports {
        out.line(r.csv_row());
    }

    out.note(format!("min_tv: {:e} at t = {}", summary.min_tv, summary.argmin_t));
    if summary.uniform_times.is_empty() {
        out.note("uniform_time: none");
    } else {
        let ts: Vec<String> = summary.uniform_times.iter().map(|t| format!("{t:.9}")).collect();
        out.note(format!("uniform_time: {}", ts.join(",")));
    }
    if let GraphKind::Bunkbed(f) = &spec.kind {
        // P^_t at the character that flips only the copy bit
        let top = 1usize << f.dim();
        let min = summary
            .reports
            .par_iter()
            .map(|r| probe.phat(r.t)[top].re)
            .reduce(|| f64::INFINITY, f64::min);
        let bound = 1.0 - 2.0 * f.fourier_support_size() as f64 / (1u64 << f.dim()) as f64;
        out.note(format!("min_phat_copy_flip: {min:.12} (bound from Fourier support: {bound})"));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Hypercube,
    Eta,
    Hamming,
    Bunkbed,
    Bbqn,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Hypercube => "hypercube",
            Suite::Eta => "eta",
            Suite::Hamming => "hamming",
            Suite::Bunkbed => "bunkbed",
            Suite::Bbqn => "bbqn",
            Suite::All => "all",
        }
    }
}

fn run_suite(suite: Suite, max_n: u32, q_max: usize, eps: f64) -> qwmix::Result<Vec<Verdict>> {
    let mut v = Vec::new();
    match suite {
        Suite::Hypercube => {
            for n in 1..=max_n {
                v.push(verify_hypercube(n, eps)?);
            }
        }
        Suite::Eta => {
            for n in 2..=max_n {
                for eta in admissible_etas(n, false) {
                    v.push(verify_eta_theorem(n, eta, eps)?);
                }
            }
        }
        Suite::Hamming => {
            for n in 1..=max_n {
                for q in 2..=q_max {
                    v.push(verify_hamming(n, q, eps)?);
                }
            }
        }
        Suite::Bunkbed => {
            for n in 1..=max_n {
                v.push(verify_bunkbed_theorem(n, &BooleanFunction::all_ones(n)?, eps)?);
                v.push(verify_bunkbed_theorem(n, &BooleanFunction::delta0(n)?, eps)?);
                if n >= 2 {
                    v.push(verify_bunkbed_theorem(n, &BooleanFunction::new(n, [0, 1, 2, 3])?, eps)?);
                }
            }
        }
        Suite::Bbqn => {
            for n in 2..=max_n {
                v.push(verify_bbqn(n, eps)?);
            }
        }
        Suite::All => {
            for s in [Suite::Hypercube, Suite::Eta, Suite::Hamming, Suite::Bunkbed, Suite::Bbqn] {
                v.extend(run_suite(s, max_n, q_max, eps)?);
            }
        }
    }
    Ok(v)
}

pub fn verify(suite: Suite, max_n: u32, q_max: usize, eps: f64, out: &mut Sink) -> Result<(), CliError> {
    if !(1..=20).contains(&max_n) {
        return Err(CliError::usage("--max-n must be in 1..=20"));
    }
    if q_max < 2 {
        return Err(CliError::usage("--q-max must be at least 2"));
    }
    if !(eps.is_finite() && eps > 0.0) {
        return Err(CliError::usage("--tol must be positive"));
    }
    let verdicts = run_suite(suite, max_n, q_max, eps).map_err(core_err)?;
    let pass = verdicts.iter().all(|v| v.pass);
    let cases: Vec<Value> = verdicts
        .iter()
        .flat_map(|v| v.cases.iter())
        .map(|c| json!({ "params": c.params, "expected": c.expected, "observed": c.observed, "pass": c.pass }))
        .collect();
    let summary: Vec<Value> = verdicts
        .iter()
        .map(|v| {
            json!({ "check": v.check, "params": v.params, "conclusion": v.conclusion,
                    "mixing_times": v.mixing_times, "pass": v.pass })
        })
        .collect();
    let report = json!({ "suite": suite.name(), "cases": cases, "verdicts": summary, "pass": pass });
    out.line(serde_json::to_string_pretty(&report).expect("serializable"));
    if pass {
        Ok(())
    } else {
        let failed = verdicts.iter().filter(|v| !v.pass).count();
        Err(CliError::check(format!("{failed} of {} checks failed", verdicts.len())))
    }
}

pub struct OraclePlan {
    pub trials: usize,
    pub seed: u64,
    pub t_max: f64,
    pub times: Vec<f64>,
}

pub fn oracle_compare(
    args: &GraphArgs,
    plan: &OraclePlan,
    start: &str,
    sup: Option<&str>,
    out: &mut Sink,
) -> Result<(), CliError> {
    if !(plan.t_max.is_finite() && plan.t_max > 0.0) {
        return Err(CliError::usage("--t-max must be positive"));
    }
    if plan.times.iter().any(|t| !t.is_finite()) {
        return Err(CliError::usage("--time must be finite"));
    }
    let spec = args.build()?;
    if spec.vertex_count() > DEFAULT_ORACLE_CAP {
        return Err(CliError::usage(format!(
            "{} vertices exceed the dense oracle cap of {DEFAULT_ORACLE_CAP}",
            spec.vertex_count()
        )));
    }
    let init = initial_state(&spec, start, sup)?;
    let fast = Evolver::new(&spec, &init).map_err(core_err)?;
    let oracle = DenseOracle::from_spec(&spec).map_err(core_err)?;

    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let mut times = plan.times.clone();
    times.extend((0..plan.trials).map(|_| rng.gen_range(0.0..plan.t_max)));
    if times.is_empty() {
        return Err(CliError::usage("nothing to compare: give --trials or --time"));
    }

    out.line("trial,t,max_abs_deviation");
    let mut worst = 0.0f64;
    for (k, &t) in times.iter().enumerate() {
        let d = fast.amplitudes(t).max_abs_diff(&oracle.evolve(&init, t).map_err(core_err)?);
        worst = worst.max(d);
        out.line(format!("{k},{t},{d:e}"));
    }
    out.note(format!("max_deviation: {worst:e} over {} times (limit {ORACLE_TOL:e})", times.len()));
    if worst > ORACLE_TOL {
        return Err(CliError::check(format!("oracle deviation {worst:e} exceeds {ORACLE_TOL:e}")));
    }
    Ok(())
}
