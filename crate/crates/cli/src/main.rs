//! `spinchain` command-line front end.
//!
//! Sites are 1-based on the command line and in every file; the library is
//! 0-based. Exit codes: 0 success, 1 I/O or internal failure, 2 infeasible or
//! invalid input.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use spinchain::diagnostics::{
    check_phase_pattern, correlation_sigma, fidelity, general_speed_bound, symmetric_speed_bound,
    BoundReport,
};
use spinchain::evolution::linear_grid;
use spinchain::inverse::eta_from_target;
use spinchain::io;
use spinchain::synthesis::{
    fix_coupling_signs, hahn_chain, hahn_spectrum, phase_corrections, refine_isospectral,
    synthesize_numeric, HahnParameters, RefineConfig,
};
use spinchain::{
    eigendecompose, evolution_trace, evolve, Error, EtaVector, StateVector, TargetSpectrum,
};

const DEFAULT_GRID_POINTS: usize = 512;

#[derive(Parser, Debug)]
#[command(name = "spinchain", version, about = "Engineer spin chains that generate prescribed single-excitation states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Numeric synthesis of a chain for a target state.
    Synthesize(SynthesizeArgs),
    /// Analytic mirror-symmetric chain from a Hahn matrix, optionally refined.
    Hahn(HahnArgs),
    /// Occupation probabilities over a time grid, as CSV.
    Evolve(EvolveArgs),
    /// Fidelity, phase pattern, speed bounds and end-to-end correlation.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct SynthesizeArgs {
    #[arg(long)]
    target: PathBuf,
    /// Start site (default: the largest target amplitude).
    #[arg(long)]
    site: Option<usize>,
    #[arg(long, default_value = "auto")]
    epsilon: Epsilon,
    /// Exit 2 if the fidelity at t0 falls below this.
    #[arg(long)]
    fidelity_goal: Option<f64>,
    /// Chain file; phase corrections go next to it as `<stem>.phases.json`.
    #[arg(long)]
    out: PathBuf,
    /// Report file (default: stdout).
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct HahnArgs {
    #[arg(long = "hahn-n")]
    n: usize,
    #[arg(long = "hahn-alpha", default_value_t = 0.0)]
    alpha: f64,
    /// Refine toward this reflection vector.
    #[arg(long, conflicts_with = "target")]
    refine_eta: Option<PathBuf>,
    /// Refine toward the reflection vector of this target state.
    #[arg(long)]
    target: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    site: usize,
    #[arg(long)]
    fidelity_goal: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EvolveArgs {
    #[arg(long)]
    chain: PathBuf,
    #[arg(long, default_value_t = 1)]
    site: usize,
    /// START:END:STEPS (default 0:T0:512).
    #[arg(long)]
    grid: Option<Grid>,
    #[arg(long)]
    t0: Option<f64>,
    /// Trace file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    chain: PathBuf,
    #[arg(long)]
    target: PathBuf,
    #[arg(long)]
    t0: f64,
    #[arg(long, default_value_t = 1)]
    site: usize,
    /// Also write the results as JSON.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug)]
enum Epsilon {
    Auto,
    Value(f64),
}

impl FromStr for Epsilon {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(Self::Auto);
        }
        match s.parse::<f64>() {
            Ok(x) if x.is_finite() && x > 0.0 => Ok(Self::Value(x)),
            _ => Err(format!("expected a positive number or `auto`, got {s:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Grid {
    start: f64,
    end: f64,
    steps: usize,
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, c] = parts[..] else {
            return Err(format!("expected START:END:STEPS, got {s:?}"));
        };
        let num = |x: &str| x.parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
        let grid = Grid {
            start: num(a)?,
            end: num(b)?,
            steps: c.parse().map_err(|e| format!("{c:?}: {e}"))?,
        };
        linear_grid(grid.start, grid.end, grid.steps).map_err(|e| e.to_string())?;
        Ok(grid)
    }
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) | Error::Parse(_) => 1,
            Error::NoConvergence { .. }
            | Error::LanczosBreakdown { .. }
            | Error::LossOfOrthogonality { .. }
            | Error::NegativeRadicand { .. }
            | Error::HahnResidual { .. }
            | Error::NoSolution { .. }
            | Error::Diverged(_) => 1,
            _ => 2,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn zero_based(site: usize, len: usize) -> Result<usize, Failure> {
    if site == 0 || site > len {
        return Err(Failure::input(format!(
            "site {site} out of range 1..={len}"
        )));
    }
    Ok(site - 1)
}

fn check_goal(goal: Option<f64>) -> Result<(), Failure> {
    match goal {
        Some(g) if !(0.0..=1.0).contains(&g) => {
            Err(Failure::input(format!("fidelity goal {g} must lie in [0, 1]")))
        }
        _ => Ok(()),
    }
}

fn load_target(path: &Path) -> Result<StateVector, Failure> {
    let loaded = io::read_target(path)?;
    if let Some(w) = loaded.warning {
        eprintln!("warning: {w}");
    }
    Ok(loaded.state)
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::from(Error::Io(e))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn phases_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("chain");
    out.with_file_name(format!("{stem}.phases.json"))
}

fn synthesize(args: SynthesizeArgs) -> CmdResult {
    check_goal(args.fidelity_goal)?;
    let target = load_target(&args.target)?;
    let site = args.site.map(|s| zero_based(s, target.len())).transpose()?;
    let epsilon = match args.epsilon {
        Epsilon::Auto => None,
        Epsilon::Value(x) => Some(x),
    };
    let report = synthesize_numeric(&target, site, epsilon)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    io::write_chain(&args.out, &report.chain)?;
    io::write_phases(&phases_path(&args.out), &report.phase_corrections)?;
    emit(
        args.report.as_deref(),
        &io::to_json_string(&io::report_value(&report))?,
    )?;
    if let Some(goal) = args.fidelity_goal {
        if report.state_fidelity < goal {
            return Err(Failure::input(format!(
                "fidelity {} is below the goal {goal}",
                report.state_fidelity
            )));
        }
    }
    Ok(())
}

fn hahn(args: HahnArgs) -> CmdResult {
    check_goal(args.fidelity_goal)?;
    let params = HahnParameters::new(args.n, args.alpha)?;
    let chain = hahn_chain(params)?;
    let spectrum = hahn_spectrum(params);
    let mut record = json!({
        "hahn_n": args.n,
        "hahn_alpha": args.alpha,
        "spectrum": spectrum,
        "computed_spectrum": eigendecompose(&chain)?.values(),
    });

    let eta = match (&args.refine_eta, &args.target) {
        (Some(path), _) => {
            let (eta, warning) = io::read_eta(path)?;
            if let Some(w) = warning {
                eprintln!("warning: {w}");
            }
            Some((eta, 0))
        }
        (None, Some(path)) => {
            let target = load_target(path)?;
            let k = zero_based(args.site, target.len())?;
            let (mags, _) = phase_corrections(&target);
            Some((eta_from_target(&mags, k)?, k))
        }
        (None, None) => None,
    };

    let out_chain = match eta {
        None => chain,
        Some((eta, k)) => {
            if eta.len() != chain.len() {
                return Err(Failure::input(format!(
                    "reflection vector has {} entries but the Hahn chain has {} sites",
                    eta.len(),
                    chain.len()
                )));
            }
            let start = fix_coupling_signs(&chain, &eta)?;
            // Hahn spectra are odd multiples of 1/2: ε = 1, t0 = 2π.
            let target = TargetSpectrum::new(spectrum, 1.0)?;
            let mut config = RefineConfig {
                start_site: k,
                ..RefineConfig::default()
            };
            if let Some(g) = args.fidelity_goal {
                config.fidelity_goal = g;
            }
            if let Some(m) = args.max_iter {
                config.max_iter = m;
            }
            let report = refine_isospectral(&start, &eta, &target, &config)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            record["refinement"] = io::report_value(&report);
            record["general_bound"] = bound_value(
                &general_speed_bound(&eta)?.with_achieved(report.jmax_t0),
            );
            report.chain
        }
    };
    io::write_chain(&args.out, &out_chain)?;
    emit(args.report.as_deref(), &io::to_json_string(&record)?)
}

fn evolve_cmd(args: EvolveArgs) -> CmdResult {
    let chain = io::read_chain(&args.chain)?;
    let site = zero_based(args.site, chain.len())?;
    let grid = match (args.grid, args.t0) {
        (Some(g), _) => g,
        (None, Some(t0)) if t0.is_finite() && t0 >= 0.0 => Grid {
            start: 0.0,
            end: t0,
            steps: DEFAULT_GRID_POINTS,
        },
        (None, Some(t0)) => return Err(Failure::input(format!("invalid t0 {t0}"))),
        (None, None) => return Err(Failure::input("either --grid or --t0 is required")),
    };
    let times = linear_grid(grid.start, grid.end, grid.steps)?;
    let trace = evolution_trace(&chain, site, &times)?;
    emit(args.out.as_deref(), &io::trace_to_string(&trace)?)
}

fn bound_value(b: &BoundReport) -> Value {
    json!({
        "kind": b.kind.as_str(),
        "bound": b.bound_value,
        "achieved": b.achieved,
        "satisfied": b.satisfied,
        "hypothesis": b.hypothesis,
    })
}

fn verify(args: VerifyArgs) -> CmdResult {
    if !args.t0.is_finite() || args.t0 < 0.0 {
        return Err(Failure::input(format!("invalid t0 {}", args.t0)));
    }
    let chain = io::read_chain(&args.chain)?;
    let target = load_target(&args.target)?;
    if target.len() != chain.len() {
        return Err(Failure::input(format!(
            "target has {} sites but the chain has {}",
            target.len(),
            chain.len()
        )));
    }
    let k = zero_based(args.site, chain.len())?;
    let eig = eigendecompose(&chain)?;
    let f = fidelity(&chain, k, args.t0, &target)?;
    let phase_ok = check_phase_pattern(eig.values(), args.t0);
    let produced = evolve(&chain, &StateVector::basis(chain.len(), k)?, args.t0)?;
    let sigma = correlation_sigma(&produced);
    let jmax = chain.max_coupling();

    let mut bounds = Vec::new();
    if chain.len() % 2 == 1 && args.t0 > 0.0 {
        let b = symmetric_speed_bound((chain.len() - 1) / 2, args.t0).with_achieved(jmax);
        bounds.push((b, chain.is_mirror_symmetric(1e-9)));
    }
    let (mags, _) = phase_corrections(&target);
    let eta: Option<EtaVector> = eta_from_target(&mags, k).ok();
    if let Some(b) = eta.as_ref().and_then(|e| general_speed_bound(e).ok()) {
        bounds.push((b.with_achieved(jmax * args.t0 / std::f64::consts::PI), true));
    }

    println!("fidelity: {f:.16}");
    println!("phase pattern: {phase_ok}");
    for (b, applies) in &bounds {
        let achieved = b.achieved.unwrap_or(f64::NAN);
        let units = match b.kind.as_str() {
            "symmetric" => "J_max",
            _ => "J_max*t0/pi",
        };
        print!(
            "{} bound: {units} >= {:.6} (achieved {achieved:.6}, {})",
            b.kind.as_str(),
            b.bound_value,
            if b.satisfied { "satisfied" } else { "violated" }
        );
        if !applies {
            print!(" [hypothesis not met: {}]", b.hypothesis.unwrap_or("-"));
        }
        println!();
    }
    println!("sigma: {sigma:.16}");

    if let Some(path) = &args.report {
        let record = json!({
            "fidelity": f,
            "phase_pattern": phase_ok,
            "bounds": bounds.iter().map(|(b, applies)| {
                let mut v = bound_value(b);
                v["hypothesis_met"] = json!(applies);
                v
            }).collect::<Vec<_>>(),
            "sigma": sigma,
        });
        fs::write(path, io::to_json_string(&record)?).map_err(|e| Failure::from(Error::Io(e)))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synthesize(a) => synthesize(a),
        Command::Hahn(a) => hahn(a),
        Command::Evolve(a) => evolve_cmd(a),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
