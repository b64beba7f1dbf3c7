//! `regret`: solve, approximate, decompose, simulate, generate and verify
//! minmax regret instances.

mod report;
mod strategy;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use minmax_regret::decompose::{decompose_marginal, DecomposeError, DEFAULT_TOLERANCE as DECOMPOSE_TOL};
use minmax_regret::gen::{self, Family, GenSpec, UncertaintyKind};
use minmax_regret::sim::simulate;
use minmax_regret::solvers::{
    approx_dual_weighted, approx_mean_cost, approx_midpoint, solve_deterministic_exact, solve_randomized,
    solve_randomized_with, DoubleOracleOptions, SolveError, DEFAULT_MAX_ITER, DEFAULT_TOLERANCE,
};
use minmax_regret::{
    expected_regret, validate_instance, AdversaryMixedStrategy, GameSolution, Instance, InstanceDescription,
    MarginalVector, PlayerMixedStrategy,
};
use serde::Serialize;

use report::{emit, Format};
use strategy::{AdversaryFile, PlayerFile};

const EXIT_VERIFY: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_NOT_IN_HULL: u8 = 4;

/// A command failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn resource(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_RESOURCE,
            message: message.into(),
        }
    }

    pub fn solve(e: SolveError) -> Self {
        if e.is_resource_limit() {
            Failure::resource(e.to_string())
        } else {
            Failure::input(e.to_string())
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "regret", version, about = "Minmax regret solvers for combinatorial problems with uncertain costs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Output {
    /// Report destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Optimal randomized or deterministic minmax regret.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "randomized")]
        model: Model,
        /// Width of the certified bracket at which the double oracle stops.
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Nominal solution at surrogate costs, with its true maximum regret.
    Approx {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        method: Method,
        /// Also solve the randomized game and report R_max(M) / Z_R.
        #[arg(long)]
        certify: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Mixed strategy with a given marginal, or a separating certificate.
    Decompose {
        #[arg(long)]
        instance: PathBuf,
        /// JSON array of n reals.
        #[arg(long)]
        marginal: PathBuf,
        #[arg(long, default_value_t = DECOMPOSE_TOL)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Monte Carlo estimate of the expected regret of a strategy pair.
    Simulate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `{player, adversary}` document; a fresh randomized solve when absent.
        #[arg(long)]
        strategies: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Random or gap instances.
    Gen {
        #[arg(long, value_enum)]
        family: GenFamily,
        /// Items (edges or arcs for graph families).
        #[arg(long)]
        n: Option<usize>,
        /// Selection size, or the item count of the tight discrete family.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum)]
        uncertainty: Option<GenUncertainty>,
        #[arg(long, default_value_t = 3)]
        scenarios: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the solver invariants on one instance or a random suite.
    Verify {
        #[arg(long, required_unless_present = "random_suite", conflicts_with = "random_suite")]
        instance: Option<PathBuf>,
        /// Stored strategies (e.g. a solve report) to re-check against the instance.
        #[arg(long, requires = "instance")]
        strategies: Option<PathBuf>,
        #[arg(long)]
        random_suite: bool,
        #[arg(long, default_value_t = 50)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Model {
    Randomized,
    Deterministic,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Auto,
    Mean,
    Midpoint,
    DualWeighted,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GenFamily {
    KSelection,
    SpanningTree,
    DagPath,
    Explicit,
    TightDiscrete,
    TightInterval,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GenUncertainty {
    Interval,
    Scenarios,
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    let text = read_file(path)?;
    Instance::from_json(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write(report: &impl Serialize, output: &Output) -> Result<(), Failure> {
    emit(report, output.format, output.out.as_deref()).map_err(Failure::input)
}

#[derive(Serialize)]
struct SolveReport {
    instance: String,
    model: &'static str,
    status: &'static str,
    value: Option<f64>,
    lower_bound: f64,
    upper_bound: f64,
    certified_gap: f64,
    tolerance: f64,
    iterations: usize,
    wall_time_secs: f64,
    player: Option<PlayerFile>,
    adversary: Option<AdversaryFile>,
    marginal: Option<Vec<f64>>,
    message: Option<String>,
}

impl SolveReport {
    fn from_game(inst: &Instance, sol: &GameSolution, status: &'static str, tol: f64, secs: f64) -> Self {
        SolveReport {
            instance: inst.name().to_string(),
            model: "randomized",
            status,
            value: Some(sol.value),
            lower_bound: sol.lower_bound,
            upper_bound: sol.upper_bound,
            certified_gap: sol.certified_gap,
            tolerance: tol,
            iterations: sol.iterations,
            wall_time_secs: secs,
            player: Some(PlayerFile::from_strategy(&sol.player)),
            adversary: Some(AdversaryFile::from_strategy(&sol.adversary)),
            marginal: Some(sol.marginal.0.clone()),
            message: None,
        }
    }

    fn bracket_only(inst: &Instance, model: &'static str, status: &'static str, lower: f64, upper: f64, tol: f64) -> Self {
        SolveReport {
            instance: inst.name().to_string(),
            model,
            status,
            value: None,
            lower_bound: lower,
            upper_bound: upper,
            certified_gap: upper - lower,
            tolerance: tol,
            iterations: 0,
            wall_time_secs: 0.0,
            player: None,
            adversary: None,
            marginal: None,
            message: None,
        }
    }
}

fn cmd_solve(path: &Path, model: Model, tol: f64, max_iter: usize, output: &Output) -> Result<(), Failure> {
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Failure::input(format!("tolerance must be a nonnegative number, got {tol}")));
    }
    let inst = load_instance(path)?;
    let start = Instant::now();
    match model {
        Model::Randomized => {
            let result = solve_randomized_with(&inst, DoubleOracleOptions { tol, max_iter });
            let secs = start.elapsed().as_secs_f64();
            match result {
                Ok(sol) => write(&SolveReport::from_game(&inst, &sol, "optimal", tol, secs), output),
                Err(e) => {
                    let mut report = match &e {
                        SolveError::MaxIterations { partial, .. } => {
                            SolveReport::from_game(&inst, partial, "max-iterations", tol, secs)
                        }
                        SolveError::NoProgress { iterations, lower, upper } => {
                            let mut r = SolveReport::bracket_only(&inst, "randomized", "no-progress", *lower, *upper, tol);
                            r.iterations = *iterations;
                            r
                        }
                        _ => return Err(Failure::solve(e)),
                    };
                    report.wall_time_secs = secs;
                    report.message = Some(e.to_string());
                    write(&report, output)?;
                    Err(Failure::solve(e))
                }
            }
        }
        Model::Deterministic => {
            let det = solve_deterministic_exact(&inst).map_err(Failure::solve)?;
            let secs = start.elapsed().as_secs_f64();
            let report = SolveReport {
                instance: inst.name().to_string(),
                model: "deterministic",
                status: "optimal",
                value: Some(det.value),
                lower_bound: det.value,
                upper_bound: det.value,
                certified_gap: 0.0,
                tolerance: 0.0,
                iterations: det.candidates,
                wall_time_secs: secs,
                player: Some(PlayerFile::from_strategy(&PlayerMixedStrategy::pure(det.set.clone()))),
                adversary: Some(AdversaryFile::from_strategy(&AdversaryMixedStrategy::pure(det.worst.clone()))),
                marginal: Some(det.set.to_vector()),
                message: None,
            };
            write(&report, output)
        }
    }
}

#[derive(Serialize)]
struct Certification {
    z_r: f64,
    ratio: Option<f64>,
    bound: Option<f64>,
    within_bound: Option<bool>,
}

#[derive(Serialize)]
struct ApproxReport {
    instance: String,
    method: &'static str,
    set: Vec<usize>,
    surrogate_costs: Vec<f64>,
    max_regret: f64,
    worst_case: AdversaryFile,
    guarantee: Option<f64>,
    midpoint_identity_residual: Option<f64>,
    midpoint_lower_sum_residual: Option<f64>,
    certify: Option<Certification>,
}

fn cmd_approx(path: &Path, method: Method, certify: bool, output: &Output) -> Result<(), Failure> {
    let inst = load_instance(path)?;
    let mut solved = None;
    let approx = match method {
        Method::Auto if inst.is_interval() => approx_midpoint(&inst),
        Method::Auto | Method::Mean => approx_mean_cost(&inst),
        Method::Midpoint => approx_midpoint(&inst),
        Method::DualWeighted => {
            if inst.is_interval() {
                return Err(Failure::input("dual-weighted needs scenario uncertainty"));
            }
            let sol = solve_randomized(&inst).map_err(Failure::solve)?;
            let a = approx_dual_weighted(&inst, &sol.adversary);
            solved = Some(sol);
            a
        }
    }
    .map_err(Failure::solve)?;

    let certification = if certify {
        let z_r = match solved {
            Some(sol) => sol.value,
            None => solve_randomized(&inst).map_err(Failure::solve)?.value,
        };
        let ratio = (z_r > 0.0).then(|| approx.max_regret / z_r);
        Some(Certification {
            z_r,
            ratio,
            bound: approx.guarantee,
            within_bound: approx
                .guarantee
                .map(|b| approx.max_regret <= b * z_r + 1e-9 * (1.0 + z_r.abs())),
        })
    } else {
        None
    };
    let report = ApproxReport {
        instance: inst.name().to_string(),
        method: approx.method,
        set: approx.set.to_indices(),
        surrogate_costs: approx.surrogate.0.clone(),
        max_regret: approx.max_regret,
        worst_case: AdversaryFile::from_strategy(&AdversaryMixedStrategy::pure(approx.worst.clone())),
        guarantee: approx.guarantee,
        midpoint_identity_residual: approx.midpoint.map(|m| m.identity_residual),
        midpoint_lower_sum_residual: approx.midpoint.map(|m| m.lower_sum_residual),
        certify: certification,
    };
    write(&report, output)
}

#[derive(Serialize)]
struct Certificate {
    u: Vec<f64>,
    w: f64,
    violation: f64,
}

#[derive(Serialize)]
struct DecomposeReport {
    instance: String,
    status: &'static str,
    strategy: Option<PlayerFile>,
    reconstruction_error: Option<f64>,
    cuts: Option<usize>,
    certificate: Option<Certificate>,
}

fn cmd_decompose(path: &Path, marginal: &Path, tol: f64, output: &Output) -> Result<(), Failure> {
    let inst = load_instance(path)?;
    let p: Vec<f64> = serde_json::from_str(&read_file(marginal)?)
        .map_err(|e| Failure::input(format!("{}: expected a JSON array of reals: {e}", marginal.display())))?;
    let mut report = DecomposeReport {
        instance: inst.name().to_string(),
        status: "inside",
        strategy: None,
        reconstruction_error: None,
        cuts: None,
        certificate: None,
    };
    match decompose_marginal(&MarginalVector(p), inst.oracle(), tol) {
        Ok(d) => {
            report.strategy = Some(PlayerFile::from_strategy(&d.strategy));
            report.reconstruction_error = Some(d.error);
            report.cuts = Some(d.cuts);
            write(&report, output)
        }
        Err(DecomposeError::NotInHull(cert)) => {
            report.status = "not-in-hull";
            report.certificate = Some(Certificate {
                u: cert.u.clone(),
                w: cert.w,
                violation: cert.violation,
            });
            write(&report, output)?;
            Err(Failure {
                code: EXIT_NOT_IN_HULL,
                message: format!("marginal is outside the convex hull (violation {})", cert.violation),
            })
        }
        Err(e @ DecomposeError::MaxCuts { .. }) => Err(Failure::resource(e.to_string())),
        Err(e) => Err(Failure::input(e.to_string())),
    }
}

#[derive(Serialize)]
struct SimulateReport {
    instance: String,
    strategies: String,
    samples: u64,
    seed: u64,
    mean: f64,
    stderr: f64,
    exact: f64,
    /// `|mean - exact| / stderr`; absent when the estimate has no spread.
    z: Option<f64>,
    support_min: f64,
    support_max: f64,
}

fn cmd_simulate(path: &Path, samples: u64, seed: u64, strategies: Option<&Path>, output: &Output) -> Result<(), Failure> {
    let inst = load_instance(path)?;
    let (player, adversary, source) = match strategies {
        Some(file) => {
            let (y, w) = strategy::parse_strategies(&read_file(file)?, &inst)
                .map_err(|e| Failure::input(format!("{}: {e}", file.display())))?;
            (y, w, file.display().to_string())
        }
        None => {
            let sol = solve_randomized(&inst).map_err(Failure::solve)?;
            (sol.player, sol.adversary, "solve".to_string())
        }
    };
    let r = simulate(&inst, &player, &adversary, samples, seed).map_err(|e| Failure::input(e.to_string()))?;
    let exact = expected_regret(&player, &adversary, inst.oracle()).map_err(|e| Failure::input(e.to_string()))?;
    let report = SimulateReport {
        instance: inst.name().to_string(),
        strategies: source,
        samples,
        seed,
        mean: r.mean,
        stderr: r.stderr,
        exact,
        z: (r.stderr > 0.0).then(|| (r.mean - exact).abs() / r.stderr),
        support_min: r.support_min,
        support_max: r.support_max,
    };
    write(&report, output)
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    family: GenFamily,
    n: Option<usize>,
    k: Option<usize>,
    uncertainty: Option<GenUncertainty>,
    scenarios: usize,
    seed: u64,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let desc: InstanceDescription = match family {
        GenFamily::TightDiscrete => {
            let k = k.ok_or_else(|| Failure::input("tight-discrete needs --k"))?;
            gen::tight_discrete(k).map_err(|e| Failure::input(e.to_string()))?
        }
        GenFamily::TightInterval => gen::tight_interval(),
        random => {
            let family = match random {
                GenFamily::KSelection => Family::KSelection,
                GenFamily::SpanningTree => Family::SpanningTree,
                GenFamily::DagPath => Family::DagPath,
                _ => Family::Explicit,
            };
            let n = n.ok_or_else(|| Failure::input(format!("{} needs --n", family.label())))?;
            let uncertainty = match uncertainty {
                Some(GenUncertainty::Interval) => UncertaintyKind::Interval,
                Some(GenUncertainty::Scenarios) => UncertaintyKind::Scenarios(scenarios),
                None => return Err(Failure::input(format!("{} needs --uncertainty", family.label()))),
            };
            let spec = GenSpec {
                family,
                n,
                k,
                uncertainty,
                seed,
            };
            gen::generate(&spec).map_err(|e| Failure::input(e.to_string()))?
        }
    };
    // the generators only produce valid instances, but say so if that ever breaks
    validate_instance(desc.clone()).map_err(|e| Failure::input(format!("generated instance is invalid: {e}")))?;
    let mut body = serde_json::to_string_pretty(&desc).expect("instances serialize");
    body.push('\n');
    match out {
        Some(path) => std::fs::write(path, body).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct VerifyReport {
    target: String,
    passed: bool,
    summary: Option<verify::InstanceSummary>,
    instances: Option<u64>,
    checks: Vec<verify::Check>,
}

fn cmd_verify(
    instance: Option<&Path>,
    strategies: Option<&Path>,
    count: u64,
    seed: u64,
    tol: f64,
    output: &Output,
) -> Result<(), Failure> {
    let report = match instance {
        Some(path) => {
            let inst = load_instance(path)?;
            let (summary, mut checks) = verify::check_instance(&inst, tol)?;
            if let Some(file) = strategies {
                let text = read_file(file)?;
                let (y, w) = strategy::parse_strategies(&text, &inst)
                    .map_err(|e| Failure::input(format!("{}: {e}", file.display())))?;
                let stated_tol = strategy::stated_number(&text, "tolerance").unwrap_or(tol).max(tol);
                let value = match strategy::stated_number(&text, "value") {
                    Some(v) => {
                        checks.push(verify::Check {
                            name: "stated value = Z_R".to_string(),
                            pass: (v - summary.z_r).abs() <= stated_tol + 1e-9,
                            measured: (v - summary.z_r).abs(),
                            tolerance: stated_tol + 1e-9,
                            detail: format!("stated {v}, recomputed {}", summary.z_r),
                        });
                        v
                    }
                    None => summary.z_r,
                };
                checks.extend(verify::check_strategies(&inst, &y, &w, value, stated_tol + 1e-9));
            }
            VerifyReport {
                target: inst.name().to_string(),
                passed: checks.iter().all(|c| c.pass),
                summary: Some(summary),
                instances: None,
                checks,
            }
        }
        None => {
            let mut runs = Vec::new();
            for i in 0..count {
                let family = Family::ALL[(i % 4) as usize];
                let interval = (i / 4) % 2 == 1;
                let desc = gen::suite_instance(family, interval, seed.wrapping_add(i));
                let label = desc.name.clone();
                let inst = validate_instance(desc).map_err(|e| Failure::input(e.to_string()))?;
                let (_, checks) = verify::check_instance(&inst, tol)?;
                runs.push((label, checks));
            }
            let checks = verify::aggregate(&runs);
            VerifyReport {
                target: format!("random suite, seed {seed}"),
                passed: checks.iter().all(|c| c.pass),
                summary: None,
                instances: Some(count),
                checks,
            }
        }
    };
    write(&report, output)?;
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<String> = report
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("{} ({})", c.name, c.detail))
            .collect();
        Err(Failure {
            code: EXIT_VERIFY,
            message: format!("verification failed: {}", failed.join("; ")),
        })
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve {
            instance,
            model,
            tol,
            max_iter,
            output,
        } => cmd_solve(&instance, model, tol, max_iter, &output),
        Command::Approx {
            instance,
            method,
            certify,
            output,
        } => cmd_approx(&instance, method, certify, &output),
        Command::Decompose {
            instance,
            marginal,
            tol,
            output,
        } => cmd_decompose(&instance, &marginal, tol, &output),
        Command::Simulate {
            instance,
            samples,
            seed,
            strategies,
            output,
        } => cmd_simulate(&instance, samples, seed, strategies.as_deref(), &output),
        Command::Gen {
            family,
            n,
            k,
            uncertainty,
            scenarios,
            seed,
            out,
        } => cmd_gen(family, n, k, uncertainty, scenarios, seed, out.as_deref()),
        Command::Verify {
            instance,
            strategies,
            random_suite: _,
            count,
            seed,
            tol,
            output,
        } => cmd_verify(instance.as_deref(), strategies.as_deref(), count, seed, tol, &output),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
