//! `qpd` -- implementability certificates, quasiprobability decompositions,
//! and error-mitigation runs from the command line.
//!
//! Exit codes are stable: 0 success, 1 verification failure, 2 malformed
//! input file, 3 domain error (non-HPTP map, invalid state or parameters),
//! 4 solver failure, 5 non-invertible channel.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use qpd::channel::DEFAULT_COND_LIMIT;
use qpd::implementability::{
    canonical_decomposition, nu, optimal_decomposition, trace_norm_bounds,
};
use qpd::mitigation::{self, RunOptions};
use qpd::verify::{run_suite, Suite};

use qpd_cli::formats::{
    self, load_json, ChannelFile, DecompositionFile, ObservableFile, StateFile,
};
use qpd_cli::{CliError, PARSE, VERIFY_FAILURE};

#[derive(Parser)]
#[command(
    name = "qpd",
    about = "Physical implementability of linear maps and quasiprobability error mitigation",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute nu, its certificate summary, and trace-norm bounds for a
    /// channel-spec file.
    Nu {
        /// Channel spec (JSON).
        channel: PathBuf,
        /// Interior-point tolerance.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Emit line-delimited JSON instead of human-readable text.
        #[arg(long)]
        json: bool,
    },
    /// Compute a quasiprobability decomposition and optionally write it out.
    Decompose {
        /// Channel spec (JSON).
        channel: PathBuf,
        /// Use the always-feasible decomposition through the completely
        /// depolarizing channel instead of the SDP-optimal one.
        #[arg(long, conflicts_with = "optimal")]
        canonical: bool,
        /// Use the SDP-optimal decomposition (default).
        #[arg(long)]
        optimal: bool,
        /// Write the decomposition to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Plan and run the error-mitigation sampling protocol.
    Mitigate {
        /// Noise channel spec (JSON); must be CPTP and invertible.
        noise: PathBuf,
        /// Ideal state file (ket or density matrix).
        state: PathBuf,
        /// Diagonal observable file.
        observable: PathBuf,
        /// Target estimation precision.
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        /// Target failure probability.
        #[arg(long = "eps-fail", default_value_t = 0.05)]
        eps_fail: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Override the planned shot count.
        #[arg(long)]
        shots: Option<u64>,
        /// Keep per-shot records in the report.
        #[arg(long)]
        record_shots: bool,
        /// Execute shots on a thread pool (identical output).
        #[arg(long)]
        parallel: bool,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Run the property-verification suites.
    Verify {
        /// One of: properties, analytic, duality, mitigation, all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 20240717)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Serialize)]
struct NuOutput {
    format: u32,
    nu: f64,
    two_pow_nu: f64,
    p1: f64,
    p2: f64,
    duality_gap: f64,
    trace_norm_lower: f64,
    trace_norm_upper: f64,
}

fn cmd_nu(channel: PathBuf, tol: f64, json: bool) -> Result<(), CliError> {
    let spec: ChannelFile = load_json(&channel)?;
    let map = spec.to_map()?;
    let cert = nu(&map, tol).map_err(CliError::from_core)?;
    let (lower, upper) = trace_norm_bounds(&map).map_err(CliError::from_core)?;
    let out = NuOutput {
        format: formats::FORMAT_VERSION,
        nu: cert.nu,
        two_pow_nu: cert.cost(),
        p1: cert.p1,
        p2: cert.p2,
        duality_gap: cert.gap,
        trace_norm_lower: lower,
        trace_norm_upper: upper,
    };
    if json {
        println!("{}", serde_json::to_string(&out).expect("serializable"));
    } else {
        println!("nu                = {:.9}", out.nu);
        println!("2^nu              = {:.9}", out.two_pow_nu);
        println!("p1                = {:.9}", out.p1);
        println!("p2                = {:.9}", out.p2);
        println!("duality gap       = {:.3e}", out.duality_gap);
        println!(
            "trace-norm bounds = [{:.9}, {:.9}]",
            out.trace_norm_lower, out.trace_norm_upper
        );
    }
    Ok(())
}

#[derive(Serialize)]
struct DecomposeOutput {
    format: u32,
    method: &'static str,
    nu: f64,
    total_cost: f64,
    etas: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    written_to: Option<String>,
}

fn cmd_decompose(
    channel: PathBuf,
    canonical: bool,
    out: Option<PathBuf>,
    tol: f64,
    json: bool,
) -> Result<(), CliError> {
    let spec: ChannelFile = load_json(&channel)?;
    let map = spec.to_map()?;
    let (method, dec) = if canonical {
        (
            "canonical",
            canonical_decomposition(&map).map_err(CliError::from_core)?,
        )
    } else {
        let (_, dec) = optimal_decomposition(&map, tol).map_err(CliError::from_core)?;
        ("optimal", dec)
    };
    let file = DecompositionFile::from_decomposition(method, &dec);
    if let Some(path) = &out {
        let text = serde_json::to_string_pretty(&file).expect("serializable");
        std::fs::write(path, text)
            .map_err(|e| CliError::new(PARSE, format!("cannot write {}: {e}", path.display())))?;
    }
    let output = DecomposeOutput {
        format: formats::FORMAT_VERSION,
        method,
        nu: file.nu,
        total_cost: file.total_cost,
        etas: file.terms.iter().map(|t| t.eta).collect(),
        written_to: out.as_ref().map(|p| p.display().to_string()),
    };
    if json {
        println!("{}", serde_json::to_string(&output).expect("serializable"));
    } else {
        println!("method     = {}", output.method);
        println!("nu         = {:.9}", output.nu);
        println!("total cost = {:.9}", output.total_cost);
        println!("etas       = {:?}", output.etas);
        if let Some(path) = &output.written_to {
            println!("written to = {path}");
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct MitigatePlanOutput {
    nu: f64,
    total_cost: f64,
    planned_shots: u64,
    shots_used: u64,
    underplanned: bool,
    delta: f64,
    eps_fail: f64,
}

#[derive(Serialize)]
struct MitigateOutput {
    format: u32,
    plan: MitigatePlanOutput,
    estimate: f64,
    baseline_noisy: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact_mean: Option<f64>,
    seed: u64,
    negative_probability_events: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    per_shot: Option<Vec<mitigation::ShotRecord>>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_mitigate(
    noise: PathBuf,
    state: PathBuf,
    observable: PathBuf,
    delta: f64,
    eps_fail: f64,
    seed: u64,
    shots: Option<u64>,
    record_shots: bool,
    parallel: bool,
    tol: f64,
    json: bool,
) -> Result<(), CliError> {
    let noise_spec: ChannelFile = load_json(&noise)?;
    let noise = noise_spec.to_map()?;
    let rho = load_json::<StateFile>(&state)?.to_density()?;
    let obs = load_json::<ObservableFile>(&observable)?.to_observable()?;

    let inverse = noise
        .inverse(DEFAULT_COND_LIMIT)
        .map_err(CliError::from_core)?;
    let (_, dec) = optimal_decomposition(&inverse, tol).map_err(CliError::from_core)?;
    let mut plan = mitigation::plan(dec, delta, eps_fail).map_err(CliError::from_core)?;
    let planned = plan.shots;
    if let Some(requested) = shots {
        plan.shots = requested;
    }

    let options = RunOptions {
        record_shots,
        parallel,
    };
    let report =
        mitigation::run(&rho, &noise, &obs, &plan, seed, options).map_err(CliError::from_core)?;
    let baseline =
        mitigation::noisy_expectation(&rho, &noise, &obs).map_err(CliError::from_core)?;
    let exact = if obs.n_qubits() <= mitigation::ENUMERATION_CAP {
        Some(
            mitigation::exact_estimator_mean(&rho, &noise, &obs, &plan.decomposition)
                .map_err(CliError::from_core)?,
        )
    } else {
        None
    };

    let output = MitigateOutput {
        format: formats::FORMAT_VERSION,
        plan: MitigatePlanOutput {
            nu: plan.nu,
            total_cost: plan.decomposition.total_cost(),
            planned_shots: planned,
            shots_used: report.shots,
            underplanned: report.shots < planned,
            delta,
            eps_fail,
        },
        estimate: report.estimate,
        baseline_noisy: baseline,
        exact_mean: exact,
        seed: report.seed,
        negative_probability_events: report.negative_probability_events,
        per_shot: report.per_shot,
    };
    if json {
        println!("{}", serde_json::to_string(&output).expect("serializable"));
    } else {
        println!("nu              = {:.9}", output.plan.nu);
        println!("2^nu            = {:.9}", output.plan.total_cost);
        println!(
            "shots           = {} (planned {}){}",
            output.plan.shots_used,
            output.plan.planned_shots,
            if output.plan.underplanned {
                "  [UNDERPLANNED]"
            } else {
                ""
            }
        );
        println!("estimate        = {:.9}", output.estimate);
        println!("noisy baseline  = {:.9}", output.baseline_noisy);
        if let Some(exact) = output.exact_mean {
            println!("exact mean      = {:.9}", exact);
        }
        if output.negative_probability_events > 0 {
            println!(
                "warning: {} clamped negative probabilities",
                output.negative_probability_events
            );
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct VerifySummary {
    suite: &'static str,
    total: usize,
    failed: usize,
}

fn cmd_verify(suite: String, seed: u64, json: bool) -> Result<(), CliError> {
    let suite = Suite::parse(&suite).map_err(|e| CliError::new(PARSE, e.to_string()))?;
    let checks = run_suite(suite, seed).map_err(CliError::from_core)?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    if json {
        for check in &checks {
            println!("{}", serde_json::to_string(check).expect("serializable"));
        }
        let summary = VerifySummary {
            suite: "summary",
            total: checks.len(),
            failed,
        };
        println!("{}", serde_json::to_string(&summary).expect("serializable"));
    } else {
        for check in &checks {
            println!(
                "{} {}/{} residual={:.3e} threshold={:.1e}{}",
                if check.passed { "PASS" } else { "FAIL" },
                check.suite,
                check.name,
                check.residual,
                check.threshold,
                if check.detail.is_empty() {
                    String::new()
                } else {
                    format!("  ({})", check.detail)
                }
            );
        }
        println!("{} checks, {} failed", checks.len(), failed);
    }
    if failed > 0 {
        return Err(CliError::new(
            VERIFY_FAILURE,
            format!("{failed} properties failed"),
        ));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Nu { channel, tol, json } => cmd_nu(channel, tol, json),
        Command::Decompose {
            channel,
            canonical,
            optimal: _,
            out,
            tol,
            json,
        } => cmd_decompose(channel, canonical, out, tol, json),
        Command::Mitigate {
            noise,
            state,
            observable,
            delta,
            eps_fail,
            seed,
            shots,
            record_shots,
            parallel,
            tol,
            json,
        } => cmd_mitigate(
            noise,
            state,
            observable,
            delta,
            eps_fail,
            seed,
            shots,
            record_shots,
            parallel,
            tol,
            json,
        ),
        Command::Verify { suite, seed, json } => cmd_verify(suite, seed, json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}
