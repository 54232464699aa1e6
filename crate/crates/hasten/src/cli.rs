//! Command-line front end: evolutions, sweeps, RTF runs, gate checks, and
//! Hamiltonian dumps as CSV or text artifacts.
//!
//! Every CSV written through `--out` gets a sibling `<out>.manifest.json`
//! recording the command, the fully resolved parameters, the tool version,
//! and the wall-clock duration, so any artifact can be reproduced from its
//! manifest alone. Runs taking a `--seed` are bit-reproducible: identical
//! inputs give identical CSV bytes.
//!
//! Exit codes: 0 success or pass, 1 domain-negative (unsatisfiable
//! instance, unreachable threshold, failed verification bound), 2 usage or
//! runtime error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolve::{self, Backend, FidelityTrace, RuntimeSearch, ScheduleConfig};
use crate::hamiltonian;
use crate::msgates::{self, GateOp};
use crate::problem::Ec3Instance;
use crate::rtf::{self, RtfSchedule};
use crate::signals::SignalSpec;

/// Deviation bound for a passing `scale-check`.
const SCALE_CHECK_TOL: f64 = 1e-6;
/// Subspace deviation bound for a passing `ms-verify` row.
const MS_VERIFY_TOL: f64 = 1e-10;
/// Deviation bound for a passing `compile --verify`.
const COMPILE_VERIFY_TOL: f64 = 1e-9;
/// How many times a defaulted step budget is doubled before a norm-drift
/// failure is reported instead of retried.
const MAX_STEP_DOUBLINGS: u32 = 3;

#[derive(Parser)]
#[command(
    name = "hasten",
    version,
    about = "Signal-assisted adiabatic evolution lab for 3-bit exact cover"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Brute-force an instance and print every minimizing assignment
    Solve(SolveArgs),
    /// Integrate the dressed evolution and trace instantaneous fidelity
    Evolve(EvolveArgs),
    /// Run the randomized Trotter formula over k slices
    Rtf(RtfArgs),
    /// Map signal strength to final fidelity or to minimal runtime
    Sweep(SweepArgs),
    /// Check that scaling the Hamiltonian by J cuts the runtime by J
    ScaleCheck(ScaleCheckArgs),
    /// Verify the ancilla-assisted X-string gate identity over a grid
    MsVerify(MsVerifyArgs),
    /// Compile one Trotter slice to an MS gate listing
    Compile(CompileArgs),
    /// Print the Pauli tables of both Hamiltonians with exact fractions
    DumpHamiltonian(DumpArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Instance document path, or @paper for the built-in 4-bit instance
    #[arg(long, default_value = "@paper")]
    instance: String,
}

#[derive(Args)]
struct EvolveArgs {
    /// Instance document path, or @paper for the built-in 4-bit instance
    #[arg(long, default_value = "@paper")]
    instance: String,
    /// Total runtime
    #[arg(long = "T", value_name = "TIME")]
    total_time: f64,
    /// Sub-step count; defaults to a budget sized for the signal
    #[arg(long)]
    steps: Option<usize>,
    /// Fast-signal syntax: zero, pulse:s=..,delta=..[,duty=..],
    /// cos2:a=..,w=.., sin2:a=..,w=.., randhold:lo=..,hi=..,delta=..,seed=..
    #[arg(long, default_value = "zero")]
    signal: String,
    /// Integration backend: dense or split
    #[arg(long, default_value = "dense")]
    backend: String,
    /// Record every Nth grid node (first and last always kept)
    #[arg(long, default_value_t = 1, value_name = "N")]
    record_every: usize,
    /// Write the fidelity trace CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RtfArgs {
    /// Instance document path, or @paper for the built-in 4-bit instance
    #[arg(long, default_value = "@paper")]
    instance: String,
    /// Total scheduled runtime (k times the nominal slice length)
    #[arg(long = "T", value_name = "TIME")]
    total_time: f64,
    /// Slice count
    #[arg(long)]
    k: usize,
    /// Interval rule: fixed, or uniform:lo=<f>,hi=<f> in multiples of tau
    #[arg(long, default_value = "fixed")]
    rule: String,
    /// Seed for the uniform rule's interval draws
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Record every Nth slice boundary (first and last always kept)
    #[arg(long, default_value_t = 1, value_name = "N")]
    record_every: usize,
    /// Write the fidelity trace CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Instance document path, or @paper for the built-in 4-bit instance
    #[arg(long, default_value = "@paper")]
    instance: String,
    /// Signal family with the strength slot left open, e.g.
    /// pulse:delta=0.08,duty=0.5 or cos2:w=10 or sin2:w=10
    #[arg(long)]
    family: String,
    /// Comma-separated strength values substituted into the family
    #[arg(long)]
    strengths: String,
    /// Fixed runtime; emits one (s, final_fidelity) row per strength
    #[arg(long = "T", value_name = "TIME")]
    total_time: Option<f64>,
    /// Fidelity threshold; emits one (s, t_star) row per strength
    #[arg(long, conflicts_with = "total_time")]
    threshold: Option<f64>,
    /// Runtime search range for threshold mode
    #[arg(long, default_value = "1,240", value_name = "LO,HI")]
    t_range: String,
    /// Sub-step count for fixed-runtime rows; defaults per signal
    #[arg(long)]
    steps: Option<usize>,
    /// Worker thread count (default: available parallelism)
    #[arg(long)]
    jobs: Option<usize>,
    /// Write the sweep table CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScaleCheckArgs {
    /// Instance document path, or @paper for the built-in 4-bit instance
    #[arg(long, default_value = "@paper")]
    instance: String,
    /// Scale factor applied to the Hamiltonian
    #[arg(long = "J", value_name = "FACTOR")]
    scale: f64,
    /// Reference runtime; the scaled run lasts T0/J
    #[arg(long = "T0", value_name = "TIME")]
    t0: f64,
    /// Sub-step count shared by both runs; defaults per runtime
    #[arg(long)]
    steps: Option<usize>,
}

#[derive(Args)]
struct MsVerifyArgs {
    /// System sizes to check, as a single value or an inclusive lo-hi range
    #[arg(long, default_value = "1-5", value_name = "N|LO-HI")]
    n: String,
    /// Comma-separated phase angles
    #[arg(long, default_value = "0.3,1.5707963267948966,1.7")]
    phi: String,
    /// Also print the three-op verification circuit for each system size
    #[arg(long)]
    listing: bool,
}

#[derive(Args)]
struct CompileArgs {
    /// Instance document path, or @paper for the built-in 4-bit instance
    #[arg(long, default_value = "@paper")]
    instance: String,
    /// Slice index, 1-based
    #[arg(long)]
    j: usize,
    /// Slice count
    #[arg(long)]
    k: usize,
    /// Duration of this slice
    #[arg(long)]
    tau: f64,
    /// Compare the compiled unitary against the dense slice exponential
    #[arg(long)]
    verify: bool,
    /// Write the gate listing here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DumpArgs {
    /// Instance document path, or @paper for the built-in 4-bit instance
    #[arg(long, default_value = "@paper")]
    instance: String,
}

/// Written next to every `--out` artifact; enough to re-run the command.
#[derive(Serialize)]
struct RunManifest {
    command: String,
    parameters: serde_json::Value,
    version: String,
    duration_seconds: f64,
}

/// Entry point for the binary. Parses `std::env` arguments and returns the
/// process exit code.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

/// Same as [`run`] but over explicit arguments, for tests.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            // clap treats --help and --version as "errors" that still exit 0
            return if err.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Solve(args) => cmd_solve(args),
        Command::Evolve(args) => cmd_evolve(args),
        Command::Rtf(args) => cmd_rtf(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::ScaleCheck(args) => cmd_scale_check(args),
        Command::MsVerify(args) => cmd_ms_verify(args),
        Command::Compile(args) => cmd_compile(args),
        Command::DumpHamiltonian(args) => cmd_dump_hamiltonian(args),
    }
}

fn cmd_solve(args: SolveArgs) -> Result<i32> {
    let inst = Ec3Instance::load(&args.instance)?;
    let outcome = inst.brute_force_solutions()?;
    println!("energy={}", outcome.min_energy);
    for a in &outcome.minimizers {
        println!("{a}");
    }
    Ok(if outcome.satisfiable() { 0 } else { 1 })
}

fn cmd_evolve(args: EvolveArgs) -> Result<i32> {
    let started = Instant::now();
    let inst = Ec3Instance::load(&args.instance)?;
    let signal: SignalSpec = args.signal.parse()?;
    let backend: Backend = args.backend.parse()?;

    let mut steps = args
        .steps
        .unwrap_or_else(|| evolve::default_steps(args.total_time, &signal));
    let auto_steps = args.steps.is_none();
    let mut doublings = 0;
    let trace = loop {
        let cfg = ScheduleConfig::new(
            args.total_time,
            steps,
            signal.clone(),
            backend,
            args.record_every,
        )?;
        match evolve::propagate(&inst, &cfg) {
            Ok(trace) => break trace,
            // a defaulted budget is allowed to double itself a few times
            // before a drift failure is surfaced
            Err(Error::Numeric(msg)) if auto_steps && doublings < MAX_STEP_DOUBLINGS => {
                eprintln!("{msg}; retrying with {} steps", steps * 2);
                steps *= 2;
                doublings += 1;
            }
            Err(err) => return Err(err),
        }
    };

    emit_trace(&trace, args.out.as_deref())?;
    report(
        args.out.is_some(),
        &format!("final_fidelity={}", trace.final_fidelity),
    );
    if let Some(out) = &args.out {
        let parameters = serde_json::json!({
            "instance": args.instance,
            "T": args.total_time,
            "steps": steps,
            "signal": signal.to_string(),
            "backend": backend.name(),
            "record_every": args.record_every,
            "out": out.display().to_string(),
        });
        write_manifest(out, "evolve", parameters, started)?;
    }
    Ok(0)
}

fn cmd_rtf(args: RtfArgs) -> Result<i32> {
    let started = Instant::now();
    let inst = Ec3Instance::load(&args.instance)?;
    let sched = parse_rule(&args.rule, args.total_time, args.k, args.seed)?;
    let trace = rtf::rtf_run(&inst, &sched, args.record_every)?;

    emit_trace(&trace, args.out.as_deref())?;
    report(
        args.out.is_some(),
        &format!("final_fidelity={}", trace.final_fidelity),
    );
    if let Some(out) = &args.out {
        let parameters = serde_json::json!({
            "instance": args.instance,
            "T": args.total_time,
            "k": args.k,
            "rule": args.rule,
            "seed": args.seed,
            "record_every": args.record_every,
            "scheduled_duration": sched.scheduled_duration(),
            "out": out.display().to_string(),
        });
        write_manifest(out, "rtf", parameters, started)?;
    }
    Ok(0)
}

fn cmd_sweep(args: SweepArgs) -> Result<i32> {
    let started = Instant::now();
    let inst = Ec3Instance::load(&args.instance)?;
    let strengths = parse_f64_list(&args.strengths, "--strengths")?;
    if strengths.is_empty() {
        return Err(Error::Validation("--strengths must list at least one value".into()));
    }
    // validate every signal up front so a bad family fails before any work
    for &s in &strengths {
        family_signal(&args.family, s)?;
    }

    enum Row {
        Fixed { s: f64, fidelity: f64 },
        Star { s: f64, t_star: f64, fidelity: f64 },
        Unreachable { s: f64, best_fidelity: f64 },
    }

    let rows: Vec<Row> = match (args.total_time, args.threshold) {
        (Some(total_time), None) => with_pool(args.jobs, || {
            use rayon::prelude::*;
            strengths
                .par_iter()
                .map(|&s| {
                    let signal = family_signal(&args.family, s)?;
                    let steps = args
                        .steps
                        .unwrap_or_else(|| evolve::default_steps(total_time, &signal));
                    let cfg = ScheduleConfig::new(
                        total_time,
                        steps,
                        signal,
                        Backend::DenseMidpoint,
                        usize::MAX,
                    )?;
                    let trace = evolve::propagate(&inst, &cfg)?;
                    Ok(Row::Fixed {
                        s,
                        fidelity: trace.final_fidelity,
                    })
                })
                .collect::<Result<Vec<Row>>>()
        })??,
        (None, Some(threshold)) => {
            let t_range = parse_range_pair(&args.t_range, "--t-range")?;
            with_pool(args.jobs, || {
                use rayon::prelude::*;
                strengths
                    .par_iter()
                    .map(|&s| {
                        let signal = family_signal(&args.family, s)?;
                        let search = evolve::min_runtime_for_threshold(
                            &inst, &signal, threshold, t_range,
                        )?;
                        Ok(match search {
                            RuntimeSearch::Found { t_star, fidelity } => {
                                Row::Star { s, t_star, fidelity }
                            }
                            RuntimeSearch::NotFound { best_fidelity, .. } => {
                                Row::Unreachable { s, best_fidelity }
                            }
                        })
                    })
                    .collect::<Result<Vec<Row>>>()
            })??
        }
        _ => {
            return Err(Error::Validation(
                "sweep needs exactly one mode flag: --T for fixed-runtime rows \
                 or --threshold for minimal-runtime rows"
                    .into(),
            ))
        }
    };

    let mut csv = String::new();
    let mut unreachable = 0usize;
    if args.total_time.is_some() {
        csv.push_str("s,final_fidelity\n");
    } else {
        csv.push_str("s,t_star,final_fidelity\n");
    }
    for row in &rows {
        match *row {
            Row::Fixed { s, fidelity } => {
                csv.push_str(&format!("{s:.12e},{fidelity:.12e}\n"));
            }
            Row::Star { s, t_star, fidelity } => {
                csv.push_str(&format!("{s:.12e},{t_star:.12e},{fidelity:.12e}\n"));
            }
            Row::Unreachable { s, best_fidelity } => {
                unreachable += 1;
                csv.push_str(&format!("{s:.12e},unreachable,{best_fidelity:.12e}\n"));
            }
        }
    }

    match &args.out {
        Some(path) => fs::write(path, &csv)?,
        None => io::stdout().write_all(csv.as_bytes())?,
    }
    if unreachable > 0 {
        eprintln!(
            "{unreachable} of {} strengths cannot reach the threshold in the search range",
            rows.len()
        );
    }
    if let Some(out) = &args.out {
        let parameters = serde_json::json!({
            "instance": args.instance,
            "family": args.family,
            "strengths": strengths,
            "T": args.total_time,
            "threshold": args.threshold,
            "t_range": args.t_range,
            "steps": args.steps,
            "jobs": args.jobs,
            "out": out.display().to_string(),
        });
        write_manifest(out, "sweep", parameters, started)?;
    }
    Ok(if unreachable > 0 { 1 } else { 0 })
}

fn cmd_scale_check(args: ScaleCheckArgs) -> Result<i32> {
    let inst = Ec3Instance::load(&args.instance)?;
    let steps = args
        .steps
        .unwrap_or_else(|| evolve::default_steps(args.t0, &SignalSpec::Zero));
    let check = evolve::scale_check(&inst, args.scale, args.t0, steps)?;
    println!("max_deviation={:.3e}", check.max_deviation);
    println!("final_fidelity={}", check.final_fidelity);
    println!("final_fidelity_scaled={}", check.final_fidelity_scaled);
    Ok(if check.max_deviation <= SCALE_CHECK_TOL {
        0
    } else {
        1
    })
}

fn cmd_ms_verify(args: MsVerifyArgs) -> Result<i32> {
    let (n_lo, n_hi) = parse_n_range(&args.n)?;
    let phis = parse_f64_list(&args.phi, "--phi")?;
    if phis.is_empty() {
        return Err(Error::Validation("--phi must list at least one angle".into()));
    }

    let mut all_pass = true;
    for n in n_lo..=n_hi {
        if args.listing {
            for line in verification_listing(n, phis[0]) {
                println!("{line}");
            }
        }
        for &phi in &phis {
            let (global, subspace) = msgates::verify_ms_identity(phi, n)?;
            let pass = subspace <= MS_VERIFY_TOL;
            all_pass &= pass;
            println!(
                "n={n} phi={phi} global={global:.3e} subspace={subspace:.3e} {}",
                if pass { "pass" } else { "FAIL" }
            );
        }
    }
    Ok(if all_pass { 0 } else { 1 })
}

fn cmd_compile(args: CompileArgs) -> Result<i32> {
    let started = Instant::now();
    let inst = Ec3Instance::load(&args.instance)?;
    let seq = msgates::compile_slice(&inst, args.j, args.k, args.tau)?;
    let listing = seq.listing();
    match &args.out {
        Some(path) => fs::write(path, &listing)?,
        None => io::stdout().write_all(listing.as_bytes())?,
    }
    if let Some(out) = &args.out {
        let parameters = serde_json::json!({
            "instance": args.instance,
            "j": args.j,
            "k": args.k,
            "tau": args.tau,
            "out": out.display().to_string(),
        });
        write_manifest(out, "compile", parameters, started)?;
    }
    if args.verify {
        let deviation = msgates::compiled_slice_deviation(&inst, args.j, args.k, args.tau)?;
        eprintln!("deviation={deviation:.3e}");
        if deviation > COMPILE_VERIFY_TOL {
            return Ok(1);
        }
    }
    Ok(0)
}

fn cmd_dump_hamiltonian(args: DumpArgs) -> Result<i32> {
    let inst = Ec3Instance::load(&args.instance)?;
    let hp = hamiltonian::hp_to_pauli(&inst)?;
    let hb = hamiltonian::build_hb(&inst);
    print!("H_P:\n{}", hp.format_table());
    print!("\nH_B:\n{}", hb.format_table());
    Ok(0)
}

/// Writes a trace to `out`, or to stdout when no path was given.
fn emit_trace(trace: &FidelityTrace, out: Option<&Path>) -> Result<()> {
    let mut buf = Vec::new();
    trace.to_csv(&mut buf)?;
    match out {
        Some(path) => fs::write(path, &buf)?,
        None => io::stdout().write_all(&buf)?,
    }
    Ok(())
}

/// Prints a one-line run summary. When the CSV went to stdout the summary
/// moves to stderr so the CSV stays machine-readable.
fn report(csv_went_to_file: bool, line: &str) {
    if csv_went_to_file {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_os_string();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn write_manifest(
    out: &Path,
    command: &str,
    parameters: serde_json::Value,
    started: Instant,
) -> Result<()> {
    let manifest = RunManifest {
        command: command.into(),
        parameters,
        version: env!("CARGO_PKG_VERSION").into(),
        duration_seconds: started.elapsed().as_secs_f64(),
    };
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    fs::write(manifest_path(out), text)?;
    Ok(())
}

/// Builds the RTF schedule named by `rule`.
fn parse_rule(rule: &str, total_time: f64, k: usize, seed: u64) -> Result<RtfSchedule> {
    if rule == "fixed" {
        return RtfSchedule::fixed(total_time, k);
    }
    if let Some(rest) = rule.strip_prefix("uniform:") {
        let mut lo = None;
        let mut hi = None;
        for item in rest.split(',') {
            let (key, value) = item.split_once('=').ok_or_else(|| {
                Error::Parse(format!("expected key=value in interval rule, got {item:?}"))
            })?;
            let slot = match key.trim() {
                "lo" => &mut lo,
                "hi" => &mut hi,
                other => {
                    return Err(Error::Parse(format!(
                        "unknown interval rule key {other:?}; expected lo, hi"
                    )))
                }
            };
            if slot.is_some() {
                return Err(Error::Parse(format!("duplicate interval rule key {key:?}")));
            }
            *slot = Some(parse_f64(value.trim(), key)?);
        }
        let lo = lo.ok_or_else(|| Error::Parse("interval rule uniform needs lo=<f>".into()))?;
        let hi = hi.ok_or_else(|| Error::Parse("interval rule uniform needs hi=<f>".into()))?;
        return RtfSchedule::uniform(total_time, k, lo, hi, seed);
    }
    Err(Error::Parse(format!(
        "unknown interval rule {rule:?}; expected fixed or uniform:lo=<f>,hi=<f>"
    )))
}

/// Substitutes strength `s` into a family spec whose strength key is left
/// out, e.g. `pulse:delta=0.08` with s=2 becomes `pulse:s=2,delta=0.08`.
fn family_signal(family: &str, s: f64) -> Result<SignalSpec> {
    let (head, rest) = match family.split_once(':') {
        Some((head, rest)) => (head, Some(rest)),
        None => (family, None),
    };
    let key = match head {
        "pulse" => "s",
        "cos2" | "sin2" => "a",
        other => {
            return Err(Error::Parse(format!(
                "unknown signal family {other:?}; expected pulse, cos2, or sin2"
            )))
        }
    };
    let mut full = format!("{head}:{key}={s}");
    if let Some(rest) = rest {
        if !rest.is_empty() {
            full.push(',');
            full.push_str(rest);
        }
    }
    full.parse()
}

fn parse_f64(text: &str, what: &str) -> Result<f64> {
    text.parse::<f64>()
        .map_err(|_| Error::Parse(format!("expected a number for {what}, got {text:?}")))
}

fn parse_f64_list(text: &str, flag: &str) -> Result<Vec<f64>> {
    text.split(',')
        .filter(|item| !item.trim().is_empty())
        .map(|item| parse_f64(item.trim(), flag))
        .collect()
}

fn parse_range_pair(text: &str, flag: &str) -> Result<(f64, f64)> {
    let (lo, hi) = text
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("expected LO,HI for {flag}, got {text:?}")))?;
    Ok((parse_f64(lo.trim(), flag)?, parse_f64(hi.trim(), flag)?))
}

fn parse_n_range(text: &str) -> Result<(usize, usize)> {
    let parse_one = |part: &str| {
        part.trim()
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("expected an integer in --n, got {part:?}")))
    };
    let (lo, hi) = match text.split_once('-') {
        Some((lo, hi)) => (parse_one(lo)?, parse_one(hi)?),
        None => {
            let n = parse_one(text)?;
            (n, n)
        }
    };
    if lo == 0 || hi < lo {
        return Err(Error::Validation(format!(
            "--n range must satisfy 1 <= lo <= hi, got {lo}-{hi}"
        )));
    }
    Ok((lo, hi))
}

/// The three-op circuit whose product realizes the X-string identity; the
/// listing is what an ion-trap run of the check would execute.
fn verification_listing(n: usize, phi: f64) -> Vec<String> {
    use std::f64::consts::FRAC_PI_2;
    let qubits: Vec<usize> = (0..=n).collect();
    let (axis, sign) = msgates::anc_rule(n);
    let ops = [
        GateOp::Ms {
            theta: FRAC_PI_2,
            phi: 0.0,
            qubits: qubits.clone(),
        },
        GateOp::AncRot {
            axis,
            angle: sign * phi,
        },
        GateOp::Ms {
            theta: -FRAC_PI_2,
            phi: 0.0,
            qubits,
        },
    ];
    ops.iter().map(|op| op.listing_line()).collect()
}

/// Runs `f` on a dedicated pool of `jobs` threads, or on the global pool
/// when no count is given. Row order never depends on scheduling.
fn with_pool<F, R>(jobs: Option<usize>, f: F) -> Result<R>
where
    F: FnOnce() -> R + Send,
    R: Send,
{
    match jobs {
        None => Ok(f()),
        Some(0) => Err(Error::Validation("--jobs must be positive".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Validation(format!("cannot build worker pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_parsing() {
        let sched = parse_rule("fixed", 20.0, 4, 0).unwrap();
        assert_eq!(sched.k(), 4);
        assert!(sched.intervals().iter().all(|&t| (t - 5.0).abs() < 1e-15));

        let sched = parse_rule("uniform:lo=2,hi=3", 20.0, 4, 7).unwrap();
        for &t in sched.intervals() {
            assert!((10.0..=15.0).contains(&t));
        }

        assert!(parse_rule("uniform:lo=2", 20.0, 4, 0).is_err());
        assert!(parse_rule("uniform:lo=2,lo=3,hi=4", 20.0, 4, 0).is_err());
        assert!(parse_rule("poisson", 20.0, 4, 0).is_err());
    }

    #[test]
    fn family_substitution() {
        let sig = family_signal("pulse:delta=0.08,duty=0.5", 2.0).unwrap();
        assert_eq!(sig.sample(0.01), 2.0);
        assert_eq!(sig.sample(0.05), 0.0);

        let sig = family_signal("cos2:w=10", 2.0).unwrap();
        assert!((sig.sample(0.0) - 2.0).abs() < 1e-15);

        assert!(family_signal("zero", 1.0).is_err());
        // strength key duplicated by the family spec itself
        assert!(family_signal("pulse:s=1,delta=0.08", 2.0).is_err());
    }

    #[test]
    fn range_parsers() {
        assert_eq!(parse_n_range("1-5").unwrap(), (1, 5));
        assert_eq!(parse_n_range("3").unwrap(), (3, 3));
        assert!(parse_n_range("0-2").is_err());
        assert!(parse_n_range("5-1").is_err());
        assert_eq!(parse_range_pair("1,240", "--t-range").unwrap(), (1.0, 240.0));
        assert_eq!(parse_f64_list("0,0.5,1", "--strengths").unwrap(), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn manifest_path_appends_suffix() {
        assert_eq!(
            manifest_path(Path::new("trace.csv")),
            PathBuf::from("trace.csv.manifest.json")
        );
    }

    #[test]
    fn verification_listing_shape() {
        let lines = verification_listing(2, 0.25);
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("MS theta=1.57"));
        assert_eq!(lines[1], "ANC axis=z angle=0.25");
        assert!(lines[2].starts_with("MS theta=-1.57"));
    }
}
