//! `qmin`: experiment runner, oracle inspector, complexity tables and
//! property sweeps for the quantum minimum-search simulator.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qmin::experiment::{
    run_experiment, Algorithm, DatasetSource, ExperimentConfig, ExperimentReport,
};
use qmin::metrics::{complexity_curve, curve_to_csv, M0Rule};
use qmin::minsearch::TmaxVariant;
use qmin::oraclesynth::synthesize_oracle;
use qmin::verify::{verify_engines, verify_oracle, verify_sure_success, PropertyReport};
use qmin::{ClampPolicy, Engine, Error, SearchParams};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "qmin",
    version,
    about = "Sure-success quantum minimum search simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded minimum-search trials and write a JSON report.
    Run(RunArgs),
    /// Print the threshold-oracle block decomposition as JSON.
    Synth(SynthArgs),
    /// Tabulate the analytic query complexity against the DHA bound.
    Complexity(ComplexityArgs),
    /// Run the exhaustive and randomised property sweeps.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value = "oqmsa", value_parser = parse_from_str::<Algorithm>)]
    algorithm: Algorithm,
    /// Dataset file (.csv or .json) or `full:<n>` for every code of an n-qubit register.
    #[arg(long)]
    dataset: String,
    /// Register width; inferred from the largest value when omitted.
    #[arg(long)]
    n_qubits: Option<u32>,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1.2)]
    lambda: f64,
    #[arg(long, default_value_t = 1.0 / 9.0)]
    ratio_threshold: f64,
    #[arg(long, default_value = "clamp", value_parser = parse_from_str::<ClampPolicy>)]
    clamp_policy: ClampPolicy,
    #[arg(long, default_value = "alg1", value_parser = parse_from_str::<TmaxVariant>)]
    tmax_variant: TmaxVariant,
    #[arg(long, default_value = "auto", value_parser = parse_from_str::<Engine>)]
    engine: Engine,
    /// Worker threads; results do not depend on it.
    #[arg(long, env = "QMIN_JOBS")]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = RunFormat::Json)]
    format: RunFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Write one JSON line per trial (full round trace) to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RunFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct SynthArgs {
    /// Threshold d'; codes 0..=d' are marked.
    #[arg(long = "d")]
    d_prime: u64,
    #[arg(long = "n")]
    n_qubits: u32,
    #[arg(long, default_value_t = std::f64::consts::PI, allow_negative_numbers = true)]
    phi: f64,
}

#[derive(Args)]
struct ComplexityArgs {
    #[arg(long = "from")]
    n_min: u32,
    #[arg(long = "to")]
    n_max: u32,
    #[arg(long, default_value = "half", value_parser = parse_from_str::<M0Rule>)]
    m0: M0Rule,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    format: TableFormat,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum, default_value_t = Suite::All)]
    suite: Suite,
    /// Seed for the randomised engine comparison.
    #[arg(long, default_value_t = 2024)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Oracle,
    Suresuccess,
    Engines,
    All,
}

fn parse_from_str<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Synth(args) => cmd_synth(args),
        Command::Complexity(args) => cmd_complexity(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", json!({"error": e.kind(), "message": e.to_string()}));
            ExitCode::from(2)
        }
    }
}

fn emit(text: &str, output: Option<&PathBuf>) -> qmin::Result<()> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_run(args: RunArgs) -> qmin::Result<ExitCode> {
    let config = ExperimentConfig {
        algorithm: args.algorithm,
        dataset: DatasetSource::parse(&args.dataset)?,
        n_qubits: args.n_qubits,
        trials: args.trials,
        seed: args.seed,
        params: SearchParams {
            lambda: args.lambda,
            ratio_threshold: args.ratio_threshold,
            seed: args.seed,
            clamp_policy: args.clamp_policy,
            tmax_variant: args.tmax_variant,
            engine: args.engine,
        },
        jobs: args.jobs,
    };
    let out = run_experiment(&config)?;

    if let Some(path) = &args.trace {
        let mut lines = String::new();
        for record in &out.records {
            let line = serde_json::to_string(record).expect("plain data serializes");
            lines.push_str(&line);
            lines.push('\n');
        }
        fs::write(path, lines)?;
    }

    let text = match args.format {
        RunFormat::Json => out.report.to_json() + "\n",
        RunFormat::Csv => summary_csv(&out.report),
    };
    emit(&text, args.output.as_ref())?;
    Ok(ExitCode::SUCCESS)
}

fn summary_csv(report: &ExperimentReport) -> String {
    let mut out =
        String::from("algorithm,success_count,trials,success_rate,mean_queries,stddev_queries\n");
    for s in &report.results {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            s.algorithm,
            s.success_count,
            s.trials,
            s.success_rate,
            s.mean_queries,
            s.stddev_queries
        )
        .expect("writing to a String");
    }
    out
}

fn cmd_synth(args: SynthArgs) -> qmin::Result<ExitCode> {
    let plan = synthesize_oracle(args.d_prime, args.n_qubits, args.phi)?;
    let text = serde_json::to_string_pretty(&plan.to_report()).expect("plain data serializes");
    println!("{text}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_complexity(args: ComplexityArgs) -> qmin::Result<ExitCode> {
    let rows = complexity_curve(args.n_min, args.n_max, args.m0)?;
    let text = match args.format {
        TableFormat::Csv => curve_to_csv(&rows),
        TableFormat::Json => {
            serde_json::to_string_pretty(&rows).expect("plain data serializes") + "\n"
        }
    };
    emit(&text, args.output.as_ref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> qmin::Result<ExitCode> {
    let wants = |s| args.suite == s || args.suite == Suite::All;
    let mut reports: Vec<PropertyReport> = Vec::new();
    if wants(Suite::Oracle) {
        reports.extend(verify_oracle(8)?);
    }
    if wants(Suite::Suresuccess) {
        reports.extend(verify_sure_success(10)?);
    }
    if wants(Suite::Engines) {
        reports.extend(verify_engines(10_000, 12, args.seed)?);
    }
    let passed = reports.iter().all(PropertyReport::passed);
    let summary = json!({"passed": passed, "properties": reports});
    println!(
        "{}",
        serde_json::to_string_pretty(&summary).expect("plain data serializes")
    );
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
