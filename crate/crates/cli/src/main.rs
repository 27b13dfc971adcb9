use std::path::PathBuf;
use std::process::ExitCode;

use clap::builder::PossibleValuesParser;
use clap::{Parser, Subcommand};
use tsqkd_cli::{
    cmd_evaluate, cmd_sweep, cmd_validate, scenario_list, scenario_stats, CliError, SweepConfig,
    ValidateArgs, EXIT_USAGE,
};
use tsqkd_core::ScenarioKind;

#[derive(Debug, Parser)]
#[command(name = "tsqkd", version, about = "Key-rate bounds for three-state BB84")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep the key rate of a scenario over a grid of Q values, as CSV.
    Sweep {
        #[arg(long, value_parser = PossibleValuesParser::new(ScenarioKind::NAMES))]
        scenario: String,
        /// Squared amplitude α² of the third state; repeat for several.
        #[arg(long = "alpha-sq", default_value = "0.5", num_args = 1)]
        alpha_sq: Vec<f64>,
        #[arg(long, default_value_t = 0.0)]
        q_min: f64,
        #[arg(long, default_value_t = 0.15)]
        q_max: f64,
        #[arg(long, default_value_t = 31)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also fill the bb84_rate column with 1 - 2h(Q).
        #[arg(long)]
        include_bb84: bool,
    },
    /// Evaluate the bound for statistics read from a JSON file.
    Evaluate {
        #[arg(long)]
        stats: PathBuf,
    },
    /// Check the bound against the exact rate of random symmetric attacks.
    Validate {
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value_t = 0.0)]
        q_min: f64,
        #[arg(long, default_value_t = 0.25)]
        q_max: f64,
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long = "alpha-sq", num_args = 1)]
        alpha_sq: Vec<f64>,
        /// Write a JSON file per violating trial into this directory.
        #[arg(long)]
        dump_dir: Option<PathBuf>,
    },
    /// List the built-in noise scenarios.
    ScenarioList,
    /// Print the statistics of a scenario as JSON, ready for `evaluate`.
    Stats {
        #[arg(long, value_parser = PossibleValuesParser::new(ScenarioKind::NAMES))]
        scenario: String,
        #[arg(long)]
        q: f64,
        #[arg(long = "alpha-sq", default_value_t = 0.5)]
        alpha_sq: f64,
    },
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Sweep {
            scenario,
            alpha_sq,
            q_min,
            q_max,
            steps,
            out,
            include_bb84,
        } => {
            let config = SweepConfig {
                scenario: scenario.parse()?,
                alpha_squared: alpha_sq,
                q_min,
                q_max,
                steps,
                output_path: out,
                include_bb84,
            };
            cmd_sweep(&config)?;
        }
        Command::Evaluate { stats } => {
            let evaluation = cmd_evaluate(&stats)?;
            println!("{}", json(&evaluation));
            if !evaluation.secure {
                eprintln!("no secure key: rate {} is negative", evaluation.result.rate);
            }
        }
        Command::Validate {
            trials,
            q_min,
            q_max,
            dim,
            seed,
            alpha_sq,
            dump_dir,
        } => {
            let args = ValidateArgs {
                trials,
                q_min,
                q_max,
                dim,
                seed,
                alpha_squared: if alpha_sq.is_empty() { vec![0.2, 0.5, 0.8] } else { alpha_sq },
                dump_dir,
            };
            let report = cmd_validate(&args)?;
            println!("{report}");
            if !report.passed() {
                return Err(CliError::Violations(report.violations));
            }
        }
        Command::ScenarioList => print!("{}", scenario_list()),
        Command::Stats { scenario, q, alpha_sq } => {
            let stats = scenario_stats(scenario.parse()?, q, alpha_sq)?;
            println!("{}", json(&stats));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = err.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error ({}): {err}", err.kind());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
