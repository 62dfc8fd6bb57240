use clap::{Parser, Subcommand, ValueEnum};
use desir_cli::commands::{self, IneQuery, MeasurableQuery, NatexQuery};
use desir_cli::model::ALL;
use desir_cli::suite::{self, SuiteName};
use desir_cli::{ExitStatus, ModelFile, Report};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "desir",
    version,
    about = "Exact lower previsions, natural extension and independent products"
)]
struct Cli {
    /// Model file (JSON).
    #[arg(short = 'm', long, global = true)]
    model: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    output: Output,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide coherence of the model's assessment.
    Check,
    /// Natural extension of a gamble given an event.
    Natex {
        #[arg(long)]
        gamble: String,
        #[arg(long, default_value = ALL)]
        event: String,
        /// Report the upper prevision instead.
        #[arg(long)]
        upper: bool,
    },
    /// Independent natural extension of two marginal models.
    Ine {
        /// Second marginal model.
        #[arg(long)]
        model2: PathBuf,
        /// Optional file with gambles and events on the product space.
        #[arg(long)]
        joint: Option<PathBuf>,
        /// atoms, all, empty or a family id in the first model.
        #[arg(long, default_value = "atoms")]
        family1: String,
        #[arg(long, default_value = "atoms")]
        family2: String,
        #[arg(long)]
        gamble: String,
        #[arg(long, default_value = ALL)]
        event: String,
        #[arg(long)]
        upper: bool,
    },
    /// Measurability of a non-negative gamble for an event family.
    Measurable {
        #[arg(long)]
        gamble: String,
        /// atoms, all, empty or a family id in the model.
        #[arg(long)]
        family: String,
        /// Number of levels of the staircase approximation.
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
        levels: u32,
    },
    /// Run a seeded property suite.
    Suite {
        #[arg(long, value_parser = suite_name)]
        suite: SuiteName,
    },
}

fn suite_name(s: &str) -> Result<SuiteName, String> {
    SuiteName::parse(s).ok_or_else(|| {
        let names: Vec<&str> = SuiteName::ALL.iter().map(|n| n.as_str()).collect();
        format!("expected one of {}", names.join(", "))
    })
}

fn load(path: Option<&Path>) -> Result<ModelFile, Report> {
    let path = path
        .ok_or_else(|| Report::input_error(&desir_cli::InputError("--model is required".into())))?;
    ModelFile::read(path).map_err(Report::from)
}

fn dispatch(cli: &Cli) -> Result<Report, Report> {
    Ok(match &cli.command {
        Command::Check => commands::check(&load(cli.model.as_deref())?),
        Command::Natex {
            gamble,
            event,
            upper,
        } => commands::natex(
            &load(cli.model.as_deref())?,
            &NatexQuery {
                gamble,
                event,
                upper: *upper,
            },
        ),
        Command::Ine {
            model2,
            joint,
            family1,
            family2,
            gamble,
            event,
            upper,
        } => {
            let first = load(cli.model.as_deref())?;
            let second = load(Some(model2))?;
            let joint = joint.as_deref().map(|p| load(Some(p))).transpose()?;
            commands::ine(
                &first,
                &second,
                joint.as_ref(),
                &IneQuery {
                    family1,
                    family2,
                    gamble,
                    event,
                    upper: *upper,
                },
            )
        }
        Command::Measurable {
            gamble,
            family,
            levels,
        } => commands::measurable(
            &load(cli.model.as_deref())?,
            &MeasurableQuery {
                gamble,
                family,
                levels: *levels,
            },
        ),
        Command::Suite { suite: name } => {
            let report = suite::run(*name, cli.seed, cli.trials as usize);
            Report {
                status: if report.passed() {
                    ExitStatus::Ok
                } else {
                    ExitStatus::SuiteFailure
                },
                text: report.text(),
                json: report.json(),
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                ExitStatus::InputError as u8
            } else {
                0
            });
        }
    };
    let report = dispatch(&cli).unwrap_or_else(|r| r);
    let rendered = report.render(matches!(cli.output, Output::Json));
    if report.status == ExitStatus::InputError && matches!(cli.output, Output::Text) {
        eprint!("{rendered}");
    } else {
        let _ = std::io::stdout().write_all(rendered.as_bytes());
    }
    ExitCode::from(report.status as u8)
}
