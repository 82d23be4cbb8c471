use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use txai::config::ExperimentConfig;
use txai::inference::Mode;
use txai::temporal::FuzzyRelation;
use txai::workflow::{self, Run};
use txai::{Result, TxaiError};

#[derive(Parser)]
#[command(name = "txai", version, about = "Time-dependent explainable fuzzy rule-based classification")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    /// TOML experiment configuration; built-in occupancy defaults otherwise.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Delimited sensor log with a header row.
    #[arg(long, global = true)]
    data: Option<PathBuf>,
    #[arg(long, global = true)]
    mode: Option<Mode>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, default_value = "txai-out")]
    out: PathBuf,
    #[arg(long, global = true)]
    relation: Option<FuzzyRelation>,
    /// Grid points for set operations and plot grids.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Fit variables and distributions on each repeat's training part only.
    #[arg(long, global = true)]
    leak_free: bool,
}

#[derive(Subcommand)]
enum Verb {
    /// Learn rule bases on the whole dataset.
    Fit,
    /// Classify rows with a fitted model.
    Infer {
        /// Defaults to model.json in the output directory.
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Repeated nested cross-validation.
    Eval,
    /// Rule transition matrices and the most likely trajectory.
    Rtm {
        /// Fit on the data when absent.
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Replay the worked numerical example.
    Golden,
    /// Emit CSV grids for plotting.
    DumpPlots,
}

fn data(cli: &Cli) -> Result<&PathBuf> {
    cli.data.as_ref().ok_or_else(|| TxaiError::Input("--data is required for this verb".into()))
}

fn run_cli(cli: &Cli) -> Result<()> {
    let mut config = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(m) = cli.mode {
        config.mode = m;
    }
    if let Some(s) = cli.seed {
        config.set_seed(s);
    }
    if let Some(r) = cli.relation {
        config.temporal.relation = r;
    }
    if let Some(g) = cli.grid {
        config.grid = g;
    }
    config.leak_free |= cli.leak_free;
    config.validate()?;
    let source = cli.config.as_ref().map_or("defaults".to_string(), |p| p.display().to_string());
    let run = Run { config, source, out: cli.out.clone() };
    let verb = match cli.verb {
        Verb::Fit => "fit",
        Verb::Infer { .. } => "infer",
        Verb::Eval => "eval",
        Verb::Rtm { .. } => "rtm",
        Verb::Golden => "golden",
        Verb::DumpPlots => "dump-plots",
    };
    println!("# {}", run.header(verb));

    match &cli.verb {
        Verb::Fit => {
            let fit = workflow::fit(&run, data(cli)?)?;
            print!("{}", fit.model.render());
            println!("validation balanced accuracy {:.4}", fit.validation.balanced_accuracy);
        }
        Verb::Infer { model } => {
            let path = model.clone().unwrap_or_else(|| run.out.join("model.json"));
            let model = workflow::read_model(&path)?;
            let s = workflow::infer(&run, &model, data(cli)?)?;
            println!("rows {} abstentions {}", s.rows, s.abstentions);
            if let Some(a) = s.accuracy {
                println!("accuracy {a:.4}");
            }
        }
        Verb::Eval => {
            let report = workflow::eval(&run, data(cli)?)?;
            println!("{:<10} {:<18} {:>8} {:>8}", "split", "metric", "mean", "std");
            for r in &report.summary {
                println!("{:<10} {:<18} {:>8.4} {:>8.4}", r.split, r.metric, r.mean, r.std);
            }
        }
        Verb::Rtm { model } => {
            let model = model.as_deref().map(workflow::read_model).transpose()?;
            let outcome = workflow::rtm(&run, data(cli)?, model)?;
            for m in &outcome.matrices {
                println!("{} -> {} (total {})", m.from_name, m.to_name, m.total);
                for row in &m.pi {
                    let cells: Vec<String> = row.iter().map(|v| format!("{v:.3}")).collect();
                    println!("  {}", cells.join(" "));
                }
            }
            print!("{}", outcome.rendering);
        }
        Verb::Golden => {
            let report = workflow::golden(&run)?;
            println!("{} checks passed; predicted {} via R{}", report.checks.len(),
                report.predicted_label.as_deref().unwrap_or("-"), report.winner.map_or(0, |w| w + 1));
        }
        Verb::DumpPlots => {
            for p in workflow::dump_plots(&run, cli.data.as_deref())? {
                println!("{}", p.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run_cli(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (code, status) = e.code();
            eprintln!("error[{code}]: {e}");
            ExitCode::from(status as u8)
        }
    }
}
