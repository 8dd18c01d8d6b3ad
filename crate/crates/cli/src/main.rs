mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use wallace_core::assembly::{FinalAdder, MacConfig, MultiplierConfig};
use wallace_core::cells::Logic;
use wallace_core::reduction::Scheduler;

/// Generate, verify and analyze Wallace-family multipliers.
#[derive(Debug, Parser)]
#[command(name = "wallace", version)]
struct Cli {
    /// Worker threads for exhaustive verification; results do not depend on it.
    #[arg(long, global = true, env = "WALLACE_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a multiplier or MAC and write its JSON netlist.
    Gen(GenCmd),
    /// Check a netlist against integer arithmetic.
    Verify(VerifyCmd),
    /// Timing and transistor-cost report for a netlist or a gate inventory.
    Analyze(AnalyzeCmd),
    /// Search for the input transition with the latest settle time.
    Worst(WorstCmd),
    /// Write a netlist as Verilog, DOT, JSON or a dot diagram.
    Emit(EmitCmd),
    /// Structure, cost, delay and negated-logic savings of a generated design.
    Report(ReportCmd),
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionArg {
    Wallace,
    Dadda,
    Cfa,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdderArg {
    Rca,
    #[value(alias = "sqrt_csa", alias = "csa")]
    SqrtCsa,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LogicArg {
    Standard,
    Negated,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DesignArgs {
    /// Operand width in bits.
    #[arg(long, default_value_t = 8)]
    pub width: usize,
    #[arg(long, value_enum, default_value = "wallace")]
    pub reduction: ReductionArg,
    #[arg(long, value_enum, default_value = "rca")]
    pub final_adder: AdderArg,
    #[arg(long, value_enum, default_value = "standard")]
    pub logic: LogicArg,
    /// Build a multiply-accumulate unit with a 2n-bit addend `c`.
    #[arg(long)]
    pub mac: bool,
    /// Carry-select segment widths, low segment first (e.g. 2,2,3,4).
    #[arg(long, value_delimiter = ',')]
    pub csa_splits: Option<Vec<usize>>,
    /// Drop the carry logic of the top adder position.
    #[arg(long)]
    pub msb_and: bool,
}

impl DesignArgs {
    pub fn multiplier(&self) -> anyhow::Result<MultiplierConfig> {
        let final_adder = match self.final_adder {
            AdderArg::Rca => FinalAdder::Rca,
            AdderArg::SqrtCsa => FinalAdder::SqrtCsa,
        };
        if self.csa_splits.is_some() && final_adder != FinalAdder::SqrtCsa {
            return Err(UsageError("--csa-splits requires --final-adder sqrt-csa".into()).into());
        }
        Ok(MultiplierConfig {
            width: self.width,
            reduction: match self.reduction {
                ReductionArg::Wallace => Scheduler::Wallace,
                ReductionArg::Dadda => Scheduler::Dadda,
                ReductionArg::Cfa => Scheduler::Cfa,
            },
            final_adder,
            logic: match self.logic {
                LogicArg::Standard => Logic::Standard,
                LogicArg::Negated => Logic::Negated,
            },
            csa_splits: self.csa_splits.clone(),
            msb_and_optimization: self.msb_and,
        })
    }

    pub fn build(&self) -> anyhow::Result<wallace_core::assembly::Design> {
        let multiplier = self.multiplier()?;
        let design = if self.mac {
            wallace_core::assembly::build_mac(&MacConfig { multiplier })
        } else {
            wallace_core::assembly::build_multiplier(&multiplier)
        };
        design.map_err(|e| UsageError(e.to_string()).into())
    }
}

#[derive(Debug, Args, Serialize)]
pub struct GenCmd {
    #[command(flatten)]
    pub design: DesignArgs,
    /// Netlist output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write a run manifest here.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
#[command(group = clap::ArgGroup::new("mode").required(true).args(["exhaustive", "random"]))]
pub struct VerifyCmd {
    /// Netlist file.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Check every input combination.
    #[arg(long)]
    pub exhaustive: bool,
    /// Check N random input combinations.
    #[arg(long, value_name = "N")]
    pub random: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CostArg {
    Default,
    Static12,
}

#[derive(Debug, Args, Serialize)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["input", "inventory"]))]
pub struct AnalyzeCmd {
    /// Netlist file.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Gate inventory file: a JSON object from gate kind to count.
    #[arg(long)]
    pub inventory: Option<PathBuf>,
    /// Delay and cost tables (JSON).
    #[arg(long)]
    pub tables: Option<PathBuf>,
    /// Built-in cost table, used when `--tables` has no costs.
    #[arg(long, value_enum, default_value = "default")]
    pub cost_table: CostArg,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyArg {
    FromZeroExhaustive,
    Random,
    HillClimb,
}

#[derive(Debug, Args, Serialize)]
pub struct WorstCmd {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "hill-climb")]
    pub strategy: StrategyArg,
    /// Pairs sampled by the random strategy.
    #[arg(long, default_value_t = 10_000)]
    pub count: u64,
    /// Random starting pairs for hill climbing.
    #[arg(long, default_value_t = 64)]
    pub starts: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub tables: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct EmitCmd {
    /// verilog, dot, json or diagram.
    #[arg(long)]
    pub format: String,
    /// Netlist file; otherwise the design is generated from the design flags.
    #[arg(long = "in", conflicts_with_all = ["width", "reduction", "final_adder", "logic", "mac", "csa_splits", "msb_and"])]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub design: DesignArgs,
    /// Verilog module name.
    #[arg(long, default_value = "multiplier")]
    pub module_name: String,
    /// Leave out block-tag comments and attributes.
    #[arg(long)]
    pub no_tags: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ReportCmd {
    #[command(flatten)]
    pub design: DesignArgs,
    #[arg(long)]
    pub tables: Option<PathBuf>,
}

/// A bad flag, configuration or input file. Exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Outcome of a command that ran to completion.
pub enum Status {
    Ok,
    VerificationFailed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let jobs = cli.jobs.unwrap_or(1).max(1);
    let result = match &cli.command {
        Command::Gen(c) => commands::gen(c),
        Command::Verify(c) => commands::verify(c, jobs),
        Command::Analyze(c) => commands::analyze(c),
        Command::Worst(c) => commands::worst(c),
        Command::Emit(c) => commands::emit(c),
        Command::Report(c) => commands::report(c),
    };
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::VerificationFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
