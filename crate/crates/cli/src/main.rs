//! `fattails`: command-line access to the fat-tail, option-convexity and
//! tail-hedging analyses in the `fattails` library.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use output::Format;

#[derive(Parser)]
#[command(
    name = "fattails",
    version,
    about = "Fat tails, crossovers and fourth-moment option analytics"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Table)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Crossover points a1..a4 of a scale family.
    Crossovers(CrossoversArgs),
    /// Sign pattern of the δ-perturbed density on peak, shoulders and tails.
    TunnelCheck(TunnelArgs),
    /// Density, perturbed density and moments over a grid.
    Density(DensityArgs),
    /// ATM option value change when tails are fattened.
    Quiz(QuizArgs),
    /// Black-Scholes price and Greeks of one option.
    Price(PriceArgs),
    /// Value multiple of n-STD options when implied vol is scaled.
    Multiplier(MultiplierArgs),
    /// Mixture-vs-single-vol call prices across strikes.
    Jensen(JensenArgs),
    /// Straddle price against the conditional first moment.
    StraddleCheck(StraddleArgs),
    /// Ratio backspread: credit rule, modified vega, fat-tail P&L.
    Backspread(BackspreadArgs),
    /// 60/20-day calendar: modified vega and vol-of-vol exposure.
    Calendar(CalendarArgs),
    /// Variance recovered by a 1/K² strip of OTM options.
    Strip(StripArgs),
    /// Volatility-episode convexity and tail-option vs VIX-roll P&L.
    VixDemo(VixArgs),
    /// Insured, uninsured and sidelined barbells over a scenario path.
    Barbell(BarbellArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyArg {
    Gaussian,
    Student,
    Lognormal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KindArg {
    Call,
    Put,
    Straddle,
}

#[derive(Args, Serialize)]
pub struct FamilySel {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// gaussian/lognormal: MU,SIGMA; student: ALPHA,S[,LOCATION]
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    pub params: Vec<f64>,
}

#[derive(Args, Serialize)]
pub struct CrossoversArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilySel,
    /// Also locate the crossovers by root finding and report the differences.
    #[arg(long, action = ArgAction::Set, num_args = 0..=1, default_value_t = false, default_missing_value = "true")]
    pub numeric: bool,
}

#[derive(Args, Serialize)]
pub struct TunnelArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilySel,
    #[arg(long, default_value_t = 0.25)]
    pub delta: f64,
    /// Grid spacing in scale units.
    #[arg(long, default_value_t = 0.05)]
    pub grid_step: f64,
    /// Grid half-width in scale units.
    #[arg(long, default_value_t = 6.0)]
    pub half_width: f64,
    /// Partition at the exact finite-δ crossings instead of the closed-form aᵢ.
    #[arg(long, action = ArgAction::Set, num_args = 0..=1, default_value_t = false, default_missing_value = "true")]
    pub exact: bool,
}

#[derive(Args, Serialize)]
pub struct DensityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilySel,
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    /// Grid half-width in scale units.
    #[arg(long, default_value_t = 5.0)]
    pub half_width: f64,
    #[arg(long, default_value_t = 0.5)]
    pub grid_step: f64,
}

#[derive(Args, Serialize)]
pub struct QuizArgs {
    #[arg(long, default_value_t = 0.2)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub spot: f64,
    #[arg(long, default_value_t = 1.0)]
    pub maturity: f64,
}

#[derive(Args, Serialize)]
pub struct PriceArgs {
    #[arg(long, value_enum, default_value_t = KindArg::Call)]
    pub kind: KindArg,
    #[arg(long, default_value_t = 1.0)]
    pub strike: f64,
    #[arg(long, default_value_t = 1.0)]
    pub spot: f64,
    #[arg(long, default_value_t = 1.0)]
    pub maturity: f64,
    #[arg(long, default_value_t = 0.2)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub rate: f64,
}

#[derive(Args, Serialize)]
pub struct MultiplierArgs {
    /// Strike distances in log-moneyness STDs; negative prices puts.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [5.0, 10.0, 20.0])]
    pub n_std: Vec<f64>,
    #[arg(long, default_value_t = 4.0)]
    pub vol_factor: f64,
    #[arg(long, default_value_t = 0.05)]
    pub sigma: f64,
    #[arg(long, default_value_t = 1.0)]
    pub spot: f64,
    #[arg(long, default_value_t = 1.0)]
    pub maturity: f64,
}

#[derive(Args, Serialize)]
pub struct JensenArgs {
    #[arg(long, default_value_t = 0.2)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub spot: f64,
    #[arg(long, default_value_t = 1.0)]
    pub maturity: f64,
    #[arg(long, default_value_t = -6.0, allow_hyphen_values = true)]
    pub n_min: f64,
    #[arg(long, default_value_t = 6.0, allow_hyphen_values = true)]
    pub n_max: f64,
    #[arg(long, default_value_t = 0.5)]
    pub n_step: f64,
}

#[derive(Args, Serialize)]
pub struct StraddleArgs {
    #[arg(long, default_value_t = 1.0)]
    pub spot: f64,
    #[arg(long, value_delimiter = ',', default_values_t = [1.0])]
    pub strike: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub maturity: f64,
    #[arg(long, value_delimiter = ',', default_values_t = [0.2])]
    pub sigma: Vec<f64>,
}

#[derive(Args, Serialize)]
pub struct BackspreadArgs {
    #[arg(long, default_value_t = 100.0)]
    pub spot: f64,
    #[arg(long, default_value_t = 0.2)]
    pub sigma: f64,
    #[arg(long, default_value_t = 30.0)]
    pub maturity_days: f64,
    #[arg(long, default_value_t = 90.0)]
    pub put_strike: f64,
    #[arg(long, default_value_t = 110.0)]
    pub call_strike: f64,
    /// Place both wings this many log-moneyness STDs out (overrides the strikes).
    #[arg(long)]
    pub wing_std: Option<f64>,
    #[arg(long, default_value_t = 10.0)]
    pub otm_qty: f64,
    /// ATM straddles sold: `neutral`, `zero-credit` or a number.
    #[arg(long, default_value = "neutral")]
    pub atm: String,
    /// δ values for the variance-matched fat-tail P&L.
    #[arg(long, value_delimiter = ',', default_values_t = [0.25, 0.5, 0.75])]
    pub deltas: Vec<f64>,
}

#[derive(Args, Serialize)]
pub struct CalendarArgs {
    #[arg(long, default_value_t = 100.0)]
    pub spot: f64,
    #[arg(long, default_value_t = 0.2)]
    pub sigma: f64,
    #[arg(long, default_value_t = 100.0)]
    pub strike: f64,
    /// Quantity of the 60-day leg; 0.8 times this is sold at 20 days.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub long: f64,
    #[arg(long, value_enum, default_value_t = KindArg::Straddle)]
    pub kind: KindArg,
    /// δ of the two-point σ distribution.
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
}

#[derive(Args, Serialize)]
pub struct StripArgs {
    #[arg(long, default_value_t = 1.0)]
    pub spot: f64,
    #[arg(long, default_value_t = 0.2)]
    pub sigma: f64,
    #[arg(long, default_value_t = 30.0)]
    pub maturity_days: f64,
    #[arg(long, default_value_t = 0.3)]
    pub lo: f64,
    #[arg(long, default_value_t = 3.0)]
    pub hi: f64,
    #[arg(long, default_value_t = 0.005)]
    pub step: f64,
}

#[derive(Args, Serialize)]
pub struct VixArgs {
    /// Entry level, vol points.
    #[arg(long, default_value_t = 10.0)]
    pub entry: f64,
    /// Episode levels, vol points.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [4.0, 15.0])]
    pub episodes: Vec<f64>,
    /// Scenario file (`return, implied_vol` per line) for the proxy comparison.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0 / 12.0)]
    pub period_years: f64,
    #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
    pub put_n_std: f64,
    #[arg(long, default_value_t = 1.0)]
    pub budget: f64,
    #[arg(long, default_value_t = 0.005)]
    pub contango: f64,
}

#[derive(Args, Serialize)]
pub struct BarbellArgs {
    /// Scenario file; the built-in crash-then-rally path when absent.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    #[arg(long, default_value_t = 0.9)]
    pub numeraire: f64,
    #[arg(long, default_value_t = 0.1)]
    pub equity: f64,
    /// Fraction of wealth spent on puts per period.
    #[arg(long, default_value_t = 0.005)]
    pub budget: f64,
    #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
    pub put_n_std: f64,
    /// Put life in periods.
    #[arg(long, default_value_t = 1.0)]
    pub put_maturity: f64,
    #[arg(long, default_value_t = 0.25)]
    pub period_years: f64,
    #[arg(long, default_value_t = 1.0)]
    pub initial_wealth: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Crossovers(a) => commands::crossovers(a),
        Command::TunnelCheck(a) => commands::tunnel_check(a),
        Command::Density(a) => commands::density(a),
        Command::Quiz(a) => commands::quiz(a),
        Command::Price(a) => commands::price(a),
        Command::Multiplier(a) => commands::multiplier(a),
        Command::Jensen(a) => commands::jensen(a),
        Command::StraddleCheck(a) => commands::straddle_check(a),
        Command::Backspread(a) => commands::backspread(a),
        Command::Calendar(a) => commands::calendar(a),
        Command::Strip(a) => commands::strip(a),
        Command::VixDemo(a) => commands::vix_demo(a),
        Command::Barbell(a) => commands::barbell(a),
    };
    match outcome {
        Ok(report) => {
            print!("{}", report.render(cli.format));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
