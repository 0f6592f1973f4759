//! `repay`: valuations, sweeps, verification suites and the HTTP service.

pub mod report;
pub mod verify;

use std::fs;
use std::io::Write;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use repay_core::model::Mode;
use repay_core::scenario::{self, ContourSpec, Scenario, ScenarioError};
use repay_core::schedules::BorrowerProfile;
use repay_core::sweep::Axis;

#[derive(Debug, Parser)]
#[command(name = "repay", version, about = "Cost-minimizing repayment of income-driven student loans")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Value the optimal (or a given) strategy for one balance.
    Value(ValueArgs),
    /// Optimal cost over a range of balances.
    Frontier(FrontierArgs),
    /// Critical balance over a grid of loan spreads and discount rates.
    Contour(ContourArgs),
    /// Run invariant suites; exits nonzero if any check fails.
    Verify(VerifyArgs),
    /// Start the HTTP service.
    Serve(ServeArgs),
    /// Print the reference scenario as a starting configuration.
    Template,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Compound,
    Simple,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Compound => Mode::Compound,
            ModeArg::Simple => Mode::Simple,
        }
    }
}

/// Flags shared by the model commands. Each one overrides the matching
/// field of the configuration file.
#[derive(Debug, Clone, Default, Args)]
pub struct ScenarioArgs {
    /// JSON scenario file; the reference scenario is used when absent.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Initial balance, thousands of dollars.
    #[arg(long)]
    pub balance: Option<f64>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    /// Forgiveness horizon, years.
    #[arg(long = "horizon")]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub income: Option<f64>,
    #[arg(long)]
    pub subsistence: Option<f64>,
    #[arg(long)]
    pub growth: Option<f64>,
    #[arg(long)]
    pub f_min: Option<f64>,
    #[arg(long)]
    pub f_max: Option<f64>,
    /// Switch-time grid for the simple-interest optimizer.
    #[arg(long)]
    pub grid_n: Option<usize>,
    /// Write output here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl ScenarioArgs {
    pub fn scenario(&self) -> Result<Scenario> {
        let mut s = match &self.config {
            Some(path) => load_config(path)?,
            None => Scenario::reference(),
        };
        if let Some(m) = self.mode {
            s.mode = m.into();
        }
        s.balance = self.balance.unwrap_or(s.balance);
        s.terms.r = self.r.unwrap_or(s.terms.r);
        s.terms.beta = self.beta.unwrap_or(s.terms.beta);
        s.terms.omega = self.omega.unwrap_or(s.terms.omega);
        s.terms.horizon = self.horizon.unwrap_or(s.terms.horizon);
        s.grid_n = self.grid_n.unwrap_or(s.grid_n);
        let profile_flags = [self.income, self.subsistence, self.growth, self.f_min, self.f_max];
        if profile_flags.iter().any(Option::is_some) {
            if s.bounds.is_some() {
                bail!("profile flags cannot override a configuration that gives explicit bounds");
            }
            let p = s.profile.unwrap_or_else(BorrowerProfile::reference);
            s.profile = Some(BorrowerProfile {
                income: self.income.unwrap_or(p.income),
                subsistence: self.subsistence.unwrap_or(p.subsistence),
                growth: self.growth.unwrap_or(p.growth),
                f_min: self.f_min.unwrap_or(p.f_min),
                f_max: self.f_max.unwrap_or(p.f_max),
            });
        }
        Ok(s)
    }
}

pub fn load_config(path: &Path) -> Result<Scenario> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Scenario::from_json(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

#[derive(Debug, Args)]
pub struct ValueArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct FrontierArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long)]
    pub x_lo: Option<f64>,
    #[arg(long)]
    pub x_hi: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ContourArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long)]
    pub beta_lo: Option<f64>,
    #[arg(long)]
    pub beta_hi: Option<f64>,
    #[arg(long)]
    pub beta_steps: Option<usize>,
    #[arg(long)]
    pub r_lo: Option<f64>,
    #[arg(long)]
    pub r_hi: Option<f64>,
    #[arg(long)]
    pub r_steps: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum, default_value = "all")]
    pub suite: verify::Suite,
    /// Seed for the randomized suites.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub bind: IpAddr,
    /// Origin allowed by CORS; any origin when absent.
    #[arg(long)]
    pub origin: Option<String>,
}

fn axis(lo: Option<f64>, hi: Option<f64>, steps: Option<usize>, default: Axis) -> Axis {
    Axis {
        lo: lo.unwrap_or(default.lo),
        hi: hi.unwrap_or(default.hi),
        steps: steps.unwrap_or(default.steps),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn scenario_error(e: ScenarioError) -> anyhow::Error {
    anyhow::anyhow!("{e}")
}

/// Runs a parsed command, returning the process exit code.
pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Value(a) => {
            let s = a.scenario.scenario()?;
            let rep = scenario::evaluate(&s).map_err(scenario_error)?;
            let text = match a.format {
                Format::Text => report::value_text(&rep),
                Format::Json => report::json(&rep)?,
                Format::Csv => report::value_csv(&rep)?,
            };
            emit(a.scenario.out.as_deref(), &text)?;
        }
        Command::Frontier(a) => {
            let mut s = a.scenario.scenario()?;
            let default = s.frontier.unwrap_or(Axis { lo: 5.0, hi: 400.0, steps: 80 });
            s.frontier = Some(axis(a.x_lo, a.x_hi, a.steps, default));
            let rep = scenario::frontier(&s).map_err(scenario_error)?;
            let text = match a.format {
                Format::Json => report::json(&rep)?,
                _ => report::frontier_csv(&rep)?,
            };
            emit(a.scenario.out.as_deref(), &text)?;
        }
        Command::Contour(a) => {
            let mut s = a.scenario.scenario()?;
            let default = s.contour.unwrap_or(ContourSpec {
                beta: Axis { lo: 0.01, hi: 0.08, steps: 15 },
                r: Axis { lo: 0.01, hi: 0.08, steps: 15 },
            });
            s.contour = Some(ContourSpec {
                beta: axis(a.beta_lo, a.beta_hi, a.beta_steps, default.beta),
                r: axis(a.r_lo, a.r_hi, a.r_steps, default.r),
            });
            let rows = scenario::contour(&s).map_err(scenario_error)?;
            let text = match a.format {
                Format::Json => report::json(&rows)?,
                _ => report::contour_csv(&rows)?,
            };
            emit(a.scenario.out.as_deref(), &text)?;
        }
        Command::Verify(a) => {
            let results = verify::run(a.suite, a.seed);
            let mut failed = 0;
            for r in &results {
                println!("{r}");
                failed += usize::from(!r.passed);
            }
            if failed > 0 {
                eprintln!("{failed} check(s) failed");
                return Ok(1);
            }
        }
        Command::Serve(a) => {
            let origin = a
                .origin
                .map(|o| o.parse().context("--origin is not a valid header value"))
                .transpose()?;
            let addr = SocketAddr::new(a.bind, a.port);
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(repay_api::serve(addr, origin))?;
        }
        Command::Template => {
            emit(None, &report::json(&Scenario::reference())?)?;
        }
    }
    Ok(0)
}
