//! Dollar-for-dollar accounting of a numéraire-plus-equity barbell with and
//! without a small deep-OTM put budget.
//!
//! Everything is measured in numéraire units. The numéraire sleeve holds
//! its value; the equity sleeve is bought once and compounds. Put premiums
//! are paid from, and put settlements paid into, the numéraire sleeve.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::pricing::{bs_price, otm_strike, OptionKind, OptionSpec};
use crate::scenario::ScenarioPath;

/// Largest tail budget per period, as a fraction of wealth.
pub const MAX_TAIL_BUDGET: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PortfolioSpec {
    pub numeraire_fraction: f64,
    pub equity_fraction: f64,
    /// Fraction of current wealth spent on puts each period.
    pub tail_budget_per_period: f64,
    /// Put strike in log-moneyness standard deviations (negative = OTM put).
    pub put_n_std: f64,
    /// Put life in periods; at least one. Puts are replaced every period.
    pub put_maturity: f64,
    pub period_years: f64,
    pub initial_wealth: f64,
}

impl Default for PortfolioSpec {
    fn default() -> Self {
        Self {
            numeraire_fraction: 0.9,
            equity_fraction: 0.1,
            tail_budget_per_period: 0.005,
            put_n_std: -5.0,
            put_maturity: 1.0,
            period_years: 0.25,
            initial_wealth: 1.0,
        }
    }
}

impl PortfolioSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("numeraire_fraction", self.numeraire_fraction),
            ("equity_fraction", self.equity_fraction),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::invalid(name, format!("must be in [0, 1], got {v}")));
            }
        }
        if self.numeraire_fraction + self.equity_fraction > 1.0 + 1e-12 {
            return Err(Error::invalid(
                "equity_fraction",
                "numeraire and equity fractions sum to more than 1",
            ));
        }
        if !(0.0..=MAX_TAIL_BUDGET).contains(&self.tail_budget_per_period) {
            return Err(Error::invalid(
                "tail_budget_per_period",
                format!(
                    "must be in [0, {MAX_TAIL_BUDGET}], got {}",
                    self.tail_budget_per_period
                ),
            ));
        }
        ensure_finite("put_n_std", self.put_n_std)?;
        if !(self.put_maturity.is_finite() && self.put_maturity >= 1.0) {
            return Err(Error::invalid(
                "put_maturity",
                format!("must be ≥ 1 period, got {}", self.put_maturity),
            ));
        }
        ensure_positive("period_years", self.period_years)?;
        ensure_positive("initial_wealth", self.initial_wealth)
    }

    /// Same portfolio measured in a unit `factor` times smaller.
    pub fn rescaled(&self, factor: f64) -> Self {
        Self {
            initial_wealth: self.initial_wealth * factor,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Insured,
    Uninsured,
    Sidelined,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodRecord {
    pub wealth_start: f64,
    pub equity_pnl: f64,
    pub premium: f64,
    pub put_strike: f64,
    pub put_quantity: f64,
    pub settlement: f64,
    pub wealth_end: f64,
}

impl PeriodRecord {
    /// `wealth_end − (wealth_start + equity_pnl + settlement − premium)`
    pub fn conservation_residual(&self) -> f64 {
        self.wealth_end - (self.wealth_start + self.equity_pnl + self.settlement - self.premium)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyRun {
    pub mode: Mode,
    /// Wealth at inception then after each period.
    pub wealth: Vec<f64>,
    pub periods: Vec<PeriodRecord>,
}

impl StrategyRun {
    pub fn terminal_wealth(&self) -> f64 {
        *self.wealth.last().expect("wealth series is never empty")
    }

    pub fn max_drawdown(&self) -> f64 {
        max_drawdown(&self.wealth)
    }

    pub fn total_premium(&self) -> f64 {
        self.periods.iter().map(|p| p.premium).sum()
    }

    pub fn total_settlement(&self) -> f64 {
        self.periods.iter().map(|p| p.settlement).sum()
    }
}

/// Largest peak-to-trough loss as a fraction of the peak.
pub fn max_drawdown(wealth: &[f64]) -> f64 {
    let mut peak = f64::NEG_INFINITY;
    let mut worst: f64 = 0.0;
    for &w in wealth {
        peak = peak.max(w);
        if peak > 0.0 {
            worst = worst.max((peak - w) / peak);
        }
    }
    worst
}

pub fn run_strategy(spec: &PortfolioSpec, path: &ScenarioPath, mode: Mode) -> Result<StrategyRun> {
    spec.validate()?;
    let w0 = spec.initial_wealth;
    let (mut numeraire, mut equity) = match mode {
        Mode::Sidelined => (w0, 0.0),
        _ => (w0 * (1.0 - spec.equity_fraction), w0 * spec.equity_fraction),
    };
    let insured = mode == Mode::Insured && spec.tail_budget_per_period > 0.0;
    let put_years = spec.put_maturity * spec.period_years;
    let remaining_years = put_years - spec.period_years;

    let periods = path.periods();
    let mut wealth = Vec::with_capacity(periods.len() + 1);
    let mut records = Vec::with_capacity(periods.len());
    wealth.push(w0);
    for (i, period) in periods.iter().enumerate() {
        let wealth_start = numeraire + equity;
        let (mut premium, mut put_strike, mut put_quantity, mut settlement) = (0.0, 0.0, 0.0, 0.0);
        if insured {
            put_strike = otm_strike(1.0, period.implied_vol, put_years, spec.put_n_std);
            let put = OptionSpec::new(OptionKind::Put, put_strike, put_years, 1.0)?;
            let unit = bs_price(&put, period.implied_vol)?;
            if unit <= 0.0 {
                return Err(Error::NumericFailure(format!(
                    "put premium underflowed in period {i}"
                )));
            }
            premium = spec.tail_budget_per_period * wealth_start;
            put_quantity = premium / unit;
            let end_price = 1.0 + period.equity_return;
            let unit_value = if remaining_years <= 1e-12 {
                put.payoff(end_price)
            } else {
                // resold with the rest of its life at the next period's vol
                let vol = periods.get(i + 1).unwrap_or(period).implied_vol;
                let left = put.with_maturity(remaining_years)?;
                if end_price > 0.0 {
                    bs_price(&left.with_spot(end_price)?, vol)?
                } else {
                    put_strike
                }
            };
            settlement = put_quantity * unit_value;
        }
        let equity_pnl = equity * period.equity_return;
        equity += equity_pnl;
        numeraire += settlement - premium;
        let wealth_end = numeraire + equity;
        wealth.push(wealth_end);
        records.push(PeriodRecord {
            wealth_start,
            equity_pnl,
            premium,
            put_strike,
            put_quantity,
            settlement,
            wealth_end,
        });
    }
    Ok(StrategyRun {
        mode,
        wealth,
        periods: records,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSummary {
    pub mode: Mode,
    pub terminal_wealth: f64,
    pub max_drawdown: f64,
    pub insurance_cost: f64,
    pub insurance_payoff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub runs: Vec<StrategyRun>,
    pub summaries: Vec<ModeSummary>,
    /// Uninsured investor who liquidated into the numéraire at the trough.
    pub uninsured_sold_at_bottom: f64,
}

impl Comparison {
    pub fn run(&self, mode: Mode) -> &StrategyRun {
        self.runs
            .iter()
            .find(|r| r.mode == mode)
            .expect("all modes are run")
    }

    pub fn summary(&self, mode: Mode) -> &ModeSummary {
        self.summaries
            .iter()
            .find(|s| s.mode == mode)
            .expect("all modes are summarised")
    }
}

/// Runs all three modes from the same initial wealth.
pub fn compare_dollar_for_dollar(spec: &PortfolioSpec, path: &ScenarioPath) -> Result<Comparison> {
    let runs = [Mode::Insured, Mode::Uninsured, Mode::Sidelined]
        .into_iter()
        .map(|m| run_strategy(spec, path, m))
        .collect::<Result<Vec<_>>>()?;
    let summaries = runs
        .iter()
        .map(|r| ModeSummary {
            mode: r.mode,
            terminal_wealth: r.terminal_wealth(),
            max_drawdown: r.max_drawdown(),
            insurance_cost: r.total_premium(),
            insurance_payoff: r.total_settlement(),
        })
        .collect();
    let uninsured_sold_at_bottom = runs[1].wealth.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(Comparison {
        runs,
        summaries,
        uninsured_sold_at_bottom,
    })
}
