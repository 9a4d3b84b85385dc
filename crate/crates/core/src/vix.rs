//! Variance replication by a 1/K² strip of out-of-the-money options, the
//! convexity of variance in volatility episodes, and a tail-puts versus
//! VIX-futures roll comparison.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::pricing::{bs_price, otm_strike, payoff, OptionKind, OptionSpec};
use crate::scenario::ScenarioPath;

/// Strike coverage, as multiples of spot, needed for the strip to be trusted.
pub const STRIP_MIN_RANGE: (f64, f64) = (0.3, 3.0);
/// Largest trusted strike step as a fraction of spot.
pub const STRIP_MAX_STEP: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Strip {
    strikes: Vec<f64>,
    /// `ΔK/K²` before normalisation.
    raw_weights: Vec<f64>,
    weights: Vec<f64>,
    kinds: Vec<OptionKind>,
    forward: f64,
    /// Highest strike at or below the forward, if any.
    pivot: Option<usize>,
}

impl Strip {
    /// Puts below the pivot strike (the highest strike ≤ forward), calls
    /// above it, and the put/call average at the pivot. ΔK is the centred
    /// half-gap, one-sided at the ends.
    pub fn new(strikes: Vec<f64>, forward: f64) -> Result<Self> {
        ensure_positive("forward", forward)?;
        if strikes.len() < 2 {
            return Err(Error::invalid("strikes", "need at least two strikes"));
        }
        if strikes[0] <= 0.0 || strikes.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid(
                "strikes",
                "must be positive and strictly ascending",
            ));
        }
        let n = strikes.len();
        let raw_weights: Vec<f64> = (0..n)
            .map(|i| {
                let dk = match i {
                    0 => strikes[1] - strikes[0],
                    _ if i == n - 1 => strikes[n - 1] - strikes[n - 2],
                    _ => 0.5 * (strikes[i + 1] - strikes[i - 1]),
                };
                dk / (strikes[i] * strikes[i])
            })
            .collect();
        let total: f64 = raw_weights.iter().sum();
        let weights = raw_weights.iter().map(|w| w / total).collect();
        let pivot = strikes.iter().rposition(|&k| k <= forward);
        let kinds = (0..n)
            .map(|i| match pivot {
                Some(p) if i < p => OptionKind::Put,
                Some(p) if i == p => OptionKind::Straddle,
                _ => OptionKind::Call,
            })
            .collect();
        Ok(Self {
            strikes,
            raw_weights,
            weights,
            kinds,
            forward,
            pivot,
        })
    }

    pub fn uniform(lo: f64, hi: f64, step: f64, forward: f64) -> Result<Self> {
        ensure_positive("strike_lo", lo)?;
        ensure_positive("strike_step", step)?;
        if !(lo < hi) || !hi.is_finite() {
            return Err(Error::invalid(
                "strike_range",
                format!("need lo < hi, got [{lo}, {hi}]"),
            ));
        }
        let n = ((hi - lo) / step).round() as usize;
        if n > 10_000_000 {
            return Err(Error::invalid("strike_step", "too many strikes"));
        }
        let strikes = (0..=n).map(|i| lo + i as f64 * step).collect();
        Self::new(strikes, forward)
    }

    pub fn strikes(&self) -> &[f64] {
        &self.strikes
    }

    /// Normalised `ΔK/K²` weights.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn kinds(&self) -> &[OptionKind] {
        &self.kinds
    }

    pub fn forward(&self) -> f64 {
        self.forward
    }

    /// `(2/T)·Σ ΔK/K²·Q(K) − (1/T)(F/K₀ − 1)²` at zero rate.
    pub fn variance(&self, spot: f64, sigma: f64, maturity: f64) -> Result<f64> {
        let mut sum = 0.0;
        for ((&k, &w), &kind) in self.strikes.iter().zip(&self.raw_weights).zip(&self.kinds) {
            let spec = OptionSpec::new(kind, k, maturity, spot)?;
            let mut q = bs_price(&spec, sigma)?;
            if kind == OptionKind::Straddle {
                q *= 0.5;
            }
            sum += w * q;
        }
        let correction = match self.pivot {
            Some(p) => (self.forward / self.strikes[p] - 1.0).powi(2),
            None => 0.0,
        };
        Ok((2.0 * sum - correction) / maturity)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StripValue {
    /// Annualised variance recovered by the strip.
    pub variance: f64,
    pub strikes: usize,
    /// Set when the range or step falls short of the trusted discretisation.
    pub warning: Option<String>,
}

pub fn variance_strip_value(
    spot: f64,
    sigma: f64,
    maturity: f64,
    strike_range: (f64, f64),
    strike_step: f64,
) -> Result<StripValue> {
    ensure_positive("spot", spot)?;
    ensure_positive("sigma", sigma)?;
    ensure_positive("maturity", maturity)?;
    let strip = Strip::uniform(strike_range.0, strike_range.1, strike_step, spot)?;
    let variance = strip.variance(spot, sigma, maturity)?;

    let mut issues = Vec::new();
    let (lo, hi) = strike_range;
    if lo > STRIP_MIN_RANGE.0 * spot * (1.0 + 1e-12)
        || hi < STRIP_MIN_RANGE.1 * spot * (1.0 - 1e-12)
    {
        issues.push(format!(
            "range [{lo}, {hi}] does not cover [{}, {}]×spot",
            STRIP_MIN_RANGE.0, STRIP_MIN_RANGE.1
        ));
    }
    if strike_step > STRIP_MAX_STEP * spot * (1.0 + 1e-12) {
        issues.push(format!(
            "step {strike_step} exceeds {}×spot",
            STRIP_MAX_STEP
        ));
    }
    Ok(StripValue {
        variance,
        strikes: strip.strikes.len(),
        warning: (!issues.is_empty()).then(|| format!("tolerance not met: {}", issues.join("; "))),
    })
}

/// Volatility levels over consecutive equal-length episodes, in vol points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolEpisodes {
    levels: Vec<f64>,
    entry_level: f64,
}

impl VolEpisodes {
    pub fn new(levels: Vec<f64>, entry_level: f64) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::invalid("episodes", "need at least one episode"));
        }
        if let Some(bad) = levels.iter().find(|l| !(l.is_finite() && **l >= 0.0)) {
            return Err(Error::invalid(
                "episodes",
                format!("levels must be ≥ 0, got {bad}"),
            ));
        }
        ensure_positive("entry", entry_level)?;
        Ok(Self {
            levels,
            entry_level,
        })
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn entry_level(&self) -> f64 {
        self.entry_level
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub arithmetic_mean: f64,
    /// Square root of mean variance: what a variance-settled index reports.
    pub rms: f64,
    pub max: f64,
    /// `mean(levels²) − entry²`, in variance points.
    pub variance_pnl: f64,
}

pub fn convexity_demo(episodes: &VolEpisodes) -> ConvexityReport {
    let n = episodes.levels.len() as f64;
    let arithmetic_mean = episodes.levels.iter().sum::<f64>() / n;
    let mean_sq = episodes.levels.iter().map(|l| l * l).sum::<f64>() / n;
    let max = episodes.levels.iter().copied().fold(0.0, f64::max);
    // rounding can push √mean_sq a hair outside [mean, max] when all levels are equal
    let rms = mean_sq.sqrt().clamp(arithmetic_mean, max);
    ConvexityReport {
        arithmetic_mean,
        rms,
        max,
        variance_pnl: mean_sq - episodes.entry_level * episodes.entry_level,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProxyConfig {
    pub period_years: f64,
    /// Put strike distance in log-moneyness standard deviations (negative).
    pub put_n_std: f64,
    /// Cash committed to each leg every period.
    pub budget: f64,
    /// Futures premium over next-period vol, in vol units (0.005 = ½ point).
    pub contango: f64,
}

impl Default for ProxyConfig {
    fn default() -> Self {
        Self {
            period_years: 1.0 / 12.0,
            put_n_std: -5.0,
            budget: 1.0,
            contango: 0.005,
        }
    }
}

impl ProxyConfig {
    fn validate(&self) -> Result<()> {
        ensure_positive("period_years", self.period_years)?;
        ensure_finite("put_n_std", self.put_n_std)?;
        ensure_positive("budget", self.budget)?;
        if !(self.contango.is_finite() && self.contango >= 0.0) {
            return Err(Error::invalid(
                "contango",
                format!("must be ≥ 0, got {}", self.contango),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProxyDivergence {
    pub tail_option_pnl: Vec<f64>,
    pub vix_roll_pnl: Vec<f64>,
    pub tail_option_total: f64,
    pub vix_roll_total: f64,
}

/// Each roll `i` spends `budget` on one-period puts struck at
/// `exp(put_n_std·σᵢ·√Δt)` (settled at intrinsic against the period's
/// return) and `budget` on vol futures bought at `σᵢ + contango` that settle
/// at `σᵢ₊₁`. A path of n periods gives n−1 rolls.
pub fn proxy_divergence_scenario(
    path: &ScenarioPath,
    config: &ProxyConfig,
) -> Result<ProxyDivergence> {
    config.validate()?;
    if path.len() < 2 {
        return Err(Error::invalid(
            "scenario",
            format!("need at least 2 periods, got {}", path.len()),
        ));
    }
    let periods = path.periods();
    let mut tail_option_pnl = Vec::with_capacity(periods.len() - 1);
    let mut vix_roll_pnl = Vec::with_capacity(periods.len() - 1);
    for pair in periods.windows(2) {
        let (now, next) = (pair[0], pair[1]);
        let strike = otm_strike(1.0, now.implied_vol, config.period_years, config.put_n_std);
        let put = OptionSpec::new(OptionKind::Put, strike, config.period_years, 1.0)?;
        let premium = bs_price(&put, now.implied_vol)?;
        if premium <= 0.0 {
            return Err(Error::NumericFailure(format!(
                "put premium underflowed at strike {strike}"
            )));
        }
        let settle = payoff(OptionKind::Put, strike, 1.0 + now.equity_return);
        tail_option_pnl.push(config.budget * (settle / premium - 1.0));

        let entry = now.implied_vol + config.contango;
        vix_roll_pnl.push(config.budget * (next.implied_vol / entry - 1.0));
    }
    Ok(ProxyDivergence {
        tail_option_total: tail_option_pnl.iter().sum(),
        vix_roll_total: vix_roll_pnl.iter().sum(),
        tail_option_pnl,
        vix_roll_pnl,
    })
}
