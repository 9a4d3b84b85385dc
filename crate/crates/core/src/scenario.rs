//! Per-period market paths shared by the vix and barbell modules.
//!
//! Text format: one period per line, `equity_return, implied_vol`. Commas
//! or whitespace separate the two numbers; `#` starts a comment.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Period {
    /// Simple return of the underlying over the period.
    pub equity_return: f64,
    /// Annualized implied vol quoted at the start of the period.
    pub implied_vol: f64,
}

impl Period {
    pub fn new(equity_return: f64, implied_vol: f64) -> Result<Self> {
        if !equity_return.is_finite() || equity_return < -1.0 {
            return Err(Error::invalid(
                "equity_return",
                format!("must be finite and ≥ −1, got {equity_return}"),
            ));
        }
        if !(implied_vol.is_finite() && implied_vol > 0.0) {
            return Err(Error::invalid(
                "implied_vol",
                format!("must be positive, got {implied_vol}"),
            ));
        }
        Ok(Self {
            equity_return,
            implied_vol,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioPath {
    periods: Vec<Period>,
}

impl ScenarioPath {
    pub fn new(periods: Vec<Period>) -> Result<Self> {
        if periods.is_empty() {
            return Err(Error::invalid("scenario", "needs at least one period"));
        }
        Ok(Self { periods })
    }

    pub fn from_pairs<I: IntoIterator<Item = (f64, f64)>>(pairs: I) -> Result<Self> {
        let periods = pairs
            .into_iter()
            .map(|(r, v)| Period::new(r, v))
            .collect::<Result<Vec<_>>>()?;
        Self::new(periods)
    }

    /// Crash followed by a rally of more than 100% from the trough.
    pub fn crash_rally() -> Self {
        Self::from_pairs([
            (-0.50, 0.20),
            (0.20, 0.60),
            (0.25, 0.35),
            (0.20, 0.30),
            (0.15, 0.25),
            (0.10, 0.20),
        ])
        .expect("static path is valid")
    }

    pub fn flat(n: usize, vol: f64) -> Result<Self> {
        Self::from_pairs(std::iter::repeat_n((0.0, vol), n))
    }

    pub fn periods(&self) -> &[Period] {
        &self.periods
    }

    pub fn len(&self) -> usize {
        self.periods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.periods.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# equity_return, implied_vol\n");
        for p in &self.periods {
            let _ = writeln!(out, "{}, {}", p.equity_return, p.implied_vol);
        }
        out
    }
}

impl FromStr for ScenarioPath {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut periods = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|f| !f.is_empty())
                .collect();
            let bad =
                |why: String| Error::invalid("scenario", format!("line {}: {why}", lineno + 1));
            if fields.len() != 2 {
                return Err(bad(format!("expected 2 fields, found {}", fields.len())));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|e| bad(format!("{s:?}: {e}")));
            let period =
                Period::new(num(fields[0])?, num(fields[1])?).map_err(|e| bad(e.to_string()))?;
            periods.push(period);
        }
        Self::new(periods)
    }
}
