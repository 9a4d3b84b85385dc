//! European option pricing under lognormal dynamics and under volatility
//! mixtures.
//!
//! Out-of-the-money prices are evaluated in log space (`ln Φ` plus
//! `expm1`) so strikes twenty standard deviations away neither cancel nor
//! underflow silently; the in-the-money side follows from put-call parity.

use serde::{Deserialize, Serialize};

use crate::distributions::{Density, MixtureSpec, ScaleFamily};
use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::numeric::roots::{brent, sign_change_brackets};
use crate::numeric::special::{ln_diff_exp, ln_norm_cdf, norm_cdf, norm_pdf};
use crate::numeric::Quadrature;

/// Base prices below this are treated as underflowed by [`otm_multiplier`].
pub const PRICE_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptionKind {
    Call,
    Put,
    Straddle,
}

/// A European option on a non-dividend-paying underlying.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptionSpec {
    kind: OptionKind,
    strike: f64,
    maturity: f64,
    spot: f64,
    rate: f64,
}

impl OptionSpec {
    /// Zero-rate option.
    pub fn new(kind: OptionKind, strike: f64, maturity: f64, spot: f64) -> Result<Self> {
        ensure_positive("strike", strike)?;
        ensure_positive("maturity", maturity)?;
        ensure_positive("spot", spot)?;
        Ok(Self {
            kind,
            strike,
            maturity,
            spot,
            rate: 0.0,
        })
    }

    pub fn with_rate(self, rate: f64) -> Result<Self> {
        ensure_finite("rate", rate)?;
        Ok(Self { rate, ..self })
    }

    pub fn with_spot(self, spot: f64) -> Result<Self> {
        ensure_positive("spot", spot)?;
        Ok(Self { spot, ..self })
    }

    pub fn with_maturity(self, maturity: f64) -> Result<Self> {
        ensure_positive("maturity", maturity)?;
        Ok(Self { maturity, ..self })
    }

    pub fn with_kind(self, kind: OptionKind) -> Self {
        Self { kind, ..self }
    }

    pub fn kind(&self) -> OptionKind {
        self.kind
    }

    pub fn strike(&self) -> f64 {
        self.strike
    }

    pub fn maturity(&self) -> f64 {
        self.maturity
    }

    pub fn spot(&self) -> f64 {
        self.spot
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn discount(&self) -> f64 {
        (-self.rate * self.maturity).exp()
    }

    pub fn forward(&self) -> f64 {
        self.spot / self.discount()
    }

    /// Payoff if exercised against `spot` now.
    pub fn payoff(&self, spot: f64) -> f64 {
        payoff(self.kind, self.strike, spot)
    }

    /// Present value of the intrinsic part: `max(S − K·D, 0)` for a call,
    /// `max(K·D − S, 0)` for a put, their sum for a straddle.
    pub fn pv_intrinsic(&self) -> f64 {
        let pv_strike = self.strike * self.discount();
        match self.kind {
            OptionKind::Call => (self.spot - pv_strike).max(0.0),
            OptionKind::Put => (pv_strike - self.spot).max(0.0),
            OptionKind::Straddle => (self.spot - pv_strike).abs(),
        }
    }
}

pub fn payoff(kind: OptionKind, strike: f64, spot: f64) -> f64 {
    match kind {
        OptionKind::Call => (spot - strike).max(0.0),
        OptionKind::Put => (strike - spot).max(0.0),
        OptionKind::Straddle => (spot - strike).abs(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Greeks {
    pub price: f64,
    pub delta: f64,
    pub gamma: f64,
    /// `∂V/∂σ`
    pub vega: f64,
    /// `∂²V/∂σ²`
    pub volga: f64,
}

struct Terms {
    d1: f64,
    d2: f64,
    ln_spot: f64,
    ln_pv_strike: f64,
    call_is_otm: bool,
}

fn terms(spec: &OptionSpec, sigma: f64) -> Terms {
    let sd = sigma * spec.maturity.sqrt();
    let ln_pv_strike = spec.strike.ln() - spec.rate * spec.maturity;
    let ln_spot = spec.spot.ln();
    let d1 = (ln_spot - ln_pv_strike) / sd + 0.5 * sd;
    Terms {
        d1,
        d2: d1 - sd,
        ln_spot,
        ln_pv_strike,
        call_is_otm: ln_pv_strike >= ln_spot,
    }
}

/// `ln` of the out-of-the-money side (call above the forward, put below).
fn ln_otm_side(t: &Terms) -> f64 {
    if t.call_is_otm {
        // S Φ(d1) − K D Φ(d2)
        ln_diff_exp(
            t.ln_spot + ln_norm_cdf(t.d1),
            t.ln_pv_strike + ln_norm_cdf(t.d2),
        )
    } else {
        // K D Φ(−d2) − S Φ(−d1)
        ln_diff_exp(
            t.ln_pv_strike + ln_norm_cdf(-t.d2),
            t.ln_spot + ln_norm_cdf(-t.d1),
        )
    }
}

/// `(call, put)` prices.
fn call_put(spec: &OptionSpec, sigma: f64) -> (f64, f64) {
    let t = terms(spec, sigma);
    let otm = ln_otm_side(&t).exp().max(0.0);
    let forward_gap = spec.spot - spec.strike * spec.discount();
    if t.call_is_otm {
        (otm, (otm - forward_gap).max(0.0))
    } else {
        ((otm + forward_gap).max(0.0), otm)
    }
}

pub fn bs_price(spec: &OptionSpec, sigma: f64) -> Result<f64> {
    ensure_positive("sigma", sigma)?;
    let (call, put) = call_put(spec, sigma);
    Ok(match spec.kind {
        OptionKind::Call => call,
        OptionKind::Put => put,
        OptionKind::Straddle => call + put,
    })
}

/// Natural log of the price, accurate where the price itself underflows.
pub fn ln_bs_price(spec: &OptionSpec, sigma: f64) -> Result<f64> {
    ensure_positive("sigma", sigma)?;
    let t = terms(spec, sigma);
    let otm_matches = match spec.kind {
        OptionKind::Call => t.call_is_otm,
        OptionKind::Put => !t.call_is_otm,
        OptionKind::Straddle => false,
    };
    if otm_matches {
        Ok(ln_otm_side(&t))
    } else {
        Ok(bs_price(spec, sigma)?.ln())
    }
}

pub fn greeks(spec: &OptionSpec, sigma: f64) -> Result<Greeks> {
    let price = bs_price(spec, sigma)?;
    let t = terms(spec, sigma);
    let sqrt_t = spec.maturity.sqrt();
    let density = norm_pdf(t.d1);
    let one_vega = spec.spot * density * sqrt_t;
    let one_gamma = density / (spec.spot * sigma * sqrt_t);
    let one_volga = one_vega * t.d1 * t.d2 / sigma;
    let call_delta = norm_cdf(t.d1);
    let (delta, legs) = match spec.kind {
        OptionKind::Call => (call_delta, 1.0),
        OptionKind::Put => (call_delta - 1.0, 1.0),
        OptionKind::Straddle => (2.0 * call_delta - 1.0, 2.0),
    };
    Ok(Greeks {
        price,
        delta,
        gamma: legs * one_gamma,
        vega: legs * one_vega,
        volga: legs * one_volga,
    })
}

/// Strike `n_std` implied standard deviations from spot in log-moneyness:
/// `S·exp(n·σ√T)`.
pub fn otm_strike(spot: f64, sigma: f64, maturity: f64, n_std: f64) -> f64 {
    spot * (n_std * sigma * maturity.sqrt()).exp()
}

/// `Σ wᵢ · BS(σ·mᵢ)`.
pub fn mixture_price(spec: &OptionSpec, sigma: f64, mix: &MixtureSpec) -> Result<f64> {
    ensure_positive("sigma", sigma)?;
    mix.components()
        .iter()
        .map(|c| Ok(c.weight * bs_price(spec, sigma * c.multiplier)?))
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuizResult {
    pub single_vol_price: f64,
    pub fattened_price: f64,
    /// `fattened − single`; negative means the ATM option lost value.
    pub change: f64,
}

/// What happens to an at-the-money option when the tails are fattened
/// with a σ-mean-preserving mixture.
pub fn atm_fattening_quiz(
    spot: f64,
    maturity: f64,
    sigma: f64,
    mix: &MixtureSpec,
) -> Result<QuizResult> {
    let mean = mix.mean_multiplier();
    if (mean - 1.0).abs() > 1e-12 {
        return Err(Error::invalid(
            "mixture",
            format!("ATM quiz needs a mean multiplier of 1, got {mean}"),
        ));
    }
    let atm = OptionSpec::new(OptionKind::Call, spot, maturity, spot)?;
    let single_vol_price = bs_price(&atm, sigma)?;
    let fattened_price = mixture_price(&atm, sigma, mix)?;
    Ok(QuizResult {
        single_vol_price,
        fattened_price,
        change: fattened_price - single_vol_price,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Multiplier {
    pub n_std: f64,
    pub vol_factor: f64,
    pub kind: OptionKind,
    pub strike: f64,
    pub base_price: f64,
    pub bumped_price: f64,
    /// `bumped / base`; `+∞` when the base price underflowed.
    pub ratio: f64,
    /// `ln(bumped / base)` from log-space prices; finite even on underflow.
    pub ln_ratio: f64,
    pub underflow: bool,
}

/// Value multiple of an `n_std` out-of-the-money option when implied vol is
/// multiplied by `vol_factor`. Positive `n_std` prices a call, negative a put.
pub fn otm_multiplier(
    n_std: f64,
    vol_factor: f64,
    spot: f64,
    maturity: f64,
    sigma: f64,
) -> Result<Multiplier> {
    ensure_finite("n_std", n_std)?;
    ensure_positive("vol_factor", vol_factor)?;
    ensure_positive("sigma", sigma)?;
    let strike = otm_strike(spot, sigma, maturity, n_std);
    let kind = if n_std >= 0.0 {
        OptionKind::Call
    } else {
        OptionKind::Put
    };
    let spec = OptionSpec::new(kind, strike, maturity, spot)?;
    let base_price = bs_price(&spec, sigma)?;
    let bumped_price = bs_price(&spec, sigma * vol_factor)?;
    let ln_ratio = ln_bs_price(&spec, sigma * vol_factor)? - ln_bs_price(&spec, sigma)?;
    let underflow = base_price < PRICE_FLOOR;
    let ratio = if underflow {
        f64::INFINITY
    } else {
        bumped_price / base_price
    };
    Ok(Multiplier {
        n_std,
        vol_factor,
        kind,
        strike,
        base_price,
        bumped_price,
        ratio,
        ln_ratio,
        underflow,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StraddleCheck {
    pub straddle_price: f64,
    /// `E|S_T − K|` under the lognormal risk-neutral density, by quadrature.
    pub expected_abs_deviation: f64,
}

/// Compares the zero-rate straddle price with `∫|s − K| q(s) ds`.
pub fn straddle_conditional_moment_check(
    spot: f64,
    strike: f64,
    maturity: f64,
    sigma: f64,
) -> Result<StraddleCheck> {
    let spec = OptionSpec::new(OptionKind::Straddle, strike, maturity, spot)?;
    let straddle_price = bs_price(&spec, sigma)?;
    let sd = sigma * maturity.sqrt();
    let terminal = ScaleFamily::lognormal(spot.ln() - 0.5 * sd * sd, sd)?;
    let (lo, hi) = terminal.support();
    let mut breaks = terminal.landmarks();
    breaks.push(strike);
    let quad = Quadrature::with_abs_tol(1e-12);
    let expected_abs_deviation =
        quad.integrate_with_breaks(|s| (s - strike).abs() * terminal.pdf(s), lo, hi, &breaks)?;
    Ok(StraddleCheck {
        straddle_price,
        expected_abs_deviation,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JensenPoint {
    pub n_std: f64,
    pub strike: f64,
    pub single_vol_price: f64,
    pub mixture_price: f64,
    /// Volga at the lowest and highest σ the mixture visits.
    pub volga_low: f64,
    pub volga_high: f64,
}

impl JensenPoint {
    pub fn gain(&self) -> f64 {
        self.mixture_price - self.single_vol_price
    }
}

/// Mixture-vs-single-σ call prices across strikes `S·exp(nσ√T)`; `σ̄` is
/// the mixture's mean volatility.
pub fn jensen_sweep(
    spot: f64,
    maturity: f64,
    sigma: f64,
    mix: &MixtureSpec,
    n_stds: &[f64],
) -> Result<Vec<JensenPoint>> {
    let mean_sigma = sigma * mix.mean_multiplier();
    let (lo_m, hi_m) = multiplier_range(mix);
    n_stds
        .iter()
        .map(|&n| {
            let strike = otm_strike(spot, sigma, maturity, n);
            let spec = OptionSpec::new(OptionKind::Call, strike, maturity, spot)?;
            Ok(JensenPoint {
                n_std: n,
                strike,
                single_vol_price: bs_price(&spec, mean_sigma)?,
                mixture_price: mixture_price(&spec, sigma, mix)?,
                volga_low: greeks(&spec, sigma * lo_m)?.volga,
                volga_high: greeks(&spec, sigma * hi_m)?.volga,
            })
        })
        .collect()
}

fn multiplier_range(mix: &MixtureSpec) -> (f64, f64) {
    mix.components()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| {
            (lo.min(c.multiplier), hi.max(c.multiplier))
        })
}

/// Strikes in `[S·e^{−6σ√T}, S·e^{6σ√T}]` where the mixture effect on a call
/// changes sign (the shoulders of strike space).
pub fn mixture_effect_crossings(
    spot: f64,
    maturity: f64,
    sigma: f64,
    mix: &MixtureSpec,
) -> Result<Vec<f64>> {
    let mean_sigma = sigma * mix.mean_multiplier();
    let effect = |n: f64| -> f64 {
        let strike = otm_strike(spot, sigma, maturity, n);
        let spec = OptionSpec::new(OptionKind::Call, strike, maturity, spot).expect("valid strike");
        let mixed = mixture_price(&spec, sigma, mix).expect("valid sigma");
        let single = bs_price(&spec, mean_sigma).expect("valid sigma");
        mixed - single
    };
    ensure_positive("sigma", sigma)?;
    OptionSpec::new(OptionKind::Call, spot, maturity, spot)?;
    sign_change_brackets(effect, -6.0, 6.0, 240)
        .into_iter()
        .map(|(a, b)| {
            let n = if a == b {
                a
            } else {
                brent(effect, a, b, 1e-12, 200)?
            };
            Ok(otm_strike(spot, sigma, maturity, n))
        })
        .collect()
}

/// Strikes where a call's volga changes sign, found numerically on
/// `n ∈ [−6, 6]`.
pub fn volga_crossover_strikes(spot: f64, maturity: f64, sigma: f64) -> Result<Vec<f64>> {
    ensure_positive("sigma", sigma)?;
    OptionSpec::new(OptionKind::Call, spot, maturity, spot)?;
    let volga = |n: f64| -> f64 {
        let strike = otm_strike(spot, sigma, maturity, n);
        let spec = OptionSpec::new(OptionKind::Call, strike, maturity, spot).expect("valid strike");
        greeks(&spec, sigma).expect("valid sigma").volga
    };
    sign_change_brackets(volga, -6.0, 6.0, 240)
        .into_iter()
        .map(|(a, b)| {
            let n = if a == b {
                a
            } else {
                brent(volga, a, b, 1e-13, 200)?
            };
            Ok(otm_strike(spot, sigma, maturity, n))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::PerturbationDelta;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn call(strike: f64) -> OptionSpec {
        OptionSpec::new(OptionKind::Call, strike, 1.0, 1.0).unwrap()
    }

    fn two_point(d: f64) -> MixtureSpec {
        MixtureSpec::two_point(PerturbationDelta::new(d).unwrap())
    }

    #[test]
    fn atm_call_closed_form() {
        let p = bs_price(&call(1.0), 0.2).unwrap();
        assert_abs_diff_eq!(p, 2.0 * norm_cdf(0.1) - 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p, 0.079_656, epsilon = 1e-6);
    }

    #[test]
    fn vanishing_vol_leaves_intrinsic() {
        assert!(bs_price(&call(1.2), 1e-9).unwrap() < 1e-300);
        assert_abs_diff_eq!(bs_price(&call(0.8), 1e-9).unwrap(), 0.2, epsilon = 1e-15);
    }

    #[test]
    fn invalid_inputs() {
        assert!(bs_price(&call(1.0), 0.0).is_err());
        assert!(OptionSpec::new(OptionKind::Call, -1.0, 1.0, 1.0).is_err());
        assert!(OptionSpec::new(OptionKind::Call, 1.0, 0.0, 1.0).is_err());
        assert!(OptionSpec::new(OptionKind::Put, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn parity_with_rates() {
        for &(k, r, s) in &[
            (0.5, 0.03, 0.2),
            (1.0, 0.0, 0.4),
            (3.0, -0.01, 0.1),
            (1.1, 0.05, 1.5),
        ] {
            let c = OptionSpec::new(OptionKind::Call, k, 2.0, 1.3)
                .unwrap()
                .with_rate(r)
                .unwrap();
            let p = c.with_kind(OptionKind::Put);
            let lhs = bs_price(&c, s).unwrap() - bs_price(&p, s).unwrap();
            assert_abs_diff_eq!(lhs, 1.3 - k * (-r * 2.0_f64).exp(), epsilon = 1e-12);
        }
    }

    #[test]
    fn greeks_match_finite_differences() {
        let h = 1e-5;
        for &k in &[0.6, 0.9, 1.0, 1.3, (3.0_f64 * 0.2).exp()] {
            for kind in [OptionKind::Call, OptionKind::Put, OptionKind::Straddle] {
                let spec = OptionSpec::new(kind, k, 1.0, 1.0).unwrap();
                let g = greeks(&spec, 0.2).unwrap();
                let up = bs_price(&spec, 0.2 + h).unwrap();
                let mid = bs_price(&spec, 0.2).unwrap();
                let dn = bs_price(&spec, 0.2 - h).unwrap();
                assert_relative_eq!(g.vega, (up - dn) / (2.0 * h), max_relative = 1e-4);
                let fd_volga = (up - 2.0 * mid + dn) / (h * h);
                assert!(
                    (g.volga - fd_volga).abs() <= 1e-4 * g.volga.abs().max(1e-3),
                    "{k} {kind:?}"
                );
                assert!(g.vega >= 0.0);
            }
        }
    }

    #[test]
    fn volga_examples() {
        let atm = greeks(&call(1.0), 0.2).unwrap();
        assert!(atm.volga <= 0.0);
        // d1·d2/σ = −0.01/0.2 at the money
        assert_relative_eq!(atm.volga, -0.05 * atm.vega, max_relative = 1e-12);
        let otm = greeks(&call((3.0_f64 * 0.2).exp()), 0.2).unwrap();
        assert!(otm.volga > 0.0);
    }

    #[test]
    fn otm_strike_examples() {
        assert_eq!(otm_strike(1.0, 0.2, 1.0, 0.0), 1.0);
        assert_abs_diff_eq!(
            otm_strike(1.0, 0.2, 1.0, 5.0),
            std::f64::consts::E,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(otm_strike(1.0, 0.1, 0.25, 5.0), 1.284_025, epsilon = 1e-6);
    }

    #[test]
    fn mixture_price_examples() {
        let deep = call((0.6_f64).exp());
        let single = bs_price(&deep, 0.2).unwrap();
        let mixed = mixture_price(&deep, 0.2, &two_point(0.5)).unwrap();
        // mpmath: 0.000102725294, 0.001704049882
        assert_relative_eq!(single, 1.027_252_942_6e-4, max_relative = 1e-9);
        assert_relative_eq!(mixed, 1.704_049_882_1e-3, max_relative = 1e-9);
        assert!(mixed / single > 16.0);

        assert_eq!(
            mixture_price(&deep, 0.2, &MixtureSpec::degenerate()).unwrap(),
            single
        );

        let atm = mixture_price(&call(1.0), 0.2, &two_point(0.5)).unwrap();
        assert_abs_diff_eq!(atm, 0.079_556_498_2, epsilon = 1e-10);
    }

    #[test]
    fn quiz_examples() {
        let q = atm_fattening_quiz(1.0, 1.0, 0.2, &two_point(0.5)).unwrap();
        assert_abs_diff_eq!(q.change, -9.917_634_544e-5, epsilon = 1e-12);
        let z = atm_fattening_quiz(1.0, 1.0, 0.2, &two_point(0.0)).unwrap();
        assert_eq!(z.change, 0.0);
        let wide = atm_fattening_quiz(1.0, 1.0, 0.2, &two_point(0.75)).unwrap();
        assert!(wide.change < q.change);
        let biased = MixtureSpec::new([(0.5, 1.0), (0.5, 1.5)]).unwrap();
        assert!(atm_fattening_quiz(1.0, 1.0, 0.2, &biased).is_err());
    }

    #[test]
    fn multiplier_examples() {
        let m5 = otm_multiplier(5.0, 4.0, 1.0, 1.0, 0.05).unwrap();
        assert!(m5.ratio >= 16.0);
        // mpmath (50 digits): 3773116.627
        assert_relative_eq!(m5.ratio, 3_773_116.627_036_94, max_relative = 1e-8);
        let one = otm_multiplier(5.0, 1.0, 1.0, 1.0, 0.05).unwrap();
        assert_eq!(one.ratio, 1.0);
        let m10 = otm_multiplier(10.0, 4.0, 1.0, 1.0, 0.05).unwrap();
        let m20 = otm_multiplier(20.0, 4.0, 1.0, 1.0, 0.05).unwrap();
        assert_relative_eq!(m20.ratio, 1.554_102_474_385_694e83, max_relative = 1e-7);
        assert!(m10.ratio / m5.ratio > 1.0);
        assert!(m20.ratio / m10.ratio > m10.ratio / m5.ratio);
    }

    #[test]
    fn multiplier_below_one_for_falling_vol() {
        let m = otm_multiplier(5.0, 0.5, 1.0, 1.0, 0.2).unwrap();
        assert!(m.ratio < 1.0);
        assert!(m.base_price - m.bumped_price <= m.base_price);
    }

    #[test]
    fn multiplier_underflow_is_flagged() {
        let m = otm_multiplier(45.0, 4.0, 1.0, 1.0, 0.05).unwrap();
        assert!(m.underflow);
        assert!(m.ratio.is_infinite());
        assert!(m.ln_ratio.is_finite() && m.ln_ratio > 0.0);
        let put = otm_multiplier(-45.0, 4.0, 1.0, 1.0, 0.05).unwrap();
        assert_eq!(put.kind, OptionKind::Put);
        assert!(put.underflow);
    }

    #[test]
    fn straddle_examples() {
        let c = straddle_conditional_moment_check(1.0, 1.0, 1.0, 0.2).unwrap();
        assert_abs_diff_eq!(c.straddle_price, 0.159_311_349_108_115_9, epsilon = 1e-12);
        assert_abs_diff_eq!(c.straddle_price, c.expected_abs_deviation, epsilon = 1e-8);
        let c = straddle_conditional_moment_check(1.0, 1.5, 1.0, 0.2).unwrap();
        assert_abs_diff_eq!(c.straddle_price, c.expected_abs_deviation, epsilon = 1e-8);
        let c = straddle_conditional_moment_check(1.0, 1.3, 1.0, 1e-4).unwrap();
        assert_abs_diff_eq!(c.straddle_price, 0.3, epsilon = 1e-9);
        assert_abs_diff_eq!(c.expected_abs_deviation, 0.3, epsilon = 1e-8);
    }

    #[test]
    fn volga_zeros_match_closed_form() {
        // volga ∝ d1·d2 vanishes at K = F·exp(±σ²T/2)
        let zs = volga_crossover_strikes(1.0, 1.0, 0.2).unwrap();
        assert_eq!(zs.len(), 2);
        assert_relative_eq!(zs[0], (-0.02_f64).exp(), max_relative = 1e-10);
        assert_relative_eq!(zs[1], (0.02_f64).exp(), max_relative = 1e-10);
    }

    #[test]
    fn jensen_direction_follows_volga() {
        let mix = two_point(0.5);
        let ns: Vec<f64> = (-24..=24).map(|i| i as f64 * 0.25).collect();
        for p in jensen_sweep(1.0, 1.0, 0.2, &mix, &ns).unwrap() {
            if p.volga_low > 0.0 && p.volga_high > 0.0 {
                assert!(p.gain() > 0.0, "{p:?}");
            }
            if p.volga_low < 0.0 && p.volga_high < 0.0 {
                assert!(p.gain() < 0.0, "{p:?}");
            }
        }
        let band = mixture_effect_crossings(1.0, 1.0, 0.2, &mix).unwrap();
        assert_eq!(band.len(), 2);
        assert!(band[0] < 1.0 && band[1] > 1.0);
    }
}
