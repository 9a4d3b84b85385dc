//! Fourth-moment option packages: the ratio backspread and the 60/20-day
//! calendar, with the credit rule, maturity-weighted vega and fat-tail P&L.

use serde::{Deserialize, Serialize};

use crate::distributions::MixtureSpec;
use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::numeric::special::norm_pdf;
use crate::numeric::Quadrature;
use crate::pricing::{bs_price, greeks, otm_strike, OptionKind, OptionSpec};

pub const CALENDAR_LONG_DAYS: f64 = 60.0;
pub const CALENDAR_SHORT_DAYS: f64 = 20.0;
pub const CALENDAR_SHORT_RATIO: f64 = 0.8;
pub const DAYS_PER_YEAR: f64 = 365.0;

/// Maturities within this of zero count as expired.
const EXPIRY_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Leg {
    option: OptionSpec,
    quantity: f64,
    inception_vol: f64,
    inception_premium: f64,
}

impl Leg {
    /// `quantity` is signed: positive long, negative short.
    pub fn new(option: OptionSpec, quantity: f64, inception_vol: f64) -> Result<Self> {
        ensure_finite("quantity", quantity)?;
        let unit = bs_price(&option, inception_vol)?;
        Ok(Self {
            option,
            quantity,
            inception_vol,
            inception_premium: quantity * unit,
        })
    }

    pub fn option(&self) -> &OptionSpec {
        &self.option
    }

    pub fn quantity(&self) -> f64 {
        self.quantity
    }

    pub fn inception_vol(&self) -> f64 {
        self.inception_vol
    }

    pub fn inception_premium(&self) -> f64 {
        self.inception_premium
    }

    /// Premium net of the present value of intrinsic (parity adjustment).
    pub fn adjusted_premium(&self) -> f64 {
        self.inception_premium - self.quantity * self.option.pv_intrinsic()
    }

    pub fn negated(&self) -> Self {
        Self {
            quantity: -self.quantity,
            inception_premium: -self.inception_premium,
            ..*self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Package {
    legs: Vec<Leg>,
    /// `−Σ premiums`; positive is a credit.
    net_cash_flow: f64,
    /// Net cash after deducting PV of intrinsic from in-the-money legs.
    adjusted_cash_flow: f64,
    credit_rule: bool,
}

impl Package {
    pub fn new(legs: Vec<Leg>) -> Result<Self> {
        if legs.is_empty() {
            return Err(Error::invalid("legs", "a package needs at least one leg"));
        }
        let net_cash_flow = -legs.iter().map(Leg::inception_premium).sum::<f64>();
        let adjusted_cash_flow = -legs.iter().map(Leg::adjusted_premium).sum::<f64>();
        let gross: f64 = legs.iter().map(|l| l.inception_premium.abs()).sum();
        Ok(Self {
            credit_rule: adjusted_cash_flow >= -1e-12 * gross.max(1.0),
            legs,
            net_cash_flow,
            adjusted_cash_flow,
        })
    }

    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    pub fn net_cash_flow(&self) -> f64 {
        self.net_cash_flow
    }

    pub fn adjusted_cash_flow(&self) -> f64 {
        self.adjusted_cash_flow
    }

    pub fn satisfies_credit_rule(&self) -> bool {
        self.credit_rule
    }

    /// Shortest leg maturity; the evaluation horizon for terminal P&L.
    pub fn horizon(&self) -> f64 {
        self.legs
            .iter()
            .map(|l| l.option.maturity())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn spot(&self) -> f64 {
        self.legs[0].option.spot()
    }

    pub fn negated(&self) -> Self {
        Self::new(self.legs.iter().map(Leg::negated).collect()).expect("non-empty")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AtmQuantity {
    /// Sell this many ATM straddles.
    Fixed(f64),
    /// Sell just enough straddles for zero adjusted cash flow.
    ZeroCredit,
    /// Sell the number of straddles that zeroes modified vega.
    VegaNeutral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BackspreadSpec {
    pub spot: f64,
    pub sigma: f64,
    pub maturity: f64,
    pub put_strike: f64,
    pub call_strike: f64,
    /// Long quantity on each wing.
    pub otm_quantity: f64,
    pub atm: AtmQuantity,
}

/// Wing strikes `n_std` log-moneyness standard deviations either side of spot.
pub fn symmetric_wings(spot: f64, sigma: f64, maturity: f64, n_std: f64) -> (f64, f64) {
    (
        otm_strike(spot, sigma, maturity, -n_std.abs()),
        otm_strike(spot, sigma, maturity, n_std.abs()),
    )
}

/// Long OTM puts and calls in size against a short ATM straddle, subject to
/// the credit rule.
pub fn build_backspread(spec: &BackspreadSpec) -> Result<Package> {
    ensure_positive("sigma", spec.sigma)?;
    if !(spec.otm_quantity.is_finite() && spec.otm_quantity >= 0.0) {
        return Err(Error::invalid(
            "otm_quantity",
            format!("must be ≥ 0, got {}", spec.otm_quantity),
        ));
    }
    if !(spec.put_strike < spec.call_strike) {
        return Err(Error::invalid(
            "put_strike",
            format!(
                "must be below call_strike ({} ≥ {})",
                spec.put_strike, spec.call_strike
            ),
        ));
    }
    let put = OptionSpec::new(OptionKind::Put, spec.put_strike, spec.maturity, spec.spot)?;
    let call = OptionSpec::new(OptionKind::Call, spec.call_strike, spec.maturity, spec.spot)?;
    let straddle = OptionSpec::new(OptionKind::Straddle, spec.spot, spec.maturity, spec.spot)?;
    let wings = vec![
        Leg::new(put, spec.otm_quantity, spec.sigma)?,
        Leg::new(call, spec.otm_quantity, spec.sigma)?,
    ];

    let unit_straddle = Leg::new(straddle, 1.0, spec.sigma)?;
    let wing_cost: f64 = wings.iter().map(Leg::adjusted_premium).sum();
    let min_atm_quantity = wing_cost / unit_straddle.adjusted_premium();

    let sold = match spec.atm {
        AtmQuantity::Fixed(q) => {
            if !(q.is_finite() && q >= 0.0) {
                return Err(Error::invalid(
                    "atm_quantity",
                    format!("must be ≥ 0, got {q}"),
                ));
            }
            q
        }
        AtmQuantity::ZeroCredit => min_atm_quantity,
        AtmQuantity::VegaNeutral => {
            let template = NeutralTemplate {
                fixed: wings.clone(),
                free: straddle,
                free_vol: spec.sigma,
            };
            -solve_neutral_ratio(&template, spec.sigma, VegaWeighting::default())?
        }
    };

    let mut legs = wings;
    legs.push(Leg::new(straddle, -sold, spec.sigma)?);
    let pkg = Package::new(legs)?;
    if !pkg.satisfies_credit_rule() {
        return Err(Error::CreditRuleViolation {
            adjusted_cash_flow: pkg.adjusted_cash_flow,
            min_atm_quantity,
        });
    }
    Ok(pkg)
}

/// `+long` at 60 days against `−0.8·long` at 20 days, same strike.
pub fn build_calendar(
    spot: f64,
    sigma: f64,
    strike: f64,
    long_amount: f64,
    kind: OptionKind,
) -> Result<Package> {
    if !(long_amount.is_finite() && long_amount >= 0.0) {
        return Err(Error::invalid(
            "long_amount",
            format!("must be ≥ 0, got {long_amount}"),
        ));
    }
    ensure_positive("sigma", sigma)?;
    let long = OptionSpec::new(kind, strike, CALENDAR_LONG_DAYS / DAYS_PER_YEAR, spot)?;
    let short = long.with_maturity(CALENDAR_SHORT_DAYS / DAYS_PER_YEAR)?;
    Package::new(vec![
        Leg::new(long, long_amount, sigma)?,
        Leg::new(short, -CALENDAR_SHORT_RATIO * long_amount, sigma)?,
    ])
}

/// Marks every leg at `sigma` and `spot` after `time_elapsed` years; legs
/// past expiry settle at intrinsic.
pub fn package_value(pkg: &Package, sigma: f64, spot: f64, time_elapsed: f64) -> Result<f64> {
    ensure_positive("sigma", sigma)?;
    ensure_positive("spot", spot)?;
    if !(time_elapsed.is_finite() && time_elapsed >= 0.0) {
        return Err(Error::invalid(
            "time_elapsed",
            format!("must be ≥ 0, got {time_elapsed}"),
        ));
    }
    pkg.legs
        .iter()
        .map(|leg| Ok(leg.quantity * leg_value(leg, sigma, spot, time_elapsed)?))
        .sum()
}

fn leg_value(leg: &Leg, sigma: f64, spot: f64, time_elapsed: f64) -> Result<f64> {
    let remaining = leg.option.maturity() - time_elapsed;
    if remaining <= EXPIRY_EPS {
        return Ok(leg.option.payoff(spot));
    }
    let live = leg.option.with_spot(spot)?.with_maturity(remaining)?;
    bs_price(&live, sigma)
}

/// Maturity weighting for vega: each leg's vega is scaled by
/// `(reference_maturity / leg_maturity)^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VegaWeighting {
    pub reference_maturity: f64,
    pub exponent: f64,
}

impl Default for VegaWeighting {
    fn default() -> Self {
        Self {
            reference_maturity: 30.0 / DAYS_PER_YEAR,
            exponent: 0.5,
        }
    }
}

impl VegaWeighting {
    pub fn with_reference(reference_maturity: f64) -> Result<Self> {
        ensure_positive("reference_maturity", reference_maturity)?;
        Ok(Self {
            reference_maturity,
            ..Self::default()
        })
    }

    fn weight(&self, maturity: f64) -> f64 {
        (self.reference_maturity / maturity).powf(self.exponent)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VegaSummary {
    pub modified_vega: f64,
    /// `Σ |leg vega|`, unweighted
    pub gross_vega: f64,
}

impl VegaSummary {
    pub fn flatness(&self) -> f64 {
        if self.gross_vega == 0.0 {
            0.0
        } else {
            self.modified_vega.abs() / self.gross_vega
        }
    }
}

pub fn vega_summary(pkg: &Package, sigma: f64, weighting: VegaWeighting) -> Result<VegaSummary> {
    let mut modified_vega = 0.0;
    let mut gross_vega = 0.0;
    for leg in &pkg.legs {
        let raw = leg.quantity * greeks(&leg.option, sigma)?.vega;
        modified_vega += raw * weighting.weight(leg.option.maturity());
        gross_vega += raw.abs();
    }
    Ok(VegaSummary {
        modified_vega,
        gross_vega,
    })
}

pub fn modified_vega(pkg: &Package, sigma: f64, weighting: VegaWeighting) -> Result<f64> {
    Ok(vega_summary(pkg, sigma, weighting)?.modified_vega)
}

fn unit_modified_vega(option: &OptionSpec, sigma: f64, weighting: VegaWeighting) -> Result<f64> {
    Ok(greeks(option, sigma)?.vega * weighting.weight(option.maturity()))
}

/// Fixed legs plus one option whose quantity is left free.
#[derive(Debug, Clone, PartialEq)]
pub struct NeutralTemplate {
    pub fixed: Vec<Leg>,
    pub free: OptionSpec,
    pub free_vol: f64,
}

/// Signed quantity of the free option that zeroes modified vega. The
/// problem is linear in that quantity so the solution is exact.
pub fn solve_neutral_ratio(
    template: &NeutralTemplate,
    sigma: f64,
    weighting: VegaWeighting,
) -> Result<f64> {
    ensure_positive("sigma", sigma)?;
    let fixed: f64 = template
        .fixed
        .iter()
        .map(|l| Ok(l.quantity * unit_modified_vega(&l.option, sigma, weighting)?))
        .sum::<Result<f64>>()?;
    let unit = unit_modified_vega(&template.free, sigma, weighting)?;
    let scale = template
        .fixed
        .iter()
        .map(|l| {
            (l.quantity * unit_modified_vega(&l.option, sigma, weighting).unwrap_or(0.0)).abs()
        })
        .sum::<f64>();
    if unit == 0.0 || unit.abs() <= 1e-14 * scale {
        return Err(Error::StructureNotFound(
            "free leg has no vega to offset the fixed legs".into(),
        ));
    }
    Ok(-fixed / unit)
}

fn effective_mix(mix: &MixtureSpec, variance_matched: bool) -> MixtureSpec {
    if variance_matched {
        mix.variance_matched()
    } else {
        mix.clone()
    }
}

/// `E[V_h(S_h)]` under a driftless lognormal with total vol `vol·√h`.
/// Legs alive past the horizon are marked at their inception vol.
fn expected_horizon_value(pkg: &Package, vol: f64, quad: &Quadrature) -> Result<f64> {
    let h = pkg.horizon();
    let spot = pkg.spot();
    let sd = vol * h.sqrt();
    let s_of = |z: f64| spot * (sd * z - 0.5 * sd * sd).exp();
    let mut breaks: Vec<f64> = pkg
        .legs
        .iter()
        .map(|l| ((l.option.strike() / spot).ln() + 0.5 * sd * sd) / sd)
        .collect();
    breaks.extend([-8.0, -4.0, -2.0, 0.0, 2.0, 4.0, 8.0]);
    let failure = std::cell::Cell::new(None);
    let value = quad.integrate_with_breaks(
        |z| {
            let weight = norm_pdf(z);
            if weight == 0.0 {
                return 0.0;
            }
            let s = s_of(z);
            let mut v = 0.0;
            for leg in &pkg.legs {
                match leg_value(leg, leg.inception_vol, s, h) {
                    Ok(x) => v += leg.quantity * x,
                    Err(e) => {
                        failure.set(Some(e));
                        return f64::NAN;
                    }
                }
            }
            v * weight
        },
        f64::NEG_INFINITY,
        f64::INFINITY,
        &breaks,
    );
    match failure.into_inner() {
        Some(e) => Err(e),
        None => value,
    }
}

/// Expected horizon P&L under the σ-mixture minus the same under a single
/// σ_base lognormal. The premium is common to both and cancels.
pub fn fourth_moment_pnl(
    pkg: &Package,
    sigma_base: f64,
    mix: &MixtureSpec,
    variance_matched: bool,
) -> Result<f64> {
    ensure_positive("sigma", sigma_base)?;
    if mix.is_degenerate() {
        return Ok(0.0);
    }
    let mix = effective_mix(mix, variance_matched);
    let scale: f64 = pkg
        .legs
        .iter()
        .map(|l| (l.quantity * l.option.spot()).abs())
        .sum::<f64>()
        .max(1e-300);
    let quad = Quadrature::with_abs_tol(1e-13 * scale);
    let base = expected_horizon_value(pkg, sigma_base, &quad)?;
    let mut mixed = 0.0;
    for c in mix.components() {
        mixed += c.weight * expected_horizon_value(pkg, sigma_base * c.multiplier, &quad)?;
    }
    Ok(mixed - base)
}

/// Package value with σ realised up to the horizon; legs expiring later
/// keep their inception vol for the remainder of their life.
fn value_under_realised_vol(pkg: &Package, sigma: f64) -> Result<f64> {
    let h = pkg.horizon();
    pkg.legs
        .iter()
        .map(|leg| {
            let t = leg.option.maturity();
            let var = (sigma * sigma * h + leg.inception_vol.powi(2) * (t - h).max(0.0)) / t;
            Ok(leg.quantity * bs_price(&leg.option, var.sqrt())?)
        })
        .sum()
}

/// `E_σ[V(σ)] − V(E[σ])` over the σ-mixture `sigma_base·mᵢ`; positive means
/// long volatility of volatility.
pub fn vol_of_vol_exposure(pkg: &Package, sigma_base: f64, mix: &MixtureSpec) -> Result<f64> {
    ensure_positive("sigma", sigma_base)?;
    if mix.is_degenerate() {
        return Ok(0.0);
    }
    let mut expected = 0.0;
    for c in mix.components() {
        expected += c.weight * value_under_realised_vol(pkg, sigma_base * c.multiplier)?;
    }
    let at_mean = value_under_realised_vol(pkg, sigma_base * mix.mean_multiplier())?;
    Ok(expected - at_mean)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourthMomentCheck {
    pub flatness: f64,
    pub vega_neutral: bool,
    /// `fourth_moment_pnl` for each tested mixture, variance matched.
    pub pnl: Vec<f64>,
    pub pnl_positive: bool,
}

impl FourthMomentCheck {
    pub fn passes(&self) -> bool {
        self.vega_neutral && self.pnl_positive
    }
}

/// A package is a fourth-moment bet when it is (near) flat modified vega and
/// gains from variance-matched tail fattening.
pub fn fourth_moment_check(
    pkg: &Package,
    sigma: f64,
    mixes: &[MixtureSpec],
    flatness_tolerance: f64,
) -> Result<FourthMomentCheck> {
    let flatness = vega_summary(pkg, sigma, VegaWeighting::default())?.flatness();
    let pnl = mixes
        .iter()
        .map(|m| fourth_moment_pnl(pkg, sigma, m, true))
        .collect::<Result<Vec<_>>>()?;
    Ok(FourthMomentCheck {
        flatness,
        vega_neutral: flatness <= flatness_tolerance,
        pnl_positive: !pnl.is_empty() && pnl.iter().all(|&p| p > 0.0),
        pnl,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PayoffProfile {
    pub horizon: f64,
    pub spots: Vec<f64>,
    /// Value at the horizon plus the inception cash flow.
    pub pnl: Vec<f64>,
    /// `(σ, value at inception)`.
    pub value_vs_sigma: Vec<(f64, f64)>,
}

pub fn payoff_profile(pkg: &Package, spots: &[f64], sigmas: &[f64]) -> Result<PayoffProfile> {
    for grid in [spots, sigmas] {
        if grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid("grid", "must be strictly increasing"));
        }
    }
    let h = pkg.horizon();
    let pnl = spots
        .iter()
        .map(|&s| {
            let v: f64 = pkg
                .legs
                .iter()
                .map(|l| Ok(l.quantity * leg_value(l, l.inception_vol, s, h)?))
                .sum::<Result<f64>>()?;
            Ok(v + pkg.net_cash_flow)
        })
        .collect::<Result<Vec<_>>>()?;
    let value_vs_sigma = sigmas
        .iter()
        .map(|&sig| Ok((sig, package_value(pkg, sig, pkg.spot(), 0.0)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(PayoffProfile {
        horizon: h,
        spots: spots.to_vec(),
        pnl,
        value_vs_sigma,
    })
}
