//! Scale-family densities, stochastic-volatility mixtures and their moments.
//!
//! A [`ScaleFamily`] is a unimodal density with a location and a single scale
//! parameter. Stochastic volatility enters as a [`MixtureSpec`]: a weighted set
//! of multipliers applied to that scale. The symmetric two-point mixture
//! `½ p_{σ(1−δ)} + ½ p_{σ(1+δ)}` is the δ-perturbation used throughout the
//! crate to fatten tails.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::numeric::special::{ln_beta, norm_pdf};
use crate::numeric::Quadrature;

/// Above this tail exponent a Student-T is evaluated as a Gaussian.
pub const GAUSSIAN_LIMIT_ALPHA: f64 = 1e7;

const LANDMARK_SCALES: [f64; 17] = [
    -12.0, -8.0, -6.0, -4.0, -3.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gaussian,
    #[serde(rename = "student")]
    StudentT,
    Lognormal,
}

/// A density with a location and one scale parameter.
///
/// For `Lognormal` the location and scale are the mean and standard deviation
/// of `ln X`. For `StudentT` the scale is `s`, not the standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleFamily {
    family: Family,
    location: f64,
    scale: f64,
    tail_exponent: f64,
}

/// Something with a density that can be integrated.
pub trait Density {
    fn pdf(&self, x: f64) -> f64;

    /// Open support `(lo, hi)`.
    fn support(&self) -> (f64, f64);

    /// Points where the mass is concentrated; quadrature splits there.
    fn landmarks(&self) -> Vec<f64>;

    /// `∫ g(x) p(x) dx` over the support.
    fn expectation<G: Fn(f64) -> f64>(&self, g: G, quad: &Quadrature) -> Result<f64>
    where
        Self: Sized,
    {
        let (lo, hi) = self.support();
        quad.integrate_with_breaks(|x| g(x) * self.pdf(x), lo, hi, &self.landmarks())
    }

    /// Probability of `(lo, hi)`, clipped to the support.
    fn probability(&self, lo: f64, hi: f64, quad: &Quadrature) -> Result<f64> {
        let (slo, shi) = self.support();
        let (lo, hi) = (lo.max(slo), hi.min(shi));
        if lo >= hi {
            return Ok(0.0);
        }
        quad.integrate_with_breaks(|x| self.pdf(x), lo, hi, &self.landmarks())
    }
}

impl ScaleFamily {
    pub fn gaussian(location: f64, scale: f64) -> Result<Self> {
        ensure_finite("location", location)?;
        ensure_positive("scale", scale)?;
        Ok(Self {
            family: Family::Gaussian,
            location,
            scale,
            tail_exponent: f64::INFINITY,
        })
    }

    /// Student-T with tail exponent `alpha > 1`.
    pub fn student_t(location: f64, scale: f64, alpha: f64) -> Result<Self> {
        ensure_finite("location", location)?;
        ensure_positive("scale", scale)?;
        if alpha.is_nan() || alpha <= 1.0 {
            return Err(Error::invalid(
                "alpha",
                format!("tail exponent must exceed 1, got {alpha}"),
            ));
        }
        Ok(Self {
            family: Family::StudentT,
            location,
            scale,
            tail_exponent: alpha,
        })
    }

    pub fn lognormal(location: f64, scale: f64) -> Result<Self> {
        ensure_finite("location", location)?;
        ensure_positive("scale", scale)?;
        Ok(Self {
            family: Family::Lognormal,
            location,
            scale,
            tail_exponent: f64::INFINITY,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn location(&self) -> f64 {
        self.location
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `α`; infinite for Gaussian and Lognormal.
    pub fn tail_exponent(&self) -> f64 {
        self.tail_exponent
    }

    pub fn with_scale(&self, scale: f64) -> Result<Self> {
        ensure_positive("scale", scale)?;
        Ok(Self { scale, ..*self })
    }

    /// Same family with the scale multiplied by a positive factor.
    pub(crate) fn rescaled(&self, factor: f64) -> Self {
        debug_assert!(factor > 0.0);
        Self {
            scale: self.scale * factor,
            ..*self
        }
    }

    fn behaves_gaussian(&self) -> bool {
        match self.family {
            Family::Gaussian => true,
            Family::StudentT => self.tail_exponent > GAUSSIAN_LIMIT_ALPHA,
            Family::Lognormal => false,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.family != Family::Lognormal
    }

    pub fn mode(&self) -> f64 {
        match self.family {
            Family::Gaussian | Family::StudentT => self.location,
            Family::Lognormal => (self.location - self.scale * self.scale).exp(),
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let s = self.scale;
        match self.family {
            Family::Lognormal => {
                if x <= 0.0 {
                    0.0
                } else {
                    norm_pdf((x.ln() - self.location) / s) / (x * s)
                }
            }
            _ if self.behaves_gaussian() => norm_pdf((x - self.location) / s) / s,
            _ => {
                let a = self.tail_exponent;
                let z = (x - self.location) / s;
                let ln_p = -0.5 * (a + 1.0) * (z * z / a).ln_1p()
                    - 0.5 * a.ln()
                    - s.ln()
                    - ln_beta(0.5 * a, 0.5);
                ln_p.exp()
            }
        }
    }

    /// `½(p_{σ(1+δ)}(x) + p_{σ(1−δ)}(x))`; equals [`pdf`](Self::pdf) at δ = 0.
    pub fn perturbed_pdf(&self, delta: PerturbationDelta, x: f64) -> f64 {
        let d = delta.value();
        0.5 * (self.rescaled(1.0 + d).pdf(x) + self.rescaled(1.0 - d).pdf(x))
    }

    /// Location-shift variant `½(p(x+δ) + p(x−δ))`.
    pub fn location_perturbed_pdf(&self, delta: f64, x: f64) -> f64 {
        0.5 * (self.pdf(x + delta) + self.pdf(x - delta))
    }

    pub fn mixture_pdf(&self, mix: &MixtureSpec, x: f64) -> f64 {
        mix.components
            .iter()
            .map(|c| c.weight * self.rescaled(c.multiplier).pdf(x))
            .sum()
    }

    pub fn mean(&self) -> Result<f64> {
        Ok(match self.family {
            Family::Gaussian | Family::StudentT => self.location,
            Family::Lognormal => (self.location + 0.5 * self.scale * self.scale).exp(),
        })
    }

    pub fn variance(&self) -> Result<f64> {
        let s2 = self.scale * self.scale;
        match self.family {
            Family::Gaussian => Ok(s2),
            Family::StudentT => {
                let a = self.tail_exponent;
                if a <= 2.0 {
                    return Err(Error::MomentUndefined {
                        order: 2,
                        reason: format!("Student-T variance needs alpha > 2, got {a}"),
                    });
                }
                if a.is_infinite() {
                    Ok(s2)
                } else {
                    Ok(s2 * a / (a - 2.0))
                }
            }
            Family::Lognormal => Ok(s2.exp_m1() * (2.0 * self.location + s2).exp()),
        }
    }

    /// Fourth central moment over squared variance.
    pub fn kurtosis(&self) -> Result<f64> {
        match self.family {
            Family::Gaussian => Ok(3.0),
            Family::StudentT => {
                let a = self.tail_exponent;
                if a <= 4.0 {
                    return Err(Error::MomentUndefined {
                        order: 4,
                        reason: format!("Student-T kurtosis needs alpha > 4, got {a}"),
                    });
                }
                Ok(3.0 + 6.0 / (a - 4.0))
            }
            Family::Lognormal => {
                let s2 = self.scale * self.scale;
                Ok((4.0 * s2).exp() + 2.0 * (3.0 * s2).exp() + 3.0 * (2.0 * s2).exp() - 3.0)
            }
        }
    }

    pub fn moments(&self) -> Result<Moments> {
        Ok(Moments {
            mean: self.mean()?,
            variance: self.variance()?,
            kurtosis: self.kurtosis()?,
        })
    }

    /// Mean and variance of a `ScaleFamily` rescaled by every mixture
    /// multiplier, combined into the mixture's moments.
    fn mixture_moments(&self, mix: &MixtureSpec) -> Result<Moments> {
        if self.is_symmetric() {
            // shared centre: central moments scale as m^k
            let var = self.variance()?;
            let kurt = self.kurtosis()?;
            let m2 = mix.moment(2);
            let m4 = mix.moment(4);
            Ok(Moments {
                mean: self.location,
                variance: var * m2,
                kurtosis: kurt * m4 / (m2 * m2),
            })
        } else {
            let raw = |k: f64| -> f64 {
                mix.components
                    .iter()
                    .map(|c| {
                        let s = self.scale * c.multiplier;
                        c.weight * (k * self.location + 0.5 * k * k * s * s).exp()
                    })
                    .sum()
            };
            let (r1, r2, r3, r4) = (raw(1.0), raw(2.0), raw(3.0), raw(4.0));
            let variance = r2 - r1 * r1;
            let c4 = r4 - 4.0 * r1 * r3 + 6.0 * r1 * r1 * r2 - 3.0 * r1.powi(4);
            Ok(Moments {
                mean: r1,
                variance,
                kurtosis: c4 / (variance * variance),
            })
        }
    }
}

impl Density for ScaleFamily {
    fn pdf(&self, x: f64) -> f64 {
        ScaleFamily::pdf(self, x)
    }

    fn support(&self) -> (f64, f64) {
        match self.family {
            Family::Lognormal => (0.0, f64::INFINITY),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    fn landmarks(&self) -> Vec<f64> {
        LANDMARK_SCALES
            .iter()
            .map(|k| match self.family {
                Family::Lognormal => (self.location + k * self.scale).exp(),
                _ => self.location + k * self.scale,
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
    pub kurtosis: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixtureComponent {
    pub weight: f64,
    pub multiplier: f64,
}

/// Weighted scale multipliers; weights sum to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureSpec {
    components: Vec<MixtureComponent>,
}

impl MixtureSpec {
    /// Builds a mixture from `(weight, multiplier)` pairs.
    pub fn new(components: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let components: Vec<_> = components
            .into_iter()
            .map(|(weight, multiplier)| MixtureComponent { weight, multiplier })
            .collect();
        if components.is_empty() {
            return Err(Error::invalid("mixture", "needs at least one component"));
        }
        for c in &components {
            if !(c.weight > 0.0 && c.weight <= 1.0) {
                return Err(Error::invalid(
                    "mixture",
                    format!("weights must lie in (0, 1], got {}", c.weight),
                ));
            }
            if !(c.multiplier.is_finite() && c.multiplier > 0.0) {
                return Err(Error::invalid(
                    "mixture",
                    format!("multipliers must be finite and > 0, got {}", c.multiplier),
                ));
            }
        }
        let total: f64 = components.iter().map(|c| c.weight).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(
                "mixture",
                format!("weights must sum to 1 within 1e-12, got {total}"),
            ));
        }
        Ok(Self { components })
    }

    /// The single component `(1, 1)`.
    pub fn degenerate() -> Self {
        Self {
            components: vec![MixtureComponent {
                weight: 1.0,
                multiplier: 1.0,
            }],
        }
    }

    /// `{(½, 1−δ), (½, 1+δ)}`.
    pub fn two_point(delta: PerturbationDelta) -> Self {
        let d = delta.value();
        Self {
            components: vec![
                MixtureComponent {
                    weight: 0.5,
                    multiplier: 1.0 - d,
                },
                MixtureComponent {
                    weight: 0.5,
                    multiplier: 1.0 + d,
                },
            ],
        }
    }

    pub fn components(&self) -> &[MixtureComponent] {
        &self.components
    }

    /// `Σ wᵢ mᵢ^k`.
    pub fn moment(&self, k: i32) -> f64 {
        self.components
            .iter()
            .map(|c| c.weight * c.multiplier.powi(k))
            .sum()
    }

    pub fn mean_multiplier(&self) -> f64 {
        self.moment(1)
    }

    /// Multipliers rescaled by `(Σ wᵢ mᵢ²)^{−1/2}` so the mixture keeps the
    /// base variance and only the higher moments change.
    pub fn variance_matched(&self) -> Self {
        let norm = self.moment(2).sqrt();
        Self {
            components: self
                .components
                .iter()
                .map(|c| MixtureComponent {
                    weight: c.weight,
                    multiplier: c.multiplier / norm,
                })
                .collect(),
        }
    }

    /// True when every multiplier is identical.
    pub fn is_degenerate(&self) -> bool {
        let m0 = self.components[0].multiplier;
        self.components.iter().all(|c| c.multiplier == m0)
    }
}

/// Symmetric σ-perturbation amplitude, `0 ≤ δ < 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct PerturbationDelta(f64);

impl PerturbationDelta {
    pub fn new(delta: f64) -> Result<Self> {
        if (0.0..1.0).contains(&delta) {
            Ok(Self(delta))
        } else {
            Err(Error::invalid(
                "delta",
                format!("must lie in [0, 1), got {delta}"),
            ))
        }
    }

    pub fn zero() -> Self {
        Self(0.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// A scale family under a stochastic-volatility mixture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleMixture {
    pub base: ScaleFamily,
    pub mix: MixtureSpec,
}

impl ScaleMixture {
    pub fn new(base: ScaleFamily, mix: MixtureSpec) -> Self {
        Self { base, mix }
    }

    pub fn perturbed(base: ScaleFamily, delta: PerturbationDelta) -> Self {
        Self::new(base, MixtureSpec::two_point(delta))
    }

    pub fn moments(&self) -> Result<Moments> {
        self.base.mixture_moments(&self.mix)
    }
}

impl Density for ScaleMixture {
    fn pdf(&self, x: f64) -> f64 {
        self.base.mixture_pdf(&self.mix, x)
    }

    fn support(&self) -> (f64, f64) {
        self.base.support()
    }

    fn landmarks(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self
            .mix
            .components
            .iter()
            .flat_map(|c| self.base.rescaled(c.multiplier).landmarks())
            .collect();
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        pts
    }
}

/// Mean, variance and kurtosis by direct quadrature of the density.
pub fn quadrature_moments<D: Density>(density: &D, quad: &Quadrature) -> Result<Moments> {
    let mass = density.expectation(|_| 1.0, quad)?;
    let mean = density.expectation(|x| x, quad)? / mass;
    let variance = density.expectation(|x| (x - mean).powi(2), quad)? / mass;
    let fourth = density.expectation(|x| (x - mean).powi(4), quad)? / mass;
    Ok(Moments {
        mean,
        variance,
        kurtosis: fourth / (variance * variance),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuasiconcavityViolation {
    pub x: f64,
    pub y: f64,
    pub omega: f64,
    /// `min(p(x), p(y)) − p(ωx + (1−ω)y)`, positive.
    pub shortfall: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuasiconcavityReport {
    pub holds: bool,
    pub triples_checked: usize,
    /// The violation with the largest shortfall.
    pub worst: Option<QuasiconcavityViolation>,
}

/// Checks `p(ωx + (1−ω)y) ≥ min(p(x), p(y))` for every grid pair inside the
/// support and `ω ∈ {0.1, …, 0.9}`.
pub fn quasiconcavity_check<D: Density>(density: &D, grid: &[f64]) -> QuasiconcavityReport {
    let (lo, hi) = density.support();
    let pts: Vec<(f64, f64)> = grid
        .iter()
        .copied()
        .filter(|x| *x > lo && *x < hi)
        .map(|x| (x, density.pdf(x)))
        .collect();

    let mut checked = 0;
    let mut worst: Option<QuasiconcavityViolation> = None;
    for (i, &(x, px)) in pts.iter().enumerate() {
        for &(y, py) in &pts[i + 1..] {
            let floor = px.min(py);
            for k in 1..=9 {
                let omega = k as f64 / 10.0;
                let z = omega * x + (1.0 - omega) * y;
                let shortfall = floor - density.pdf(z);
                checked += 1;
                // a few ulps of slack for the pdf evaluation itself
                if shortfall > 4.0 * f64::EPSILON * floor
                    && worst.is_none_or(|w| shortfall > w.shortfall)
                {
                    worst = Some(QuasiconcavityViolation {
                        x,
                        y,
                        omega,
                        shortfall,
                    });
                }
            }
        }
    }
    QuasiconcavityReport {
        holds: worst.is_none(),
        triples_checked: checked,
        worst,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TunnelMass {
    pub base: f64,
    pub perturbed: f64,
}

/// Probability of `(lo, hi)` under the base density and under its
/// δ-perturbation. Either bound may be infinite.
pub fn tunnel_mass(
    family: &ScaleFamily,
    delta: PerturbationDelta,
    lo: f64,
    hi: f64,
) -> Result<TunnelMass> {
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::invalid(
            "interval",
            format!("need lo < hi, got ({lo}, {hi})"),
        ));
    }
    let quad = Quadrature::default();
    let base = family.probability(lo, hi, &quad)?;
    let perturbed = if delta.value() == 0.0 {
        base
    } else {
        ScaleMixture::perturbed(*family, delta).probability(lo, hi, &quad)?
    };
    Ok(TunnelMass { base, perturbed })
}

/// `1/π`, the Cauchy density at its centre.
pub const CAUCHY_PEAK: f64 = 1.0 / PI;

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn std_gaussian() -> ScaleFamily {
        ScaleFamily::gaussian(0.0, 1.0).unwrap()
    }

    fn d(v: f64) -> PerturbationDelta {
        PerturbationDelta::new(v).unwrap()
    }

    #[test]
    fn pdf_examples() {
        let g = std_gaussian();
        assert_abs_diff_eq!(g.pdf(0.0), 0.398_942_280_401_432_7, epsilon = 1e-15);
        assert_abs_diff_eq!(
            g.pdf(3.0),
            (-4.5_f64).exp() / (2.0 * PI).sqrt(),
            epsilon = 1e-17
        );
        let cauchy = ScaleFamily::student_t(0.0, 1.0, 1.0 + 1e-15).unwrap();
        assert_abs_diff_eq!(cauchy.pdf(0.0), CAUCHY_PEAK, epsilon = 1e-12);
    }

    #[test]
    fn invalid_parameters() {
        assert!(ScaleFamily::gaussian(0.0, 0.0).is_err());
        assert!(ScaleFamily::gaussian(0.0, -1.0).is_err());
        assert!(ScaleFamily::student_t(0.0, 1.0, 1.0).is_err());
        assert!(ScaleFamily::lognormal(0.0, f64::NAN).is_err());
        assert!(PerturbationDelta::new(1.0).is_err());
        assert!(PerturbationDelta::new(-0.1).is_err());
        assert!(MixtureSpec::new(Vec::<(f64, f64)>::new()).is_err());
        assert!(MixtureSpec::new([(0.5, 1.0), (0.4, 1.0)]).is_err());
        assert!(MixtureSpec::new([(0.5, 1.0), (0.5, 0.0)]).is_err());
    }

    #[test]
    fn lognormal_outside_support_is_zero() {
        let ln = ScaleFamily::lognormal(0.0, 0.25).unwrap();
        assert_eq!(ln.pdf(0.0), 0.0);
        assert_eq!(ln.pdf(-1.0), 0.0);
    }

    #[test]
    fn perturbed_pdf_examples() {
        let g = std_gaussian();
        let expect0 = 0.5 * (g.rescaled(1.5).pdf(0.0) + g.rescaled(0.5).pdf(0.0));
        assert_abs_diff_eq!(g.perturbed_pdf(d(0.5), 0.0), expect0, epsilon = 1e-16);
        assert_abs_diff_eq!(g.perturbed_pdf(d(0.5), 0.0), 0.531_923, epsilon = 1e-6);
        assert_abs_diff_eq!(g.perturbed_pdf(d(0.5), 1.0), 0.160_474, epsilon = 1e-6);
        assert!(g.perturbed_pdf(d(0.5), 1.0) < g.pdf(1.0));
        for x in [-3.0, -0.2, 0.0, 1.7] {
            assert_eq!(g.perturbed_pdf(PerturbationDelta::zero(), x), g.pdf(x));
        }
    }

    #[test]
    fn mixture_pdf_examples() {
        let g = std_gaussian();
        let mix = MixtureSpec::new([(0.5, 0.5), (0.5, 1.5)]).unwrap();
        assert_eq!(g.mixture_pdf(&mix, 0.0), g.perturbed_pdf(d(0.5), 0.0));
        assert_eq!(g.mixture_pdf(&MixtureSpec::degenerate(), 2.0), g.pdf(2.0));
        assert_abs_diff_eq!(g.pdf(2.0), 0.053_991, epsilon = 1e-6);
        let tail = g.mixture_pdf(&mix, 3.0);
        assert_abs_diff_eq!(tail, 0.017_997, epsilon = 1e-6);
        assert!(tail > g.pdf(3.0));
    }

    #[test]
    fn location_perturbation_is_a_separate_operation() {
        let g = std_gaussian();
        let v = g.location_perturbed_pdf(0.5, 0.0);
        assert_abs_diff_eq!(v, g.pdf(0.5), epsilon = 1e-16);
        assert!(v < g.pdf(0.0));
    }

    #[test]
    fn kurtosis_examples() {
        assert_eq!(std_gaussian().kurtosis().unwrap(), 3.0);
        let m = ScaleMixture::perturbed(std_gaussian(), d(0.75))
            .moments()
            .unwrap();
        let (s1, s2) = (0.25_f64, 1.75_f64);
        let expected = 6.0 * (s1.powi(4) + s2.powi(4)) / (s1 * s1 + s2 * s2).powi(2);
        assert_abs_diff_eq!(m.kurtosis, expected, epsilon = 1e-12);
        assert_abs_diff_eq!(m.kurtosis, 5.7648, epsilon = 1e-4);
        let t = ScaleFamily::student_t(0.0, 1.0, 4.5).unwrap();
        assert_abs_diff_eq!(t.kurtosis().unwrap(), 15.0, epsilon = 1e-12);
    }

    #[test]
    fn undefined_moments_are_errors() {
        let t = ScaleFamily::student_t(0.0, 1.0, 3.0).unwrap();
        assert!(t.variance().is_ok());
        assert!(matches!(
            t.kurtosis(),
            Err(Error::MomentUndefined { order: 4, .. })
        ));
        let t = ScaleFamily::student_t(0.0, 1.0, 2.0).unwrap();
        assert!(matches!(
            t.variance(),
            Err(Error::MomentUndefined { order: 2, .. })
        ));
        assert!(ScaleMixture::perturbed(t, d(0.5)).moments().is_err());
    }

    #[test]
    fn lognormal_mixture_moments_reduce_to_closed_form() {
        let ln = ScaleFamily::lognormal(0.1, 0.3).unwrap();
        let single = ScaleMixture::new(ln, MixtureSpec::degenerate())
            .moments()
            .unwrap();
        let closed = ln.moments().unwrap();
        assert_abs_diff_eq!(single.mean, closed.mean, epsilon = 1e-14);
        assert!((single.variance / closed.variance - 1.0).abs() < 1e-12);
        assert!((single.kurtosis / closed.kurtosis - 1.0).abs() < 1e-8);
    }

    #[test]
    fn quasiconcavity_examples() {
        let grid: Vec<f64> = (0..=80).map(|i| -4.0 + 0.1 * i as f64).collect();
        assert!(quasiconcavity_check(&std_gaussian(), &grid).holds);
        let t3 = ScaleFamily::student_t(0.0, 1.0, 3.0).unwrap();
        assert!(quasiconcavity_check(&t3, &grid).holds);

        struct TwoHumps;
        impl Density for TwoHumps {
            fn pdf(&self, x: f64) -> f64 {
                0.5 * norm_pdf(x - 3.0) + 0.5 * norm_pdf(x + 3.0)
            }
            fn support(&self) -> (f64, f64) {
                (f64::NEG_INFINITY, f64::INFINITY)
            }
            fn landmarks(&self) -> Vec<f64> {
                vec![-3.0, 0.0, 3.0]
            }
        }
        let report = quasiconcavity_check(&TwoHumps, &grid);
        assert!(!report.holds);
        let v = report.worst.unwrap();
        assert_abs_diff_eq!(v.x, -3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(v.y, 3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(v.omega, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_grid_is_vacuous() {
        let r = quasiconcavity_check(&std_gaussian(), &[0.0, 1.0]);
        assert!(r.holds);
        let ln = ScaleFamily::lognormal(0.0, 1.0).unwrap();
        assert!(quasiconcavity_check(&ln, &[-2.0, -1.0, 0.0]).holds);
    }

    #[test]
    fn tunnel_mass_examples() {
        let g = std_gaussian();
        let a = ((5.0 - 17.0_f64.sqrt()) / 2.0).sqrt();
        let m = tunnel_mass(&g, d(0.5), -a, a).unwrap();
        // 2Φ(a) − 1 with a = 0.662153 (scipy)
        assert_abs_diff_eq!(m.base, 0.492_127, epsilon = 1e-6);
        assert!(m.perturbed > m.base);

        let z = tunnel_mass(&g, PerturbationDelta::zero(), -a, a).unwrap();
        assert_eq!(z.base, z.perturbed);

        let tail = tunnel_mass(&g, d(0.5), 2.136, f64::INFINITY).unwrap();
        assert!(tail.perturbed > tail.base);

        assert!(tunnel_mass(&g, d(0.5), 1.0, 1.0).is_err());
    }
}
