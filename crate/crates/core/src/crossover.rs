//! Crossover points of a scale family: the zeros of `∂²p/∂σ²`.
//!
//! The four points `a₁ < a₂ < a₃ < a₄` split the support into a peak
//! `(a₂, a₃)`, two shoulders and two tails. Under a small symmetric
//! σ-perturbation the density rises in the peak and the tails and falls on
//! the shoulders.

use serde::{Deserialize, Serialize};

use crate::distributions::{Family, PerturbationDelta, ScaleFamily};
use crate::error::{Error, Result};
use crate::numeric::roots::{brent, sign_change_brackets};

/// Half-width of the search window in units of scale.
const SEARCH_HALF_WIDTH: f64 = 10.0;
const SEARCH_CELLS: usize = 400;
const FD_REL_STEP: f64 = 1e-4;

/// `√((5 − √17)/2)`
pub fn gaussian_inner() -> f64 {
    ((5.0 - 17.0_f64.sqrt()) / 2.0).sqrt()
}

/// `√((5 + √17)/2)`
pub fn gaussian_outer() -> f64 {
    ((5.0 + 17.0_f64.sqrt()) / 2.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Tail,
    Shoulder,
    Peak,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossoverSet {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub mode: f64,
    pub family: ScaleFamily,
}

impl CrossoverSet {
    fn new(mut pts: [f64; 4], family: ScaleFamily) -> Result<Self> {
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mode = family.mode();
        let [a1, a2, a3, a4] = pts;
        let ordered = a1 < a2 && a2 < mode && mode < a3 && a3 < a4;
        let positive = family.family() != Family::Lognormal || a1 > 0.0;
        if !(ordered && positive) {
            return Err(Error::StructureNotFound(format!(
                "crossovers {pts:?} are not ordered around the mode {mode}"
            )));
        }
        Ok(Self {
            a1,
            a2,
            a3,
            a4,
            mode,
            family,
        })
    }

    pub fn points(&self) -> [f64; 4] {
        [self.a1, self.a2, self.a3, self.a4]
    }

    /// Peak on `(a₂, a₃)`, shoulder on `[a₁, a₂] ∪ [a₃, a₄]`, tail elsewhere.
    /// All four boundary points count as shoulder.
    pub fn classify(&self, x: f64) -> Region {
        if x > self.a2 && x < self.a3 {
            Region::Peak
        } else if (x >= self.a1 && x <= self.a2) || (x >= self.a3 && x <= self.a4) {
            Region::Shoulder
        } else {
            Region::Tail
        }
    }
}

pub fn region_classify(x: f64, set: &CrossoverSet) -> Region {
    set.classify(x)
}

pub fn gaussian_crossovers(mu: f64, sigma: f64) -> Result<CrossoverSet> {
    let family = ScaleFamily::gaussian(mu, sigma)?;
    let (inner, outer) = (gaussian_inner(), gaussian_outer());
    CrossoverSet::new(
        [
            mu - outer * sigma,
            mu - inner * sigma,
            mu + inner * sigma,
            mu + outer * sigma,
        ],
        family,
    )
}

/// Inner and outer Student-T crossover distances for unit scale.
fn student_offsets(alpha: f64) -> (f64, f64) {
    let root = ((alpha + 1.0) * (17.0 * alpha + 1.0)).sqrt();
    let inner = ((5.0 * alpha - root + 1.0) / (alpha - 1.0)).sqrt() / std::f64::consts::SQRT_2;
    let outer = ((5.0 * alpha + root + 1.0) / (alpha - 1.0)).sqrt() / std::f64::consts::SQRT_2;
    (inner, outer)
}

/// Crossovers of the centred Student-T with tail exponent `alpha` and scale `s`.
pub fn student_crossovers(alpha: f64, s: f64) -> Result<CrossoverSet> {
    let family = ScaleFamily::student_t(0.0, s, alpha)?;
    let (inner, outer) = student_offsets(alpha);
    CrossoverSet::new([-outer * s, -inner * s, inner * s, outer * s], family)
}

pub fn lognormal_crossovers(mu: f64, sigma: f64) -> Result<CrossoverSet> {
    let family = ScaleFamily::lognormal(mu, sigma)?;
    let (inner, outer) = (gaussian_inner(), gaussian_outer());
    CrossoverSet::new(
        [
            (mu - outer * sigma).exp(),
            (mu - inner * sigma).exp(),
            (mu + inner * sigma).exp(),
            (mu + outer * sigma).exp(),
        ],
        family,
    )
}

/// Closed-form crossovers for any of the three families.
pub fn analytic_crossovers(family: &ScaleFamily) -> Result<CrossoverSet> {
    let (mu, s) = (family.location(), family.scale());
    match family.family() {
        Family::Gaussian => gaussian_crossovers(mu, s),
        Family::Lognormal => lognormal_crossovers(mu, s),
        Family::StudentT => {
            let (inner, outer) = student_offsets(family.tail_exponent());
            CrossoverSet::new(
                [
                    mu - outer * s,
                    mu - inner * s,
                    mu + inner * s,
                    mu + outer * s,
                ],
                *family,
            )
        }
    }
}

/// Where the right tail starts for a Student-T: `a₄`.
pub fn tail_start(alpha: f64, s: f64) -> Result<f64> {
    Ok(student_crossovers(alpha, s)?.a4)
}

/// `∂²p/∂σ²` at `x` by a central second difference with step `10⁻⁴σ`.
pub fn scale_second_derivative(family: &ScaleFamily, x: f64) -> f64 {
    let s = family.scale();
    let h = FD_REL_STEP * s;
    let up = family.rescaled((s + h) / s).pdf(x);
    let mid = family.pdf(x);
    let down = family.rescaled((s - h) / s).pdf(x);
    (up - 2.0 * mid + down) / (h * h)
}

/// Finds exactly four sign changes of `g` on the family's search window and
/// refines each with Brent's method.
fn four_roots<G: Fn(f64) -> f64>(family: &ScaleFamily, g: G, what: &str) -> Result<[f64; 4]> {
    let s = family.scale();
    // Lognormal roots are located in log space, where the family is Gaussian.
    let log_space = family.family() == Family::Lognormal;
    let centre = if log_space {
        family.location()
    } else {
        family.mode()
    };
    let (lo, hi) = (
        centre - SEARCH_HALF_WIDTH * s,
        centre + SEARCH_HALF_WIDTH * s,
    );
    let f = |u: f64| if log_space { g(u.exp()) } else { g(u) };

    let brackets = sign_change_brackets(f, lo, hi, SEARCH_CELLS);
    if brackets.len() != 4 {
        return Err(Error::StructureNotFound(format!(
            "expected 4 sign changes of {what} on [{lo}, {hi}], found {}",
            brackets.len()
        )));
    }
    let mut out = [0.0; 4];
    for (slot, (a, b)) in out.iter_mut().zip(brackets) {
        let u = if a == b {
            a
        } else {
            brent(f, a, b, 1e-12 * s, 200)?
        };
        *slot = if log_space { u.exp() } else { u };
    }
    Ok(out)
}

/// Crossovers found numerically as the roots of `∂²p/∂σ²`.
pub fn numeric_crossovers(family: &ScaleFamily) -> Result<CrossoverSet> {
    let roots = four_roots(
        family,
        |x| scale_second_derivative(family, x),
        "d2p/dsigma2",
    )?;
    CrossoverSet::new(roots, *family)
}

/// The points where the δ-perturbed density actually crosses the base
/// density, i.e. the roots of `p^δ(x) − p(x)`. They converge to the
/// crossovers as δ → 0 and move inward for finite δ.
pub fn perturbation_crossings(
    family: &ScaleFamily,
    delta: PerturbationDelta,
) -> Result<CrossoverSet> {
    if delta.value() == 0.0 {
        return Err(Error::StructureNotFound(
            "a zero perturbation never crosses the base density".into(),
        ));
    }
    let roots = four_roots(
        family,
        |x| family.perturbed_pdf(delta, x) - family.pdf(x),
        "p_delta - p",
    )?;
    CrossoverSet::new(roots, *family)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionTally {
    pub region: Region,
    pub points: usize,
    pub violations: usize,
    /// Smallest signed margin in the region; negative means violated.
    pub worst_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TunnelReport {
    pub pass: bool,
    pub crossovers: [f64; 4],
    pub delta: f64,
    /// Smallest of `p^δ − p` (peak, tails) and `p − p^δ` (shoulders).
    pub worst_margin: f64,
    pub worst_point: Option<f64>,
    pub skipped: usize,
    pub regions: Vec<RegionTally>,
}

/// Checks the sign pattern `p^δ ≥ p` on the peak and the tails and
/// `p^δ ≤ p` on the shoulders, using the closed-form crossovers.
pub fn tunnel_inequality_check(
    family: &ScaleFamily,
    delta: PerturbationDelta,
    grid: &[f64],
) -> Result<TunnelReport> {
    let set = analytic_crossovers(family)?;
    Ok(tunnel_check_against(&set, delta, grid))
}

/// Same check against an arbitrary partition (for instance the exact
/// [`perturbation_crossings`]).
pub fn tunnel_check_against(
    set: &CrossoverSet,
    delta: PerturbationDelta,
    grid: &[f64],
) -> TunnelReport {
    let family = &set.family;
    let lognormal = family.family() == Family::Lognormal;
    let mut tallies = [Region::Peak, Region::Shoulder, Region::Tail].map(|region| RegionTally {
        region,
        points: 0,
        violations: 0,
        worst_margin: f64::INFINITY,
    });
    let mut skipped = 0;
    let mut worst_margin = f64::INFINITY;
    let mut worst_point = None;

    for &x in grid {
        if lognormal && x <= 0.0 {
            skipped += 1;
            continue;
        }
        let near = set.points().iter().any(|&a| {
            let radius = if lognormal {
                1e-3 * family.scale() * a
            } else {
                1e-3 * family.scale()
            };
            (x - a).abs() < radius
        });
        if near {
            skipped += 1;
            continue;
        }
        let region = set.classify(x);
        let diff = family.perturbed_pdf(delta, x) - family.pdf(x);
        let margin = match region {
            Region::Shoulder => -diff,
            Region::Peak | Region::Tail => diff,
        };
        let t = tallies.iter_mut().find(|t| t.region == region).unwrap();
        t.points += 1;
        if margin < 0.0 {
            t.violations += 1;
        }
        t.worst_margin = t.worst_margin.min(margin);
        if margin < worst_margin {
            worst_margin = margin;
            worst_point = Some(x);
        }
    }

    TunnelReport {
        pass: tallies.iter().all(|t| t.violations == 0),
        crossovers: set.points(),
        delta: delta.value(),
        worst_margin,
        worst_point,
        skipped,
        regions: tallies.to_vec(),
    }
}
