//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! Infinite ranges are mapped onto `[0, 1)` with `x = a + t/(1−t)`.
//! Breakpoints split the range before adaptation starts, which is how callers
//! tell the integrator about kinks (option strikes) and where the mass sits.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-12,
            max_intervals: 5000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Map {
    Finite,
    /// `x = origin + t/(1−t)`
    Upper(f64),
    /// `x = origin − t/(1−t)`
    Lower(f64),
}

impl Map {
    #[inline]
    fn eval<F: Fn(f64) -> f64>(self, f: &F, t: f64) -> f64 {
        match self {
            Map::Finite => f(t),
            Map::Upper(a) => {
                let u = 1.0 - t;
                f(a + t / u) / (u * u)
            }
            Map::Lower(b) => {
                let u = 1.0 - t;
                f(b - t / u) / (u * u)
            }
        }
    }
}

struct Piece {
    lo: f64,
    hi: f64,
    map: Map,
    value: f64,
    error: f64,
    frozen: bool,
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, map: Map, lo: f64, hi: f64) -> Result<(f64, f64)> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = map.eval(f, center);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let sum = map.eval(f, center - dx) + map.eval(f, center + dx);
        kron += WGK[j] * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    let value = kron * half;
    let error = ((kron - gauss) * half).abs();
    if !value.is_finite() || !error.is_finite() {
        return Err(Error::NumericFailure(format!(
            "integrand is not finite on [{lo}, {hi}]"
        )));
    }
    Ok((value, error))
}

impl Quadrature {
    pub fn with_abs_tol(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            ..Self::default()
        }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<f64> {
        self.integrate_with_breaks(f, a, b, &[])
    }

    /// Integrates `f` over `[a, b]` (either end may be infinite), splitting
    /// first at every breakpoint strictly inside the range.
    pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
        &self,
        f: F,
        a: f64,
        b: f64,
        breaks: &[f64],
    ) -> Result<f64> {
        if a.is_nan() || b.is_nan() {
            return Err(Error::NumericFailure("integration bound is NaN".into()));
        }
        if a == b {
            return Ok(0.0);
        }
        if a > b {
            return self.integrate_with_breaks(f, b, a, breaks).map(|v| -v);
        }

        let mut points: Vec<f64> = breaks
            .iter()
            .copied()
            .filter(|p| p.is_finite() && *p > a && *p < b)
            .collect();
        points.sort_by(|x, y| x.partial_cmp(y).unwrap());
        points.dedup();
        if points.is_empty() && a.is_infinite() && b.is_infinite() {
            points.push(0.0);
        }

        let mut edges = Vec::with_capacity(points.len() + 2);
        edges.push(a);
        edges.extend(points);
        edges.push(b);

        let mut pieces = Vec::with_capacity(64);
        for w in edges.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let (map, tlo, thi) = if lo.is_infinite() {
                (Map::Lower(hi), 0.0, 1.0)
            } else if hi.is_infinite() {
                (Map::Upper(lo), 0.0, 1.0)
            } else {
                (Map::Finite, lo, hi)
            };
            let (value, error) = kronrod(&f, map, tlo, thi)?;
            pieces.push(Piece {
                lo: tlo,
                hi: thi,
                map,
                value,
                error,
                frozen: false,
            });
        }

        loop {
            let total: f64 = pieces.iter().map(|p| p.value).sum();
            let err: f64 = pieces.iter().map(|p| p.error).sum();
            let tol = self.abs_tol.max(self.rel_tol * total.abs());
            if err <= tol {
                return Ok(total);
            }
            let worst = pieces
                .iter()
                .enumerate()
                .filter(|(_, p)| !p.frozen)
                .max_by(|(_, x), (_, y)| x.error.partial_cmp(&y.error).unwrap())
                .map(|(i, _)| i);
            let Some(i) = worst else {
                if err <= 1e3 * tol {
                    return Ok(total);
                }
                return Err(Error::NumericFailure(format!(
                    "quadrature stalled at roundoff: error estimate {err:e} exceeds tolerance {tol:e}"
                )));
            };
            if pieces.len() >= self.max_intervals {
                return Err(Error::NumericFailure(format!(
                    "quadrature did not converge in {} intervals (error estimate {err:e}, tolerance {tol:e})",
                    self.max_intervals
                )));
            }
            let (lo, hi, map) = (pieces[i].lo, pieces[i].hi, pieces[i].map);
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || (hi - lo) <= 1e-14 * lo.abs().max(hi.abs()) {
                pieces[i].frozen = true;
                continue;
            }
            let (lv, le) = kronrod(&f, map, lo, mid)?;
            let (rv, re) = kronrod(&f, map, mid, hi)?;
            pieces[i] = Piece {
                lo,
                hi: mid,
                map,
                value: lv,
                error: le,
                frozen: false,
            };
            pieces.push(Piece {
                lo: mid,
                hi,
                map,
                value: rv,
                error: re,
                frozen: false,
            });
        }
    }
}
