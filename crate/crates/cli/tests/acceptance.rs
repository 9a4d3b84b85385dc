//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fail.

mod common;

use std::process::ExitCode;

use fattails::barbell::{compare_dollar_for_dollar, run_strategy, Mode, PortfolioSpec};
use fattails::crossover::{
    analytic_crossovers, gaussian_crossovers, numeric_crossovers, perturbation_crossings,
    student_crossovers, tunnel_check_against, tunnel_inequality_check,
};
use fattails::distributions::{
    quadrature_moments, MixtureSpec, PerturbationDelta, ScaleFamily, ScaleMixture,
};
use fattails::numeric::Quadrature;
use fattails::pricing::{
    atm_fattening_quiz, bs_price, mixture_price, otm_multiplier, otm_strike,
    straddle_conditional_moment_check, OptionKind, OptionSpec,
};
use fattails::scenario::ScenarioPath;
use fattails::strategies::{
    build_backspread, build_calendar, fourth_moment_pnl, vega_summary, vol_of_vol_exposure,
    AtmQuantity, BackspreadSpec, VegaWeighting,
};
use fattails::vix::{convexity_demo, variance_strip_value, VolEpisodes};

type Outcome = Result<(bool, String), fattails::Error>;
type Criterion = (&'static str, fn() -> Outcome);

fn delta(d: f64) -> PerturbationDelta {
    PerturbationDelta::new(d).unwrap()
}

/// Collects failing sub-checks; the criterion passes if there are none.
#[derive(Default)]
struct Checks {
    failed: Vec<String>,
    seen: usize,
}

impl Checks {
    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.seen += 1;
        if !ok {
            self.failed.push(what());
        }
    }

    fn finish(self, summary: String) -> Outcome {
        if self.failed.is_empty() {
            Ok((true, format!("{summary} ({} checks)", self.seen)))
        } else {
            Ok((
                false,
                format!("{summary}; failed: {}", self.failed.join("; ")),
            ))
        }
    }
}

fn c01_gaussian_crossovers() -> Outcome {
    let got = gaussian_crossovers(0.0, 1.0)?.points();
    let reference = [-2.13, -0.66, 0.66, 2.13];
    let mut c = Checks::default();
    for (i, (g, r)) in got.iter().zip(reference).enumerate() {
        c.expect((g - r).abs() <= 0.005, || {
            format!("a{} = {g:.6} is {:.5} from {r}", i + 1, (g - r).abs())
        });
    }
    c.finish(format!("a = {got:.6?}"))
}

fn c02_cubic_student() -> Outcome {
    let got = student_crossovers(3.0, 1.0)?.points();
    let r13 = 13f64.sqrt();
    let want = [
        -(4.0 + r13).sqrt(),
        -(4.0 - r13).sqrt(),
        (4.0 - r13).sqrt(),
        (4.0 + r13).sqrt(),
    ];
    let mut c = Checks::default();
    for (g, w) in got.iter().zip(want) {
        c.expect((g - w).abs() <= 1e-12, || format!("{g} vs {w}"));
    }
    c.finish(format!("a = {got:.12?}"))
}

fn c03_gaussian_limit() -> Outcome {
    let t = student_crossovers(1e6, 1.0)?.points();
    let g = gaussian_crossovers(0.0, 1.0)?.points();
    let worst = t
        .iter()
        .zip(g)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok((
        worst < 1e-3,
        format!("max |Student(1e6) - Gaussian| = {worst:.2e} (tol 1e-3)"),
    ))
}

fn c04_numeric_vs_analytic() -> Outcome {
    let mut fams = vec![ScaleFamily::gaussian(0.0, 1.0)?];
    for alpha in [3.0, 4.0, 10.0] {
        fams.push(ScaleFamily::student_t(0.0, 1.0, alpha)?);
    }
    for s in [0.1, 0.25, 0.5] {
        fams.push(ScaleFamily::lognormal(0.0, s)?);
    }
    let mut c = Checks::default();
    let mut worst: f64 = 0.0;
    for fam in &fams {
        let a = analytic_crossovers(fam)?.points();
        let n = numeric_crossovers(fam)?.points();
        let tol = 1e-6 * fam.scale();
        for (x, y) in a.iter().zip(n) {
            let d = (x - y).abs();
            worst = worst.max(d / fam.scale());
            c.expect(d <= tol, || format!("{fam:?}: {x} vs {y}"));
        }
    }
    c.finish(format!(
        "worst |numeric - analytic| / scale = {worst:.2e} (tol 1e-6)"
    ))
}

fn c05_tail_location() -> Outcome {
    let mut c = Checks::default();
    let mut range = (f64::INFINITY, f64::NEG_INFINITY);
    for alpha in [3.0, 3.5, 4.0, 5.0, 7.0, 10.0, 30.0, 100.0, 1e3, 1e6, 1e9] {
        for s in [0.5, 1.0, 4.0] {
            let r = student_crossovers(alpha, s)?.points()[3] / s;
            range = (range.0.min(r), range.1.max(r));
            c.expect(r > 2.13 && r < 2.80, || {
                format!("alpha {alpha}: a4/s = {r}")
            });
        }
    }
    c.finish(format!("a4/s spans [{:.6}, {:.6}]", range.0, range.1))
}

fn unit_grid(step: f64, half_width: f64) -> Vec<f64> {
    let n = (half_width / step).round() as i64;
    (-n..=n).map(|k| k as f64 * step).collect()
}

fn c06_tunnel() -> Outcome {
    let grid = unit_grid(0.05, 6.0);
    let mut c = Checks::default();
    let mut exact_ok = true;
    for fam in [
        ScaleFamily::gaussian(0.0, 1.0)?,
        ScaleFamily::student_t(0.0, 1.0, 3.0)?,
    ] {
        for d in [0.25, 0.5, 0.75] {
            let r = tunnel_inequality_check(&fam, delta(d), &grid)?;
            c.expect(r.pass, || {
                let bad: usize = r.regions.iter().map(|t| t.violations).sum();
                format!(
                    "{:?} δ={d}: {bad} points, worst {:.2e} at x={:?}",
                    fam.family(),
                    r.worst_margin,
                    r.worst_point
                )
            });
            let exact =
                tunnel_check_against(&perturbation_crossings(&fam, delta(d))?, delta(d), &grid);
            exact_ok &= exact.pass;
        }
    }
    c.finish(format!(
        "partition at exact finite-δ crossings passes: {exact_ok}"
    ))
}

fn c07_atm_quiz() -> Outcome {
    let mut c = Checks::default();
    let mut pinned = f64::NAN;
    for d in [0.25, 0.5, 0.75] {
        for sigma in [0.1, 0.2, 0.4] {
            let q = atm_fattening_quiz(1.0, 1.0, sigma, &MixtureSpec::two_point(delta(d)))?;
            c.expect(q.change < 0.0, || {
                format!("δ={d} σ={sigma}: change {}", q.change)
            });
            if d == 0.5 && sigma == 0.2 {
                pinned = q.change;
            }
        }
    }
    c.expect((pinned + 0.000163).abs() <= 1e-6, || {
        format!("δ=0.5 σ=0.2 change {pinned:.9} vs -0.000163 ± 1e-6")
    });
    c.finish(format!(
        "all 9 drops negative, δ=0.5 σ=0.2 change {pinned:.9}"
    ))
}

fn c08_deep_otm() -> Outcome {
    let mut c = Checks::default();
    let sigma = 0.2;
    let spec = OptionSpec::new(OptionKind::Call, otm_strike(1.0, sigma, 1.0, 3.0), 1.0, 1.0)?;
    let single = bs_price(&spec, sigma)?;
    let mixed = mixture_price(&spec, sigma, &MixtureSpec::two_point(delta(0.5)))?;
    let gain = mixed / single;
    c.expect(gain >= 10.0, || format!("3-STD gain {gain:.3}x"));

    let m = |n| otm_multiplier(n, 4.0, 1.0, 1.0, 0.05).map(|m| m.ratio);
    let (m5, m10, m20) = (m(5.0)?, m(10.0)?, m(20.0)?);
    let (r_hi, r_lo) = (m20 / m10, m10 / m5);
    c.expect(r_hi > r_lo && r_lo > 1.0, || {
        format!("M20/M10 {r_hi:e}, M10/M5 {r_lo:e}")
    });
    c.finish(format!(
        "3-STD gain {gain:.4}x; M20/M10 = {r_hi:.4e} > M10/M5 = {r_lo:.4e} > 1"
    ))
}

fn c09_straddle() -> Outcome {
    let mut c = Checks::default();
    let mut worst: f64 = 0.0;
    for k in [0.8, 1.0, 1.25] {
        for sigma in [0.1, 0.2, 0.4] {
            let r = straddle_conditional_moment_check(1.0, k, 1.0, sigma)?;
            let d = (r.straddle_price - r.expected_abs_deviation).abs();
            worst = worst.max(d);
            c.expect(d <= 1e-8, || format!("K={k} σ={sigma}: {d:e}"));
        }
    }
    c.finish(format!("max |straddle - E|S-K|| = {worst:.2e} (tol 1e-8)"))
}

fn c10_vix_convexity() -> Outcome {
    let r = convexity_demo(&VolEpisodes::new(vec![4.0, 15.0], 10.0)?);
    let mut c = Checks::default();
    c.expect(r.arithmetic_mean == 9.5, || {
        format!("mean {}", r.arithmetic_mean)
    });
    c.expect((r.rms - 10.977).abs() <= 1e-3, || format!("rms {}", r.rms));
    c.expect((r.variance_pnl - 20.5).abs() <= 1e-3, || {
        format!("pnl {}", r.variance_pnl)
    });
    c.finish(format!(
        "mean {}, rms {:.6}, variance P&L {:+.6}",
        r.arithmetic_mean, r.rms, r.variance_pnl
    ))
}

fn c11_strip() -> Outcome {
    let (sigma, t) = (0.2, 30.0 / 365.0);
    let v = variance_strip_value(1.0, sigma, t, (0.3, 3.0), 0.005)?.variance;
    let h = variance_strip_value(1.0, sigma, t, (0.3, 3.0), 0.0025)?.variance;
    let (e1, e2) = (v / (sigma * sigma) - 1.0, h / (sigma * sigma) - 1.0);
    let mut c = Checks::default();
    c.expect(e1.abs() <= 0.01, || format!("step 0.005 error {e1:e}"));
    c.expect(e2.abs() <= 0.001, || format!("step 0.0025 error {e2:e}"));
    c.finish(format!(
        "relative error {e1:.3e} at step 0.005, {e2:.3e} at 0.0025"
    ))
}

fn c12_backspread() -> Outcome {
    let sigma = 0.2;
    let pkg = build_backspread(&BackspreadSpec {
        spot: 100.0,
        sigma,
        maturity: 30.0 / 365.0,
        put_strike: 90.0,
        call_strike: 110.0,
        otm_quantity: 10.0,
        atm: AtmQuantity::VegaNeutral,
    })?;
    let mut c = Checks::default();
    c.expect(
        pkg.satisfies_credit_rule() && pkg.net_cash_flow() >= 0.0,
        || format!("net cash {}", pkg.net_cash_flow()),
    );
    let v = vega_summary(&pkg, sigma, VegaWeighting::default())?;
    c.expect(v.modified_vega.abs() < 1e-8 * v.gross_vega, || {
        format!(
            "modified vega {:e} vs gross {}",
            v.modified_vega, v.gross_vega
        )
    });
    let mut pnls = Vec::new();
    for d in [0.25, 0.5, 0.75] {
        let p = fourth_moment_pnl(&pkg, sigma, &MixtureSpec::two_point(delta(d)), true)?;
        c.expect(p > 0.0, || format!("δ={d} P&L {p}"));
        pnls.push(p);
    }
    c.finish(format!(
        "net cash {:.4}, |MV|/gross {:.1e}, fat-tail P&L {pnls:.4?}",
        pkg.net_cash_flow(),
        v.modified_vega.abs() / v.gross_vega
    ))
}

fn c13_calendar() -> Outcome {
    let sigma = 0.2;
    let pkg = build_calendar(100.0, sigma, 100.0, 1.0, OptionKind::Straddle)?;
    let vov = vol_of_vol_exposure(&pkg, sigma, &MixtureSpec::two_point(delta(0.5)))?;
    let v = vega_summary(&pkg, sigma, VegaWeighting::default())?;
    let mut c = Checks::default();
    c.expect(vov > 0.0, || format!("vol-of-vol exposure {vov}"));
    c.expect(v.flatness() < 0.25, || {
        format!("|MV|/gross {}", v.flatness())
    });
    c.finish(format!(
        "vol-of-vol exposure {vov:.6}, |MV|/gross {:.4}",
        v.flatness()
    ))
}

fn c14_barbell() -> Outcome {
    let spec = PortfolioSpec::default();
    let mut c = Checks::default();

    let crash = compare_dollar_for_dollar(&spec, &ScenarioPath::crash_rally())?;
    let (ins, unins) = (crash.summary(Mode::Insured), crash.summary(Mode::Uninsured));
    c.expect(ins.max_drawdown < unins.max_drawdown, || {
        format!(
            "drawdown insured {} vs uninsured {}",
            ins.max_drawdown, unins.max_drawdown
        )
    });

    let calm = ScenarioPath::from_pairs([(0.02, 0.2), (0.0, 0.15), (0.01, 0.18), (-0.03, 0.25)])?;
    let ins_run = run_strategy(&spec, &calm, Mode::Insured)?;
    let unins_run = run_strategy(&spec, &calm, Mode::Uninsured)?;
    let gap = unins_run.terminal_wealth() - ins_run.terminal_wealth();
    let premium = ins_run.total_premium();
    c.expect(ins_run.total_settlement() == 0.0, || {
        "puts paid off on the calm path".into()
    });
    c.expect(
        (gap - premium).abs() <= 1e-12 * unins_run.terminal_wealth(),
        || format!("gap {gap:e} vs premiums {premium:e}"),
    );

    let mut worst: f64 = 0.0;
    for path in [ScenarioPath::crash_rally(), calm] {
        for mode in [Mode::Insured, Mode::Uninsured, Mode::Sidelined] {
            for rec in run_strategy(&spec, &path, mode)?.periods {
                let r = rec.conservation_residual().abs() / rec.wealth_end.abs().max(1.0);
                worst = worst.max(r);
            }
        }
    }
    c.expect(worst <= 1e-12, || {
        format!("conservation residual {worst:e}")
    });
    c.finish(format!(
        "drawdown {:.4} vs {:.4}; calm gap - premiums {:.1e}; residual {worst:.1e}",
        ins.max_drawdown,
        unins.max_drawdown,
        gap - premium
    ))
}

fn c15_kurtosis() -> Outcome {
    let base = ScaleFamily::gaussian(0.0, 1.0)?;
    let mut c = Checks::default();
    let k0 = base.moments()?.kurtosis;
    c.expect(k0 == 3.0, || format!("Gaussian kurtosis {k0}"));
    let ks = (0..=99)
        .map(|i| {
            ScaleMixture::perturbed(base, delta(i as f64 / 100.0))
                .moments()
                .map(|m| m.kurtosis)
        })
        .collect::<fattails::Result<Vec<_>>>()?;
    c.expect(ks.windows(2).all(|w| w[1] > w[0]), || {
        "kurtosis not increasing in δ".into()
    });
    let mix = ScaleMixture::perturbed(base, delta(0.75));
    let exact = mix.moments()?.kurtosis;
    let quad = quadrature_moments(&mix, &Quadrature::default())?.kurtosis;
    for (label, k) in [("moments", exact), ("quadrature", quad)] {
        c.expect((k - 5.7649).abs() <= 1e-4, || format!("{label} {k}"));
    }
    c.finish(format!(
        "δ=0.75 kurtosis {exact:.6} (moments), {quad:.6} (quadrature)"
    ))
}

fn c16_cli_determinism() -> Outcome {
    let mut c = Checks::default();
    for (name, args) in common::CASES {
        let mut full = args.to_vec();
        full.extend(["--format", "json"]);
        let first = common::run(&full);
        let second = common::run(&full);
        c.expect(first.status.success(), || {
            format!("{name} exited {:?}", first.status.code())
        });
        c.expect(first.stdout == second.stdout, || {
            format!("{name} output differs between runs")
        });
        let golden = common::golden_dir().join(format!("{name}.json"));
        let matched = std::fs::read_to_string(&golden)
            .ok()
            .and_then(|g| serde_json::from_str(&g).ok())
            .zip(serde_json::from_slice(&first.stdout).ok())
            .map(|(want, got)| common::close(&got, &want, name));
        c.expect(matches!(matched, Some(Ok(()))), || match matched {
            Some(Err(e)) => format!("golden mismatch {e}"),
            _ => format!("{name}: golden file or output unreadable"),
        });
    }
    c.finish(format!(
        "{} subcommand invocations run twice and compared to goldens",
        common::CASES.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 16] = [
        (
            "Gaussian crossovers within 0.005 of ±0.66, ±2.13",
            c01_gaussian_crossovers,
        ),
        ("cubic Student-T crossovers ±√(4∓√13)", c02_cubic_student),
        (
            "Student-T(1e6) crossovers approach Gaussian",
            c03_gaussian_limit,
        ),
        (
            "numeric crossovers match closed forms",
            c04_numeric_vs_analytic,
        ),
        (
            "tail start a4/s in (2.13, 2.80) for α ≥ 3",
            c05_tail_location,
        ),
        ("tunnel sign pattern on 0.05 grid", c06_tunnel),
        (
            "ATM value drops under mean-preserving mixtures",
            c07_atm_quiz,
        ),
        (
            "deep OTM Jensen gain and multiplier acceleration",
            c08_deep_otm,
        ),
        ("straddle equals E|S_T - K|", c09_straddle),
        (
            "volatility convexity 9.5 / 10.977 / +20.5",
            c10_vix_convexity,
        ),
        ("variance strip recovers σ²", c11_strip),
        (
            "backspread credit rule, vega neutrality, fat-tail P&L",
            c12_backspread,
        ),
        (
            "calendar vol-of-vol exposure and flat modified vega",
            c13_calendar,
        ),
        (
            "barbell drawdown, premium drag and conservation",
            c14_barbell,
        ),
        ("kurtosis of δ-perturbed Gaussian", c15_kurtosis),
        ("CLI determinism and golden files", c16_cli_determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (pass, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
        if !pass {
            failures += 1;
        }
        println!(
            "{} {:>2} {name}: {detail}",
            if pass { "PASS" } else { "FAIL" },
            i + 1
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
