use std::fmt;
use std::path::Path;

use fattails::barbell::{compare_dollar_for_dollar, Mode, PortfolioSpec};
use fattails::crossover::{
    analytic_crossovers, gaussian_crossovers, gaussian_inner, gaussian_outer, lognormal_crossovers,
    numeric_crossovers, perturbation_crossings, region_classify, scale_second_derivative,
    student_crossovers, tail_start, tunnel_check_against, tunnel_inequality_check, CrossoverSet,
};
use fattails::distributions::{
    quadrature_moments, quasiconcavity_check, tunnel_mass, Family, MixtureSpec, PerturbationDelta,
    ScaleFamily, ScaleMixture,
};
use fattails::numeric::Quadrature;
use fattails::pricing::{
    atm_fattening_quiz, greeks, jensen_sweep, ln_bs_price, mixture_effect_crossings,
    otm_multiplier, payoff, straddle_conditional_moment_check, volga_crossover_strikes, OptionKind,
    OptionSpec,
};
use fattails::scenario::ScenarioPath;
use fattails::strategies::{
    build_backspread, build_calendar, fourth_moment_check, fourth_moment_pnl, modified_vega,
    package_value, payoff_profile, solve_neutral_ratio, symmetric_wings, vega_summary,
    vol_of_vol_exposure, AtmQuantity, BackspreadSpec, NeutralTemplate, Package, VegaWeighting,
    CALENDAR_SHORT_DAYS, DAYS_PER_YEAR,
};
use fattails::vix::{
    convexity_demo, proxy_divergence_scenario, variance_strip_value, ProxyConfig, VolEpisodes,
};
use serde_json::{json, Value};

use crate::output::{echo, Cell, Report, Table};
use crate::{
    BackspreadArgs, BarbellArgs, CalendarArgs, CrossoversArgs, DensityArgs, FamilyArg, FamilySel,
    JensenArgs, KindArg, MultiplierArgs, PriceArgs, QuizArgs, StraddleArgs, StripArgs, TunnelArgs,
    VixArgs,
};

#[derive(Debug)]
pub enum CliError {
    /// Bad flag value caught before reaching the library.
    Flag {
        flag: String,
        reason: String,
    },
    Lib(fattails::Error),
}

impl CliError {
    fn flag(flag: &str, reason: impl Into<String>) -> Self {
        CliError::Flag {
            flag: flag.to_string(),
            reason: reason.into(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Flag { .. } => 2,
            CliError::Lib(e) if e.is_parameter_error() => 2,
            CliError::Lib(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Flag { flag, reason } => write!(f, "{flag}: {reason}"),
            CliError::Lib(e @ fattails::Error::InvalidParameter { name, .. }) => {
                write!(f, "{}: {e}", flag_for(name))
            }
            CliError::Lib(e @ fattails::Error::CreditRuleViolation { .. }) => {
                write!(f, "--atm: {e}")
            }
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<fattails::Error> for CliError {
    fn from(e: fattails::Error) -> Self {
        CliError::Lib(e)
    }
}

/// Flag that feeds a library parameter of the given name.
fn flag_for(name: &str) -> String {
    let flag = match name {
        "alpha" | "scale" | "location" => "params",
        "long_amount" => "long",
        "tail_budget_per_period" => "budget",
        "numeraire_fraction" => "numeraire",
        "equity_fraction" => "equity",
        "otm_quantity" => "otm-qty",
        "atm_quantity" => "atm",
        "strike_lo" | "strike_range" => "lo",
        "strike_step" => "step",
        "implied_vol" | "equity_return" => "scenario",
        other => return format!("--{}", other.replace('_', "-")),
    };
    format!("--{flag}")
}

type Outcome = Result<Report, CliError>;

fn delta(flag: &str, d: f64) -> Result<PerturbationDelta, CliError> {
    PerturbationDelta::new(d).map_err(|e| CliError::flag(flag, e.to_string()))
}

fn two_point(flag: &str, d: f64) -> Result<MixtureSpec, CliError> {
    Ok(MixtureSpec::two_point(delta(flag, d)?))
}

fn build_family(sel: &FamilySel) -> Result<ScaleFamily, CliError> {
    let p = &sel.params;
    let expect = |allowed: &[usize], what: &str| {
        if allowed.contains(&p.len()) {
            Ok(())
        } else {
            Err(CliError::flag(
                "--params",
                format!("{what} expected, got {} values", p.len()),
            ))
        }
    };
    Ok(match sel.family {
        FamilyArg::Gaussian => {
            expect(&[2], "MU,SIGMA")?;
            ScaleFamily::gaussian(p[0], p[1])?
        }
        FamilyArg::Student => {
            expect(&[2, 3], "ALPHA,S[,LOCATION]")?;
            ScaleFamily::student_t(p.get(2).copied().unwrap_or(0.0), p[1], p[0])?
        }
        FamilyArg::Lognormal => {
            expect(&[2], "MU,SIGMA")?;
            ScaleFamily::lognormal(p[0], p[1])?
        }
    })
}

fn closed_form(sel: &FamilySel, fam: &ScaleFamily) -> Result<CrossoverSet, CliError> {
    let p = &sel.params;
    Ok(match sel.family {
        FamilyArg::Gaussian => gaussian_crossovers(p[0], p[1])?,
        FamilyArg::Student if fam.location() == 0.0 => student_crossovers(p[0], p[1])?,
        FamilyArg::Student => analytic_crossovers(fam)?,
        FamilyArg::Lognormal => lognormal_crossovers(p[0], p[1])?,
    })
}

/// `location + k·step·scale` (log-spaced for the lognormal).
fn grid(fam: &ScaleFamily, half_width: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(step.is_finite() && step > 0.0) {
        return Err(CliError::flag(
            "--grid-step",
            format!("must be > 0, got {step}"),
        ));
    }
    if !(half_width.is_finite() && half_width > 0.0) {
        return Err(CliError::flag(
            "--half-width",
            format!("must be > 0, got {half_width}"),
        ));
    }
    let n = (half_width / step).round() as i64;
    if n > 1_000_000 {
        return Err(CliError::flag("--grid-step", "grid too fine"));
    }
    Ok((-n..=n)
        .map(|k| {
            let z = fam.location() + k as f64 * step * fam.scale();
            if fam.family() == Family::Lognormal {
                z.exp()
            } else {
                z
            }
        })
        .collect())
}

fn read_scenario(path: &Path) -> Result<ScenarioPath, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::flag("--scenario", format!("{}: {e}", path.display())))?;
    text.parse::<ScenarioPath>()
        .map_err(|e| CliError::flag("--scenario", e.to_string()))
}

fn option_kind(k: KindArg) -> OptionKind {
    match k {
        KindArg::Call => OptionKind::Call,
        KindArg::Put => OptionKind::Put,
        KindArg::Straddle => OptionKind::Straddle,
    }
}

fn kind_name(k: OptionKind) -> &'static str {
    match k {
        OptionKind::Call => "call",
        OptionKind::Put => "put",
        OptionKind::Straddle => "straddle",
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types serialise")
}

pub fn crossovers(a: &CrossoversArgs) -> Outcome {
    let fam = build_family(&a.family)?;
    let set = closed_form(&a.family, &fam)?;
    let numeric = if a.numeric {
        Some(numeric_crossovers(&fam)?)
    } else {
        None
    };

    let mut cols = vec!["point", "analytic"];
    if numeric.is_some() {
        cols.extend(["numeric", "difference"]);
    }
    let mut t = Table::new("crossovers", &cols);
    for (i, x) in set.points().into_iter().enumerate() {
        let mut row: Vec<Cell> = vec![format!("a{}", i + 1).into(), x.into()];
        if let Some(n) = &numeric {
            let y = n.points()[i];
            row.extend([y.into(), (y - x).into()]);
        }
        t.row(row);
    }
    let mut extra = vec![("mode", Cell::from(set.mode))];
    let mut result = json!({
        "family": a.family.family,
        "points": set.points(),
        "mode": set.mode,
    });
    match a.family.family {
        FamilyArg::Student => {
            let ts = tail_start(a.family.params[0], a.family.params[1])?;
            extra.push(("tail_start", ts.into()));
            result["tail_start"] = json!(ts);
        }
        FamilyArg::Gaussian => {
            let std = [gaussian_inner(), gaussian_outer()];
            extra.push(("standard_inner", std[0].into()));
            extra.push(("standard_outer", std[1].into()));
            result["standardized"] = json!(std);
        }
        FamilyArg::Lognormal => {}
    }
    if let Some(n) = &numeric {
        let diff = n
            .points()
            .iter()
            .zip(set.points())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        extra.push(("max_abs_difference", diff.into()));
        result["numeric"] = json!(n.points());
        result["max_abs_difference"] = json!(diff);
    }
    Ok(Report::new("crossovers", echo(a), result)
        .table(t)
        .table(Table::fields("summary", extra)))
}

pub fn tunnel_check(a: &TunnelArgs) -> Outcome {
    let fam = build_family(&a.family)?;
    let d = delta("--delta", a.delta)?;
    let xs = grid(&fam, a.half_width, a.grid_step)?;
    let report = if a.exact {
        tunnel_check_against(&perturbation_crossings(&fam, d)?, d, &xs)
    } else {
        tunnel_inequality_check(&fam, d, &xs)?
    };
    let mut t = Table::new(
        "regions",
        &["region", "points", "violations", "worst_margin"],
    );
    for r in &report.regions {
        t.row(vec![
            to_json(&r.region).as_str().unwrap_or("").into(),
            r.points.into(),
            r.violations.into(),
            r.worst_margin.into(),
        ]);
    }
    let summary = Table::fields(
        "summary",
        vec![
            ("pass", report.pass.into()),
            ("delta", report.delta.into()),
            ("worst_margin", report.worst_margin.into()),
            (
                "worst_point",
                report.worst_point.map_or(Cell::from("-"), Cell::from),
            ),
            ("skipped", report.skipped.into()),
            ("a1", report.crossovers[0].into()),
            ("a2", report.crossovers[1].into()),
            ("a3", report.crossovers[2].into()),
            ("a4", report.crossovers[3].into()),
        ],
    );
    let verdict = if report.pass {
        "sign pattern holds on every grid point"
    } else {
        "sign pattern violated; see worst_point"
    };
    Ok(Report::new("tunnel-check", echo(a), to_json(&report))
        .table(t)
        .table(summary)
        .note(verdict))
}

fn moments_json<T: serde::Serialize>(r: fattails::Result<T>) -> Value {
    match r {
        Ok(m) => to_json(&m),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

fn moment_cells(label: &str, v: &Value, out: &mut Vec<(String, Cell)>) {
    for key in ["mean", "variance", "kurtosis"] {
        let cell = v
            .get(key)
            .and_then(Value::as_f64)
            .map_or(Cell::from("undefined"), Cell::from);
        out.push((format!("{label}_{key}"), cell));
    }
}

pub fn density(a: &DensityArgs) -> Outcome {
    let fam = build_family(&a.family)?;
    let d = delta("--delta", a.delta)?;
    let xs = grid(&fam, a.half_width, a.grid_step)?;
    let set = analytic_crossovers(&fam)?;
    let mixture = ScaleMixture::perturbed(fam, d);

    let mut t = Table::new(
        "density",
        &[
            "x",
            "region",
            "pdf",
            "perturbed",
            "difference",
            "d2p_dscale2",
        ],
    );
    let mut rows = Vec::with_capacity(xs.len());
    for &x in &xs {
        let region = region_classify(x, &set);
        let (p, q) = (fam.pdf(x), fam.perturbed_pdf(d, x));
        let curv = scale_second_derivative(&fam, x);
        t.row(vec![
            x.into(),
            to_json(&region).as_str().unwrap_or("").into(),
            p.into(),
            q.into(),
            (q - p).into(),
            curv.into(),
        ]);
        rows.push(json!({"x": x, "region": region, "pdf": p, "perturbed": q, "d2p_dscale2": curv}));
    }

    let base_moments = moments_json(fam.moments());
    let mixed_moments = moments_json(mixture.moments());
    let quad_moments = moments_json(quadrature_moments(&mixture, &Quadrature::default()));
    let qc = quasiconcavity_check(&mixture, &xs);
    let mass = tunnel_mass(&fam, d, set.a2, set.a3)?;

    let mut pairs: Vec<(String, Cell)> = Vec::new();
    moment_cells("base", &base_moments, &mut pairs);
    moment_cells("perturbed", &mixed_moments, &mut pairs);
    moment_cells("perturbed_quadrature", &quad_moments, &mut pairs);
    pairs.push(("quasiconcave_on_grid".into(), qc.holds.into()));
    pairs.push(("peak_mass_base".into(), mass.base.into()));
    pairs.push(("peak_mass_perturbed".into(), mass.perturbed.into()));
    let mut summary = Table::new("summary", &["field", "value"]);
    for (k, v) in pairs {
        summary.row(vec![k.into(), v]);
    }

    let result = json!({
        "grid": rows,
        "crossovers": set.points(),
        "moments": {"base": base_moments, "perturbed": mixed_moments, "perturbed_quadrature": quad_moments},
        "quasiconcavity": qc,
        "peak_mass": mass,
    });
    Ok(Report::new("density", echo(a), result)
        .table(t)
        .table(summary))
}

pub fn quiz(a: &QuizArgs) -> Outcome {
    let mix = two_point("--delta", a.delta)?;
    let q = atm_fattening_quiz(a.spot, a.maturity, a.sigma, &mix)?;
    let verdict = if q.change < 0.0 {
        "ATM value drops when the tails are fattened"
    } else if q.change == 0.0 {
        "no change: the mixture is degenerate"
    } else {
        "ATM value rose"
    };
    let t = Table::fields(
        "quiz",
        vec![
            ("single_vol_price", q.single_vol_price.into()),
            ("fattened_price", q.fattened_price.into()),
            ("change", q.change.into()),
        ],
    );
    let mut result = to_json(&q);
    result["verdict"] = json!(verdict);
    Ok(Report::new("quiz", echo(a), result).table(t).note(verdict))
}

pub fn price(a: &PriceArgs) -> Outcome {
    let kind = option_kind(a.kind);
    let spec = OptionSpec::new(kind, a.strike, a.maturity, a.spot)?.with_rate(a.rate)?;
    let g = greeks(&spec, a.sigma)?;
    let ln_price = ln_bs_price(&spec, a.sigma)?;
    let exercise = payoff(kind, a.strike, a.spot);
    let t = Table::fields(
        "price",
        vec![
            ("price", g.price.into()),
            ("ln_price", ln_price.into()),
            ("delta", g.delta.into()),
            ("gamma", g.gamma.into()),
            ("vega", g.vega.into()),
            ("volga", g.volga.into()),
            ("exercise_value", exercise.into()),
            ("pv_intrinsic", spec.pv_intrinsic().into()),
        ],
    );
    let result = json!({
        "greeks": g,
        "ln_price": ln_price,
        "exercise_value": exercise,
        "pv_intrinsic": spec.pv_intrinsic(),
    });
    Ok(Report::new("price", echo(a), result).table(t))
}

pub fn multiplier(a: &MultiplierArgs) -> Outcome {
    if a.n_std.is_empty() {
        return Err(CliError::flag("--n-std", "need at least one value"));
    }
    let ms = a
        .n_std
        .iter()
        .map(|&n| otm_multiplier(n, a.vol_factor, a.spot, a.maturity, a.sigma))
        .collect::<fattails::Result<Vec<_>>>()?;
    let mut t = Table::new(
        "multipliers",
        &[
            "n_std",
            "kind",
            "strike",
            "base_price",
            "bumped_price",
            "ratio",
            "ln_ratio",
            "underflow",
        ],
    );
    for m in &ms {
        t.row(vec![
            m.n_std.into(),
            kind_name(m.kind).into(),
            m.strike.into(),
            m.base_price.into(),
            m.bumped_price.into(),
            m.ratio.into(),
            m.ln_ratio.into(),
            m.underflow.into(),
        ]);
    }
    // successive step ratios M(n_{i+1})/M(n_i), in logs so underflow cannot bite
    let steps: Vec<f64> = ms
        .windows(2)
        .map(|w| w[1].ln_ratio - w[0].ln_ratio)
        .collect();
    let accelerating = ms.len() >= 2 && steps[0] > 0.0 && steps.windows(2).all(|s| s[1] > s[0]);
    let mut acc = Table::new("acceleration", &["from_n", "to_n", "ratio_of_multipliers"]);
    for (w, s) in ms.windows(2).zip(&steps) {
        acc.row(vec![w[0].n_std.into(), w[1].n_std.into(), s.exp().into()]);
    }
    let result = json!({
        "multipliers": ms,
        "log_step_ratios": steps,
        "accelerating": accelerating,
    });
    Ok(Report::new("multiplier", echo(a), result)
        .table(t)
        .table(acc)
        .note(format!("accelerating: {accelerating}")))
}

pub fn jensen(a: &JensenArgs) -> Outcome {
    if !(a.n_step > 0.0 && a.n_min < a.n_max) {
        return Err(CliError::flag(
            "--n-step",
            "need n-step > 0 and n-min < n-max",
        ));
    }
    let mix = two_point("--delta", a.delta)?;
    let count = ((a.n_max - a.n_min) / a.n_step).round() as usize;
    let ns: Vec<f64> = (0..=count).map(|i| a.n_min + i as f64 * a.n_step).collect();
    let sweep = jensen_sweep(a.spot, a.maturity, a.sigma, &mix, &ns)?;
    let crossings = mixture_effect_crossings(a.spot, a.maturity, a.sigma, &mix)?;
    let volga_zeros = volga_crossover_strikes(a.spot, a.maturity, a.sigma)?;

    let mut t = Table::new(
        "jensen",
        &[
            "n_std",
            "strike",
            "single_vol",
            "mixture",
            "gain",
            "volga_low",
            "volga_high",
        ],
    );
    for p in &sweep {
        t.row(vec![
            p.n_std.into(),
            p.strike.into(),
            p.single_vol_price.into(),
            p.mixture_price.into(),
            p.gain().into(),
            p.volga_low.into(),
            p.volga_high.into(),
        ]);
    }
    let mut c = Table::new("sign_changes", &["kind", "strike"]);
    for k in &crossings {
        c.row(vec!["mixture_effect".into(), (*k).into()]);
    }
    for k in &volga_zeros {
        c.row(vec!["volga".into(), (*k).into()]);
    }
    let result = json!({
        "sweep": sweep,
        "mixture_effect_crossings": crossings,
        "volga_zero_strikes": volga_zeros,
    });
    Ok(Report::new("jensen", echo(a), result).table(t).table(c))
}

pub fn straddle_check(a: &StraddleArgs) -> Outcome {
    let mut t = Table::new(
        "straddle",
        &[
            "strike",
            "sigma",
            "straddle_price",
            "expected_abs_deviation",
            "abs_difference",
        ],
    );
    let mut rows = Vec::new();
    for &k in &a.strike {
        for &s in &a.sigma {
            let c = straddle_conditional_moment_check(a.spot, k, a.maturity, s)?;
            let diff = (c.straddle_price - c.expected_abs_deviation).abs();
            t.row(vec![
                k.into(),
                s.into(),
                c.straddle_price.into(),
                c.expected_abs_deviation.into(),
                diff.into(),
            ]);
            rows.push(json!({"strike": k, "sigma": s, "check": c, "abs_difference": diff}));
        }
    }
    Ok(Report::new("straddle-check", echo(a), json!(rows)).table(t))
}

fn legs_table(pkg: &Package) -> (Table, Value) {
    let mut t = Table::new(
        "legs",
        &[
            "kind",
            "strike",
            "maturity_days",
            "quantity",
            "premium",
            "adjusted_premium",
        ],
    );
    for l in pkg.legs() {
        t.row(vec![
            kind_name(l.option().kind()).into(),
            l.option().strike().into(),
            (l.option().maturity() * DAYS_PER_YEAR).into(),
            l.quantity().into(),
            l.inception_premium().into(),
            l.adjusted_premium().into(),
        ]);
    }
    (t, to_json(pkg))
}

fn profile_tables(pkg: &Package) -> Result<(Table, Table, Value), CliError> {
    let spot = pkg.spot();
    let spots: Vec<f64> = (0..=40).map(|i| spot * (0.7 + 0.015 * i as f64)).collect();
    let sigmas: Vec<f64> = (1..=12).map(|i| 0.05 * i as f64).collect();
    let prof = payoff_profile(pkg, &spots, &sigmas)?;
    let mut p = Table::new("profile", &["spot", "pnl_at_horizon"]);
    for (s, v) in prof.spots.iter().zip(&prof.pnl) {
        p.row(vec![(*s).into(), (*v).into()]);
    }
    let mut v = Table::new("value_vs_sigma", &["sigma", "value"]);
    for (s, x) in &prof.value_vs_sigma {
        v.row(vec![(*s).into(), (*x).into()]);
    }
    Ok((p, v, to_json(&prof)))
}

pub fn backspread(a: &BackspreadArgs) -> Outcome {
    let maturity = a.maturity_days / DAYS_PER_YEAR;
    let atm = match a.atm.as_str() {
        "neutral" => AtmQuantity::VegaNeutral,
        "zero-credit" => AtmQuantity::ZeroCredit,
        other => AtmQuantity::Fixed(other.parse().map_err(|_| {
            CliError::flag(
                "--atm",
                format!("expected neutral, zero-credit or a number, got {other:?}"),
            )
        })?),
    };
    let (put_strike, call_strike) = match a.wing_std {
        Some(w) => symmetric_wings(a.spot, a.sigma, maturity, w),
        None => (a.put_strike, a.call_strike),
    };
    let spec = BackspreadSpec {
        spot: a.spot,
        sigma: a.sigma,
        maturity,
        put_strike,
        call_strike,
        otm_quantity: a.otm_qty,
        atm,
    };
    let pkg = build_backspread(&spec)?;
    let mixes = a
        .deltas
        .iter()
        .map(|&d| two_point("--deltas", d))
        .collect::<Result<Vec<_>, _>>()?;
    let weighting = VegaWeighting::default();
    let vega = vega_summary(&pkg, a.sigma, weighting)?;
    let check = fourth_moment_check(&pkg, a.sigma, &mixes, 1e-8)?;
    let template = NeutralTemplate {
        fixed: pkg.legs()[..2].to_vec(),
        free: *pkg.legs()[2].option(),
        free_vol: a.sigma,
    };
    let neutral_qty = -solve_neutral_ratio(&template, a.sigma, weighting)?;
    let value_now = package_value(&pkg, a.sigma, a.spot, 0.0)?;
    let value_double = package_value(&pkg, 2.0 * a.sigma, a.spot, 0.0)?;
    let vov = vol_of_vol_exposure(
        &pkg,
        a.sigma,
        &MixtureSpec::two_point(delta("--deltas", 0.5)?),
    )?;

    let (legs, legs_json) = legs_table(&pkg);
    let mut pnl = Table::new("fourth_moment_pnl", &["delta", "pnl_variance_matched"]);
    for (d, p) in a.deltas.iter().zip(&check.pnl) {
        pnl.row(vec![(*d).into(), (*p).into()]);
    }
    let summary = Table::fields(
        "summary",
        vec![
            ("put_strike", put_strike.into()),
            ("call_strike", call_strike.into()),
            ("net_cash_flow", pkg.net_cash_flow().into()),
            ("adjusted_cash_flow", pkg.adjusted_cash_flow().into()),
            ("credit_rule", pkg.satisfies_credit_rule().into()),
            ("vega_neutral_atm_qty", neutral_qty.into()),
            ("modified_vega", vega.modified_vega.into()),
            ("gross_vega", vega.gross_vega.into()),
            ("value_at_inception", value_now.into()),
            ("value_at_double_vol", value_double.into()),
            ("vol_of_vol_exposure", vov.into()),
            ("fourth_moment_bet", check.passes().into()),
        ],
    );
    let (profile, by_sigma, profile_json) = profile_tables(&pkg)?;
    let result = json!({
        "package": legs_json,
        "strikes": [put_strike, call_strike],
        "vega": vega,
        "vega_neutral_atm_qty": neutral_qty,
        "fourth_moment": check,
        "value_at_inception": value_now,
        "value_at_double_vol": value_double,
        "vol_of_vol_exposure": vov,
        "profile": profile_json,
    });
    Ok(Report::new("backspread", echo(a), result)
        .table(legs)
        .table(summary)
        .table(pnl)
        .table(profile)
        .table(by_sigma))
}

pub fn calendar(a: &CalendarArgs) -> Outcome {
    let pkg = build_calendar(a.spot, a.sigma, a.strike, a.long, option_kind(a.kind))?;
    let mix = two_point("--delta", a.delta)?;
    let weighting = VegaWeighting::default();
    let mv = modified_vega(&pkg, a.sigma, weighting)?;
    let vega = vega_summary(&pkg, a.sigma, weighting)?;
    let vov = vol_of_vol_exposure(&pkg, a.sigma, &mix)?;
    let fm = fourth_moment_pnl(&pkg, a.sigma, &mix, true)?;
    let after_short = package_value(&pkg, a.sigma, a.spot, CALENDAR_SHORT_DAYS / DAYS_PER_YEAR)?;

    let (legs, legs_json) = legs_table(&pkg);
    let summary = Table::fields(
        "summary",
        vec![
            ("net_cash_flow", pkg.net_cash_flow().into()),
            ("modified_vega", mv.into()),
            ("gross_vega", vega.gross_vega.into()),
            ("flatness", vega.flatness().into()),
            ("vol_of_vol_exposure", vov.into()),
            ("fourth_moment_pnl", fm.into()),
            ("value_after_short_expiry", after_short.into()),
        ],
    );
    let (profile, by_sigma, profile_json) = profile_tables(&pkg)?;
    let result = json!({
        "package": legs_json,
        "vega": vega,
        "flatness": vega.flatness(),
        "vol_of_vol_exposure": vov,
        "fourth_moment_pnl": fm,
        "value_after_short_expiry": after_short,
        "profile": profile_json,
    });
    Ok(Report::new("calendar", echo(a), result)
        .table(legs)
        .table(summary)
        .table(profile)
        .table(by_sigma))
}

pub fn strip(a: &StripArgs) -> Outcome {
    let maturity = a.maturity_days / DAYS_PER_YEAR;
    let v = variance_strip_value(a.spot, a.sigma, maturity, (a.lo, a.hi), a.step)?;
    let half = variance_strip_value(a.spot, a.sigma, maturity, (a.lo, a.hi), 0.5 * a.step)?;
    let target = a.sigma * a.sigma;
    let rel_error = v.variance / target - 1.0;
    let halving_change = half.variance / v.variance - 1.0;
    let t = Table::fields(
        "strip",
        vec![
            ("variance", v.variance.into()),
            ("implied_vol", v.variance.max(0.0).sqrt().into()),
            ("target_variance", target.into()),
            ("relative_error", rel_error.into()),
            ("strikes", v.strikes.into()),
            ("variance_half_step", half.variance.into()),
            ("halving_change", halving_change.into()),
        ],
    );
    let result = json!({
        "strip": v,
        "half_step": half,
        "target_variance": target,
        "relative_error": rel_error,
        "halving_change": halving_change,
    });
    let mut r = Report::new("strip", echo(a), result).table(t);
    if let Some(w) = &v.warning {
        r = r.note(w.clone());
    }
    Ok(r)
}

pub fn vix_demo(a: &VixArgs) -> Outcome {
    let episodes = VolEpisodes::new(a.episodes.clone(), a.entry)?;
    let c = convexity_demo(&episodes);
    let mut r_tables = vec![Table::fields(
        "convexity",
        vec![
            ("arithmetic_mean", c.arithmetic_mean.into()),
            ("rms", c.rms.into()),
            ("max", c.max.into()),
            ("entry", a.entry.into()),
            ("variance_pnl", c.variance_pnl.into()),
        ],
    )];
    let mut result = json!({ "convexity": c });
    if let Some(path) = &a.scenario {
        let scenario = read_scenario(path)?;
        let cfg = ProxyConfig {
            period_years: a.period_years,
            put_n_std: a.put_n_std,
            budget: a.budget,
            contango: a.contango,
        };
        let d = proxy_divergence_scenario(&scenario, &cfg)?;
        let mut t = Table::new(
            "proxy",
            &[
                "roll",
                "equity_return",
                "vol",
                "next_vol",
                "tail_option_pnl",
                "vix_roll_pnl",
            ],
        );
        for (i, w) in scenario.periods().windows(2).enumerate() {
            t.row(vec![
                (i + 1).into(),
                w[0].equity_return.into(),
                w[0].implied_vol.into(),
                w[1].implied_vol.into(),
                d.tail_option_pnl[i].into(),
                d.vix_roll_pnl[i].into(),
            ]);
        }
        t.row(vec![
            "total".into(),
            "".into(),
            "".into(),
            "".into(),
            d.tail_option_total.into(),
            d.vix_roll_total.into(),
        ]);
        r_tables.push(t);
        result["proxy"] = to_json(&d);
    }
    let mut r = Report::new("vix-demo", echo(a), result);
    for t in r_tables {
        r = r.table(t);
    }
    Ok(r)
}

pub fn barbell(a: &BarbellArgs) -> Outcome {
    let path = match &a.scenario {
        Some(p) => read_scenario(p)?,
        None => ScenarioPath::crash_rally(),
    };
    let spec = PortfolioSpec {
        numeraire_fraction: a.numeraire,
        equity_fraction: a.equity,
        tail_budget_per_period: a.budget,
        put_n_std: a.put_n_std,
        put_maturity: a.put_maturity,
        period_years: a.period_years,
        initial_wealth: a.initial_wealth,
    };
    let cmp = compare_dollar_for_dollar(&spec, &path)?;
    let mut s = Table::new(
        "summary",
        &[
            "mode",
            "terminal_wealth",
            "max_drawdown",
            "insurance_cost",
            "insurance_payoff",
        ],
    );
    for m in &cmp.summaries {
        s.row(vec![
            to_json(&m.mode).as_str().unwrap_or("").into(),
            m.terminal_wealth.into(),
            m.max_drawdown.into(),
            m.insurance_cost.into(),
            m.insurance_payoff.into(),
        ]);
    }
    let mut w = Table::new("wealth", &["period", "insured", "uninsured", "sidelined"]);
    let (ins, unins, side) = (
        cmp.run(Mode::Insured),
        cmp.run(Mode::Uninsured),
        cmp.run(Mode::Sidelined),
    );
    for i in 0..ins.wealth.len() {
        w.row(vec![
            i.into(),
            ins.wealth[i].into(),
            unins.wealth[i].into(),
            side.wealth[i].into(),
        ]);
    }
    let mut p = Table::new(
        "insured_periods",
        &[
            "period",
            "put_strike",
            "premium",
            "settlement",
            "equity_pnl",
            "wealth_end",
        ],
    );
    for (i, rec) in ins.periods.iter().enumerate() {
        p.row(vec![
            (i + 1).into(),
            rec.put_strike.into(),
            rec.premium.into(),
            rec.settlement.into(),
            rec.equity_pnl.into(),
            rec.wealth_end.into(),
        ]);
    }
    let result = to_json(&cmp);
    Ok(Report::new("barbell", echo(a), result)
        .table(s)
        .table(Table::fields(
            "comparison",
            vec![(
                "uninsured_sold_at_bottom",
                cmp.uninsured_sold_at_bottom.into(),
            )],
        ))
        .table(w)
        .table(p))
}
