//! One function per subcommand. Each builds a sorted [`Table`] and a summary.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use sil_core::agent::{factor_c, incentive_constant, max_theta_to_incentivize, min_x0_to_improve, utility};
use sil_core::agent::{forgetting_cap_pivot, forgetting_effort_cap};
use sil_core::manipulation::{detection_threshold, manipulation_region};
use sil_core::policy::{estimate_r, improvement_cutoff, optimal_threshold, welfare, welfare_grid};
use sil_core::population::{fit_beta, BetaDensity, FitMethod};
use sil_core::{Density, ManipulationSetting, Scenario};

use crate::grid::{check_range, parse};
use crate::plot::{emit_plot, PlotKind};
use crate::source::{Scale, Source};
use crate::table::{Cell, Rows, Table};
use crate::{Cli, Command, Common, Failure, Method, ScaleArgs};

/// What a command produced, before anything is written.
#[derive(Debug)]
pub struct Report {
    pub table: Option<Table>,
    pub svg: Option<String>,
    pub summary: String,
}

#[derive(Clone, Copy)]
enum Bounds {
    /// `(0, 1)`
    Open,
    /// `(0, 1]`
    OpenClosed,
    /// `[0, 1]`
    Closed,
    Positive,
}

fn grid(common_value: &Option<String>, name: &str, default: Option<&str>, bounds: Bounds) -> Result<Vec<f64>, Failure> {
    let spec = match (common_value.as_deref(), default) {
        (Some(s), _) => s,
        (None, Some(d)) => d,
        (None, None) => return Err(Failure::flag(format!("--{name} is required"))),
    };
    let values = parse(spec).map_err(|e| Failure::grid(format!("--{name}: {e}")))?;
    match bounds {
        Bounds::Open => check_range(name, &values, 0.0, 1.0, true, true),
        Bounds::OpenClosed => check_range(name, &values, 0.0, 1.0, true, false),
        Bounds::Closed => check_range(name, &values, 0.0, 1.0, false, false),
        Bounds::Positive => check_range(name, &values, 0.0, f64::INFINITY, true, true),
    }
    .map_err(Failure::grid)?;
    Ok(values)
}

fn incentive(common: &Common) -> Result<f64, Failure> {
    match common.m {
        Some(m) if m > 0.0 && m.is_finite() => Ok(m),
        Some(m) => Err(Failure::flag(format!("--m must be positive, got {m}"))),
        None => Ok(incentive_constant().m),
    }
}

fn scale(args: &ScaleArgs) -> Result<Scale, Failure> {
    if args.observed_range {
        return Ok(Scale::Observed);
    }
    let Some(spec) = &args.score_range else { return Ok(Scale::Fixed(None)) };
    let bad = || Failure::flag(format!("--score-range expects lo,hi with lo < hi, got {spec:?}"));
    let (lo, hi) = spec.split_once(',').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !(lo < hi && lo.is_finite() && hi.is_finite()) {
        return Err(bad());
    }
    Ok(Scale::Fixed(Some((lo, hi))))
}

fn method(m: Method) -> FitMethod {
    match m {
        Method::Mle => FitMethod::MaximumLikelihood,
        Method::Moments => FitMethod::MethodOfMoments,
    }
}

fn sources(common: &Common) -> Result<Vec<Source>, Failure> {
    let list = Source::parse_list(common.density.as_deref().unwrap_or("beta:1,1"))?;
    if list.is_empty() {
        return Err(Failure::flag("--density is empty".into()));
    }
    Ok(list)
}

pub fn run(cli: &Cli) -> Result<Report, Failure> {
    let c = &cli.common;
    match &cli.command {
        Command::Fit { samples, scale: s } => fit(c, *samples, s),
        Command::ImproveCurve => improve_curve(c),
        Command::DomainTable => domain_table(c),
        Command::PolicySweep { scale: s } => policy_sweep(c, s),
        Command::ManipSweep { scale: s } => manip_sweep(c, s),
        Command::ForgettingCap => forgetting_cap(c),
        Command::EstimateR => estimate(c),
        Command::Plot { kind, input } => plot(kind, input),
    }
}

fn fit(c: &Common, n: usize, s: &ScaleArgs) -> Result<Report, Failure> {
    if c.density.is_none() {
        return Err(Failure::flag("--density is required".into()));
    }
    let (scale, method) = (scale(s)?, method(s.method));
    let mut table = Table::new("fit", &["source", "n", "v", "w", "mean"], 1);
    table.meta("seed", c.seed);
    for source in sources(c)? {
        let samples = match &source {
            Source::Beta { v, w } => BetaDensity::new(*v, *w).map_err(Failure::grid)?.sample(n, c.seed),
            file => file.samples(scale)?,
        };
        eprintln!("sil: fitting {} ({} samples)", source.label(), samples.len());
        let fitted = fit_beta(&samples, method).map_err(|e| match &source {
            Source::File { path, .. } => Failure::input(path, e),
            Source::Beta { .. } => Failure::grid(e),
        })?;
        let Density::Beta(b) = fitted else { unreachable!("fit_beta returns a Beta density") };
        let (v, w) = b.shape();
        table.push(vec![Cell::Text(source.label()), Cell::Int(samples.len() as u64), v.into(), w.into(), (v / (v + w)).into()]);
    }
    table.sort();
    let fits: Vec<String> = table
        .rows
        .iter()
        .map(|r| match (&r[0], &r[2], &r[3]) {
            (Cell::Text(s), Cell::Num(v), Cell::Num(w)) => format!("{s} -> Beta({v:.3}, {w:.3})"),
            _ => String::new(),
        })
        .collect();
    Ok(Report { summary: format!("fit: {}", fits.join("; ")), table: Some(table), svg: None })
}

fn improve_curve(c: &Common) -> Result<Report, Failure> {
    let thetas = grid(&c.theta, "theta", None, Bounds::Open)?;
    let rs = grid(&c.r, "r", None, Bounds::Positive)?;
    let x0s = grid(&c.x0, "x0", None, Bounds::OpenClosed)?;
    let ks = grid(&c.k, "k", Some("0:1:0.001"), Bounds::Closed)?;
    let mut cells = Vec::new();
    for &t in &thetas {
        for &r in &rs {
            for &x in &x0s {
                cells.push((t, r, x));
            }
        }
    }
    eprintln!("sil: improve-curve over {} scenario(s) x {} efforts", cells.len(), ks.len());
    let curves = cells
        .par_iter()
        .map(|&(t, r, x)| {
            let sc = Scenario::new(t, r).map_err(Failure::grid)?;
            ks.iter().map(|&k| utility(k, sc, x).map(|u| (k, u)).map_err(Failure::grid)).collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut table = Table::new("improve-curve", &["theta", "r", "x0", "k", "utility"], 4);
    let mut best = Vec::new();
    for (&(t, r, x), curve) in cells.iter().zip(&curves) {
        let top = curve.iter().copied().fold((0.0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
        best.push((t, r, x, top));
        for &(k, u) in curve {
            table.push(vec![t.into(), r.into(), x.into(), k.into(), u.into()]);
        }
    }
    table.sort();
    best.sort_by(|a, b| (a.0, a.1, a.2).partial_cmp(&(b.0, b.1, b.2)).unwrap());
    let (t, r, x, (k, u)) = best[0];
    let more = if best.len() > 1 { format!(" (+{} more scenarios)", best.len() - 1) } else { String::new() };
    let summary = format!("improve-curve: {} rows; best k={k} with U={u:.6} at theta={t} r={r} x0={x}{more}", table.rows.len());
    let svg = plot_if(c, &table, PlotKind::UtilityCurve)?;
    Ok(Report { table: Some(table), svg, summary })
}

fn domain_table(c: &Common) -> Result<Report, Failure> {
    let m = incentive(c)?;
    let rs = grid(&c.r, "r", None, Bounds::Positive)?;
    if c.theta.is_none() && c.x0.is_none() {
        return Err(Failure::flag("domain-table needs --theta and/or --x0".into()));
    }
    let thetas = if c.theta.is_some() { grid(&c.theta, "theta", None, Bounds::Open)? } else { Vec::new() };
    let x0s = if c.x0.is_some() { grid(&c.x0, "x0", None, Bounds::Open)? } else { Vec::new() };
    let mut table = Table::new("domain-table", &["bound", "r", "given", "value", "factor_c"], 3);
    table.meta("m", m);
    let c_at = |theta: f64, r: f64, x0: f64| -> Cell {
        match Scenario::new(theta, r).and_then(|sc| factor_c(sc, x0)) {
            Ok(v) => v.into(),
            Err(_) => Cell::Empty,
        }
    };
    for &r in &rs {
        for &theta in &thetas {
            let sc = Scenario::new(theta, r).map_err(Failure::grid)?;
            let x = min_x0_to_improve(sc, m);
            table.push(vec![Cell::Text("min_x0".into()), r.into(), theta.into(), x.into(), c_at(theta, r, x)]);
        }
        for &x0 in &x0s {
            let theta = max_theta_to_incentivize(x0, r, m).map_err(Failure::grid)?;
            table.push(vec![Cell::Text("max_theta".into()), r.into(), x0.into(), theta.into(), c_at(theta, r, x0)]);
        }
    }
    table.sort();
    let summary = format!("domain-table: {} boundary rows at m={m}", table.rows.len());
    Ok(Report { table: Some(table), svg: None, summary })
}

const PLOT_THETAS: &str = "0.002:0.998:0.002";

fn policy_sweep(c: &Common, s: &ScaleArgs) -> Result<Report, Failure> {
    let m = incentive(c)?;
    let rs = grid(&c.r, "r", None, Bounds::Positive)?;
    let curve_mode = c.theta.is_some();
    let thetas = if curve_mode { grid(&c.theta, "theta", None, Bounds::Closed)? } else { Vec::new() };
    let (scale, method) = (scale(s)?, method(s.method));
    let densities = sources(c)?
        .into_iter()
        .map(|src| Ok((src.label(), src.density(scale, method)?)))
        .collect::<Result<Vec<_>, Failure>>()?;

    let mut table = if curve_mode {
        Table::new("policy-sweep", &["density", "r", "theta", "welfare", "cutoff"], 3)
    } else {
        Table::new("policy-sweep", &["density", "r", "theta_star", "welfare", "cutoff", "single_peaked"], 2)
    };
    table.meta("m", m);
    let mut notes = Vec::new();
    for (label, density) in &densities {
        let mut stars = Vec::new();
        for &r in &rs {
            eprintln!("sil: policy-sweep {label} r={r}");
            if curve_mode {
                let evals = thetas
                    .par_iter()
                    .map(|&t| welfare(t, density, r, m))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(Failure::grid)?;
                for e in evals {
                    table.push(vec![Cell::Text(label.clone()), r.into(), e.theta.into(), e.welfare.into(), e.cutoff.into()]);
                }
            } else {
                let best = optimal_threshold(density, r, m).map_err(Failure::grid)?;
                let cutoff = improvement_cutoff(best.theta, r, m).map_err(Failure::runtime)?;
                stars.push((r, best.theta));
                table.push(vec![
                    Cell::Text(label.clone()),
                    r.into(),
                    best.theta.into(),
                    best.welfare.into(),
                    cutoff.into(),
                    Cell::Bool(best.single_peaked),
                ]);
            }
        }
        if !stars.is_empty() {
            stars.sort_by(|a, b| a.0.total_cmp(&b.0));
            let nonincreasing = stars.windows(2).all(|w| w[1].1 <= w[0].1);
            let list: Vec<String> = stars.iter().map(|(r, t)| format!("r={r}:{t:.4}")).collect();
            notes.push(format!(
                "{label} theta* {} ({})",
                list.join(" "),
                if nonincreasing { "nonincreasing in r" } else { "not monotone in r" }
            ));
        }
    }
    table.sort();

    let svg = match &c.plot {
        None => None,
        Some(_) if curve_mode => Some(render(&table, PlotKind::WelfareCurve)?),
        Some(_) => {
            let grid_thetas = parse(PLOT_THETAS).expect("valid grid");
            let mut curve = Table::new("policy-sweep", &["density", "r", "theta", "welfare"], 3);
            for (label, density) in &densities {
                for &r in &rs {
                    for (t, w) in grid_thetas.iter().zip(welfare_grid(&grid_thetas, density, r, m)) {
                        curve.push(vec![Cell::Text(label.clone()), r.into(), (*t).into(), w.into()]);
                    }
                }
            }
            curve.sort();
            Some(render(&curve, PlotKind::WelfareCurve)?)
        }
    };
    let summary = if curve_mode {
        format!("policy-sweep: {} welfare rows", table.rows.len())
    } else {
        format!("policy-sweep: {}", notes.join("; "))
    };
    Ok(Report { table: Some(table), svg, summary })
}

fn manip_sweep(c: &Common, s: &ScaleArgs) -> Result<Report, Failure> {
    let thetas = grid(&c.theta, "theta", None, Bounds::Open)?;
    let rs = grid(&c.r, "r", None, Bounds::Positive)?;
    let ps = grid(&c.p, "p", None, Bounds::Closed)?;
    let srcs = sources(c)?;
    if srcs.len() != 1 {
        return Err(Failure::flag("manip-sweep takes a single --density".into()));
    }
    let density = srcs[0].density(scale(s)?, method(s.method))?;

    let mut table =
        Table::new("manip-sweep", &["theta", "r", "p", "interval", "lower", "upper", "fraction", "p_hat"], 4);
    table.meta("density", srcs[0].label());
    let mut hats = Vec::new();
    for &theta in &thetas {
        for &r in &rs {
            let sc = Scenario::new(theta, r).map_err(Failure::grid)?;
            eprintln!("sil: manip-sweep theta={theta} r={r}");
            let p_hat = detection_threshold(sc).map_err(Failure::runtime)?;
            hats.push(format!("P^({theta},{r})={p_hat:.4}"));
            for &p in &ps {
                let setting = ManipulationSetting::new(p).map_err(Failure::grid)?;
                let region = manipulation_region(sc, setting).map_err(Failure::runtime)?;
                let fraction: f64 =
                    region.intervals.iter().map(|&(a, b)| density.mass(a, b)).sum::<f64>().clamp(0.0, 1.0);
                if region.is_empty() {
                    table.push(vec![
                        theta.into(),
                        r.into(),
                        p.into(),
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Empty,
                        0.0.into(),
                        p_hat.into(),
                    ]);
                }
                for (i, &(a, b)) in region.intervals.iter().enumerate() {
                    table.push(vec![
                        theta.into(),
                        r.into(),
                        p.into(),
                        Cell::Int(i as u64),
                        a.into(),
                        b.into(),
                        fraction.into(),
                        p_hat.into(),
                    ]);
                }
            }
        }
    }
    table.sort();
    let svg = plot_if(c, &table, PlotKind::RegionBand)?;
    let summary = format!("manip-sweep: {} rows; {}", table.rows.len(), hats.join(" "));
    Ok(Report { table: Some(table), svg, summary })
}

fn forgetting_cap(c: &Common) -> Result<Report, Failure> {
    let x0s = grid(&c.x0, "x0", Some("0.001:1:0.001"), Bounds::OpenClosed)?;
    let caps = x0s.iter().map(|&x| forgetting_effort_cap(x).map_err(Failure::grid)).collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new("forgetting-cap", &["x0", "k_hat"], 1);
    for (&x, &k) in x0s.iter().zip(&caps) {
        table.push(vec![x.into(), k.into()]);
    }
    table.sort();
    let max = caps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let svg = plot_if(c, &table, PlotKind::KhatCurve)?;
    let summary =
        format!("forgetting-cap: {} rows; max k_hat={max:.6}; pivot x0={:.6}", table.rows.len(), forgetting_cap_pivot());
    Ok(Report { table: Some(table), svg, summary })
}

fn estimate(c: &Common) -> Result<Report, Failure> {
    let m = incentive(c)?;
    let thetas = grid(&c.theta, "theta", None, Bounds::Open)?;
    let mut table = Table::new("estimate-r", &["theta", "cutoff", "r", "r_hat"], 3);
    table.meta("m", m);
    let mut estimates = Vec::new();
    match (&c.x0, &c.r) {
        (Some(_), None) => {
            let cutoffs = grid(&c.x0, "x0", None, Bounds::Open)?;
            if cutoffs.len() != thetas.len() {
                return Err(Failure::grid(format!(
                    "--x0 has {} values but --theta has {}; they are paired element-wise",
                    cutoffs.len(),
                    thetas.len()
                )));
            }
            for (&t, &x) in thetas.iter().zip(&cutoffs) {
                let r_hat = estimate_r(t, x, m).map_err(Failure::grid)?;
                estimates.push(r_hat);
                table.push(vec![t.into(), x.into(), Cell::Empty, r_hat.into()]);
            }
        }
        (None, Some(_)) => {
            let rs = grid(&c.r, "r", None, Bounds::Positive)?;
            for &t in &thetas {
                for &r in &rs {
                    let x = improvement_cutoff(t, r, m).map_err(Failure::grid)?;
                    let r_hat = estimate_r(t, x, m).map_err(Failure::runtime)?;
                    estimates.push(r_hat);
                    table.push(vec![t.into(), x.into(), r.into(), r_hat.into()]);
                }
            }
        }
        _ => return Err(Failure::flag("estimate-r needs exactly one of --x0 (observed cutoffs) or --r".into())),
    }
    table.sort();
    let mean = estimates.iter().sum::<f64>() / estimates.len() as f64;
    let summary = format!("estimate-r: {} estimates; mean r_hat={mean}", estimates.len());
    Ok(Report { table: Some(table), svg: None, summary })
}

fn plot(kind: &str, input: &Path) -> Result<Report, Failure> {
    let kind: PlotKind = kind.parse().map_err(Failure::flag)?;
    let text = fs::read_to_string(input).map_err(|e| Failure::input(input, e))?;
    let rows = Rows::parse(&text).map_err(|e| Failure::input(input, e))?;
    let svg = emit_plot(&rows, kind).map_err(|e| Failure::input(input, e))?;
    Ok(Report { table: None, svg: Some(svg), summary: format!("plot: {} from {} rows", kind.name(), rows.records.len()) })
}

fn render(table: &Table, kind: PlotKind) -> Result<String, Failure> {
    emit_plot(&Rows::from_table(table), kind).map_err(Failure::runtime)
}

fn plot_if(c: &Common, table: &Table, kind: PlotKind) -> Result<Option<String>, Failure> {
    c.plot.as_ref().map(|_| render(table, kind)).transpose()
}

/// Writes the CSV and any SVG where the flags say, returning the summary line.
pub fn finish(cli: &Cli, report: Report) -> Result<String, Failure> {
    let c = &cli.common;
    let write = |path: &Path, text: &str| fs::write(path, text).map_err(|e| Failure::runtime(format!("{}: {e}", path.display())));
    let mut stdout = String::new();
    if let Some(table) = &report.table {
        let csv = table.to_csv();
        match &c.out {
            Some(path) => write(path, &csv)?,
            None => stdout.push_str(&csv),
        }
    }
    if let Some(svg) = &report.svg {
        let target = if matches!(cli.command, Command::Plot { .. }) { &c.out } else { &c.plot };
        match target {
            Some(path) => write(path, svg)?,
            None => stdout.push_str(svg),
        }
    }
    Ok(stdout)
}
