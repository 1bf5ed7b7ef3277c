use std::str::FromStr;

use jcdyn::oracle::oracle_density_matrix;
use jcdyn::sweep::{scan, time_series, ScanConfig};
use jcdyn::{density_matrix, SystemParams, ThermalDistribution};
use serde_json::json;

use crate::args::{Command, Format, ModelArgs, PlotArgs, RunArgs, ScanArgs, ValidateArgs};
use crate::error::{CliError, CliResult};
use crate::output::{self, Metadata};
use crate::plot::{self, Series};

/// Largest elementwise deviation `validate` accepts.
pub const VALIDATION_TOLERANCE: f64 = 1e-9;

pub fn dispatch(command: Command) -> CliResult<()> {
    match command {
        Command::Timeseries(args) => run_series(&args, "timeseries"),
        Command::Epe(args) => run_series(&args, "epe"),
        Command::Scan(args) => run_scan(&args),
        Command::Validate(args) => run_validate(&args),
        Command::Plot(args) => run_plot(&args),
    }
}

fn parse_list<T: FromStr>(name: &str, text: &str) -> CliResult<Vec<T>> {
    let values = text
        .split(',')
        .map(|s| s.trim().parse::<T>().map_err(|_| CliError::Usage(format!("--{name}: cannot parse `{}`", s.trim()))))
        .collect::<CliResult<Vec<T>>>()?;
    if values.is_empty() {
        return Err(CliError::Usage(format!("--{name}: empty list")));
    }
    Ok(values)
}

fn build_model(m: &ModelArgs) -> CliResult<(SystemParams, ThermalDistribution, ThermalDistribution)> {
    let params = SystemParams::with_detuning(m.g, m.delta, m.p, !m.no_motion)?;
    let a = ThermalDistribution::new(m.kbar, m.epsilon_tail)?;
    let b = ThermalDistribution::new(m.lbar.unwrap_or(m.kbar), m.epsilon_tail)?;
    Ok((params, a, b))
}

fn run_series(args: &RunArgs, command: &'static str) -> CliResult<()> {
    let (params, a, b) = build_model(&args.model)?;
    let series = time_series(&params, &a, &b, args.grid.gt_max, args.grid.steps)?;
    let bytes = match args.out.format {
        Format::Csv if command == "timeseries" => output::timeseries_csv(&series.samples)?,
        Format::Csv => output::epe_csv(&series.samples)?,
        Format::Json => {
            let inputs = json!({
                "p": params.p,
                "kbar": a.mean_photons,
                "lbar": b.mean_photons,
                "delta": params.delta,
                "g": params.g,
                "motion": params.motion_enabled,
                "gt_max": args.grid.gt_max,
                "steps": args.grid.steps,
                "epsilon_tail": args.model.epsilon_tail,
                "n_max_a": a.n_max,
                "n_max_b": b.n_max,
            });
            let meta = Metadata::new(command, inputs, !args.out.no_timestamp);
            if command == "timeseries" {
                output::timeseries_json(&series.samples, &meta)?
            } else {
                output::epe_json(&series.samples, &meta)?
            }
        }
    };
    output::emit(args.out.output.as_deref(), &bytes)
}

fn run_scan(args: &ScanArgs) -> CliResult<()> {
    let ps: Vec<u32> = parse_list("p", &args.p)?;
    let ks: Vec<f64> = parse_list("kbar", &args.kbar)?;
    let ls: Option<Vec<f64>> = args.lbar.as_deref().map(|l| parse_list("lbar", l)).transpose()?;
    let deltas: Vec<f64> = parse_list("delta", &args.delta)?;
    let mut configs = Vec::new();
    for &p in &ps {
        for &k in &ks {
            let lbars = ls.clone().unwrap_or_else(|| vec![k]);
            for &l in &lbars {
                for &delta in &deltas {
                    let params = SystemParams::with_detuning(args.g, delta, p, !args.no_motion)?;
                    ThermalDistribution::new(k, args.epsilon_tail)?;
                    ThermalDistribution::new(l, args.epsilon_tail)?;
                    configs.push(ScanConfig { params, kbar: k, lbar: l, epsilon_tail: args.epsilon_tail });
                }
            }
        }
    }
    let reports = scan(&configs, args.grid.gt_max, args.grid.steps)?;
    let bytes = match args.out.format {
        Format::Csv => output::scan_csv(&reports)?,
        Format::Json => {
            let inputs = json!({
                "p": ps,
                "kbar": ks,
                "lbar": ls,
                "delta": deltas,
                "g": args.g,
                "motion": !args.no_motion,
                "gt_max": args.grid.gt_max,
                "steps": args.grid.steps,
                "epsilon_tail": args.epsilon_tail,
            });
            output::scan_json(&reports, &Metadata::new("scan", inputs, !args.out.no_timestamp))?
        }
    };
    output::emit(args.out.output.as_deref(), &bytes)
}

/// Largest elementwise `|rho_analytic - rho_oracle|` over `steps + 1`
/// equally spaced `gt` in `[0, gt_max]`.
pub fn max_oracle_deviation(
    params: &SystemParams,
    dist: &ThermalDistribution,
    gt_max: f64,
    steps: usize,
) -> jcdyn::Result<f64> {
    let mut worst = 0.0f64;
    for i in 0..=steps {
        let t = params.time_from_gt(gt_max * i as f64 / steps as f64);
        let analytic = density_matrix(params, dist, dist, t)?;
        let oracle = oracle_density_matrix(params, dist, dist, t)?;
        worst = worst.max(analytic.max_abs_diff(&oracle));
    }
    Ok(worst)
}

fn run_validate(args: &ValidateArgs) -> CliResult<()> {
    let ps: Vec<u32> = parse_list("p", &args.p)?;
    let ks: Vec<f64> = parse_list("kbar", &args.kbar)?;
    let deltas: Vec<f64> = parse_list("delta", &args.delta)?;
    if !(args.gt_max.is_finite() && args.gt_max > 0.0) || args.steps == 0 {
        return Err(CliError::Usage("--gt-max must be positive and --steps at least 1".into()));
    }
    let mut cases = Vec::new();
    for &p in &ps {
        for &k in &ks {
            for &delta in &deltas {
                let params = SystemParams::with_detuning(args.g, delta, p, !args.no_motion)?;
                let dist = ThermalDistribution::new(k, args.epsilon_tail)?;
                cases.push((params, dist));
            }
        }
    }
    let mut failures = 0usize;
    let mut overall = 0.0f64;
    for (params, dist) in &cases {
        let name = format!("p={} kbar={} delta={} n_max={}", params.p, dist.mean_photons, params.delta, dist.n_max);
        match max_oracle_deviation(params, dist, args.gt_max, args.steps) {
            Ok(dev) if dev <= VALIDATION_TOLERANCE => {
                overall = overall.max(dev);
                println!("{name} max_deviation={dev:e} ok");
            }
            Ok(dev) => {
                failures += 1;
                overall = overall.max(dev);
                println!("{name} max_deviation={dev:e} FAIL");
            }
            Err(e) => {
                failures += 1;
                println!("{name} error: {e} FAIL");
            }
        }
    }
    println!("{} configurations, max deviation {overall:e}, tolerance {VALIDATION_TOLERANCE:e}", cases.len());
    if failures > 0 {
        return Err(CliError::Validation(format!("{failures} of {} configurations failed", cases.len())));
    }
    Ok(())
}

fn run_plot(args: &PlotArgs) -> CliResult<()> {
    let table = output::read_table(&args.input)?;
    let missing = |name: &str| CliError::Usage(format!("column `{name}` not found; available: {}", table.header.join(",")));
    let x = table.column(&args.x).ok_or_else(|| missing(&args.x))?;
    let names: Vec<&str> = args.columns.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if names.is_empty() {
        return Err(CliError::Usage("--columns: empty list".into()));
    }
    let series = names
        .iter()
        .map(|&name| Ok(Series { label: name, x, y: table.column(name).ok_or_else(|| missing(name))? }))
        .collect::<CliResult<Vec<_>>>()?;
    let title = args.title.clone().unwrap_or_else(|| format!("{} vs {}", names.join(", "), args.x));
    let svg = plot::render(&title, &args.x, &series);
    output::emit(args.output.as_deref(), svg.as_bytes())
}
