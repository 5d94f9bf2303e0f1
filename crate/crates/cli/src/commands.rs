//! Data commands: dephasing, amplitude, depolarizing and sweep.

use std::path::{Path, PathBuf};

use lqfi_core::channels::{
    ad_amplitude, dephasing_coherence, dephasing_rate, depol_memory, evolve,
    AmplitudeDampingParams, ChannelSpec, DephasingParams, DepolarizingParams,
};
use lqfi_core::measures::LocalSpectrum;
use lqfi_core::nonmarkov::{
    channel_report, derivative_vec, maximize_over_initial, IncreaseInterval, DERIVATIVE_STEP,
};
use lqfi_core::{CorrelationTriple, NonMarkovReport, Window};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{AmplitudeArgs, DephasingArgs, DepolarizingArgs, SweepArgs};
use crate::error::CliError;
use crate::output::{fmt_f64, json_document, number, Format, Table};

pub const DEPHASING_SUMMARY: &[&str] = &["s", "N_lqfi", "N_lqu"];
pub const DEPHASING_DETAIL: &[&str] = &["t", "gamma", "P", "Q", "U", "dQdt", "dUdt"];
pub const AMPLITUDE_SUMMARY: &[&str] = &["lambda_over_gamma0", "N_lqfi", "N_lqu"];
pub const AMPLITUDE_DETAIL: &[&str] = &["t", "absR", "Q", "U", "dQdt", "dUdt"];
pub const DEPOLARIZING_DETAIL: &[&str] = &["nu", "Upsilon", "Q", "U", "dQdt", "dUdt"];

/// Onset threshold reported for the dephasing sweep.
const ONSET_THRESHOLD: f64 = 1e-6;

/// Rendered output of a command: the main document plus side files.
#[derive(Debug, Default)]
pub struct Emitted {
    pub main: String,
    pub files: Vec<(PathBuf, String)>,
}

/// Global options echoed into every JSON document.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Globals {
    pub format: Format,
    pub seed: u64,
    pub threads: Option<u16>,
}

impl Globals {
    pub fn with_format(format: Format) -> Self {
        Self { format, seed: 0, threads: None }
    }
}

/// Resolved run configuration as echoed in JSON output.
#[derive(Debug, Serialize)]
pub struct RunConfig<'a, P: Serialize> {
    pub command: &'a str,
    #[serde(flatten)]
    pub globals: Globals,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<[f64; 2]>,
    #[serde(flatten)]
    pub params: &'a P,
}

pub fn render(format: Format, config: &impl Serialize, table: &Table, report: Value) -> String {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => json_document(config, table.to_json_rows(), report),
    }
}

fn extension(format: Format) -> &'static str {
    match format {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

/// `n` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

fn check_range(name: &str, lo: f64, hi: f64) -> Result<(), CliError> {
    if !(lo.is_finite() && hi.is_finite() && hi >= lo) {
        return Err(CliError::Usage(format!("{name}: need min <= max, got [{lo}, {hi}]")));
    }
    Ok(())
}

fn intervals_json(intervals: &[IncreaseInterval]) -> Value {
    Value::Array(
        intervals
            .iter()
            .map(|iv| json!({"t_start": number(iv.t_start), "t_end": number(iv.t_end), "delta": number(iv.delta)}))
            .collect(),
    )
}

pub fn report_json(report: &NonMarkovReport) -> Value {
    json!({
        "n_lqfi": number(report.n_lqfi),
        "n_lqu": number(report.n_lqu),
        "ratio": report.ratio().map_or(Value::Null, number),
        "intervals_lqfi": intervals_json(&report.intervals_lqfi),
        "intervals_lqu": intervals_json(&report.intervals_lqu),
    })
}

/// Per-t rows shared by all detail tables: Q, U and their rates.
fn measure_rows(spec: &ChannelSpec, times: &[f64]) -> Result<Vec<[f64; 4]>, CliError> {
    let pair = |t: f64| -> lqfi_core::Result<[f64; 2]> {
        let s = LocalSpectrum::new(&evolve(spec, t)?)?;
        Ok([s.lqfi(), s.lqu()])
    };
    times
        .par_iter()
        .map(|&t| {
            let [q, u] = pair(t)?;
            let rates = derivative_vec(&|x| pair(x).unwrap_or([f64::NAN; 2]), t, DERIVATIVE_STEP);
            Ok([q, u, rates[0], rates[1]])
        })
        .collect::<lqfi_core::Result<_>>()
        .map_err(CliError::from)
}

pub fn dephasing_detail(spec: &ChannelSpec, p: &DephasingParams, window: Window, grid: usize) -> Result<Table, CliError> {
    let times = window.grid(grid);
    let measures = measure_rows(spec, &times)?;
    let mut table = Table::new(DEPHASING_DETAIL);
    for (&t, m) in times.iter().zip(&measures) {
        let coherence = dephasing_coherence(t, p)?;
        table.push_nums(&[t, dephasing_rate(t, p), coherence, m[0], m[1], m[2], m[3]]);
    }
    Ok(table)
}

pub fn dephasing(args: &DephasingArgs, g: &Globals) -> Result<Emitted, CliError> {
    let format = g.format;
    check_range("s", args.s_min, args.s_max)?;
    DephasingParams::new(args.s_min, args.omega_c)?;
    let window = Window::new(0.0, args.t_max.unwrap_or(30.0 / args.omega_c))?;
    let config = RunConfig {
        command: "dephasing",
        globals: *g,
        window: Some([window.start, window.end]),
        params: args,
    };

    let s_values = linspace(args.s_min, args.s_max, args.s_steps);
    let results: Vec<(f64, DephasingParams, NonMarkovReport)> = s_values
        .par_iter()
        .map(|&s| {
            let p = DephasingParams::new(s, args.omega_c)?;
            let report = channel_report(&ChannelSpec::Dephasing(p), window, args.grid)?;
            Ok((s, p, report))
        })
        .collect::<Result<_, CliError>>()?;

    let mut table = Table::new(DEPHASING_SUMMARY);
    for (s, _, r) in &results {
        table.push_nums(&[*s, r.n_lqfi, r.n_lqu]);
    }
    let onset = results
        .iter()
        .find(|(_, _, r)| r.n_lqfi > ONSET_THRESHOLD)
        .map(|(s, _, _)| *s);
    let points: Vec<Value> = results
        .iter()
        .map(|(s, _, r)| {
            let mut v = report_json(r);
            v["s"] = number(*s);
            v
        })
        .collect();
    let report = json!({"onset_s": onset.map_or(Value::Null, number), "onset_threshold": ONSET_THRESHOLD, "points": points});

    let mut emitted = Emitted {
        main: render(format, &config, &table, report),
        files: Vec::new(),
    };
    if let Some(dir) = &args.detail_dir {
        for (s, p, r) in &results {
            let detail = dephasing_detail(&ChannelSpec::Dephasing(*p), p, window, args.grid)?;
            let path = dir.join(format!("dephasing_s_{}.{}", fmt_f64(*s), extension(format)));
            emitted.files.push((path, render(format, &config, &detail, report_json(r))));
        }
    }
    Ok(emitted)
}

pub fn amplitude_detail(spec: &ChannelSpec, p: &AmplitudeDampingParams, window: Window, grid: usize) -> Result<Table, CliError> {
    let times = window.grid(grid);
    let measures = measure_rows(spec, &times)?;
    let mut table = Table::new(AMPLITUDE_DETAIL);
    for (&t, m) in times.iter().zip(&measures) {
        table.push_nums(&[t, ad_amplitude(t, p).norm(), m[0], m[1], m[2], m[3]]);
    }
    Ok(table)
}

pub fn amplitude(args: &AmplitudeArgs, g: &Globals) -> Result<Emitted, CliError> {
    let format = g.format;
    check_range("ratio", args.ratio_min, args.ratio_max)?;
    AmplitudeDampingParams::new(args.ratio_min * args.gamma0, args.gamma0, args.delta)?;
    let window = Window::new(0.0, args.t_max.unwrap_or(25.0 / args.gamma0))?;
    let config = RunConfig {
        command: "amplitude",
        globals: *g,
        window: Some([window.start, window.end]),
        params: args,
    };

    let ratios = linspace(args.ratio_min, args.ratio_max, args.steps);
    let results: Vec<(f64, AmplitudeDampingParams, NonMarkovReport)> = ratios
        .par_iter()
        .map(|&ratio| {
            let p = AmplitudeDampingParams::new(ratio * args.gamma0, args.gamma0, args.delta)?;
            let report = channel_report(&ChannelSpec::AmplitudeDamping(p), window, args.grid)?;
            Ok((ratio, p, report))
        })
        .collect::<Result<_, CliError>>()?;

    let mut table = Table::new(AMPLITUDE_SUMMARY);
    for (ratio, _, r) in &results {
        table.push_nums(&[*ratio, r.n_lqfi, r.n_lqu]);
    }
    let points: Vec<Value> = results
        .iter()
        .map(|(ratio, _, r)| {
            let mut v = report_json(r);
            v["lambda_over_gamma0"] = number(*ratio);
            v
        })
        .collect();
    let report = json!({"points": points});

    let mut emitted = Emitted {
        main: render(format, &config, &table, report),
        files: Vec::new(),
    };
    if let Some(dir) = &args.detail_dir {
        for (ratio, p, r) in &results {
            let detail = amplitude_detail(&ChannelSpec::AmplitudeDamping(*p), p, window, args.grid)?;
            let path = dir.join(format!("amplitude_ratio_{}.{}", fmt_f64(*ratio), extension(format)));
            emitted.files.push((path, render(format, &config, &detail, report_json(r))));
        }
    }
    Ok(emitted)
}

/// Summary line for standard error, since CSV output carries only the rows.
pub fn depolarizing_summary(report: &NonMarkovReport) -> String {
    format!(
        "N_lqfi={} N_lqu={} ratio={}",
        fmt_f64(report.n_lqfi),
        fmt_f64(report.n_lqu),
        report.ratio().map_or("undefined".to_string(), fmt_f64)
    )
}

pub fn depolarizing(args: &DepolarizingArgs, g: &Globals) -> Result<(Emitted, NonMarkovReport), CliError> {
    let format = g.format;
    let r = CorrelationTriple::new(args.r1, args.r2, args.r3)?;
    let p = DepolarizingParams::new(args.mu, r)?;
    let spec = ChannelSpec::Depolarizing(p);
    let window = Window::new(0.0, args.nu_max)?;
    let config = RunConfig {
        command: "depolarizing",
        globals: *g,
        window: Some([window.start, window.end]),
        params: args,
    };

    let report = channel_report(&spec, window, args.steps)?;
    let times = window.grid(args.steps);
    let measures = measure_rows(&spec, &times)?;
    let mut table = Table::new(DEPOLARIZING_DETAIL);
    for (&nu, m) in times.iter().zip(&measures) {
        table.push_nums(&[nu, depol_memory(nu, args.mu), m[0], m[1], m[2], m[3]]);
    }

    let mut report_value = report_json(&report);
    if let Some(step) = args.maximize_step {
        let (best, triple) = maximize_over_initial(args.mu, window, args.steps, step)?;
        report_value["maximized"] = json!({
            "grid_step": number(step),
            "r": triple.as_array().map(number),
            "report": report_json(&best),
        });
    }
    let emitted = Emitted {
        main: render(format, &config, &table, report_value),
        files: Vec::new(),
    };
    Ok((emitted, report))
}

/// Regenerates every default table into `dir`.
pub fn sweep(args: &SweepArgs, g: &Globals, dir: &Path) -> Result<Emitted, CliError> {
    let format = g.format;
    let ext = extension(format);
    let mut files = Vec::new();

    let deph = DephasingArgs {
        s_min: 1.0,
        s_max: 6.0,
        s_steps: args.s_points,
        omega_c: 1.0,
        t_max: None,
        grid: args.grid,
        detail_dir: Some(dir.join("dephasing")),
    };
    let out = dephasing(&deph, g)?;
    files.push((dir.join(format!("dephasing.{ext}")), out.main));
    files.extend(out.files);

    let amp = AmplitudeArgs {
        ratio_min: 0.05,
        ratio_max: 2.5,
        steps: args.ratio_points,
        gamma0: 1.0,
        delta: 0.0,
        t_max: None,
        grid: args.grid,
        detail_dir: Some(dir.join("amplitude")),
    };
    let out = amplitude(&amp, g)?;
    files.push((dir.join(format!("amplitude.{ext}")), out.main));
    files.extend(out.files);

    for mu in [3.0, 5.0] {
        let dep = DepolarizingArgs {
            mu,
            r1: 0.6,
            r2: -0.4,
            r3: 0.2,
            nu_max: 10.0,
            steps: args.grid,
            maximize_step: None,
        };
        let (out, _) = depolarizing(&dep, g)?;
        files.push((dir.join(format!("depolarizing_mu_{}.{ext}", fmt_f64(mu))), out.main));
    }

    let main = files
        .iter()
        .map(|(path, _)| format!("{}\n", path.display()))
        .collect();
    Ok(Emitted { main, files })
}
