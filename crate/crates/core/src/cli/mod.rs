//! Command-line front end: `profile`, `spectrum` and `report`.
//!
//! Parameters come from flags, then from an optional `key=value` file given
//! with `--config`, then from built-in defaults. `WAVESPEC_THREADS` caps the
//! worker pool used for grid classification.

pub mod output;
pub mod svg;

use std::collections::HashMap;
use std::ffi::OsString;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::asymptotics::Side;
use crate::error::Error;
use crate::model::{sample_profile, ModelParams};
use crate::spectrum::{
    abs_plus_analytic, beta_crit, branch_points, classify, default_k_window, default_window,
    dispersion_curves_at, essential_grid, ideal_weights_from, trace_abs_minus, AbsTrace, BranchPoints,
    EssentialGrid, Region, SpectrumCurve, TraceOptions, Verdict, Window, DEFAULT_RESOLUTION,
};
use output::{fmt_sig, round_sig, write_atomic, BranchPointJson, Csv, ReportJson};
use svg::{FigureSpec, Layer, LayerKind, Marker, Stroke};

pub const DEFAULT_BETA: f64 = 2.0;
pub const DEFAULT_C: f64 = 1.0;
pub const DEFAULT_K_SAMPLES: usize = 4001;
pub const DEFAULT_PROFILE_SAMPLES: usize = 401;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("partial output written; failed steps: {}", .0.join("; "))]
    Partial(Vec<String>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 1,
            CliError::Partial(_) => 4,
            CliError::Model(e) => match e {
                Error::InvalidParams { .. } | Error::InvalidInput(_) | Error::OutOfRange { .. } => 2,
                Error::NoAbsoluteBranchPoint(_) => 3,
                _ => 4,
            },
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "wavespec", version, about = "Essential and absolute spectra of Keller-Segel travelling waves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the travelling-wave profile (z, u, w).
    Profile(ProfileArgs),
    /// Essential-spectrum grid, dispersion curves, absolute spectrum and figure.
    Spectrum(SpectrumArgs),
    /// Stability report as JSON.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Chemotactic strength (default 2).
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Wave speed (default 1).
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// Consumption exponent in [0, 1] (default 0).
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<f64>,
    /// Cell diffusion (default 0).
    #[arg(long, allow_hyphen_values = true)]
    pub eps: Option<f64>,
    /// key=value file supplying defaults for any long option.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output format.
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Sampling interval `a:b` (default -10:10).
    #[arg(long, allow_hyphen_values = true)]
    pub z_range: Option<String>,
    /// Number of samples.
    #[arg(long)]
    pub n: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// `ideal` or `nu_minus,nu_plus` (default 0,0).
    #[arg(long, allow_hyphen_values = true)]
    pub weights: Option<String>,
    /// `re_min:re_max:im_min:im_max` in plot units.
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Grid size `NXxNY` (default 400x400).
    #[arg(long)]
    pub resolution: Option<String>,
    /// Wavenumber samples per dispersion curve.
    #[arg(long)]
    pub n: Option<usize>,
    /// Output directory (default current directory).
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Plot raw lambda instead of lambda / c^2.
    #[arg(long)]
    pub no_rescale: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `name=a:b:n` sweep over one parameter.
    #[arg(long, allow_hyphen_values = true)]
    pub sweep: Option<String>,
    /// Print only the critical strength for the given m.
    #[arg(long)]
    pub beta_crit_only: bool,
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    configure_threads();
    let result = match &cli.command {
        Command::Profile(a) => cmd_profile(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Report(a) => cmd_report(a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("WAVESPEC_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

// ---------------------------------------------------------------------------
// Configuration

/// `key=value` pairs; `#` starts a comment, underscores and dashes are equivalent.
#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: HashMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let mut values = HashMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", n + 1)))?;
            values.insert(k.trim().replace('_', "-"), v.trim().to_string());
        }
        Ok(Self { values })
    }

    /// Flag value if present, else the config entry.
    pub fn pick<T: FromStr>(&self, key: &str, flag: Option<T>) -> CliResult<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("config key `{key}`: cannot parse `{v}`"))),
        }
    }
}

fn resolve_params(a: &ParamArgs, cfg: &ConfigFile) -> CliResult<ModelParams> {
    let p = ModelParams {
        beta: cfg.pick("beta", a.beta)?.unwrap_or(DEFAULT_BETA),
        c: cfg.pick("c", a.c)?.unwrap_or(DEFAULT_C),
        m: cfg.pick("m", a.m)?.unwrap_or(0.0),
        eps: cfg.pick("eps", a.eps)?.unwrap_or(0.0),
    };
    Ok(p.validate()?)
}

fn resolve_format(a: &ParamArgs, cfg: &ConfigFile, allowed: &[&str], command: &str) -> CliResult<Option<String>> {
    let f: Option<String> = cfg.pick("format", a.format.clone())?;
    match f {
        Some(f) if !allowed.contains(&f.as_str()) => Err(CliError::Usage(format!(
            "format `{f}` is not available for {command} (allowed: {})",
            allowed.join(", ")
        ))),
        f => Ok(f),
    }
}

fn parse_floats(s: &str, sep: char, n: usize, what: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = s.split(sep).collect();
    let bad = || CliError::Usage(format!("{what}: expected {n} numbers separated by `{sep}`, got `{s}`"));
    if parts.len() != n {
        return Err(bad());
    }
    let v = parts
        .iter()
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| bad())?;
    if v.iter().any(|x| !x.is_finite()) {
        return Err(bad());
    }
    Ok(v)
}

fn parse_resolution(s: &str) -> CliResult<(usize, usize)> {
    let bad = || CliError::Usage(format!("resolution: expected NXxNY, got `{s}`"));
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => write_atomic(p, text.as_bytes())?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// profile

pub fn cmd_profile(a: &ProfileArgs) -> CliResult<()> {
    let cfg = ConfigFile::load(a.params.config.as_deref())?;
    let params = resolve_params(&a.params, &cfg)?;
    let format = resolve_format(&a.params, &cfg, &["csv", "svg"], "profile")?;
    let range = cfg.pick("z-range", a.z_range.clone())?.unwrap_or_else(|| "-10:10".into());
    let z = parse_floats(&range, ':', 2, "z-range")?;
    if !(z[0] < z[1]) {
        return Err(CliError::Usage("z-range must be increasing".into()));
    }
    let n = cfg.pick("n", a.n)?.unwrap_or(DEFAULT_PROFILE_SAMPLES);
    if n < 2 {
        return Err(CliError::Usage("n must be at least 2".into()));
    }
    let samples = sample_profile(&params, z[0], z[1], n);
    let text = match format.as_deref() {
        Some("svg") => profile_figure(&params, &samples, (z[0], z[1])).render(),
        _ => {
            let mut csv = Csv::new(&["z", "u", "w"]);
            for (zv, s) in &samples {
                csv.row(&[fmt_sig(*zv), fmt_sig(s.u), fmt_sig(s.w)]);
            }
            csv.finish()
        }
    };
    emit(a.out.as_deref(), &text)
}

fn profile_figure(params: &ModelParams, samples: &[(f64, crate::model::WaveState)], z: (f64, f64)) -> FigureSpec {
    let top = samples.iter().map(|(_, s)| s.u.max(s.w)).fold(1.0, f64::max) * 1.05;
    let mut fig = FigureSpec {
        title: format!("profile  {}", param_title(params)),
        window: (z.0, z.1, 0.0, top),
        x_label: "z".into(),
        y_label: "u, w".into(),
        equal_aspect: false,
        layers: vec![],
    };
    fig.push(Layer {
        id: "u".into(),
        label: "u (chemoattractant)".into(),
        colour: "#1f4e9c",
        kind: LayerKind::Lines(vec![samples.iter().map(|(z, s)| (*z, s.u)).collect()], Stroke::Solid),
    });
    fig.push(Layer {
        id: "w".into(),
        label: "w (cell density)".into(),
        colour: "#d62728",
        kind: LayerKind::Lines(vec![samples.iter().map(|(z, s)| (*z, s.w)).collect()], Stroke::Dashed),
    });
    fig
}

fn param_title(p: &ModelParams) -> String {
    format!("beta={} c={} m={} eps={}", fmt_sig(p.beta), fmt_sig(p.c), fmt_sig(p.m), fmt_sig(p.eps))
}

// ---------------------------------------------------------------------------
// spectrum

/// Everything `spectrum` computes, kept for writing and for tests.
pub struct SpectrumRun {
    pub params: ModelParams,
    pub weights: (f64, f64),
    pub window: Window,
    /// Divisor applied to lambda in the figure.
    pub scale: f64,
    pub branch_points: BranchPoints,
    pub grid: Option<EssentialGrid>,
    pub curves: Vec<SpectrumCurve>,
    pub traces: Vec<AbsTrace>,
    pub failures: Vec<String>,
}

pub fn cmd_spectrum(a: &SpectrumArgs) -> CliResult<()> {
    let cfg = ConfigFile::load(a.params.config.as_deref())?;
    let format = resolve_format(&a.params, &cfg, &["csv", "svg", "json"], "spectrum")?;
    let run = compute_spectrum(a, &cfg)?;
    let dir = cfg.pick("out-dir", a.out_dir.clone())?.unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)?;
    let want = |f: &str| format.as_deref().is_none_or(|g| g == f);
    if want("csv") {
        if let Some(grid) = &run.grid {
            write_atomic(&dir.join("grid.csv"), grid_csv(grid).as_bytes())?;
        }
        write_atomic(&dir.join("curves.csv"), curves_csv(&run.curves).as_bytes())?;
        write_atomic(&dir.join("abs_spectrum.csv"), abs_csv(&run).as_bytes())?;
    }
    if want("json") {
        write_atomic(&dir.join("branch_points.json"), branch_points_json(&run).as_bytes())?;
    }
    if want("svg") {
        write_atomic(&dir.join("spectrum.svg"), spectrum_figure(&run).render().as_bytes())?;
    }
    if run.failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Partial(run.failures))
    }
}

pub fn compute_spectrum(a: &SpectrumArgs, cfg: &ConfigFile) -> CliResult<SpectrumRun> {
    let params = resolve_params(&a.params, cfg)?;
    let c2 = params.c * params.c;
    let no_rescale = a.no_rescale || cfg.pick("no-rescale", None::<bool>)?.unwrap_or(false);
    let scale = if no_rescale { 1.0 } else { c2 };
    let bps = branch_points(&params)?;
    let mut failures: Vec<String> = bps.failures.iter().map(|f| format!("branch point seed: {f}")).collect();

    let weights_spec = cfg.pick("weights", a.weights.clone())?.unwrap_or_else(|| "0,0".into());
    let weights = if weights_spec.trim() == "ideal" {
        let w = ideal_weights_from(&params, &bps)?;
        (w.nu_minus_star, w.nu_plus_star)
    } else {
        let v = parse_floats(&weights_spec, ',', 2, "weights")?;
        (v[0], v[1])
    };

    let window = match cfg.pick("window", a.window.clone())? {
        Some(w) => {
            let v = parse_floats(&w, ':', 4, "window")?;
            if !(v[0] < v[1] && v[2] < v[3]) {
                return Err(CliError::Usage("window bounds must be increasing".into()));
            }
            (v[0] * scale, v[1] * scale, v[2] * scale, v[3] * scale)
        }
        None => auto_window(&params, &bps),
    };
    let resolution = match cfg.pick("resolution", a.resolution.clone())? {
        Some(r) => parse_resolution(&r)?,
        None => DEFAULT_RESOLUTION,
    };

    let grid = match essential_grid(&params, weights.0, weights.1, window, resolution) {
        Ok(g) => Some(g),
        Err(e @ Error::InvalidInput(_)) => return Err(e.into()),
        Err(e) => {
            failures.push(format!("essential grid: {e}"));
            None
        }
    };

    let n = cfg.pick("n", a.n)?.unwrap_or(DEFAULT_K_SAMPLES);
    if n < 2 {
        return Err(CliError::Usage("n must be at least 2".into()));
    }
    let k_max = default_k_window(&params) * if params.eps > 0.0 { 2.0 } else { 1.0 };
    let mut ks: Vec<f64> = (0..n).map(|i| -k_max + 2.0 * k_max * i as f64 / (n - 1) as f64).collect();
    // Sample exactly at the branch-point wavenumbers so weighted curves pass
    // through the cusp tips.
    ks.extend(bps.absolute().map(|b| b.double_root_mu.im));
    ks.sort_by(f64::total_cmp);
    ks.dedup();
    let mut curves = Vec::new();
    for (side, nu) in [(Side::MinusInfinity, weights.0), (Side::PlusInfinity, weights.1)] {
        match dispersion_curves_at(&params, side, nu, &ks) {
            Ok(d) => curves.extend(d.curves),
            Err(e) => failures.push(format!("dispersion curves ({}): {e}", side.label())),
        }
    }

    let mut traces = Vec::new();
    for seed in bps.absolute().filter(|b| b.lambda_br.im >= 0.0) {
        let options = TraceOptions {
            nu_end: Some(params.c),
            ..TraceOptions::default()
        };
        match trace_abs_minus(&params, seed, options) {
            Ok(t) => {
                if let Some(f) = &t.failure {
                    failures.push(format!("absolute spectrum trace: {f}"));
                }
                traces.push(t);
            }
            Err(e) => failures.push(format!("absolute spectrum trace: {e}")),
        }
    }

    Ok(SpectrumRun {
        params,
        weights,
        window,
        scale,
        branch_points: bps,
        grid,
        curves,
        traces,
        failures,
    })
}

/// Default window widened to contain every absolute branch point.
fn auto_window(params: &ModelParams, bps: &BranchPoints) -> Window {
    let c2 = params.c * params.c;
    let (mut x0, mut x1, mut y0, mut y1) = default_window(params.c);
    for b in bps.absolute() {
        let l = b.lambda_br;
        x0 = x0.min(l.re - 0.4 * c2);
        x1 = x1.max(l.re + 0.4 * c2);
        y1 = y1.max(l.im.abs() + 0.4 * c2);
        y0 = y0.min(-(l.im.abs() + 0.4 * c2));
    }
    (x0, x1, y0, y1)
}

pub fn grid_csv(grid: &EssentialGrid) -> String {
    let mut csv = Csv::new(&["re", "im", "i_plus", "i_minus", "region"]);
    for cell in &grid.cells {
        csv.row(&[
            fmt_sig(cell.lambda.re),
            fmt_sig(cell.lambda.im),
            cell.i_plus.to_string(),
            cell.i_minus.to_string(),
            cell.region.label().to_string(),
        ]);
    }
    csv.finish()
}

pub fn curves_csv(curves: &[SpectrumCurve]) -> String {
    let mut csv = Csv::new(&["side", "branch", "k", "re_lambda", "im_lambda", "weight"]);
    for c in curves {
        for &(k, l) in &c.samples {
            csv.row(&[
                c.side.label().to_string(),
                c.branch_id.to_string(),
                fmt_sig(k),
                fmt_sig(l.re),
                fmt_sig(l.im),
                fmt_sig(c.weight),
            ]);
        }
    }
    csv.finish()
}

/// Traced branches from the left (`nu` is the sweep weight) followed by the
/// closed-form set from the right (no sweep weight).
pub fn abs_csv(run: &SpectrumRun) -> String {
    let mut csv = Csv::new(&["side", "branch", "nu", "re_lambda", "im_lambda"]);
    let mut branch = 0;
    for t in &run.traces {
        for curve in [&t.curve, &t.mirror] {
            for &(nu, l) in &curve.samples {
                csv.row(&["minus".into(), branch.to_string(), fmt_sig(nu), fmt_sig(l.re), fmt_sig(l.im)]);
            }
            branch += 1;
        }
    }
    for piece in abs_plus_analytic(&run.params).sample(run.window.0, 200) {
        for l in piece {
            csv.row(&["plus".into(), branch.to_string(), String::new(), fmt_sig(l.re), fmt_sig(l.im)]);
        }
        branch += 1;
    }
    csv.finish()
}

#[derive(Serialize)]
struct TraceJson {
    seed_re: f64,
    seed_im: f64,
    nu_start: f64,
    nu_end: f64,
    samples: usize,
    failure: Option<String>,
}

pub fn branch_points_json(run: &SpectrumRun) -> String {
    let bps: Vec<BranchPointJson> = run.branch_points.points.iter().map(BranchPointJson::from).collect();
    let traces: Vec<TraceJson> = run
        .traces
        .iter()
        .map(|t| {
            let seed = t.curve.samples[0];
            let last = t.curve.samples.last().map_or(seed.0, |s| s.0);
            TraceJson {
                seed_re: round_sig(seed.1.re),
                seed_im: round_sig(seed.1.im),
                nu_start: round_sig(seed.0),
                nu_end: round_sig(last),
                samples: t.curve.samples.len(),
                failure: t.failure.as_ref().map(|e| e.to_string()),
            }
        })
        .collect();
    let value = json!({
        "params": {
            "beta": round_sig(run.params.beta),
            "c": round_sig(run.params.c),
            "m": round_sig(run.params.m),
            "eps": round_sig(run.params.eps),
        },
        "weights": {"nu_minus": round_sig(run.weights.0), "nu_plus": round_sig(run.weights.1)},
        "branch_points": bps,
        "abs_traces": traces,
        "failures": run.failures,
    });
    let mut s = serde_json::to_string_pretty(&value).expect("serialisable");
    s.push('\n');
    s
}

/// Splits a polyline into the runs that touch the (slightly padded) window.
fn clip_polyline(points: &[(f64, f64)], w: (f64, f64, f64, f64)) -> Vec<Vec<(f64, f64)>> {
    let pad_x = 0.05 * (w.1 - w.0);
    let pad_y = 0.05 * (w.3 - w.2);
    let inside = |p: &(f64, f64)| p.0 >= w.0 - pad_x && p.0 <= w.1 + pad_x && p.1 >= w.2 - pad_y && p.1 <= w.3 + pad_y;
    let mut out = Vec::new();
    let mut run: Vec<(f64, f64)> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if inside(p) {
            if run.is_empty() && i > 0 {
                run.push(points[i - 1]);
            }
            run.push(*p);
        } else if !run.is_empty() {
            run.push(*p);
            out.push(std::mem::take(&mut run));
        }
    }
    if !run.is_empty() {
        out.push(run);
    }
    out
}

pub fn spectrum_figure(run: &SpectrumRun) -> FigureSpec {
    let s = run.scale;
    let d = |l: Complex64| (l.re / s, l.im / s);
    let (x0, x1, y0, y1) = run.window;
    let window = (x0 / s, x1 / s, y0 / s, y1 / s);
    let unit = if s == 1.0 { "" } else { " / c^2" };
    let mut fig = FigureSpec {
        title: format!(
            "{}  nu-={} nu+={}",
            param_title(&run.params),
            fmt_sig(run.weights.0),
            fmt_sig(run.weights.1)
        ),
        window,
        x_label: format!("Re lambda{unit}"),
        y_label: format!("Im lambda{unit}"),
        equal_aspect: true,
        layers: vec![],
    };

    if let Some(grid) = &run.grid {
        let (nx, ny) = grid.resolution;
        let dx = (x1 - x0) / nx as f64 / s;
        let dy = (y1 - y0) / ny as f64 / s;
        let mut rects = Vec::new();
        for iy in 0..ny {
            let mut ix = 0;
            while ix < nx {
                if grid.cell(ix, iy).region != Region::InEssential {
                    ix += 1;
                    continue;
                }
                let start = ix;
                while ix < nx && grid.cell(ix, iy).region == Region::InEssential {
                    ix += 1;
                }
                rects.push((window.0 + start as f64 * dx, window.2 + iy as f64 * dy, (ix - start) as f64 * dx, dy));
            }
        }
        fig.push(Layer {
            id: "essential".into(),
            label: "essential spectrum (index mismatch)".into(),
            colour: "#cfcfcf",
            kind: LayerKind::Cells(rects),
        });
    }

    let axes = vec![
        vec![(window.0, 0.0), (window.1, 0.0)],
        vec![(0.0, window.2), (0.0, window.3)],
    ];
    fig.push(Layer {
        id: "axes".into(),
        label: "real and imaginary axes".into(),
        colour: "#9a9a9a",
        kind: LayerKind::Lines(axes, Stroke::Solid),
    });

    for (side, id, label, colour, stroke) in [
        (Side::MinusInfinity, "dispersion-minus", "dispersion relations, z -> -inf", "#1f4e9c", Stroke::Solid),
        (Side::PlusInfinity, "dispersion-plus", "dispersion relations, z -> +inf", "#2e8b57", Stroke::Dashed),
    ] {
        let lines = run
            .curves
            .iter()
            .filter(|c| c.side == side)
            .flat_map(|c| clip_polyline(&c.lambdas().map(d).collect::<Vec<_>>(), window))
            .collect();
        fig.push(Layer {
            id: id.into(),
            label: label.into(),
            colour,
            kind: LayerKind::Lines(lines, stroke),
        });
    }

    let abs_minus = run
        .traces
        .iter()
        .flat_map(|t| [&t.curve, &t.mirror])
        .flat_map(|c| clip_polyline(&c.lambdas().map(d).collect::<Vec<_>>(), window))
        .collect();
    fig.push(Layer {
        id: "abs-minus".into(),
        label: "absolute spectrum, z -> -inf".into(),
        colour: "#d62728",
        kind: LayerKind::Lines(abs_minus, Stroke::Solid),
    });
    let abs_plus = abs_plus_analytic(&run.params)
        .sample(x0, 400)
        .into_iter()
        .flat_map(|p| clip_polyline(&p.into_iter().map(d).collect::<Vec<_>>(), window))
        .collect();
    fig.push(Layer {
        id: "abs-plus".into(),
        label: "absolute spectrum, z -> +inf".into(),
        colour: "#d62728",
        kind: LayerKind::Lines(abs_plus, Stroke::Dashed),
    });

    let marker = |b: &crate::spectrum::BranchPoint| {
        let (x, y) = d(b.lambda_br);
        Marker {
            x,
            y,
            data: (b.lambda_br.re, b.lambda_br.im),
        }
    };
    let in_window = |m: &Marker| m.x >= window.0 && m.x <= window.1 && m.y >= window.2 && m.y <= window.3;
    let absolute: Vec<Marker> = run.branch_points.absolute().map(marker).filter(in_window).collect();
    let generalised: Vec<Marker> = run
        .branch_points
        .points
        .iter()
        .filter(|b| !b.in_absolute)
        .map(marker)
        .filter(in_window)
        .collect();
    fig.push(Layer {
        id: "branch-points".into(),
        label: "branch points".into(),
        colour: "#000000",
        kind: LayerKind::Markers(absolute, false),
    });
    fig.push(Layer {
        id: "generalised-branch-points".into(),
        label: "generalised branch points".into(),
        colour: "#555555",
        kind: LayerKind::Markers(generalised, true),
    });
    fig
}

// ---------------------------------------------------------------------------
// report

#[derive(Debug, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub verdict: Option<Verdict>,
    pub beta_crit: Option<f64>,
    pub leading_re: Option<f64>,
    pub leading_im: Option<f64>,
    pub nu_minus_star: Option<f64>,
    pub nu_min: Option<f64>,
    pub nu_max: Option<f64>,
    pub empty: Option<bool>,
    pub error: Option<String>,
}

pub fn cmd_report(a: &ReportArgs) -> CliResult<()> {
    let cfg = ConfigFile::load(a.params.config.as_deref())?;
    resolve_format(&a.params, &cfg, &["json"], "report")?;
    let out = cfg.pick("out", a.out.clone())?;
    let beta_crit_only = a.beta_crit_only || cfg.pick("beta-crit-only", None::<bool>)?.unwrap_or(false);
    if beta_crit_only {
        let m = cfg.pick("m", a.params.m)?.unwrap_or(0.0);
        let b = beta_crit(m)?;
        let text = format!("{}\n", serde_json::to_string_pretty(&json!({"m": round_sig(m), "beta_crit": round_sig(b)})).expect("serialisable"));
        return emit(out.as_deref(), &text);
    }
    let params = resolve_params(&a.params, &cfg)?;
    if let Some(sweep) = cfg.pick("sweep", a.sweep.clone())? {
        let text = sweep_report(&params, &sweep)?;
        return emit(out.as_deref(), &text);
    }
    let report = classify(&params)?;
    let json = ReportJson::from_report(&report);
    let mut text = serde_json::to_string_pretty(&json).expect("serialisable");
    text.push('\n');
    ReportJson::parse_checked(&text)?;
    emit(out.as_deref(), &text)
}

fn sweep_report(base: &ModelParams, spec: &str) -> CliResult<String> {
    let bad = || CliError::Usage(format!("sweep: expected name=a:b:n, got `{spec}`"));
    let (name, range) = spec.split_once('=').ok_or_else(bad)?;
    let parts: Vec<&str> = range.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if n == 0 || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    let set = |v: f64| -> CliResult<ModelParams> {
        let mut p = *base;
        match name.trim() {
            "beta" => p.beta = v,
            "c" => p.c = v,
            "m" => p.m = v,
            "eps" => p.eps = v,
            other => return Err(CliError::Usage(format!("sweep: unknown parameter `{other}`"))),
        }
        Ok(p)
    };
    let rows: Vec<SweepRow> = (0..n)
        .map(|i| {
            let v = if n == 1 { a } else { a + (b - a) * i as f64 / (n - 1) as f64 };
            let p = set(v)?;
            Ok(sweep_row(round_sig(v), &p))
        })
        .collect::<CliResult<_>>()?;
    let value = json!({
        "params": base,
        "parameter": name.trim(),
        "rows": rows,
    });
    let mut s = serde_json::to_string_pretty(&value).expect("serialisable");
    s.push('\n');
    Ok(s)
}

fn sweep_row(value: f64, p: &ModelParams) -> SweepRow {
    match p.validate().and_then(|p| classify(&p)) {
        Ok(r) => {
            let lead = r
                .branch_points
                .iter()
                .filter(|b| b.in_absolute)
                .max_by(|x, y| x.lambda_br.re.total_cmp(&y.lambda_br.re).then(x.lambda_br.im.total_cmp(&y.lambda_br.im)));
            SweepRow {
                value,
                verdict: Some(r.verdict),
                beta_crit: r.beta_crit_effective.map(round_sig),
                leading_re: lead.map(|b| round_sig(b.lambda_br.re)),
                leading_im: lead.map(|b| round_sig(b.lambda_br.im.abs())),
                nu_minus_star: Some(round_sig(r.weights.nu_minus_star)),
                nu_min: r.weights.nu_min.map(round_sig),
                nu_max: r.weights.nu_max.map(round_sig),
                empty: Some(r.weights.empty),
                error: None,
            }
        }
        Err(e) => SweepRow {
            value,
            verdict: None,
            beta_crit: None,
            leading_re: None,
            leading_im: None,
            nu_minus_star: None,
            nu_min: None,
            nu_max: None,
            empty: None,
            error: Some(e.to_string()),
        },
    }
}
