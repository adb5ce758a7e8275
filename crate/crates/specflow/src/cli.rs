//! Command-line front end: metric evaluation, path tracking, mu-invariants,
//! scattering sweeps, the invariant verification table, and SVG plotting.
//!
//! Exit codes: 0 ok, 1 property failure, 2 input error, 3 tracking failure,
//! 4 scattering failure.

use crate::lift::{
    self, lift_path, track_from_samples, ArgumentTrack, LiftError, LiftParams, SpectrumPath,
};
use crate::linalg::CMat;
use crate::matching::distance_d;
use crate::mu::{loop_constancy_check, mu_integral, mu_invariant, MuInvariant};
use crate::rigged::RiggedSet;
use crate::scatter::{self, xi_decompose, ScatteringModel};
use crate::unispec::{self, cmat_from_json, spec, unitary_spectrum_path, UnitaryTC};
use crate::{plot, verify};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use std::f64::consts::TAU;
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "specflow",
    about = "Spectral flow of unitary spectra: matching metric, eigenvalue tracking, mu-invariants, and spectral shift decomposition on lattice scattering models"
)]
pub struct Cli {
    /// Output directory for CSV and SVG artifacts.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance overrides, e.g. --tol step_tol=0.05 (names: step_tol,
    /// node_tol, max_depth, cluster_tol).
    #[arg(long = "tol", global = true, value_parser = parse_tol)]
    pub tol: Vec<(String, f64)>,
    /// Also emit SVG plots where the command supports them.
    #[arg(long, global = true)]
    pub svg: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Distance between two rigged sets from a JSON file {"s": .., "t": ..}.
    Metric {
        /// Input JSON file.
        #[arg(long)]
        input: PathBuf,
    },
    /// Track eigenvalue arguments along a unitary path; writes track.csv.
    Track(PathArgs),
    /// Mu-invariant of a tracked path; writes mu.csv.
    Mu(PathArgs),
    /// Spectral shift sweep over a (lambda, r) grid; writes scatter.csv.
    Scatter {
        /// Experiment configuration JSON.
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the full invariant suite and print a pass/fail table.
    Verify {
        /// Fault injection for testing the harness itself (e.g. "metric").
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
    /// Render an exported CSV (track or mu) as an SVG plot.
    Plot {
        #[arg(long)]
        input: PathBuf,
        /// What the CSV contains: "track" or "mu".
        #[arg(long)]
        kind: String,
        /// Output SVG path; defaults to the input with an .svg extension.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Path selection shared by `track` and `mu`.
#[derive(Args)]
pub struct PathArgs {
    /// Builtin generator: "loop", "identity" or "exp".
    #[arg(long, conflicts_with = "matrices")]
    pub builtin: Option<String>,
    /// Loop winding count for --builtin loop.
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    /// Hermitian generator JSON for --builtin exp (rows of [re, im] pairs).
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Path endpoint for --builtin exp.
    #[arg(long, default_value_t = 1.0)]
    pub r_max: f64,
    /// JSON file {"r": [..], "matrices": [..]} of pre-sampled unitaries.
    #[arg(long)]
    pub matrices: Option<PathBuf>,
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got {s}"))?;
    let v: f64 = value.parse().map_err(|e| format!("{name}: {e}"))?;
    if !(v > 0.0) {
        return Err(format!("tolerance {name} must be positive"));
    }
    Ok((name.to_string(), v))
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> CliError {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

type CliResult = Result<(), CliError>;

fn lift_params_from(tol: &[(String, f64)]) -> Result<(LiftParams, f64), CliError> {
    let mut p = LiftParams::default();
    let mut cluster_tol = unispec::PATH_CLUSTER_TOL;
    for (name, value) in tol {
        match name.as_str() {
            "step_tol" => p.step_tol = *value,
            "node_tol" => p.node_tol = *value,
            "max_depth" => p.max_depth = *value as u32,
            "min_intervals" => p.min_intervals = *value as u32,
            "cluster_tol" => cluster_tol = *value,
            other => return Err(CliError::input(format!("unknown tolerance name: {other}"))),
        }
    }
    Ok((p, cluster_tol))
}

fn map_lift_err(e: LiftError) -> CliError {
    let code = match e {
        LiftError::NotIdentityStart(_) | LiftError::NotCircleSpace(_) => 2,
        _ => 3,
    };
    CliError {
        code,
        message: e.to_string(),
    }
}

fn read_json(path: &Path) -> Result<serde_json::Value, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn write_out(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::input(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    Ok(path)
}

/// Formats a number with 12 significant digits, plain decimal notation.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000000".into();
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (11 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

// ---------------------------------------------------------------------------
// CSV import/export

pub fn track_to_csv(track: &ArgumentTrack) -> String {
    let mut s = String::from("r,j,theta_j\n");
    for (k, &r) in track.grid().iter().enumerate() {
        for j in 0..track.track_count() {
            s.push_str(&format!("{r},{j},{}\n", track.theta(j, k)));
        }
    }
    s
}

pub fn track_from_csv(text: &str) -> Result<ArgumentTrack, String> {
    let mut grid: Vec<f64> = Vec::new();
    let mut tracks: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 3 {
            return Err(format!("line {}: expected 3 columns", lineno + 1));
        }
        let r: f64 = parts[0]
            .parse()
            .map_err(|e| format!("line {}: {e}", lineno + 1))?;
        let j: usize = parts[1]
            .parse()
            .map_err(|e| format!("line {}: {e}", lineno + 1))?;
        let th: f64 = parts[2]
            .parse()
            .map_err(|e| format!("line {}: {e}", lineno + 1))?;
        if j == 0 {
            grid.push(r);
        }
        if tracks.len() <= j {
            tracks.resize(j + 1, Vec::new());
        }
        tracks[j].push(th);
    }
    if tracks.iter().any(|t| t.len() != grid.len()) {
        return Err("ragged track columns".into());
    }
    Ok(ArgumentTrack::from_raw(grid, tracks, true))
}

pub fn mu_to_csv(m: &MuInvariant) -> String {
    let mut edges = vec![0.0];
    edges.extend(m.breakpoints().iter().copied());
    edges.push(TAU);
    let mut s = String::from("theta_start,theta_end,value\n");
    for (w, &v) in edges.windows(2).zip(m.doubled_interval_values()) {
        s.push_str(&format!("{},{},{}\n", w[0], w[1], v as f64 / 2.0));
    }
    s
}

pub fn mu_pieces_from_csv(text: &str) -> Result<Vec<(f64, f64, f64)>, String> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 3 {
            return Err(format!("line {}: expected 3 columns", lineno + 1));
        }
        let a: f64 = parts[0]
            .parse()
            .map_err(|e| format!("line {}: {e}", lineno + 1))?;
        let b: f64 = parts[1]
            .parse()
            .map_err(|e| format!("line {}: {e}", lineno + 1))?;
        let v: f64 = parts[2]
            .parse()
            .map_err(|e| format!("line {}: {e}", lineno + 1))?;
        out.push((a, b, v));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Commands

fn cmd_metric(input: &Path, out: &Path) -> CliResult {
    let doc = read_json(input)?;
    let obj = doc
        .as_object()
        .ok_or_else(|| CliError::input("top level must be an object with keys \"s\" and \"t\""))?;
    let get = |key: &str| -> Result<RiggedSet, CliError> {
        let v = obj
            .get(key)
            .ok_or_else(|| CliError::input(format!("missing field \"{key}\"")))?;
        serde_json::from_value(v.clone())
            .map_err(|e| CliError::input(format!("field \"{key}\": {e}")))
    };
    let s = get("s")?;
    let t = get("t")?;
    let m = distance_d(&s, &t).map_err(|e| CliError::input(e.to_string()))?;
    println!("{}", format_sig12(m.cost));

    let mut csv = String::from("source,target,cost\n");
    for &(a, b) in &m.pairs {
        let fmt = |p: crate::rigged::SpacePoint| match p {
            crate::rigged::SpacePoint::Sticky => "sticky".to_string(),
            crate::rigged::SpacePoint::At(x) => format!("{x}"),
        };
        let cost = match (a, b) {
            (crate::rigged::SpacePoint::At(x), crate::rigged::SpacePoint::At(y)) => {
                s.space().dist(x, y)
            }
            (crate::rigged::SpacePoint::At(x), _) | (_, crate::rigged::SpacePoint::At(x)) => {
                s.space().sticky_dist(x)
            }
            _ => 0.0,
        };
        csv.push_str(&format!("{},{},{}\n", fmt(a), fmt(b), cost));
    }
    write_out(out, "matching.csv", &csv)?;
    Ok(())
}

fn build_path(args: &PathArgs, cluster_tol: f64) -> Result<SpectrumPath, CliError> {
    match args.builtin.as_deref() {
        Some("loop") => Ok(lift::loop_path(args.n)),
        Some("identity") => Ok(SpectrumPath::new((0.0, 1.0), true, |_| {
            RiggedSet::empty(crate::rigged::Space::Circle)
        })),
        Some("exp") => {
            let file = args
                .matrix
                .as_ref()
                .ok_or_else(|| CliError::input("--builtin exp requires --matrix FILE"))?;
            let doc = read_json(file)?;
            let h = cmat_from_json(&doc).map_err(CliError::input)?;
            if h.sub(&h.adjoint()).max_abs() > 1e-12 {
                return Err(CliError::input("generator matrix must be Hermitian"));
            }
            if args.r_max <= 0.0 {
                return Err(CliError::input("--r-max must be positive"));
            }
            Ok(unitary_spectrum_path(
                (0.0, args.r_max),
                true,
                cluster_tol,
                move |r| crate::linalg::unitary_exp_i(&h, r).expect("Hermitian exponential"),
            ))
        }
        Some(other) => Err(CliError::input(format!(
            "unknown builtin \"{other}\" (expected loop, identity or exp)"
        ))),
        None => Err(CliError::input("choose --builtin NAME or --matrices FILE")),
    }
}

fn lift_from_args(
    args: &PathArgs,
    params: &LiftParams,
    cluster_tol: f64,
) -> Result<ArgumentTrack, CliError> {
    if let Some(file) = &args.matrices {
        // Pre-sampled grid: no refinement, step bounds are checked as-is.
        let doc = read_json(file)?;
        let rs: Vec<f64> = serde_json::from_value(
            doc.get("r")
                .cloned()
                .ok_or_else(|| CliError::input("missing field \"r\""))?,
        )
        .map_err(|e| CliError::input(format!("field \"r\": {e}")))?;
        let mats = doc
            .get("matrices")
            .and_then(|m| m.as_array())
            .ok_or_else(|| CliError::input("missing array field \"matrices\""))?;
        if rs.len() != mats.len() || rs.is_empty() {
            return Err(CliError::input(
                "\"r\" and \"matrices\" must have equal nonzero length",
            ));
        }
        let mut sets = Vec::with_capacity(mats.len());
        for m in mats {
            let cm = cmat_from_json(m).map_err(CliError::input)?;
            let u = UnitaryTC::new(cm).map_err(|e| CliError::input(e.to_string()))?;
            sets.push(spec(&u, cluster_tol).map_err(|e| CliError::input(e.to_string()))?);
        }
        return track_from_samples(&rs, &sets, sets[0].is_empty(), params.node_tol)
            .map_err(map_lift_err);
    }
    let path = build_path(args, cluster_tol)?;
    lift_path(&path, params).map_err(map_lift_err)
}

fn cmd_track(args: &PathArgs, out: &Path, tol: &[(String, f64)], svg: bool) -> CliResult {
    let (params, cluster_tol) = lift_params_from(tol)?;
    let track = lift_from_args(args, &params, cluster_tol)?;
    let csv = track_to_csv(&track);
    let path = write_out(out, "track.csv", &csv)?;
    println!(
        "tracked {} eigenvalue(s) over {} nodes -> {}",
        track.track_count(),
        track.node_count(),
        path.display()
    );
    if svg {
        let series: Vec<(String, Vec<(f64, f64)>)> = (0..track.track_count())
            .map(|j| {
                (
                    format!("theta_{j}"),
                    track
                        .grid()
                        .iter()
                        .enumerate()
                        .map(|(k, &r)| (r, track.theta(j, k)))
                        .collect(),
                )
            })
            .collect();
        let svg_text = plot::polyline_plot(&series, "eigenvalue arguments", "r", "theta");
        write_out(out, "track.svg", &svg_text)?;
    }
    Ok(())
}

fn cmd_mu(args: &PathArgs, out: &Path, tol: &[(String, f64)], svg: bool) -> CliResult {
    let (params, cluster_tol) = lift_params_from(tol)?;
    let track = lift_from_args(args, &params, cluster_tol)?;
    if !track.start_at_identity() {
        return Err(CliError::input(
            "mu requires the path to start at the identity (empty spectrum)",
        ));
    }
    let m = mu_invariant(&track);
    let csv = mu_to_csv(&m);
    let path = write_out(out, "mu.csv", &csv)?;
    println!("mu integral = {}", format_sig12(mu_integral(&m)));
    if m.start_set().is_empty() && m.end_set().is_empty() {
        match loop_constancy_check(&track) {
            Ok(w) => println!("loop winding = {w}"),
            Err(e) => {
                return Err(CliError {
                    code: 3,
                    message: e.to_string(),
                })
            }
        }
    }
    println!("wrote {}", path.display());
    if svg {
        let pieces: Vec<(f64, f64, f64)> = mu_pieces_from_csv(&csv).unwrap();
        let svg_text = plot::step_plot(&pieces, "mu-invariant", "theta", "mu");
        write_out(out, "mu.svg", &svg_text)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Scattering sweep

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct ScatterConfig {
    model: ModelConfig,
    lambda_grid: Vec<f64>,
    r_grid: Vec<f64>,
    #[serde(default)]
    tolerances: SweepTolerances,
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelConfig {
    sites: Vec<i64>,
    kappa: Vec<f64>,
    #[serde(rename = "J")]
    j: Vec<Vec<JsonScalar>>,
}

#[derive(serde::Deserialize)]
#[serde(untagged)]
enum JsonScalar {
    Real(f64),
    Pair([f64; 2]),
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepTolerances {
    #[serde(default = "default_xi_tol")]
    xi_tol: f64,
    #[serde(default = "default_xi_tol")]
    bk_tol: f64,
    #[serde(default)]
    step_tol: Option<f64>,
    #[serde(default)]
    node_tol: Option<f64>,
}

fn default_xi_tol() -> f64 {
    1e-6
}

impl Default for SweepTolerances {
    fn default() -> Self {
        SweepTolerances {
            xi_tol: default_xi_tol(),
            bk_tol: default_xi_tol(),
            step_tol: None,
            node_tol: None,
        }
    }
}

impl ModelConfig {
    fn build(&self) -> Result<ScatteringModel, CliError> {
        let k = self.sites.len();
        if self.j.len() != k || self.j.iter().any(|row| row.len() != k) {
            return Err(CliError::input("field \"J\": must be a k x k matrix"));
        }
        let j = CMat::from_fn(k, k, |i, jx| match self.j[i][jx] {
            JsonScalar::Real(x) => Complex64::new(x, 0.0),
            JsonScalar::Pair([re, im]) => Complex64::new(re, im),
        });
        ScatteringModel::new(self.sites.clone(), self.kappa.clone(), j)
            .map_err(|e| CliError::input(e.to_string()))
    }
}

fn cmd_scatter(config: &Path, out: &Path, tol: &[(String, f64)]) -> CliResult {
    let doc = fs::read_to_string(config)
        .map_err(|e| CliError::input(format!("{}: {e}", config.display())))?;
    let cfg: ScatterConfig = serde_json::from_str(&doc)
        .map_err(|e| CliError::input(format!("{}: {e}", config.display())))?;
    for t in [cfg.tolerances.xi_tol, cfg.tolerances.bk_tol] {
        if !(t > 0.0) {
            return Err(CliError::input("tolerances must be positive"));
        }
    }
    let model = cfg.model.build()?;
    let (mut params, _) = lift_params_from(tol)?;
    if let Some(s) = cfg.tolerances.step_tol {
        params.step_tol = s;
    }
    if let Some(s) = cfg.tolerances.node_tol {
        params.node_tol = s;
    }

    let grid: Vec<(f64, f64)> = cfg
        .lambda_grid
        .iter()
        .flat_map(|&l| cfg.r_grid.iter().map(move |&r| (l, r)))
        .collect();
    use rayon::prelude::*;
    let rows: Vec<Result<scatter::XiDecomposition, (f64, f64, String)>> = grid
        .par_iter()
        .map(|&(lambda, r)| {
            xi_decompose(&model, lambda, r, &params).map_err(|e| (lambda, r, e.to_string()))
        })
        .collect();

    let mut csv = String::from("lambda,r,xi,xi_ac,xi_s,mu_s_value,bk_residual,min_singval\n");
    let mut max_xi_s_dev = 0.0f64;
    let mut max_bk = 0.0f64;
    let mut first_failure: Option<String> = None;
    let mut resonances = 0usize;
    for row in &rows {
        match row {
            Ok(d) => {
                csv.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    d.lambda,
                    d.r,
                    d.xi,
                    d.xi_ac,
                    d.xi_s,
                    d.mu_s_value,
                    d.bk_residual,
                    d.min_singval
                ));
                max_xi_s_dev = max_xi_s_dev.max((d.xi_s - d.xi_s.round()).abs());
                max_bk = max_bk.max(d.bk_residual);
                if (d.xi_s - d.xi_s.round()).abs() > cfg.tolerances.xi_tol
                    && first_failure.is_none()
                {
                    first_failure = Some(format!(
                        "xi_s = {} not integer at lambda = {}, r = {}",
                        d.xi_s, d.lambda, d.r
                    ));
                }
                if d.bk_residual > cfg.tolerances.bk_tol && first_failure.is_none() {
                    first_failure = Some(format!(
                        "Birman-Krein residual {} at lambda = {}, r = {}",
                        d.bk_residual, d.lambda, d.r
                    ));
                }
            }
            Err((lambda, r, msg)) => {
                csv.push_str(&format!("{lambda},{r},nan,nan,nan,nan,nan,nan\n"));
                if msg.contains("resonance") || msg.contains("Resonance") {
                    resonances += 1;
                }
                if first_failure.is_none() {
                    first_failure = Some(format!("lambda = {lambda}, r = {r}: {msg}"));
                }
            }
        }
    }
    let path = write_out(out, "scatter.csv", &csv)?;
    println!(
        "summary: max |xi_s - round(xi_s)| = {:.3e}, max BK residual = {:.3e}, resonant points = {resonances}",
        max_xi_s_dev, max_bk
    );
    println!("wrote {}", path.display());
    match first_failure {
        None => Ok(()),
        Some(message) => Err(CliError { code: 4, message }),
    }
}

fn cmd_verify(seed: u64, inject_fault: Option<&str>) -> CliResult {
    let outcomes = verify::run_all(seed, inject_fault);
    let mut failures = Vec::new();
    for o in &outcomes {
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("[{status}] {:<40} {}", o.name, o.detail);
        if !o.passed {
            failures.push(o.name.clone());
        }
    }
    println!(
        "{} of {} properties passed",
        outcomes.iter().filter(|o| o.passed).count(),
        outcomes.len()
    );
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError {
            code: 1,
            message: format!("failing properties: {}", failures.join(", ")),
        })
    }
}

fn cmd_plot(input: &Path, kind: &str, output: Option<&Path>, out_dir: &Path) -> CliResult {
    let text = fs::read_to_string(input)
        .map_err(|e| CliError::input(format!("{}: {e}", input.display())))?;
    let svg_text = match kind {
        "track" => {
            let track = track_from_csv(&text).map_err(CliError::input)?;
            let series: Vec<(String, Vec<(f64, f64)>)> = (0..track.track_count())
                .map(|j| {
                    (
                        format!("theta_{j}"),
                        track
                            .grid()
                            .iter()
                            .enumerate()
                            .map(|(k, &r)| (r, track.theta(j, k)))
                            .collect(),
                    )
                })
                .collect();
            plot::polyline_plot(&series, "eigenvalue arguments", "r", "theta")
        }
        "mu" => {
            let pieces = mu_pieces_from_csv(&text).map_err(CliError::input)?;
            plot::step_plot(&pieces, "mu-invariant", "theta", "mu")
        }
        other => return Err(CliError::input(format!("unknown plot kind \"{other}\""))),
    };
    let target = match output {
        Some(p) => p.to_path_buf(),
        None => {
            let stem = input
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "plot".into());
            out_dir.join(format!("{stem}.svg"))
        }
    };
    if let Some(parent) = target.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| CliError::input(format!("{}: {e}", parent.display())))?;
        }
    }
    fs::write(&target, svg_text)
        .map_err(|e| CliError::input(format!("{}: {e}", target.display())))?;
    println!("wrote {}", target.display());
    Ok(())
}

/// Parses arguments and runs; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match &cli.command {
        Command::Metric { input } => cmd_metric(input, &cli.out),
        Command::Track(args) => cmd_track(args, &cli.out, &cli.tol, cli.svg),
        Command::Mu(args) => cmd_mu(args, &cli.out, &cli.tol, cli.svg),
        Command::Scatter { config } => cmd_scatter(config, &cli.out, &cli.tol),
        Command::Verify { inject_fault } => cmd_verify(cli.seed, inject_fault.as_deref()),
        Command::Plot {
            input,
            kind,
            output,
        } => cmd_plot(input, kind, output.as_deref(), &cli.out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
