//! Parameter sweeps and their CSV tables.
//!
//! Every sweep point yields one row per engine and per scheme/mode variant of
//! the scenario. Columns, in order:
//!
//! | column | meaning |
//! |---|---|
//! | `swept_value` | value of the swept key |
//! | `scheme` | `ofdma` or `scma` |
//! | `mode` | `underlaid` or `overlaid` |
//! | `engine` | `analytic` or `mc` |
//! | `cp_cell`, `cp_d2d` | coverage probabilities |
//! | `ase_cell`, `ase_d2d`, `ase_total` | ASE in nats/(s·Hz·m²) |
//! | `ase_gain` | SCMA over OFDMA system ASE at the same point and engine |
//! | `overload` | J/K for SCMA, 1 for OFDMA |
//! | `utility` | `ln ase_cell + ln ase_d2d`, `-inf` if either is zero |
//! | `ci_halfwidth` | widest 95% half-width of the MC coverage estimates |
//! | `error` | engine error for this row; other numeric cells are then empty |
//!
//! Densities (the ASE columns and a density-valued `swept_value`) are written
//! in scientific notation with 6 significant digits and stored at that
//! precision, so a written table parses back to an identical one.

use std::fmt;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::str::FromStr;

use log::info;
use scma_hybrid::analytics::{evaluate, CoverageReport};
use scma_hybrid::simulator::{estimate, SimOptions};
use scma_hybrid::topology::{AccessScheme, Coexistence, NetworkConfig};

use crate::config::{is_density, is_integer, set_numeric, KEYS};
use crate::error::{CliError, Result};
use crate::scenario::Scenario;

/// Smallest trial count accepted for Monte Carlo sweeps.
pub const MIN_MC_TRIALS: u64 = 1_000;

pub const COLUMNS: [&str; 14] = [
    "swept_value",
    "scheme",
    "mode",
    "engine",
    "cp_cell",
    "cp_d2d",
    "ase_cell",
    "ase_d2d",
    "ase_total",
    "ase_gain",
    "overload",
    "utility",
    "ci_halfwidth",
    "error",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    Analytic,
    MonteCarlo,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Analytic => "analytic",
            Engine::MonteCarlo => "mc",
        })
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "analytic" => Ok(Engine::Analytic),
            "mc" | "monte_carlo" => Ok(Engine::MonteCarlo),
            other => Err(format!("unknown engine {other:?} (expected analytic or mc)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub scenario: Scenario,
    pub swept_key: String,
    pub values: Vec<f64>,
    pub engines: Vec<Engine>,
    pub trials: u64,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let usage = |m: String| Err(CliError::Usage(m));
        if !KEYS.contains(&self.swept_key.as_str()) || matches!(self.swept_key.as_str(), "coexistence" | "access_scheme") {
            return usage(format!("cannot sweep {:?}", self.swept_key));
        }
        if self.values.is_empty() {
            return usage("sweep has no values".into());
        }
        if self.values.iter().any(|v| v.is_nan()) {
            return usage("sweep values must be numbers".into());
        }
        let values: Vec<f64> = if is_density(&self.swept_key) {
            self.values.iter().map(|&v| round_sig6(v)).collect()
        } else {
            self.values.clone()
        };
        let up = values.windows(2).all(|w| w[0] < w[1]);
        let down = values.windows(2).all(|w| w[0] > w[1]);
        if !(up || down) {
            return usage(format!("sweep values of {} must be strictly monotone", self.swept_key));
        }
        if self.engines.is_empty() {
            return usage("no engine selected".into());
        }
        if self.engines.contains(&Engine::MonteCarlo) && self.trials < MIN_MC_TRIALS {
            return usage(format!("Monte Carlo needs at least {MIN_MC_TRIALS} trials, got {}", self.trials));
        }
        Ok(())
    }
}

/// Rounds to the 6 significant digits written for densities.
pub fn round_sig6(x: f64) -> f64 {
    if x.is_finite() {
        format!("{x:.5e}").parse().expect("formatted float parses")
    } else {
        x
    }
}

/// Parses `KEY=start:stop:steps[:log]` into the key and its values.
///
/// `steps` counts points, endpoints included. Integer keys are rounded and
/// density keys stored at 6 significant digits.
pub fn parse_sweep(arg: &str) -> Result<(String, Vec<f64>)> {
    let usage = |m: String| CliError::Usage(format!("--sweep {arg:?}: {m}"));
    let (key, range) = arg.split_once('=').ok_or_else(|| usage("expected KEY=start:stop:steps".into()))?;
    let key = key.trim().to_string();
    let parts: Vec<&str> = range.split(':').map(str::trim).collect();
    let log_scale = match parts.len() {
        3 => false,
        4 if parts[3] == "log" => true,
        _ => return Err(usage("expected start:stop:steps or start:stop:steps:log".into())),
    };
    let num = |s: &str| s.parse::<f64>().map_err(|_| usage(format!("{s:?} is not a number")));
    let (start, stop) = (num(parts[0])?, num(parts[1])?);
    let steps: usize = parts[2].parse().map_err(|_| usage(format!("{:?} is not a point count", parts[2])))?;
    if steps == 0 || !start.is_finite() || !stop.is_finite() {
        return Err(usage("need finite endpoints and at least one point".into()));
    }
    if log_scale && !(start > 0.0 && stop > 0.0) {
        return Err(usage("log sweeps need positive endpoints".into()));
    }
    let values = (0..steps)
        .map(|i| {
            let t = if steps == 1 { 0.0 } else { i as f64 / (steps - 1) as f64 };
            let v = if log_scale {
                (start.ln() + t * (stop.ln() - start.ln())).exp()
            } else {
                start + t * (stop - start)
            };
            if is_integer(&key) {
                v.round()
            } else if is_density(&key) {
                round_sig6(v)
            } else {
                v
            }
        })
        .collect();
    Ok((key, values))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub swept_value: f64,
    pub scheme: AccessScheme,
    pub mode: Coexistence,
    pub engine: Engine,
    pub cp_cell: Option<f64>,
    pub cp_d2d: Option<f64>,
    pub ase_cell: Option<f64>,
    pub ase_d2d: Option<f64>,
    pub ase_total: Option<f64>,
    pub ase_gain: Option<f64>,
    pub overload: Option<f64>,
    pub utility: Option<f64>,
    pub ci_halfwidth: Option<f64>,
    pub error: Option<String>,
}

impl Row {
    fn empty(swept_value: f64, scheme: AccessScheme, mode: Coexistence, engine: Engine) -> Self {
        Row {
            swept_value,
            scheme,
            mode,
            engine,
            cp_cell: None,
            cp_d2d: None,
            ase_cell: None,
            ase_d2d: None,
            ase_total: None,
            ase_gain: None,
            overload: None,
            utility: None,
            ci_halfwidth: None,
            error: None,
        }
    }

    fn fill(&mut self, r: &CoverageReport) {
        let (c, d) = (round_sig6(r.ase_cellular), round_sig6(r.ase_d2d));
        self.cp_cell = Some(r.cp_cellular);
        self.cp_d2d = Some(r.cp_d2d);
        self.ase_cell = Some(c);
        self.ase_d2d = Some(d);
        self.ase_total = Some(round_sig6(r.ase_total));
        self.utility = Some(if c > 0.0 && d > 0.0 { c.ln() + d.ln() } else { f64::NEG_INFINITY });
        if self.engine == Engine::MonteCarlo {
            self.ci_halfwidth = Some(r.ci_halfwidth());
        }
    }
}

/// The rows of one sweep plus the key that was swept.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub swept_key: String,
    pub rows: Vec<Row>,
}

fn evaluate_with(cfg: &NetworkConfig, engine: Engine, trials: u64, seed: u64) -> scma_hybrid::Result<CoverageReport> {
    match engine {
        Engine::Analytic => evaluate(cfg),
        Engine::MonteCarlo => Ok(estimate(cfg, &SimOptions::default(), trials, seed)?.report),
    }
}

/// Runs the sweep over `base` (already preset for the scenario).
/// Points run one after another; MC trials within a point run in parallel.
pub fn run_sweep(spec: &SweepSpec, base: &NetworkConfig) -> Result<SweepResult> {
    spec.validate()?;
    let mut rows = Vec::new();
    let density = is_density(&spec.swept_key);
    for &raw in &spec.values {
        let value = if density { round_sig6(raw) } else { raw };
        let mut point = base.clone();
        set_numeric(&mut point, &spec.swept_key, value).map_err(CliError::Usage)?;
        spec.scenario.couple(&mut point);
        for &engine in &spec.engines {
            info!("{} = {value}, engine {engine}", spec.swept_key);
            let first = rows.len();
            for (scheme, mode) in spec.scenario.variants(&point) {
                let cfg = NetworkConfig { access_scheme: scheme, coexistence: mode, ..point.clone() };
                let mut row = Row::empty(value, scheme, mode, engine);
                row.overload = Some(match scheme {
                    AccessScheme::Ofdma => 1.0,
                    AccessScheme::Scma => cfg.j_codebooks as f64 / cfg.k_tones as f64,
                });
                match evaluate_with(&cfg, engine, spec.trials, spec.seed) {
                    Ok(r) => row.fill(&r),
                    Err(e) => row.error = Some(e.to_string()),
                }
                rows.push(row);
            }
            attach_gain(&mut rows[first..]);
        }
    }
    Ok(SweepResult { swept_key: spec.swept_key.clone(), rows })
}

fn attach_gain(group: &mut [Row]) {
    let total = |scheme| {
        group
            .iter()
            .find(|r| r.scheme == scheme && r.mode == Coexistence::Underlaid)
            .and_then(|r| r.ase_total)
    };
    if let (Some(o), Some(s)) = (total(AccessScheme::Ofdma), total(AccessScheme::Scma)) {
        if o > 0.0 {
            for r in group.iter_mut().filter(|r| r.scheme == AccessScheme::Scma) {
                r.ase_gain = Some(s / o);
            }
        }
    }
}

fn fmt_opt(v: Option<f64>, density: bool) -> String {
    match v {
        None => String::new(),
        Some(x) if density && x.is_finite() => format!("{x:.5e}"),
        Some(x) => x.to_string(),
    }
}

fn parse_opt(field: &str, column: &str, line: u64) -> Result<Option<f64>> {
    if field.is_empty() {
        return Ok(None);
    }
    field.parse().map(Some).map_err(|_| CliError::Parse {
        path: "csv".into(),
        line: line as usize,
        msg: format!("bad {column} value {field:?}"),
    })
}

impl SweepResult {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(COLUMNS)?;
        let dens = is_density(&self.swept_key);
        for r in &self.rows {
            w.write_record([
                fmt_opt(Some(r.swept_value), dens),
                r.scheme.to_string(),
                r.mode.to_string(),
                r.engine.to_string(),
                fmt_opt(r.cp_cell, false),
                fmt_opt(r.cp_d2d, false),
                fmt_opt(r.ase_cell, true),
                fmt_opt(r.ase_d2d, true),
                fmt_opt(r.ase_total, true),
                fmt_opt(r.ase_gain, false),
                fmt_opt(r.overload, false),
                fmt_opt(r.utility, false),
                fmt_opt(r.ci_halfwidth, false),
                r.error.clone().unwrap_or_default(),
            ])?;
        }
        w.flush().map_err(|e| CliError::io("writing csv", e))?;
        Ok(())
    }

    /// Parses a table written by [`SweepResult::write_csv`].
    pub fn read_csv<R: Read>(swept_key: &str, input: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(input);
        let header = rd.headers()?.clone();
        if header.iter().ne(COLUMNS.iter().copied()) {
            return Err(CliError::Usage(format!("unexpected csv header {:?}", header.iter().collect::<Vec<_>>())));
        }
        let mut rows = Vec::new();
        for rec in rd.records() {
            let rec = rec?;
            let line = rec.position().map_or(0, |p| p.line());
            let bad = |column: &str, v: &str| CliError::Parse {
                path: "csv".into(),
                line: line as usize,
                msg: format!("bad {column} value {v:?}"),
            };
            let f = |i: usize| parse_opt(&rec[i], COLUMNS[i], line);
            let scheme = match &rec[1] {
                "ofdma" => AccessScheme::Ofdma,
                "scma" => AccessScheme::Scma,
                v => return Err(bad("scheme", v)),
            };
            let mode = match &rec[2] {
                "underlaid" => Coexistence::Underlaid,
                "overlaid" => Coexistence::Overlaid,
                v => return Err(bad("mode", v)),
            };
            rows.push(Row {
                swept_value: f(0)?.ok_or_else(|| bad("swept_value", ""))?,
                scheme,
                mode,
                engine: rec[3].parse().map_err(|_| bad("engine", &rec[3]))?,
                cp_cell: f(4)?,
                cp_d2d: f(5)?,
                ase_cell: f(6)?,
                ase_d2d: f(7)?,
                ase_total: f(8)?,
                ase_gain: f(9)?,
                overload: f(10)?,
                utility: f(11)?,
                ci_halfwidth: f(12)?,
                error: Some(rec[13].to_string()).filter(|s| !s.is_empty()),
            });
        }
        Ok(SweepResult { swept_key: swept_key.to_string(), rows })
    }
}
