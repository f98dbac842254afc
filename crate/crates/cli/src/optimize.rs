//! Closed-form optima checked against brute-force search.

use std::fmt;
use std::str::FromStr;

use scma_hybrid::optimizer::{
    exhaustive_jc, grid_search_qd, optimal_jc_dense, optimal_qd_full_d2d, optimal_qd_sparse, utility_overlaid,
    utility_underlaid, OverlaidModel, QD_GRID_STEP,
};
use scma_hybrid::topology::{derive_intensities, NetworkConfig};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimizeMode {
    /// D2D activation probability, underlaid SCMA.
    Qd,
    /// Cellular codebook count, overlaid SCMA.
    Jc,
}

impl FromStr for OptimizeMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "qd" => Ok(OptimizeMode::Qd),
            "jc" => Ok(OptimizeMode::Jc),
            other => Err(format!("unknown mode {other:?} (expected qd or jc)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeReport {
    pub mode: OptimizeMode,
    /// Which closed form produced `closed_form`.
    pub method: &'static str,
    pub closed_form: f64,
    pub validator: f64,
    pub utility_closed_form: f64,
    pub utility_validator: f64,
    /// Within one grid step for `qd`, identical for `jc`.
    pub agree: bool,
    pub warnings: Vec<String>,
}

impl fmt::Display for OptimizeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, validator) = match self.mode {
            OptimizeMode::Qd => ("q_d", "grid search"),
            OptimizeMode::Jc => ("j_cell", "exhaustive search"),
        };
        writeln!(f, "closed form ({}): {name} = {}", self.method, self.closed_form)?;
        writeln!(f, "{validator}: {name} = {}", self.validator)?;
        writeln!(f, "utility at closed form: {}", self.utility_closed_form)?;
        writeln!(f, "utility at {validator}: {}", self.utility_validator)?;
        writeln!(f, "agree: {}", self.agree)?;
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

pub fn run_optimize(cfg: &NetworkConfig, mode: OptimizeMode) -> Result<OptimizeReport> {
    cfg.validate()?;
    let d = derive_intensities(cfg)?;
    let report = match mode {
        OptimizeMode::Qd => {
            let (method, opt) = if cfg.tau_dis == f64::INFINITY {
                ("all pairs in D2D mode", optimal_qd_full_d2d(cfg, &d)?)
            } else {
                ("sparse regime", optimal_qd_sparse(cfg, &d)?)
            };
            let grid = grid_search_qd(cfg, &d, QD_GRID_STEP)?;
            OptimizeReport {
                mode,
                method,
                closed_form: opt.value,
                validator: grid.decision,
                utility_closed_form: utility_underlaid(cfg, &d, opt.value)?.u,
                utility_validator: grid.u,
                agree: (opt.value - grid.decision).abs() <= QD_GRID_STEP * (1.0 + 1e-9),
                warnings: opt.warnings,
            }
        }
        OptimizeMode::Jc => {
            let opt = optimal_jc_dense(cfg, &d)?;
            let best = exhaustive_jc(cfg, &d, OverlaidModel::Dense)?;
            let j_c = opt.value.j_cell;
            OptimizeReport {
                mode,
                method: "dense cellular",
                closed_form: j_c as f64,
                validator: best.decision,
                utility_closed_form: utility_overlaid(cfg, &d, j_c, OverlaidModel::Dense)?.u,
                utility_validator: best.u,
                agree: j_c as f64 == best.decision,
                warnings: opt.warnings,
            }
        }
    };
    Ok(report)
}
