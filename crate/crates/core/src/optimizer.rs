//! Proportional-fairness utilities over the two tiers' ASE and the
//! closed-form optima for the D2D activation probability (underlaid) and the
//! cellular codebook share (overlaid), each with a brute-force validator.

use std::f64::consts::PI;

use log::warn;
use rayon::prelude::*;

use crate::analytics::{cp_overlaid, cp_with_activation, dense_overlaid_cellular_ase, hyf2, rho_scma_activation};
use crate::error::{Error, Result};
use crate::specialfn::scma_interference_product;
use crate::topology::{derive_intensities, AccessScheme, Coexistence, DerivedIntensities, NetworkConfig};

/// Largest `ρ_S† τ_dis²` still treated as the sparse regime.
pub const SPARSE_REGIME_THRESHOLD: f64 = 0.05;
/// `λ_UT ≥ DENSE_CELLULAR_FACTOR · J · λ_BS` counts as densely deployed.
pub const DENSE_CELLULAR_FACTOR: f64 = 10.0;
/// Step of the activation-probability grid search.
pub const QD_GRID_STEP: f64 = 1e-3;

/// One evaluation of `u = ln A_C + ln A_D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UtilityPoint {
    /// `q_D` or `J_C`, depending on the problem.
    pub decision: f64,
    /// Utility in nats; `-inf` when either tier's ASE vanishes.
    pub u: f64,
    pub ase_c: f64,
    pub ase_d: f64,
}

impl UtilityPoint {
    fn new(decision: f64, ase_c: f64, ase_d: f64) -> Self {
        let u = if ase_c > 0.0 && ase_d > 0.0 { ase_c.ln() + ase_d.ln() } else { f64::NEG_INFINITY };
        Self { decision, u, ase_c, ase_d }
    }
}

/// Closed-form optimum plus any regime warnings raised on the way.
#[derive(Debug, Clone, PartialEq)]
pub struct Optimum<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

fn note(warnings: &mut Vec<String>, msg: String) {
    warn!("{msg}");
    warnings.push(msg);
}

fn require_underlaid_scma(cfg: &NetworkConfig) -> Result<()> {
    if cfg.access_scheme != AccessScheme::Scma || cfg.coexistence != Coexistence::Underlaid {
        return Err(Error::Unsupported("activation-probability optimization needs underlaid SCMA".into()));
    }
    Ok(())
}

/// Utility of the underlaid SCMA network when D2D pairs activate with `q_d`.
pub fn utility_underlaid(cfg: &NetworkConfig, d: &DerivedIntensities, q_d: f64) -> Result<UtilityPoint> {
    let (cp_bs, cp_dr) = cp_with_activation(cfg, d, q_d)?;
    let ase_c = d.q_u * d.lambda_ut * cp_bs * cfg.tau_bs.ln_1p();
    let ase_d = q_d * d.lambda_dt * cp_dr * cfg.tau_dr.ln_1p();
    Ok(UtilityPoint::new(q_d, ase_c, ase_d))
}

/// Sparse regime (`ρ_S† τ_dis² → 0`): every D2D pair should be active.
/// Outside the regime a warning is attached, and the answer is still 1.
pub fn optimal_qd_sparse(cfg: &NetworkConfig, d: &DerivedIntensities) -> Result<Optimum<f64>> {
    require_underlaid_scma(cfg)?;
    let mut warnings = Vec::new();
    let load = sparse_regime_load(cfg, d)?;
    if !(load <= SPARSE_REGIME_THRESHOLD) {
        note(&mut warnings, format!(
            "sparse-regime assumption violated: rho_S * tau_dis^2 = {load:.4} > {SPARSE_REGIME_THRESHOLD}"
        ));
    }
    Ok(Optimum { value: 1.0, warnings })
}

/// `ρ_S† τ_dis²` at full activation, the quantity the sparse regime drives to 0.
pub fn sparse_regime_load(cfg: &NetworkConfig, d: &DerivedIntensities) -> Result<f64> {
    Ok(rho_scma_activation(cfg, d, 1.0)? * cfg.tau_dis * cfg.tau_dis)
}

/// The four constants of the `τ_dis → ∞` activation problem, where
/// `A_C ∝ 1 / (Q1 + Q2 q)` and `A_D ∝ 1 / (Q3 + Q4 / q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActivationTerms {
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub q4: f64,
}

pub fn activation_terms(cfg: &NetworkConfig, d: &DerivedIntensities) -> Result<ActivationTerms> {
    let n_c = cfg.n_c as f64;
    let j = cfg.j_codebooks as f64;
    let a_sin = cfg.alpha * (2.0 * PI / cfg.alpha).sin();
    let product = scma_interference_product(cfg.n_c, cfg.alpha)?;
    let tau_bs_t = cfg.tau_bs / n_c;
    let tau_dr_t = cfg.tau_dr / n_c;
    let scale = 2.0 * PI / (j * a_sin) * product;
    Ok(ActivationTerms {
        q1: cfg.lambda_bs + d.q_u * d.lambda_ut / j * hyf2(cfg.n_c, d.delta, tau_bs_t)?,
        q2: scale * d.lambda_dt * (tau_bs_t * d.eta_p).powf(d.delta),
        q3: scale * tau_dr_t.powf(d.delta) * d.lambda_dt,
        q4: cfg.xi + scale * tau_dr_t.powf(d.delta) * d.q_u * d.lambda_ut * d.eta_p.powf(-d.delta),
    })
}

/// Optimal activation probability with every D2D pair in D2D mode
/// (`τ_dis = ∞`): `√(Q1 Q4 / (Q2 Q3))` when that is below 1, else 1.
pub fn optimal_qd_full_d2d(cfg: &NetworkConfig, d: &DerivedIntensities) -> Result<Optimum<f64>> {
    require_underlaid_scma(cfg)?;
    if cfg.tau_dis != f64::INFINITY {
        return Err(Error::Config(format!("full-D2D optimum needs tau_dis = inf, got {}", cfg.tau_dis)));
    }
    let t = activation_terms(cfg, d)?;
    let lhs = t.q1 * t.q4;
    let rhs = t.q2 * t.q3;
    let value = if lhs < rhs { (lhs / rhs).sqrt().clamp(f64::MIN_POSITIVE, 1.0) } else { 1.0 };
    Ok(Optimum { value, warnings: Vec::new() })
}

/// Brute-force maximiser of [`utility_underlaid`] over `q_d ∈ {step, 2·step, …, 1}`.
/// Ties go to the smallest `q_d`.
pub fn grid_search_qd(cfg: &NetworkConfig, d: &DerivedIntensities, step: f64) -> Result<UtilityPoint> {
    let n = (1.0 / step).round() as usize;
    let points = (1..=n)
        .into_par_iter()
        .map(|i| utility_underlaid(cfg, d, (i as f64 * step).min(1.0)))
        .collect::<Result<Vec<_>>>()?;
    Ok(argmax(points))
}

fn argmax(points: Vec<UtilityPoint>) -> UtilityPoint {
    points
        .into_iter()
        .reduce(|best, p| if p.u > best.u { p } else { best })
        .expect("non-empty search grid")
}

/// Which cellular ASE model the overlaid utility uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverlaidModel {
    /// Closed-form cellular ASE with the access probability recomputed for `J_C`.
    General,
    /// Every cellular codebook busy in every cell: `A_C` linear in `J_C`.
    Dense,
}

/// Utility of the overlaid SCMA network with `j_c` cellular codebooks.
/// `j_c = 0` or `j_c = J` starves one tier and yields the `-inf` sentinel.
pub fn utility_overlaid(cfg: &NetworkConfig, d: &DerivedIntensities, j_c: u32, model: OverlaidModel) -> Result<UtilityPoint> {
    if cfg.access_scheme != AccessScheme::Scma || cfg.coexistence != Coexistence::Overlaid {
        return Err(Error::Unsupported("codebook allocation needs overlaid SCMA".into()));
    }
    if j_c > cfg.j_codebooks {
        return Err(Error::Domain(format!("j_c = {j_c} exceeds J = {}", cfg.j_codebooks)));
    }
    if j_c == 0 || j_c == cfg.j_codebooks {
        return Ok(UtilityPoint { decision: j_c as f64, u: f64::NEG_INFINITY, ase_c: 0.0, ase_d: 0.0 });
    }
    let split = NetworkConfig { j_cell: j_c, ..cfg.clone() };
    let split_d = DerivedIntensities { q_u: derive_intensities(&split)?.q_u, ..*d };
    let (cp_bs, cp_dr) = cp_overlaid(&split, &split_d)?;
    let ase_c = match model {
        OverlaidModel::General => split_d.q_u * split_d.lambda_ut * cp_bs * cfg.tau_bs.ln_1p(),
        OverlaidModel::Dense => dense_overlaid_cellular_ase(cfg, j_c)?,
    };
    let ase_d = cfg.q_d * d.lambda_dt * cp_dr * cfg.tau_dr.ln_1p();
    Ok(UtilityPoint::new(j_c as f64, ase_c, ase_d))
}

/// Closed-form codebook split for densely deployed cellular users.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodebookSplit {
    pub j_cell: u32,
    /// `J + Q6 - √(Q6² + J Q6)` before rounding and clamping.
    pub continuous: f64,
    pub q6: f64,
}

/// `Q6 = 2π τ̃_DR^δ q_D λ_DT / (ξ α sin(2π/α)) ∏(…)`; contains no cellular parameter.
pub fn codebook_split_q6(cfg: &NetworkConfig, d: &DerivedIntensities) -> Result<f64> {
    let tau_dr_t = cfg.tau_dr / cfg.n_c as f64;
    let a_sin = cfg.alpha * (2.0 * PI / cfg.alpha).sin();
    Ok(2.0 * PI * tau_dr_t.powf(d.delta) * cfg.q_d * d.lambda_dt / (cfg.xi * a_sin)
        * scma_interference_product(cfg.n_c, cfg.alpha)?)
}

/// `J_C* = round(J + Q6 - √(Q6² + J Q6))`, clamped to `[1, J-1]`.
pub fn optimal_jc_dense(cfg: &NetworkConfig, d: &DerivedIntensities) -> Result<Optimum<CodebookSplit>> {
    if cfg.access_scheme != AccessScheme::Scma || cfg.coexistence != Coexistence::Overlaid {
        return Err(Error::Unsupported("codebook allocation needs overlaid SCMA".into()));
    }
    if cfg.tau_dis != f64::INFINITY {
        return Err(Error::Config(format!("dense codebook split needs tau_dis = inf, got {}", cfg.tau_dis)));
    }
    if cfg.j_codebooks < 2 {
        return Err(Error::Config("codebook split needs J >= 2".into()));
    }
    let mut warnings = Vec::new();
    let j = cfg.j_codebooks as f64;
    if d.lambda_ut < DENSE_CELLULAR_FACTOR * j * cfg.lambda_bs {
        note(&mut warnings, format!(
            "dense-cellular assumption violated: lambda_UT = {:.3e} < {DENSE_CELLULAR_FACTOR} * J * lambda_BS = {:.3e}",
            d.lambda_ut,
            DENSE_CELLULAR_FACTOR * j * cfg.lambda_bs
        ));
    }
    let q6 = codebook_split_q6(cfg, d)?;
    // J + Q6 - √(Q6² + J Q6) without the cancellation for large Q6.
    let continuous = if q6 == 0.0 { j } else { j - j * q6 / (q6 + (q6 * q6 + j * q6).sqrt()) };
    let rounded = continuous.round();
    let clamped = rounded.clamp(1.0, j - 1.0);
    if clamped != rounded {
        note(&mut warnings, format!("codebook split {rounded} clamped to {clamped}"));
    }
    Ok(Optimum { value: CodebookSplit { j_cell: clamped as u32, continuous, q6 }, warnings })
}

/// Exhaustive maximiser of [`utility_overlaid`] over `J_C ∈ {1, …, J-1}`.
pub fn exhaustive_jc(cfg: &NetworkConfig, d: &DerivedIntensities, model: OverlaidModel) -> Result<UtilityPoint> {
    if cfg.j_codebooks < 2 {
        return Err(Error::Config("codebook split needs J >= 2".into()));
    }
    let points = (1..cfg.j_codebooks)
        .into_par_iter()
        .map(|j_c| utility_overlaid(cfg, d, j_c, model))
        .collect::<Result<Vec<_>>>()?;
    Ok(argmax(points))
}
