//! Closed-form coverage probabilities and area spectral efficiency (ASE) for
//! the typical cellular uplink and the typical D2D link.
//!
//! Cellular coverage follows from the Laplace transforms of the co-resource
//! interference, modelled as Poisson outside the typical uplink's distance
//! to its serving BS. D2D coverage integrates the link-length density over
//! `[0, τ_dis]`, so it already contains the mode-selection probability.
//!
//! The SCMA expressions replace the Gamma(N_C, 1) desired-signal fade by an
//! exponential with the same mean; they are approximations.
//!
//! All ASE values use the natural logarithm. The D2D interferer density is
//! thinned by `cfg.q_d` everywhere, which reduces to the all-active forms at
//! `q_d = 1`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::specialfn::{hyp2f1, scma_interference_product, Hyp2F1Args};
use crate::topology::{derive_intensities, AccessScheme, Coexistence, DerivedIntensities, NetworkConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Analytic,
    MonteCarlo,
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Provenance::Analytic => "analytic",
            Provenance::MonteCarlo => "mc",
        })
    }
}

/// Per-tier coverage and ASE in nats/(s·Hz·m²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageReport {
    pub cp_cellular: f64,
    pub cp_d2d: f64,
    pub ase_cellular: f64,
    pub ase_d2d: f64,
    pub ase_total: f64,
    pub provenance: Provenance,
    /// 95% half-width of the cellular coverage estimate (0 for analytic).
    pub ci_cellular: f64,
    /// 95% half-width of the D2D coverage estimate (0 for analytic).
    pub ci_d2d: f64,
}

impl CoverageReport {
    /// Widest of the two per-tier confidence half-widths.
    pub fn ci_halfwidth(&self) -> f64 {
        self.ci_cellular.max(self.ci_d2d)
    }
}

/// `α sin(2π/α)`, the denominator shared by every D2D-style interference term.
fn alpha_sin(alpha: f64) -> f64 {
    alpha * (2.0 * PI / alpha).sin()
}

/// `₂F₁(1, 1-δ; 2-δ; -τ)` for the OFDMA cellular interference.
pub fn hyf1(tau: f64, delta: f64) -> Result<f64> {
    hyp2f1(Hyp2F1Args::new(1.0, 1.0 - delta, 2.0 - delta, -tau))
}

/// `₂F₁(N_C, -δ; 1-δ; -τ̃) - 1` for the SCMA cellular interference.
pub fn hyf2(n_c: u32, delta: f64, tau_tilde: f64) -> Result<f64> {
    Ok(hyp2f1(Hyp2F1Args::new(n_c as f64, -delta, 1.0 - delta, -tau_tilde))? - 1.0)
}

/// `πξ/ρ (1 - e^{-ρ τ_dis²})`, the D2D coverage after integrating over the
/// untruncated link-length density up to the mode-selection radius.
fn d2d_coverage(xi: f64, rho: f64, tau_dis: f64) -> f64 {
    let scale = PI * xi / rho;
    if tau_dis == f64::INFINITY {
        scale
    } else {
        -scale * (-rho * tau_dis * tau_dis).exp_m1()
    }
}

fn require(cfg: &NetworkConfig, scheme: AccessScheme, mode: Coexistence) -> Result<()> {
    if cfg.access_scheme != scheme || cfg.coexistence != mode {
        return Err(Error::Unsupported(format!(
            "expected {scheme} {mode}, config is {} {}",
            cfg.access_scheme, cfg.coexistence
        )));
    }
    Ok(())
}

/// Cellular coverage with OFDMA in underlaid mode.
pub fn cp_bs_ofdma_underlaid(cfg: &NetworkConfig, d: &DerivedIntensities) -> Result<f64> {
    require(cfg, AccessScheme::Ofdma, Coexistence::Underlaid)?;
    let k = cfg.k_tones as f64;
    let cellular = 2.0 * d.q_u * d.lambda_ut * cfg.tau_bs / (k * (cfg.alpha - 2.0)) * hyf1(cfg.tau_bs, d.delta)?;
    let d2d = 2.0 * PI * cfg.q_d * d.lambda_dt * (cfg.tau_bs * d.eta_p).powf(d.delta) / (k * alpha_sin(cfg.alpha));
    Ok(cfg.lambda_bs / (cfg.lambda_bs + cellular + d2d))
}

/// `ρ_O` of the OFDMA underlaid D2D coverage.
pub fn rho_ofdma_underlaid(cfg: &NetworkConfig, d: &DerivedIntensities) -> f64 {
    let k = cfg.k_tones as f64;
    PI * cfg.xi
        + 2.0 * PI * PI * cfg.tau_dr.powf(d.delta) * (cfg.q_d * d.lambda_dt + d.q_u * d.lambda_ut * d.eta_p.powf(-d.delta))
            / (k * alpha_sin(cfg.alpha))
}

/// D2D coverage with OFDMA in underlaid mode.
pub fn cp_dr_ofdma_underlaid(cfg: &NetworkConfig, d: &DerivedIntensities) -> Result<f64> {
    require(cfg, AccessScheme::Ofdma, Coexistence::Underlaid)?;
    Ok(d2d_coverage(cfg.xi, rho_ofdma_underlaid(cfg, d), cfg.tau_dis))
}

/// SCMA constants shared by the cellular and D2D expressions.
struct ScmaTerms {
    product: f64,
    hyf2: f64,
    tau_bs_tilde: f64,
    tau_dr_tilde: f64,
}

impl ScmaTerms {
    fn new(cfg: &NetworkConfig, delta: f64) -> Result<Self> {
        let n_c = cfg.n_c as f64;
        let tau_bs_tilde = cfg.tau_bs / n_c;
        Ok(Self {
            product: scma_interference_product(cfg.n_c, cfg.alpha)?,
            hyf2: hyf2(cfg.n_c, delta, tau_bs_tilde)?,
            tau_bs_tilde,
            tau_dr_tilde: cfg.tau_dr / n_c,
        })
    }
}

/// Underlaid SCMA coverage `(CP_BS, CP_DR)` with D2D activation probability
/// `q_d`; at `q_d = 1` this is the all-active result.
pub fn cp_with_activation(cfg: &NetworkConfig, d: &DerivedIntensities, q_d: f64) -> Result<(f64, f64)> {
    require(cfg, AccessScheme::Scma, Coexistence::Underlaid)?;
    if !(0.0..=1.0).contains(&q_d) {
        return Err(Error::Domain(format!("activation probability must lie in [0, 1], got {q_d}")));
    }
    let t = ScmaTerms::new(cfg, d.delta)?;
    let j = cfg.j_codebooks as f64;
    let a_sin = alpha_sin(cfg.alpha);

    let cellular = d.q_u * d.lambda_ut / j * t.hyf2;
    let d2d = 2.0 * PI * q_d * d.lambda_dt * (t.tau_bs_tilde * d.eta_p).powf(d.delta) / (j * a_sin) * t.product;
    let cp_bs = cfg.lambda_bs / (cfg.lambda_bs + cellular + d2d);

    let rho = rho_scma_underlaid(cfg, d, q_d, &t);
    Ok((cp_bs, d2d_coverage(cfg.xi, rho, cfg.tau_dis)))
}

fn rho_scma_underlaid(cfg: &NetworkConfig, d: &DerivedIntensities, q_d: f64, t: &ScmaTerms) -> f64 {
    let j = cfg.j_codebooks as f64;
    PI * cfg.xi
        + 2.0 * PI * PI * t.tau_dr_tilde.powf(d.delta) * (q_d * d.lambda_dt + d.q_u * d.lambda_ut * d.eta_p.powf(-d.delta))
            / (j * alpha_sin(cfg.alpha))
            * t.product
}

/// `ρ_S†` for a given activation probability (underlaid SCMA).
pub fn rho_scma_activation(cfg: &NetworkConfig, d: &DerivedIntensities, q_d: f64) -> Result<f64> {
    let t = ScmaTerms::new(cfg, d.delta)?;
    Ok(rho_scma_underlaid(cfg, d, q_d, &t))
}

/// Cellular coverage with SCMA in underlaid mode.
pub fn cp_bs_scma_underlaid(cfg: &NetworkConfig, d: &DerivedIntensities) -> Result<f64> {
    Ok(cp_with_activation(cfg, d, cfg.q_d)?.0)
}

/// D2D coverage with SCMA in underlaid mode.
pub fn cp_dr_scma_underlaid(cfg: &NetworkConfig, d: &DerivedIntensities) -> Result<f64> {
    Ok(cp_with_activation(cfg, d, cfg.q_d)?.1)
}

/// Overlaid SCMA coverage `(CP_BS, CP_DR)`: cellular users see only
/// cellular interference on `J_C` codebooks, D2D only D2D on `J - J_C`.
pub fn cp_overlaid(cfg: &NetworkConfig, d: &DerivedIntensities) -> Result<(f64, f64)> {
    require(cfg, AccessScheme::Scma, Coexistence::Overlaid)?;
    if !(1 <= cfg.j_cell && cfg.j_cell < cfg.j_codebooks) {
        return Err(Error::Config(format!("j_cell must lie in [1, {}], got {}", cfg.j_codebooks - 1, cfg.j_cell)));
    }
    let t = ScmaTerms::new(cfg, d.delta)?;
    let j_c = cfg.j_cell as f64;
    let j_d = (cfg.j_codebooks - cfg.j_cell) as f64;
    let cp_bs = cfg.lambda_bs / (cfg.lambda_bs + d.q_u * d.lambda_ut / j_c * t.hyf2);
    let rho = PI * cfg.xi
        + 2.0 * PI * PI * t.tau_dr_tilde.powf(d.delta) * cfg.q_d * d.lambda_dt / (j_d * alpha_sin(cfg.alpha)) * t.product;
    Ok((cp_bs, d2d_coverage(cfg.xi, rho, cfg.tau_dis)))
}

/// Cellular ASE of the overlaid network when every cellular codebook is
/// occupied in every cell (`λ_UT ≫ J_C λ_BS`): `J_C λ_BS ln(1+τ_BS) / (HyF₂ + 1)`.
pub fn dense_overlaid_cellular_ase(cfg: &NetworkConfig, j_cell: u32) -> Result<f64> {
    let hy = hyf2(cfg.n_c, cfg.delta(), cfg.tau_bs / cfg.n_c as f64)?;
    Ok(j_cell as f64 * cfg.lambda_bs * cfg.tau_bs.ln_1p() / (hy + 1.0))
}

/// Assemble ASEs from a coverage pair:
/// `A_C = q_U λ_UT CP_BS ln(1+τ_BS)` and `A_D = q_D λ_DT CP_DR ln(1+τ_DR)`.
pub fn ase_report(cfg: &NetworkConfig, d: &DerivedIntensities, cps: (f64, f64)) -> CoverageReport {
    let (cp_cellular, cp_d2d) = cps;
    let ase_cellular = d.q_u * d.lambda_ut * cp_cellular * cfg.tau_bs.ln_1p();
    let ase_d2d = cfg.q_d * d.lambda_dt * cp_d2d * cfg.tau_dr.ln_1p();
    CoverageReport {
        cp_cellular,
        cp_d2d,
        ase_cellular,
        ase_d2d,
        ase_total: ase_cellular + ase_d2d,
        provenance: Provenance::Analytic,
        ci_cellular: 0.0,
        ci_d2d: 0.0,
    }
}

/// Coverage pair for whatever scheme and coexistence mode `cfg` selects.
pub fn coverage(cfg: &NetworkConfig, d: &DerivedIntensities) -> Result<(f64, f64)> {
    match (cfg.access_scheme, cfg.coexistence) {
        (AccessScheme::Ofdma, Coexistence::Underlaid) => {
            Ok((cp_bs_ofdma_underlaid(cfg, d)?, cp_dr_ofdma_underlaid(cfg, d)?))
        }
        (AccessScheme::Scma, Coexistence::Underlaid) => cp_with_activation(cfg, d, cfg.q_d),
        (AccessScheme::Scma, Coexistence::Overlaid) => cp_overlaid(cfg, d),
        (AccessScheme::Ofdma, Coexistence::Overlaid) => {
            Err(Error::Unsupported("OFDMA is only modelled in underlaid mode".into()))
        }
    }
}

/// Validate `cfg`, derive its intensities and evaluate the closed forms.
pub fn evaluate(cfg: &NetworkConfig) -> Result<CoverageReport> {
    cfg.validate()?;
    let d = derive_intensities(cfg)?;
    Ok(ase_report(cfg, &d, coverage(cfg, &d)?))
}

/// System ASE of SCMA over OFDMA computed at identical geometry.
pub fn ase_gain(ofdma: &CoverageReport, scma: &CoverageReport) -> Result<f64> {
    if ofdma.ase_total == 0.0 {
        return Err(Error::DivisionByZero("OFDMA system ASE is zero"));
    }
    Ok(scma.ase_total / ofdma.ase_total)
}

/// Both underlaid schemes evaluated on the geometry of `cfg`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeComparison {
    pub ofdma: CoverageReport,
    pub scma: CoverageReport,
    /// System ASE ratio SCMA / OFDMA.
    pub eta_ase: f64,
    /// Ratio of successfully admitted intensities; equals `eta_ase` when the
    /// two SIR thresholds coincide, `None` otherwise.
    pub eta_hat: Option<f64>,
}

pub fn compare_schemes(cfg: &NetworkConfig) -> Result<SchemeComparison> {
    let underlaid = NetworkConfig { coexistence: Coexistence::Underlaid, ..cfg.clone() };
    let ofdma_cfg = underlaid.with_scheme(AccessScheme::Ofdma);
    let scma_cfg = underlaid.with_scheme(AccessScheme::Scma);
    let d_o = derive_intensities(&ofdma_cfg)?;
    let d_s = derive_intensities(&scma_cfg)?;
    let cps_o = coverage(&ofdma_cfg, &d_o)?;
    let cps_s = coverage(&scma_cfg, &d_s)?;
    let ofdma = ase_report(&ofdma_cfg, &d_o, cps_o);
    let scma = ase_report(&scma_cfg, &d_s, cps_s);
    let eta_ase = ase_gain(&ofdma, &scma)?;
    let eta_hat = (cfg.tau_bs == cfg.tau_dr).then(|| {
        let admitted = |d: &DerivedIntensities, cps: (f64, f64)| {
            d.q_u * d.lambda_ut * cps.0 + cfg.q_d * d.lambda_dt * cps.1
        };
        admitted(&d_s, cps_s) / admitted(&d_o, cps_o)
    });
    Ok(SchemeComparison { ofdma, scma, eta_ase, eta_hat })
}
