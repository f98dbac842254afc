//! Network parameters, mode selection and the intensities derived from them.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::specialfn::CellLoadPmf;

/// How the D2D tier shares the resource pool with the cellular tier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coexistence {
    /// D2D reuses every cellular resource.
    Underlaid,
    /// `j_cell` codebooks are reserved for cellular users, the rest for D2D.
    Overlaid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AccessScheme {
    Ofdma,
    Scma,
}

impl fmt::Display for Coexistence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coexistence::Underlaid => "underlaid",
            Coexistence::Overlaid => "overlaid",
        })
    }
}

impl fmt::Display for AccessScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AccessScheme::Ofdma => "ofdma",
            AccessScheme::Scma => "scma",
        })
    }
}

/// All scalar model parameters. Densities are per m², powers in mW, SIR
/// thresholds linear.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    pub lambda_bs: f64,
    pub lambda_u: f64,
    pub lambda_d: f64,
    pub p_u: f64,
    pub p_d: f64,
    pub alpha: f64,
    /// Rayleigh parameter of the D2D link length (1/m²).
    pub xi: f64,
    /// Mode-selection radius in m; `f64::INFINITY` keeps every pair in D2D mode.
    pub tau_dis: f64,
    pub tau_bs: f64,
    pub tau_dr: f64,
    pub k_tones: u32,
    pub n_c: u32,
    pub j_codebooks: u32,
    /// Codebooks reserved for cellular users in overlaid mode.
    pub j_cell: u32,
    pub q_d: f64,
    pub coexistence: Coexistence,
    pub access_scheme: AccessScheme,
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

impl Default for NetworkConfig {
    /// K = 20, N_C = 2, J = 30, α = 4, 10 dB thresholds, 20 dBm powers, with
    /// the ξ = λ_BS = 5e-5 geometry of the underlaid comparisons.
    fn default() -> Self {
        Self {
            lambda_bs: 5e-5,
            lambda_u: 1e-3,
            lambda_d: 2.5e-4,
            p_u: db_to_linear(20.0),
            p_d: db_to_linear(20.0),
            alpha: 4.0,
            xi: 5e-5,
            tau_dis: f64::INFINITY,
            tau_bs: db_to_linear(10.0),
            tau_dr: db_to_linear(10.0),
            k_tones: 20,
            n_c: 2,
            j_codebooks: 30,
            j_cell: 10,
            q_d: 1.0,
            coexistence: Coexistence::Underlaid,
            access_scheme: AccessScheme::Scma,
        }
    }
}

impl NetworkConfig {
    pub fn validate(&self) -> Result<()> {
        let err = |msg: String| Err(Error::Config(msg));
        for (name, v) in [("lambda_bs", self.lambda_bs), ("lambda_u", self.lambda_u), ("lambda_d", self.lambda_d)] {
            if !(v.is_finite() && v >= 0.0) {
                return err(format!("{name} must be a finite density >= 0, got {v}"));
            }
        }
        if !(self.lambda_bs > 0.0) {
            return err("lambda_bs must be > 0".into());
        }
        if !(self.p_u.is_finite() && self.p_u > 0.0 && self.p_d.is_finite() && self.p_d > 0.0) {
            return err(format!("transmit powers must be > 0, got p_u = {}, p_d = {}", self.p_u, self.p_d));
        }
        if !(self.alpha.is_finite() && self.alpha > 2.0) {
            return err(format!("alpha must be > 2, got {}", self.alpha));
        }
        if !(self.xi.is_finite() && self.xi > 0.0) {
            return err(format!("xi must be > 0, got {}", self.xi));
        }
        if self.tau_dis.is_nan() || self.tau_dis < 0.0 {
            return err(format!("tau_dis must be >= 0 (or inf), got {}", self.tau_dis));
        }
        if !(self.tau_bs.is_finite() && self.tau_bs > 0.0 && self.tau_dr.is_finite() && self.tau_dr > 0.0) {
            return err(format!("SIR thresholds must be > 0, got tau_bs = {}, tau_dr = {}", self.tau_bs, self.tau_dr));
        }
        if !(2 <= self.n_c && self.n_c < self.k_tones) {
            return err(format!("need 2 <= n_c < k_tones, got n_c = {}, k_tones = {}", self.n_c, self.k_tones));
        }
        if self.j_codebooks < 1 {
            return err("j_codebooks must be >= 1".into());
        }
        if self.coexistence == Coexistence::Overlaid && !(1 <= self.j_cell && self.j_cell < self.j_codebooks) {
            return err(format!("overlaid mode needs 1 <= j_cell < j_codebooks, got j_cell = {}, j = {}", self.j_cell, self.j_codebooks));
        }
        if !(0.0..=1.0).contains(&self.q_d) {
            return err(format!("q_d must lie in [0, 1], got {}", self.q_d));
        }
        if self.access_scheme == AccessScheme::Ofdma && self.coexistence == Coexistence::Overlaid {
            return Err(Error::Unsupported("OFDMA is only modelled in underlaid mode".into()));
        }
        Ok(())
    }

    pub fn delta(&self) -> f64 {
        2.0 / self.alpha
    }

    pub fn eta_p(&self) -> f64 {
        self.p_d / self.p_u
    }

    /// Resources a BS can hand to its cellular users: K tones, J codebooks,
    /// or the J_C cellular codebooks in overlaid mode.
    pub fn cellular_resources(&self) -> u32 {
        match (self.access_scheme, self.coexistence) {
            (AccessScheme::Ofdma, _) => self.k_tones,
            (AccessScheme::Scma, Coexistence::Underlaid) => self.j_codebooks,
            (AccessScheme::Scma, Coexistence::Overlaid) => self.j_cell,
        }
    }

    /// Size of the pool D2D pairs draw from.
    pub fn d2d_resources(&self) -> u32 {
        match (self.access_scheme, self.coexistence) {
            (AccessScheme::Ofdma, _) => self.k_tones,
            (AccessScheme::Scma, Coexistence::Underlaid) => self.j_codebooks,
            (AccessScheme::Scma, Coexistence::Overlaid) => self.j_codebooks - self.j_cell,
        }
    }

    pub fn with_scheme(&self, scheme: AccessScheme) -> Self {
        Self { access_scheme: scheme, ..self.clone() }
    }
}

/// Intensities after mode selection plus the derived model constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedIntensities {
    /// Uplink users plus D2D transmitters that fell back to cellular mode.
    pub lambda_ut: f64,
    /// D2D transmitters in D2D mode.
    pub lambda_dt: f64,
    pub eta_p: f64,
    pub delta: f64,
    /// Cellular access probability for `cfg.cellular_resources()` resources.
    pub q_u: f64,
}

impl DerivedIntensities {
    pub fn mean_load(&self, lambda_bs: f64) -> f64 {
        self.lambda_ut / lambda_bs
    }
}

/// `P(r_D ≤ τ_dis)`, the fraction of D2D pairs that keep D2D mode.
pub fn d2d_mode_probability(xi: f64, tau_dis: f64) -> f64 {
    if tau_dis == f64::INFINITY {
        1.0
    } else {
        -(-xi * PI * tau_dis * tau_dis).exp_m1()
    }
}

pub fn derive_intensities(cfg: &NetworkConfig) -> Result<DerivedIntensities> {
    let p_d2d = d2d_mode_probability(cfg.xi, cfg.tau_dis);
    let lambda_dt = cfg.lambda_d * p_d2d;
    let lambda_ut = cfg.lambda_u + (cfg.lambda_d - lambda_dt);
    let q_u = access_probability(lambda_ut / cfg.lambda_bs, cfg.cellular_resources())?;
    Ok(DerivedIntensities { lambda_ut, lambda_dt, eta_p: cfg.eta_p(), delta: cfg.delta(), q_u })
}

/// Probability that a cellular user is granted one of `n_resources`
/// orthogonal resources at its BS.
///
/// Each BS serves `min(N_U, N_R)` of its `N_U` users, so the served fraction
/// of the cellular population is `E[min(N_U, N_R)] / E[N_U]`; the
/// per-resource active density is then `q_U λ_UT / N_R`.
pub fn access_probability(mean_load: f64, n_resources: u32) -> Result<f64> {
    if !(mean_load.is_finite() && mean_load >= 0.0) {
        return Err(Error::Domain(format!("mean load must be finite and >= 0, got {mean_load}")));
    }
    if n_resources < 1 {
        return Err(Error::Domain("at least one resource is required".into()));
    }
    if mean_load == 0.0 {
        return Ok(1.0);
    }
    let pmf = CellLoadPmf::new(mean_load);
    let masses = pmf.masses();
    pmf.check_residual(&masses)?;
    let n_r = n_resources as usize;
    let blocked: f64 = masses
        .iter()
        .enumerate()
        .skip(n_r + 1)
        .map(|(m, p)| (m - n_r) as f64 * p)
        .sum();
    Ok((1.0 - blocked / mean_load).clamp(0.0, 1.0))
}

/// Rayleigh density of the D2D link length.
pub fn d2d_link_length_pdf(x: f64, xi: f64) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    2.0 * PI * xi * x * (-xi * PI * x * x).exp()
}

pub fn d2d_link_length_cdf(x: f64, xi: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        d2d_mode_probability(xi, x)
    }
}

pub fn d2d_mean_link_length(xi: f64) -> f64 {
    1.0 / (2.0 * xi.sqrt())
}

/// SCMA overloading factor `J / K`.
pub fn overloading_factor(j: u32, k: u32) -> f64 {
    j as f64 / k as f64
}

/// Number of codebooks obtainable by choosing `n_c` of `k` tones.
pub fn combinatorial_codebooks(k: u32, n_c: u32) -> u32 {
    if n_c > k {
        return 0;
    }
    let n_c = n_c.min(k - n_c) as u64;
    let mut acc: u64 = 1;
    for i in 0..n_c {
        acc = acc * (k as u64 - i) / (i + 1);
    }
    acc as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn base() -> NetworkConfig {
        NetworkConfig { lambda_u: 5e-4, lambda_d: 2.5e-4, tau_dis: 100.0, ..Default::default() }
    }

    #[test]
    fn default_matches_numerical_section() {
        let cfg = NetworkConfig::default();
        cfg.validate().unwrap();
        assert_eq!((cfg.k_tones, cfg.n_c, cfg.j_codebooks), (20, 2, 30));
        assert_abs_diff_eq!(cfg.tau_bs, 10.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cfg.p_u, 100.0, epsilon = 1e-10);
        assert_eq!(cfg.alpha, 4.0);
    }

    #[test]
    fn validation_errors() {
        let bad = [
            NetworkConfig { alpha: 1.5, ..base() },
            NetworkConfig { n_c: 1, ..base() },
            NetworkConfig { n_c: 20, ..base() },
            NetworkConfig { q_d: 1.2, ..base() },
            NetworkConfig { lambda_u: -1.0, ..base() },
            NetworkConfig { tau_bs: 0.0, ..base() },
            NetworkConfig { coexistence: Coexistence::Overlaid, j_cell: 30, ..base() },
            NetworkConfig { coexistence: Coexistence::Overlaid, j_cell: 0, ..base() },
        ];
        for cfg in bad {
            assert!(matches!(cfg.validate(), Err(Error::Config(_))), "{cfg:?}");
        }
        let ofdma_overlaid = NetworkConfig {
            coexistence: Coexistence::Overlaid,
            access_scheme: AccessScheme::Ofdma,
            ..base()
        };
        assert!(matches!(ofdma_overlaid.validate(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn mode_selection_extremes() {
        let d = derive_intensities(&NetworkConfig { tau_dis: 0.0, ..base() }).unwrap();
        assert_eq!(d.lambda_dt, 0.0);
        assert_abs_diff_eq!(d.lambda_ut, 7.5e-4, epsilon = 1e-18);
        let d = derive_intensities(&NetworkConfig { tau_dis: f64::INFINITY, ..base() }).unwrap();
        assert_eq!(d.lambda_dt, 2.5e-4);
        assert_eq!(d.lambda_ut, 5e-4);
    }

    #[test]
    fn mode_selection_at_100m() {
        let d = derive_intensities(&base()).unwrap();
        let expected = 2.5e-4 * (1.0 - (-0.5 * PI).exp());
        assert_abs_diff_eq!(d.lambda_dt, expected, epsilon = 1e-18);
        assert_abs_diff_eq!(d.lambda_dt, 1.98e-4, epsilon = 5e-7);
        assert_abs_diff_eq!(d.lambda_ut + d.lambda_dt, 7.5e-4, epsilon = 1e-18);
    }

    #[test]
    fn access_probability_edges() {
        assert_eq!(access_probability(0.0, 1).unwrap(), 1.0);
        let m_max = CellLoadPmf::new(20.0).truncation_m_max as u32;
        assert_abs_diff_eq!(access_probability(20.0, m_max).unwrap(), 1.0, epsilon = 1e-12);
        assert!(access_probability(5.0, 0).is_err());
        assert!(access_probability(-1.0, 3).is_err());
    }

    #[test]
    fn link_length_distribution() {
        assert_eq!(d2d_link_length_pdf(0.0, 5e-5), 0.0);
        assert_abs_diff_eq!(d2d_mean_link_length(5e-5), 70.71, epsilon = 0.01);
        assert_abs_diff_eq!(d2d_link_length_cdf(100.0, 5e-5), 0.792, epsilon = 5e-4);
    }

    #[test]
    fn overloading() {
        assert_eq!(overloading_factor(6, 4), 1.5);
        assert_eq!(overloading_factor(20, 20), 1.0);
        assert_eq!(overloading_factor(30, 20), 1.5);
        assert_eq!(combinatorial_codebooks(4, 2), 6);
        assert_eq!(combinatorial_codebooks(20, 2), 190);
        assert_eq!(combinatorial_codebooks(10, 2), 45);
    }

    #[test]
    fn db_round_trip() {
        assert_abs_diff_eq!(db_to_linear(10.0), 10.0, epsilon = 1e-12);
        assert_abs_diff_eq!(linear_to_db(db_to_linear(-3.7)), -3.7, epsilon = 1e-12);
    }
}
