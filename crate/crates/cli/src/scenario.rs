//! Parameter presets for the figure-reproduction sweeps.

use std::fmt;
use std::str::FromStr;

use scma_hybrid::topology::{combinatorial_codebooks, AccessScheme, Coexistence, NetworkConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    Fig3a,
    Fig3b,
    Fig4,
    Fig5,
    Fig6a,
    Fig6b,
    Fig7a,
    Fig7b,
    Custom,
}

pub const ALL: [Scenario; 9] = [
    Scenario::Fig3a,
    Scenario::Fig3b,
    Scenario::Fig4,
    Scenario::Fig5,
    Scenario::Fig6a,
    Scenario::Fig6b,
    Scenario::Fig7a,
    Scenario::Fig7b,
    Scenario::Custom,
];

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scenario::Fig3a => "fig3a",
            Scenario::Fig3b => "fig3b",
            Scenario::Fig4 => "fig4",
            Scenario::Fig5 => "fig5",
            Scenario::Fig6a => "fig6a",
            Scenario::Fig6b => "fig6b",
            Scenario::Fig7a => "fig7a",
            Scenario::Fig7b => "fig7b",
            Scenario::Custom => "custom",
        })
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        ALL.iter()
            .copied()
            .find(|sc| sc.to_string() == s)
            .ok_or_else(|| format!("unknown scenario {s:?}"))
    }
}

/// Mean cellular load per BS used for the overloading sweep, in units of J.
pub const FIG5_LOAD_PER_CODEBOOK: f64 = 100.0;

impl Scenario {
    /// Applies the preset on top of `base`. `Custom` returns `base` unchanged.
    pub fn configure(self, base: &NetworkConfig) -> NetworkConfig {
        let fig3 = NetworkConfig {
            lambda_bs: 5e-5,
            xi: 5e-5,
            lambda_u: 1e-3,
            lambda_d: 2.5e-4,
            tau_dis: f64::INFINITY,
            q_d: 1.0,
            coexistence: Coexistence::Underlaid,
            ..base.clone()
        };
        let fig6 = |tau_dis| NetworkConfig {
            lambda_bs: 5e-5,
            lambda_u: 1e-3,
            lambda_d: 2.5e-3,
            tau_dis,
            coexistence: Coexistence::Underlaid,
            access_scheme: AccessScheme::Scma,
            ..base.clone()
        };
        let fig7 = |tau_dis| NetworkConfig { coexistence: Coexistence::Overlaid, q_d: 1.0, ..fig6(tau_dis) };
        match self {
            Scenario::Fig3a | Scenario::Fig3b => fig3,
            Scenario::Fig4 => NetworkConfig {
                lambda_u: 5e-4,
                lambda_d: 2.5e-4,
                j_cell: 10,
                access_scheme: AccessScheme::Scma,
                ..fig3
            },
            Scenario::Fig5 => {
                let mut cfg = NetworkConfig { lambda_d: 0.0, n_c: 2, access_scheme: AccessScheme::Scma, ..fig3 };
                fig5_couple(&mut cfg);
                cfg
            }
            Scenario::Fig6a => fig6(100.0),
            Scenario::Fig6b => fig6(f64::INFINITY),
            Scenario::Fig7a => fig7(100.0),
            Scenario::Fig7b => fig7(f64::INFINITY),
            Scenario::Custom => base.clone(),
        }
    }

    /// Default `KEY=start:stop:steps[:log]` sweep, if the scenario has one.
    pub fn default_sweep(self) -> Option<&'static str> {
        match self {
            Scenario::Fig3a => Some("lambda_u=1e-4:1e-2:21:log"),
            Scenario::Fig3b => Some("lambda_d=1e-4:1e-2:21:log"),
            Scenario::Fig4 => Some("tau_dis=0:500:26"),
            Scenario::Fig5 => Some("k_tones=4:10:4"),
            Scenario::Fig6a | Scenario::Fig6b => Some("q_d=0.05:1:20"),
            Scenario::Fig7a | Scenario::Fig7b => Some("j_cell=1:29:29"),
            Scenario::Custom => None,
        }
    }

    /// Scheme and coexistence pairs evaluated at every sweep point.
    pub fn variants(self, cfg: &NetworkConfig) -> Vec<(AccessScheme, Coexistence)> {
        use AccessScheme::*;
        use Coexistence::*;
        match self {
            Scenario::Fig3a | Scenario::Fig3b | Scenario::Fig5 => vec![(Ofdma, Underlaid), (Scma, Underlaid)],
            Scenario::Fig4 => vec![(Scma, Underlaid), (Scma, Overlaid)],
            Scenario::Fig6a | Scenario::Fig6b => vec![(Scma, Underlaid)],
            Scenario::Fig7a | Scenario::Fig7b => vec![(Scma, Overlaid)],
            Scenario::Custom => vec![(cfg.access_scheme, cfg.coexistence)],
        }
    }

    /// Re-derives parameters tied to the swept one.
    pub fn couple(self, cfg: &mut NetworkConfig) {
        if self == Scenario::Fig5 {
            fig5_couple(cfg);
        }
    }
}

/// `J = C(K, N_C)` and a cellular load far above `J` users per cell.
fn fig5_couple(cfg: &mut NetworkConfig) {
    cfg.j_codebooks = combinatorial_codebooks(cfg.k_tones, cfg.n_c);
    cfg.lambda_u = FIG5_LOAD_PER_CODEBOOK * cfg.j_codebooks as f64 * cfg.lambda_bs;
}
