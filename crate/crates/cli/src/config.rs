//! `key = value` configuration files.
//!
//! Blank lines and `#` comments are ignored. Keys are the [`NetworkConfig`]
//! field names; thresholds may also be given in dB (`tau_bs_db`) and powers
//! in dBm (`p_u_dbm`). Missing keys keep their defaults.

use std::path::Path;

use scma_hybrid::topology::{db_to_linear, AccessScheme, Coexistence, NetworkConfig};

use crate::error::{CliError, Result};

/// Every key accepted in a config file or as a sweep target.
pub const KEYS: &[&str] = &[
    "lambda_bs", "lambda_u", "lambda_d", "p_u", "p_u_dbm", "p_d", "p_d_dbm", "alpha", "xi", "tau_dis", "tau_bs",
    "tau_bs_db", "tau_dr", "tau_dr_db", "k_tones", "n_c", "j_codebooks", "j_cell", "q_d", "coexistence",
    "access_scheme",
];

/// Keys whose values are densities (per m²).
pub fn is_density(key: &str) -> bool {
    key.starts_with("lambda_") || key == "xi"
}

pub fn is_integer(key: &str) -> bool {
    matches!(key, "k_tones" | "n_c" | "j_codebooks" | "j_cell")
}

fn parse_f64(value: &str) -> std::result::Result<f64, String> {
    match value {
        "inf" | "infinity" => Ok(f64::INFINITY),
        v => v.parse::<f64>().map_err(|_| format!("expected a number, got {v:?}")),
    }
}

fn parse_u32(value: &str) -> std::result::Result<u32, String> {
    value.parse::<u32>().map_err(|_| format!("expected a non-negative integer, got {value:?}"))
}

/// Sets one numeric key; integer keys take the nearest integer.
pub fn set_numeric(cfg: &mut NetworkConfig, key: &str, v: f64) -> std::result::Result<(), String> {
    let int = || {
        if v >= 0.0 && v <= u32::MAX as f64 {
            Ok(v.round() as u32)
        } else {
            Err(format!("{key} must be a non-negative integer, got {v}"))
        }
    };
    match key {
        "lambda_bs" => cfg.lambda_bs = v,
        "lambda_u" => cfg.lambda_u = v,
        "lambda_d" => cfg.lambda_d = v,
        "p_u" => cfg.p_u = v,
        "p_u_dbm" => cfg.p_u = db_to_linear(v),
        "p_d" => cfg.p_d = v,
        "p_d_dbm" => cfg.p_d = db_to_linear(v),
        "alpha" => cfg.alpha = v,
        "xi" => cfg.xi = v,
        "tau_dis" => cfg.tau_dis = v,
        "tau_bs" => cfg.tau_bs = v,
        "tau_bs_db" => cfg.tau_bs = db_to_linear(v),
        "tau_dr" => cfg.tau_dr = v,
        "tau_dr_db" => cfg.tau_dr = db_to_linear(v),
        "k_tones" => cfg.k_tones = int()?,
        "n_c" => cfg.n_c = int()?,
        "j_codebooks" => cfg.j_codebooks = int()?,
        "j_cell" => cfg.j_cell = int()?,
        "q_d" => cfg.q_d = v,
        other => return Err(format!("unknown or non-numeric key {other:?}")),
    }
    Ok(())
}

fn set(cfg: &mut NetworkConfig, key: &str, value: &str) -> std::result::Result<(), String> {
    match key {
        "coexistence" => {
            cfg.coexistence = match value {
                "underlaid" => Coexistence::Underlaid,
                "overlaid" => Coexistence::Overlaid,
                v => return Err(format!("coexistence must be underlaid or overlaid, got {v:?}")),
            }
        }
        "access_scheme" => {
            cfg.access_scheme = match value {
                "scma" => AccessScheme::Scma,
                "ofdma" => AccessScheme::Ofdma,
                v => return Err(format!("access_scheme must be scma or ofdma, got {v:?}")),
            }
        }
        k if is_integer(k) => set_numeric(cfg, k, parse_u32(value)? as f64)?,
        k if KEYS.contains(&k) => set_numeric(cfg, k, parse_f64(value)?)?,
        k => return Err(format!("unknown key {k:?}")),
    }
    Ok(())
}

/// Parses config text on top of the defaults, without validating.
pub fn parse_config(text: &str, origin: &str) -> Result<NetworkConfig> {
    let mut cfg = NetworkConfig::default();
    let mut seen: Vec<&str> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let err = |msg: String| CliError::Parse { path: origin.to_string(), line: i + 1, msg };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| err("expected `key = value`".into()))?;
        let (key, value) = (key.trim(), value.trim());
        if seen.contains(&key) {
            return Err(err(format!("duplicate key {key:?}")));
        }
        seen.push(key);
        set(&mut cfg, key, value).map_err(err)?;
    }
    Ok(cfg)
}

/// Reads and validates a config file.
pub fn load_config(path: &Path) -> Result<NetworkConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))?;
    let cfg = parse_config(&text, &path.display().to_string())?;
    cfg.validate()?;
    Ok(cfg)
}
