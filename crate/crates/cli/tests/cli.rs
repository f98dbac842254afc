use std::io::Write;
use std::process::Command;

use scma_cli::sweep::Engine;
use scma_cli::{load_config, run_optimize, run_sweep, CliError, OptimizeMode, Scenario, SweepResult, SweepSpec};
use scma_hybrid::topology::{db_to_linear, AccessScheme, Coexistence};
use scma_hybrid::NetworkConfig;

fn config_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn spec(scenario: Scenario, key: &str, values: Vec<f64>, engines: Vec<Engine>) -> SweepSpec {
    SweepSpec {
        scenario,
        swept_key: key.into(),
        values,
        engines,
        trials: 1_000,
        seed: 7,
        output_path: None,
    }
}

#[test]
fn config_files() {
    let empty = config_file("");
    let cfg = load_config(empty.path()).unwrap();
    assert_eq!(cfg, NetworkConfig::default());
    assert_eq!((cfg.k_tones, cfg.n_c, cfg.alpha), (20, 2, 4.0));
    assert!((cfg.tau_bs - 10.0).abs() < 1e-12 && (cfg.tau_dr - 10.0).abs() < 1e-12);
    assert!((cfg.p_u - 100.0).abs() < 1e-9 && (cfg.p_d - 100.0).abs() < 1e-9);

    let db = config_file("tau_bs_db = 10\n");
    assert!((load_config(db.path()).unwrap().tau_bs - 10.0).abs() < 1e-12);

    let bad = config_file("# path loss\nalpha = 1.5\n");
    let err = load_config(bad.path()).unwrap_err();
    assert!(matches!(&err, CliError::Model(e) if e.is_validation()), "{err}");
    assert!(err.to_string().contains("alpha"));
    assert_eq!(err.exit_code(), 2);

    let unknown = config_file("alpha = 4\nbeta = 2\n");
    match load_config(unknown.path()) {
        Err(CliError::Parse { line: 2, .. }) => {}
        other => panic!("{other:?}"),
    }
}

#[test]
fn presets_match_figure_parameters() {
    let d = NetworkConfig::default();
    let common = |c: &NetworkConfig| {
        assert_eq!(c.lambda_bs, 5e-5);
        assert_eq!((c.k_tones, c.n_c, c.alpha), (20, 2, 4.0));
        assert!((c.tau_bs - db_to_linear(10.0)).abs() < 1e-12);
    };
    for sc in [Scenario::Fig3a, Scenario::Fig3b] {
        let c = sc.configure(&d);
        common(&c);
        assert_eq!((c.xi, c.lambda_d, c.lambda_u, c.tau_dis), (5e-5, 2.5e-4, 1e-3, f64::INFINITY));
        assert_eq!(c.j_codebooks, 30);
    }
    let c = Scenario::Fig4.configure(&d);
    common(&c);
    assert_eq!((c.lambda_u, c.lambda_d, c.j_cell, c.j_codebooks), (5e-4, 2.5e-4, 10, 30));

    let c = Scenario::Fig5.configure(&d);
    assert_eq!((c.lambda_d, c.j_codebooks), (0.0, 190));
    assert!(c.lambda_u > 10.0 * c.j_codebooks as f64 * c.lambda_bs);

    for (sc, tau_dis, mode) in [
        (Scenario::Fig6a, 100.0, Coexistence::Underlaid),
        (Scenario::Fig6b, f64::INFINITY, Coexistence::Underlaid),
        (Scenario::Fig7a, 100.0, Coexistence::Overlaid),
        (Scenario::Fig7b, f64::INFINITY, Coexistence::Overlaid),
    ] {
        let c = sc.configure(&d);
        common(&c);
        assert_eq!((c.lambda_u, c.lambda_d, c.tau_dis, c.coexistence), (1e-3, 2.5e-3, tau_dis, mode));
        assert_eq!((c.j_codebooks, c.access_scheme), (30, AccessScheme::Scma));
    }
}

#[test]
fn csv_round_trip() {
    let sc = Scenario::Fig3a;
    let s = spec(sc, "lambda_u", vec![1e-4, 1.23456789e-3], vec![Engine::Analytic, Engine::MonteCarlo]);
    let table = run_sweep(&s, &sc.configure(&NetworkConfig::default())).unwrap();
    assert_eq!(table.rows.len(), 8);

    let file = tempfile::NamedTempFile::new().unwrap();
    table.write_csv(file.reopen().unwrap()).unwrap();
    let text = std::fs::read_to_string(file.path()).unwrap();
    let back = SweepResult::read_csv("lambda_u", text.as_bytes()).unwrap();
    assert_eq!(back, table);

    let first = text.lines().nth(1).unwrap();
    assert!(first.starts_with("1.00000e-4,ofdma,underlaid,analytic,"), "{first}");
    let ase = first.split(',').nth(6).unwrap();
    assert!(ase.contains('e') && ase.split('e').next().unwrap().len() == 7, "{ase}");
}

#[test]
fn sweeps_are_deterministic() {
    let sc = Scenario::Fig6a;
    let s = spec(sc, "q_d", vec![0.5, 1.0], vec![Engine::MonteCarlo]);
    let base = sc.configure(&NetworkConfig::default());
    let a = run_sweep(&s, &base).unwrap();
    assert_eq!(a, run_sweep(&s, &base).unwrap());
    assert!(a.rows.iter().all(|r| r.ci_halfwidth.is_some() && r.error.is_none()));
}

#[test]
fn fig3a_scma_beats_ofdma_at_high_load() {
    let sc = Scenario::Fig3a;
    let s = spec(sc, "lambda_u", vec![5e-3, 1e-2], vec![Engine::Analytic]);
    let t = run_sweep(&s, &sc.configure(&NetworkConfig::default())).unwrap();
    for pair in t.rows.chunks(2) {
        assert_eq!((pair[0].scheme, pair[1].scheme), (AccessScheme::Ofdma, AccessScheme::Scma));
        assert!(pair[1].ase_total.unwrap() > pair[0].ase_total.unwrap());
        assert!(pair[1].ase_gain.unwrap() > 1.0);
    }
}

#[test]
fn fig5_gain_and_overload_columns() {
    let sc = Scenario::Fig5;
    let s = spec(sc, "k_tones", vec![4.0, 6.0, 8.0, 10.0], vec![Engine::Analytic]);
    let t = run_sweep(&s, &sc.configure(&NetworkConfig::default())).unwrap();
    let scma: Vec<_> = t.rows.iter().filter(|r| r.scheme == AccessScheme::Scma).collect();
    assert_eq!(scma.len(), 4);
    for (r, k) in scma.iter().zip([4.0, 6.0, 8.0, 10.0]) {
        let overload = r.overload.unwrap();
        assert_eq!(overload, (k - 1.0) / 2.0);
        assert!(r.ase_gain.unwrap() < overload);
    }
}

#[test]
fn optimizer_reports() {
    let fig6 = Scenario::Fig6b.configure(&NetworkConfig::default());

    let sparse = NetworkConfig { tau_dis: 5.0, ..fig6.clone() };
    let r = run_optimize(&sparse, OptimizeMode::Qd).unwrap();
    assert_eq!(r.closed_form, 1.0);
    assert!(r.agree && r.warnings.is_empty());

    let r = run_optimize(&fig6, OptimizeMode::Qd).unwrap();
    assert!(r.closed_form > 0.0 && r.closed_form < 1.0);
    assert!((r.closed_form - r.validator).abs() <= 1e-3 && r.agree);

    let r = run_optimize(&Scenario::Fig7b.configure(&NetworkConfig::default()), OptimizeMode::Jc).unwrap();
    assert_eq!(r.closed_form, r.validator);
    assert_eq!(r.closed_form.fract(), 0.0);
    assert!(r.agree);
    assert!(r.to_string().contains("agree: true"));

    let crowded = NetworkConfig { tau_dis: 100.0, ..fig6 };
    let r = run_optimize(&crowded, OptimizeMode::Qd).unwrap();
    assert_eq!(r.closed_form, 1.0);
    assert!(r.warnings.iter().any(|w| w.contains("sparse-regime")));
    assert!(r.to_string().contains(&format!("warning: {}", r.warnings[0])));

    let err = run_optimize(&fig6_overlaid_finite(), OptimizeMode::Jc).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

fn fig6_overlaid_finite() -> NetworkConfig {
    Scenario::Fig7a.configure(&NetworkConfig::default())
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_scma-hybrid");
    let out = Command::new(bin).args(["sweep", "--scenario", "fig6b", "--sweep", "q_d=0.5:1:2"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with("swept_value,scheme,mode,engine,"));

    let bad = config_file("alpha = 1.5\n");
    let out = Command::new(bin).args(["optimize", "--mode", "qd", "--config"]).arg(bad.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = Command::new(bin).args(["sweep", "--scenario", "custom"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let dump = tempfile::NamedTempFile::new().unwrap();
    let out = Command::new(bin)
        .args(["dump-snapshot", "--scenario", "fig3a", "--seed", "3", "--out"])
        .arg(dump.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(dump.path()).unwrap();
    assert!(text.lines().any(|l| l.starts_with("bs ")));
    assert!(text.lines().any(|l| l.starts_with("cu ")));
}
