//! Monte Carlo ground truth on a square torus.
//!
//! Each trial draws one snapshot: Poisson base stations, uplink users and
//! D2D pairs, nearest-BS association, per-cell resource allocation and
//! fading. Two typical links are added on top of the background process:
//! the uplink user at index 0 (placed at the torus antipode of the origin)
//! and the D2D pair at index 0, whose receiver sits at the origin. Each
//! typical link is evaluated against the background transmitters only, so
//! the two never interfere with each other.
//!
//! Snapshot dump format, one point per line:
//!
//! ```text
//! bs x y - -
//! cu x y resource active
//! dt x y dx dy resource active
//! ```
//!
//! where `(dx, dy)` is the receiver offset and `resource` is `-` for an
//! inactive transmitter.

use std::f64::consts::PI;
use std::io::{self, Write};

use log::debug;
use rand::seq::index::sample as sample_indices;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Gamma, Poisson};
use rayon::prelude::*;

use crate::analytics::{CoverageReport, Provenance};
use crate::error::{Error, Result};
use crate::topology::{AccessScheme, Coexistence, NetworkConfig};

pub type Point = [f64; 2];

/// Window half-width in units of `1 / √(π λ_BS)`.
pub const DEFAULT_WINDOW_FACTOR: f64 = 10.0;
/// Trial count used by the figure recipes when none is given.
pub const DEFAULT_TRIALS: u64 = 50_000;

/// Fading law used for every link in a trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FadingModel {
    /// Exp(1) per OFDMA tone; Gamma(N_C, 1) summed over an SCMA codeword.
    #[default]
    Exact,
    /// SCMA fades replaced by an exponential with mean N_C.
    ExponentialApprox,
    /// Every fade fixed at its mean.
    Deterministic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    pub window_factor: f64,
    pub fading: FadingModel,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self { window_factor: DEFAULT_WINDOW_FACTOR, fading: FadingModel::Exact }
    }
}

/// One spatial realization. Resources are `None` for inactive transmitters.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub window_halfwidth: f64,
    pub bs_points: Vec<Point>,
    /// Uplink users, including D2D transmitters that fell back to cellular mode.
    pub cellular_user_points: Vec<Point>,
    pub d2d_tx_points: Vec<Point>,
    /// Receiver position minus transmitter position.
    pub d2d_rx_offsets: Vec<Point>,
    pub associations: Vec<Option<usize>>,
    pub cellular_resources: Vec<Option<u32>>,
    pub d2d_resources: Vec<Option<u32>>,
    /// Index of the typical uplink user, if the snapshot has one.
    pub typical_user: Option<usize>,
    /// Index of the typical D2D pair; `None` when it is absent or its link
    /// exceeded `τ_dis` and it joined the cellular tier.
    pub typical_pair: Option<usize>,
    /// Untruncated link length of the typical D2D pair.
    pub typical_link_length: f64,
    pub rng_seed: u64,
}

impl Snapshot {
    fn torus_dist2(&self, a: Point, b: Point) -> f64 {
        let side = 2.0 * self.window_halfwidth;
        let mut s = 0.0;
        for k in 0..2 {
            let d = (a[k] - b[k]).abs();
            let d = d.min(side - d);
            s += d * d;
        }
        s
    }

    pub fn active_cellular(&self) -> usize {
        self.cellular_resources.iter().filter(|r| r.is_some()).count()
    }

    pub fn active_d2d(&self) -> usize {
        self.d2d_resources.iter().filter(|r| r.is_some()).count()
    }

    pub fn area(&self) -> f64 {
        4.0 * self.window_halfwidth * self.window_halfwidth
    }

    /// Panics unless every cell's active users hold distinct resources and
    /// no cell exceeds `n_resources` active users.
    pub fn assert_cell_distinctness(&self, n_resources: u32) {
        let mut seen = vec![Vec::new(); self.bs_points.len()];
        for (u, res) in self.cellular_resources.iter().enumerate() {
            if let Some(r) = res {
                let b = self.associations[u].expect("active user without a BS");
                assert!(*r < n_resources, "resource {r} out of range");
                assert!(!seen[b].contains(r), "resource {r} reused in cell {b}");
                seen[b].push(*r);
            }
        }
        assert!(seen.iter().all(|s| s.len() <= n_resources as usize));
    }

    /// Writes the dump format described in the module docs.
    pub fn write_dump<W: Write>(&self, mut out: W) -> io::Result<()> {
        let res = |r: &Option<u32>| r.map_or(("-".to_string(), 0), |r| (r.to_string(), 1));
        writeln!(out, "# tier x y [partner_dx partner_dy] resource active")?;
        for p in &self.bs_points {
            writeln!(out, "bs {} {} - -", p[0], p[1])?;
        }
        for (p, r) in self.cellular_user_points.iter().zip(&self.cellular_resources) {
            let (r, a) = res(r);
            writeln!(out, "cu {} {} {r} {a}", p[0], p[1])?;
        }
        for ((p, o), r) in self.d2d_tx_points.iter().zip(&self.d2d_rx_offsets).zip(&self.d2d_resources) {
            let (r, a) = res(r);
            writeln!(out, "dt {} {} {} {} {r} {a}", p[0], p[1], o[0], o[1])?;
        }
        Ok(())
    }
}

/// Buckets base stations on a uniform grid for nearest-neighbour queries
/// under the torus metric.
struct BsGrid {
    g: usize,
    cell: f64,
    half: f64,
    buckets: Vec<Vec<usize>>,
    /// Stations in the 3x3 block around each grid cell, with coordinates
    /// unwrapped next to that cell.
    neighbourhood: Vec<Vec<(Point, usize)>>,
}

impl BsGrid {
    fn new(points: &[Point], half: f64, lambda_bs: f64) -> Self {
        let g = ((2.0 * half * lambda_bs.sqrt()).floor() as usize).max(1);
        let cell = 2.0 * half / g as f64;
        let mut buckets = vec![Vec::new(); g * g];
        let grid = Self { g, cell, half, buckets: Vec::new(), neighbourhood: Vec::new() };
        for (i, p) in points.iter().enumerate() {
            let (cx, cy) = grid.cell_of(*p);
            buckets[cy * g + cx].push(i);
        }
        let gi = g as isize;
        let mut neighbourhood = vec![Vec::new(); g * g];
        if g >= 3 {
            for cy in 0..gi {
                for cx in 0..gi {
                    let list = &mut neighbourhood[(cy * gi + cx) as usize];
                    for dy in -1..=1 {
                        for dx in -1..=1 {
                            let (bx, by) = (cx + dx, cy + dy);
                            let shift = |c: isize| 2.0 * half * (c.div_euclid(gi) as f64);
                            let b = by.rem_euclid(gi) * gi + bx.rem_euclid(gi);
                            for &i in &buckets[b as usize] {
                                let q = points[i];
                                list.push(([q[0] + shift(bx), q[1] + shift(by)], i));
                            }
                        }
                    }
                }
            }
        }
        Self { buckets, neighbourhood, ..grid }
    }

    fn cell_of(&self, p: Point) -> (usize, usize) {
        let f = |x: f64| (((x + self.half) / self.cell).floor() as isize).clamp(0, self.g as isize - 1) as usize;
        (f(p[0]), f(p[1]))
    }

    fn nearest(&self, snap: &Snapshot, p: Point) -> Option<usize> {
        let (cx, cy) = self.cell_of(p);
        if self.g >= 3 {
            // Anything outside the 3x3 block is at least one cell width away.
            let mut best: Option<(f64, usize)> = None;
            for &(q, b) in &self.neighbourhood[cy * self.g + cx] {
                let d = (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2);
                if best.is_none_or(|(bd, bi)| d < bd || (d == bd && b < bi)) {
                    best = Some((d, b));
                }
            }
            if let Some((d, b)) = best {
                if d <= self.cell * self.cell {
                    return Some(b);
                }
            }
        }
        self.ring_search(snap, p, cx, cy)
    }

    fn ring_search(&self, snap: &Snapshot, p: Point, cx: usize, cy: usize) -> Option<usize> {
        let g = self.g as isize;
        let mut best: Option<(f64, usize)> = None;
        for k in 0..=g / 2 + 1 {
            for dy in -k..=k {
                for dx in -k..=k {
                    if dx.abs() != k && dy.abs() != k {
                        continue;
                    }
                    let bx = (cx as isize + dx).rem_euclid(g) as usize;
                    let by = (cy as isize + dy).rem_euclid(g) as usize;
                    for &b in &self.buckets[by * self.g + bx] {
                        let d = snap.torus_dist2(p, snap.bs_points[b]);
                        if best.is_none_or(|(bd, bi)| d < bd || (d == bd && b < bi)) {
                            best = Some((d, b));
                        }
                    }
                }
            }
            if let Some((d, _)) = best {
                let reach = k as f64 * self.cell;
                if d <= reach * reach {
                    break;
                }
            }
            if 2 * k + 1 >= g {
                break;
            }
        }
        best.map(|(_, b)| b)
    }
}

pub fn window_halfwidth(cfg: &NetworkConfig, window_factor: f64) -> f64 {
    window_factor / (PI * cfg.lambda_bs).sqrt()
}

fn poisson_count<R: Rng>(rng: &mut R, mean: f64) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).expect("finite positive mean").sample(rng) as usize
}

fn uniform_points<R: Rng>(rng: &mut R, n: usize, half: f64) -> Vec<Point> {
    (0..n)
        .map(|_| [rng.random_range(-half..half), rng.random_range(-half..half)])
        .collect()
}

fn rayleigh_offset<R: Rng>(rng: &mut R, xi: f64) -> (f64, Point) {
    let e: f64 = Exp1.sample(rng);
    let r = (e / (PI * xi)).sqrt();
    let theta = rng.random_range(0.0..2.0 * PI);
    (r, [r * theta.cos(), r * theta.sin()])
}

fn sample_points<R: Rng>(cfg: &NetworkConfig, rng: &mut R, half: f64, seed: u64, typical: bool) -> Snapshot {
    let area = 4.0 * half * half;
    let n_bs = poisson_count(rng, cfg.lambda_bs * area);
    let bs_points = uniform_points(rng, n_bs, half);

    let mut users = Vec::new();
    if typical {
        users.push([-half, -half]);
    }
    let n_u = poisson_count(rng, cfg.lambda_u * area);
    users.extend(uniform_points(rng, n_u, half));

    let mut tx = Vec::new();
    let mut offsets = Vec::new();
    let mut typical_pair = None;
    let mut typical_link_length = f64::NAN;
    if typical {
        let (r, off) = rayleigh_offset(rng, cfg.xi);
        typical_link_length = r;
        let p = [-off[0], -off[1]];
        if r <= cfg.tau_dis {
            typical_pair = Some(0);
            tx.push(p);
            offsets.push(off);
        } else {
            users.push(p);
        }
    }
    let n_d = poisson_count(rng, cfg.lambda_d * area);
    for _ in 0..n_d {
        let p = [rng.random_range(-half..half), rng.random_range(-half..half)];
        let (r, off) = rayleigh_offset(rng, cfg.xi);
        if r <= cfg.tau_dis {
            tx.push(p);
            offsets.push(off);
        } else {
            users.push(p);
        }
    }

    let mut snap = Snapshot {
        window_halfwidth: half,
        bs_points,
        associations: Vec::new(),
        cellular_resources: vec![None; users.len()],
        d2d_resources: vec![None; tx.len()],
        cellular_user_points: users,
        d2d_tx_points: tx,
        d2d_rx_offsets: offsets,
        typical_user: typical.then_some(0),
        typical_pair,
        typical_link_length,
        rng_seed: seed,
    };
    let grid = BsGrid::new(&snap.bs_points, half, cfg.lambda_bs);
    snap.associations = snap.cellular_user_points.iter().map(|&p| grid.nearest(&snap, p)).collect();
    snap
}

/// Draws points, link lengths and nearest-BS associations; no resources yet.
/// The snapshot contains both typical links.
pub fn sample_snapshot(cfg: &NetworkConfig, seed: u64) -> Snapshot {
    sample_snapshot_with(cfg, seed, &SimOptions::default(), true)
}

pub fn sample_snapshot_with(cfg: &NetworkConfig, seed: u64, opts: &SimOptions, typical: bool) -> Snapshot {
    let mut rng = trial_rng(seed, 0);
    sample_points(cfg, &mut rng, window_halfwidth(cfg, opts.window_factor), seed, typical)
}

/// Resource pools `(cellular, d2d)` as half-open ranges.
fn pools(cfg: &NetworkConfig) -> ((u32, u32), (u32, u32)) {
    match (cfg.access_scheme, cfg.coexistence) {
        (AccessScheme::Ofdma, _) => ((0, cfg.k_tones), (0, cfg.k_tones)),
        (AccessScheme::Scma, Coexistence::Underlaid) => ((0, cfg.j_codebooks), (0, cfg.j_codebooks)),
        (AccessScheme::Scma, Coexistence::Overlaid) => ((0, cfg.j_cell), (cfg.j_cell, cfg.j_codebooks)),
    }
}

fn allocate_in_place<R: Rng>(snap: &mut Snapshot, cfg: &NetworkConfig, rng: &mut R) {
    let ((c_lo, c_hi), (d_lo, d_hi)) = pools(cfg);
    let n_r = (c_hi - c_lo) as usize;

    let mut cells = vec![Vec::new(); snap.bs_points.len()];
    for (u, b) in snap.associations.iter().enumerate() {
        if let Some(b) = b {
            cells[*b].push(u);
        }
    }
    snap.cellular_resources.iter_mut().for_each(|r| *r = None);
    for users in &mut cells {
        if users.is_empty() {
            continue;
        }
        let k = users.len().min(n_r);
        // The typical user is served unconditionally; it is always the
        // lowest index, so it already sits first in its cell.
        let fixed = usize::from(snap.typical_user == Some(users[0]));
        for i in fixed..k {
            let j = rng.random_range(i..users.len());
            users.swap(i, j);
        }
        for (slot, r) in sample_indices(rng, n_r, k).into_iter().enumerate() {
            snap.cellular_resources[users[slot]] = Some(c_lo + r as u32);
        }
    }

    for (i, res) in snap.d2d_resources.iter_mut().enumerate() {
        let forced = snap.typical_pair == Some(i);
        let active = forced || rng.random_bool(cfg.q_d.clamp(0.0, 1.0));
        *res = active.then(|| rng.random_range(d_lo..d_hi));
    }
}

/// Activates `min(N, N_R)` users per cell with distinct resources and lets
/// each D2D pair flip its activation coin and draw a resource from its pool.
/// Randomness comes from a dedicated substream of the snapshot seed.
pub fn allocate_resources(snap: &Snapshot, cfg: &NetworkConfig) -> Snapshot {
    let mut out = snap.clone();
    let mut rng = trial_rng(snap.rng_seed, 1);
    allocate_in_place(&mut out, cfg, &mut rng);
    out
}

struct Fader {
    gamma: Option<Gamma<f64>>,
    scale: f64,
    model: FadingModel,
    mean: f64,
}

impl Fader {
    fn new(cfg: &NetworkConfig, model: FadingModel) -> Self {
        let n_c = match cfg.access_scheme {
            AccessScheme::Ofdma => 1.0,
            AccessScheme::Scma => cfg.n_c as f64,
        };
        let gamma = (n_c > 1.0).then(|| Gamma::new(n_c, 1.0).expect("positive shape"));
        Self { gamma, scale: n_c, model, mean: n_c }
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> f64 {
        match (self.model, &self.gamma) {
            (FadingModel::Deterministic, _) => self.mean,
            (FadingModel::Exact, Some(g)) => g.sample(rng),
            _ => {
                let e: f64 = Exp1.sample(rng);
                self.mean * e
            }
        }
    }

    /// Transmit power per tone.
    fn power(&self, p: f64) -> f64 {
        p / self.scale
    }
}

fn sir_at<R: Rng>(
    snap: &Snapshot,
    cfg: &NetworkConfig,
    fader: &Fader,
    rng: &mut R,
    rx: Point,
    signal: f64,
    resource: u32,
) -> f64 {
    let mut interference = 0.0;
    let p_u = fader.power(cfg.p_u);
    let p_d = fader.power(cfg.p_d);
    for (u, r) in snap.cellular_resources.iter().enumerate() {
        if *r == Some(resource) && Some(u) != snap.typical_user {
            let d2 = snap.torus_dist2(rx, snap.cellular_user_points[u]);
            interference += p_u * d2.powf(-cfg.alpha / 2.0) * fader.draw(rng);
        }
    }
    for (i, r) in snap.d2d_resources.iter().enumerate() {
        if *r == Some(resource) && Some(i) != snap.typical_pair {
            let d2 = snap.torus_dist2(rx, snap.d2d_tx_points[i]);
            interference += p_d * d2.powf(-cfg.alpha / 2.0) * fader.draw(rng);
        }
    }
    if interference == 0.0 {
        f64::INFINITY
    } else {
        signal / interference
    }
}

fn sir_bs_with<R: Rng>(snap: &Snapshot, cfg: &NetworkConfig, fader: &Fader, rng: &mut R) -> Result<f64> {
    let u = snap.typical_user.ok_or_else(|| Error::Degenerate("no typical uplink user".into()))?;
    let b = snap.associations[u].ok_or_else(|| Error::Degenerate("no base station in the window".into()))?;
    let r = snap.cellular_resources[u].ok_or_else(|| Error::Degenerate("typical user holds no resource".into()))?;
    let bs = snap.bs_points[b];
    let d2 = snap.torus_dist2(bs, snap.cellular_user_points[u]);
    let signal = fader.power(cfg.p_u) * d2.powf(-cfg.alpha / 2.0) * fader.draw(rng);
    Ok(sir_at(snap, cfg, fader, rng, bs, signal, r))
}

fn sir_dr_with<R: Rng>(snap: &Snapshot, cfg: &NetworkConfig, fader: &Fader, rng: &mut R) -> Result<f64> {
    let i = snap.typical_pair.ok_or_else(|| Error::Degenerate("no typical D2D pair in D2D mode".into()))?;
    let r = snap.d2d_resources[i].ok_or_else(|| Error::Degenerate("typical pair holds no resource".into()))?;
    let tx = snap.d2d_tx_points[i];
    let off = snap.d2d_rx_offsets[i];
    let rx = [tx[0] + off[0], tx[1] + off[1]];
    let d2 = off[0] * off[0] + off[1] * off[1];
    let signal = fader.power(cfg.p_d) * d2.powf(-cfg.alpha / 2.0) * fader.draw(rng);
    Ok(sir_at(snap, cfg, fader, rng, rx, signal, r))
}

/// SIR at the serving BS of the typical uplink user; `+inf` without interferers.
pub fn sir_typical_bs<R: Rng>(snap: &Snapshot, cfg: &NetworkConfig, fading: FadingModel, rng: &mut R) -> Result<f64> {
    sir_bs_with(snap, cfg, &Fader::new(cfg, fading), rng)
}

/// SIR at the typical D2D receiver; `+inf` without interferers.
pub fn sir_typical_dr<R: Rng>(snap: &Snapshot, cfg: &NetworkConfig, fading: FadingModel, rng: &mut R) -> Result<f64> {
    sir_dr_with(snap, cfg, &Fader::new(cfg, fading), rng)
}

/// Generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Binomial proportion with its 95% normal-approximation half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub trials: u64,
    pub successes: u64,
    pub p_hat: f64,
    pub ci_halfwidth: f64,
}

impl McEstimate {
    pub fn from_counts(successes: u64, trials: u64) -> Self {
        let p_hat = successes as f64 / trials as f64;
        let ci_halfwidth = 1.96 * (p_hat * (1.0 - p_hat) / trials as f64).sqrt();
        Self { trials, successes, p_hat, ci_halfwidth }
    }
}

/// Totals of one Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McRun {
    pub cellular: McEstimate,
    pub d2d: McEstimate,
    /// Active background transmitters summed over trials.
    pub active_cellular: u64,
    pub active_d2d: u64,
    pub window_area: f64,
    pub report: CoverageReport,
}

#[derive(Default, Clone, Copy)]
struct Tally {
    bs: u64,
    dr: u64,
    cell: u64,
    d2d: u64,
}

impl std::ops::Add for Tally {
    type Output = Tally;
    fn add(self, o: Tally) -> Tally {
        Tally { bs: self.bs + o.bs, dr: self.dr + o.dr, cell: self.cell + o.cell, d2d: self.d2d + o.d2d }
    }
}

fn run_trial(cfg: &NetworkConfig, fader: &Fader, half: f64, seed: u64, trial: u64) -> Tally {
    let mut rng = trial_rng(seed, trial);
    let mut snap = sample_points(cfg, &mut rng, half, seed, true);
    allocate_in_place(&mut snap, cfg, &mut rng);
    let bs = match sir_bs_with(&snap, cfg, fader, &mut rng) {
        Ok(sir) => sir > cfg.tau_bs,
        Err(e) => {
            debug!("trial {trial}: {e}");
            false
        }
    };
    let dr = snap.typical_pair.is_some() && sir_dr_with(&snap, cfg, fader, &mut rng).is_ok_and(|sir| sir > cfg.tau_dr);
    let typical_cell = usize::from(snap.typical_user.is_some_and(|u| snap.cellular_resources[u].is_some()));
    let typical_d2d = usize::from(snap.typical_pair.is_some());
    Tally {
        bs: bs as u64,
        dr: dr as u64,
        cell: (snap.active_cellular() - typical_cell) as u64,
        d2d: (snap.active_d2d() - typical_d2d) as u64,
    }
}

/// Runs `trials` independent snapshots. Results depend only on
/// `(cfg, opts, trials, seed)`, not on the number of worker threads.
pub fn estimate(cfg: &NetworkConfig, opts: &SimOptions, trials: u64, seed: u64) -> Result<McRun> {
    cfg.validate()?;
    if trials == 0 {
        return Err(Error::Config("at least one trial is required".into()));
    }
    let half = window_halfwidth(cfg, opts.window_factor);
    let fader = Fader::new(cfg, opts.fading);
    let t = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(cfg, &fader, half, seed, i))
        .reduce(Tally::default, |a, b| a + b);

    let cellular = McEstimate::from_counts(t.bs, trials);
    let d2d = McEstimate::from_counts(t.dr, trials);
    let area = 4.0 * half * half;
    let dens_c = t.cell as f64 / (trials as f64 * area);
    let dens_d = t.d2d as f64 / (trials as f64 * area);
    let ase_cellular = dens_c * cellular.p_hat * cfg.tau_bs.ln_1p();
    let ase_d2d = dens_d * d2d.p_hat * cfg.tau_dr.ln_1p();
    let report = CoverageReport {
        cp_cellular: cellular.p_hat,
        cp_d2d: d2d.p_hat,
        ase_cellular,
        ase_d2d,
        ase_total: ase_cellular + ase_d2d,
        provenance: Provenance::MonteCarlo,
        ci_cellular: cellular.ci_halfwidth,
        ci_d2d: d2d.ci_halfwidth,
    };
    Ok(McRun { cellular, d2d, active_cellular: t.cell, active_d2d: t.d2d, window_area: area, report })
}

pub fn estimate_coverage(cfg: &NetworkConfig, trials: u64, seed: u64) -> Result<CoverageReport> {
    Ok(estimate(cfg, &SimOptions::default(), trials, seed)?.report)
}

/// Sample mean and standard error of a per-snapshot quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleMean {
    pub mean: f64,
    pub std_error: f64,
}

impl SampleMean {
    fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0).max(1.0);
        Self { mean, std_error: (var / n).sqrt() }
    }
}

/// Active transmitters per resource per m², from snapshots without typical links.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActiveDensity {
    pub cellular_per_resource: SampleMean,
    pub d2d_per_resource: SampleMean,
}

pub fn estimate_active_density(cfg: &NetworkConfig, snapshots: u64, seed: u64) -> Result<ActiveDensity> {
    cfg.validate()?;
    let half = window_halfwidth(cfg, DEFAULT_WINDOW_FACTOR);
    let ((c_lo, c_hi), (d_lo, d_hi)) = pools(cfg);
    let area = 4.0 * half * half;
    let samples: Vec<(f64, f64)> = (0..snapshots)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let mut snap = sample_points(cfg, &mut rng, half, seed, false);
            allocate_in_place(&mut snap, cfg, &mut rng);
            (
                snap.active_cellular() as f64 / (area * (c_hi - c_lo) as f64),
                snap.active_d2d() as f64 / (area * (d_hi - d_lo) as f64),
            )
        })
        .collect();
    let (c, d): (Vec<f64>, Vec<f64>) = samples.into_iter().unzip();
    Ok(ActiveDensity {
        cellular_per_resource: SampleMean::from_samples(&c),
        d2d_per_resource: SampleMean::from_samples(&d),
    })
}
