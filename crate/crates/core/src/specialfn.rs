//! Special functions behind the closed forms: the Gauss hypergeometric
//! function on the negative real axis, the cell-load distribution of a
//! Poisson-Voronoi tessellation, and the SCMA fading product.

use log::debug;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Shape constant of the Gamma approximation to the normalized
/// Poisson-Voronoi cell area.
pub const VORONOI_SHAPE: f64 = 3.575;

const HYP2F1_TOL: f64 = 1e-16;
const HYP2F1_MAX_TERMS: usize = 2_000_000;

/// Arguments of `₂F₁(a, b; c; z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp2F1Args {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub z: f64,
}

impl Hyp2F1Args {
    pub fn new(a: f64, b: f64, c: f64, z: f64) -> Self {
        Self { a, b, c, z }
    }
}

fn is_non_positive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// Gauss hypergeometric function `₂F₁(a, b; c; z)` for real `z ≤ 0`.
///
/// The Gauss series is summed directly for `-1 < z ≤ 0`. For `z ≤ -1` the
/// Pfaff transformation maps the argument to `w = z / (z - 1) ∈ [1/2, 1)`,
/// using whichever of the two Pfaff forms has the faster-decaying terms.
pub fn hyp2f1(args: Hyp2F1Args) -> Result<f64> {
    let Hyp2F1Args { a, b, c, z } = args;
    if !(a.is_finite() && b.is_finite() && c.is_finite() && z.is_finite()) {
        return Err(Error::Domain(format!("non-finite argument in 2F1{:?}", (a, b, c, z))));
    }
    if is_non_positive_integer(c) {
        return Err(Error::Domain(format!("2F1 undefined for c = {c}")));
    }
    if z > 0.0 {
        return Err(Error::Domain(format!("2F1 only implemented for z <= 0, got {z}")));
    }
    if a == 0.0 || b == 0.0 || z == 0.0 {
        return Ok(1.0);
    }
    if z > -1.0 {
        return gauss_series(a, b, c, z);
    }

    let w = z / (z - 1.0);
    // Pfaff: 2F1(a,b;c;z) = (1-z)^-a 2F1(a, c-b; c; w) = (1-z)^-b 2F1(c-a, b; c; w).
    // Terms of 2F1(p,q;c;w) decay like n^(p+q-c-1) w^n, so prefer the smaller p+q.
    let via_a = (a, c - b, -a);
    let via_b = (c - a, b, -b);
    let terminates = |(p, q, _): (f64, f64, f64)| is_non_positive_integer(p) || is_non_positive_integer(q);
    let (p, q, power) = if terminates(via_a) {
        via_a
    } else if terminates(via_b) {
        via_b
    } else if via_a.0 + via_a.1 <= via_b.0 + via_b.1 {
        via_a
    } else {
        via_b
    };
    Ok((1.0 - z).powf(power) * gauss_series(p, q, c, w)?)
}

/// Plain Gauss series; `|z| < 1` assumed.
fn gauss_series(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let mut sum = 1.0;
    let mut term = 1.0;
    for n in 0..HYP2F1_MAX_TERMS {
        let nf = n as f64;
        let ratio = (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0));
        term *= ratio * z;
        if term == 0.0 {
            return Ok(sum);
        }
        sum += term;
        // Once the term ratio has settled below one, the tail is bounded by a
        // geometric series with that ratio.
        let next = ((a + nf + 1.0) * (b + nf + 1.0) / ((c + nf + 1.0) * (nf + 2.0)) * z).abs();
        if next < 1.0 {
            let tail = term.abs() * next / (1.0 - next);
            if tail <= HYP2F1_TOL * sum.abs().max(1.0) {
                return Ok(sum);
            }
        }
    }
    Err(Error::NonConvergence { iterations: HYP2F1_MAX_TERMS, last_term: term })
}

/// `P{N_U = m}` for the number of users in a Poisson-Voronoi cell with mean
/// `mean_load`, evaluated in log-space.
pub fn cell_load_pmf(mean_load: f64, m: usize) -> f64 {
    CellLoadPmf::new(mean_load).pmf(m)
}

/// Truncated cell-load distribution for a fixed mean load.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellLoadPmf {
    pub mean_load: f64,
    pub shape_b: f64,
    pub truncation_m_max: usize,
}

impl CellLoadPmf {
    pub fn new(mean_load: f64) -> Self {
        assert!(mean_load >= 0.0 && mean_load.is_finite(), "mean load must be finite and >= 0");
        let b = VORONOI_SHAPE;
        let spread = (mean_load * (1.0 + mean_load / b)).sqrt();
        let m_max = (mean_load + 40.0 * spread + 50.0).ceil() as usize;
        Self { mean_load, shape_b: b, truncation_m_max: m_max }
    }

    pub fn ln_pmf(&self, m: usize) -> f64 {
        let b = self.shape_b;
        let mu = self.mean_load;
        if mu == 0.0 {
            return if m == 0 { 0.0 } else { f64::NEG_INFINITY };
        }
        let mf = m as f64;
        b * b.ln() + ln_gamma(mf + b) - ln_gamma(b) - ln_gamma(mf + 1.0) + mf * mu.ln()
            - (mf + b) * (b + mu).ln()
    }

    pub fn pmf(&self, m: usize) -> f64 {
        self.ln_pmf(m).exp()
    }

    /// Probability masses for `m = 0..=m_max`.
    pub fn masses(&self) -> Vec<f64> {
        (0..=self.truncation_m_max).map(|m| self.pmf(m)).collect()
    }

    /// Mass lost by truncating at `m_max`; errors if it exceeds `1e-9`.
    pub fn check_residual(&self, masses: &[f64]) -> Result<()> {
        let total: f64 = masses.iter().sum();
        let residual = 1.0 - total;
        if residual > 1e-9 {
            return Err(Error::Truncation { residual, m_max: self.truncation_m_max });
        }
        debug!("cell-load pmf mean {} truncated at {} (residual {residual:e})", self.mean_load, self.truncation_m_max);
        Ok(())
    }
}

/// `∏_{n=2}^{N_C} (2 / ((n-1) α) + 1)`, the fading factor of a Gamma(N_C)
/// distributed interferer; empty product for `n_c ≤ 1`.
pub fn scma_interference_product(n_c: u32, alpha: f64) -> Result<f64> {
    if !(alpha > 2.0) {
        return Err(Error::Domain(format!("path-loss exponent must exceed 2, got {alpha}")));
    }
    Ok((2..=n_c).map(|n| 2.0 / ((n - 1) as f64 * alpha) + 1.0).product())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn hyp2f1_trivial_cases() {
        assert_eq!(hyp2f1(Hyp2F1Args::new(1.3, 0.7, 2.1, 0.0)).unwrap(), 1.0);
        for z in [-0.3, -4.0, -250.0] {
            assert_eq!(hyp2f1(Hyp2F1Args::new(0.0, 0.7, 2.1, z)).unwrap(), 1.0);
            assert_eq!(hyp2f1(Hyp2F1Args::new(2.0, 0.0, 0.5, z)).unwrap(), 1.0);
        }
    }

    #[test]
    fn hyp2f1_arctan_identity() {
        for x in [0.2_f64, 0.9, 1.0, 3.0, 10f64.sqrt(), 30.0] {
            let got = hyp2f1(Hyp2F1Args::new(1.0, 0.5, 1.5, -x * x)).unwrap();
            assert_abs_diff_eq!(got, x.atan() / x, epsilon = 1e-12);
        }
    }

    #[test]
    fn hyp2f1_log_identity() {
        // 2F1(1,1;2;-x) = ln(1+x)/x
        for x in [0.5_f64, 0.99, 1.0, 7.0, 100.0] {
            let got = hyp2f1(Hyp2F1Args::new(1.0, 1.0, 2.0, -x)).unwrap();
            assert_abs_diff_eq!(got, x.ln_1p() / x, epsilon = 1e-12);
        }
    }

    #[test]
    fn hyp2f1_polynomial_case() {
        // b = -2 terminates: 1 + (a b / c) z + a(a+1) b(b+1) / (c(c+1) 2) z^2
        let (a, b, c, z) = (1.5, -2.0, 0.75, -3.0);
        let exact = 1.0 + a * b / c * z + a * (a + 1.0) * b * (b + 1.0) / (c * (c + 1.0) * 2.0) * z * z;
        assert_abs_diff_eq!(hyp2f1(Hyp2F1Args::new(a, b, c, z)).unwrap(), exact, epsilon = 1e-10);
    }

    #[test]
    fn hyp2f1_rejects_bad_arguments() {
        assert!(matches!(hyp2f1(Hyp2F1Args::new(1.0, 1.0, -2.0, -0.5)), Err(Error::Domain(_))));
        assert!(matches!(hyp2f1(Hyp2F1Args::new(1.0, 1.0, 0.0, -0.5)), Err(Error::Domain(_))));
        assert!(matches!(hyp2f1(Hyp2F1Args::new(1.0, 1.0, 2.0, 0.5)), Err(Error::Domain(_))));
        assert!(hyp2f1(Hyp2F1Args::new(f64::NAN, 1.0, 2.0, -0.5)).is_err());
    }

    #[test]
    fn pmf_empty_cell() {
        assert_eq!(cell_load_pmf(0.0, 0), 1.0);
        assert_eq!(cell_load_pmf(0.0, 1), 0.0);
        assert_eq!(cell_load_pmf(0.0, 17), 0.0);
    }

    #[test]
    fn pmf_mass_and_mean() {
        for mu in [0.3, 1.0, 20.0, 600.0, 1e4] {
            let pmf = CellLoadPmf::new(mu);
            let masses = pmf.masses();
            pmf.check_residual(&masses).unwrap();
            let mean: f64 = masses.iter().enumerate().map(|(m, p)| m as f64 * p).sum();
            assert!((mean - mu).abs() < 1e-6 * mu.max(1.0), "mean {mean} vs {mu}");
            assert!(masses.iter().all(|&p| (0.0..=1.0).contains(&p)));
        }
    }

    #[test]
    fn interference_product_values() {
        assert_eq!(scma_interference_product(1, 4.0).unwrap(), 1.0);
        assert_eq!(scma_interference_product(0, 4.0).unwrap(), 1.0);
        assert_abs_diff_eq!(scma_interference_product(2, 4.0).unwrap(), 1.5, epsilon = 1e-15);
        assert_abs_diff_eq!(scma_interference_product(4, 4.0).unwrap(), 2.1875, epsilon = 1e-14);
        assert!(scma_interference_product(2, 2.0).is_err());
    }

    #[test]
    fn interference_product_monotone() {
        for alpha in [2.5, 3.0, 4.0, 6.0] {
            for n in 2..12 {
                assert!(scma_interference_product(n + 1, alpha).unwrap() > scma_interference_product(n, alpha).unwrap());
                assert!(scma_interference_product(n, alpha + 0.5).unwrap() < scma_interference_product(n, alpha).unwrap());
            }
        }
    }
}
