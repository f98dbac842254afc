//! Test-only oracles. Nothing here calls into the closed forms under test.

#![allow(dead_code)]

use std::f64::consts::PI;

// 15-point Kronrod nodes on [0, 1] of [-1, 1]; the odd-indexed ones carry
// the embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let s = f(c - h * XGK[i]) + f(c + h * XGK[i]);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss-Kronrod on `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn go<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, whole: (f64, f64), depth: u32) -> f64 {
        let (v, err) = whole;
        if err <= tol || depth >= 60 || (b - a) < 1e-300 {
            return v;
        }
        let m = 0.5 * (a + b);
        let left = kronrod(f, a, m);
        let right = kronrod(f, m, b);
        go(f, a, m, tol / 2.0, left, depth + 1) + go(f, m, b, tol / 2.0, right, depth + 1)
    }
    go(&f, a, b, tol, kronrod(&f, a, b), 0)
}

/// `₂F₁(a, b; b+1; z)` from its Euler integral, for `z ≤ 0` and `b > -1`, `b ≠ 0`.
///
/// `b > 0`: `∫₀¹ (1 - z u^{1/b})^{-a} du`.
/// `-1 < b < 0`: `1 + b/(b+1) ∫₀¹ g(u^{1/(b+1)}) du` with `g(t) = ((1 - z t)^{-a} - 1) / t`.
pub fn hyp2f1_b_plus_one(a: f64, b: f64, z: f64) -> f64 {
    let tol = 1e-14;
    if b > 0.0 {
        integrate(|u| (1.0 - z * u.powf(1.0 / b)).powf(-a), 0.0, 1.0, tol)
    } else {
        let g = |t: f64| if t == 0.0 { a * z } else { ((-a * (-z * t).ln_1p()).exp_m1()) / t };
        1.0 + b / (b + 1.0) * integrate(|u| g(u.powf(1.0 / (b + 1.0))), 0.0, 1.0, tol)
    }
}

/// Parameters of the OFDMA underlaid cellular link, with the access
/// probability supplied from outside.
pub struct UplinkModel {
    pub lambda_bs: f64,
    /// Per-tone density of interfering cellular users.
    pub lambda_cell: f64,
    /// Per-tone density of interfering D2D transmitters.
    pub lambda_d2d: f64,
    pub p_u: f64,
    pub p_d: f64,
    pub alpha: f64,
    pub tau: f64,
}

/// `E_r[L_CC(s) L_CD(s)]` with `s = τ r^α / P_U`, where cellular
/// interferers form a PPP outside radius `r` and D2D interferers a PPP on
/// the whole plane; every integral is done numerically.
pub fn uplink_coverage_by_quadrature(m: &UplinkModel) -> f64 {
    let tol = 1e-13;
    // ∫ (1 - 1/(1 + s P x^{-α})) x dx, written in y = x / r and mapped to (0, 1].
    let kernel = |y: f64, ratio: f64| y / (1.0 + y.powf(m.alpha) / (m.tau * ratio));
    // ∫₁^∞ k(y) dy = ∫₀¹ k(1/t) / t² dt
    let tail = |ratio: f64| integrate(|t: f64| if t == 0.0 { 0.0 } else { kernel(1.0 / t, ratio) / (t * t) }, 0.0, 1.0, tol);
    let cell = tail(1.0);
    let d2d = integrate(|y| kernel(y, m.p_d / m.p_u), 0.0, 1.0, tol) + tail(m.p_d / m.p_u);
    // r ~ contact distance: r² = -ln(u) / (π λ_BS).
    integrate(
        |u: f64| {
            if u == 0.0 {
                return 0.0;
            }
            let r2 = -u.ln() / (PI * m.lambda_bs);
            (-2.0 * PI * r2 * (m.lambda_cell * cell + m.lambda_d2d * d2d)).exp()
        },
        0.0,
        1.0,
        1e-12,
    )
}

pub fn read_golden(name: &str) -> Vec<Vec<String>> {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{path}: {e}"))
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| l.split_whitespace().map(str::to_owned).collect())
        .collect()
}
