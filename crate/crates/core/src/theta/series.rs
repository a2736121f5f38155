//! Evaluation of the level-`k` theta series and its `z`-derivative.
//!
//! With `t = n + j/k` and `z = a + τb` the summand exponent regroups as
//!
//! ```text
//! πik·τ·t² + 2πik·t·z  =  πik·τ·(t+b)² + 2πik·t·a − πik·τ·b²,
//! ```
//!
//! so the unitary-gauge value `F_j = e^{iπkτb²} θ_j` is the numerically
//! benign sum `Σ_t exp(πikτ(t+b)² + 2πikta)` whose terms have modulus
//! `exp(−πk·Imτ·(t+b)²)`. Truncation keeps `|t + b| ≤ N` with `N` the
//! smallest integer whose Gaussian tail bound is below `TAIL_TOL`.

use crate::C64;
use crate::error::Result;
use crate::theta::{ModularParameter, TorusPoint};
use std::f64::consts::PI;

/// Certified bound on the discarded series tail.
pub const TAIL_TOL: f64 = 1e-14;

/// Smallest integer truncation radius `N` with
/// `2·exp(−πk·im·N²)/(1 − exp(−πk·im)) < TAIL_TOL`.
pub fn truncation_radius(k: u32, im: f64) -> u32 {
    let rate = PI * k as f64 * im;
    let geo = 2.0 / (1.0 - (-rate).exp());
    let mut n = 1u32;
    while geo * (-rate * (n as f64) * (n as f64)).exp() >= TAIL_TOL {
        n += 1;
    }
    n
}

fn cexp(z: C64) -> C64 {
    z.exp()
}

/// Summation core: `Σ_t c(t)·exp(πikτ(t+b)² + 2πikta)` over
/// `t = n + j/k`, `|t + b| ≤ N`, with a per-term prefactor chosen by
/// `deriv` (1 for the value, `2πikt` for the `z`-derivative).
fn unitary_sum(j: u32, k: u32, x: TorusPoint, tau: ModularParameter, deriv: bool) -> C64 {
    let kf = k as f64;
    let shift = j as f64 / kf;
    let n_rad = truncation_radius(k, tau.im) as f64;
    // integer window for n: |n + shift + b| <= N
    let lo = (-n_rad - shift - x.b).floor() as i64;
    let hi = (n_rad - shift - x.b).ceil() as i64;
    let tau_c = tau.as_complex();
    let mut sum = C64::new(0.0, 0.0);
    for n in lo..=hi {
        let t = n as f64 + shift;
        let u = t + x.b;
        if u.abs() > n_rad {
            continue;
        }
        let expo = C64::new(0.0, PI * kf) * tau_c * u * u + C64::new(0.0, 2.0 * PI * kf * t * x.a);
        let mut term = cexp(expo);
        if deriv {
            term *= C64::new(0.0, 2.0 * PI * kf * t);
        }
        sum += term;
    }
    sum
}

/// Unitary-gauge section value `F_j(a,b;τ) = e^{iπkτb²}·θ_j(a+τb, τ)`.
pub fn unitary_value(j: u32, k: u32, x: TorusPoint, tau: ModularParameter) -> C64 {
    unitary_sum(j, k, x, tau, false)
}

/// Unitary-gauge value of the holomorphic derivative,
/// `e^{iπkτb²}·(∂_z θ_j)(a+τb, τ)`.
pub fn unitary_deriv(j: u32, k: u32, x: TorusPoint, tau: ModularParameter) -> C64 {
    unitary_sum(j, k, x, tau, true)
}

/// Raw holomorphic theta value `θ_j(a + τb, τ)`.
///
/// Errors if `τ` is outside the working region (already prevented by
/// [`ModularParameter::new`], kept for direct callers).
pub fn theta_value(j: u32, k: u32, x: TorusPoint, tau: ModularParameter) -> Result<C64> {
    let tau_c = tau.as_complex();
    let back = cexp(-C64::new(0.0, PI * k as f64) * tau_c * x.b * x.b);
    Ok(unitary_value(j, k, x, tau) * back)
}

/// All `k` unitary-gauge values at one point, index `j = 0..k`.
pub fn unitary_values(k: u32, x: TorusPoint, tau: ModularParameter) -> Vec<C64> {
    (0..k).map(|j| unitary_value(j, k, x, tau)).collect()
}
