//! Finite Weil (metaplectic) model of the `SL(2,Z)` action on the
//! level-`k` theta space.
//!
//! The generators act by the finite Fourier matrix and the Gauss-phase
//! diagonal,
//!
//! ```text
//! (ρ_S)_{jl} = k^{−1/2} exp(−2πi jl / k),      (ρ_T)_{jl} = δ_{jl} exp(πi j²/k),
//! ```
//!
//! a projective representation: relations hold up to global phases, and
//! all measured quantities live in the conjugation action where those
//! phases cancel. Odd levels carry extra metaplectic sign subtleties;
//! [`metaplectic_safe`] reports whether a level is in the clean (even)
//! regime. Sweeps default to even `k`; odd `k` is permitted but flagged.

use crate::error::{Error, Result};
use crate::theta::{GeneratorWord, Letter};
use crate::{C64, CMatrix};
use std::f64::consts::PI;

/// Whether level `k` avoids the odd-level metaplectic sign subtleties.
pub fn metaplectic_safe(k: u32) -> bool {
    k % 2 == 0
}

/// The pair `(ρ_S, ρ_T)`, both unitary.
pub fn weil_matrices(k: u32) -> Result<(CMatrix, CMatrix)> {
    if k < 2 {
        return Err(Error::Domain(format!(
            "Weil conjugation action needs k >= 2, got k={k}"
        )));
    }
    let kd = k as usize;
    let scale = 1.0 / (k as f64).sqrt();
    let s = CMatrix::from_fn(kd, kd, |j, l| {
        C64::from_polar(scale, -2.0 * PI * (j as f64) * (l as f64) / k as f64)
    });
    let t = CMatrix::from_fn(kd, kd, |j, l| {
        if j == l {
            C64::from_polar(1.0, PI * (j as f64) * (j as f64) / k as f64)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    Ok((s, t))
}

/// Weil matrix of a word in `S`, `T` (same letter order as the word).
pub fn weil_word(k: u32, word: &GeneratorWord) -> Result<CMatrix> {
    let (s, t) = weil_matrices(k)?;
    let mut m = CMatrix::identity(k as usize, k as usize);
    for l in &word.letters {
        m = m * match l {
            Letter::S => &s,
            Letter::T => &t,
        };
    }
    Ok(m)
}
