//! Verlinde dimension counts.
//!
//! Two distinct quantities live here and are never conflated: the twisted
//! dimension `d_g(k)` given by the alternating sine sum (nonvanishing, needs
//! genus >= 2), and the standard S-matrix character sum for the untwisted
//! SU(2) theory (vanishes for odd boundary labels). Both are evaluated
//! generically over [`Real`] so an integrality failure in `f64` can retry
//! once in double-double arithmetic.

use crate::error::{Error, Result};
use crate::scalar::{wide_to_u128, Real};
use twofloat::TwoFloat;

/// Integrality tolerance: the pre-rounding value must be this close to an
/// integer for the result to be accepted.
pub const INTEGRALITY_TOL: f64 = 1e-6;

/// Largest magnitude at which the plain `f64` route is trusted; above this
/// the spacing of representable doubles exceeds the tolerance budget.
const F64_EXACT_LIMIT: f64 = 4.5e15;

/// Genus and level pair indexing every dimension computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GenusLevel {
    pub g: u32,
    pub k: u32,
}

impl GenusLevel {
    pub fn new(g: u32, k: u32) -> Result<Self> {
        if g < 1 || k < 1 {
            return Err(Error::Domain(format!(
                "genus and level must both be >= 1, got g={g}, k={k}"
            )));
        }
        Ok(Self { g, k })
    }
}

/// Twisted Verlinde sum evaluated in scalar type `S`:
/// `(k+1)^{g-1} * sum_{j=1}^{2k+1} (-1)^{j+1} sin(pi j / 2(k+1))^{2-2g}`.
pub fn twisted_sum<S: Real>(g: u32, k: u32) -> S {
    let kk = S::from_u32(k + 1).unwrap();
    let pi = S::pi();
    let exponent = 2 - 2 * g as i32;
    let mut sum = S::zero();
    for j in 1..=(2 * k + 1) {
        let angle = (pi * S::from_u32(j).unwrap()).div_exact(S::from_u32(2).unwrap() * kk);
        let term = angle.sin().powi(exponent);
        if j % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    kk.powi(g as i32 - 1) * sum
}

/// Untwisted S-matrix character sum
/// `sum_a (S_{0a})^{2-2g} * S_{la}/S_{0a}` with
/// `S_{ab} = sqrt(2/(k+2)) sin((a+1)(b+1)pi/(k+2))`.
pub fn untwisted_sum<S: Real>(g: u32, k: u32, label: u32) -> S {
    let n = S::from_u32(k + 2).unwrap();
    let pi = S::pi();
    let norm = S::from_u32(2).unwrap().div_exact(n).sqrt();
    let mut sum = S::zero();
    for a in 0..=k {
        let s0a = norm * (pi * S::from_u32(a + 1).unwrap()).div_exact(n).sin();
        let sla = norm
            * (pi * S::from_u32((label + 1) * (a + 1)).unwrap()).div_exact(n).sin();
        sum += s0a.powi(2 - 2 * g as i32) * sla.div_exact(s0a);
    }
    sum
}

fn certify_integer(fast: f64, retry: impl Fn() -> TwoFloat, what: &str, tol: f64) -> Result<u128> {
    let rounded = fast.round();
    if fast.abs() < F64_EXACT_LIMIT && (fast - rounded).abs() < tol {
        return Ok(rounded as u128);
    }
    // One-step escalation to double-double.
    let wide = retry();
    let defect = (wide - wide.round()).abs();
    if defect.hi() < tol {
        wide_to_u128(wide).ok_or_else(|| {
            Error::Precision(format!("{what}: value does not fit an unsigned integer"))
        })
    } else {
        Err(Error::Precision(format!(
            "{what}: residual {:.3e} from nearest integer exceeds {tol:e} \
             even in double-double arithmetic",
            defect.hi()
        )))
    }
}

/// Twisted Verlinde dimension `d_g(k)`. Requires genus >= 2.
pub fn twisted_dim(gl: GenusLevel) -> Result<u128> {
    twisted_dim_with(gl, INTEGRALITY_TOL)
}

/// [`twisted_dim`] with an explicit integrality tolerance.
pub fn twisted_dim_with(gl: GenusLevel, tol: f64) -> Result<u128> {
    if gl.g < 2 {
        return Err(Error::Domain(format!(
            "twisted Verlinde formula requires g >= 2, got g={}",
            gl.g
        )));
    }
    certify_integer(
        twisted_sum::<f64>(gl.g, gl.k),
        || twisted_sum::<TwoFloat>(gl.g, gl.k),
        "twisted_dim",
        tol,
    )
}

/// Untwisted SU(2) dimension via the S-matrix, with an optional boundary
/// label in `{0..k}`. May legitimately be zero for odd labels.
pub fn untwisted_dim(gl: GenusLevel, boundary_label: Option<u32>) -> Result<u128> {
    untwisted_dim_with(gl, boundary_label, INTEGRALITY_TOL)
}

/// [`untwisted_dim`] with an explicit integrality tolerance.
pub fn untwisted_dim_with(gl: GenusLevel, boundary_label: Option<u32>, tol: f64) -> Result<u128> {
    let label = boundary_label.unwrap_or(0);
    if label > gl.k {
        return Err(Error::Domain(format!(
            "boundary label {label} outside {{0..{}}}",
            gl.k
        )));
    }
    certify_integer(
        untwisted_sum::<f64>(gl.g, gl.k, label),
        || untwisted_sum::<TwoFloat>(gl.g, gl.k, label),
        "untwisted_dim",
        tol,
    )
}

/// Dimension of the traceless endomorphism space, `d_g(k)^2 - 1`.
pub fn endo0_dim(gl: GenusLevel) -> Result<u128> {
    let d = twisted_dim(gl)?;
    Ok(d * d - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gl(g: u32, k: u32) -> GenusLevel {
        GenusLevel::new(g, k).unwrap()
    }

    #[test]
    fn twisted_spot_values() {
        // 3-term sums checked by hand: 2*(2-1+2), 3*(4-4/3+1-4/3+4), 4*(4-1+4).
        assert_eq!(twisted_dim(gl(2, 1)).unwrap(), 6);
        assert_eq!(twisted_dim(gl(2, 2)).unwrap(), 19);
        assert_eq!(twisted_dim(gl(3, 1)).unwrap(), 28);
    }

    #[test]
    fn twisted_rejects_genus_one() {
        assert!(matches!(twisted_dim(gl(1, 4)), Err(Error::Domain(_))));
    }

    #[test]
    fn untwisted_torus_counts_labels() {
        for k in 1..=12 {
            assert_eq!(untwisted_dim(gl(1, k), None).unwrap(), (k + 1) as u128);
        }
    }

    #[test]
    fn untwisted_genus_two_level_one() {
        assert_eq!(untwisted_dim(gl(2, 1), None).unwrap(), 4);
        // Odd boundary label is parity-obstructed.
        assert_eq!(untwisted_dim(gl(2, 1), Some(1)).unwrap(), 0);
    }

    #[test]
    fn label_out_of_range_is_domain_error() {
        assert!(matches!(
            untwisted_dim(gl(2, 1), Some(2)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn endo0_matches_square_minus_one() {
        assert_eq!(endo0_dim(gl(2, 1)).unwrap(), 35);
        assert_eq!(endo0_dim(gl(3, 1)).unwrap(), 28 * 28 - 1);
    }

    #[test]
    fn integrality_holds_across_grid() {
        // Both counts certify as integers over the full supported grid,
        // including values far beyond 2^53 where escalation must kick in.
        for g in 2..=6 {
            for k in 1..=40 {
                let d = twisted_dim(gl(g, k)).unwrap();
                assert!(d > 0, "twisted d must be positive at g={g}, k={k}");
                let u = untwisted_dim(gl(g, k), None).unwrap();
                assert!(u > 0, "untwisted dim must be positive at g={g}, k={k}");
            }
        }
        for k in 1..=40 {
            assert!(untwisted_dim(gl(1, k), None).unwrap() > 0);
        }
    }

    #[test]
    fn escalation_agrees_with_f64_at_small_size() {
        let fast = twisted_sum::<f64>(2, 5);
        let wide = twisted_sum::<TwoFloat>(2, 5);
        assert!((fast - wide.to_f64()).abs() < 1e-9);
    }
}
