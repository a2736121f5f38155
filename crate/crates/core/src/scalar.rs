//! Scalar abstraction over the real types the evaluators run in.
//!
//! The trigonometric dimension sums are evaluated generically so the same
//! code path serves both the fast double route and the double-double
//! escalation route used when integrality cannot be certified in `f64`.

use num_traits::{FromPrimitive, NumAssign, Signed};
use twofloat::TwoFloat;

/// Real scalar with the handful of transcendental operations the
/// evaluators need. Implemented for `f32`, `f64` and [`TwoFloat`].
pub trait Real:
    Copy + PartialOrd + NumAssign + Signed + FromPrimitive + std::fmt::Debug
{
    fn pi() -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sqrt(self) -> Self;
    fn powi(self, n: i32) -> Self;
    fn round(self) -> Self;
    fn to_f64(self) -> f64;
    /// Full-precision division. The `Div` operator of the double-double
    /// type only reaches ~double accuracy (see [`dd_div`]), so generic
    /// code must divide through this hook instead of `/`.
    fn div_exact(self, rhs: Self) -> Self;
}

macro_rules! impl_real_for_float {
    ($t:ty) => {
        impl Real for $t {
            fn pi() -> Self {
                std::f64::consts::PI as $t
            }
            fn sin(self) -> Self {
                <$t>::sin(self)
            }
            fn cos(self) -> Self {
                <$t>::cos(self)
            }
            fn sqrt(self) -> Self {
                <$t>::sqrt(self)
            }
            fn powi(self, n: i32) -> Self {
                <$t>::powi(self, n)
            }
            fn round(self) -> Self {
                <$t>::round(self)
            }
            fn to_f64(self) -> f64 {
                self as f64
            }
            fn div_exact(self, rhs: Self) -> Self {
                self / rhs
            }
        }
    };
}

impl_real_for_float!(f32);
impl_real_for_float!(f64);

/// Full-precision double-double division by three-step long division.
///
/// The crate's `TwoFloat / TwoFloat` operator (and `recip`, hence
/// negative `powi`) computes its Newton residual `1 − b·th` without an
/// FMA, so the correction term is destroyed by rounding and the
/// quotient carries only ~double accuracy. Each step below forms the
/// remainder with the accurate `TwoFloat × f64` product, so three f64
/// quotient digits recover the full ~106-bit result.
fn dd_div(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q1 = a.hi() / b.hi();
    let r1 = a - b * q1;
    let q2 = r1.hi() / b.hi();
    let r2 = r1 - b * q2;
    let q3 = r2.hi() / b.hi();
    TwoFloat::new_add(q1, q2) + q3
}

/// Double-double sine by quadrant reduction and a Taylor kernel on
/// `[-pi/4, pi/4]`.
///
/// The library `TwoFloat::sin` only delivers ~double accuracy, which
/// defeats the purpose of the escalation route: a relative error of
/// 1e-16 in a sine that is then raised to the -10th power and scaled to
/// 1e22 leaves an absolute residual far above the integrality
/// tolerance. The arithmetic kernel below keeps the full ~1e-32
/// relative accuracy of the representation.
fn dd_sin_cos(x: TwoFloat) -> (TwoFloat, TwoFloat) {
    // reduce by multiplying with 2/pi rather than dividing (see dd_div)
    let q_real = (x * twofloat::consts::FRAC_2_PI).round();
    let r = x - q_real * twofloat::consts::FRAC_PI_2;
    let quadrant = (q_real.hi() as i64).rem_euclid(4);
    let r2 = r * r;
    // |r| <= pi/4: 20 terms push the truncation error below 2^-107.
    // Divisors are exact small integers, so the accurate
    // `TwoFloat / f64` route applies.
    let mut sin_r = r;
    let mut term = r;
    for i in 1..=20u32 {
        term *= -r2;
        term /= (2 * i * (2 * i + 1)) as f64;
        sin_r += term;
    }
    let mut cos_r = TwoFloat::from(1.0);
    term = TwoFloat::from(1.0);
    for i in 1..=20u32 {
        term *= -r2;
        term /= ((2 * i - 1) * (2 * i)) as f64;
        cos_r += term;
    }
    match quadrant {
        0 => (sin_r, cos_r),
        1 => (cos_r, -sin_r),
        2 => (-sin_r, -cos_r),
        _ => (-cos_r, sin_r),
    }
}

impl Real for TwoFloat {
    fn pi() -> Self {
        twofloat::consts::PI
    }
    fn sin(self) -> Self {
        dd_sin_cos(self).0
    }
    fn cos(self) -> Self {
        dd_sin_cos(self).1
    }
    fn sqrt(self) -> Self {
        TwoFloat::sqrt(self)
    }
    fn powi(self, n: i32) -> Self {
        // square-and-multiply over the accurate product; the crate's
        // powi routes negative exponents through its inaccurate recip
        if n == 0 {
            return TwoFloat::from(1.0);
        }
        let mut result = TwoFloat::from(1.0);
        let mut base = self;
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result *= base;
            }
            base *= base;
            e >>= 1;
        }
        if n < 0 {
            dd_div(TwoFloat::from(1.0), result)
        } else {
            result
        }
    }
    fn round(self) -> Self {
        TwoFloat::round(self)
    }
    fn to_f64(self) -> f64 {
        self.hi() + self.lo()
    }
    fn div_exact(self, rhs: Self) -> Self {
        dd_div(self, rhs)
    }
}

/// Convert a value known to be (near) a nonnegative integer to `u128`.
///
/// Splits through the double-double representation so integers above
/// 2^53 survive the conversion exactly.
pub fn wide_to_u128(x: TwoFloat) -> Option<u128> {
    let r = x.round();
    let hi = r.hi();
    let lo = r.lo();
    if !hi.is_finite() || hi < -0.5 {
        return None;
    }
    let total = hi as i128 + lo.round() as i128;
    u128::try_from(total).ok()
}
