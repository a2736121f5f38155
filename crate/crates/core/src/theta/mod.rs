//! Genus-one abelian model: level-`k` theta functions on the torus.
//!
//! The moduli space here is the 2-torus `M = R²/Z²` with coordinates
//! `(a, b)` and symplectic form `k · da ∧ db` at level `k`. For a modular
//! parameter `τ` in the upper half-plane the complex coordinate is
//! `z = a + τ b` and the quantum space is the `k`-dimensional span of the
//! level-`k` theta functions
//!
//! ```text
//! θ_j(z, τ) = Σ_{n ∈ Z} exp(πik·τ·(n + j/k)² + 2πik·(n + j/k)·z),
//! ```
//!
//! `j = 0, …, k−1`, with Hermitian metric weight `exp(−2πk (Im z)²/Im τ)`
//! and area form `da db` on `[0,1)²`.
//!
//! Internally all integrals and cross-`τ` comparisons are done through
//! the *unitary gauge* values `F_j = e^{iπkτb²} θ_j(a+τb, τ)`, whose
//! quasi-periodicity phases (`F(a+1,b) = F(a,b)`,
//! `F(a,b+1) = e^{−2πika} F(a,b)`) do not depend on `τ`. This makes the
//! theta frames at different modular parameters sections of one fixed
//! Hermitian bundle, so parallel transport of endomorphism matrices in
//! the orthonormal theta frame is the identity — the heat-equation
//! covariant-constant frame is the theta basis up to a `τ`-dependent
//! scalar, and scalars cancel on endomorphisms.

pub mod coherent;
pub mod quadrature;
pub mod series;
pub mod weil;

use crate::error::{Error, Result};
use crate::{C64, CMatrix, CVector};

/// Smallest admitted `Im τ`; the working region of every evaluator.
pub const MIN_IM_TAU: f64 = 0.1;

/// Modular parameter `τ = re + i·im` in the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModularParameter {
    pub re: f64,
    pub im: f64,
}

impl ModularParameter {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !(re.is_finite() && im.is_finite()) || im < MIN_IM_TAU {
            return Err(Error::Domain(format!(
                "modular parameter {re}+{im}i outside working region Im tau >= {MIN_IM_TAU}"
            )));
        }
        Ok(Self { re, im })
    }

    pub fn as_complex(self) -> C64 {
        C64::new(self.re, self.im)
    }
}

/// Point on the torus with coordinates reduced mod 1; embeds as
/// `z = a + τ·b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusPoint {
    pub a: f64,
    pub b: f64,
}

fn frac(x: f64) -> f64 {
    let y = x - x.floor();
    // x slightly below an integer can round up to 1.0.
    if y >= 1.0 { y - 1.0 } else { y }
}

impl TorusPoint {
    pub fn new(a: f64, b: f64) -> Self {
        Self { a: frac(a), b: frac(b) }
    }
}

/// Coefficient vector in the orthonormal theta frame at `(k, τ)`.
#[derive(Debug, Clone)]
pub struct ThetaVector {
    pub k: u32,
    pub tau: ModularParameter,
    pub coeffs: CVector,
}

/// `k × k` matrix in the orthonormal theta frame at `(k, τ)`.
#[derive(Debug, Clone)]
pub struct ThetaFrameOperator {
    pub k: u32,
    pub tau: ModularParameter,
    pub matrix: CMatrix,
    /// Set when the construction guarantees Hermiticity.
    pub hermitian: bool,
}

impl ThetaFrameOperator {
    /// Hilbert–Schmidt (Frobenius) norm.
    pub fn hs_norm(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Rank-one coherent-state projector `E_x` with its source point.
#[derive(Debug, Clone)]
pub struct ProjectorSection {
    pub op: ThetaFrameOperator,
    pub source: TorusPoint,
}

/// Integer matrix `(a b; c d)` with `ad − bc = 1`, acting on the torus
/// and (projectively, through the Weil matrices) on the theta space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModularMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl ModularMatrix {
    pub const IDENTITY: Self = Self { a: 1, b: 0, c: 0, d: 1 };
    /// `S = (0 −1; 1 0)`.
    pub const S: Self = Self { a: 0, b: -1, c: 1, d: 0 };
    /// `T = (1 1; 0 1)`.
    pub const T: Self = Self { a: 1, b: 1, c: 0, d: 1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(Error::Domain(format!(
                "matrix ({a},{b};{c},{d}) has determinant {} != 1",
                a * d - b * c
            )));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn compose(self, rhs: Self) -> Self {
        Self {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }

    /// Möbius action `τ ↦ (aτ + b)/(cτ + d)` on the upper half-plane.
    pub fn moebius(self, tau: ModularParameter) -> Result<ModularParameter> {
        let t = tau.as_complex();
        let num = C64::new(self.a as f64, 0.0) * t + C64::new(self.b as f64, 0.0);
        let den = C64::new(self.c as f64, 0.0) * t + C64::new(self.d as f64, 0.0);
        let r = num / den;
        ModularParameter::new(r.re, r.im)
    }

    /// Action on torus points: `γ` applied to the column `(a, b)`, mod 1.
    pub fn act_point(self, x: TorusPoint) -> TorusPoint {
        TorusPoint::new(
            self.a as f64 * x.a + self.b as f64 * x.b,
            self.c as f64 * x.a + self.d as f64 * x.b,
        )
    }
}

/// Word in the generators `S`, `T`, applied left-to-right as written
/// (so "TS" means the matrix product `T·S`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorWord {
    pub letters: Vec<Letter>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    S,
    T,
}

impl GeneratorWord {
    /// Parse a word like `"S"`, `"T"`, `"TS"`, `"STTS"`; empty string or
    /// `"I"` is the identity.
    pub fn parse(word: &str) -> Result<Self> {
        if word == "I" || word.is_empty() {
            return Ok(Self { letters: vec![] });
        }
        let mut letters = Vec::new();
        for ch in word.chars() {
            match ch {
                'S' | 's' => letters.push(Letter::S),
                'T' | 't' => letters.push(Letter::T),
                _ => {
                    return Err(Error::Domain(format!(
                        "generator word may only contain S and T, got {word:?}"
                    )));
                }
            }
        }
        Ok(Self { letters })
    }

    pub fn matrix(&self) -> ModularMatrix {
        self.letters.iter().fold(ModularMatrix::IDENTITY, |acc, l| {
            acc.compose(match l {
                Letter::S => ModularMatrix::S,
                Letter::T => ModularMatrix::T,
            })
        })
    }
}

impl std::fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "I");
        }
        for l in &self.letters {
            write!(f, "{}", if *l == Letter::S { 'S' } else { 'T' })?;
        }
        Ok(())
    }
}

/// The `m²` points of exact order dividing `m`, closed under the
/// `SL(2,Z)` action.
#[derive(Debug, Clone)]
pub struct TorsionSet {
    pub m: u32,
    pub points: Vec<TorusPoint>,
}

/// All `m²` torsion points `(p/m, q/m)`.
pub fn torsion_set(m: u32) -> Result<TorsionSet> {
    if m < 2 {
        return Err(Error::Domain(format!("torsion order must be >= 2, got {m}")));
    }
    let mut points = Vec::with_capacity((m * m) as usize);
    for p in 0..m {
        for q in 0..m {
            points.push(TorusPoint::new(p as f64 / m as f64, q as f64 / m as f64));
        }
    }
    Ok(TorsionSet { m, points })
}

impl TorsionSet {
    /// Exact set-closure under a modular matrix: every image lands back
    /// on a member (up to floating round-off in the mod-1 reduction).
    pub fn is_closed_under(&self, gamma: ModularMatrix) -> bool {
        self.points.iter().all(|&x| {
            let y = gamma.act_point(x);
            self.points.iter().any(|&p| {
                let da = (p.a - y.a).abs();
                let db = (p.b - y.b).abs();
                da.min(1.0 - da) < 1e-9 && db.min(1.0 - db) < 1e-9
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_point_reduces_mod_one() {
        let x = TorusPoint::new(1.5, -0.25);
        assert!((x.a - 0.5).abs() < 1e-15);
        assert!((x.b - 0.75).abs() < 1e-15);
    }

    #[test]
    fn working_region_enforced() {
        assert!(ModularParameter::new(0.0, 0.05).is_err());
        assert!(ModularParameter::new(0.5, 1.0).is_ok());
    }

    #[test]
    fn s_and_t_generate_det_one() {
        let g = GeneratorWord::parse("TSST").unwrap().matrix();
        assert_eq!(g.a * g.d - g.b * g.c, 1);
    }

    #[test]
    fn moebius_s_at_i_is_i() {
        let tau = ModularParameter::new(0.0, 1.0).unwrap();
        let r = ModularMatrix::S.moebius(tau).unwrap();
        assert!(r.re.abs() < 1e-15 && (r.im - 1.0).abs() < 1e-15);
    }

    #[test]
    fn torsion_set_m2_examples() {
        let x = torsion_set(2).unwrap();
        assert_eq!(x.points.len(), 4);
        // S sends (1/2, 0) to (0, 1/2); T sends (1/2, 1/2) to (0, 1/2).
        let s = ModularMatrix::S.act_point(TorusPoint::new(0.5, 0.0));
        assert!((s.a - 0.0).abs() < 1e-15 && (s.b - 0.5).abs() < 1e-15);
        let t = ModularMatrix::T.act_point(TorusPoint::new(0.5, 0.5));
        assert!((t.a - 0.0).abs() < 1e-15 && (t.b - 0.5).abs() < 1e-15);
        assert!(x.is_closed_under(ModularMatrix::S));
        assert!(x.is_closed_under(ModularMatrix::T));
    }

    #[test]
    fn torsion_rejects_m_below_two() {
        assert!(torsion_set(1).is_err());
    }
}
