//! Root-of-unity data: `A`, quantum integers, quantum factorials, and
//! twist scalars.

use crate::C64;
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Cached arithmetic at `A = exp(2πi/4(k+2))`.
///
/// Quantum integers `[n] = (A^{2n} − A^{−2n})/(A² − A^{−2})
/// = sin(nπ/(k+2))/sin(π/(k+2))` are evaluated through the sine ratio
/// (no power-accumulation drift) and cached for `n ≤ 2k+4`, quantum
/// factorials `[n]! = Π_{m≤n} [m]` alongside. Twist scalars
/// `μ_a = (−1)^a A^{a²+2a}` have their angles reduced with integer
/// arithmetic before exponentiation.
#[derive(Debug, Clone)]
pub struct RootData {
    pub k: u32,
    pub a_root: C64,
    qint: Vec<f64>,
    qfact: Vec<f64>,
    mu: Vec<C64>,
}

impl RootData {
    pub fn new(k: u32) -> Result<Self> {
        if k < 1 {
            return Err(Error::Domain("level must be >= 1".into()));
        }
        let n = (k + 2) as f64;
        let a_root = C64::from_polar(1.0, 2.0 * PI / (4.0 * n));
        let s1 = (PI / n).sin();
        let top = (2 * k + 4) as usize;
        let qint: Vec<f64> = (0..=top).map(|m| ((m as f64) * PI / n).sin() / s1).collect();
        let mut qfact = vec![1.0f64; top + 2];
        for m in 1..=top {
            qfact[m] = qfact[m - 1] * qint[m];
        }
        qfact[top + 1] = 0.0; // [k+2] and beyond vanish through the table cap
        let four_n = 4 * (k + 2) as u64;
        let mu = (0..=k)
            .map(|a| {
                let e = ((a as u64) * (a as u64) + 2 * a as u64) % four_n;
                let phase = C64::from_polar(1.0, 2.0 * PI * e as f64 / four_n as f64);
                if a % 2 == 0 { phase } else { -phase }
            })
            .collect();
        Ok(Self { k, a_root, qint, qfact, mu })
    }

    /// Quantum integer `[n]`, `0 ≤ n ≤ 2k+4`.
    pub fn qint(&self, n: u32) -> f64 {
        self.qint[n as usize]
    }

    /// Quantum factorial `[n]!`.
    pub fn qfact(&self, n: u32) -> f64 {
        self.qfact[n as usize]
    }

    /// Signed loop value `Δ_a = (−1)^a [a+1]`.
    pub fn delta(&self, a: u32) -> f64 {
        let v = self.qint[(a + 1) as usize];
        if a % 2 == 0 { v } else { -v }
    }

    /// Twist eigenvalue `μ_a = (−1)^a A^{a²+2a}`.
    pub fn mu(&self, a: u32) -> C64 {
        self.mu[a as usize]
    }

    /// Admissibility of a vertex triple.
    pub fn admissible(&self, a: u32, b: u32, c: u32) -> bool {
        (a + b + c) % 2 == 0
            && a + b >= c
            && b + c >= a
            && c + a >= b
            && a + b + c <= 2 * self.k
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a_root_at_level_one() {
        let rd = RootData::new(1).unwrap();
        let expect = C64::from_polar(1.0, 2.0 * PI / 12.0);
        assert!((rd.a_root - expect).norm() < 1e-15);
    }

    #[test]
    fn qint_basics() {
        let rd = RootData::new(2).unwrap();
        assert!((rd.qint(1) - 1.0).abs() < 1e-15);
        assert!((rd.qint(2) - 2.0f64.sqrt()).abs() < 1e-12); // [2] = 2cos(pi/4)
        // sine-ratio value matches the A-power definition
        let a2 = rd.a_root.powi(2);
        let direct = ((a2.powi(2) - a2.powi(-2)) / (a2 - a2.powi(-1))).re;
        assert!((rd.qint(2) - direct).abs() < 1e-12);
    }

    #[test]
    fn qint_positive_in_admissible_window() {
        for k in 1..=8 {
            let rd = RootData::new(k).unwrap();
            for n in 1..=(k + 1) {
                assert!(rd.qint(n) > 0.0, "[{n}] at k={k}");
            }
            assert!(rd.qint(k + 2).abs() < 1e-12, "[k+2] must vanish");
        }
    }

    #[test]
    fn mu_values() {
        let rd = RootData::new(3).unwrap();
        assert!((rd.mu(0) - C64::new(1.0, 0.0)).norm() < 1e-15);
        for a in 0..=3 {
            assert!((rd.mu(a).norm() - 1.0).abs() < 1e-15);
            // against direct power of A
            let direct = rd.a_root.powi((a * a + 2 * a) as i32)
                * if a % 2 == 0 { 1.0 } else { -1.0 };
            assert!((rd.mu(a) - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn admissibility_examples() {
        let rd = RootData::new(1).unwrap();
        assert!(rd.admissible(1, 1, 0));
        assert!(rd.admissible(0, 0, 0));
        assert!(!rd.admissible(1, 0, 0)); // parity
        assert!(!rd.admissible(1, 1, 2)); // a+b+c > 2k at k=1
    }
}
