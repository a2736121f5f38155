//! Genus-one modular data: the `(k+1)`-dimensional `S` and `T`
//! matrices.

use crate::error::Result;
use crate::su2::root::RootData;
use crate::su2::RepMatrix;
use crate::{C64, CMatrix};
use std::f64::consts::PI;

/// `S_{ab} = sqrt(2/(k+2))·sin((a+1)(b+1)π/(k+2))` and `T = diag(μ_a)`
/// (the twist diagonal; a global phase is free) on the torus space.
pub fn genus1_rep(k: u32) -> Result<(RepMatrix, RepMatrix)> {
    let rd = RootData::new(k)?;
    let n = (k + 2) as f64;
    let dim = (k + 1) as usize;
    let scale = (2.0 / n).sqrt();
    let s = CMatrix::from_fn(dim, dim, |a, b| {
        C64::new(scale * (((a + 1) * (b + 1)) as f64 * PI / n).sin(), 0.0)
    });
    let t = CMatrix::from_fn(dim, dim, |a, b| {
        if a == b { rd.mu(a as u32) } else { C64::new(0.0, 0.0) }
    });
    Ok((
        RepMatrix { label: "S".into(), matrix: s },
        RepMatrix { label: "T".into(), matrix: t },
    ))
}

/// Residual of `L = phase · R` minimized over unimodular phases; returns
/// `(residual, phase)`. The phase modulus is pinned to 1, never fitted.
pub fn best_phase_residual(l: &CMatrix, r: &CMatrix) -> (f64, C64) {
    // ‖L − φR‖² = ‖L‖² + ‖R‖² − 2·Re(φ·⟨L,R⟩) is minimized at
    // φ = conj(⟨L,R⟩)/|⟨L,R⟩|.
    let ip: C64 = l.iter().zip(r.iter()).map(|(x, y)| x.conj() * y).sum();
    let phase = if ip.norm() > 1e-300 { ip.conj() / ip.norm() } else { C64::new(1.0, 0.0) };
    ((l - r * phase).norm(), phase)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_entry_at_level_one() {
        let (s, _) = genus1_rep(1).unwrap();
        // sqrt(2/3)*sin(pi/3) = 1/sqrt(2)
        assert!((s.matrix[(0, 0)].re - 1.0 / 2.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn s_real_symmetric_unitary() {
        for k in 1..=8 {
            let (s, _) = genus1_rep(k).unwrap();
            let m = &s.matrix;
            assert!(m.iter().all(|z| z.im == 0.0));
            assert!((m.transpose() - m).norm() < 1e-12);
            let id = CMatrix::identity(m.nrows(), m.ncols());
            assert!((m.adjoint() * m - id).norm() < 1e-10, "k={k}");
        }
    }

    #[test]
    fn modular_relation_up_to_phase() {
        for k in 1..=8 {
            let (s, t) = genus1_rep(k).unwrap();
            let st = &s.matrix * &t.matrix;
            let lhs = (&st * &st) * &st;
            let rhs = &s.matrix * &s.matrix;
            let (res, phase) = best_phase_residual(&lhs, &rhs);
            assert!((phase.norm() - 1.0).abs() < 1e-12);
            assert!(res < 1e-10, "k={k}: residual {res:e}");
        }
    }
}
