//! Genus-two representation: Dehn twists along the five Humphries chain
//! curves `c1, …, c5`.
//!
//! Curve/spine conventions (fixed once; assembly failures are hard
//! errors, never silently repaired):
//!
//! * `c1, c3, c5` are the three pants curves of the theta-graph
//!   decomposition; cutting along them leaves two pairs of pants, and
//!   the twists act *diagonally* on the theta-graph basis `[x1,x3,x5]`
//!   by `μ_{x1}, μ_{x3}, μ_{x5}`.
//! * `c2` (resp. `c4`) meets `c1` and `c3` (resp. `c3` and `c5`) once.
//!   In the dumbbell basis `[a, m, b]` (two one-holed tori with boundary
//!   color `m`, loop colors `a` and `b`) the twist about `c2` acts on
//!   the `a`-handle — blockwise in `(m, b)` — by the conjugate
//!   `Ŝ(m)* · diag(μ) · Ŝ(m)` of the twist diagonal, where `Ŝ(m)` is the
//!   S-matrix of the one-holed torus. The recoupling move `F` (the
//!   unitarized 6j block sending the theta tree to the dumbbell tree)
//!   carries the result back to the theta-graph basis.
//!
//! `Ŝ(m)` is assembled from the joined Hopf pairing `H(a,b;m)` by the
//! norm rescaling `N_a = |θ(a,a,m)|/[a+1]` and a global scale fixed by
//! unitarity; at `m = 0` the norms are all 1 and `Ŝ(0)` is the closed
//! one-torus S-matrix.

use crate::error::{Error, Result};
use crate::su2::basis::admissible_colorings;
use crate::su2::genus1::best_phase_residual;
use crate::su2::nets::{hopf_joined, sixj_unitary, theta_net};
use crate::su2::root::RootData;
use crate::su2::RepMatrix;
use crate::{C64, CMatrix};
use std::collections::HashMap;

/// Unitarity tolerance for assembled basis-change and generator
/// matrices.
pub const UNITARY_TOL: f64 = 1e-8;
/// Disjoint-twist commutators must vanish below this.
pub const COMMUTATION_TOL: f64 = 1e-10;
/// Braid relations must hold below this after a unimodular phase fit.
pub const BRAID_TOL: f64 = 1e-8;

/// Labels `a` with `(a, a, m)` admissible — the one-holed-torus basis.
pub fn punctured_basis(rd: &RootData, m: u32) -> Vec<u32> {
    (0..=rd.k).filter(|&a| rd.admissible(a, a, m)).collect()
}

/// Unitary S-matrix of the one-holed torus with boundary color `m`.
pub fn punctured_s_matrix(rd: &RootData, m: u32) -> Result<CMatrix> {
    let basis = punctured_basis(rd, m);
    let n = basis.len();
    if n == 0 {
        return Err(Error::Domain(format!("no admissible loop colors for boundary {m}")));
    }
    let mut s = CMatrix::zeros(n, n);
    let norms: Vec<f64> = basis
        .iter()
        .map(|&a| Ok(theta_net(rd, a, a, m)?.abs() / rd.qint(a + 1)))
        .collect::<Result<_>>()?;
    for (i, &a) in basis.iter().enumerate() {
        for (j, &b) in basis.iter().enumerate() {
            s[(i, j)] = hopf_joined(rd, a, b, m)? / (norms[i] * norms[j]).sqrt();
        }
    }
    // fix the global scale by unitarity, then verify it
    let g = &s * s.adjoint();
    let alpha = (0..n).map(|i| g[(i, i)].re).sum::<f64>() / n as f64;
    if alpha <= 0.0 {
        return Err(Error::Construction(format!("S({m}) has nonpositive scale {alpha}")));
    }
    let s = s / C64::new(alpha.sqrt(), 0.0);
    let off = (&s * s.adjoint() - CMatrix::identity(n, n)).norm();
    if off > UNITARY_TOL {
        return Err(Error::Construction(format!(
            "punctured S-matrix at boundary {m} not unitary: residual {off:e}"
        )));
    }
    Ok(s)
}

struct Genus2Frames {
    rd: RootData,
    theta: Vec<Vec<u32>>,
    dumbbell: Vec<(u32, u32, u32)>,
    /// `F[dumbbell_index][theta_index]`, unitary.
    fmove: CMatrix,
}

fn build_frames(k: u32) -> Result<Genus2Frames> {
    let rd = RootData::new(k)?;
    let theta = admissible_colorings(2, k, None)?.colorings;
    let mut dumbbell = Vec::new();
    for a in 0..=k {
        for m in 0..=k {
            for b in 0..=k {
                if rd.admissible(a, a, m) && rd.admissible(b, b, m) {
                    dumbbell.push((a, m, b));
                }
            }
        }
    }
    if dumbbell.len() != theta.len() {
        return Err(Error::Construction(format!(
            "theta/dumbbell coloring counts differ: {} vs {}",
            theta.len(),
            dumbbell.len()
        )));
    }
    let n = theta.len();
    let mut fmove = CMatrix::zeros(n, n);
    for (jt, col) in theta.iter().enumerate() {
        let (x1, x3, x5) = (col[0], col[1], col[2]);
        for (id, &(a, m, b)) in dumbbell.iter().enumerate() {
            if a == x1 && b == x5 {
                fmove[(id, jt)] =
                    C64::new(sixj_unitary(&rd, x1, x5, x5, x1, x3, m)?, 0.0);
            }
        }
    }
    let off = (&fmove * fmove.adjoint() - CMatrix::identity(n, n)).norm();
    if off > UNITARY_TOL {
        return Err(Error::Construction(format!(
            "recoupling move not unitary at k={k}: residual {off:e}"
        )));
    }
    Ok(Genus2Frames { rd, theta, dumbbell, fmove })
}

/// Twist on one dumbbell handle: blockwise `Ŝ(m)* diag(μ) Ŝ(m)` over
/// the chosen handle index (0 = `a`-handle for `c2`, 2 = `b`-handle for
/// `c4`).
fn handle_twist(frames: &Genus2Frames, handle: usize) -> Result<CMatrix> {
    let rd = &frames.rd;
    let n = frames.dumbbell.len();
    let index: HashMap<(u32, u32, u32), usize> =
        frames.dumbbell.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut out = CMatrix::zeros(n, n);
    for m in 0..=rd.k {
        let basis = punctured_basis(rd, m);
        if basis.is_empty() {
            continue;
        }
        let s = punctured_s_matrix(rd, m)?;
        let mu = CMatrix::from_fn(basis.len(), basis.len(), |i, j| {
            if i == j { rd.mu(basis[i]) } else { C64::new(0.0, 0.0) }
        });
        let tw = s.adjoint() * mu * &s;
        let pos: HashMap<u32, usize> = basis.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        for (i, &(a, mm, b)) in frames.dumbbell.iter().enumerate() {
            if mm != m {
                continue;
            }
            let moving = if handle == 0 { a } else { b };
            for &other in &basis {
                let target = if handle == 0 { (other, m, b) } else { (a, m, other) };
                let j = index[&target];
                out[(i, j)] = tw[(pos[&moving], pos[&other])];
            }
        }
    }
    Ok(out)
}

fn check_unitary(label: &str, m: &CMatrix) -> Result<()> {
    let n = m.nrows();
    let off = (m.adjoint() * m - CMatrix::identity(n, n)).norm();
    if off > UNITARY_TOL {
        return Err(Error::Construction(format!("{label} not unitary: residual {off:e}")));
    }
    Ok(())
}

/// The five Humphries twist generators at genus two, in the orthonormal
/// theta-graph frame, with all structural certificates enforced.
pub fn genus2_rep(k: u32) -> Result<Vec<RepMatrix>> {
    if !(1..=6).contains(&k) {
        return Err(Error::Domain(format!("genus-2 representation supports k in 1..=6, got {k}")));
    }
    let frames = build_frames(k)?;
    let rd = &frames.rd;
    let n = frames.theta.len();
    let diag = |pick: fn(&Vec<u32>) -> u32| {
        CMatrix::from_fn(n, n, |i, j| {
            if i == j { rd.mu(pick(&frames.theta[i])) } else { C64::new(0.0, 0.0) }
        })
    };
    let t1 = diag(|c| c[0]);
    let t3 = diag(|c| c[1]);
    let t5 = diag(|c| c[2]);
    let t2 = frames.fmove.adjoint() * handle_twist(&frames, 0)? * &frames.fmove;
    let t4 = frames.fmove.adjoint() * handle_twist(&frames, 2)? * &frames.fmove;
    let gens = vec![
        RepMatrix { label: "t1".into(), matrix: t1 },
        RepMatrix { label: "t2".into(), matrix: t2 },
        RepMatrix { label: "t3".into(), matrix: t3 },
        RepMatrix { label: "t4".into(), matrix: t4 },
        RepMatrix { label: "t5".into(), matrix: t5 },
    ];
    for g in &gens {
        check_unitary(&format!("generator {} at k={k}", g.label), &g.matrix)?;
    }
    // disjointness: all pairs except consecutive chain neighbors commute
    for (i, j) in [(0, 2), (0, 3), (0, 4), (1, 3), (1, 4), (2, 4)] {
        let (a, b) = (&gens[i].matrix, &gens[j].matrix);
        let res = (a * b - b * a).norm();
        if res > COMMUTATION_TOL {
            return Err(Error::Construction(format!(
                "disjoint twists {} and {} fail to commute at k={k}: {res:e}",
                gens[i].label, gens[j].label
            )));
        }
    }
    // braid relations for curves meeting once
    for (i, j) in [(0, 1), (1, 2), (2, 3), (3, 4)] {
        let (a, b) = (&gens[i].matrix, &gens[j].matrix);
        let (res, _) = best_phase_residual(&(a * b * a), &(b * a * b));
        if res > BRAID_TOL {
            return Err(Error::Construction(format!(
                "braid relation {} ~ {} fails at k={k}: {res:e}",
                gens[i].label, gens[j].label
            )));
        }
    }
    Ok(gens)
}

/// Largest commutation/braid residual over the certificate suite, for
/// reporting.
pub fn max_relation_residual(gens: &[RepMatrix]) -> f64 {
    let mut worst = 0.0f64;
    for (i, j) in [(0, 2), (0, 3), (0, 4), (1, 3), (1, 4), (2, 4)] {
        let (a, b) = (&gens[i].matrix, &gens[j].matrix);
        worst = worst.max((a * b - b * a).norm());
    }
    for (i, j) in [(0, 1), (1, 2), (2, 3), (3, 4)] {
        let (a, b) = (&gens[i].matrix, &gens[j].matrix);
        worst = worst.max(best_phase_residual(&(a * b * a), &(b * a * b)).0);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn punctured_s_reduces_to_torus_s_at_trivial_boundary() {
        use crate::su2::genus1::genus1_rep;
        for k in 1..=4 {
            let rd = RootData::new(k).unwrap();
            let s = punctured_s_matrix(&rd, 0).unwrap();
            let (s1, _) = genus1_rep(k).unwrap();
            // agreement up to the diagonal sign conjugation D = diag((-1)^a)
            let n = s.nrows();
            let d = CMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    C64::new(if i % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            assert!((&d * s * &d - s1.matrix).norm() < 1e-10, "k={k}");
        }
    }

    #[test]
    fn generators_build_and_certify() {
        for k in 1..=4 {
            let gens = genus2_rep(k).unwrap();
            assert_eq!(gens.len(), 5);
            assert!(max_relation_residual(&gens) < 1e-10, "k={k}");
        }
    }

    #[test]
    fn pants_twists_diagonal_with_mu_spectrum() {
        let gens = genus2_rep(1).unwrap();
        let rd = RootData::new(1).unwrap();
        let basis = admissible_colorings(2, 1, None).unwrap();
        for (gi, ci) in [(0usize, 0usize), (2, 1), (4, 2)] {
            let m = &gens[gi].matrix;
            for (row, col) in basis.colorings.iter().enumerate() {
                assert!((m[(row, row)] - rd.mu(col[ci])).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn twist_spectra_within_mu_set() {
        // every generator is conjugate to a diagonal of twist scalars,
        // so the product of (M - mu_a I) over all labels annihilates it
        for k in 1..=3u32 {
            let gens = genus2_rep(k).unwrap();
            let rd = RootData::new(k).unwrap();
            for g in &gens {
                let n = g.matrix.nrows();
                let mut p = CMatrix::identity(n, n);
                for a in 0..=k {
                    p = p * (&g.matrix - CMatrix::identity(n, n) * rd.mu(a));
                }
                assert!(p.norm() < 1e-8, "k={k} {}: {:e}", g.label, p.norm());
            }
        }
    }

    #[test]
    fn level_out_of_range_rejected() {
        assert!(matches!(genus2_rep(0), Err(Error::Domain(_))));
        assert!(matches!(genus2_rep(7), Err(Error::Domain(_))));
    }
}
