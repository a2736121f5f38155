//! Coherent states, their rank-one projectors, and the defect
//! measurements built from them.
//!
//! The coherent state at `x` is the reproducing vector of the evaluation
//! functional: in an orthonormal frame `ψ_j` its coefficients are
//! `conj(ψ_j(x))·w(x)` for any unit metric frame `w` at `x`. The frame
//! and lift phases cancel in the normalized projector
//! `E_x = v v*/⟨v,v⟩`, which is the object everything downstream uses.
//!
//! `E_X = Σ_{x∈X} E_x` over a torsion set `X`, and the almost-fixed
//! section is the Hilbert–Schmidt-normalized traceless part
//! `E_{X,0}/‖E_{X,0}‖`. The invariance defect conjugates by Weil-matrix
//! words and compares across the Möbius-moved modular parameter, with
//! parallel transport equal to the identity on theta-frame matrices (the
//! covariant-constant frame is the theta frame up to scalars).

use crate::error::{Error, Result};
use crate::theta::series::unitary_value;
use crate::theta::{
    GeneratorWord, ModularParameter, ProjectorSection, ThetaFrameOperator, ThetaVector,
    TorsionSet, TorusPoint,
};
use crate::theta::weil::weil_word;
use crate::{C64, CMatrix, CVector};

/// Coherent vectors with norm below this are degenerate points.
pub const DEGENERATE_TOL: f64 = 1e-12;
/// A traceless part with Hilbert–Schmidt norm below this is degenerate.
pub const TRACELESS_TOL: f64 = 1e-10;

/// Unnormalized coherent vector at `x` in the orthonormal theta frame
/// (up to the overall positive scalar that cancels in `E_x`).
pub fn coherent_vector(x: TorusPoint, k: u32, tau: ModularParameter) -> Result<ThetaVector> {
    let coeffs = CVector::from_iterator(
        k as usize,
        (0..k).map(|j| unitary_value(j, k, x, tau).conj()),
    );
    if coeffs.norm() < DEGENERATE_TOL {
        return Err(Error::Degenerate(format!(
            "coherent vector at ({}, {}) is numerically zero",
            x.a, x.b
        )));
    }
    Ok(ThetaVector { k, tau, coeffs })
}

/// Rank-one coherent projector `E_x = v v*/⟨v,v⟩`.
pub fn coherent_projector(x: TorusPoint, k: u32, tau: ModularParameter) -> Result<ProjectorSection> {
    let v = coherent_vector(x, k, tau)?.coeffs;
    let n2 = v.norm_squared();
    let mat = CMatrix::from_fn(k as usize, k as usize, |j, l| v[j] * v[l].conj() / n2);
    Ok(ProjectorSection {
        op: ThetaFrameOperator { k, tau, matrix: mat, hermitian: true },
        source: x,
    })
}

/// Bergman overlap `⟨ê_y, ê_x⟩` of unit coherent states; modulus ≤ 1.
pub fn bergman_overlap(
    x: TorusPoint,
    y: TorusPoint,
    k: u32,
    tau: ModularParameter,
) -> Result<C64> {
    let vx = coherent_vector(x, k, tau)?.coeffs;
    let vy = coherent_vector(y, k, tau)?.coeffs;
    Ok(vx.dotc(&vy) / (vx.norm() * vy.norm()))
}

/// `E_X = Σ_{x∈X} E_x`; Hermitian with trace `|X|`.
pub fn e_big_x(x_set: &TorsionSet, k: u32, tau: ModularParameter) -> Result<ThetaFrameOperator> {
    let kd = k as usize;
    let mut sum = CMatrix::zeros(kd, kd);
    for &x in &x_set.points {
        sum += coherent_projector(x, k, tau)?.op.matrix;
    }
    Ok(ThetaFrameOperator { k, tau, matrix: sum, hermitian: true })
}

/// Unit-Hilbert–Schmidt traceless part `E_{X,0}/‖E_{X,0}‖`.
pub fn almost_fixed_section(
    x_set: &TorsionSet,
    k: u32,
    tau: ModularParameter,
) -> Result<ThetaFrameOperator> {
    if k < 2 {
        return Err(Error::Domain(
            "traceless endomorphisms vanish at k = 1; invariance experiments need k >= 2".into(),
        ));
    }
    let ex = e_big_x(x_set, k, tau)?;
    let kd = k as usize;
    let trace: C64 = (0..kd).map(|j| ex.matrix[(j, j)]).sum();
    let mut m = ex.matrix;
    let shift = trace / C64::new(kd as f64, 0.0);
    for j in 0..kd {
        m[(j, j)] -= shift;
    }
    let hs = m.norm();
    if hs < TRACELESS_TOL {
        return Err(Error::Degenerate(format!(
            "traceless part of E_X vanishes (HS norm {hs:e}); k too small"
        )));
    }
    Ok(ThetaFrameOperator { k, tau, matrix: m / C64::new(hs, 0.0), hermitian: true })
}

/// Invariance defect
/// `δ_k(γ) = ‖ℰ(τ0) − ρ(γ)⁻¹ ℰ(γ·τ0) ρ(γ)‖_HS` for a generator word.
pub fn invariance_defect(
    word: &GeneratorWord,
    x_set: &TorsionSet,
    k: u32,
    tau0: ModularParameter,
) -> Result<f64> {
    let gamma = word.matrix();
    let e0 = almost_fixed_section(x_set, k, tau0)?;
    let tau1 = gamma.moebius(tau0)?;
    let e1 = almost_fixed_section(x_set, k, tau1)?;
    let rho = weil_word(k, word)?;
    let moved = rho.adjoint() * e1.matrix * rho;
    Ok((e0.matrix - moved).norm())
}

/// Transport defect `‖E_x(τ0) − E_x(τ1)‖_HS` (transport is the identity
/// on theta-frame matrices).
pub fn transport_defect(
    x: TorusPoint,
    k: u32,
    tau0: ModularParameter,
    tau1: ModularParameter,
) -> Result<f64> {
    let e0 = coherent_projector(x, k, tau0)?;
    let e1 = coherent_projector(x, k, tau1)?;
    Ok((e0.op.matrix - e1.op.matrix).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::torsion_set;

    fn tau_i() -> ModularParameter {
        ModularParameter::new(0.0, 1.0).unwrap()
    }

    fn projector_laws(e: &ProjectorSection) {
        let m = &e.op.matrix;
        let kd = m.nrows();
        let tr: C64 = (0..kd).map(|j| m[(j, j)]).sum();
        assert!((tr - C64::new(1.0, 0.0)).norm() < 1e-10, "trace {tr}");
        assert!((m.adjoint() - m).norm() < 1e-10, "not Hermitian");
        assert!((m * m - m).norm() < 1e-10, "not idempotent");
    }

    #[test]
    fn projector_laws_on_torsion_points() {
        for k in [2u32, 5, 8] {
            for &x in &torsion_set(2).unwrap().points {
                projector_laws(&coherent_projector(x, k, tau_i()).unwrap());
            }
        }
    }

    #[test]
    fn projector_independent_of_lift_phase() {
        // same point entered through different mod-1 lifts
        let k = 4;
        let e1 = coherent_projector(TorusPoint::new(0.5, 0.25), k, tau_i()).unwrap();
        let e2 = coherent_projector(TorusPoint::new(-0.5, 1.25), k, tau_i()).unwrap();
        assert!((e1.op.matrix - e2.op.matrix).norm() < 1e-12);
    }

    #[test]
    fn self_overlap_unit_and_hermitian_symmetry() {
        let k = 6;
        let x = TorusPoint::new(0.0, 0.0);
        let y = TorusPoint::new(0.5, 0.0);
        let oxx = bergman_overlap(x, x, k, tau_i()).unwrap();
        assert!((oxx.norm() - 1.0).abs() < 1e-12);
        let oxy = bergman_overlap(x, y, k, tau_i()).unwrap();
        let oyx = bergman_overlap(y, x, k, tau_i()).unwrap();
        assert!((oxy - oyx.conj()).norm() < 1e-12);
        assert!(oxy.norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn off_diagonal_overlap_decays_in_k() {
        let x = TorusPoint::new(0.0, 0.0);
        let y = TorusPoint::new(0.5, 0.0);
        let o20 = bergman_overlap(x, y, 20, tau_i()).unwrap().norm();
        let o40 = bergman_overlap(x, y, 40, tau_i()).unwrap().norm();
        assert!(o40 < o20, "{o40} !< {o20}");
        // Ratio check on a pair not annihilated by theta parity: the
        // (0,0)-(1/2,1/2) overlap vanishes identically at k ≡ 2 (mod 4),
        // which would make a k=10 ratio a 0/0.
        let p10 = bergman_overlap(x, y, 10, tau_i()).unwrap().norm();
        let p20 = bergman_overlap(x, y, 20, tau_i()).unwrap().norm();
        assert!(p20 / p10 < 0.1, "ratio {}", p20 / p10);
        let z = TorusPoint::new(0.5, 0.5);
        let q10 = bergman_overlap(x, z, 10, tau_i()).unwrap().norm();
        assert!(q10 < 1e-12, "parity zero expected, got {q10}");
    }

    #[test]
    fn e_x_trace_counts_points() {
        let xs = torsion_set(2).unwrap();
        for k in [8u32, 16] {
            let ex = e_big_x(&xs, k, tau_i()).unwrap();
            let tr: C64 = (0..k as usize).map(|j| ex.matrix[(j, j)]).sum();
            assert!((tr.re - 4.0).abs() < 1e-10 && tr.im.abs() < 1e-12);
        }
    }

    #[test]
    fn almost_fixed_section_traceless_unit() {
        let xs = torsion_set(2).unwrap();
        let e = almost_fixed_section(&xs, 8, tau_i()).unwrap();
        let tr: C64 = (0..8).map(|j| e.matrix[(j, j)]).sum();
        assert!(tr.norm() < 1e-10);
        assert!((e.matrix.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn almost_fixed_rejects_k_one() {
        let xs = torsion_set(2).unwrap();
        assert!(matches!(
            almost_fixed_section(&xs, 1, tau_i()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn identity_word_defect_vanishes() {
        let xs = torsion_set(2).unwrap();
        let d = invariance_defect(&GeneratorWord::parse("I").unwrap(), &xs, 8, tau_i()).unwrap();
        assert!(d < 1e-12, "defect {d:e}");
    }

    #[test]
    fn defect_invariant_under_global_weil_phase() {
        // conjugation by rho and by phase*rho agree; realized by comparing
        // the S word against itself (phase freedom is internal) and by the
        // exact identity delta(word) = delta computed with rho -> -rho.
        let xs = torsion_set(2).unwrap();
        let word = GeneratorWord::parse("S").unwrap();
        let k = 8;
        let tau0 = tau_i();
        let gamma = word.matrix();
        let e0 = almost_fixed_section(&xs, k, tau0).unwrap();
        let e1 = almost_fixed_section(&xs, k, gamma.moebius(tau0).unwrap()).unwrap();
        let rho = weil_word(k, &word).unwrap();
        let phase = C64::from_polar(1.0, 1.234);
        let d1 = (&e0.matrix - rho.adjoint() * &e1.matrix * &rho).norm();
        let rho2 = rho * phase;
        let d2 = (&e0.matrix - rho2.adjoint() * &e1.matrix * &rho2).norm();
        assert!((d1 - d2).abs() < 1e-12);
    }

    #[test]
    fn transport_defect_zero_at_equal_tau() {
        let d = transport_defect(TorusPoint::new(0.0, 0.0), 16, tau_i(), tau_i()).unwrap();
        assert!(d < 1e-12);
    }

    #[test]
    fn transport_defect_comparison_across_k() {
        let t1 = ModularParameter::new(1.0, 1.0).unwrap();
        let x = TorusPoint::new(0.0, 0.0);
        let d16 = transport_defect(x, 16, tau_i(), t1).unwrap();
        let d64 = transport_defect(x, 64, tau_i(), t1).unwrap();
        assert!(d64 < d16, "{d64} !< {d16}");
    }
}
