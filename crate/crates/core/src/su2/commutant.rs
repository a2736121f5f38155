//! Commutant and fixed-subspace dimensions via the stacked Sylvester
//! system.
//!
//! For generators `A_i` the commutant is the null space of the stacked
//! operators `Ψ ↦ A_iΨ − ΨA_i`. We assemble the Hermitian Gram operator
//! `H = Σ_i L_i^* L_i` with `L_i = I⊗A_i − A_iᵀ⊗I` and count its null
//! eigenvalues; the singular values of the stack are the square roots
//! of the eigenvalues of `H`. A one-dimensional commutant certifies
//! irreducibility, hence no invariant vector in the traceless
//! endomorphism space (whose fixed-subspace dimension is
//! `commutant_dim − 1`).

use crate::error::{Error, Result};
use crate::{C64, CMatrix};

/// Singular values below this are treated as null. The eigenvalues of
/// `H` carry `~1e-15` relative noise, so the stack singular values (their
/// square roots) have a noise floor near `3e-8`; the threshold sits well
/// above that floor and well below the smallest genuine singular values
/// (order 1) seen in practice.
pub const RANK_TOL: f64 = 1e-6;
/// Singular values inside `[RANK_TOL, AMBIGUITY_FACTOR·RANK_TOL)` make
/// the rank determination ambiguous — a precision failure.
pub const AMBIGUITY_FACTOR: f64 = 100.0;

/// Result of the stacked-Sylvester null-space computation.
#[derive(Debug, Clone)]
pub struct CommutantReport {
    pub commutant_dim: usize,
    /// Dimension of the conjugation-fixed traceless subspace,
    /// `commutant_dim − 1`.
    pub fixed_dim: usize,
    /// Orthonormal basis of the fixed (traceless commutant) subspace.
    pub witness: Vec<CMatrix>,
    /// Smallest nonzero stack singular value divided by [`RANK_TOL`];
    /// `None` when the stack vanishes identically.
    pub sv_gap: Option<f64>,
}

/// Commutant of a set of `n×n` generator matrices.
pub fn fixed_and_commutant(mats: &[CMatrix]) -> Result<CommutantReport> {
    fixed_and_commutant_with(mats, RANK_TOL)
}

/// [`fixed_and_commutant`] with an explicit rank tolerance.
pub fn fixed_and_commutant_with(mats: &[CMatrix], rank_tol: f64) -> Result<CommutantReport> {
    let n = match mats.first() {
        Some(m) => m.nrows(),
        None => return Err(Error::Domain("empty generator list".into())),
    };
    let id = CMatrix::identity(n, n);
    let mut h = CMatrix::zeros(n * n, n * n);
    for a in mats {
        if a.nrows() != n || a.ncols() != n {
            return Err(Error::Domain("generator matrices must share a square shape".into()));
        }
        let l = id.kronecker(a) - a.transpose().kronecker(&id);
        h += l.adjoint() * l;
    }
    let eig = h.symmetric_eigen();
    let sv: Vec<f64> = eig.eigenvalues.iter().map(|&e| e.max(0.0).sqrt()).collect();
    for &s in &sv {
        if (rank_tol..rank_tol * AMBIGUITY_FACTOR).contains(&s) {
            return Err(Error::Precision(format!(
                "rank determination ambiguous: stack singular value {s:e} near tolerance \
                 {rank_tol:e}"
            )));
        }
    }
    let null_idx: Vec<usize> =
        (0..sv.len()).filter(|&i| sv[i] < rank_tol).collect();
    let commutant_dim = null_idx.len();
    let sv_gap = sv
        .iter()
        .cloned()
        .filter(|&s| s >= rank_tol)
        .fold(None::<f64>, |acc, s| Some(acc.map_or(s, |a| a.min(s))))
        .map(|s| s / rank_tol);
    // commutant basis matrices (columns of the eigenvector matrix,
    // un-vectorized column-major), then the traceless part,
    // orthonormalized
    let mut witness: Vec<CMatrix> = Vec::new();
    for &i in &null_idx {
        let col = eig.eigenvectors.column(i);
        let mut m = CMatrix::from_fn(n, n, |r, c| col[c * n + r]);
        let tr: C64 = (0..n).map(|j| m[(j, j)]).sum();
        let shift = tr / C64::new(n as f64, 0.0);
        for j in 0..n {
            m[(j, j)] -= shift;
        }
        for w in &witness {
            let ip: C64 = w.iter().zip(m.iter()).map(|(x, y)| x.conj() * y).sum();
            m -= w * ip;
        }
        let norm = m.norm();
        if norm > 1e-8 {
            witness.push(m / C64::new(norm, 0.0));
        }
    }
    if commutant_dim == 0 {
        return Err(Error::Construction(
            "commutant excludes the identity; the generators are inconsistent".into(),
        ));
    }
    let fixed_dim = commutant_dim - 1;
    if witness.len() != fixed_dim {
        return Err(Error::Precision(format!(
            "traceless witness count {} disagrees with commutant dimension {}",
            witness.len(),
            commutant_dim
        )));
    }
    Ok(CommutantReport { commutant_dim, fixed_dim, witness, sv_gap })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_generator_has_full_commutant() {
        let d = 3;
        let rep = fixed_and_commutant(&[CMatrix::identity(d, d)]).unwrap();
        assert_eq!(rep.commutant_dim, d * d);
        assert_eq!(rep.fixed_dim, d * d - 1);
        assert!(rep.sv_gap.is_none());
    }

    #[test]
    fn fourier_pair_is_irreducible() {
        // the DFT matrix and a generic diagonal generate an algebra with
        // trivial commutant
        use std::f64::consts::PI;
        let k = 5usize;
        let s = CMatrix::from_fn(k, k, |j, l| {
            C64::from_polar(1.0 / (k as f64).sqrt(), -2.0 * PI * (j * l) as f64 / k as f64)
        });
        let t = CMatrix::from_fn(k, k, |j, l| {
            if j == l { C64::from_polar(1.0, 0.37 * (j * j + 1) as f64) } else { C64::new(0.0, 0.0) }
        });
        let rep = fixed_and_commutant(&[s, t]).unwrap();
        assert_eq!(rep.commutant_dim, 1);
        assert_eq!(rep.fixed_dim, 0);
        assert!(rep.sv_gap.unwrap() > 1e4);
    }

    #[test]
    fn witnesses_are_traceless_commuting_and_orthonormal() {
        // two commuting permutation blocks give a 2-dimensional commutant
        let mut p = CMatrix::zeros(4, 4);
        p[(0, 1)] = C64::new(1.0, 0.0);
        p[(1, 0)] = C64::new(1.0, 0.0);
        p[(2, 3)] = C64::new(1.0, 0.0);
        p[(3, 2)] = C64::new(1.0, 0.0);
        let rep = fixed_and_commutant(&[p.clone()]).unwrap();
        assert!(rep.commutant_dim >= 2);
        for w in &rep.witness {
            let tr: C64 = (0..4).map(|j| w[(j, j)]).sum();
            assert!(tr.norm() < 1e-10);
            assert!((w.norm() - 1.0).abs() < 1e-10);
            assert!((&p * w - w * &p).norm() < 1e-8);
        }
    }
}
