//! SU(2) skein/recoupling data at `A = exp(2πi/4(k+2))` and the
//! mapping-class-group representations it generates at genus one and
//! two.
//!
//! Labels are `0, …, k`; a triple `(a,b,c)` is *admissible* when
//! `a+b+c` is even, the triangle inequalities hold, and `a+b+c ≤ 2k`.
//! All closed-network evaluations (quantum integers, loop values, theta
//! and tetrahedron nets) are built from the Kauffman–Lins formulas at
//! this root, where every quantum integer `[n]`, `1 ≤ n ≤ k+1`, is
//! strictly positive — the regime in which the Hermitian pairing is
//! positive definite.
//!
//! Module layout: [`root`] holds the cached root data, [`nets`] the
//! closed-network evaluators, [`basis`] the spine-coloring enumeration,
//! [`genus1`]/[`genus2`] the representation matrices, and [`commutant`]
//! the irreducibility certificates.

pub mod basis;
pub mod commutant;
pub mod genus1;
pub mod genus2;
pub mod gram;
pub mod nets;
pub mod root;

use crate::CMatrix;

/// A mapping-class generator matrix over a [`basis::ColoredBasis`].
///
/// `matrix` lives in the orthonormal frame obtained by rescaling each
/// coloring by the square root of its Gram norm; the coloring-basis form
/// is `D^{−1/2}·matrix·D^{1/2}` with `D` the Gram diagonal, and is
/// Gram-unitary exactly when `matrix` is unitary.
#[derive(Debug, Clone)]
pub struct RepMatrix {
    pub label: String,
    pub matrix: CMatrix,
}

/// Hermitian form on a coloring basis (diagonal for tree bases).
#[derive(Debug, Clone)]
pub struct GramForm {
    pub matrix: CMatrix,
    pub min_eigenvalue: f64,
}
