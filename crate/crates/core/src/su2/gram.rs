//! Hermitian Gram forms of the coloring bases.
//!
//! Tree bases are orthogonal, so the form is diagonal. Conventions:
//! at genus 1 the norm of the `a`-loop is the quantum dimension
//! `[a+1]`; at genus 2 the norm of a theta-graph coloring is
//! `θ(x1,x3,x5)² / (Δ_{x1} Δ_{x3} Δ_{x5})`, which is positive because
//! admissibility forces `x1+x3+x5` even, cancelling the loop-value
//! signs.

use crate::error::{Error, Result};
use crate::su2::basis::admissible_colorings;
use crate::su2::nets::theta_net;
use crate::su2::root::RootData;
use crate::su2::GramForm;
use crate::{C64, CMatrix};

/// Gram form of the genus-`g` coloring basis, `g ∈ {1, 2}`.
pub fn gram_form(g: u32, k: u32) -> Result<GramForm> {
    let rd = RootData::new(k)?;
    let basis = admissible_colorings(g, k, None)?;
    let diag: Vec<f64> = match g {
        1 => basis.colorings.iter().map(|c| Ok(rd.qint(c[0] + 1))).collect::<Result<_>>()?,
        2 => basis
            .colorings
            .iter()
            .map(|c| {
                let th = theta_net(&rd, c[0], c[1], c[2])?;
                Ok(th * th / (rd.qint(c[0] + 1) * rd.qint(c[1] + 1) * rd.qint(c[2] + 1)))
            })
            .collect::<Result<_>>()?,
        _ => return Err(Error::Domain(format!("gram_form supports g in {{1,2}}, got {g}"))),
    };
    let min = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(min > 0.0) {
        return Err(Error::Construction(format!(
            "Gram form not positive definite at g={g}, k={k}: min eigenvalue {min}"
        )));
    }
    let n = diag.len();
    let matrix = CMatrix::from_fn(n, n, |i, j| {
        if i == j { C64::new(diag[i], 0.0) } else { C64::new(0.0, 0.0) }
    });
    Ok(GramForm { matrix, min_eigenvalue: min })
}
