//! Matrix elements by tensor trapezoidal quadrature on the periodic
//! square.
//!
//! Every integrand here is smooth and fully periodic on `[0,1)²` (in the
//! unitary gauge the quasi-periodicity phases of the two frames cancel
//! against each other and against the Fourier modes of the symbol), so
//! the equal-weight trapezoidal rule converges spectrally. The grid is
//! doubled until two successive refinements agree entrywise below
//! [`QUAD_TOL`]; non-convergence below the cap is a precision failure,
//! never silently accepted.
//!
//! In the `a`-direction the integrands are trigonometric polynomials of
//! degree `≤ k + O(1)`, so the rule becomes *exact* once the grid passes
//! the aliasing threshold — the doubling loop detects this automatically.

use crate::error::{Error, Result};
use crate::theta::series::{unitary_deriv, unitary_value};
use crate::theta::{ModularParameter, ThetaFrameOperator, TorusPoint};
use crate::{C64, CMatrix};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Successive grid refinements must agree below this tolerance.
pub const QUAD_TOL: f64 = 1e-10;
/// First grid size tried.
const GRID_START: usize = 32;
/// Refinement cap; exceeding it is a precision failure.
const GRID_MAX: usize = 4096;

/// One Fourier mode `coeff · exp(2πi(p·a + q·b))` of a symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierMode {
    pub p: i32,
    pub q: i32,
    pub coeff: C64,
}

/// Finite trigonometric polynomial on the torus.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    pub modes: Vec<FourierMode>,
}

impl TrigPoly {
    pub fn constant(c: f64) -> Self {
        Self { modes: vec![FourierMode { p: 0, q: 0, coeff: C64::new(c, 0.0) }] }
    }

    pub fn mode(p: i32, q: i32, coeff: C64) -> Self {
        Self { modes: vec![FourierMode { p, q, coeff }] }
    }

    /// `cos(2π(p·a + q·b))` as two conjugate modes.
    pub fn cosine(p: i32, q: i32) -> Self {
        Self {
            modes: vec![
                FourierMode { p, q, coeff: C64::new(0.5, 0.0) },
                FourierMode { p: -p, q: -q, coeff: C64::new(0.5, 0.0) },
            ],
        }
    }

    /// `sin(2π(p·a + q·b))`.
    pub fn sine(p: i32, q: i32) -> Self {
        Self {
            modes: vec![
                FourierMode { p, q, coeff: C64::new(0.0, -0.5) },
                FourierMode { p: -p, q: -q, coeff: C64::new(0.0, 0.5) },
            ],
        }
    }

    pub fn eval(&self, a: f64, b: f64) -> C64 {
        self.modes
            .iter()
            .map(|m| {
                m.coeff
                    * C64::new(0.0, 2.0 * PI * (m.p as f64 * a + m.q as f64 * b)).exp()
            })
            .sum()
    }

    /// Pointwise product, with like modes merged.
    pub fn product(&self, other: &TrigPoly) -> TrigPoly {
        let mut modes: Vec<FourierMode> = Vec::new();
        for x in &self.modes {
            for y in &other.modes {
                let (p, q, c) = (x.p + y.p, x.q + y.q, x.coeff * y.coeff);
                if let Some(m) = modes.iter_mut().find(|m| m.p == p && m.q == q) {
                    m.coeff += c;
                } else {
                    modes.push(FourierMode { p, q, coeff: c });
                }
            }
        }
        TrigPoly { modes }
    }

    /// True when the symbol is a real-valued function (modes closed
    /// under `(p,q,c) ↦ (−p,−q,conj c)`).
    pub fn is_real(&self) -> bool {
        self.modes.iter().all(|m| {
            self.modes
                .iter()
                .any(|n| n.p == -m.p && n.q == -m.q && (n.coeff - m.coeff.conj()).norm() < 1e-15)
        })
    }

    pub fn sup_bound(&self) -> f64 {
        self.modes.iter().map(|m| m.coeff.norm()).sum()
    }
}

/// Which family of section values feeds one side of a matrix element.
#[derive(Debug, Clone, Copy, PartialEq)]
enum FrameSpec {
    /// Unitary-gauge values `F_j` at the given `τ`.
    Plain(ModularParameter),
    /// Values of the covariant derivative factor `F'_j + 2πik·b·F_j`
    /// (the unitary-gauge value of `∂_z θ_j + 2πik·b·θ_j`).
    CovariantDeriv(ModularParameter),
}

/// Values for one grid row `b = ib/n`: `out[j][ia]`.
fn row_values(spec: FrameSpec, k: u32, n: usize, ib: usize) -> Vec<Vec<C64>> {
    let b = ib as f64 / n as f64;
    (0..k)
        .map(|j| {
            (0..n)
                .map(|ia| {
                    let x = TorusPoint { a: ia as f64 / n as f64, b };
                    match spec {
                        FrameSpec::Plain(tau) => unitary_value(j, k, x, tau),
                        FrameSpec::CovariantDeriv(tau) => {
                            unitary_deriv(j, k, x, tau)
                                + C64::new(0.0, 2.0 * PI * k as f64 * b)
                                    * unitary_value(j, k, x, tau)
                        }
                    }
                })
                .collect()
        })
        .collect()
}

/// `M_{jl} = (1/n²) Σ_grid conj(A_j)·f·B_l` on the `n×n` grid.
fn grid_matrix(n: usize, k: u32, side_a: FrameSpec, side_b: FrameSpec, f: &TrigPoly) -> CMatrix {
    let kd = k as usize;
    let w = 1.0 / (n * n) as f64;
    (0..n)
        .into_par_iter()
        .map(|ib| {
            let bvals = row_values(side_b, k, n, ib);
            let avals_own;
            let avals = if side_a == side_b {
                &bvals
            } else {
                avals_own = row_values(side_a, k, n, ib);
                &avals_own
            };
            let b = ib as f64 / n as f64;
            let mut m = CMatrix::zeros(kd, kd);
            for ia in 0..n {
                let a = ia as f64 / n as f64;
                let fw = f.eval(a, b) * w;
                for l in 0..kd {
                    let bl = bvals[l][ia] * fw;
                    for j in 0..kd {
                        m[(j, l)] += avals[j][ia].conj() * bl;
                    }
                }
            }
            m
        })
        .reduce(|| CMatrix::zeros(kd, kd), |x, y| x + y)
}

fn max_abs_diff(x: &CMatrix, y: &CMatrix) -> f64 {
    x.iter().zip(y.iter()).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max)
}

/// Doubling engine: refine until two successive grids agree.
fn converge(
    k: u32,
    side_a: FrameSpec,
    side_b: FrameSpec,
    f: &TrigPoly,
    tol: f64,
) -> Result<CMatrix> {
    let mut n = GRID_START;
    let mut prev = grid_matrix(n, k, side_a, side_b, f);
    while n < GRID_MAX {
        n *= 2;
        let cur = grid_matrix(n, k, side_a, side_b, f);
        if max_abs_diff(&prev, &cur) < tol {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Precision(format!(
        "quadrature did not converge below {tol:e} within a {GRID_MAX}x{GRID_MAX} grid"
    )))
}

/// Gram matrix of the raw theta basis together with the orthonormalizing
/// scalar (the common diagonal square root).
#[derive(Debug, Clone)]
pub struct Gram {
    pub matrix: CMatrix,
    /// `c = sqrt(G_00)`; the orthonormal frame is `θ_j / c`.
    pub norm: f64,
}

/// Gram matrix `G_{jl} = ∫ θ_j conj(θ_l) e^{−2πk(Im z)²/Im τ} da db`,
/// validated diagonal with equal diagonal entries.
pub fn gram_matrix(k: u32, tau: ModularParameter) -> Result<Gram> {
    gram_matrix_with(k, tau, QUAD_TOL)
}

/// [`gram_matrix`] with an explicit convergence tolerance.
pub fn gram_matrix_with(k: u32, tau: ModularParameter, tol: f64) -> Result<Gram> {
    let g = converge(k, FrameSpec::Plain(tau), FrameSpec::Plain(tau), &TrigPoly::constant(1.0), tol)?;
    let d0 = g[(0, 0)].re;
    for j in 0..k as usize {
        for l in 0..k as usize {
            if j == l {
                if g[(j, j)].im.abs() > tol || (g[(j, j)].re - d0).abs() > tol {
                    return Err(Error::Construction(format!(
                        "Gram diagonal not real-equal: G[{j}][{j}] = {}, G[0][0] = {d0}",
                        g[(j, j)]
                    )));
                }
            } else if g[(j, l)].norm() > tol {
                return Err(Error::Construction(format!(
                    "Gram not diagonal: |G[{j}][{l}]| = {:e}",
                    g[(j, l)].norm()
                )));
            }
        }
    }
    if d0 <= 0.0 {
        return Err(Error::Degenerate("Gram diagonal is not positive".into()));
    }
    Ok(Gram { matrix: g, norm: d0.sqrt() })
}

/// Toeplitz operator `T_f` in the orthonormal theta frame:
/// `T_{jl} = ⟨f ψ_l, ψ_j⟩ = (1/c²) ∫ f F_l conj(F_j)`.
pub fn toeplitz_matrix(f: &TrigPoly, k: u32, tau: ModularParameter) -> Result<ThetaFrameOperator> {
    toeplitz_matrix_with(f, k, tau, QUAD_TOL)
}

/// [`toeplitz_matrix`] with an explicit convergence tolerance.
pub fn toeplitz_matrix_with(
    f: &TrigPoly,
    k: u32,
    tau: ModularParameter,
    tol: f64,
) -> Result<ThetaFrameOperator> {
    let gram = gram_matrix_with(k, tau, tol)?;
    let raw = converge(k, FrameSpec::Plain(tau), FrameSpec::Plain(tau), f, tol)?;
    Ok(ThetaFrameOperator {
        k,
        tau,
        matrix: raw / C64::new(gram.norm * gram.norm, 0.0),
        hermitian: f.is_real(),
    })
}

/// Two-complex-structure Toeplitz matrix
/// `T_{f,(τ0,τ1)}[j][l] = ⟨f ψ_l^{τ0}, ψ_j^{τ1}⟩`.
pub fn toeplitz_cross(
    f: &TrigPoly,
    k: u32,
    tau0: ModularParameter,
    tau1: ModularParameter,
) -> Result<CMatrix> {
    toeplitz_cross_with(f, k, tau0, tau1, QUAD_TOL)
}

/// [`toeplitz_cross`] with an explicit convergence tolerance.
pub fn toeplitz_cross_with(
    f: &TrigPoly,
    k: u32,
    tau0: ModularParameter,
    tau1: ModularParameter,
    tol: f64,
) -> Result<CMatrix> {
    let g0 = gram_matrix_with(k, tau0, tol)?;
    let g1 = gram_matrix_with(k, tau1, tol)?;
    let raw = converge(k, FrameSpec::Plain(tau1), FrameSpec::Plain(tau0), f, tol)?;
    Ok(raw / C64::new(g0.norm * g1.norm, 0.0))
}

/// Cross-projection matrix `π_{(τ0,τ1)}` (the `f ≡ 1` cross Toeplitz).
pub fn cross_projection(k: u32, tau0: ModularParameter, tau1: ModularParameter) -> Result<CMatrix> {
    toeplitz_cross(&TrigPoly::constant(1.0), k, tau0, tau1)
}

/// Residual of the exact operator identity `π ∇_X = T_{f_X}` for the
/// holomorphic vector field `X = h ∂/∂z`, `h = exp(2πi(pa+qb))` (or a
/// constant when `mode` is `None`), where `f_X = −∂_z h`.
///
/// Both sides are assembled independently by quadrature; the return
/// value is the Frobenius norm of their difference. For constant `h` the
/// symbol `f_X` vanishes and the residual is `‖π ∇_X‖` itself.
pub fn derivative_projection_check(
    mode: Option<(i32, i32)>,
    k: u32,
    tau: ModularParameter,
) -> Result<f64> {
    let gram = gram_matrix(k, tau)?;
    let c2 = C64::new(gram.norm * gram.norm, 0.0);
    let h = match mode {
        Some((p, q)) => TrigPoly::mode(p, q, C64::new(1.0, 0.0)),
        None => TrigPoly::constant(1.0),
    };
    // matrix of pi grad_X: (1/c^2) <h (dz theta_l + 2 pi i k b theta_l), psi_j>
    let lhs = converge(k, FrameSpec::Plain(tau), FrameSpec::CovariantDeriv(tau), &h, QUAD_TOL)? / c2;
    // f_X = -dz h; dz a = 1/2 + i re/(2 im), dz b = -i/(2 im)
    let rhs = match mode {
        None => CMatrix::zeros(k as usize, k as usize),
        Some((p, q)) => {
            let dza = C64::new(0.5, tau.re / (2.0 * tau.im));
            let dzb = C64::new(0.0, -1.0 / (2.0 * tau.im));
            let coeff = -C64::new(0.0, 2.0 * PI)
                * (C64::new(p as f64, 0.0) * dza + C64::new(q as f64, 0.0) * dzb);
            let fx = TrigPoly::mode(p, q, coeff);
            converge(k, FrameSpec::Plain(tau), FrameSpec::Plain(tau), &fx, QUAD_TOL)? / c2
        }
    };
    Ok((lhs - rhs).norm())
}

/// Largest singular value (operator norm).
pub fn operator_norm(m: &CMatrix) -> f64 {
    m.clone().svd(false, false).singular_values.max()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tau_i() -> ModularParameter {
        ModularParameter::new(0.0, 1.0).unwrap()
    }

    #[test]
    fn gram_is_scalar_and_matches_gaussian_oracle() {
        // Orthogonality in a forces G diagonal; the diagonal entry is the
        // full-line Gaussian integral 1/sqrt(2 k Im tau).
        for &(k, re, im) in &[(1u32, 0.0, 1.0), (3, 0.0, 1.0), (2, 0.0, 2.0), (4, 0.5, 1.0)] {
            let tau = ModularParameter::new(re, im).unwrap();
            let g = gram_matrix(k, tau).unwrap();
            let oracle = 1.0 / (2.0 * k as f64 * im).sqrt();
            assert!(
                (g.matrix[(0, 0)].re - oracle).abs() < 1e-10,
                "k={k}: {} vs {oracle}",
                g.matrix[(0, 0)].re
            );
            assert!((g.norm - oracle.sqrt()).abs() < 1e-10);
        }
    }

    #[test]
    fn toeplitz_of_one_is_identity() {
        for k in [1u32, 2, 5] {
            let t = toeplitz_matrix(&TrigPoly::constant(1.0), k, tau_i()).unwrap();
            let id = CMatrix::identity(k as usize, k as usize);
            assert!((t.matrix - id).norm() < 1e-9, "k={k}");
        }
    }

    #[test]
    fn toeplitz_of_real_symbol_is_hermitian() {
        let f = TrigPoly::cosine(1, 0);
        let t = toeplitz_matrix(&f, 4, tau_i()).unwrap();
        assert!(t.hermitian);
        assert!((t.matrix.clone() - t.matrix.adjoint()).norm() < 1e-9);
    }

    #[test]
    fn toeplitz_norm_below_sup() {
        let f = TrigPoly::mode(1, 0, C64::new(1.0, 0.0));
        let t = toeplitz_matrix(&f, 16, tau_i()).unwrap();
        let n = operator_norm(&t.matrix);
        assert!(n < 1.0, "norm {n} must undercut sup|f| = 1");
        assert!(n > 0.5);
    }

    #[test]
    fn derivative_identity_constant_field() {
        let r = derivative_projection_check(None, 8, tau_i()).unwrap();
        assert!(r < 1e-8, "residual {r:e}");
    }

    #[test]
    fn derivative_identity_oscillating_field() {
        let r = derivative_projection_check(Some((1, 0)), 8, tau_i()).unwrap();
        assert!(r < 1e-8, "residual {r:e}");
        let tau = ModularParameter::new(0.5, 1.0).unwrap();
        let r2 = derivative_projection_check(Some((0, 1)), 12, tau).unwrap();
        assert!(r2 < 1e-8, "residual {r2:e}");
    }

    #[test]
    fn trig_poly_product_and_reality() {
        let f1 = TrigPoly::cosine(1, 0);
        let f2 = TrigPoly::sine(0, 1);
        assert!(f1.is_real() && f2.is_real());
        let p = f1.product(&f2);
        assert!(p.is_real());
        let (a, b) = (0.123, 0.456);
        let direct = (2.0 * PI * a).cos() * (2.0 * PI * b).sin();
        assert!((p.eval(a, b).re - direct).abs() < 1e-14);
        assert!(p.eval(a, b).im.abs() < 1e-14);
    }
}
