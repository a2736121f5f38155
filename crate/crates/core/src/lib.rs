//! Numerical laboratory for quantum representations of surface mapping
//! class groups.
//!
//! The crate has four mathematical layers and an orchestration layer:
//!
//! * [`verlinde`] — dimension formulas for the spaces the representations
//!   act on, with certified integrality.
//! * [`theta`] — the genus-one abelian model: level-`k` theta functions on
//!   a torus, coherent-state projectors, Berezin–Toeplitz operators, the
//!   finite Weil action of `SL(2,Z)`, and the defect measurements that
//!   probe the `O(1/k)` asymptotics.
//! * [`su2`] — SU(2) skein/recoupling data at a primitive `4(k+2)`-th
//!   root of unity and the resulting mapping-class-group representations
//!   at genus one and two, with irreducibility certificates.
//! * [`spectra`] — k-sweep orchestration, log-log decay fits, and
//!   fixed-subspace reports, plus deterministic CSV/JSON emission.
//!
//! Scalar genericity: the trigonometric evaluators in [`verlinde`] are
//! generic over [`scalar::Real`] so a single code path serves `f64` and
//! the double-double escalation type. The linear-algebra layers are
//! concrete over [`C64`]; coupling them to the generic scalar would buy
//! nothing because the tolerances are set for double precision.

pub mod error;
pub mod scalar;
pub mod spectra;
pub mod su2;
pub mod theta;
pub mod verlinde;

pub use error::{Error, Result};

/// Default real scalar for the linear-algebra layers.
pub type R64 = f64;
/// Default complex scalar for the linear-algebra layers.
pub type C64 = num_complex::Complex<f64>;
/// Wide real scalar used by the one-step precision escalation.
pub type Wide = twofloat::TwoFloat;
/// Dense complex matrix in the default scalar.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex vector in the default scalar.
pub type CVector = nalgebra::DVector<C64>;
