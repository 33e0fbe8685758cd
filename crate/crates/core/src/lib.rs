//! Numerical conformal welding.
//!
//! Given a univalent map `f` of the unit disk onto a Jordan domain, the
//! toolkit extracts the positive kernel function `v₀` of the operator
//!
//! ```text
//! I_f[v](z) = −(1/2πi) ∮ (s f'(s)/f(s))² v(s)/(f(s) − f(z)) ds/s,   z ∈ 𝔻,
//! ```
//!
//! integrates `τ' = 1/v₀` to obtain the welding diffeomorphism, and recovers
//! the matching exterior map by Laurent extension of `f ∘ γ`. In the other
//! direction, [`inverse`] rebuilds `f` from a kernel function that is a
//! positive trigonometric polynomial.

// `!(x > a)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boundary;
pub mod circle;
pub mod error;
pub mod inverse;
pub mod kernel;
mod ode;
pub mod operator;
pub mod specialfn;
pub mod welding;

pub use boundary::{BoundaryMap, ExteriorMap, MapSource, Normalization};
pub use circle::{lift_circle_map, CircleDiffeo, CircleGrid, LaurentCoeffs, PeriodicSamples};
pub use error::{Result, WeldError};
pub use inverse::{InverseSolution, TrigPolyV0};
pub use kernel::{KernelFunction, SolveOptions};
pub use operator::NystromMatrix;
pub use specialfn::{Polynomial, RootSet};
pub use welding::{WeldStatus, WeldingResult};

pub use num_complex::Complex64;
