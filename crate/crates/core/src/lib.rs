//! Parameter sensitivities of one-parameter semigroups generated by
//! degree-preserving polynomial-coefficient differential operators.
//!
//! The crate works on the space of polynomials `R(I)` and its algebraic dual,
//! represented by moment sequences. A parametric generator
//! `A_θ = Σ p_i(x)·q_i(θ)·∂^i` with `deg p_i ≤ i` maps every space of
//! polynomials of degree `≤ N` into itself, so every object in sight has an
//! exact finite (upper-triangular) matrix representation.
//!
//! The central quantity is
//!
//! ```text
//! ∂/∂θ ⟨ξ | U_θ(t)* π₀⟩ |_{θ=0} = ⟨V₀(t) ξ | ν⟩,
//!     V₀(t) = Σ_{n≥1} tⁿ/n! A₀^{n-1},   ν = (∂A_θ/∂θ|₀)* π₀,
//! ```
//!
//! computed by [`sensitivity::semigroup_sensitivity`] and checked against a
//! finite-difference oracle in [`oracle`] that never touches the sensitivity
//! formula.
//!
//! Module map:
//!
//! * [`scalar`], [`polynomial`]: exact rational and `f64` polynomial arithmetic.
//! * [`operator`]: generator families and their matrices.
//! * [`duality`]: moment functionals, pairing and adjoint action.
//! * [`semigroup`]: `e^{tM}` and `∫₀ᵗ e^{sM} ds` by scaling and squaring.
//! * [`sensitivity`]: `ν`, the stationary-derivative identity, the product
//!   condition and the semigroup sensitivity.
//! * [`models`]: Wright–Fisher and Ornstein–Uhlenbeck families and the
//!   Wright–Fisher quasi-eigenbasis recursion.
//! * [`oracle`]: central differences with Richardson extrapolation.
//! * [`errata`], [`validate`], [`cli`]: discrepancy reports, validation
//!   suites, command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod duality;
pub mod errata;
pub mod error;
pub mod models;
pub mod operator;
pub mod oracle;
pub mod polynomial;
pub mod scalar;
pub mod semigroup;
pub mod sensitivity;
pub mod validate;

pub use duality::MomentFunctional;
pub use error::{Error, Result};
pub use operator::{GeneratorFamily, GeneratorTerm, OperatorMatrix};
pub use polynomial::{Interval, Polynomial};
pub use scalar::{Rational, Scalar};
pub use sensitivity::SensitivityReport;
