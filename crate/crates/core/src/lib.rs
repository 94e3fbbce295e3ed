//! Projective group algebras over finite groups and integer lattices.
//!
//! The crate models the algebra spanned by symbols `x(a)`, one per group
//! element, with product `x(a)x(b) = e^{iα(a,b)} x(ab)` for a 2-cocycle `α`.
//! On top of that it provides the integration functional `∫x(a) = δ_{e,a}`,
//! Fourier analysis over formal, matrix and character representations,
//! derivations and automorphisms on abelian algebras, and the explicit
//! clock and shift realization of the algebra of `Z_n²`.
//!
//! Modules, bottom-up:
//!
//! - [`groups`]: finite groups from tables, `(Z_n)^D` and the lattice `Z^D`.
//! - [`cocycles`]: validation, gauge transformations, normalization.
//! - [`algebra`]: elements, product, involution, regular representations.
//! - [`integration`]: the integral, completeness, inversion, scalar product.
//! - [`harmonic`]: transforms, convolution theorems, Plancherel, Moyal star.
//! - [`calculus`]: derivations and automorphisms.
//! - [`clockshift`]: clock and shift matrices and the trace integral.
//! - [`report`]: pass/fail records shared by every check.

pub mod algebra;
pub mod calculus;
pub mod clockshift;
pub mod cocycles;
pub mod groups;
pub mod harmonic;
pub mod integration;
pub mod phase;
pub mod report;
pub mod sampling;

pub use algebra::{Algebra, AlgebraElement, AlgebraError, RegularRepPair};
pub use cocycles::{Cocycle, CocycleError, GaugePhase};
pub use groups::{Group, GroupElement, GroupError, GroupKind};
pub use integration::GroupFunction;
pub use report::{CheckRecord, VerificationReport};

/// Complex scalar used for every coefficient and matrix entry.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;

/// Seed used by every sampled check unless the caller supplies another.
pub const DEFAULT_SEED: u64 = 0x5EED;
