//! Real algebraic varieties invariant under the hyperoctahedral group `B_n`.
//!
//! The crate builds `B_n`-invariant polynomials from the power-sum-free
//! generators `σ_r(x_1², …, x_n²)`, reduces the invariant quartic
//! `A σ2 + B σ1² + C σ1 + D` to an affine quadric on the positive orthant,
//! predicts the number and type of connected components of its zero locus
//! by chamber gluing, and checks those predictions with a grid-based
//! component counter.
//!
//! Module map:
//!
//! * [`invariants`]: partitions, the σ-monomial basis, evaluation and the
//!   signed-permutation action.
//! * [`quadric`]: the substituted quadric, its closed-form spectrum,
//!   affine classification and wall-contact tests.
//! * [`topology`]: mirror arrangement, orbit gluing and the predictor.
//! * [`oracle`]: numerical component counting, nesting and mesh export.
//! * [`sweep`]: coefficient-lattice sweeps comparing predictor and oracle.
//! * [`cli`]: the `coxvar` command line.

pub mod cli;
pub mod error;
pub mod invariants;
pub mod oracle;
pub mod quadric;
pub mod sweep;
pub mod topology;

pub use error::{Error, Result};
pub use invariants::{InvariantPolynomial, Partition, SignedPermutation};
pub use oracle::{ComponentReport, GridSpec};
pub use quadric::{QuadricClass, QuadricForm, QuarticCoefficients, SpectralData};
pub use topology::{GeometricCharacteristic, Kind};

/// Anything that can be evaluated at a point of `R^n`.
pub trait Evaluate: Sync {
    /// Ambient dimension.
    fn dim(&self) -> usize;

    /// Value at `x`; `x.len()` must equal [`Evaluate::dim`].
    fn value(&self, x: &[f64]) -> f64;
}
