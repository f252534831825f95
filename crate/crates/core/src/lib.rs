//! Exact and asymptotic dimensions of isotypic components of the tensor
//! representations `(C^N)^{⊗n}` of the symmetric group `S_n`.
//!
//! The crate is organised bottom-up:
//!
//! - [`diagrams`]: partitions, cells, hooks, contents and rotated profiles.
//! - [`exact`]: arbitrary-precision dimensions, exact Plancherel and
//!   Schur–Weyl measures, enumeration of `Y_N^n` and the partition count.
//! - [`rsk`]: exact samplers for both measures via row insertion.
//! - [`shape`]: the limit shapes `Ω`, `Ω_c` and the special functions
//!   (`φ_k`, `H̃_c`, `G_c`, `J̃_c`) attached to them.
//! - [`functionals`]: the hook integral, the `ρ` functional, the half-Sobolev
//!   norm and the closed-form lemmas, each with a numerical counterpart.
//! - [`harness`]: deterministic experiments and the verification report
//!   driven by the `ytensor` command line tool.

pub mod diagrams;
pub mod error;
pub mod exact;
pub mod functionals;
pub mod harness;
pub mod quadrature;
pub mod rsk;
pub mod shape;

pub use diagrams::{Cell, Partition, PiecewiseLinear, Profile};
pub use error::{Error, Result};
pub use exact::{ExactDims, ExactMeasure, HighPrecision, MeasureKind};
pub use functionals::{FunctionalReport, QuadratureConfig};
pub use shape::ShapeParam;
