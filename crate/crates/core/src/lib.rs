//! SLH quantum Markov models, series-product perturbations, and numerical
//! certification of asymptotic model equivalence.
//!
//! - [`operator`]: dense complex operators and superoperators
//! - [`slh`]: the series-product algebra on `(S, L, H)` triples
//! - [`semigroup`]: vacuum transfer semigroups and exponential-state overlaps
//! - [`oracle`]: a collision-model integrator used as an independent check
//! - [`zoo`]: model families and convergence experiments
//! - [`random`]: seeded generators for tests and experiments

pub mod block;
pub mod error;
pub mod operator;
pub mod oracle;
pub mod random;
pub mod semigroup;
pub mod slh;
pub mod zoo;

pub use error::{Error, Result};
pub use operator::{Operator, Superoperator, C64};
pub use semigroup::{ExponentialState, Segment};
pub use slh::{DampingForm, GaugeElement, SlhModel};
