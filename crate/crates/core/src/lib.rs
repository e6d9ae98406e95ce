//! Networks of open stochastic processes and the empirical models they
//! induce.
//!
//! Processes are wired into a [`Network`], contracted into one closed global
//! process, and a stationary distribution of that process yields one joint
//! input/output distribution per node. Those node distributions form a
//! no-signalling [`EmpiricalModel`] whose contextuality is decided exactly.
//!
//! All algorithms are generic over [`Scalar`]. Exact work uses
//! [`Rational`]; the `Exact*` aliases name the common instantiations.

pub mod error;
pub mod scalar;
pub mod scenario;
pub mod process;
pub mod lp;
pub mod dynamics;
pub mod empirical;
pub mod contextuality;
pub mod format;
pub mod random;
pub mod montecarlo;

pub use error::{Error, Result};
pub use process::{Closure, Network, ProcessTensor};
pub use scalar::Scalar;
pub use scenario::{Distribution, EmpiricalModel, MeasurementScenario, Section, Variable};

/// Arbitrary-precision rational.
pub type Rational = num_rational::BigRational;

pub type ExactDistribution = Distribution<Rational>;
pub type ExactProcess = ProcessTensor<Rational>;
pub type ExactNetwork = Network<Rational>;
pub type ExactEmpiricalModel = EmpiricalModel<Rational>;

pub type FloatDistribution = Distribution<f64>;
pub type FloatProcess = ProcessTensor<f64>;
