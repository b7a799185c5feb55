//! Numerical verification of Hermite-Hadamard and Fejér type inequalities for
//! Riemann-Liouville fractional integrals.
//!
//! * [`special`]: gamma function and closed-form power rules
//! * [`quadrature`]: adaptive Gauss-Kronrod integration, endpoint-weighted
//!   variants and cumulative integral tables
//! * [`models`]: test functions, weights and their hypothesis checks
//! * [`fractional`]: the operators J_{a+}^α and J_{b−}^α
//! * [`engine`]: evaluators returning [`InequalityReport`]s

pub mod engine;
pub mod fractional;
pub mod models;
pub mod quadrature;
pub mod special;

pub use engine::{Candidate, EngineError, EvalContext, InequalityReport, InstanceRecord, Side, Tolerance, Verdict};
pub use fractional::{FracOrder, FractionalError, MidpointPair};
pub use models::{parse_function, parse_weight, Claim, FunctionModel, Interval, ModelError, WeightModel};
pub use quadrature::{QuadConfig, QuadError, QuadResult};
pub use special::{gamma, MathError, PosReal};
