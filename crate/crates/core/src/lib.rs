//! Primal-dual calculus for pairs of maximally monotone operators on ℝⁿ.
//!
//! Operators are carried by their resolvents. On top of that representation
//! the crate provides the dual pair `(A⁻¹, B^{−∨})`, membership oracles for
//! the primal and dual solution sets, the Douglas–Rachford and
//! Peaceman–Rachford operators with their iteration drivers, projection
//! formulas for `Z + K` under paramonotonicity, and a fixture harness that
//! turns each identity into a numerical check.

pub mod bestapprox;
pub mod duality;
pub mod error;
pub mod harness;
pub mod operator;
pub mod point;
pub mod rng;
pub mod splitting;
pub mod zoo;

pub use duality::{DualPair, Membership};
pub use error::{Error, Result};
pub use operator::{is_paramonotone_linear, ResolventOperator, DEFAULT_GRAPH_TOL};
pub use point::Point;
pub use rng::SampleRng;
pub use splitting::{IterationTrace, SplittingOperator};
