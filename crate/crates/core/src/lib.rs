//! Chaos and Hoeffding decompositions for functionals of a Dirichlet–Ferguson
//! process on finitely many atoms, with the Pólya urn as the sampling model.

pub mod bayes;
pub mod chaos;
pub mod cli;
pub mod coeffs;
pub mod error;
pub mod hoeffding;
pub mod jacobi;
pub mod json;
pub mod kernel;
pub mod math;
pub mod measures;
pub mod poly;
pub mod polya;
pub mod ustat;
pub mod wright_fisher;

pub use error::{Error, Result};
pub use kernel::{SymmetricKernel, SymmetricStatistic};
pub use math::Rational;
pub use measures::{DiscreteBaseMeasure, MultiExponent, SimplexPoint};
pub use poly::SimplexPolynomial;
