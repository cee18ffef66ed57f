//! Exact operator-valued free probability over the Toeplitz matricial algebra
//! `C^N`: noncrossing partitions, a free algebra with rational coefficients,
//! scalar spaces specified by free cumulants, Toeplitz-valued moments and
//! cumulants, and truncated `C^N`-valued R-transform calculus.

pub mod cli;
pub mod error;
pub mod nc_lattice;
pub mod ncpoly;
pub mod rational;
pub mod scalar_space;
pub mod series;
pub mod toeplitz;

pub use error::{Error, Result};
pub use nc_lattice::{NcLattice, NcPartition};
pub use ncpoly::{parse_expr, Alphabet, NcPolynomial, Symbol, Word};
pub use rational::Rational;
pub use scalar_space::{CumulantSpec, Distribution, MomentFunctional};
pub use series::{BSeries, IndexWord};
pub use toeplitz::{BScalar, QTuple, TVariable};
