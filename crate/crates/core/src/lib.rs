//! Exact-arithmetic engine for wreath double Hurwitz numbers, Hurwitz-Hodge
//! generating functions, and equivariant Gromov-Witten n-point functions of
//! one-dimensional orbifold targets with banded abelian gerbes.
//!
//! Everything is computed over Q(zeta_m); there is no floating point anywhere.
//!
//! Module layout:
//! - [`algebra`]: cyclotomic rationals and truncated multivariate series
//! - [`partitions`]: integer partitions, labeled partitions, Maya diagrams
//! - [`groups`]: finite abelian groups, cocycle extensions, gerbe targets
//! - [`characters`]: S_d and wreath product characters, central characters
//! - [`fock`]: the truncated infinite wedge and its operator calculus
//! - [`hurwitz`]: double and wreath double Hurwitz numbers, four ways
//! - [`toda`]: tau functions and the lowest 2-Toda equation
//! - [`hodge`]: Hurwitz-Hodge generating functions and their operator form
//! - [`gw`]: localization assembly of Gromov-Witten n-point functions

pub mod algebra;
pub mod partitions;
pub mod groups;
pub mod characters;
pub mod fock;
pub mod hurwitz;
pub mod toda;
pub mod hodge;
pub mod gw;

mod error;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
