//! Exact tools for orbit/hypersurface intersections of monomial dynamical systems,
//! zero sets of linear recurrences and unit equations, together with the explicit
//! counting bounds these problems obey.

pub mod bounds;
pub mod cyclo;
pub mod dynamics;
pub mod error;
pub mod lrs;
pub mod numeric;
pub(crate) mod par;
pub mod poly;
pub mod reports;
pub(crate) mod serde_big;
pub mod units;

pub use error::{Error, Result};
