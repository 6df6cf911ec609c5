//! Linear recurrences, exponential polynomials and their zero sets.

pub mod degeneracy;
pub mod exppoly;
pub mod recurrence;
pub mod zeros;

pub use degeneracy::{degeneracy_order, interleave, ratio_polynomial, residue_decompose, ResidueClass};
pub use exppoly::{ExpTerm, ExponentialPolynomial};
pub use recurrence::LinearRecurrence;
pub use zeros::{exppoly_zero_scan, value_set, zero_set, Progression, ZeroSetReport};
