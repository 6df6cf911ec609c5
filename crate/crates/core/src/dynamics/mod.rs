//! Monomial dynamical systems: orbits, exact and modular evaluation, intersection scans.

pub mod eval;
pub mod intersect;
pub mod map;
pub mod modular;
pub mod sync;
pub mod theorems;
pub mod threshold;

pub use eval::{evaluate_exact, is_zero_at, ExactConfig, FactoredPoint};
pub use intersect::{intersection_set, IntersectionReport, Member, Mode, ScanConfig, Verification};
pub use map::{orbit_point, Hypersurface, MonomialMap, OrbitPoint, Term};
pub use modular::{default_primes, evaluate_modular, ModPrime, ModularData, Verdict};
pub use sync::{synchronized_intersection, SyncReport};
pub use theorems::{applicable_theorems, HypothesisReport, TheoremId};
pub use threshold::{dominant_term_threshold, ThresholdReport};
