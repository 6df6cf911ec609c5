//! Unit equations `a_1 x_1 + ... + a_k x_k = 0` over finitely generated groups.

pub mod classes;
pub mod partitions;
pub mod solve;

pub use classes::{compare_with_bounds, solve_units, weak_proportionality_classes, UnitReport, WeakProportionalityReport};
pub use partitions::{all_partitions, suitable_partitions, SetPartition};
pub use solve::{enumerate_solutions, normalize, proportionality_classes, ProportionalityClass, SubgroupGamma, UnitInstance, UnitSolution};
