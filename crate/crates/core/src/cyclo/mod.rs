//! Cyclotomic scalars: exact field arithmetic, monomial scalars and their relations.

pub mod embed;
pub mod factor;
pub mod field;
pub mod relations;
pub mod scalar;

pub use embed::{embed_numeric, ComplexApprox, Embedding};
pub use field::{cyclotomic_polynomial, euler_phi, CyclotomicNumber};
pub use relations::{
    group_order_d, is_multiplicatively_independent, multiplicative_relations, ratio_order,
    IndependenceReport, RelationLattice,
};
pub use scalar::MonomialScalar;
