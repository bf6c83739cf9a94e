//! Class groups of quadratic and biquadratic fields.
//!
//! [`class_group`] collects relations among prime ideals of norm below the
//! Minkowski bound and reads the group off a Smith normal form.
//! [`class_group_forms`] is an independent check for imaginary quadratic fields.

mod forms;
mod group;
mod ideal;
pub mod io;
pub mod lattice;
mod order;
mod relations;

pub use forms::{class_group_forms, is_fundamental_discriminant, reduced_forms, Form};
pub use group::AbelianGroupStructure;
pub use ideal::{factor_prime, PrimeIdeal};
pub use order::{Elt, FieldSpec, NumberFieldOrder};
pub use relations::{
    analytic_class_number, class_group, ClassGroupConfig, ClassGroupResult, OracleStatus, Relation,
    RelationMatrix,
};
