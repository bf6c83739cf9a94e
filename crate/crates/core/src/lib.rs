//! 4-ranks of class groups of biquadratic fields `K(sqrt n)` over a fixed
//! quadratic field `K = Q(sqrt z)`.
//!
//! The crate computes the closed-form prediction for `rk4 Cl(K(sqrt n))`, the
//! local conditions and candidate character sets behind it, exact first-moment
//! sums, and an independent class-group oracle to check predictions against.
//!
//! ```
//! use fourrank::{classgroup::ClassGroupConfig, selmer, QuadraticField};
//!
//! let k = QuadraticField::with_class_group(-1, &ClassGroupConfig::default())?;
//! assert_eq!(selmer::predicted_rk4(&k, 21)?, 1);
//! assert_eq!(selmer::xn_candidates(&k, 3)?.to_string(), "{-2, 1}");
//! # Ok::<(), fourrank::Error>(())
//! ```

pub mod arith;
pub mod classgroup;
pub mod error;
pub mod moments;
pub mod quadfield;
pub mod selmer;

pub use classgroup::AbelianGroupStructure;
pub use error::{Error, Result};
pub use quadfield::QuadraticField;

/// Guide chapters, compiled so their code blocks run as doctests.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    pub mod intro {}
    #[doc = include_str!("../../../book/src/arith.md")]
    pub mod arith {}
    #[doc = include_str!("../../../book/src/fields.md")]
    pub mod fields {}
    #[doc = include_str!("../../../book/src/classgroups.md")]
    pub mod classgroups {}
    #[doc = include_str!("../../../book/src/selmer.md")]
    pub mod selmer {}
    #[doc = include_str!("../../../book/src/moments.md")]
    pub mod moments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
