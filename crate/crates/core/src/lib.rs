//! Exact continued-fraction arithmetic for the ruler-sequence constant.
//!
//! The constant sigma = [1, 2, 1, 4, 1, 2, 1, 8, ...] has partial quotients
//! s_i = 2^{nu_2(i+1)} (the largest power of two dividing i+1). This crate
//! builds that expansion, evolves the integer recurrences attached to its
//! structured prefixes, computes certified partial quotients and decimal
//! digits of sigma and sigma^2 from rational brackets, locates the doubly
//! exponentially large terms of sigma^2, and verifies the 8/3
//! irrationality-measure bound on concrete instances.

pub mod cf;
pub mod certified;
pub mod error;
pub mod recurrences;
pub mod ruler;
pub mod surd;

pub use cf::{cf_matrix, convergents, eval_cf, rational_to_cf, reversed_value};
pub use cf::{CFWord, Convergent, Int, Mat2, Rational};
pub use error::{Error, Result};
