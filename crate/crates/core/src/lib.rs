//! Two-stage reconstruction of a depth-dependent dielectric profile from
//! backscattered wave data: a globally convergent Carleman-weighted
//! inversion for the potential `r(x)`, followed by recovery of `c(y)`.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod convexify;
pub mod error;
pub mod forward;
pub mod grid;
pub mod io;
pub mod pipeline;
pub mod preprocess;
pub mod recover;
pub mod selftest;

pub use error::{Error, Result};
