// `!(x > tol)` is used on purpose so that NaN fails the check, and the
// factorization kernels read best with explicit indices.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bounds;
pub mod cli;
pub mod error;
pub mod numerics;
pub mod rng;
pub mod sketching;
pub mod symplectic;
pub mod wave2d;

pub use error::{Error, Result};
