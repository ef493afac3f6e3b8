//! Frame representations of finite-dimensional quantum mechanics.
//!
//! States and effects on `C^d` are mapped to real functions on a finite
//! label set through a frame and its duals. The crate provides the frame
//! constructions (Wootters, Leonhardt, random, positive), canonical and
//! closed-form duals, the three equivalent Born-rule calculi, the algebra of
//! representation space, negativity diagnostics, and a numerical witness
//! that a positive frame never has a positive dual.

// `!(x > 0.0)` guards are used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod frames;
pub mod io;
pub mod operator_space;
pub mod nogo;
pub mod quasiprob;
pub mod star_algebra;

pub use error::{QframeError, Result};
