//! Construction, verification and benchmarking of k-limited-access coding
//! matrices over GF(2).
//!
//! Given `n` target rows `G` in `F_2^t`, a scheme is a matrix `A_k` such that
//! every target is the sum of at most `k` rows of `A_k`. The goal is few rows.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod gf2;
pub mod harness;
pub mod schemes;
pub mod verify;

pub use error::{Error, Position, Result};
pub use gf2::{BitMatrix, BitVec};
pub use schemes::CoverScheme;
