//! Word-packed GF(2) vectors and matrices.

mod bitvec;
mod circuit;
mod matrix;

pub use bitvec::BitVec;
pub use circuit::{find_dependency, find_small_circuit, minimize_to_circuit, Circuit};
pub use matrix::BitMatrix;

pub(crate) use matrix::{content_lines, parse_header, parse_row, Eliminator};
