//! Exact tooling for concatenation subshifts: words and Hamming geometry,
//! block complexity, separated codebooks, the two inductive families
//! (equal-length level words and loud/quiet phases), empirical measures with
//! covering numbers, and arithmetic sequences.

pub mod codebook;
pub mod error;
pub mod lang;
pub mod magnitude;
pub mod measures;
pub mod sam;
pub mod run;
pub mod schedule;
pub mod seq;
pub mod sequences;
pub mod thm1;
pub mod thm2;
pub mod words;

pub use error::{Error, Result};
