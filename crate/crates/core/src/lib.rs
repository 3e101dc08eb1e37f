//! Exact and certified computations for Haar measure on a few concrete
//! groups, product measures with Fubini/Tonelli checks, and the uniqueness
//! argument for left-invariant measures.

pub mod error;
pub mod numeric;
pub mod group;
pub mod setalg;
pub mod report;
pub mod simple;
pub mod measure;
pub mod haar;
pub mod product;
pub mod uniqueness;

pub use error::{Error, Result};
pub use numeric::{Bound, ExtNonneg, Rat, VecQ};
pub mod sample;
pub mod selftest;
