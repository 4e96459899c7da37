//! The word model of U_q⁻.
//!
//! Elements are ℚ(q)-combinations of words in the generators f_i; the algebra relations
//! are imposed only through the Kashiwara form, whose radical is the Serre ideal.
//! [`UqMinus`] owns the root datum together with the read-mostly caches (word spaces,
//! weight bases) that every form computation goes through.

mod algebra;
mod dual;
mod elt;
mod kashiwara;

pub use algebra::{UqMinus, WeightBasis};
pub use dual::{Dual, WordSpace};
pub use elt::{Word, WordElt, WordTensor};
pub use kashiwara::KashiwaraDecomposition;

use thiserror::Error;

use crate::rootdata::RootVec;
use crate::scalars::ScalarError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("weight of height {height} exceeds the configured bound {bound}")]
    HeightBound { height: i64, bound: i64 },
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("degrees {0} and {1} differ")]
    DegreeMismatch(RootVec, RootVec),
    #[error("element is not congruent to a crystal element modulo qL(∞): {0}")]
    NotCrystalAligned(String),
    #[error("Gram matrix of pivots is singular")]
    Singular,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}
