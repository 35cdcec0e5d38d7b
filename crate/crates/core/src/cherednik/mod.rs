//! The extended rational Cherednik algebra `H_{t,k}(n, r)` in PBW normal
//! form `x^a · (slots) · π · y^b`.
//!
//! Products are computed by letting the generators of the left factor act
//! one at a time on the normal form of the right factor. The only
//! non-trivial move is `y_j` passing an `x`, which produces the commutator
//! terms with `t`, `k`, a transposition and a slot transposition.

mod algebra;
mod element;
mod monomial;
mod slots;

pub use algebra::{CherednikAlgebra, Generator};
pub use element::{CherednikElement, ElementJson, TermJson};
pub(crate) use element::{push_term, Terms};
pub use monomial::CherednikMonomial;
pub use slots::{MatrixBasisLabel, SlotAlgebra, SlotMatrix, MAX_R};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("parameter mismatch: ({}, {}) vs ({}, {})", left.0, left.1, right.0, right.1)]
    ParamMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("site {site} is out of range 1..={n}")]
    InvalidSite { site: usize, n: usize },
    #[error("invalid slot label: {0}")]
    InvalidLabel(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("parse error: {0}")]
    Parse(String),
}
