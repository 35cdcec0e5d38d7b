//! Exact computations in extended rational Cherednik algebras, their
//! spherical subalgebras and the deformed double current algebra obtained by
//! interpolating in the rank.

pub mod coeffring;
pub mod cherednik;
pub mod interp;
pub mod linalg;
pub mod guay;
pub mod polyrep;
pub mod report;
pub mod spherical;
pub mod symcomb;
pub mod vlrep;

pub use coeffring::{interpolate_in_k, Coeff, CoeffError, ParamMono, ParamPoly, Rational};
pub use symcomb::{Permutation, YoungDiagram};
