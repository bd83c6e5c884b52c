//! Exact q-analogue r-Whitney numbers of the second kind.
//!
//! `W_{m,r}[n,k]_q` is computed as a Laurent polynomial in `q` by its
//! triangular recurrence, and again through every closed form it satisfies:
//! vertical and horizontal recurrences, the explicit q-difference formula,
//! rational and exponential generating functions, complete homogeneous
//! symmetric functions, A-tableau enumeration, and the Hankel determinant
//! factorization of the normalized numbers `W*`. The [`verify`] module runs
//! those routes against each other over parameter grids.

pub mod cli;
pub mod error;
pub mod hankel;
pub mod qcalculus;
pub mod qcore;
pub mod series;
pub mod symm;
pub mod verify;
pub mod whitney;

pub use error::{Error, Result};
pub use qcore::{BigRational, LaurentPoly, PolyFraction};
pub use whitney::{WhitneyParams, WhitneyTable};
