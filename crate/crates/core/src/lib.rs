//! Feature selection by upper-tail dependence with a binary target.
//!
//! The crate is `no_std` (it needs `alloc`). It holds the A2 Archimedean
//! copula and its estimators, the three feature selectors, the in-repo
//! learners and the evaluation metrics. File formats, the CLI and the
//! thread pool live in the `tailsel` companion crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod copula;
pub mod data;
pub mod error;
pub mod eval;
pub mod exec;
pub mod kendall;
pub mod learn;
pub mod numeric;
pub mod rank;
pub mod rng;
pub mod select;
pub mod synth;

pub use error::{Error, Result};
pub use exec::{Executor, Sequential};
