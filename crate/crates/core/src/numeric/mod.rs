//! Small numerical toolkit: adaptive quadrature and bracketed 1-D searches.

mod optim;
mod quad;

pub use optim::{bisect_increasing, brent_maximize, Maximum};
pub use quad::{integrate, Integral};
