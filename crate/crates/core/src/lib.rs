//! Bisecting families of measures with affine hyperplane arrangements.
//!
//! - [`parity`]: 2-adic valuations and multinomial parities.
//! - [`gf2poly`]: the power-of-sum ideal membership test over `F_2`.
//! - [`lambda`]: verdicts on triples `(d, j, k)` and frontier tables.
//! - [`momentcurve`]: exact bisecting arrangements for intervals on the moment curve.
//! - [`testmap`]: the sign test map on point-cloud measures and a numerical solver.
//! - [`cli`]: the `hyperbisect` command line.

pub mod cli;
pub mod error;
pub mod gf2poly;
pub mod lambda;
pub mod momentcurve;
pub mod parity;
pub mod rational;
pub mod testmap;
pub mod upoly;

pub use error::{Error, Result};
