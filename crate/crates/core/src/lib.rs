//! Exact construction of a 1/2-Hölder self-affine function `u`, the
//! intrinsic graph `{(0, y, t, u(t))}` it defines in `H^(k-1) x R`, and
//! certified checks of its Hölder, oscillation, cone and blow-up
//! properties.
//!
//! Module map:
//! - [`numerics`]: exact rationals, rational-endpoint intervals.
//! - [`selfsim`]: the function system, iterates `u_n`, enclosures of `u`,
//!   difference quotients and oscillation witnesses.
//! - [`carnot`]: group arithmetic, the intrinsic graph, cone and blow-ups.
//! - [`verify`]: verification campaigns producing JSON reports.
//! - [`cli`]: command implementations and figure writers.

pub mod carnot;
pub mod cli;
pub mod error;
pub mod numerics;
pub mod selfsim;
pub mod verify;

pub use error::{Error, Result};
pub use numerics::{IntervalR, Rational};
