//! Cubical cut-and-project sets: construction, exact window-partition
//! calculus, and empirical linear-repetitivity scans.
//!
//! The modules build on each other in this order: [`exact`] (symbolic reals
//! and integer lattices), [`diophantine`], [`shapes`], [`scheme`],
//! [`partition`], [`repetitivity`]. [`io`] and [`cli`] handle text formats
//! and the `quasilr` binary.

pub mod cli;
pub mod diophantine;
pub mod error;
pub mod exact;
mod fm;
pub mod io;
pub mod partition;
pub mod repetitivity;
pub mod scheme;
pub mod shapes;

pub use error::{Error, Result};
