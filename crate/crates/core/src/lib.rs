//! Meromorphic null curves in `SL2(C)` and `C^3`.
//!
//! The crate builds null curves from spinor data, moves between `SL2(C)` and
//! `C^3` with the transforms `T` and `T^{-1}`, analyses ends of the Bryant
//! representation of CMC-1 surfaces, projects to hyperbolic and de Sitter
//! space, and corrects periods with a Newton solver.

pub mod exact;
pub mod exec;
pub mod invariants;
pub mod periods;
pub mod poly;
pub mod series;
pub mod sl2curve;
pub mod spaceforms;
pub mod spinor;
pub mod wire;

pub use exec::Execution;
pub use series::{Domain, MeroFunction, SeriesError};
