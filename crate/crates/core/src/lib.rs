//! Exact spectral analysis of small graphs.
//!
//! * [`graph`]: graphs, complements, one-vertex unions and joins, graph6,
//!   canonical labeling and exhaustive enumeration.
//! * [`linalg`]: arbitrary-precision integer matrices, Bareiss determinants and
//!   Faddeev–LeVerrier characteristic polynomials.
//! * [`walk`]: walk matrices `[e, Ae, ..., A^(n-1) e]`, controllability, the
//!   odd-square-free condition, and the complement/union/join identities.
//! * [`sachs`]: characteristic polynomials from elementary subgraphs.
//! * [`family`]: alternating union/join families and starter scans.
//! * [`census`]: generalized-spectrum fingerprints and brute-force DGS checks.

pub mod census;
pub mod error;
pub mod factor;
pub mod family;
pub mod graph;
pub mod linalg;
pub mod sachs;
pub mod walk;

pub use error::{Error, Result};
pub use graph::Graph;
pub use linalg::{IntMatrix, IntPoly};
