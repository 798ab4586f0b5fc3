//! Colorful simplicial complexes and the machinery around them:
//!
//! * [`complex`] — bitset faces, contiguous color blocks, colorful f-vectors.
//! * [`collapse`] — elementary `d`-collapses, exhaustive collapsibility search
//!   with witnesses, vertex splitting and boosting with witness transport.
//! * [`bounds`] — closed-form counts of admissible colorful sets, density and
//!   threshold functions, and verdict routines for the face-count and
//!   Helly-witness guarantees.
//! * [`extremal`] — the tight construction matching the admissible-count
//!   bound exactly, plus its geometric realization checks.
//! * [`geometry`] — rational convex bodies, exact LP feasibility, nerve
//!   computation, and generic hyperplane sampling.
//! * [`exterior`] — exterior-algebra primitives (wedge, interior product,
//!   compound matrices, generic block bases) and the rank certificate for the
//!   face-count bound.
//! * [`campaign`] — bulk verification runs (exhaustive or randomized) used by
//!   the CLI and the acceptance suite.
//!
//! All counting is exact (big integers / rationals); densities and thresholds
//! are floating point. Randomized routines take explicit seeds and are
//! deterministic across runs.

pub mod bounds;
pub mod campaign;
pub mod collapse;
pub mod complex;
pub mod exterior;
pub mod extremal;
pub mod geometry;
pub mod linalg;
pub mod rational;

pub use complex::{ColorVector, ColoredComplex, Face};
