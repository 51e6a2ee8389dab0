// SPDX-License-Identifier: Apache-2.0

//! Synthesis and design space exploration for minimum-depth parallel prefix adders.
//!
//! The crate is organized around a pipeline:
//!
//! 1. [`prefix_graph`] — prefix network representation, functional simulation,
//!    classical regular adders, and a line-oriented on-disk format.
//! 2. [`pgg`] — bottom-up enumeration of depth-`log2 n`, fan-out-constrained
//!    prefix graphs with structural pruning, plus quasi-random sampling.
//! 3. [`features`] — per-design learning features (size, mfo, sum-path-fan-out
//!    of the deep output nodes, and tool settings).
//! 4. [`oracle`] — the evaluation stand-in mapping a design to (area, power,
//!    delay), either a deterministic synthetic cost model or an ingested CSV.
//! 5. [`gp`] / [`pal`] — Gaussian process regression and the Pareto active
//!    learning loop built on it.
//! 6. [`alpha_sweep`] — the passive scalarization baseline.
//! 7. [`pareto`] — dominance, frontier extraction, hypervolume and its error.

pub mod alpha_sweep;
pub mod features;
pub mod gp;
pub mod oracle;
pub mod pal;

pub mod pareto;
pub mod pgg;
pub mod prefix_graph;
