//! Signed graphs, their corona products, and the corona growth model.
//!
//! The crate is organized around a small set of building blocks:
//!
//! - [`graph`]: the [`SignedGraph`] type with degree, balance and matrix
//!   queries.
//! - [`marking`]: node markings (canonical, plurality, explicit) that drive
//!   the sign rule of the corona product.
//! - [`corona`]: the corona product of two signed graphs, predicted
//!   edge/triad statistics, and the balance classification of the product.
//! - [`spectra`]: closed-form eigenpairs of corona products together with a
//!   dense Jacobi eigensolver used as a verification oracle.
//! - [`growth`]: iterated corona products of a seed graph with itself,
//!   exact per-step counters, closed-form degrees and the branch spectrum.
//! - [`ingest`]: edge-list parsing for real signed networks and the triad
//!   census / profile computation.
//! - [`seedfit`]: searching for seed graphs whose grown corona graphs match
//!   a target network profile.
//! - [`sgio`]: the `.sg` edge-list file format.

pub mod corona;
pub mod graph;
pub mod growth;
pub mod ingest;
pub mod marking;
pub mod matrix;
pub mod seedfit;
pub mod sgio;
pub mod spectra;

pub use graph::{DegreeProfile, GraphError, Sign, SignedGraph};
pub use marking::{MarkingScheme, MarkingVector};
pub use matrix::SymmetricMatrix;
