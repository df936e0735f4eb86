//! Extreme Khovanov homology of link diagrams through Lando graphs and
//! independence complexes, with a homotopy-type reduction engine and
//! pretzel-link generators.

pub mod error;
pub mod graph;
pub mod homotopy;
pub mod khovanov;
pub mod lando;
pub mod linkdiag;
pub mod pretzel;
pub mod simplicial;
pub mod verify;

pub use error::{Error, Result};
pub use graph::Graph;
pub use homotopy::{reduce, HomotopyType, Outcome, ReductionResult, Step};
pub use khovanov::{ChainComplexMatrices, EnhancedState};
pub use lando::{LandoGraph, Provenance};
pub use linkdiag::{Chord, Crossing, KauffmanState, Label, LinkDiagram, Sign, SmoothedDiagram};
pub use pretzel::{CaseTag, GradingMetadata, PretzelSpec};
pub use simplicial::{Complex, HomologyEntry, HomologyProfile, SmithForm, SparseMatrix};

/// Default brute-force crossing cap.
pub const DEFAULT_CROSSING_CAP: usize = 16;
/// Default vertex cap for full independence-complex enumeration.
pub const DEFAULT_VERTEX_CAP: usize = 24;
