//! Combinatorial kernel for bordered sutured Floer homology.
//!
//! Modules, bottom up: arc diagrams, strands algebras, grading groups,
//! Heegaard diagrams, nice-diagram invariants, and the homological algebra of
//! type D, A-infinity and type DA structures.

pub mod arc_diagram;
pub mod diagram;
pub mod error;
pub mod fuzz;
pub mod grading;
pub mod half;
pub mod homalg;
pub mod invariants;
pub mod linalg;
pub mod ops;
pub mod strands;

pub use arc_diagram::{ArcDiagram, Chord};
pub use diagram::{Domain, Generator, HeegaardDiagram};
pub use error::{Error, Result};
pub use grading::{GradingCoset, GradingElement, GradingGroup, GradingReduction, Stabilizer};
pub use half::Half;
pub use strands::{AlgElement, Algebra, Elem, Strands};
