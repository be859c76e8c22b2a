//! Combinatorial engine for moduli spaces of string diagrams: cell
//! enumeration, cellular chains, homology, slide quotients and gluing.

pub mod diagram;
pub mod error;
pub mod fatgraph;
pub mod homology;
pub mod moduli;
pub mod rational;
pub mod slideglue;

pub use diagram::{DirectedEdge, MetricStringDiagram, OutputMarking, Signature, StringDiagramType};
pub use error::{Error, Result};
pub use fatgraph::Fatgraph;
pub use moduli::{build_complex, CellComplex};
