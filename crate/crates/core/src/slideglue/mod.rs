//! Slides, slide classes and the quotient complex, and gluing of diagrams.

mod glue;
mod json;
mod quotient;
mod sample;
mod slides;

pub use glue::{glue_metric, glue_signature, GlueOptions, GluedDiagram, GluingSpec};
pub use json::{parse_spec, GluingJson, GluingResultJson, GLUING_SCHEMA};
pub use quotient::{quotient_complex, slide_classes, type_index, SlideClassPartition};
pub use sample::{random_interior_point, random_spec, sample_glue_well_definedness, Vary, WellDefinedCase};
pub use slides::{slide, slide_neighbors, RejectedSlide, SlideNeighbors, SlidePolicy};
