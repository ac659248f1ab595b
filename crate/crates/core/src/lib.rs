//! Brauer monoids, their Green's relations and the R- and L-cross-sections
//! built from them.
//!
//! Diagrams compose left to right: in `a * b` the right pins of `a` are
//! joined to the left pins of `b`, and closed loops are dropped.

pub mod canonical;
pub mod classify;
pub mod diagram;
pub mod error;
pub mod green;
pub mod hd;
pub mod iso;
pub mod perm;
pub mod section;
pub mod text;

pub use canonical::{build_canonical, extract_params, ParamTable, S2Value, XYParams};
pub use diagram::{BrauerDiagram, CompositionResult, Point, MAX_N};
pub use error::{Error, Result};
pub use green::{left_cups, related, right_cups, GreenRelation, PartialMatching};
pub use hd::{d_from_is, h_cross_section_check, idempotents, DCrossSection};
pub use perm::{PartialInjection, Permutation};
pub use section::{verify_cross_section, CrossSection, SectionKind, VerifyReport};
