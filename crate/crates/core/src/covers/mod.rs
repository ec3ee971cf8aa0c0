//! Unramified double covers of nodal conic-line arrangements through their
//! gluing data, and the covers induced by double planes.

mod arrangement;
mod cover;
pub mod gf2;
mod gluing;
mod induced;
mod salmon;

pub use arrangement::{intersect_components, Component, NodalArrangement, Node};
pub use cover::{build_cover, AbstractCover, Sheet};
pub use gluing::{canonical_form, enumerate_pic2, equivalent, flip, tensor, GluingClass, GluingData};
pub use induced::{induced_gluing, induced_gluing_traced, induced_gluing_with, BranchDivisor, InducedOptions};
pub use salmon::{salmon_check, SalmonReport};
