//! Seed-set constructions: the four-octant combiner, thickness-1 squares,
//! periodic families, and the case dispatch for thickness-4 perfect and
//! thickness-7+ optimal grids, all backed by a witness catalog.

pub mod builder;
pub mod catalog;
pub mod combine;
pub mod family;
pub mod milestones;
pub mod thickness1;

pub use builder::Builder;
pub use catalog::{Catalog, CatalogEntry, Provenance};
pub use combine::combine;
pub use family::{discover_family, FamilyPattern, FamilySpec};
pub use milestones::{extract_milestones, Milestone, MilestoneTime, Region};
pub use thickness1::gen_thickness1;
