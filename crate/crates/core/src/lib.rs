//! Spectral triples built from weighted discrete groups.

pub mod exact;
pub mod groups;
pub mod report;
pub mod weights;
pub mod algebra;
pub mod triple;
pub mod category;
pub mod functor;
