//! Toolkit for dimension-truncated simplicial sets: simplex-category
//! arithmetic, finite simplicial sets with limits and colimits, marked
//! structures and mapping complexes, a backtracking lifting solver,
//! homology certificates, diagrams over the category of simplices with an
//! injective-fibrancy extension theorem, and a toy compactification gluing.

pub mod cat;
pub mod delta;
pub mod diagrams;
pub mod fixtures;
pub mod gluing;
pub mod homotopy;
pub mod lifting;
pub mod marked;
pub mod sset;
