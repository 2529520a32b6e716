//! Circle packing engine: maximal and branched packings on combinatorial
//! discs, annuli, and tori, with generalized (singular and shifted) branching
//! via black-hole surgery, layout holonomy, and holonomy annihilation.

pub mod branching;
pub mod complex;
pub mod geometry;
pub mod layout;
pub mod solver;
pub mod workbench;
