//! Cylindrical networks: exact characteristic polynomials, plethystic variants,
//! LGV path sequences, recurrence checks and combinatorial oracles.

pub mod algebra;
pub mod charpoly;
pub mod conjectures;
mod graph;
pub mod network;
pub mod plethysm;
pub mod paths;
pub mod recurrence;
pub mod families;
