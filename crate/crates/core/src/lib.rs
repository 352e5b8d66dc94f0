//! Rigid graph synthesis with automorphism certificates, and exact metric
//! tooling for graphs of spaces.

pub mod aut;
pub mod graph;
pub mod gos;
pub mod groups;
pub mod metric;
pub mod synth;
