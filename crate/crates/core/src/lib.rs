//! Mutation testing orchestration and branch-versus-mutation coverage
//! analytics for build-system-agnostic projects.

pub mod analysis;
pub mod campaign;
pub mod cli;
pub mod jsonl;
pub mod mutgen;
pub mod sampling;
