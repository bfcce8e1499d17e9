//! Mutant generation: lexing, operator contexts, mutant records and
//! workspace patching.

pub mod database;
pub mod discover;
pub mod lexer;
pub mod mutant;
pub mod operators;
pub mod patch;

pub use lexer::{tokenize, Token, TokenKind};
pub use mutant::{generate_mutants, mutants_in_source, FileMutants, Mutant};
pub use operators::{classify_operator_context, MutationOperator, OperatorContext, OperatorSet};
pub use patch::{apply_mutant, restore, PatchError};
