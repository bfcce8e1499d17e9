use std::path::{Component, Path};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::lexer::{tokenize, LexDiagnostic, TokenKind};
use super::operators::{applicable, MutationOperator, OperatorSet};

/// One single-change program variant.
///
/// `file` is relative to the workspace root with `/` separators so a mutant
/// applies unchanged to any copy of the workspace. `file_hash` is the SHA-256
/// of the pristine file and guards against stale databases.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mutant {
    pub id: String,
    pub file: String,
    pub line: usize,
    pub byte_offset: usize,
    pub class_name: String,
    pub operator: MutationOperator,
    pub original: String,
    pub replacement: String,
    pub file_hash: String,
}

impl Mutant {
    pub fn end_offset(&self) -> usize {
        self.byte_offset + self.original.len()
    }

    /// The mutated text of `source`, assuming `source` is the pristine file.
    pub fn splice(&self, source: &[u8]) -> Vec<u8> {
        let mut out = Vec::with_capacity(source.len() + self.replacement.len());
        out.extend_from_slice(&source[..self.byte_offset]);
        out.extend_from_slice(self.replacement.as_bytes());
        out.extend_from_slice(&source[self.end_offset()..]);
        out
    }
}

pub fn content_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn mutant_id(
    file: &str,
    byte_offset: usize,
    operator: MutationOperator,
    replacement: &str,
) -> String {
    let mut hasher = Sha256::new();
    hasher.update(file.as_bytes());
    hasher.update([0]);
    hasher.update(byte_offset.to_string().as_bytes());
    hasher.update([0]);
    hasher.update(operator.name().as_bytes());
    hasher.update([0]);
    hasher.update(replacement.as_bytes());
    hex::encode(&hasher.finalize()[..8])
}

/// Portable `/`-joined form of a relative path.
pub fn portable_path(path: &Path) -> String {
    path.components()
        .filter_map(|c| match c {
            Component::Normal(s) => Some(s.to_string_lossy().into_owned()),
            _ => None,
        })
        .collect::<Vec<_>>()
        .join("/")
}

/// Dotted class name from a path relative to the workspace: the source-root
/// prefix is dropped, the extension stripped and separators become dots.
pub fn class_name_for(file: &Path, source_root: &Path) -> String {
    let relative = file.strip_prefix(source_root).unwrap_or(file);
    let stem = relative.with_extension("");
    portable_path(&stem).replace('/', ".")
}

/// Mutants for one in-memory source file, in file order then
/// replacement-table order.
pub fn mutants_in_source(
    file: &str,
    class_name: &str,
    source: &str,
    operators: &OperatorSet,
) -> (Vec<Mutant>, Vec<LexDiagnostic>) {
    let lexed = tokenize(source);
    let file_hash = content_hash(source.as_bytes());
    let mut mutants = Vec::new();
    for (index, token) in lexed.tokens.iter().enumerate() {
        if token.kind != TokenKind::Operator {
            continue;
        }
        for (operator, replacement) in applicable(&lexed.tokens, index, operators) {
            mutants.push(Mutant {
                id: mutant_id(file, token.byte_offset, operator, replacement),
                file: file.to_string(),
                line: token.line,
                byte_offset: token.byte_offset,
                class_name: class_name.to_string(),
                operator,
                original: token.text.to_string(),
                replacement: replacement.to_string(),
                file_hash: file_hash.clone(),
            });
        }
    }
    (mutants, lexed.diagnostics)
}

#[derive(Debug, Clone, Default)]
pub struct FileMutants {
    pub class_name: String,
    pub mutants: Vec<Mutant>,
    pub diagnostics: Vec<String>,
}

/// Reads `file` (relative to `workspace_root`) and generates its mutants.
/// Files that are not valid UTF-8 yield no mutants and a diagnostic.
pub fn generate_mutants(
    workspace_root: &Path,
    file: &Path,
    source_root: &Path,
    operators: &OperatorSet,
) -> std::io::Result<FileMutants> {
    let bytes = std::fs::read(workspace_root.join(file))?;
    let portable = portable_path(file);
    let class_name = class_name_for(file, source_root);
    let source = match String::from_utf8(bytes) {
        Ok(s) => s,
        Err(e) => {
            return Ok(FileMutants {
                class_name,
                mutants: Vec::new(),
                diagnostics: vec![format!("{portable}: skipped, invalid UTF-8 ({e})")],
            })
        }
    };
    let (mutants, diags) = mutants_in_source(&portable, &class_name, &source, operators);
    Ok(FileMutants {
        class_name,
        mutants,
        diagnostics: diags
            .into_iter()
            .map(|d| format!("{portable}:{}:{}: {}", d.line, d.column, d.message))
            .collect(),
    })
}
