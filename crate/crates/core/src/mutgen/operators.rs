//! The nine mutation operators and the context rules that decide which of
//! them may touch a given operator token.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::lexer::{Token, TokenKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MutationOperator {
    /// Binary arithmetic operator replacement.
    #[serde(rename = "AOR-B")]
    AorB,
    /// Shortcut arithmetic (increment/decrement) replacement.
    #[serde(rename = "AOR-S")]
    AorS,
    /// Unary arithmetic operator replacement.
    #[serde(rename = "AOR-U")]
    AorU,
    #[serde(rename = "LOR")]
    Lor,
    #[serde(rename = "SOR")]
    Sor,
    #[serde(rename = "ROR")]
    Ror,
    #[serde(rename = "COR")]
    Cor,
    /// Conditional operator deletion: removes a prefix `!`.
    #[serde(rename = "COD")]
    Cod,
    /// Shortcut assignment operator replacement.
    #[serde(rename = "SAOR")]
    Saor,
}

const AOR_B: &[&str] = &["+", "-", "*", "/", "%"];
const AOR_S: &[&str] = &["++", "--"];
const AOR_U: &[&str] = &["+", "-"];
const LOR: &[&str] = &["&", "|", "^"];
const SOR: &[&str] = &["<<", ">>", ">>>"];
const ROR: &[&str] = &["<", "<=", ">", ">=", "==", "!="];
const COR: &[&str] = &["&&", "||"];
const SAOR: &[&str] = &[
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>=",
];

impl MutationOperator {
    pub const ALL: [MutationOperator; 9] = [
        MutationOperator::AorB,
        MutationOperator::AorS,
        MutationOperator::AorU,
        MutationOperator::Lor,
        MutationOperator::Sor,
        MutationOperator::Ror,
        MutationOperator::Cor,
        MutationOperator::Cod,
        MutationOperator::Saor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MutationOperator::AorB => "AOR-B",
            MutationOperator::AorS => "AOR-S",
            MutationOperator::AorU => "AOR-U",
            MutationOperator::Lor => "LOR",
            MutationOperator::Sor => "SOR",
            MutationOperator::Ror => "ROR",
            MutationOperator::Cor => "COR",
            MutationOperator::Cod => "COD",
            MutationOperator::Saor => "SAOR",
        }
    }

    /// The lexeme group this operator permutes. COD has a single member and
    /// maps it to the empty string.
    pub fn group(self) -> &'static [&'static str] {
        match self {
            MutationOperator::AorB => AOR_B,
            MutationOperator::AorS => AOR_S,
            MutationOperator::AorU => AOR_U,
            MutationOperator::Lor => LOR,
            MutationOperator::Sor => SOR,
            MutationOperator::Ror => ROR,
            MutationOperator::Cor => COR,
            MutationOperator::Cod => &["!"],
            MutationOperator::Saor => SAOR,
        }
    }

    /// Replacement lexemes for `lexeme`, in table order. Empty when the
    /// lexeme is outside this operator's group.
    pub fn replacements(self, lexeme: &str) -> Vec<&'static str> {
        if !self.group().contains(&lexeme) {
            return Vec::new();
        }
        if self == MutationOperator::Cod {
            return vec![""];
        }
        self.group()
            .iter()
            .copied()
            .filter(|r| *r != lexeme)
            .collect()
    }

    /// Which context an operator token must be in for this operator to apply.
    fn accepts(self, context: OperatorContext) -> bool {
        use MutationOperator::*;
        use OperatorContext::*;
        match self {
            AorB | Lor | Sor | Ror | Cor | Saor => context == Binary,
            AorU | Cod => context == UnaryPrefix,
            AorS => matches!(context, Shortcut(_)),
        }
    }
}

impl fmt::Display for MutationOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown mutation operator `{0}` (expected one of AOR-B, AOR-S, AOR-U, LOR, SOR, ROR, COR, COD, SAOR)")]
pub struct UnknownOperator(pub String);

impl FromStr for MutationOperator {
    type Err = UnknownOperator;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MutationOperator::ALL
            .into_iter()
            .find(|op| op.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownOperator(s.to_string()))
    }
}

/// An ordered set of enabled operators. Defaults to all nine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorSet(BTreeSet<MutationOperator>);

impl Default for OperatorSet {
    fn default() -> Self {
        OperatorSet(MutationOperator::ALL.into_iter().collect())
    }
}

impl OperatorSet {
    pub fn only(ops: impl IntoIterator<Item = MutationOperator>) -> Self {
        OperatorSet(ops.into_iter().collect())
    }

    pub fn parse<S: AsRef<str>>(names: &[S]) -> Result<Self, UnknownOperator> {
        if names.is_empty() {
            return Ok(Self::default());
        }
        names
            .iter()
            .map(|n| n.as_ref().parse())
            .collect::<Result<BTreeSet<_>, _>>()
            .map(OperatorSet)
    }

    pub fn contains(&self, op: MutationOperator) -> bool {
        self.0.contains(&op)
    }

    pub fn iter(&self) -> impl Iterator<Item = MutationOperator> + '_ {
        self.0.iter().copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fixity {
    Prefix,
    Postfix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorContext {
    Binary,
    UnaryPrefix,
    Shortcut(Fixity),
    NonMutable,
}

/// Keywords after which an operator starts a new operand (`return -x`).
const OPERAND_KEYWORDS: &[&str] = &[
    "return", "case", "throw", "yield", "else", "do", "in", "instanceof", "new", "assert",
];

fn ends_operand(token: &Token<'_>) -> bool {
    match token.kind {
        TokenKind::Identifier => !OPERAND_KEYWORDS.contains(&token.text),
        TokenKind::NumberLiteral | TokenKind::StringLiteral | TokenKind::CharLiteral => true,
        TokenKind::Punctuation => matches!(token.text, ")" | "]"),
        _ => false,
    }
}

/// Classifies the operator at `tokens[index]` from the nearest preceding
/// significant token.
pub fn classify_operator_context(tokens: &[Token<'_>], index: usize) -> OperatorContext {
    let token = &tokens[index];
    if token.kind != TokenKind::Operator {
        return OperatorContext::NonMutable;
    }
    let after_operand = tokens[..index]
        .iter()
        .rev()
        .find(|t| !t.kind.is_trivia())
        .is_some_and(ends_operand);

    match token.text {
        "+" | "-" => {
            if after_operand {
                OperatorContext::Binary
            } else {
                OperatorContext::UnaryPrefix
            }
        }
        "++" | "--" => OperatorContext::Shortcut(if after_operand {
            Fixity::Postfix
        } else {
            Fixity::Prefix
        }),
        // `!` after an operand is a macro bang or non-null assertion, not negation
        "!" => {
            if after_operand {
                OperatorContext::NonMutable
            } else {
                OperatorContext::UnaryPrefix
            }
        }
        lexeme if is_binary_only(lexeme) => {
            if after_operand {
                OperatorContext::Binary
            } else {
                OperatorContext::NonMutable
            }
        }
        _ => OperatorContext::NonMutable,
    }
}

fn is_binary_only(lexeme: &str) -> bool {
    [AOR_B, LOR, SOR, ROR, COR, SAOR]
        .iter()
        .any(|group| group.contains(&lexeme))
}

/// Every (operator, replacement) pair applicable to the token at `index`,
/// in operator order then replacement-table order.
pub fn applicable(
    tokens: &[Token<'_>],
    index: usize,
    enabled: &OperatorSet,
) -> Vec<(MutationOperator, &'static str)> {
    let context = classify_operator_context(tokens, index);
    if context == OperatorContext::NonMutable {
        return Vec::new();
    }
    let lexeme = tokens[index].text;
    enabled
        .iter()
        .filter(|op| op.accepts(context))
        .flat_map(|op| op.replacements(lexeme).into_iter().map(move |r| (op, r)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mutgen::lexer::tokenize;

    fn context_of(src: &str, lexeme: &str) -> OperatorContext {
        let lexed = tokenize(src);
        let idx = lexed
            .tokens
            .iter()
            .position(|t| t.kind == TokenKind::Operator && t.text == lexeme)
            .unwrap();
        classify_operator_context(&lexed.tokens, idx)
    }

    #[test]
    fn names_round_trip() {
        let names: Vec<_> = MutationOperator::ALL.iter().map(|o| o.name()).collect();
        assert_eq!(
            names,
            ["AOR-B", "AOR-S", "AOR-U", "LOR", "SOR", "ROR", "COR", "COD", "SAOR"]
        );
        for op in MutationOperator::ALL {
            assert_eq!(op.name().parse::<MutationOperator>().unwrap(), op);
            let json = serde_json::to_string(&op).unwrap();
            assert_eq!(json, format!("\"{}\"", op.name()));
        }
        assert!("AOD".parse::<MutationOperator>().is_err());
    }

    #[test]
    fn no_replacement_is_identity() {
        for op in MutationOperator::ALL {
            for lexeme in op.group() {
                let reps = op.replacements(lexeme);
                assert!(!reps.is_empty());
                assert!(!reps.contains(lexeme), "{op} maps {lexeme} to itself");
                if op != MutationOperator::Cod {
                    assert!(reps.iter().all(|r| op.group().contains(r)));
                }
            }
        }
    }

    #[test]
    fn unary_minus_after_assignment() {
        assert_eq!(context_of("x = -a;", "-"), OperatorContext::UnaryPrefix);
    }

    #[test]
    fn binary_plus_between_identifiers() {
        assert_eq!(context_of("a + b", "+"), OperatorContext::Binary);
    }

    #[test]
    fn binary_after_closing_paren() {
        assert_eq!(context_of("f(a) - b", "-"), OperatorContext::Binary);
        assert_eq!(context_of("v[i] - b", "-"), OperatorContext::Binary);
    }

    #[test]
    fn comments_are_skipped_when_looking_back() {
        assert_eq!(context_of("a /* c */ - b", "-"), OperatorContext::Binary);
        assert_eq!(context_of("( // c\n -b", "-"), OperatorContext::UnaryPrefix);
    }

    #[test]
    fn keyword_starts_operand() {
        assert_eq!(context_of("return -a;", "-"), OperatorContext::UnaryPrefix);
    }

    #[test]
    fn shortcut_fixity() {
        assert_eq!(
            context_of("i++;", "++"),
            OperatorContext::Shortcut(Fixity::Postfix)
        );
        assert_eq!(
            context_of("x = ++i;", "++"),
            OperatorContext::Shortcut(Fixity::Prefix)
        );
    }

    #[test]
    fn bang_contexts() {
        assert_eq!(context_of("if (!a)", "!"), OperatorContext::UnaryPrefix);
        assert_eq!(context_of("println!(x)", "!"), OperatorContext::NonMutable);
    }

    #[test]
    fn binary_only_in_prefix_position_is_not_mutable() {
        assert_eq!(context_of("let f = || 1;", "||"), OperatorContext::NonMutable);
        assert_eq!(context_of("x = ~a;", "~"), OperatorContext::NonMutable);
        assert_eq!(context_of("x = a;", "="), OperatorContext::NonMutable);
    }

    #[test]
    fn applicable_pairs() {
        let lexed = tokenize("a >= b");
        let idx = lexed.tokens.iter().position(|t| t.text == ">=").unwrap();
        let pairs = applicable(&lexed.tokens, idx, &OperatorSet::default());
        let reps: Vec<_> = pairs.iter().map(|(_, r)| *r).collect();
        assert_eq!(reps, ["<", "<=", ">", "==", "!="]);
        assert!(pairs.iter().all(|(op, _)| *op == MutationOperator::Ror));

        let only_cor = OperatorSet::only([MutationOperator::Cor]);
        assert!(applicable(&lexed.tokens, idx, &only_cor).is_empty());
    }
}
