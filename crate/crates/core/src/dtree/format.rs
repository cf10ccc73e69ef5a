//! Text formats: nested `(var ZERO ONE)` trees and `weight<TAB>tree`
//! distribution files, with exact fractional weights.

use std::str::FromStr;

use num_rational::BigRational;

use crate::error::{Error, Result};

use super::{DecisionTree, Node, TreeDistribution};

/// Render a tree as `0`, `1`, or `(var ZERO RIGHT)` nested text.
pub fn tree_to_text(tree: &DecisionTree) -> String {
    let mut out = String::new();
    render(&tree.node, &mut out);
    out
}

fn render(node: &Node, out: &mut String) {
    match node {
        Node::Leaf(false) => out.push('0'),
        Node::Leaf(true) => out.push('1'),
        Node::Query { var, zero, one } => {
            out.push('(');
            out.push_str(&var.to_string());
            out.push(' ');
            render(zero, out);
            out.push(' ');
            render(one, out);
            out.push(')');
        }
    }
}

/// Parse the rendering produced by [`tree_to_text`].
pub fn tree_from_text(text: &str) -> Result<DecisionTree> {
    let tokens = tokenize(text)?;
    let mut pos = 0;
    let tree = parse_tree(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(Error::Parse(format!(
            "trailing tokens after tree: {:?}",
            &tokens[pos..]
        )));
    }
    Ok(tree)
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Open,
    Close,
    Number(u32),
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '(' => {
                tokens.push(Token::Open);
                chars.next();
            }
            ')' => {
                tokens.push(Token::Close);
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            c if c.is_ascii_digit() => {
                let mut num = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        num.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let value = num
                    .parse::<u32>()
                    .map_err(|e| Error::Parse(format!("bad number {num:?}: {e}")))?;
                tokens.push(Token::Number(value));
            }
            other => {
                return Err(Error::Parse(format!("unexpected character {other:?}")));
            }
        }
    }
    Ok(tokens)
}

fn parse_tree(tokens: &[Token], pos: &mut usize) -> Result<DecisionTree> {
    match tokens.get(*pos) {
        Some(Token::Number(0)) => {
            *pos += 1;
            Ok(DecisionTree::leaf(false))
        }
        Some(Token::Number(1)) => {
            *pos += 1;
            Ok(DecisionTree::leaf(true))
        }
        Some(Token::Number(n)) => Err(Error::Parse(format!("leaf must be 0 or 1, got {n}"))),
        Some(Token::Open) => {
            *pos += 1;
            let var = match tokens.get(*pos) {
                Some(Token::Number(v)) => *v,
                other => {
                    return Err(Error::Parse(format!(
                        "expected variable index, got {other:?}"
                    )))
                }
            };
            *pos += 1;
            let zero = parse_tree(tokens, pos)?;
            let one = parse_tree(tokens, pos)?;
            match tokens.get(*pos) {
                Some(Token::Close) => {
                    *pos += 1;
                    DecisionTree::query(var, zero, one)
                }
                other => Err(Error::Parse(format!("expected `)`, got {other:?}"))),
            }
        }
        other => Err(Error::Parse(format!("expected tree, got {other:?}"))),
    }
}

/// Render a distribution as one `weight<TAB>tree` line per tree.
pub fn distribution_to_text(dist: &TreeDistribution) -> String {
    let mut out = String::new();
    for (w, t) in dist.items() {
        out.push_str(&w.to_string());
        out.push('\t');
        out.push_str(&tree_to_text(t));
        out.push('\n');
    }
    out
}

/// Parse `weight<TAB>tree` lines into a distribution over the given arity.
/// Weights are exact fractions `a/b` (a bare integer is read as `a/1`).
pub fn distribution_from_text(text: &str, arity: u32) -> Result<TreeDistribution> {
    let mut items = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (weight_str, tree_str) = line.split_once(char::is_whitespace).ok_or_else(|| {
            Error::Parse(format!("line {}: expected `weight<TAB>tree`", lineno + 1))
        })?;
        let weight = BigRational::from_str(weight_str.trim()).map_err(|e| {
            Error::Parse(format!("line {}: bad weight {weight_str:?}: {e}", lineno + 1))
        })?;
        let tree = tree_from_text(tree_str)?;
        items.push((weight, tree));
    }
    TreeDistribution::new(arity, items)
}
