//! The `.rsx` constituency discourse tree format.
//!
//! One record per document: a `# doc <id>` header followed by a bracketed
//! tree, records separated by a blank line. Leaves are `[index|text]`,
//! internal nodes `(label child+)` with every child prefixed by `N ` or
//! `S `. The writer emits each tree on a single line.

use std::io::{BufRead, Write};

use crate::error::FormatError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nuclearity {
    Nucleus,
    Satellite,
}

impl Nuclearity {
    fn marker(self) -> char {
        match self {
            Nuclearity::Nucleus => 'N',
            Nuclearity::Satellite => 'S',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RstNode {
    Leaf {
        index: usize,
        text: String,
    },
    Internal {
        label: String,
        children: Vec<(Nuclearity, RstNode)>,
    },
}

impl RstNode {
    pub fn leaf(index: usize, text: impl Into<String>) -> Self {
        RstNode::Leaf {
            index,
            text: text.into(),
        }
    }

    pub fn internal(label: impl Into<String>, children: Vec<(Nuclearity, RstNode)>) -> Self {
        RstNode::Internal {
            label: label.into(),
            children,
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            RstNode::Leaf { .. } => 1,
            RstNode::Internal { children, .. } => {
                children.iter().map(|(_, c)| c.leaf_count()).sum()
            }
        }
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<(usize, &'a str)>) {
        match self {
            RstNode::Leaf { index, text } => out.push((*index, text)),
            RstNode::Internal { children, .. } => {
                for (_, child) in children {
                    child.collect_leaves(out);
                }
            }
        }
    }

    /// Leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<(usize, &str)> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn check(&self) -> Result<(), String> {
        if let RstNode::Internal { label, children } = self {
            if label.is_empty() {
                return Err("internal node with empty label".into());
            }
            if children.len() < 2 {
                return Err(format!("single-child node `{label}`"));
            }
            if !children.iter().any(|(n, _)| *n == Nuclearity::Nucleus) {
                return Err(format!("no nucleus child under `{label}`"));
            }
            for (_, child) in children {
                child.check()?;
            }
        }
        Ok(())
    }
}

/// A constituency discourse tree for one document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RstTree {
    pub doc_id: String,
    pub root: RstNode,
}

impl RstTree {
    pub fn new(doc_id: impl Into<String>, root: RstNode) -> Self {
        RstTree {
            doc_id: doc_id.into(),
            root,
        }
    }

    /// Structural invariants: every internal node has >= 2 children and a
    /// nucleus, and leaf indices read left-to-right are 1..n.
    pub fn validate(&self) -> Result<(), String> {
        self.root.check()?;
        for (pos, (index, _)) in self.root.leaves().iter().enumerate() {
            if *index != pos + 1 {
                return Err(format!(
                    "leaf indices not consecutive: expected {}, found {}",
                    pos + 1,
                    index
                ));
            }
        }
        Ok(())
    }
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    start_line: usize,
}

impl Cursor {
    fn new(text: &str, start_line: usize) -> Self {
        Cursor {
            chars: text.chars().collect(),
            pos: 0,
            start_line,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn err(&self, msg: impl Into<String>) -> FormatError {
        let consumed = &self.chars[..self.pos.min(self.chars.len())];
        let line = self.start_line + consumed.iter().filter(|&&c| c == '\n').count();
        let col = consumed.iter().rev().take_while(|&&c| c != '\n').count() + 1;
        FormatError::Syntax {
            line,
            msg: format!("col {col}: {}", msg.into()),
        }
    }

    /// A bare token: letters up to whitespace or a bracket.
    fn token(&mut self) -> String {
        let mut tok = String::new();
        while let Some(c) = self.peek() {
            if c.is_whitespace() || matches!(c, '(' | ')' | '[' | ']') {
                break;
            }
            tok.push(c);
            self.pos += 1;
        }
        tok
    }
}

fn parse_node(cur: &mut Cursor) -> Result<RstNode, FormatError> {
    cur.skip_ws();
    match cur.peek() {
        Some('[') => parse_leaf(cur),
        Some('(') => parse_internal(cur),
        Some(c) => Err(cur.err(format!("expected `(` or `[`, found `{c}`"))),
        None => Err(cur.err("expected a node, found end of record")),
    }
}

fn parse_leaf(cur: &mut Cursor) -> Result<RstNode, FormatError> {
    cur.bump(); // '['
    let mut digits = String::new();
    while matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
        digits.push(cur.bump().unwrap());
    }
    if digits.is_empty() {
        return Err(cur.err("leaf must start with an EDU index"));
    }
    if cur.peek() != Some('|') {
        return Err(cur.err("expected `|` after leaf index"));
    }
    cur.bump();
    let mut text = String::new();
    loop {
        match cur.peek() {
            Some(']') => {
                cur.bump();
                break;
            }
            Some('\n') | None => return Err(cur.err("unterminated leaf")),
            Some(c) => {
                text.push(c);
                cur.pos += 1;
            }
        }
    }
    if text.is_empty() {
        return Err(cur.err("empty leaf text"));
    }
    let index: usize = digits
        .parse()
        .map_err(|_| cur.err(format!("bad leaf index `{digits}`")))?;
    Ok(RstNode::Leaf { index, text })
}

fn parse_internal(cur: &mut Cursor) -> Result<RstNode, FormatError> {
    cur.bump(); // '('
    let mut label_tokens: Vec<String> = Vec::new();
    let first_nuclearity = loop {
        cur.skip_ws();
        match cur.peek() {
            Some(')') => return Err(cur.err("internal node without children")),
            Some('(') | Some('[') => {
                return Err(cur.err("child without a nuclearity marker (`N` or `S`)"))
            }
            None => return Err(cur.err("unbalanced parentheses")),
            _ => {}
        }
        let tok = cur.token();
        match tok.as_str() {
            "N" => break Nuclearity::Nucleus,
            "S" => break Nuclearity::Satellite,
            "" => return Err(cur.err("expected a label or nuclearity marker")),
            _ => label_tokens.push(tok),
        }
    };
    if label_tokens.is_empty() {
        return Err(cur.err("internal node without a label"));
    }
    let label = label_tokens.join(" ");

    let mut children = Vec::new();
    let mut nuclearity = first_nuclearity;
    loop {
        let child = parse_node(cur)?;
        children.push((nuclearity, child));
        cur.skip_ws();
        match cur.peek() {
            Some(')') => {
                cur.bump();
                break;
            }
            None => return Err(cur.err("unbalanced parentheses")),
            _ => {
                let tok = cur.token();
                nuclearity = match tok.as_str() {
                    "N" => Nuclearity::Nucleus,
                    "S" => Nuclearity::Satellite,
                    _ => {
                        return Err(
                            cur.err(format!("expected nuclearity marker or `)`, found `{tok}`"))
                        )
                    }
                };
            }
        }
    }

    if children.len() < 2 {
        return Err(cur.err(format!("single-child node `{label}`")));
    }
    if !children.iter().any(|(n, _)| *n == Nuclearity::Nucleus) {
        return Err(cur.err(format!("no nucleus child under `{label}`")));
    }
    Ok(RstNode::Internal { label, children })
}

fn finish_record(
    doc_id: String,
    start_line: usize,
    body: &str,
) -> Result<RstTree, FormatError> {
    if body.trim().is_empty() {
        return Err(FormatError::syntax(start_line, "document without a tree"));
    }
    let mut cur = Cursor::new(body, start_line);
    let root = parse_node(&mut cur)?;
    cur.skip_ws();
    if cur.peek().is_some() {
        return Err(cur.err("trailing content after tree"));
    }
    let tree = RstTree { doc_id, root };
    tree.validate()
        .map_err(|msg| FormatError::syntax(start_line, msg))?;
    Ok(tree)
}

pub fn read_rst_trees<R: BufRead>(reader: R) -> Result<Vec<RstTree>, FormatError> {
    let mut trees = Vec::new();
    // (doc_id, line of first body line, body lines)
    let mut current: Option<(String, usize, Vec<String>)> = None;

    let mut finalize = |cur: &mut Option<(String, usize, Vec<String>)>,
                        trees: &mut Vec<RstTree>|
     -> Result<(), FormatError> {
        if let Some((doc_id, start, lines)) = cur.take() {
            trees.push(finish_record(doc_id, start, &lines.join("\n"))?);
        }
        Ok(())
    };

    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        if line.is_empty() {
            finalize(&mut current, &mut trees)?;
        } else if let Some(doc_id) = line.strip_prefix("# doc ") {
            finalize(&mut current, &mut trees)?;
            current = Some((doc_id.to_string(), line_no + 1, Vec::new()));
        } else if line.starts_with('#') {
            continue;
        } else {
            match current.as_mut() {
                Some((_, start, lines)) => {
                    if lines.is_empty() {
                        *start = line_no;
                    }
                    lines.push(line);
                }
                None => return Err(FormatError::syntax(line_no, "tree outside of a document")),
            }
        }
    }
    finalize(&mut current, &mut trees)?;
    Ok(trees)
}

fn write_node(node: &RstNode, out: &mut String) -> Result<(), FormatError> {
    match node {
        RstNode::Leaf { index, text } => {
            if text.contains([']', '\n', '\r', '\t']) || text.is_empty() {
                return Err(FormatError::Unwritable(format!(
                    "leaf text not serializable: {text:?}"
                )));
            }
            out.push('[');
            out.push_str(&index.to_string());
            out.push('|');
            out.push_str(text);
            out.push(']');
        }
        RstNode::Internal { label, children } => {
            if label.is_empty()
                || label.contains(['(', ')', '[', ']', '\n', '\r', '\t'])
                || label.split(' ').any(|t| t == "N" || t == "S" || t.is_empty())
            {
                return Err(FormatError::Unwritable(format!(
                    "relation label not serializable: {label:?}"
                )));
            }
            out.push('(');
            out.push_str(label);
            for (nuclearity, child) in children {
                out.push(' ');
                out.push(nuclearity.marker());
                out.push(' ');
                write_node(child, out)?;
            }
            out.push(')');
        }
    }
    Ok(())
}

pub fn write_rst_trees<W: Write>(trees: &[RstTree], mut out: W) -> Result<(), FormatError> {
    for tree in trees {
        if tree.doc_id.contains(['\t', '\n', '\r']) {
            return Err(FormatError::Unwritable(format!(
                "doc id not serializable: {:?}",
                tree.doc_id
            )));
        }
        tree.validate().map_err(FormatError::Unwritable)?;
        let mut line = String::new();
        write_node(&tree.root, &mut line)?;
        writeln!(out, "# doc {}", tree.doc_id)?;
        writeln!(out, "{line}")?;
        writeln!(out)?;
    }
    Ok(())
}

pub fn rst_trees_to_string(trees: &[RstTree]) -> Result<String, FormatError> {
    let mut buf = Vec::new();
    write_rst_trees(trees, &mut buf)?;
    Ok(String::from_utf8(buf).expect("writer emits UTF-8"))
}
