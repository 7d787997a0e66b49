use std::collections::VecDeque;

use thiserror::Error;

use super::{ExprBuilder, ExprError, MultiExpr, NodeId};
use crate::label::{Label, LabelSet, MAX_LABEL};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: {reason}")]
    Syntax { line: usize, col: usize, reason: String },
    #[error("{line}:{col}: label {label} exceeds declared k = {k}")]
    UnknownLabel { line: usize, col: usize, label: Label, k: Label },
    #[error(transparent)]
    Structure(#[from] ExprError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok<'a> {
    Open,
    Close,
    Atom(&'a str),
    Eof,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0, line: 1, col: 1 }
    }

    fn bump(&mut self, c: char) {
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
    }

    /// Next token together with the position where it starts.
    fn next(&mut self) -> (Tok<'a>, usize, usize) {
        loop {
            let Some(c) = self.src[self.pos..].chars().next() else {
                return (Tok::Eof, self.line, self.col);
            };
            if c.is_whitespace() {
                self.bump(c);
            } else if c == ';' {
                while let Some(c) = self.src[self.pos..].chars().next() {
                    if c == '\n' {
                        break;
                    }
                    self.bump(c);
                }
            } else {
                break;
            }
        }
        let (line, col) = (self.line, self.col);
        let c = self.src[self.pos..].chars().next().expect("checked above");
        match c {
            '(' => {
                self.bump(c);
                (Tok::Open, line, col)
            }
            ')' => {
                self.bump(c);
                (Tok::Close, line, col)
            }
            _ => {
                let start = self.pos;
                while let Some(c) = self.src[self.pos..].chars().next() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    self.bump(c);
                }
                (Tok::Atom(&self.src[start..self.pos]), line, col)
            }
        }
    }
}

enum Frame {
    Union(Vec<NodeId>),
    Join(Label, Label),
    Relabel(Label, LabelSet),
}

struct Parser<'a> {
    lex: Lexer<'a>,
    ahead: VecDeque<(Tok<'a>, usize, usize)>,
    k: Option<Label>,
}

fn is_vid(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-'))
}

impl<'a> Parser<'a> {
    fn next(&mut self) -> (Tok<'a>, usize, usize) {
        self.ahead.pop_front().unwrap_or_else(|| self.lex.next())
    }

    fn peek(&mut self, n: usize) -> &Tok<'a> {
        while self.ahead.len() <= n {
            let t = self.lex.next();
            self.ahead.push_back(t);
        }
        &self.ahead[n].0
    }

    fn err<T>(line: usize, col: usize, reason: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { line, col, reason: reason.into() })
    }

    fn expect_open(&mut self) -> Result<(), ParseError> {
        match self.next() {
            (Tok::Open, ..) => Ok(()),
            (t, l, c) => Self::err(l, c, format!("expected `(`, found {}", describe(&t))),
        }
    }

    fn expect_close(&mut self) -> Result<(), ParseError> {
        match self.next() {
            (Tok::Close, ..) => Ok(()),
            (t, l, c) => Self::err(l, c, format!("expected `)`, found {}", describe(&t))),
        }
    }

    fn int(&mut self) -> Result<(u64, usize, usize), ParseError> {
        match self.next() {
            (Tok::Atom(a), l, c) => match a.parse::<u64>() {
                Ok(v) => Ok((v, l, c)),
                Err(_) => Self::err(l, c, format!("expected an integer, found `{a}`")),
            },
            (t, l, c) => Self::err(l, c, format!("expected an integer, found {}", describe(&t))),
        }
    }

    fn label(&mut self) -> Result<Label, ParseError> {
        let (v, l, c) = self.int()?;
        self.check_label(v, l, c)
    }

    fn check_label(&self, v: u64, line: usize, col: usize) -> Result<Label, ParseError> {
        if v == 0 {
            return Self::err(line, col, "labels are positive integers");
        }
        if v > MAX_LABEL as u64 {
            return Self::err(line, col, format!("label {v} exceeds the supported maximum {MAX_LABEL}"));
        }
        let v = v as Label;
        match self.k {
            Some(k) if v > k => Err(ParseError::UnknownLabel { line, col, label: v, k }),
            _ => Ok(v),
        }
    }

    /// `"(" INT* ")"`.
    fn label_list(&mut self, nonempty: bool) -> Result<LabelSet, ParseError> {
        self.expect_open()?;
        let mut set = LabelSet::EMPTY;
        let mut count = 0;
        loop {
            match self.next() {
                (Tok::Close, l, c) => {
                    if nonempty && count == 0 {
                        return Self::err(l, c, "label list must not be empty");
                    }
                    return Ok(set);
                }
                (Tok::Atom(a), l, c) => {
                    let v = a.parse::<u64>().or_else(|_| Self::err(l, c, format!("expected a label, found `{a}`")))?;
                    set.insert(self.check_label(v, l, c)?);
                    count += 1;
                }
                (t, l, c) => return Self::err(l, c, format!("expected a label or `)`, found {}", describe(&t))),
            }
        }
    }

    fn expr(&mut self, b: &mut ExprBuilder) -> Result<NodeId, ParseError> {
        let mut stack: Vec<Frame> = Vec::new();
        loop {
            // Descend until a leaf completes.
            self.expect_open()?;
            let mut done = match self.next() {
                (Tok::Atom("intro"), ..) => {
                    let vid = match self.next() {
                        (Tok::Atom(a), l, c) => {
                            if !is_vid(a) {
                                return Self::err(l, c, format!("invalid vertex id `{a}`"));
                            }
                            a.to_string()
                        }
                        (t, l, c) => return Self::err(l, c, format!("expected a vertex id, found {}", describe(&t))),
                    };
                    let labels = self.label_list(true)?;
                    self.expect_close()?;
                    b.intro(vid, labels)
                }
                (Tok::Atom("union"), ..) => {
                    stack.push(Frame::Union(Vec::new()));
                    continue;
                }
                (Tok::Atom("join"), l, c) => {
                    let i = self.label()?;
                    let j = self.label()?;
                    if i == j {
                        return Self::err(l, c, format!("join needs two distinct labels, got {i} twice"));
                    }
                    stack.push(Frame::Join(i, j));
                    continue;
                }
                (Tok::Atom("relabel"), ..) => {
                    let i = self.label()?;
                    let to = self.label_list(false)?;
                    stack.push(Frame::Relabel(i, to));
                    continue;
                }
                (Tok::Atom(a), l, c) => return Self::err(l, c, format!("unknown operator `{a}`")),
                (t, l, c) => return Self::err(l, c, format!("expected an operator, found {}", describe(&t))),
            };
            // Ascend while frames are complete.
            loop {
                match stack.last_mut() {
                    None => return Ok(done),
                    Some(Frame::Union(children)) => {
                        children.push(done);
                        if children.len() < 2 {
                            break;
                        }
                        let (l, r) = (children[0], children[1]);
                        stack.pop();
                        self.expect_close()?;
                        done = b.union(l, r);
                    }
                    Some(&mut Frame::Join(i, j)) => {
                        stack.pop();
                        self.expect_close()?;
                        done = b.join(i, j, done);
                    }
                    Some(&mut Frame::Relabel(i, to)) => {
                        stack.pop();
                        self.expect_close()?;
                        done = b.relabel(i, to, done);
                    }
                }
            }
        }
    }

    fn file(&mut self) -> Result<MultiExpr, ParseError> {
        let mut b = ExprBuilder::new();
        let wrapped = matches!(self.peek(0), Tok::Open) && matches!(self.peek(1), Tok::Atom("mcw"));
        if wrapped {
            self.next();
            self.next();
            let (k, l, c) = self.int()?;
            if k == 0 || k > MAX_LABEL as u64 {
                return Self::err(l, c, format!("declared k must be in 1..={MAX_LABEL}"));
            }
            self.k = Some(k as Label);
        }
        let root = self.expr(&mut b)?;
        if wrapped {
            self.expect_close()?;
        }
        match self.next() {
            (Tok::Eof, ..) => {}
            (t, l, c) => return Self::err(l, c, format!("trailing input: {}", describe(&t))),
        }
        Ok(b.finish(root, self.k)?)
    }
}

fn describe(t: &Tok<'_>) -> String {
    match t {
        Tok::Open => "`(`".into(),
        Tok::Close => "`)`".into(),
        Tok::Atom(a) => format!("`{a}`"),
        Tok::Eof => "end of input".into(),
    }
}

/// Parses an expression file.
pub fn parse(text: &str) -> Result<MultiExpr, ParseError> {
    Parser { lex: Lexer::new(text), ahead: VecDeque::new(), k: None }.file()
}
