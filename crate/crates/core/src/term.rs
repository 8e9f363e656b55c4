//! Terms over a single binary groupoid operation.
//!
//! A term is a full binary tree whose leaves are named variables. The concrete
//! syntax uses juxtaposition for the operation, left-associative, so `xyzt`
//! parses as `((xy)z)t`. The printer parenthesizes every compound proper
//! subterm, so printing always round-trips.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One step of a path into a term: left or right child.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Branch {
    L,
    R,
}

/// A path from the root of a term to one of its subterms.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position(pub Vec<Branch>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, b: Branch) -> Position {
        let mut v = self.0.clone();
        v.push(b);
        Position(v)
    }

    /// Concatenation: `self` followed by `rest`.
    pub fn join(&self, rest: &Position) -> Position {
        let mut v = self.0.clone();
        v.extend_from_slice(&rest.0);
        Position(v)
    }

    pub fn starts_with(&self, prefix: &Position) -> bool {
        self.0.len() >= prefix.0.len() && self.0[..prefix.0.len()] == prefix.0[..]
    }

    /// Longest common prefix of two positions.
    pub fn common_prefix(&self, other: &Position) -> Position {
        let mut v = Vec::new();
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            if a == b {
                v.push(*a);
            } else {
                break;
            }
        }
        Position(v)
    }

    /// Neither position is a prefix of the other.
    pub fn incomparable(&self, other: &Position) -> bool {
        !self.starts_with(other) && !other.starts_with(self)
    }

    /// The suffix of `self` after removing `prefix`; None if not a prefix.
    pub fn strip_prefix(&self, prefix: &Position) -> Option<Position> {
        if self.starts_with(prefix) {
            Some(Position(self.0[prefix.0.len()..].to_vec()))
        } else {
            None
        }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            match b {
                Branch::L => write!(f, "L")?,
                Branch::R => write!(f, "R")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Position {
    type Err = TermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut v = Vec::with_capacity(s.len());
        for (i, c) in s.char_indices() {
            match c {
                'L' | 'l' => v.push(Branch::L),
                'R' | 'r' => v.push(Branch::R),
                c => {
                    return Err(TermError::Syntax {
                        offset: i,
                        kind: SyntaxErrorKind::UnexpectedCharacter(c),
                    })
                }
            }
        }
        Ok(Position(v))
    }
}

/// A term: a variable leaf or the product of two subterms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Leaf(String),
    Node(Box<Term>, Box<Term>),
}

/// An ordered pair of terms, read as the identity `lhs = rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
}

/// A simultaneous map from variable names to terms.
pub type Substitution = BTreeMap<String, Term>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyntaxErrorKind {
    UnbalancedParenthesis,
    EmptyFactor,
    IllegalIdentifier,
    UnexpectedCharacter(char),
    UnexpectedEnd,
}

impl fmt::Display for SyntaxErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SyntaxErrorKind::UnbalancedParenthesis => write!(f, "unbalanced parenthesis"),
            SyntaxErrorKind::EmptyFactor => write!(f, "empty factor"),
            SyntaxErrorKind::IllegalIdentifier => write!(f, "illegal identifier"),
            SyntaxErrorKind::UnexpectedCharacter(c) => write!(f, "unexpected character '{c}'"),
            SyntaxErrorKind::UnexpectedEnd => write!(f, "unexpected end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("syntax error at byte {offset}: {kind}")]
    Syntax { offset: usize, kind: SyntaxErrorKind },
    #[error("position {position} is not valid in `{term}`")]
    InvalidPosition { term: String, position: String },
}

impl Term {
    pub fn leaf(name: &str) -> Term {
        Term::Leaf(name.to_string())
    }

    pub fn node(l: Term, r: Term) -> Term {
        Term::Node(Box::new(l), Box::new(r))
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Term::Leaf(_))
    }

    pub fn leaf_name(&self) -> Option<&str> {
        match self {
            Term::Leaf(n) => Some(n),
            Term::Node(..) => None,
        }
    }

    /// Number of variable occurrences (leaves).
    pub fn rank(&self) -> usize {
        match self {
            Term::Leaf(_) => 1,
            Term::Node(l, r) => l.rank() + r.rank(),
        }
    }

    /// Mirror image: children swapped recursively.
    pub fn dual(&self) -> Term {
        match self {
            Term::Leaf(n) => Term::Leaf(n.clone()),
            Term::Node(l, r) => Term::node(r.dual(), l.dual()),
        }
    }

    pub fn subterm_at(&self, p: &Position) -> Result<&Term, TermError> {
        let mut t = self;
        for (i, b) in p.0.iter().enumerate() {
            match t {
                Term::Node(l, r) => t = if *b == Branch::L { l } else { r },
                Term::Leaf(_) => {
                    return Err(TermError::InvalidPosition {
                        term: self.to_string(),
                        position: Position(p.0[..=i].to_vec()).to_string(),
                    })
                }
            }
        }
        Ok(t)
    }

    /// A fresh term with the subterm at `p` replaced by `s`.
    pub fn replace_at(&self, p: &Position, s: Term) -> Result<Term, TermError> {
        fn go(t: &Term, rest: &[Branch], s: Term, whole: &Term, p: &Position) -> Result<Term, TermError> {
            match rest.split_first() {
                None => Ok(s),
                Some((b, tail)) => match t {
                    Term::Node(l, r) => {
                        if *b == Branch::L {
                            Ok(Term::node(go(l, tail, s, whole, p)?, (**r).clone()))
                        } else {
                            Ok(Term::node((**l).clone(), go(r, tail, s, whole, p)?))
                        }
                    }
                    Term::Leaf(_) => Err(TermError::InvalidPosition {
                        term: whole.to_string(),
                        position: p.to_string(),
                    }),
                },
            }
        }
        go(self, &p.0, s, self, p)
    }

    /// All positions in pre-order (root first).
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        fn walk(t: &Term, here: Position, out: &mut Vec<Position>) {
            out.push(here.clone());
            if let Term::Node(l, r) = t {
                walk(l, here.child(Branch::L), out);
                walk(r, here.child(Branch::R), out);
            }
        }
        walk(self, Position::root(), &mut out);
        out
    }

    /// Leaf positions in left-to-right order, paired with the leaf name.
    pub fn leaves(&self) -> Vec<(Position, &str)> {
        let mut out = Vec::new();
        fn walk<'a>(t: &'a Term, here: Position, out: &mut Vec<(Position, &'a str)>) {
            match t {
                Term::Leaf(n) => out.push((here, n.as_str())),
                Term::Node(l, r) => {
                    walk(l, here.child(Branch::L), out);
                    walk(r, here.child(Branch::R), out);
                }
            }
        }
        walk(self, Position::root(), &mut out);
        out
    }

    /// Simultaneous substitution: variables not in the map are left alone.
    pub fn substitute(&self, s: &Substitution) -> Term {
        match self {
            Term::Leaf(n) => match s.get(n) {
                Some(t) => t.clone(),
                None => Term::Leaf(n.clone()),
            },
            Term::Node(l, r) => Term::node(l.substitute(s), r.substitute(s)),
        }
    }

    /// Rename every occurrence of the leaves `a` and `b` into each other.
    pub fn swap_variables(&self, a: &str, b: &str) -> Term {
        match self {
            Term::Leaf(n) => {
                if n == a {
                    Term::Leaf(b.to_string())
                } else if n == b {
                    Term::Leaf(a.to_string())
                } else {
                    Term::Leaf(n.clone())
                }
            }
            Term::Node(l, r) => Term::node(l.swap_variables(a, b), r.swap_variables(a, b)),
        }
    }

    pub fn variables(&self) -> Vec<String> {
        let mut vs: Vec<String> = self.leaves().into_iter().map(|(_, n)| n.to_string()).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn measures(&self) -> Measures {
        let mut occurrences = BTreeMap::new();
        let mut positions: BTreeMap<String, Vec<Position>> = BTreeMap::new();
        for (p, n) in self.leaves() {
            *occurrences.entry(n.to_string()).or_insert(0usize) += 1;
            positions.entry(n.to_string()).or_default().push(p);
        }
        Measures {
            rank: self.rank(),
            linear: occurrences.values().all(|&c| c == 1),
            occurrences,
            positions,
        }
    }

    pub fn is_linear(&self) -> bool {
        self.measures().linear
    }
}

/// Rank, linearity, and per-variable occurrence data for a term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measures {
    pub rank: usize,
    pub linear: bool,
    pub occurrences: BTreeMap<String, usize>,
    pub positions: BTreeMap<String, Vec<Position>>,
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Leaf(n) => write!(f, "{n}"),
            Term::Node(l, r) => {
                let wrap = |t: &Term, f: &mut fmt::Formatter<'_>| -> fmt::Result {
                    if t.is_leaf() {
                        write!(f, "{t}")
                    } else {
                        write!(f, "({t})")
                    }
                };
                wrap(l, f)?;
                wrap(r, f)
            }
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.lhs, self.rhs)
    }
}

/// Canonical concrete syntax for a term; parses back to the same AST.
pub fn print_canonical(t: &Term) -> String {
    t.to_string()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src: src.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, kind: SyntaxErrorKind) -> TermError {
        TermError::Syntax { offset: self.pos, kind }
    }

    fn variable(&mut self) -> Result<Term, TermError> {
        let start = self.pos;
        let c = self.src[self.pos] as char;
        if !c.is_ascii_lowercase() {
            return Err(self.err(SyntaxErrorKind::IllegalIdentifier));
        }
        self.pos += 1;
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_ascii_digit() {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
        Ok(Term::Leaf(name))
    }

    fn factor(&mut self) -> Result<Term, TermError> {
        match self.peek() {
            Some(b'(') => {
                let open = self.pos;
                self.pos += 1;
                let t = self.term()?;
                match self.peek() {
                    Some(b')') => {
                        self.pos += 1;
                        Ok(t)
                    }
                    _ => Err(TermError::Syntax {
                        offset: open,
                        kind: SyntaxErrorKind::UnbalancedParenthesis,
                    }),
                }
            }
            Some(c) if (c as char).is_ascii_lowercase() => self.variable(),
            Some(_) => Err(self.err(SyntaxErrorKind::IllegalIdentifier)),
            None => Err(self.err(SyntaxErrorKind::UnexpectedEnd)),
        }
    }

    /// term := factor { factor }, juxtaposition folded to the left
    fn term(&mut self) -> Result<Term, TermError> {
        match self.peek() {
            Some(b')') | Some(b'=') | None => return Err(self.err(SyntaxErrorKind::EmptyFactor)),
            _ => {}
        }
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b')') | Some(b'=') | None => return Ok(acc),
                _ => {
                    let f = self.factor()?;
                    acc = Term::node(acc, f);
                }
            }
        }
    }
}

/// Parse a single term.
pub fn parse(text: &str) -> Result<Term, TermError> {
    let mut p = Parser::new(text);
    let t = p.term()?;
    match p.peek() {
        None => Ok(t),
        Some(b')') => Err(p.err(SyntaxErrorKind::UnbalancedParenthesis)),
        Some(c) => Err(p.err(SyntaxErrorKind::UnexpectedCharacter(c as char))),
    }
}

/// Parse `term = term`.
pub fn parse_identity(text: &str) -> Result<Identity, TermError> {
    let mut p = Parser::new(text);
    let lhs = p.term()?;
    match p.peek() {
        Some(b'=') => p.pos += 1,
        Some(c) => return Err(p.err(SyntaxErrorKind::UnexpectedCharacter(c as char))),
        None => return Err(p.err(SyntaxErrorKind::UnexpectedEnd)),
    }
    let rhs = p.term()?;
    match p.peek() {
        None => Ok(Identity { lhs, rhs }),
        Some(b')') => Err(p.err(SyntaxErrorKind::UnbalancedParenthesis)),
        Some(c) => Err(p.err(SyntaxErrorKind::UnexpectedCharacter(c as char))),
    }
}

impl FromStr for Term {
    type Err = TermError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl FromStr for Identity {
    type Err = TermError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_identity(s)
    }
}

impl Identity {
    pub fn dual(&self) -> Identity {
        Identity { lhs: self.lhs.dual(), rhs: self.rhs.dual() }
    }
}

impl Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Position {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Position {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
