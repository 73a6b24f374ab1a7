//! Lattice polynomial expressions.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr   := term ('|' term)*
//! term   := factor ('&' factor)*
//! factor := var | const | '(' expr ')'
//! var    := 'x' digit+            (x1 .. x<arity>)
//! const  := name of a lattice element
//! ```
//!
//! `&` is meet and binds tighter than `|` (join). `∧` and `∨` are accepted
//! as aliases. A token of the form `x<digits>` is always a variable.
//! Variable positions are stored zero-based: `x1` is `Var(0)`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::lattice::{Elem, Lattice, LatticeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("syntax error at offset {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("variable x{index} at offset {pos} is outside 1..={arity}")]
    VariableOutOfRange { pos: usize, index: usize, arity: usize },
    #[error("unknown constant `{name}` at offset {pos}")]
    UnknownConstant { pos: usize, name: String },
    #[error("arity must be at least 1")]
    ZeroArity,
    #[error("expected a point with {expected} coordinates, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Var(usize),
    Const(usize),
    Meet(Box<Node>, Box<Node>),
    Join(Box<Node>, Box<Node>),
}

impl Node {
    pub fn meet(a: Node, b: Node) -> Node {
        Node::Meet(Box::new(a), Box::new(b))
    }

    pub fn join(a: Node, b: Node) -> Node {
        Node::Join(Box::new(a), Box::new(b))
    }

    /// Evaluates on element indices. The point is assumed to be in range.
    pub fn eval_idx(&self, lattice: &Lattice, point: &[usize]) -> usize {
        match self {
            Node::Var(i) => point[*i],
            Node::Const(c) => *c,
            Node::Meet(a, b) => lattice.meet_idx(a.eval_idx(lattice, point), b.eval_idx(lattice, point)),
            Node::Join(a, b) => lattice.join_idx(a.eval_idx(lattice, point), b.eval_idx(lattice, point)),
        }
    }

    fn max_var(&self) -> Option<usize> {
        match self {
            Node::Var(i) => Some(*i),
            Node::Const(_) => None,
            Node::Meet(a, b) | Node::Join(a, b) => a.max_var().max(b.max_var()),
        }
    }
}

/// A polynomial expression of fixed arity over one lattice.
#[derive(Debug, Clone)]
pub struct Term {
    lattice: Arc<Lattice>,
    arity: usize,
    root: Node,
}

impl Term {
    /// Wraps an already-built tree, checking variable and constant ranges.
    pub fn new(lattice: Arc<Lattice>, arity: usize, root: Node) -> Result<Self, TermError> {
        if arity == 0 {
            return Err(TermError::ZeroArity);
        }
        if let Some(v) = root.max_var() {
            if v >= arity {
                return Err(TermError::VariableOutOfRange {
                    pos: 0,
                    index: v + 1,
                    arity,
                });
            }
        }
        fn consts_ok(n: &Node, len: usize) -> bool {
            match n {
                Node::Var(_) => true,
                Node::Const(c) => *c < len,
                Node::Meet(a, b) | Node::Join(a, b) => consts_ok(a, len) && consts_ok(b, len),
            }
        }
        if !consts_ok(&root, lattice.len()) {
            return Err(TermError::Lattice(LatticeError::ForeignElement));
        }
        Ok(Term {
            lattice,
            arity,
            root,
        })
    }

    pub fn parse(text: &str, arity: usize, lattice: Arc<Lattice>) -> Result<Self, TermError> {
        parse_expr(text, arity, lattice)
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn eval(&self, point: &[Elem]) -> Result<Elem, TermError> {
        if point.len() != self.arity {
            return Err(TermError::ArityMismatch {
                expected: self.arity,
                got: point.len(),
            });
        }
        let idx = point
            .iter()
            .map(|&e| self.lattice.check(e))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.lattice.elem_at(self.root.eval_idx(&self.lattice, &idx)))
    }

    pub fn eval_idx(&self, point: &[usize]) -> usize {
        self.root.eval_idx(&self.lattice, point)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(n: &Node, l: &Lattice, parent_meet: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match n {
                Node::Var(i) => write!(f, "x{}", i + 1),
                Node::Const(c) => f.write_str(l.name_of(*c)),
                Node::Meet(a, b) => {
                    go(a, l, true, f)?;
                    f.write_str(" & ")?;
                    go(b, l, true, f)
                }
                Node::Join(a, b) => {
                    if parent_meet {
                        f.write_str("(")?;
                    }
                    go(a, l, false, f)?;
                    f.write_str(" | ")?;
                    go(b, l, false, f)?;
                    if parent_meet {
                        f.write_str(")")?;
                    }
                    Ok(())
                }
            }
        }
        go(&self.root, &self.lattice, false, f)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Meet,
    Join,
    Open,
    Close,
    Word(String),
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '.' | '\'' | '-')
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, TermError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        let tok = match c {
            c if c.is_whitespace() => {
                chars.next();
                continue;
            }
            '&' | '∧' => Tok::Meet,
            '|' | '∨' => Tok::Join,
            '(' => Tok::Open,
            ')' => Tok::Close,
            c if is_word_char(c) => {
                let mut word = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if !is_word_char(c) {
                        break;
                    }
                    word.push(c);
                    chars.next();
                }
                out.push((pos, Tok::Word(word)));
                continue;
            }
            other => {
                return Err(TermError::Syntax {
                    pos,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        chars.next();
        out.push((pos, tok));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    arity: usize,
    lattice: &'a Lattice,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn expr(&mut self) -> Result<Node, TermError> {
        let mut node = self.term()?;
        while self.peek() == Some(&Tok::Join) {
            self.at += 1;
            node = Node::join(node, self.term()?);
        }
        Ok(node)
    }

    fn term(&mut self) -> Result<Node, TermError> {
        let mut node = self.factor()?;
        while self.peek() == Some(&Tok::Meet) {
            self.at += 1;
            node = Node::meet(node, self.factor()?);
        }
        Ok(node)
    }

    fn factor(&mut self) -> Result<Node, TermError> {
        let pos = self.pos();
        match self.toks.get(self.at).map(|(_, t)| t.clone()) {
            Some(Tok::Open) => {
                self.at += 1;
                let node = self.expr()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(TermError::Syntax {
                        pos: self.pos(),
                        message: "expected `)`".into(),
                    });
                }
                self.at += 1;
                Ok(node)
            }
            Some(Tok::Word(w)) => {
                self.at += 1;
                if let Some(digits) = w.strip_prefix('x') {
                    if !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) {
                        let index: usize = digits.parse().map_err(|_| TermError::Syntax {
                            pos,
                            message: "variable index too large".into(),
                        })?;
                        if index == 0 || index > self.arity {
                            return Err(TermError::VariableOutOfRange {
                                pos,
                                index,
                                arity: self.arity,
                            });
                        }
                        return Ok(Node::Var(index - 1));
                    }
                }
                self.lattice
                    .elem(&w)
                    .map(|e| Node::Const(e.index()))
                    .ok_or(TermError::UnknownConstant { pos, name: w })
            }
            Some(_) => Err(TermError::Syntax {
                pos,
                message: "expected a variable, constant or `(`".into(),
            }),
            None => Err(TermError::Syntax {
                pos,
                message: "unexpected end of expression".into(),
            }),
        }
    }
}

/// Parses `text` as an `arity`-ary polynomial over `lattice`.
pub fn parse_expr(text: &str, arity: usize, lattice: Arc<Lattice>) -> Result<Term, TermError> {
    if arity == 0 {
        return Err(TermError::ZeroArity);
    }
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
        arity,
        lattice: &lattice,
    };
    let root = p.expr()?;
    if p.at < p.toks.len() {
        return Err(TermError::Syntax {
            pos: p.pos(),
            message: "trailing input".into(),
        });
    }
    Ok(Term {
        lattice,
        arity,
        root,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::points::Points;

    fn chain3() -> Arc<Lattice> {
        Arc::new(Lattice::chain(3).unwrap())
    }

    const MEDIAN: &str = "(x1 & x2) | (x2 & x3) | (x3 & x1)";

    #[test]
    fn median_ast() {
        let t = parse_expr(MEDIAN, 3, chain3()).unwrap();
        let expected = Node::join(
            Node::join(
                Node::meet(Node::Var(0), Node::Var(1)),
                Node::meet(Node::Var(1), Node::Var(2)),
            ),
            Node::meet(Node::Var(2), Node::Var(0)),
        );
        assert_eq!(t.root(), &expected);
    }

    #[test]
    fn precedence() {
        let t = parse_expr("x1 & x2 | x3", 3, chain3()).unwrap();
        assert_eq!(
            t.root(),
            &Node::join(Node::meet(Node::Var(0), Node::Var(1)), Node::Var(2))
        );
        let u = parse_expr("x1 ∧ x2 ∨ x3", 3, chain3()).unwrap();
        assert_eq!(u.root(), t.root());
    }

    #[test]
    fn errors() {
        let l = chain3();
        assert_eq!(
            parse_expr("x1 & q", 1, l.clone()).unwrap_err(),
            TermError::UnknownConstant {
                pos: 5,
                name: "q".into()
            }
        );
        assert!(matches!(
            parse_expr("x0", 2, l.clone()),
            Err(TermError::VariableOutOfRange { index: 0, .. })
        ));
        assert!(matches!(
            parse_expr("x1 | x3", 2, l.clone()),
            Err(TermError::VariableOutOfRange { pos: 5, index: 3, arity: 2 })
        ));
        assert!(matches!(
            parse_expr("(x1 | x2", 2, l.clone()),
            Err(TermError::Syntax { pos: 8, .. })
        ));
        assert!(matches!(
            parse_expr("x1 x2", 2, l.clone()),
            Err(TermError::Syntax { pos: 3, .. })
        ));
        assert!(matches!(
            parse_expr("x1 + x2", 2, l.clone()),
            Err(TermError::Syntax { pos: 3, .. })
        ));
        assert!(matches!(parse_expr("", 2, l.clone()), Err(TermError::Syntax { .. })));
        assert_eq!(parse_expr("x1", 0, l).unwrap_err(), TermError::ZeroArity);
    }

    #[test]
    fn evaluation() {
        let l = chain3();
        let (z, a, o) = (l.elem("0").unwrap(), l.elem("a").unwrap(), l.elem("1").unwrap());
        let med = parse_expr(MEDIAN, 3, l.clone()).unwrap();
        assert_eq!(med.eval(&[a, o, z]).unwrap(), a);
        let c = parse_expr("a", 3, l.clone()).unwrap();
        assert_eq!(c.eval(&[o, o, z]).unwrap(), a);
        let v = parse_expr("x2", 3, l.clone()).unwrap();
        assert_eq!(v.eval(&[z, a, o]).unwrap(), a);
        assert!(matches!(med.eval(&[a, o]), Err(TermError::ArityMismatch { .. })));
        let other = Lattice::chain(3).unwrap();
        assert!(matches!(
            med.eval(&[a, o, other.top()]),
            Err(TermError::Lattice(LatticeError::ForeignElement))
        ));
    }

    #[test]
    fn display_reparses() {
        let l = Arc::new(Lattice::chain(4).unwrap());
        let t = parse_expr("(a | (x1 & x2) | (x2 & x3) | (x3 & x1)) & b", 3, l.clone()).unwrap();
        let printed = t.to_string();
        let back = parse_expr(&printed, 3, l).unwrap();
        assert_eq!(back.root(), t.root());
    }

    #[test]
    fn eval_is_monotone_exhaustive() {
        let l = Arc::new(Lattice::boolean_cube(2).unwrap());
        let t = parse_expr("(x1 & 10) | (x2 & x3) | (01 & x3)", 3, l.clone()).unwrap();
        let pts: Vec<Vec<usize>> = Points::new(3, l.len()).collect();
        for p in &pts {
            for q in &pts {
                if p.iter().zip(q).all(|(&a, &b)| l.leq_idx(a, b)) {
                    assert!(l.leq_idx(t.eval_idx(p), t.eval_idx(q)));
                }
            }
        }
    }
}
