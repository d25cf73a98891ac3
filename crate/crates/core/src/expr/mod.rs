//! Scalar expression language used to define immersion components.
//!
//! Grammar (highest precedence first):
//!
//! ```text
//! primary := number | ident | func "(" expr ")" | "(" expr ")"
//! power   := primary ( "^" unary )?          right associative
//! unary   := "-" unary | power
//! term    := unary ( ("*" | "/") unary )*
//! expr    := term ( ("+" | "-") term )*
//! func    := sin | cos | tan | exp | log | sqrt | sinh | cosh
//! ```
//!
//! Expressions are immutable once parsed. Evaluation is generic over
//! [`Scalar`](crate::scalar::Scalar), so the same tree evaluates on plain
//! floats and on (nested) dual numbers for exact derivatives.

mod eval;
mod parser;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use eval::Env;
pub use parser::parse;

/// Byte range of a node in its source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
}

impl Func {
    pub const ALL: [Func; 8] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Sinh,
        Func::Cosh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone)]
pub enum NodeKind {
    Const(f64),
    Var(String),
    Neg(Box<Node>),
    Call(Func, Box<Node>),
    Binary(BinOp, Box<Node>, Box<Node>),
}

/// Tree node. Equality is structural and ignores source spans.
#[derive(Debug, Clone)]
pub struct Node {
    pub kind: NodeKind,
    pub span: Span,
}

impl Node {
    pub fn new(kind: NodeKind, span: Span) -> Self {
        Node { kind, span }
    }

    /// Node without source position, for programmatic construction.
    pub fn synthetic(kind: NodeKind) -> Self {
        Node {
            kind,
            span: Span::default(),
        }
    }

    /// Value of the subtree when it contains no variables.
    pub fn const_value(&self) -> Option<f64> {
        match &self.kind {
            NodeKind::Const(c) => Some(*c),
            NodeKind::Var(_) => None,
            NodeKind::Neg(a) => a.const_value().map(|v| -v),
            NodeKind::Call(f, a) => {
                let v = a.const_value()?;
                Some(match f {
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Tan => v.tan(),
                    Func::Exp => v.exp(),
                    Func::Log => v.ln(),
                    Func::Sqrt => v.sqrt(),
                    Func::Sinh => v.sinh(),
                    Func::Cosh => v.cosh(),
                })
            }
            NodeKind::Binary(op, a, b) => {
                let (x, y) = (a.const_value()?, b.const_value()?);
                Some(match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => x / y,
                    BinOp::Pow => x.powf(y),
                })
            }
        }
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match &self.kind {
            NodeKind::Const(_) => {}
            NodeKind::Var(v) => {
                out.insert(v.clone());
            }
            NodeKind::Neg(a) | NodeKind::Call(_, a) => a.collect_vars(out),
            NodeKind::Binary(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        match (&self.kind, &other.kind) {
            (NodeKind::Const(a), NodeKind::Const(b)) => a == b,
            (NodeKind::Var(a), NodeKind::Var(b)) => a == b,
            (NodeKind::Neg(a), NodeKind::Neg(b)) => a == b,
            (NodeKind::Call(f, a), NodeKind::Call(g, b)) => f == g && a == b,
            (NodeKind::Binary(p, a1, a2), NodeKind::Binary(q, b1, b2)) => {
                p == q && a1 == b1 && a2 == b2
            }
            _ => false,
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            NodeKind::Const(c) => write!(f, "{c:?}"),
            NodeKind::Var(v) => f.write_str(v),
            NodeKind::Neg(a) => write!(f, "(-{a})"),
            NodeKind::Call(func, a) => write!(f, "{}({a})", func.name()),
            NodeKind::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
        }
    }
}

/// A parsed scalar expression.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    root: Node,
}

impl Expr {
    pub fn from_root(root: Node) -> Self {
        Expr { root }
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// Sorted set of free variables.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.root.collect_vars(&mut out);
        out
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

impl std::str::FromStr for Expr {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("empty expression")]
    Empty,
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown function `{name}` at byte {offset}")]
    UnknownFunction { name: String, offset: usize },
    #[error("unbalanced parenthesis at byte {offset}")]
    UnbalancedParen { offset: usize },
    #[error("unbound variable `{name}` at {span}")]
    UnboundVariable { name: String, span: Span },
    #[error("domain error in `{node}` at {span}: {reason}")]
    Domain {
        node: String,
        span: Span,
        reason: &'static str,
    },
    #[error("derivative order must be 1 or 2, got {0}")]
    BadOrder(u8),
}
