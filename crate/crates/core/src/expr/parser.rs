use super::{BinOp, Expr, ExprError, Func, Node, NodeKind, Span};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: Span,
}

fn lex(src: &str) -> Result<Vec<Token>, ExprError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() || (c == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text = &src[start..i];
            let value: f64 = text.parse().map_err(|_| ExprError::Syntax {
                offset: start,
                message: format!("malformed number `{text}`"),
            })?;
            out.push(Token {
                tok: Tok::Num(value),
                span: Span { start, end: i },
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(src[start..i].to_string()),
                span: Span { start, end: i },
            });
            continue;
        }
        let tok = match c {
            b'+' | b'-' | b'*' | b'/' | b'^' => Tok::Op(c as char),
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(ExprError::Syntax {
                    offset: start,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        };
        i += 1;
        out.push(Token {
            tok,
            span: Span { start, end: i },
        });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |t| t.span.start)
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek() {
            let op = if *c == '+' { BinOp::Add } else { BinOp::Sub };
            self.bump();
            let rhs = self.term()?;
            lhs = binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek() {
            let op = if *c == '*' { BinOp::Mul } else { BinOp::Div };
            self.bump();
            let rhs = self.unary()?;
            lhs = binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node, ExprError> {
        if let Some(Tok::Op('-')) = self.peek() {
            let minus = self.bump();
            let inner = self.unary()?;
            let span = Span {
                start: minus.span.start,
                end: inner.span.end,
            };
            return Ok(Node::new(NodeKind::Neg(Box::new(inner)), span));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, ExprError> {
        let base = self.primary()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.bump();
            let exponent = self.unary()?;
            return Ok(binary(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Node, ExprError> {
        let offset = self.offset();
        let Some(tok) = self.peek().cloned() else {
            return Err(ExprError::Syntax {
                offset,
                message: "unexpected end of input".into(),
            });
        };
        match tok {
            Tok::Num(v) => {
                let t = self.bump();
                Ok(Node::new(NodeKind::Const(v), t.span))
            }
            Tok::Ident(name) => {
                let t = self.bump();
                if let Some(Tok::LParen) = self.peek() {
                    let func = Func::from_name(&name).ok_or(ExprError::UnknownFunction {
                        name: name.clone(),
                        offset: t.span.start,
                    })?;
                    let open = self.bump();
                    let arg = self.expr()?;
                    let end = self.close(open.span.start)?;
                    Ok(Node::new(
                        NodeKind::Call(func, Box::new(arg)),
                        Span {
                            start: t.span.start,
                            end,
                        },
                    ))
                } else {
                    Ok(Node::new(NodeKind::Var(name), t.span))
                }
            }
            Tok::LParen => {
                let open = self.bump();
                let mut inner = self.expr()?;
                let end = self.close(open.span.start)?;
                inner.span = Span {
                    start: open.span.start,
                    end,
                };
                Ok(inner)
            }
            Tok::RParen => Err(ExprError::UnbalancedParen { offset }),
            Tok::Op(c) => Err(ExprError::Syntax {
                offset,
                message: format!("unexpected operator `{c}`"),
            }),
        }
    }

    fn close(&mut self, open_offset: usize) -> Result<usize, ExprError> {
        match self.peek() {
            Some(Tok::RParen) => Ok(self.bump().span.end),
            None => Err(ExprError::UnbalancedParen {
                offset: open_offset,
            }),
            Some(_) => Err(ExprError::Syntax {
                offset: self.offset(),
                message: "expected `)`".into(),
            }),
        }
    }
}

fn binary(op: BinOp, lhs: Node, rhs: Node) -> Node {
    let span = Span {
        start: lhs.span.start,
        end: rhs.span.end,
    };
    Node::new(NodeKind::Binary(op, Box::new(lhs), Box::new(rhs)), span)
}

/// Parse an expression.
pub fn parse(src: &str) -> Result<Expr, ExprError> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(ExprError::Empty);
    }
    let mut p = Parser {
        toks,
        pos: 0,
        len: src.len(),
    };
    let root = p.expr()?;
    if p.pos < p.toks.len() {
        let offset = p.offset();
        return Err(match p.peek() {
            Some(Tok::RParen) => ExprError::UnbalancedParen { offset },
            _ => ExprError::Syntax {
                offset,
                message: "trailing input".into(),
            },
        });
    }
    Ok(Expr::from_root(root))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(name: &str) -> Node {
        Node::synthetic(NodeKind::Var(name.into()))
    }

    #[test]
    fn single_variable() {
        let e = parse("u").unwrap();
        assert_eq!(*e.root(), var("u"));
    }

    #[test]
    fn product_of_cosines() {
        let e = parse("cos(u)*cos(v)").unwrap();
        let expect = Node::synthetic(NodeKind::Binary(
            BinOp::Mul,
            Box::new(Node::synthetic(NodeKind::Call(Func::Cos, Box::new(var("u"))))),
            Box::new(Node::synthetic(NodeKind::Call(Func::Cos, Box::new(var("v"))))),
        ));
        assert_eq!(*e.root(), expect);
    }

    #[test]
    fn precedence_and_associativity() {
        // -u^2 is -(u^2); power is right associative.
        assert_eq!(parse("-u^2").unwrap(), parse("-(u^2)").unwrap());
        assert_eq!(parse("u^v^w").unwrap(), parse("u^(v^w)").unwrap());
        assert_eq!(parse("a-b-c").unwrap(), parse("(a-b)-c").unwrap());
        assert_eq!(parse("a+b*c").unwrap(), parse("a+(b*c)").unwrap());
        assert_eq!(parse("2^-1").unwrap(), parse("2^(-1)").unwrap());
    }

    #[test]
    fn numbers_with_exponents() {
        let e = parse("1.5e-3 + .25").unwrap();
        assert_eq!(e.root().const_value(), Some(1.5e-3 + 0.25));
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(parse(""), Err(ExprError::Empty));
        assert_eq!(
            parse("foo(u)"),
            Err(ExprError::UnknownFunction {
                name: "foo".into(),
                offset: 0
            })
        );
        assert_eq!(parse("(u+1"), Err(ExprError::UnbalancedParen { offset: 0 }));
        assert_eq!(parse("u+1)"), Err(ExprError::UnbalancedParen { offset: 3 }));
        assert!(matches!(
            parse("u + * v"),
            Err(ExprError::Syntax { offset: 4, .. })
        ));
        assert!(matches!(
            parse("u $ v"),
            Err(ExprError::Syntax { offset: 2, .. })
        ));
        assert!(matches!(parse("u v"), Err(ExprError::Syntax { offset: 2, .. })));
    }

    #[test]
    fn spans_cover_source() {
        let src = "3*sin(u)";
        let e = parse(src).unwrap();
        assert_eq!(e.root().span, Span { start: 0, end: 8 });
        if let NodeKind::Binary(_, _, rhs) = &e.root().kind {
            assert_eq!(&src[rhs.span.start..rhs.span.end], "sin(u)");
        } else {
            panic!("expected product");
        }
    }

    #[test]
    fn print_then_parse() {
        for src in ["u^2+3*v", "-sin(u)/exp(v-1)", "u^v^w", "sqrt(u*u+v*v)", "1e-7*cosh(-u)"] {
            let e = parse(src).unwrap();
            assert_eq!(parse(&e.to_string()).unwrap(), e, "{src}");
        }
    }
}
