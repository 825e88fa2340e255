//! Recursive-descent parser.
//!
//! The grammar is a strict C expression/statement subset, so the paper-style
//! corpus sources paste in nearly verbatim. Operator precedence follows C
//! exactly; in particular bitwise `&` binds looser than `==`, so parity
//! tests must be written `(n & 1) == 0`.

use super::ast::*;
use super::lexer::{lex, Tok, Token};
use super::FrontendError;

/// Parser configuration. By default `assume`/`nondet` and reserved `__rv_`
/// names are rejected: they belong to engine-generated code, not to user
/// corpus sources. Relaxing is used when re-parsing dumped artifacts.
#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    pub allow_instrumentation: bool,
}

pub fn parse(input: &str) -> Result<SourceUnit, FrontendError> {
    parse_with(input, ParseOptions::default())
}

pub fn parse_with(input: &str, opts: ParseOptions) -> Result<SourceUnit, FrontendError> {
    let tokens = lex(input).map_err(|e| FrontendError::Syntax {
        span: e.span,
        msg: e.msg,
    })?;
    let mut p = Parser {
        tokens,
        pos: 0,
        opts,
        nondet_counter: 0,
    };
    p.unit()
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    opts: ParseOptions,
    nondet_counter: u64,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        let i = (self.pos + 1).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, msg: impl Into<String>) -> FrontendError {
        FrontendError::Syntax {
            span: self.span(),
            msg: msg.into(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Span, FrontendError> {
        if *self.peek() == tok {
            Ok(self.bump().span)
        } else {
            Err(self.error(format!(
                "expected {what}, found {}",
                self.peek().describe()
            )))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(Ident, Span), FrontendError> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                if !self.opts.allow_instrumentation && name.starts_with(RESERVED_PREFIX) {
                    return Err(FrontendError::ReservedIdentifier { name, span });
                }
                Ok((name, span))
            }
            other => Err(self.error(format!("expected {what}, found {}", other.describe()))),
        }
    }

    fn unit(&mut self) -> Result<SourceUnit, FrontendError> {
        let mut unit = SourceUnit::default();
        while *self.peek() != Tok::Eof {
            self.expect(Tok::KwInt, "'int'")?;
            let (name, span) = self.ident("function name")?;
            self.expect(Tok::LParen, "'('")?;
            let mut params = Vec::new();
            let mut named_params = true;
            if *self.peek() != Tok::RParen {
                loop {
                    self.expect(Tok::KwInt, "'int'")?;
                    // A prototype may omit parameter names: `int UF(int, int);`
                    if let Tok::Ident(_) = self.peek() {
                        let (p, _) = self.ident("parameter name")?;
                        params.push(p);
                    } else {
                        named_params = false;
                        params.push(format!("__anon{}", params.len()));
                    }
                    if *self.peek() == Tok::Comma {
                        self.bump();
                    } else {
                        break;
                    }
                }
            }
            self.expect(Tok::RParen, "')'")?;
            match self.peek() {
                Tok::Semi => {
                    self.bump();
                    unit.uf_decls.push(UfDecl {
                        name,
                        arity: params.len(),
                        span,
                    });
                }
                Tok::LBrace => {
                    if !named_params {
                        return Err(self.error("function definitions need named parameters"));
                    }
                    let body = self.block()?;
                    unit.functions.push(FunctionDef {
                        name,
                        params,
                        body,
                        span,
                    });
                }
                other => {
                    return Err(self.error(format!(
                        "expected function body or ';', found {}",
                        other.describe()
                    )))
                }
            }
        }
        Ok(unit)
    }

    fn block(&mut self) -> Result<Block, FrontendError> {
        self.expect(Tok::LBrace, "'{'")?;
        let mut stmts = Vec::new();
        while *self.peek() != Tok::RBrace {
            if *self.peek() == Tok::Eof {
                return Err(self.error("unexpected end of input inside block"));
            }
            stmts.push(self.stmt()?);
        }
        self.bump();
        Ok(Block::new(stmts))
    }

    /// A statement position that is either a braced block or a single
    /// statement (for `if`/`while`/`else` bodies).
    fn stmt_or_block(&mut self) -> Result<Block, FrontendError> {
        if *self.peek() == Tok::LBrace {
            self.block()
        } else {
            Ok(Block::new(vec![self.stmt()?]))
        }
    }

    fn stmt(&mut self) -> Result<Stmt, FrontendError> {
        let span = self.span();
        match self.peek().clone() {
            Tok::KwInt => {
                self.bump();
                let (name, _) = self.ident("variable name")?;
                let init = if *self.peek() == Tok::Assign {
                    self.bump();
                    Some(self.expr()?)
                } else {
                    None
                };
                self.expect(Tok::Semi, "';'")?;
                Ok(Stmt::Decl { name, init, span })
            }
            Tok::KwReturn => {
                self.bump();
                let value = self.expr()?;
                self.expect(Tok::Semi, "';'")?;
                Ok(Stmt::Return { value, span })
            }
            Tok::KwIf => {
                self.bump();
                self.expect(Tok::LParen, "'('")?;
                let cond = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                let then_branch = self.stmt_or_block()?;
                let else_branch = if *self.peek() == Tok::KwElse {
                    self.bump();
                    Some(self.stmt_or_block()?)
                } else {
                    None
                };
                Ok(Stmt::If {
                    cond,
                    then_branch,
                    else_branch,
                    span,
                })
            }
            Tok::KwWhile => {
                self.bump();
                self.expect(Tok::LParen, "'('")?;
                let cond = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                let body = self.stmt_or_block()?;
                Ok(Stmt::While { cond, body, span })
            }
            Tok::KwAssume => {
                if !self.opts.allow_instrumentation {
                    return Err(FrontendError::InstrumentationOnly {
                        what: "assume".into(),
                        span,
                    });
                }
                self.bump();
                self.expect(Tok::LParen, "'('")?;
                let cond = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                self.expect(Tok::Semi, "';'")?;
                Ok(Stmt::Assume {
                    cond,
                    engine: false,
                    span,
                })
            }
            Tok::Ident(_) if *self.peek2() == Tok::Assign => {
                let (name, _) = self.ident("variable name")?;
                self.bump(); // '='
                let value = self.expr()?;
                self.expect(Tok::Semi, "';'")?;
                Ok(Stmt::Assign { name, value, span })
            }
            _ => {
                let expr = self.expr()?;
                self.expect(Tok::Semi, "';'")?;
                Ok(Stmt::Expr { expr, span })
            }
        }
    }

    fn expr(&mut self) -> Result<Expr, FrontendError> {
        self.logical_or()
    }

    fn logical_or(&mut self) -> Result<Expr, FrontendError> {
        let mut lhs = self.logical_and()?;
        while *self.peek() == Tok::PipePipe {
            self.bump();
            let rhs = self.logical_and()?;
            lhs = Expr::binary(BinOp::Or, lhs, rhs);
        }
        Ok(lhs)
    }

    fn logical_and(&mut self) -> Result<Expr, FrontendError> {
        let mut lhs = self.bit_and()?;
        while *self.peek() == Tok::AmpAmp {
            self.bump();
            let rhs = self.bit_and()?;
            lhs = Expr::binary(BinOp::And, lhs, rhs);
        }
        Ok(lhs)
    }

    fn bit_and(&mut self) -> Result<Expr, FrontendError> {
        let mut lhs = self.equality()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.equality()?;
            lhs = Expr::binary(BinOp::BitAnd, lhs, rhs);
        }
        Ok(lhs)
    }

    fn equality(&mut self) -> Result<Expr, FrontendError> {
        let mut lhs = self.relational()?;
        loop {
            let op = match self.peek() {
                Tok::EqEq => BinOp::Eq,
                Tok::NotEq => BinOp::Ne,
                _ => break,
            };
            self.bump();
            let rhs = self.relational()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn relational(&mut self) -> Result<Expr, FrontendError> {
        let mut lhs = self.additive()?;
        loop {
            let op = match self.peek() {
                Tok::Lt => BinOp::Lt,
                Tok::Le => BinOp::Le,
                Tok::Gt => BinOp::Gt,
                Tok::Ge => BinOp::Ge,
                _ => break,
            };
            self.bump();
            let rhs = self.additive()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn additive(&mut self) -> Result<Expr, FrontendError> {
        let mut lhs = self.multiplicative()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.multiplicative()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn multiplicative(&mut self) -> Result<Expr, FrontendError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                Tok::Percent => BinOp::Rem,
                _ => break,
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, FrontendError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                let e = self.unary()?;
                // Fold negated literals so `-1` prints back as itself.
                if let Expr::Int(v) = e {
                    Ok(Expr::Int(v.wrapping_neg()))
                } else {
                    Ok(Expr::unary(UnOp::Neg, e))
                }
            }
            Tok::Bang => {
                self.bump();
                let e = self.unary()?;
                Ok(Expr::unary(UnOp::Not, e))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Expr, FrontendError> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(Expr::Int(v))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::KwNondet => {
                if !self.opts.allow_instrumentation {
                    return Err(FrontendError::InstrumentationOnly {
                        what: "nondet".into(),
                        span,
                    });
                }
                self.bump();
                self.expect(Tok::LParen, "'('")?;
                self.expect(Tok::RParen, "')'")?;
                self.nondet_counter += 1;
                Ok(Expr::Nondet {
                    id: self.nondet_counter,
                    width: 0,
                })
            }
            Tok::Ident(_) => {
                let (name, span) = self.ident("identifier")?;
                if *self.peek() == Tok::LParen {
                    self.bump();
                    let mut args = Vec::new();
                    if *self.peek() != Tok::RParen {
                        loop {
                            args.push(self.expr()?);
                            if *self.peek() == Tok::Comma {
                                self.bump();
                            } else {
                                break;
                            }
                        }
                    }
                    self.expect(Tok::RParen, "')'")?;
                    Ok(Expr::Call {
                        callee: name,
                        args,
                        span,
                    })
                } else {
                    Ok(Expr::Var(name))
                }
            }
            other => Err(self.error(format!(
                "expected expression, found {}",
                other.describe()
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fig3_sum1() {
        let src = "int sum1(int n){\n   if (n <= 1) return n;\n   return n + sum1(n-1);\n}";
        let unit = parse(src).unwrap();
        assert_eq!(unit.functions.len(), 1);
        let f = &unit.functions[0];
        assert_eq!(f.name, "sum1");
        assert_eq!(f.params.len(), 1);
        let returns = count_returns(&f.body);
        assert_eq!(returns, 2);
    }

    fn count_returns(b: &Block) -> usize {
        let mut n = 0;
        for s in &b.stmts {
            match s {
                Stmt::Return { .. } => n += 1,
                Stmt::If {
                    then_branch,
                    else_branch,
                    ..
                } => {
                    n += count_returns(then_branch);
                    if let Some(e) = else_branch {
                        n += count_returns(e);
                    }
                }
                Stmt::While { body, .. } => n += count_returns(body),
                _ => {}
            }
        }
        n
    }

    #[test]
    fn empty_input_is_empty_unit() {
        let unit = parse("").unwrap();
        assert!(unit.functions.is_empty());
        assert!(unit.uf_decls.is_empty());
    }

    #[test]
    fn syntax_error_carries_position() {
        let err = parse("int f(int n){return f(n-1)+}").unwrap_err();
        match err {
            FrontendError::Syntax { span, .. } => {
                assert_eq!(span.line, 1);
                // the offending '}' sits at the end of the line
                assert!(span.col > 20);
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn reserved_prefix_rejected() {
        let err = parse("int __rv_f(int n){return n;}").unwrap_err();
        assert!(matches!(err, FrontendError::ReservedIdentifier { .. }));
    }

    #[test]
    fn assume_requires_relaxed_mode() {
        let src = "int f(int n){assume(n > 0); return n;}";
        assert!(matches!(
            parse(src),
            Err(FrontendError::InstrumentationOnly { .. })
        ));
        let unit = parse_with(
            src,
            ParseOptions {
                allow_instrumentation: true,
            },
        )
        .unwrap();
        assert_eq!(unit.functions.len(), 1);
    }

    #[test]
    fn prototypes_declare_ufs() {
        let unit = parse("int UF(int, int);\nint f(int n){return UF(n, n);}").unwrap();
        assert_eq!(unit.uf_decls.len(), 1);
        assert_eq!(unit.uf_decls[0].arity, 2);
    }

    #[test]
    fn c_precedence_for_bitand() {
        // In C, `n & 1 == 0` parses as `n & (1 == 0)`.
        let unit = parse("int f(int n){return n & 1 == 0;}").unwrap();
        let f = &unit.functions[0];
        match &f.body.stmts[0] {
            Stmt::Return { value, .. } => match value {
                Expr::Binary { op, rhs, .. } => {
                    assert_eq!(*op, BinOp::BitAnd);
                    assert!(matches!(**rhs, Expr::Binary { op: BinOp::Eq, .. }));
                }
                other => panic!("unexpected expr {other:?}"),
            },
            other => panic!("unexpected stmt {other:?}"),
        }
    }
}
