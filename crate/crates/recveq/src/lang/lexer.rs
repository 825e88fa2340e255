//! Hand-rolled lexer for the mini language.

use super::ast::Span;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    KwInt,
    KwReturn,
    KwIf,
    KwElse,
    KwWhile,
    KwAssume,
    KwNondet,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Assign,
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    Amp,
    AmpAmp,
    PipePipe,
    Bang,
    EqEq,
    NotEq,
    Lt,
    Le,
    Gt,
    Ge,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Int(v) => format!("'{v}'"),
            Tok::KwInt => "'int'".into(),
            Tok::KwReturn => "'return'".into(),
            Tok::KwIf => "'if'".into(),
            Tok::KwElse => "'else'".into(),
            Tok::KwWhile => "'while'".into(),
            Tok::KwAssume => "'assume'".into(),
            Tok::KwNondet => "'nondet'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::Comma => "','".into(),
            Tok::Semi => "';'".into(),
            Tok::Assign => "'='".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Percent => "'%'".into(),
            Tok::Amp => "'&'".into(),
            Tok::AmpAmp => "'&&'".into(),
            Tok::PipePipe => "'||'".into(),
            Tok::Bang => "'!'".into(),
            Tok::EqEq => "'=='".into(),
            Tok::NotEq => "'!='".into(),
            Tok::Lt => "'<'".into(),
            Tok::Le => "'<='".into(),
            Tok::Gt => "'>'".into(),
            Tok::Ge => "'>='".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

#[derive(Debug, thiserror::Error)]
#[error("syntax error at {span}: {msg}")]
pub struct LexError {
    pub span: Span,
    pub msg: String,
}

pub fn lex(input: &str) -> Result<Vec<Token>, LexError> {
    let mut out = Vec::new();
    let mut chars = input.chars().peekable();
    let mut line: u32 = 1;
    let mut col: u32 = 1;

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if let Some(ch) = c {
                if ch == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
            }
            c
        }};
    }

    loop {
        let span = Span::new(line, col);
        let c = match chars.peek().copied() {
            Some(c) => c,
            None => {
                out.push(Token {
                    tok: Tok::Eof,
                    span,
                });
                return Ok(out);
            }
        };

        if c.is_whitespace() {
            bump!();
            continue;
        }

        // Line and block comments.
        if c == '/' {
            let mut look = chars.clone();
            look.next();
            match look.peek() {
                Some('/') => {
                    while let Some(ch) = chars.peek() {
                        if *ch == '\n' {
                            break;
                        }
                        bump!();
                    }
                    continue;
                }
                Some('*') => {
                    bump!();
                    bump!();
                    let mut closed = false;
                    while let Some(ch) = bump!() {
                        if ch == '*' {
                            if let Some('/') = chars.peek() {
                                bump!();
                                closed = true;
                                break;
                            }
                        }
                    }
                    if !closed {
                        return Err(LexError {
                            span,
                            msg: "unterminated block comment".into(),
                        });
                    }
                    continue;
                }
                _ => {}
            }
        }

        if c.is_ascii_digit() {
            let mut text = String::new();
            while let Some(ch) = chars.peek() {
                if ch.is_ascii_digit() {
                    text.push(*ch);
                    bump!();
                } else {
                    break;
                }
            }
            let value: i64 = text.parse().map_err(|_| LexError {
                span,
                msg: format!("integer literal '{text}' out of range"),
            })?;
            out.push(Token {
                tok: Tok::Int(value),
                span,
            });
            continue;
        }

        if c.is_ascii_alphabetic() || c == '_' {
            let mut text = String::new();
            while let Some(ch) = chars.peek() {
                if ch.is_ascii_alphanumeric() || *ch == '_' {
                    text.push(*ch);
                    bump!();
                } else {
                    break;
                }
            }
            let tok = match text.as_str() {
                "int" => Tok::KwInt,
                "return" => Tok::KwReturn,
                "if" => Tok::KwIf,
                "else" => Tok::KwElse,
                "while" => Tok::KwWhile,
                "assume" => Tok::KwAssume,
                "nondet" => Tok::KwNondet,
                _ => Tok::Ident(text),
            };
            out.push(Token { tok, span });
            continue;
        }

        bump!();
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '%' => Tok::Percent,
            '&' => {
                if let Some('&') = chars.peek() {
                    bump!();
                    Tok::AmpAmp
                } else {
                    Tok::Amp
                }
            }
            '|' => {
                if let Some('|') = chars.peek() {
                    bump!();
                    Tok::PipePipe
                } else {
                    return Err(LexError {
                        span,
                        msg: "bitwise '|' is not supported (only '||')".into(),
                    });
                }
            }
            '!' => {
                if let Some('=') = chars.peek() {
                    bump!();
                    Tok::NotEq
                } else {
                    Tok::Bang
                }
            }
            '=' => {
                if let Some('=') = chars.peek() {
                    bump!();
                    Tok::EqEq
                } else {
                    Tok::Assign
                }
            }
            '<' => {
                if let Some('=') = chars.peek() {
                    bump!();
                    Tok::Le
                } else {
                    Tok::Lt
                }
            }
            '>' => {
                if let Some('=') = chars.peek() {
                    bump!();
                    Tok::Ge
                } else {
                    Tok::Gt
                }
            }
            other => {
                return Err(LexError {
                    span,
                    msg: format!("unexpected character '{other}'"),
                })
            }
        };
        out.push(Token { tok, span });
    }
}
