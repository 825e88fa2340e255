//! Abstract syntax for the mini recursive language.
//!
//! The surface grammar is a strict C subset (see `docs/lang.md`): integer
//! functions, `if`/`else`, `while`, local declarations, assignments and
//! `return`. Two statement kinds exist only in engine-generated code and are
//! never produced by the parser: [`Stmt::SetFlagIf`] and [`Stmt::Record`].
//!
//! All nodes are plain owned values; once built they are never mutated in
//! place, so they can be shared freely across threads.

use std::fmt;

/// Names reserved for engine-generated functions and variables.
pub const RESERVED_PREFIX: &str = "__rv_";

pub type Ident = String;

/// Source position, 1-based. Synthetic nodes carry `0:0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(line: u32, col: u32) -> Self {
        Span { line, col }
    }

    pub fn synthetic() -> Self {
        Span::default()
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// A parsed translation unit: function definitions plus uninterpreted
/// function declarations (prototypes without a body).
#[derive(Debug, Clone, Default)]
pub struct SourceUnit {
    pub functions: Vec<FunctionDef>,
    pub uf_decls: Vec<UfDecl>,
}

impl SourceUnit {
    pub fn function(&self, name: &str) -> Option<&FunctionDef> {
        self.functions.iter().find(|f| f.name == name)
    }

    pub fn uf(&self, name: &str) -> Option<&UfDecl> {
        self.uf_decls.iter().find(|u| u.name == name)
    }
}

/// Declaration of an uninterpreted function symbol: `int name(int, int);`
#[derive(Debug, Clone)]
pub struct UfDecl {
    pub name: Ident,
    pub arity: usize,
    pub span: Span,
}

/// One function definition. All parameters and the return value have the
/// single integer type; the bit width is a property of evaluation and
/// encoding contexts, not of the syntax.
#[derive(Debug, Clone)]
pub struct FunctionDef {
    pub name: Ident,
    pub params: Vec<Ident>,
    pub body: Block,
    pub span: Span,
}

#[derive(Debug, Clone, Default)]
pub struct Block {
    pub stmts: Vec<Stmt>,
}

impl Block {
    pub fn new(stmts: Vec<Stmt>) -> Self {
        Block { stmts }
    }
}

#[derive(Debug, Clone)]
pub enum Stmt {
    /// `int x;` or `int x = e;`
    Decl {
        name: Ident,
        init: Option<Expr>,
        span: Span,
    },
    /// `x = e;`
    Assign {
        name: Ident,
        value: Expr,
        span: Span,
    },
    If {
        cond: Expr,
        then_branch: Block,
        else_branch: Option<Block>,
        span: Span,
    },
    /// Surface-only; removed by `loops_to_recursion`.
    While {
        cond: Expr,
        body: Block,
        span: Span,
    },
    Return {
        value: Expr,
        span: Span,
    },
    /// `assume(e);` — executions violating `e` are discarded. Assumptions
    /// inserted by the prover carry `engine = true` so they can be replaced
    /// wholesale by a later `add_assumption(.., replace = true)`.
    Assume {
        cond: Expr,
        engine: bool,
        span: Span,
    },
    /// Expression statement, e.g. a bare call.
    Expr {
        expr: Expr,
        span: Span,
    },
    /// Instrumentation: `if (cond) __rv_bc_flag = 1;` at frame entry.
    SetFlagIf {
        cond: Expr,
    },
    /// Instrumentation: append `(depth, site, args)` to the recording store
    /// of the given side. Generated only inside sync-search programs.
    Record {
        side: u8,
        depth: Expr,
        site: Expr,
        args: Vec<Expr>,
    },
}

impl Stmt {
    pub fn span(&self) -> Span {
        match self {
            Stmt::Decl { span, .. }
            | Stmt::Assign { span, .. }
            | Stmt::If { span, .. }
            | Stmt::While { span, .. }
            | Stmt::Return { span, .. }
            | Stmt::Assume { span, .. }
            | Stmt::Expr { span, .. } => *span,
            Stmt::SetFlagIf { .. } | Stmt::Record { .. } => Span::synthetic(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnOp {
    /// `-e`
    Neg,
    /// `!e`
    Not,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    /// Logical `&&` (short-circuit).
    And,
    /// Logical `||` (short-circuit).
    Or,
    /// Bitwise `&`.
    BitAnd,
}

#[derive(Debug, Clone)]
pub enum Expr {
    Int(i64),
    Var(Ident),
    Unary {
        op: UnOp,
        expr: Box<Expr>,
    },
    Binary {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    Call {
        callee: Ident,
        args: Vec<Expr>,
        span: Span,
    },
    /// `nondet()` — a fresh unconstrained value. `width` of 0 means the
    /// context's full bit width; instrumentation uses `width = 1` for
    /// boolean choices. `id` identifies the instance for model replay and is
    /// assigned when a verification task is finalized.
    Nondet {
        id: u64,
        width: u32,
    },
}

impl Expr {
    pub fn int(v: i64) -> Expr {
        Expr::Int(v)
    }

    pub fn var(name: impl Into<Ident>) -> Expr {
        Expr::Var(name.into())
    }

    pub fn call(callee: impl Into<Ident>, args: Vec<Expr>) -> Expr {
        Expr::Call {
            callee: callee.into(),
            args,
            span: Span::synthetic(),
        }
    }

    pub fn unary(op: UnOp, e: Expr) -> Expr {
        Expr::Unary {
            op,
            expr: Box::new(e),
        }
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
        }
    }

    pub fn not(e: Expr) -> Expr {
        Expr::unary(UnOp::Not, e)
    }

    pub fn and(lhs: Expr, rhs: Expr) -> Expr {
        Expr::binary(BinOp::And, lhs, rhs)
    }

    pub fn or(lhs: Expr, rhs: Expr) -> Expr {
        Expr::binary(BinOp::Or, lhs, rhs)
    }

    /// Boolean literal as an integer expression.
    pub fn bool(v: bool) -> Expr {
        Expr::Int(if v { 1 } else { 0 })
    }

    /// Conjunction that drops trivially true operands.
    pub fn and_opt(lhs: Option<Expr>, rhs: Expr) -> Expr {
        match lhs {
            None => rhs,
            Some(l) => Expr::and(l, rhs),
        }
    }

    /// True when the expression is the literal 1 (our canonical `true`).
    pub fn is_const_true(&self) -> bool {
        matches!(self, Expr::Int(1))
    }

    pub fn is_const_false(&self) -> bool {
        matches!(self, Expr::Int(0))
    }

    /// Free variable names, in first-occurrence order.
    pub fn free_vars(&self) -> Vec<Ident> {
        let mut out = Vec::new();
        self.collect_free_vars(&mut out);
        out
    }

    fn collect_free_vars(&self, out: &mut Vec<Ident>) {
        match self {
            Expr::Int(_) | Expr::Nondet { .. } => {}
            Expr::Var(name) => {
                if !out.iter().any(|n| n == name) {
                    out.push(name.clone());
                }
            }
            Expr::Unary { expr, .. } => expr.collect_free_vars(out),
            Expr::Binary { lhs, rhs, .. } => {
                lhs.collect_free_vars(out);
                rhs.collect_free_vars(out);
            }
            Expr::Call { args, .. } => {
                for a in args {
                    a.collect_free_vars(out);
                }
            }
        }
    }

    /// Substitute variables by expressions. Used to instantiate a predicate
    /// over formal parameters with the actual argument expressions.
    pub fn subst_vars(&self, map: &dyn Fn(&str) -> Option<Expr>) -> Expr {
        match self {
            Expr::Int(_) | Expr::Nondet { .. } => self.clone(),
            Expr::Var(name) => map(name).unwrap_or_else(|| self.clone()),
            Expr::Unary { op, expr } => Expr::unary(*op, expr.subst_vars(map)),
            Expr::Binary { op, lhs, rhs } => {
                Expr::binary(*op, lhs.subst_vars(map), rhs.subst_vars(map))
            }
            Expr::Call { callee, args, span } => Expr::Call {
                callee: callee.clone(),
                args: args.iter().map(|a| a.subst_vars(map)).collect(),
                span: *span,
            },
        }
    }
}

/// Disjunction of a predicate list; the empty disjunction is `false`.
pub fn disjunction(mut preds: Vec<Expr>) -> Expr {
    match preds.len() {
        0 => Expr::bool(false),
        1 => preds.pop().unwrap(),
        _ => {
            let mut it = preds.into_iter();
            let first = it.next().unwrap();
            it.fold(first, Expr::or)
        }
    }
}

/// Conjunction of a predicate list; the empty conjunction is `true`.
pub fn conjunction(preds: Vec<Expr>) -> Expr {
    let mut preds: Vec<Expr> = preds.into_iter().filter(|p| !p.is_const_true()).collect();
    match preds.len() {
        0 => Expr::bool(true),
        1 => preds.pop().unwrap(),
        _ => {
            let mut it = preds.into_iter();
            let first = it.next().unwrap();
            it.fold(first, Expr::and)
        }
    }
}
