//! Static checks: name resolution, arities, variable scoping, loop-body
//! restrictions, the all-paths-return check, and mutual-recursion rejection.

use super::ast::*;
use super::callgraph::call_graph;
use super::value::{eval_binop, eval_unop, truthy, Width};
use super::FrontendError;

/// Fall-through feasibility is decided by sweeping the input domain; beyond
/// this many free bits the check degrades to the conservative syntactic one.
const SWEEP_BIT_LIMIT: u32 = 20;
const PATH_LIMIT: usize = 2048;

pub fn typecheck(unit: &SourceUnit, width: Width) -> Result<(), FrontendError> {
    // Unique definition names across functions and UF declarations.
    let mut seen: Vec<&str> = Vec::new();
    for name in unit
        .functions
        .iter()
        .map(|f| f.name.as_str())
        .chain(unit.uf_decls.iter().map(|u| u.name.as_str()))
    {
        if seen.contains(&name) {
            return Err(FrontendError::DuplicateFunction { name: name.into() });
        }
        seen.push(name);
    }

    for f in &unit.functions {
        check_function(unit, f, width)?;
    }

    // Rejects mutual recursion as a side effect.
    call_graph(unit)?;
    Ok(())
}

fn check_function(unit: &SourceUnit, f: &FunctionDef, width: Width) -> Result<(), FrontendError> {
    let mut vars: Vec<Ident> = Vec::new();
    for p in &f.params {
        if vars.contains(p) {
            return Err(FrontendError::DuplicateVariable {
                name: p.clone(),
                function: f.name.clone(),
            });
        }
        vars.push(p.clone());
    }
    check_block(unit, f, &f.body, &mut vars, false)?;
    check_all_paths_return(f, width)?;
    Ok(())
}

fn check_block(
    unit: &SourceUnit,
    f: &FunctionDef,
    block: &Block,
    vars: &mut Vec<Ident>,
    in_loop: bool,
) -> Result<(), FrontendError> {
    for stmt in &block.stmts {
        match stmt {
            Stmt::Decl { name, init, span } => {
                if let Some(e) = init {
                    check_expr(unit, f, e, vars, in_loop)?;
                }
                if vars.contains(name) {
                    return Err(FrontendError::DuplicateVariable {
                        name: name.clone(),
                        function: f.name.clone(),
                    });
                }
                let _ = span;
                vars.push(name.clone());
            }
            Stmt::Assign { name, value, span } => {
                if !vars.contains(name) {
                    return Err(FrontendError::UnknownVariable {
                        name: name.clone(),
                        span: *span,
                    });
                }
                check_expr(unit, f, value, vars, in_loop)?;
            }
            Stmt::If {
                cond,
                then_branch,
                else_branch,
                ..
            } => {
                check_expr(unit, f, cond, vars, in_loop)?;
                check_block(unit, f, then_branch, vars, in_loop)?;
                if let Some(e) = else_branch {
                    check_block(unit, f, e, vars, in_loop)?;
                }
            }
            Stmt::While { cond, body, span } => {
                let _ = span;
                check_expr(unit, f, cond, vars, true)?;
                check_block(unit, f, body, vars, true)?;
            }
            Stmt::Return { value, span } => {
                if in_loop {
                    return Err(FrontendError::UnsupportedInLoop {
                        what: "return".into(),
                        span: *span,
                    });
                }
                check_expr(unit, f, value, vars, in_loop)?;
            }
            Stmt::Assume { cond, span, .. } => {
                if in_loop {
                    return Err(FrontendError::UnsupportedInLoop {
                        what: "assume".into(),
                        span: *span,
                    });
                }
                check_expr(unit, f, cond, vars, in_loop)?;
            }
            Stmt::Expr { expr, .. } => check_expr(unit, f, expr, vars, in_loop)?,
            Stmt::SetFlagIf { cond } => check_expr(unit, f, cond, vars, in_loop)?,
            Stmt::Record {
                depth, site, args, ..
            } => {
                check_expr(unit, f, depth, vars, in_loop)?;
                check_expr(unit, f, site, vars, in_loop)?;
                for a in args {
                    check_expr(unit, f, a, vars, in_loop)?;
                }
            }
        }
    }
    Ok(())
}

fn check_expr(
    unit: &SourceUnit,
    f: &FunctionDef,
    expr: &Expr,
    vars: &Vec<Ident>,
    in_loop: bool,
) -> Result<(), FrontendError> {
    match expr {
        Expr::Int(_) => Ok(()),
        Expr::Nondet { .. } => {
            if in_loop {
                return Err(FrontendError::UnsupportedInLoop {
                    what: "nondet".into(),
                    span: Span::synthetic(),
                });
            }
            Ok(())
        }
        Expr::Var(name) => {
            if vars.contains(name) {
                Ok(())
            } else {
                Err(FrontendError::UnknownVariable {
                    name: name.clone(),
                    span: Span::synthetic(),
                })
            }
        }
        Expr::Unary { expr, .. } => check_expr(unit, f, expr, vars, in_loop),
        Expr::Binary { lhs, rhs, .. } => {
            check_expr(unit, f, lhs, vars, in_loop)?;
            check_expr(unit, f, rhs, vars, in_loop)
        }
        Expr::Call { callee, args, span } => {
            let expected = if let Some(def) = unit.function(callee) {
                def.params.len()
            } else if let Some(uf) = unit.uf(callee) {
                uf.arity
            } else {
                return Err(FrontendError::UndefinedCallee {
                    name: callee.clone(),
                    span: *span,
                });
            };
            if args.len() != expected {
                return Err(FrontendError::ArityMismatch {
                    callee: callee.clone(),
                    expected,
                    found: args.len(),
                    span: *span,
                });
            }
            for a in args {
                check_expr(unit, f, a, vars, in_loop)?;
            }
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// All-paths-return
//
// The syntactic check accepts a body whose last reachable statement returns
// on every branch. Guarded-return chains like the parity split of two
// mutually exclusive trailing `if`s fail that check even though no input
// can fall through, so we enumerate the fall-through path conditions and
// sweep them over the finite input domain. Any satisfiable fall-through is
// a MissingReturn error; conditions we cannot evaluate (calls, loops,
// too-wide domains) make the check fail conservatively.
// ---------------------------------------------------------------------------

fn check_all_paths_return(f: &FunctionDef, width: Width) -> Result<(), FrontendError> {
    if block_always_returns(&f.body) {
        return Ok(());
    }

    let conds = match fall_through_conditions(&f.body) {
        Some(c) => c,
        None => {
            return Err(FrontendError::MissingReturn {
                function: f.name.clone(),
                detail: "a control path may fall off the end (not statically decidable)".into(),
            })
        }
    };
    if conds.is_empty() {
        return Ok(());
    }

    let bits = (f.params.len() as u32) * width.bits();
    if bits > SWEEP_BIT_LIMIT {
        return Err(FrontendError::MissingReturn {
            function: f.name.clone(),
            detail: "a control path may fall off the end (domain too large to sweep)".into(),
        });
    }

    let n_params = f.params.len();
    let total: u64 = 1u64 << bits;
    let mut args = vec![0i64; n_params];
    for combo in 0..total {
        for (i, a) in args.iter_mut().enumerate() {
            let raw = (combo >> (i as u32 * width.bits())) & width.mask();
            *a = width.from_unsigned(raw);
        }
        for path in &conds {
            let env = |name: &str| {
                f.params
                    .iter()
                    .position(|p| p == name)
                    .map(|i| args[i])
            };
            match eval_pure(path, width, &env) {
                Some(v) if truthy(v) => {
                    return Err(FrontendError::MissingReturn {
                        function: f.name.clone(),
                        detail: format!(
                            "input {:?} reaches the end of the body without returning",
                            args
                        ),
                    });
                }
                Some(_) => {}
                None => {
                    return Err(FrontendError::MissingReturn {
                        function: f.name.clone(),
                        detail: "fall-through condition is not statically evaluable".into(),
                    })
                }
            }
        }
    }
    Ok(())
}

fn block_always_returns(block: &Block) -> bool {
    for stmt in &block.stmts {
        match stmt {
            Stmt::Return { .. } => return true,
            Stmt::If {
                then_branch,
                else_branch: Some(else_branch),
                ..
            } => {
                if block_always_returns(then_branch) && block_always_returns(else_branch) {
                    return true;
                }
            }
            _ => {}
        }
    }
    false
}

/// Enumerate fall-through path conditions as expressions over the
/// parameters. Returns `None` when assignments, loops or calls make the
/// conditions non-static.
fn fall_through_conditions(body: &Block) -> Option<Vec<Expr>> {
    // Each open path carries its accumulated condition; paths that return
    // are dropped, paths reaching the end are reported.
    let mut open: Vec<Option<Expr>> = vec![None];
    let mut done: Vec<Expr> = Vec::new();
    walk(body, &mut open, &mut done)?;
    return Some(
        open.into_iter()
            .map(|c| c.unwrap_or_else(|| Expr::bool(true)))
            .chain(done)
            .collect(),
    );

    fn is_static(e: &Expr) -> bool {
        match e {
            Expr::Int(_) | Expr::Var(_) => true,
            Expr::Nondet { .. } => false,
            Expr::Unary { expr, .. } => is_static(expr),
            Expr::Binary { lhs, rhs, .. } => is_static(lhs) && is_static(rhs),
            Expr::Call { .. } => false,
        }
    }

    fn walk(block: &Block, open: &mut Vec<Option<Expr>>, done: &mut Vec<Expr>) -> Option<()> {
        for stmt in &block.stmts {
            if open.is_empty() {
                return Some(());
            }
            match stmt {
                Stmt::Return { .. } => {
                    open.clear();
                }
                Stmt::Assume { cond, .. } => {
                    if !is_static(cond) {
                        return None;
                    }
                    for c in open.iter_mut() {
                        *c = Some(Expr::and_opt(c.take(), cond.clone()));
                    }
                }
                Stmt::If {
                    cond,
                    then_branch,
                    else_branch,
                    ..
                } => {
                    if !is_static(cond) {
                        return None;
                    }
                    let mut then_paths: Vec<Option<Expr>> = open
                        .iter()
                        .map(|c| Some(Expr::and_opt(c.clone(), cond.clone())))
                        .collect();
                    let mut else_paths: Vec<Option<Expr>> = open
                        .iter()
                        .map(|c| Some(Expr::and_opt(c.clone(), Expr::not(cond.clone()))))
                        .collect();
                    walk(then_branch, &mut then_paths, done)?;
                    if let Some(e) = else_branch {
                        walk(e, &mut else_paths, done)?;
                    }
                    open.clear();
                    open.append(&mut then_paths);
                    open.append(&mut else_paths);
                    if open.len() > PATH_LIMIT {
                        return None;
                    }
                }
                // Any mutation or non-static construct gives up; the
                // syntactic check has already failed at this point.
                Stmt::Assign { .. }
                | Stmt::Decl { init: Some(_), .. }
                | Stmt::While { .. }
                | Stmt::Expr { .. }
                | Stmt::SetFlagIf { .. }
                | Stmt::Record { .. } => return None,
                Stmt::Decl { init: None, .. } => {}
            }
        }
        Some(())
    }
}

/// Evaluate a call-free expression over concrete parameter values.
pub fn eval_pure(expr: &Expr, width: Width, env: &dyn Fn(&str) -> Option<i64>) -> Option<i64> {
    match expr {
        Expr::Int(v) => Some(width.wrap(*v)),
        Expr::Var(name) => env(name),
        Expr::Unary { op, expr } => Some(eval_unop(width, *op, eval_pure(expr, width, env)?)),
        Expr::Binary { op, lhs, rhs } => {
            // Short-circuit so the strictness of && mirrors the interpreter.
            let l = eval_pure(lhs, width, env)?;
            match op {
                BinOp::And if !truthy(l) => Some(0),
                BinOp::Or if truthy(l) => Some(1),
                _ => Some(eval_binop(width, *op, l, eval_pure(rhs, width, env)?)),
            }
        }
        Expr::Call { .. } | Expr::Nondet { .. } => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parser::parse;

    fn check(src: &str) -> Result<(), FrontendError> {
        typecheck(&parse(src).unwrap(), Width::W8)
    }

    #[test]
    fn fig9_two_params_ok() {
        check(
            "int p1(int n, int m){
                if (m < 1 || n < 1 || m > n) return 0;
                if (m == 1 || n == 1 || m == n) return 1;
                return p1(n - 1, m - 1) + p1(n - 1, m);
            }",
        )
        .unwrap();
    }

    #[test]
    fn undefined_callee() {
        let err = check("int f(int n){return g(n);}").unwrap_err();
        match err {
            FrontendError::UndefinedCallee { name, .. } => assert_eq!(name, "g"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn mutual_recursion_rejected() {
        let err = check("int f(int n){return g(n);} int g(int n){return f(n);}").unwrap_err();
        assert!(matches!(
            err,
            FrontendError::MutualRecursionUnsupported { .. }
        ));
    }

    #[test]
    fn arity_mismatch() {
        let err = check("int f(int n){return f(n, n);}").unwrap_err();
        assert!(matches!(err, FrontendError::ArityMismatch { .. }));
    }

    #[test]
    fn parity_split_returns_accepted() {
        // The trailing ifs cover all inputs even though neither has an else.
        check(
            "int h2(int n){
                if (n < 1) return 0;
                if (n == 1) return 1;
                if ((n & 1) == 0) return h2(n-1) + h2(n-2);
                if ((n & 1) == 1) return h2(n-2) + h2(n-2) + h2(n-3);
            }",
        )
        .unwrap();
    }

    #[test]
    fn genuine_fall_through_rejected() {
        let err = check("int f(int n){ if (n > 0) return 1; }").unwrap_err();
        assert!(matches!(err, FrontendError::MissingReturn { .. }));
    }

    #[test]
    fn return_inside_loop_rejected() {
        let err = check("int f(int n){ while (n > 0) { return n; } return 0; }").unwrap_err();
        assert!(matches!(err, FrontendError::UnsupportedInLoop { .. }));
    }

    #[test]
    fn loops_with_trailing_return_ok() {
        check("int s(int n){ int a = 0; while (n > 0) { a = a + n; n = n - 1; } return a; }")
            .unwrap();
    }

    #[test]
    fn duplicate_declaration_rejected() {
        let err = check("int f(int n){ int n = 1; return n; }").unwrap_err();
        assert!(matches!(err, FrontendError::DuplicateVariable { .. }));
    }
}
