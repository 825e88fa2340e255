//! Loop elimination: every `while` is replaced by calls to fresh
//! tail-recursive functions, one per variable the loop modifies. Each fresh
//! function receives the variables the loop reads, re-runs the loop body,
//! and returns the final value of its variable. The language is pure, so
//! re-running the body once per modified variable preserves semantics; the
//! oracle sweeps in the test suite check value and termination behaviour.

use super::ast::*;

/// Rewrite `f` loop-free. Returns the rewritten function first, followed by
/// the generated recursive loop functions (innermost loops first). Loop-free
/// input is returned unchanged as a single-element list.
pub fn loops_to_recursion(f: &FunctionDef) -> Vec<FunctionDef> {
    if !block_has_loop(&f.body) {
        return vec![f.clone()];
    }
    let mut ctx = LoopCtx {
        fn_name: f.name.clone(),
        counter: 0,
        temp_counter: 0,
        generated: Vec::new(),
    };
    let body = rewrite_block(&f.body, &mut ctx);
    let mut out = vec![FunctionDef {
        name: f.name.clone(),
        params: f.params.clone(),
        body,
        span: f.span,
    }];
    out.append(&mut ctx.generated);
    out
}

/// Apply [`loops_to_recursion`] to every function of a unit.
pub fn eliminate_loops(unit: &SourceUnit) -> SourceUnit {
    let mut out = SourceUnit {
        functions: Vec::new(),
        uf_decls: unit.uf_decls.clone(),
    };
    for f in &unit.functions {
        out.functions.extend(loops_to_recursion(f));
    }
    out
}

pub fn block_has_loop(block: &Block) -> bool {
    block.stmts.iter().any(|s| match s {
        Stmt::While { .. } => true,
        Stmt::If {
            then_branch,
            else_branch,
            ..
        } => {
            block_has_loop(then_branch)
                || else_branch.as_ref().map_or(false, block_has_loop)
        }
        _ => false,
    })
}

struct LoopCtx {
    fn_name: Ident,
    counter: usize,
    temp_counter: usize,
    generated: Vec<FunctionDef>,
}

fn rewrite_block(block: &Block, ctx: &mut LoopCtx) -> Block {
    let mut stmts = Vec::new();
    for stmt in &block.stmts {
        match stmt {
            Stmt::While { cond, body, span } => {
                let body = rewrite_block(body, ctx);
                stmts.extend(lower_loop(cond, &body, *span, ctx));
            }
            Stmt::If {
                cond,
                then_branch,
                else_branch,
                span,
            } => stmts.push(Stmt::If {
                cond: cond.clone(),
                then_branch: rewrite_block(then_branch, ctx),
                else_branch: else_branch.as_ref().map(|b| rewrite_block(b, ctx)),
                span: *span,
            }),
            other => stmts.push(other.clone()),
        }
    }
    Block::new(stmts)
}

/// Replace one (already loop-free) `while` with calls to fresh recursive
/// functions. All calls receive the pre-loop values, so the fan-out per
/// modified variable cannot observe partial updates.
fn lower_loop(cond: &Expr, body: &Block, span: Span, ctx: &mut LoopCtx) -> Vec<Stmt> {
    let loop_idx = ctx.counter;
    ctx.counter += 1;

    let used = loop_inputs(cond, body);
    let modified = assigned_vars(body, &used);

    let mut out = Vec::new();
    let mut temps: Vec<(Ident, Ident)> = Vec::new(); // (temp, variable)

    for var in &modified {
        let fname = format!("__rv_{}_loop{}_{}", ctx.fn_name, loop_idx, var);
        let mut fn_body = vec![Stmt::If {
            cond: Expr::not(cond.clone()),
            then_branch: Block::new(vec![Stmt::Return {
                value: Expr::var(var.clone()),
                span,
            }]),
            else_branch: None,
            span,
        }];
        fn_body.extend(body.stmts.iter().cloned());
        fn_body.push(Stmt::Return {
            value: Expr::call(
                fname.clone(),
                used.iter().map(|u| Expr::var(u.clone())).collect(),
            ),
            span,
        });
        ctx.generated.push(FunctionDef {
            name: fname.clone(),
            params: used.clone(),
            body: Block::new(fn_body),
            span,
        });

        let temp = format!("__rv_t{}", ctx.temp_counter);
        ctx.temp_counter += 1;
        out.push(Stmt::Decl {
            name: temp.clone(),
            init: Some(Expr::call(
                fname,
                used.iter().map(|u| Expr::var(u.clone())).collect(),
            )),
            span,
        });
        temps.push((temp, var.clone()));
    }

    for (temp, var) in temps {
        out.push(Stmt::Assign {
            name: var,
            value: Expr::var(temp),
            span,
        });
    }
    out
}

/// Variables the loop reads or writes that come from the enclosing scope,
/// in first-occurrence order over condition then body.
fn loop_inputs(cond: &Expr, body: &Block) -> Vec<Ident> {
    let mut declared: Vec<Ident> = Vec::new();
    collect_decls(body, &mut declared);

    let mut out: Vec<Ident> = Vec::new();
    let mut push = |name: &Ident| {
        if !declared.contains(name) && !out.contains(name) {
            out.push(name.clone());
        }
    };
    for v in cond.free_vars() {
        push(&v);
    }
    collect_block_vars(body, &mut |v| push(v));
    out
}

fn collect_decls(block: &Block, out: &mut Vec<Ident>) {
    for s in &block.stmts {
        match s {
            Stmt::Decl { name, .. } => out.push(name.clone()),
            Stmt::If {
                then_branch,
                else_branch,
                ..
            } => {
                collect_decls(then_branch, out);
                if let Some(e) = else_branch {
                    collect_decls(e, out);
                }
            }
            Stmt::While { body, .. } => collect_decls(body, out),
            _ => {}
        }
    }
}

fn collect_block_vars(block: &Block, push: &mut dyn FnMut(&Ident)) {
    let mut visit_expr = |e: &Expr, push: &mut dyn FnMut(&Ident)| {
        for v in e.free_vars() {
            push(&v);
        }
    };
    for s in &block.stmts {
        match s {
            Stmt::Decl { init, .. } => {
                if let Some(e) = init {
                    visit_expr(e, push);
                }
            }
            Stmt::Assign { name, value, .. } => {
                push(name);
                visit_expr(value, push);
            }
            Stmt::If {
                cond,
                then_branch,
                else_branch,
                ..
            } => {
                visit_expr(cond, push);
                collect_block_vars(then_branch, push);
                if let Some(e) = else_branch {
                    collect_block_vars(e, push);
                }
            }
            Stmt::While { cond, body, .. } => {
                visit_expr(cond, push);
                collect_block_vars(body, push);
            }
            Stmt::Return { value, .. } => visit_expr(value, push),
            Stmt::Assume { cond, .. } => visit_expr(cond, push),
            Stmt::Expr { expr, .. } => visit_expr(expr, push),
            Stmt::SetFlagIf { cond } => visit_expr(cond, push),
            Stmt::Record {
                depth, site, args, ..
            } => {
                visit_expr(depth, push);
                visit_expr(site, push);
                for a in args {
                    visit_expr(a, push);
                }
            }
        }
    }
}

/// Enclosing-scope variables assigned in the body, in `used` order.
fn assigned_vars(body: &Block, used: &[Ident]) -> Vec<Ident> {
    let mut assigned: Vec<Ident> = Vec::new();
    fn walk(block: &Block, out: &mut Vec<Ident>) {
        for s in &block.stmts {
            match s {
                Stmt::Assign { name, .. } => {
                    if !out.contains(name) {
                        out.push(name.clone());
                    }
                }
                Stmt::If {
                    then_branch,
                    else_branch,
                    ..
                } => {
                    walk(then_branch, out);
                    if let Some(e) = else_branch {
                        walk(e, out);
                    }
                }
                Stmt::While { body, .. } => walk(body, out),
                _ => {}
            }
        }
    }
    walk(body, &mut assigned);
    used.iter()
        .filter(|u| assigned.contains(u))
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parser::parse;

    #[test]
    fn loop_free_is_identity() {
        let unit = parse("int f1(int n){ if (n < 1) return 0; return f1(n-1); }").unwrap();
        let out = loops_to_recursion(unit.function("f1").unwrap());
        assert_eq!(out.len(), 1);
        assert_eq!(
            crate::lang::printer::print_function(&out[0]),
            crate::lang::printer::print_function(unit.function("f1").unwrap())
        );
    }

    #[test]
    fn single_loop_produces_tail_recursion() {
        let unit =
            parse("int s(int n){ int a = 0; while (n > 0) { a = a + n; n = n - 1; } return a; }")
                .unwrap();
        let out = loops_to_recursion(unit.function("s").unwrap());
        // a and n are both modified: one function each.
        assert_eq!(out.len(), 3);
        assert!(out[1].name.starts_with("__rv_s_loop0_"));
        assert!(out[2].name.starts_with("__rv_s_loop0_"));
        for f in &out {
            assert!(!block_has_loop(&f.body));
        }
    }

    #[test]
    fn sequential_loops_get_distinct_names() {
        let unit = parse(
            "int g(int n){ int a = 0; while (a < n) { a = a + 1; } int b = 0; while (b < n) { b = b + 2; } return a + b; }",
        )
        .unwrap();
        let out = loops_to_recursion(unit.function("g").unwrap());
        let names: Vec<_> = out.iter().map(|f| f.name.clone()).collect();
        assert!(names.contains(&"__rv_g_loop0_a".to_string()));
        assert!(names.contains(&"__rv_g_loop1_b".to_string()));
    }

    #[test]
    fn nested_loops_eliminated_inner_first() {
        let unit = parse(
            "int h(int n){ int acc = 0; int i = 0; while (i < n) { int j = 0; while (j < i) { acc = acc + 1; j = j + 1; } i = i + 1; } return acc; }",
        )
        .unwrap();
        let out = loops_to_recursion(unit.function("h").unwrap());
        for f in &out {
            assert!(!block_has_loop(&f.body), "{} still has a loop", f.name);
        }
        // inner loop (loop0) functions plus outer loop (loop1) functions
        assert!(out.iter().any(|f| f.name.starts_with("__rv_h_loop0_")));
        assert!(out.iter().any(|f| f.name.starts_with("__rv_h_loop1_")));
    }
}
