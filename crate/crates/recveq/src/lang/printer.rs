//! Canonical pretty-printer. `parse(print(unit))` is structurally the
//! identity for every parseable unit, and the output formatting is golden-
//! tested so dumped artifacts diff cleanly against the corpus sources.

use std::fmt::Write;

use super::ast::*;

pub fn print_unit(unit: &SourceUnit) -> String {
    let mut out = String::new();
    for uf in &unit.uf_decls {
        let params = vec!["int"; uf.arity].join(", ");
        let _ = writeln!(out, "int {}({});", uf.name, params);
    }
    if !unit.uf_decls.is_empty() && !unit.functions.is_empty() {
        out.push('\n');
    }
    for (i, f) in unit.functions.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&print_function(f));
    }
    out
}

pub fn print_function(f: &FunctionDef) -> String {
    let mut out = String::new();
    let params = f
        .params
        .iter()
        .map(|p| format!("int {p}"))
        .collect::<Vec<_>>()
        .join(", ");
    let _ = writeln!(out, "int {}({}) {{", f.name, params);
    print_block_inner(&mut out, &f.body, 1);
    out.push_str("}\n");
    out
}

fn indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("    ");
    }
}

fn print_block_inner(out: &mut String, block: &Block, level: usize) {
    for stmt in &block.stmts {
        print_stmt(out, stmt, level);
    }
}

/// A statement simple enough to live on the same line as its `if`.
fn is_inline(stmt: &Stmt) -> bool {
    matches!(
        stmt,
        Stmt::Return { .. } | Stmt::Assign { .. } | Stmt::Expr { .. } | Stmt::Assume { .. }
    )
}

fn print_stmt(out: &mut String, stmt: &Stmt, level: usize) {
    indent(out, level);
    match stmt {
        Stmt::Decl { name, init, .. } => match init {
            Some(e) => {
                let _ = writeln!(out, "int {name} = {};", print_expr(e));
            }
            None => {
                let _ = writeln!(out, "int {name};");
            }
        },
        Stmt::Assign { name, value, .. } => {
            let _ = writeln!(out, "{name} = {};", print_expr(value));
        }
        Stmt::Return { value, .. } => {
            let _ = writeln!(out, "return {};", print_expr(value));
        }
        Stmt::Assume { cond, .. } => {
            let _ = writeln!(out, "assume({});", print_expr(cond));
        }
        Stmt::Expr { expr, .. } => {
            let _ = writeln!(out, "{};", print_expr(expr));
        }
        Stmt::If {
            cond,
            then_branch,
            else_branch,
            ..
        } => {
            let inline = else_branch.is_none()
                && then_branch.stmts.len() == 1
                && is_inline(&then_branch.stmts[0]);
            if inline {
                let mut inner = String::new();
                print_stmt(&mut inner, &then_branch.stmts[0], 0);
                let _ = write!(out, "if ({}) {}", print_expr(cond), inner);
            } else {
                let _ = writeln!(out, "if ({}) {{", print_expr(cond));
                print_block_inner(out, then_branch, level + 1);
                indent(out, level);
                match else_branch {
                    None => out.push_str("}\n"),
                    Some(e) => {
                        out.push_str("} else {\n");
                        print_block_inner(out, e, level + 1);
                        indent(out, level);
                        out.push_str("}\n");
                    }
                }
            }
        }
        Stmt::While { cond, body, .. } => {
            let _ = writeln!(out, "while ({}) {{", print_expr(cond));
            print_block_inner(out, body, level + 1);
            indent(out, level);
            out.push_str("}\n");
        }
        Stmt::SetFlagIf { cond } => {
            let _ = writeln!(out, "if ({}) __rv_bc_flag = 1;", print_expr(cond));
        }
        Stmt::Record {
            side,
            depth,
            site,
            args,
        } => {
            let args = args.iter().map(print_expr).collect::<Vec<_>>().join(", ");
            let _ = writeln!(
                out,
                "__rv_record{side}({}, {}, {args});",
                print_expr(depth),
                print_expr(site)
            );
        }
    }
}

/// C precedence levels, higher binds tighter.
fn prec(op: BinOp) -> u8 {
    match op {
        BinOp::Or => 1,
        BinOp::And => 2,
        BinOp::BitAnd => 3,
        BinOp::Eq | BinOp::Ne => 4,
        BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => 5,
        BinOp::Add | BinOp::Sub => 6,
        BinOp::Mul | BinOp::Div | BinOp::Rem => 7,
    }
}

fn op_str(op: BinOp) -> &'static str {
    match op {
        BinOp::Add => "+",
        BinOp::Sub => "-",
        BinOp::Mul => "*",
        BinOp::Div => "/",
        BinOp::Rem => "%",
        BinOp::Eq => "==",
        BinOp::Ne => "!=",
        BinOp::Lt => "<",
        BinOp::Le => "<=",
        BinOp::Gt => ">",
        BinOp::Ge => ">=",
        BinOp::And => "&&",
        BinOp::Or => "||",
        BinOp::BitAnd => "&",
    }
}

pub fn print_expr(expr: &Expr) -> String {
    print_expr_prec(expr, 0)
}

fn print_expr_prec(expr: &Expr, parent: u8) -> String {
    match expr {
        Expr::Int(v) => format!("{v}"),
        Expr::Var(name) => name.clone(),
        Expr::Nondet { width, .. } => {
            if *width == 1 {
                "nondet() /*1-bit*/".into()
            } else {
                "nondet()".into()
            }
        }
        Expr::Call { callee, args, .. } => {
            let args = args
                .iter()
                .map(|a| print_expr_prec(a, 0))
                .collect::<Vec<_>>()
                .join(", ");
            format!("{callee}({args})")
        }
        Expr::Unary { op, expr } => {
            let inner = print_expr_prec(expr, 8);
            match op {
                UnOp::Neg => format!("-{inner}"),
                UnOp::Not => format!("!{inner}"),
            }
        }
        Expr::Binary { op, lhs, rhs } => {
            let p = prec(*op);
            // Left-associative operators: the right child needs parens at
            // equal precedence.
            let l = print_expr_prec(lhs, p);
            let r = print_expr_prec(rhs, p + 1);
            let body = format!("{l} {} {r}", op_str(*op));
            if p < parent {
                format!("({body})")
            } else {
                body
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parser::{parse, parse_with, ParseOptions};

    fn roundtrip(src: &str) {
        let unit = parse_with(
            src,
            ParseOptions {
                allow_instrumentation: true,
            },
        )
        .unwrap();
        let printed = print_unit(&unit);
        let reparsed = parse_with(
            &printed,
            ParseOptions {
                allow_instrumentation: true,
            },
        )
        .unwrap();
        assert_eq!(printed, print_unit(&reparsed), "print/parse must be stable");
    }

    #[test]
    fn golden_fig3() {
        let src = "int sum1(int n){\n   if (n <= 1) return n;\n   return n + sum1(n-1);\n}";
        let unit = parse(src).unwrap();
        let expected = "int sum1(int n) {\n    if (n <= 1) return n;\n    return n + sum1(n - 1);\n}\n";
        assert_eq!(print_unit(&unit), expected);
    }

    #[test]
    fn golden_if_else_block() {
        let src = "int f(int n){ if(n>0){ n = n-1; } else { n = 0; } return n; }";
        let unit = parse(src).unwrap();
        let expected = "int f(int n) {\n    if (n > 0) {\n        n = n - 1;\n    } else {\n        n = 0;\n    }\n    return n;\n}\n";
        assert_eq!(print_unit(&unit), expected);
    }

    #[test]
    fn parens_follow_c_precedence() {
        let src = "int f(int n){return (n & 1) == 0;}";
        let unit = parse(src).unwrap();
        let printed = print_unit(&unit);
        assert!(printed.contains("(n & 1) == 0"), "got: {printed}");
        roundtrip(&printed);
    }

    #[test]
    fn roundtrips() {
        roundtrip("int f(int n, int m){ int a = 3; while(n > 0){ a = a + m; n = n - 1; } return a; }");
        roundtrip("int g(int n){ if (n < 1) return 0; if (n <= 2) return 1; return g(n-1) + g(n-2); }");
        roundtrip("int UF(int);\nint h(int n){ return UF(n) * -2 - -3; }");
        roundtrip("int k(int n){ return !(n == 1) && n % 2 == 0 || n / 2 > 1; }");
    }
}
