//! Call-graph construction and the textual ordering of recursive call sites.

use super::ast::*;
use super::FrontendError;

/// One call occurrence. For the list returned by [`recursive_call_sites`],
/// `site_index` is the 0-based position among the function's self-recursive
/// calls in textual order; these indices are dense and survive pretty-print
/// round trips because they are derived from syntax order alone.
#[derive(Debug, Clone)]
pub struct CallSite {
    pub site_index: usize,
    pub callee: Ident,
    pub args: Vec<Expr>,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub struct CallGraph {
    /// Function names in unit order.
    pub nodes: Vec<Ident>,
    /// caller -> callee with the call occurrences, textual order.
    pub edges: Vec<(Ident, Ident, Vec<CallSite>)>,
    /// Bottom-up topological order over non-self edges (callees first).
    pub bottom_up: Vec<Ident>,
}

impl CallGraph {
    pub fn callees(&self, caller: &str) -> impl Iterator<Item = &str> {
        self.edges
            .iter()
            .filter(move |(c, _, _)| c == caller)
            .map(|(_, callee, _)| callee.as_str())
    }

    pub fn is_self_recursive(&self, name: &str) -> bool {
        self.edges
            .iter()
            .any(|(c, callee, _)| c == name && callee == name)
    }
}

/// Walk all call expressions of a function in textual order.
pub fn visit_calls<'a>(f: &'a FunctionDef, visit: &mut dyn FnMut(&'a Expr)) {
    fn walk_block<'a>(b: &'a Block, visit: &mut dyn FnMut(&'a Expr)) {
        for s in &b.stmts {
            walk_stmt(s, visit);
        }
    }
    fn walk_stmt<'a>(s: &'a Stmt, visit: &mut dyn FnMut(&'a Expr)) {
        match s {
            Stmt::Decl { init, .. } => {
                if let Some(e) = init {
                    walk_expr(e, visit);
                }
            }
            Stmt::Assign { value, .. } => walk_expr(value, visit),
            Stmt::If {
                cond,
                then_branch,
                else_branch,
                ..
            } => {
                walk_expr(cond, visit);
                walk_block(then_branch, visit);
                if let Some(e) = else_branch {
                    walk_block(e, visit);
                }
            }
            Stmt::While { cond, body, .. } => {
                walk_expr(cond, visit);
                walk_block(body, visit);
            }
            Stmt::Return { value, .. } => walk_expr(value, visit),
            Stmt::Assume { cond, .. } => walk_expr(cond, visit),
            Stmt::Expr { expr, .. } => walk_expr(expr, visit),
            Stmt::SetFlagIf { cond } => walk_expr(cond, visit),
            Stmt::Record {
                depth, site, args, ..
            } => {
                walk_expr(depth, visit);
                walk_expr(site, visit);
                for a in args {
                    walk_expr(a, visit);
                }
            }
        }
    }
    fn walk_expr<'a>(e: &'a Expr, visit: &mut dyn FnMut(&'a Expr)) {
        match e {
            Expr::Int(_) | Expr::Var(_) | Expr::Nondet { .. } => {}
            Expr::Unary { expr, .. } => walk_expr(expr, visit),
            Expr::Binary { lhs, rhs, .. } => {
                walk_expr(lhs, visit);
                walk_expr(rhs, visit);
            }
            Expr::Call { args, .. } => {
                visit(e);
                for a in args {
                    walk_expr(a, visit);
                }
            }
        }
    }
    walk_block(&f.body, visit);
}

/// Self-recursive call sites of `f` in textual order, with dense indices.
pub fn recursive_call_sites(f: &FunctionDef) -> Vec<CallSite> {
    let mut sites = Vec::new();
    visit_calls(f, &mut |e| {
        if let Expr::Call { callee, args, span } = e {
            if callee == &f.name {
                sites.push(CallSite {
                    site_index: sites.len(),
                    callee: callee.clone(),
                    args: args.clone(),
                    span: *span,
                });
            }
        }
    });
    sites
}

/// Build the call graph of a unit. Fails with
/// [`FrontendError::MutualRecursionUnsupported`] on any call cycle longer
/// than a self-loop.
pub fn call_graph(unit: &SourceUnit) -> Result<CallGraph, FrontendError> {
    let nodes: Vec<Ident> = unit.functions.iter().map(|f| f.name.clone()).collect();
    let mut edges: Vec<(Ident, Ident, Vec<CallSite>)> = Vec::new();

    for f in &unit.functions {
        let mut per_callee: Vec<(Ident, Vec<CallSite>)> = Vec::new();
        visit_calls(f, &mut |e| {
            if let Expr::Call { callee, args, span } = e {
                if unit.function(callee).is_none() {
                    return; // UF symbols are not graph nodes
                }
                let entry = match per_callee.iter_mut().find(|(c, _)| c == callee) {
                    Some(entry) => entry,
                    None => {
                        per_callee.push((callee.clone(), Vec::new()));
                        per_callee.last_mut().unwrap()
                    }
                };
                let idx = entry.1.len();
                entry.1.push(CallSite {
                    site_index: idx,
                    callee: callee.clone(),
                    args: args.clone(),
                    span: *span,
                });
            }
        });
        for (callee, sites) in per_callee {
            edges.push((f.name.clone(), callee, sites));
        }
    }

    // Cycle check and bottom-up order over non-self edges.
    let index_of = |name: &str| nodes.iter().position(|n| n == name);
    let n = nodes.len();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (caller, callee, _) in &edges {
        if caller != callee {
            let (ci, ce) = (index_of(caller).unwrap(), index_of(callee).unwrap());
            if !succ[ci].contains(&ce) {
                succ[ci].push(ce);
            }
        }
    }

    // Iterative DFS with an explicit color array; gray-hit means a cycle.
    #[derive(Clone, Copy, PartialEq)]
    enum Color {
        White,
        Gray,
        Black,
    }
    let mut color = vec![Color::White; n];
    let mut order: Vec<usize> = Vec::new();
    for start in 0..n {
        if color[start] != Color::White {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        color[start] = Color::Gray;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if *next < succ[node].len() {
                let child = succ[node][*next];
                *next += 1;
                match color[child] {
                    Color::White => {
                        color[child] = Color::Gray;
                        stack.push((child, 0));
                    }
                    Color::Gray => {
                        let mut cycle: Vec<Ident> =
                            stack.iter().map(|(i, _)| nodes[*i].clone()).collect();
                        cycle.push(nodes[child].clone());
                        return Err(FrontendError::MutualRecursionUnsupported { cycle });
                    }
                    Color::Black => {}
                }
            } else {
                color[node] = Color::Black;
                order.push(node);
                stack.pop();
            }
        }
    }

    let bottom_up = order.into_iter().map(|i| nodes[i].clone()).collect();
    Ok(CallGraph {
        nodes,
        edges,
        bottom_up,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parser::parse;

    #[test]
    fn fig4_call_sites() {
        let src = "\
int f1(int n){ if (n < 1) return 0; if (n <= 2) return 1; return f1(n-1) + f1(n-2); }
int f2(int n){ if (n < 1) return 0; if (n <= 2) return 1; return f2(n-2) + f2(n-2) + f2(n-3); }";
        let unit = parse(src).unwrap();
        let s1 = recursive_call_sites(unit.function("f1").unwrap());
        assert_eq!(s1.len(), 2);
        let s2 = recursive_call_sites(unit.function("f2").unwrap());
        assert_eq!(s2.len(), 3);
        assert_eq!(s2[2].site_index, 2);
    }

    #[test]
    fn non_recursive_has_no_sites() {
        let unit = parse("int f(int n){ return n; }").unwrap();
        assert!(recursive_call_sites(unit.function("f").unwrap()).is_empty());
    }

    #[test]
    fn bottom_up_order() {
        let src = "int c(int n){return n;} int b(int n){return c(n);} int a(int n){return b(n);}";
        let unit = parse(src).unwrap();
        let cg = call_graph(&unit).unwrap();
        assert_eq!(cg.bottom_up, vec!["c", "b", "a"]);
    }

    #[test]
    fn self_loops_allowed_mutual_rejected() {
        let unit = parse("int main(int n){return f(n);} int f(int n){return f(n-1);}").unwrap();
        let cg = call_graph(&unit).unwrap();
        assert!(cg.is_self_recursive("f"));
        assert!(!cg.is_self_recursive("main"));

        let unit = parse("int f(int n){return g(n);} int g(int n){return f(n);}").unwrap();
        assert!(matches!(
            call_graph(&unit),
            Err(FrontendError::MutualRecursionUnsupported { .. })
        ));
    }
}
