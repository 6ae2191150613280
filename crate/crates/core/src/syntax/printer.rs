use std::fmt::{self, Write};

use super::ast::{DelimKind, Expr, Model, Pattern, Term, Value};

const PAR: u8 = 0;
const CHOICE: u8 = 1;
const UNARY: u8 = 2;

fn level(t: &Term) -> u8 {
    match t {
        Term::Parallel(ts) if ts.len() > 1 => PAR,
        Term::Choice(ts) if ts.len() > 1 => CHOICE,
        _ => UNARY,
    }
}

fn write_expr(out: &mut String, e: &Expr) {
    match e {
        Expr::Lit(v) => write!(out, "{}", v).unwrap(),
        Expr::Var(x) => write!(out, "{}", x).unwrap(),
        Expr::Gt(a, b) => {
            for (i, side) in [a, b].into_iter().enumerate() {
                if i == 1 {
                    out.push_str(" gt ");
                }
                if matches!(**side, Expr::Gt(..)) {
                    out.push('(');
                    write_expr(out, side);
                    out.push(')');
                } else {
                    write_expr(out, side);
                }
            }
        }
    }
}

fn write_exprs(out: &mut String, es: &[Expr]) {
    for (i, e) in es.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write_expr(out, e);
    }
}

fn write_pattern(out: &mut String, p: &Pattern) {
    match p {
        Pattern::BindVar(x) => write!(out, "{}", x).unwrap(),
        Pattern::MatchVal(v) => write!(out, "{}", v).unwrap(),
    }
}

fn write_term(out: &mut String, t: &Term, min: u8) {
    let wrap = level(t) < min;
    if wrap {
        out.push('(');
    }
    match t {
        Term::Nil => out.push_str("nil"),
        Term::Kill(k) => write!(out, "kill({})", k).unwrap(),
        Term::Invoke {
            partner,
            operation,
            args,
        } => {
            write!(out, "{}.{}!<", partner, operation).unwrap();
            write_exprs(out, args);
            out.push('>');
        }
        Term::Receive {
            partner,
            operation,
            params,
            continuation,
        } => {
            write!(out, "{}.{}?<", partner, operation).unwrap();
            for (i, p) in params.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_pattern(out, p);
            }
            out.push_str(">.");
            write_term(out, continuation, UNARY);
        }
        Term::Parallel(ts) | Term::Choice(ts) if ts.is_empty() => out.push_str("nil"),
        Term::Parallel(ts) if ts.len() == 1 => write_term(out, &ts[0], min),
        Term::Choice(ts) if ts.len() == 1 => write_term(out, &ts[0], min),
        Term::Parallel(ts) => {
            for (i, c) in ts.iter().enumerate() {
                if i > 0 {
                    out.push_str(" | ");
                }
                write_term(out, c, CHOICE);
            }
        }
        Term::Choice(ts) => {
            for (i, c) in ts.iter().enumerate() {
                if i > 0 {
                    out.push_str(" + ");
                }
                write_term(out, c, UNARY);
            }
        }
        Term::Delim { bound, kind, body } => {
            match kind {
                DelimKind::Name => write!(out, "[{}#] ", bound).unwrap(),
                _ => write!(out, "[{}] ", bound).unwrap(),
            }
            write_term(out, body, UNARY);
        }
        Term::Protect(b) => {
            out.push_str("{| ");
            write_term(out, b, PAR);
            out.push_str(" |}");
        }
        Term::Replicate(b) => {
            out.push_str("* ");
            write_term(out, b, UNARY);
        }
        Term::Call { definition, args } => {
            write!(out, "{}(", definition).unwrap();
            write_exprs(out, args);
            out.push(')');
        }
    }
    if wrap {
        out.push(')');
    }
}

/// Single-line rendering of a term in the source dialect.
pub fn term_to_string(t: &Term) -> String {
    let mut out = String::new();
    write_term(&mut out, t, PAR);
    out
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&term_to_string(self))
    }
}

fn write_body(out: &mut String, t: &Term, indent: &str) {
    match t {
        Term::Parallel(ts) if ts.len() > 1 => {
            for (i, c) in ts.iter().enumerate() {
                out.push_str(indent);
                out.push_str(if i == 0 { "  " } else { "| " });
                write_term(out, c, CHOICE);
                out.push('\n');
            }
        }
        _ => {
            out.push_str(indent);
            out.push_str("  ");
            write_term(out, t, PAR);
            out.push('\n');
        }
    }
}

/// Renders a model in the source dialect. The output parses back to an
/// equal model.
pub fn pretty_print(m: &Model) -> String {
    let mut out = String::from("let\n");
    for (name, def) in &m.definitions {
        let params: Vec<String> = def.params.iter().map(|p| p.to_string()).collect();
        writeln!(out, "  {}({}) =", name, params.join(", ")).unwrap();
        write_body(&mut out, &def.body, "   ");
    }
    out.push_str("in\n");
    write_body(&mut out, &m.main, "");
    out.push_str("end\n");
    out
}

fn dump_value(v: &Value) -> String {
    match v {
        Value::Int(i) => format!("int {}", i),
        Value::Bool(b) => format!("bool {}", b),
        Value::Name(n) => format!("name {}", n),
    }
}

fn dump_expr(e: &Expr) -> String {
    match e {
        Expr::Lit(v) => dump_value(v),
        Expr::Var(x) => format!("var {}", x),
        Expr::Gt(a, b) => format!("gt({}, {})", dump_expr(a), dump_expr(b)),
    }
}

fn dump_pattern(p: &Pattern) -> String {
    match p {
        Pattern::BindVar(x) => format!("bind {}", x),
        Pattern::MatchVal(v) => format!("match {}", dump_value(v)),
    }
}

fn dump_term(out: &mut String, t: &Term, depth: usize) {
    let pad = "  ".repeat(depth);
    match t {
        Term::Nil => writeln!(out, "{pad}nil").unwrap(),
        Term::Kill(k) => writeln!(out, "{pad}kill {k}").unwrap(),
        Term::Invoke {
            partner,
            operation,
            args,
        } => {
            let args: Vec<String> = args.iter().map(dump_expr).collect();
            writeln!(out, "{pad}invoke {partner}.{operation} [{}]", args.join(", ")).unwrap();
        }
        Term::Receive {
            partner,
            operation,
            params,
            continuation,
        } => {
            let pats: Vec<String> = params.iter().map(dump_pattern).collect();
            writeln!(out, "{pad}receive {partner}.{operation} [{}]", pats.join(", ")).unwrap();
            dump_term(out, continuation, depth + 1);
        }
        Term::Parallel(ts) => {
            writeln!(out, "{pad}parallel").unwrap();
            ts.iter().for_each(|c| dump_term(out, c, depth + 1));
        }
        Term::Choice(ts) => {
            writeln!(out, "{pad}choice").unwrap();
            ts.iter().for_each(|c| dump_term(out, c, depth + 1));
        }
        Term::Delim { bound, kind, body } => {
            let kind = match kind {
                DelimKind::Var => "var",
                DelimKind::Name => "name",
                DelimKind::Kill => "kill",
            };
            writeln!(out, "{pad}delim {bound} {kind}").unwrap();
            dump_term(out, body, depth + 1);
        }
        Term::Protect(b) => {
            writeln!(out, "{pad}protect").unwrap();
            dump_term(out, b, depth + 1);
        }
        Term::Replicate(b) => {
            writeln!(out, "{pad}replicate").unwrap();
            dump_term(out, b, depth + 1);
        }
        Term::Call { definition, args } => {
            let args: Vec<String> = args.iter().map(dump_expr).collect();
            writeln!(out, "{pad}call {definition} [{}]", args.join(", ")).unwrap();
        }
    }
}

/// Deterministic, indentation-structured dump of a model's syntax tree.
pub fn dump_ast(m: &Model) -> String {
    let mut out = String::from("model\n");
    for (name, def) in &m.definitions {
        let params: Vec<String> = def.params.iter().map(|p| p.to_string()).collect();
        writeln!(out, "  definition {}({})", name, params.join(", ")).unwrap();
        dump_term(&mut out, &def.body, 2);
    }
    out.push_str("  main\n");
    dump_term(&mut out, &m.main, 2);
    out
}
