use std::collections::BTreeMap;

use super::eval::EvalError;
use crate::syntax::{Expr, Name, Pattern, Term, Value};

pub type Bindings = BTreeMap<Name, Value>;

fn subst_endpoint(name: &Name, b: &Bindings) -> Result<Name, EvalError> {
    match b.get(name) {
        None => Ok(name.clone()),
        Some(Value::Name(n)) => Ok(n.clone()),
        Some(other) => Err(EvalError::NotAName {
            var: name.clone(),
            value: other.clone(),
        }),
    }
}

fn subst_expr(e: &Expr, b: &Bindings) -> Expr {
    match e {
        Expr::Var(x) => match b.get(x) {
            Some(v) => Expr::Lit(v.clone()),
            None => e.clone(),
        },
        Expr::Lit(_) => e.clone(),
        Expr::Gt(l, r) => Expr::gt(subst_expr(l, b), subst_expr(r, b)),
    }
}

/// Replaces free variable occurrences by values. Delimitations shadow.
///
/// Fails only when a variable in endpoint position is bound to a non-name.
pub fn apply_substitution(t: &Term, b: &Bindings) -> Result<Term, EvalError> {
    if b.is_empty() {
        return Ok(t.clone());
    }
    Ok(match t {
        Term::Nil | Term::Kill(_) => t.clone(),
        Term::Invoke {
            partner,
            operation,
            args,
        } => Term::Invoke {
            partner: subst_endpoint(partner, b)?,
            operation: subst_endpoint(operation, b)?,
            args: args.iter().map(|a| subst_expr(a, b)).collect(),
        },
        Term::Receive {
            partner,
            operation,
            params,
            continuation,
        } => Term::Receive {
            partner: subst_endpoint(partner, b)?,
            operation: subst_endpoint(operation, b)?,
            params: params
                .iter()
                .map(|p| match p {
                    Pattern::BindVar(x) => match b.get(x) {
                        Some(v) => Pattern::MatchVal(v.clone()),
                        None => p.clone(),
                    },
                    Pattern::MatchVal(_) => p.clone(),
                })
                .collect(),
            continuation: Box::new(apply_substitution(continuation, b)?),
        },
        Term::Parallel(ts) => Term::Parallel(ts.iter().map(|t| apply_substitution(t, b)).collect::<Result<_, _>>()?),
        Term::Choice(ts) => Term::Choice(ts.iter().map(|t| apply_substitution(t, b)).collect::<Result<_, _>>()?),
        Term::Delim { bound, kind, body } => {
            let body = if b.contains_key(bound) {
                let mut inner = b.clone();
                inner.remove(bound);
                apply_substitution(body, &inner)?
            } else {
                apply_substitution(body, b)?
            };
            Term::Delim {
                bound: bound.clone(),
                kind: *kind,
                body: Box::new(body),
            }
        }
        Term::Protect(body) => Term::Protect(Box::new(apply_substitution(body, b)?)),
        Term::Replicate(body) => Term::Replicate(Box::new(apply_substitution(body, b)?)),
        Term::Call { definition, args } => Term::Call {
            definition: definition.clone(),
            args: args.iter().map(|a| subst_expr(a, b)).collect(),
        },
    })
}

fn rename(n: &Name, from: &Name, to: &Name) -> Name {
    if n == from {
        to.clone()
    } else {
        n.clone()
    }
}

fn rename_value(v: &Value, from: &Name, to: &Name) -> Value {
    match v {
        Value::Name(n) => Value::Name(rename(n, from, to)),
        other => other.clone(),
    }
}

fn rename_expr(e: &Expr, from: &Name, to: &Name) -> Expr {
    match e {
        Expr::Lit(v) => Expr::Lit(rename_value(v, from, to)),
        Expr::Var(_) => e.clone(),
        Expr::Gt(l, r) => Expr::gt(rename_expr(l, from, to), rename_expr(r, from, to)),
    }
}

/// Renames every free occurrence of the name `from` (endpoints, literals,
/// kill labels) to `to`.
pub(crate) fn rename_free(t: &Term, from: &Name, to: &Name) -> Term {
    match t {
        Term::Nil => Term::Nil,
        Term::Kill(k) => Term::Kill(rename(k, from, to)),
        Term::Invoke {
            partner,
            operation,
            args,
        } => Term::Invoke {
            partner: rename(partner, from, to),
            operation: rename(operation, from, to),
            args: args.iter().map(|a| rename_expr(a, from, to)).collect(),
        },
        Term::Receive {
            partner,
            operation,
            params,
            continuation,
        } => Term::Receive {
            partner: rename(partner, from, to),
            operation: rename(operation, from, to),
            params: params
                .iter()
                .map(|p| match p {
                    Pattern::MatchVal(v) => Pattern::MatchVal(rename_value(v, from, to)),
                    Pattern::BindVar(_) => p.clone(),
                })
                .collect(),
            continuation: Box::new(rename_free(continuation, from, to)),
        },
        Term::Parallel(ts) => Term::Parallel(ts.iter().map(|t| rename_free(t, from, to)).collect()),
        Term::Choice(ts) => Term::Choice(ts.iter().map(|t| rename_free(t, from, to)).collect()),
        Term::Delim { bound, .. } if bound == from => t.clone(),
        Term::Delim { bound, kind, body } => Term::Delim {
            bound: bound.clone(),
            kind: *kind,
            body: Box::new(rename_free(body, from, to)),
        },
        Term::Protect(b) => Term::Protect(Box::new(rename_free(b, from, to))),
        Term::Replicate(b) => Term::Replicate(Box::new(rename_free(b, from, to))),
        Term::Call { definition, args } => Term::Call {
            definition: definition.clone(),
            args: args.iter().map(|a| rename_expr(a, from, to)).collect(),
        },
    }
}

fn expr_mentions(e: &Expr, x: &Name) -> bool {
    match e {
        Expr::Lit(Value::Name(n)) | Expr::Var(n) => n == x,
        Expr::Lit(_) => false,
        Expr::Gt(l, r) => expr_mentions(l, x) || expr_mentions(r, x),
    }
}

/// Whether `x` occurs free in `t` in any role.
pub(crate) fn occurs_free(x: &Name, t: &Term) -> bool {
    match t {
        Term::Nil => false,
        Term::Kill(k) => k == x,
        Term::Invoke {
            partner,
            operation,
            args,
        } => partner == x || operation == x || args.iter().any(|a| expr_mentions(a, x)),
        Term::Receive {
            partner,
            operation,
            params,
            continuation,
        } => {
            partner == x
                || operation == x
                || params.iter().any(|p| match p {
                    Pattern::BindVar(n) | Pattern::MatchVal(Value::Name(n)) => n == x,
                    Pattern::MatchVal(_) => false,
                })
                || occurs_free(x, continuation)
        }
        Term::Parallel(ts) | Term::Choice(ts) => ts.iter().any(|t| occurs_free(x, t)),
        Term::Delim { bound, body, .. } => bound != x && occurs_free(x, body),
        Term::Protect(b) | Term::Replicate(b) => occurs_free(x, b),
        Term::Call { args, .. } => args.iter().any(|a| expr_mentions(a, x)),
    }
}
