//! Binder resolution.
//!
//! The dialect writes every delimitation as `[x]` and every identifier the
//! same way, so the role of a name is decided from context:
//!
//! * `[x#]` is always a private name.
//! * `[x]` scoping a free `kill(x)` is a kill label, otherwise `[x]` used as
//!   a pattern binder is a variable, otherwise it is a private name.
//! * An identifier in an expression or pattern is a variable when its nearest
//!   binder is a variable delimitation or a definition parameter, and a name
//!   literal otherwise.
//!
//! Resolution is idempotent, so it doubles as the normal form for
//! programmatically built models.

use super::ast::{DelimKind, Definition, Expr, Model, Name, Pattern, Term, Value};

/// Resolves every definition and the main term of a model.
pub fn resolve_model(model: Model) -> Model {
    let definitions = model
        .definitions
        .into_iter()
        .map(|(name, def)| {
            let mut scope: Vec<(Name, bool)> = def.params.iter().map(|p| (p.clone(), true)).collect();
            let body = resolve(&def.body, &mut scope);
            (
                name,
                Definition {
                    params: def.params,
                    body,
                },
            )
        })
        .collect();
    let main = resolve(&model.main, &mut Vec::new());
    Model { definitions, main }
}

/// Resolves a term whose free identifiers are all names.
pub fn resolve_term(term: &Term) -> Term {
    resolve(term, &mut Vec::new())
}

fn is_var(scope: &[(Name, bool)], name: &Name) -> bool {
    scope
        .iter()
        .rev()
        .find(|(n, _)| n == name)
        .is_some_and(|(_, var)| *var)
}

fn resolve_expr(e: &Expr, scope: &[(Name, bool)]) -> Expr {
    match e {
        Expr::Var(x) | Expr::Lit(Value::Name(x)) => {
            if is_var(scope, x) {
                Expr::Var(x.clone())
            } else {
                Expr::Lit(Value::Name(x.clone()))
            }
        }
        Expr::Lit(v) => Expr::Lit(v.clone()),
        Expr::Gt(a, b) => Expr::gt(resolve_expr(a, scope), resolve_expr(b, scope)),
    }
}

fn resolve_pattern(p: &Pattern, scope: &[(Name, bool)]) -> Pattern {
    match p {
        Pattern::BindVar(x) | Pattern::MatchVal(Value::Name(x)) => {
            if is_var(scope, x) {
                Pattern::BindVar(x.clone())
            } else {
                Pattern::MatchVal(Value::Name(x.clone()))
            }
        }
        Pattern::MatchVal(v) => Pattern::MatchVal(v.clone()),
    }
}

fn resolve(t: &Term, scope: &mut Vec<(Name, bool)>) -> Term {
    match t {
        Term::Nil => Term::Nil,
        Term::Kill(k) => Term::Kill(k.clone()),
        Term::Invoke {
            partner,
            operation,
            args,
        } => Term::Invoke {
            partner: partner.clone(),
            operation: operation.clone(),
            args: args.iter().map(|a| resolve_expr(a, scope)).collect(),
        },
        Term::Receive {
            partner,
            operation,
            params,
            continuation,
        } => Term::Receive {
            partner: partner.clone(),
            operation: operation.clone(),
            params: params.iter().map(|p| resolve_pattern(p, scope)).collect(),
            continuation: Box::new(resolve(continuation, scope)),
        },
        Term::Parallel(ts) => Term::Parallel(ts.iter().map(|t| resolve(t, scope)).collect()),
        Term::Choice(ts) => Term::Choice(ts.iter().map(|t| resolve(t, scope)).collect()),
        Term::Protect(b) => Term::Protect(Box::new(resolve(b, scope))),
        Term::Replicate(b) => Term::Replicate(Box::new(resolve(b, scope))),
        Term::Call { definition, args } => Term::Call {
            definition: definition.clone(),
            args: args.iter().map(|a| resolve_expr(a, scope)).collect(),
        },
        Term::Delim { bound, kind, body } => {
            let kind = match kind {
                DelimKind::Name => DelimKind::Name,
                _ => infer_kind(bound, body),
            };
            scope.push((bound.clone(), kind == DelimKind::Var));
            let body = resolve(body, scope);
            scope.pop();
            Term::Delim {
                bound: bound.clone(),
                kind,
                body: Box::new(body),
            }
        }
    }
}

/// Kind of a plain `[x]` delimitation from the free uses of `x` in its body.
pub fn infer_kind(bound: &Name, body: &Term) -> DelimKind {
    if occurs_free(bound, body, &mut |t, x| matches!(t, Occurrence::Kill(k) if k == x)) {
        DelimKind::Kill
    } else if occurs_free(bound, body, &mut |t, x| matches!(t, Occurrence::Pattern(k) if k == x)) {
        DelimKind::Var
    } else {
        DelimKind::Name
    }
}

enum Occurrence<'a> {
    Kill(&'a Name),
    Pattern(&'a Name),
}

fn occurs_free(x: &Name, t: &Term, pred: &mut dyn FnMut(Occurrence<'_>, &Name) -> bool) -> bool {
    match t {
        Term::Nil | Term::Invoke { .. } | Term::Call { .. } => false,
        Term::Kill(k) => pred(Occurrence::Kill(k), x),
        Term::Receive {
            params,
            continuation,
            ..
        } => {
            params.iter().any(|p| match p {
                Pattern::BindVar(n) | Pattern::MatchVal(Value::Name(n)) => pred(Occurrence::Pattern(n), x),
                Pattern::MatchVal(_) => false,
            }) || occurs_free(x, continuation, pred)
        }
        Term::Parallel(ts) | Term::Choice(ts) => ts.iter().any(|t| occurs_free(x, t, pred)),
        Term::Protect(b) | Term::Replicate(b) => occurs_free(x, b, pred),
        Term::Delim { bound, body, .. } => bound != x && occurs_free(x, body, pred),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_model;

    fn main_of(src: &str) -> Term {
        parse_model(src).unwrap().main
    }

    #[test]
    fn delimitation_kinds_are_inferred() {
        let t = main_of("let in [k] (kill(k) | [X] a.b?<X>.nil | [n] a.b!<n>) end");
        let Term::Delim { kind, body, .. } = t else { panic!() };
        assert_eq!(kind, DelimKind::Kill);
        let Term::Parallel(items) = *body else { panic!() };
        assert!(matches!(items[1], Term::Delim { kind: DelimKind::Var, .. }));
        match &items[2] {
            Term::Delim {
                kind: DelimKind::Name,
                body,
                ..
            } => assert_eq!(
                **body,
                Term::invoke("a", "b", vec![Expr::Lit(Value::Name(Name::from_static("n")))])
            ),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn private_marker_forces_name_kind() {
        let t = main_of("let in [i#] i.o?<i>.nil end");
        let Term::Delim { kind, body, .. } = t else { panic!() };
        assert_eq!(kind, DelimKind::Name);
        let Term::Receive { params, .. } = *body else { panic!() };
        assert_eq!(params, vec![Pattern::MatchVal(Value::Name(Name::from_static("i")))]);
    }

    #[test]
    fn unused_delimitation_is_a_vacuous_name() {
        let t = main_of("let in [K] a.b!<> end");
        assert!(matches!(t, Term::Delim { kind: DelimKind::Name, .. }));
    }

    #[test]
    fn parameters_are_variables() {
        let m = parse_model("let f(X) = a.b!<X> | c.d?<X>.nil | e.f!<Y> in f(1) end").unwrap();
        let body = &m.definitions[&Name::from_static("f")].body;
        let Term::Parallel(items) = body else { panic!() };
        assert_eq!(items[0], Term::invoke("a", "b", vec![Expr::Var(Name::from_static("X"))]));
        assert!(matches!(&items[1], Term::Receive { params, .. } if params == &vec![Pattern::BindVar(Name::from_static("X"))]));
        assert_eq!(
            items[2],
            Term::invoke("e", "f", vec![Expr::Lit(Value::Name(Name::from_static("Y")))])
        );
    }

    #[test]
    fn resolution_is_idempotent() {
        let m = parse_model(include_str!("../../../../corpus/tollbooth.cows")).unwrap();
        assert_eq!(resolve_model(m.clone()), m);
    }
}
