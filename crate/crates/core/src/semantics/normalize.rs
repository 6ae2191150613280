//! Structural-congruence rewriting applied to every reachable term.

use super::eval::{eval_expr, Env, EvalError};
use super::subst::{apply_substitution, occurs_free, rename_free, Bindings};
use crate::syntax::{DelimKind, Model, Name, Term};

/// Upper bound on definition unfoldings in one closure step.
const UNFOLD_BUDGET: usize = 10_000;
/// Upper bound on calls unfolded inside the body of another unfolding.
const UNFOLD_NESTING: usize = 64;

/// Drops `nil` components, flattens nested parallels and removes
/// delimitations whose name no longer occurs.
pub fn simplify(t: &Term) -> Term {
    match t {
        Term::Nil | Term::Invoke { .. } | Term::Kill(_) | Term::Call { .. } => t.clone(),
        Term::Receive {
            partner,
            operation,
            params,
            continuation,
        } => Term::Receive {
            partner: partner.clone(),
            operation: operation.clone(),
            params: params.clone(),
            continuation: Box::new(simplify(continuation)),
        },
        Term::Parallel(ts) => {
            let mut flat = Vec::with_capacity(ts.len());
            for c in ts {
                match simplify(c) {
                    Term::Nil => {}
                    Term::Parallel(inner) => flat.extend(inner),
                    other => flat.push(other),
                }
            }
            match flat.len() {
                0 => Term::Nil,
                1 => flat.pop().unwrap(),
                _ => Term::Parallel(flat),
            }
        }
        Term::Choice(ts) => Term::Choice(ts.iter().map(simplify).collect()),
        Term::Delim { bound, kind, body } => {
            let body = simplify(body);
            if body == Term::Nil || !occurs_free(bound, &body) {
                body
            } else {
                Term::Delim {
                    bound: bound.clone(),
                    kind: *kind,
                    body: Box::new(body),
                }
            }
        }
        Term::Protect(b) => match simplify(b) {
            Term::Nil => Term::Nil,
            p @ Term::Protect(_) => p,
            other => Term::Protect(Box::new(other)),
        },
        Term::Replicate(b) => match simplify(b) {
            Term::Nil => Term::Nil,
            other => Term::Replicate(Box::new(other)),
        },
    }
}

/// Replaces every active private-name delimitation by a globally fresh name,
/// numbered from `counter`.
pub fn lift_private(t: &Term, counter: &mut usize) -> Term {
    match t {
        Term::Parallel(ts) => Term::Parallel(ts.iter().map(|c| lift_private(c, counter)).collect()),
        Term::Protect(b) => Term::Protect(Box::new(lift_private(b, counter))),
        Term::Delim {
            bound,
            kind: DelimKind::Name,
            body,
        } => {
            let fresh = Name::fresh(bound.base(), *counter);
            *counter += 1;
            lift_private(&rename_free(body, bound, &fresh), counter)
        }
        Term::Delim { bound, kind, body } => Term::Delim {
            bound: bound.clone(),
            kind: *kind,
            body: Box::new(lift_private(body, counter)),
        },
        _ => t.clone(),
    }
}

/// Body of a definition instantiated with evaluated arguments.
pub fn unfold_call(model: &Model, definition: &Name, args: &[crate::syntax::Expr]) -> Result<Term, EvalError> {
    let def = model
        .definitions
        .get(definition)
        .ok_or_else(|| EvalError::UnboundDefinition(definition.clone()))?;
    if def.params.len() != args.len() {
        return Err(EvalError::Arity {
            name: definition.clone(),
            expected: def.params.len(),
            found: args.len(),
        });
    }
    let env = Env::new();
    let mut bindings = Bindings::new();
    for (p, a) in def.params.iter().zip(args) {
        bindings.insert(p.clone(), eval_expr(a, &env)?);
    }
    apply_substitution(&def.body, &bindings)
}

/// Unfolds every call in an active position, including inside replicated
/// bodies (which are unfolded in place).
pub fn expand_calls(model: &Model, t: &Term) -> Result<Term, EvalError> {
    let mut budget = UNFOLD_BUDGET;
    expand(model, t, &mut budget, 0)
}

fn expand(model: &Model, t: &Term, budget: &mut usize, nesting: usize) -> Result<Term, EvalError> {
    Ok(match t {
        Term::Call { definition, args } => {
            if *budget == 0 || nesting == UNFOLD_NESTING {
                return Err(EvalError::UnguardedRecursion(definition.clone()));
            }
            *budget -= 1;
            let body = unfold_call(model, definition, args)?;
            expand(model, &body, budget, nesting + 1)?
        }
        Term::Parallel(ts) => Term::Parallel(
            ts.iter()
                .map(|c| expand(model, c, budget, nesting))
                .collect::<Result<_, _>>()?,
        ),
        Term::Delim { bound, kind, body } => Term::Delim {
            bound: bound.clone(),
            kind: *kind,
            body: Box::new(expand(model, body, budget, nesting)?),
        },
        Term::Protect(b) => Term::Protect(Box::new(expand(model, b, budget, nesting)?)),
        Term::Replicate(b) => Term::Replicate(Box::new(expand(model, b, budget, nesting)?)),
        _ => t.clone(),
    })
}

/// Effect of a kill on the terms in its scope: everything is erased except
/// protected terms, which survive with their protection removed.
pub fn halt(model: &Model, t: &Term) -> Term {
    match t {
        Term::Nil | Term::Invoke { .. } | Term::Receive { .. } | Term::Choice(_) | Term::Kill(_) => Term::Nil,
        Term::Parallel(ts) => Term::Parallel(ts.iter().map(|c| halt(model, c)).collect()),
        Term::Delim { bound, kind, body } => Term::Delim {
            bound: bound.clone(),
            kind: *kind,
            body: Box::new(halt(model, body)),
        },
        Term::Protect(b) => (**b).clone(),
        Term::Replicate(b) => Term::Replicate(Box::new(halt(model, b))),
        Term::Call { .. } => match expand_calls(model, t) {
            Ok(body) => halt(model, &body),
            Err(_) => Term::Nil,
        },
    }
}
