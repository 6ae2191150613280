//! Exhaustive pair-enumeration reference for one-step transitions of
//! replication-free, call-free terms.
//!
//! Every active invoke is paired with every active receive by address; a
//! pair fires when endpoints coincide and patterns match, unless another
//! receive matches the same invoke with more literal positions. Kills erase
//! the unprotected part of their scope.

use cows_adapt::explorer::canonicalize;
use cows_adapt::semantics::Config;
use cows_adapt::syntax::{DelimKind, Expr, Name, Pattern, Term, Value};

type Addr = Vec<usize>;

struct Active {
    addr: Addr,
    /// The site is a branch of the choice at `addr[..addr.len()-1]`.
    in_choice: bool,
    binders: Vec<(Addr, Name, DelimKind)>,
}

fn actives(t: &Term, addr: &mut Addr, binders: &mut Vec<(Addr, Name, DelimKind)>, out: &mut Vec<Active>) {
    match t {
        Term::Invoke { .. } | Term::Receive { .. } | Term::Kill(_) => out.push(Active {
            addr: addr.clone(),
            in_choice: false,
            binders: binders.clone(),
        }),
        Term::Choice(bs) => {
            for i in 0..bs.len() {
                addr.push(i);
                out.push(Active {
                    addr: addr.clone(),
                    in_choice: true,
                    binders: binders.clone(),
                });
                addr.pop();
            }
        }
        Term::Parallel(ts) => {
            for (i, c) in ts.iter().enumerate() {
                addr.push(i);
                actives(c, addr, binders, out);
                addr.pop();
            }
        }
        Term::Delim { bound, kind, body } => {
            binders.push((addr.clone(), bound.clone(), *kind));
            addr.push(0);
            actives(body, addr, binders, out);
            addr.pop();
            binders.pop();
        }
        Term::Protect(b) => {
            addr.push(0);
            actives(b, addr, binders, out);
            addr.pop();
        }
        Term::Nil => {}
        Term::Replicate(_) | Term::Call { .. } => panic!("oracle handles replication-free, call-free terms"),
    }
}

fn at<'a>(t: &'a Term, addr: &[usize]) -> &'a Term {
    match addr.split_first() {
        None => t,
        Some((&i, rest)) => match t {
            Term::Parallel(ts) | Term::Choice(ts) => at(&ts[i], rest),
            Term::Delim { body, .. } => at(body, rest),
            Term::Protect(b) => at(b, rest),
            _ => unreachable!(),
        },
    }
}

fn replace(t: &Term, addr: &[usize], new: Term) -> Term {
    match addr.split_first() {
        None => new,
        Some((&i, rest)) => match t {
            Term::Parallel(ts) => {
                let mut ts = ts.clone();
                ts[i] = replace(&ts[i], rest, new);
                Term::Parallel(ts)
            }
            Term::Choice(ts) => {
                let mut ts = ts.clone();
                ts[i] = replace(&ts[i], rest, new);
                Term::Choice(ts)
            }
            Term::Delim { bound, kind, body } => Term::Delim {
                bound: bound.clone(),
                kind: *kind,
                body: Box::new(replace(body, rest, new)),
            },
            Term::Protect(b) => Term::Protect(Box::new(replace(b, rest, new))),
            _ => unreachable!(),
        },
    }
}

fn value_of(e: &Expr) -> Option<Value> {
    match e {
        Expr::Lit(v) => Some(v.clone()),
        Expr::Var(_) => None,
        Expr::Gt(a, b) => match (value_of(a)?, value_of(b)?) {
            (Value::Int(x), Value::Int(y)) => Some(Value::Bool(x > y)),
            _ => None,
        },
    }
}

/// Replaces free occurrences of variable `x` by `v`; `None` if `x` is used
/// as an endpoint and `v` is not a name.
fn subst(t: &Term, x: &Name, v: &Value) -> Option<Term> {
    let ep = |n: &Name| -> Option<Name> {
        if n != x {
            return Some(n.clone());
        }
        match v {
            Value::Name(m) => Some(m.clone()),
            _ => None,
        }
    };
    let ex = |e: &Expr| -> Expr { subst_expr(e, x, v) };
    Some(match t {
        Term::Nil | Term::Kill(_) => t.clone(),
        Term::Invoke {
            partner,
            operation,
            args,
        } => Term::Invoke {
            partner: ep(partner)?,
            operation: ep(operation)?,
            args: args.iter().map(ex).collect(),
        },
        Term::Receive {
            partner,
            operation,
            params,
            continuation,
        } => Term::Receive {
            partner: ep(partner)?,
            operation: ep(operation)?,
            params: params
                .iter()
                .map(|p| match p {
                    Pattern::BindVar(y) if y == x => Pattern::MatchVal(v.clone()),
                    other => other.clone(),
                })
                .collect(),
            continuation: Box::new(subst(continuation, x, v)?),
        },
        Term::Parallel(ts) => Term::Parallel(ts.iter().map(|c| subst(c, x, v)).collect::<Option<_>>()?),
        Term::Choice(ts) => Term::Choice(ts.iter().map(|c| subst(c, x, v)).collect::<Option<_>>()?),
        Term::Delim { bound, .. } if bound == x => t.clone(),
        Term::Delim { bound, kind, body } => Term::Delim {
            bound: bound.clone(),
            kind: *kind,
            body: Box::new(subst(body, x, v)?),
        },
        Term::Protect(b) => Term::Protect(Box::new(subst(b, x, v)?)),
        Term::Replicate(b) => Term::Replicate(Box::new(subst(b, x, v)?)),
        Term::Call { definition, args } => Term::Call {
            definition: definition.clone(),
            args: args.iter().map(ex).collect(),
        },
    })
}

fn subst_expr(e: &Expr, x: &Name, v: &Value) -> Expr {
    match e {
        Expr::Var(y) if y == x => Expr::Lit(v.clone()),
        Expr::Gt(a, b) => Expr::gt(subst_expr(a, x, v), subst_expr(b, x, v)),
        other => other.clone(),
    }
}

fn erase(t: &Term) -> Term {
    match t {
        Term::Parallel(ts) => Term::Parallel(ts.iter().map(erase).collect()),
        Term::Delim { bound, kind, body } => Term::Delim {
            bound: bound.clone(),
            kind: *kind,
            body: Box::new(erase(body)),
        },
        Term::Protect(b) => (**b).clone(),
        _ => Term::Nil,
    }
}

fn open_var(binders: &[(Addr, Name, DelimKind)], n: &Name) -> bool {
    binders.iter().rev().find(|(_, b, _)| b == n).is_some_and(|(_, _, k)| *k == DelimKind::Var)
}

struct Match {
    bindings: Vec<(Name, Value)>,
    literals: usize,
}

fn try_match(params: &[Pattern], values: &[Value]) -> Option<Match> {
    if params.len() != values.len() {
        return None;
    }
    let mut m = Match {
        bindings: Vec::new(),
        literals: 0,
    };
    for (p, v) in params.iter().zip(values) {
        match p {
            Pattern::MatchVal(w) => {
                if w != v {
                    return None;
                }
                m.literals += 1;
            }
            Pattern::BindVar(x) => {
                if m.bindings.iter().any(|(y, _)| y == x) {
                    return None;
                }
                m.bindings.push((x.clone(), v.clone()));
            }
        }
    }
    Some(m)
}

/// Sorted `(label, canonical successor key)` pairs.
pub fn oracle_transitions(c: &Config) -> Vec<(String, String)> {
    let t = &c.term;
    let mut sites = Vec::new();
    actives(t, &mut Vec::new(), &mut Vec::new(), &mut sites);
    let mut out = Vec::new();
    let mut emit = |label: String, term: Term| {
        let next = c.successor(term);
        out.push((label, canonicalize(&next).0));
    };

    for inv in &sites {
        let Term::Invoke {
            partner,
            operation,
            args,
        } = at(t, &inv.addr)
        else {
            continue;
        };
        if open_var(&inv.binders, partner) || open_var(&inv.binders, operation) {
            continue;
        }
        let Some(values) = args.iter().map(value_of).collect::<Option<Vec<_>>>() else {
            continue;
        };
        let mut matching = Vec::new();
        for rcv in &sites {
            let Term::Receive {
                partner: rp,
                operation: ro,
                params,
                continuation,
            } = at(t, &rcv.addr)
            else {
                continue;
            };
            if rp != partner || ro != operation || open_var(&rcv.binders, rp) || open_var(&rcv.binders, ro) {
                continue;
            }
            if let Some(m) = try_match(params, &values) {
                matching.push((rcv, continuation, m));
            }
        }
        let best = matching.iter().map(|(_, _, m)| m.literals).max().unwrap_or(0);
        'pairs: for (rcv, continuation, m) in matching.iter().filter(|(_, _, m)| m.literals == best) {
            let mut cont: Term = Term::clone(continuation);
            let mut delims: Vec<(Addr, Name, Value)> = Vec::new();
            for (x, v) in &m.bindings {
                match rcv.binders.iter().rev().find(|(_, b, _)| b == x) {
                    Some((a, _, DelimKind::Var)) => delims.push((a.clone(), x.clone(), v.clone())),
                    _ => match subst(&cont, x, v) {
                        Some(c2) => cont = c2,
                        None => continue 'pairs,
                    },
                }
            }
            let rcv_addr = if rcv.in_choice {
                rcv.addr[..rcv.addr.len() - 1].to_vec()
            } else {
                rcv.addr.clone()
            };
            let mut next = replace(t, &rcv_addr, cont);
            next = replace(&next, &inv.addr, Term::Nil);
            delims.sort_by_key(|(a, _, _)| std::cmp::Reverse(a.len()));
            for (a, x, v) in delims {
                let Term::Delim { body, .. } = at(&next, &a) else { unreachable!() };
                match subst(body, &x, &v) {
                    Some(b) => next = replace(&next, &a, b),
                    None => continue 'pairs,
                }
            }
            let values: Vec<String> = values.iter().map(|v| v.to_string()).collect();
            emit(format!("comm:{}.{}<{}>", partner, operation, values.join(",")), next);
        }
    }

    for k in &sites {
        let Term::Kill(label) = at(t, &k.addr) else { continue };
        let next = replace(t, &k.addr, Term::Nil);
        let next = match k.binders.iter().rev().find(|(_, b, _)| b == label) {
            Some((a, _, DelimKind::Kill)) => {
                let Term::Delim { bound, kind, body } = at(&next, a) else { unreachable!() };
                let halted = Term::Delim {
                    bound: bound.clone(),
                    kind: *kind,
                    body: Box::new(erase(body)),
                };
                replace(&next, a, halted)
            }
            _ => erase(&next),
        };
        emit(format!("kill:{}", label), next);
    }
    out.sort();
    out
}
