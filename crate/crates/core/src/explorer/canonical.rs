//! Canonical state keys.
//!
//! Binders are encoded by de Bruijn index, parallel components and choice
//! branches are sorted, and minted private names are renumbered in order of
//! first occurrence in the sorted term. Sorting ignores private-name indices,
//! so two configurations that differ only in how their private names were
//! numbered get the same key.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::semantics::Config;
use crate::syntax::{DelimKind, Expr, Name, Pattern, Term, Value};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Fresh {
    /// Private names rendered without their index.
    Blind,
    Literal,
}

struct Encoder<'a> {
    env: &'a mut Vec<Name>,
    fresh: Fresh,
    out: String,
}

impl Encoder<'_> {
    fn name(&mut self, n: &Name) {
        if let Some(pos) = self.env.iter().rposition(|b| b == n) {
            write!(self.out, "^{}", self.env.len() - 1 - pos).unwrap();
        } else if n.is_fresh() && self.fresh == Fresh::Blind {
            write!(self.out, "?{}", n.base()).unwrap();
        } else {
            self.out.push_str(n.as_str());
        }
    }

    fn value(&mut self, v: &Value) {
        match v {
            Value::Int(i) => write!(self.out, "i{}", i).unwrap(),
            Value::Bool(b) => self.out.push(if *b { 't' } else { 'f' }),
            Value::Name(n) => {
                self.out.push('n');
                self.name(n);
            }
        }
    }

    fn expr(&mut self, e: &Expr) {
        match e {
            Expr::Lit(v) => self.value(v),
            Expr::Var(x) => {
                self.out.push('v');
                self.name(x);
            }
            Expr::Gt(a, b) => {
                self.out.push_str("g(");
                self.expr(a);
                self.out.push(',');
                self.expr(b);
                self.out.push(')');
            }
        }
    }

    fn exprs(&mut self, es: &[Expr]) {
        self.out.push('<');
        for (i, e) in es.iter().enumerate() {
            if i > 0 {
                self.out.push(',');
            }
            self.expr(e);
        }
        self.out.push('>');
    }

    fn term(&mut self, t: &Term) {
        match t {
            Term::Nil => self.out.push('0'),
            Term::Kill(k) => {
                self.out.push_str("K(");
                self.name(k);
                self.out.push(')');
            }
            Term::Invoke {
                partner,
                operation,
                args,
            } => {
                self.out.push_str("I(");
                self.name(partner);
                self.out.push('.');
                self.name(operation);
                self.exprs(args);
                self.out.push(')');
            }
            Term::Receive {
                partner,
                operation,
                params,
                continuation,
            } => {
                self.out.push_str("R(");
                self.name(partner);
                self.out.push('.');
                self.name(operation);
                self.out.push('<');
                for (i, p) in params.iter().enumerate() {
                    if i > 0 {
                        self.out.push(',');
                    }
                    match p {
                        Pattern::BindVar(x) => {
                            self.out.push('b');
                            self.name(x);
                        }
                        Pattern::MatchVal(v) => self.value(v),
                    }
                }
                self.out.push('>');
                self.term(continuation);
                self.out.push(')');
            }
            Term::Parallel(ts) | Term::Choice(ts) => {
                self.out.push_str(if matches!(t, Term::Parallel(_)) { "P(" } else { "C(" });
                for (i, c) in ts.iter().enumerate() {
                    if i > 0 {
                        self.out.push(';');
                    }
                    self.term(c);
                }
                self.out.push(')');
            }
            Term::Delim { bound, kind, body } => {
                self.out.push_str(match kind {
                    DelimKind::Var => "Dv(",
                    DelimKind::Name => "Dn(",
                    DelimKind::Kill => "Dk(",
                });
                self.env.push(bound.clone());
                self.term(body);
                self.env.pop();
                self.out.push(')');
            }
            Term::Protect(b) => {
                self.out.push_str("S(");
                self.term(b);
                self.out.push(')');
            }
            Term::Replicate(b) => {
                self.out.push_str("*(");
                self.term(b);
                self.out.push(')');
            }
            Term::Call { definition, args } => {
                self.out.push_str("F(");
                self.out.push_str(definition.as_str());
                self.exprs(args);
                self.out.push(')');
            }
        }
    }
}

fn encode(t: &Term, env: &mut Vec<Name>, fresh: Fresh) -> String {
    let mut enc = Encoder {
        env,
        fresh,
        out: String::new(),
    };
    enc.term(t);
    enc.out
}

/// Sorts parallel components and choice branches bottom-up.
fn sort_term(t: &Term, env: &mut Vec<Name>) -> Term {
    match t {
        Term::Parallel(ts) | Term::Choice(ts) => {
            let mut keyed: Vec<(String, Term)> = ts
                .iter()
                .map(|c| {
                    let c = sort_term(c, env);
                    (encode(&c, env, Fresh::Blind), c)
                })
                .collect();
            keyed.sort_by(|a, b| a.0.cmp(&b.0));
            let items = keyed.into_iter().map(|(_, c)| c).collect();
            if matches!(t, Term::Parallel(_)) {
                Term::Parallel(items)
            } else {
                Term::Choice(items)
            }
        }
        Term::Receive {
            partner,
            operation,
            params,
            continuation,
        } => Term::Receive {
            partner: partner.clone(),
            operation: operation.clone(),
            params: params.clone(),
            continuation: Box::new(sort_term(continuation, env)),
        },
        Term::Delim { bound, kind, body } => {
            env.push(bound.clone());
            let body = sort_term(body, env);
            env.pop();
            Term::Delim {
                bound: bound.clone(),
                kind: *kind,
                body: Box::new(body),
            }
        }
        Term::Protect(b) => Term::Protect(Box::new(sort_term(b, env))),
        Term::Replicate(b) => Term::Replicate(Box::new(sort_term(b, env))),
        _ => t.clone(),
    }
}

struct Renumber {
    map: BTreeMap<Name, Name>,
}

impl Renumber {
    fn name(&mut self, n: &Name) -> Name {
        if !n.is_fresh() {
            return n.clone();
        }
        let next = self.map.len();
        self.map
            .entry(n.clone())
            .or_insert_with(|| Name::fresh(n.base(), next))
            .clone()
    }

    fn value(&mut self, v: &Value) -> Value {
        match v {
            Value::Name(n) => Value::Name(self.name(n)),
            other => other.clone(),
        }
    }

    fn expr(&mut self, e: &Expr) -> Expr {
        match e {
            Expr::Lit(v) => Expr::Lit(self.value(v)),
            Expr::Var(_) => e.clone(),
            Expr::Gt(a, b) => {
                let a = self.expr(a);
                Expr::gt(a, self.expr(b))
            }
        }
    }

    fn term(&mut self, t: &Term) -> Term {
        match t {
            Term::Nil => Term::Nil,
            Term::Kill(k) => Term::Kill(self.name(k)),
            Term::Invoke {
                partner,
                operation,
                args,
            } => Term::Invoke {
                partner: self.name(partner),
                operation: self.name(operation),
                args: args.iter().map(|a| self.expr(a)).collect(),
            },
            Term::Receive {
                partner,
                operation,
                params,
                continuation,
            } => Term::Receive {
                partner: self.name(partner),
                operation: self.name(operation),
                params: params
                    .iter()
                    .map(|p| match p {
                        Pattern::MatchVal(v) => Pattern::MatchVal(self.value(v)),
                        other => other.clone(),
                    })
                    .collect(),
                continuation: Box::new(self.term(continuation)),
            },
            Term::Parallel(ts) => Term::Parallel(ts.iter().map(|c| self.term(c)).collect()),
            Term::Choice(ts) => Term::Choice(ts.iter().map(|c| self.term(c)).collect()),
            Term::Delim { bound, kind, body } => Term::Delim {
                bound: bound.clone(),
                kind: *kind,
                body: Box::new(self.term(body)),
            },
            Term::Protect(b) => Term::Protect(Box::new(self.term(b))),
            Term::Replicate(b) => Term::Replicate(Box::new(self.term(b))),
            Term::Call { definition, args } => Term::Call {
                definition: definition.clone(),
                args: args.iter().map(|a| self.expr(a)).collect(),
            },
        }
    }
}

/// Canonical key and representative of a configuration.
pub fn canonicalize(config: &Config) -> (String, Config) {
    let sorted = sort_term(&config.term, &mut Vec::new());
    let mut renumber = Renumber { map: BTreeMap::new() };
    let term = renumber.term(&sorted);
    let key = encode(&term, &mut Vec::new(), Fresh::Literal);
    let canonical = Config {
        model: config.model.clone(),
        term,
        fresh_counter: renumber.map.len(),
    };
    (key, canonical)
}
