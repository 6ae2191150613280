//! One-step successors of a configuration.
//!
//! Active prefixes are located by a path from the root. A transition is
//! built by rewriting the term along the paths of the participating
//! prefixes: consumed prefixes are replaced, variable delimitations on the
//! receiver's path are discharged by substitution, and kill scopes are
//! halted. A replicated body on a path is spawned as a fresh copy next to the
//! replication.

use std::collections::BTreeMap;

use super::eval::{eval_expr, match_patterns, Env, EvalError, MatchResult};
use super::normalize::{halt, unfold_call};
use super::subst::{apply_substitution, Bindings};
use super::{Config, Label, StuckExpr, Transitions};
use crate::syntax::{DelimKind, Expr, Model, Name, Term, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Step {
    Par(usize),
    Delim,
    Protect,
    /// Into a spawned copy of a replicated body; copies are told apart by index.
    Rep(u8),
    /// Into a replicated body, rewriting it in place.
    RepInPlace,
    Branch(usize),
}

struct Site<'a> {
    path: Vec<Step>,
    node: &'a Term,
    /// Variables delimited above the site, still awaiting a value.
    pending_vars: Vec<Name>,
    /// Delimitations above the site: depth in `path`, name and kind.
    delims: Vec<(usize, Name, DelimKind)>,
}

impl Site<'_> {
    fn endpoint_is_open(&self, partner: &Name, operation: &Name) -> bool {
        self.pending_vars.iter().any(|v| v == partner || v == operation)
    }

    fn nearest_delim(&self, name: &Name) -> Option<(usize, DelimKind)> {
        self.delims
            .iter()
            .rev()
            .find(|(_, n, _)| n == name)
            .map(|(d, _, k)| (*d, *k))
    }
}

fn collect<'a>(
    t: &'a Term,
    path: &mut Vec<Step>,
    pending: &mut Vec<Name>,
    delims: &mut Vec<(usize, Name, DelimKind)>,
    out: &mut Vec<Site<'a>>,
) {
    let mut site = |node: &'a Term, path: &Vec<Step>, pending: &Vec<Name>, delims: &Vec<(usize, Name, DelimKind)>| {
        out.push(Site {
            path: path.clone(),
            node,
            pending_vars: pending.clone(),
            delims: delims.clone(),
        })
    };
    match t {
        Term::Nil => {}
        Term::Invoke { .. } | Term::Receive { .. } | Term::Kill(_) | Term::Call { .. } => {
            site(t, path, pending, delims)
        }
        Term::Choice(branches) => {
            for (i, b) in branches.iter().enumerate() {
                path.push(Step::Branch(i));
                site(b, path, pending, delims);
                path.pop();
            }
        }
        Term::Parallel(ts) => {
            for (i, c) in ts.iter().enumerate() {
                path.push(Step::Par(i));
                collect(c, path, pending, delims, out);
                path.pop();
            }
        }
        Term::Delim { bound, kind, body } => {
            delims.push((path.len(), bound.clone(), *kind));
            if *kind == DelimKind::Var {
                pending.push(bound.clone());
            }
            path.push(Step::Delim);
            collect(body, path, pending, delims, out);
            path.pop();
            if *kind == DelimKind::Var {
                pending.pop();
            }
            delims.pop();
        }
        Term::Protect(b) => {
            path.push(Step::Protect);
            collect(b, path, pending, delims, out);
            path.pop();
        }
        Term::Replicate(b) => {
            path.push(Step::Rep(0));
            collect(b, path, pending, delims, out);
            path.pop();
        }
    }
}

enum NodeOp {
    /// Substitute the value for the delimited variable and drop the delimitation.
    Bind(Name, Value),
    /// Halt the scope (a kill delimitation, or the whole term for a free kill).
    Halt,
}

struct Edit {
    path: Vec<Step>,
    leaf: Term,
    ops: Vec<(usize, NodeOp)>,
}

fn rebuild(model: &Model, t: &Term, edits: &[&Edit], depth: usize) -> Result<Term, EvalError> {
    if let Some(e) = edits.iter().find(|e| e.path.len() == depth) {
        return Ok(e.leaf.clone());
    }
    let step_of = |e: &Edit| e.path[depth];
    let rebuilt = match t {
        Term::Parallel(ts) => {
            let mut out = Vec::with_capacity(ts.len());
            for (i, c) in ts.iter().enumerate() {
                let here: Vec<&Edit> = edits.iter().copied().filter(|e| step_of(e) == Step::Par(i)).collect();
                out.push(if here.is_empty() {
                    c.clone()
                } else {
                    rebuild(model, c, &here, depth + 1)?
                });
            }
            Term::Parallel(out)
        }
        Term::Choice(ts) => {
            let Step::Branch(i) = step_of(edits[0]) else {
                unreachable!("choice entered without a branch step")
            };
            rebuild(model, &ts[i], edits, depth + 1)?
        }
        Term::Delim { bound, kind, body } => {
            let body = rebuild(model, body, edits, depth + 1)?;
            let mut result = Term::Delim {
                bound: bound.clone(),
                kind: *kind,
                body: Box::new(body),
            };
            for e in edits {
                for (d, op) in &e.ops {
                    if *d != depth {
                        continue;
                    }
                    let Term::Delim { bound, kind, body } = result else { unreachable!() };
                    result = match op {
                        NodeOp::Bind(x, v) => {
                            let b: Bindings = [(x.clone(), v.clone())].into();
                            apply_substitution(&body, &b)?
                        }
                        NodeOp::Halt => Term::Delim {
                            bound,
                            kind,
                            body: Box::new(halt(model, &body)),
                        },
                    };
                }
            }
            return Ok(result);
        }
        Term::Protect(b) => Term::Protect(Box::new(rebuild(model, b, edits, depth + 1)?)),
        Term::Replicate(b) => {
            let in_place: Vec<&Edit> = edits.iter().copied().filter(|e| step_of(e) == Step::RepInPlace).collect();
            if !in_place.is_empty() {
                Term::Replicate(Box::new(rebuild(model, b, &in_place, depth + 1)?))
            } else {
                let mut copies = Vec::new();
                for copy in 0..=1u8 {
                    let here: Vec<&Edit> = edits.iter().copied().filter(|e| step_of(e) == Step::Rep(copy)).collect();
                    if !here.is_empty() {
                        copies.push(rebuild(model, b, &here, depth + 1)?);
                    }
                }
                copies.push(t.clone());
                Term::Parallel(copies)
            }
        }
        Term::Nil | Term::Invoke { .. } | Term::Receive { .. } | Term::Kill(_) | Term::Call { .. } => {
            unreachable!("edit path ends below a prefix")
        }
    };
    // Root-level halt for kills without an enclosing kill delimitation.
    if edits
        .iter()
        .any(|e| e.ops.iter().any(|(d, op)| *d == depth && matches!(op, NodeOp::Halt)))
    {
        return Ok(halt(model, &rebuilt));
    }
    Ok(rebuilt)
}

fn eval_args(args: &[Expr]) -> Result<Vec<Value>, EvalError> {
    let env = Env::new();
    args.iter().map(|a| eval_expr(a, &env)).collect()
}

/// Path variants for a communication between two prefixes that may both sit
/// in the same replicated body: either in one copy, or in two distinct copies
/// split at a shared replication.
fn copy_variants(invoke: &[Step], receive: &[Step]) -> Vec<Vec<Step>> {
    let mut variants = vec![receive.to_vec()];
    for (j, (a, b)) in invoke.iter().zip(receive).enumerate() {
        if a != b {
            break;
        }
        if *a == Step::Rep(0) {
            let mut split = receive.to_vec();
            split[j] = Step::Rep(1);
            variants.push(split);
        }
    }
    variants
}

pub(super) fn enabled_transitions(config: &Config) -> Transitions {
    let model = &config.model;
    let mut sites = Vec::new();
    collect(&config.term, &mut Vec::new(), &mut Vec::new(), &mut Vec::new(), &mut sites);

    let mut result = Transitions::default();
    let push = |label: Label, term: Result<Term, EvalError>, culprit: &Term, result: &mut Transitions| match term {
        Ok(term) => result.steps.push((label, config.successor(term))),
        Err(error) => result.diagnostics.push(StuckExpr {
            culprit: culprit.to_string(),
            error,
        }),
    };

    // Communications.
    for inv in &sites {
        let Term::Invoke {
            partner,
            operation,
            args,
        } = inv.node
        else {
            continue;
        };
        if inv.endpoint_is_open(partner, operation) {
            continue;
        }
        let values = match eval_args(args) {
            Ok(v) => v,
            Err(EvalError::Unbound(_)) => continue,
            Err(error) => {
                result.diagnostics.push(StuckExpr {
                    culprit: inv.node.to_string(),
                    error,
                });
                continue;
            }
        };
        let mut candidates: Vec<(&Site, MatchResult)> = Vec::new();
        for rcv in &sites {
            let Term::Receive {
                partner: rp,
                operation: ro,
                params,
                ..
            } = rcv.node
            else {
                continue;
            };
            if rp != partner || ro != operation || rcv.endpoint_is_open(rp, ro) {
                continue;
            }
            if let Some(m) = match_patterns(params, &values) {
                candidates.push((rcv, m));
            }
        }
        let Some(best) = candidates.iter().map(|(_, m)| m.literal_matches).max() else {
            continue;
        };
        for (rcv, m) in candidates.iter().filter(|(_, m)| m.literal_matches == best) {
            let Term::Receive { continuation, .. } = rcv.node else { unreachable!() };
            let label = Label::Comm {
                partner: partner.clone(),
                operation: operation.clone(),
                values: values.clone(),
            };
            let mut ops = Vec::new();
            let mut local = BTreeMap::new();
            for (x, v) in &m.bindings {
                match rcv.nearest_delim(x) {
                    Some((d, DelimKind::Var)) => ops.push((d, NodeOp::Bind(x.clone(), v.clone()))),
                    _ => {
                        local.insert(x.clone(), v.clone());
                    }
                }
            }
            let leaf = match apply_substitution(continuation, &local) {
                Ok(l) => l,
                Err(error) => {
                    result.diagnostics.push(StuckExpr {
                        culprit: rcv.node.to_string(),
                        error,
                    });
                    continue;
                }
            };
            let invoke_edit = Edit {
                path: inv.path.clone(),
                leaf: Term::Nil,
                ops: Vec::new(),
            };
            let variants = copy_variants(&inv.path, &rcv.path);
            let mut receive_edit = Edit {
                path: Vec::new(),
                leaf,
                ops,
            };
            for path in variants {
                receive_edit.path = path;
                let term = rebuild(model, &config.term, &[&invoke_edit, &receive_edit], 0);
                push(label.clone(), term, rcv.node, &mut result);
            }
        }
    }

    // Kills.
    for site in &sites {
        let Term::Kill(k) = site.node else { continue };
        let depth = match site.nearest_delim(k) {
            Some((d, DelimKind::Kill)) => d,
            _ => 0,
        };
        let edit = Edit {
            path: site.path.clone(),
            leaf: Term::Nil,
            ops: vec![(depth, NodeOp::Halt)],
        };
        let term = rebuild(model, &config.term, &[&edit], 0);
        push(Label::Kill(k.clone()), term, site.node, &mut result);
    }

    // Definition unfolding.
    for site in &sites {
        let Term::Call { definition, args } = site.node else { continue };
        let term = unfold_call(model, definition, args).and_then(|body| {
            let path = site
                .path
                .iter()
                .map(|s| if matches!(s, Step::Rep(_)) { Step::RepInPlace } else { *s })
                .collect();
            let edit = Edit {
                path,
                leaf: body,
                ops: Vec::new(),
            };
            rebuild(model, &config.term, &[&edit], 0)
        });
        push(Label::Tau, term, site.node, &mut result);
    }

    result
}

/// Whether some receive on `partner.operation` is exposed in `term`.
pub fn receive_exposed(term: &Term, partner: &Name, operation: &Name) -> bool {
    let mut sites = Vec::new();
    collect(term, &mut Vec::new(), &mut Vec::new(), &mut Vec::new(), &mut sites);
    sites.iter().any(|s| match s.node {
        Term::Receive {
            partner: p,
            operation: o,
            ..
        } => p == partner && o == operation && !s.endpoint_is_open(p, o),
        _ => false,
    })
}
